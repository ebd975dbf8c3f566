#pragma once

#include <optional>
#include <string>
#include <vector>

#include "absolve/trace.hpp"

namespace absolve {

enum class ProjectionKind : std::uint8_t { SeqAbs, RelAbs };

std::string projection_kind_name(ProjectionKind kind);
ProjectionKind projection_kind_from_name(const std::string& name);

// A solution action reduced to what the miner matches on: the element id
// (axiom or abstraction), plus for RelAbs the position relative to the
// previous action. The first action of a trace has no relative position.
struct ProjectedAction {
    std::string element;
    std::optional<RelPos> rel;

    friend bool operator==(const ProjectedAction&, const ProjectedAction&) = default;
};

using ProjectedTrace = std::vector<ProjectedAction>;

struct DatasetEntry {
    std::string problem;
    ProjectedTrace trace;
};

struct Dataset {
    ProjectionKind kind = ProjectionKind::SeqAbs;
    std::vector<std::string> action_space;  // snapshot of A ∪ L at collection time
    std::vector<DatasetEntry> entries;

    std::size_t total_actions() const {
        std::size_t n = 0;
        for (const auto& e : entries) n += e.trace.size();
        return n;
    }
};

// A reusable macro-action: an ordered list of element refs (axioms or other
// abstractions). For RelAbs, relpos[i] links the last axiom of elements[i]
// to the first axiom of elements[i+1].
struct Abstraction {
    std::string id;
    ProjectionKind kind = ProjectionKind::SeqAbs;
    std::vector<std::string> elements;
    std::vector<RelPos> relpos;  // empty for SeqAbs, |elements|-1 for RelAbs
    int round = 0;
    double score = 0.0;

    std::string display() const;
};

class Library {
public:
    Library() = default;

    void add(Abstraction abs);
    bool contains(const std::string& id) const;
    const Abstraction& get(const std::string& id) const;
    const std::vector<Abstraction>& items() const { return items_; }
    std::size_t size() const { return items_.size(); }
    bool empty() const { return items_.empty(); }

private:
    std::vector<Abstraction> items_;
};

class MinerError : public std::runtime_error {
public:
    explicit MinerError(const std::string& what) : std::runtime_error(what) {}
};

// Projection of a concrete solution. Relative positions are computed from
// reported paths; for abstract steps the previous step's last witness axiom
// links to the next step's first witness axiom.
ProjectedTrace project(const SolutionTrace& trace, ProjectionKind kind, const Domain& domain);

// Candidate abstractions: all deduplicated contiguous subsequences of
// length 2..max_len. Candidates carry no id until accepted.
struct Candidate {
    std::vector<std::string> elements;
    std::vector<RelPos> relpos;

    friend bool operator==(const Candidate&, const Candidate&) = default;
};

std::vector<Candidate> get_candidates(const Dataset& data, std::size_t max_len);

// J = (total actions in D/L) * ln |A ∪ L|.
double objective(const Dataset& data, std::size_t action_space_size);

// Leftmost non-overlapping replacement of every match by the abstraction id.
ProjectedTrace rewrite(const ProjectedTrace& trace, const Abstraction& abs);
Dataset rewrite(const Dataset& data, const Abstraction& abs);

std::size_t count_matches(const ProjectedTrace& trace, const Candidate& cand, ProjectionKind kind);
std::size_t count_matches(const Dataset& data, const Candidate& cand);

struct MinerConfig {
    std::size_t max_len = 8;
    // Optional prior preferring shorter abstractions: charges ln(2) per
    // element when scoring a candidate. Off by default (uniform prior).
    bool length_prior = false;
};

struct MinerResult {
    Library library;
    Dataset abstracted;
    // J before mining, then after each accepted abstraction.
    std::vector<double> objective_log;
};

// Greedy library induction: repeatedly accept the candidate with the largest
// strictly positive score S(a) = J(L) - J(L ∪ {a}), rewriting the dataset
// after each acceptance. Ids are "A<n>" starting at next_id.
MinerResult greedy_abstract(const std::vector<std::string>& action_space, const Dataset& data,
                            ProjectionKind kind, const MinerConfig& cfg = {}, int round = 0,
                            std::size_t next_id = 1);

// Recursively expands abstraction tokens back to their element sequences.
ProjectedTrace expand_projected(const ProjectedTrace& trace, const Library& library);
Dataset expand_dataset(const Dataset& data, const Library& library);

}  // namespace absolve
