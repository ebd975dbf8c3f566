#pragma once

#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "absolve/miner.hpp"
#include "absolve/trace.hpp"

namespace absolve {

struct ExecutorConfig {
    // Bound on DFS states visited per abstraction application. When
    // exhausted, successors found so far are returned with `truncated` set.
    std::size_t node_budget = 10000;
};

// One realized application of an abstraction: the end state plus the
// axiom-level witness that reaches it.
struct AbstractApplication {
    ActionInstance action;  // axiom field holds the abstraction id
    std::vector<ActionInstance> witness;
    ExprPtr result;
};

struct ApplyAbstractionResult {
    std::vector<AbstractApplication> applications;
    bool truncated = false;
};

// One axiom of a flattened abstraction. The constraint, when present, is the
// required relative position to the previously applied axiom.
struct FlatStep {
    std::string axiom;
    std::optional<RelPos> constraint;
};

std::vector<FlatStep> flatten(const Abstraction& abs, const Library& library);

// All distinct end states reachable by executing the abstraction's axiom
// sequence from `state`; duplicate end states keep the first witness in DFS
// order. An empty application list means the abstraction does not apply.
ApplyAbstractionResult apply_abstraction(const ExprPtr& state, const Abstraction& abs,
                                         const Library& library, const Domain& domain,
                                         const ExecutorConfig& cfg = {});

// Base action or abstraction application, uniformly.
struct AugmentedAction {
    ActionInstance action;
    std::vector<ActionInstance> witness;  // empty for base actions
    ExprPtr result;
};

// Abstraction applications memoized per (state, abstraction) within one
// search episode; beam search revisits states.
class EpisodeCache {
public:
    const ApplyAbstractionResult* find(const std::string& state_key, const std::string& abs_id) const;
    void store(const std::string& state_key, const std::string& abs_id, ApplyAbstractionResult value);

private:
    std::unordered_map<std::string, ApplyAbstractionResult> map_;
};

std::vector<AugmentedAction> enumerate_augmented(const ExprPtr& state, const Domain& domain,
                                                 const Library& library,
                                                 const ExecutorConfig& cfg = {},
                                                 EpisodeCache* cache = nullptr);

// Replaces every abstract step by its witness, validating the replay.
SolutionTrace expand_solution(const SolutionTrace& trace, const Domain& domain);

// Replays a projected trace in the augmented space via the same constrained
// DFS used for abstractions. On success returns the state after each trace
// element (element_states[0] is the start state).
struct ReplayResult {
    bool ok = false;
    std::vector<ExprPtr> element_states;
    std::vector<ActionInstance> witness;
};

ReplayResult replay_projected(const ExprPtr& problem, const ProjectedTrace& trace,
                              ProjectionKind kind, const Library& library, const Domain& domain,
                              const ExecutorConfig& cfg = {});

}  // namespace absolve
