#include "absolve/miner.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

namespace absolve {

std::string projection_kind_name(ProjectionKind kind) {
    return kind == ProjectionKind::SeqAbs ? "seqabs" : "relabs";
}

ProjectionKind projection_kind_from_name(const std::string& name) {
    if (name == "seqabs") return ProjectionKind::SeqAbs;
    if (name == "relabs") return ProjectionKind::RelAbs;
    throw MinerError("unknown projection kind '" + name + "'");
}

std::string Abstraction::display() const {
    std::string out = id + " = ";
    for (std::size_t i = 0; i < elements.size(); ++i) {
        if (i > 0) out += ", ";
        out += elements[i];
    }
    if (!relpos.empty()) {
        out += " : ";
        for (std::size_t i = 0; i < relpos.size(); ++i) {
            if (i > 0) out += ", ";
            out += relpos[i].display();
        }
    }
    return out;
}

void Library::add(Abstraction abs) {
    if (contains(abs.id)) throw MinerError("duplicate abstraction id '" + abs.id + "'");
    items_.push_back(std::move(abs));
}

bool Library::contains(const std::string& id) const {
    return std::any_of(items_.begin(), items_.end(),
                       [&](const Abstraction& a) { return a.id == id; });
}

const Abstraction& Library::get(const std::string& id) const {
    for (const auto& a : items_) {
        if (a.id == id) return a;
    }
    throw MinerError("unknown abstraction id '" + id + "'");
}

// ---------------------------------------------------------------------------
// Projection
// ---------------------------------------------------------------------------

ProjectedTrace project(const SolutionTrace& trace, ProjectionKind kind, const Domain& domain) {
    ProjectedTrace out;
    out.reserve(trace.steps.size());
    ExprPtr state = trace.problem;
    Path prev_last;
    bool first = true;
    for (const auto& step : trace.steps) {
        Path first_path;
        Path last_path;
        if (step.is_abstract()) {
            ExprPtr s = state;
            for (std::size_t i = 0; i < step.witness.size(); ++i) {
                Path rp = domain.reported_path(s, step.witness[i]);
                if (i == 0) first_path = rp;
                last_path = rp;
                auto next = domain.apply(s, step.witness[i]);
                if (!next) {
                    throw TraceError("witness step not applicable: " + step.witness[i].display());
                }
                s = *next;
            }
            if (!expr_equal(s, step.state)) {
                throw TraceError("witness replay does not reach the recorded state");
            }
        } else {
            first_path = domain.reported_path(state, step.action);
            last_path = first_path;
        }
        ProjectedAction action;
        action.element = step.action.axiom;
        if (kind == ProjectionKind::RelAbs && !first) {
            action.rel = relative_position(prev_last, first_path);
        }
        out.push_back(std::move(action));
        prev_last = last_path;
        state = step.state;
        first = false;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Candidates, objective, rewriting
// ---------------------------------------------------------------------------

namespace {

std::string candidate_key(const std::vector<std::string>& elements, const std::vector<RelPos>& relpos) {
    std::string key;
    for (const auto& e : elements) {
        key += e;
        key += '\x1f';
    }
    key += '\x1e';
    for (const auto& r : relpos) {
        key += r.first.steps;
        key += '\x1f';
        key += r.second.steps;
        key += '\x1f';
    }
    return key;
}

bool matches_at(const ProjectedTrace& trace, std::size_t i, const std::vector<std::string>& elements,
                const std::vector<RelPos>& relpos, ProjectionKind kind) {
    if (i + elements.size() > trace.size()) return false;
    for (std::size_t j = 0; j < elements.size(); ++j) {
        if (trace[i + j].element != elements[j]) return false;
        if (kind == ProjectionKind::RelAbs && j > 0) {
            if (!trace[i + j].rel || !(*trace[i + j].rel == relpos[j - 1])) return false;
        }
    }
    return true;
}

}  // namespace

std::vector<Candidate> get_candidates(const Dataset& data, std::size_t max_len) {
    std::vector<Candidate> out;
    std::set<std::string> seen;
    for (const auto& entry : data.entries) {
        const ProjectedTrace& t = entry.trace;
        for (std::size_t i = 0; i < t.size(); ++i) {
            std::size_t longest = std::min(max_len, t.size() - i);
            for (std::size_t len = 2; len <= longest; ++len) {
                Candidate c;
                c.elements.reserve(len);
                for (std::size_t j = 0; j < len; ++j) {
                    c.elements.push_back(t[i + j].element);
                    if (data.kind == ProjectionKind::RelAbs && j > 0) {
                        c.relpos.push_back(*t[i + j].rel);
                    }
                }
                std::string key = candidate_key(c.elements, c.relpos);
                if (seen.insert(std::move(key)).second) {
                    out.push_back(std::move(c));
                }
            }
        }
    }
    return out;
}

double objective(const Dataset& data, std::size_t action_space_size) {
    if (action_space_size == 0) {
        if (data.total_actions() != 0) throw MinerError("nonempty dataset over empty action space");
        return 0.0;
    }
    return static_cast<double>(data.total_actions()) * std::log(static_cast<double>(action_space_size));
}

std::size_t count_matches(const ProjectedTrace& trace, const Candidate& cand, ProjectionKind kind) {
    std::size_t count = 0;
    std::size_t i = 0;
    while (i < trace.size()) {
        if (matches_at(trace, i, cand.elements, cand.relpos, kind)) {
            ++count;
            i += cand.elements.size();
        } else {
            ++i;
        }
    }
    return count;
}

std::size_t count_matches(const Dataset& data, const Candidate& cand) {
    std::size_t count = 0;
    for (const auto& entry : data.entries) {
        count += count_matches(entry.trace, cand, data.kind);
    }
    return count;
}

ProjectedTrace rewrite(const ProjectedTrace& trace, const Abstraction& abs) {
    ProjectedTrace out;
    std::size_t i = 0;
    while (i < trace.size()) {
        if (matches_at(trace, i, abs.elements, abs.relpos, abs.kind)) {
            // The token keeps the first matched action's link to its
            // predecessor; the action after the match already points at the
            // last matched axiom, so surrounding relpos entries stay valid.
            out.push_back(ProjectedAction{abs.id, trace[i].rel});
            i += abs.elements.size();
        } else {
            out.push_back(trace[i]);
            ++i;
        }
    }
    return out;
}

Dataset rewrite(const Dataset& data, const Abstraction& abs) {
    Dataset out;
    out.kind = data.kind;
    out.action_space = data.action_space;
    out.entries.reserve(data.entries.size());
    for (const auto& entry : data.entries) {
        out.entries.push_back(DatasetEntry{entry.problem, rewrite(entry.trace, abs)});
    }
    return out;
}

// ---------------------------------------------------------------------------
// Greedy induction
// ---------------------------------------------------------------------------

MinerResult greedy_abstract(const std::vector<std::string>& action_space, const Dataset& data,
                            ProjectionKind kind, const MinerConfig& cfg, int round,
                            std::size_t next_id) {
    std::set<std::string> known(action_space.begin(), action_space.end());
    for (const auto& entry : data.entries) {
        for (const auto& act : entry.trace) {
            if (!known.count(act.element)) {
                throw MinerError("trace element '" + act.element + "' missing from the action space");
            }
        }
    }

    MinerResult result;
    result.abstracted = data;
    result.abstracted.kind = kind;

    std::size_t k = known.size();
    result.objective_log.push_back(objective(result.abstracted, std::max<std::size_t>(k, 1)));
    if (data.entries.empty()) return result;

    std::vector<Candidate> candidates = get_candidates(result.abstracted, cfg.max_len);

    while (!candidates.empty()) {
        const double n_now = static_cast<double>(result.abstracted.total_actions());
        const double j_now = n_now * std::log(static_cast<double>(k));
        const double log_next = std::log(static_cast<double>(k + 1));

        double best_score = 0.0;
        std::size_t best_idx = candidates.size();
        for (std::size_t idx = 0; idx < candidates.size(); ++idx) {
            const Candidate& cand = candidates[idx];
            std::size_t m = count_matches(result.abstracted, cand);
            double n_after = n_now - static_cast<double>(m * (cand.elements.size() - 1));
            double score = j_now - n_after * log_next;
            if (cfg.length_prior) {
                score -= std::log(2.0) * static_cast<double>(cand.elements.size());
            }
            if (score <= 0.0) continue;
            if (best_idx == candidates.size() || score > best_score) {
                best_score = score;
                best_idx = idx;
                continue;
            }
            if (score == best_score) {
                // Deterministic tie-break: longer first, then lexicographic.
                const Candidate& best = candidates[best_idx];
                bool take;
                if (cand.elements.size() != best.elements.size()) {
                    take = cand.elements.size() > best.elements.size();
                } else if (cand.elements != best.elements) {
                    take = cand.elements < best.elements;
                } else {
                    take = cand.relpos < best.relpos;
                }
                if (take) best_idx = idx;
            }
        }
        if (best_idx == candidates.size()) break;

        Abstraction accepted;
        accepted.id = "A" + std::to_string(next_id + result.library.size());
        accepted.kind = kind;
        accepted.elements = candidates[best_idx].elements;
        accepted.relpos = candidates[best_idx].relpos;
        accepted.round = round;
        accepted.score = best_score;
        result.abstracted = rewrite(result.abstracted, accepted);
        result.abstracted.action_space.push_back(accepted.id);
        result.library.add(std::move(accepted));
        candidates.erase(candidates.begin() + static_cast<std::ptrdiff_t>(best_idx));
        ++k;
        result.objective_log.push_back(objective(result.abstracted, k));
    }
    return result;
}

// ---------------------------------------------------------------------------
// Expansion
// ---------------------------------------------------------------------------

namespace {

void expand_into(const ProjectedAction& action, const Library& library, ProjectedTrace& out,
                 int depth) {
    if (depth > 64) throw MinerError("abstraction nesting too deep (cycle?)");
    if (!library.contains(action.element)) {
        out.push_back(action);
        return;
    }
    const Abstraction& abs = library.get(action.element);
    for (std::size_t j = 0; j < abs.elements.size(); ++j) {
        ProjectedAction sub;
        sub.element = abs.elements[j];
        if (j == 0) {
            sub.rel = action.rel;
        } else if (abs.kind == ProjectionKind::RelAbs) {
            sub.rel = abs.relpos[j - 1];
        }
        expand_into(sub, library, out, depth + 1);
    }
}

}  // namespace

ProjectedTrace expand_projected(const ProjectedTrace& trace, const Library& library) {
    ProjectedTrace out;
    for (const auto& action : trace) {
        expand_into(action, library, out, 0);
    }
    return out;
}

Dataset expand_dataset(const Dataset& data, const Library& library) {
    Dataset out;
    out.kind = data.kind;
    out.action_space = data.action_space;
    out.entries.reserve(data.entries.size());
    for (const auto& entry : data.entries) {
        out.entries.push_back(DatasetEntry{entry.problem, expand_projected(entry.trace, library)});
    }
    return out;
}

}  // namespace absolve
