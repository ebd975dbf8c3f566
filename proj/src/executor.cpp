#include "absolve/executor.hpp"

#include <algorithm>

namespace absolve {

namespace {

void flatten_into(const std::string& element, std::optional<RelPos> constraint,
                  const Library& library, std::vector<FlatStep>& out, int depth) {
    if (depth > 64) throw MinerError("abstraction nesting too deep (cycle?)");
    if (!library.contains(element)) {
        out.push_back(FlatStep{element, std::move(constraint)});
        return;
    }
    const Abstraction& abs = library.get(element);
    for (std::size_t i = 0; i < abs.elements.size(); ++i) {
        std::optional<RelPos> c;
        if (i == 0) {
            c = constraint;
        } else if (abs.kind == ProjectionKind::RelAbs) {
            c = abs.relpos[i - 1];
        }
        flatten_into(abs.elements[i], std::move(c), library, out, depth + 1);
    }
}

// Flattens a whole element sequence, recording where each element starts.
std::vector<FlatStep> flatten_sequence(const std::vector<std::string>& elements,
                                       const std::vector<RelPos>& relpos, ProjectionKind kind,
                                       const Library& library, std::vector<std::size_t>* element_starts) {
    std::vector<FlatStep> out;
    for (std::size_t i = 0; i < elements.size(); ++i) {
        if (element_starts) element_starts->push_back(out.size());
        std::optional<RelPos> c;
        if (i > 0 && kind == ProjectionKind::RelAbs) c = relpos[i - 1];
        flatten_into(elements[i], std::move(c), library, out, 0);
    }
    return out;
}

struct DfsOutcome {
    // end-state key -> insertion order index into results
    std::unordered_map<std::string, std::size_t> seen;
    std::vector<std::pair<std::vector<ActionInstance>, ExprPtr>> results;
    bool truncated = false;
    bool first_only = false;
    bool done = false;
    std::size_t budget = 0;
};

void dfs_execute(const ExprPtr& state, const std::vector<FlatStep>& steps, std::size_t index,
                 const Path& prev_reported, std::vector<ActionInstance>& witness,
                 const Domain& domain, DfsOutcome& outcome) {
    if (outcome.done) return;
    if (index == steps.size()) {
        std::string key = print_expr(state);
        if (!outcome.seen.count(key)) {
            outcome.seen.emplace(std::move(key), outcome.results.size());
            outcome.results.emplace_back(witness, state);
            if (outcome.first_only) outcome.done = true;
        }
        return;
    }
    if (outcome.budget == 0) {
        outcome.truncated = true;
        return;
    }
    --outcome.budget;

    const FlatStep& step = steps[index];
    for (const Application& app : domain.actions_of(state, step.axiom)) {
        Path reported = domain.reported_path(state, app.action);
        if (step.constraint && !(relative_position(prev_reported, reported) == *step.constraint)) {
            continue;
        }
        witness.push_back(app.action);
        dfs_execute(app.result, steps, index + 1, reported, witness, domain, outcome);
        witness.pop_back();
        if (outcome.done) return;
    }
}

}  // namespace

std::vector<FlatStep> flatten(const Abstraction& abs, const Library& library) {
    return flatten_sequence(abs.elements, abs.relpos, abs.kind, library, nullptr);
}

ApplyAbstractionResult apply_abstraction(const ExprPtr& state, const Abstraction& abs,
                                         const Library& library, const Domain& domain,
                                         const ExecutorConfig& cfg) {
    std::vector<FlatStep> steps = flatten(abs, library);
    DfsOutcome outcome;
    outcome.budget = cfg.node_budget;
    std::vector<ActionInstance> witness;
    dfs_execute(state, steps, 0, Path(), witness, domain, outcome);

    ApplyAbstractionResult result;
    result.truncated = outcome.truncated;
    result.applications.reserve(outcome.results.size());
    for (auto& [w, end] : outcome.results) {
        AbstractApplication app;
        app.action.axiom = abs.id;
        app.action.path = w.empty() ? Path() : domain.reported_path(state, w.front());
        app.witness = std::move(w);
        app.result = std::move(end);
        result.applications.push_back(std::move(app));
    }
    return result;
}

const ApplyAbstractionResult* EpisodeCache::find(const std::string& state_key,
                                                 const std::string& abs_id) const {
    auto it = map_.find(state_key + '\x1f' + abs_id);
    return it == map_.end() ? nullptr : &it->second;
}

void EpisodeCache::store(const std::string& state_key, const std::string& abs_id,
                         ApplyAbstractionResult value) {
    map_.emplace(state_key + '\x1f' + abs_id, std::move(value));
}

std::vector<AugmentedAction> enumerate_augmented(const ExprPtr& state, const Domain& domain,
                                                 const Library& library, const ExecutorConfig& cfg,
                                                 EpisodeCache* cache) {
    std::vector<AugmentedAction> out;
    for (const Application& app : domain.actions(state)) {
        out.push_back(AugmentedAction{app.action, {}, app.result});
    }
    std::string state_key;
    if (cache) state_key = print_expr(state);
    for (const Abstraction& abs : library.items()) {
        const ApplyAbstractionResult* found = cache ? cache->find(state_key, abs.id) : nullptr;
        ApplyAbstractionResult computed;
        if (!found) {
            computed = apply_abstraction(state, abs, library, domain, cfg);
            if (cache) {
                cache->store(state_key, abs.id, computed);
                found = cache->find(state_key, abs.id);
            } else {
                found = &computed;
            }
        }
        for (const AbstractApplication& app : found->applications) {
            out.push_back(AugmentedAction{app.action, app.witness, app.result});
        }
    }
    return out;
}

SolutionTrace expand_solution(const SolutionTrace& trace, const Domain& domain) {
    SolutionTrace out;
    out.problem = trace.problem;
    ExprPtr state = trace.problem;
    for (const auto& step : trace.steps) {
        if (!step.is_abstract()) {
            auto next = domain.apply(state, step.action);
            if (!next || !expr_equal(*next, step.state)) {
                throw TraceError("trace step does not replay: " + step.action.display());
            }
            out.steps.push_back(SolutionStep{step.action, {}, step.state});
            state = step.state;
            continue;
        }
        for (const ActionInstance& w : step.witness) {
            auto next = domain.apply(state, w);
            if (!next) {
                throw TraceError("witness step does not replay: " + w.display());
            }
            state = *next;
            out.steps.push_back(SolutionStep{w, {}, state});
        }
        if (!expr_equal(state, step.state)) {
            throw TraceError("witness replay does not reach the recorded state");
        }
    }
    return out;
}

ReplayResult replay_projected(const ExprPtr& problem, const ProjectedTrace& trace,
                              ProjectionKind kind, const Library& library, const Domain& domain,
                              const ExecutorConfig& cfg) {
    ReplayResult result;

    std::vector<std::string> elements;
    std::vector<RelPos> relpos;
    elements.reserve(trace.size());
    for (std::size_t i = 0; i < trace.size(); ++i) {
        elements.push_back(trace[i].element);
        if (kind == ProjectionKind::RelAbs && i > 0) {
            if (!trace[i].rel) return result;
            relpos.push_back(*trace[i].rel);
        }
    }

    std::vector<std::size_t> element_starts;
    std::vector<FlatStep> steps = flatten_sequence(elements, relpos, kind, library, &element_starts);

    DfsOutcome outcome;
    outcome.budget = cfg.node_budget;
    outcome.first_only = true;
    std::vector<ActionInstance> witness;
    dfs_execute(problem, steps, 0, Path(), witness, domain, outcome);
    if (outcome.results.empty()) return result;

    result.ok = true;
    result.witness = std::move(outcome.results.front().first);
    result.element_states.push_back(problem);
    ExprPtr state = problem;
    for (std::size_t i = 0; i < result.witness.size(); ++i) {
        state = *domain.apply(state, result.witness[i]);
        // Record the state at each element boundary.
        bool boundary = false;
        for (std::size_t e = 0; e < element_starts.size(); ++e) {
            std::size_t end = e + 1 < element_starts.size() ? element_starts[e + 1] : steps.size();
            if (i + 1 == end) boundary = true;
        }
        if (boundary) result.element_states.push_back(state);
    }
    return result;
}

}  // namespace absolve
