#include "absolve/agent.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <unordered_set>

namespace absolve {

namespace {

std::uint64_t fnv1a(const char* data, std::size_t len) {
    std::uint64_t h = 1469598103934665603ULL;
    for (std::size_t i = 0; i < len; ++i) {
        h ^= static_cast<unsigned char>(data[i]);
        h *= 1099511628211ULL;
    }
    return h;
}

void count_nodes(const ExprPtr& e, double& consts, double& vars) {
    if (e->is_const()) {
        consts += 1.0;
        return;
    }
    if (e->is_var()) {
        vars += 1.0;
        return;
    }
    count_nodes(e->left(), consts, vars);
    count_nodes(e->right(), consts, vars);
}

}  // namespace

SparseFeatures featurize(const ExprPtr& state, const FeatureSpec& spec) {
    const std::string text = print_expr(state);
    std::map<std::uint32_t, double> acc;
    for (std::size_t n = 1; n <= 3; ++n) {
        if (text.size() < n) break;
        for (std::size_t i = 0; i + n <= text.size(); ++i) {
            auto bucket = static_cast<std::uint32_t>(fnv1a(text.data() + i, n) % spec.ngram_buckets);
            acc[bucket] += 1.0;
        }
    }
    double consts = 0.0;
    double vars = 0.0;
    count_nodes(state, consts, vars);
    const auto base = static_cast<std::uint32_t>(spec.ngram_buckets);
    acc[base + 0] = static_cast<double>(tree_depth(state));
    acc[base + 1] = static_cast<double>(node_count(state));
    acc[base + 2] = consts;
    acc[base + 3] = vars;
    return {acc.begin(), acc.end()};
}

ScorerParams ScorerParams::init(const FeatureSpec& spec) {
    ScorerParams params;
    params.spec = spec;
    params.weights.assign(spec.dimension(), 0.0);
    // Prefer small states from the start: solved forms are minimal, so an
    // untrained agent already walks downhill instead of tie-breaking blindly.
    params.weights[spec.ngram_buckets + 0] = -0.05;
    params.weights[spec.ngram_buckets + 1] = -0.10;
    params.bias = 0.0;
    return params;
}

double score(const ScorerParams& params, const ExprPtr& state) {
    double s = params.bias;
    for (const auto& [index, value] : featurize(state, params.spec)) {
        s += params.weights[index] * value;
    }
    return s;
}

namespace {

double sigmoid(double x) {
    if (x >= 0) {
        return 1.0 / (1.0 + std::exp(-x));
    }
    double e = std::exp(x);
    return e / (1.0 + e);
}

// log(1 + exp(x)) without overflow
double softplus(double x) {
    if (x > 30.0) return x;
    if (x < -30.0) return 0.0;
    return std::log1p(std::exp(x));
}

}  // namespace

LossGrad loss_and_grad(const ScorerParams& params, std::span<const LabeledState> batch) {
    LossGrad out;
    out.grad_weights.assign(params.weights.size(), 0.0);
    if (batch.empty()) return out;

    const double inv_n = 1.0 / static_cast<double>(batch.size());
    for (const auto& item : batch) {
        SparseFeatures features = featurize(item.state, params.spec);
        double s = params.bias;
        for (const auto& [index, value] : features) {
            s += params.weights[index] * value;
        }
        const double y = item.on_path ? 1.0 : 0.0;
        out.loss += (softplus(s) - y * s) * inv_n;
        const double delta = (sigmoid(s) - y) * inv_n;
        for (const auto& [index, value] : features) {
            out.grad_weights[index] += delta * value;
        }
        out.grad_bias += delta;
    }
    return out;
}

bool contrastive_update(ScorerParams& params, std::span<const LabeledState> batch,
                        double learning_rate) {
    bool has_pos = false;
    bool has_neg = false;
    for (const auto& item : batch) {
        (item.on_path ? has_pos : has_neg) = true;
    }
    if (!has_pos || !has_neg) return false;

    LossGrad lg = loss_and_grad(params, batch);
    for (std::size_t i = 0; i < params.weights.size(); ++i) {
        params.weights[i] -= learning_rate * lg.grad_weights[i];
    }
    params.bias -= learning_rate * lg.grad_bias;
    return true;
}

// ---------------------------------------------------------------------------
// Beam search
// ---------------------------------------------------------------------------

namespace {

struct SearchNode {
    ExprPtr state;
    std::size_t parent = 0;
    bool has_parent = false;
    ActionInstance action;
    std::vector<ActionInstance> witness;
};

SolutionTrace build_trace(const std::vector<SearchNode>& nodes, std::size_t terminal_index,
                          const ExprPtr& problem) {
    std::vector<std::size_t> chain;
    std::size_t cur = terminal_index;
    while (nodes[cur].has_parent) {
        chain.push_back(cur);
        cur = nodes[cur].parent;
    }
    std::reverse(chain.begin(), chain.end());
    SolutionTrace trace;
    trace.problem = problem;
    for (std::size_t idx : chain) {
        trace.steps.push_back(SolutionStep{nodes[idx].action, nodes[idx].witness, nodes[idx].state});
    }
    return trace;
}

}  // namespace

SearchOutcome beam_search(const ExprPtr& problem, const ScorerParams& params,
                          const SearchConfig& cfg, const Domain& domain, const Library& library,
                          const ExecutorConfig& exec_cfg, Rng* noise_rng) {
    SearchOutcome outcome;
    std::vector<SearchNode> nodes;
    nodes.push_back(SearchNode{problem, 0, false, {}, {}});

    if (domain.terminal(problem)) {
        outcome.solved = true;
        outcome.trace.problem = problem;
        outcome.visited.push_back(LabeledState{problem, true});
        return outcome;
    }

    std::unordered_set<std::string> closed;
    closed.insert(print_expr(problem));
    EpisodeCache cache;

    std::vector<std::size_t> beam = {0};
    std::vector<std::size_t> on_path_chain;

    const auto finish = [&](std::size_t terminal_index) {
        outcome.solved = true;
        outcome.trace = build_trace(nodes, terminal_index, problem);
        std::unordered_set<std::size_t> on_path;
        std::size_t cur = terminal_index;
        on_path.insert(cur);
        while (nodes[cur].has_parent) {
            cur = nodes[cur].parent;
            on_path.insert(cur);
        }
        outcome.visited.clear();
        outcome.visited.reserve(nodes.size());
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            outcome.visited.push_back(LabeledState{nodes[i].state, on_path.count(i) > 0});
        }
    };

    for (int depth = 0; depth < cfg.max_depth; ++depth) {
        std::vector<std::pair<std::size_t, double>> candidates;
        for (std::size_t node_index : beam) {
            if (outcome.expansions >= cfg.max_expansions) break;
            for (AugmentedAction& aug :
                 enumerate_augmented(nodes[node_index].state, domain, library, exec_cfg, &cache)) {
                if (outcome.expansions >= cfg.max_expansions) break;
                ++outcome.expansions;
                std::string key = print_expr(aug.result);
                if (!closed.insert(std::move(key)).second) continue;
                nodes.push_back(SearchNode{aug.result, node_index, true, std::move(aug.action),
                                           std::move(aug.witness)});
                std::size_t child = nodes.size() - 1;
                if (domain.terminal(nodes[child].state)) {
                    finish(child);
                    return outcome;
                }
                double s = score(params, nodes[child].state);
                if (noise_rng && cfg.exploration_noise > 0.0) {
                    s += cfg.exploration_noise * (2.0 * uniform_unit(*noise_rng) - 1.0);
                }
                candidates.emplace_back(child, s);
            }
        }
        if (candidates.empty()) break;
        std::stable_sort(candidates.begin(), candidates.end(),
                         [](const auto& a, const auto& b) { return a.second > b.second; });
        beam.clear();
        for (std::size_t i = 0; i < candidates.size() && i < static_cast<std::size_t>(cfg.beam_width); ++i) {
            beam.push_back(candidates[i].first);
        }
    }

    outcome.visited.reserve(nodes.size());
    for (const auto& node : nodes) {
        outcome.visited.push_back(LabeledState{node.state, false});
    }
    return outcome;
}

// ---------------------------------------------------------------------------
// Imitation
// ---------------------------------------------------------------------------

ImitationStats imitation_train(ScorerParams& params, const Dataset& dataset, const Domain& domain,
                               const Library& library, const TrainConfig& train_cfg,
                               const ExecutorConfig& exec_cfg) {
    ImitationStats stats;
    for (int epoch = 0; epoch < train_cfg.imitation_epochs; ++epoch) {
        for (const auto& entry : dataset.entries) {
            ExprPtr problem;
            try {
                problem = parse(entry.problem);
            } catch (const ParseError&) {
                if (epoch == 0) ++stats.traces_skipped;
                continue;
            }
            ReplayResult replay =
                replay_projected(problem, entry.trace, dataset.kind, library, domain, exec_cfg);
            if (!replay.ok) {
                if (epoch == 0) ++stats.traces_skipped;
                continue;
            }
            if (epoch == 0) ++stats.traces_replayed;

            std::vector<LabeledState> batch;
            EpisodeCache cache;
            for (std::size_t i = 0; i + 1 < replay.element_states.size(); ++i) {
                const ExprPtr& here = replay.element_states[i];
                const ExprPtr& taken = replay.element_states[i + 1];
                batch.push_back(LabeledState{taken, true});
                std::unordered_set<std::string> seen;
                seen.insert(print_expr(taken));
                for (const AugmentedAction& aug :
                     enumerate_augmented(here, domain, library, exec_cfg, &cache)) {
                    if (seen.insert(print_expr(aug.result)).second) {
                        batch.push_back(LabeledState{aug.result, false});
                    }
                }
            }
            if (contrastive_update(params, batch, train_cfg.learning_rate)) {
                ++stats.updates;
            }
        }
    }
    return stats;
}

}  // namespace absolve
