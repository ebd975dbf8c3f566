#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "absolve/executor.hpp"

namespace absolve {

// Deterministic sparse features: hashed character n-grams (n = 1..3) of the
// printed state plus a few structural counts. The hash is fixed (FNV-1a) so
// feature vectors are identical across platforms.
struct FeatureSpec {
    std::size_t ngram_buckets = 1024;

    std::size_t dimension() const { return ngram_buckets + 4; }

    friend bool operator==(const FeatureSpec&, const FeatureSpec&) = default;
};

using SparseFeatures = std::vector<std::pair<std::uint32_t, double>>;

SparseFeatures featurize(const ExprPtr& state, const FeatureSpec& spec);

struct ScorerParams {
    FeatureSpec spec;
    std::vector<double> weights;  // spec.dimension() entries
    double bias = 0.0;

    static ScorerParams init(const FeatureSpec& spec);
};

double score(const ScorerParams& params, const ExprPtr& state);

struct LabeledState {
    ExprPtr state;
    bool on_path = false;
};

// Mean logistic loss separating on-path from off-path states, with its
// analytic gradient (same layout as the parameters).
struct LossGrad {
    double loss = 0.0;
    std::vector<double> grad_weights;
    double grad_bias = 0.0;
};

LossGrad loss_and_grad(const ScorerParams& params, std::span<const LabeledState> batch);

// One gradient step; returns false (no update) for degenerate batches that
// lack a positive or a negative example.
bool contrastive_update(ScorerParams& params, std::span<const LabeledState> batch,
                        double learning_rate);

struct SearchConfig {
    int beam_width = 4;
    int max_depth = 30;
    std::size_t max_expansions = 10000;
    // Seeded tie-breaking noise added to scores during training episodes;
    // keep 0 for evaluation.
    double exploration_noise = 0.0;
};

struct SearchOutcome {
    bool solved = false;
    SolutionTrace trace;
    std::vector<LabeledState> visited;
    std::size_t expansions = 0;
};

// Best-first layered search over the augmented action space. States are
// deduplicated by their printed form; the first terminal state wins.
SearchOutcome beam_search(const ExprPtr& problem, const ScorerParams& params,
                          const SearchConfig& cfg, const Domain& domain, const Library& library,
                          const ExecutorConfig& exec_cfg = {}, Rng* noise_rng = nullptr);

struct TrainConfig {
    double learning_rate = 0.05;
    int imitation_epochs = 2;
};

struct ImitationStats {
    std::size_t traces_replayed = 0;
    std::size_t traces_skipped = 0;
    std::size_t updates = 0;
};

// Brief imitation pass over abstracted solutions: replay each trace in the
// augmented space, then push the taken successor above its siblings.
ImitationStats imitation_train(ScorerParams& params, const Dataset& dataset, const Domain& domain,
                               const Library& library, const TrainConfig& train_cfg,
                               const ExecutorConfig& exec_cfg = {});

}  // namespace absolve
