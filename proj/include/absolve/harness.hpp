#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "absolve/agent.hpp"
#include "absolve/io.hpp"

namespace absolve {

class HarnessError : public std::runtime_error {
public:
    explicit HarnessError(const std::string& what) : std::runtime_error(what) {}
};

enum class AbstractionMode : std::uint8_t { None, SeqAbs, RelAbs };

std::string abstraction_mode_name(AbstractionMode mode);
AbstractionMode abstraction_mode_from_name(const std::string& name);

struct OutputPaths {
    std::string report_csv;
    std::string report_json;
    std::string library;
    std::string checkpoint;
    std::string traces;
};

struct RunConfig {
    std::string domain = "equations";
    AbstractionMode abstraction = AbstractionMode::RelAbs;
    int rounds = 4;
    int episodes_per_round = 2500;
    int eval_period = 1000;
    int heldout_size = 50;
    std::uint64_t seed = 1;

    SearchConfig search;
    TrainConfig train;
    MinerConfig miner;
    ExecutorConfig executor;
    FeatureSpec features;

    // Optional sampler overrides on top of the domain preset.
    std::string template_file;
    int prime_pool_size = -1;     // -1 keeps the preset
    int max_prime_factors = -1;   // -1 keeps the preset
    long long coeff_lo = 0;       // used when coeff_set
    long long coeff_hi = 0;
    bool coeff_set = false;

    OutputPaths out;

    void validate() const;
    SamplerConfig sampler_config() const;
};

RunConfig run_config_from_json(const std::string& text);
RunConfig load_run_config(const std::string& path);
std::string run_config_to_json(const RunConfig& cfg);

struct EvalRow {
    long long step = 0;
    double success_rate = 0.0;
    double mean_len = 0.0;  // mean abstract-level solution length over solved problems
    std::uint64_t seed = 0;
};

struct EvalRecord {
    std::string problem;
    bool solved = false;
    std::size_t len_abstract = 0;
    std::size_t len_expanded = 0;
};

struct EvalResult {
    double success_rate = 0.0;
    double mean_len_abstract = 0.0;
    double mean_len_expanded = 0.0;
    std::vector<EvalRecord> records;
};

struct RunReport {
    std::string domain;
    AbstractionMode abstraction = AbstractionMode::None;
    std::uint64_t seed = 0;
    std::vector<EvalRow> rows;
    std::vector<std::vector<std::string>> library_rounds;  // ids accepted per round
    double final_success_rate = 0.0;
    double final_mean_len_abstract = 0.0;
    double final_mean_len_expanded = 0.0;
    double wallclock_seconds = 0.0;
};

// Named deterministic rng streams derived from one root seed.
Rng seed_stream(std::uint64_t root_seed, const std::string& name);

// Fixed held-out problem set drawn from the "eval" stream.
std::vector<ExprPtr> heldout_problems(const Domain& domain, int count, std::uint64_t seed);

// Solves each problem within the search budget; never mutates the scorer or
// the library (evaluation runs without exploration noise).
EvalResult evaluate(const ScorerParams& params, const Library& library, const Domain& domain,
                    const std::vector<ExprPtr>& problems, const SearchConfig& search_cfg,
                    const ExecutorConfig& exec_cfg = {});

struct TrainingArtifacts {
    RunReport report;
    ScorerParams params;
    Library library;
    std::vector<SolutionTrace> solutions;  // all solved training episodes
};

// The full bootstrap loop: alternating rounds of search-and-update episodes
// with library induction between rounds, plus periodic held-out evaluation.
TrainingArtifacts run_training(const RunConfig& cfg);

// One frozen agent evaluated on two problem distributions, no training.
std::pair<EvalResult, EvalResult> transfer_eval(const ScorerParams& params, const Library& library,
                                                const std::string& from_domain,
                                                const std::string& to_domain, int count,
                                                std::uint64_t seed, const SearchConfig& search_cfg,
                                                const ExecutorConfig& exec_cfg = {});

std::string report_to_csv(const RunReport& report);
std::string report_to_json(const RunReport& report);

// Replays every step of every trace; throws TraceError on any mismatch.
void audit_traces(const std::vector<SolutionTrace>& traces, const Domain& domain);

}  // namespace absolve
