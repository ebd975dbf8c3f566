#include "absolve/harness.hpp"

#include <chrono>
#include <cinttypes>
#include <cstdio>
#include <sstream>

#include <json.hpp>

namespace absolve {

using nlohmann::json;

std::string abstraction_mode_name(AbstractionMode mode) {
    switch (mode) {
        case AbstractionMode::None: return "none";
        case AbstractionMode::SeqAbs: return "seqabs";
        case AbstractionMode::RelAbs: return "relabs";
    }
    return "?";
}

AbstractionMode abstraction_mode_from_name(const std::string& name) {
    if (name == "none") return AbstractionMode::None;
    if (name == "seqabs") return AbstractionMode::SeqAbs;
    if (name == "relabs") return AbstractionMode::RelAbs;
    throw HarnessError("unknown abstraction mode '" + name + "'");
}

void RunConfig::validate() const {
    if (rounds < 1) throw HarnessError("rounds must be >= 1");
    if (episodes_per_round < 1) throw HarnessError("episodes_per_round must be >= 1");
    if (eval_period < 1) throw HarnessError("eval_period must be >= 1");
    if (heldout_size < 1) throw HarnessError("heldout_size must be >= 1");
    if (search.beam_width < 1) throw HarnessError("beam_width must be >= 1");
    if (search.max_depth < 1) throw HarnessError("max_depth must be >= 1");
    if (miner.max_len < 2) throw HarnessError("miner max_len must be >= 2");
    domain_preset(domain);  // throws on unknown names
}

SamplerConfig RunConfig::sampler_config() const {
    SamplerConfig sampler = domain_preset(domain);
    if (!template_file.empty()) sampler.templates = load_template_file(template_file);
    if (prime_pool_size >= 0) sampler.prime_pool_size = prime_pool_size;
    if (max_prime_factors >= 0) sampler.max_prime_factors = max_prime_factors;
    if (coeff_set) {
        sampler.coeff_lo = coeff_lo;
        sampler.coeff_hi = coeff_hi;
    }
    return sampler;
}

RunConfig run_config_from_json(const std::string& text) {
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded()) throw HarnessError("malformed config JSON");
    if (j.value("version", kFormatVersion) != kFormatVersion) {
        throw HarnessError("unsupported config version");
    }
    RunConfig cfg;
    cfg.domain = j.value("domain", cfg.domain);
    cfg.abstraction = abstraction_mode_from_name(j.value("abstraction", std::string("relabs")));
    cfg.rounds = j.value("rounds", cfg.rounds);
    cfg.episodes_per_round = j.value("episodes_per_round", cfg.episodes_per_round);
    cfg.eval_period = j.value("eval_period", cfg.eval_period);
    cfg.heldout_size = j.value("heldout_size", cfg.heldout_size);
    cfg.seed = j.value("seed", cfg.seed);
    if (j.contains("search")) {
        const json& s = j["search"];
        cfg.search.beam_width = s.value("beam_width", cfg.search.beam_width);
        cfg.search.max_depth = s.value("max_depth", cfg.search.max_depth);
        cfg.search.max_expansions = s.value("max_expansions", cfg.search.max_expansions);
        cfg.search.exploration_noise = s.value("exploration_noise", cfg.search.exploration_noise);
    }
    if (j.contains("train")) {
        const json& t = j["train"];
        cfg.train.learning_rate = t.value("learning_rate", cfg.train.learning_rate);
        cfg.train.imitation_epochs = t.value("imitation_epochs", cfg.train.imitation_epochs);
    }
    if (j.contains("miner")) {
        const json& m = j["miner"];
        cfg.miner.max_len = m.value("max_len", cfg.miner.max_len);
        cfg.miner.length_prior = m.value("length_prior", cfg.miner.length_prior);
    }
    if (j.contains("executor")) {
        cfg.executor.node_budget = j["executor"].value("node_budget", cfg.executor.node_budget);
    }
    if (j.contains("features")) {
        cfg.features.ngram_buckets = j["features"].value("ngram_buckets", cfg.features.ngram_buckets);
    }
    if (j.contains("sampler")) {
        const json& s = j["sampler"];
        cfg.template_file = s.value("template_file", cfg.template_file);
        cfg.prime_pool_size = s.value("prime_pool_size", cfg.prime_pool_size);
        cfg.max_prime_factors = s.value("max_prime_factors", cfg.max_prime_factors);
        if (s.contains("coeff_lo") || s.contains("coeff_hi")) {
            SamplerConfig preset = domain_preset(cfg.domain);
            cfg.coeff_lo = s.value("coeff_lo", preset.coeff_lo);
            cfg.coeff_hi = s.value("coeff_hi", preset.coeff_hi);
            cfg.coeff_set = true;
        }
    }
    if (j.contains("out")) {
        const json& o = j["out"];
        cfg.out.report_csv = o.value("report_csv", std::string());
        cfg.out.report_json = o.value("report_json", std::string());
        cfg.out.library = o.value("library", std::string());
        cfg.out.checkpoint = o.value("checkpoint", std::string());
        cfg.out.traces = o.value("traces", std::string());
    }
    cfg.validate();
    return cfg;
}

RunConfig load_run_config(const std::string& path) {
    return run_config_from_json(read_text_file(path));
}

std::string run_config_to_json(const RunConfig& cfg) {
    json j;
    j["version"] = kFormatVersion;
    j["domain"] = cfg.domain;
    j["abstraction"] = abstraction_mode_name(cfg.abstraction);
    j["rounds"] = cfg.rounds;
    j["episodes_per_round"] = cfg.episodes_per_round;
    j["eval_period"] = cfg.eval_period;
    j["heldout_size"] = cfg.heldout_size;
    j["seed"] = cfg.seed;
    j["search"] = {{"beam_width", cfg.search.beam_width},
                   {"max_depth", cfg.search.max_depth},
                   {"max_expansions", cfg.search.max_expansions},
                   {"exploration_noise", cfg.search.exploration_noise}};
    j["train"] = {{"learning_rate", cfg.train.learning_rate},
                  {"imitation_epochs", cfg.train.imitation_epochs}};
    j["miner"] = {{"max_len", cfg.miner.max_len}, {"length_prior", cfg.miner.length_prior}};
    j["executor"] = {{"node_budget", cfg.executor.node_budget}};
    j["features"] = {{"ngram_buckets", cfg.features.ngram_buckets}};
    return j.dump(2);
}

// ---------------------------------------------------------------------------
// Seed streams and evaluation
// ---------------------------------------------------------------------------

Rng seed_stream(std::uint64_t root_seed, const std::string& name) {
    std::uint64_t h = 1469598103934665603ULL;
    for (char c : name) {
        h ^= static_cast<unsigned char>(c);
        h *= 1099511628211ULL;
    }
    h ^= root_seed + 0x9E3779B97F4A7C15ULL + (h << 6) + (h >> 2);
    return Rng(h);
}

std::vector<ExprPtr> heldout_problems(const Domain& domain, int count, std::uint64_t seed) {
    Rng rng = seed_stream(seed, "eval");
    std::vector<ExprPtr> out;
    out.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) out.push_back(domain.sample(rng));
    return out;
}

EvalResult evaluate(const ScorerParams& params, const Library& library, const Domain& domain,
                    const std::vector<ExprPtr>& problems, const SearchConfig& search_cfg,
                    const ExecutorConfig& exec_cfg) {
    SearchConfig quiet = search_cfg;
    quiet.exploration_noise = 0.0;

    EvalResult result;
    std::size_t solved = 0;
    std::size_t abs_total = 0;
    std::size_t exp_total = 0;
    for (const ExprPtr& problem : problems) {
        SearchOutcome outcome = beam_search(problem, params, quiet, domain, library, exec_cfg);
        EvalRecord record;
        record.problem = print_expr(problem);
        record.solved = outcome.solved;
        if (outcome.solved) {
            record.len_abstract = outcome.trace.length();
            record.len_expanded = outcome.trace.expanded_length();
            ++solved;
            abs_total += record.len_abstract;
            exp_total += record.len_expanded;
        }
        result.records.push_back(std::move(record));
    }
    if (!problems.empty()) {
        result.success_rate = static_cast<double>(solved) / static_cast<double>(problems.size());
    }
    if (solved > 0) {
        result.mean_len_abstract = static_cast<double>(abs_total) / static_cast<double>(solved);
        result.mean_len_expanded = static_cast<double>(exp_total) / static_cast<double>(solved);
    }
    return result;
}

// ---------------------------------------------------------------------------
// Training
// ---------------------------------------------------------------------------

TrainingArtifacts run_training(const RunConfig& cfg) {
    cfg.validate();
    const auto t_start = std::chrono::steady_clock::now();

    Domain domain(cfg.sampler_config());
    const std::vector<ExprPtr> heldout = heldout_problems(domain, cfg.heldout_size, cfg.seed);
    Rng sampler_rng = seed_stream(cfg.seed, "sampler");
    Rng search_rng = seed_stream(cfg.seed, "search");

    TrainingArtifacts artifacts;
    artifacts.params = ScorerParams::init(cfg.features);
    RunReport& report = artifacts.report;
    report.domain = cfg.domain;
    report.abstraction = cfg.abstraction;
    report.seed = cfg.seed;

    const ProjectionKind kind =
        cfg.abstraction == AbstractionMode::SeqAbs ? ProjectionKind::SeqAbs : ProjectionKind::RelAbs;

    Dataset d_abs;
    std::size_t next_abs_id = 1;
    long long step = 0;

    const auto run_eval = [&]() {
        EvalResult r = evaluate(artifacts.params, artifacts.library, domain, heldout, cfg.search,
                                cfg.executor);
        report.rows.push_back(EvalRow{step, r.success_rate, r.mean_len_abstract, cfg.seed});
        return r;
    };
    EvalResult last_eval = run_eval();

    for (int round = 1; round <= cfg.rounds; ++round) {
        if (round > 1 && cfg.abstraction != AbstractionMode::None && !d_abs.entries.empty()) {
            imitation_train(artifacts.params, d_abs, domain, artifacts.library, cfg.train,
                            cfg.executor);
        }

        std::vector<SolutionTrace> round_solutions;
        for (int episode = 0; episode < cfg.episodes_per_round; ++episode) {
            ExprPtr problem = domain.sample(sampler_rng);
            SearchOutcome outcome = beam_search(problem, artifacts.params, cfg.search, domain,
                                                artifacts.library, cfg.executor, &search_rng);
            if (outcome.solved && !outcome.trace.steps.empty()) {
                round_solutions.push_back(outcome.trace);
                artifacts.solutions.push_back(outcome.trace);
            }
            contrastive_update(artifacts.params, outcome.visited, cfg.train.learning_rate);
            ++step;
            if (step % cfg.eval_period == 0) last_eval = run_eval();
        }

        if (round < cfg.rounds && cfg.abstraction != AbstractionMode::None &&
            !round_solutions.empty()) {
            Dataset data;
            data.kind = kind;
            data.action_space = domain.axiom_ids();
            for (const auto& abs : artifacts.library.items()) {
                data.action_space.push_back(abs.id);
            }
            for (const auto& trace : round_solutions) {
                data.entries.push_back(
                    DatasetEntry{print_expr(trace.problem), project(trace, kind, domain)});
            }
            MinerResult mined =
                greedy_abstract(data.action_space, data, kind, cfg.miner, round, next_abs_id);
            next_abs_id += mined.library.size();
            std::vector<std::string> round_ids;
            for (const auto& abs : mined.library.items()) {
                round_ids.push_back(abs.id);
                artifacts.library.add(abs);
            }
            report.library_rounds.push_back(std::move(round_ids));
            d_abs = std::move(mined.abstracted);
        }
    }

    report.final_success_rate = last_eval.success_rate;
    report.final_mean_len_abstract = last_eval.mean_len_abstract;
    report.final_mean_len_expanded = last_eval.mean_len_expanded;
    report.wallclock_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();

    if (!cfg.out.report_csv.empty()) write_text_file(cfg.out.report_csv, report_to_csv(report));
    if (!cfg.out.report_json.empty()) write_text_file(cfg.out.report_json, report_to_json(report));
    if (!cfg.out.library.empty()) save_library(artifacts.library, cfg.out.library);
    if (!cfg.out.checkpoint.empty()) {
        std::ostringstream rng_state;
        rng_state << search_rng;
        save_checkpoint(artifacts.params, rng_state.str(), cfg.out.checkpoint);
    }
    if (!cfg.out.traces.empty()) save_traces(artifacts.solutions, cfg.out.traces);

    return artifacts;
}

std::pair<EvalResult, EvalResult> transfer_eval(const ScorerParams& params, const Library& library,
                                                const std::string& from_domain,
                                                const std::string& to_domain, int count,
                                                std::uint64_t seed, const SearchConfig& search_cfg,
                                                const ExecutorConfig& exec_cfg) {
    Domain source = make_domain(from_domain);
    Domain target = make_domain(to_domain);
    EvalResult on_source = evaluate(params, library, source,
                                    heldout_problems(source, count, seed), search_cfg, exec_cfg);
    EvalResult on_target = evaluate(params, library, target,
                                    heldout_problems(target, count, seed), search_cfg, exec_cfg);
    return {std::move(on_source), std::move(on_target)};
}

// ---------------------------------------------------------------------------
// Reports
// ---------------------------------------------------------------------------

std::string report_to_csv(const RunReport& report) {
    std::string out = "step,success_rate,mean_len,seed\n";
    char buffer[128];
    for (const EvalRow& row : report.rows) {
        std::snprintf(buffer, sizeof(buffer), "%lld,%.6f,%.6f,%" PRIu64 "\n", row.step,
                      row.success_rate, row.mean_len, row.seed);
        out += buffer;
    }
    return out;
}

std::string report_to_json(const RunReport& report) {
    json j;
    j["version"] = kFormatVersion;
    j["domain"] = report.domain;
    j["abstraction"] = abstraction_mode_name(report.abstraction);
    j["seed"] = report.seed;
    json rows = json::array();
    for (const EvalRow& row : report.rows) {
        rows.push_back({{"step", row.step},
                        {"success_rate", row.success_rate},
                        {"mean_len", row.mean_len},
                        {"seed", row.seed}});
    }
    j["rows"] = std::move(rows);
    j["library_rounds"] = report.library_rounds;
    j["final_success_rate"] = report.final_success_rate;
    j["final_mean_len_abstract"] = report.final_mean_len_abstract;
    j["final_mean_len_expanded"] = report.final_mean_len_expanded;
    j["wallclock_seconds"] = report.wallclock_seconds;
    return j.dump(2);
}

void audit_traces(const std::vector<SolutionTrace>& traces, const Domain& domain) {
    for (const auto& trace : traces) {
        ExprPtr state = trace.problem;
        for (const auto& step : trace.steps) {
            if (step.is_abstract()) {
                for (const auto& w : step.witness) {
                    auto next = domain.apply(state, w);
                    if (!next) throw TraceError("audit: witness step not applicable");
                    state = *next;
                }
            } else {
                auto next = domain.apply(state, step.action);
                if (!next) throw TraceError("audit: step not applicable");
                state = *next;
            }
            if (!expr_equal(state, step.state)) {
                throw TraceError("audit: replay diverges from the recorded state");
            }
        }
    }
}

}  // namespace absolve
