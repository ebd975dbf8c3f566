#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "absolve/expr.hpp"

namespace absolve {

enum class DomainKind : std::uint8_t { Equations, Fractions };

std::string domain_kind_name(DomainKind kind);

// One rewrite step. `variant` disambiguates axioms that can rewrite the same
// node in more than one way (assoc direction, cancel form) so that applying
// an action is a function of (state, action).
struct ActionInstance {
    std::string axiom;
    Path path;
    std::vector<Rational> params;
    std::uint8_t variant = 0;

    std::string display() const;

    friend bool operator==(const ActionInstance&, const ActionInstance&) = default;
};

struct Application {
    ActionInstance action;
    ExprPtr result;
};

struct AxiomInfo {
    std::string id;
    DomainKind domain;
    bool parameterized = false;
    std::string description;
};

struct SamplerConfig {
    DomainKind domain = DomainKind::Equations;

    // fractions: constants are products of at most max_prime_factors primes
    // drawn from the first prime_pool_size primes.
    int prime_pool_size = 4;
    int max_prime_factors = 4;

    // equations: template set name ("easy"/"hard") or explicit templates.
    std::string template_set = "easy";
    std::vector<std::string> templates;  // overrides template_set when nonempty
    long long coeff_lo = -12;
    long long coeff_hi = 12;
};

class DomainError : public std::runtime_error {
public:
    explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

using Rng = std::mt19937_64;

// Unbiased integer draws; std::uniform_int_distribution is not portable
// across standard libraries, and reports must reproduce bit-exactly.
std::uint64_t uniform_index(Rng& rng, std::uint64_t n);
long long uniform_int(Rng& rng, long long lo, long long hi);
double uniform_unit(Rng& rng);

const std::vector<std::string>& builtin_templates(const std::string& set_name);

// Replaces placeholder letters a..h with concrete integers; "ax" becomes a
// coefficient-variable product. Exposed for tests.
std::string instantiate_template(const std::string& tmpl,
                                 const std::vector<std::pair<char, long long>>& assignment);

class Domain {
public:
    explicit Domain(SamplerConfig cfg);

    DomainKind kind() const { return cfg_.domain; }
    const SamplerConfig& config() const { return cfg_; }
    const std::vector<AxiomInfo>& axioms() const { return axioms_; }
    std::vector<std::string> axiom_ids() const;

    // Every applicable axiom instance with its successor, deterministic order.
    std::vector<Application> actions(const ExprPtr& state) const;

    // Applications of a single axiom (same order as in actions()).
    std::vector<Application> actions_of(const ExprPtr& state, const std::string& axiom) const;

    // nullopt when the action is not applicable in `state`.
    std::optional<ExprPtr> apply(const ExprPtr& state, const ActionInstance& action) const;

    bool terminal(const ExprPtr& state) const;

    ExprPtr sample(Rng& rng) const;

    // Path as reported in solution traces. mfrac reports the nearest
    // enclosing binary operation rather than the converted constant.
    Path reported_path(const ExprPtr& state, const ActionInstance& action) const;

    const std::vector<long long>& prime_pool() const { return prime_pool_; }

private:
    void enumerate(const ExprPtr& state, const std::string* only_axiom,
                   std::vector<Application>& out) const;

    SamplerConfig cfg_;
    std::vector<AxiomInfo> axioms_;
    std::vector<long long> prime_pool_;
    std::vector<std::string> templates_;
};

// "equations", "fractions", "equations-hard", "fractions-hard".
Domain make_domain(const std::string& name);
SamplerConfig domain_preset(const std::string& name);

}  // namespace absolve
