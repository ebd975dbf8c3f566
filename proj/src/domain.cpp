#include "absolve/domain.hpp"

#include <algorithm>
#include <array>
#include <set>

namespace absolve {

std::string domain_kind_name(DomainKind kind) {
    return kind == DomainKind::Equations ? "equations" : "fractions";
}

std::string ActionInstance::display() const {
    std::string out = axiom;
    if (!params.empty()) {
        out += " ";
        for (std::size_t i = 0; i < params.size(); ++i) {
            if (i > 0) out += ",";
            out += rational_to_string(params[i]);
        }
    }
    out += " @ " + path.display();
    return out;
}

std::uint64_t uniform_index(Rng& rng, std::uint64_t n) {
    if (n == 0) throw DomainError("uniform_index over empty range");
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t v;
    do {
        v = rng();
    } while (v >= limit);
    return v % n;
}

long long uniform_int(Rng& rng, long long lo, long long hi) {
    if (lo > hi) throw DomainError("empty integer range");
    return lo + static_cast<long long>(uniform_index(rng, static_cast<std::uint64_t>(hi - lo) + 1));
}

double uniform_unit(Rng& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// ---------------------------------------------------------------------------
// Axiom catalogs
// ---------------------------------------------------------------------------

namespace {

std::vector<AxiomInfo> equations_catalog() {
    const DomainKind d = DomainKind::Equations;
    return {
        {"sub", d, true, "subtract the parameter from both sides"},
        {"add", d, true, "add the parameter to both sides"},
        {"mul", d, true, "multiply both sides by the parameter (nonzero)"},
        {"div", d, true, "divide both sides by the parameter (nonzero)"},
        {"eval", d, false, "evaluate an operation on two constants"},
        {"comm", d, false, "swap the operands of + or *"},
        {"assoc", d, false, "reassociate (a o b) x c <-> a o (b x c)"},
        {"add0", d, false, "rewrite (a + 0) to a"},
        {"mul1", d, false, "rewrite (a * 1) to a"},
        {"dist", d, false, "combine (A*x o B*x) into ((A o B) * x)"},
    };
}

std::vector<AxiomInfo> fractions_catalog() {
    const DomainKind d = DomainKind::Fractions;
    return {
        {"factorize", d, true, "split an integer n into (a * b) with a, b > 1"},
        {"cancel", d, false, "cancel a shared factor between numerator and denominator"},
        {"mfrac", d, false, "turn an integer n into [n]/[1]"},
        {"combine", d, false, "merge two fractions with equal denominators under + or -"},
        {"eval", d, false, "evaluate integer +, - or * inside a fraction"},
        {"simpl1", d, false, "rewrite [n]/[1] to n"},
        {"scale", d, true, "multiply numerator and denominator by the parameter"},
    };
}

// (inner op, outer op) pairs for which reassociation is allowed.
constexpr std::array<std::pair<BinaryOp, BinaryOp>, 4> kAssocPairs = {{
    {BinaryOp::Add, BinaryOp::Add},
    {BinaryOp::Add, BinaryOp::Sub},
    {BinaryOp::Mul, BinaryOp::Mul},
    {BinaryOp::Mul, BinaryOp::Div},
}};

bool assoc_pair_ok(BinaryOp inner, BinaryOp outer) {
    for (const auto& [a, b] : kAssocPairs) {
        if (a == inner && b == outer) return true;
    }
    return false;
}

bool is_const_const(const ExprPtr& e) {
    return e->is_binary() && e->left()->is_const() && e->right()->is_const();
}

Rational eval_binary_consts(const ExprPtr& e) {
    const Rational& a = e->left()->value();
    const Rational& b = e->right()->value();
    switch (e->op()) {
        case BinaryOp::Add: return a + b;
        case BinaryOp::Sub: return a - b;
        case BinaryOp::Mul: return a * b;
        case BinaryOp::Div: return a / b;
    }
    throw DomainError("unreachable");
}

// Rewrite of a single node (everything except the apply-to-both-sides
// equation axioms). Returns nullptr when not applicable.
ExprPtr rewrite_node(DomainKind kind, const ExprPtr& node, bool in_fraction, const ActionInstance& a) {
    const auto param_count_ok = [&](std::size_t n) { return a.params.size() == n; };

    if (kind == DomainKind::Equations) {
        if (a.axiom == "eval") {
            if (a.variant != 0 || !param_count_ok(0)) return nullptr;
            if (!is_const_const(node)) return nullptr;
            if (node->op() == BinaryOp::Div && node->right()->value() == 0) return nullptr;
            return Expr::make_const(eval_binary_consts(node));
        }
        if (a.axiom == "comm") {
            if (a.variant != 0 || !param_count_ok(0)) return nullptr;
            if (!node->is_binary()) return nullptr;
            if (node->op() != BinaryOp::Add && node->op() != BinaryOp::Mul) return nullptr;
            return Expr::make_binary(node->op(), node->right(), node->left());
        }
        if (a.axiom == "assoc") {
            if (!param_count_ok(0)) return nullptr;
            if (!node->is_binary()) return nullptr;
            if (a.variant == 0) {
                // (a o b) x c -> a o (b x c)
                const ExprPtr& l = node->left();
                if (!l->is_binary() || !assoc_pair_ok(l->op(), node->op())) return nullptr;
                return Expr::make_binary(l->op(), l->left(),
                                         Expr::make_binary(node->op(), l->right(), node->right()));
            }
            if (a.variant == 1) {
                // a o (b x c) -> (a o b) x c
                const ExprPtr& r = node->right();
                if (!r->is_binary() || !assoc_pair_ok(node->op(), r->op())) return nullptr;
                return Expr::make_binary(r->op(),
                                         Expr::make_binary(node->op(), node->left(), r->left()),
                                         r->right());
            }
            return nullptr;
        }
        if (a.axiom == "add0") {
            if (a.variant != 0 || !param_count_ok(0)) return nullptr;
            if (!node->is_binary(BinaryOp::Add)) return nullptr;
            if (!node->right()->is_const() || node->right()->value() != 0) return nullptr;
            return node->left();
        }
        if (a.axiom == "mul1") {
            if (a.variant != 0 || !param_count_ok(0)) return nullptr;
            if (!node->is_binary(BinaryOp::Mul)) return nullptr;
            if (!node->right()->is_const() || node->right()->value() != 1) return nullptr;
            return node->left();
        }
        if (a.axiom == "dist") {
            if (a.variant != 0 || !param_count_ok(0)) return nullptr;
            if (!node->is_binary()) return nullptr;
            if (node->op() != BinaryOp::Add && node->op() != BinaryOp::Sub) return nullptr;
            const ExprPtr& l = node->left();
            const ExprPtr& r = node->right();
            if (!l->is_binary(BinaryOp::Mul) || !r->is_binary(BinaryOp::Mul)) return nullptr;
            if (!l->right()->is_var() || !r->right()->is_var()) return nullptr;
            if (contains_var(l->left()) || contains_var(r->left())) return nullptr;
            return Expr::make_binary(BinaryOp::Mul,
                                     Expr::make_binary(node->op(), l->left(), r->left()),
                                     Expr::make_var());
        }
        return nullptr;
    }

    // fractions
    if (a.axiom == "factorize") {
        if (a.variant != 0 || !param_count_ok(2)) return nullptr;
        if (!node->is_integer_const()) return nullptr;
        const Rational& fa = a.params[0];
        const Rational& fb = a.params[1];
        if (!is_integer(fa) || !is_integer(fb)) return nullptr;
        if (fa <= 1 || fb <= 1 || fa * fb != node->value()) return nullptr;
        return Expr::make_binary(BinaryOp::Mul, Expr::make_const(fa), Expr::make_const(fb));
    }
    if (a.axiom == "mfrac") {
        if (a.variant != 0 || !param_count_ok(0)) return nullptr;
        if (!node->is_integer_const() || in_fraction) return nullptr;
        return Expr::make_fraction(node, Expr::make_const(Rational(1)));
    }
    if (a.axiom == "cancel") {
        if (!param_count_ok(0) || !node->is_fraction()) return nullptr;
        const ExprPtr& num = node->left();
        const ExprPtr& den = node->right();
        if (a.variant == 0) {
            // [(a * b)]/[b] -> a
            if (!num->is_binary(BinaryOp::Mul) || !expr_equal(num->right(), den)) return nullptr;
            return num->left();
        }
        if (a.variant == 1) {
            // [(k * a)]/[(k * b)] -> [a]/[b]
            if (!num->is_binary(BinaryOp::Mul) || !den->is_binary(BinaryOp::Mul)) return nullptr;
            if (!expr_equal(num->left(), den->left())) return nullptr;
            return Expr::make_fraction(num->right(), den->right());
        }
        return nullptr;
    }
    if (a.axiom == "combine") {
        if (a.variant != 0 || !param_count_ok(0)) return nullptr;
        if (!node->is_binary()) return nullptr;
        if (node->op() != BinaryOp::Add && node->op() != BinaryOp::Sub) return nullptr;
        const ExprPtr& l = node->left();
        const ExprPtr& r = node->right();
        if (!l->is_fraction() || !r->is_fraction()) return nullptr;
        if (!expr_equal(l->right(), r->right())) return nullptr;
        return Expr::make_fraction(Expr::make_binary(node->op(), l->left(), r->left()), l->right());
    }
    if (a.axiom == "eval") {
        if (a.variant != 0 || !param_count_ok(0)) return nullptr;
        if (!in_fraction) return nullptr;
        if (!node->is_binary() || node->op() == BinaryOp::Div) return nullptr;
        if (!node->left()->is_integer_const() || !node->right()->is_integer_const()) return nullptr;
        return Expr::make_const(eval_binary_consts(node));
    }
    if (a.axiom == "simpl1") {
        if (a.variant != 0 || !param_count_ok(0)) return nullptr;
        if (!node->is_fraction()) return nullptr;
        if (!node->left()->is_integer_const()) return nullptr;
        if (!node->right()->is_const() || node->right()->value() != 1) return nullptr;
        return node->left();
    }
    if (a.axiom == "scale") {
        if (a.variant != 0 || !param_count_ok(1)) return nullptr;
        if (!node->is_fraction()) return nullptr;
        const Rational& k = a.params[0];
        if (!is_integer(k) || k <= 1) return nullptr;
        return Expr::make_fraction(
            Expr::make_binary(BinaryOp::Mul, Expr::make_const(k), node->left()),
            Expr::make_binary(BinaryOp::Mul, Expr::make_const(k), node->right()));
    }
    return nullptr;
}

std::vector<Rational> equation_param_pool(const ExprPtr& state) {
    std::set<Rational> pool;
    const std::function<void(const ExprPtr&)> walk = [&](const ExprPtr& e) {
        if (e->is_const()) {
            pool.insert(e->value());
            return;
        }
        if (e->is_var()) return;
        walk(e->left());
        walk(e->right());
    };
    walk(state);
    return {pool.begin(), pool.end()};
}

// Ascending ordered factor splits (a, n/a) with both factors > 1.
std::vector<std::pair<long long, long long>> factor_splits(const Rational& value) {
    std::vector<std::pair<long long, long long>> out;
    if (!is_integer(value)) return out;
    const BigInt& n = numerator(value);
    // Enumeration is capped; apply() still validates arbitrary splits.
    if (n < 4 || n > BigInt(1000000000000LL)) return out;
    long long v = n.convert_to<long long>();
    for (long long a = 2; a * a <= v; ++a) {
        if (v % a == 0) {
            out.emplace_back(a, v / a);
        }
    }
    // mirror splits (b, a), keeping global ascending order of the first factor
    std::vector<std::pair<long long, long long>> mirrored;
    for (auto it = out.rbegin(); it != out.rend(); ++it) {
        if (it->first != it->second) mirrored.emplace_back(it->second, it->first);
    }
    out.insert(out.end(), mirrored.begin(), mirrored.end());
    return out;
}

constexpr std::array<long long, 16> kPrimes = {2,  3,  5,  7,  11, 13, 17, 19,
                                               23, 29, 31, 37, 41, 43, 47, 53};

}  // namespace

// ---------------------------------------------------------------------------
// Templates
// ---------------------------------------------------------------------------

namespace {

const std::vector<std::string> kEasyTemplates = {
    "ax = b",
    "(a + x) = b",
    "(x + a) = b",
    "(x - a) = b",
    "(ax + b) = c",
    "(ax - b) = c",
    "(b + ax) = c",
    "ax = (b + c)",
    "(x + a) = (b + c)",
    "(x - a) = (b - c)",
    "(ax + b) = (c - d)",
    "((x + a) + b) = c",
};

const std::vector<std::string> kHardTemplates = {
    "((ax + bx) + cx) = ((d + e) + (f - g))",
    "((ax - bx) + cx) = ((d - e) + (f + g))",
    "((ax + bx) - cx) = ((d + e) - (f + g))",
    "((ax - bx) - cx) = ((d - e) - (f - g))",
    "((b + ax) + cx) = ((d + e) + (f + g))",
    "((ax + b) + cx) = ((d - e) + (f - g))",
    "(b + (ax + cx)) = ((d + e) - (f + g))",
    "((ax + bx) + c) = ((d + f) + (e + g))",
};

}  // namespace

const std::vector<std::string>& builtin_templates(const std::string& set_name) {
    if (set_name == "easy") return kEasyTemplates;
    if (set_name == "hard") return kHardTemplates;
    throw DomainError("unknown template set '" + set_name + "'");
}

std::string instantiate_template(const std::string& tmpl,
                                 const std::vector<std::pair<char, long long>>& assignment) {
    const auto lookup = [&](char c) -> long long {
        for (const auto& [letter, value] : assignment) {
            if (letter == c) return value;
        }
        throw DomainError(std::string("template letter '") + c + "' not assigned");
    };
    std::string out;
    for (std::size_t i = 0; i < tmpl.size(); ++i) {
        char c = tmpl[i];
        if (c >= 'a' && c <= 'h') {
            long long v = lookup(c);
            bool coef = i + 1 < tmpl.size() && tmpl[i + 1] == 'x';
            if (!coef && v < 0) {
                out += "(" + std::to_string(v) + ")";
            } else {
                out += std::to_string(v);
            }
        } else {
            out += c;
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Domain
// ---------------------------------------------------------------------------

Domain::Domain(SamplerConfig cfg) : cfg_(std::move(cfg)) {
    if (cfg_.domain == DomainKind::Equations) {
        axioms_ = equations_catalog();
        templates_ = cfg_.templates.empty() ? builtin_templates(cfg_.template_set) : cfg_.templates;
        if (cfg_.coeff_lo > cfg_.coeff_hi) throw DomainError("empty coefficient range");
    } else {
        axioms_ = fractions_catalog();
        if (cfg_.prime_pool_size < 1 || cfg_.prime_pool_size > static_cast<int>(kPrimes.size())) {
            throw DomainError("prime_pool_size out of range");
        }
        if (cfg_.max_prime_factors < 1) throw DomainError("max_prime_factors must be >= 1");
        prime_pool_.assign(kPrimes.begin(), kPrimes.begin() + cfg_.prime_pool_size);
    }
}

std::vector<std::string> Domain::axiom_ids() const {
    std::vector<std::string> ids;
    ids.reserve(axioms_.size());
    for (const auto& a : axioms_) ids.push_back(a.id);
    return ids;
}

void Domain::enumerate(const ExprPtr& state, const std::string* only_axiom,
                       std::vector<Application>& out) const {
    const auto want = [&](const char* id) { return only_axiom == nullptr || *only_axiom == id; };

    if (cfg_.domain == DomainKind::Equations && state->is_equation()) {
        const bool any_root = want("sub") || want("add") || want("mul") || want("div");
        if (any_root) {
            const std::vector<Rational> pool = equation_param_pool(state);
            const auto push_root = [&](const char* id, BinaryOp op, bool nonzero) {
                if (!want(id)) return;
                for (const Rational& t : pool) {
                    if (nonzero && t == 0) continue;
                    ExprPtr c = Expr::make_const(t);
                    ExprPtr next = Expr::make_equation(
                        Expr::make_binary(op, state->left(), c),
                        Expr::make_binary(op, state->right(), c));
                    out.push_back({ActionInstance{id, Path(), {t}, 0}, std::move(next)});
                }
            };
            push_root("sub", BinaryOp::Sub, false);
            push_root("add", BinaryOp::Add, false);
            push_root("mul", BinaryOp::Mul, true);
            push_root("div", BinaryOp::Div, true);
        }
    }

    // Node-local axioms, visited in path-lexicographic (pre)order.
    const std::function<void(const ExprPtr&, const Path&, bool)> walk =
        [&](const ExprPtr& node, const Path& path, bool in_fraction) {
            const auto try_action = [&](ActionInstance a) {
                ExprPtr replacement = rewrite_node(cfg_.domain, node, in_fraction, a);
                if (replacement) {
                    out.push_back({std::move(a), replace_at(state, path, replacement)});
                }
            };
            if (cfg_.domain == DomainKind::Equations) {
                if (want("eval")) try_action({"eval", path, {}, 0});
                if (want("comm")) try_action({"comm", path, {}, 0});
                if (want("assoc")) {
                    try_action({"assoc", path, {}, 0});
                    try_action({"assoc", path, {}, 1});
                }
                if (want("add0")) try_action({"add0", path, {}, 0});
                if (want("mul1")) try_action({"mul1", path, {}, 0});
                if (want("dist")) try_action({"dist", path, {}, 0});
            } else {
                if (want("factorize") && node->is_integer_const()) {
                    for (const auto& [fa, fb] : factor_splits(node->value())) {
                        try_action({"factorize", path, {Rational(fa), Rational(fb)}, 0});
                    }
                }
                if (want("cancel")) {
                    try_action({"cancel", path, {}, 0});
                    try_action({"cancel", path, {}, 1});
                }
                if (want("mfrac")) try_action({"mfrac", path, {}, 0});
                if (want("combine")) try_action({"combine", path, {}, 0});
                if (want("eval")) try_action({"eval", path, {}, 0});
                if (want("simpl1")) try_action({"simpl1", path, {}, 0});
                if (want("scale") && node->is_fraction()) {
                    for (long long k : prime_pool_) {
                        try_action({"scale", path, {Rational(k)}, 0});
                    }
                }
            }
            if (node->is_const() || node->is_var()) return;
            bool child_in_fraction = in_fraction || node->is_fraction();
            walk(node->left(), path.child('L'), child_in_fraction);
            walk(node->right(), path.child('R'), child_in_fraction);
        };
    walk(state, Path(), false);
}

std::vector<Application> Domain::actions(const ExprPtr& state) const {
    std::vector<Application> out;
    enumerate(state, nullptr, out);
    return out;
}

std::vector<Application> Domain::actions_of(const ExprPtr& state, const std::string& axiom) const {
    std::vector<Application> out;
    enumerate(state, &axiom, out);
    return out;
}

std::optional<ExprPtr> Domain::apply(const ExprPtr& state, const ActionInstance& action) const {
    if (cfg_.domain == DomainKind::Equations &&
        (action.axiom == "sub" || action.axiom == "add" || action.axiom == "mul" ||
         action.axiom == "div")) {
        if (!state->is_equation() || !action.path.empty() || action.variant != 0) return std::nullopt;
        if (action.params.size() != 1) return std::nullopt;
        const Rational& t = action.params[0];
        BinaryOp op;
        if (action.axiom == "sub") op = BinaryOp::Sub;
        else if (action.axiom == "add") op = BinaryOp::Add;
        else op = action.axiom == "mul" ? BinaryOp::Mul : BinaryOp::Div;
        if ((op == BinaryOp::Mul || op == BinaryOp::Div) && t == 0) return std::nullopt;
        ExprPtr c = Expr::make_const(t);
        return Expr::make_equation(Expr::make_binary(op, state->left(), c),
                                   Expr::make_binary(op, state->right(), c));
    }

    if (!path_valid(state, action.path)) return std::nullopt;
    bool in_fraction = false;
    ExprPtr node = state;
    for (char step : action.path.steps) {
        if (node->is_fraction()) in_fraction = true;
        node = step == 'L' ? node->left() : node->right();
    }
    ExprPtr replacement = rewrite_node(cfg_.domain, node, in_fraction, action);
    if (!replacement) return std::nullopt;
    return replace_at(state, action.path, replacement);
}

bool Domain::terminal(const ExprPtr& state) const {
    if (cfg_.domain == DomainKind::Equations) {
        return state->is_equation() && state->left()->is_var() && state->right()->is_const();
    }
    if (state->is_integer_const()) return true;
    if (state->is_fraction()) {
        const ExprPtr& num = state->left();
        const ExprPtr& den = state->right();
        if (!num->is_integer_const() || !den->is_integer_const()) return false;
        const BigInt& q = numerator(den->value());
        if (q < 2) return false;
        return gcd(abs(numerator(num->value())), q) == 1;
    }
    return false;
}

ExprPtr Domain::sample(Rng& rng) const {
    for (int attempt = 0; attempt < 1000; ++attempt) {
        ExprPtr state;
        if (cfg_.domain == DomainKind::Equations) {
            const std::string& tmpl = templates_[uniform_index(rng, templates_.size())];
            std::vector<std::pair<char, long long>> assignment;
            for (char c : tmpl) {
                if (c >= 'a' && c <= 'h') {
                    bool seen = false;
                    for (const auto& [letter, _] : assignment) {
                        if (letter == c) { seen = true; break; }
                    }
                    if (seen) continue;
                    long long v = 0;
                    while (v == 0) v = uniform_int(rng, cfg_.coeff_lo, cfg_.coeff_hi);
                    assignment.emplace_back(c, v);
                }
            }
            state = parse(instantiate_template(tmpl, assignment));
        } else {
            const auto sample_const = [&]() {
                long long factors = static_cast<long long>(
                    uniform_index(rng, static_cast<std::uint64_t>(cfg_.max_prime_factors) + 1));
                BigInt v = 1;
                for (long long i = 0; i < factors; ++i) {
                    v *= prime_pool_[uniform_index(rng, prime_pool_.size())];
                }
                return Expr::make_const(Rational(v));
            };
            const auto sample_fraction = [&]() {
                return Expr::make_fraction(sample_const(), sample_const());
            };
            std::uint64_t shape = uniform_index(rng, 5);
            if (shape == 0) {
                state = sample_fraction();
            } else {
                BinaryOp op = uniform_index(rng, 2) == 0 ? BinaryOp::Add : BinaryOp::Sub;
                ExprPtr l = (shape == 1 || shape == 2) ? sample_const() : ExprPtr(sample_fraction());
                ExprPtr r = (shape == 1 || shape == 3) ? sample_const() : ExprPtr(sample_fraction());
                state = Expr::make_binary(op, std::move(l), std::move(r));
            }
        }
        if (!terminal(state)) return state;
    }
    throw DomainError("failed to sample a non-terminal start state");
}

Path Domain::reported_path(const ExprPtr& state, const ActionInstance& action) const {
    if (action.axiom != "mfrac") return action.path;
    // The converted integer reports the nearest enclosing operation node.
    for (std::size_t len = action.path.size(); len-- > 0;) {
        Path prefix(action.path.steps.substr(0, len));
        if (node_at(state, prefix)->is_binary()) return prefix;
    }
    return Path();
}

Domain make_domain(const std::string& name) {
    return Domain(domain_preset(name));
}

SamplerConfig domain_preset(const std::string& name) {
    SamplerConfig cfg;
    if (name == "equations") {
        cfg.domain = DomainKind::Equations;
        cfg.template_set = "easy";
    } else if (name == "equations-hard") {
        cfg.domain = DomainKind::Equations;
        cfg.template_set = "hard";
    } else if (name == "fractions") {
        cfg.domain = DomainKind::Fractions;
        cfg.prime_pool_size = 4;
        cfg.max_prime_factors = 4;
    } else if (name == "fractions-hard") {
        cfg.domain = DomainKind::Fractions;
        cfg.prime_pool_size = 5;
        cfg.max_prime_factors = 6;
    } else {
        throw DomainError("unknown domain '" + name + "'");
    }
    return cfg;
}

}  // namespace absolve
