#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "absolve/domain.hpp"
#include "absolve/io.hpp"
#include "test_util.hpp"

using namespace absolve;

namespace {

bool contains_successor(const std::vector<Application>& apps, const std::string& axiom,
                        const std::string& next_state) {
    for (const auto& app : apps) {
        if (app.action.axiom == axiom && print_expr(app.result) == next_state) return true;
    }
    return false;
}

}  // namespace

TEST_CASE("apply reproduces the worked rewrites") {
    Domain eq = make_domain("equations");
    Domain fr = make_domain("fractions");

    auto next = eq.apply(parse("(3 + x) = (-4)"), testutil::golden_action({"sub", "", {"3"}, 0, ""}));
    REQUIRE(next.has_value());
    CHECK(print_expr(*next) == "((3 + x) - 3) = ((-4) - 3)");

    next = eq.apply(parse("((3 + x) - 3) = ((-4) - 3)"), testutil::golden_action({"eval", "R", {}, 0, ""}));
    REQUIRE(next.has_value());
    CHECK(print_expr(*next) == "((3 + x) - 3) = (-7)");

    next = eq.apply(parse("(x + 0) = (-7)"), testutil::golden_action({"add0", "L", {}, 0, ""}));
    REQUIRE(next.has_value());
    CHECK(print_expr(*next) == "x = (-7)");

    next = fr.apply(parse("21 - [21]/[7]"), testutil::golden_action({"factorize", "RL", {"3", "7"}, 0, ""}));
    REQUIRE(next.has_value());
    CHECK(print_expr(*next) == "21 - [(3 * 7)]/[7]");

    next = eq.apply(parse("8x = 14"), testutil::golden_action({"div", "", {"8"}, 0, ""}));
    REQUIRE(next.has_value());
    CHECK(print_expr(*next) == "(8x / 8) = (14 / 8)");

    // not applicable: signals the caller to skip
    CHECK_FALSE(eq.apply(parse("x = (-7)"), testutil::golden_action({"add0", "L", {}, 0, ""})).has_value());
    CHECK_FALSE(eq.apply(parse("8x = 14"), testutil::golden_action({"div", "", {"0"}, 0, ""})).has_value());
    CHECK_FALSE(eq.apply(parse("8x = 14"), testutil::golden_action({"eval", "RRRR", {}, 0, ""})).has_value());
}

TEST_CASE("every golden step is enumerated with its exact successor") {
    for (const auto& trace : testutil::golden_traces()) {
        Domain domain = make_domain(trace.domain);
        ExprPtr state = parse(trace.start);
        for (const auto& step : trace.steps) {
            CAPTURE(trace.name);
            CAPTURE(step.state);
            auto apps = domain.actions(state);
            ActionInstance expected = testutil::golden_action(step);
            bool found = false;
            for (const auto& app : apps) {
                if (app.action == expected) {
                    CHECK(print_expr(app.result) == step.state);
                    found = true;
                }
            }
            CHECK(found);
            auto next = domain.apply(state, expected);
            REQUIRE(next.has_value());
            CHECK(print_expr(*next) == step.state);
            state = *next;
        }
    }
}

TEST_CASE("enumerate_actions catches the spec'd cases") {
    Domain eq = make_domain("equations");
    Domain fr = make_domain("fractions");

    auto apps = eq.actions(parse("(x + 0) = (-7)"));
    CHECK(contains_successor(apps, "add0", "x = (-7)"));

    apps = fr.actions(parse("21 - [21]/[7]"));
    CHECK(contains_successor(apps, "factorize", "21 - [(3 * 7)]/[7]"));
    CHECK(contains_successor(apps, "mfrac", "[21]/[1] - [21]/[7]"));

    // solved state: no action shortens it further; terminality is separate
    for (const auto& app : eq.actions(parse("x = (-7)"))) {
        CHECK_FALSE(eq.terminal(app.result));
    }
}

TEST_CASE("enumerate_actions returns no duplicate (action, successor) pairs") {
    Rng rng(3);
    for (const char* name : {"equations", "fractions"}) {
        Domain domain = make_domain(name);
        for (int i = 0; i < 30; ++i) {
            ExprPtr start = domain.sample(rng);
            for (const ExprPtr& state : testutil::random_walk(domain, start, rng, 4)) {
                auto apps = domain.actions(state);
                std::set<std::string> keys;
                for (const auto& app : apps) {
                    keys.insert(app.action.display() + "=>" + print_expr(app.result));
                }
                CHECK(keys.size() == apps.size());
            }
        }
    }
}

// Independent applicability scan: try apply() for every path with every
// axiom, variant and plausible parameter; must exactly match actions().
TEST_CASE("enumeration equals a brute-force applicability scan") {
    Rng rng(17);
    for (const char* name : {"equations", "fractions"}) {
        Domain domain = make_domain(name);
        for (int i = 0; i < 20; ++i) {
            ExprPtr start = domain.sample(rng);
            for (const ExprPtr& state : testutil::random_walk(domain, start, rng, 3)) {
                std::set<std::string> expected;
                std::set<Rational> consts;
                const std::function<void(const ExprPtr&)> collect = [&](const ExprPtr& e) {
                    if (e->is_const()) { consts.insert(e->value()); return; }
                    if (e->is_var()) return;
                    collect(e->left());
                    collect(e->right());
                };
                collect(state);
                for (const Path& path : testutil::all_paths(state)) {
                    for (const auto& info : domain.axioms()) {
                        std::vector<std::vector<Rational>> param_space;
                        if (!info.parameterized) {
                            param_space.push_back({});
                        } else if (info.id == "scale") {
                            for (long long k : domain.prime_pool()) param_space.push_back({Rational(k)});
                        } else if (info.id == "factorize") {
                            ExprPtr node = node_at(state, path);
                            if (node->is_integer_const() && node->value() > 3) {
                                long long n = numerator(node->value()).convert_to<long long>();
                                for (long long a = 2; a < n; ++a) {
                                    if (n % a == 0) param_space.push_back({Rational(a), Rational(n / a)});
                                }
                            }
                        } else {
                            for (const Rational& t : consts) param_space.push_back({t});
                        }
                        for (const auto& params : param_space) {
                            for (std::uint8_t variant = 0; variant < 2; ++variant) {
                                ActionInstance action{info.id, path, params, variant};
                                if (auto next = domain.apply(state, action)) {
                                    expected.insert(action.display() + "=>" + print_expr(*next));
                                }
                            }
                        }
                    }
                }
                std::set<std::string> actual;
                for (const auto& app : domain.actions(state)) {
                    actual.insert(app.action.display() + "=>" + print_expr(app.result));
                }
                CHECK(actual == expected);
            }
        }
    }
}

TEST_CASE("terminal predicates") {
    Domain eq = make_domain("equations");
    Domain fr = make_domain("fractions");
    CHECK(eq.terminal(parse("x = [7/4]")));
    CHECK(eq.terminal(parse("x = (-7)")));
    CHECK_FALSE(eq.terminal(parse("(x + 0) = (-7)")));
    CHECK_FALSE(eq.terminal(parse("8x = 14")));

    CHECK(fr.terminal(parse("18")));
    CHECK(fr.terminal(parse("[7]/[4]")));        // lowest terms
    CHECK(fr.terminal(parse("[-874]/[35]")));    // lowest terms
    CHECK_FALSE(fr.terminal(parse("[21]/[7]")));  // reducible
    CHECK_FALSE(fr.terminal(parse("[18]/[1]")));  // simpl1 still applies
    CHECK_FALSE(fr.terminal(parse("21 - 3")));
}

TEST_CASE("axiom soundness on random applications") {
    Rng rng(23);
    for (const char* name : {"equations", "fractions"}) {
        Domain domain = make_domain(name);
        int applications = 0;
        while (applications < 800) {
            ExprPtr state = domain.sample(rng);
            SemanticValue value = semantic_value(state);
            for (int step = 0; step < 6; ++step) {
                auto apps = domain.actions(state);
                if (apps.empty()) break;
                const auto& app = apps[uniform_index(rng, apps.size())];
                CHECK(semantic_equal(semantic_value(app.result), value));
                state = app.result;
                ++applications;
            }
        }
    }
}

TEST_CASE("sampler determinism and distribution bounds") {
    Domain easy = make_domain("fractions");
    Domain hard = make_domain("fractions-hard");

    Rng a(42), b(42);
    for (int i = 0; i < 20; ++i) {
        CHECK(print_expr(easy.sample(a)) == print_expr(easy.sample(b)));
    }

    const auto check_constants = [](const Domain& domain, const ExprPtr& e, long long max_prime,
                                    int max_factors) {
        const std::function<void(const ExprPtr&)> walk = [&](const ExprPtr& node) {
            if (node->is_const()) {
                long long v = numerator(node->value()).convert_to<long long>();
                REQUIRE(v >= 1);
                int factors = 0;
                for (long long p = 2; p <= v; ++p) {
                    while (v % p == 0) {
                        CHECK(p <= max_prime);
                        v /= p;
                        ++factors;
                    }
                }
                CHECK(factors <= max_factors);
                return;
            }
            if (node->is_var()) return;
            walk(node->left());
            walk(node->right());
        };
        walk(e);
    };

    Rng rng(7);
    for (int i = 0; i < 50; ++i) {
        check_constants(easy, easy.sample(rng), 7, 4);
        check_constants(hard, hard.sample(rng), 11, 6);
    }

    Domain eq = make_domain("equations");
    Rng rng2(9);
    for (int i = 0; i < 50; ++i) {
        ExprPtr p = eq.sample(rng2);
        CHECK(p->is_equation());
        CHECK_FALSE(eq.terminal(p));
        CHECK(std::holds_alternative<SolutionSet>(semantic_value(p)));
    }
}

TEST_CASE("template instantiation") {
    CHECK(instantiate_template("(a + x) = b", {{'a', 3}, {'b', -4}}) == "(3 + x) = (-4)");
    CHECK(instantiate_template("ax = b", {{'a', 8}, {'b', 14}}) == "8x = 14");
    CHECK(instantiate_template("(ax - b) = c", {{'a', 8}, {'b', 9}, {'c', 5}}) == "(8x - 9) = 5");
    CHECK(instantiate_template("ax = b", {{'a', -10}, {'b', -13}}) == "-10x = (-13)");
    CHECK_THROWS_AS(instantiate_template("az = b", {{'b', 1}}), DomainError);
}

TEST_CASE("reported paths: mfrac names the enclosing operation") {
    Domain fr = make_domain("fractions");
    ExprPtr state = parse("21 - 3");
    CHECK(fr.reported_path(state, {"mfrac", Path("L"), {}, 0}) == Path());
    CHECK(fr.reported_path(state, {"mfrac", Path("R"), {}, 0}) == Path());
    CHECK(fr.reported_path(parse("21"), {"mfrac", Path(), {}, 0}) == Path());
    CHECK(fr.reported_path(state, {"eval", Path(), {}, 0}) == Path());
    ExprPtr nested = parse("(3 * 7) - 3");
    CHECK(fr.reported_path(nested, {"mfrac", Path("LL"), {}, 0}) == Path("L"));
}

TEST_CASE("cancel handles both the whole-denominator and shared-factor forms") {
    Domain fr = make_domain("fractions");
    auto v0 = fr.apply(parse("[(3 * 7)]/[7]"), {"cancel", Path(), {}, 0});
    REQUIRE(v0.has_value());
    CHECK(print_expr(*v0) == "3");

    auto v1 = fr.apply(parse("[(2 * 875)]/[(2 * 35)]"), {"cancel", Path(), {}, 1});
    REQUIRE(v1.has_value());
    CHECK(print_expr(*v1) == "[875]/[35]");

    CHECK_FALSE(fr.apply(parse("[(7 * 3)]/[7]"), {"cancel", Path(), {}, 0}).has_value());
}

TEST_CASE("parameter pool is drawn from constants in the state") {
    Domain eq = make_domain("equations");
    auto apps = eq.actions_of(parse("(8x - 9) = 5"), "add");
    std::set<std::string> params;
    for (const auto& app : apps) params.insert(rational_to_string(app.action.params[0]));
    CHECK(params == std::set<std::string>{"5", "8", "9"});

    // div excludes zero
    apps = eq.actions_of(parse("(x + 0) = (-7)"), "div");
    for (const auto& app : apps) CHECK(app.action.params[0] != 0);
}

TEST_CASE("axiom catalog serialization") {
    Domain eq = make_domain("equations");
    std::string json_text = axiom_catalog_to_json(eq.axioms());
    auto parsed = axiom_catalog_from_json(json_text);
    REQUIRE(parsed.size() == eq.axioms().size());
    for (std::size_t i = 0; i < parsed.size(); ++i) {
        CHECK(parsed[i].id == eq.axioms()[i].id);
        CHECK(parsed[i].parameterized == eq.axioms()[i].parameterized);
    }
}
