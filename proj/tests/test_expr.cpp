#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "absolve/expr.hpp"
#include "test_util.hpp"

using namespace absolve;

TEST_CASE("parse builds the expected trees") {
    ExprPtr eq = parse("(3 + x) = (-4)");
    REQUIRE(eq->is_equation());
    CHECK(eq->left()->is_binary(BinaryOp::Add));
    CHECK(eq->left()->left()->value() == 3);
    CHECK(eq->left()->right()->is_var());
    CHECK(eq->right()->value() == -4);

    CHECK(parse("x")->is_var());

    ExprPtr frac = parse("21 - [21]/[7]");
    REQUIRE(frac->is_binary(BinaryOp::Sub));
    CHECK(frac->left()->value() == 21);
    REQUIRE(frac->right()->is_fraction());
    CHECK(frac->right()->left()->value() == 21);
    CHECK(frac->right()->right()->value() == 7);

    ExprPtr coef = parse("8x");
    REQUIRE(coef->is_coef_var());
    CHECK(coef->left()->value() == 8);
    CHECK(parse("-10x")->is_coef_var());
    CHECK_FALSE(parse("(x * 1)")->is_coef_var());

    ExprPtr rat = parse("x = [7/4]");
    CHECK(rat->right()->is_const());
    CHECK(rat->right()->value() == Rational(7, 4));

    ExprPtr neg_rat = parse("x = [-7/4]");
    CHECK(neg_rat->right()->value() == Rational(-7, 4));
}

TEST_CASE("print emits canonical forms") {
    ExprPtr e = Expr::make_equation(
        Expr::make_binary(BinaryOp::Add, Expr::make_var(), Expr::make_const(Rational(0))),
        Expr::make_const(Rational(-7)));
    CHECK(print_expr(e) == "(x + 0) = (-7)");
    CHECK(print_expr(Expr::make_var()) == "x");
    CHECK(print_expr(Expr::make_fraction(Expr::make_const(Rational(18)),
                                         Expr::make_const(Rational(1)))) == "[18]/[1]");
    CHECK(print_expr(Expr::make_fraction(Expr::make_const(Rational(-874)),
                                         Expr::make_const(Rational(35)))) == "[-874]/[35]");
    CHECK(print_expr(parse("(-4)")) == "(-4)");
    CHECK(print_expr(parse("8x = 14")) == "8x = 14");
}

TEST_CASE("round trip over the golden corpus") {
    for (const auto& trace : testutil::golden_traces()) {
        CHECK(print_expr(parse(trace.start)) == trace.start);
        for (const auto& step : trace.steps) {
            CAPTURE(step.state);
            CHECK(print_expr(parse(step.state)) == step.state);
        }
    }
}

TEST_CASE("parse canonicalizes bare operations at the top level") {
    // An equation side written without the outer parentheses still parses;
    // printing restores the canonical parenthesized form.
    CHECK(print_expr(parse("(8x / 8) = 14 / 8")) == "(8x / 8) = (14 / 8)");
    CHECK(print_expr(parse("21 - [21]/[7]")) == "21 - [21]/[7]");
}

TEST_CASE("parse rejects malformed input") {
    CHECK_THROWS_AS(parse("((3 + x)"), ParseError);
    CHECK_THROWS_AS(parse("3 + + 4"), ParseError);
    CHECK_THROWS_AS(parse(""), ParseError);
    CHECK_THROWS_AS(parse("x = "), ParseError);
    CHECK_THROWS_AS(parse("[7/0]"), ParseError);
    CHECK_THROWS_AS(parse("[x]/[2]"), ParseError);
    CHECK_THROWS_AS(parse("3 + 4 + 5"), ParseError);  // no precedence: one bare op per level
    try {
        parse("(3 + ?)");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.position() == 5);
    }
}

TEST_CASE("node_at addresses subtrees") {
    ExprPtr e = parse("((3 + x) - 3) = (-7)");
    CHECK(expr_equal(node_at(e, Path("LL")), parse("(3 + x)")));
    CHECK(node_at(e, Path()) == e);
    CHECK(print_expr(node_at(parse("8x = 14"), Path("R"))) == "14");

    ExprPtr f = parse("21 - [21]/[7]");
    CHECK(print_expr(node_at(f, Path("RL"))) == "21");
    CHECK(print_expr(node_at(f, Path("RR"))) == "7");

    CHECK_THROWS_AS(node_at(e, Path("LLLL")), PathError);
    CHECK_FALSE(path_valid(e, Path("X")));
}

TEST_CASE("replace_at rebuilds the spine only") {
    ExprPtr e = parse("(x + (3 - 3)) = (-7)");
    ExprPtr replaced = replace_at(e, Path("LR"), parse("0"));
    CHECK(print_expr(replaced) == "(x + 0) = (-7)");
    CHECK(print_expr(e) == "(x + (3 - 3)) = (-7)");  // input untouched
    CHECK(e->right().get() == replaced->right().get());

    ExprPtr f = parse("21 - [21]/[7]");
    CHECK(print_expr(replace_at(f, Path("RL"), parse("(3 * 7)"))) == "21 - [(3 * 7)]/[7]");
    CHECK(replace_at(e, Path(), f) == f);
    CHECK_THROWS_AS(replace_at(e, Path("RRR"), f), PathError);
}

TEST_CASE("node_at and replace_at cohere on random trees") {
    Rng rng(7);
    for (int i = 0; i < 200; ++i) {
        ExprPtr e = testutil::random_expression(rng, 4);
        auto paths = testutil::all_paths(e);
        Path p = paths[uniform_index(rng, paths.size())];
        ExprPtr sub = testutil::random_expression(rng, 2);
        CHECK(expr_equal(node_at(replace_at(e, p, sub), p), sub));
    }
}

TEST_CASE("relative_position strips the maximal common prefix") {
    CHECK(relative_position(Path(), Path("R")) == testutil::rel("", "R"));
    CHECK(relative_position(Path("LL"), Path("L")) == testutil::rel("L", ""));
    CHECK(relative_position(Path("LR"), Path("LR")) == testutil::rel("", ""));
    CHECK(relative_position(Path("R"), Path("LL")) == testutil::rel("R", "LL"));
    CHECK(relative_position(Path("RL"), Path("R")) == testutil::rel("L", ""));
}

TEST_CASE("relative_position never leaves a shared prefix and is invertible") {
    Rng rng(11);
    const auto random_path = [&]() {
        std::string s;
        for (std::uint64_t i = 0, n = uniform_index(rng, 5); i < n; ++i) {
            s += uniform_index(rng, 2) == 0 ? 'L' : 'R';
        }
        return Path(s);
    };
    for (int i = 0; i < 500; ++i) {
        Path a = random_path();
        Path b = random_path();
        RelPos r = relative_position(a, b);
        bool shares_prefix = !r.first.empty() && !r.second.empty() &&
                             r.first.steps.front() == r.second.steps.front();
        CHECK_FALSE(shares_prefix);
        std::string prefix = a.steps.substr(0, a.steps.size() - r.first.steps.size());
        CHECK(prefix + r.first.steps == a.steps);
        CHECK(prefix + r.second.steps == b.steps);
    }
}

TEST_CASE("semantic_value on equations and expressions") {
    auto sol = std::get<SolutionSet>(semantic_value(parse("(3 + x) = (-4)")));
    CHECK(sol == SolutionSet::unique(Rational(-7)));
    CHECK(std::get<SolutionSet>(semantic_value(parse("x = x"))) == SolutionSet::all());
    CHECK(std::get<SolutionSet>(semantic_value(parse("(x - x) = 4"))) == SolutionSet::none());
    CHECK(std::get<Rational>(semantic_value(parse("21 - [21]/[7]"))) == 18);
    CHECK(std::get<SolutionSet>(semantic_value(parse("x = [7/4]"))) ==
          SolutionSet::unique(Rational(7, 4)));
    CHECK(std::get<SolutionSet>(semantic_value(parse("8x = 14"))) ==
          SolutionSet::unique(Rational(7, 4)));

    CHECK_THROWS_AS(semantic_value(parse("3 / (2 - 2)")), SemanticError);
    CHECK_THROWS_AS(semantic_value(parse("(x * x) = 4")), SemanticError);
    CHECK_THROWS_AS(semantic_value(parse("x + 1")), SemanticError);  // no Var outside equations
}

TEST_CASE("rational helpers") {
    CHECK(rational_to_string(Rational(7, 4)) == "7/4");
    CHECK(rational_to_string(Rational(-8)) == "-8");
    CHECK(rational_from_string("14/8") == Rational(7, 4));
    CHECK_THROWS_AS(rational_from_string("3/0"), ArithmeticError);
    CHECK_THROWS_AS(rational_from_string("abc"), ArithmeticError);
}
