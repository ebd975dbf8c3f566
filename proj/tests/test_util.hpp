#pragma once

#include <string>
#include <vector>

#include "absolve/domain.hpp"
#include "absolve/miner.hpp"

namespace absolve::testutil {

struct GoldenStep {
    const char* axiom;
    const char* path;
    std::vector<const char*> params;
    std::uint8_t variant;
    const char* state;
};

struct GoldenTrace {
    const char* name;
    const char* domain;
    const char* start;
    std::vector<GoldenStep> steps;
};

inline const std::vector<GoldenTrace>& golden_traces() {
    static const std::vector<GoldenTrace> traces = {
        {"A1-expansion",
         "equations",
         "(3 + x) = (-4)",
         {
             {"sub", "", {"3"}, 0, "((3 + x) - 3) = ((-4) - 3)"},
             {"eval", "R", {}, 0, "((3 + x) - 3) = (-7)"},
             {"comm", "LL", {}, 0, "((x + 3) - 3) = (-7)"},
             {"assoc", "L", {}, 0, "(x + (3 - 3)) = (-7)"},
             {"eval", "LR", {}, 0, "(x + 0) = (-7)"},
             {"add0", "L", {}, 0, "x = (-7)"},
         }},
        {"A2-expansion",
         "equations",
         "(8x - 9) = 5",
         {
             {"add", "", {"9"}, 0, "((8x - 9) + 9) = (5 + 9)"},
             {"eval", "R", {}, 0, "((8x - 9) + 9) = 14"},
             {"comm", "L", {}, 0, "(9 + (8x - 9)) = 14"},
             {"assoc", "L", {}, 1, "((9 + 8x) - 9) = 14"},
             {"comm", "LL", {}, 0, "((8x + 9) - 9) = 14"},
             {"assoc", "L", {}, 0, "(8x + (9 - 9)) = 14"},
             {"eval", "LR", {}, 0, "(8x + 0) = 14"},
             {"add0", "L", {}, 0, "8x = 14"},
         }},
        {"A3-expansion",
         "equations",
         "8x = 14",
         {
             {"div", "", {"8"}, 0, "(8x / 8) = (14 / 8)"},
             {"eval", "R", {}, 0, "(8x / 8) = [7/4]"},
             {"comm", "LL", {}, 0, "((x * 8) / 8) = [7/4]"},
             {"assoc", "L", {}, 0, "(x * (8 / 8)) = [7/4]"},
             {"eval", "LR", {}, 0, "(x * 1) = [7/4]"},
             {"mul1", "L", {}, 0, "x = [7/4]"},
         }},
        {"fractions-expansion",
         "fractions",
         "21 - [21]/[7]",
         {
             {"factorize", "RL", {"3", "7"}, 0, "21 - [(3 * 7)]/[7]"},
             {"cancel", "R", {}, 0, "21 - 3"},
             {"mfrac", "L", {}, 0, "[21]/[1] - 3"},
             {"mfrac", "R", {}, 0, "[21]/[1] - [3]/[1]"},
             {"combine", "", {}, 0, "[(21 - 3)]/[1]"},
             {"eval", "L", {}, 0, "[18]/[1]"},
             {"simpl1", "", {}, 0, "18"},
         }},
    };
    return traces;
}

inline ActionInstance golden_action(const GoldenStep& step) {
    ActionInstance action;
    action.axiom = step.axiom;
    action.path = Path(step.path);
    for (const char* p : step.params) action.params.push_back(rational_from_string(p));
    action.variant = step.variant;
    return action;
}

inline RelPos rel(const char* a, const char* b) {
    return RelPos{Path(a), Path(b)};
}

inline Abstraction make_abstraction(std::string id, std::vector<std::string> elements,
                                    std::vector<RelPos> relpos) {
    Abstraction abs;
    abs.id = std::move(id);
    abs.kind = ProjectionKind::RelAbs;
    abs.elements = std::move(elements);
    abs.relpos = std::move(relpos);
    return abs;
}

// The worked abstractions from the equation traces, nested exactly as specified.
inline Library equations_library() {
    Library lib;
    lib.add(make_abstraction("S1", {"sub", "eval", "comm"}, {rel("", "R"), rel("R", "LL")}));
    lib.add(make_abstraction("S2", {"assoc", "eval", "add0"}, {rel("", "R"), rel("R", "")}));
    lib.add(make_abstraction("A1", {"S1", "S2"}, {rel("L", "")}));
    lib.add(make_abstraction("P1", {"add", "eval", "comm", "assoc", "comm"},
                             {rel("", "R"), rel("R", "L"), rel("", ""), rel("", "L")}));
    lib.add(make_abstraction("A2", {"P1", "S2"}, {rel("L", "")}));
    lib.add(make_abstraction("A3", {"div", "eval", "comm", "assoc", "eval", "mul1"},
                             {rel("", "R"), rel("R", "LL"), rel("L", ""), rel("", "R"), rel("R", "")}));
    return lib;
}

inline Library fractions_library() {
    Library lib;
    lib.add(make_abstraction("A4", {"factorize", "cancel"}, {rel("L", "")}));
    lib.add(make_abstraction("Q1", {"mfrac", "combine", "eval", "simpl1"},
                             {rel("", ""), rel("", "L"), rel("L", "")}));
    lib.add(make_abstraction("A5", {"mfrac", "Q1"}, {rel("", "")}));
    return lib;
}

// Small random expression, fraction-free; used for path/replace properties.
inline ExprPtr random_expression(Rng& rng, int depth) {
    if (depth <= 0 || uniform_index(rng, 4) == 0) {
        if (uniform_index(rng, 4) == 0) return Expr::make_var();
        return Expr::make_const(Rational(uniform_int(rng, -9, 9)));
    }
    auto op = static_cast<BinaryOp>(uniform_index(rng, 4));
    return Expr::make_binary(op, random_expression(rng, depth - 1), random_expression(rng, depth - 1));
}

inline std::vector<Path> all_paths(const ExprPtr& e) {
    std::vector<Path> out;
    const std::function<void(const ExprPtr&, Path)> walk = [&](const ExprPtr& node, Path path) {
        out.push_back(path);
        if (node->is_const() || node->is_var()) return;
        walk(node->left(), path.child('L'));
        walk(node->right(), path.child('R'));
    };
    walk(e, Path());
    return out;
}

// Random walk through enumerated actions; returns visited states.
inline std::vector<ExprPtr> random_walk(const Domain& domain, const ExprPtr& start, Rng& rng,
                                        int max_steps) {
    std::vector<ExprPtr> states = {start};
    ExprPtr state = start;
    for (int i = 0; i < max_steps; ++i) {
        auto apps = domain.actions(state);
        if (apps.empty()) break;
        state = apps[uniform_index(rng, apps.size())].result;
        states.push_back(state);
    }
    return states;
}

}  // namespace absolve::testutil
