#pragma once

#include <string>
#include <vector>

#include "absolve/domain.hpp"
#include "absolve/expr.hpp"

namespace absolve {

// One solution step. Abstract steps (action.axiom is an abstraction id)
// carry the realized axiom-level witness; plain axiom steps have an empty
// witness. `state` is the expression after the step.
struct SolutionStep {
    ActionInstance action;
    std::vector<ActionInstance> witness;
    ExprPtr state;

    bool is_abstract() const { return !witness.empty(); }
};

struct SolutionTrace {
    ExprPtr problem;
    std::vector<SolutionStep> steps;

    std::size_t length() const { return steps.size(); }
    // Total axiom-level steps (witnesses expanded).
    std::size_t expanded_length() const {
        std::size_t n = 0;
        for (const auto& s : steps) n += s.is_abstract() ? s.witness.size() : 1;
        return n;
    }
};

class TraceError : public std::runtime_error {
public:
    explicit TraceError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace absolve
