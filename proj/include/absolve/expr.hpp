#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "absolve/rational.hpp"

namespace absolve {

enum class BinaryOp : std::uint8_t { Add, Sub, Mul, Div };

char op_char(BinaryOp op);

enum class ExprKind : std::uint8_t { Const, Var, Binary, Fraction, Equation };

class Expr;
using ExprPtr = std::shared_ptr<const Expr>;

// Immutable expression tree. Nodes are shared freely; rewrites copy the
// spine and reuse untouched subtrees.
class Expr {
public:
    static ExprPtr make_const(Rational value);
    static ExprPtr make_var();
    static ExprPtr make_binary(BinaryOp op, ExprPtr left, ExprPtr right);
    static ExprPtr make_fraction(ExprPtr numerator, ExprPtr denominator);
    static ExprPtr make_equation(ExprPtr lhs, ExprPtr rhs);

    ExprKind kind() const { return kind_; }
    BinaryOp op() const { return op_; }
    const Rational& value() const { return value_; }

    // left/right double as numerator/denominator (Fraction) and lhs/rhs (Equation).
    const ExprPtr& left() const { return left_; }
    const ExprPtr& right() const { return right_; }

    bool is_const() const { return kind_ == ExprKind::Const; }
    bool is_integer_const() const { return kind_ == ExprKind::Const && is_integer(value_); }
    bool is_var() const { return kind_ == ExprKind::Var; }
    bool is_binary() const { return kind_ == ExprKind::Binary; }
    bool is_binary(BinaryOp op) const { return kind_ == ExprKind::Binary && op_ == op; }
    bool is_fraction() const { return kind_ == ExprKind::Fraction; }
    bool is_equation() const { return kind_ == ExprKind::Equation; }

    // An integer constant times the variable, printed "8x".
    bool is_coef_var() const;

private:
    Expr(ExprKind kind, BinaryOp op, Rational value, ExprPtr left, ExprPtr right)
        : kind_(kind), op_(op), value_(std::move(value)), left_(std::move(left)), right_(std::move(right)) {}

    ExprKind kind_;
    BinaryOp op_;
    Rational value_;
    ExprPtr left_;
    ExprPtr right_;
};

bool expr_equal(const ExprPtr& a, const ExprPtr& b);
bool contains_var(const ExprPtr& e);
std::size_t node_count(const ExprPtr& e);
std::size_t tree_depth(const ExprPtr& e);

// Address of a node: child steps from the root. 'L'/'R' select binary and
// equation operands, and fraction numerator/denominator respectively.
struct Path {
    std::string steps;

    Path() = default;
    explicit Path(std::string s) : steps(std::move(s)) {}

    bool empty() const { return steps.empty(); }
    std::size_t size() const { return steps.size(); }
    Path child(char step) const { return Path(steps + step); }
    Path parent() const { return Path(steps.substr(0, steps.empty() ? 0 : steps.size() - 1)); }

    // "e" for the root, otherwise the raw step string.
    std::string display() const { return steps.empty() ? "e" : steps; }

    friend bool operator==(const Path&, const Path&) = default;
    friend auto operator<=>(const Path&, const Path&) = default;
};

// Pair of path suffixes after the maximal common prefix has been removed.
struct RelPos {
    Path first;
    Path second;

    std::string display() const { return "(" + first.display() + ", " + second.display() + ")"; }

    friend bool operator==(const RelPos&, const RelPos&) = default;
    friend auto operator<=>(const RelPos&, const RelPos&) = default;
};

RelPos relative_position(const Path& prev, const Path& next);

class PathError : public std::runtime_error {
public:
    explicit PathError(const std::string& what) : std::runtime_error(what) {}
};

bool path_valid(const ExprPtr& e, const Path& p);
ExprPtr node_at(const ExprPtr& e, const Path& p);
ExprPtr replace_at(const ExprPtr& e, const Path& p, const ExprPtr& sub);

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, std::size_t position)
        : std::runtime_error(what + " (at position " + std::to_string(position) + ")"), position_(position) {}

    std::size_t position() const { return position_; }

private:
    std::size_t position_;
};

ExprPtr parse(const std::string& text);
std::string print_expr(const ExprPtr& e);

class SemanticError : public std::runtime_error {
public:
    explicit SemanticError(const std::string& what) : std::runtime_error(what) {}
};

// Solution set of a linear equation in x.
struct SolutionSet {
    enum class Kind { Unique, All, None };

    Kind kind = Kind::Unique;
    Rational value;  // meaningful only for Unique

    static SolutionSet unique(Rational v) { return SolutionSet{Kind::Unique, std::move(v)}; }
    static SolutionSet all() { return SolutionSet{Kind::All, Rational(0)}; }
    static SolutionSet none() { return SolutionSet{Kind::None, Rational(0)}; }

    friend bool operator==(const SolutionSet&, const SolutionSet&) = default;
};

std::string solution_set_to_string(const SolutionSet& s);

// Rational for variable-free expressions, SolutionSet for equations.
using SemanticValue = std::variant<Rational, SolutionSet>;

SemanticValue semantic_value(const ExprPtr& e);

bool semantic_equal(const SemanticValue& a, const SemanticValue& b);

}  // namespace absolve
