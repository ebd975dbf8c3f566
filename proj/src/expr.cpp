#include "absolve/expr.hpp"

#include <algorithm>
#include <cctype>

namespace absolve {

char op_char(BinaryOp op) {
    switch (op) {
        case BinaryOp::Add: return '+';
        case BinaryOp::Sub: return '-';
        case BinaryOp::Mul: return '*';
        case BinaryOp::Div: return '/';
    }
    return '?';
}

ExprPtr Expr::make_const(Rational value) {
    return ExprPtr(new Expr(ExprKind::Const, BinaryOp::Add, std::move(value), nullptr, nullptr));
}

ExprPtr Expr::make_var() {
    return ExprPtr(new Expr(ExprKind::Var, BinaryOp::Add, Rational(0), nullptr, nullptr));
}

ExprPtr Expr::make_binary(BinaryOp op, ExprPtr left, ExprPtr right) {
    return ExprPtr(new Expr(ExprKind::Binary, op, Rational(0), std::move(left), std::move(right)));
}

ExprPtr Expr::make_fraction(ExprPtr numerator, ExprPtr denominator) {
    return ExprPtr(new Expr(ExprKind::Fraction, BinaryOp::Add, Rational(0), std::move(numerator), std::move(denominator)));
}

ExprPtr Expr::make_equation(ExprPtr lhs, ExprPtr rhs) {
    return ExprPtr(new Expr(ExprKind::Equation, BinaryOp::Add, Rational(0), std::move(lhs), std::move(rhs)));
}

bool Expr::is_coef_var() const {
    return kind_ == ExprKind::Binary && op_ == BinaryOp::Mul && left_->is_integer_const() && right_->is_var();
}

bool expr_equal(const ExprPtr& a, const ExprPtr& b) {
    if (a.get() == b.get()) return true;
    if (!a || !b) return false;
    if (a->kind() != b->kind()) return false;
    switch (a->kind()) {
        case ExprKind::Const: return a->value() == b->value();
        case ExprKind::Var: return true;
        case ExprKind::Binary:
            if (a->op() != b->op()) return false;
            [[fallthrough]];
        case ExprKind::Fraction:
        case ExprKind::Equation:
            return expr_equal(a->left(), b->left()) && expr_equal(a->right(), b->right());
    }
    return false;
}

bool contains_var(const ExprPtr& e) {
    if (!e) return false;
    if (e->is_var()) return true;
    if (e->is_const()) return false;
    return contains_var(e->left()) || contains_var(e->right());
}

std::size_t node_count(const ExprPtr& e) {
    if (!e) return 0;
    if (e->is_const() || e->is_var()) return 1;
    return 1 + node_count(e->left()) + node_count(e->right());
}

std::size_t tree_depth(const ExprPtr& e) {
    if (!e) return 0;
    if (e->is_const() || e->is_var()) return 1;
    return 1 + std::max(tree_depth(e->left()), tree_depth(e->right()));
}

RelPos relative_position(const Path& prev, const Path& next) {
    std::size_t i = 0;
    while (i < prev.steps.size() && i < next.steps.size() && prev.steps[i] == next.steps[i]) {
        ++i;
    }
    return RelPos{Path(prev.steps.substr(i)), Path(next.steps.substr(i))};
}

namespace {

const ExprPtr* child_for_step(const ExprPtr& e, char step) {
    if (!e || e->is_const() || e->is_var()) return nullptr;
    if (step == 'L') return &e->left();
    if (step == 'R') return &e->right();
    return nullptr;
}

}  // namespace

bool path_valid(const ExprPtr& e, const Path& p) {
    const ExprPtr* cur = &e;
    for (char step : p.steps) {
        cur = child_for_step(*cur, step);
        if (cur == nullptr) return false;
    }
    return true;
}

ExprPtr node_at(const ExprPtr& e, const Path& p) {
    const ExprPtr* cur = &e;
    for (char step : p.steps) {
        cur = child_for_step(*cur, step);
        if (cur == nullptr) {
            throw PathError("invalid path '" + p.display() + "'");
        }
    }
    return *cur;
}

namespace {

ExprPtr replace_rec(const ExprPtr& e, const std::string& steps, std::size_t i, const ExprPtr& sub) {
    if (i == steps.size()) return sub;
    char step = steps[i];
    if (!e || e->is_const() || e->is_var() || (step != 'L' && step != 'R')) {
        throw PathError("invalid path '" + (steps.empty() ? std::string("e") : steps) + "'");
    }
    ExprPtr l = e->left();
    ExprPtr r = e->right();
    if (step == 'L') {
        l = replace_rec(l, steps, i + 1, sub);
    } else {
        r = replace_rec(r, steps, i + 1, sub);
    }
    switch (e->kind()) {
        case ExprKind::Binary: return Expr::make_binary(e->op(), std::move(l), std::move(r));
        case ExprKind::Fraction: return Expr::make_fraction(std::move(l), std::move(r));
        case ExprKind::Equation: return Expr::make_equation(std::move(l), std::move(r));
        default: break;
    }
    throw PathError("invalid path");
}

}  // namespace

ExprPtr replace_at(const ExprPtr& e, const Path& p, const ExprPtr& sub) {
    return replace_rec(e, p.steps, 0, sub);
}

// ---------------------------------------------------------------------------
// Printing
// ---------------------------------------------------------------------------

namespace {

// in_bracket: direct child of a fraction, where the square brackets already
// delimit the operand and negative constants stay bare ("[-874]/[35]").
void print_operand(std::string& out, const ExprPtr& e, bool in_bracket) {
    switch (e->kind()) {
        case ExprKind::Const: {
            const Rational& v = e->value();
            if (is_integer(v)) {
                std::string digits = numerator(v).str();
                if (v < 0 && !in_bracket) {
                    out += '(';
                    out += digits;
                    out += ')';
                } else {
                    out += digits;
                }
            } else {
                out += '[';
                out += numerator(v).str();
                out += '/';
                out += denominator(v).str();
                out += ']';
            }
            return;
        }
        case ExprKind::Var:
            out += 'x';
            return;
        case ExprKind::Binary: {
            if (e->is_coef_var()) {
                out += numerator(e->left()->value()).str();
                out += 'x';
                return;
            }
            out += '(';
            print_operand(out, e->left(), false);
            out += ' ';
            out += op_char(e->op());
            out += ' ';
            print_operand(out, e->right(), false);
            out += ')';
            return;
        }
        case ExprKind::Fraction:
            out += '[';
            print_operand(out, e->left(), true);
            out += "]/[";
            print_operand(out, e->right(), true);
            out += ']';
            return;
        case ExprKind::Equation:
            throw std::logic_error("equation below the root");
    }
}

}  // namespace

std::string print_expr(const ExprPtr& e) {
    std::string out;
    if (e->is_equation()) {
        print_operand(out, e->left(), false);
        out += " = ";
        print_operand(out, e->right(), false);
    } else if (e->is_binary() && !e->is_coef_var()) {
        // A top-level operation prints without the enclosing parentheses.
        print_operand(out, e->left(), false);
        out += ' ';
        out += op_char(e->op());
        out += ' ';
        print_operand(out, e->right(), false);
    } else {
        print_operand(out, e, false);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Parsing
// ---------------------------------------------------------------------------

namespace {

bool is_op_char(char c) {
    return c == '+' || c == '-' || c == '*' || c == '/';
}

BinaryOp op_from_char(char c) {
    switch (c) {
        case '+': return BinaryOp::Add;
        case '-': return BinaryOp::Sub;
        case '*': return BinaryOp::Mul;
        case '/': return BinaryOp::Div;
    }
    throw std::logic_error("not an operator");
}

struct Parser {
    const std::string& text;
    std::size_t pos = 0;

    explicit Parser(const std::string& t) : text(t) {}

    void skip_spaces() {
        while (pos < text.size() && text[pos] == ' ') ++pos;
    }

    char peek() const { return pos < text.size() ? text[pos] : '\0'; }
    char peek_at(std::size_t offset) const {
        return pos + offset < text.size() ? text[pos + offset] : '\0';
    }

    [[noreturn]] void fail(const std::string& message) const { throw ParseError(message, pos); }

    void expect(char c) {
        if (peek() != c) fail(std::string("expected '") + c + "'");
        ++pos;
    }

    ExprPtr parse_input() {
        skip_spaces();
        ExprPtr lhs = parse_chain();
        skip_spaces();
        if (peek() == '=') {
            ++pos;
            ExprPtr rhs = parse_chain();
            skip_spaces();
            if (pos != text.size()) fail("unexpected trailing input");
            return Expr::make_equation(std::move(lhs), std::move(rhs));
        }
        if (pos != text.size()) fail("unexpected trailing input");
        return lhs;
    }

    // operand, optionally continued by a single bare "op operand". The
    // grammar has no precedence, so at most one unparenthesized operator
    // is accepted per level.
    ExprPtr parse_chain() {
        ExprPtr a = parse_operand();
        skip_spaces();
        if (is_op_char(peek())) {
            char c = peek();
            ++pos;
            ExprPtr b = parse_operand();
            return Expr::make_binary(op_from_char(c), std::move(a), std::move(b));
        }
        return a;
    }

    ExprPtr parse_operand() {
        skip_spaces();
        char c = peek();
        if (c == '(') {
            ++pos;
            ExprPtr inner = parse_paren_body();
            skip_spaces();
            expect(')');
            return inner;
        }
        if (c == '[') {
            return parse_bracket();
        }
        if (c == 'x') {
            ++pos;
            return Expr::make_var();
        }
        if (c == '-' || std::isdigit(static_cast<unsigned char>(c))) {
            return parse_number_or_coefvar();
        }
        fail("expected expression");
    }

    ExprPtr parse_paren_body() {
        ExprPtr a = parse_operand();
        skip_spaces();
        if (peek() == ')') {
            return a;  // "(-4)" and similar single-operand groups
        }
        if (!is_op_char(peek())) fail("expected operator");
        char c = peek();
        ++pos;
        ExprPtr b = parse_operand();
        return Expr::make_binary(op_from_char(c), std::move(a), std::move(b));
    }

    // Either a fraction "[n]/[d]" or a rational constant "[p/q]". The two
    // are distinguished by whether "]/[" (no spaces) follows the first part.
    ExprPtr parse_bracket() {
        std::size_t open_pos = pos;
        expect('[');
        ExprPtr first = parse_chain();
        skip_spaces();
        expect(']');
        if (peek() == '/' && peek_at(1) == '[') {
            pos += 2;
            ExprPtr second = parse_chain();
            skip_spaces();
            expect(']');
            if (contains_var(first) || contains_var(second)) {
                pos = open_pos;
                fail("variable inside a fraction");
            }
            return Expr::make_fraction(std::move(first), std::move(second));
        }
        // "[p/q]": the content must be a division of two integer constants.
        if (first->is_binary(BinaryOp::Div) && first->left()->is_integer_const() &&
            first->right()->is_integer_const()) {
            if (first->right()->value() == 0) {
                pos = open_pos;
                fail("rational literal with zero denominator");
            }
            return Expr::make_const(first->left()->value() / first->right()->value());
        }
        pos = open_pos;
        fail("expected '[p/q]' or '[n]/[d]'");
    }

    ExprPtr parse_number_or_coefvar() {
        std::size_t start = pos;
        if (peek() == '-') ++pos;
        if (!std::isdigit(static_cast<unsigned char>(peek()))) fail("expected digits");
        while (std::isdigit(static_cast<unsigned char>(peek()))) ++pos;
        BigInt value(text.substr(start, pos - start));
        if (peek() == 'x') {
            ++pos;
            return Expr::make_binary(BinaryOp::Mul, Expr::make_const(Rational(value)), Expr::make_var());
        }
        return Expr::make_const(Rational(value));
    }
};

}  // namespace

ExprPtr parse(const std::string& text) {
    Parser parser(text);
    return parser.parse_input();
}

// ---------------------------------------------------------------------------
// Semantics
// ---------------------------------------------------------------------------

namespace {

Rational eval_rational(const ExprPtr& e);

// Value of a subtree as coef * x + cons; rejects anything nonlinear.
struct LinearForm {
    Rational coef;
    Rational cons;
};

LinearForm linear_form(const ExprPtr& e) {
    switch (e->kind()) {
        case ExprKind::Const:
            return {Rational(0), e->value()};
        case ExprKind::Var:
            return {Rational(1), Rational(0)};
        case ExprKind::Fraction:
            return {Rational(0), eval_rational(e)};
        case ExprKind::Binary: {
            LinearForm a = linear_form(e->left());
            LinearForm b = linear_form(e->right());
            switch (e->op()) {
                case BinaryOp::Add:
                    return {a.coef + b.coef, a.cons + b.cons};
                case BinaryOp::Sub:
                    return {a.coef - b.coef, a.cons - b.cons};
                case BinaryOp::Mul:
                    if (a.coef != 0 && b.coef != 0) throw SemanticError("nonlinear equation");
                    return {a.coef * b.cons + b.coef * a.cons, a.cons * b.cons};
                case BinaryOp::Div:
                    if (b.coef != 0) throw SemanticError("nonlinear equation");
                    if (b.cons == 0) throw SemanticError("division by zero");
                    return {a.coef / b.cons, a.cons / b.cons};
            }
            break;
        }
        case ExprKind::Equation:
            throw SemanticError("equation below the root");
    }
    throw SemanticError("unreachable");
}

Rational eval_rational(const ExprPtr& e) {
    switch (e->kind()) {
        case ExprKind::Const:
            return e->value();
        case ExprKind::Var:
            throw SemanticError("variable in a value expression");
        case ExprKind::Binary: {
            Rational a = eval_rational(e->left());
            Rational b = eval_rational(e->right());
            switch (e->op()) {
                case BinaryOp::Add: return a + b;
                case BinaryOp::Sub: return a - b;
                case BinaryOp::Mul: return a * b;
                case BinaryOp::Div:
                    if (b == 0) throw SemanticError("division by zero");
                    return a / b;
            }
            break;
        }
        case ExprKind::Fraction: {
            Rational num = eval_rational(e->left());
            Rational den = eval_rational(e->right());
            if (den == 0) throw SemanticError("division by zero");
            return num / den;
        }
        case ExprKind::Equation:
            throw SemanticError("equation below the root");
    }
    throw SemanticError("unreachable");
}

}  // namespace

std::string solution_set_to_string(const SolutionSet& s) {
    switch (s.kind) {
        case SolutionSet::Kind::Unique: return "x = " + rational_to_string(s.value);
        case SolutionSet::Kind::All: return "all";
        case SolutionSet::Kind::None: return "none";
    }
    return "?";
}

SemanticValue semantic_value(const ExprPtr& e) {
    if (e->is_equation()) {
        LinearForm lhs = linear_form(e->left());
        LinearForm rhs = linear_form(e->right());
        Rational coef = lhs.coef - rhs.coef;
        Rational cons = rhs.cons - lhs.cons;
        if (coef == 0) {
            return cons == 0 ? SolutionSet::all() : SolutionSet::none();
        }
        return SolutionSet::unique(cons / coef);
    }
    return eval_rational(e);
}

bool semantic_equal(const SemanticValue& a, const SemanticValue& b) {
    if (a.index() != b.index()) return false;
    if (std::holds_alternative<Rational>(a)) {
        return std::get<Rational>(a) == std::get<Rational>(b);
    }
    return std::get<SolutionSet>(a) == std::get<SolutionSet>(b);
}

}  // namespace absolve
