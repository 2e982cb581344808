#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "invmean/error.hpp"
#include "invmean/mean.hpp"

namespace invmean {

struct SourcePos {
    std::size_t line = 1;
    std::size_t column = 1;

    friend bool operator==(const SourcePos&, const SourcePos&) = default;
};

class ParseError : public Error {
public:
    ParseError(const std::string& message, SourcePos pos, std::vector<std::string> expected = {});

    SourcePos position() const noexcept { return pos_; }
    const std::vector<std::string>& expected() const noexcept { return expected_; }
    const std::string& message() const noexcept { return message_; }

private:
    std::string message_;
    SourcePos pos_;
    std::vector<std::string> expected_;
};

/// Runtime failure inside an expression (division by zero, negative radicand, ...).
class EvalError : public Error {
public:
    EvalError(const std::string& message, SourcePos pos);
    SourcePos position() const noexcept { return pos_; }

private:
    SourcePos pos_;
};

enum class NodeKind { constant, variable, add, sub, mul, div, neg, sqrt, abs, min, max, pow, cond };
enum class Compare { lt, le, gt, ge };

struct ExprNode {
    NodeKind kind = NodeKind::constant;
    double value = 0.0;  // constant value, or the exponent of pow
    char variable = 'x';
    Compare cmp = Compare::lt;  // cond: kids = {lhs, rhs, then, else}
    SourcePos pos;
    std::vector<std::shared_ptr<const ExprNode>> kids;
};

/// Immutable expression tree over the variables x and y.
///
/// Grammar:
///   expr  := "if" arith cmp arith "then" expr "else" expr | arith
///   arith := term (("+" | "-") term)*
///   term  := unary (("*" | "/") unary)*
///   unary := "-" unary | primary
///   primary := number | "x" | "y" | "(" expr ")"
///            | ("sqrt" | "abs") "(" expr ")"
///            | ("min" | "max") "(" expr ("," expr)+ ")"
///            | "pow" "(" expr "," ["-"] number ")"
///   cmp   := "<" | "<=" | ">" | ">="
class MeanExpr {
public:
    /// Throws ParseError with a 1-based line/column and the expected-token set.
    static MeanExpr parse(std::string_view source);

    /// Strict evaluation; a conditional evaluates exactly one branch.
    double operator()(double x, double y) const;

    /// Fully parenthesized text that parses back to an identical tree.
    std::string to_string() const;

    bool uses_variable(char v) const;
    const ExprNode& root() const noexcept { return *root_; }

    /// Structural equality; source positions are ignored.
    friend bool operator==(const MeanExpr& a, const MeanExpr& b);

private:
    explicit MeanExpr(std::shared_ptr<const ExprNode> root) : root_(std::move(root)) {}
    std::shared_ptr<const ExprNode> root_;
};

inline MeanExpr parse(std::string_view source) { return MeanExpr::parse(source); }
inline double evaluate(const MeanExpr& e, double x, double y) { return e(x, y); }

/// Accepts the expression as a mean only if min <= e <= max at every sampled
/// point; records symmetric/strict when they held on the grid. Grid acceptance
/// is necessary, not sufficient. Throws MeanBoundsError with the lexicographically
/// smallest witness, or EvalError when evaluation fails somewhere on the grid.
Mean lift_to_mean(const MeanExpr& expr, const Interval& domain, const GridSpec& grid,
                  std::string name = {});

/// A built-in name (see parse_builtin), "kc:<c>", or an expression lifted on the grid.
Mean mean_from_text(const std::string& text, const Interval& domain, const GridSpec& grid);

}  // namespace invmean
