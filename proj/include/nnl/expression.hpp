#pragma once

#include <memory>
#include <string>

namespace nnl {

/// A compiled scalar expression in the spatial variables x and y (y ignored
/// in one dimension).  Grammar: numbers, x, y, + - * / ^ (right-assoc power),
/// unary ±, parentheses, and the functions abs, sin, cos, exp, step
/// (step(t) = 1 for t > 0, else 0).  Parse errors throw ContractError with
/// the offending column.
class Expression {
  public:
    /// Parse-tree node; opaque outside the implementation file.
    struct Node;

    Expression() = default;
    double eval(double x, double y = 0.0) const;
    bool valid() const { return root_ != nullptr; }
    const std::string& text() const { return text_; }

    friend Expression parse_expression(const std::string& text);

  private:
    std::shared_ptr<const Node> root_;
    std::string text_;
};

Expression parse_expression(const std::string& text);

} // namespace nnl
