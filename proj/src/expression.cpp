#include "nnl/expression.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>

#include "nnl/errors.hpp"

namespace nnl {

struct Expression::Node {
    enum Kind { Number, VarX, VarY, Add, Sub, Mul, Div, Pow, Neg, Abs, Sin, Cos, Exp, Step };
    Kind kind;
    double value = 0.0;
    std::shared_ptr<const Node> lhs, rhs;

    double eval(double x, double y) const {
        switch (kind) {
            case Number: return value;
            case VarX: return x;
            case VarY: return y;
            case Add: return lhs->eval(x, y) + rhs->eval(x, y);
            case Sub: return lhs->eval(x, y) - rhs->eval(x, y);
            case Mul: return lhs->eval(x, y) * rhs->eval(x, y);
            case Div: return lhs->eval(x, y) / rhs->eval(x, y);
            case Pow: return std::pow(lhs->eval(x, y), rhs->eval(x, y));
            case Neg: return -lhs->eval(x, y);
            case Abs: return std::abs(lhs->eval(x, y));
            case Sin: return std::sin(lhs->eval(x, y));
            case Cos: return std::cos(lhs->eval(x, y));
            case Exp: return std::exp(lhs->eval(x, y));
            case Step: return lhs->eval(x, y) > 0.0 ? 1.0 : 0.0;
        }
        return 0.0;
    }
};

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;

NodePtr make_node(Expression::Node::Kind kind, NodePtr lhs = nullptr, NodePtr rhs = nullptr,
                  double value = 0.0) {
    auto n = std::make_shared<Expression::Node>();
    n->kind = kind;
    n->value = value;
    n->lhs = std::move(lhs);
    n->rhs = std::move(rhs);
    return n;
}

class Parser {
  public:
    explicit Parser(const std::string& s) : s_(s) {}

    NodePtr parse() {
        NodePtr e = expr();
        skip_ws();
        if (pos_ != s_.size()) fail("unexpected trailing input");
        return e;
    }

  private:
    const std::string& s_;
    std::size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& what) const {
        throw ContractError("expression error at column " + std::to_string(pos_ + 1) + ": " +
                            what + " in '" + s_ + "'");
    }
    void skip_ws() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    bool eat(char c) {
        skip_ws();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }
    char peek() {
        skip_ws();
        return pos_ < s_.size() ? s_[pos_] : '\0';
    }

    NodePtr expr() {
        NodePtr e = term();
        for (;;) {
            if (eat('+')) e = make_node(Expression::Node::Add, e, term());
            else if (eat('-')) e = make_node(Expression::Node::Sub, e, term());
            else return e;
        }
    }
    NodePtr term() {
        NodePtr e = unary();
        for (;;) {
            if (eat('*')) e = make_node(Expression::Node::Mul, e, unary());
            else if (eat('/')) e = make_node(Expression::Node::Div, e, unary());
            else return e;
        }
    }
    NodePtr unary() {
        if (eat('-')) return make_node(Expression::Node::Neg, unary());
        if (eat('+')) return unary();
        return power();
    }
    NodePtr power() {
        NodePtr base = primary();
        if (eat('^')) return make_node(Expression::Node::Pow, base, unary());
        return base;
    }
    NodePtr primary() {
        skip_ws();
        if (pos_ >= s_.size()) fail("expected a value");
        const char c = s_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (c == '(') {
            ++pos_;
            NodePtr e = expr();
            if (!eat(')')) fail("expected ')'");
            return e;
        }
        if (std::isalpha(static_cast<unsigned char>(c))) return name();
        fail("unexpected character");
    }
    NodePtr number() {
        const char* start = s_.c_str() + pos_;
        char* end = nullptr;
        const double v = std::strtod(start, &end);
        if (end == start) fail("malformed number");
        pos_ += static_cast<std::size_t>(end - start);
        return make_node(Expression::Node::Number, nullptr, nullptr, v);
    }
    NodePtr name() {
        const std::size_t start = pos_;
        while (pos_ < s_.size() && std::isalpha(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        const std::string id = s_.substr(start, pos_ - start);
        if (id == "x") return make_node(Expression::Node::VarX);
        if (id == "y") return make_node(Expression::Node::VarY);
        Expression::Node::Kind kind;
        if (id == "abs") kind = Expression::Node::Abs;
        else if (id == "sin") kind = Expression::Node::Sin;
        else if (id == "cos") kind = Expression::Node::Cos;
        else if (id == "exp") kind = Expression::Node::Exp;
        else if (id == "step") kind = Expression::Node::Step;
        else fail("unknown identifier '" + id + "'");
        if (!eat('(')) fail("expected '(' after function name");
        NodePtr arg = expr();
        if (!eat(')')) fail("expected ')'");
        return make_node(kind, arg);
    }
};

} // namespace

double Expression::eval(double x, double y) const {
    if (!root_) throw ContractError("Expression::eval: empty expression");
    return root_->eval(x, y);
}

Expression parse_expression(const std::string& text) {
    Expression e;
    e.root_ = Parser(text).parse();
    e.text_ = text;
    return e;
}

} // namespace nnl
