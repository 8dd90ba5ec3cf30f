#include "fraclab/expr.hpp"

#include <cctype>
#include <cmath>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace fraclab::expr {

namespace {

struct Node : Expression {
  enum class Kind { kConst, kCoord, kUnary, kBinary };
  Kind kind;
  double value = 0.0;
  std::size_t coord = 0;
  char op = 0;
  double (*fn)(double) = nullptr;
  std::shared_ptr<const Expression> lhs, rhs;

  double eval(std::span<const double> point) const override {
    switch (kind) {
      case Kind::kConst:
        return value;
      case Kind::kCoord:
        if (coord >= point.size()) {
          throw std::invalid_argument(
              "expression references a coordinate beyond the point dimension");
        }
        return point[coord];
      case Kind::kUnary:
        return fn(lhs->eval(point));
      case Kind::kBinary: {
        const double a = lhs->eval(point);
        const double b = rhs->eval(point);
        switch (op) {
          case '+': return a + b;
          case '-': return a - b;
          case '*': return a * b;
          case '/': return a / b;
          case '^': return std::pow(a, b);
        }
        return 0.0;
      }
    }
    return 0.0;
  }
};

using NodePtr = std::shared_ptr<const Expression>;

NodePtr make_const(double v) {
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::kConst;
  n->value = v;
  return n;
}

NodePtr make_coord(std::size_t j) {
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::kCoord;
  n->coord = j;
  return n;
}

NodePtr make_unary(double (*fn)(double), NodePtr arg) {
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::kUnary;
  n->fn = fn;
  n->lhs = std::move(arg);
  return n;
}

NodePtr make_binary(char op, NodePtr a, NodePtr b) {
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::kBinary;
  n->op = op;
  n->lhs = std::move(a);
  n->rhs = std::move(b);
  return n;
}

class Parser {
 public:
  explicit Parser(const std::string& text) : text_(text) {}

  NodePtr run() {
    NodePtr e = sum();
    skip_space();
    if (pos_ != text_.size()) fail("unexpected trailing input");
    return e;
  }

 private:
  const std::string& text_;
  std::size_t pos_ = 0;

  [[noreturn]] void fail(const std::string& what) const {
    throw std::invalid_argument("expression error at position " +
                                std::to_string(pos_ + 1) + ": " + what);
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
      ++pos_;
    }
  }

  bool eat(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  NodePtr sum() {
    NodePtr e = product();
    while (true) {
      if (eat('+')) e = make_binary('+', e, product());
      else if (eat('-')) e = make_binary('-', e, product());
      else return e;
    }
  }

  NodePtr product() {
    NodePtr e = power();
    while (true) {
      if (eat('*')) e = make_binary('*', e, power());
      else if (eat('/')) e = make_binary('/', e, power());
      else return e;
    }
  }

  NodePtr power() {
    NodePtr base = atom();
    if (eat('^')) return make_binary('^', base, power());  // right-assoc
    return base;
  }

  NodePtr atom() {
    skip_space();
    if (pos_ >= text_.size()) fail("expected a value");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      NodePtr e = sum();
      if (!eat(')')) fail("expected ')'");
      return e;
    }
    if (c == '-') {
      ++pos_;
      return make_binary('-', make_const(0.0), atom());
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c))) return identifier();
    fail("unexpected character");
  }

  NodePtr number() {
    std::size_t consumed = 0;
    double v;
    try {
      v = std::stod(text_.substr(pos_), &consumed);
    } catch (const std::exception&) {
      fail("malformed number");
    }
    pos_ += consumed;
    return make_const(v);
  }

  NodePtr identifier() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           std::isalnum(static_cast<unsigned char>(text_[pos_]))) {
      ++pos_;
    }
    const std::string name = text_.substr(start, pos_ - start);
    if (name == "x") return make_coord(0);
    if (name == "y") return make_coord(1);
    if (name == "pi") return make_const(std::numbers::pi);
    if (name == "e") return make_const(std::numbers::e);

    static const struct { const char* name; double (*fn)(double); } kFns[] = {
        {"sin", std::sin}, {"cos", std::cos},   {"exp", std::exp},
        {"log", std::log}, {"sqrt", std::sqrt}, {"abs", std::fabs},
    };
    for (const auto& f : kFns) {
      if (name == f.name) {
        if (!eat('(')) fail("expected '(' after function name");
        NodePtr arg = sum();
        if (!eat(')')) fail("expected ')'");
        return make_unary(f.fn, std::move(arg));
      }
    }
    fail("unknown identifier '" + name + "'");
  }
};

}  // namespace

std::shared_ptr<const Expression> parse(const std::string& text) {
  return Parser(text).run();
}

}  // namespace fraclab::expr
