#include <phasefield/expression.hpp>

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <stdexcept>

namespace phasefield {

struct Expression::Node {
  enum class Op { Const, Var, Neg, Add, Sub, Mul, Div, Pow, Call };
  Op op = Op::Const;
  double value = 0.0;
  int var = 0;  // 0=x, 1=y, 2=z
  double (*fn)(double) = nullptr;
  std::shared_ptr<const Node> a, b;
};

namespace {

using Node = Expression::Node;
using NodePtr = std::shared_ptr<const Node>;

NodePtr make_const(double v) {
  auto n = std::make_shared<Node>();
  n->op = Node::Op::Const;
  n->value = v;
  return n;
}

NodePtr make_node(Node::Op op, NodePtr a, NodePtr b = nullptr) {
  auto n = std::make_shared<Node>();
  n->op = op;
  n->a = std::move(a);
  n->b = std::move(b);
  return n;
}

class Parser {
public:
  explicit Parser(const std::string& text) : s_(text) {}

  NodePtr run() {
    NodePtr e = parse_sum();
    skip_ws();
    if (pos_ != s_.size()) fail("unexpected trailing input");
    return e;
  }

private:
  const std::string& s_;
  size_t pos_ = 0;

  [[noreturn]] void fail(const std::string& what) const {
    throw std::invalid_argument("expression error at position " +
                                std::to_string(pos_) + ": " + what + " in \"" + s_ + "\"");
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

  NodePtr parse_sum() {
    NodePtr lhs = parse_product();
    for (;;) {
      if (eat('+')) lhs = make_node(Node::Op::Add, lhs, parse_product());
      else if (eat('-')) lhs = make_node(Node::Op::Sub, lhs, parse_product());
      else return lhs;
    }
  }

  NodePtr parse_product() {
    NodePtr lhs = parse_unary();
    for (;;) {
      if (eat('*')) lhs = make_node(Node::Op::Mul, lhs, parse_unary());
      else if (eat('/')) lhs = make_node(Node::Op::Div, lhs, parse_unary());
      else return lhs;
    }
  }

  NodePtr parse_unary() {
    if (eat('-')) return make_node(Node::Op::Neg, parse_unary());
    if (eat('+')) return parse_unary();
    return parse_power();
  }

  NodePtr parse_power() {
    NodePtr base = parse_atom();
    if (eat('^')) return make_node(Node::Op::Pow, base, parse_unary());  // right associative
    return base;
  }

  NodePtr parse_atom() {
    skip_ws();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      NodePtr e = parse_sum();
      if (!eat(')')) fail("missing ')'");
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c))) return parse_ident();
    fail(std::string("unexpected character '") + c + "'");
  }

  NodePtr parse_number() {
    const char* begin = s_.c_str() + pos_;
    char* end = nullptr;
    double v = std::strtod(begin, &end);
    if (end == begin) fail("malformed number");
    pos_ += static_cast<size_t>(end - begin);
    return make_const(v);
  }

  NodePtr parse_ident() {
    size_t start = pos_;
    while (pos_ < s_.size() &&
           (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
      ++pos_;
    std::string name = s_.substr(start, pos_ - start);

    if (name == "x" || name == "y" || name == "z") {
      auto n = std::make_shared<Node>();
      n->op = Node::Op::Var;
      n->var = name[0] - 'x';
      return n;
    }
    if (name == "pi") return make_const(std::numbers::pi);
    if (name == "e") return make_const(std::numbers::e);

    static const struct { const char* name; double (*fn)(double); } fns[] = {
        {"sin", std::sin}, {"cos", std::cos},   {"tan", std::tan},
        {"exp", std::exp}, {"log", std::log},   {"sqrt", std::sqrt},
        {"tanh", std::tanh}, {"abs", std::fabs},
    };
    for (const auto& f : fns) {
      if (name == f.name) {
        if (!eat('(')) fail("function '" + name + "' needs '('");
        NodePtr arg = parse_sum();
        if (!eat(')')) fail("missing ')' after argument of '" + name + "'");
        auto n = std::make_shared<Node>();
        n->op = Node::Op::Call;
        n->fn = f.fn;
        n->a = arg;
        return n;
      }
    }
    pos_ = start;
    fail("unknown identifier '" + name + "'");
  }
};

double eval_node(const Node& n, const double* xyz) {
  switch (n.op) {
    case Node::Op::Const: return n.value;
    case Node::Op::Var: return xyz[n.var];
    case Node::Op::Neg: return -eval_node(*n.a, xyz);
    case Node::Op::Add: return eval_node(*n.a, xyz) + eval_node(*n.b, xyz);
    case Node::Op::Sub: return eval_node(*n.a, xyz) - eval_node(*n.b, xyz);
    case Node::Op::Mul: return eval_node(*n.a, xyz) * eval_node(*n.b, xyz);
    case Node::Op::Div: return eval_node(*n.a, xyz) / eval_node(*n.b, xyz);
    case Node::Op::Pow: return std::pow(eval_node(*n.a, xyz), eval_node(*n.b, xyz));
    case Node::Op::Call: return n.fn(eval_node(*n.a, xyz));
  }
  return 0.0;  // unreachable
}

}  // namespace

Expression::Expression() : root_(make_const(0.0)), text_("0") {}

Expression Expression::parse(const std::string& text) {
  Expression e;
  e.root_ = Parser(text).run();
  e.text_ = text;
  return e;
}

double Expression::operator()(double x, double y, double z) const {
  const double xyz[3] = {x, y, z};
  return eval_node(*root_, xyz);
}

}  // namespace phasefield
