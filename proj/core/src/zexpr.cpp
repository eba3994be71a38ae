#include "latlab/zexpr.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <limits>

#include "latlab/errors.hpp"

namespace latlab {

struct ZExpression::Node {
  enum class Op { constant, var, neg, add, sub, mul, div, pow, log, exp, sqrt };
  Op op = Op::constant;
  double value = 0.0;
  std::shared_ptr<const Node> a, b;

  double eval(double k) const {
    switch (op) {
      case Op::constant:
        return value;
      case Op::var:
        return k;
      case Op::neg:
        return -a->eval(k);
      case Op::add:
        return a->eval(k) + b->eval(k);
      case Op::sub:
        return a->eval(k) - b->eval(k);
      case Op::mul:
        return a->eval(k) * b->eval(k);
      case Op::div:
        return a->eval(k) / b->eval(k);
      case Op::pow:
        return std::pow(a->eval(k), b->eval(k));
      case Op::log:
        return std::log(a->eval(k));
      case Op::exp:
        return std::exp(a->eval(k));
      case Op::sqrt:
        return std::sqrt(a->eval(k));
    }
    return 0.0;
  }
};

namespace {

using NodePtr = std::shared_ptr<const ZExpression::Node>;
using Op = ZExpression::Node::Op;

NodePtr make(Op op, NodePtr a = nullptr, NodePtr b = nullptr, double value = 0.0) {
  auto n = std::make_shared<ZExpression::Node>();
  n->op = op;
  n->a = std::move(a);
  n->b = std::move(b);
  n->value = value;
  return n;
}

class Parser {
 public:
  explicit Parser(const std::string& s) : s_(s) {}

  NodePtr parseAll() {
    NodePtr e = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return e;
  }

 private:
  const std::string& s_;
  std::size_t pos_ = 0;

  [[noreturn]] void fail(const std::string& what) const {
    throw ConfigError("z expression '" + s_ + "' at " + std::to_string(pos_) + ": " + what);
  }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool accept(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  NodePtr expr() {
    NodePtr left = term();
    for (;;) {
      if (accept('+'))
        left = make(Op::add, left, term());
      else if (accept('-'))
        left = make(Op::sub, left, term());
      else
        return left;
    }
  }
  NodePtr term() {
    NodePtr left = unary();
    for (;;) {
      if (accept('*'))
        left = make(Op::mul, left, unary());
      else if (accept('/'))
        left = make(Op::div, left, unary());
      else
        return left;
    }
  }
  NodePtr unary() {
    if (accept('-')) return make(Op::neg, unary());
    if (accept('+')) return unary();
    return power();
  }
  NodePtr power() {
    NodePtr base = primary();
    if (accept('^')) return make(Op::pow, base, unary());
    return base;
  }
  NodePtr primary() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end");
    if (accept('(')) {
      NodePtr e = expr();
      if (!accept(')')) fail("expected ')'");
      return e;
    }
    const char c = s_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      char* end = nullptr;
      const double v = std::strtod(s_.c_str() + pos_, &end);
      if (end == s_.c_str() + pos_) fail("bad number");
      pos_ = static_cast<std::size_t>(end - s_.c_str());
      return make(Op::constant, nullptr, nullptr, v);
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      const std::size_t start = pos_;
      while (pos_ < s_.size() && std::isalpha(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      const std::string word = s_.substr(start, pos_ - start);
      if (word == "k") return make(Op::var);
      if (word == "inf") return make(Op::constant, nullptr, nullptr, std::numeric_limits<double>::infinity());
      Op op;
      if (word == "log")
        op = Op::log;
      else if (word == "exp")
        op = Op::exp;
      else if (word == "sqrt")
        op = Op::sqrt;
      else
        fail("unknown name '" + word + "'");
      if (!accept('(')) fail("expected '(' after " + word);
      NodePtr arg = expr();
      if (!accept(')')) fail("expected ')'");
      return make(op, arg);
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }
};

}  // namespace

ZExpression ZExpression::parse(const std::string& text) {
  ZExpression e;
  e.text_ = text;
  e.root_ = Parser(text).parseAll();
  return e;
}

double ZExpression::operator()(double k) const { return root_->eval(k); }

std::vector<double> ZExpression::sequence(std::uint64_t K) const {
  std::vector<double> z(K);
  for (std::uint64_t k = 1; k <= K; ++k) z[k - 1] = (*this)(static_cast<double>(k));
  return z;
}

}  // namespace latlab
