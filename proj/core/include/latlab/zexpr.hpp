#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace latlab {

/// Threshold sequences z_k written as expressions in k, e.g.
/// "(1/3)*log(k) + (2/3)*log(log(k))". Grammar: numbers, k, inf, unary −,
/// + − * / ^ (right associative), parentheses and log, exp, sqrt.
class ZExpression {
 public:
  /// Throws ConfigError on syntax errors.
  static ZExpression parse(const std::string& text);

  double operator()(double k) const;
  /// z_1, …, z_K.
  std::vector<double> sequence(std::uint64_t K) const;
  const std::string& text() const { return text_; }

  struct Node;

 private:
  std::string text_;
  std::shared_ptr<const Node> root_;
};

}  // namespace latlab
