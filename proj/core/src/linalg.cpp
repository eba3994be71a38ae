#include "latlab/linalg.hpp"

#include <cmath>
#include <numbers>

namespace latlab {

double unitBallVolume(int n) {
  return std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n + 1.0);
}

double ballRadius(int n, double volume) {
  if (volume <= 0.0) return 0.0;
  return std::pow(volume / unitBallVolume(n), 1.0 / n);
}

}  // namespace latlab
