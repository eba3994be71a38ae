#pragma once

#include <Eigen/Dense>
#include <cstdint>

namespace latlab {

// Lattices in this library live in dimension 3..kMaxDim; matrices keep their
// storage inline so hot loops never touch the heap.
inline constexpr int kMaxDim = 8;

using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor, kMaxDim, kMaxDim>;
using Vector = Eigen::Matrix<double, 1, Eigen::Dynamic, Eigen::RowMajor, 1, kMaxDim>;
using IntMatrix =
    Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor, kMaxDim, kMaxDim>;
using IntVector = Eigen::Matrix<std::int64_t, 1, Eigen::Dynamic, Eigen::RowMajor, 1, kMaxDim>;

/// Volume of the unit ball in R^n.
double unitBallVolume(int n);

/// Radius of the centered ball of volume `volume` in R^n.
double ballRadius(int n, double volume);

}  // namespace latlab
