#pragma once

#include "latlab/basis.hpp"

namespace latlab {

struct LllOptions {
  double delta = 0.99;
  /// Rows [0, fixedPrefix) and [fixedPrefix, m) are never swapped across the
  /// boundary, so the span of the prefix is preserved. 0 disables the barrier.
  int fixedPrefix = 0;
};

/// basis.rows = transform · input.rows with transform unimodular.
struct Reduction {
  BasisMatrix basis;
  IntMatrix transform;
};

Reduction lllReduceWithTransform(const BasisMatrix& basis, const LllOptions& options = {});
BasisMatrix lllReduce(const BasisMatrix& basis, double delta = 0.99);

/// In-place LLL on an m×n generating set of full row rank. `transform` must
/// be m×m on entry (usually the identity) and is updated by the row operations.
/// `scaleSq` converts row norms to the embedding scale for the rank-loss test.
void lllReduceRows(IntMatrix& rows, IntMatrix& transform, const LllOptions& options = {}, double scaleSq = 1.0);
void lllReduceRows(Matrix& rows, IntMatrix& transform, const LllOptions& options = {});

}  // namespace latlab
