#ifndef LCTRUNC_TRUNCATION_HPP
#define LCTRUNC_TRUNCATION_HPP

#include "lctrunc/blockmatrix.hpp"

namespace lctrunc {

// The recurrent part F^{<=n} of the last-column-block-augmented truncation:
// an (n+1)d x (n+1)d row-stochastic matrix. The complement of F^{<=n} is
// transient and carries no stationary mass, so it is never materialized.
struct FiniteStochasticMatrix {
  int d = 0;
  int n = 0;
  Matrix entries;

  Eigen::Block<const Matrix> block(int k, int l) const {
    return entries.block(k * d, l * d, d, d);
  }
  int states() const { return (n + 1) * d; }
};

// Keeps block columns 0..n-1 of P and folds all remaining mass into block
// column n: block (k, n) = sum_{m>=n} P(k; m). Row sums are conserved
// exactly up to the kernel's tail accuracy.
FiniteStochasticMatrix lc_block_augment(const BlockKernel& P, int n);

// The full LC-block-augmented truncation of P as an infinite kernel (rows
// above level n follow the same augmentation formula). Used for dominance
// checks against the original kernel on any horizon.
BlockKernel lc_truncation_kernel(const BlockKernel& P, int n);

// Views a finite matrix as a kernel whose blocks vanish outside 0..n.
// Rows above level n are zero and not row-stochastic; restrict order checks
// to horizons <= n.
BlockKernel as_kernel(const FiniteStochasticMatrix& M);

}  // namespace lctrunc

#endif
