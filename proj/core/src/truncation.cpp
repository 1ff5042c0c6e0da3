#include "lctrunc/truncation.hpp"

#include <memory>
#include <string>

#include "lctrunc/errors.hpp"

namespace lctrunc {

FiniteStochasticMatrix lc_block_augment(const BlockKernel& P, int n) {
  if (n < 1) throw std::invalid_argument("lc_block_augment: n must be >= 1");
  const int d = P.d;
  FiniteStochasticMatrix out;
  out.d = d;
  out.n = n;
  out.entries.resize((n + 1) * d, (n + 1) * d);
  for (int k = 0; k <= n; ++k) {
    for (int l = 0; l < n; ++l) {
      out.entries.block(k * d, l * d, d, d) = P.block(k, l);
    }
    out.entries.block(k * d, n * d, d, d) = P.tail_block(k, n);
  }
  const Vector row_sums = out.entries.rowwise().sum();
  if (((row_sums.array() - 1.0).abs() > 1e-12).any()) {
    throw std::runtime_error("lc_block_augment: augmented rows deviate from stochastic by " +
                             std::to_string((row_sums.array() - 1.0).abs().maxCoeff()));
  }
  return out;
}

BlockKernel lc_truncation_kernel(const BlockKernel& P, int n) {
  if (n < 1) throw std::invalid_argument("lc_truncation_kernel: n must be >= 1");
  BlockKernel out;
  out.d = P.d;
  out.tag = StructureTag::Custom;
  out.max_down_jump = P.max_down_jump;
  const Matrix zero = Matrix::Zero(P.d, P.d);
  out.block = [P, n, zero](int k, int l) -> Matrix {
    if (l < n) return P.block(k, l);
    if (l == n) return P.tail_block(k, n);
    return zero;
  };
  out.tail_block = [P, n, zero](int k, int l) -> Matrix {
    if (l <= n) return P.tail_block(k, l);
    return zero;
  };
  return out;
}

BlockKernel as_kernel(const FiniteStochasticMatrix& M) {
  auto held = std::make_shared<FiniteStochasticMatrix>(M);
  BlockKernel out;
  out.d = M.d;
  out.tag = StructureTag::ExplicitFinite;
  out.max_down_jump = -1;
  const Matrix zero = Matrix::Zero(M.d, M.d);
  out.block = [held, zero](int k, int l) -> Matrix {
    if (k > held->n || l > held->n) return zero;
    return held->block(k, l);
  };
  out.tail_block = [held, zero](int k, int l) -> Matrix {
    if (k > held->n || l > held->n) return zero;
    Matrix acc = zero;
    for (int m = l; m <= held->n; ++m) acc += held->block(k, m);
    return acc;
  };
  return out;
}

}  // namespace lctrunc
