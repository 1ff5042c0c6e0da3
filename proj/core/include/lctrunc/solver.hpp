#ifndef LCTRUNC_SOLVER_HPP
#define LCTRUNC_SOLVER_HPP

#include "lctrunc/truncation.hpp"

namespace lctrunc {

// Probability vector on F^{<=n}, entries indexed by (level, phase) with the
// flat layout k*d + i.
struct ProbabilityVector {
  int d = 0;
  int n = 0;
  Vector entries;

  double operator()(int k, int i) const { return entries(k * d + i); }
  int states() const { return (n + 1) * d; }
};

// Stationary vector of M by GTH elimination; ||x M - x||_1 <= 1e-12.
ProbabilityVector stationary_gth(const FiniteStochasticMatrix& M);

// Total variation distance sum |mu - eta| over all (level, phase); the
// shorter vector is zero-padded, both being distributions on the same
// countable state space. Value in [0, 2].
double total_variation(const ProbabilityVector& mu, const ProbabilityVector& eta);

// (sum_k pi(k, i))_i. Constant over the truncation level n for
// block-monotone kernels, and equal to varpi.
Vector level_marginal(const ProbabilityVector& pi);

// pi approximated by a very large truncation: returns the stationary vector
// of the n_ref LC-block truncation. Callers must treat the result as
// pi +- bound(n_ref). When max_studied_n > 0, enforces n_ref >= 8x it.
ProbabilityVector reference_pi(const BlockKernel& P, int n_ref, int max_studied_n = 0);

// mu T_d <= eta T_d through partial tail sums: for every (l, j),
// sum_{k>=l} mu(k, j) <= sum_{k>=l} eta(k, j) + tol. Both inputs must sum
// to 1 within 1e-10.
bool vector_block_dominates(const ProbabilityVector& mu, const ProbabilityVector& eta,
                            double tol);

}  // namespace lctrunc

#endif
