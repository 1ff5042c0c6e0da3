#include "lctrunc/solver.hpp"

#include <algorithm>
#include <string>

#include "lctrunc/errors.hpp"
#include "lctrunc/gth.hpp"

namespace lctrunc {

ProbabilityVector stationary_gth(const FiniteStochasticMatrix& M) {
  ProbabilityVector out;
  out.d = M.d;
  out.n = M.n;
  out.entries = gth_stationary(M.entries);
  const double residual =
      (out.entries.transpose() * M.entries - out.entries.transpose()).cwiseAbs().sum();
  if (residual > 1e-12) {
    throw std::runtime_error("stationary_gth: residual " + std::to_string(residual) +
                             " exceeds 1e-12");
  }
  return out;
}

double total_variation(const ProbabilityVector& mu, const ProbabilityVector& eta) {
  if (mu.d != eta.d) throw std::invalid_argument("total_variation: block sizes differ");
  const int lo = std::min(mu.entries.size(), eta.entries.size());
  double tv = (mu.entries.head(lo) - eta.entries.head(lo)).cwiseAbs().sum();
  if (mu.entries.size() > lo) tv += mu.entries.tail(mu.entries.size() - lo).cwiseAbs().sum();
  if (eta.entries.size() > lo) tv += eta.entries.tail(eta.entries.size() - lo).cwiseAbs().sum();
  return tv;
}

Vector level_marginal(const ProbabilityVector& pi) {
  Vector marginal = Vector::Zero(pi.d);
  for (int k = 0; k <= pi.n; ++k) {
    marginal += pi.entries.segment(k * pi.d, pi.d);
  }
  return marginal;
}

ProbabilityVector reference_pi(const BlockKernel& P, int n_ref, int max_studied_n) {
  if (max_studied_n > 0 && n_ref < 8 * max_studied_n) {
    throw std::invalid_argument("reference_pi: n_ref must be >= 8x the largest studied n");
  }
  return stationary_gth(lc_block_augment(P, n_ref));
}

bool vector_block_dominates(const ProbabilityVector& mu, const ProbabilityVector& eta,
                            double tol) {
  if (mu.d != eta.d) throw std::invalid_argument("vector_block_dominates: block sizes differ");
  if (std::abs(mu.entries.sum() - 1.0) > 1e-10 || std::abs(eta.entries.sum() - 1.0) > 1e-10) {
    throw std::invalid_argument("vector_block_dominates: inputs must be probability vectors");
  }
  const int d = mu.d;
  const int n_max = std::max(mu.n, eta.n);
  // Work downward through partial tails; levels beyond each support add 0.
  Vector tail_mu = Vector::Zero(d), tail_eta = Vector::Zero(d);
  for (int l = n_max; l >= 0; --l) {
    for (int i = 0; i < d; ++i) {
      if (l <= mu.n) tail_mu(i) += mu(l, i);
      if (l <= eta.n) tail_eta(i) += eta(l, i);
      if (tail_mu(i) > tail_eta(i) + tol) return false;
    }
  }
  return true;
}

}  // namespace lctrunc
