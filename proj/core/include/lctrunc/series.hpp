#ifndef LCTRUNC_SERIES_HPP
#define LCTRUNC_SERIES_HPP

#include <cstdint>

namespace lctrunc::detail {

// A value together with a certified bound on the magnitude of the
// truncation error made while computing it. Downstream inequalities take
// the pessimistic side (value + error for upper bounds).
struct CertifiedValue {
  double value = 0.0;
  double error = 0.0;

  double upper() const { return value + error; }
  double lower() const { return value - error; }
};

// sum_{n>=q} n^{-s} for s > 1, q >= 1, by direct summation up to a cutoff
// plus an Euler-Maclaurin tail whose remainder is bounded by the first
// omitted term. Certified error <= ~1e-14 relative.
CertifiedValue zeta_tail(double s, std::int64_t q);

// sum_{l>=J} (l + a)^p (l + 1)^{-s} for s > p + 1, a >= 0, J >= 0.
// Head terms summed directly; the remainder is expanded binomially in
// (a-1)/(l+1) into zeta tails, with a certified bound on the truncated
// binomial remainder. Relative accuracy ~1e-13.
CertifiedValue power_weight_tail(double a, double p, double s, std::int64_t J);

// sum_{l>=0} (l + a)^p (l + 1)^{-s} to ~1e-12 relative accuracy.
CertifiedValue power_weight_series(double a, double p, double s);

}  // namespace lctrunc::detail

#endif
