#include "lctrunc/series.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lctrunc::detail {

namespace {

// Euler-Maclaurin tail of sum_{n>=q} n^{-s} through the B_4 term. The
// remainder of the alternating expansion is bounded by the first omitted
// (B_6) term because x^{-s} is completely monotone.
CertifiedValue em_tail(double s, double q) {
  const double q1 = std::pow(q, 1.0 - s);
  const double q0 = q1 / q;  // q^{-s}
  double value = q1 / (s - 1.0) + 0.5 * q0 + s * q0 / (q * 12.0) -
                 s * (s + 1.0) * (s + 2.0) * q0 / (q * q * q * 720.0);
  const double rem = s * (s + 1.0) * (s + 2.0) * (s + 3.0) * (s + 4.0) * q0 /
                     (q * q * q * q * q * 30240.0);
  return {value, rem};
}

}  // namespace

CertifiedValue zeta_tail(double s, std::int64_t q) {
  if (s <= 1.0) throw std::domain_error("zeta_tail: s must exceed 1");
  if (q < 1) throw std::domain_error("zeta_tail: q must be >= 1");
  // Push the direct summation far enough that the Euler-Maclaurin
  // remainder bound certifies the target accuracy.
  std::int64_t cut = std::max<std::int64_t>(q, 64);
  while (em_tail(s, static_cast<double>(cut)).error > 1e-16 * em_tail(s, static_cast<double>(cut)).value &&
         cut < (1 << 20)) {
    cut *= 2;
  }
  double head = 0.0;
  for (std::int64_t n = cut - 1; n >= q; --n) {  // small terms first
    head += std::pow(static_cast<double>(n), -s);
  }
  CertifiedValue tail = em_tail(s, static_cast<double>(cut));
  return {head + tail.value, tail.error};
}

CertifiedValue power_weight_tail(double a, double p, double s, std::int64_t J) {
  if (s <= p + 1.0) throw std::domain_error("power_weight_tail: requires s > p + 1");
  if (a < 0.0) throw std::domain_error("power_weight_tail: requires a >= 0");
  const double c = a - 1.0;  // (l + a)^p = (l+1)^p (1 + c/(l+1))^p
  // Direct head until the binomial variable c/(l+1) is comfortably small.
  const std::int64_t J2 =
      std::max<std::int64_t>({J, static_cast<std::int64_t>(std::ceil(4.0 * std::abs(c))), 64});
  double head = 0.0;
  for (std::int64_t l = J2 - 1; l >= J; --l) {
    head += std::pow(static_cast<double>(l) + a, p) * std::pow(static_cast<double>(l) + 1.0, -s);
  }
  // Binomial expansion of the remainder: sum over n = l+1 >= J2+1 of
  // n^{p-s} (1 + c/n)^p = sum_m binom(p, m) c^m zeta_tail(s - p + m, J2+1).
  double value = head;
  double error = 0.0;
  double coeff = 1.0;  // binom(p, m) c^m
  double last_mag = 0.0;
  for (int m = 0; m < 200; ++m) {
    const CertifiedValue zt = zeta_tail(s - p + m, J2 + 1);
    const double term = coeff * zt.value;
    value += term;
    error += std::abs(coeff) * zt.error;
    last_mag = std::abs(term);
    coeff *= (p - m) / (m + 1.0) * c;
    const double next_mag = std::abs(coeff) * zt.value;  // zeta tails shrink with m
    if (m > p && next_mag <= 1e-15 * std::abs(value)) {
      // |c|/(J2+1) <= 1/4, so omitted terms decay at least geometrically
      // with ratio 1/2 once they alternate.
      error += 2.0 * next_mag;
      return {value, error};
    }
    (void)last_mag;
  }
  throw std::runtime_error("power_weight_tail: binomial expansion failed to converge");
}

CertifiedValue power_weight_series(double a, double p, double s) {
  return power_weight_tail(a, p, s, 0);
}

}  // namespace lctrunc::detail
