#include "lctrunc/bounds.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "lctrunc/errors.hpp"

namespace lctrunc {

namespace {

double inverse_phi_sum(const PhiSpec& phi, const Vector& phi_v_n) {
  double s = 0.0;
  for (int i = 0; i < phi_v_n.size(); ++i) {
    if (!(phi_v_n(i) > 0.0)) {
      throw std::invalid_argument("bound: phi o v(n, i) must be positive");
    }
    s += 1.0 / phi_v_n(i);
  }
  (void)phi;
  return s;
}

// Smallest double-representable integer x >= 1 with pred(x) true, assuming
// pred is monotone (false then true).
double smallest_integer_where(const std::function<bool(double)>& pred, double cap) {
  if (pred(1.0)) return 1.0;
  if (cap < 2.0) return std::numeric_limits<double>::quiet_NaN();
  double lo = 1.0, hi = std::min(2.0, cap);
  while (!pred(hi)) {
    if (hi >= cap) return std::numeric_limits<double>::quiet_NaN();
    lo = hi;
    hi = std::min(std::floor(hi * 2.0), cap);
    if (hi <= lo) return std::numeric_limits<double>::quiet_NaN();
  }
  while (true) {
    const double mid = std::floor(0.5 * (lo + hi));
    if (mid <= lo || mid >= hi) break;
    (pred(mid) ? hi : lo) = mid;
  }
  return hi;
}

}  // namespace

BoundReport bound_main_a(double m, double n, double v1_varpi, const PhiSpec& phi,
                         double boundary_mass) {
  if (m < 1.0 || n < 1.0) throw std::invalid_argument("bound_main_a: m, n must be >= 1");
  if (boundary_mass < 0.0 || boundary_mass > 1.0 + 1e-12) {
    throw std::invalid_argument("bound_main_a: boundary mass must lie in [0, 1]");
  }
  BoundReport r;
  r.m = m;
  r.n = n;
  r.variant = BoundVariant::MainA;
  r.term_mixing = 8.0 / r_phi(phi, m - 1.0) * v1_varpi;
  r.term_truncation = 2.0 * m * boundary_mass;
  r.value = r.term_mixing + r.term_truncation;
  return r;
}

BoundReport bound_main_b(double m, double n, double v1_varpi, const PhiSpec& phi, double b,
                         const Vector& phi_v_n) {
  if (m < 1.0 || n < 1.0) throw std::invalid_argument("bound_main_b: m, n must be >= 1");
  BoundReport r;
  r.m = m;
  r.n = n;
  r.variant = BoundVariant::MainB;
  r.term_mixing = 8.0 / r_phi(phi, m - 1.0) * v1_varpi;
  r.term_truncation = 2.0 * m * b * inverse_phi_sum(phi, phi_v_n);
  r.value = r.term_mixing + r.term_truncation;
  return r;
}

BoundReport bound_extended(double m, double n, int M, double b, std::optional<double> B, int K,
                           double v1_varpi, const PhiSpec& phi, const Vector& phi_v_n) {
  if (m < 1.0 || n < 1.0) throw std::invalid_argument("bound_extended: m, n must be >= 1");
  if (M < 1) throw std::invalid_argument("bound_extended: M must be >= 1");
  if (K > 0 && !B) {
    throw contract_error("bound_extended: B is required when K > 0");
  }
  BoundReport r;
  r.m = m;
  r.n = n;
  r.term_truncation = 2.0 * m * M * b * inverse_phi_sum(phi, phi_v_n);
  if (K == 0) {
    r.variant = BoundVariant::ExtendedK0;
    r.term_mixing = 8.0 / r_phi(phi, m - 1.0) * v1_varpi;
  } else {
    r.variant = BoundVariant::Extended;
    const double c1 = c_phi_B(phi, *B, 1.0);
    r.term_mixing = 8.0 / c1 / r_phi(phi, c_phi_B(phi, *B, m - 1.0)) * (v1_varpi + *B);
  }
  r.value = r.term_mixing + r.term_truncation;
  return r;
}

std::pair<long long, double> minimize_over_m(const std::function<double(long long)>& bound_fn,
                                             long long m_max) {
  if (m_max < 1) throw std::invalid_argument("minimize_over_m: m_max must be >= 1");
  long long best_m = 1;
  double best = bound_fn(1);
  for (long long m = 2; m <= m_max; ++m) {
    const double v = bound_fn(m);
    if (v < best) {
      best = v;
      best_m = m;
    }
  }
  return {best_m, best};
}

TolerancePlan tolerance_plan(double target_E, const std::function<double(double)>& mixing_fn,
                             const std::function<double(double, double)>& truncation_fn,
                             double n_max) {
  if (!(target_E > 0.0 && target_E < 2.0)) {
    throw std::invalid_argument("tolerance_plan: target must lie in (0, 2)");
  }
  const double half = 0.5 * target_E;
  const double m0 = smallest_integer_where(
      [&](double m) { return mixing_fn(m) <= half; }, 1e308);
  if (std::isnan(m0)) {
    throw tolerance_unreachable_error("tolerance_plan: mixing term never reaches E/2",
                                      std::numeric_limits<double>::infinity());
  }
  const double n0 = smallest_integer_where(
      [&](double n) { return truncation_fn(m0, n) <= half; }, n_max);
  if (std::isnan(n0) || n0 > n_max) {
    const double residual = truncation_fn(m0, n_max);
    throw tolerance_unreachable_error(
        "tolerance_plan: truncation term still " + std::to_string(residual) + " at n_max",
        residual);
  }
  TolerancePlan plan;
  plan.m0 = m0;
  plan.n0 = n0;
  plan.mixing = mixing_fn(m0);
  plan.truncation = truncation_fn(m0, n0);
  return plan;
}

}  // namespace lctrunc
