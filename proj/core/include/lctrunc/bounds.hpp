#ifndef LCTRUNC_BOUNDS_HPP
#define LCTRUNC_BOUNDS_HPP

#include <functional>
#include <optional>
#include <utility>

#include "lctrunc/drift.hpp"

namespace lctrunc {

enum class BoundVariant { MainA, MainB, Extended, ExtendedK0, Gig1, Gig1K0, Special };

// m and n are stored as doubles: the tolerance planner can return values far
// beyond 2^63 for loose certificates.
struct BoundReport {
  double m = 0.0;
  double n = 0.0;
  double value = 0.0;
  double term_mixing = 0.0;      // the 8 / r_phi term
  double term_truncation = 0.0;  // the 2m * (boundary mass or b / phi o v) term
  BoundVariant variant = BoundVariant::MainA;
};

// 8 / r_phi(m-1) * v(1, varpi) + 2m * sum_i boundary_mass_i, where
// boundary_mass = sum_i pi_n(n, i) comes from an actual solve of the
// truncation.
BoundReport bound_main_a(double m, double n, double v1_varpi, const PhiSpec& phi,
                         double boundary_mass);

// Same mixing term with truncation term 2mb sum_i 1 / (phi o v(n, i)).
BoundReport bound_main_b(double m, double n, double v1_varpi, const PhiSpec& phi, double b,
                         const Vector& phi_v_n);

// The dominated-chain bound: for K > 0,
//   8 {c_{phi,B}(1)}^{-1} / (r_phi o c_{phi,B}(m-1)) * (v(1,varpi) + B)
//     + 2mMb sum_i 1 / (phi o v(n, i));
// for K = 0 the c_{phi,B} deflation and B drop out.
BoundReport bound_extended(double m, double n, int M, double b, std::optional<double> B, int K,
                           double v1_varpi, const PhiSpec& phi, const Vector& phi_v_n);

// Exact scan over m = 1..m_max; ties break to the smallest m.
std::pair<long long, double> minimize_over_m(const std::function<double(long long)>& bound_fn,
                                             long long m_max);

struct TolerancePlan {
  double m0 = 0.0;
  double n0 = 0.0;
  double mixing = 0.0;
  double truncation = 0.0;
};

// E/2-E/2 split: m0 = smallest integer with mixing_fn(m) <= E/2, then n0 =
// smallest integer n <= n_max with truncation_fn(m0, n) <= E/2. Throws
// tolerance_unreachable_error carrying the residual when n_max is too small.
// Integers are found by doubling + bisection, so planner-scale values
// (beyond 2^53) are resolved at double precision.
TolerancePlan tolerance_plan(double target_E, const std::function<double(double)>& mixing_fn,
                             const std::function<double(double, double)>& truncation_fn,
                             double n_max);

}  // namespace lctrunc

#endif
