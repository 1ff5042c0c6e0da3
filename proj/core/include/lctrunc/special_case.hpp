#ifndef LCTRUNC_SPECIAL_CASE_HPP
#define LCTRUNC_SPECIAL_CASE_HPP

#include "lctrunc/bounds.hpp"
#include "lctrunc/gig1.hpp"

namespace lctrunc {

// Riemann zeta for s > 1 + 1e-6: direct series plus a certified
// Euler-Maclaurin tail, absolute error <= 1e-13.
double zeta(double s);

// Every constant of the worked two-phase chain with power-tail upward
// jumps ((k+1)^{-beta} / zeta(beta) weights) and geometric downward jumps.
struct SpecialCaseParams {
  double beta1 = 0.0, beta2 = 0.0, beta0 = 0.0;
  double kappa = 0.0;
  double epsilon = 0.0;
  double delta0 = 0.0;
  double x0 = 0.0;
  int K0 = 1;
  double rho = 0.0;
  double C1 = 0.0, C2 = 0.0;
  int K = 0;                    // conservative integer reading (see below)
  double K_display_literal = 0.0;  // the displayed formula taken literally
  double b = 0.0;
  double B = 0.0;               // = 2^K b
  double c_breve = 0.0;
};

// Constants in closed form. The K display nests a floor ambiguously; K is
// read conservatively as max(K0, ceil((C1/kappa)^{1/(beta1-2)}),
// ceil((C2/kappa)^{1/(beta2-2)})) -- conservatism only loosens the bound --
// and the literal reading is recorded alongside. The trailing term of the b
// display is evaluated at K, the maximizer over the levels it bounds.
SpecialCaseParams closed_form_params(double beta1, double beta2, double beta0);

// The chain itself, with exact geometric negative tails and zeta-tail
// positive tails.
Gig1Spec build_special_spec(double beta1, double beta2);

// The closed-form rate function phi(t) = kappa beta0 t^{1 - 1/beta0}.
PhiSpec special_phi(const SpecialCaseParams& p);

VFamily special_vfamily(const SpecialCaseParams& p);

// The worked bound:
//   8 c^{-1} / (kappa beta0 {kappa c (m-1) + 1}^{beta0-1}) {(1+x0)^{beta0} + 2^K b}
//     + 4 m b / (kappa beta0 (n+x0)^{beta0-1}).
BoundReport bound_special(const SpecialCaseParams& p, double m, double n);

// The displayed ceiling formulas for (m0, n0); bound_special(m0, n0) <= E.
std::pair<double, double> plan_tolerance_special(const SpecialCaseParams& p, double E);

struct AppendixBRow {
  int k = 0;
  Vector quantity;      // (1/V'(k)) sum_{l > floor(delta0 k)} V(k+l) A(l) e
  Vector intermediate;  // (C1 k^{-beta1+2}, C2 k^{-beta2+2})
  bool ok = false;
};

struct AppendixBReport {
  bool passed = false;
  double kappa = 0.0;
  std::vector<AppendixBRow> rows;
};

// Checks quantity <= intermediate <= kappa + 1e-12 elementwise for each
// k in [k_from, k_to]; requires k_from > K.
AppendixBReport appendixB_check(const SpecialCaseParams& p, int k_from, int k_to);

}  // namespace lctrunc

#endif
