#ifndef LCTRUNC_DRIFT_HPP
#define LCTRUNC_DRIFT_HPP

#include <functional>
#include <optional>
#include <vector>

#include "lctrunc/blockmatrix.hpp"

namespace lctrunc {

// A nondecreasing differentiable concave rate function phi on [1, inf) with
// phi' -> 0, plus optional closed forms for H_phi and r_phi. Evaluators must
// be pure.
struct PhiSpec {
  std::function<double(double)> phi;
  std::function<double(double)> phi_prime;
  std::function<double(double)> closed_form_H;  // may be empty
  std::function<double(double)> closed_form_r;  // may be empty
};

// Sampled checks of the PhiSpec invariants: nondecreasing, midpoint
// concavity, phi' vanishing at infinity and nonincreasing. Throws
// assumption_unverified_error on failure.
void validate_phi(const PhiSpec& phi);

// H_phi(x) = int_1^x dy / phi(y). Adaptive Simpson with absolute tolerance
// 1e-10 (subdivision cap 1e6); uses the closed form when supplied.
double H_phi(const PhiSpec& phi, double x);

// The inverse of the increasing function H_phi: returns x >= 1 with
// |H_phi(x) - y| <= 1e-10, bracket grown geometrically from [1, 2].
double H_phi_inverse(const PhiSpec& phi, double y);

// r_phi = phi o H_phi^{-1}; zero for x < 0. Uses the closed form when
// supplied.
double r_phi(const PhiSpec& phi, double x);

// c_{phi,B}(x) = phi(1) / phi(B+1) * x; linear through the origin with
// slope in (0, 1].
double c_phi_B(const PhiSpec& phi, double B, double x);

// Everything the bound theorems consume: P^M v <= v - phi o v + b 1_K.
struct DriftCertificate {
  BlockVector v;
  PhiSpec phi;
  double b = 0.0;
  int K = 0;
  int M = 1;
  std::optional<double> B;
};

struct DriftReport {
  bool passed = false;
  double worst_slack = 0.0;
  int worst_level = -1;
  int worst_phase = -1;
  // slack[k](i) = v - phi o v + b 1_K - (upper estimate of [P^M v])
  // at (k, i); the check passes iff slack >= -1e-10 everywhere.
  std::vector<Vector> slack;
};

// Blocks [P^M](k; l) for l = 0..max_dest, computed exactly by iterated
// one-step products. Requires P.max_down_jump >= 0 when M > 1 (bounded
// level decrease makes the recursion finite); throws contract_error
// otherwise.
std::vector<Matrix> power_block_row(const BlockKernel& P, int k, int M, int max_dest);

// Verifies the drift display on levels 0..level_horizon. tail_bound(k, L)
// must return a certified upper bound on sum_{l > L} [P^M](k; l) v(l) per
// phase; it is mandatory when v is unbounded. The finite part uses exact
// M-step blocks up to level tail_split.
DriftReport verify_drift(const BlockKernel& P, const DriftCertificate& cert,
                         int level_horizon,
                         const std::function<Vector(int k, int L)>& tail_bound,
                         int tail_split);

}  // namespace lctrunc

#endif
