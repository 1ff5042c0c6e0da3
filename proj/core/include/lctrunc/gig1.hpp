#ifndef LCTRUNC_GIG1_HPP
#define LCTRUNC_GIG1_HPP

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "lctrunc/drift.hpp"

namespace lctrunc {

// GI/G/1-type chain data: Toeplitz interior blocks A(k) for two-sided level
// increments, boundary row blocks B(k), and exact tail / first-moment
// functionals. Block monotonicity forces the first block column below the
// boundary to equal underline-A(-k) = sum_{j<=-k} A(j), so it is not stored.
//
// All functionals must be exact (closed form or finite summation); the
// pipeline's certified inequalities lean on them.
struct Gig1Spec {
  int d = 0;
  std::function<Matrix(int)> A;           // A(k), k in Z
  std::function<Matrix(int)> B;           // B(k), k >= 0
  std::function<Matrix(int)> tail_pos;    // sum_{j>=m} A(j), any m in Z
  std::function<Matrix(int)> tail_neg;    // sum_{j<=-m} A(j), m >= 0
  std::function<Matrix(int)> moment_pos;  // sum_{j>=m} j A(j), m >= 1
  std::function<Matrix(int)> moment_neg;  // sum_{j<=-m} j A(j), m >= 1
  std::function<Matrix(int)> B_tail;      // sum_{j>=m} B(j), m >= 0
  int neg_support = -1;  // A(k) = 0 for k < -neg_support; -1 if unbounded
  int pos_support = -1;  // A(k) = 0 for k > pos_support; -1 if unbounded
  // Certified upper bounds on sum_{l>=J} (l+a)^p A(l) e and the analogous
  // B-row sum, as per-phase vectors. Optional: exact summation is used when
  // pos_support is bounded; otherwise required by compute_b / choose_K.
  std::function<Vector(std::int64_t J, double a, double p)> power_weighted_pos_tail;
  std::function<Vector(std::int64_t J, double a, double p)> power_weighted_B_tail;
};

// Builds a spec from finite block tables (A(k) for k in [-neg, pos], B(k)
// for k in [0, b_max]); tails and moments are exact finite sums.
Gig1Spec gig1_from_table(int d, int neg_support, int pos_support,
                         const std::vector<Matrix>& A_blocks,  // index k + neg_support
                         const std::vector<Matrix>& B_blocks);

Matrix a_total(const Gig1Spec& spec);
Matrix underline_A(const Gig1Spec& spec, int k);
Vector phase_stationary(const Gig1Spec& spec);

// sigma = varpi sum_k k A(k) e; the stability assumption sigma < 0 is the
// caller's to check.
double mean_drift_sigma(const Gig1Spec& spec);

// Folds the negative support at -N: A_N(-N) = underline-A(-N), zero below,
// unchanged above. P precedes_d P_N in BM_d.
Gig1Spec modified_kernel(const Gig1Spec& spec, int N);

double sigma_N(const Gig1Spec& spec, int N);

// Smallest N <= N_max with sigma_N < 0.
int choose_N(const Gig1Spec& spec, int N_max);

BlockKernel as_block_kernel(const Gig1Spec& spec);

// M-fold convolution table {A_N^{*M}(k)}: exact on [-MN, max_k] (the
// intermediate windows shrink so no path is dropped), positive side
// truncated at the smallest max_k whose neglected mass per row is within
// pos_tail_tol.
struct ConvolvedKernel {
  int d = 0;
  int M = 1;
  int N = 0;
  int min_k = 0;
  int max_k = 0;
  std::vector<Matrix> blocks;  // index k - min_k
  Vector neglected_mass;       // per source phase; >= 0
  Vector neglected_moment;     // exact first moment outside the table
  Matrix first_moment;         // exact D_M = sum_k k A_N^{*M}(k)

  const Matrix& at(int k) const { return blocks[static_cast<std::size_t>(k - min_k)]; }
  bool in_range(int k) const { return k >= min_k && k <= max_k; }
};

ConvolvedKernel convolve_power(const Gig1Spec& specN, int M, double pos_tail_tol = 1e-14,
                               std::int64_t max_blocks = (std::int64_t{1} << 22));

// Smallest M <= M_max with sum_l l A_N^{*M}(l) e < 0 elementwise, decided
// through the exact first-moment recursion D_M = D_{M-1} A + A^{M-1} D_1.
int choose_M0(const Gig1Spec& specN, int M_max);

// Lyapunov function families: moderately exponential exp{c0 (x+x0)^alpha},
// polynomial (x+x0)^beta0, logarithmic (x+x0)(log(x+x0))^gamma0.
struct VFamily {
  enum class Kind { ModeratelyExponential, Polynomial, Logarithmic };
  Kind kind = Kind::Polynomial;
  double c0 = 0.0;
  double beta0 = 0.0;
  double gamma0 = 0.0;
  double x0 = 0.0;
  double alpha = 0.0;  // tail exponent in the drift assumption; 0 except mod-exp

  double V(double x) const;
  double Vp(double x) const;
  double Vpp(double x) const;
  double Vinv(double t) const;

  static VFamily polynomial(double beta0, double x0);
  static VFamily moderately_exponential(double c0, double alpha, double x0);
  static VFamily logarithmic(double gamma0, double x0);
};

struct VAssumptionReport {
  bool certified = false;
  int route = 0;  // 1 or 2 per the sufficient-condition lemma; 0 = none
  std::vector<std::pair<std::string, bool>> checks;
  std::string method;  // "sample-certified" or "certified tail"
};

// Verifies the moment condition's five clauses on sampled grids and tries
// the two sufficient-condition routes. Limits are never claimed as proofs;
// the report states how each clause was certified. Throws
// assumption_unverified_error when neither route certifies.
VAssumptionReport check_V_assumption(const VFamily& vfam, const Gig1Spec& specN, int M,
                                     int horizon);

// (delta0, K0) with V'(k + delta0 k^{1-alpha}) <= (1+eps) V'(k) and
// V'(k - L) >= (1-eps) V'(k) for all integer k in (K0, k_max], K0 >= L.
// delta0 found by decreasing trial values, K0 smallest passing.
std::pair<double, int> choose_delta0_K0(const VFamily& vfam, double epsilon, int L, int k_max);

struct KappaEpsilon {
  double kappa = 0.0;
  double epsilon = 0.0;
  Vector slack;
};

// Feasible (kappa, epsilon) maximizing kappa over the grid
// epsilon in {0.05, 0.10, ..., 0.95} for
// (1-eps) sum_l l A^{*M}(l) e + 2 eps sum_{l>=0} l A^{*M}(l) e <= -2 kappa e.
KappaEpsilon choose_kappa_epsilon(const Gig1Spec& specN, int M);

struct ChooseKResult {
  int K = 0;
  // True when levels beyond the raw sweep are covered by the analytic
  // decreasing majorant; false means window-verified only.
  bool analytic_tail = false;
  int verified_up_to = 0;
};

// Smallest K >= K0 such that
// (1/V'(k)) sum_{l > floor(delta0 k^{1-alpha})} V(k+l) A_N^{*M}(l) e <= kappa e
// holds for every k > K. Levels up to the analytic-majorant threshold are
// checked directly; for the polynomial family the tail is certified by the
// decreasing majorant, otherwise the result is flagged window-verified.
ChooseKResult choose_K(const VFamily& vfam, const Gig1Spec& specN, int M, double kappa,
                       double delta0, int K0, int window);

// b = max over k = 0..K and phases of
// [sum_l P_N^M(k;l) v(l) - v(k) + phi o v(k)]_+ with certified tails.
double compute_b(const VFamily& vfam, const Gig1Spec& specN, int M, double kappa, int K,
                 const PhiSpec& phi);

// B = b / min_i [P^M(K;0) e]_i; throws hypothesis_violated_error when some
// row sum of the (K;0) block vanishes.
double compute_B(const BlockKernel& P, int M, int K, double b);

// phi(t) = kappa V'(V^{-1}(t)) with closed forms for the polynomial family;
// below V(0) the function continues linearly with matched slope so that the
// domain is all of [1, inf).
PhiSpec phi_from_V(const VFamily& vfam, double kappa);

// Certificate with v(k, i) = V(k) and phi = kappa V' o V^{-1}; the PhiSpec
// sample checks run at assembly.
DriftCertificate assemble_certificate(const VFamily& vfam, int d, double kappa, double b, int K,
                                      int M);

}  // namespace lctrunc

#endif
