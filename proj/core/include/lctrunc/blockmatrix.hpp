#ifndef LCTRUNC_BLOCKMATRIX_HPP
#define LCTRUNC_BLOCKMATRIX_HPP

#include <Eigen/Dense>
#include <functional>
#include <optional>

namespace lctrunc {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

enum class StructureTag { ExplicitFinite, GiG1, Custom };

// Level/phase-indexed block transition structure. block(k, l) is the d x d
// block P(k; l); tail_block(k, l) is the exact partial tail sum over
// destination levels m >= l. Tail sums must be exact (closed form, or
// 1 - leading partial sums for stochastic rows); every bound downstream
// depends on exact tail mass.
//
// Kernels are immutable once built; both evaluators must be pure, so a
// kernel can be shared across threads freely.
struct BlockKernel {
  int d = 0;
  StructureTag tag = StructureTag::Custom;
  std::function<Matrix(int level, int dest)> block;
  std::function<Matrix(int level, int dest)> tail_block;
  // Smallest J such that P(k; l) = 0 whenever l < k - J (level decrease is
  // bounded by J per step); -1 when unbounded. Lets M-step blocks be
  // computed exactly from finitely many one-step blocks.
  int max_down_jump = -1;
};

// Level/phase-indexed column vector f(k, i), phases 0-based.
struct BlockVector {
  int d = 0;
  std::function<double(int level, int phase)> value;
  std::optional<int> horizon;
};

inline constexpr double kOrderTol = 1e-12;

// Checks the two BlockKernel invariants (row-stochastic tails and tail
// consistency) on levels 0..level_horizon. Throws std::invalid_argument on
// violation.
void validate_kernel(const BlockKernel& P, int level_horizon, double tol = kOrderTol);

// Tail-sum ordering of block rows: sum_{m>=l} P(k;m) <= sum_{m>=l} P(k+1;m)
// entrywise for k < level_horizon, l <= level_horizon. For gi-g1 kernels the
// repeating interior is level-shift invariant, so one row pair per diagonal
// is compared instead of the full sweep.
bool is_block_monotone(const BlockKernel& P, int level_horizon, double tol = kOrderTol);

// f(k, i) <= f(k+1, i) for all k < level_horizon, all phases.
bool is_block_increasing(const BlockVector& f, int level_horizon);

// Block-wise dominance P1 T_d <= P2 T_d expressed through tail sums:
// sum_{m>=l} P1(k;m) <= sum_{m>=l} P2(k;m) + tol entrywise on the horizon.
bool block_dominates(const BlockKernel& P1, const BlockKernel& P2,
                     int level_horizon, double tol = kOrderTol);

// Psi = sum_m P(k;m), constant over k for block-monotone kernels. Returns
// tail_block(0, 0) after verifying constancy over k <= 10; throws
// not_block_monotone_error when the constancy check fails.
Matrix boundary_matrix_psi(const BlockKernel& P, double tol = 1e-10);

// Stationary probability vector of an irreducible d x d stochastic matrix.
// Residual ||varpi Psi - varpi||_1 <= 1e-12; throws reducible_error.
Vector stationary_phase(const Matrix& psi);

}  // namespace lctrunc

#endif
