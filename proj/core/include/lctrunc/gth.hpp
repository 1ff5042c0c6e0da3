#ifndef LCTRUNC_GTH_HPP
#define LCTRUNC_GTH_HPP

#include <Eigen/Dense>

namespace lctrunc {

// Stationary probability vector of a finite row-stochastic matrix by
// Grassmann-Taksar-Heyman state elimination. Subtraction-free: every update
// adds products of nonnegative numbers, so there is no cancellation and the
// residual stays near machine precision even for nearly-decoupled chains.
//
// Throws reducible_error when an eliminated state cannot reach any
// lower-indexed state (two closed classes).
Eigen::VectorXd gth_stationary(Eigen::MatrixXd P);

// Plain right-looking elimination. Reference implementation; O(s^3) with
// rank-1 updates.
Eigen::VectorXd gth_stationary_unblocked(Eigen::MatrixXd P);

// Panel-blocked elimination with the same arithmetic (sums of nonnegative
// products); defers the leading-submatrix update to one GEMM per panel.
// Needed to keep the 8194-state reference solve in the seconds range.
Eigen::VectorXd gth_stationary_blocked(Eigen::MatrixXd P, int panel = 64);

}  // namespace lctrunc

#endif
