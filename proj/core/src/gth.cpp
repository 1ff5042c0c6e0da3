#include "lctrunc/gth.hpp"

#include <string>

#include "lctrunc/errors.hpp"

namespace lctrunc {

namespace {

[[noreturn]] void throw_reducible(int state) {
  throw reducible_error(
      "gth: state " + std::to_string(state) +
          " cannot reach any lower-indexed state; states " +
          std::to_string(state) + " and 0 do not communicate",
      state, 0);
}

Eigen::VectorXd back_substitute(const Eigen::MatrixXd& P) {
  const Eigen::Index s = P.rows();
  Eigen::VectorXd x = Eigen::VectorXd::Zero(s);
  x(0) = 1.0;
  for (Eigen::Index n = 1; n < s; ++n) {
    x(n) = x.head(n).dot(P.col(n).head(n));
  }
  x /= x.sum();
  return x;
}

}  // namespace

Eigen::VectorXd gth_stationary_unblocked(Eigen::MatrixXd P) {
  const Eigen::Index s = P.rows();
  if (s == 0 || P.cols() != s) throw std::invalid_argument("gth: square matrix required");
  if (s == 1) return Eigen::VectorXd::Ones(1);

  for (Eigen::Index n = s - 1; n >= 1; --n) {
    const double den = P.row(n).head(n).sum();
    if (den <= 0.0) throw_reducible(static_cast<int>(n));
    P.col(n).head(n) /= den;
    P.topLeftCorner(n, n).noalias() += P.col(n).head(n) * P.row(n).head(n);
  }
  return back_substitute(P);
}

Eigen::VectorXd gth_stationary_blocked(Eigen::MatrixXd P, int panel) {
  const Eigen::Index s = P.rows();
  if (s == 0 || P.cols() != s) throw std::invalid_argument("gth: square matrix required");
  if (panel < 1) throw std::invalid_argument("gth: panel width must be positive");
  if (s == 1) return Eigen::VectorXd::Ones(1);

  for (Eigen::Index nh = s; nh > 1; ) {
    const Eigen::Index n0 = std::max<Eigen::Index>(nh - panel, 1);
    for (Eigen::Index n = nh - 1; n >= n0; --n) {
      const double den = P.row(n).head(n).sum();
      if (den <= 0.0) throw_reducible(static_cast<int>(n));
      P.col(n).head(n) /= den;
      // Immediate update of the panel columns and the panel rows; the
      // lead x lead part accumulates through one GEMM per panel below.
      P.block(0, n0, n, n - n0).noalias() +=
          P.col(n).head(n) * P.row(n).segment(n0, n - n0);
      if (n > n0) {
        P.block(n0, 0, n - n0, n0).noalias() +=
            P.col(n).segment(n0, n - n0) * P.row(n).head(n0);
      }
    }
    if (n0 > 0) {
      P.topLeftCorner(n0, n0).noalias() +=
          P.block(0, n0, n0, nh - n0) * P.block(n0, 0, nh - n0, n0);
    }
    nh = n0;
  }
  return back_substitute(P);
}

Eigen::VectorXd gth_stationary(Eigen::MatrixXd P) {
  if (P.rows() >= 512) return gth_stationary_blocked(std::move(P));
  return gth_stationary_unblocked(std::move(P));
}

}  // namespace lctrunc
