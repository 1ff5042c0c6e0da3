#include "lctrunc/blockmatrix.hpp"

#include <string>

#include "lctrunc/errors.hpp"
#include "lctrunc/gth.hpp"

namespace lctrunc {

namespace {

bool leq_entrywise(const Matrix& a, const Matrix& b, double tol) {
  return ((a.array() - b.array()) <= tol).all();
}

bool rows_ordered(const BlockKernel& P, int k, int level_horizon, double tol) {
  for (int l = 0; l <= level_horizon; ++l) {
    if (!leq_entrywise(P.tail_block(k, l), P.tail_block(k + 1, l), tol)) return false;
  }
  return true;
}

}  // namespace

void validate_kernel(const BlockKernel& P, int level_horizon, double tol) {
  if (P.d < 1) throw std::invalid_argument("kernel: block size must be positive");
  for (int k = 0; k <= level_horizon; ++k) {
    const Matrix full = P.tail_block(k, 0);
    if ((full.array() < -tol).any()) {
      throw std::invalid_argument("kernel: negative block mass at level " + std::to_string(k));
    }
    if (((full.rowwise().sum().array() - 1.0).abs() > tol).any()) {
      throw std::invalid_argument("kernel: row sums at level " + std::to_string(k) +
                                  " deviate from 1");
    }
    for (int l = 0; l <= level_horizon; ++l) {
      const Matrix lhs = P.tail_block(k, l);
      const Matrix rhs = P.tail_block(k, l + 1) + P.block(k, l);
      if (((lhs - rhs).array().abs() > tol).any()) {
        throw std::invalid_argument("kernel: tail consistency violated at (" +
                                    std::to_string(k) + ", " + std::to_string(l) + ")");
      }
      if ((P.block(k, l).array() < -tol).any()) {
        throw std::invalid_argument("kernel: negative entry in block (" +
                                    std::to_string(k) + ", " + std::to_string(l) + ")");
      }
    }
  }
}

bool is_block_monotone(const BlockKernel& P, int level_horizon, double tol) {
  if (level_horizon < 1) throw std::invalid_argument("is_block_monotone: horizon must be >= 1");
  if (tol < 0) throw std::invalid_argument("is_block_monotone: tol must be >= 0");

  if (P.tag == StructureTag::GiG1) {
    // Interior rows are level-shifted copies of one another: comparing one
    // interior pair per diagonal covers every k >= 1. The boundary row is
    // checked in full.
    return rows_ordered(P, 0, level_horizon, tol) && rows_ordered(P, 1, level_horizon, tol);
  }
  for (int k = 0; k < level_horizon; ++k) {
    if (!rows_ordered(P, k, level_horizon, tol)) return false;
  }
  return true;
}

bool is_block_increasing(const BlockVector& f, int level_horizon) {
  if (level_horizon < 1) throw std::invalid_argument("is_block_increasing: horizon must be >= 1");
  for (int k = 0; k < level_horizon; ++k) {
    for (int i = 0; i < f.d; ++i) {
      if (f.value(k, i) > f.value(k + 1, i)) return false;
    }
  }
  return true;
}

bool block_dominates(const BlockKernel& P1, const BlockKernel& P2,
                     int level_horizon, double tol) {
  if (P1.d != P2.d) throw std::invalid_argument("block_dominates: block sizes differ");
  for (int k = 0; k <= level_horizon; ++k) {
    for (int l = 0; l <= level_horizon; ++l) {
      if (!leq_entrywise(P1.tail_block(k, l), P2.tail_block(k, l), tol)) return false;
    }
  }
  return true;
}

Matrix boundary_matrix_psi(const BlockKernel& P, double tol) {
  const Matrix psi = P.tail_block(0, 0);
  for (int k = 1; k <= 10; ++k) {
    if (((P.tail_block(k, 0) - psi).array().abs() > tol).any()) {
      throw not_block_monotone_error(
          "boundary_matrix_psi: sum_m P(k;m) is not constant over k (violated at k=" +
          std::to_string(k) + ")");
    }
  }
  return psi;
}

Vector stationary_phase(const Matrix& psi) {
  if (psi.rows() != psi.cols() || psi.rows() < 1) {
    throw std::invalid_argument("stationary_phase: square matrix required");
  }
  Vector varpi = gth_stationary(psi);
  const double residual = (varpi.transpose() * psi - varpi.transpose()).cwiseAbs().sum();
  if (residual > 1e-12) {
    throw std::runtime_error("stationary_phase: residual " + std::to_string(residual) +
                             " exceeds 1e-12");
  }
  return varpi;
}

}  // namespace lctrunc
