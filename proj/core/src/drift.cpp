#include "lctrunc/drift.hpp"

#include <cmath>
#include <string>

#include "lctrunc/errors.hpp"

namespace lctrunc {

namespace {

constexpr double kQuadTol = 1e-10;
constexpr long kQuadMaxIntervals = 1000000;

struct SimpsonState {
  const std::function<double(double)>* f;
  long intervals = 0;
};

double simpson(double fa, double fm, double fb, double a, double b) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive_simpson(SimpsonState& st, double a, double b, double fa, double fm, double fb,
                        double whole, double tol) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = (*st.f)(lm);
  const double frm = (*st.f)(rm);
  const double left = simpson(fa, flm, fm, a, m);
  const double right = simpson(fm, frm, fb, m, b);
  const double delta = left + right - whole;
  if (std::abs(delta) <= 15.0 * tol || ++st.intervals > kQuadMaxIntervals) {
    return left + right + delta / 15.0;
  }
  return adaptive_simpson(st, a, m, fa, flm, fm, left, 0.5 * tol) +
         adaptive_simpson(st, m, b, fm, frm, fb, right, 0.5 * tol);
}

double integrate(const std::function<double(double)>& f, double a, double b, double tol) {
  if (b <= a) return 0.0;
  SimpsonState st{&f, 0};
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  return adaptive_simpson(st, a, b, fa, fm, fb, simpson(fa, fm, fb, a, b), tol);
}

}  // namespace

void validate_phi(const PhiSpec& phi) {
  if (!phi.phi || !phi.phi_prime) {
    throw assumption_unverified_error("phi: evaluators missing");
  }
  const double grid[] = {1.0, 1.5, 2.0, 3.0, 5.0, 10.0, 30.0, 100.0, 1e3, 1e4, 1e5, 1e6};
  double prev = -1.0;
  double prev_slope = std::numeric_limits<double>::infinity();
  for (double t : grid) {
    const double v = phi.phi(t);
    if (!(v > 0.0)) throw assumption_unverified_error("phi: not positive at t=" + std::to_string(t));
    if (v < prev - 1e-12) throw assumption_unverified_error("phi: decreasing at t=" + std::to_string(t));
    prev = v;
    const double s = phi.phi_prime(t);
    if (s < -1e-12 || s > prev_slope + 1e-10) {
      throw assumption_unverified_error("phi: phi' not nonincreasing at t=" + std::to_string(t));
    }
    prev_slope = s;
  }
  if (!(phi.phi_prime(1e6) < phi.phi_prime(1.0))) {
    throw assumption_unverified_error("phi: phi' does not decay");
  }
  // Midpoint concavity on a few spans.
  const double spans[][2] = {{1.0, 3.0}, {2.0, 10.0}, {10.0, 100.0}, {100.0, 1e4}};
  for (auto& sp : spans) {
    const double mid = 0.5 * (sp[0] + sp[1]);
    if (phi.phi(mid) < 0.5 * (phi.phi(sp[0]) + phi.phi(sp[1])) - 1e-10) {
      throw assumption_unverified_error("phi: midpoint concavity fails on [" +
                                        std::to_string(sp[0]) + ", " + std::to_string(sp[1]) + "]");
    }
  }
}

double H_phi(const PhiSpec& phi, double x) {
  if (x < 1.0) throw std::domain_error("H_phi: x must be >= 1");
  if (phi.closed_form_H) return phi.closed_form_H(x);
  if (x == 1.0) return 0.0;
  const std::function<double(double)> integrand = [&phi](double y) { return 1.0 / phi.phi(y); };
  // Dyadic panels keep the adaptive recursion local on wide domains.
  double acc = 0.0;
  double lo = 1.0;
  while (lo < x) {
    const double hi = std::min(x, lo * 2.0);
    acc += integrate(integrand, lo, hi, kQuadTol / 64.0);
    lo = hi;
  }
  return acc;
}

double H_phi_inverse(const PhiSpec& phi, double y) {
  if (y < 0.0) throw std::domain_error("H_phi_inverse: y must be >= 0");
  if (y == 0.0) return 1.0;
  double lo = 1.0, hi = 2.0;
  while (H_phi(phi, hi) < y) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e300) throw std::runtime_error("H_phi_inverse: bracket growth failed");
  }
  // Bisection on H values; tolerance is on H, not on x.
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double h = H_phi(phi, mid);
    if (std::abs(h - y) <= 1e-10) return mid;
    (h < y ? lo : hi) = mid;
    if (hi - lo <= 1e-14 * hi) break;
  }
  return 0.5 * (lo + hi);
}

double r_phi(const PhiSpec& phi, double x) {
  if (x < 0.0) return 0.0;
  if (phi.closed_form_r) return phi.closed_form_r(x);
  return phi.phi(H_phi_inverse(phi, x));
}

double c_phi_B(const PhiSpec& phi, double B, double x) {
  if (!(B > 0.0)) throw std::invalid_argument("c_phi_B: B must be positive");
  if (x < 0.0) throw std::domain_error("c_phi_B: x must be >= 0");
  return phi.phi(1.0) / phi.phi(B + 1.0) * x;
}

std::vector<Matrix> power_block_row(const BlockKernel& P, int k, int M, int max_dest) {
  if (M < 1) throw std::invalid_argument("power_block_row: M must be >= 1");
  if (M > 1 && P.max_down_jump < 0) {
    throw contract_error(
        "power_block_row: M-step blocks need a bounded level decrease; "
        "verify the drift on the modified kernel instead");
  }
  const int d = P.d;
  const int down = std::max(P.max_down_jump, 0);
  // row_j holds [P^j](k; 0..window_j) with window_j = max_dest + (M-j)*down.
  int window = max_dest + (M - 1) * down;
  std::vector<Matrix> row(window + 1);
  for (int l = 0; l <= window; ++l) row[l] = P.block(k, l);
  for (int j = 2; j <= M; ++j) {
    const int next_window = max_dest + (M - j) * down;
    std::vector<Matrix> next(next_window + 1, Matrix::Zero(d, d));
    for (int l = 0; l <= next_window; ++l) {
      // P(h; l) vanishes for h > l + down, so the sum over intermediate
      // levels is exactly finite.
      const int h_max = std::min(window, l + down);
      for (int h = 0; h <= h_max; ++h) {
        next[l].noalias() += row[h] * P.block(h, l);
      }
    }
    row = std::move(next);
    window = next_window;
  }
  row.resize(max_dest + 1);
  return row;
}

DriftReport verify_drift(const BlockKernel& P, const DriftCertificate& cert,
                         int level_horizon,
                         const std::function<Vector(int k, int L)>& tail_bound,
                         int tail_split) {
  if (level_horizon < 0) throw std::invalid_argument("verify_drift: horizon must be >= 0");
  if (tail_split < level_horizon) {
    throw std::invalid_argument("verify_drift: tail_split must cover the horizon");
  }
  const int d = P.d;
  // An unbounded v with no tail bound cannot be certified.
  if (!tail_bound) {
    const double far = cert.v.value(tail_split + 1, 0);
    const double near = cert.v.value(level_horizon, 0);
    if (far > near) {
      throw contract_error("verify_drift: tail_bound required for unbounded v");
    }
  }
  std::vector<Vector> v_block(tail_split + 1, Vector(d));
  for (int l = 0; l <= tail_split; ++l) {
    for (int i = 0; i < d; ++i) v_block[l](i) = cert.v.value(l, i);
  }

  DriftReport report;
  report.slack.resize(level_horizon + 1);
  report.passed = true;
  report.worst_slack = std::numeric_limits<double>::infinity();
  for (int k = 0; k <= level_horizon; ++k) {
    const std::vector<Matrix> row = power_block_row(P, k, cert.M, tail_split);
    Vector upper = Vector::Zero(d);
    for (int l = 0; l <= tail_split; ++l) upper.noalias() += row[l] * v_block[l];
    if (tail_bound) upper += tail_bound(k, tail_split);
    Vector s(d);
    for (int i = 0; i < d; ++i) {
      const double vk = cert.v.value(k, i);
      s(i) = vk - cert.phi.phi(vk) + (k <= cert.K ? cert.b : 0.0) - upper(i);
      if (s(i) < report.worst_slack) {
        report.worst_slack = s(i);
        report.worst_level = k;
        report.worst_phase = i;
      }
    }
    report.slack[k] = std::move(s);
  }
  report.passed = report.worst_slack >= -1e-10;
  return report;
}

}  // namespace lctrunc
