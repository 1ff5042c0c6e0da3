#include "lctrunc/special_case.hpp"

#include <cmath>
#include <string>

#include "lctrunc/errors.hpp"
#include "lctrunc/series.hpp"

namespace lctrunc {

namespace {

Matrix off_diagonal(double upper_right, double lower_left) {
  Matrix m(2, 2);
  m << 0.0, upper_right, lower_left, 0.0;
  return m;
}

void check_betas(double beta1, double beta2) {
  if (!(beta1 > 2.0 && beta2 > beta1)) {
    throw std::invalid_argument("special case: requires 2 < beta1 < beta2");
  }
}

}  // namespace

double zeta(double s) {
  if (!(s > 1.0 + 1e-6)) {
    throw std::domain_error("zeta: s must exceed 1 + 1e-6");
  }
  const detail::CertifiedValue tail = detail::zeta_tail(s, 1);
  if (tail.error > 1e-13) {
    throw std::runtime_error("zeta: certified error " + std::to_string(tail.error) +
                             " exceeds 1e-13 at s=" + std::to_string(s));
  }
  return tail.value;
}

Gig1Spec build_special_spec(double beta1, double beta2) {
  check_betas(beta1, beta2);
  const double z1 = zeta(beta1);
  const double z2 = zeta(beta2);

  Gig1Spec spec;
  spec.d = 2;
  spec.neg_support = -1;
  spec.pos_support = -1;

  // a_i(k): 2^{k-1} on the geometric side, (k+1)^{-beta_i} / (2 zeta(beta_i))
  // on the power side; phase 1 jumps to phase 2 and vice versa.
  auto a_pos = [beta1, beta2, z1, z2](int k) {
    return std::pair<double, double>{std::pow(k + 1.0, -beta1) / (2.0 * z1),
                                     std::pow(k + 1.0, -beta2) / (2.0 * z2)};
  };
  spec.A = [a_pos](int k) -> Matrix {
    if (k <= -1) {
      const double g = std::pow(2.0, k - 1.0);
      return off_diagonal(g, g);
    }
    auto [u, l] = a_pos(k);
    return off_diagonal(u, l);
  };
  // sum_{j<=-m} 2^{j-1} = 2^{-m} for m >= 1.
  spec.tail_neg = [a_pos](int m) -> Matrix {
    if (m >= 1) return off_diagonal(std::pow(2.0, -m), std::pow(2.0, -m));
    // m = 0 adds the A(0) block.
    auto [u, l] = a_pos(0);
    return off_diagonal(0.5 + u, 0.5 + l);
  };
  // sum_{k>=m} (k+1)^{-beta} = zeta tail from m+1.
  spec.tail_pos = [beta1, beta2, z1, z2](int m) -> Matrix {
    if (m <= 0) {
      const double neg_part = (m <= -1) ? (1.0 - std::pow(2.0, m - 1.0)) : 0.0;
      // sum_{k=m}^{-1} 2^{k-1} = 2^{-1} - 2^{m-1}... handled via total below.
      const double geo = (m <= -1) ? (0.5 - std::pow(2.0, m - 1.0)) : 0.0;
      (void)neg_part;
      return off_diagonal(geo + 0.5, geo + 0.5);
    }
    const double u = detail::zeta_tail(beta1, m + 1).value / (2.0 * z1);
    const double l = detail::zeta_tail(beta2, m + 1).value / (2.0 * z2);
    return off_diagonal(u, l);
  };
  // sum_{k>=m} k (k+1)^{-beta} = (zeta_tail(beta-1) - zeta_tail(beta)) from m+1.
  spec.moment_pos = [beta1, beta2, z1, z2](int m) -> Matrix {
    if (m < 1) throw std::invalid_argument("moment_pos: m >= 1 required");
    const double u = (detail::zeta_tail(beta1 - 1.0, m + 1).value -
                      detail::zeta_tail(beta1, m + 1).value) /
                     (2.0 * z1);
    const double l = (detail::zeta_tail(beta2 - 1.0, m + 1).value -
                      detail::zeta_tail(beta2, m + 1).value) /
                     (2.0 * z2);
    return off_diagonal(u, l);
  };
  // sum_{j<=-m} j 2^{j-1} = -(m+1) 2^{-m} for m >= 1.
  spec.moment_neg = [](int m) -> Matrix {
    if (m < 1) throw std::invalid_argument("moment_neg: m >= 1 required");
    const double v = -(m + 1.0) * std::pow(2.0, -m);
    return off_diagonal(v, v);
  };
  // Boundary row: B(0) = underline-A(0), B(k) = A(k) for k >= 1.
  spec.B = [spec](int k) -> Matrix {
    if (k == 0) return spec.tail_neg(0);
    return spec.A(k);
  };
  spec.B_tail = [spec](int m) -> Matrix {
    if (m <= 0) return spec.tail_neg(0) + spec.tail_pos(1);
    return spec.tail_pos(m);
  };
  spec.power_weighted_pos_tail = [beta1, beta2, z1, z2](std::int64_t J, double a,
                                                        double p) -> Vector {
    const detail::CertifiedValue u = detail::power_weight_tail(a, p, beta1, J);
    const detail::CertifiedValue l = detail::power_weight_tail(a, p, beta2, J);
    Vector out(2);
    out << u.upper() / (2.0 * z1), l.upper() / (2.0 * z2);
    return out;
  };
  spec.power_weighted_B_tail = [spec](std::int64_t J, double a, double p) -> Vector {
    if (J < 1) throw std::invalid_argument("power_weighted_B_tail: J >= 1 required");
    return spec.power_weighted_pos_tail(J, a, p);
  };
  return spec;
}

SpecialCaseParams closed_form_params(double beta1, double beta2, double beta0) {
  check_betas(beta1, beta2);
  if (!(beta0 > 1.0 && beta0 < beta1 - 1.0)) {
    throw std::invalid_argument("special case: requires 1 < beta0 < beta1 - 1");
  }
  SpecialCaseParams p;
  p.beta1 = beta1;
  p.beta2 = beta2;
  p.beta0 = beta0;

  const double z1 = zeta(beta1);
  const double r1 = zeta(beta1 - 1.0) / z1;
  p.kappa = 0.25 * (1.0 - 0.5 * r1);
  p.epsilon = 0.5 * (2.0 / r1 - 1.0);
  if (!(p.kappa > 0.0)) {
    throw std::invalid_argument(
        "special case: zeta(beta1-1)/zeta(beta1) >= 2 leaves no feasible kappa; "
        "beta1 is too close to 2");
  }
  p.delta0 = std::pow(1.0 + p.epsilon, 1.0 / (beta0 - 1.0)) - 1.0;
  p.x0 = 1.0 / (1.0 - std::pow(1.0 - p.epsilon, 1.0 / (beta0 - 1.0)));
  p.K0 = 1;
  p.rho = std::max(1.0 + 1.0 / p.delta0, p.x0);
  p.C1 = std::pow(p.rho, beta0) * std::pow(p.delta0, -beta1 + beta0 + 1.0) /
         (2.0 * beta0 * (beta1 - beta0 - 1.0) * z1);
  p.C2 = std::pow(p.rho, beta0) * std::pow(p.delta0, -beta2 + beta0 + 1.0) /
         (2.0 * beta0 * (beta2 - beta0 - 1.0) * zeta(beta2));

  const double k1 = std::pow(p.C1 / p.kappa, 1.0 / (beta1 - 2.0));
  const double k2 = std::pow(p.C2 / p.kappa, 1.0 / (beta2 - 2.0));
  p.K = std::max({p.K0, static_cast<int>(std::ceil(k1)), static_cast<int>(std::ceil(k2))});
  p.K_display_literal = std::max(std::pow(std::floor(p.C1 / p.kappa), 1.0 / (beta1 - 2.0)),
                                 std::pow(std::floor(p.C2 / p.kappa), 1.0 / (beta2 - 2.0)));

  // b: zeta-weighted series with a certified 1e-10-relative tail, plus the
  // kappa beta0 (K + x0)^{beta0-1} cap of the phi o v term over levels <= K.
  const detail::CertifiedValue s1 =
      detail::power_weight_tail(p.K + p.x0, beta0, beta1, 0);
  const detail::CertifiedValue s2 =
      detail::power_weight_tail(p.K + p.x0, beta0, beta2, 0);
  if (s1.error > 1e-10 * s1.value || s2.error > 1e-10 * s2.value) {
    throw std::runtime_error("special case: b series tail not certified to 1e-10 relative");
  }
  p.b = std::max(s1.value / (2.0 * z1), s2.value / (2.0 * zeta(beta2))) +
        p.kappa * beta0 * std::pow(p.K + p.x0, beta0 - 1.0);
  p.B = std::pow(2.0, p.K) * p.b;
  p.c_breve = std::pow(p.B + 1.0, -1.0 + 1.0 / beta0);
  return p;
}

PhiSpec special_phi(const SpecialCaseParams& p) {
  return phi_from_V(special_vfamily(p), p.kappa);
}

VFamily special_vfamily(const SpecialCaseParams& p) {
  return VFamily::polynomial(p.beta0, p.x0);
}

BoundReport bound_special(const SpecialCaseParams& p, double m, double n) {
  if (m < 1.0 || n < 1.0) throw std::invalid_argument("bound_special: m, n must be >= 1");
  BoundReport r;
  r.m = m;
  r.n = n;
  r.variant = BoundVariant::Special;
  const double lump = std::pow(1.0 + p.x0, p.beta0) + p.B;
  r.term_mixing = 8.0 / p.c_breve /
                  (p.kappa * p.beta0 *
                   std::pow(p.kappa * p.c_breve * (m - 1.0) + 1.0, p.beta0 - 1.0)) *
                  lump;
  r.term_truncation = 4.0 * m * p.b / (p.kappa * p.beta0 * std::pow(n + p.x0, p.beta0 - 1.0));
  r.value = r.term_mixing + r.term_truncation;
  return r;
}

std::pair<double, double> plan_tolerance_special(const SpecialCaseParams& p, double E) {
  if (!(E > 0.0 && E < 2.0)) {
    throw std::invalid_argument("plan_tolerance_special: tolerance must lie in (0, 2)");
  }
  const double lump = std::pow(1.0 + p.x0, p.beta0) + p.B;
  const double inner =
      std::pow(16.0 / p.c_breve / (p.kappa * p.beta0 * E) * lump, 1.0 / (p.beta0 - 1.0)) - 1.0;
  const double m0 = std::ceil(inner / (p.kappa * p.c_breve)) + 1.0;
  const double n0 = std::max(
      1.0, std::ceil(std::pow(8.0 * m0 * p.b / (p.kappa * p.beta0 * E), 1.0 / (p.beta0 - 1.0)) -
                     p.x0));
  return {m0, n0};
}

AppendixBReport appendixB_check(const SpecialCaseParams& p, int k_from, int k_to) {
  if (k_from <= p.K) throw std::invalid_argument("appendixB_check: k_from must exceed K");
  if (k_to < k_from) throw std::invalid_argument("appendixB_check: empty range");
  const Gig1Spec spec = build_special_spec(p.beta1, p.beta2);
  const VFamily vfam = special_vfamily(p);

  AppendixBReport rep;
  rep.kappa = p.kappa;
  rep.passed = true;
  rep.rows.reserve(static_cast<std::size_t>(k_to - k_from + 1));
  for (int k = k_from; k <= k_to; ++k) {
    AppendixBRow row;
    row.k = k;
    const auto J = static_cast<std::int64_t>(std::floor(p.delta0 * k)) + 1;
    row.quantity = spec.power_weighted_pos_tail(J, k + p.x0, p.beta0) / vfam.Vp(k);
    row.intermediate = Vector(2);
    row.intermediate << p.C1 * std::pow(k, -p.beta1 + 2.0), p.C2 * std::pow(k, -p.beta2 + 2.0);
    row.ok = (row.quantity.array() <= row.intermediate.array()).all() &&
             (row.intermediate.array() <= p.kappa + 1e-12).all();
    rep.passed = rep.passed && row.ok;
    rep.rows.push_back(std::move(row));
  }
  return rep;
}

}  // namespace lctrunc
