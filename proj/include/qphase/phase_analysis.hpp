#pragma once

// Phase diagnostics of the cavity field: phase distribution P(theta), phase
// dispersion, Barnett-Pegg sine/cosine fluctuations with the Carruthers-Nieto
// parameters U, S, Q', the Husimi Q function and its radially integrated
// (angular) form.

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qphase/errors.hpp"
#include "qphase/model_core.hpp"
#include "qphase/moments.hpp"
#include "qphase/special.hpp"

namespace qphase {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Uniformly spaced phase samples on [-pi, pi] with quadrature weights.
///
/// Periodic grids sample [-pi, pi) with equal weights (the endpoint pi is the
/// same point as -pi). Closed grids include both endpoints with trapezoid
/// half-weights.
class PhaseGrid {
 public:
  static constexpr std::size_t kMinCount = 64;

  static PhaseGrid periodic(std::size_t count) { return PhaseGrid(count, false); }
  static PhaseGrid closed(std::size_t count) { return PhaseGrid(count, true); }

  std::size_t count() const noexcept { return points_.size(); }
  bool is_closed() const noexcept { return closed_; }
  const std::vector<double>& points() const noexcept { return points_; }
  const std::vector<double>& weights() const noexcept { return weights_; }

 private:
  PhaseGrid(std::size_t count, bool closed) : closed_(closed) {
    if (count < kMinCount)
      throw DomainError("phase grid needs at least " + std::to_string(kMinCount) + " points");
    const double pi = std::numbers::pi;
    const double step = closed ? kTwoPi / static_cast<double>(count - 1)
                               : kTwoPi / static_cast<double>(count);
    points_.resize(count);
    weights_.assign(count, step);
    for (std::size_t j = 0; j < count; ++j) points_[j] = -pi + step * static_cast<double>(j);
    if (closed) {
      points_.back() = pi;
      weights_.front() *= 0.5;
      weights_.back() *= 0.5;
    }
  }

  bool closed_ = false;
  std::vector<double> points_;
  std::vector<double> weights_;
};

/// P(theta) = (1/2pi) sum_k |sum_m e^{i m theta} conj(v_m)|^2.
inline double phase_density(const FieldAmplitudes& field, double theta) {
  double total = 0.0;
  for (const auto& v : field.branches) {
    cplx s{0.0, 0.0};
    for (std::size_t m = 0; m < v.size(); ++m)
      s += std::polar(1.0, theta * static_cast<double>(m)) * std::conj(v[m]);
    total += std::norm(s);
  }
  return total / kTwoPi;
}

inline std::vector<double> phase_distribution(const FieldAmplitudes& field, const PhaseGrid& grid) {
  std::vector<double> out;
  out.reserve(grid.count());
  for (double theta : grid.points()) out.push_back(phase_density(field, theta));
  return out;
}

/// First circular moment of P(theta): sum_k sum_n conj(v_{n+1}) v_n.
inline cplx first_phase_moment(const FieldAmplitudes& field) {
  cplx s{0.0, 0.0};
  for (const auto& v : field.branches)
    for (std::size_t n = 0; n + 1 < v.size(); ++n) s += std::conj(v[n + 1]) * v[n];
  return s;
}

/// D = 1 - |integral e^{-i theta} P(theta) d theta|^2, via the Kronecker collapse
/// of the integral onto adjacent Fock amplitudes.
inline double phase_dispersion(const FieldAmplitudes& field) {
  return 1.0 - std::norm(first_phase_moment(field));
}

enum class FormulaMode { Consistent, PaperLiteral };

inline std::string_view to_string(FormulaMode m) {
  return m == FormulaMode::Consistent ? "consistent" : "paper-literal";
}

inline FormulaMode parse_formula_mode(std::string_view s) {
  if (s == "consistent") return FormulaMode::Consistent;
  if (s == "paper-literal" || s == "literal") return FormulaMode::PaperLiteral;
  throw DomainError("unknown formula mode '" + std::string(s) + "'");
}

struct FluctuationReport {
  double mean_C = 0.0;
  double mean_S = 0.0;
  double mean_C2 = 0.0;
  double mean_S2 = 0.0;
  double var_C = 0.0;
  double var_S = 0.0;
  double var_N = 0.0;
  double U = 0.0;
  double S_param = 0.0;
  double Q_prime = 0.0;
  double mean_N = 0.0;
  /// Tr(rho) of the field the report was computed from.
  double field_norm = 1.0;
  FormulaMode formula_mode = FormulaMode::Consistent;
};

/// <C>, <S>, <C^2>, <S^2> for the Barnett-Pegg operators
/// C = (a + a^dag) / (2 sqrt(N + 1/2)), S = (a - a^dag) / (2i sqrt(N + 1/2)).
///
/// Consistent mode expands the squares with [a, a^dag] = 1. PaperLiteral puts
/// -4(N + 1/2) under both squares, which flips the sign of <C^2> only.
inline FluctuationReport sincos_expectations(const FieldAmplitudes& field,
                                             FormulaMode mode = FormulaMode::Consistent) {
  FluctuationReport r;
  r.formula_mode = mode;
  r.field_norm = field.norm();
  r.mean_N = mean_photon_number(field);

  const cplx a = expect_adag_p_a_q(field, 0, 1);
  const cplx a2 = expect_adag_p_a_q(field, 0, 2);
  const double a_adag = expect_a_adag(field);
  const double scale = r.mean_N + 0.5;
  const double quad_sum = 2.0 * a2.real();  // <a^2> + <a^dag^2>

  r.mean_C = 2.0 * a.real() / (2.0 * std::sqrt(scale));
  // (<a> - <a^dag>) / 2i = Im<a>
  r.mean_S = 2.0 * a.imag() / (2.0 * std::sqrt(scale));
  const double c2_sign = mode == FormulaMode::Consistent ? 1.0 : -1.0;
  r.mean_C2 = c2_sign * (quad_sum + a_adag + r.mean_N) / (4.0 * scale);
  r.mean_S2 = (quad_sum - a_adag - r.mean_N) / (-4.0 * scale);
  r.var_C = r.mean_C2 - r.mean_C * r.mean_C;
  r.var_S = r.mean_S2 - r.mean_S * r.mean_S;
  return r;
}

inline constexpr double kDenominatorFloor = 1e-12;

/// Full report with optional entries left empty where a denominator underflows.
struct PartialFluctuations {
  FluctuationReport report;
  std::optional<std::string> undefined_U;
  std::optional<std::string> undefined_Q_prime;
};

inline PartialFluctuations evaluate_fluctuations(const FieldAmplitudes& field,
                                                 FormulaMode mode = FormulaMode::Consistent) {
  PartialFluctuations out;
  FluctuationReport& r = out.report;
  r = sincos_expectations(field, mode);
  r.var_N = photon_number_variance(field);
  r.S_param = r.var_N * r.var_S;

  const double phase_mag = r.mean_S * r.mean_S + r.mean_C * r.mean_C;
  if (phase_mag > kDenominatorFloor) {
    r.U = r.var_N * (r.var_S + r.var_C) / phase_mag;
  } else {
    r.U = std::nan("");
    out.undefined_U = "<S>^2 + <C>^2 = " + std::to_string(phase_mag) + " underflows";
  }
  const double c_sq = r.mean_C * r.mean_C;
  if (c_sq > kDenominatorFloor) {
    r.Q_prime = r.S_param / c_sq;
  } else {
    r.Q_prime = std::nan("");
    out.undefined_Q_prime = "<C>^2 = " + std::to_string(c_sq) + " underflows";
  }
  return out;
}

/// U = (dN)^2 [(dS)^2 + (dC)^2] / (<S>^2 + <C>^2), S = (dN)^2 (dS)^2, Q' = S / <C>^2.
/// Throws UndefinedQuantity naming U or Qprime for phase-symmetric states.
inline FluctuationReport fluctuation_parameters(const FieldAmplitudes& field,
                                                FormulaMode mode = FormulaMode::Consistent) {
  auto partial = evaluate_fluctuations(field, mode);
  if (partial.undefined_U) throw UndefinedQuantity("U", *partial.undefined_U);
  if (partial.undefined_Q_prime) throw UndefinedQuantity("Qprime", *partial.undefined_Q_prime);
  return partial.report;
}

/// Largest |beta| for which the Fock series of <beta| is trusted at this cutoff.
inline bool husimi_guard_ok(const FieldAmplitudes& field, double beta_abs) {
  return beta_abs * beta_abs + 6.0 * beta_abs < static_cast<double>(field.n_max());
}

/// Q(beta) = <beta| rho |beta> / pi with |beta> = e^{-|beta|^2/2} sum beta^n/sqrt(n!) |n>.
inline double husimi_q(const FieldAmplitudes& field, cplx beta) {
  const double r = std::abs(beta);
  if (!husimi_guard_ok(field, r))
    throw DomainError("|beta| = " + std::to_string(r) + " too large for n_max = " +
                      std::to_string(field.n_max()) + " (need |beta|^2 + 6|beta| < n_max)");
  const double phi = std::arg(beta);
  double total = 0.0;
  for (const auto& v : field.branches) {
    cplx overlap{0.0, 0.0};
    if (r == 0.0) {
      overlap = v[0];
    } else {
      const double log_r = std::log(r);
      double log_fact = 0.0;
      for (std::size_t n = 0; n < v.size(); ++n) {
        const double dn = static_cast<double>(n);
        if (n > 0) log_fact += std::log(dn);
        const double mag = std::exp(-0.5 * r * r + dn * log_r - 0.5 * log_fact);
        overlap += std::polar(mag, -dn * phi) * v[n];
      }
    }
    total += std::norm(overlap);
  }
  return std::max(0.0, total / std::numbers::pi);
}

/// Q_{theta1} = integral_0^inf Q(r e^{i theta1}) r dr
///            = (1/2pi) sum_{m,n} e^{i theta1 (m-n)} conj(v_m) v_n Gamma((m+n)/2 + 1) / sqrt(m! n!).
inline double angular_q(const FieldAmplitudes& field, double theta1) {
  std::size_t len = 0;
  for (const auto& v : field.branches) len = std::max(len, v.size());
  const special::LogFactorialTable lf(len);
  const special::HalfIntegerLogGammaTable lg(2 * len);

  double total = 0.0;
  for (const auto& v : field.branches) {
    ComplexVector u(v.size());
    for (std::size_t n = 0; n < v.size(); ++n)
      u[n] = v[n] * std::polar(1.0, -theta1 * static_cast<double>(n));
    cplx s{0.0, 0.0};
    for (std::size_t m = 0; m < u.size(); ++m) {
      if (u[m] == cplx{}) continue;
      for (std::size_t n = 0; n < u.size(); ++n) {
        const double w = std::exp(lg(m + n) - 0.5 * (lf(m) + lf(n)));
        s += std::conj(u[m]) * u[n] * w;
      }
    }
    total += s.real();
  }
  return total / kTwoPi;
}

}  // namespace qphase
