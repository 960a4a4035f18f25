#pragma once

// Driven two-level atom in a single cavity mode: parameters, Fock truncation,
// closed-form evolution of the joint amplitudes c_{a,n}(t), c_{b,n+1}(t), and
// extraction of the cavity-field state.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qphase/errors.hpp"
#include "qphase/special.hpp"

namespace qphase {

using cplx = std::complex<double>;
using ComplexVector = std::vector<cplx>;

/// Physical inputs. Time is carried as (g, t); `from_gt` builds the
/// dimensionless form with g = 1.
struct ModelParams {
  double g = 1.0;
  double delta = 0.0;
  cplx alpha{0.0, 0.0};
  double t = 0.0;

  static ModelParams from_gt(double gt, double delta, cplx alpha) {
    return ModelParams{1.0, delta, alpha, gt};
  }

  double gt() const noexcept { return g * t; }

  void validate() const {
    if (!(g > 0.0) || !std::isfinite(g)) throw DomainError("g must be finite and > 0");
    if (!(t >= 0.0) || !std::isfinite(t)) throw DomainError("t must be finite and >= 0");
    if (!std::isfinite(delta)) throw DomainError("delta must be finite");
    if (!std::isfinite(std::abs(alpha))) throw DomainError("|alpha| must be finite");
  }
};

enum class TruncationMode { Fixed, Adaptive };

struct TruncationPolicy {
  static constexpr std::size_t kDefaultCeiling = 4096;

  TruncationMode mode = TruncationMode::Adaptive;
  /// Fixed: the cutoff. Adaptive: the smallest cutoff considered.
  std::size_t n_max = 32;
  double tail_tolerance = 1e-12;
  /// Hard upper bound on any cutoff; exceeding it is a TruncationError.
  std::size_t ceiling = kDefaultCeiling;

  static TruncationPolicy fixed(std::size_t n_max) {
    TruncationPolicy p;
    p.mode = TruncationMode::Fixed;
    p.n_max = n_max;
    return p;
  }

  void validate() const {
    if (n_max < 8) throw DomainError("n_max must be >= 8");
    if (!(tail_tolerance > 0.0 && tail_tolerance < 1.0))
      throw DomainError("tail_tolerance must lie in (0, 1)");
    if (n_max > ceiling)
      throw TruncationError("n_max " + std::to_string(n_max) + " exceeds the ceiling " +
                            std::to_string(ceiling));
  }
};

/// Cutoff chosen for a particular coherent amplitude, and the probability mass
/// of the discarded Fock states.
struct ResolvedCutoff {
  std::size_t n_max = 0;
  double tail_mass = 0.0;
};

/// Coherent-state amplitudes c_n(0) for n in [0, n_max] plus the tail mass.
struct CoherentAmplitudes {
  ComplexVector c;
  ResolvedCutoff cutoff;
};

namespace detail {

// Poisson weights |c_n(0)|^2 = e^{-|a|^2} |a|^{2n} / n!, in log space.
inline std::vector<double> poisson_weights(double mean, std::size_t count) {
  std::vector<double> w(count, 0.0);
  if (mean == 0.0) {
    w[0] = 1.0;
    return w;
  }
  const double log_mean = std::log(mean);
  double log_fact = 0.0;
  for (std::size_t n = 0; n < count; ++n) {
    if (n > 0) log_fact += std::log(static_cast<double>(n));
    w[n] = std::exp(-mean + static_cast<double>(n) * log_mean - log_fact);
  }
  return w;
}

// Sum of weights beyond index n_max, summed smallest-first.
inline double tail_beyond(std::span<const double> w, std::size_t n_max) {
  double s = 0.0;
  for (std::size_t k = w.size(); k-- > n_max + 1;) s += w[k];
  return s;
}

}  // namespace detail

/// Picks the Fock cutoff for amplitude `alpha` under `trunc`.
inline ResolvedCutoff resolve_cutoff(cplx alpha, const TruncationPolicy& trunc) {
  trunc.validate();
  const double mean = std::norm(alpha);
  // Weights past mean + 40 sqrt(mean) + 200 are far below any usable tolerance.
  const double reach = mean + 40.0 * std::sqrt(mean) + 200.0;
  const std::size_t limit = std::max<std::size_t>(trunc.n_max, trunc.ceiling) + 1;
  const std::size_t count =
      std::min<std::size_t>(limit, static_cast<std::size_t>(reach)) + 2;
  const auto w = detail::poisson_weights(mean, std::max(count, trunc.n_max + 2));

  if (trunc.mode == TruncationMode::Fixed) {
    return {trunc.n_max, detail::tail_beyond(w, trunc.n_max)};
  }

  // Suffix sums: tail[n] = sum_{k > n} w[k].
  std::vector<double> tail(w.size(), 0.0);
  for (std::size_t k = w.size() - 1; k-- > 0;) tail[k] = tail[k + 1] + w[k + 1];
  for (std::size_t n = trunc.n_max; n < w.size() && n <= trunc.ceiling; ++n) {
    if (tail[n] < trunc.tail_tolerance) return {n, tail[n]};
  }
  throw TruncationError("coherent tail for |alpha|^2 = " + std::to_string(mean) +
                        " does not fall below " + std::to_string(trunc.tail_tolerance) +
                        " before the cutoff ceiling " + std::to_string(trunc.ceiling));
}

/// c_n(0) = e^{-|alpha|^2/2} alpha^n / sqrt(n!), evaluated in log space.
inline CoherentAmplitudes coherent_initial_amplitudes(cplx alpha, const TruncationPolicy& trunc) {
  const ResolvedCutoff cutoff = resolve_cutoff(alpha, trunc);
  ComplexVector c(cutoff.n_max + 1, cplx{0.0, 0.0});
  const double mag = std::abs(alpha);
  if (mag == 0.0) {
    c[0] = 1.0;
    return {std::move(c), cutoff};
  }
  const double log_mag = std::log(mag);
  const double phase = std::arg(alpha);
  const double half_mean = 0.5 * mag * mag;
  double log_fact = 0.0;
  for (std::size_t n = 0; n <= cutoff.n_max; ++n) {
    if (n > 0) log_fact += std::log(static_cast<double>(n));
    const double dn = static_cast<double>(n);
    c[n] = std::polar(std::exp(-half_mean + dn * log_mag - 0.5 * log_fact), dn * phase);
  }
  return {std::move(c), cutoff};
}

/// Omega_n = sqrt(delta^2 + g^2 (n+1)).
inline double rabi_frequency(std::size_t n, const ModelParams& params) {
  return std::hypot(params.delta, params.g * std::sqrt(static_cast<double>(n) + 1.0));
}

/// Joint atom-field amplitudes. c_a[n] is |a, n>; c_b[n] is |b, n>, so c_b has
/// one more entry and c_b[0] is always zero.
struct JointAmplitudes {
  ComplexVector c_a;
  ComplexVector c_b;
  ModelParams params;
  TruncationPolicy truncation;
  double tail_mass = 0.0;

  std::size_t n_max() const noexcept { return c_a.empty() ? 0 : c_a.size() - 1; }

  double norm() const {
    double s = 0.0;
    for (const auto& v : c_a) s += std::norm(v);
    for (const auto& v : c_b) s += std::norm(v);
    return s;
  }
};

inline JointAmplitudes evolve_amplitudes(const ModelParams& params, const TruncationPolicy& trunc) {
  params.validate();
  auto init = coherent_initial_amplitudes(params.alpha, trunc);
  const std::size_t n_max = init.cutoff.n_max;

  JointAmplitudes out;
  out.c_a.assign(n_max + 1, cplx{0.0, 0.0});
  out.c_b.assign(n_max + 2, cplx{0.0, 0.0});
  out.params = params;
  out.truncation = trunc;
  out.tail_mass = init.cutoff.tail_mass;

  const double t = params.t;
  const cplx phase_a = std::polar(1.0, 0.5 * params.delta * t);
  const cplx phase_b = std::conj(phase_a);
  for (std::size_t n = 0; n <= n_max; ++n) {
    const double omega = rabi_frequency(n, params);
    const double coupling = params.g * std::sqrt(static_cast<double>(n) + 1.0);
    const double angle = omega * t / 2.0;
    const double s = std::sin(angle);
    const cplx c0 = init.c[n];
    out.c_a[n] = c0 * cplx{std::cos(angle), -params.delta / omega * s} * phase_a;
    out.c_b[n + 1] = -c0 * cplx{0.0, coupling / omega * s} * phase_b;
  }
  return out;
}

/// Resonant special case: c_{a,n} = c_n(0) cos(g t sqrt(n+1)/2),
/// c_{b,n+1} = -i c_n(0) sin(g t sqrt(n+1)/2).
inline JointAmplitudes evolve_resonant(const ModelParams& params, const TruncationPolicy& trunc) {
  if (params.delta != 0.0) throw DomainError("evolve_resonant requires delta == 0");
  params.validate();
  auto init = coherent_initial_amplitudes(params.alpha, trunc);
  const std::size_t n_max = init.cutoff.n_max;

  JointAmplitudes out;
  out.c_a.assign(n_max + 1, cplx{0.0, 0.0});
  out.c_b.assign(n_max + 2, cplx{0.0, 0.0});
  out.params = params;
  out.truncation = trunc;
  out.tail_mass = init.cutoff.tail_mass;
  for (std::size_t n = 0; n <= n_max; ++n) {
    const double angle = params.g * std::sqrt(static_cast<double>(n) + 1.0) * params.t / 2.0;
    out.c_a[n] = init.c[n] * std::cos(angle);
    out.c_b[n + 1] = init.c[n] * cplx{0.0, -std::sin(angle)};
  }
  return out;
}

enum class FieldMode { PaperCombined, PartialTrace };

inline std::string_view to_string(FieldMode m) {
  return m == FieldMode::PaperCombined ? "paper-combined" : "partial-trace";
}

inline FieldMode parse_field_mode(std::string_view s) {
  if (s == "paper-combined" || s == "combined") return FieldMode::PaperCombined;
  if (s == "partial-trace" || s == "trace") return FieldMode::PartialTrace;
  throw DomainError("unknown field mode '" + std::string(s) + "'");
}

/// Cavity-field state as a sum of rank-one terms rho = sum_k |v_k><v_k|.
///
/// PaperCombined holds the single vector d[n] = c_a[n] + c_b[n+1], never
/// renormalized. PartialTrace holds the two atom branches indexed by photon
/// number: v_0[n] = c_a[n], v_1[n] = c_b[n], so that rho is the exact reduced
/// density matrix Tr_atom |psi><psi|.
struct FieldAmplitudes {
  FieldMode mode = FieldMode::PaperCombined;
  std::vector<ComplexVector> branches;
  JointAmplitudes source;

  std::size_t n_max() const noexcept { return source.n_max(); }
  double tail_mass() const noexcept { return source.tail_mass; }

  /// The combined vector; only meaningful in PaperCombined mode.
  const ComplexVector& d() const {
    if (mode != FieldMode::PaperCombined) throw DomainError("d() requires PaperCombined mode");
    return branches.front();
  }

  /// Tr(rho): sum |d_n|^2 for PaperCombined, the reduced-state trace otherwise.
  double norm() const {
    double s = 0.0;
    for (const auto& v : branches)
      for (const auto& x : v) s += std::norm(x);
    return s;
  }

  /// Multiplies every branch amplitude v_n by e^{i n phi}.
  FieldAmplitudes rotated(double phi) const {
    FieldAmplitudes out = *this;
    for (auto& v : out.branches)
      for (std::size_t n = 0; n < v.size(); ++n) v[n] *= std::polar(1.0, phi * static_cast<double>(n));
    return out;
  }
};

inline FieldAmplitudes field_amplitudes(const JointAmplitudes& joint,
                                        FieldMode mode = FieldMode::PaperCombined) {
  FieldAmplitudes f;
  f.mode = mode;
  f.source = joint;
  if (mode == FieldMode::PaperCombined) {
    ComplexVector d(joint.c_a.size());
    for (std::size_t n = 0; n < d.size(); ++n) d[n] = joint.c_a[n] + joint.c_b[n + 1];
    f.branches.push_back(std::move(d));
  } else {
    ComplexVector a(joint.c_b.size(), cplx{0.0, 0.0});
    std::copy(joint.c_a.begin(), joint.c_a.end(), a.begin());
    f.branches.push_back(std::move(a));
    f.branches.push_back(joint.c_b);
  }
  return f;
}

}  // namespace qphase
