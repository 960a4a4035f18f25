#pragma once

// Normally ordered field moments <a^dag^p a^q> and the photon statistics
// built from them.

#include <cmath>
#include <complex>
#include <cstddef>
#include <string>

#include "qphase/errors.hpp"
#include "qphase/model_core.hpp"
#include "qphase/special.hpp"

namespace qphase {

struct MomentRequest {
  static constexpr int kMaxOrder = 8;
  int p = 0;  ///< power of a^dag
  int q = 0;  ///< power of a

  void validate() const {
    if (p < 0 || q < 0 || p > kMaxOrder || q > kMaxOrder)
      throw DomainError("moment orders must lie in [0, " + std::to_string(kMaxOrder) + "]");
  }
};

/// <a^dag^p a^q> = sum_k sum_m conj(v_{m+p-q}) v_m sqrt(m! (m+p-q)!) / (m-q)!
/// over the field's rank-one terms v_k. Terms outside the stored range vanish.
inline cplx expect_adag_p_a_q(const FieldAmplitudes& field, MomentRequest req) {
  req.validate();
  const long shift = static_cast<long>(req.p) - static_cast<long>(req.q);
  if (shift < -static_cast<long>(field.n_max()))
    throw DomainError("p - q must be >= -n_max");

  std::size_t len = 0;
  for (const auto& v : field.branches) len = std::max(len, v.size());
  const special::LogFactorialTable lf(len + static_cast<std::size_t>(req.p) + 1);

  cplx total{0.0, 0.0};
  for (const auto& v : field.branches) {
    const long size = static_cast<long>(v.size());
    for (long m = req.q; m < size; ++m) {
      const long k = m + shift;
      if (k < 0 || k >= size) continue;
      const auto um = static_cast<std::size_t>(m);
      const auto uk = static_cast<std::size_t>(k);
      const double weight = std::exp(0.5 * (lf(um) + lf(uk)) - lf(um - req.q));
      total += std::conj(v[uk]) * v[um] * weight;
    }
  }
  return total;
}

inline cplx expect_adag_p_a_q(const FieldAmplitudes& field, int p, int q) {
  return expect_adag_p_a_q(field, MomentRequest{p, q});
}

/// <a a^dag> = <a^dag a> + Tr(rho).
inline double expect_a_adag(const FieldAmplitudes& field) {
  return expect_adag_p_a_q(field, 1, 1).real() + field.norm();
}

inline double mean_photon_number(const FieldAmplitudes& field) {
  return expect_adag_p_a_q(field, 1, 1).real();
}

inline constexpr double kVarianceClamp = 1e-12;

/// (Delta N)^2 = <a^dag^2 a^2> + <N> - <N>^2. Values in [-1e-12, 0) are
/// clamped to zero; anything more negative is returned as is (possible only
/// for a PaperCombined vector whose norm differs from one).
inline double photon_number_variance(const FieldAmplitudes& field) {
  const double nbar = mean_photon_number(field);
  const double var = expect_adag_p_a_q(field, 2, 2).real() + nbar - nbar * nbar;
  return (var < 0.0 && var >= -kVarianceClamp) ? 0.0 : var;
}

inline constexpr double kG2Threshold = 1e-10;

/// g2(0) = <a^dag^2 a^2> / <a^dag a>^2.
inline double g2_zero(const FieldAmplitudes& field, double threshold = kG2Threshold) {
  const double nbar = mean_photon_number(field);
  if (!(nbar > threshold))
    throw UndefinedQuantity("g2", "mean photon number " + std::to_string(nbar) +
                                      " is below the threshold");
  return expect_adag_p_a_q(field, 2, 2).real() / (nbar * nbar);
}

}  // namespace qphase
