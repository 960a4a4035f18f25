#pragma once

// Brute-force reference computations used by tests and the acceptance suite.
// Nothing in the production path calls into this header.

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <string>

#include "qphase/errors.hpp"
#include "qphase/model_core.hpp"
#include "qphase/phase_analysis.hpp"

namespace qphase::oracle {

using DenseMatrix = Eigen::MatrixXcd;
using DenseVector = Eigen::VectorXcd;

/// Truncated-Fock matrices for a, a^dag and their products.
class DenseFieldOperator {
 public:
  static DenseFieldOperator annihilation(std::size_t dim) {
    DenseMatrix m = DenseMatrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    for (std::size_t n = 1; n < dim; ++n)
      m(static_cast<Eigen::Index>(n - 1), static_cast<Eigen::Index>(n)) = std::sqrt(static_cast<double>(n));
    return DenseFieldOperator(std::move(m));
  }

  static DenseFieldOperator creation(std::size_t dim) {
    return DenseFieldOperator(annihilation(dim).matrix().adjoint());
  }

  static DenseFieldOperator identity(std::size_t dim) {
    const auto d = static_cast<Eigen::Index>(dim);
    return DenseFieldOperator(DenseMatrix::Identity(d, d));
  }

  explicit DenseFieldOperator(DenseMatrix m) : m_(std::move(m)) {}

  const DenseMatrix& matrix() const noexcept { return m_; }
  std::size_t dim() const noexcept { return static_cast<std::size_t>(m_.rows()); }

  DenseFieldOperator operator*(const DenseFieldOperator& o) const { return DenseFieldOperator(m_ * o.m_); }
  DenseFieldOperator operator+(const DenseFieldOperator& o) const { return DenseFieldOperator(m_ + o.m_); }
  DenseFieldOperator operator-(const DenseFieldOperator& o) const { return DenseFieldOperator(m_ - o.m_); }
  DenseFieldOperator operator*(cplx s) const { return DenseFieldOperator(m_ * s); }

  DenseFieldOperator pow(int k) const {
    DenseFieldOperator out = identity(dim());
    for (int i = 0; i < k; ++i) out = out * *this;
    return out;
  }

 private:
  DenseMatrix m_;
};

inline std::size_t field_length(const FieldAmplitudes& field) {
  std::size_t len = 0;
  for (const auto& v : field.branches) len = std::max(len, v.size());
  return len;
}

/// Sum over rank-one terms of <v| op |v>, with v zero-padded to op's dimension.
inline cplx dense_expectation(const FieldAmplitudes& field, const DenseFieldOperator& op) {
  cplx total{0.0, 0.0};
  for (const auto& v : field.branches) {
    if (v.size() > op.dim()) throw DomainError("operator dimension smaller than the state");
    DenseVector x = DenseVector::Zero(static_cast<Eigen::Index>(op.dim()));
    for (std::size_t n = 0; n < v.size(); ++n) x(static_cast<Eigen::Index>(n)) = v[n];
    total += x.dot(op.matrix() * x);  // dot conjugates the left argument
  }
  return total;
}

/// <a^dag^p a^q> by explicit matrix products. `dim` = 0 picks a dimension with
/// enough headroom; an explicit dim must be >= n_max + p + 1 and hold the state.
inline cplx dense_moment(const FieldAmplitudes& field, int p, int q, std::size_t dim = 0) {
  if (p < 0 || q < 0) throw DomainError("moment orders must be non-negative");
  const std::size_t len = field_length(field);
  const std::size_t needed = std::max(field.n_max() + static_cast<std::size_t>(p) + 1, len);
  if (dim == 0) dim = len + static_cast<std::size_t>(p + q) + 1;
  if (dim < needed)
    throw DomainError("dense operator dimension " + std::to_string(dim) + " violates headroom (need >= " +
                      std::to_string(needed) + ")");
  const auto a = DenseFieldOperator::annihilation(dim);
  const auto ad = DenseFieldOperator::creation(dim);
  return dense_expectation(field, ad.pow(p) * a.pow(q));
}

struct DenseSinCos {
  double mean_C, mean_S, mean_C2, mean_S2, mean_N;
};

/// Barnett-Pegg <C>, <S>, <C^2>, <S^2> from the dense operators themselves.
inline DenseSinCos dense_sincos(const FieldAmplitudes& field) {
  const std::size_t dim = field_length(field) + 4;
  const auto a = DenseFieldOperator::annihilation(dim);
  const auto ad = DenseFieldOperator::creation(dim);
  const double nbar = dense_expectation(field, ad * a).real();
  const double k = 2.0 * std::sqrt(nbar + 0.5);
  const auto C = (a + ad) * cplx{1.0 / k, 0.0};
  const auto S = (a - ad) * (1.0 / (cplx{0.0, 1.0} * k));
  return {dense_expectation(field, C).real(), dense_expectation(field, S).real(),
          dense_expectation(field, C * C).real(), dense_expectation(field, S * S).real(), nbar};
}

/// Classic RK4 integration of
///   dc_{a,n}/dt   = -i g sqrt(n+1)/2 e^{+i delta t} c_{b,n+1}
///   dc_{b,n+1}/dt = -i g sqrt(n+1)/2 e^{-i delta t} c_{a,n}
/// from c_{a,n}(0) = c_n(0), c_{b,n+1}(0) = 0. The step is shrunk so an
/// integer number of steps lands exactly on t.
inline JointAmplitudes integrate_schrodinger_rk4(const ModelParams& params, const TruncationPolicy& trunc,
                                                 double dt) {
  params.validate();
  if (!(dt > 0.0)) throw DomainError("dt must be > 0");
  const ResolvedCutoff cutoff = resolve_cutoff(params.alpha, trunc);
  const std::size_t n_max = cutoff.n_max;
  const double omega_top = std::hypot(params.delta, params.g * std::sqrt(static_cast<double>(n_max) + 1.0));
  if (!(dt * omega_top < 0.1))
    throw DomainError("dt * Omega_nmax = " + std::to_string(dt * omega_top) + " violates the stability guard (< 0.1)");

  JointAmplitudes out;
  out.params = params;
  out.truncation = trunc;
  out.tail_mass = cutoff.tail_mass;
  out.c_a.assign(n_max + 1, cplx{0.0, 0.0});
  out.c_b.assign(n_max + 2, cplx{0.0, 0.0});

  // Plain recurrence c_{n+1} = c_n alpha / sqrt(n+1), independent of the log-space path.
  out.c_a[0] = std::exp(-0.5 * std::norm(params.alpha));
  for (std::size_t n = 0; n < n_max; ++n)
    out.c_a[n + 1] = out.c_a[n] * params.alpha / std::sqrt(static_cast<double>(n) + 1.0);

  if (params.t == 0.0) return out;

  const auto steps = static_cast<std::size_t>(std::ceil(params.t / dt));
  const double h = params.t / static_cast<double>(steps);
  const double delta = params.delta;
  const cplx minus_i{0.0, -1.0};

  for (std::size_t n = 0; n <= n_max; ++n) {
    const double k = params.g * std::sqrt(static_cast<double>(n) + 1.0) / 2.0;
    cplx ca = out.c_a[n];
    cplx cb = 0.0;
    auto rhs = [&](double time, cplx xa, cplx xb, cplx& da, cplx& db) {
      da = minus_i * k * std::polar(1.0, delta * time) * xb;
      db = minus_i * k * std::polar(1.0, -delta * time) * xa;
    };
    for (std::size_t s = 0; s < steps; ++s) {
      const double time = h * static_cast<double>(s);
      cplx k1a, k1b, k2a, k2b, k3a, k3b, k4a, k4b;
      rhs(time, ca, cb, k1a, k1b);
      rhs(time + h / 2, ca + h / 2 * k1a, cb + h / 2 * k1b, k2a, k2b);
      rhs(time + h / 2, ca + h / 2 * k2a, cb + h / 2 * k2b, k3a, k3b);
      rhs(time + h, ca + h * k3a, cb + h * k3b, k4a, k4b);
      ca += h / 6 * (k1a + 2.0 * k2a + 2.0 * k3a + k4a);
      cb += h / 6 * (k1b + 2.0 * k2b + 2.0 * k3b + k4b);
    }
    out.c_a[n] = ca;
    out.c_b[n + 1] = cb;
  }
  return out;
}

/// Q(beta) from an explicitly built coherent-state vector <n|beta>, no guard.
inline double dense_husimi(const FieldAmplitudes& field, cplx beta) {
  const std::size_t len = field_length(field);
  ComplexVector ket(len);
  ket[0] = std::exp(-0.5 * std::norm(beta));
  for (std::size_t n = 0; n + 1 < len; ++n) ket[n + 1] = ket[n] * beta / std::sqrt(static_cast<double>(n) + 1.0);
  double total = 0.0;
  for (const auto& v : field.branches) {
    cplx s{0.0, 0.0};
    for (std::size_t n = 0; n < v.size(); ++n) s += std::conj(ket[n]) * v[n];
    total += std::norm(s);
  }
  return total / std::numbers::pi;
}

/// Composite Simpson quadrature of Q(r e^{i theta1}) r over r in [0, r_max].
/// r_max <= 0 selects |alpha| + 8.
inline double quad_radial_husimi(const FieldAmplitudes& field, double theta1, double r_max = 0.0,
                                 std::size_t n_r = 2048) {
  if (n_r < 256) throw DomainError("radial quadrature needs n_r >= 256");
  if (n_r % 2 != 0) ++n_r;
  if (r_max <= 0.0) r_max = std::abs(field.source.params.alpha) + 8.0;
  const auto integrand = [&](double r) { return dense_husimi(field, std::polar(r, theta1)) * r; };
  if (!(integrand(r_max) < 1e-14))
    throw DomainError("Husimi tail Q(r_max) r_max = " + std::to_string(integrand(r_max)) + " is not below 1e-14");
  const double h = r_max / static_cast<double>(n_r);
  double s = integrand(0.0) + integrand(r_max);
  for (std::size_t j = 1; j < n_r; ++j) s += (j % 2 == 1 ? 4.0 : 2.0) * integrand(h * static_cast<double>(j));
  return s * h / 3.0;
}

/// k-th circular moment integral e^{-i k theta} P(theta) d theta by grid
/// quadrature, with P summed directly from the Fock amplitudes.
inline cplx quad_phase_moment(const FieldAmplitudes& field, int k, const PhaseGrid& grid) {
  if (grid.count() < 1024) throw DomainError("phase moment quadrature needs >= 1024 grid points");
  cplx total{0.0, 0.0};
  const auto& pts = grid.points();
  const auto& wts = grid.weights();
  for (std::size_t j = 0; j < pts.size(); ++j) {
    double p = 0.0;
    for (const auto& v : field.branches) {
      cplx s{0.0, 0.0};
      for (std::size_t m = 0; m < v.size(); ++m)
        s += std::conj(v[m]) * std::polar(1.0, pts[j] * static_cast<double>(m));
      p += std::norm(s);
    }
    p /= 2.0 * std::numbers::pi;
    total += wts[j] * std::polar(1.0, -static_cast<double>(k) * pts[j]) * p;
  }
  return total;
}

}  // namespace qphase::oracle
