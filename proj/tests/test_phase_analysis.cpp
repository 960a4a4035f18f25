#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "qphase/phase_analysis.hpp"
#include "qphase/reference_oracles.hpp"

using namespace qphase;

namespace {

constexpr double kPi = std::numbers::pi;

FieldAmplitudes field_at(cplx alpha, double gt, double delta = 0.0, FieldMode mode = FieldMode::PaperCombined) {
  return field_amplitudes(evolve_amplitudes(ModelParams::from_gt(gt, delta, alpha), TruncationPolicy{}), mode);
}

}  // namespace

TEST(PhaseGrid, PeriodicAndClosedLayouts) {
  const auto p = PhaseGrid::periodic(64);
  EXPECT_DOUBLE_EQ(p.points().front(), -kPi);
  EXPECT_LT(p.points().back(), kPi);
  const auto c = PhaseGrid::closed(65);
  EXPECT_DOUBLE_EQ(c.points().back(), kPi);
  double wp = 0.0, wc = 0.0;
  for (double w : p.weights()) wp += w;
  for (double w : c.weights()) wc += w;
  EXPECT_NEAR(wp, 2 * kPi, 1e-12);
  EXPECT_NEAR(wc, 2 * kPi, 1e-12);
  EXPECT_THROW(PhaseGrid::periodic(32), DomainError);
}

TEST(PhaseDistribution, VacuumInputIsUniform) {
  for (double gt : {0.0, 1.3, 4.0}) {
    const auto f = field_at(0.0, gt);
    for (double p : phase_distribution(f, PhaseGrid::periodic(64))) EXPECT_NEAR(p, 1.0 / (2 * kPi), 1e-14);
  }
}

TEST(PhaseDistribution, CoherentPeaksAtZeroAndIsEven) {
  const auto f = field_at(1.0, 0.0);
  const double peak = phase_density(f, 0.0);
  for (double th : {0.3, 1.0, 2.0, 3.0}) {
    EXPECT_LT(phase_density(f, th), peak);
    EXPECT_NEAR(phase_density(f, th), phase_density(f, -th), 1e-14);
  }
}

TEST(PhaseDistribution, PeakFollowsCoherentPhase) {
  const auto f = field_at(std::polar(1.5, 0.8), 0.0);
  const auto grid = PhaseGrid::periodic(720);
  const auto p = phase_distribution(f, grid);
  const auto it = std::max_element(p.begin(), p.end());
  EXPECT_NEAR(grid.points()[static_cast<std::size_t>(it - p.begin())], 0.8, 2 * kPi / 720);
}

TEST(PhaseDistribution, NonNegativeAndPartialTraceNormalized) {
  const auto f = field_at(1.0, 2.0, 0.5, FieldMode::PartialTrace);
  const auto grid = PhaseGrid::periodic(1024);
  const auto p = phase_distribution(f, grid);
  double total = 0.0;
  for (std::size_t j = 0; j < p.size(); ++j) {
    EXPECT_GE(p[j], 0.0);
    total += grid.weights()[j] * p[j];
  }
  EXPECT_NEAR(total, 1.0, 1e-8);
}

TEST(PhaseDistribution, GridFirstMomentMatchesQuadratureOracle) {
  const auto f = field_at(1.0, 2.0);
  const auto grid = PhaseGrid::periodic(1024);
  const auto p = phase_distribution(f, grid);
  cplx m{0.0, 0.0};
  for (std::size_t j = 0; j < p.size(); ++j) m += grid.weights()[j] * std::polar(1.0, -grid.points()[j]) * p[j];
  EXPECT_LE(std::abs(m - oracle::quad_phase_moment(f, 1, grid)), 1e-8);
}

TEST(PhaseDistribution, FrozenPeakAtTimeZero) {
  // mpmath: (1/2pi) (sum_n e^{-1/2}/sqrt(n!))^2 for alpha = 1.
  EXPECT_NEAR(phase_density(field_at(1.0, 0.0), 2 * kPi), 0.70479207857201933, 1e-13);
}

TEST(PhaseDispersion, VacuumInputIsMaximal) {
  for (double gt : {0.0, 2.0, 5.0}) {
    EXPECT_NEAR(phase_dispersion(field_at(0.0, gt)), 1.0, 1e-12);
    EXPECT_NEAR(phase_dispersion(field_at(0.0, gt, 0.0, FieldMode::PartialTrace)), 1.0, 1e-12);
  }
}

TEST(PhaseDispersion, ClosedFormMatchesQuadrature) {
  const auto grid = PhaseGrid::periodic(1024);
  for (auto f : {field_at(1.0, 0.0), field_at(1.0, 2.0), field_at(1.0, 2.0, 0.0, FieldMode::PartialTrace)}) {
    const double quad = 1.0 - std::norm(oracle::quad_phase_moment(f, 1, grid));
    EXPECT_NEAR(phase_dispersion(f), quad, 1e-8);
  }
}

TEST(PhaseDispersion, FrozenValues) {
  // 40-digit mpmath evaluations of 1 - |sum conj(d_{n+1}) d_n|^2.
  EXPECT_NEAR(phase_dispersion(field_at(1.0, 2.0)), 0.40453398022546778, 1e-13);
  EXPECT_NEAR(phase_dispersion(field_at(1.0, 1.0, 1.0)), 0.74415021578238572, 1e-13);
}

TEST(SinCos, VacuumIsPhaseSymmetric) {
  const auto r = sincos_expectations(field_at(0.0, 0.0));
  EXPECT_EQ(r.mean_C, 0.0);
  EXPECT_EQ(r.mean_S, 0.0);
  EXPECT_NEAR(r.mean_C2, 0.5, 1e-15);
  EXPECT_NEAR(r.mean_S2, 0.5, 1e-15);
}

TEST(SinCos, CoherentRealAlpha) {
  const double alpha = 1.4;
  const auto r = sincos_expectations(field_at(alpha, 0.0));
  EXPECT_NEAR(r.mean_S, 0.0, 1e-14);
  EXPECT_NEAR(r.mean_C, alpha / std::sqrt(alpha * alpha + 0.5), 1e-12);
}

TEST(SinCos, MatchesDenseBarnettPeggOperators) {
  for (auto mode : {FieldMode::PaperCombined, FieldMode::PartialTrace}) {
    const auto f = field_at(1.0, 3.0, 0.0, mode);
    const auto r = sincos_expectations(f);
    const auto d = oracle::dense_sincos(f);
    EXPECT_NEAR(r.mean_C, d.mean_C, 1e-9);
    EXPECT_NEAR(r.mean_S, d.mean_S, 1e-9);
    EXPECT_NEAR(r.mean_C2, d.mean_C2, 1e-9);
    EXPECT_NEAR(r.mean_S2, d.mean_S2, 1e-9);
  }
}

TEST(SinCos, PaperLiteralFlipsOnlyCosineSquare) {
  const auto f = field_at(1.0, 3.0);
  const auto c = sincos_expectations(f, FormulaMode::Consistent);
  const auto l = sincos_expectations(f, FormulaMode::PaperLiteral);
  EXPECT_EQ(l.formula_mode, FormulaMode::PaperLiteral);
  EXPECT_DOUBLE_EQ(l.mean_C2, -c.mean_C2);
  EXPECT_DOUBLE_EQ(l.mean_S2, c.mean_S2);
  EXPECT_DOUBLE_EQ(l.mean_C, c.mean_C);
  EXPECT_LT(l.mean_C2, 0.0);
}

TEST(FluctuationParameters, CoherentUIsOneHalf) {
  for (double alpha : {0.5, 1.0, 4.0}) {
    const auto r = fluctuation_parameters(field_at(alpha, 0.0));
    EXPECT_NEAR(r.U, 0.5, 1e-9);
  }
}

TEST(FluctuationParameters, VacuumDenominatorsUnderflow) {
  try {
    fluctuation_parameters(field_at(0.0, 0.0));
    FAIL() << "expected UndefinedQuantity";
  } catch (const UndefinedQuantity& e) {
    EXPECT_EQ(e.quantity(), "U");
  }
  const auto partial = evaluate_fluctuations(field_at(0.0, 0.0));
  EXPECT_TRUE(partial.undefined_U.has_value());
  EXPECT_TRUE(partial.undefined_Q_prime.has_value());
  EXPECT_EQ(partial.report.S_param, 0.0);
}

TEST(FluctuationParameters, QPrimeUnderflowNamedSeparately) {
  // Phase pi/2: <C> = 0 but <S> != 0, so U is defined and Q' is not.
  try {
    fluctuation_parameters(field_at(cplx{0.0, 1.0}, 0.0));
    FAIL() << "expected UndefinedQuantity";
  } catch (const UndefinedQuantity& e) {
    EXPECT_EQ(e.quantity(), "Qprime");
  }
}

TEST(FluctuationParameters, SParamMatchesDenseBruteForce) {
  const auto f = field_at(2.0, 0.0);
  const auto r = fluctuation_parameters(f);
  const auto d = oracle::dense_sincos(f);
  const double n1 = oracle::dense_moment(f, 1, 1).real();
  const double var_n = oracle::dense_moment(f, 2, 2).real() + n1 - n1 * n1;
  const double var_s = d.mean_S2 - d.mean_S * d.mean_S;
  EXPECT_NEAR(r.S_param, var_n * var_s, 1e-9);
  EXPECT_NEAR(r.Q_prime, var_n * var_s / (d.mean_C * d.mean_C), 1e-9);
}

TEST(HusimiQ, Examples) {
  EXPECT_NEAR(husimi_q(field_at(0.0, 0.0), 0.0), 1.0 / kPi, 1e-15);
  EXPECT_NEAR(husimi_q(field_at(1.3, 0.0), 1.3), 1.0 / kPi, 1e-12);
  const cplx alpha = std::polar(1.1, -2.0);
  EXPECT_NEAR(husimi_q(field_at(alpha, 0.0), alpha), 1.0 / kPi, 1e-12);
}

TEST(HusimiQ, SingleSumEqualsDoubleSum) {
  const auto f = field_at(1.0, 4.0);
  const cplx beta{2.0, 0.0};
  const auto& d = f.d();
  cplx s{0.0, 0.0};
  for (std::size_t m = 0; m < d.size(); ++m) {
    for (std::size_t n = 0; n < d.size(); ++n) {
      const double mf = std::tgamma(static_cast<double>(m) + 1.0);
      const double nf = std::tgamma(static_cast<double>(n) + 1.0);
      s += std::exp(-std::norm(beta)) * std::pow(beta, static_cast<double>(m)) / std::sqrt(mf) *
           std::pow(std::conj(beta), static_cast<double>(n)) / std::sqrt(nf) * std::conj(d[m]) * d[n];
    }
  }
  EXPECT_NEAR(husimi_q(f, beta), s.real() / kPi, 1e-12);
}

TEST(HusimiQ, MatchesDenseCoherentVector) {
  for (auto mode : {FieldMode::PaperCombined, FieldMode::PartialTrace}) {
    const auto f = field_at(1.0, 3.0, 0.5, mode);
    for (cplx beta : {cplx{0.0, 0.0}, cplx{0.7, -0.2}, cplx{-1.5, 1.0}})
      EXPECT_NEAR(husimi_q(f, beta), oracle::dense_husimi(f, beta), 1e-13);
  }
}

TEST(HusimiQ, GuardRejectsLargeBeta) {
  const auto f = field_at(1.0, 1.0);  // n_max = 32
  EXPECT_THROW(husimi_q(f, 4.0), DomainError);
  EXPECT_NO_THROW(husimi_q(f, 3.0));
}

TEST(AngularQ, VacuumIsUniform) {
  for (double th : {0.0, 1.0, 4.0}) EXPECT_NEAR(angular_q(field_at(0.0, 0.0), th), 1.0 / (2 * kPi), 1e-15);
}

TEST(AngularQ, GammaFactorSanity) {
  const special::HalfIntegerLogGammaTable lg(4);
  EXPECT_NEAR(std::exp(lg(0)), 1.0, 1e-15);                            // Gamma(1)
  EXPECT_NEAR(std::exp(lg(1)), 0.886226925452758013649083741671, 1e-15);  // Gamma(3/2)
  EXPECT_NEAR(std::exp(lg(2)), 1.0, 1e-15);                            // Gamma(2)
  EXPECT_NEAR(std::exp(lg(3)), 1.5 * 0.886226925452758013649083741671, 1e-15);
}

TEST(AngularQ, MatchesRadialQuadrature) {
  for (auto f : {field_at(1.0, 0.0), field_at(1.0, 1.0), field_at(1.0, 1.0, 0.0, FieldMode::PartialTrace)})
    EXPECT_NEAR(angular_q(f, 1.0), oracle::quad_radial_husimi(f, 1.0), 1e-6);
}

TEST(AngularQ, FrozenValue) {
  // mpmath adaptive quadrature of r <beta|d><d|beta>/pi at alpha = 1, gt = 1, theta1 = 1.
  EXPECT_NEAR(angular_q(field_at(1.0, 1.0), 1.0), 0.12280050663871942, 1e-12);
}

TEST(AngularQ, PartialTraceIntegratesToOne) {
  const auto f = field_at(1.0, 2.0, 0.3, FieldMode::PartialTrace);
  const int n = 256;
  double total = 0.0;
  for (int j = 0; j < n; ++j) total += angular_q(f, 2 * kPi * j / n);
  EXPECT_NEAR(total * 2 * kPi / n, 1.0, 1e-6);
}
