#include <gtest/gtest.h>

#include <cmath>

#include "qphase/moments.hpp"
#include "qphase/reference_oracles.hpp"

using namespace qphase;

namespace {

FieldAmplitudes field_at(cplx alpha, double gt, double delta = 0.0, FieldMode mode = FieldMode::PaperCombined) {
  return field_amplitudes(evolve_amplitudes(ModelParams::from_gt(gt, delta, alpha), TruncationPolicy{}), mode);
}

}  // namespace

TEST(ExpectAdagPAQ, CoherentBaselines) {
  const auto f1 = field_at(1.0, 0.0);
  EXPECT_NEAR(std::abs(expect_adag_p_a_q(f1, 1, 1) - cplx(1.0, 0.0)), 0.0, 1e-12);
  const auto f2 = field_at(2.0, 0.0);
  EXPECT_NEAR(std::abs(expect_adag_p_a_q(f2, 1, 0) - cplx(2.0, 0.0)), 0.0, 1e-12);
  const cplx alpha{0.6, -1.1};
  const auto f3 = field_at(alpha, 0.0);
  EXPECT_NEAR(std::abs(expect_adag_p_a_q(f3, 0, 1) - alpha), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(expect_adag_p_a_q(f3, 0, 2) - alpha * alpha), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(expect_adag_p_a_q(f3, 2, 1) - std::conj(alpha) * std::conj(alpha) * alpha), 0.0, 1e-12);
}

TEST(ExpectAdagPAQ, MatchesDenseOracleAtGtThree) {
  for (auto mode : {FieldMode::PaperCombined, FieldMode::PartialTrace}) {
    const auto f = field_at(1.0, 3.0, 0.0, mode);
    EXPECT_LE(std::abs(expect_adag_p_a_q(f, 1, 1) - oracle::dense_moment(f, 1, 1)), 1e-9);
  }
}

TEST(ExpectAdagPAQ, DiagonalMomentsAreReal) {
  const auto f = field_at(cplx{1.2, 0.4}, 2.7, 0.6);
  for (int p = 0; p <= 4; ++p) EXPECT_LT(std::abs(expect_adag_p_a_q(f, p, p).imag()), 1e-12);
}

TEST(ExpectAdagPAQ, OrderValidation) {
  const auto f = field_at(1.0, 1.0);
  EXPECT_THROW(expect_adag_p_a_q(f, 9, 0), DomainError);
  EXPECT_THROW(expect_adag_p_a_q(f, -1, 0), DomainError);
  EXPECT_NO_THROW(expect_adag_p_a_q(f, 8, 8));
}

TEST(ExpectAAdag, Examples) {
  EXPECT_NEAR(expect_a_adag(field_at(0.0, 0.0)), 1.0, 1e-12);
  EXPECT_NEAR(expect_a_adag(field_at(1.0, 0.0)), 2.0, 1e-12);
  for (auto mode : {FieldMode::PaperCombined, FieldMode::PartialTrace}) {
    const auto f = field_at(1.0, 2.0, 0.0, mode);
    const std::size_t dim = oracle::field_length(f) + 2;
    const auto a = oracle::DenseFieldOperator::annihilation(dim);
    const auto ad = oracle::DenseFieldOperator::creation(dim);
    EXPECT_NEAR(expect_a_adag(f), oracle::dense_expectation(f, a * ad).real(), 1e-9);
  }
}

TEST(ExpectAAdag, CommutatorShiftTracksNorm) {
  // Off resonance the combined vector is not normalized; the shift follows it.
  const auto f = field_at(1.0, 3.0, 1.0);
  EXPECT_GT(std::abs(f.norm() - 1.0), 1e-3);
  EXPECT_NEAR(expect_a_adag(f) - mean_photon_number(f), f.norm(), 1e-10);
  const auto t = field_at(1.0, 3.0, 1.0, FieldMode::PartialTrace);
  EXPECT_NEAR(expect_a_adag(t) - mean_photon_number(t), 1.0, 1e-10);
}

TEST(PhotonStatistics, CoherentIsPoissonian) {
  const auto f = field_at(1.0, 0.0);
  EXPECT_NEAR(mean_photon_number(f), 1.0, 1e-12);
  EXPECT_NEAR(photon_number_variance(f), 1.0, 1e-12);
}

TEST(PhotonStatistics, VacuumIsQuiet) {
  const auto f = field_at(0.0, 0.0);
  EXPECT_EQ(mean_photon_number(f), 0.0);
  EXPECT_EQ(photon_number_variance(f), 0.0);
}

TEST(PhotonStatistics, MatchesDenseOracle) {
  for (auto mode : {FieldMode::PaperCombined, FieldMode::PartialTrace}) {
    const auto f = field_at(1.0, 3.0, 0.0, mode);
    const double n1 = oracle::dense_moment(f, 1, 1).real();
    const double n2 = oracle::dense_moment(f, 2, 2).real();
    EXPECT_NEAR(mean_photon_number(f), n1, 1e-9);
    EXPECT_NEAR(photon_number_variance(f), n2 + n1 - n1 * n1, 1e-9);
  }
}

TEST(G2Zero, CoherentIsOne) {
  for (double alpha : {0.3, 1.0, 2.5}) EXPECT_NEAR(g2_zero(field_at(alpha, 0.0)), 1.0, 1e-9);
}

TEST(G2Zero, UndefinedForVacuum) {
  EXPECT_THROW(g2_zero(field_at(0.0, 0.0)), UndefinedQuantity);
  try {
    g2_zero(field_at(0.0, 1.0));
    FAIL() << "expected UndefinedQuantity";
  } catch (const UndefinedQuantity& e) {
    EXPECT_EQ(e.quantity(), "g2");
  }
}

TEST(G2Zero, FrozenPartialTraceValue) {
  // 40-digit mpmath evaluation of the reduced field state at alpha = 1, gt = 3.
  EXPECT_NEAR(g2_zero(field_at(1.0, 3.0, 0.0, FieldMode::PartialTrace)), 0.61818754181834646, 1e-12);
}

TEST(G2Zero, CombinedVectorOnResonanceStaysPoissonian) {
  // On resonance d_n = c_n(0) e^{-i gt sqrt(n+1)/2}: same photon-number weights as the input.
  for (double gt : {1.0, 3.0, 7.5}) EXPECT_NEAR(g2_zero(field_at(1.0, gt)), 1.0, 1e-12);
}

TEST(G2Zero, AntibunchingInSweepOfReducedState) {
  bool found = false;
  for (int i = 0; i <= 100 && !found; ++i)
    found = g2_zero(field_at(1.0, 0.1 * i, 0.0, FieldMode::PartialTrace)) < 1.0;
  EXPECT_TRUE(found);
}
