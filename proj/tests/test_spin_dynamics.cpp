#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include <gtest/gtest.h>

#include "spindyn/spin_dynamics.hpp"

using namespace spindyn;
using namespace spindyn::spin;

namespace {

constexpr double kPi = std::numbers::pi;

void expect_vec(const Vec3& got, const Vec3& want, double tol) {
  for (std::size_t i = 0; i < 3; ++i) EXPECT_NEAR(got[i], want[i], tol) << "component " << i;
}

ParticleParams unit_particle(double gamma = 0.0, double e = -1.0) {
  ParticleParams p;
  p.e = e;
  p.gamma_align = gamma;
  return p;
}

}  // namespace

TEST(PrecessionVector, PureMagneticField) {
  const ParticleParams pp = unit_particle(0.0, 0.7);
  FieldConfig f;
  f.B = {0, 0, 2.0};
  expect_vec(precession_vector(f, {0.3, 0.1, -0.4}, pp), {0, 0, -0.7 * 2.0}, 1e-15);
}

TEST(PrecessionVector, NoFieldsNoPrecession) {
  expect_vec(precession_vector(FieldConfig{}, {1, 2, 3}, unit_particle()), {0, 0, 0}, 0.0);
}

TEST(PrecessionVector, SpinOrbitTerm) {
  const ParticleParams pp = unit_particle(0.0, 1.0);
  FieldConfig f;
  f.E = {1, 0, 0};
  // [p, E] = (0,1,0) x (1,0,0) = (0,0,-1), R = -(B - [p,E]/2)
  expect_vec(precession_vector(f, {0, 1, 0}, pp), {0, 0, -0.5}, 1e-15);
}

TEST(PrecessionRhs, FixedPointAndBasisCase) {
  expect_vec(precession_rhs({0, 0, 2}, {0, 0, 1}), {0, 0, 0}, 0.0);
  expect_vec(precession_rhs({1, 0, 0}, {0, 0, 1}), {0, 1, 0}, 0.0);
}

TEST(AlignmentRhs, FixedSetsVanish) {
  const ParticleParams pp = unit_particle(1.0);
  const Vec3 B{0, 0, 1.5};
  expect_vec(alignment_rhs({0, 0, 0.8}, B, pp), {0, 0, 0}, 1e-15);
  expect_vec(alignment_rhs({0.8, 0.1, 0}, B, pp), {0, 0, 0}, 1e-15);
  expect_vec(alignment_rhs({0.8, 0.1, 0.2}, {0, 0, 0}, pp), {0, 0, 0}, 0.0);
  EXPECT_THROW(alignment_rhs({0, 0, 0}, B, pp), std::domain_error);
}

TEST(AlignmentRhs, TiltedSpinByHand) {
  const ParticleParams pp = unit_particle(0.8, -1.3);
  const double beta = 0.8 * 1.3;
  const double b = 2.0, s = 0.6, th = 0.9;
  const Vec3 S = s * Vec3{std::sin(th), 0, std::cos(th)};
  const Vec3 got = alignment_rhs(S, {0, 0, b}, pp);
  const Vec3 want =
      beta * b * s * std::cos(th) * Vec3{-std::sin(th) * std::cos(th), 0.0, std::sin(th) * std::sin(th)};
  expect_vec(got, want, 1e-15);
  EXPECT_NEAR(dot(got, S), 0.0, 1e-15);
  expect_vec(alignment_rhs_projected(S, {0, 0, b}, pp), want, 1e-15);
}

TEST(SpinRhsTotal, SumOfBothTermsAtQuarterPi) {
  const ParticleParams pp = unit_particle(1.0);
  FieldConfig f;
  f.B = {0, 0, 1};
  const double th = kPi / 4;
  const Vec3 S{std::sin(th), 0, std::cos(th)};
  // precession: R = (0,0,1) since e = -1; R x S = (0, sin th, 0)
  // alignment: cos th (-sin th cos th, 0, sin^2 th)
  const Vec3 want{-std::cos(th) * std::sin(th) * std::cos(th), std::sin(th),
                  std::cos(th) * std::sin(th) * std::sin(th)};
  expect_vec(spin_rhs_total(S, f, {}, pp), want, 1e-15);
  expect_vec(spin_rhs_total({0, 0, 0.5}, f, {}, pp), {0, 0, 0}, 1e-15);
}

TEST(Integrate, AlignedSpinStaysPut) {
  FieldConfig f;
  f.B = {0, 0, 1};
  SpinState s0;
  s0.S = {0, 0, 0.866};
  const auto tr = integrate_spin(s0, f, unit_particle(1.0), 0.01, 500);
  ASSERT_EQ(tr.size(), 501u);
  for (const auto& s : tr) expect_vec(s.S, s0.S, 1e-15);
}

TEST(Integrate, NonFiniteStateReportsStep) {
  SpinState s0;
  s0.S = {1, 0, 0};
  auto rhs = [](const Vec3& S, double t) { return t > 0.05 ? Vec3{std::numeric_limits<double>::quiet_NaN(), 0, 0} : S; };
  try {
    integrate_spin(s0, rhs, {0, 0, 1}, 0.01, 100);
    FAIL() << "expected NumericalFailure";
  } catch (const NumericalFailure& ex) {
    EXPECT_GT(ex.step(), 0u);
    EXPECT_LE(ex.step(), 10u);
  }
}

TEST(Integrate, RejectsBadStep) {
  FieldConfig f;
  SpinState s0;
  s0.S = {1, 0, 0};
  EXPECT_THROW(integrate_spin(s0, f, unit_particle(), 0.0, 10), std::invalid_argument);
}

TEST(Rodrigues, IdentityAtZeroTime) {
  expect_vec(rotate_rodrigues({0.2, 0.4, -0.1}, {1, 2, 3}, 0.0), {0.2, 0.4, -0.1}, 1e-16);
  expect_vec(rotate_rodrigues({0.2, 0.4, -0.1}, {0, 0, 0}, 5.0), {0.2, 0.4, -0.1}, 0.0);
}

TEST(Rodrigues, QuarterTurnFollowsRightHandRule) {
  const double w = 2.5;
  // dS/dt = R x S with R = w z: x rotates toward +y
  expect_vec(rotate_rodrigues({1, 0, 0}, {0, 0, w}, kPi / (2 * w)), {0, 1, 0}, 1e-15);
}

TEST(Rodrigues, MatchesRk4Integration) {
  const ParticleParams pp = unit_particle(0.0, -0.9);
  FieldConfig f;
  f.B = {0.3, -0.5, 1.1};
  f.E = {0.2, 0.4, 0.0};
  SpinState s0;
  s0.S = {0.5, 0.1, -0.7};
  s0.p = {0.1, -0.3, 0.2};
  const Vec3 R = precession_vector(f, s0.p, pp);
  const auto tr = integrate_spin(s0, f, pp, 1e-3, 5000);
  double worst = 0.0;
  for (const auto& s : tr) worst = std::max(worst, norm(s.S - rotate_rodrigues(s0.S, R, s.t)));
  EXPECT_LT(worst, 1e-8);
}

TEST(AnalyticTheta, HalvingTheTangent) {
  ParticleParams pp = unit_particle(1.0);
  EXPECT_NEAR(analytic_theta(kPi / 4, 1.0, pp, std::log(2.0)), std::atan(0.5), 1e-15);
  EXPECT_EQ(analytic_theta(0.7, 1.0, pp, 0.0), 0.7);
}

TEST(AnalyticTheta, MirrorDecaysToSouthPole) {
  ParticleParams pp = unit_particle(1.0);
  for (double t : {0.1, 1.0, 3.0})
    EXPECT_NEAR(analytic_theta(3 * kPi / 4, 1.0, pp, t), kPi - analytic_theta(kPi / 4, 1.0, pp, t), 1e-15);
}

TEST(AnalyticTheta, FixedPoints) {
  ParticleParams pp = unit_particle(1.0);
  for (double th : {0.0, kPi / 2, kPi}) EXPECT_EQ(analytic_theta(th, 2.0, pp, 4.0), th);
  EXPECT_THROW(analytic_theta(-0.1, 1.0, pp, 1.0), std::domain_error);
}

TEST(AlignmentTime, InvertsTheDecayLaw) {
  ParticleParams pp = unit_particle(1.0);
  EXPECT_NEAR(alignment_time(kPi / 4, std::atan(0.5), 1.0, pp), std::log(2.0), 1e-15);
  EXPECT_NEAR(alignment_time(kPi / 4, kPi / 4, 1.0, pp), 0.0, 1e-15);
  EXPECT_EQ(alignment_time(kPi / 2, 0.1, 1.0, pp), std::numeric_limits<double>::infinity());
}

TEST(AlignmentLaw, IntegrationTracksClosedForm) {
  // beta |B| = 1: tan theta(t) = tan theta0 e^{-t}, three decay times
  ParticleParams pp = unit_particle(1.0);
  FieldConfig f;
  f.B = {0, 0, 1};
  SpinState s0;
  s0.S = spin_at_angle(spin_half_magnitude(), 1.0, f.B);
  const auto tr = integrate_spin(s0, f, pp, 1e-3, 3000);
  double worst = 0.0;
  for (const auto& s : tr) {
    const double oracle = std::atan(std::tan(1.0) * std::exp(-s.t));
    worst = std::max(worst, std::abs(s.theta - oracle));
  }
  EXPECT_LT(worst, 1e-6);
}

TEST(AlignmentLaw, AngularSpeedFormula) {
  const ParticleParams pp = unit_particle(0.6, -1.7);
  FieldConfig f;
  f.B = {0.0, 0.0, 1.4};
  for (double th : {0.2, 0.9, 2.3}) {
    const Vec3 S = spin_at_angle(0.8, th, f.B);
    const Vec3 dS = alignment_rhs(S, f.B, pp);
    // d(theta)/dt = -(dS . e_theta) / |S| with e_theta pointing toward increasing theta
    const Vec3 e_theta{std::cos(th), 0.0, -std::sin(th)};
    const double rate = dot(dS, e_theta) / 0.8;
    const double formula = 0.6 * 1.7 * 1.4 / 2.0 * std::sin(2 * th);
    EXPECT_NEAR(std::abs(rate), std::abs(formula), 1e-8 * std::abs(formula));
    EXPECT_LT(rate * (th < kPi / 2 ? 1.0 : -1.0), 0.0) << "must move toward the nearer pole";
  }
}

TEST(Energy, SpinlessReduction) {
  const ParticleParams pp = unit_particle();
  SpinState s;
  s.S = {0.1, 0.2, 0.3};
  s.p = {1.0, -2.0, 0.5};
  const double kinetic = dot(s.p, s.p) / 2.0;
  EXPECT_NEAR(pauli_energy(s, FieldConfig{}, pp), kinetic, 1e-15);
  EXPECT_NEAR(covariant_energy_expanded(s, FieldConfig{}, pp), 1.0 + kinetic, 1e-15);
}

TEST(Energy, SpinOrbitFactorIsOneHalf) {
  const ParticleParams pp = unit_particle();
  SpinState s;
  s.S = {0.3, -0.1, 0.8};
  s.p = {0.4, 0.9, -0.2};
  FieldConfig f;
  f.E = {0.5, 0.3, -0.8};
  EXPECT_EQ(spin_orbit_ratio(s, f, pp), 0.5);
}

TEST(Energy, ZeemanTermsCoincide) {
  ParticleParams pp = unit_particle(0.0, -1.0);
  SpinState s;
  s.S = {0, 0, 0.5};
  FieldConfig f;
  f.B = {0, 0, 2.0};
  EXPECT_NEAR(pauli_terms(s, f, pp).spin_field, 0.5 * 2.0, 1e-15);
  EXPECT_EQ(pauli_terms(s, f, pp).spin_field, covariant_terms(s, f, pp).spin_field);
}

TEST(Params, Validation) {
  ParticleParams pp;
  pp.m = 0.0;
  EXPECT_THROW(pp.validate(), std::invalid_argument);
  pp = ParticleParams{};
  pp.gamma_align = -1.0;
  EXPECT_THROW(pp.validate(), std::invalid_argument);
}
