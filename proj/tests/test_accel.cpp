#include <cmath>
#include <stdexcept>

#include <gtest/gtest.h>

#include "spindyn/accel.hpp"

using namespace spindyn;
using namespace spindyn::accel;

TEST(Lorentz, RestParticleAcceleratesAlongE) {
  EMWorldline w;
  w.v = {1.0, 0.0, 0.0, 0.0};
  w.E = {0.8, 0.0, 0.0};
  const Vec4 dv = lorentz_rhs(w);
  EXPECT_EQ(dv[0], 0.0);
  EXPECT_NEAR(dv[1], 0.8, 1e-15);
  EXPECT_EQ(dv[2], 0.0);
  EXPECT_EQ(dv[3], 0.0);
}

TEST(Lorentz, NoFieldNoForce) {
  const EMWorldline w = em_state(0.5, {0, 0, 0});
  for (double x : lorentz_rhs(w)) EXPECT_EQ(x, 0.0);
}

TEST(Lorentz, KeepsTheMassShell) {
  EMWorldline w = em_state(0.9, {1, 0, 0}, 2.0);
  w.B = {0, 0.4, 0.2};
  EXPECT_NEAR(normalization_defect(w), 0.0, 1e-15);
  // d/ds (v.v) = 2 v.dv must vanish for an antisymmetric field tensor
  const Vec4 dv = lorentz_rhs(w);
  EXPECT_NEAR(-w.v[0] * dv[0] + w.v[1] * dv[1] + w.v[2] * dv[2] + w.v[3] * dv[3], 0.0, 1e-14);
}

TEST(Lorentz, LongitudinalAccelerationClosedForm) {
  // d(gamma v)/dt = E along v gives a = E (1 - v^2/c^2)^{3/2}
  for (double c : {1.0, 3.0})
    for (double b : {0.0, 0.3, 0.9, 0.999}) {
      const double E = 1.7;
      const auto a = three_acceleration(em_state(b * c, {E, 0, 0}, c));
      EXPECT_NEAR(a.a_par, E * std::pow(1 - b * b, 1.5), 1e-12 * E);
    }
}

TEST(Geodesic, FlatSpaceHasNoForce) {
  const gr::Schwarzschild flat(0.0);
  const auto w = radial_state(5.0, -0.4, flat);
  for (double x : geodesic_rhs(w, flat)) EXPECT_NEAR(x, 0.0, 1e-15);
}

TEST(Geodesic, InsideHorizonIsRejected) {
  const gr::Schwarzschild st(1.0);
  EXPECT_THROW(radial_state(0.9, 0.1, st), std::domain_error);
  EXPECT_THROW(radial_state(5.0, 1.0, st), std::domain_error);
}

TEST(Geodesic, StaticObserverSeesReducedGravity) {
  // free fall measured by a static observer: |a| = g (1 - v^2/c^2),
  // g = c^2 rs / (2 r^2 sqrt(1 - rs/r))
  const gr::Schwarzschild st(1.0);
  for (double r : {3.0, 10.0})
    for (double b : {0.0, 0.5, 0.95}) {
      const double g = st.rs() / (2 * r * r * std::sqrt(1 - st.rs() / r));
      const auto a = three_acceleration(radial_state(r, -b, st), st);
      EXPECT_NEAR(std::abs(a.a_par), g * (1 - b * b), 1e-12);
      EXPECT_LT(a.a[0], 0.0) << "gravity points inward";
    }
}

TEST(Geodesic, NewtonianLimitAtRest) {
  const gr::Schwarzschild st(1.0);
  const double r = 1e4;
  const auto a = three_acceleration(radial_state(r, 0.0, st), st);
  EXPECT_NEAR(a.a[0] / (-st.rs() / (2 * r * r)), 1.0, 1e-4);
  EXPECT_EQ(a.a_par, norm(a.a));
}

TEST(Geodesic, PreparedStatesAreOnShell) {
  const gr::Schwarzschild st(1.0);
  EXPECT_NEAR(normalization_defect(radial_state(4.0, -0.7, st), st), 0.0, 1e-15);
  EXPECT_NEAR(normalization_defect(circular_state(8.0, st), st), 0.0, 1e-15);
}

TEST(Fit, ExactPowerLaw) {
  std::vector<SweepPoint> pts;
  for (double b : default_speeds()) {
    const double gap = 1 - b * b;
    pts.push_back({b, std::pow(gap, 1.5), std::log(gap)});
  }
  const auto fit = fit_exponent(pts, 1.0);
  EXPECT_NEAR(fit.k, 1.5, 1e-12);
  EXPECT_NEAR(fit.amplitude, 1.0, 1e-12);
}

TEST(Fit, DegenerateSamplesAreRejected) {
  std::vector<SweepPoint> pts(3, SweepPoint{0.9, 0.1, std::log(0.19)});
  EXPECT_THROW(fit_exponent(pts, 1.0), std::invalid_argument);
}

TEST(Sweep, ElectromagneticExponent) {
  const auto fit = fit_exponent(em_sweep(default_speeds()), 1.0);
  EXPECT_NEAR(fit.k, 1.5, 0.01);
}

TEST(Sweep, GeodesicExponent) {
  const gr::Schwarzschild st(1.0);
  const auto fit = fit_exponent(geodesic_sweep(default_speeds(), 10.0, st), 1.0);
  EXPECT_NEAR(fit.k, 1.0, 0.02);
}

TEST(Sweep, AccelerationFallsMonotonically) {
  const gr::Schwarzschild st(1.0);
  for (const auto& pts : {em_sweep(default_speeds()), geodesic_sweep(default_speeds(), 10.0, st)})
    for (std::size_t i = 1; i < pts.size(); ++i) {
      EXPECT_GT(pts[i].v, pts[i - 1].v);
      EXPECT_LT(std::abs(pts[i].a_par), std::abs(pts[i - 1].a_par));
    }
}

TEST(Integrate, CircularGeodesicKeepsRadius) {
  const gr::Schwarzschild st(1.0);
  const auto w = circular_state(10.0, st);
  const auto traj = integrate_geodesic(w, st, 0.5, 2000);
  for (const auto& s : traj) EXPECT_NEAR(s.x[gr::R], 10.0, 1e-8);
}
