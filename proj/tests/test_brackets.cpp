#include <cmath>
#include <stdexcept>

#include <gtest/gtest.h>

#include "spindyn/brackets.hpp"
#include "spindyn/random.hpp"

using namespace spindyn;
using namespace spindyn::brackets;

namespace {

PhasePoint random_point(Rng& rng) {
  return {{rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)},
          {rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)},
          spin::spin_half_magnitude() * rng.direction()};
}

// {f, g} for coordinate functions written out from the structure functions
// by hand: eps^{ijk} S^k etc., independent of the table machinery.
double hand_bracket(Coord a, Coord b, const PhasePoint& z, double mc) {
  const auto ia = index(a), ib = index(b);
  const auto block = [](std::size_t i) { return i / 3; };
  if (block(ia) == 2 && block(ib) == 2) {
    double r = 0;
    for (std::size_t k = 0; k < 3; ++k) r += levi_civita(ia - 6, ib - 6, k) * z.S[k];
    return r;
  }
  if (block(ia) == 0 && block(ib) == 0) {
    double r = 0;
    for (std::size_t k = 0; k < 3; ++k) r += levi_civita(ia, ib, k) * z.S[k];
    return r / (mc * mc);
  }
  if (block(ia) == 0 && block(ib) == 1) return ia == ib - 3 ? 1.0 : 0.0;
  if (block(ia) == 1 && block(ib) == 0) return ia - 3 == ib ? -1.0 : 0.0;
  return 0.0;
}

}  // namespace

TEST(Table, SpinSpinBracket) {
  const BracketTable t = standard_spin_table({});
  const PhasePoint z{{}, {}, {0, 0, 0.7}};
  EXPECT_EQ(t(Coord::S1, Coord::S2, z), 0.7);
}

TEST(Table, PositionPositionBracketInUnitScale) {
  const BracketTable t = standard_spin_table({});
  const PhasePoint z{{}, {}, {0, 0, 0.7}};
  EXPECT_EQ(t(Coord::x1, Coord::x2, z), 0.7);
  EXPECT_EQ(t(Coord::x1, Coord::x1, z), 0.0);
}

TEST(Table, MatchesHandWrittenStructureFunctions) {
  spin::ParticleParams pp;
  pp.m = 1.3;
  pp.c = 2.1;
  const BracketTable t = standard_spin_table(pp);
  Rng rng(11);
  for (int n = 0; n < 20; ++n) {
    const PhasePoint z = random_point(rng);
    for (std::size_t a = 0; a < kDim; ++a)
      for (std::size_t b = 0; b < kDim; ++b)
        EXPECT_NEAR(t(coord_at(a), coord_at(b), z), hand_bracket(coord_at(a), coord_at(b), z, pp.m * pp.c), 1e-15);
  }
}

TEST(Table, AntisymmetricByConstruction) {
  const BracketTable t = standard_spin_table({});
  Rng rng(3);
  const PhasePoint z = random_point(rng);
  for (std::size_t a = 0; a < kDim; ++a)
    for (std::size_t b = 0; b < kDim; ++b)
      EXPECT_EQ(t(coord_at(a), coord_at(b), z), -t(coord_at(b), coord_at(a), z));
}

TEST(Table, SelfBracketIsRejected) {
  BracketTable t;
  EXPECT_THROW(t.set(Coord::x1, Coord::x1, {[](const PhasePoint&) { return 1.0; }, nullptr}), std::invalid_argument);
}

TEST(Jacobi, SpinAlgebraIsExact) {
  const BracketTable t = standard_spin_table({});
  Rng rng(5);
  for (int n = 0; n < 50; ++n) {
    const PhasePoint z = random_point(rng);
    EXPECT_EQ(jacobi_residual(t, z, coordinate(Coord::S1), coordinate(Coord::S2), coordinate(Coord::S3)), 0.0);
    EXPECT_LT(jacobi_residual(t, z, coordinate(Coord::S1), coordinate(Coord::S2), coordinate(Coord::S3),
                              Derivatives::finite_difference),
              1e-10);
  }
}

TEST(Jacobi, PositionPairWithMatchingSpin) {
  const BracketTable t = standard_spin_table({});
  Rng rng(6);
  for (int n = 0; n < 20; ++n)
    EXPECT_LT(jacobi_residual(t, random_point(rng), coordinate(Coord::x1), coordinate(Coord::x2),
                              coordinate(Coord::S3), Derivatives::finite_difference),
              1e-8);
}

TEST(Jacobi, PositionPairWithTransverseSpinIsOpen) {
  // {S1, {x1, x2}} = {S1, S3}/(mc)^2 = -S2/(mc)^2; the other two terms vanish
  spin::ParticleParams pp;
  pp.c = 2.0;
  const BracketTable t = standard_spin_table(pp);
  const PhasePoint z{{0.1, 0.2, 0.3}, {}, {0.3, -0.6, 0.2}};
  EXPECT_NEAR(jacobi_residual(t, z, coordinate(Coord::x1), coordinate(Coord::x2), coordinate(Coord::S1)),
              0.6 / 4.0, 1e-15);
}

TEST(Jacobi, ConstantStructureFunctionsClose) {
  const BracketTable t = standard_spin_table({});
  Rng rng(8);
  const PhasePoint z = random_point(rng);
  EXPECT_EQ(jacobi_residual(t, z, coordinate(Coord::x1), coordinate(Coord::p1), coordinate(Coord::p2)), 0.0);
}

TEST(Flow, KineticHamiltonian) {
  const spin::ParticleParams pp;
  const BracketTable t = standard_spin_table(pp);
  const PhasePoint z{{0.3, 0.1, 0.2}, {0.5, -0.4, 0.9}, {0.1, 0.2, 0.3}};
  const PhasePoint d = hamiltonian_flow(t, kinetic_hamiltonian(pp), z);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_NEAR(d.x[i], z.p[i] / pp.m, 1e-15);
    EXPECT_EQ(d.p[i], 0.0);
    EXPECT_EQ(d.S[i], 0.0);
  }
}

TEST(Flow, ZeemanHamiltonianRotatesSpin) {
  const BracketTable t = standard_spin_table({});
  const PhasePoint z{{}, {}, {1, 0, 0}};
  const PhasePoint d = hamiltonian_flow(t, zeeman_hamiltonian({0, 0, 1}, 2.0), z);
  // dS^i/dt = {S^i, S^j} 2 B^j = 2 eps^{ijk} S^k B^j = 2 (B x S)^i ... = (0, 2, 0)
  EXPECT_NEAR(d.S[0], 0.0, 1e-15);
  EXPECT_NEAR(d.S[1], 2.0, 1e-15);
  EXPECT_NEAR(d.S[2], 0.0, 1e-15);
}

TEST(Flow, PauliHamiltonianGivesPrecession) {
  spin::ParticleParams pp;
  pp.e = 0.8;
  const BracketTable t = standard_spin_table(pp);
  Rng rng(21);
  for (int n = 0; n < 100; ++n) {
    const PhasePoint z = random_point(rng);
    spin::FieldConfig f;
    f.E = {rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)};
    f.B = {rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)};
    const PhasePoint d = hamiltonian_flow(t, pauli_hamiltonian(f, pp), z);
    const double mc = pp.m * pp.c;
    const Vec3 R = -(pp.e / mc) * (f.B - (1.0 / (2 * mc)) * cross(z.p, f.E));
    const Vec3 want = cross(R, z.S);
    for (std::size_t i = 0; i < 3; ++i) EXPECT_NEAR(d.S[i], want[i], 1e-12 * std::max(1.0, norm(want)));
  }
}

TEST(Flow, NumericalGradientAgreesWithAnalytic) {
  spin::ParticleParams pp;
  const BracketTable t = standard_spin_table(pp);
  spin::FieldConfig f;
  f.E = {0.4, -0.2, 0.1};
  f.B = {0.0, 0.5, 0.3};
  ScalarFunction h = pauli_hamiltonian(f, pp);
  ScalarFunction h_fd{h.value, nullptr};
  const PhasePoint z{{0.2, 0.1, -0.3}, {0.6, 0.2, -0.1}, {0.2, 0.4, 0.7}};
  const auto a = hamiltonian_flow(t, h, z).flat();
  const auto b = hamiltonian_flow(t, h_fd, z).flat();
  for (std::size_t k = 0; k < kDim; ++k) EXPECT_NEAR(a[k], b[k], 1e-9);
}

TEST(Casimir, SpinSquareCommutesWithEverything) {
  const BracketTable t = standard_spin_table({});
  Rng rng(9);
  for (int n = 0; n < 50; ++n) {
    const PhasePoint z = random_point(rng);
    EXPECT_LT(casimir_residual(t, z), 1e-15);
    EXPECT_LT(casimir_residual(t, z, Derivatives::finite_difference), 1e-10);
  }
  EXPECT_EQ(casimir_residual(t, PhasePoint{}), 0.0);
}

TEST(Scaling, PositionBracketFallsAsInverseSquareOfC) {
  const PhasePoint z{{}, {}, {0, 0, 0.5}};
  for (double c : {10.0, 100.0, 1000.0}) {
    spin::ParticleParams pp;
    pp.c = c;
    const double v = poisson_bracket(standard_spin_table(pp), coordinate(Coord::x1), coordinate(Coord::x2), z);
    EXPECT_NEAR(v * c * c, 0.5, 1e-12);
  }
}
