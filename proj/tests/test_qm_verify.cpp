#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include <gtest/gtest.h>

#include "spindyn/qm_verify.hpp"
#include "spindyn/random.hpp"
#include "spindyn/wave_packet.hpp"

using namespace spindyn;
using namespace spindyn::qm;

namespace {

const QmParams kUnit{};

Vec3 random_momentum(Rng& rng, double pmax) { return (rng.uniform(0.0, pmax)) * rng.direction(); }

double mat_dist(const Mat2c& a, const Mat2c& b) { return max_norm(a - b); }

}  // namespace

TEST(Heisenberg, AlphaAnticommutesIntoMomentum) {
  // {alpha_i, H} = 2 c p_i 1 is the content of [alpha_i, H] = 2(c p_i - H alpha_i)
  const QmParams pr{1.0, 1.3, 2.0};
  const auto d = dirac_constants();
  const Vec3 p{0.4, -1.1, 0.7};
  const Mat4c H = dirac_hamiltonian(p, pr);
  for (std::size_t i = 0; i < 3; ++i)
    EXPECT_LT(max_norm(anticommutator(d.alpha[i], H) - (2.0 * pr.c * p[i]) * Mat4c::identity()), 1e-14);
  const auto r = heisenberg_identity(p, pr);
  EXPECT_LT(r.alpha, 1e-14);
  EXPECT_LT(r.beta, 1e-14);
}

TEST(Heisenberg, RestFrame) {
  const auto r = heisenberg_identity({0, 0, 0}, kUnit);
  EXPECT_EQ(r.alpha, 0.0);
  EXPECT_EQ(r.beta, 0.0);
  // the version with an extra + mc^2 is off by the full rest energy
  EXPECT_NEAR(r.beta_literal, 1.0, 1e-15);
}

TEST(KleinGordon, RestFrameFactorization) {
  const auto k = OnShellMomentum::make({0, 0, 0}, {1.0, 2.0, 1.5});
  EXPECT_EQ(k.p0, 3.0);
  EXPECT_EQ(kg_factorization(k), 0.0);
}

TEST(KleinGordon, RandomOnShellMomenta) {
  Rng rng(1);
  for (int n = 0; n < 200; ++n) {
    const auto k = OnShellMomentum::make(random_momentum(rng, 10.0), kUnit);
    EXPECT_LT(kg_factorization(k), 1e-12);
  }
}

TEST(KleinGordon, OffShellDefectIsTheMassShell) {
  const Vec3 p{0.3, 0.4, 0.0};
  const double p0 = 2.0;
  EXPECT_NEAR(kg_defect(p, p0, 1.0), std::abs(0.25 - 4.0 + 1.0), 1e-15);
}

TEST(VOperator, RestValue) {
  const auto v = v_operator(OnShellMomentum::make({0, 0, 0}, kUnit));
  EXPECT_LT(mat_dist(v.V, std::sqrt(2.0) * Mat2c::identity()), 1e-15);
  EXPECT_LT(mat_dist(v.Vinv, (1.0 / std::sqrt(2.0)) * Mat2c::identity()), 1e-15);
}

TEST(VOperator, InverseAndNorm) {
  Rng rng(2);
  for (int n = 0; n < 200; ++n) {
    const auto k = OnShellMomentum::make(random_momentum(rng, 10.0), {1.0, 0.7, 1.9});
    EXPECT_LT(v_inverse_residual(k), 1e-12);
    EXPECT_LT(v_norm_residual(k), 1e-12);
  }
}

TEST(PryceSpin, RestFrameIsHalfPauli) {
  const auto S = pryce_spin(OnShellMomentum::make({0, 0, 0}, kUnit), kUnit);
  const auto s = pauli();
  for (std::size_t i = 0; i < 3; ++i) EXPECT_LT(mat_dist(S[i], 0.5 * s[i]), 1e-15);
  EXPECT_LT(su2_residual(S, 1.0), 1e-15);
  EXPECT_LT(casimir_residual(S, 1.0), 1e-15);
}

TEST(PryceSpin, Su2ResidualMeasuresTheCommutator) {
  // independent evaluation of [S^1, S^2] - i hbar S^3 at a moving momentum
  const QmParams pr{0.8, 1.0, 1.0};
  const auto k = OnShellMomentum::make({0.6, -0.2, 1.1}, pr);
  const auto S = pryce_spin(k, pr);
  const Mat2c lhs = S[0] * S[1] - S[1] * S[0];
  const Mat2c rhs = cplx(0.0, pr.hbar) * S[2];
  const double scale = std::max({1.0, max_norm(lhs), max_norm(rhs)});
  EXPECT_GE(su2_residual(S, pr.hbar), mat_dist(lhs, rhs) / scale);
}

TEST(PryceSpin, CovariantCasimirHoldsAtAllMomenta) {
  Rng rng(4);
  for (int n = 0; n < 200; ++n) {
    const auto k = OnShellMomentum::make(random_momentum(rng, 10.0), kUnit);
    EXPECT_LT(covariant_casimir_residual(pryce_spin(k, kUnit), k, 1.0), 1e-12);
  }
}

TEST(Position, CorrectionMatchesClosedForm) {
  const QmParams pr{1.0, 1.0, 1.0};
  const Vec3 p{0.3, -0.5, 0.2};
  const auto A = position_correction(p, pr);
  const auto s = pauli();
  const double p0 = std::sqrt(dot(p, p) + 1.0);
  // A = hbar (sigma x p) / (2 mc (p0 + mc))
  for (std::size_t i = 0; i < 3; ++i) {
    const std::size_t j = (i + 1) % 3, l = (i + 2) % 3;
    const Mat2c want = (1.0 / (2.0 * (p0 + 1.0))) * (p[l] * s[j] - p[j] * s[l]);
    EXPECT_LT(mat_dist(A[i], want), 1e-15);
  }
}

TEST(Position, CoefficientConvergesQuadratically) {
  std::vector<double> lp, ld;
  for (double x : {1e-1, 1e-2, 1e-3}) {
    lp.push_back(std::log10(x));
    ld.push_back(std::log10(position_coefficient_deviation({x, 0.0, 0.0}, kUnit)));
  }
  EXPECT_NEAR(fit_line(lp, ld).slope, 2.0, 0.05);
  EXPECT_EQ(position_coefficient_deviation({0, 0, 0}, kUnit), 0.0);
}

TEST(Position, CommutatorApproachesSpinAlgebra) {
  const auto c2 = pryce_position_commutator(OnShellMomentum::make({1e-2, 0, 0}, kUnit), kUnit);
  const auto c3 = pryce_position_commutator(OnShellMomentum::make({1e-3, 0, 0}, kUnit), kUnit);
  EXPECT_NEAR(std::log10(c2.leading_deviation / c3.leading_deviation), 2.0, 0.05);
  EXPECT_LT(c3.leading_deviation, 1e-5);
}

TEST(FoldyWouthuysen, RestFrameSpinor) {
  const auto k = OnShellMomentum::make({0, 0, 0}, kUnit);
  const Spinor2 u{1.0, 0.0};
  const Spinor4 psi = dirac_from_weyl(k, u);
  EXPECT_NEAR(psi[0].real(), std::sqrt(2.0), 1e-15);
  EXPECT_EQ(std::abs(psi[2]), 0.0);
  const auto r = fw_restriction(k, u);
  EXPECT_LT(r.restriction, 1e-15);
  EXPECT_LT(r.unitarity, 1e-15);
}

TEST(FoldyWouthuysen, RandomMomenta) {
  Rng rng(5);
  for (int n = 0; n < 200; ++n) {
    const auto k = OnShellMomentum::make(random_momentum(rng, 10.0), kUnit);
    const Spinor2 u{cplx(rng.normal(), rng.normal()), cplx(rng.normal(), rng.normal())};
    const auto r = fw_restriction(k, u);
    EXPECT_LT(r.restriction, 1e-12);
    EXPECT_LT(r.unitarity, 1e-12);
  }
}

TEST(Report, DuplicateAndNaN) {
  CheckReport r;
  r.add("a", 0.0, 1e-12);
  EXPECT_THROW(r.add("a", 0.0, 1e-12), std::logic_error);
  r.add("b", std::numeric_limits<double>::quiet_NaN(), 1.0);
  EXPECT_FALSE(r.at("b").pass);
  EXPECT_FALSE(r.all_pass());
  EXPECT_THROW(r.at("c"), std::out_of_range);
}

TEST(Report, NaNSampleIsNotMaskedByTheFold) {
  IdentitySample good{}, bad{};
  bad.kg = std::numeric_limits<double>::quiet_NaN();
  const auto r = identity_report({good, bad, good});
  EXPECT_FALSE(r.at("kg_factorization").pass);
  EXPECT_TRUE(r.at("fw_unitarity").pass);
}

TEST(Report, RowsInFixedOrder) {
  const auto r = identity_report({evaluate_identities({0.1, 0.2, 0.3}, {1.0, 0.0}, kUnit)});
  const std::vector<std::string> names{"heisenberg_alpha", "heisenberg_beta", "kg_factorization",
                                       "v_inverse",        "v_norm",          "pryce_spin_su2",
                                       "pryce_spin_casimir", "pryce_spin_covariant_casimir",
                                       "fw_restriction",   "fw_unitarity"};
  ASSERT_EQ(r.entries().size(), names.size());
  for (std::size_t i = 0; i < names.size(); ++i) EXPECT_EQ(r.entries()[i].name, names[i]);
}

// ---------------------------------------------------------------------------
// wave packets

TEST(Packet, GridValidation) {
  PacketSpec spec;
  spec.sigma_p = 0.05;
  spec.dp = 0.02;  // sigma < 4 dp
  EXPECT_THROW(make_weyl_packet(spec, {1.0, 0.0}, kUnit), std::invalid_argument);
  spec = PacketSpec{};
  spec.n = 511;
  EXPECT_THROW(make_weyl_packet(spec, {1.0, 0.0}, kUnit), std::invalid_argument);
  spec = PacketSpec{};
  spec.n = 32;  // +-10 sigma does not fit
  EXPECT_THROW(make_weyl_packet(spec, {1.0, 0.0}, kUnit), std::invalid_argument);
}

TEST(Packet, ZeroAmplitudeGivesZeroObservables) {
  auto f = make_weyl_packet({}, {1.0, 0.0}, kUnit);
  for (auto& a : f.amp) a = {0.0, 0.0};
  const auto s = evolve_positive_energy(f, 1.0, 8);
  for (std::size_t i = 0; i < s.t.size(); ++i) {
    EXPECT_EQ(s.norm[i], 0.0);
    EXPECT_EQ(s.position[i], 0.0);
  }
}

TEST(Packet, PositiveEnergyCentroidMovesOnAStraightLine) {
  PacketSpec spec;
  spec.center = 0.3;
  const auto f = make_weyl_packet(spec, {1.0, 0.0}, kUnit);
  const auto s = evolve_positive_energy(f, 20.0 * std::numbers::pi, 256);
  const auto fit = fit_line(s.t, s.position);
  EXPECT_LT(fit.max_residual, 1e-6 * packet_width(spec, kUnit));
  // group velocity of the packet, p / p0 at the centre to leading order in sigma
  EXPECT_NEAR(fit.slope, 0.3 / std::sqrt(1.09), 5e-3);
  for (double n : s.norm) EXPECT_NEAR(n / s.norm.front(), 1.0, 1e-12);
}

TEST(Packet, MixedBranchesTrembleAtTwiceTheRestEnergy) {
  const auto f = make_dirac_packet({}, 0.5, kUnit);
  const double period = std::numbers::pi;
  const auto s = evolve_dirac_packet(f, 50 * period, 2048);
  const auto osc = dominant_oscillation(s.t, s.position);
  EXPECT_NEAR(osc.angular_frequency / 2.0, 1.0, 0.01);
  EXPECT_GT(osc.amplitude, 0.1);
}

TEST(Packet, PureBranchDoesNotTremble) {
  const auto f = make_dirac_packet({}, 0.0, kUnit);
  const auto s = evolve_dirac_packet(f, 50 * std::numbers::pi, 1024);
  EXPECT_LT(fit_line(s.t, s.position).max_residual, 1e-9);
}

TEST(Packet, SpectralAndCentralPositionAgreeOnSmoothData) {
  PacketSpec spec;
  const auto f = make_weyl_packet(spec, {1.0, 0.0}, kUnit);
  std::vector<cplx> comp(f.grid.n);
  for (std::size_t j = 0; j < f.grid.n; ++j)
    comp[j] = f.amp[j][0] * std::exp(cplx(0.0, -3.0 * f.grid.at(j)));  // centred at x = 3
  SpectralPosition sp(f.grid.n, f.grid.dp, 1.0);
  const auto a = sp.apply(comp);
  const auto b = central_position(comp, f.grid.dp, 1.0);
  double num = 0.0, den = 0.0;
  for (std::size_t j = 0; j < comp.size(); ++j) {
    num += (std::conj(comp[j]) * a[j]).real();
    den += std::norm(comp[j]);
  }
  EXPECT_NEAR(num / den, 3.0, 1e-9);
  // central differences see sin(3 dp)/dp, weighted by the overlap of the
  // envelope with its neighbours
  double nb = 0.0, overlap = 0.0;
  const std::size_t n = comp.size();
  for (std::size_t j = 0; j < n; ++j) {
    nb += (std::conj(comp[j]) * b[j]).real();
    overlap += std::abs(comp[j]) * (std::abs(comp[(j + 1) % n]) + std::abs(comp[(j + n - 1) % n])) / 2.0;
  }
  const double dp = f.grid.dp;
  EXPECT_NEAR(nb / den, std::sin(3.0 * dp) / dp * overlap / den, 1e-12);
  EXPECT_NEAR(nb / den, 3.0, 0.01);
}

TEST(Signal, DominantOscillationOfASyntheticSine) {
  std::vector<double> t, y;
  for (int i = 0; i < 1024; ++i) {
    t.push_back(0.05 * i);
    y.push_back(0.2 * t.back() + 0.7 * std::sin(3.3 * t.back()));
  }
  const auto osc = dominant_oscillation(t, y);
  EXPECT_NEAR(osc.angular_frequency, 3.3, 3.3e-3);
  EXPECT_NEAR(osc.amplitude, 0.7, 0.05);
}

TEST(Signal, LineFitIsExactOnALine) {
  const auto f = fit_line({0, 1, 2, 3}, {1, 3, 5, 7});
  EXPECT_NEAR(f.slope, 2.0, 1e-15);
  EXPECT_NEAR(f.intercept, 1.0, 1e-15);
  EXPECT_NEAR(f.max_residual, 0.0, 1e-15);
  EXPECT_THROW(fit_line({1}, {1}), std::invalid_argument);
}

// ---------------------------------------------------------------------------
// conserved current

TEST(Current, SinglePlaneWaveIsUniform) {
  CurrentSpec spec;
  spec.waves = {{2, {1.0, 0.0}}};
  spec.points_per_beat = 256;
  spec.steps_per_period = 512;
  const CurrentField field(spec, kUnit);
  const auto a = field.current(0.1, 0.0), b = field.current(2.7, 0.4);
  EXPECT_NEAR(a.I[0], b.I[0], 1e-13);
  EXPECT_NEAR(a.I[1], b.I[1], 1e-13);
  EXPECT_LT(current_conservation(spec, kUnit).divergence, 1e-12);
}

TEST(Current, SecondOrderConvergence) {
  CurrentSpec coarse, fine;
  coarse.points_per_beat = 1024;
  coarse.steps_per_period = 2048;
  fine.points_per_beat = 2048;
  fine.steps_per_period = 4096;
  const auto a = current_conservation(coarse, kUnit), b = current_conservation(fine, kUnit);
  EXPECT_NEAR(std::log2(a.divergence / b.divergence), 2.0, 0.1);
  EXPECT_LT(b.charge_drift, 1e-8);
  EXPECT_GT(b.min_density, 0.0);
}

TEST(Current, MismatchedResolutionIsRejected) {
  CurrentSpec spec;
  spec.points_per_beat = 1024;
  spec.steps_per_period = 1024;
  EXPECT_THROW(spec.validate(), std::invalid_argument);
}
