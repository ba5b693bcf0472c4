#ifndef SPINDYN_SUITE_HPP
#define SPINDYN_SUITE_HPP

// Desk-scale self-check rows behind `spindyn report`: each row names a claim,
// the measured value, the expected value and the tolerance.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

#include <json.hpp>

#include "spindyn/accel.hpp"
#include "spindyn/brackets.hpp"
#include "spindyn/curved_spin.hpp"
#include "spindyn/output.hpp"
#include "spindyn/qm_verify.hpp"
#include "spindyn/random.hpp"
#include "spindyn/spin_dynamics.hpp"
#include "spindyn/wave_packet.hpp"

namespace spindyn::suite {

enum class Relation { within, below, above };

struct ReportRow {
  std::string claim;
  std::string topic;
  double measured = 0.0;
  double expected = 0.0;
  double tol = 0.0;
  Relation relation = Relation::within;
  bool pass = false;
};

inline ReportRow make_row(std::string claim, std::string topic, double measured, double expected, double tol,
                          Relation rel = Relation::within) {
  ReportRow r{std::move(claim), std::move(topic), measured, expected, tol, rel, false};
  switch (rel) {
    case Relation::within:
      r.pass = std::abs(measured - expected) <= tol;
      break;
    case Relation::below:
      r.pass = measured < tol;
      break;
    case Relation::above:
      r.pass = measured > expected;
      break;
  }
  return r;
}

inline std::string relation_text(Relation r) {
  switch (r) {
    case Relation::within:
      return "within";
    case Relation::below:
      return "below";
    case Relation::above:
      return "above";
  }
  return "?";
}

inline void to_json(nlohmann::json& j, const ReportRow& r) {
  j = nlohmann::json{{"claim", r.claim},       {"topic", r.topic}, {"measured", r.measured},
                     {"expected", r.expected}, {"tol", r.tol},     {"relation", relation_text(r.relation)},
                     {"pass", r.pass}};
}

struct SuiteOptions {
  std::uint64_t seed = kDefaultSeed;
  unsigned threads = 1;
  std::size_t identity_samples = 1000;
  bool flip_alignment_sign = false;  ///< negative control for the harness itself
  bool timing_rows = false;          ///< wall-clock rows; off keeps the table byte-reproducible
};

// ---------------------------------------------------------------------------

inline void spin_rows(const SuiteOptions& opt, std::vector<ReportRow>& rows) {
  spin::ParticleParams pp;
  pp.gamma_align = 1.0;
  spin::FieldConfig fields;
  fields.B = {0.0, 0.0, 1.0};
  const double smag = spin::spin_half_magnitude();
  const double theta0 = std::numbers::pi / 4;
  const double rate = pp.beta() * norm(fields.B);

  spin::SpinState s0;
  s0.S = spin::spin_at_angle(smag, theta0, fields.B);
  const double sign = opt.flip_alignment_sign ? -1.0 : 1.0;
  auto rhs = [&](const Vec3& S, double) {
    return spin::precession_rhs(S, spin::precession_vector(fields, s0.p, pp)) +
           sign * spin::alignment_rhs(S, fields.B, pp);
  };
  const double dt = 1e-3;
  const auto traj = spin::integrate_spin(s0, rhs, fields.B, dt, static_cast<std::size_t>(3.0 / rate / dt));
  double dtheta = 0.0;
  for (const auto& smp : traj) dtheta = worst_of(dtheta, std::abs(smp.theta - spin::analytic_theta(theta0, 1.0, pp, smp.t)));
  rows.push_back(make_row("alignment: theta(t) follows tan(theta0) exp(-beta|B|t) over 3 decay times", "alignment law",
                          dtheta, 0.0, 1e-6));

  // instantaneous rate at theta0
  const Vec3 d = rhs(s0.S, 0.0);
  const double measured_rate = -dot(d, normalized(fields.B)) / (smag * std::sin(theta0));
  const double expected_rate = -0.5 * rate * std::sin(2.0 * theta0);
  rows.push_back(make_row("alignment: d(theta)/dt = -(beta|B|/2) sin(2 theta)", "alignment law",
                          std::abs(measured_rate / expected_rate - 1.0), 0.0, 1e-8));

  // |S| conservation under precession + alignment
  spin::SpinState s1;
  s1.S = spin::spin_at_angle(smag, 1.0, {0.3, -0.2, 1.0});
  spin::FieldConfig f1;
  f1.B = {0.3, -0.2, 1.0};
  f1.E = {0.1, 0.4, -0.2};
  s1.p = {0.5, 0.1, -0.3};
  pp.gamma_align = 0.2;
  const auto long_run = spin::integrate_spin(s1, f1, pp, 1e-3, 100000);
  double drift = 0.0;
  for (const auto& smp : long_run) drift = worst_of(drift, std::abs(smp.Smag / smag - 1.0));
  rows.push_back(make_row("spin magnitude conserved over 1e5 rk4 steps", "spin magnitude", drift, 0.0, 1e-9));

  // stability of the fixed points
  pp.gamma_align = 1.0;
  auto final_theta = [&](double th) {
    spin::SpinState s;
    s.S = spin::spin_at_angle(smag, th, fields.B);
    return spin::integrate_spin(s, rhs, fields.B, 1e-3, 2000).back().theta;
  };
  const double eq = std::numbers::pi / 2;
  rows.push_back(make_row("north pole attracts a 0.01 rad perturbation", "stability", final_theta(0.01), 0.0, 0.01,
                          Relation::below));
  rows.push_back(make_row("south pole attracts a 0.01 rad perturbation", "stability",
                          std::numbers::pi - final_theta(std::numbers::pi - 0.01), 0.0, 0.01, Relation::below));
  rows.push_back(make_row("equator is invariant", "stability", std::abs(final_theta(eq) - eq), 0.0, 1e-12));
  rows.push_back(make_row("equator repels a 1e-6 rad perturbation", "stability",
                          std::abs(final_theta(eq - 1e-6) - eq), 1e-6, 0.0, Relation::above));

  // precession oracle
  spin::ParticleParams p0;
  spin::FieldConfig f2;
  f2.B = {0.2, -0.7, 0.5};
  f2.E = {0.3, 0.1, 0.0};
  spin::SpinState s2;
  s2.S = {0.4, 0.5, -0.6};
  s2.p = {0.1, 0.2, 0.3};
  const Vec3 R = spin::precession_vector(f2, s2.p, p0);
  const auto prec = spin::integrate_spin(s2, f2, p0, 1e-3, 10000);
  double perr = 0.0;
  for (const auto& smp : prec) perr = worst_of(perr, norm(smp.S - spin::rotate_rodrigues(s2.S, R, smp.t)));
  rows.push_back(make_row("constant-R precession matches the Rodrigues rotation", "spin precession", perr, 0.0, 1e-8));

  // Pauli / covariant spin-orbit coefficient
  spin::SpinState s3;
  s3.S = {0.1, 0.7, -0.3};
  s3.p = {0.4, -0.2, 0.9};
  spin::FieldConfig f3;
  f3.E = {0.5, 0.3, -0.8};
  rows.push_back(make_row("Pauli / covariant (S,[E,p]) coefficient ratio", "spin-orbit factor",
                          spin::spin_orbit_ratio(s3, f3, p0), 0.5, 0.0));
}

inline void bracket_rows(const SuiteOptions& opt, std::vector<ReportRow>& rows) {
  using namespace brackets;
  spin::ParticleParams pp;
  const BracketTable table = standard_spin_table(pp);
  Rng rng(opt.seed);
  double flow = 0.0, so3 = 0.0, cas = 0.0;
  for (int n = 0; n < 100; ++n) {
    PhasePoint z{{rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)},
                 {rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)},
                 spin::spin_half_magnitude() * rng.direction()};
    spin::FieldConfig f;
    f.E = {rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)};
    f.B = {rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)};
    const PhasePoint t = hamiltonian_flow(table, pauli_hamiltonian(f, pp), z);
    const Vec3 ref = spin::precession_rhs(z.S, spin::precession_vector(f, z.p, pp));
    flow = worst_of(flow, norm(t.S - ref) / std::max(1.0, norm(ref)));
    so3 = worst_of(so3, jacobi_residual(table, z, coordinate(Coord::S1), coordinate(Coord::S2), coordinate(Coord::S3),
                                        Derivatives::finite_difference));
    cas = worst_of(cas, casimir_residual(table, z, Derivatives::finite_difference));
  }
  rows.push_back(make_row("Hamiltonian flow of the Pauli Hamiltonian gives dS/dt = R x S", "spin brackets", flow, 0.0,
                          1e-12));
  rows.push_back(make_row("so(3) Jacobi residual (finite differences)", "spin brackets", so3, 0.0, 1e-10));
  rows.push_back(make_row("S^2 is a Casimir (finite differences)", "spin brackets", cas, 0.0, 1e-10));

  std::vector<double> lc, lb;
  for (double c : {10.0, 100.0, 1000.0}) {
    spin::ParticleParams q;
    q.c = c;
    const PhasePoint z{{}, {}, {0.0, 0.0, 0.5}};
    lc.push_back(std::log(c));
    lb.push_back(std::log(std::abs(poisson_bracket(standard_spin_table(q), coordinate(Coord::x1),
                                                   coordinate(Coord::x2), z))));
  }
  const double slope = qm::fit_line(lc, lb).slope;
  rows.push_back(make_row("{x,x} bracket scales as 1/c^2", "position noncommutativity", slope, -2.0, 0.01));
}

inline void accel_rows(std::vector<ReportRow>& rows) {
  const auto em = accel::fit_exponent(accel::em_sweep(accel::default_speeds()), 1.0);
  rows.push_back(make_row("Lorentz force: a_par ~ (c^2 - v^2)^k", "acceleration scaling", em.k, 1.5, 0.01));
  const gr::Schwarzschild st(1.0);
  const auto ge = accel::fit_exponent(accel::geodesic_sweep(accel::default_speeds(), 10.0, st), 1.0);
  rows.push_back(make_row("radial geodesic: a_par ~ (c^2 - v^2)^k", "acceleration scaling", ge.k, 1.0, 0.02));
}

inline void curvature_rows(std::vector<ReportRow>& rows) {
  using namespace gr;
  const Schwarzschild st(1.0);
  double worst = 0.0;
  for (double r : {3.0, 10.0, 100.0}) {
    const Vec4 x{0.0, r, std::numbers::pi / 2, 0.0};
    worst = worst_of(worst, std::abs(st.kretschmann(st.riemann(x), x) / st.kretschmann_exact(r) - 1.0));
  }
  rows.push_back(make_row("finite-difference Riemann reproduces 12 rs^2/r^6", "curvature", worst, 0.0, 1e-6));

  AntisymTensor4 seed;
  seed.set(R, PH, 1.0);
  seed.set(TH, PH, 0.3);
  seed.set(T, TH, 0.2);
  for (int kappa : {0, 1}) {
    BodyParams bp;
    bp.kappa = kappa;
    const BodyState s0 = circular_body(st, 10.0, bp, seed, spin_half_alpha(), 1.0);
    const auto tr = integrate_body(s0, st, bp, 0.5, 10000);
    double drift = 0.0;
    for (const auto& smp : tr.samples) drift = worst_of(drift, std::abs(smp.diag.SS / tr.samples.front().diag.SS - 1.0));
    rows.push_back(make_row(kappa == 0 ? "S^2 conserved, minimal coupling (1e4 steps)"
                                       : "S^2 conserved, gravimagnetic coupling (1e4 steps)",
                            "spin-curvature dynamics", drift, 0.0, kappa == 0 ? 1e-8 : 1e-6));
  }

  auto divergence = [&](double lambda) {
    BodyParams a, b;
    b.kappa = 1;
    AntisymTensor4 sd;
    sd.set(R, PH, 1.0);
    sd.set(TH, PH, 0.3);
    const BodyState s = circular_body(st, 10.0, a, sd, spin_half_alpha(), lambda);
    const auto ta = integrate_body(s, st, a, 0.5, 2000).samples.back().state;
    const auto tb = integrate_body(s, st, b, 0.5, 2000).samples.back().state;
    double d = 0.0;
    for (std::size_t m = 0; m < 4; ++m) d = worst_of(d, std::abs(ta.x[m] - tb.x[m]));
    return d;
  };
  rows.push_back(make_row("gravimagnetic correction is quadratic in spin (ratio under lambda -> lambda/2)",
                          "spin-curvature dynamics", divergence(0.5) / divergence(0.25), 4.0, 0.2));
}

inline void qm_rows(const SuiteOptions& opt, std::vector<ReportRow>& rows) {
  const qm::QmParams pr;
  Rng rng(opt.seed);
  std::vector<Vec3> ps(opt.identity_samples);
  std::vector<qm::Spinor2> us(opt.identity_samples);
  for (std::size_t i = 0; i < ps.size(); ++i) {
    ps[i] = rng.uniform(0.0, 10.0) * rng.direction();
    us[i] = {cplx(rng.normal(), rng.normal()), cplx(rng.normal(), rng.normal())};
  }
  std::vector<qm::IdentitySample> res(ps.size());
  parallel_for(ps.size(), opt.threads, [&](std::size_t i) { res[i] = qm::evaluate_identities(ps[i], us[i], pr); });
  for (const auto& e : qm::identity_report(res).entries())
    rows.push_back(make_row("operator identity " + e.name, "operator identities", e.residual, 0.0, e.tol));

  const double d2 = qm::position_coefficient_deviation({1e-2, 0.0, 0.0}, pr);
  const double d3 = qm::position_coefficient_deviation({1e-3, 0.0, 0.0}, pr);
  rows.push_back(make_row("position coefficient approaches -hbar/4(mc)^2 quadratically", "Pryce position",
                          std::log10(d2 / d3), 2.0, 0.05));
  const auto c2 = qm::pryce_position_commutator(qm::OnShellMomentum::make({1e-2, 0.0, 0.0}, pr), pr);
  const auto c3 = qm::pryce_position_commutator(qm::OnShellMomentum::make({1e-3, 0.0, 0.0}, pr), pr);
  rows.push_back(make_row("[X^i, X^j] approaches (i hbar/(mc)^2) eps S at leading order", "Pryce position",
                          std::log10(c2.leading_deviation / c3.leading_deviation), 2.0, 0.05));

  // wave packets
  const auto start = std::chrono::steady_clock::now();
  qm::PacketSpec spec;
  const double period = std::numbers::pi * pr.hbar / (pr.m * pr.c * pr.c);
  const auto mixed = qm::evolve_dirac_packet(qm::make_dirac_packet(spec, 0.5, pr), 50 * period, 2048);
  const auto osc = qm::dominant_oscillation(mixed.t, mixed.position);
  const double target = 2.0 * pr.m * pr.c * pr.c / pr.hbar;
  rows.push_back(make_row("mixed-branch packet oscillates at 2mc^2/hbar (relative error)", "Zitterbewegung",
                          std::abs(osc.angular_frequency / target - 1.0), 0.0, 0.01));
  qm::PacketSpec moving = spec;
  moving.center = 0.3;
  moving.transverse = {0.0, 0.2, 0.0};
  const auto pos = qm::evolve_positive_energy(qm::make_weyl_packet(moving, {1.0, cplx(0.0, 1.0)}, pr), 50 * period, 512);
  rows.push_back(make_row("positive-energy <X> is a straight line (residual / width)", "Zitterbewegung",
                          qm::fit_line(pos.t, pos.position).max_residual / qm::packet_width(moving, pr), 0.0, 1e-6));
  double nd = 0.0;
  for (double n : pos.norm) nd = worst_of(nd, std::abs(n / pos.norm.front() - 1.0));
  for (double n : mixed.norm) nd = worst_of(nd, std::abs(n / mixed.norm.front() - 1.0));
  rows.push_back(make_row("packet norm drift", "Zitterbewegung", nd, 0.0, 1e-12));
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (opt.timing_rows)
    rows.push_back(make_row("packet runs finish within 30 s", "Zitterbewegung", secs, 0.0, 30.0, Relation::below));

  qm::CurrentSpec coarse, fine;
  coarse.points_per_beat = 2048;
  coarse.steps_per_period = 4096;
  fine.points_per_beat = 4096;
  fine.steps_per_period = 8192;
  const auto rc = qm::current_conservation(coarse, pr);
  const auto rf = qm::current_conservation(fine, pr);
  rows.push_back(make_row("current divergence converges at second order", "conserved current",
                          std::log2(rc.divergence / rf.divergence), 2.0, 0.1));
  rows.push_back(make_row("current divergence at 4096 points per beat", "conserved current", rf.divergence, 0.0, 1e-6));
  rows.push_back(make_row("integral of I^0 constant in time", "conserved current", rf.charge_drift, 0.0, 1e-8));
  rows.push_back(make_row("I^0 positive everywhere", "conserved current", rf.min_density, 0.0, 0.0, Relation::above));
}

/// Identity residuals serialized twice from the same seed must match byte for byte.
inline void determinism_rows(const SuiteOptions& opt, std::vector<ReportRow>& rows) {
  auto run = [&] {
    Rng rng(opt.seed);
    std::vector<qm::IdentitySample> res;
    for (int i = 0; i < 50; ++i) {
      const Vec3 p = rng.uniform(0.0, 10.0) * rng.direction();
      res.push_back(qm::evaluate_identities(p, {cplx(rng.normal(), rng.normal()), cplx(1.0, 0.0)}, qm::QmParams{}));
    }
    nlohmann::json j = qm::identity_report(res).entries();
    return j.dump();
  };
  rows.push_back(make_row("fixed seed reproduces identical output", "determinism", run() == run() ? 0.0 : 1.0, 0.0, 0.0));
}

inline std::vector<ReportRow> run_all(const SuiteOptions& opt) {
  std::vector<ReportRow> rows;
  spin_rows(opt, rows);
  bracket_rows(opt, rows);
  accel_rows(rows);
  curvature_rows(rows);
  qm_rows(opt, rows);
  determinism_rows(opt, rows);
  return rows;
}

}  // namespace spindyn::suite

#endif  // SPINDYN_SUITE_HPP
