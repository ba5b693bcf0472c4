#ifndef SPINDYN_CLI_HPP
#define SPINDYN_CLI_HPP

// `spindyn` command line: subcommands, flat config files, output routing and
// the exit-code contract (0 pass, 1 configuration error, 2 numerical or check failure).

#include <chrono>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <limits>
#include <memory>
#include <numbers>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "spindyn/accel.hpp"
#include "spindyn/brackets.hpp"
#include "spindyn/curved_spin.hpp"
#include "spindyn/output.hpp"
#include "spindyn/qm_verify.hpp"
#include "spindyn/random.hpp"
#include "spindyn/spin_dynamics.hpp"
#include "spindyn/suite.hpp"
#include "spindyn/wave_packet.hpp"

namespace spindyn::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 1;
inline constexpr int kExitFailure = 2;

/// Configuration problem; maps to exit code 1.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Failed check or numerical breakdown; maps to exit code 2.
class CheckFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline std::vector<double> parse_list(const std::string& text, const std::string& what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t pos = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &pos);
    } catch (const std::exception&) {
      throw ConfigError(what + ": not a number list: '" + text + "'");
    }
    while (pos < item.size() && std::isspace(static_cast<unsigned char>(item[pos]))) ++pos;
    if (pos != item.size() || !std::isfinite(v)) throw ConfigError(what + ": not a number list: '" + text + "'");
    out.push_back(v);
  }
  if (out.empty()) throw ConfigError(what + ": empty list");
  return out;
}

inline Vec3 parse_vec3(const std::string& text, const std::string& what) {
  const auto v = parse_list(text, what);
  if (v.size() != 3) throw ConfigError(what + ": expected three comma-separated numbers");
  return {v[0], v[1], v[2]};
}

inline void require_positive(double v, const std::string& what) {
  if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError(what + " must be positive and finite");
}

inline void require_finite(double v, const std::string& what) {
  if (!std::isfinite(v)) throw ConfigError(what + " must be finite");
}

/// Reads `key = value` lines ('#' comments, blank lines ignored) into
/// `--key=value` arguments.
inline std::vector<std::string> config_file_args(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  std::vector<std::string> args;
  std::string line;
  int lineno = 0;
  auto trim = [](std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return std::string();
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
  };
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(path + ":" + std::to_string(lineno) + ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError(path + ":" + std::to_string(lineno) + ": empty key");
    args.push_back("--" + key + "=" + value);
  }
  return args;
}

/// Output stream for a path, "-" meaning the fallback stream.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) {
    if (path.empty() || path == "-") {
      stream_ = &fallback;
    } else {
      file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
      if (!*file_) throw ConfigError("cannot open output file " + path);
      stream_ = file_.get();
    }
  }
  std::ostream& operator*() { return *stream_; }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* stream_ = nullptr;
};

// ---------------------------------------------------------------------------

struct CommonOptions {
  std::string out = "-";
  std::string summary = "-";
  unsigned threads = 0;
  std::optional<std::uint64_t> seed;
};

struct PrecessOptions {
  double e = -1.0, m = 1.0, c = 1.0, hbar = 1.0, mu = 1.0, gamma = 0.0;
  std::string B = "0,0,1", E = "0,0,0", x = "0,0,0", p = "0,0,0", S;
  double coulomb = 0.0;
  std::optional<double> theta0;
  std::optional<double> smag;
  std::string scheme = "rk4";
  double dt = 0.01;
  std::size_t steps = 1000;
  double eps = 1e-3;
};

struct BracketOptions {
  bool check = false;
  std::size_t samples = 100;
  double e = -1.0, m = 1.0, c = 1.0, mu = 1.0;
  std::string x = "0,0,0", p = "0,0,0", S = "0,0,0.5";
};

struct AccelOptions {
  std::string scenario = "em";
  std::string speeds;
  double E = 1.0, c = 1.0, rs = 1.0, r = 10.0;
  bool synthetic = false;
  double k = 1.25;
};

struct MptdOptions {
  int kappa = 0;
  double rs = 1.0, r0 = 10.0, m = 1.0, c = 1.0, hbar = 1.0, lambda = 1.0;
  std::optional<double> alpha;
  std::string spin = "0,0,0,0,1,0";
  double dtau = 0.5;
  std::size_t steps = 1000;
  bool flat = false;
  double speed = 0.3;
  bool compare = false;
};

struct QmOptions {
  std::size_t samples = 1000;
  double pmax = 10.0;
  double hbar = 1.0, m = 1.0, c = 1.0;
  bool zitter = false;
  bool current = false;
  double weight = 0.5;
  double periods = 50.0;
  std::size_t nodes = 512;
  std::size_t nsamples = 2048;
  double sigma_p = 0.05;
  std::string series;
};

struct ReportOptions {
  bool json = false;
  std::size_t samples = 1000;
  bool flip_sign = false;
  bool timing = false;
};

// ---------------------------------------------------------------------------

namespace detail {

inline spin::ParticleParams particle(const PrecessOptions& o) {
  spin::ParticleParams p;
  p.e = o.e;
  p.m = o.m;
  p.c = o.c;
  p.hbar = o.hbar;
  p.mu = o.mu;
  p.gamma_align = o.gamma;
  try {
    p.validate();
  } catch (const std::invalid_argument& ex) {
    throw ConfigError(ex.what());
  }
  return p;
}

inline Scheme parse_scheme(const std::string& s) {
  if (s == "rk4") return Scheme::rk4;
  if (s == "rk45") return Scheme::rk45;
  throw ConfigError("scheme must be rk4 or rk45");
}

}  // namespace detail

inline int cmd_precess(const CommonOptions& co, const PrecessOptions& o, std::ostream& out, std::ostream& err) {
  const spin::ParticleParams params = detail::particle(o);
  require_positive(o.dt, "dt");
  if (o.steps < 1) throw ConfigError("steps must be >= 1");
  require_positive(o.eps, "eps");
  const Scheme scheme = detail::parse_scheme(o.scheme);

  spin::FieldConfig fields;
  fields.B = parse_vec3(o.B, "B");
  fields.E = parse_vec3(o.E, "E");
  require_finite(o.coulomb, "coulomb");
  if (o.coulomb != 0.0) {
    fields.mode = spin::FieldConfig::Electric::coulomb;
    fields.coulomb_charge = o.coulomb;
  }
  spin::SpinState s0;
  s0.x = parse_vec3(o.x, "x");
  s0.p = parse_vec3(o.p, "p");
  if (fields.mode == spin::FieldConfig::Electric::coulomb && norm(s0.x) == 0.0)
    throw ConfigError("Coulomb field needs a position away from the origin");
  const double smag = o.smag.value_or(spin::spin_half_magnitude(o.hbar));
  require_positive(smag, "smag");
  if (!o.S.empty() && o.theta0) throw ConfigError("give either S or theta0, not both");
  if (!o.S.empty()) {
    s0.S = parse_vec3(o.S, "S");
  } else {
    const double th = o.theta0.value_or(std::numbers::pi / 4);
    if (!(th >= 0.0 && th <= std::numbers::pi)) throw ConfigError("theta0 must lie in [0, pi]");
    s0.S = spin::spin_at_angle(smag, th, fields.B);
  }
  if (!(norm(s0.S) > 0.0)) throw ConfigError("S must be nonzero");

  const auto traj = spin::integrate_spin(s0, fields, params, o.dt, o.steps, scheme);

  Sink sink(co.out, out);
  CsvWriter csv(*sink, {"t", "Sx", "Sy", "Sz", "theta", "Smag"});
  for (const auto& s : traj) csv.row({s.t, s.S[0], s.S[1], s.S[2], s.theta, s.Smag});

  double drift = 0.0;
  for (const auto& s : traj) drift = worst_of(drift, std::abs(s.Smag / traj.front().Smag - 1.0));
  nlohmann::json summary{{"command", "precess"},
                         {"final_theta", traj.back().theta},
                         {"smag_drift", drift},
                         {"expected_decay_rate", params.beta() * norm(fields.B)}};
  // decay rate from ln tan(theta_pole), theta_pole the distance to the nearer
  // pole, fitted over the leading stretch before the angle reaches 1e-12
  std::vector<double> ts, ys;
  std::optional<double> reached;
  bool in_window = true;
  for (const auto& s : traj) {
    const double d = std::min(s.theta, std::numbers::pi - s.theta);
    if (!reached && d < o.eps) reached = s.t;
    in_window = in_window && d > 1e-12 && d < std::numbers::pi / 2 - 1e-12;
    if (in_window) {
      ts.push_back(s.t);
      ys.push_back(std::log(std::tan(d)));
    }
  }
  if (params.gamma_align > 0.0 && ts.size() >= 2)
    summary["measured_decay_rate"] = -qm::fit_line(ts, ys).slope;
  else
    summary["measured_decay_rate"] = nullptr;
  summary["alignment_time"] = reached ? nlohmann::json(*reached) : nlohmann::json(nullptr);
  Sink sum(co.summary, err);
  write_json_line(*sum, summary);
  return kExitOk;
}

inline int cmd_brackets(const CommonOptions& co, const BracketOptions& o, std::ostream& out, std::ostream& err) {
  using namespace brackets;
  spin::ParticleParams pp;
  pp.e = o.e;
  pp.m = o.m;
  pp.c = o.c;
  pp.mu = o.mu;
  try {
    pp.validate();
  } catch (const std::invalid_argument& ex) {
    throw ConfigError(ex.what());
  }
  const BracketTable table = standard_spin_table(pp);
  Sink sink(co.out, out);

  if (!o.check) {
    const PhasePoint z{parse_vec3(o.x, "x"), parse_vec3(o.p, "p"), parse_vec3(o.S, "S")};
    CsvWriter csv(*sink, {"a", "b", "value"});
    for (std::size_t a = 0; a < kDim; ++a)
      for (std::size_t b = 0; b < kDim; ++b)
        *sink << label(coord_at(a)) << ',' << label(coord_at(b)) << ','
              << format_double(table(coord_at(a), coord_at(b), z)) << '\n';
    return kExitOk;
  }

  if (o.samples < 1) throw ConfigError("samples must be >= 1");
  Rng rng(resolve_seed(co.seed));
  double antisym = 0.0, flow = 0.0, so3 = 0.0, so3_fd = 0.0, xxs = 0.0, cas = 0.0, cas_fd = 0.0, x1x2S1 = 0.0;
  for (std::size_t n = 0; n < o.samples; ++n) {
    const PhasePoint z{{rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)},
                       {rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)},
                       spin::spin_half_magnitude() * rng.direction()};
    spin::FieldConfig f;
    f.E = {rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)};
    f.B = {rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)};
    for (std::size_t a = 0; a < kDim; ++a)
      for (std::size_t b = 0; b < kDim; ++b)
        antisym = worst_of(antisym, std::abs(table(coord_at(a), coord_at(b), z) + table(coord_at(b), coord_at(a), z)));
    const PhasePoint t = hamiltonian_flow(table, pauli_hamiltonian(f, pp), z);
    const Vec3 ref = spin::precession_rhs(z.S, spin::precession_vector(f, z.p, pp));
    flow = worst_of(flow, norm(t.S - ref) / std::max(1.0, norm(ref)));
    const auto S1 = coordinate(Coord::S1), S2 = coordinate(Coord::S2), S3 = coordinate(Coord::S3);
    const auto x1 = coordinate(Coord::x1), x2 = coordinate(Coord::x2);
    so3 = worst_of(so3, jacobi_residual(table, z, S1, S2, S3));
    so3_fd = worst_of(so3_fd, jacobi_residual(table, z, S1, S2, S3, Derivatives::finite_difference));
    xxs = worst_of(xxs, jacobi_residual(table, z, x1, x2, S3, Derivatives::finite_difference));
    x1x2S1 = worst_of(x1x2S1, jacobi_residual(table, z, x1, x2, S1));
    cas = worst_of(cas, casimir_residual(table, z));
    cas_fd = worst_of(cas_fd, casimir_residual(table, z, Derivatives::finite_difference));
  }
  std::vector<double> lc, lb;
  for (double c : {10.0, 100.0, 1000.0}) {
    spin::ParticleParams q = pp;
    q.c = c;
    const PhasePoint z{{}, {}, {0.0, 0.0, 0.5}};
    lc.push_back(std::log(c));
    lb.push_back(std::log(std::abs(poisson_bracket(standard_spin_table(q), coordinate(Coord::x1),
                                                   coordinate(Coord::x2), z))));
  }
  const double slope = qm::fit_line(lc, lb).slope;

  qm::CheckReport rep;
  rep.add("antisymmetry", antisym, 0.0);
  rep.add("flow_reproduces_precession", flow, 1e-12);
  rep.add("jacobi_S1_S2_S3", so3, 1e-12);
  rep.add("jacobi_S1_S2_S3_fd", so3_fd, 1e-10);
  rep.add("jacobi_x1_x2_S3_fd", xxs, 1e-8);
  rep.add("casimir_S2", cas, 1e-12);
  rep.add("casimir_S2_fd", cas_fd, 1e-10);
  rep.add("xx_bracket_c_slope", std::abs(slope + 2.0), 0.01);
  for (const auto& e : rep.entries()) write_json_line(*sink, e);
  // measured, not asserted: the truncated table leaves this Jacobi sum open
  write_json_line(*sink, {{"measure", "jacobi_x1_x2_S1"}, {"value", x1x2S1}});
  if (!rep.all_pass()) {
    for (const auto& e : rep.entries())
      if (!e.pass) err << "failed: " << e.name << '\n';
    return kExitFailure;
  }
  return kExitOk;
}

inline int cmd_accel(const CommonOptions& co, const AccelOptions& o, std::ostream& out, std::ostream& err) {
  require_positive(o.c, "c");
  std::vector<double> speeds = o.speeds.empty() ? accel::default_speeds() : parse_list(o.speeds, "speeds");
  for (double b : speeds)
    if (!(b > 0.0 && b < 1.0)) throw ConfigError("speeds are fractions of c in (0, 1)");
  std::vector<accel::SweepPoint> pts;
  double expected = 0.0;
  if (o.synthetic) {
    require_finite(o.k, "k");
    for (double b : speeds) {
      const double v = b * o.c;
      const double gap = o.c * o.c - v * v;
      pts.push_back({v, std::pow(gap, o.k), std::log(gap)});
    }
    expected = o.k;
  } else if (o.scenario == "em") {
    require_positive(o.E, "E");
    pts = accel::em_sweep(speeds, o.E, o.c);
    expected = 1.5;
  } else if (o.scenario == "geodesic") {
    require_positive(o.rs, "rs");
    if (!(o.r > 1.0)) throw ConfigError("r (in units of rs) must exceed 1");
    pts = accel::geodesic_sweep(speeds, o.r * o.rs, gr::Schwarzschild(o.rs), o.c);
    expected = 1.0;
  } else {
    throw ConfigError("scenario must be em or geodesic");
  }
  accel::PowerFit fit;
  try {
    fit = accel::fit_exponent(pts, o.c);
  } catch (const std::invalid_argument& ex) {
    throw ConfigError(ex.what());
  }
  Sink sink(co.out, out);
  CsvWriter csv(*sink, {"v", "a_par", "log_gap"});
  for (const auto& p : pts) csv.row({p.v, p.a_par, p.log_gap});
  Sink sum(co.summary, err);
  write_json_line(*sum, {{"command", "accel"},
                         {"scenario", o.synthetic ? "synthetic" : o.scenario},
                         {"k", fit.k},
                         {"amplitude", fit.amplitude},
                         {"residual", fit.residual},
                         {"expected_k", expected}});
  return kExitOk;
}

namespace detail {

inline gr::BodyState mptd_initial(const MptdOptions& o, const gr::Schwarzschild& st, const gr::BodyParams& bp,
                                  double lambda) {
  const auto comps = parse_list(o.spin, "spin");
  if (comps.size() != 6) throw ConfigError("spin: expected six components S01,S02,S03,S12,S13,S23");
  AntisymTensor4 seed;
  for (std::size_t k = 0; k < 6; ++k) seed.components()[k] = comps[k];
  const double alpha = o.alpha.value_or(gr::spin_half_alpha(o.hbar));
  if (!(alpha >= 0.0)) throw ConfigError("alpha must be >= 0");
  try {
    if (!o.flat) return gr::circular_body(st, o.r0 * o.rs, bp, seed, alpha, lambda);
    if (!(std::abs(o.speed) < 1.0)) throw ConfigError("speed is a fraction of c below 1");
    gr::BodyState s;
    s.x = {0.0, o.r0, std::numbers::pi / 2, 0.0};
    const double g = 1.0 / std::sqrt(1.0 - o.speed * o.speed);
    s.P = {bp.m * g * bp.c, 0.0, 0.0, bp.m * g * o.speed * bp.c / o.r0};
    s.S = gr::project_spin(st, s.x, s.P, seed, 8.0 * alpha * lambda * lambda);
    return s;
  } catch (const std::domain_error& ex) {
    throw ConfigError(ex.what());
  }
}

inline double max_position_gap(const gr::BodyTrajectory& a, const gr::BodyTrajectory& b) {
  const auto& sa = a.samples.back().state;
  const auto& sb = b.samples.back().state;
  double d = 0.0;
  for (std::size_t m = 0; m < 4; ++m) d = worst_of(d, std::abs(sa.x[m] - sb.x[m]));
  return d;
}

}  // namespace detail

inline int cmd_mptd(const CommonOptions& co, const MptdOptions& o, std::ostream& out, std::ostream& err) {
  if (o.kappa != 0 && o.kappa != 1) throw ConfigError("kappa must be 0 or 1");
  require_positive(o.m, "m");
  require_positive(o.c, "c");
  require_positive(o.hbar, "hbar");
  require_positive(o.dtau, "dtau");
  require_positive(o.r0, "r0");
  require_finite(o.lambda, "lambda");
  if (o.steps < 1) throw ConfigError("steps must be >= 1");
  if (!o.flat) {
    require_positive(o.rs, "rs");
    if (!(o.r0 > 1.5)) throw ConfigError("r0 (in units of rs) must exceed 1.5 for a circular orbit");
  }
  const gr::Schwarzschild st(o.flat ? 0.0 : o.rs);
  gr::BodyParams bp;
  bp.m = o.m;
  bp.c = o.c;
  bp.kappa = o.kappa;
  const gr::BodyState s0 = detail::mptd_initial(o, st, bp, o.lambda);
  const auto tr = gr::integrate_body(s0, st, bp, o.dtau, o.steps);

  Sink sink(co.out, out);
  CsvWriter csv(*sink, {"tau", "t", "r", "phi", "P0", "Pr", "Pphi", "S01", "S02", "S03", "S12", "S13", "S23", "SS",
                        "SP0", "SP1", "SP2", "SP3", "mass_shell"});
  for (const auto& smp : tr.samples) {
    const auto& s = smp.state;
    const auto& S = s.S.components();
    const auto& d = smp.diag;
    csv.row({s.tau, s.x[gr::T] / o.c, s.x[gr::R], s.x[gr::PH], s.P[0], s.P[1], s.P[3], S[0], S[1], S[2], S[3], S[4],
             S[5], d.SS, d.SP[0], d.SP[1], d.SP[2], d.SP[3], d.mass_shell});
  }
  const auto& first = tr.samples.front().diag;
  double ss = 0.0, sp = 0.0, ms = 0.0;
  for (const auto& smp : tr.samples) {
    ss = worst_of(ss, first.SS != 0.0 ? std::abs(smp.diag.SS / first.SS - 1.0) : std::abs(smp.diag.SS));
    for (std::size_t m = 0; m < 4; ++m) sp = worst_of(sp, std::abs(smp.diag.SP[m] - first.SP[m]));
    ms = worst_of(ms, std::abs(smp.diag.mass_shell - first.mass_shell));
  }
  nlohmann::json summary{{"command", "mptd"},         {"kappa", o.kappa},           {"SS_drift", ss},
                         {"SP_drift", sp},            {"mass_shell_drift", ms},     {"samples", tr.samples.size()},
                         {"stopped_near_horizon", tr.stopped_near_horizon}};
  if (o.compare) {
    gr::BodyParams other = bp;
    other.kappa = 1 - o.kappa;
    const double gap = detail::max_position_gap(tr, gr::integrate_body(s0, st, other, o.dtau, o.steps));
    const gr::BodyState half = detail::mptd_initial(o, st, bp, 0.5 * o.lambda);
    const double gap_half = detail::max_position_gap(gr::integrate_body(half, st, bp, o.dtau, o.steps),
                                                     gr::integrate_body(half, st, other, o.dtau, o.steps));
    summary["kappa_gap"] = gap;
    summary["kappa_gap_half_spin"] = gap_half;
    summary["spin_scaling_ratio"] = gap_half > 0.0 ? nlohmann::json(gap / gap_half) : nlohmann::json(nullptr);
  }
  Sink sum(co.summary, err);
  write_json_line(*sum, summary);
  if (tr.stopped_near_horizon) {
    err << "stopped: r fell below 1.05 rs\n";
    return kExitFailure;
  }
  return kExitOk;
}

inline int cmd_qmcheck(const CommonOptions& co, const QmOptions& o, std::ostream& out, std::ostream& err) {
  qm::QmParams pr{o.hbar, o.m, o.c};
  try {
    pr.validate();
  } catch (const std::invalid_argument& ex) {
    throw ConfigError(ex.what());
  }
  if (o.samples < 1) throw ConfigError("samples must be >= 1");
  if (!(o.pmax >= 0.0) || !std::isfinite(o.pmax)) throw ConfigError("pmax must be >= 0");
  Rng rng(resolve_seed(co.seed));
  std::vector<Vec3> ps(o.samples);
  std::vector<qm::Spinor2> us(o.samples);
  for (std::size_t i = 0; i < o.samples; ++i) {
    ps[i] = (rng.uniform(0.0, o.pmax) * pr.mc()) * rng.direction();
    us[i] = {cplx(rng.normal(), rng.normal()), cplx(rng.normal(), rng.normal())};
  }
  std::vector<qm::IdentitySample> res(o.samples);
  parallel_for(o.samples, resolve_threads(co.threads),
               [&](std::size_t i) { res[i] = qm::evaluate_identities(ps[i], us[i], pr); });
  qm::CheckReport rep = qm::identity_report(res);

  const double d2 = qm::position_coefficient_deviation({1e-2 * pr.mc(), 0.0, 0.0}, pr);
  const double d3 = qm::position_coefficient_deviation({1e-3 * pr.mc(), 0.0, 0.0}, pr);
  rep.add("position_coefficient_order", std::abs(std::log10(d2 / d3) - 2.0), 0.05);
  const auto c2 = qm::pryce_position_commutator(qm::OnShellMomentum::make({1e-2 * pr.mc(), 0.0, 0.0}, pr), pr);
  const auto c3 = qm::pryce_position_commutator(qm::OnShellMomentum::make({1e-3 * pr.mc(), 0.0, 0.0}, pr), pr);
  rep.add("position_commutator_leading_order",
          std::abs(std::log10(c2.leading_deviation / c3.leading_deviation) - 2.0), 0.05);

  std::optional<Sink> series;
  if (!o.series.empty()) series.emplace(o.series, out);
  if (o.zitter) {
    if (!(o.weight >= 0.0 && o.weight <= 1.0)) throw ConfigError("weight must lie in [0, 1]");
    require_positive(o.periods, "periods");
    if (o.nsamples < 16) throw ConfigError("nsamples must be >= 16");
    qm::PacketSpec spec;
    spec.n = o.nodes;
    spec.sigma_p = o.sigma_p;
    qm::SpinorField<4> field;
    try {
      field = qm::make_dirac_packet(spec, o.weight, pr);
    } catch (const std::invalid_argument& ex) {
      throw ConfigError(ex.what());
    }
    const double period = std::numbers::pi * pr.hbar / (pr.m * pr.c * pr.c);
    const auto ser = qm::evolve_dirac_packet(field, o.periods * period, o.nsamples);
    const auto osc = qm::dominant_oscillation(ser.t, ser.position);
    const double target = 2.0 * pr.m * pr.c * pr.c / pr.hbar;
    double nd = 0.0;
    for (double n : ser.norm) nd = worst_of(nd, std::abs(n / ser.norm.front() - 1.0));
    if (o.weight > 0.0) {
      rep.add("zitterbewegung_frequency", std::abs(osc.angular_frequency / target - 1.0), 0.01);
    } else {
      rep.add("zitterbewegung_absent", qm::fit_line(ser.t, ser.position).max_residual / qm::packet_width(spec, pr),
              1e-6);
    }
    rep.add("dirac_packet_norm", nd, 1e-12);
    if (series) {
      CsvWriter csv(**series, {"t", "obs_name", "value"});
      for (std::size_t k = 0; k < ser.t.size(); ++k) {
        csv.labeled_row(ser.t[k], "norm", ser.norm[k]);
        csv.labeled_row(ser.t[k], "x", ser.position[k]);
      }
    }
  }
  if (o.current) {
    qm::CurrentSpec coarse, fine;
    coarse.points_per_beat = 2048;
    coarse.steps_per_period = 4096;
    const auto rc = qm::current_conservation(coarse, pr);
    const auto rf = qm::current_conservation(fine, pr);
    rep.add("current_divergence", rf.divergence, 1e-6);
    rep.add("current_order", std::abs(std::log2(rc.divergence / rf.divergence) - 2.0), 0.1);
    rep.add("current_charge_drift", rf.charge_drift, 1e-8);
    rep.add("current_density_positive", rf.min_density > 0.0 ? 0.0 : 1.0, 0.0);
  }

  Sink sink(co.out, out);
  for (const auto& e : rep.entries()) write_json_line(*sink, e);
  if (!rep.all_pass()) {
    for (const auto& e : rep.entries())
      if (!e.pass) err << "failed: " << e.name << " (residual " << format_double(e.residual) << ")\n";
    return kExitFailure;
  }
  return kExitOk;
}

inline int cmd_report(const CommonOptions& co, const ReportOptions& o, std::ostream& out, std::ostream& err) {
  suite::SuiteOptions so;
  so.seed = resolve_seed(co.seed);
  so.threads = resolve_threads(co.threads);
  if (o.samples < 1) throw ConfigError("samples must be >= 1");
  so.identity_samples = o.samples;
  so.flip_alignment_sign = o.flip_sign;
  so.timing_rows = o.timing;
  const auto start = std::chrono::steady_clock::now();
  const auto rows = suite::run_all(so);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  bool ok = true;
  for (const auto& r : rows) ok = ok && r.pass;

  Sink sink(co.out, out);
  if (o.json) {
    for (const auto& r : rows) write_json_line(*sink, r);
    write_json_line(*sink, {{"overall_pass", ok}});
  } else {
    *sink << "pass | topic | claim | measured | expected | tol\n";
    for (const auto& r : rows)
      *sink << (r.pass ? "PASS" : "FAIL") << " | " << r.topic << " | " << r.claim << " | " << format_double(r.measured)
            << " | " << format_double(r.expected) << " | " << suite::relation_text(r.relation) << ' '
            << format_double(r.tol) << '\n';
    *sink << (ok ? "overall: PASS" : "overall: FAIL") << '\n';
  }
  // wall-clock time stays out of the data stream
  Sink sum(co.summary, err);
  write_json_line(*sum, {{"command", "report"}, {"overall_pass", ok}, {"seconds", secs}});
  if (!ok) {
    for (const auto& r : rows)
      if (!r.pass) err << "failed: " << r.claim << '\n';
    return kExitFailure;
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------

/// Moves `--config PATH` / `--config=PATH` out of the arguments and splices
/// the file's settings in right after the subcommand, so later command-line
/// values override them.
inline std::vector<std::string> expand_config(const std::vector<std::string>& args) {
  std::vector<std::string> rest;
  std::optional<std::string> path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    const std::string& a = args[i];
    if (a == "--config") {
      if (i + 1 >= args.size()) throw ConfigError("--config needs a path");
      path = args[++i];
    } else if (a.rfind("--config=", 0) == 0) {
      path = a.substr(9);
    } else {
      rest.push_back(a);
    }
  }
  if (!path) return rest;
  const auto extra = config_file_args(*path);
  // insert after program name and subcommand
  std::size_t at = std::min<std::size_t>(rest.size(), 2);
  rest.insert(rest.begin() + static_cast<long>(at), extra.begin(), extra.end());
  return rest;
}

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CommonOptions co;
  PrecessOptions po, ao;
  ao.gamma = 1.0;
  BracketOptions bo;
  AccelOptions xo;
  MptdOptions mo;
  QmOptions qo;
  ReportOptions ro;

  CLI::App app{"spin dynamics, spin-curvature coupling and positive-energy quantum checks", "spindyn"};
  app.require_subcommand(1);
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

  auto add_common = [&](CLI::App* sub, bool seeded) {
    sub->add_option("--out", co.out, "output path ('-' for stdout)");
    sub->add_option("--summary", co.summary, "summary JSON-lines path ('-' for stderr)");
    sub->add_option("--threads", co.threads, "worker cap (0 = all cores)");
    if (seeded) sub->add_option("--seed", co.seed, "64-bit seed (falls back to SPINDYN_SEED)");
  };
  auto add_spin = [&](CLI::App* sub, PrecessOptions& o) {
    add_common(sub, false);
    sub->add_option("--e", o.e, "charge");
    sub->add_option("--m", o.m, "mass");
    sub->add_option("--c", o.c, "speed of light");
    sub->add_option("--hbar", o.hbar, "Planck constant");
    sub->add_option("--mu", o.mu, "magnetic moment factor");
    sub->add_option("--gamma", o.gamma, "alignment coupling (>= 0)");
    sub->add_option("--B", o.B, "magnetic field Bx,By,Bz");
    sub->add_option("--E", o.E, "constant electric field");
    sub->add_option("--coulomb", o.coulomb, "Coulomb charge; nonzero selects the Coulomb field");
    sub->add_option("--x", o.x, "position");
    sub->add_option("--p", o.p, "background momentum");
    sub->add_option("--S", o.S, "initial spin Sx,Sy,Sz");
    sub->add_option("--theta0", o.theta0, "initial angle to B (used when S is not given)");
    sub->add_option("--smag", o.smag, "spin magnitude for theta0 (default sqrt(3)/2 hbar)");
    sub->add_option("--scheme", o.scheme, "rk4 or rk45");
    sub->add_option("--dt", o.dt, "time step");
    sub->add_option("--steps", o.steps, "number of steps");
    sub->add_option("--eps", o.eps, "pole distance that counts as aligned");
  };

  auto* precess = app.add_subcommand("precess", "spin precession and alignment trajectory (CSV)");
  add_spin(precess, po);
  auto* align = app.add_subcommand("align", "precess with alignment coupling gamma = 1 by default");
  add_spin(align, ao);

  auto* brk = app.add_subcommand("brackets", "bracket table at a point, or --check for the identity report");
  add_common(brk, true);
  brk->add_flag("--check", bo.check, "run the bracket identity checks");
  brk->add_option("--samples", bo.samples, "random phase-space points");
  brk->add_option("--e", bo.e, "charge");
  brk->add_option("--m", bo.m, "mass");
  brk->add_option("--c", bo.c, "speed of light");
  brk->add_option("--mu", bo.mu, "magnetic moment factor");
  brk->add_option("--x", bo.x, "position");
  brk->add_option("--p", bo.p, "momentum");
  brk->add_option("--S", bo.S, "spin");

  auto* acc = app.add_subcommand("accel", "longitudinal acceleration sweep and power-law fit");
  add_common(acc, false);
  acc->add_option("scenario", xo.scenario, "em or geodesic");
  acc->add_option("--speeds", xo.speeds, "comma-separated v/c values");
  acc->add_option("--E", xo.E, "field strength (em)");
  acc->add_option("--c", xo.c, "speed of light");
  acc->add_option("--rs", xo.rs, "Schwarzschild radius (geodesic)");
  acc->add_option("--r", xo.r, "radius in units of rs (geodesic)");
  acc->add_flag("--synthetic", xo.synthetic, "fit an exact power law (self-test)");
  acc->add_option("--k", xo.k, "exponent of the synthetic law");

  auto* mp = app.add_subcommand("mptd", "spinning body on a Schwarzschild circular orbit");
  add_common(mp, false);
  mp->add_option("--kappa", mo.kappa, "gravimagnetic moment, 0 or 1");
  mp->add_option("--rs", mo.rs, "Schwarzschild radius");
  mp->add_option("--r0", mo.r0, "orbit radius in units of rs (absolute with --flat)");
  mp->add_option("--m", mo.m, "mass");
  mp->add_option("--c", mo.c, "speed of light");
  mp->add_option("--hbar", mo.hbar, "Planck constant");
  mp->add_option("--alpha", mo.alpha, "spin parameter, S.S = 8 alpha lambda^2 (default 3 hbar^2 / 4)");
  mp->add_option("--lambda", mo.lambda, "spin scale factor");
  mp->add_option("--spin", mo.spin, "spin seed S01,S02,S03,S12,S13,S23 (projected onto the SSC)");
  mp->add_option("--dtau", mo.dtau, "step in the evolution parameter");
  mp->add_option("--steps", mo.steps, "number of steps");
  mp->add_flag("--flat", mo.flat, "flat spacetime, tangential straight-line motion");
  mp->add_option("--speed", mo.speed, "tangential speed / c for --flat");
  mp->add_flag("--compare", mo.compare, "also run the other kappa and half spin, report the scaling");

  auto* qmc = app.add_subcommand("qmcheck", "operator identity suite (JSON-lines)");
  add_common(qmc, true);
  qmc->add_option("--samples", qo.samples, "random on-shell momenta");
  qmc->add_option("--pmax", qo.pmax, "largest |p| / mc");
  qmc->add_option("--hbar", qo.hbar, "Planck constant");
  qmc->add_option("--m", qo.m, "mass");
  qmc->add_option("--c", qo.c, "speed of light");
  qmc->add_flag("--zitter", qo.zitter, "run the Dirac packet and extract the oscillation frequency");
  qmc->add_flag("--current", qo.current, "run the conserved-current checks");
  qmc->add_option("--weight", qo.weight, "negative-energy branch weight of the packet");
  qmc->add_option("--periods", qo.periods, "duration in units of pi hbar / mc^2");
  qmc->add_option("--nodes", qo.nodes, "momentum grid size");
  qmc->add_option("--nsamples", qo.nsamples, "time samples");
  qmc->add_option("--sigma-p", qo.sigma_p, "packet momentum spread / mc");
  qmc->add_option("--series", qo.series, "time-series CSV path (t,obs_name,value)");

  auto* rep = app.add_subcommand("report", "desk-scale run of every self-check");
  add_common(rep, true);
  rep->add_flag("--json", ro.json, "JSON-lines rows");
  rep->add_flag("--timing", ro.timing, "add the wall-clock budget row (not byte-reproducible)");
  rep->add_option("--samples", ro.samples, "identity samples");
  rep->add_flag("--inject-alignment-sign-flip", ro.flip_sign)->group("");

  std::vector<std::string> args(argv, argv + argc);
  try {
    args = expand_config(args);
    std::vector<std::string> rev(args.rbegin(), args.rend() - 1);  // CLI11 consumes reversed, without argv[0]
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& ex) {
    err << "spindyn: " << ex.what() << '\n';
    return kExitConfig;
  } catch (const ConfigError& ex) {
    err << "spindyn: " << ex.what() << '\n';
    return kExitConfig;
  }

  try {
    if (co.threads > 4096) throw ConfigError("threads must be <= 4096");
    if (*precess) return cmd_precess(co, po, out, err);
    if (*align) return cmd_precess(co, ao, out, err);
    if (*brk) return cmd_brackets(co, bo, out, err);
    if (*acc) return cmd_accel(co, xo, out, err);
    if (*mp) return cmd_mptd(co, mo, out, err);
    if (*qmc) return cmd_qmcheck(co, qo, out, err);
    if (*rep) return cmd_report(co, ro, out, err);
  } catch (const ConfigError& ex) {
    err << "spindyn: " << ex.what() << '\n';
    return kExitConfig;
  } catch (const NumericalFailure& ex) {
    err << "spindyn: numerical failure: " << ex.what() << '\n';
    return kExitFailure;
  } catch (const std::invalid_argument& ex) {
    err << "spindyn: " << ex.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& ex) {
    err << "spindyn: " << ex.what() << '\n';
    return kExitFailure;
  }
  return kExitConfig;
}

}  // namespace spindyn::cli

#endif  // SPINDYN_CLI_HPP
