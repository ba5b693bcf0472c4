#ifndef SPINDYN_CURVED_SPIN_HPP
#define SPINDYN_CURVED_SPIN_HPP

// Spinning body in Schwarzschild spacetime, leading post-Newtonian form:
//
//   kappa = 0 (MPTD):       DP_mu = -1/4 theta_{mu nu} xdot^nu,   DS^{mu nu} = 0
//   kappa = 1 (modified):   DP_mu = -1/4 theta_{mu nu} xdot^nu
//                                   - sqrt(-xdot^2)/(32 m c) (nabla_mu theta_{s l}) S^{s l}
//                           DS^{mu nu} = sqrt(-xdot^2)/(4 m c) (theta^mu_a S^{nu a} - theta^nu_a S^{mu a})
//
// with theta_{mu nu} = R_{mu nu a b} S^{a b} and the closure xdot^mu = P^mu / m.

#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <vector>

#include "spindyn/integrators.hpp"
#include "spindyn/spacetime.hpp"
#include "spindyn/tensor.hpp"

namespace spindyn::gr {

using Tensor2 = std::array<std::array<double, 4>, 4>;

struct BodyParams {
  double m = 1.0;
  double c = 1.0;
  int kappa = 0;  ///< gravimagnetic moment, 0 or 1
  Riemann (Schwarzschild::*curvature)(const Vec4&) const = &Schwarzschild::riemann;  ///< source of R for theta

  void validate() const {
    if (!(m > 0.0) || !(c > 0.0)) throw std::invalid_argument("BodyParams: m and c must be positive");
    if (kappa != 0 && kappa != 1) throw std::invalid_argument("BodyParams: kappa must be 0 or 1");
  }
};

struct BodyState {
  Vec4 x{};  ///< (ct, r, theta, phi)
  Vec4 P{};  ///< contravariant momentum
  AntisymTensor4 S{};
  double tau = 0.0;

  static constexpr std::size_t flat_size = 14;

  std::array<double, flat_size> flat() const {
    std::array<double, flat_size> y{};
    for (std::size_t m = 0; m < 4; ++m) {
      y[m] = x[m];
      y[4 + m] = P[m];
    }
    for (std::size_t k = 0; k < 6; ++k) y[8 + k] = S.components()[k];
    return y;
  }

  static BodyState from_flat(const std::array<double, flat_size>& y, double tau = 0.0) {
    BodyState s;
    for (std::size_t m = 0; m < 4; ++m) {
      s.x[m] = y[m];
      s.P[m] = y[4 + m];
    }
    for (std::size_t k = 0; k < 6; ++k) s.S.components()[k] = y[8 + k];
    s.tau = tau;
    return s;
  }
};

struct BodyRates {
  Vec4 dx{};
  Vec4 dP{};
  AntisymTensor4 dS{};
};

/// theta_{mu nu} = R_{mu nu a b} S^{a b}
inline Tensor2 theta(const Riemann& Rm, const AntisymTensor4& S) {
  Tensor2 th{};
  for (std::size_t m = 0; m < 4; ++m)
    for (std::size_t n = 0; n < 4; ++n)
      for (std::size_t a = 0; a < 4; ++a)
        for (std::size_t b = a + 1; b < 4; ++b) th[m][n] += 2.0 * Rm[m][n][a][b] * S(a, b);
  return th;
}

inline Tensor2 theta(const Schwarzschild& st, const Vec4& x, const AntisymTensor4& S) {
  return theta(st.riemann(x), S);
}

/// (nabla_mu R_{s l a b}) S^{s l} S^{a b}, with the partial derivative of the
/// closed-form curvature taken by central differences.
inline Vec4 curvature_gradient_force(const Schwarzschild& st, const Vec4& x, const AntisymTensor4& S) {
  const Christoffel G = st.christoffel(x);
  const Riemann Rm = st.riemann_exact(x);
  // full antisymmetric matrix of S for the contractions
  Tensor2 s{};
  for (std::size_t a = 0; a < 4; ++a)
    for (std::size_t b = 0; b < 4; ++b) s[a][b] = S(a, b);

  auto contract = [&s](const Riemann& T) {
    double v = 0.0;
    for (std::size_t a = 0; a < 4; ++a)
      for (std::size_t b = 0; b < 4; ++b) {
        if (s[a][b] == 0.0) continue;
        for (std::size_t c = 0; c < 4; ++c)
          for (std::size_t d = 0; d < 4; ++d) v += T[a][b][c][d] * s[a][b] * s[c][d];
      }
    return v;
  };

  Vec4 out{};
  for (std::size_t mu = 0; mu < 4; ++mu) {
    const double h = Schwarzschild::step(mu, x);
    Vec4 up = x, dn = x;
    up[mu] += h;
    dn[mu] -= h;
    double v = (contract(st.riemann_exact(up)) - contract(st.riemann_exact(dn))) / (2.0 * h);
    // Christoffel corrections on all four indices; each index slot gives the same
    // contraction pattern by the pair symmetries, evaluated explicitly here.
    for (std::size_t a = 0; a < 4; ++a)
      for (std::size_t b = 0; b < 4; ++b)
        for (std::size_t c = 0; c < 4; ++c)
          for (std::size_t d = 0; d < 4; ++d) {
            const double ss = s[a][b] * s[c][d];
            if (ss == 0.0) continue;
            double corr = 0.0;
            for (std::size_t r = 0; r < 4; ++r)
              corr += G[r][mu][a] * Rm[r][b][c][d] + G[r][mu][b] * Rm[a][r][c][d] + G[r][mu][c] * Rm[a][b][r][d] +
                      G[r][mu][d] * Rm[a][b][c][r];
            v -= corr * ss;
          }
    out[mu] = v;
  }
  return out;
}

namespace detail {
inline double velocity_norm(const Metric& g, const Vec4& xdot) {
  const double v2 = metric_dot(g, xdot, xdot);
  if (!(v2 < 0.0)) throw std::domain_error("modified_rhs: velocity is not timelike");
  return std::sqrt(-v2);
}

inline BodyRates transport(const Christoffel& G, const Vec4& xdot, const BodyState& s) {
  BodyRates r;
  r.dx = xdot;
  r.dP = connection_term(G, xdot, s.P);
  for (std::size_t m = 0; m < 4; ++m)
    for (std::size_t n = m + 1; n < 4; ++n) {
      double v = 0.0;
      for (std::size_t a = 0; a < 4; ++a) {
        if (xdot[a] == 0.0) continue;
        for (std::size_t b = 0; b < 4; ++b) v -= G[m][a][b] * xdot[a] * s.S(b, n) + G[n][a][b] * xdot[a] * s.S(m, b);
      }
      r.dS.set(m, n, v);
    }
  return r;
}
}  // namespace detail

inline BodyRates mptd_rhs(const BodyState& s, const Schwarzschild& st, const BodyParams& p) {
  st.check_exterior(s.x);
  Vec4 xdot{};
  for (std::size_t m = 0; m < 4; ++m) xdot[m] = s.P[m] / p.m;
  const Christoffel G = st.christoffel(s.x);
  BodyRates r = detail::transport(G, xdot, s);
  if (st.flat() || s.S == AntisymTensor4{}) return r;

  const Tensor2 th = theta((st.*p.curvature)(s.x), s.S);
  const Metric gi = st.inverse_metric(s.x);
  for (std::size_t m = 0; m < 4; ++m) {
    double f = 0.0;
    for (std::size_t n = 0; n < 4; ++n) f += -0.25 * th[m][n] * xdot[n];
    r.dP[m] += gi[m][m] * f;
  }
  return r;
}

inline BodyRates modified_rhs(const BodyState& s, const Schwarzschild& st, const BodyParams& p) {
  BodyRates r = mptd_rhs(s, st, p);
  if (st.flat() || s.S == AntisymTensor4{}) return r;

  Vec4 xdot{};
  for (std::size_t m = 0; m < 4; ++m) xdot[m] = s.P[m] / p.m;
  const Metric g = st.metric(s.x);
  const Metric gi = st.inverse_metric(s.x);
  const double w = detail::velocity_norm(g, xdot);

  const Vec4 grad = curvature_gradient_force(st, s.x, s.S);
  for (std::size_t m = 0; m < 4; ++m) r.dP[m] += gi[m][m] * (-w / (32.0 * p.m * p.c) * grad[m]);

  // torque, antisymmetrized without a factor 1/2
  const Tensor2 th = theta((st.*p.curvature)(s.x), s.S);
  const double k = w / (4.0 * p.m * p.c);
  for (std::size_t m = 0; m < 4; ++m)
    for (std::size_t n = m + 1; n < 4; ++n) {
      double v = 0.0;
      for (std::size_t a = 0; a < 4; ++a) v += gi[m][m] * th[m][a] * s.S(n, a) - gi[n][n] * th[n][a] * s.S(m, a);
      r.dS.set(m, n, r.dS(m, n) + k * v);
    }
  return r;
}

inline BodyRates body_rhs(const BodyState& s, const Schwarzschild& st, const BodyParams& p) {
  return p.kappa == 0 ? mptd_rhs(s, st, p) : modified_rhs(s, st, p);
}

// ---------------------------------------------------------------------------
// Diagnostics.

/// S^{mu nu} S_{mu nu}
inline double spin_square(const AntisymTensor4& S, const Metric& g) {
  double v = 0.0;
  for (std::size_t m = 0; m < 4; ++m)
    for (std::size_t n = m + 1; n < 4; ++n) v += 2.0 * g[m][m] * g[n][n] * S(m, n) * S(m, n);
  return v;
}

/// S^{mu nu} P_nu
inline Vec4 spin_momentum(const AntisymTensor4& S, const Vec4& P, const Metric& g) {
  Vec4 v{};
  for (std::size_t m = 0; m < 4; ++m)
    for (std::size_t n = 0; n < 4; ++n) v[m] += S(m, n) * g[n][n] * P[n];
  return v;
}

struct BodyDiagnostics {
  double SS;        ///< S^{mu nu} S_{mu nu}
  Vec4 SP;          ///< S^{mu nu} P_nu
  double mass_shell;  ///< P^2 + (mc)^2
  double r;
};

inline BodyDiagnostics diagnostics(const BodyState& s, const Schwarzschild& st, const BodyParams& p) {
  const Metric g = st.metric(s.x);
  return {spin_square(s.S, g), spin_momentum(s.S, s.P, g), metric_dot(g, s.P, s.P) + p.m * p.c * p.m * p.c,
          s.x[R]};
}

struct BodySample {
  BodyState state;
  BodyDiagnostics diag;
};

struct BodyTrajectory {
  std::vector<BodySample> samples;
  bool stopped_near_horizon = false;
};

/// Fixed-step rk4 integration of the kappa-selected flow. Stops early, flagged,
/// when r drops below 1.05 rs.
inline BodyTrajectory integrate_body(const BodyState& s0, const Schwarzschild& st, const BodyParams& p,
                                     double dtau, std::size_t n_steps) {
  p.validate();
  if (!(dtau > 0.0)) throw std::invalid_argument("integrate_body: dtau must be positive");
  st.check_exterior(s0.x);

  auto sys = [&](const std::array<double, BodyState::flat_size>& y, std::array<double, BodyState::flat_size>& dy,
                 double) {
    const BodyRates r = body_rhs(BodyState::from_flat(y), st, p);
    for (std::size_t m = 0; m < 4; ++m) {
      dy[m] = r.dx[m];
      dy[4 + m] = r.dP[m];
    }
    for (std::size_t k = 0; k < 6; ++k) dy[8 + k] = r.dS.components()[k];
  };

  BodyTrajectory out;
  out.samples.reserve(n_steps + 1);
  out.samples.push_back({s0, diagnostics(s0, st, p)});
  auto y = s0.flat();
  for (std::size_t n = 1; n <= n_steps; ++n) {
    const double tau = s0.tau + static_cast<double>(n - 1) * dtau;
    advance(sys, y, tau, dtau, Scheme::rk4);
    if (!all_finite(y)) throw NumericalFailure("integrate_body: non-finite state", n);
    const BodyState s = BodyState::from_flat(y, s0.tau + static_cast<double>(n) * dtau);
    out.samples.push_back({s, diagnostics(s, st, p)});
    if (s.x[R] < 1.05 * st.rs()) {
      out.stopped_near_horizon = true;
      break;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Initial data.

/// Projects a seed tensor orthogonally to P, S = Pi A Pi^T with
/// Pi^mu_a = delta^mu_a - P^mu P_a / P^2, then scales it so that
/// S^{mu nu} S_{mu nu} = target. Zero target gives S = 0.
inline AntisymTensor4 project_spin(const Schwarzschild& st, const Vec4& x, const Vec4& P, const AntisymTensor4& seed,
                                   double target) {
  if (target == 0.0) return {};
  const Metric g = st.metric(x);
  const double P2 = metric_dot(g, P, P);
  Tensor2 pi{};
  for (std::size_t m = 0; m < 4; ++m)
    for (std::size_t a = 0; a < 4; ++a) pi[m][a] = (m == a ? 1.0 : 0.0) - P[m] * g[a][a] * P[a] / P2;
  AntisymTensor4 S;
  for (std::size_t m = 0; m < 4; ++m)
    for (std::size_t n = m + 1; n < 4; ++n) {
      double v = 0.0;
      for (std::size_t a = 0; a < 4; ++a)
        for (std::size_t b = 0; b < 4; ++b) v += pi[m][a] * pi[n][b] * seed(a, b);
      S.set(m, n, v);
    }
  const double ss = spin_square(S, g);
  if (!(ss > 0.0)) throw std::domain_error("project_spin: projected seed has no spacelike part");
  const double k = std::sqrt(target / ss);
  for (auto& v : S.components()) v *= k;
  return S;
}

/// Equatorial circular-geodesic data at radius r, momentum P = m v, with a
/// spin tensor built from `seed` and normalized to S^{mu nu} S_{mu nu} = 8 alpha lambda^2.
inline BodyState circular_body(const Schwarzschild& st, double r, const BodyParams& p, const AntisymTensor4& seed,
                               double alpha, double lambda) {
  if (!(r > 1.5 * st.rs())) throw std::domain_error("circular_body: no timelike circular orbit");
  BodyState s;
  s.x = {0.0, r, std::acos(0.0), 0.0};
  const double omega = p.c * std::sqrt(st.rs() / (2.0 * r * r * r));
  const double v0 = p.c / std::sqrt(1.0 - 1.5 * st.rs() / r);
  s.P = {p.m * v0, 0.0, 0.0, p.m * omega * v0 / p.c};
  s.S = project_spin(st, s.x, s.P, seed, 8.0 * alpha * lambda * lambda);
  return s;
}

/// Default spin seed: S^{r phi}, a spin along the orbital axis.
inline AntisymTensor4 orbital_axis_seed() {
  AntisymTensor4 a;
  a.set(R, PH, 1.0);
  return a;
}

/// alpha for a spin one-half particle, 3 hbar^2 / 4.
inline double spin_half_alpha(double hbar = 1.0) { return 0.75 * hbar * hbar; }

}  // namespace spindyn::gr

#endif  // SPINDYN_CURVED_SPIN_HPP
