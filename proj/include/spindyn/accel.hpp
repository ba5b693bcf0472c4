#ifndef SPINDYN_ACCEL_HPP
#define SPINDYN_ACCEL_HPP

// Velocity dependence of the longitudinal three-acceleration for the Lorentz
// force and for Schwarzschild geodesics, and log-log power-law fits of it.

#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "spindyn/integrators.hpp"
#include "spindyn/spacetime.hpp"
#include "spindyn/tensor.hpp"

namespace spindyn::accel {

/// Worldline in a constant electromagnetic field. x^0 = ct, v = dx/ds with
/// v^2 = -c^2; charge over mass is absorbed into `q_over_m`.
struct EMWorldline {
  Vec4 x{};
  Vec4 v{};
  Vec3 E{};
  Vec3 B{};
  double c = 1.0;
  double q_over_m = 1.0;
};

/// dv^mu/ds = F^mu_nu v^nu with F^0_i = F^i_0 = E^i / c and F^i_j v^j = (v x B)^i.
inline Vec4 lorentz_rhs(const EMWorldline& w) {
  const Vec3 vs{w.v[1], w.v[2], w.v[3]};
  const Vec3 vxB = cross(vs, w.B);
  const double k = w.q_over_m;
  Vec4 dv{};
  dv[0] = k * dot(w.E, vs) / w.c;
  for (std::size_t i = 0; i < 3; ++i) dv[i + 1] = k * (w.E[i] * w.v[0] / w.c + vxB[i]);
  return dv;
}

/// Geodesic worldline in Schwarzschild coordinates (ct, r, theta, phi).
struct GeoWorldline {
  Vec4 x{};
  Vec4 v{};
  double c = 1.0;
};

/// dv^mu/ds = -Gamma^mu_{nu a} v^nu v^a
inline Vec4 geodesic_rhs(const GeoWorldline& w, const gr::Schwarzschild& st) {
  st.check_exterior(w.x);
  return gr::connection_term(st.christoffel(w.x), w.v, w.v);
}

struct ThreeAcceleration {
  Vec3 a{};
  double a_par = 0.0;  ///< (a, v^); equals |a| when v = 0
  Vec3 u{};            ///< three-velocity
};

/// Three-velocity and d^2x/dt^2 from frame components of v and dv/ds,
/// using dt/ds = v^0 / c. When v = 0 the longitudinal direction is taken
/// along the acceleration itself, so a_par = |a|.
inline ThreeAcceleration three_acceleration_from_frame(const Vec4& v, const Vec4& dv, double c) {
  ThreeAcceleration out;
  const Vec3 vs{v[1], v[2], v[3]};
  const Vec3 dvs{dv[1], dv[2], dv[3]};
  out.u = (c / v[0]) * vs;
  const double k = (c / v[0]) * (c / v[0]);
  out.a = k * (dvs - (dv[0] / v[0]) * vs);
  const double speed = norm(out.u);
  out.a_par = speed > 0.0 ? dot(out.a, out.u) / speed : norm(out.a);
  return out;
}

inline ThreeAcceleration three_acceleration(const EMWorldline& w) {
  return three_acceleration_from_frame(w.v, lorentz_rhs(w), w.c);
}

/// Acceleration measured by the static observer at the worldline's position:
/// frame components in the orthonormal basis (e_t, e_r, e_theta, e_phi),
/// proper time and proper distance of that observer.
inline ThreeAcceleration three_acceleration(const GeoWorldline& w, const gr::Schwarzschild& st) {
  const Vec4 dv = geodesic_rhs(w, st);
  const double r = w.x[gr::R];
  const double th = w.x[gr::TH];
  const double f = 1.0 - st.rs() / r;
  const double sf = std::sqrt(f);
  const double fp = st.rs() / (r * r);  // df/dr
  const double s = std::sin(th);
  const double co = std::cos(th);

  // e^a_mu (diagonal) and its derivative along the worldline
  const Vec4 e{sf, 1.0 / sf, r, r * s};
  const Vec4 de{fp / (2.0 * sf) * w.v[gr::R], -fp / (2.0 * f * sf) * w.v[gr::R], w.v[gr::R],
                s * w.v[gr::R] + r * co * w.v[gr::TH]};
  Vec4 vf{}, dvf{};
  for (std::size_t a = 0; a < 4; ++a) {
    vf[a] = e[a] * w.v[a];
    dvf[a] = e[a] * dv[a] + de[a] * w.v[a];
  }
  return three_acceleration_from_frame(vf, dvf, w.c);
}

// ---------------------------------------------------------------------------
// Prepared states with an exact speed.

/// Particle at the origin moving along E^ with speed u.
inline EMWorldline em_state(double u, const Vec3& E, double c = 1.0, double q_over_m = 1.0) {
  if (!(std::abs(u) < c)) throw std::domain_error("em_state: speed must be below c");
  const double gamma = 1.0 / std::sqrt(1.0 - (u / c) * (u / c));
  const Vec3 dir = norm(E) > 0.0 ? normalized(E) : Vec3{1.0, 0.0, 0.0};
  EMWorldline w;
  w.E = E;
  w.c = c;
  w.q_over_m = q_over_m;
  w.v = {gamma * c, gamma * u * dir[0], gamma * u * dir[1], gamma * u * dir[2]};
  return w;
}

/// Equatorial radial motion at radius r with local (static-observer) speed
/// u; u > 0 is outward.
inline GeoWorldline radial_state(double r, double u, const gr::Schwarzschild& st, double c = 1.0) {
  if (!(std::abs(u) < c)) throw std::domain_error("radial_state: speed must be below c");
  if (!(r > st.rs())) throw std::domain_error("radial_state: inside the horizon");
  const double f = 1.0 - st.rs() / r;
  const double gamma = 1.0 / std::sqrt(1.0 - (u / c) * (u / c));
  GeoWorldline w;
  w.c = c;
  w.x = {0.0, r, std::acos(0.0), 0.0};
  w.v = {gamma * c / std::sqrt(f), gamma * u * std::sqrt(f), 0.0, 0.0};
  return w;
}

/// Equatorial circular geodesic at radius r (needs r > 1.5 rs).
inline GeoWorldline circular_state(double r, const gr::Schwarzschild& st, double c = 1.0) {
  if (!(r > 1.5 * st.rs())) throw std::domain_error("circular_state: no timelike circular orbit");
  GeoWorldline w;
  w.c = c;
  w.x = {0.0, r, std::acos(0.0), 0.0};
  const double omega = c * std::sqrt(st.rs() / (2.0 * r * r * r));  // dphi/dt
  const double v0 = c / std::sqrt(1.0 - 1.5 * st.rs() / r);
  w.v = {v0, 0.0, 0.0, omega * v0 / c};
  return w;
}

/// v^2 + c^2 relative to c^2 (zero on the mass shell).
inline double normalization_defect(const EMWorldline& w) {
  const double v2 = -w.v[0] * w.v[0] + w.v[1] * w.v[1] + w.v[2] * w.v[2] + w.v[3] * w.v[3];
  return (v2 + w.c * w.c) / (w.c * w.c);
}

inline double normalization_defect(const GeoWorldline& w, const gr::Schwarzschild& st) {
  return (gr::metric_dot(st.metric(w.x), w.v, w.v) + w.c * w.c) / (w.c * w.c);
}

// ---------------------------------------------------------------------------

struct GeodesicSample {
  double s;
  Vec4 x;
  Vec4 v;
};

/// Fixed-step rk4 integration of the geodesic equation.
inline std::vector<GeodesicSample> integrate_geodesic(const GeoWorldline& w0, const gr::Schwarzschild& st,
                                                      double ds, std::size_t n_steps) {
  std::array<double, 8> y{};
  for (std::size_t m = 0; m < 4; ++m) {
    y[m] = w0.x[m];
    y[4 + m] = w0.v[m];
  }
  auto sys = [&](const std::array<double, 8>& q, std::array<double, 8>& dq, double) {
    const Vec4 x{q[0], q[1], q[2], q[3]};
    const Vec4 v{q[4], q[5], q[6], q[7]};
    const Vec4 a = gr::connection_term(st.christoffel(x), v, v);
    for (std::size_t m = 0; m < 4; ++m) {
      dq[m] = v[m];
      dq[4 + m] = a[m];
    }
  };
  std::vector<GeodesicSample> out;
  out.reserve(n_steps + 1);
  out.push_back({0.0, w0.x, w0.v});
  for (std::size_t n = 1; n <= n_steps; ++n) {
    advance(sys, y, static_cast<double>(n - 1) * ds, ds, Scheme::rk4);
    if (!all_finite(y)) throw NumericalFailure("integrate_geodesic: non-finite state", n);
    out.push_back({static_cast<double>(n) * ds, {y[0], y[1], y[2], y[3]}, {y[4], y[5], y[6], y[7]}});
  }
  return out;
}

// ---------------------------------------------------------------------------

struct SweepPoint {
  double v;
  double a_par;
  double log_gap;  ///< ln(c^2 - v^2)
};

struct PowerFit {
  double k = 0.0;          ///< exponent of (c^2 - v^2)
  double amplitude = 0.0;  ///< |a_par| = amplitude * (c^2 - v^2)^k
  double residual = 0.0;   ///< rms of the log-log residuals
};

/// Least-squares slope of ln|a_par| against ln(c^2 - v^2).
inline PowerFit fit_exponent(const std::vector<SweepPoint>& samples, double c) {
  if (samples.size() < 5) throw std::invalid_argument("fit_exponent: need at least 5 samples");
  const double n = static_cast<double>(samples.size());
  double sx = 0, sy = 0;
  std::vector<double> X, Y;
  for (const auto& s : samples) {
    if (!(s.v > 0.0 && s.v < c)) throw std::invalid_argument("fit_exponent: speeds must lie in (0, c)");
    if (s.a_par == 0.0) throw std::invalid_argument("fit_exponent: zero acceleration sample");
    X.push_back(std::log(c * c - s.v * s.v));
    Y.push_back(std::log(std::abs(s.a_par)));
    sx += X.back();
    sy += Y.back();
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < X.size(); ++i) {
    sxx += (X[i] - mx) * (X[i] - mx);
    sxy += (X[i] - mx) * (Y[i] - my);
  }
  if (!(sxx > 0.0)) throw std::invalid_argument("fit_exponent: degenerate samples (identical speeds)");
  PowerFit fit;
  fit.k = sxy / sxx;
  const double b = my - fit.k * mx;
  fit.amplitude = std::exp(b);
  double ss = 0;
  for (std::size_t i = 0; i < X.size(); ++i) {
    const double r = Y[i] - (fit.k * X[i] + b);
    ss += r * r;
  }
  fit.residual = std::sqrt(ss / n);
  return fit;
}

/// Speeds (in units of c) of the default sweep.
inline std::vector<double> default_speeds() { return {0.900, 0.925, 0.950, 0.975, 0.990, 0.999}; }

/// Lorentz-force sweep with E parallel to v and B = 0.
inline std::vector<SweepPoint> em_sweep(const std::vector<double>& speeds_over_c, double E = 1.0, double c = 1.0) {
  std::vector<SweepPoint> out;
  for (double b : speeds_over_c) {
    const auto w = em_state(b * c, {E, 0.0, 0.0}, c);
    const auto acc = three_acceleration(w);
    const double speed = norm(acc.u);
    out.push_back({speed, acc.a_par, std::log(c * c - speed * speed)});
  }
  return out;
}

/// Radial geodesic sweep at fixed radius (inward motion).
inline std::vector<SweepPoint> geodesic_sweep(const std::vector<double>& speeds_over_c, double r,
                                              const gr::Schwarzschild& st, double c = 1.0) {
  std::vector<SweepPoint> out;
  for (double b : speeds_over_c) {
    const auto w = radial_state(r, -b * c, st, c);
    const auto acc = three_acceleration(w, st);
    const double speed = norm(acc.u);
    out.push_back({speed, acc.a_par, std::log(c * c - speed * speed)});
  }
  return out;
}

}  // namespace spindyn::accel

#endif  // SPINDYN_ACCEL_HPP
