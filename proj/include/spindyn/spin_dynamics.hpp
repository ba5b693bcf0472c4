#ifndef SPINDYN_SPIN_DYNAMICS_HPP
#define SPINDYN_SPIN_DYNAMICS_HPP

// Nonrelativistic spin evolution: precession about R, the alignment term
// beta (B,S) [S^, [B^, S^]], closed-form oracles and the Pauli / covariant
// Hamiltonian evaluators.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "spindyn/integrators.hpp"
#include "spindyn/tensor.hpp"

namespace spindyn::spin {

struct ParticleParams {
  double e = -1.0;
  double m = 1.0;
  double c = 1.0;
  double hbar = 1.0;
  double gamma_align = 0.0;  ///< dimensionless alignment coupling, >= 0
  double mu = 1.0;           ///< magnetic moment

  /// beta = gamma |e| / (m c); derived, never stored.
  double beta() const { return gamma_align * std::abs(e) / (m * c); }

  void validate() const {
    if (!(m > 0.0) || !(c > 0.0) || !(hbar > 0.0))
      throw std::invalid_argument("ParticleParams: m, c and hbar must be positive");
    if (!(gamma_align >= 0.0)) throw std::invalid_argument("ParticleParams: gamma_align must be >= 0");
    if (!std::isfinite(e) || !std::isfinite(mu)) throw std::invalid_argument("ParticleParams: non-finite e or mu");
  }
};

/// Spin magnitude of a spin one-half particle, sqrt(3)/2 hbar.
inline double spin_half_magnitude(double hbar = 1.0) { return std::sqrt(3.0) / 2.0 * hbar; }

struct FieldConfig {
  enum class Electric { constant, coulomb };

  Electric mode = Electric::constant;
  Vec3 E{};                   ///< used in constant mode
  double coulomb_charge = 0;  ///< E(x) = q x / |x|^3 in coulomb mode
  Vec3 B{};

  Vec3 electric_field(const Vec3& x) const {
    if (mode == Electric::constant) return E;
    const double r = norm(x);
    if (!(r > 0.0)) throw std::domain_error("FieldConfig: Coulomb field evaluated at the origin");
    return coulomb_charge / (r * r * r) * x;
  }

  /// A^0 with the gauge A = 0: -(E, x) for a constant field, q/|x| for Coulomb.
  double scalar_potential(const Vec3& x) const {
    if (mode == Electric::constant) return -dot(E, x);
    const double r = norm(x);
    if (!(r > 0.0)) throw std::domain_error("FieldConfig: Coulomb potential evaluated at the origin");
    return coulomb_charge / r;
  }
};

/// Spin S (units of hbar) with a background momentum p and position x; p and x
/// only enter through the precession vector and the field evaluation.
struct SpinState {
  Vec3 S{};
  Vec3 p{};
  Vec3 x{};
  double t = 0.0;
};

/// R = -(e/mc) { B - (1/2mc) [p, E] }
inline Vec3 precession_vector(const FieldConfig& fields, const Vec3& p, const ParticleParams& params,
                              const Vec3& x = {}) {
  const double mc = params.m * params.c;
  const Vec3 E = fields.electric_field(x);
  return -(params.e / mc) * (fields.B - (1.0 / (2.0 * mc)) * cross(p, E));
}

inline Vec3 precession_rhs(const Vec3& S, const Vec3& R) { return cross(R, S); }

/// beta (B, S) [S^, [B^, S^]]; zero when B = 0.
inline Vec3 alignment_rhs(const Vec3& S, const Vec3& B, const ParticleParams& params) {
  const double s = norm(S);
  if (!(s > 0.0)) throw std::domain_error("alignment_rhs: zero spin");
  const double b = norm(B);
  if (b == 0.0) return {};
  const Vec3 s_hat = S / s;
  const Vec3 b_hat = B / b;
  return params.beta() * dot(B, S) * cross(s_hat, cross(b_hat, s_hat));
}

/// Same vector through the double projection -|B| N(S) N(B) S.
inline Vec3 alignment_rhs_projected(const Vec3& S, const Vec3& B, const ParticleParams& params) {
  if (norm(B) == 0.0) return {};
  return -params.beta() * norm(B) * (projector(S) * (projector(B) * S));
}

/// Precession about R(p, E, B) plus the alignment term along B.
inline Vec3 spin_rhs_total(const Vec3& S, const FieldConfig& fields, const Vec3& p,
                           const ParticleParams& params, const Vec3& x = {}) {
  const Vec3 R = precession_vector(fields, p, params, x);
  Vec3 rhs = precession_rhs(S, R);
  if (params.gamma_align != 0.0) rhs += alignment_rhs(S, fields.B, params);
  return rhs;
}

/// Spin of magnitude s_mag at polar angle theta0 from `axis`, tilted toward
/// the x axis (or y when the axis is along x).
inline Vec3 spin_at_angle(double s_mag, double theta0, const Vec3& axis) {
  const Vec3 a = norm(axis) > 0.0 ? normalized(axis) : Vec3{0.0, 0.0, 1.0};
  const Vec3 ref = std::abs(a[0]) < 0.9 ? Vec3{1.0, 0.0, 0.0} : Vec3{0.0, 1.0, 0.0};
  const Vec3 perp = normalized(ref - dot(ref, a) * a);
  return s_mag * (std::cos(theta0) * a + std::sin(theta0) * perp);
}

/// Rotation of S0 about R^ by the angle |R| t (solution of dS/dt = R x S).
inline Vec3 rotate_rodrigues(const Vec3& S0, const Vec3& R, double t) {
  const double w = norm(R);
  if (w == 0.0) return S0;
  const Vec3 k = R / w;
  const double phi = w * t;
  const double c = std::cos(phi);
  const double s = std::sin(phi);
  return c * S0 + s * cross(k, S0) + (1.0 - c) * dot(k, S0) * k;
}

/// Closed-form polar angle under the alignment flow: tan theta decays as
/// exp(-beta |B| t) toward the nearer pole. Fixed points 0, pi/2, pi are returned as is.
inline double analytic_theta(double theta0, double B_mag, const ParticleParams& params, double t) {
  constexpr double pi = std::numbers::pi;
  if (theta0 < 0.0 || theta0 > pi) throw std::domain_error("analytic_theta: theta0 outside [0, pi]");
  if (theta0 == 0.0 || theta0 == pi || theta0 == pi / 2) return theta0;
  const double decay = std::exp(-params.beta() * B_mag * t);
  if (theta0 < pi / 2) return std::atan(std::tan(theta0) * decay);
  return pi - std::atan(std::tan(pi - theta0) * decay);
}

/// Time for the angular distance to the attracting pole to drop to eps.
/// Infinite on the equator or without coupling.
inline double alignment_time(double theta0, double eps, double B_mag, const ParticleParams& params) {
  constexpr double pi = std::numbers::pi;
  const double rate = params.beta() * B_mag;
  if (theta0 == pi / 2 || rate == 0.0) return std::numeric_limits<double>::infinity();
  const double dist = std::min(theta0, pi - theta0);
  if (!(eps > 0.0) || !(eps <= dist) || !(theta0 > 0.0 && theta0 < pi))
    throw std::domain_error("alignment_time: need 0 < eps <= min(theta0, pi - theta0)");
  return std::log(std::tan(dist) / std::tan(eps)) / rate;
}

struct SpinSample {
  double t;
  Vec3 S;
  double theta;  ///< angle between S and the reference axis (B, or z when B = 0)
  double Smag;
};

using SpinTrajectory = std::vector<SpinSample>;

/// Integrates dS/dt = rhs(S, t). The first sample is the initial state.
/// |S| is never renormalized.
template <class Rhs>
SpinTrajectory integrate_spin(const SpinState& state0, Rhs&& rhs, const Vec3& axis, double dt,
                              std::size_t n_steps, Scheme scheme = Scheme::rk4) {
  if (!(dt > 0.0)) throw std::invalid_argument("integrate_spin: dt must be positive");
  if (n_steps < 1) throw std::invalid_argument("integrate_spin: n_steps must be >= 1");
  const Vec3 ref = norm(axis) > 0.0 ? axis : Vec3{0.0, 0.0, 1.0};

  auto sample = [&](double t, const Vec3& S) {
    return SpinSample{t, S, angle_between(S, ref), norm(S)};
  };

  SpinTrajectory out;
  out.reserve(n_steps + 1);
  std::array<double, 3> x{state0.S[0], state0.S[1], state0.S[2]};
  double t = state0.t;
  out.push_back(sample(t, state0.S));

  auto sys = [&](const std::array<double, 3>& s, std::array<double, 3>& ds, double time) {
    const Vec3 d = rhs(Vec3{s[0], s[1], s[2]}, time);
    ds = d.c;
  };

  for (std::size_t n = 1; n <= n_steps; ++n) {
    advance(sys, x, t, dt, scheme);
    if (!all_finite(x)) throw NumericalFailure("integrate_spin: non-finite spin", n);
    t = state0.t + static_cast<double>(n) * dt;
    out.push_back(sample(t, Vec3{x[0], x[1], x[2]}));
  }
  return out;
}

/// Integrates the full right-hand side (precession + alignment) at fixed p and x.
inline SpinTrajectory integrate_spin(const SpinState& state0, const FieldConfig& fields,
                                     const ParticleParams& params, double dt, std::size_t n_steps,
                                     Scheme scheme = Scheme::rk4) {
  params.validate();
  auto rhs = [&](const Vec3& S, double) { return spin_rhs_total(S, fields, state0.p, params, state0.x); };
  return integrate_spin(state0, rhs, fields.B, dt, n_steps, scheme);
}

// ---------------------------------------------------------------------------
// Hamiltonians, evaluated with A = 0.

struct EnergyTerms {
  double rest = 0.0;
  double kinetic = 0.0;     ///< p^2 / 2m
  double potential = 0.0;   ///< e A^0
  double spin_field = 0.0;  ///< -(e/mc) (S, B)
  double spin_orbit = 0.0;  ///< -(e/mc) k (S, [E, p]), k = 1/2mc (Pauli) or 1/mc (covariant)

  double total() const { return rest + kinetic + potential + spin_field + spin_orbit; }
};

namespace detail {
inline EnergyTerms energy_terms(const SpinState& st, const FieldConfig& fields, const ParticleParams& params,
                                double spin_orbit_factor, bool with_rest) {
  const double mc = params.m * params.c;
  const Vec3 E = fields.electric_field(st.x);
  EnergyTerms h;
  h.rest = with_rest ? params.m * params.c * params.c : 0.0;
  h.kinetic = dot(st.p, st.p) / (2.0 * params.m);
  h.potential = params.e * fields.scalar_potential(st.x);
  h.spin_field = -(params.e / mc) * params.mu * dot(st.S, fields.B);
  h.spin_orbit = -(params.e / mc) * params.mu * (spin_orbit_factor / mc) * dot(st.S, cross(E, st.p));
  return h;
}
}  // namespace detail

inline EnergyTerms pauli_terms(const SpinState& st, const FieldConfig& fields, const ParticleParams& params) {
  return detail::energy_terms(st, fields, params, 0.5, false);
}

/// 1/c^2 expansion of the covariant Hamiltonian (rest energy included).
inline EnergyTerms covariant_terms(const SpinState& st, const FieldConfig& fields, const ParticleParams& params) {
  return detail::energy_terms(st, fields, params, 1.0, true);
}

inline double pauli_energy(const SpinState& st, const FieldConfig& fields, const ParticleParams& params) {
  return pauli_terms(st, fields, params).total();
}

inline double covariant_energy_expanded(const SpinState& st, const FieldConfig& fields,
                                        const ParticleParams& params) {
  return covariant_terms(st, fields, params).total();
}

/// Ratio of the (S, [E, p]) coefficients, Pauli over covariant, isolated by
/// zeroing B. Undefined (NaN) when the term itself vanishes.
inline double spin_orbit_ratio(SpinState st, FieldConfig fields, const ParticleParams& params) {
  fields.B = {};
  const double pauli = pauli_terms(st, fields, params).spin_orbit;
  const double cov = covariant_terms(st, fields, params).spin_orbit;
  if (cov == 0.0) return std::numeric_limits<double>::quiet_NaN();
  return pauli / cov;
}

}  // namespace spindyn::spin

#endif  // SPINDYN_SPIN_DYNAMICS_HPP
