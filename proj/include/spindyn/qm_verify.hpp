#ifndef SPINDYN_QM_VERIFY_HPP
#define SPINDYN_QM_VERIFY_HPP

// Fixed-momentum operator identities of the positive-energy quantum theory
// and of the Dirac equation, evaluated as small dense complex matrices.
// Residuals are relative: max entry of (lhs - rhs) over max(1, max entry of rhs).

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "spindyn/complex_matrix.hpp"
#include "spindyn/tensor.hpp"

namespace spindyn::qm {

using namespace std::complex_literals;

struct QmParams {
  double hbar = 1.0;
  double m = 1.0;
  double c = 1.0;

  double mc() const { return m * c; }

  void validate() const {
    if (!(hbar > 0.0) || !(m > 0.0) || !(c > 0.0) || !std::isfinite(hbar * m * c))
      throw std::invalid_argument("QmParams: hbar, m and c must be positive and finite");
  }
};

/// Momentum with p^0 = +sqrt(p^2 + (mc)^2); p_0 = -p^0.
struct OnShellMomentum {
  Vec3 p{};
  double p0 = 0.0;
  double mc = 1.0;

  static OnShellMomentum make(const Vec3& p, const QmParams& params) {
    const double mc = params.mc();
    return {p, std::sqrt(dot(p, p) + mc * mc), mc};
  }

  /// p_mu p^mu + (mc)^2 relative to (mc)^2.
  double shell_defect() const { return (-p0 * p0 + dot(p, p) + mc * mc) / (mc * mc); }
};

template <std::size_t N>
double relative_residual(const ComplexMat<N>& lhs, const ComplexMat<N>& rhs) {
  return max_norm(lhs - rhs) / std::max({1.0, max_norm(rhs), max_norm(lhs)});
}

template <std::size_t N>
double relative_residual(const ComplexVec<N>& lhs, const ComplexVec<N>& rhs) {
  ComplexVec<N> d{};
  for (std::size_t i = 0; i < N; ++i) d[i] = lhs[i] - rhs[i];
  return max_norm(d) / std::max({1.0, max_norm(rhs), max_norm(lhs)});
}

/// sigma^mu p_mu = -p^0 + (sigma, p)
inline Mat2c sigma_p(const Vec3& p, double p0) { return sigma_dot(p) - p0 * Mat2c::identity(); }

/// sigmabar^mu p_mu = p^0 + (sigma, p)
inline Mat2c sigma_bar_p(const Vec3& p, double p0) { return sigma_dot(p) + p0 * Mat2c::identity(); }

/// H = c alpha^i p_i + m c^2 beta
inline Mat4c dirac_hamiltonian(const Vec3& p, const QmParams& params) {
  const auto d = dirac_constants();
  Mat4c h = params.m * params.c * params.c * d.beta;
  for (std::size_t i = 0; i < 3; ++i) h += (params.c * p[i]) * d.alpha[i];
  return h;
}

// ---------------------------------------------------------------------------

struct HeisenbergResiduals {
  double alpha = 0.0;         ///< [alpha_i, H] = 2(c p_i - H alpha_i), max over i
  double beta = 0.0;          ///< [beta, H] = -2c (alpha, p) beta
  double beta_literal = 0.0;  ///< same with an extra + m c^2 on the right, as sometimes quoted
};

inline HeisenbergResiduals heisenberg_identity(const Vec3& p, const QmParams& params) {
  const auto d = dirac_constants();
  const Mat4c H = dirac_hamiltonian(p, params);
  const Mat4c one = Mat4c::identity();
  HeisenbergResiduals r;
  for (std::size_t i = 0; i < 3; ++i) {
    const Mat4c rhs = 2.0 * ((params.c * p[i]) * one - H * d.alpha[i]);
    r.alpha = std::max(r.alpha, relative_residual(commutator(d.alpha[i], H), rhs));
  }
  Mat4c ap = Mat4c::zero();
  for (std::size_t i = 0; i < 3; ++i) ap += p[i] * d.alpha[i];
  const Mat4c beta_rhs = (-2.0 * params.c) * (ap * d.beta);
  const Mat4c lhs = commutator(d.beta, H);
  r.beta = relative_residual(lhs, beta_rhs);
  r.beta_literal = relative_residual(lhs, beta_rhs + (params.m * params.c * params.c) * one);
  return r;
}

/// (sigma p)(sigmabar p) + (mc)^2 for arbitrary (p, p0); zero on the mass shell.
inline double kg_residual(const Vec3& p, double p0, double mc) {
  const Mat2c lhs = sigma_p(p, p0) * sigma_bar_p(p, p0);
  return relative_residual(lhs, -(mc * mc) * Mat2c::identity());
}

/// Absolute version, |p^2 + (mc)^2| off shell.
inline double kg_defect(const Vec3& p, double p0, double mc) {
  const Mat2c lhs = sigma_p(p, p0) * sigma_bar_p(p, p0) + (mc * mc) * Mat2c::identity();
  return max_norm(lhs);
}

inline double kg_factorization(const OnShellMomentum& k) { return kg_residual(k.p, k.p0, k.mc); }

// ---------------------------------------------------------------------------

struct VOperator {
  Mat2c V;
  Mat2c Vinv;
};

/// V = (1/mc) sqrt(p0/(p0+mc)) [(sigmabar p) + mc],
/// V^{-1} = [mc - (sigma p)] / (2 sqrt(p0 (p0+mc))).
inline VOperator v_operator(const OnShellMomentum& k) {
  const Mat2c one = Mat2c::identity();
  VOperator v;
  v.V = (std::sqrt(k.p0 / (k.p0 + k.mc)) / k.mc) * (sigma_bar_p(k.p, k.p0) + k.mc * one);
  v.Vinv = (1.0 / (2.0 * std::sqrt(k.p0 * (k.p0 + k.mc)))) * (k.mc * one - sigma_p(k.p, k.p0));
  return v;
}

inline double v_inverse_residual(const OnShellMomentum& k) {
  const VOperator v = v_operator(k);
  return std::max(relative_residual(v.V * v.Vinv, Mat2c::identity()),
                  relative_residual(v.Vinv * v.V, Mat2c::identity()));
}

/// V^dagger V against 1 + (sigmabar p)^dagger (sigmabar p) / (mc)^2.
inline double v_norm_residual(const OnShellMomentum& k) {
  const VOperator v = v_operator(k);
  const Mat2c sb = sigma_bar_p(k.p, k.p0);
  const Mat2c rhs = Mat2c::identity() + (1.0 / (k.mc * k.mc)) * (adjoint(sb) * sb);
  return relative_residual(adjoint(v.V) * v.V, rhs);
}

// ---------------------------------------------------------------------------

using SpinOperator = std::array<Mat2c, 3>;

/// S^i = (hbar/2mc) (p0 sigma^i - (p, sigma) p^i / (p0 + mc))
inline SpinOperator pryce_spin(const OnShellMomentum& k, const QmParams& params) {
  const auto s = pauli();
  const Mat2c ps = sigma_dot(k.p);
  const double pref = params.hbar / (2.0 * k.mc);
  SpinOperator out;
  for (std::size_t i = 0; i < 3; ++i) out[i] = pref * (k.p0 * s[i] - (k.p[i] / (k.p0 + k.mc)) * ps);
  return out;
}

/// max over i < j of [S^i, S^j] - i hbar eps^{ijk} S^k
inline double su2_residual(const SpinOperator& S, double hbar) {
  double r = 0.0;
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = i + 1; j < 3; ++j) {
      const std::size_t k = 3 - i - j;
      const Mat2c rhs = (1.0i * hbar * static_cast<double>(levi_civita(i, j, k))) * S[k];
      r = std::max(r, relative_residual(commutator(S[i], S[j]), rhs));
    }
  return r;
}

inline Mat2c square(const SpinOperator& S) { return S[0] * S[0] + S[1] * S[1] + S[2] * S[2]; }

/// S^2 against 3 hbar^2 / 4
inline double casimir_residual(const SpinOperator& S, double hbar) {
  return relative_residual(square(S), (0.75 * hbar * hbar) * Mat2c::identity());
}

/// S^2 - (p x S)^2 / p0^2 against 3 hbar^2 / 4; the operator image of the
/// invariant S^{mu nu} S_{mu nu} = 8 alpha.
inline double covariant_casimir_residual(const SpinOperator& S, const OnShellMomentum& k, double hbar) {
  std::array<Mat2c, 3> pxS;
  for (std::size_t i = 0; i < 3; ++i) {
    const std::size_t j = (i + 1) % 3, l = (i + 2) % 3;
    pxS[i] = k.p[j] * S[l] - k.p[l] * S[j];
  }
  const Mat2c lhs = square(S) - (1.0 / (k.p0 * k.p0)) * square(pxS);
  return relative_residual(lhs, (0.75 * hbar * hbar) * Mat2c::identity());
}

// ---------------------------------------------------------------------------

/// Matrix part of the position operator, A^i = hbar eps^{ijk} sigma_j p_k / (2mc (p0 + mc)).
inline SpinOperator position_correction(const Vec3& p, const QmParams& params) {
  const OnShellMomentum k = OnShellMomentum::make(p, params);
  const auto s = pauli();
  const double pref = params.hbar / (2.0 * k.mc * (k.p0 + k.mc));
  SpinOperator A;
  for (std::size_t i = 0; i < 3; ++i) {
    A[i] = Mat2c::zero();
    for (std::size_t j = 0; j < 3; ++j)
      for (std::size_t l = 0; l < 3; ++l) {
        const int e = levi_civita(i, j, l);
        if (e != 0) A[i] += (pref * e * p[l]) * s[j];
      }
  }
  return A;
}

/// Leading-order form -(hbar / 4(mc)^2) (p x sigma)^i.
inline SpinOperator position_correction_leading(const Vec3& p, const QmParams& params) {
  const auto s = pauli();
  const double pref = -params.hbar / (4.0 * params.mc() * params.mc());
  SpinOperator A;
  for (std::size_t i = 0; i < 3; ++i) {
    const std::size_t j = (i + 1) % 3, l = (i + 2) % 3;
    A[i] = pref * (p[j] * s[l] - p[l] * s[j]);
  }
  return A;
}

/// Relative distance between the exact and leading-order coefficients.
inline double position_coefficient_deviation(const Vec3& p, const QmParams& params) {
  const SpinOperator a = position_correction(p, params);
  const SpinOperator b = position_correction_leading(p, params);
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < 3; ++i) {
    num = std::max(num, max_norm(a[i] - b[i]));
    den = std::max(den, max_norm(b[i]));
  }
  if (den == 0.0) return 0.0;
  return num / den;
}

struct PositionCommutator {
  std::array<std::array<Mat2c, 3>, 3> C{};       ///< [X^i, X^j]
  std::array<std::array<Mat2c, 3>, 3> target{};  ///< (i hbar/(mc)^2) eps^{ijk} S^k, S the Pryce spin at p
  std::array<std::array<Mat2c, 3>, 3> leading{};  ///< same with S = hbar sigma / 2
  double deviation = 0.0;          ///< relative distance C vs target
  double leading_deviation = 0.0;  ///< relative distance C vs leading
};

/// C^{ij} = i hbar (dA^j/dp_i - dA^i/dp_j) + [A^i, A^j], derivatives by
/// central differences with h = 1e-6 max(|p|, mc).
inline PositionCommutator pryce_position_commutator(const OnShellMomentum& k, const QmParams& params) {
  const double h = 1e-6 * std::max(norm(k.p), k.mc);
  std::array<SpinOperator, 3> dA;  // dA[i][j] = dA^j / dp_i
  for (std::size_t i = 0; i < 3; ++i) {
    Vec3 up = k.p, dn = k.p;
    up[i] += h;
    dn[i] -= h;
    const SpinOperator Au = position_correction(up, params);
    const SpinOperator Ad = position_correction(dn, params);
    for (std::size_t j = 0; j < 3; ++j) dA[i][j] = (1.0 / (2.0 * h)) * (Au[j] - Ad[j]);
  }
  const SpinOperator A = position_correction(k.p, params);
  const SpinOperator S = pryce_spin(k, params);
  const auto s = pauli();
  const double mc2 = k.mc * k.mc;

  PositionCommutator out;
  double dev = 0.0, lead = 0.0, scale = 0.0;
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) {
      out.C[i][j] = (1.0i * params.hbar) * (dA[i][j] - dA[j][i]) + commutator(A[i], A[j]);
      out.target[i][j] = Mat2c::zero();
      out.leading[i][j] = Mat2c::zero();
      for (std::size_t l = 0; l < 3; ++l) {
        const int e = levi_civita(i, j, l);
        if (e == 0) continue;
        const double sign = static_cast<double>(e);
        out.target[i][j] += (1.0i * (params.hbar * sign / mc2)) * S[l];
        out.leading[i][j] += (1.0i * (params.hbar * sign / mc2 * params.hbar / 2.0)) * s[l];
      }
      dev = std::max(dev, max_norm(out.C[i][j] - out.target[i][j]));
      lead = std::max(lead, max_norm(out.C[i][j] - out.leading[i][j]));
      scale = std::max(scale, max_norm(out.leading[i][j]));
    }
  out.deviation = dev / scale;
  out.leading_deviation = lead / scale;
  return out;
}

// ---------------------------------------------------------------------------

using Spinor2 = ComplexVec<2>;
using Spinor4 = ComplexVec<4>;

/// Psi_D[u] = ( (sigmabar p + mc) u, (sigmabar p - mc) u ) / (sqrt(2) mc)
inline Spinor4 dirac_from_weyl(const OnShellMomentum& k, const Spinor2& u) {
  const Mat2c sb = sigma_bar_p(k.p, k.p0);
  const Mat2c one = Mat2c::identity();
  const Spinor2 top = (sb + k.mc * one) * u;
  const Spinor2 bot = (sb - k.mc * one) * u;
  const double n = 1.0 / (std::sqrt(2.0) * k.mc);
  return {n * top[0], n * top[1], n * bot[0], n * bot[1]};
}

/// U_FW = (omega + mc + (gamma, p)) / sqrt(2 (omega + mc) omega), omega = p^0
inline Mat4c foldy_wouthuysen(const OnShellMomentum& k) {
  const auto d = dirac_constants();
  Mat4c u = (k.p0 + k.mc) * Mat4c::identity();
  for (std::size_t i = 0; i < 3; ++i) u += k.p[i] * d.gamma[i + 1];
  return (1.0 / std::sqrt(2.0 * (k.p0 + k.mc) * k.p0)) * u;
}

struct FwResiduals {
  double restriction = 0.0;  ///< U_FW Psi_D[u] against (V u, 0)
  double unitarity = 0.0;    ///< U_FW^dagger U_FW against 1
};

inline FwResiduals fw_restriction(const OnShellMomentum& k, const Spinor2& u) {
  const Mat4c U = foldy_wouthuysen(k);
  const Spinor4 lhs = U * dirac_from_weyl(k, u);
  const Spinor2 vu = v_operator(k).V * u;
  const Spinor4 rhs{vu[0], vu[1], 0.0, 0.0};
  FwResiduals r;
  r.restriction = relative_residual(lhs, rhs);
  r.unitarity = relative_residual(adjoint(U) * U, Mat4c::identity());
  return r;
}

// ---------------------------------------------------------------------------

struct CheckEntry {
  std::string name;
  double residual = 0.0;
  double tol = 0.0;
  bool pass = false;
};

inline void to_json(nlohmann::json& j, const CheckEntry& e) {
  j = nlohmann::json{{"name", e.name}, {"residual", e.residual}, {"tol", e.tol}, {"pass", e.pass}};
}

/// Named identity checks, each registered exactly once; a check's residual is
/// the maximum over all samples fed to it.
class CheckReport {
 public:
  void add(const std::string& name, double residual, double tol) {
    for (const auto& e : entries_)
      if (e.name == name) throw std::logic_error("CheckReport: duplicate check " + name);
    // NaN never passes
    entries_.push_back({name, residual, tol, residual <= tol});
  }

  const std::vector<CheckEntry>& entries() const& { return entries_; }
  std::vector<CheckEntry> entries() && { return std::move(entries_); }

  const CheckEntry& at(const std::string& name) const {
    for (const auto& e : entries_)
      if (e.name == name) return e;
    throw std::out_of_range("CheckReport: no check " + name);
  }

  bool all_pass() const {
    return std::all_of(entries_.begin(), entries_.end(), [](const CheckEntry& e) { return e.pass; });
  }

  void append(const CheckReport& other) {
    for (const auto& e : other.entries_) add(e.name, e.residual, e.tol);
  }

 private:
  std::vector<CheckEntry> entries_;
};

/// Per-sample residuals of every fixed-momentum identity.
struct IdentitySample {
  double heisenberg_alpha, heisenberg_beta, kg, v_inverse, v_norm, su2, casimir, covariant_casimir, fw_restriction,
      fw_unitarity;
};

inline IdentitySample evaluate_identities(const Vec3& p, const Spinor2& u, const QmParams& params) {
  const OnShellMomentum k = OnShellMomentum::make(p, params);
  const auto h = heisenberg_identity(p, params);
  const SpinOperator S = pryce_spin(k, params);
  const auto fw = fw_restriction(k, u);
  return {h.alpha,
          h.beta,
          kg_factorization(k),
          v_inverse_residual(k),
          v_norm_residual(k),
          su2_residual(S, params.hbar),
          casimir_residual(S, params.hbar),
          covariant_casimir_residual(S, k, params.hbar),
          fw.restriction,
          fw.unitarity};
}

inline constexpr double kIdentityTol = 1e-12;

/// Folds per-sample residuals (max) into a report, one row per identity.
inline CheckReport identity_report(const std::vector<IdentitySample>& samples, double tol = kIdentityTol) {
  IdentitySample m{};
  for (const auto& s : samples) {
    m.heisenberg_alpha = worst_of(m.heisenberg_alpha, s.heisenberg_alpha);
    m.heisenberg_beta = worst_of(m.heisenberg_beta, s.heisenberg_beta);
    m.kg = worst_of(m.kg, s.kg);
    m.v_inverse = worst_of(m.v_inverse, s.v_inverse);
    m.v_norm = worst_of(m.v_norm, s.v_norm);
    m.su2 = worst_of(m.su2, s.su2);
    m.casimir = worst_of(m.casimir, s.casimir);
    m.covariant_casimir = worst_of(m.covariant_casimir, s.covariant_casimir);
    m.fw_restriction = worst_of(m.fw_restriction, s.fw_restriction);
    m.fw_unitarity = worst_of(m.fw_unitarity, s.fw_unitarity);
  }
  CheckReport r;
  r.add("heisenberg_alpha", m.heisenberg_alpha, tol);
  r.add("heisenberg_beta", m.heisenberg_beta, tol);
  r.add("kg_factorization", m.kg, tol);
  r.add("v_inverse", m.v_inverse, tol);
  r.add("v_norm", m.v_norm, tol);
  r.add("pryce_spin_su2", m.su2, tol);
  r.add("pryce_spin_casimir", m.casimir, tol);
  r.add("pryce_spin_covariant_casimir", m.covariant_casimir, tol);
  r.add("fw_restriction", m.fw_restriction, tol);
  r.add("fw_unitarity", m.fw_unitarity, tol);
  return r;
}

}  // namespace spindyn::qm

#endif  // SPINDYN_QM_VERIFY_HPP
