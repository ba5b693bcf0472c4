#ifndef SPINDYN_SPACETIME_HPP
#define SPINDYN_SPACETIME_HPP

// Schwarzschild exterior in coordinates x = (ct, r, theta, phi), signature
// (-,+,+,+). Closed-form metric and Christoffel symbols; the Riemann tensor
// is built from central differences of the Christoffels, with the closed-form
// curvature kept as an independent cross-check.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>

#include "spindyn/tensor.hpp"

namespace spindyn::gr {

using Metric = std::array<std::array<double, 4>, 4>;
using Christoffel = std::array<std::array<std::array<double, 4>, 4>, 4>;  ///< [mu][alpha][beta], upper mu
using Riemann = std::array<std::array<std::array<std::array<double, 4>, 4>, 4>, 4>;  ///< all lower

enum Coordinate : std::size_t { T = 0, R = 1, TH = 2, PH = 3 };

class Schwarzschild {
 public:
  explicit Schwarzschild(double rs) : rs_(rs) {
    if (!(rs >= 0.0)) throw std::invalid_argument("Schwarzschild: negative radius");
  }

  double rs() const { return rs_; }
  bool flat() const { return rs_ == 0.0; }

  void check_exterior(const Vec4& x) const {
    if (!(x[R] > rs_)) throw std::domain_error("Schwarzschild: point at or inside the horizon");
  }

  void check_regular(const Vec4& x) const {
    check_exterior(x);
    if (std::abs(std::sin(x[TH])) < 1e-6) throw std::domain_error("Schwarzschild: too close to the polar axis");
  }

  /// g_{mu nu}; diagonal.
  Metric metric(const Vec4& x) const {
    const double r = x[R];
    const double f = 1.0 - rs_ / r;
    const double s = std::sin(x[TH]);
    Metric g{};
    g[T][T] = -f;
    g[R][R] = 1.0 / f;
    g[TH][TH] = r * r;
    g[PH][PH] = r * r * s * s;
    return g;
  }

  Metric inverse_metric(const Vec4& x) const {
    Metric g = metric(x);
    for (std::size_t m = 0; m < 4; ++m) g[m][m] = 1.0 / g[m][m];
    return g;
  }

  Christoffel christoffel(const Vec4& x) const {
    const double r = x[R];
    const double th = x[TH];
    const double s = std::sin(th);
    const double c = std::cos(th);
    const double f = 1.0 - rs_ / r;
    Christoffel G{};
    auto sym = [&G](std::size_t m, std::size_t a, std::size_t b, double v) {
      G[m][a][b] = v;
      G[m][b][a] = v;
    };
    sym(T, T, R, rs_ / (2.0 * r * r * f));
    sym(R, T, T, rs_ * f / (2.0 * r * r));
    sym(R, R, R, -rs_ / (2.0 * r * r * f));
    sym(R, TH, TH, -r * f);
    sym(R, PH, PH, -r * f * s * s);
    sym(TH, R, TH, 1.0 / r);
    sym(TH, PH, PH, -s * c);
    sym(PH, R, PH, 1.0 / r);
    sym(PH, TH, PH, c / s);
    return G;
  }

  /// Central-difference step for coordinate a at x.
  static double step(std::size_t a, const Vec4& x) {
    if (a == R) return 1e-6 * x[R];
    if (a == TH) return 1e-6;
    return 1e-6 * std::max(1.0, std::abs(x[a]));
  }

  /// R_{rho sigma mu nu} from R^rho_{sigma mu nu} = d_mu G^rho_{nu sigma}
  /// - d_nu G^rho_{mu sigma} + G^rho_{mu l} G^l_{nu sigma} - G^rho_{nu l} G^l_{mu sigma},
  /// derivatives by central differences.
  Riemann riemann(const Vec4& x) const {
    check_regular(x);
    std::array<Christoffel, 4> dG{};  // dG[a] = d_a Gamma
    for (std::size_t a = 0; a < 4; ++a) {
      const double h = step(a, x);
      Vec4 up = x, dn = x;
      up[a] += h;
      dn[a] -= h;
      const Christoffel Gu = christoffel(up);
      const Christoffel Gd = christoffel(dn);
      for (std::size_t m = 0; m < 4; ++m)
        for (std::size_t i = 0; i < 4; ++i)
          for (std::size_t j = 0; j < 4; ++j) dG[a][m][i][j] = (Gu[m][i][j] - Gd[m][i][j]) / (2.0 * h);
    }
    const Christoffel G = christoffel(x);
    const Metric g = metric(x);
    Riemann out{};
    for (std::size_t rho = 0; rho < 4; ++rho)
      for (std::size_t sg = 0; sg < 4; ++sg)
        for (std::size_t mu = 0; mu < 4; ++mu)
          for (std::size_t nu = 0; nu < 4; ++nu) {
            double v = dG[mu][rho][nu][sg] - dG[nu][rho][mu][sg];
            for (std::size_t l = 0; l < 4; ++l) v += G[rho][mu][l] * G[l][nu][sg] - G[rho][nu][l] * G[l][mu][sg];
            out[rho][sg][mu][nu] = v;  // still upper rho
          }
    // lower the first index; the metric is diagonal
    for (std::size_t rho = 0; rho < 4; ++rho)
      for (auto& a : out[rho])
        for (auto& b : a)
          for (auto& v : b) v *= g[rho][rho];
    // differencing only preserves the antisymmetry of the second pair exactly
    for (std::size_t rho = 0; rho < 4; ++rho)
      for (std::size_t sg = rho; sg < 4; ++sg)
        for (std::size_t mu = 0; mu < 4; ++mu)
          for (std::size_t nu = 0; nu < 4; ++nu) {
            const double v = 0.5 * (out[rho][sg][mu][nu] - out[sg][rho][mu][nu]);
            out[rho][sg][mu][nu] = v;
            out[sg][rho][mu][nu] = -v;
          }
    return out;
  }

  /// Closed-form Schwarzschild curvature, all indices lower.
  Riemann riemann_exact(const Vec4& x) const {
    check_regular(x);
    const double r = x[R];
    const double s2 = std::sin(x[TH]) * std::sin(x[TH]);
    const double f = 1.0 - rs_ / r;
    Riemann out{};
    auto put = [&out](std::size_t a, std::size_t b, std::size_t c, std::size_t d, double v) {
      out[a][b][c][d] = v;
      out[b][a][c][d] = -v;
      out[a][b][d][c] = -v;
      out[b][a][d][c] = v;
      out[c][d][a][b] = v;
      out[d][c][a][b] = -v;
      out[c][d][b][a] = -v;
      out[d][c][b][a] = v;
    };
    put(T, R, T, R, -rs_ / (r * r * r));
    put(T, TH, T, TH, f * rs_ / (2.0 * r));
    put(T, PH, T, PH, f * rs_ * s2 / (2.0 * r));
    put(R, TH, R, TH, -rs_ / (2.0 * r * f));
    put(R, PH, R, PH, -rs_ * s2 / (2.0 * r * f));
    put(TH, PH, TH, PH, rs_ * r * s2);
    return out;
  }

  /// R_{mu nu a b} R^{mu nu a b}
  double kretschmann(const Riemann& Rm, const Vec4& x) const {
    const Metric gi = inverse_metric(x);
    double k = 0.0;
    for (std::size_t a = 0; a < 4; ++a)
      for (std::size_t b = 0; b < 4; ++b)
        for (std::size_t c = 0; c < 4; ++c)
          for (std::size_t d = 0; d < 4; ++d)
            k += Rm[a][b][c][d] * Rm[a][b][c][d] * gi[a][a] * gi[b][b] * gi[c][c] * gi[d][d];
    return k;
  }

  /// Closed-form invariant 12 rs^2 / r^6.
  double kretschmann_exact(double r) const { return 12.0 * rs_ * rs_ / std::pow(r, 6); }

 private:
  double rs_;
};

/// g_{mu nu} a^mu b^nu for a diagonal metric.
inline double metric_dot(const Metric& g, const Vec4& a, const Vec4& b) {
  double s = 0.0;
  for (std::size_t m = 0; m < 4; ++m) s += g[m][m] * a[m] * b[m];
  return s;
}

/// -Gamma^mu_{a b} u^a w^b
inline Vec4 connection_term(const Christoffel& G, const Vec4& u, const Vec4& w) {
  Vec4 out{};
  for (std::size_t m = 0; m < 4; ++m)
    for (std::size_t a = 0; a < 4; ++a) {
      if (u[a] == 0.0) continue;
      for (std::size_t b = 0; b < 4; ++b) out[m] -= G[m][a][b] * u[a] * w[b];
    }
  return out;
}

}  // namespace spindyn::gr

#endif  // SPINDYN_SPACETIME_HPP
