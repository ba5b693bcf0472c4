#ifndef SPINDYN_BRACKETS_HPP
#define SPINDYN_BRACKETS_HPP

// Poisson structures on the spin phase space z = (x, p, S): structure
// functions {z^A, z^B}, Jacobi and Casimir residuals, Hamiltonian flows.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>

#include "spindyn/spin_dynamics.hpp"
#include "spindyn/tensor.hpp"

namespace spindyn::brackets {

inline constexpr std::size_t kDim = 9;
using PhaseVector = std::array<double, kDim>;

/// Coordinate labels: x^1..x^3, p^1..p^3, S^1..S^3.
enum class Coord : std::size_t { x1, x2, x3, p1, p2, p3, S1, S2, S3 };

inline constexpr std::size_t index(Coord c) { return static_cast<std::size_t>(c); }
inline constexpr Coord coord_at(std::size_t a) { return static_cast<Coord>(a); }
inline constexpr Coord x_coord(std::size_t i) { return static_cast<Coord>(i); }
inline constexpr Coord p_coord(std::size_t i) { return static_cast<Coord>(3 + i); }
inline constexpr Coord S_coord(std::size_t i) { return static_cast<Coord>(6 + i); }

inline std::string label(Coord c) {
  static const std::array<const char*, kDim> names = {"x1", "x2", "x3", "p1", "p2", "p3", "S1", "S2", "S3"};
  return names[index(c)];
}

struct PhasePoint {
  Vec3 x{};
  Vec3 p{};
  Vec3 S{};

  PhaseVector flat() const {
    return {x[0], x[1], x[2], p[0], p[1], p[2], S[0], S[1], S[2]};
  }
  static PhasePoint from_flat(const PhaseVector& z) {
    return {{z[0], z[1], z[2]}, {z[3], z[4], z[5]}, {z[6], z[7], z[8]}};
  }
};

/// A scalar function on phase space. The gradient is optional; central
/// differences are used when it is absent.
struct ScalarFunction {
  std::function<double(const PhasePoint&)> value;
  std::function<PhaseVector(const PhasePoint&)> gradient;
};

/// Central-difference step for coordinate a: 1e-6 times the coordinate scale.
inline double fd_step(double coordinate) { return 1e-6 * std::max(1.0, std::abs(coordinate)); }

inline PhaseVector numeric_gradient(const std::function<double(const PhasePoint&)>& f, const PhasePoint& z) {
  PhaseVector g{};
  const PhaseVector base = z.flat();
  for (std::size_t a = 0; a < kDim; ++a) {
    const double h = fd_step(base[a]);
    PhaseVector up = base, dn = base;
    up[a] += h;
    dn[a] -= h;
    // divide by the step actually taken after rounding
    g[a] = (f(PhasePoint::from_flat(up)) - f(PhasePoint::from_flat(dn))) / (up[a] - dn[a]);
  }
  return g;
}

inline PhaseVector gradient_of(const ScalarFunction& f, const PhasePoint& z) {
  return f.gradient ? f.gradient(z) : numeric_gradient(f.value, z);
}

/// The coordinate function z^A with its exact gradient.
inline ScalarFunction coordinate(Coord c) {
  const std::size_t a = index(c);
  return {[a](const PhasePoint& z) { return z.flat()[a]; },
          [a](const PhasePoint&) {
            PhaseVector g{};
            g[a] = 1.0;
            return g;
          }};
}

/// Table of structure functions {z^A, z^B}. One entry per unordered pair
/// A < B, so antisymmetry holds by construction; missing entries are zero.
class BracketTable {
 public:
  struct Entry {
    std::function<double(const PhasePoint&)> value;
    std::function<PhaseVector(const PhasePoint&)> gradient;  ///< optional
  };

  /// Stores {a, b} = f. Passing (b, a) stores -f.
  void set(Coord a, Coord b, Entry f) {
    const std::size_t i = index(a), j = index(b);
    if (i == j) throw std::invalid_argument("BracketTable::set: bracket of a coordinate with itself");
    if (i > j) {
      auto v = f.value;
      f.value = [v](const PhasePoint& z) { return -v(z); };
      if (f.gradient) {
        auto g = f.gradient;
        f.gradient = [g](const PhasePoint& z) {
          PhaseVector r = g(z);
          for (auto& x : r) x = -x;
          return r;
        };
      }
    }
    entries_[pair_slot(i, j)] = std::move(f);
  }

  double operator()(Coord a, Coord b, const PhasePoint& z) const {
    const std::size_t i = index(a), j = index(b);
    if (i == j) return 0.0;
    const auto& e = entries_[pair_slot(i, j)];
    if (!e) return 0.0;
    const double v = e->value(z);
    return i < j ? v : -v;
  }

  /// d/dz {a, b}: analytic when supplied, central differences otherwise.
  PhaseVector gradient(Coord a, Coord b, const PhasePoint& z) const {
    const std::size_t i = index(a), j = index(b);
    PhaseVector g{};
    if (i == j) return g;
    const auto& e = entries_[pair_slot(i, j)];
    if (!e) return g;
    g = e->gradient ? e->gradient(z) : numeric_gradient(e->value, z);
    if (i > j)
      for (auto& x : g) x = -x;
    return g;
  }

  bool has_analytic_gradients() const {
    return std::all_of(entries_.begin(), entries_.end(),
                       [](const std::optional<Entry>& e) { return !e || static_cast<bool>(e->gradient); });
  }

  /// Poisson tensor J^{AB}(z).
  std::array<PhaseVector, kDim> matrix(const PhasePoint& z) const {
    std::array<PhaseVector, kDim> J{};
    for (std::size_t a = 0; a < kDim; ++a)
      for (std::size_t b = 0; b < kDim; ++b) J[a][b] = (*this)(coord_at(a), coord_at(b), z);
    return J;
  }

 private:
  static std::size_t pair_slot(std::size_t i, std::size_t j) {
    if (i > j) std::swap(i, j);
    // row-major upper triangle without the diagonal
    return i * kDim - i * (i + 1) / 2 + (j - i - 1);
  }

  std::array<std::optional<Entry>, kDim*(kDim - 1) / 2> entries_{};
};

/// {S^i, S^j} = eps^{ijk} S^k, {x^i, x^j} = eps^{ijk} S^k / (mc)^2,
/// {x^i, p^j} = delta^{ij}; every other pair vanishes.
inline BracketTable standard_spin_table(const spin::ParticleParams& params) {
  const double mc2 = (params.m * params.c) * (params.m * params.c);
  BracketTable t;
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = i + 1; j < 3; ++j) {
      const std::size_t k = 3 - i - j;
      const double eps = levi_civita(i, j, k);
      PhaseVector gS{}, gx{};
      gS[index(S_coord(k))] = eps;
      gx[index(S_coord(k))] = eps / mc2;
      t.set(S_coord(i), S_coord(j),
            {[=](const PhasePoint& z) { return eps * z.S[k]; }, [=](const PhasePoint&) { return gS; }});
      t.set(x_coord(i), x_coord(j),
            {[=](const PhasePoint& z) { return eps * z.S[k] / mc2; }, [=](const PhasePoint&) { return gx; }});
    }
    t.set(x_coord(i), p_coord(i),
          {[](const PhasePoint&) { return 1.0; }, [](const PhasePoint&) { return PhaseVector{}; }});
  }
  return t;
}

/// {F, G}(z) = dF_A J^{AB} dG_B
inline double poisson_bracket(const BracketTable& table, const ScalarFunction& f, const ScalarFunction& g,
                              const PhasePoint& z) {
  const PhaseVector df = gradient_of(f, z);
  const PhaseVector dg = gradient_of(g, z);
  const auto J = table.matrix(z);
  double r = 0.0;
  for (std::size_t a = 0; a < kDim; ++a)
    for (std::size_t b = 0; b < kDim; ++b) r += df[a] * J[a][b] * dg[b];
  return r;
}

/// Tangent of the Hamiltonian flow, dz^A/dt = {z^A, z^B} dH/dz^B.
inline PhasePoint hamiltonian_flow(const BracketTable& table, const ScalarFunction& H, const PhasePoint& z) {
  const PhaseVector dH = gradient_of(H, z);
  const auto J = table.matrix(z);
  PhaseVector dz{};
  for (std::size_t a = 0; a < kDim; ++a)
    for (std::size_t b = 0; b < kDim; ++b) dz[a] += J[a][b] * dH[b];
  return PhasePoint::from_flat(dz);
}

enum class Derivatives { analytic, finite_difference };

/// |{A,{B,C}} + {B,{C,A}} + {C,{A,B}}| for coordinate (linear) functions.
/// The analytic route differentiates the structure functions through their
/// supplied gradients; the finite-difference route differentiates the inner
/// bracket as a function on phase space.
inline double jacobi_residual(const BracketTable& table, const PhasePoint& z, const ScalarFunction& A,
                              const ScalarFunction& B, const ScalarFunction& C,
                              Derivatives method = Derivatives::analytic) {
  auto inner_gradient = [&](const ScalarFunction& f, const ScalarFunction& g) -> PhaseVector {
    if (method == Derivatives::finite_difference || !table.has_analytic_gradients()) {
      return numeric_gradient([&](const PhasePoint& w) { return poisson_bracket(table, f, g, w); }, z);
    }
    const PhaseVector df = gradient_of(f, z);
    const PhaseVector dg = gradient_of(g, z);
    PhaseVector r{};
    for (std::size_t a = 0; a < kDim; ++a)
      for (std::size_t b = 0; b < kDim; ++b) {
        if (df[a] == 0.0 || dg[b] == 0.0) continue;
        const PhaseVector dJ = table.gradient(coord_at(a), coord_at(b), z);
        for (std::size_t d = 0; d < kDim; ++d) r[d] += df[a] * dJ[d] * dg[b];
      }
    return r;
  };
  auto outer = [&](const ScalarFunction& f, const PhaseVector& d_inner) {
    const PhaseVector df = gradient_of(f, z);
    const auto J = table.matrix(z);
    double r = 0.0;
    for (std::size_t a = 0; a < kDim; ++a)
      for (std::size_t b = 0; b < kDim; ++b) r += df[a] * J[a][b] * d_inner[b];
    return r;
  };
  const double sum = outer(A, inner_gradient(B, C)) + outer(B, inner_gradient(C, A)) + outer(C, inner_gradient(A, B));
  return std::abs(sum);
}

inline ScalarFunction spin_square() {
  return {[](const PhasePoint& z) { return dot(z.S, z.S); },
          [](const PhasePoint& z) {
            PhaseVector g{};
            for (std::size_t i = 0; i < 3; ++i) g[6 + i] = 2.0 * z.S[i];
            return g;
          }};
}

/// max_A |{z^A, S^2}|
inline double casimir_residual(const BracketTable& table, const PhasePoint& z,
                               Derivatives method = Derivatives::analytic) {
  ScalarFunction s2 = spin_square();
  if (method == Derivatives::finite_difference) s2.gradient = nullptr;
  double r = 0.0;
  for (std::size_t a = 0; a < kDim; ++a)
    r = std::max(r, std::abs(poisson_bracket(table, coordinate(coord_at(a)), s2, z)));
  return r;
}

// ---------------------------------------------------------------------------
// Library Hamiltonians.

/// Pauli Hamiltonian with A = 0. The gradient is analytic for a constant
/// electric field and numerical in Coulomb mode.
inline ScalarFunction pauli_hamiltonian(const spin::FieldConfig& fields, const spin::ParticleParams& params) {
  ScalarFunction H;
  H.value = [=](const PhasePoint& z) { return spin::pauli_energy({z.S, z.p, z.x, 0.0}, fields, params); };
  if (fields.mode == spin::FieldConfig::Electric::constant) {
    H.gradient = [=](const PhasePoint& z) {
      const double mc = params.m * params.c;
      const Vec3 E = fields.E;
      const Vec3 dx = -params.e * E;
      const Vec3 dp = z.p / params.m - (params.e * params.mu / (2.0 * mc * mc)) * cross(z.S, E);
      const Vec3 dS = params.mu * spin::precession_vector(fields, z.p, params);
      return PhasePoint{dx, dp, dS}.flat();
    };
  }
  return H;
}

inline ScalarFunction kinetic_hamiltonian(const spin::ParticleParams& params) {
  return {[=](const PhasePoint& z) { return dot(z.p, z.p) / (2.0 * params.m); },
          [=](const PhasePoint& z) { return PhasePoint{{}, z.p / params.m, {}}.flat(); }};
}

/// H = k (S, B)
inline ScalarFunction zeeman_hamiltonian(const Vec3& B, double k) {
  return {[=](const PhasePoint& z) { return k * dot(z.S, B); },
          [=](const PhasePoint&) { return PhasePoint{{}, {}, k * B}.flat(); }};
}

}  // namespace spindyn::brackets

#endif  // SPINDYN_BRACKETS_HPP
