#ifndef SPINDYN_TENSOR_HPP
#define SPINDYN_TENSOR_HPP

// Small exact linear algebra: 3-vectors, 3x3 matrices, Minkowski 4-vectors
// with signature (-,+,+,+) and antisymmetric rank-2 spin tensors.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <cstddef>
#include <stdexcept>

namespace spindyn {

struct Vec3 {
  std::array<double, 3> c{0.0, 0.0, 0.0};

  constexpr Vec3() = default;
  constexpr Vec3(double x, double y, double z) : c{x, y, z} {}

  constexpr double& operator[](std::size_t i) { return c[i]; }
  constexpr double operator[](std::size_t i) const { return c[i]; }

  constexpr double x() const { return c[0]; }
  constexpr double y() const { return c[1]; }
  constexpr double z() const { return c[2]; }

  constexpr Vec3& operator+=(const Vec3& o) {
    for (std::size_t i = 0; i < 3; ++i) c[i] += o.c[i];
    return *this;
  }
  constexpr Vec3& operator-=(const Vec3& o) {
    for (std::size_t i = 0; i < 3; ++i) c[i] -= o.c[i];
    return *this;
  }
  constexpr Vec3& operator*=(double s) {
    for (auto& v : c) v *= s;
    return *this;
  }

  friend constexpr bool operator==(const Vec3&, const Vec3&) = default;
};

constexpr Vec3 operator+(Vec3 a, const Vec3& b) { return a += b; }
constexpr Vec3 operator-(Vec3 a, const Vec3& b) { return a -= b; }
constexpr Vec3 operator-(const Vec3& a) { return {-a[0], -a[1], -a[2]}; }
constexpr Vec3 operator*(double s, Vec3 a) { return a *= s; }
constexpr Vec3 operator*(Vec3 a, double s) { return a *= s; }
constexpr Vec3 operator/(Vec3 a, double s) { return a *= (1.0 / s); }

constexpr double dot(const Vec3& a, const Vec3& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

/// Right-handed cross product [a, b].
constexpr Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2],
          a[0] * b[1] - a[1] * b[0]};
}

/// max that keeps a NaN once seen, so a broken sample cannot hide in a fold.
inline double worst_of(double a, double b) {
  if (std::isnan(a) || std::isnan(b)) return std::numeric_limits<double>::quiet_NaN();
  return std::max(a, b);
}

inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }

inline Vec3 normalized(const Vec3& a) {
  const double n = norm(a);
  if (!(n > 0.0)) throw std::domain_error("normalized: zero vector");
  return a / n;
}

/// Angle between two nonzero vectors, in [0, pi].
inline double angle_between(const Vec3& a, const Vec3& b) {
  // atan2 form stays accurate near 0 and pi
  return std::atan2(norm(cross(a, b)), dot(a, b));
}

/// Levi-Civita symbol on {0,1,2}.
constexpr int levi_civita(std::size_t i, std::size_t j, std::size_t k) {
  if (i == j || j == k || i == k) return 0;
  // even permutations of (0,1,2)
  if ((i == 0 && j == 1) || (i == 1 && j == 2) || (i == 2 && j == 0)) return 1;
  return -1;
}

constexpr double kronecker(std::size_t i, std::size_t j) { return i == j ? 1.0 : 0.0; }

struct Mat3 {
  std::array<std::array<double, 3>, 3> m{};

  constexpr double& operator()(std::size_t i, std::size_t j) { return m[i][j]; }
  constexpr double operator()(std::size_t i, std::size_t j) const { return m[i][j]; }

  static constexpr Mat3 identity() {
    Mat3 r;
    for (std::size_t i = 0; i < 3; ++i) r(i, i) = 1.0;
    return r;
  }

  constexpr double trace() const { return m[0][0] + m[1][1] + m[2][2]; }

  friend constexpr bool operator==(const Mat3&, const Mat3&) = default;
};

constexpr Vec3 operator*(const Mat3& a, const Vec3& v) {
  Vec3 r;
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) r[i] += a(i, j) * v[j];
  return r;
}

constexpr Mat3 operator*(const Mat3& a, const Mat3& b) {
  Mat3 r;
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j)
      for (std::size_t k = 0; k < 3; ++k) r(i, j) += a(i, k) * b(k, j);
  return r;
}

/// N^{ij} = delta^{ij} - v^i v^j / |v|^2, the projector on the plane orthogonal to v.
inline Mat3 projector(const Vec3& v) {
  const double n2 = dot(v, v);
  if (!(n2 > 0.0)) throw std::domain_error("projector: zero vector");
  Mat3 r = Mat3::identity();
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) r(i, j) -= v[i] * v[j] / n2;
  return r;
}

// ---------------------------------------------------------------------------
// Minkowski space, signature (-,+,+,+), x^0 = ct.

using Vec4 = std::array<double, 4>;

/// Index position tag for 4-vectors.
enum class Index { upper, lower };

template <Index I>
struct FourVector {
  Vec4 v{};
  constexpr double& operator[](std::size_t i) { return v[i]; }
  constexpr double operator[](std::size_t i) const { return v[i]; }
};

using Contravariant = FourVector<Index::upper>;
using Covariant = FourVector<Index::lower>;

constexpr double minkowski_eta(std::size_t mu, std::size_t nu) {
  if (mu != nu) return 0.0;
  return mu == 0 ? -1.0 : 1.0;
}

constexpr Covariant lower(const Contravariant& a) {
  return Covariant{{-a[0], a[1], a[2], a[3]}};
}

constexpr Contravariant raise(const Covariant& a) {
  return Contravariant{{-a[0], a[1], a[2], a[3]}};
}

constexpr double contract(const Contravariant& a, const Covariant& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2] + a[3] * b[3];
}

/// eta_{mu nu} a^mu b^nu
constexpr double minkowski_dot(const Contravariant& a, const Contravariant& b) {
  return contract(a, lower(b));
}

// ---------------------------------------------------------------------------

/// Antisymmetric rank-2 tensor S^{mu nu} = -S^{nu mu}. Only the six
/// independent components are stored, ordered (01, 02, 03, 12, 13, 23).
class AntisymTensor4 {
 public:
  static constexpr std::size_t size = 6;

  constexpr AntisymTensor4() = default;
  constexpr explicit AntisymTensor4(const std::array<double, 6>& comps) : comps_(comps) {}

  /// Flat index of the pair mu < nu.
  static constexpr std::size_t slot(std::size_t mu, std::size_t nu) {
    constexpr std::size_t table[4][4] = {
        {6, 0, 1, 2}, {0, 6, 3, 4}, {1, 3, 6, 5}, {2, 4, 5, 6}};
    return table[mu][nu];
  }

  constexpr double operator()(std::size_t mu, std::size_t nu) const {
    if (mu == nu) return 0.0;
    const double v = comps_[slot(mu, nu)];
    return mu < nu ? v : -v;
  }

  /// Assigns S^{mu nu} (and implicitly S^{nu mu} = -value). mu != nu.
  constexpr void set(std::size_t mu, std::size_t nu, double value) {
    if (mu == nu) throw std::invalid_argument("AntisymTensor4::set: diagonal component");
    comps_[slot(mu, nu)] = mu < nu ? value : -value;
  }

  constexpr const std::array<double, 6>& components() const { return comps_; }
  constexpr std::array<double, 6>& components() { return comps_; }

  friend constexpr bool operator==(const AntisymTensor4&, const AntisymTensor4&) = default;

 private:
  std::array<double, 6> comps_{};
};

/// S^i = 1/4 eps^{ijk} S^{jk}, spatial indices 1..3 of the tensor.
constexpr Vec3 spin_tensor_to_vector(const AntisymTensor4& s) {
  Vec3 r;
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j)
      for (std::size_t k = 0; k < 3; ++k)
        r[i] += 0.25 * levi_civita(i, j, k) * s(j + 1, k + 1);
  return r;
}

/// Inverse of spin_tensor_to_vector on the spatial block: S^{jk} = 2 eps^{jki} S^i.
/// Boost components S^{0i} are zero.
constexpr AntisymTensor4 vector_to_spin_tensor(const Vec3& s) {
  AntisymTensor4 t;
  t.set(1, 2, 2.0 * s[2]);
  t.set(1, 3, -2.0 * s[1]);
  t.set(2, 3, 2.0 * s[0]);
  return t;
}

/// S^{mu nu} S_{mu nu} in flat space.
constexpr double minkowski_square(const AntisymTensor4& s) {
  double r = 0.0;
  for (std::size_t mu = 0; mu < 4; ++mu)
    for (std::size_t nu = 0; nu < 4; ++nu)
      r += s(mu, nu) * s(mu, nu) * minkowski_eta(mu, mu) * minkowski_eta(nu, nu);
  return r;
}

}  // namespace spindyn

#endif  // SPINDYN_TENSOR_HPP
