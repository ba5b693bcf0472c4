#ifndef SPINDYN_COMPLEX_MATRIX_HPP
#define SPINDYN_COMPLEX_MATRIX_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>

#include "spindyn/tensor.hpp"

namespace spindyn {

using cplx = std::complex<double>;

/// Dense complex N x N matrix, row-major.
template <std::size_t N>
struct ComplexMat {
  std::array<cplx, N * N> a{};

  constexpr cplx& operator()(std::size_t i, std::size_t j) { return a[i * N + j]; }
  constexpr const cplx& operator()(std::size_t i, std::size_t j) const { return a[i * N + j]; }

  static ComplexMat identity() {
    ComplexMat r;
    for (std::size_t i = 0; i < N; ++i) r(i, i) = 1.0;
    return r;
  }

  static ComplexMat zero() { return ComplexMat{}; }

  ComplexMat& operator+=(const ComplexMat& o) {
    for (std::size_t k = 0; k < N * N; ++k) a[k] += o.a[k];
    return *this;
  }
  ComplexMat& operator-=(const ComplexMat& o) {
    for (std::size_t k = 0; k < N * N; ++k) a[k] -= o.a[k];
    return *this;
  }
  ComplexMat& operator*=(cplx s) {
    for (auto& v : a) v *= s;
    return *this;
  }
};

template <std::size_t N>
ComplexMat<N> operator+(ComplexMat<N> x, const ComplexMat<N>& y) { return x += y; }
template <std::size_t N>
ComplexMat<N> operator-(ComplexMat<N> x, const ComplexMat<N>& y) { return x -= y; }
template <std::size_t N>
ComplexMat<N> operator-(ComplexMat<N> x) { return x *= -1.0; }
template <std::size_t N>
ComplexMat<N> operator*(cplx s, ComplexMat<N> x) { return x *= s; }
template <std::size_t N>
ComplexMat<N> operator*(ComplexMat<N> x, cplx s) { return x *= s; }
template <std::size_t N>
ComplexMat<N> operator*(double s, ComplexMat<N> x) { return x *= s; }

template <std::size_t N>
ComplexMat<N> operator*(const ComplexMat<N>& x, const ComplexMat<N>& y) {
  ComplexMat<N> r;
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t k = 0; k < N; ++k) {
      const cplx xik = x(i, k);
      for (std::size_t j = 0; j < N; ++j) r(i, j) += xik * y(k, j);
    }
  return r;
}

template <std::size_t N>
using ComplexVec = std::array<cplx, N>;

template <std::size_t N>
ComplexVec<N> operator*(const ComplexMat<N>& x, const ComplexVec<N>& v) {
  ComplexVec<N> r{};
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j) r[i] += x(i, j) * v[j];
  return r;
}

template <std::size_t N>
ComplexMat<N> adjoint(const ComplexMat<N>& x) {
  ComplexMat<N> r;
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j) r(i, j) = std::conj(x(j, i));
  return r;
}

template <std::size_t N>
ComplexMat<N> commutator(const ComplexMat<N>& x, const ComplexMat<N>& y) {
  return x * y - y * x;
}

template <std::size_t N>
ComplexMat<N> anticommutator(const ComplexMat<N>& x, const ComplexMat<N>& y) {
  return x * y + y * x;
}

/// Largest entry modulus.
template <std::size_t N>
double max_norm(const ComplexMat<N>& x) {
  double r = 0.0;
  for (const auto& v : x.a) r = std::max(r, std::abs(v));
  return r;
}

template <std::size_t N>
double max_norm(const ComplexVec<N>& v) {
  double r = 0.0;
  for (const auto& z : v) r = std::max(r, std::abs(z));
  return r;
}

template <std::size_t N>
cplx inner(const ComplexVec<N>& u, const ComplexVec<N>& v) {
  cplx r{};
  for (std::size_t i = 0; i < N; ++i) r += std::conj(u[i]) * v[i];
  return r;
}

/// 2x2 blocks assembled into a 4x4 matrix [[a, b], [c, d]].
inline ComplexMat<4> block(const ComplexMat<2>& a, const ComplexMat<2>& b,
                           const ComplexMat<2>& c, const ComplexMat<2>& d) {
  ComplexMat<4> r;
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) {
      r(i, j) = a(i, j);
      r(i, j + 2) = b(i, j);
      r(i + 2, j) = c(i, j);
      r(i + 2, j + 2) = d(i, j);
    }
  return r;
}

using Mat2c = ComplexMat<2>;
using Mat4c = ComplexMat<4>;

/// Pauli matrices sigma^1..3 (index 0..2).
inline std::array<Mat2c, 3> pauli() {
  using namespace std::complex_literals;
  Mat2c s1, s2, s3;
  s1(0, 1) = 1.0;
  s1(1, 0) = 1.0;
  s2(0, 1) = -1.0i;
  s2(1, 0) = 1.0i;
  s3(0, 0) = 1.0;
  s3(1, 1) = -1.0;
  return {s1, s2, s3};
}

/// (a, sigma) = a^i sigma^i
inline Mat2c sigma_dot(const Vec3& a) {
  const auto s = pauli();
  return a[0] * s[0] + a[1] * s[1] + a[2] * s[2];
}

/// Dirac-representation matrices and the two-component sigma^mu, sigmabar^mu.
///
/// Convention: beta = gamma^0 = diag(1, 1, -1, -1) is hermitian with
/// beta^2 = 1, gamma^i = [[0, sigma^i], [-sigma^i, 0]] are anti-hermitian,
/// so {gamma^mu, gamma^nu} = -2 eta^{mu nu} for eta = diag(-1, 1, 1, 1).
/// alpha^i = gamma^0 gamma^i is hermitian with {alpha^i, alpha^j} = 2 delta^{ij}.
/// sigma^mu = (1, sigma^i), sigmabar^mu = (-1, sigma^i).
struct DiracConstants {
  std::array<Mat4c, 4> gamma;
  std::array<Mat4c, 3> alpha;
  Mat4c beta;
  std::array<Mat2c, 4> sigma;
  std::array<Mat2c, 4> sigma_bar;
};

inline DiracConstants dirac_constants() {
  const auto s = pauli();
  const Mat2c one = Mat2c::identity();
  const Mat2c zero = Mat2c::zero();

  DiracConstants d;
  d.beta = block(one, zero, zero, -one);
  d.gamma[0] = d.beta;
  for (std::size_t i = 0; i < 3; ++i) {
    d.gamma[i + 1] = block(zero, s[i], -s[i], zero);
    d.alpha[i] = d.beta * d.gamma[i + 1];
  }
  d.sigma[0] = one;
  d.sigma_bar[0] = -one;
  for (std::size_t i = 0; i < 3; ++i) {
    d.sigma[i + 1] = s[i];
    d.sigma_bar[i + 1] = s[i];
  }
  return d;
}

}  // namespace spindyn

#endif  // SPINDYN_COMPLEX_MATRIX_HPP
