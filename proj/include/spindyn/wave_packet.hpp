#ifndef SPINDYN_WAVE_PACKET_HPP
#define SPINDYN_WAVE_PACKET_HPP

// Momentum-grid wave packets: positive-energy two-component evolution with the
// Pryce position and spin, four-component Dirac packets with the naive
// position, and the conserved current of the two-component Klein-Gordon form.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include <fftw3.h>

#include "spindyn/complex_matrix.hpp"
#include "spindyn/qm_verify.hpp"
#include "spindyn/tensor.hpp"

namespace spindyn::qm {

/// Uniform 1D grid of momenta along x, p_j = (j - n/2) dp; p = 0 is node n/2.
struct MomentumGrid {
  std::size_t n = 512;
  double dp = 0.0;

  double at(std::size_t j) const { return (static_cast<double>(j) - static_cast<double>(n / 2)) * dp; }
};

template <std::size_t K>
struct SpinorField {
  MomentumGrid grid;
  Vec3 transverse{};  ///< constant (0, p_y, p_z) added to every node
  std::vector<ComplexVec<K>> amp;
  QmParams params;

  Vec3 momentum(std::size_t j) const { return {grid.at(j), transverse[1], transverse[2]}; }
};

struct PacketSpec {
  std::size_t n = 512;
  double sigma_p = 0.05;  ///< momentum spread of |psi|^2, in units of mc
  double dp = 0.0;        ///< grid spacing in units of mc; 0 means sigma_p / 8
  double center = 0.0;    ///< packet centre p_x, in units of mc
  Vec3 transverse{};      ///< (0, p_y, p_z), in units of mc

  double spacing() const { return dp > 0.0 ? dp : sigma_p / 8.0; }
};

/// Position-space width hbar / (2 sigma_p) of a Gaussian packet.
inline double packet_width(const PacketSpec& spec, const QmParams& params) {
  return params.hbar / (2.0 * spec.sigma_p * params.mc());
}

inline MomentumGrid validated_grid(const PacketSpec& spec, const QmParams& params) {
  params.validate();
  if (spec.n < 16 || spec.n % 2 != 0) throw std::invalid_argument("PacketSpec: n must be even and >= 16");
  if (!(spec.sigma_p > 0.0)) throw std::invalid_argument("PacketSpec: sigma_p must be positive");
  const double dp = spec.spacing();
  if (spec.sigma_p < 4.0 * dp) throw std::invalid_argument("PacketSpec: grid too coarse, packet narrower than 4 nodes");
  const double half = dp * static_cast<double>(spec.n / 2 - 1);
  if (std::abs(spec.center) + 10.0 * spec.sigma_p > half)
    throw std::invalid_argument("PacketSpec: packet does not fit on the momentum grid");
  if (spec.transverse[0] != 0.0) throw std::invalid_argument("PacketSpec: transverse momentum must have p_x = 0");
  return {spec.n, dp * params.mc()};
}

/// exp(-(p - p_c)^2 / (4 sigma^2)), so |g|^2 has standard deviation sigma.
inline double gaussian(double p, double center, double sigma) {
  const double d = (p - center) / sigma;
  return std::exp(-0.25 * d * d);
}

inline SpinorField<2> make_weyl_packet(const PacketSpec& spec, const Spinor2& polarization, const QmParams& params) {
  SpinorField<2> f;
  f.grid = validated_grid(spec, params);
  f.params = params;
  f.transverse = params.mc() * spec.transverse;
  const double nrm = std::sqrt(std::norm(polarization[0]) + std::norm(polarization[1]));
  if (!(nrm > 0.0)) throw std::invalid_argument("make_weyl_packet: zero polarization");
  f.amp.resize(f.grid.n);
  for (std::size_t j = 0; j < f.grid.n; ++j) {
    const double g = gaussian(f.grid.at(j), spec.center * params.mc(), spec.sigma_p * params.mc());
    f.amp[j] = {g * polarization[0] / nrm, g * polarization[1] / nrm};
  }
  return f;
}

/// Positive / negative energy projectors (1 +- H/E)/2 of the free Dirac Hamiltonian.
inline std::array<Mat4c, 2> energy_projectors(const Vec3& p, const QmParams& params) {
  const Mat4c H = dirac_hamiltonian(p, params);
  const double E = params.c * std::sqrt(dot(p, p) + params.mc() * params.mc());
  const Mat4c one = Mat4c::identity();
  return {0.5 * (one + (1.0 / E) * H), 0.5 * (one - (1.0 / E) * H)};
}

/// g(p) (sqrt(1-w) u+ + sqrt(w) u-), with u+ the normalized positive-energy
/// projection of (1,0,0,0) and u- the negative-energy projection of (0,0,0,1).
inline SpinorField<4> make_dirac_packet(const PacketSpec& spec, double negative_weight, const QmParams& params) {
  if (!(negative_weight >= 0.0 && negative_weight <= 1.0))
    throw std::invalid_argument("make_dirac_packet: branch weight outside [0, 1]");
  SpinorField<4> f;
  f.grid = validated_grid(spec, params);
  f.params = params;
  f.transverse = params.mc() * spec.transverse;
  f.amp.resize(f.grid.n);
  const Spinor4 up{1.0, 0.0, 0.0, 0.0};
  const Spinor4 dn{0.0, 0.0, 0.0, 1.0};
  const double a = std::sqrt(1.0 - negative_weight);
  const double b = std::sqrt(negative_weight);
  for (std::size_t j = 0; j < f.grid.n; ++j) {
    const Vec3 p = f.momentum(j);
    const auto P = energy_projectors(p, params);
    Spinor4 pos = P[0] * up;
    Spinor4 neg = P[1] * dn;
    const double np = std::sqrt(std::real(inner(pos, pos)));
    const double nn = std::sqrt(std::real(inner(neg, neg)));
    const double g = gaussian(f.grid.at(j), spec.center * params.mc(), spec.sigma_p * params.mc());
    for (std::size_t c = 0; c < 4; ++c) f.amp[j][c] = g * (a * pos[c] / np + b * neg[c] / nn);
  }
  return f;
}

// ---------------------------------------------------------------------------

namespace detail {
/// FFTW planning is not thread-safe; every plan creation and destruction goes through this lock.
inline std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace detail

/// i hbar d/dp on a periodic grid, by FFT.
class SpectralPosition {
 public:
  SpectralPosition(std::size_t n, double dp, double hbar) : n_(n), dp_(dp), hbar_(hbar) {
    buf_ = fftw_alloc_complex(n);
    std::lock_guard<std::mutex> lock(detail::fftw_planner_mutex());
    fwd_ = fftw_plan_dft_1d(static_cast<int>(n), buf_, buf_, FFTW_FORWARD, FFTW_ESTIMATE);
    bwd_ = fftw_plan_dft_1d(static_cast<int>(n), buf_, buf_, FFTW_BACKWARD, FFTW_ESTIMATE);
  }
  SpectralPosition(const SpectralPosition&) = delete;
  SpectralPosition& operator=(const SpectralPosition&) = delete;
  ~SpectralPosition() {
    std::lock_guard<std::mutex> lock(detail::fftw_planner_mutex());
    fftw_destroy_plan(fwd_);
    fftw_destroy_plan(bwd_);
    fftw_free(buf_);
  }

  std::vector<cplx> apply(const std::vector<cplx>& f) {
    if (f.size() != n_) throw std::invalid_argument("SpectralPosition: size mismatch");
    for (std::size_t j = 0; j < n_; ++j) {
      buf_[j][0] = f[j].real();
      buf_[j][1] = f[j].imag();
    }
    fftw_execute(fwd_);
    const double L = static_cast<double>(n_) * dp_;
    for (std::size_t k = 0; k < n_; ++k) {
      const long kk = k < n_ / 2 ? static_cast<long>(k) : static_cast<long>(k) - static_cast<long>(n_);
      // d/dp -> i kappa; i hbar d/dp -> -hbar kappa; Nyquist mode dropped
      const double kappa = (k == n_ / 2) ? 0.0 : 2.0 * std::numbers::pi * static_cast<double>(kk) / L;
      const double s = -hbar_ * kappa / static_cast<double>(n_);
      buf_[k][0] *= s;
      buf_[k][1] *= s;
    }
    fftw_execute(bwd_);
    std::vector<cplx> out(n_);
    for (std::size_t j = 0; j < n_; ++j) out[j] = {buf_[j][0], buf_[j][1]};
    return out;
  }

 private:
  std::size_t n_;
  double dp_;
  double hbar_;
  fftw_complex* buf_;
  fftw_plan fwd_;
  fftw_plan bwd_;
};

/// i hbar d/dp by periodic central differences.
inline std::vector<cplx> central_position(const std::vector<cplx>& f, double dp, double hbar) {
  const std::size_t n = f.size();
  std::vector<cplx> out(n);
  for (std::size_t j = 0; j < n; ++j) {
    const cplx d = (f[(j + 1) % n] - f[(j + n - 1) % n]) / (2.0 * dp);
    out[j] = cplx(0.0, hbar) * d;
  }
  return out;
}

enum class Derivative { spectral, central };

template <std::size_t K>
double field_norm(const SpinorField<K>& f) {
  double s = 0.0;
  for (const auto& a : f.amp)
    for (const auto& z : a) s += std::norm(z);
  return s * f.grid.dp;
}

/// Re <psi, x psi> / <psi, psi> with x = i hbar d/dp applied per component.
template <std::size_t K>
double position_expectation(const SpinorField<K>& f, Derivative how, SpectralPosition* spectral = nullptr) {
  const double nrm = field_norm(f);
  if (nrm == 0.0) return 0.0;
  double acc = 0.0;
  std::vector<cplx> comp(f.grid.n);
  for (std::size_t c = 0; c < K; ++c) {
    for (std::size_t j = 0; j < f.grid.n; ++j) comp[j] = f.amp[j][c];
    std::vector<cplx> xc;
    if (how == Derivative::spectral) {
      if (spectral == nullptr) {
        SpectralPosition sp(f.grid.n, f.grid.dp, f.params.hbar);
        xc = sp.apply(comp);
      } else {
        xc = spectral->apply(comp);
      }
    } else {
      xc = central_position(comp, f.grid.dp, f.params.hbar);
    }
    for (std::size_t j = 0; j < f.grid.n; ++j) acc += std::real(std::conj(comp[j]) * xc[j]);
  }
  return acc * f.grid.dp / nrm;
}

// ---------------------------------------------------------------------------

struct PacketSeries {
  std::vector<double> t;
  std::vector<double> norm;
  std::vector<double> position;  ///< <X> for Weyl packets (Pryce), <x> for Dirac packets (naive)
  std::vector<std::array<double, 3>> spin;  ///< <S> (Weyl packets only)
};

inline std::vector<double> sample_times(double T, std::size_t n_samples) {
  if (!(T > 0.0) || n_samples < 2) throw std::invalid_argument("sample_times: need T > 0 and >= 2 samples");
  std::vector<double> t(n_samples);
  for (std::size_t k = 0; k < n_samples; ++k) t[k] = T * static_cast<double>(k) / static_cast<double>(n_samples - 1);
  return t;
}

/// Exact diagonal evolution exp(-i c sqrt(p^2 + (mc)^2) t / hbar) per node,
/// with norm, Pryce position <X^x> and Pryce spin <S> per sample.
inline PacketSeries evolve_positive_energy(const SpinorField<2>& f0, double T, std::size_t n_samples,
                                           Derivative how = Derivative::spectral) {
  const QmParams& pr = f0.params;
  const std::size_t n = f0.grid.n;
  std::vector<double> energy(n);
  std::vector<Mat2c> ax(n);
  std::vector<SpinOperator> spin(n);
  for (std::size_t j = 0; j < n; ++j) {
    const Vec3 p = f0.momentum(j);
    const auto k = OnShellMomentum::make(p, pr);
    energy[j] = pr.c * k.p0;
    ax[j] = position_correction(p, pr)[0];
    spin[j] = pryce_spin(k, pr);
  }
  SpectralPosition sp(n, f0.grid.dp, pr.hbar);
  PacketSeries out;
  out.t = sample_times(T, n_samples);
  SpinorField<2> f = f0;
  for (double t : out.t) {
    for (std::size_t j = 0; j < n; ++j) {
      const cplx ph = std::polar(1.0, -energy[j] * t / pr.hbar);
      f.amp[j] = {ph * f0.amp[j][0], ph * f0.amp[j][1]};
    }
    const double nrm = field_norm(f);
    double a = 0.0;
    std::array<double, 3> s{};
    for (std::size_t j = 0; j < n; ++j) {
      a += std::real(inner(f.amp[j], ax[j] * f.amp[j]));
      for (std::size_t i = 0; i < 3; ++i) s[i] += std::real(inner(f.amp[j], spin[j][i] * f.amp[j]));
    }
    out.norm.push_back(nrm);
    if (nrm == 0.0) {
      out.position.push_back(0.0);
      out.spin.push_back({});
      continue;
    }
    out.position.push_back(position_expectation(f, how, &sp) + a * f.grid.dp / nrm);
    for (auto& v : s) v *= f.grid.dp / nrm;
    out.spin.push_back(s);
  }
  return out;
}

/// Exact per-node evolution U = cos(Et/hbar) - i sin(Et/hbar) H/E of a
/// four-component packet, with the naive position i hbar d/dp.
inline PacketSeries evolve_dirac_packet(const SpinorField<4>& f0, double T, std::size_t n_samples,
                                        Derivative how = Derivative::spectral) {
  const QmParams& pr = f0.params;
  const std::size_t n = f0.grid.n;
  std::vector<Mat4c> h_over_e(n);
  std::vector<double> energy(n);
  for (std::size_t j = 0; j < n; ++j) {
    const Vec3 p = f0.momentum(j);
    energy[j] = pr.c * std::sqrt(dot(p, p) + pr.mc() * pr.mc());
    h_over_e[j] = (1.0 / energy[j]) * dirac_hamiltonian(p, pr);
  }
  SpectralPosition sp(n, f0.grid.dp, pr.hbar);
  PacketSeries out;
  out.t = sample_times(T, n_samples);
  SpinorField<4> f = f0;
  for (double t : out.t) {
    for (std::size_t j = 0; j < n; ++j) {
      const double ph = energy[j] * t / pr.hbar;
      const Mat4c U = std::cos(ph) * Mat4c::identity() - cplx(0.0, std::sin(ph)) * h_over_e[j];
      f.amp[j] = U * f0.amp[j];
    }
    const double nrm = field_norm(f);
    out.norm.push_back(nrm);
    out.position.push_back(nrm == 0.0 ? 0.0 : position_expectation(f, how, &sp));
  }
  return out;
}

// ---------------------------------------------------------------------------

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double max_residual = 0.0;
};

inline LineFit fit_line(const std::vector<double>& t, const std::vector<double>& y) {
  if (t.size() != y.size() || t.size() < 2) throw std::invalid_argument("fit_line: need matching series of length >= 2");
  const double n = static_cast<double>(t.size());
  double mt = 0, my = 0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    mt += t[i];
    my += y[i];
  }
  mt /= n;
  my /= n;
  double stt = 0, sty = 0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    stt += (t[i] - mt) * (t[i] - mt);
    sty += (t[i] - mt) * (y[i] - my);
  }
  LineFit f;
  f.slope = stt > 0.0 ? sty / stt : 0.0;
  f.intercept = my - f.slope * mt;
  for (std::size_t i = 0; i < t.size(); ++i)
    f.max_residual = std::max(f.max_residual, std::abs(y[i] - (f.intercept + f.slope * t[i])));
  return f;
}

struct Oscillation {
  double angular_frequency = 0.0;  ///< rad per unit time of the dominant peak
  double amplitude = 0.0;          ///< max |detrended signal|
};

/// Detrends by a linear fit, zero-pads by `pad`, and locates the largest DFT
/// magnitude (excluding DC) with parabolic interpolation of the peak bin.
inline Oscillation dominant_oscillation(const std::vector<double>& t, const std::vector<double>& y, std::size_t pad = 8) {
  const LineFit lf = fit_line(t, y);
  const std::size_t n = t.size();
  const double dt = (t.back() - t.front()) / static_cast<double>(n - 1);
  const std::size_t m = n * std::max<std::size_t>(1, pad);
  Oscillation out;
  std::vector<double> in(m, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    in[i] = y[i] - (lf.intercept + lf.slope * t[i]);
    out.amplitude = std::max(out.amplitude, std::abs(in[i]));
  }
  if (out.amplitude == 0.0) return out;
  const std::size_t nb = m / 2 + 1;
  fftw_complex* spec = fftw_alloc_complex(nb);
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(detail::fftw_planner_mutex());
    plan = fftw_plan_dft_r2c_1d(static_cast<int>(m), in.data(), spec, FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  std::vector<double> mag(nb);
  for (std::size_t k = 0; k < nb; ++k) mag[k] = std::hypot(spec[k][0], spec[k][1]);
  {
    std::lock_guard<std::mutex> lock(detail::fftw_planner_mutex());
    fftw_destroy_plan(plan);
  }
  fftw_free(spec);

  std::size_t best = 1;
  for (std::size_t k = 1; k < nb; ++k)
    if (mag[k] > mag[best]) best = k;
  double shift = 0.0;
  if (best > 0 && best + 1 < nb) {
    const double a = mag[best - 1], b = mag[best], c = mag[best + 1];
    const double den = a - 2.0 * b + c;
    if (den != 0.0) shift = 0.5 * (a - c) / den;
  }
  const double bin = (static_cast<double>(best) + shift) / (static_cast<double>(m) * dt);
  out.angular_frequency = 2.0 * std::numbers::pi * bin;
  return out;
}

// ---------------------------------------------------------------------------
// Conserved current I^mu[psi, psi] of plane-wave superpositions on a periodic box.

struct PlaneWave {
  int mode = 0;  ///< momentum p_x = 2 pi hbar mode / L
  Spinor2 amplitude{};
};

struct CurrentSpec {
  double box = 4.0 * std::numbers::pi;  ///< L, in units of hbar / mc
  std::vector<PlaneWave> waves{{2, {1.0, 0.0}}, {3, {0.6, 0.8}}};
  std::size_t points_per_beat = 4096;   ///< spatial nodes per beat wavelength
  std::size_t steps_per_period = 8192;  ///< time nodes per beat period
  std::size_t min_points = 64;

  void validate() const {
    if (!(box > 0.0)) throw std::invalid_argument("CurrentSpec: box must be positive");
    if (waves.empty()) throw std::invalid_argument("CurrentSpec: no waves");
    if (points_per_beat < min_points || steps_per_period < min_points)
      throw std::invalid_argument("CurrentSpec: beat not resolved by at least " + std::to_string(min_points) +
                                  " points in x and t");
    if (points_per_beat == steps_per_period)
      throw std::invalid_argument(
          "CurrentSpec: equal x and t resolution makes the leading truncation errors cancel; choose them differently");
  }
};

struct CurrentSample {
  std::array<double, 2> I{};  ///< (I^0, I^x)
};

class CurrentField {
 public:
  CurrentField(const CurrentSpec& spec, const QmParams& params) : spec_(spec), params_(params) {
    spec.validate();
    params.validate();
    const double L = spec.box * params.hbar / params.mc();
    L_ = L;
    int lo = spec.waves.front().mode, hi = lo;
    for (const auto& w : spec.waves) {
      const double k = 2.0 * std::numbers::pi * params.hbar * w.mode / L;
      const auto mom = OnShellMomentum::make({k, 0.0, 0.0}, params);
      modes_.push_back({k, params.c * mom.p0, w.amplitude, sigma_bar_p(mom.p, mom.p0)});
      lo = std::min(lo, w.mode);
      hi = std::max(hi, w.mode);
    }
    beat_modes_ = std::max(1, hi - lo);
    double emin = modes_.front().E, emax = emin;
    for (const auto& m : modes_) {
      emin = std::min(emin, m.E);
      emax = std::max(emax, m.E);
    }
    beat_period_ = emax > emin ? 2.0 * std::numbers::pi * params.hbar / (emax - emin)
                               : 2.0 * std::numbers::pi * params.hbar / emax;
  }

  double box_length() const { return L_; }
  double beat_wavelength() const { return L_ / beat_modes_; }
  double beat_period() const { return beat_period_; }
  double dx() const { return beat_wavelength() / static_cast<double>(spec_.points_per_beat); }
  double dt() const { return beat_period_ / static_cast<double>(spec_.steps_per_period); }
  std::size_t nodes() const { return spec_.points_per_beat * static_cast<std::size_t>(beat_modes_); }

  /// psi and chi = (sigmabar p) psi / mc at (x, t)
  std::array<Spinor2, 2> fields(double x, double t) const {
    Spinor2 psi{}, chi{};
    for (const auto& m : modes_) {
      const cplx ph = std::polar(1.0, (m.k * x - m.E * t) / params_.hbar);
      const Spinor2 sb = m.sbar * m.a;
      for (std::size_t c = 0; c < 2; ++c) {
        psi[c] += ph * m.a[c];
        chi[c] += ph * sb[c] / params_.mc();
      }
    }
    return {psi, chi};
  }

  /// I^0 = |chi|^2 + |psi|^2, I^x = chi^+ sigma_x chi - psi^+ sigma_x psi
  CurrentSample current(double x, double t) const {
    const auto [psi, chi] = fields(x, t);
    const Mat2c sx = pauli()[0];
    CurrentSample s;
    s.I[0] = std::real(inner(chi, chi) + inner(psi, psi));
    s.I[1] = std::real(inner(chi, sx * chi) - inner(psi, sx * psi));
    return s;
  }

  /// Periodic trapezoid sum of I^0 over the box.
  double charge(double t) const {
    const std::size_t n = nodes();
    double q = 0.0;
    for (std::size_t j = 0; j < n; ++j) q += current(static_cast<double>(j) * dx(), t).I[0];
    return q * dx();
  }

 private:
  struct Mode {
    double k;
    double E;
    Spinor2 a;
    Mat2c sbar;
  };

  CurrentSpec spec_;
  QmParams params_;
  double L_ = 0.0;
  int beat_modes_ = 1;
  double beat_period_ = 0.0;
  std::vector<Mode> modes_;
};

struct CurrentResult {
  double divergence = 0.0;  ///< max |(1/c) dI^0/dt + dI^x/dx| over the scale of the two terms
  double charge_drift = 0.0;  ///< max |Q(t) - Q(0)| / Q(0)
  double min_density = 0.0;   ///< min I^0
};

/// Central differences of I^mu on every spatial node at `n_times` instants
/// spread over `periods` beat periods.
inline CurrentResult current_conservation(const CurrentSpec& spec, const QmParams& params, std::size_t n_times = 4,
                                          double periods = 3.0) {
  const CurrentField field(spec, params);
  const std::size_t n = field.nodes();
  const double dx = field.dx(), dt = field.dt();
  CurrentResult r;
  r.min_density = std::numeric_limits<double>::infinity();
  double worst = 0.0, scale = 0.0, rho_max = 0.0;
  double q0 = 0.0;
  for (std::size_t m = 0; m < n_times; ++m) {
    const double t = periods * field.beat_period() * static_cast<double>(m) / static_cast<double>(std::max<std::size_t>(1, n_times - 1));
    double q = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double x = static_cast<double>(j) * dx;
      const double rho_t = (field.current(x, t + dt).I[0] - field.current(x, t - dt).I[0]) / (2.0 * dt * params.c);
      const double j_x = (field.current(x + dx, t).I[1] - field.current(x - dx, t).I[1]) / (2.0 * dx);
      worst = worst_of(worst, std::abs(rho_t + j_x));
      scale = std::max({scale, std::abs(rho_t), std::abs(j_x)});
      const double rho = field.current(x, t).I[0];
      r.min_density = std::min(r.min_density, rho);
      rho_max = std::max(rho_max, rho);
      q += rho;
    }
    q *= dx;
    if (m == 0) q0 = q;
    r.charge_drift = worst_of(r.charge_drift, std::abs(q - q0) / q0);
  }
  // floor the scale by the density over a beat wavelength, so a uniform
  // current does not report roundoff over roundoff
  scale = std::max(scale, rho_max / field.beat_wavelength());
  r.divergence = scale > 0.0 ? worst / scale : worst;
  return r;
}

}  // namespace spindyn::qm

#endif  // SPINDYN_WAVE_PACKET_HPP
