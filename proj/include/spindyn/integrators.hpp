#ifndef SPINDYN_INTEGRATORS_HPP
#define SPINDYN_INTEGRATORS_HPP

#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>

#include <boost/numeric/odeint.hpp>

namespace spindyn {

/// Thrown when a state stops being finite during integration.
class NumericalFailure : public std::runtime_error {
 public:
  NumericalFailure(const std::string& what, std::size_t step)
      : std::runtime_error(what + " (step " + std::to_string(step) + ")"), step_(step) {}
  std::size_t step() const { return step_; }

 private:
  std::size_t step_;
};

enum class Scheme { rk4, rk45 };

template <std::size_t N>
bool all_finite(const std::array<double, N>& x) {
  for (double v : x)
    if (!std::isfinite(v)) return false;
  return true;
}

/// Advances x from t to t + dt with the requested scheme. rk45 is the
/// Dormand-Prince 5(4) pair with relative tolerance rel_tol.
template <std::size_t N, class System>
void advance(System&& sys, std::array<double, N>& x, double t, double dt, Scheme scheme,
             double rel_tol = 1e-10, double abs_tol = 1e-14) {
  namespace odeint = boost::numeric::odeint;
  using State = std::array<double, N>;
  if (scheme == Scheme::rk4) {
    odeint::runge_kutta4<State> stepper;
    stepper.do_step(sys, x, t, dt);
  } else {
    auto stepper = odeint::make_controlled(abs_tol, rel_tol, odeint::runge_kutta_dopri5<State>());
    odeint::integrate_adaptive(stepper, sys, x, t, t + dt, dt);
  }
}

}  // namespace spindyn

#endif  // SPINDYN_INTEGRATORS_HPP
