#ifndef SSPF_SRC_ODE_HPP_
#define SSPF_SRC_ODE_HPP_

#include <array>
#include <cstddef>
#include <functional>

namespace sspf::detail {

using State2 = std::array<double, 2>;

/// Right-hand side; returns false when the state is outside the admissible
/// region, which rejects the step.
using Rhs = std::function<bool(double t, const State2& y, State2& dydt)>;

/// Continuous extension of one accepted Dormand-Prince step.
struct DenseSegment {
  double t0 = 0.0;
  double h = 0.0;
  std::array<State2, 5> rcont{};

  State2 eval(double t) const noexcept;
};

struct Dopri5Options {
  double rtol = 1e-10;
  double atol = 1e-10;
  double initial_step = 0.0;  // 0 selects (t1 - t0) * 1e-3
  double min_step_rel = 1e-13;
  std::size_t max_steps = 2'000'000;
};

struct Dopri5Result {
  bool reached_end = false;
  bool stopped = false;    // monitor asked to stop
  bool underflow = false;  // step size collapsed
  double t = 0.0;
  State2 y{};
  std::size_t accepted = 0;
  std::size_t rejected = 0;
};

/// Adaptive Dormand-Prince 5(4) with embedded error control. on_step sees
/// every accepted step; monitor returning false stops after that step.
Dopri5Result integrate_dopri5(const Rhs& rhs, double t0, State2 y0, double t1,
                              const Dopri5Options& options,
                              const std::function<void(const DenseSegment&)>& on_step,
                              const std::function<bool(double, const State2&)>& monitor);

}  // namespace sspf::detail

#endif  // SSPF_SRC_ODE_HPP_
