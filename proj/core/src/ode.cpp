#include "ode.hpp"

#include <algorithm>
#include <cmath>

namespace sspf::detail {

namespace {

// Dormand & Prince (1980) tableau with Hairer's continuous extension.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192,
                 a75 = -2187.0 / 6784, a76 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
constexpr double d1 = -12715105075.0 / 11282082432, d3 = 87487479700.0 / 32700410799,
                 d4 = -10690763975.0 / 1880347072, d5 = 701980252875.0 / 199316789632,
                 d6 = -1453857185.0 / 822651844, d7 = 69997945.0 / 29380423;

State2 axpy(const State2& y, double h, std::initializer_list<std::pair<double, const State2*>> terms) {
  State2 out = y;
  for (const auto& [w, k] : terms) {
    for (int i = 0; i < 2; ++i) out[i] += h * w * (*k)[i];
  }
  return out;
}

bool finite(const State2& y) noexcept { return std::isfinite(y[0]) && std::isfinite(y[1]); }

}  // namespace

State2 DenseSegment::eval(double t) const noexcept {
  const double s = (t - t0) / h;
  const double s1 = 1.0 - s;
  State2 out{};
  for (int i = 0; i < 2; ++i) {
    out[i] = rcont[0][i] +
             s * (rcont[1][i] + s1 * (rcont[2][i] + s * (rcont[3][i] + s1 * rcont[4][i])));
  }
  return out;
}

Dopri5Result integrate_dopri5(const Rhs& rhs, double t0, State2 y0, double t1,
                              const Dopri5Options& opt,
                              const std::function<void(const DenseSegment&)>& on_step,
                              const std::function<bool(double, const State2&)>& monitor) {
  Dopri5Result res;
  res.t = t0;
  res.y = y0;
  if (!(t1 > t0)) {
    res.reached_end = true;
    return res;
  }
  State2 k1{};
  if (!rhs(t0, y0, k1) || !finite(k1)) {
    res.underflow = true;
    return res;
  }
  double h = opt.initial_step > 0.0 ? opt.initial_step : 1e-3 * (t1 - t0);
  double t = t0;
  State2 y = y0;
  while (res.accepted + res.rejected < opt.max_steps) {
    const double min_step = opt.min_step_rel * std::max(1.0, std::abs(t));
    if (h < min_step) {
      res.underflow = true;
      break;
    }
    bool last = false;
    if (t + h >= t1) {
      h = t1 - t;
      last = true;
    }
    State2 k2{}, k3{}, k4{}, k5{}, k6{}, k7{};
    bool ok = rhs(t + c2 * h, axpy(y, h, {{a21, &k1}}), k2);
    ok = ok && rhs(t + c3 * h, axpy(y, h, {{a31, &k1}, {a32, &k2}}), k3);
    ok = ok && rhs(t + c4 * h, axpy(y, h, {{a41, &k1}, {a42, &k2}, {a43, &k3}}), k4);
    ok = ok && rhs(t + c5 * h, axpy(y, h, {{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}}), k5);
    ok = ok && rhs(t + h, axpy(y, h, {{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}}),
                   k6);
    State2 y1{};
    if (ok) {
      y1 = axpy(y, h, {{a71, &k1}, {a73, &k3}, {a74, &k4}, {a75, &k5}, {a76, &k6}});
      ok = finite(y1) && rhs(t + h, y1, k7) && finite(k7);
    }
    if (!ok) {
      ++res.rejected;
      h *= 0.25;
      continue;
    }
    double err = 0.0;
    for (int i = 0; i < 2; ++i) {
      const double e = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] +
                            e7 * k7[i]);
      const double sk = opt.atol + opt.rtol * std::max(std::abs(y[i]), std::abs(y1[i]));
      err += (e / sk) * (e / sk);
    }
    err = std::sqrt(err / 2.0);
    if (!std::isfinite(err)) {
      ++res.rejected;
      h *= 0.25;
      continue;
    }
    const double fac = std::clamp(0.9 * std::pow(std::max(err, 1e-300), -0.2), 0.2, 5.0);
    if (err > 1.0) {
      ++res.rejected;
      h *= std::min(fac, 1.0);
      continue;
    }
    ++res.accepted;
    if (on_step) {
      DenseSegment seg;
      seg.t0 = t;
      seg.h = h;
      for (int i = 0; i < 2; ++i) {
        const double ydiff = y1[i] - y[i];
        const double bspl = h * k1[i] - ydiff;
        seg.rcont[0][i] = y[i];
        seg.rcont[1][i] = ydiff;
        seg.rcont[2][i] = bspl;
        seg.rcont[3][i] = ydiff - h * k7[i] - bspl;
        seg.rcont[4][i] =
            h * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] + d6 * k6[i] + d7 * k7[i]);
      }
      on_step(seg);
    }
    t = last ? t1 : t + h;
    y = y1;
    k1 = k7;
    res.t = t;
    res.y = y;
    if (monitor && !monitor(t, y)) {
      res.stopped = true;
      return res;
    }
    if (last) {
      res.reached_end = true;
      return res;
    }
    h *= fac;
  }
  return res;
}

}  // namespace sspf::detail
