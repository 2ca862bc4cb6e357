#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "inflow/errors.hpp"

namespace inflow::ode {

/// Dormand--Prince 5(4) with the classical quartic continuous extension.
/// One accepted step; dense evaluation is y(s0 + th*h) for th in [0,1].
template <int N>
struct Step {
  using Vec = Eigen::Matrix<double, N, 1>;
  double s0 = 0.0, h = 0.0;
  Vec r1, r2, r3, r4, r5;  // contd coefficients, r1 = y(s0)

  Vec dense(double th) const {
    const double th1 = 1.0 - th;
    return r1 + th * (r2 + th1 * (r3 + th * (r4 + th1 * r5)));
  }
  double s1() const { return s0 + h; }
};

enum class StopReason : std::uint8_t { ReachedEnd, Event };

template <int N>
struct Path {
  using Vec = Eigen::Matrix<double, N, 1>;
  std::vector<Step<N>> steps;
  double s_end = 0.0;
  Vec y_end;
  StopReason reason = StopReason::ReachedEnd;
  int event_index = -1;

  /// Dense evaluation anywhere on [s_begin, s_end] (binary search over steps).
  Vec at(double s) const {
    const auto& st = steps;
    std::size_t lo = 0, hi = st.size() - 1;
    while (lo < hi) {
      std::size_t mid = (lo + hi) / 2;
      if (s <= st[mid].s1()) hi = mid; else lo = mid + 1;
    }
    const Step<N>& k = st[lo];
    double th = k.h != 0.0 ? (s - k.s0) / k.h : 0.0;
    if (th < 0.0) th = 0.0;
    if (th > 1.0) th = 1.0;
    return k.dense(th);
  }
};

namespace detail {
// Butcher tableau of DOPRI5 plus the dense-output weights.
inline constexpr double a21 = 1.0 / 5;
inline constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
inline constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
inline constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                        a54 = -212.0 / 729;
inline constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                        a64 = 49.0 / 176, a65 = -5103.0 / 18656;
inline constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                        b5 = -2187.0 / 6784, b6 = 11.0 / 84;
inline constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                        e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
inline constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
inline constexpr double d1 = -12715105075.0 / 11282082432.0;
inline constexpr double d3 = 87487479700.0 / 32700410799.0;
inline constexpr double d4 = -10690763975.0 / 1880347072.0;
inline constexpr double d5 = 701980252875.0 / 199316789632.0;
inline constexpr double d6 = -1453857185.0 / 822651844.0;
inline constexpr double d7 = 69997945.0 / 29380423.0;
}  // namespace detail

struct Options {
  double tol = 1e-10;       // local tolerance (abs and rel)
  double h_init = 0.0;      // 0 -> automatic
  double h_max = 0.0;       // 0 -> interval length
  std::size_t max_steps = 200000;
  bool keep_path = true;
  double event_time_tol = 1e-12;
};

/// Integrates dy/ds = f(s, y) from s0 to s1 (s1 > s0).
///
/// Events are scalar functions g_k(s, y); integration stops at the first
/// zero crossing (negative-going or positive-going), refined by bisection on
/// the dense output to `event_time_tol` in s.
template <int N, class F, class Events>
Path<N> integrate(F&& f, double s0, double s1, const Eigen::Matrix<double, N, 1>& y0,
                  const Options& opt, Events&& events, int n_events) {
  using Vec = Eigen::Matrix<double, N, 1>;
  using namespace detail;
  Path<N> path;
  path.y_end = y0;
  path.s_end = s0;
  if (s1 <= s0) return path;

  const double span = s1 - s0;
  const double h_max = opt.h_max > 0.0 ? opt.h_max : span;
  double s = s0;
  Vec y = y0;
  Vec k1 = f(s, y);

  double h = opt.h_init;
  if (h <= 0.0) {
    double scale = k1.cwiseAbs().maxCoeff() + 1e-12;
    h = std::min(h_max, std::min(span, 0.1 / scale));
    h = std::max(h, 1e-8 * span);
  }

  std::vector<double> gprev(static_cast<std::size_t>(std::max(n_events, 0)));
  for (int k = 0; k < n_events; ++k) gprev[static_cast<std::size_t>(k)] = events(k, s, y);

  Vec k2, k3, k4, k5, k6, k7, ytmp, ynew, err;
  for (std::size_t iter = 0; iter < opt.max_steps; ++iter) {
    bool last = false;
    if (s + h >= s1) {
      h = s1 - s;
      last = true;
    }

    ytmp = y + h * (a21 * k1);
    k2 = f(s + c2 * h, ytmp);
    ytmp = y + h * (a31 * k1 + a32 * k2);
    k3 = f(s + c3 * h, ytmp);
    ytmp = y + h * (a41 * k1 + a42 * k2 + a43 * k3);
    k4 = f(s + c4 * h, ytmp);
    ytmp = y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
    k5 = f(s + c5 * h, ytmp);
    ytmp = y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
    k6 = f(s + h, ytmp);
    ynew = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    k7 = f(s + h, ynew);

    err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
    double errnorm = 0.0;
    for (int i = 0; i < N; ++i) {
      double sc = opt.tol + opt.tol * std::max(std::abs(y[i]), std::abs(ynew[i]));
      double q = err[i] / sc;
      errnorm += q * q;
    }
    errnorm = std::sqrt(errnorm / N);

    if (errnorm > 1.0) {
      h *= std::max(0.2, 0.9 * std::pow(errnorm, -0.2));
      continue;
    }

    Step<N> st;
    st.s0 = s;
    st.h = h;
    st.r1 = y;
    st.r2 = ynew - y;
    st.r3 = h * k1 - st.r2;
    st.r4 = st.r2 - h * k7 - st.r3;
    st.r5 = h * (d1 * k1 + d3 * k3 + d4 * k4 + d5 * k5 + d6 * k6 + d7 * k7);

    // event localization on the accepted step
    int hit = -1;
    double th_hit = 1.0;
    for (int k = 0; k < n_events; ++k) {
      double g1 = events(k, s + h, ynew);
      double g0 = gprev[static_cast<std::size_t>(k)];
      if (g0 == 0.0) { gprev[static_cast<std::size_t>(k)] = g1; continue; }
      if (g0 * g1 < 0.0) {
        double lo = 0.0, hi2 = 1.0, glo = g0;
        while ((hi2 - lo) * h > opt.event_time_tol) {
          double mid = 0.5 * (lo + hi2);
          double gm = events(k, s + mid * h, st.dense(mid));
          if (gm == 0.0) { lo = hi2 = mid; break; }
          if (glo * gm < 0.0) hi2 = mid; else { lo = mid; glo = gm; }
        }
        double th = 0.5 * (lo + hi2);
        if (th < th_hit) { th_hit = th; hit = k; }
      }
      gprev[static_cast<std::size_t>(k)] = g1;
    }

    if (hit >= 0) {
      st.h = h;  // dense coefficients refer to the full step
      if (opt.keep_path) path.steps.push_back(st);
      path.s_end = s + th_hit * h;
      path.y_end = st.dense(th_hit);
      path.reason = StopReason::Event;
      path.event_index = hit;
      if (opt.keep_path && !path.steps.empty()) {
        // truncate the recorded final step to the event time
        path.steps.back().h = h;  // keep full-step dense map; callers clamp th
      }
      return path;
    }

    if (opt.keep_path) path.steps.push_back(st);
    s += h;
    y = ynew;
    k1 = k7;  // FSAL
    if (last || s >= s1) {
      path.s_end = s;
      path.y_end = y;
      path.reason = StopReason::ReachedEnd;
      return path;
    }
    h = std::min({h * std::min(5.0, 0.9 * std::pow(std::max(errnorm, 1e-10), -0.2)), h_max,
                  s1 - s});
  }
  throw SolverDivergenceError("ode: step budget exhausted");
}

template <int N, class F>
Path<N> integrate(F&& f, double s0, double s1, const Eigen::Matrix<double, N, 1>& y0,
                  const Options& opt) {
  auto no_events = [](int, double, const Eigen::Matrix<double, N, 1>&) { return 1.0; };
  return integrate<N>(std::forward<F>(f), s0, s1, y0, opt, no_events, 0);
}

}  // namespace inflow::ode
