#pragma once

// Globally adaptive Gauss-Kronrod (10/21) integration of matrix-valued
// functions over [0, inf). The half line is split into a core [0, W] that is
// pre-cut at caller-supplied breakpoints and a tail [W, inf) mapped through
// w = W / s onto s in (0, 1]. The panel with the largest error is bisected
// until the summed error drops below rel_tol * max|integral|.

#include <algorithm>
#include <cmath>
#include <queue>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace cvswap {

struct QuadratureOptions {
  double rel_tol = 1e-6;
  double abs_floor = 0.0;  // absolute error accepted regardless of rel_tol
  int max_panels = 20000;
};

template <class Value>
struct QuadratureResult {
  Value value;
  double error = 0.0;
  int evaluations = 0;
  int panels = 0;
  bool converged = false;
};

namespace detail {

template <class Value>
struct Panel {
  double lo;
  double hi;
  bool tail;
  Value estimate;
  double error;
};

// Evaluates one panel with the 21-point Kronrod rule; error is the max-abs
// norm of the Kronrod - Gauss difference.
template <class Value, class F>
Panel<Value> gk21(F& f, double lo, double hi, bool tail, double core_end) {
  using gk = boost::math::quadrature::gauss_kronrod<double, 21>;
  using gl = boost::math::quadrature::gauss<double, 10>;
  const auto& x = gk::abscissa();
  const auto& wk = gk::weights();
  const auto& wg = gl::weights();
  const double mid = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);

  auto eval = [&](double t) -> Value {
    if (!tail) return f(t);
    const double w = core_end / t;
    return f(w) * (core_end / (t * t));
  };

  Value centre = eval(mid);
  Value kronrod = wk[0] * centre;
  Value gauss = centre * 0.0;
  for (std::size_t i = 1; i < x.size(); ++i) {
    const Value sum = eval(mid - half * x[i]) + eval(mid + half * x[i]);
    kronrod += wk[i] * sum;
    if (i % 2 == 1) gauss += wg[(i - 1) / 2] * sum;
  }
  kronrod *= half;
  gauss *= half;
  const double err = (kronrod - gauss).cwiseAbs().maxCoeff();
  return Panel<Value>{lo, hi, tail, std::move(kronrod), err};
}

}  // namespace detail

/// Integrates f over [0, inf). `core_end` must be positive; breakpoints
/// outside (0, core_end) are ignored. f must decay at least like 1/w^2.
template <class Value, class F>
QuadratureResult<Value> integrate_half_line(F f, double core_end, std::vector<double> breakpoints,
                                            const QuadratureOptions& opt = {}) {
  using P = detail::Panel<Value>;
  std::vector<double> cuts{0.0, core_end};
  for (double b : breakpoints) {
    if (b > 0.0 && b < core_end) cuts.push_back(b);
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end(),
                         [core_end](double a, double b) { return b - a <= 1e-14 * core_end; }),
             cuts.end());

  // Largest error first; ties broken by position so the order is reproducible.
  auto worse = [](const P& a, const P& b) {
    if (a.error != b.error) return a.error < b.error;
    if (a.tail != b.tail) return a.tail;
    return a.lo > b.lo;
  };
  std::priority_queue<P, std::vector<P>, decltype(worse)> queue(worse);
  std::vector<P> frozen;  // panels too narrow to split further

  QuadratureResult<Value> result;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    queue.push(detail::gk21<Value>(f, cuts[i], cuts[i + 1], false, core_end));
  }
  queue.push(detail::gk21<Value>(f, 0.0, 0.5, true, core_end));
  queue.push(detail::gk21<Value>(f, 0.5, 1.0, true, core_end));
  result.evaluations = 21 * static_cast<int>(queue.size());

  auto totals = [&](Value& sum, double& err) {
    std::vector<P> all = frozen;
    auto copy = queue;
    while (!copy.empty()) {
      all.push_back(copy.top());
      copy.pop();
    }
    std::sort(all.begin(), all.end(), [](const P& a, const P& b) {
      if (a.tail != b.tail) return !a.tail;
      return a.lo < b.lo;
    });
    sum = all.front().estimate * 0.0;
    err = 0.0;
    for (const auto& p : all) {
      sum += p.estimate;
      err += p.error;
    }
  };

  double running_err = 0.0;
  Value running = queue.top().estimate * 0.0;
  totals(running, running_err);

  while (true) {
    const double target = std::max(opt.rel_tol * running.cwiseAbs().maxCoeff(), opt.abs_floor);
    if (running_err <= target) {
      result.converged = true;
      break;
    }
    if (queue.empty() || static_cast<int>(queue.size() + frozen.size()) >= opt.max_panels) break;
    P worst = queue.top();
    queue.pop();
    const double mid = 0.5 * (worst.lo + worst.hi);
    if (!(mid > worst.lo && mid < worst.hi) || worst.hi - worst.lo <= 1e-13 * std::abs(worst.hi)) {
      frozen.push_back(std::move(worst));
      continue;
    }
    P left = detail::gk21<Value>(f, worst.lo, mid, worst.tail, core_end);
    P right = detail::gk21<Value>(f, mid, worst.hi, worst.tail, core_end);
    result.evaluations += 42;
    running += left.estimate + right.estimate - worst.estimate;
    running_err += left.error + right.error - worst.error;
    queue.push(std::move(left));
    queue.push(std::move(right));
    // The incremental sums drift; recompute exactly every so often.
    if (result.evaluations % (42 * 64) == 0) totals(running, running_err);
  }
  // Final sum in positional order, independent of refinement history.
  totals(result.value, result.error);
  result.panels = static_cast<int>(queue.size() + frozen.size());
  if (!result.converged) {
    result.converged = result.error <= std::max(opt.rel_tol * result.value.cwiseAbs().maxCoeff(), opt.abs_floor);
  }
  return result;
}

}  // namespace cvswap
