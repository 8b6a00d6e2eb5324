#pragma once

// Adaptive two-dimensional Gauss-Legendre quadrature over rectangles.
//
// Panels are refined globally: the panel with the largest local error
// estimate is bisected until the summed estimate drops below the requested
// relative tolerance. The local estimate compares the tensor rule on a panel
// against the same rule on its 2 x 2 quarters. A panel is bisected across
// the axis whose halves change the rule more, so line-like features (the
// magnet edges) are resolved without refining along their length.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <queue>
#include <span>
#include <sstream>
#include <vector>

#include "microgen/error.hpp"

namespace microgen::quadrature {

template <std::size_t N>
struct GaussRule {
  std::array<double, N> nodes{};    // on [-1, 1]
  std::array<double, N> weights{};
};

/// Nodes and weights of the N-point Gauss-Legendre rule, by Newton
/// iteration on P_N started from the Chebyshev-like initial guess.
template <std::size_t N>
const GaussRule<N>& gauss_legendre() {
  static const GaussRule<N> rule = [] {
    GaussRule<N> r;
    constexpr double n = static_cast<double>(N);
    for (std::size_t i = 0; i < N; ++i) {
      double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) /
                          (n + 0.5));
      double dp = 0.0;
      for (int it = 0; it < 100; ++it) {
        double p0 = 1.0, p1 = x;
        for (std::size_t k = 2; k <= N; ++k) {
          const double kk = static_cast<double>(k);
          const double p2 = ((2.0 * kk - 1.0) * x * p1 - (kk - 1.0) * p0) / kk;
          p0 = p1;
          p1 = p2;
        }
        dp = n * (x * p1 - p0) / (x * x - 1.0);
        const double dx = p1 / dp;
        x -= dx;
        if (std::abs(dx) < 1e-16) break;
      }
      r.nodes[i] = x;
      r.weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    return r;
  }();
  return rule;
}

struct Rect {
  double x0, x1, y0, y1;
};

struct AdaptiveOptions {
  double rel_tol = 1e-8;
  /// Absolute floor on the error target, for integrals that vanish.
  double abs_tol = 0.0;
  int max_depth = 12;
};

struct AdaptiveResult {
  double value = 0.0;
  double error_bound = 0.0;
  std::size_t panels = 0;
  std::size_t evaluations = 0;
};

namespace detail {

template <std::size_t N, class F>
double tensor_rule(const F& f, const Rect& r) {
  const auto& g = gauss_legendre<N>();
  const double hx = 0.5 * (r.x1 - r.x0), cx = 0.5 * (r.x1 + r.x0);
  const double hy = 0.5 * (r.y1 - r.y0), cy = 0.5 * (r.y1 + r.y0);
  double sum = 0.0;
  for (std::size_t i = 0; i < N; ++i) {
    const double x = cx + hx * g.nodes[i];
    double row = 0.0;
    for (std::size_t j = 0; j < N; ++j) {
      row += g.weights[j] * f(x, cy + hy * g.nodes[j]);
    }
    sum += g.weights[i] * row;
  }
  return sum * hx * hy;
}

inline std::array<Rect, 4> quarter(const Rect& r) {
  const double mx = 0.5 * (r.x0 + r.x1), my = 0.5 * (r.y0 + r.y1);
  return {Rect{r.x0, mx, r.y0, my}, Rect{mx, r.x1, r.y0, my},
          Rect{r.x0, mx, my, r.y1}, Rect{mx, r.x1, my, r.y1}};
}

struct Panel {
  Rect rect;
  int depth_x;  // halvings along x
  int depth_y;
  double coarse;  // rule on this panel
  double fine;    // rule summed over the 2 x 2 quarters
  double half_x;  // rule summed over the two x-halves
  double half_y;  // rule summed over the two y-halves
  double error() const { return std::abs(fine - coarse); }
  bool split_in_x() const {
    return std::abs(half_x - coarse) >= std::abs(half_y - coarse);
  }
  bool operator<(const Panel& o) const { return error() < o.error(); }
};

inline std::array<Rect, 2> halves(const Rect& r, bool in_x) {
  if (in_x) {
    const double m = 0.5 * (r.x0 + r.x1);
    return {Rect{r.x0, m, r.y0, r.y1}, Rect{m, r.x1, r.y0, r.y1}};
  }
  const double m = 0.5 * (r.y0 + r.y1);
  return {Rect{r.x0, r.x1, r.y0, m}, Rect{r.x0, r.x1, m, r.y1}};
}

}  // namespace detail

/// Sorted, de-duplicated breakpoints of [lo, hi] including the interior
/// cuts that fall strictly inside.
inline std::vector<double> breakpoints(double lo, double hi,
                                       std::span<const double> cuts) {
  std::vector<double> out{lo, hi};
  for (double c : cuts) {
    if (c > lo && c < hi) out.push_back(c);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

/// Integrate f(x, y) over the tensor grid of panels defined by the x and y
/// breakpoint lists, refining adaptively with an N x N rule per panel.
/// Each panel may be halved at most max_depth times along each axis. Throws
/// QuadratureError if the tolerance is not met within that budget.
template <std::size_t N = 8, class F>
AdaptiveResult integrate_2d(const F& f, std::span<const double> xs,
                            std::span<const double> ys,
                            const AdaptiveOptions& opt = {}) {
  using detail::Panel;
  AdaptiveResult res;
  std::priority_queue<Panel> active;
  double total = 0.0;
  double err = 0.0;
  std::vector<Panel> settled;

  auto make_panel = [&](const Rect& r, int dx, int dy, double coarse) {
    Panel p{r, dx, dy, coarse, 0.0, 0.0, 0.0};
    for (const Rect& c : detail::quarter(r)) p.fine += detail::tensor_rule<N>(f, c);
    for (const Rect& c : detail::halves(r, true)) p.half_x += detail::tensor_rule<N>(f, c);
    for (const Rect& c : detail::halves(r, false)) p.half_y += detail::tensor_rule<N>(f, c);
    res.evaluations += 8 * N * N;
    return p;
  };

  for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
    for (std::size_t j = 0; j + 1 < ys.size(); ++j) {
      const Rect r{xs[i], xs[i + 1], ys[j], ys[j + 1]};
      const double coarse = detail::tensor_rule<N>(f, r);
      res.evaluations += N * N;
      Panel p = make_panel(r, 0, 0, coarse);
      total += p.fine;
      err += p.error();
      active.push(p);
    }
  }

  auto target = [&] { return std::max(opt.rel_tol * std::abs(total), opt.abs_tol); };

  while (err > target() && !active.empty()) {
    Panel worst = active.top();
    active.pop();
    bool in_x = worst.split_in_x();
    if ((in_x ? worst.depth_x : worst.depth_y) >= opt.max_depth) in_x = !in_x;
    if ((in_x ? worst.depth_x : worst.depth_y) >= opt.max_depth) {
      settled.push_back(worst);  // keeps its error in the running bound
      continue;
    }
    total -= worst.fine;
    err -= worst.error();
    for (const Rect& c : detail::halves(worst.rect, in_x)) {
      const double coarse = detail::tensor_rule<N>(f, c);
      res.evaluations += N * N;
      Panel child = make_panel(c, worst.depth_x + (in_x ? 1 : 0),
                                 worst.depth_y + (in_x ? 0 : 1), coarse);
      total += child.fine;
      err += child.error();
      active.push(child);
    }
  }

  // Re-sum from the final panel set; the running totals drift by roundoff.
  total = 0.0;
  err = 0.0;
  res.panels = active.size() + settled.size();
  for (const Panel& p : settled) {
    total += p.fine;
    err += p.error();
  }
  for (; !active.empty(); active.pop()) {
    total += active.top().fine;
    err += active.top().error();
  }
  res.value = total;
  res.error_bound = err;
  if (!std::isfinite(total) || res.error_bound > target()) {
    std::ostringstream msg;
    msg << "adaptive quadrature did not converge within depth " << opt.max_depth
        << ": estimate " << total << ", error bound " << res.error_bound;
    throw QuadratureError(msg.str(), total, res.error_bound);
  }
  return res;
}

}  // namespace microgen::quadrature
