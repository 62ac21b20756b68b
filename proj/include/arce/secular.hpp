// SPDX-License-Identifier: Apache-2.0
//
// arce - angle- and range-constrained localization for multistatic radar
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "arce/types.hpp"

namespace arce {

// ============================================================================
// Problem setup
// ============================================================================

/// Eigen-space form of an equality-constrained least squares problem
///   min |A x - b|^2  s.t.  |x| = r,
/// whose stationarity condition (A^T A + lambda I) x = A^T b reduces, after
/// diagonalizing C = A^T A = U diag(eig) U^T and setting zbar = U^T A^T b / r,
/// to the scalar secular equation in the multiplier lambda:
///   f(lambda) = sum_j zbar_j^2 / (lambda + eig_j)^2 - 1 = 0.
/// Eigenvalues and zbar carry the squared units of A; roots of f come out in
/// the same units.
struct SecularProblem {
  VecX eigenvalues;   ///< Ascending, nonnegative, size d.
  VecX zbar;          ///< Rotated right-hand side over r, size d.
  MatX eigenvectors;  ///< U with columns matching `eigenvalues`.
};

/// One root (or potential root) of the secular equation.
struct SecularRoot {
  double value = 0.0;       ///< Multiplier, same units as the eigenvalues.
  int interval = 0;         ///< 1-based tag: 1 + #{j : value >= -eig_j}.
  bool certified = true;    ///< False for the two members of an ambiguous pair.
  double half_width = 0.0;  ///< Bracket half-width at hand-off to refinement.
};

struct RootSet {
  std::vector<SecularRoot> roots;  ///< Ascending by value.
  /// True when every zbar entry vanishes; f has no roots then.
  bool zero_coefficients = false;
  /// Largest per-search iteration allowance ceil(log2(width / eps)).
  int iteration_bound = 0;
  /// Largest bisection iteration count actually observed.
  int max_iterations = 0;
  /// Internal normalization factor; searches run on (eig, zbar) / scale so
  /// that eps acts on an O(1) problem regardless of physical units.
  double scale = 1.0;
};

struct SecularOptions {
  /// Locate interval minima with a separate derivative bisection stage
  /// instead of the combined value/derivative search.
  bool two_stage = false;
  /// Refine every sign-change bracket by safeguarded Newton to machine
  /// accuracy. Ambiguous pairs are never refined; their spacing is the
  /// resolution statement itself.
  bool polish = true;
};

/// Iterations needed to shrink `width` to `eps` by halving.
inline int bisection_iteration_bound(double width, double eps) {
  if (!(eps > 0.0)) {
    throw ConfigError("bisection_iteration_bound: eps must be positive");
  }
  if (!(width > eps)) return 0;
  return static_cast<int>(std::ceil(std::log2(width / eps)));
}

/// f(lambda) in the raw units of `sp`.
inline double secular_value(const SecularProblem& sp, double lambda) {
  double s = -1.0;
  for (int j = 0; j < sp.eigenvalues.size(); ++j) {
    const double den = lambda + sp.eigenvalues(j);
    s += (sp.zbar(j) / den) * (sp.zbar(j) / den);
  }
  return s;
}

/// f'(lambda) in the raw units of `sp`.
inline double secular_derivative(const SecularProblem& sp, double lambda) {
  double s = 0.0;
  for (int j = 0; j < sp.eigenvalues.size(); ++j) {
    const double den = lambda + sp.eigenvalues(j);
    s -= 2.0 * sp.zbar(j) * sp.zbar(j) / (den * den * den);
  }
  return s;
}

/// Eigen-space form of min |A x - b|^2 s.t. |x| = r from the normal-equation
/// pair C = A^T A (symmetric PSD) and y = A^T b. Tiny negative eigenvalues
/// from rounding clamp to zero.
inline SecularProblem normalize_secular(const MatX& C, const VecX& y, double r) {
  const int d = static_cast<int>(C.rows());
  if (d < 1 || C.cols() != d || y.size() != d) {
    throw ConfigError("normalize_secular: C must be square and match y");
  }
  if (!(r > 0.0)) {
    throw ConfigError("normalize_secular: constraint radius must be positive");
  }
  const double asym = (C - C.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-9 * std::max(C.cwiseAbs().maxCoeff(), 1.0)) {
    throw ConfigError("normalize_secular: C is not symmetric");
  }
  Eigen::SelfAdjointEigenSolver<MatX> eig(MatX(0.5 * (C + C.transpose())));
  if (eig.info() != Eigen::Success) {
    throw NumericalError("normalize_secular: eigendecomposition failed");
  }
  SecularProblem sp;
  sp.eigenvalues = eig.eigenvalues().cwiseMax(0.0);
  sp.eigenvectors = eig.eigenvectors();
  sp.zbar = sp.eigenvectors.transpose() * y / r;
  return sp;
}

// ============================================================================
// Root search
// ============================================================================

namespace detail {

/// One term w / (x + mu)^2 of the secular sum after merging coincident poles.
struct Pole {
  double mu = 0.0;
  double w = 0.0;
};

struct RawRoot {
  double x = 0.0;           ///< Scaled units.
  bool certified = true;
  double half_width = 0.0;  ///< Scaled units.
};

/// State of one secular solve in scaled units. f tends to +infinity at every
/// pole, to -1 at both infinities, and is strictly convex between adjacent
/// poles, which is what every search below leans on.
struct SecularSearch {
  std::vector<Pole> poles;
  double eps = 1e-9;
  bool polish = true;
  std::vector<RawRoot> found;
  int iteration_bound = 0;
  int max_iterations = 0;

  double f(double x) const {
    double s = -1.0;
    for (const auto& p : poles) {
      const double den = x + p.mu;
      s += p.w / (den * den);
    }
    return s;
  }

  double fp(double x) const {
    double s = 0.0;
    for (const auto& p : poles) {
      const double den = x + p.mu;
      s -= 2.0 * p.w / (den * den * den);
    }
    return s;
  }

  /// Safeguarded Newton inside a sign-change bracket [lo, hi] whose lo side
  /// carries sign `sign_lo`. Falls back to halving whenever the Newton step
  /// leaves the bracket.
  double refine(double lo, double hi, int sign_lo) const {
    double x = 0.5 * (lo + hi);
    for (int k = 0; k < 100; ++k) {
      const double fx = f(x);
      if (fx == 0.0) return x;
      if ((fx > 0.0) == (sign_lo > 0)) lo = x; else hi = x;
      const double d = fp(x);
      double xn = x - fx / d;
      if (!std::isfinite(xn) || xn <= lo || xn >= hi) xn = 0.5 * (lo + hi);
      if (std::abs(xn - x) <= 4e-16 * (1.0 + std::abs(xn))) return xn;
      x = xn;
    }
    return x;
  }

  /// Plain bisection over (lo, hi). Endpoints are never evaluated; the lo
  /// side is taken to carry sign `sign_lo` (a pole endpoint counts as the
  /// sign of the one-sided limit). Emits one certified root.
  void bisect(double lo, double hi, int sign_lo) {
    const int bound = bisection_iteration_bound(hi - lo, eps);
    iteration_bound = std::max(iteration_bound, bound);
    int it = 0;
    while (it < bound && hi - lo > eps) {
      const double m = 0.5 * (lo + hi);
      if (m <= lo || m >= hi) break;
      const double fm = f(m);
      ++it;
      if (fm == 0.0) { lo = hi = m; break; }
      if ((fm > 0.0) == (sign_lo > 0)) lo = m; else hi = m;
    }
    max_iterations = std::max(max_iterations, it);
    RawRoot r;
    r.half_width = 0.5 * (hi - lo);
    r.x = (polish && hi > lo) ? refine(lo, hi, sign_lo) : 0.5 * (lo + hi);
    found.push_back(r);
  }

  /// End game of an interior search once the minimizer is pinned inside
  /// [lo, hi] with width <= eps and no negative value has been seen. Either
  /// certify the interval root-free or emit the eps/2 band that may still
  /// hide a (near-)double root as an uncertified pair.
  void resolve_ambiguous(double a, double b, double lo, double hi) {
    const double m = 0.5 * (lo + hi);
    const double vm = f(m);
    if (vm < 0.0) {
      bisect(lo, m, +1);
      bisect(m, hi, -1);
      return;
    }
    if (vm == 0.0) {
      found.push_back({m, true, 0.0});
      return;
    }
    const double dm = fp(m);
    if (vm - std::abs(dm) * 0.5 * eps > 0.0) return;  // certified absent
    double x1, x2;
    if (dm > 0.0) { x1 = m - 0.5 * eps; x2 = m; }
    else if (dm < 0.0) { x1 = m; x2 = m + 0.5 * eps; }
    else { x1 = m - 0.5 * eps; x2 = m + 0.5 * eps; }
    const double margin = 1e-3 * eps;
    x1 = std::clamp(x1, a + margin, b - margin);
    x2 = std::clamp(x2, a + margin, b - margin);
    found.push_back({x1, false, 0.5 * eps});
    found.push_back({x2, false, 0.5 * eps});
  }

  /// Combined search on the open interval (a, b) between adjacent poles.
  /// Each midpoint either splits the interval into two sign-change brackets
  /// (value <= 0) or halves it toward the minimizer (derivative sign).
  void interior_combined(double a, double b) {
    double lo = a, hi = b;
    const int bound = bisection_iteration_bound(b - a, eps);
    iteration_bound = std::max(iteration_bound, bound);
    int it = 0;
    while (it < bound && hi - lo > eps) {
      const double m = 0.5 * (lo + hi);
      if (m <= lo || m >= hi) break;
      const double fm = f(m);
      ++it;
      if (fm < 0.0) {
        max_iterations = std::max(max_iterations, it);
        bisect(lo, m, +1);
        bisect(m, hi, -1);
        return;
      }
      if (fm == 0.0) {
        max_iterations = std::max(max_iterations, it);
        found.push_back({m, true, 0.0});
        const double dm = fp(m);
        if (dm < 0.0) bisect(m, hi, -1);
        else if (dm > 0.0) bisect(lo, m, +1);
        return;
      }
      const double dm = fp(m);
      if (dm > 0.0) {
        hi = m;
      } else if (dm < 0.0) {
        lo = m;
      } else {
        max_iterations = std::max(max_iterations, it);
        return;  // exact minimizer with positive value: no roots
      }
    }
    max_iterations = std::max(max_iterations, it);
    resolve_ambiguous(a, b, lo, hi);
  }

  /// Two-stage search on (a, b): pin the minimizer by bisecting f' to width
  /// eps, then either split there (negative value) or resolve ambiguity.
  void interior_two_stage(double a, double b) {
    double lo = a, hi = b;
    const int bound = bisection_iteration_bound(b - a, eps);
    iteration_bound = std::max(iteration_bound, bound);
    int it = 0;
    while (it < bound && hi - lo > eps) {
      const double m = 0.5 * (lo + hi);
      if (m <= lo || m >= hi) break;
      const double dm = fp(m);
      ++it;
      if (dm == 0.0) { lo = hi = m; break; }
      if (dm < 0.0) lo = m; else hi = m;
    }
    max_iterations = std::max(max_iterations, it);
    const double lam = 0.5 * (lo + hi);
    const double v = f(lam);
    if (v < 0.0) {
      bisect(a, lam, +1);
      bisect(lam, b, -1);
      return;
    }
    if (v == 0.0) {
      found.push_back({lam, true, 0.0});
      return;
    }
    resolve_ambiguous(a, b, std::max(a, lam - 0.5 * eps),
                      std::min(b, lam + 0.5 * eps));
  }

  /// Root left of the smallest pole position -mu_K (largest mu), where f
  /// rises monotonically from -1 to +infinity. The initial bracket
  ///   [-mu_K - sqrt(sum w), -mu_K - sqrt(w_K)]
  /// encloses it in exact arithmetic; endpoints are re-checked and nudged
  /// if rounding flipped their signs.
  void outer_left() {
    const Pole& top = poles.back();
    double wsum = 0.0;
    for (const auto& p : poles) wsum += p.w;
    double lo = -top.mu - std::sqrt(wsum);
    double hi = -top.mu - std::sqrt(top.w);
    if (!(hi - lo > 0.0)) {  // single pole: the bracket collapses to the root
      found.push_back({hi, true, 0.0});
      return;
    }
    for (int k = 0; k < 64 && f(lo) > 0.0; ++k) lo -= (hi - lo);
    for (int k = 0; k < 64 && f(hi) < 0.0; ++k) hi = 0.5 * (hi - top.mu);
    bisect(lo, hi, -1);
  }

  /// Mirror image of outer_left: root right of -mu_1 (smallest mu), where f
  /// falls monotonically from +infinity to -1. Initial bracket
  ///   [-mu_1 + sqrt(w_1), -mu_1 + sqrt(sum w)].
  void outer_right() {
    const Pole& bot = poles.front();
    double wsum = 0.0;
    for (const auto& p : poles) wsum += p.w;
    double lo = -bot.mu + std::sqrt(bot.w);
    double hi = -bot.mu + std::sqrt(wsum);
    if (!(hi - lo > 0.0)) {
      found.push_back({lo, true, 0.0});
      return;
    }
    for (int k = 0; k < 64 && f(lo) < 0.0; ++k) lo = 0.5 * (lo - bot.mu);
    for (int k = 0; k < 64 && f(hi) > 0.0; ++k) hi += (hi - lo);
    bisect(lo, hi, +1);
  }
};

}  // namespace detail

/// All real roots of the secular equation of `sp`, located by bisection to
/// multiplier resolution `eps` (applied after normalizing the problem to
/// O(1) scale) and refined per `opts`. Interval bookkeeping follows the
/// convexity structure: one certified root in each unbounded outer interval
/// whenever any zbar entry is nonzero, and zero, one or two roots between
/// adjacent distinct poles. Interior searches that cannot distinguish a
/// grazing double root from no root at resolution eps emit an uncertified
/// pair bracketing the candidate band instead of guessing.
inline RootSet secular_roots(const SecularProblem& sp, double eps = 1e-9,
                             const SecularOptions& opts = {}) {
  const int d = static_cast<int>(sp.eigenvalues.size());
  if (d < 1 || sp.zbar.size() != d) {
    throw ConfigError("secular_roots: eigenvalues and zbar must match");
  }
  if (!(eps > 0.0)) {
    throw ConfigError("secular_roots: eps must be positive");
  }
  for (int j = 0; j < d; ++j) {
    if (!(sp.eigenvalues(j) >= 0.0) ||
        (j > 0 && sp.eigenvalues(j) < sp.eigenvalues(j - 1))) {
      throw ConfigError("secular_roots: eigenvalues must be ascending and nonnegative");
    }
  }

  RootSet out;
  double scale = std::max(sp.eigenvalues.maxCoeff(), sp.zbar.cwiseAbs().maxCoeff());
  if (!(scale > 0.0)) scale = 1.0;
  out.scale = scale;

  // The equation sum z^2 / (x + l)^2 = 1 is invariant under the joint
  // rescaling (l, z, x) -> (l, z, x) / scale.
  VecX lam = sp.eigenvalues / scale;
  VecX zb = sp.zbar / scale;

  if ((zb.array() == 0.0).all()) {
    out.zero_coefficients = true;
    return out;
  }

  detail::SecularSearch search;
  search.eps = eps;
  search.polish = opts.polish;
  const double merge_tol = 1e-12 * std::max(lam.maxCoeff(), 1.0);
  for (int j = 0; j < d; ++j) {
    if (zb(j) == 0.0) continue;
    const double w = zb(j) * zb(j);
    if (!search.poles.empty() && lam(j) - search.poles.back().mu <= merge_tol) {
      search.poles.back().w += w;
    } else {
      search.poles.push_back({lam(j), w});
    }
  }

  const int k = static_cast<int>(search.poles.size());
  search.outer_left();
  for (int i = k - 2; i >= 0; --i) {  // interior intervals in ascending x order
    const double a = -search.poles[i + 1].mu;
    const double b = -search.poles[i].mu;
    if (opts.two_stage) search.interior_two_stage(a, b);
    else search.interior_combined(a, b);
  }
  search.outer_right();

  // Search domains are disjoint open intervals, so roots never repeat
  // across searches; sorting by value is all the post-processing needed.
  std::vector<detail::RawRoot> raw = std::move(search.found);
  std::stable_sort(raw.begin(), raw.end(),
                   [](const detail::RawRoot& a, const detail::RawRoot& b) {
                     return a.x < b.x;
                   });

  out.iteration_bound = search.iteration_bound;
  out.max_iterations = search.max_iterations;
  for (const auto& r : raw) {
    SecularRoot root;
    root.value = r.x * scale;
    root.certified = r.certified;
    root.half_width = r.half_width * scale;
    root.interval = 1;
    for (int j = 0; j < d; ++j) {
      if (r.x >= -lam(j)) ++root.interval;
    }
    out.roots.push_back(root);
  }
  return out;
}

}  // namespace arce
