// Copyright 2026 The qstab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <map>
#include <vector>

#include "qstab/core/error.hpp"
#include "qstab/core/rng.hpp"
#include "qstab/qsim/pauli.hpp"

namespace qstab::bench {

using qsim::PauliString;

namespace detail {
using qstab::detail::require;
}  // namespace detail

/// One executed circuit: decay term, sequence length, index within (term, m),
/// estimated expectation and its shot error.
struct DecayRecord {
  PauliString pauli;
  int m = 0;
  int circuit_index = 0;
  double expectation = 0.0;
  double shot_error = 0.0;

  friend bool operator==(const DecayRecord&, const DecayRecord&) = default;
};

/// x(m) = A p^m.
struct DecayFit {
  PauliString pauli;
  double A = 0.0;
  double p = 0.0;
  double sigma_p = 0.0;

  friend bool operator==(const DecayFit&, const DecayFit&) = default;
};

struct DecayPoint {
  double m = 0.0;
  double mean = 0.0;
  double error = 0.0;
};

struct FitOptions {
  int min_lengths = 3;
  int bootstrap = 200;
};

namespace detail {

struct RawFit {
  double A = 0.0;
  double p = 0.0;
  double sigma_p = 0.0;
};

inline int distinct_lengths(const std::vector<DecayPoint>& pts) {
  std::vector<double> ms;
  for (const auto& pt : pts) ms.push_back(pt.m);
  std::sort(ms.begin(), ms.end());
  return static_cast<int>(std::unique(ms.begin(), ms.end()) - ms.begin());
}

/// Weighted log-linear seed, one Gauss-Newton pass on A p^m, p clipped to
/// [0, 1]. Zero errors anywhere switch to unit weights.
inline RawFit fit_points(const std::vector<DecayPoint>& pts, int min_lengths) {
  require(distinct_lengths(pts) >= min_lengths,
          "decay fit needs at least " + std::to_string(min_lengths) + " distinct sequence lengths");
  // Errors at rounding level carry no information; use unit weights then.
  bool weighted = true;
  double max_w = 0.0;
  for (const auto& pt : pts) {
    weighted = weighted && pt.error > 1e-12 && std::isfinite(pt.error);
    if (weighted) max_w = std::max(max_w, 1.0 / (pt.error * pt.error));
  }
  auto weight = [&](const DecayPoint& pt) { return weighted ? 1.0 / (pt.error * pt.error) / max_w : 1.0; };

  std::vector<DecayPoint> pos;
  for (const auto& pt : pts)
    if (pt.mean > 0.0) pos.push_back(pt);
  if (pos.empty()) throw FitError("all decay means are <= 0; the decay cannot be fitted");
  double A = 1.0, p = 1.0;
  auto log_linear = [&](bool use_weights) {
    double sw = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& pt : pos) {
      // Var(ln y) ~ (err / y)^2.
      const double w = use_weights ? (pt.mean * pt.mean) * weight(pt) : 1.0;
      const double y = std::log(pt.mean);
      sw += w;
      sx += w * pt.m;
      sy += w * y;
      sxx += w * pt.m * pt.m;
      sxy += w * pt.m * y;
    }
    const double den = sw * sxx - sx * sx;
    if (!(den > 0.0) || !std::isfinite(den)) return false;
    const double slope = (sw * sxy - sx * sy) / den;
    const double icpt = (sy - slope * sx) / sw;
    if (!std::isfinite(slope) || !std::isfinite(icpt)) return false;
    A = std::exp(icpt);
    p = std::exp(slope);
    return true;
  };
  if (distinct_lengths(pos) < 2 || !(log_linear(weighted) || log_linear(false))) {
    const DecayPoint& pt = pos.front();
    p = pt.m > 0 ? std::pow(std::min(1.0, pt.mean), 1.0 / pt.m) : 1.0;
    A = p > 0.0 ? pt.mean / std::pow(p, pt.m) : pt.mean;
  }
  p = std::clamp(p, 0.0, 1.0);

  auto normal_matrix = [&](double a, double pp, Eigen::Matrix2d& jtwj, Eigen::Vector2d& jtwr, double& cost) {
    jtwj.setZero();
    jtwr.setZero();
    cost = 0.0;
    for (const auto& pt : pts) {
      const double pm = std::pow(pp, pt.m);
      const double dpm = pt.m == 0 ? 0.0 : pt.m * std::pow(pp, pt.m - 1);
      const Eigen::Vector2d j(pm, a * dpm);
      const double r = pt.mean - a * pm;
      const double w = weight(pt);
      jtwj += w * j * j.transpose();
      jtwr += w * r * j;
      cost += w * r * r;
    }
  };

  Eigen::Matrix2d jtwj;
  Eigen::Vector2d jtwr;
  double cost = 0;
  normal_matrix(A, p, jtwj, jtwr, cost);
  if (std::abs(jtwj.determinant()) > 1e-300) {
    const Eigen::Vector2d step = jtwj.ldlt().solve(jtwr);
    double scale = 1.0;
    for (int halving = 0; halving < 30 && step.allFinite(); ++halving, scale *= 0.5) {
      const double a2 = A + scale * step(0);
      const double p2 = std::clamp(p + scale * step(1), 0.0, 1.0);
      Eigen::Matrix2d j2;
      Eigen::Vector2d r2;
      double c2 = 0;
      normal_matrix(a2, p2, j2, r2, c2);
      if (std::isfinite(c2) && std::isfinite(a2) && c2 <= cost) {
        A = a2;
        p = p2;
        jtwj = j2;
        cost = c2;
        break;
      }
    }
  }

  RawFit out{A, p, 0.0};
  if (std::abs(jtwj.determinant()) > 1e-300) {
    Eigen::Matrix2d cov = jtwj.inverse();
    if (!weighted) {
      const int dof = static_cast<int>(pts.size()) - 2;
      cov *= dof > 0 ? cost / dof : 0.0;
    }
    out.sigma_p = std::sqrt(std::max(0.0, cov(1, 1)));
  }
  return out;
}

struct Grouped {
  std::vector<double> ms;
  std::vector<std::vector<double>> values;
  std::vector<std::vector<double>> shot_errors;
};

inline Grouped group_by_m(const std::vector<DecayRecord>& recs) {
  std::map<int, std::pair<std::vector<double>, std::vector<double>>> by_m;
  for (const auto& r : recs) {
    by_m[r.m].first.push_back(r.expectation);
    by_m[r.m].second.push_back(r.shot_error);
  }
  Grouped g;
  for (auto& [m, v] : by_m) {
    g.ms.push_back(m);
    g.values.push_back(std::move(v.first));
    g.shot_errors.push_back(std::move(v.second));
  }
  return g;
}

/// Mean and standard error of the mean; falls back to the propagated shot
/// errors when the circuits agree exactly.
inline DecayPoint summarize(double m, const std::vector<double>& v, const std::vector<double>& se) {
  const double n = static_cast<double>(v.size());
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= n;
  double var = 0.0;
  for (double x : v) var += (x - mean) * (x - mean);
  double err = v.size() > 1 ? std::sqrt(var / (n - 1) / n) : 0.0;
  if (err == 0.0) {
    double s2 = 0.0;
    for (double e : se) s2 += e * e;
    err = std::sqrt(s2) / n;
  }
  return {m, mean, err};
}

}  // namespace detail

/// Fit of pre-aggregated points; sigma_p from the fit covariance.
inline DecayFit fit_decay(const std::vector<DecayPoint>& points, int min_lengths = 3) {
  for (const auto& pt : points)
    detail::require(std::isfinite(pt.mean) && pt.mean >= -1.0 - 1e-12 && pt.mean <= 1.0 + 1e-12,
                    "decay means must lie in [-1, 1]");
  const auto raw = detail::fit_points(points, min_lengths);
  return {PauliString(), raw.A, raw.p, raw.sigma_p};
}

/// Fit of per-circuit records of one decay term. sigma_p is the standard
/// deviation of p over `bootstrap` resamples of circuits within each m
/// (covariance estimate when bootstrap is 0).
inline DecayFit fit_decay(const std::vector<DecayRecord>& records, const FitOptions& opt, Rng rng) {
  detail::require(!records.empty(), "no decay records to fit");
  const auto g = detail::group_by_m(records);
  std::vector<DecayPoint> pts;
  for (std::size_t i = 0; i < g.ms.size(); ++i) pts.push_back(detail::summarize(g.ms[i], g.values[i], g.shot_errors[i]));
  DecayFit fit = fit_decay(pts, opt.min_lengths);
  fit.pauli = records.front().pauli;
  if (opt.bootstrap <= 0) return fit;
  bool varies = false;
  for (const auto& v : g.values)
    for (double x : v) varies = varies || x != v.front();
  if (!varies) {
    bool any_shot = false;
    for (const auto& se : g.shot_errors)
      for (double e : se) any_shot = any_shot || e > 0.0;
    if (!any_shot) fit.sigma_p = 0.0;
    return fit;
  }
  std::vector<double> ps;
  ps.reserve(static_cast<std::size_t>(opt.bootstrap));
  for (int b = 0; b < opt.bootstrap; ++b) {
    std::vector<DecayPoint> bp;
    for (std::size_t i = 0; i < g.ms.size(); ++i) {
      const auto& v = g.values[i];
      const auto& se = g.shot_errors[i];
      std::vector<double> rv(v.size()), rs(v.size());
      for (std::size_t k = 0; k < v.size(); ++k) {
        const auto j = rng.below(v.size());
        rv[k] = v[j];
        rs[k] = se[j];
      }
      bp.push_back(detail::summarize(g.ms[i], rv, rs));
    }
    try {
      ps.push_back(detail::fit_points(bp, opt.min_lengths).p);
    } catch (const FitError&) {
      ps.push_back(0.0);
    }
  }
  double mean = 0.0;
  for (double x : ps) mean += x;
  mean /= static_cast<double>(ps.size());
  double var = 0.0;
  for (double x : ps) var += (x - mean) * (x - mean);
  fit.sigma_p = ps.size() > 1 ? std::sqrt(var / static_cast<double>(ps.size() - 1)) : 0.0;
  return fit;
}

}  // namespace qstab::bench
