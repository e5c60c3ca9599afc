#include "modehunt/estimators.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <unordered_map>

#include "modehunt/histogram.hpp"

namespace modehunt {

double theoretical_bandwidth(std::int64_t n, int d, double beta, double c) {
  if (n < 1) throw std::invalid_argument("theoretical_bandwidth: n must be >= 1");
  if (d < 1) throw std::invalid_argument("theoretical_bandwidth: d must be >= 1");
  if (!(beta > 0.0)) throw std::invalid_argument("theoretical_bandwidth: beta must be > 0");
  if (!(c > 0.0)) throw std::invalid_argument("theoretical_bandwidth: c must be > 0");
  return c * std::pow(static_cast<double>(n), -1.0 / (static_cast<double>(d) + 2.0 * beta));
}

int max_scale(std::int64_t n, int d, double b) {
  if (n < 1) throw std::invalid_argument("max_scale: n must be >= 1");
  if (d < 1) throw std::invalid_argument("max_scale: d must be >= 1");
  if (!(b >= 2.0)) throw std::invalid_argument("max_scale: scale multiplier b must be >= 2");
  int s = static_cast<int>(std::floor(std::log(static_cast<double>(n)) /
                                      (static_cast<double>(d) * std::log(b))));
  if (s < 0) s = 0;
  // correct floating-point drift at exact powers: s_max is the largest s
  // with b^(d*s) <= n
  while (std::pow(b, static_cast<double>(d) * (s + 1)) <= static_cast<double>(n)) ++s;
  while (s > 0 && std::pow(b, static_cast<double>(d) * s) > static_cast<double>(n)) --s;
  return s;
}

Point mono_mode(const PointSet& points, const MonoParams& params) {
  SparseHistogram hist = build_histogram(points, params.h);
  return bin_origin(argmax_bin(hist), params.h);
}

namespace {

void validate_multi(const MultiParams& p) {
  if (!(p.b >= 2.0) || !std::isfinite(p.b)) {
    throw std::invalid_argument("multi_mode: scale multiplier b must be >= 2");
  }
  if (p.kappa < 0) throw std::invalid_argument("multi_mode: margin kappa must be >= 0");
}

}  // namespace

Point multi_mode(const PointSet& points, const MultiParams& params, MultiTrace* trace) {
  validate_multi(params);
  if (points.empty()) throw std::invalid_argument("multi_mode: no data");
  const int d = points.dim();
  const std::int64_t n = points.size();
  const std::span<const double> flat = points.flat();

  // componentwise bounding box (also rejects non-finite coordinates)
  Point lo(static_cast<std::size_t>(d), std::numeric_limits<double>::infinity());
  Point hi(static_cast<std::size_t>(d), -std::numeric_limits<double>::infinity());
  for (std::int64_t i = 0; i < n; ++i) {
    const double* p = flat.data() + i * d;
    for (int j = 0; j < d; ++j) {
      if (!std::isfinite(p[j])) throw std::invalid_argument("multi_mode: non-finite coordinate");
      lo[static_cast<std::size_t>(j)] = std::min(lo[static_cast<std::size_t>(j)], p[j]);
      hi[static_cast<std::size_t>(j)] = std::max(hi[static_cast<std::size_t>(j)], p[j]);
    }
  }
  bool inside_unit = true;
  for (int j = 0; j < d; ++j) {
    if (lo[static_cast<std::size_t>(j)] < 0.0 || hi[static_cast<std::size_t>(j)] > 1.0) {
      inside_unit = false;
      break;
    }
  }
  Point offset(static_cast<std::size_t>(d), 0.0);
  Point scale(static_cast<std::size_t>(d), 1.0);
  if (!inside_unit) {
    for (int j = 0; j < d; ++j) {
      offset[static_cast<std::size_t>(j)] = lo[static_cast<std::size_t>(j)];
      double w = hi[static_cast<std::size_t>(j)] - lo[static_cast<std::size_t>(j)];
      scale[static_cast<std::size_t>(j)] = w > 0.0 ? w : 1.0;
    }
  }
  if (trace != nullptr) {
    trace->scales.clear();
    trace->rescaled = !inside_unit;
  }

  const int s_max = std::max(1, max_scale(n, d, params.b));
  std::vector<std::int64_t> active(static_cast<std::size_t>(n));
  std::iota(active.begin(), active.end(), std::int64_t{0});

  std::unordered_map<BinKey, std::int64_t, BinKeyHash> counts;
  BinKey key = BinKey::zeros(d);
  BinKey best = BinKey::zeros(d);
  double h = 1.0;

  for (int s = 1; s <= s_max; ++s) {
    h = std::pow(params.b, -static_cast<double>(s));
    counts.clear();
    for (std::int64_t idx : active) {
      const double* p = flat.data() + idx * d;
      for (int j = 0; j < d; ++j) {
        double u = (p[j] - offset[static_cast<std::size_t>(j)]) / scale[static_cast<std::size_t>(j)];
        key[j] = detail::checked_floor(u / h);
      }
      ++counts[key];
    }
    if (counts.empty()) throw std::logic_error("multi_mode: active set became empty");

    const BinKey* best_ptr = nullptr;
    std::int64_t best_count = 0;
    for (const auto& [k, c] : counts) {
      if (c > best_count || (c == best_count && (best_ptr == nullptr || k < *best_ptr))) {
        best_count = c;
        best_ptr = &k;
      }
    }
    best = *best_ptr;
    if (trace != nullptr) {
      trace->scales.push_back({s, h, static_cast<std::int64_t>(active.size()), best});
    }

    if (s < s_max) {
      std::size_t kept = 0;
      for (std::size_t t = 0; t < active.size(); ++t) {
        const double* p = flat.data() + active[t] * d;
        for (int j = 0; j < d; ++j) {
          double u = (p[j] - offset[static_cast<std::size_t>(j)]) / scale[static_cast<std::size_t>(j)];
          key[j] = detail::checked_floor(u / h);
        }
        if (sup_dist(key, best) <= params.kappa) active[kept++] = active[t];
      }
      active.resize(kept);
      if (active.empty()) throw std::logic_error("multi_mode: active set became empty");
    }
  }

  Point est(static_cast<std::size_t>(d));
  for (int j = 0; j < d; ++j) {
    est[static_cast<std::size_t>(j)] =
        offset[static_cast<std::size_t>(j)] +
        scale[static_cast<std::size_t>(j)] * (static_cast<double>(best[j]) * h);
  }
  return est;
}

Point subsampled(const Estimator& estimator, const PointSet& points, std::int64_t k) {
  if (k < 1 || k > points.size()) {
    throw std::invalid_argument("subsampled: k must be in [1, n]");
  }
  if (k == points.size()) return estimator(points);
  return estimator(points.prefix(k));
}

}  // namespace modehunt
