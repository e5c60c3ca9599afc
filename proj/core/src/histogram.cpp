#include "modehunt/histogram.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace modehunt {

SparseHistogram::SparseHistogram(double width) : width_(width) {
  if (!(width > 0.0) || !std::isfinite(width)) {
    throw std::invalid_argument("histogram width must be positive and finite");
  }
}

std::int64_t SparseHistogram::count(const BinKey& k) const {
  auto it = counts_.find(k);
  return it == counts_.end() ? 0 : it->second;
}

void SparseHistogram::add(const BinKey& k, std::int64_t c) {
  if (c < 1) throw std::invalid_argument("histogram add: count must be >= 1");
  counts_[k] += c;
  total_ += c;
}

void SparseHistogram::merge_from(const SparseHistogram& other) {
  if (other.width_ != width_) {
    throw std::invalid_argument("histogram merge: widths differ");
  }
  for (const auto& [k, c] : other.counts_) counts_[k] += c;
  total_ += other.total_;
}

SparseHistogram build_histogram(const PointSet& points, double h) {
  if (points.empty()) throw std::invalid_argument("build_histogram: no data");
  SparseHistogram hist(h);
  BinKey key = BinKey::zeros(points.dim());
  const std::int64_t n = points.size();
  for (std::int64_t i = 0; i < n; ++i) {
    bin_index_into(points[i], h, key);
    hist.add(key);
  }
  return hist;
}

BinKey argmax_bin(const SparseHistogram& hist) {
  if (hist.total() == 0) throw std::invalid_argument("argmax_bin: empty histogram");
  const BinKey* best_key = nullptr;
  std::int64_t best_count = 0;
  for (const auto& [k, c] : hist.counts()) {
    if (c > best_count || (c == best_count && (best_key == nullptr || k < *best_key))) {
      best_count = c;
      best_key = &k;
    }
  }
  return *best_key;
}

std::vector<std::pair<BinKey, std::int64_t>> occupied_bins(const SparseHistogram& hist) {
  std::vector<std::pair<BinKey, std::int64_t>> out(hist.counts().begin(), hist.counts().end());
  std::sort(out.begin(), out.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  return out;
}

}  // namespace modehunt
