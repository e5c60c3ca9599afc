#pragma once

#include <cstdint>
#include <unordered_map>
#include <utility>
#include <vector>

#include "modehunt/lattice.hpp"

namespace modehunt {

/// Sparse array of bin counts over the integer lattice at a fixed bin width.
/// Empty bins are absent; every stored count is >= 1 and the total equals
/// the number of points ingested.
class SparseHistogram {
 public:
  explicit SparseHistogram(double width);

  double width() const { return width_; }
  std::int64_t total() const { return total_; }
  std::size_t occupied() const { return counts_.size(); }
  /// Count for a bin; 0 if the bin is empty.
  std::int64_t count(const BinKey& k) const;

  /// Adds c occurrences of bin k (c >= 1).
  void add(const BinKey& k, std::int64_t c = 1);

  /// Merges counts from another histogram of identical width. Associative,
  /// so sharded construction followed by merges equals a sequential build.
  void merge_from(const SparseHistogram& other);

  const std::unordered_map<BinKey, std::int64_t, BinKeyHash>& counts() const { return counts_; }

 private:
  double width_;
  std::int64_t total_ = 0;
  std::unordered_map<BinKey, std::int64_t, BinKeyHash> counts_;
};

/// Single pass over the points: counts[k] = #{i : bin_index(x_i, h) = k}.
/// Errors on an empty point set ("no data") and h <= 0.
SparseHistogram build_histogram(const PointSet& points, double h);

/// Key with the maximal count; ties broken toward the lexicographically
/// smallest index vector, so the result is deterministic and independent
/// of input order. Errors on an empty histogram.
BinKey argmax_bin(const SparseHistogram& hist);

/// All (key, count) entries sorted lexicographically by key.
std::vector<std::pair<BinKey, std::int64_t>> occupied_bins(const SparseHistogram& hist);

}  // namespace modehunt
