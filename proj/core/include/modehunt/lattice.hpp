#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <vector>

namespace modehunt {

/// A point in R^d; the dimension is the length of the vector.
using Point = std::vector<double>;

/// Hard cap on the ambient dimension of lattice keys. The mode-estimation
/// setting has a strong curse of dimensionality, so small fixed d is the
/// working regime; capping lets keys live inline with no heap traffic in
/// the counting loops.
inline constexpr int kMaxDim = 8;

/// Integer lattice index of the hypercube bin [k*h, (k+1)*h).
class BinKey {
 public:
  BinKey() = default;
  BinKey(std::initializer_list<std::int64_t> idx);
  explicit BinKey(std::span<const std::int64_t> idx);
  static BinKey zeros(int dim);

  int dim() const { return dim_; }
  std::int64_t operator[](int i) const { return idx_[static_cast<std::size_t>(i)]; }
  std::int64_t& operator[](int i) { return idx_[static_cast<std::size_t>(i)]; }
  /// Sets the dimension; new components are zero.
  void set_dim(int dim);

  friend bool operator==(const BinKey& a, const BinKey& b) {
    if (a.dim_ != b.dim_) return false;
    for (int i = 0; i < a.dim_; ++i) {
      if (a.idx_[static_cast<std::size_t>(i)] != b.idx_[static_cast<std::size_t>(i)]) return false;
    }
    return true;
  }

  /// Lexicographic order on the index vector (the deterministic tie rule).
  friend std::strong_ordering operator<=>(const BinKey& a, const BinKey& b) {
    int n = a.dim_ < b.dim_ ? a.dim_ : b.dim_;
    for (int i = 0; i < n; ++i) {
      auto c = a.idx_[static_cast<std::size_t>(i)] <=> b.idx_[static_cast<std::size_t>(i)];
      if (c != std::strong_ordering::equal) return c;
    }
    return a.dim_ <=> b.dim_;
  }

 private:
  std::array<std::int64_t, kMaxDim> idx_{};
  int dim_ = 0;
};

struct BinKeyHash {
  std::size_t operator()(const BinKey& k) const noexcept;
};

/// Sup-norm distance between two keys; used by the multiscale margin rule.
std::int64_t sup_dist(const BinKey& a, const BinKey& b);

/// Flat row-major storage for n points of common dimension d.
class PointSet {
 public:
  explicit PointSet(int dim);
  /// Adopts a flat row-major buffer; its length must be a multiple of dim.
  static PointSet from_flat(int dim, std::vector<double> data);

  int dim() const { return dim_; }
  std::int64_t size() const { return static_cast<std::int64_t>(data_.size()) / dim_; }
  bool empty() const { return data_.empty(); }
  std::span<const double> operator[](std::int64_t i) const {
    return {data_.data() + static_cast<std::size_t>(i) * static_cast<std::size_t>(dim_),
            static_cast<std::size_t>(dim_)};
  }
  void push_back(std::span<const double> p);
  void push_back(std::initializer_list<double> p) {
    push_back(std::span<const double>(p.begin(), p.size()));
  }
  void reserve(std::int64_t n);
  /// Copy of the first k points (1 <= k <= size).
  PointSet prefix(std::int64_t k) const;
  std::span<const double> flat() const { return data_; }

 private:
  int dim_;
  std::vector<double> data_;
};

/// max_i |a_i - b_i|; errors on dimension mismatch.
double sup_dist(std::span<const double> a, std::span<const double> b);

/// Componentwise floor(x/h): the index of the bin [k*h, (k+1)*h) holding x.
/// Errors on h <= 0, non-finite coordinates, and quotients too large for a
/// signed 64-bit index (silent wraparound would corrupt the argmax).
BinKey bin_index(std::span<const double> x, double h);

/// Same as bin_index but writes into an existing key of matching dimension.
void bin_index_into(std::span<const double> x, double h, BinKey& out);

/// The lower corner k*h of a bin. Each coordinate is the double nearest the
/// real product, which can land one ulp below the true corner when k*h is
/// not representable; bin_index(bin_origin(k,h),h) == k is therefore exact
/// for widths that keep k*h representable (e.g. power-of-two h) and within
/// one bin otherwise.
Point bin_origin(const BinKey& k, double h);

namespace detail {
/// floor(q) as a checked signed 64-bit value; q must be finite and within
/// the guarded range. Shared by bin_index and the multiscale inner loop so
/// both paths bin identically.
std::int64_t checked_floor(double q);
}  // namespace detail

}  // namespace modehunt
