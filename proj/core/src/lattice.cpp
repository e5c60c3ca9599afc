#include "modehunt/lattice.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace modehunt {

namespace {

void require_dim(std::size_t d) {
  if (d < 1 || d > static_cast<std::size_t>(kMaxDim)) {
    throw std::invalid_argument("dimension must be in [1, " + std::to_string(kMaxDim) +
                                "], got " + std::to_string(d));
  }
}

void require_width(double h) {
  if (!(h > 0.0) || !std::isfinite(h)) {
    throw std::invalid_argument("bin width must be positive and finite");
  }
}

}  // namespace

BinKey::BinKey(std::initializer_list<std::int64_t> idx)
    : BinKey(std::span<const std::int64_t>(idx.begin(), idx.size())) {}

BinKey::BinKey(std::span<const std::int64_t> idx) {
  require_dim(idx.size());
  dim_ = static_cast<int>(idx.size());
  for (int i = 0; i < dim_; ++i) idx_[static_cast<std::size_t>(i)] = idx[static_cast<std::size_t>(i)];
}

BinKey BinKey::zeros(int dim) {
  require_dim(static_cast<std::size_t>(dim));
  BinKey k;
  k.dim_ = dim;
  return k;
}

void BinKey::set_dim(int dim) {
  require_dim(static_cast<std::size_t>(dim));
  dim_ = dim;
  idx_.fill(0);
}

std::size_t BinKeyHash::operator()(const BinKey& k) const noexcept {
  // splitmix64-style mixing over the active prefix
  std::uint64_t h = 0x9e3779b97f4a7c15ULL ^ static_cast<std::uint64_t>(k.dim());
  for (int i = 0; i < k.dim(); ++i) {
    std::uint64_t x = static_cast<std::uint64_t>(k[i]) + 0x9e3779b97f4a7c15ULL + h;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    h = x ^ (x >> 31);
  }
  return static_cast<std::size_t>(h);
}

std::int64_t sup_dist(const BinKey& a, const BinKey& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("sup_dist: key dimension mismatch");
  std::int64_t m = 0;
  for (int i = 0; i < a.dim(); ++i) {
    std::int64_t d = a[i] >= b[i] ? a[i] - b[i] : b[i] - a[i];
    if (d > m) m = d;
  }
  return m;
}

PointSet::PointSet(int dim) : dim_(dim) {
  require_dim(static_cast<std::size_t>(dim));
}

PointSet PointSet::from_flat(int dim, std::vector<double> data) {
  PointSet p(dim);
  if (data.size() % static_cast<std::size_t>(dim) != 0) {
    throw std::invalid_argument("from_flat: buffer length not a multiple of dimension");
  }
  p.data_ = std::move(data);
  return p;
}

void PointSet::push_back(std::span<const double> p) {
  if (static_cast<int>(p.size()) != dim_) {
    throw std::invalid_argument("point dimension " + std::to_string(p.size()) +
                                " does not match set dimension " + std::to_string(dim_));
  }
  data_.insert(data_.end(), p.begin(), p.end());
}

void PointSet::reserve(std::int64_t n) {
  data_.reserve(static_cast<std::size_t>(n) * static_cast<std::size_t>(dim_));
}

PointSet PointSet::prefix(std::int64_t k) const {
  if (k < 1 || k > size()) throw std::invalid_argument("prefix: k out of range [1, n]");
  PointSet p(dim_);
  p.data_.assign(data_.begin(), data_.begin() + static_cast<std::ptrdiff_t>(k * dim_));
  return p;
}

double sup_dist(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size() || a.empty()) {
    throw std::invalid_argument("sup_dist: dimension mismatch");
  }
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    double d = std::fabs(a[i] - b[i]);
    if (d > m) m = d;
  }
  return m;
}

namespace detail {

std::int64_t checked_floor(double q) {
  if (!std::isfinite(q)) {
    throw std::invalid_argument("bin_index: non-finite coordinate/width quotient");
  }
  double f = std::floor(q);
  // 2^62 guard: well inside int64 so the cast below cannot wrap
  if (f < -4.611686018427387904e18 || f > 4.611686018427387904e18) {
    throw std::invalid_argument("bin_index: quotient exceeds representable bin index range");
  }
  return static_cast<std::int64_t>(f);
}

}  // namespace detail

BinKey bin_index(std::span<const double> x, double h) {
  require_dim(x.size());
  require_width(h);
  BinKey k = BinKey::zeros(static_cast<int>(x.size()));
  bin_index_into(x, h, k);
  return k;
}

void bin_index_into(std::span<const double> x, double h, BinKey& out) {
  for (int i = 0; i < static_cast<int>(x.size()); ++i) {
    double xi = x[static_cast<std::size_t>(i)];
    if (!std::isfinite(xi)) throw std::invalid_argument("bin_index: non-finite coordinate");
    out[i] = detail::checked_floor(xi / h);
  }
}

Point bin_origin(const BinKey& k, double h) {
  require_width(h);
  Point p(static_cast<std::size_t>(k.dim()));
  for (int i = 0; i < k.dim(); ++i) {
    p[static_cast<std::size_t>(i)] = static_cast<double>(k[i]) * h;
  }
  return p;
}

}  // namespace modehunt
