#include "modehunt/densities.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "modehunt/quadrature.hpp"

namespace modehunt {

double Box::volume() const {
  double v = 1.0;
  for (std::size_t i = 0; i < lo.size(); ++i) v *= hi[i] - lo[i];
  return v;
}

std::vector<double> Density::axis_breakpoints(int) const { return {}; }

namespace {

double wobble_factor(const std::optional<PeakWobble>& w, double r, double h0) {
  if (!w) return 1.0;
  const double mid = 0.5 * (w->C0 + w->c0);
  const double amp = 0.5 * (w->C0 - w->c0);
  return mid + amp * std::cos(2.0 * std::numbers::pi_v<double> * w->cycles * r / h0);
}

void validate_peak_args(int d, double beta, double h0, double peak_value,
                        const std::optional<PeakWobble>& wobble) {
  if (d < 1 || d > kMaxDim) throw std::invalid_argument("power peak: dimension out of range");
  if (!(beta > 0.0) || !std::isfinite(beta)) {
    throw std::invalid_argument("power peak: beta must be > 0");
  }
  if (!(h0 > 0.0) || !(h0 < 1.0)) {
    throw std::invalid_argument("power peak: h0 must lie in (0, 1)");
  }
  if (!(peak_value > 0.0) || !std::isfinite(peak_value)) {
    throw std::invalid_argument("power peak: peak_value must be > 0");
  }
  if (wobble) {
    if (!(wobble->c0 > 0.0) || !(wobble->c0 <= wobble->C0)) {
      throw std::invalid_argument("power peak: wobble requires 0 < c0 <= C0");
    }
  }
}

double deviation_at(double r, double beta, double h0, const std::optional<PeakWobble>& wobble) {
  return wobble_factor(wobble, r, h0) * std::pow(r, beta);
}

}  // namespace

double normalize_radius(int d, double beta, double h0, double peak_value,
                        const std::optional<PeakWobble>& wobble) {
  validate_peak_args(d, beta, h0, peak_value, wobble);
  const double edge = peak_value - deviation_at(h0, beta, h0, wobble);
  if (!(edge > 0.0)) {
    throw std::invalid_argument("power peak: peak_value too small; profile hits zero inside h0");
  }

  double peak_mass;
  if (!wobble) {
    // closed form for the exact power profile
    peak_mass = std::pow(2.0, d) * peak_value * std::pow(h0, d) -
                static_cast<double>(d) * std::pow(2.0, d) /
                    (static_cast<double>(d) + beta) * std::pow(h0, static_cast<double>(d) + beta);
  } else {
    auto profile = [&](double s) { return peak_value - deviation_at(s, beta, h0, wobble); };
    peak_mass = integrate_radial(profile, d, h0, {}, 1e-13);
  }
  const double remaining = 1.0 - peak_mass;
  if (!(remaining > 0.0)) {
    throw std::invalid_argument("peak region too heavy; shrink h0 or peak_value");
  }

  if (d == 1) {
    // the linear tail carries mass edge*(R - h0) regardless of the peak shape
    return h0 + remaining / edge;
  }

  auto tail_mass = [&](double R) {
    auto integrand = [&](double s) {
      return edge * (R - s) / (R - h0) * static_cast<double>(d) * std::pow(2.0, d) *
             std::pow(s, d - 1);
    };
    return integrate_segments(integrand, h0, R, {}, 1e-13);
  };

  double lo = h0, hi = h0 + 1.0;
  while (tail_mass(hi) < remaining) {
    hi = h0 + 2.0 * (hi - h0);
    if (hi > 1e6) throw std::logic_error("normalize_radius: bisection bracket failed");
  }
  while (hi - lo > 1e-12) {
    double mid = 0.5 * (lo + hi);
    (tail_mass(mid) < remaining ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

PowerPeakDensity::PowerPeakDensity(int d, double beta, double h0, Point mode, double peak_value,
                                   std::optional<PeakWobble> wobble)
    : d_(d), beta_(beta), h0_(h0), peak_(peak_value), mode_(std::move(mode)),
      wobble_(std::move(wobble)) {
  if (static_cast<int>(mode_.size()) != d_) {
    throw std::invalid_argument("power peak: mode dimension mismatch");
  }
  for (double m : mode_) {
    if (!std::isfinite(m)) throw std::invalid_argument("power peak: non-finite mode coordinate");
  }
  R_ = normalize_radius(d_, beta_, h0_, peak_, wobble_);
  edge_ = peak_ - deviation_at(h0_, beta_, h0_, wobble_);
}

PowerPeakDensity PowerPeakDensity::with_mode(Point new_mode) const {
  PowerPeakDensity out = *this;
  if (new_mode.size() != mode_.size()) {
    throw std::invalid_argument("with_mode: dimension mismatch");
  }
  out.mode_ = std::move(new_mode);
  return out;
}

double PowerPeakDensity::radial(double r) const {
  if (r <= h0_) return peak_ - deviation_at(r, beta_, h0_, wobble_);
  if (r >= R_) return 0.0;
  return edge_ * (R_ - r) / (R_ - h0_);
}

double PowerPeakDensity::eval(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != d_) {
    throw std::invalid_argument("power peak eval: dimension mismatch");
  }
  double r = 0.0;
  for (int j = 0; j < d_; ++j) {
    double dj = std::fabs(x[static_cast<std::size_t>(j)] - mode_[static_cast<std::size_t>(j)]);
    if (dj > r) r = dj;
  }
  return radial(r);
}

Box PowerPeakDensity::support() const {
  Box b;
  b.lo.resize(static_cast<std::size_t>(d_));
  b.hi.resize(static_cast<std::size_t>(d_));
  for (int j = 0; j < d_; ++j) {
    b.lo[static_cast<std::size_t>(j)] = mode_[static_cast<std::size_t>(j)] - R_;
    b.hi[static_cast<std::size_t>(j)] = mode_[static_cast<std::size_t>(j)] + R_;
  }
  return b;
}

std::vector<double> PowerPeakDensity::axis_breakpoints(int axis) const {
  const double m = mode_[static_cast<std::size_t>(axis)];
  return {m - R_, m - h0_, m, m + h0_, m + R_};
}

TwoPointPair::TwoPointPair(int d, double beta, double h0, double h)
    : d_(d), beta_(beta), h0_(h0), h_(h),
      f1_(d, beta, h0, Point(static_cast<std::size_t>(d), 0.0), 1.0) {
  if (!(h > 0.0) || !(h <= h0)) {
    throw std::invalid_argument("two-point pair: perturbation width h must lie in (0, h0]");
  }
}

namespace {

// all coordinates strictly inside (lo, hi)
bool in_open_box(std::span<const double> t, double lo, double hi) {
  for (double v : t) {
    if (!(v > lo && v < hi)) return false;
  }
  return true;
}

double sup_norm_to(std::span<const double> t, double center) {
  double r = 0.0;
  for (double v : t) {
    double dv = std::fabs(v - center);
    if (dv > r) r = dv;
  }
  return r;
}

}  // namespace

double TwoPointPair::eval_f2(std::span<const double> t) const {
  if (static_cast<int>(t.size()) != d_) {
    throw std::invalid_argument("eval_f2: dimension mismatch");
  }
  const double hb = std::pow(h_, beta_);
  if (in_open_box(t, 0.0, h_)) {
    double r = sup_norm_to(t, h_ / 2.0);
    return 1.0 + (std::pow(2.0, d_) - 1.0) * hb -
           std::pow(2.0, static_cast<double>(d_) + beta_) * std::pow(r, beta_);
  }
  if (in_open_box(t, -h_, h_)) return 1.0 - hb;
  return f1_.eval(t);
}

double TwoPointPair::eval_g(std::span<const double> t) const {
  if (static_cast<int>(t.size()) != d_) {
    throw std::invalid_argument("eval_g: dimension mismatch");
  }
  const double hb = std::pow(h_, beta_);
  if (in_open_box(t, 0.0, h_)) {
    double r = sup_norm_to(t, h_ / 2.0);
    return (std::pow(2.0, d_) - 1.0) * hb -
           std::pow(2.0, static_cast<double>(d_) + beta_) * std::pow(r, beta_);
  }
  if (in_open_box(t, -h_, h_)) return std::pow(sup_norm_to(t, 0.0), beta_) - hb;
  return 0.0;
}

double TwoPointPair::f2_peak_value() const {
  return 1.0 + (std::pow(2.0, d_) - 1.0) * std::pow(h_, beta_);
}

Point TwoPointPair::f2_mode() const {
  return Point(static_cast<std::size_t>(d_), h_ / 2.0);
}

namespace {

class F2Density final : public Density {
 public:
  explicit F2Density(TwoPointPair pair) : pair_(std::move(pair)) {}

  int dim() const override { return pair_.dim(); }
  double eval(std::span<const double> x) const override { return pair_.eval_f2(x); }
  Box support() const override { return pair_.f1().support(); }
  double max_value() const override { return pair_.f2_peak_value(); }
  Point mode() const override { return pair_.f2_mode(); }
  std::vector<double> axis_breakpoints(int axis) const override {
    auto br = pair_.f1().axis_breakpoints(axis);
    br.push_back(-pair_.h());
    br.push_back(0.0);
    br.push_back(pair_.h() / 2.0);
    br.push_back(pair_.h());
    std::sort(br.begin(), br.end());
    return br;
  }

 private:
  TwoPointPair pair_;
};

}  // namespace

std::unique_ptr<Density> TwoPointPair::f2_density() const {
  return std::make_unique<F2Density>(*this);
}

double TwoPointPair::chi_squared(double tol) const {
  if (!(h_ <= h0_)) {
    throw std::invalid_argument("chi_squared: requires h <= h0");
  }
  // integrand differs from zero only on the perturbation box (-h, h)^d
  Point lo(static_cast<std::size_t>(d_), -h_);
  Point hi(static_cast<std::size_t>(d_), h_);
  std::vector<std::vector<double>> breaks(static_cast<std::size_t>(d_), {0.0, h_ / 2.0});
  auto integrand = [&](std::span<const double> t) {
    double g = eval_g(t);
    return g * g / f1_.eval(t);
  };
  return integrate_box(integrand, lo, hi, breaks, tol);
}

PointSet sample(const Density& f, std::int64_t n, Rng& rng) {
  if (n < 1) throw std::invalid_argument("sample: n must be >= 1");
  const Box box = f.support();
  const int d = f.dim();
  const double height = f.max_value();
  PointSet out(d);
  out.reserve(n);
  std::vector<double> t(static_cast<std::size_t>(d));
  std::vector<double> width(static_cast<std::size_t>(d));
  for (int j = 0; j < d; ++j) {
    width[static_cast<std::size_t>(j)] =
        box.hi[static_cast<std::size_t>(j)] - box.lo[static_cast<std::size_t>(j)];
  }
  while (out.size() < n) {
    for (int j = 0; j < d; ++j) {
      t[static_cast<std::size_t>(j)] =
          box.lo[static_cast<std::size_t>(j)] + width[static_cast<std::size_t>(j)] * rng.uniform01();
    }
    double u = rng.uniform01() * height;
    if (u < f.eval(t)) out.push_back(t);
  }
  return out;
}

PointSet sample(const Density& f, std::int64_t n, std::uint64_t seed) {
  Rng rng(seed);
  return sample(f, n, rng);
}

double bin_mass(const Density& f, const BinKey& k, double h, double tol) {
  if (k.dim() != f.dim()) throw std::invalid_argument("bin_mass: dimension mismatch");
  if (!(h > 0.0)) throw std::invalid_argument("bin_mass: h must be > 0");
  const int d = f.dim();
  Point lo(static_cast<std::size_t>(d)), hi(static_cast<std::size_t>(d));
  std::vector<std::vector<double>> breaks(static_cast<std::size_t>(d));
  for (int j = 0; j < d; ++j) {
    lo[static_cast<std::size_t>(j)] = static_cast<double>(k[j]) * h;
    hi[static_cast<std::size_t>(j)] = static_cast<double>(k[j] + 1) * h;
    breaks[static_cast<std::size_t>(j)] = f.axis_breakpoints(j);
  }
  auto g = [&](std::span<const double> x) { return f.eval(x); };
  return integrate_box(g, lo, hi, breaks, tol);
}

double total_mass(const Density& f, double tol) {
  const Box box = f.support();
  const int d = f.dim();
  std::vector<std::vector<double>> breaks(static_cast<std::size_t>(d));
  for (int j = 0; j < d; ++j) breaks[static_cast<std::size_t>(j)] = f.axis_breakpoints(j);
  auto g = [&](std::span<const double> x) { return f.eval(x); };
  return integrate_box(g, box.lo, box.hi, breaks, tol);
}

AxisCdf::AxisCdf(const Density& f, int axis, int grid_cells, double tol) {
  const int d = f.dim();
  if (axis < 0 || axis >= d) throw std::invalid_argument("AxisCdf: axis out of range");
  if (grid_cells < 16) throw std::invalid_argument("AxisCdf: grid too coarse");
  const Box box = f.support();
  const double a = box.lo[static_cast<std::size_t>(axis)];
  const double b = box.hi[static_cast<std::size_t>(axis)];

  // marginal density of the chosen coordinate
  std::vector<double> other_lo, other_hi;
  std::vector<std::vector<double>> other_breaks;
  for (int j = 0; j < d; ++j) {
    if (j == axis) continue;
    other_lo.push_back(box.lo[static_cast<std::size_t>(j)]);
    other_hi.push_back(box.hi[static_cast<std::size_t>(j)]);
    other_breaks.push_back(f.axis_breakpoints(j));
  }
  std::vector<double> full(static_cast<std::size_t>(d));
  auto marginal = [&](double v) -> double {
    if (d == 1) {
      full[0] = v;
      return f.eval(full);
    }
    auto g = [&](std::span<const double> rest) {
      int r = 0;
      for (int j = 0; j < d; ++j) {
        full[static_cast<std::size_t>(j)] =
            (j == axis) ? v : rest[static_cast<std::size_t>(r++)];
      }
      return f.eval(full);
    };
    return integrate_box(g, other_lo, other_hi, other_breaks, tol);
  };

  // grid nodes: uniform plus the axis breakpoints, so Simpson panels do not
  // straddle kinks
  xs_.reserve(static_cast<std::size_t>(grid_cells) + 8);
  for (int i = 0; i <= grid_cells; ++i) {
    xs_.push_back(a + (b - a) * static_cast<double>(i) / grid_cells);
  }
  for (double br : f.axis_breakpoints(axis)) {
    if (br > a && br < b) xs_.push_back(br);
  }
  std::sort(xs_.begin(), xs_.end());
  xs_.erase(std::unique(xs_.begin(), xs_.end()), xs_.end());

  cdf_.assign(xs_.size(), 0.0);
  double prev_m = marginal(xs_[0]);
  for (std::size_t i = 1; i < xs_.size(); ++i) {
    const double dx = xs_[i] - xs_[i - 1];
    const double mid = marginal(0.5 * (xs_[i - 1] + xs_[i]));
    const double cur = marginal(xs_[i]);
    cdf_[i] = cdf_[i - 1] + dx / 6.0 * (prev_m + 4.0 * mid + cur);
    prev_m = cur;
  }
}

double AxisCdf::operator()(double v) const {
  if (v <= xs_.front()) return 0.0;
  if (v >= xs_.back()) return cdf_.back();
  auto it = std::upper_bound(xs_.begin(), xs_.end(), v);
  std::size_t i = static_cast<std::size_t>(it - xs_.begin());
  const double t = (v - xs_[i - 1]) / (xs_[i] - xs_[i - 1]);
  return cdf_[i - 1] + t * (cdf_[i] - cdf_[i - 1]);
}

EnvelopeSpec envelope_spec_for(const PowerPeakDensity& f) {
  const double c0 = f.wobble() ? f.wobble()->c0 : 1.0;
  const double C0 = f.wobble() ? f.wobble()->C0 : 1.0;
  return {f.mode(), f.peak_value(), f.beta(), c0, C0, f.h0()};
}

EnvelopeSpec envelope_spec_for_f2(const TwoPointPair& pair) {
  return {pair.f2_mode(), pair.f2_peak_value(), pair.beta(),
          std::pow(2.0, -pair.beta()),
          std::pow(2.0, static_cast<double>(pair.dim()) + pair.beta()),
          pair.h0() - pair.h() / 2.0};
}

EnvelopeReport check_envelope(const Density& f, const EnvelopeSpec& spec, int grid_per_dim,
                              std::int64_t random_points, std::uint64_t seed) {
  const int d = f.dim();
  if (static_cast<int>(spec.mode.size()) != d) {
    throw std::invalid_argument("check_envelope: mode dimension mismatch");
  }
  if (grid_per_dim < 2) throw std::invalid_argument("check_envelope: grid_per_dim must be >= 2");
  const Box box = f.support();

  EnvelopeReport report;
  report.pass = true;
  report.worst_violation = -std::numeric_limits<double>::infinity();
  report.points_checked = 0;

  auto consider = [&](const Point& x) {
    double r = sup_dist(std::span<const double>(x), std::span<const double>(spec.mode));
    double fx = f.eval(x);
    double viol;
    const char* kind;
    if (r <= spec.radius) {
      double upper = fx - (spec.peak_value - spec.c0 * std::pow(r, spec.beta));
      double lower = (spec.peak_value - spec.C0 * std::pow(r, spec.beta)) - fx;
      if (upper >= lower) {
        viol = upper;
        kind = "upper-envelope";
      } else {
        viol = lower;
        kind = "lower-envelope";
      }
    } else {
      viol = fx - (spec.peak_value - spec.c0 * std::pow(spec.radius, spec.beta));
      kind = "outside-gap";
    }
    ++report.points_checked;
    if (viol > report.worst_violation) {
      report.worst_violation = viol;
      report.worst_point = x;
      report.worst_kind = kind;
    }
  };

  // deterministic grid over the support box, plus the declared mode
  Point x(static_cast<std::size_t>(d));
  std::vector<int> idx(static_cast<std::size_t>(d), 0);
  bool done = false;
  while (!done) {
    for (int j = 0; j < d; ++j) {
      double t = static_cast<double>(idx[static_cast<std::size_t>(j)]) / (grid_per_dim - 1);
      x[static_cast<std::size_t>(j)] = box.lo[static_cast<std::size_t>(j)] +
                                       t * (box.hi[static_cast<std::size_t>(j)] -
                                            box.lo[static_cast<std::size_t>(j)]);
    }
    consider(x);
    int j = 0;
    for (; j < d; ++j) {
      if (++idx[static_cast<std::size_t>(j)] < grid_per_dim) break;
      idx[static_cast<std::size_t>(j)] = 0;
    }
    done = (j == d);
  }
  consider(spec.mode);

  // random points: half over the support box, half concentrated within the
  // declared radius where the sandwich bites
  Rng rng(seed);
  for (std::int64_t i = 0; i < random_points; ++i) {
    if (i % 2 == 0) {
      for (int j = 0; j < d; ++j) {
        x[static_cast<std::size_t>(j)] = rng.uniform(box.lo[static_cast<std::size_t>(j)],
                                                     box.hi[static_cast<std::size_t>(j)]);
      }
    } else {
      for (int j = 0; j < d; ++j) {
        x[static_cast<std::size_t>(j)] =
            spec.mode[static_cast<std::size_t>(j)] + rng.uniform(-spec.radius, spec.radius);
      }
    }
    consider(x);
  }

  const double slack = 1e-10 * std::max(1.0, spec.peak_value);
  report.pass = report.worst_violation <= slack;
  return report;
}

}  // namespace modehunt
