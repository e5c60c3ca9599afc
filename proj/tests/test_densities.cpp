#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "modehunt/densities.hpp"
#include "modehunt/quadrature.hpp"
#include "modehunt/rng.hpp"

using namespace modehunt;

namespace {

// independent route to the total mass: radial quadrature of the profile
// against the sup-norm shell measure
double radial_mass(const PowerPeakDensity& f) {
  auto profile = [&](double s) { return f.radial(s); };
  std::vector<double> breaks{f.h0()};
  return integrate_radial(profile, f.dim(), f.outer_radius(), breaks, 1e-12);
}

// closed-form peak + tail mass for the exact power profile (test oracle)
double closed_form_mass(int d, double beta, double h0, double P, double R) {
  const double peak = std::pow(2.0, d) * P * std::pow(h0, d) -
                      d * std::pow(2.0, d) / (d + beta) * std::pow(h0, d + beta);
  const double edge = P - std::pow(h0, beta);
  // tail: d 2^d edge/(R-h0) * [R(R^d-h0^d)/d - (R^(d+1)-h0^(d+1))/(d+1)]
  const double tail = d * std::pow(2.0, d) * edge / (R - h0) *
                      (R * (std::pow(R, d) - std::pow(h0, d)) / d -
                       (std::pow(R, d + 1) - std::pow(h0, d + 1)) / (d + 1));
  return peak + tail;
}

}  // namespace

TEST_SUITE("densities") {

TEST_CASE("normalize_radius closed-form case") {
  // d=1, beta=1, h0=0.5, peak 1: peak mass 0.75, tail 0.25 at edge 0.5
  CHECK(normalize_radius(1, 1.0, 0.5, 1.0) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("normalize_radius rejects an overweight peak region") {
  CHECK_THROWS_WITH_AS((void)normalize_radius(1, 2.0, 0.9, 2.0),
                       "peak region too heavy; shrink h0 or peak_value", std::invalid_argument);
  // profile would hit zero inside the peak region
  CHECK_THROWS_AS((void)normalize_radius(1, 0.5, 0.9, 0.8), std::invalid_argument);
}

TEST_CASE("constructed densities integrate to one") {
  for (int d : {1, 2, 3}) {
    for (double beta : {0.5, 1.0, 2.0}) {
      PowerPeakDensity f(d, beta, 0.5, Point(static_cast<std::size_t>(d), 0.3));
      CAPTURE(d);
      CAPTURE(beta);
      CHECK(f.outer_radius() > f.h0());
      CHECK(radial_mass(f) == doctest::Approx(1.0).epsilon(1e-9));
      CHECK(closed_form_mass(d, beta, 0.5, 1.0, f.outer_radius()) ==
            doctest::Approx(1.0).epsilon(1e-9));
    }
  }
  // tensor quadrature route (independent of the radial decomposition)
  PowerPeakDensity f1(1, 2.0, 0.5, Point{0.3});
  CHECK(total_mass(f1, 1e-10) == doctest::Approx(1.0).epsilon(1e-6));
  PowerPeakDensity f2(2, 1.0, 0.5, Point{0.1, -0.2});
  CHECK(total_mass(f2, 1e-7) == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("power peak evaluation") {
  PowerPeakDensity f(2, 2.0, 0.5, Point{1.0, -0.5}, 1.0);
  CHECK(f.eval_point({1.0, -0.5}) == 1.0);
  // both pieces agree at radius h0
  CHECK(f.eval_point({1.5, -0.5}) == doctest::Approx(1.0 - 0.25).epsilon(1e-14));
  CHECK(f.radial(f.h0()) == doctest::Approx(1.0 - 0.25).epsilon(1e-14));
  // compact support
  CHECK(f.eval_point({1.0 + f.outer_radius(), -0.5}) == 0.0);
  CHECK(f.eval_point({9.0, 9.0}) == 0.0);
  CHECK_THROWS_AS((void)f.eval_point({1.0}), std::invalid_argument);
}

TEST_CASE("with_mode translates without renormalizing") {
  PowerPeakDensity f(1, 2.0, 0.5, Point{0.0});
  PowerPeakDensity g = f.with_mode({2.5});
  CHECK(g.outer_radius() == f.outer_radius());
  Rng rng(1);
  for (int i = 0; i < 1000; ++i) {
    double x = rng.uniform(-1.0, 1.0);
    CHECK(f.eval_point({x}) == g.eval_point({x + 2.5}));
  }
}

TEST_CASE("wobbled profile stays inside its declared envelope") {
  PeakWobble w{0.5, 2.0, 1.5};
  PowerPeakDensity f(1, 1.0, 0.4, Point{0.0}, 1.0, w);
  CHECK(radial_mass(f) == doctest::Approx(1.0).epsilon(1e-9));
  auto report = check_envelope(f, envelope_spec_for(f), 101, 4000, 99);
  CHECK(report.pass);
  // deviation actually separates from both bounds somewhere
  bool strict_inside = false;
  for (double r : {0.05, 0.1, 0.2, 0.3}) {
    double dev = 1.0 - f.radial(r);
    if (dev > 0.5 * std::pow(r, 1.0) * 1.0001 && dev < 2.0 * std::pow(r, 1.0) * 0.9999) {
      strict_inside = true;
    }
  }
  CHECK(strict_inside);
}

TEST_CASE("f2 branch values") {
  TwoPointPair pair(1, 1.0, 0.5, 0.1);
  CHECK(pair.eval_f2(Point{0.05}) == doctest::Approx(1.1).epsilon(1e-14));
  CHECK(pair.eval_f2(Point{-0.05}) == doctest::Approx(0.9).epsilon(1e-14));
  CHECK(pair.eval_f2(Point{0.02}) == doctest::Approx(0.98).epsilon(1e-13));
  // outside the perturbation box f2 is f1
  CHECK(pair.eval_f2(Point{0.3}) == pair.eval_f1(Point{0.3}));
  // boundary points fall to the outer branch (open boxes, literally)
  CHECK(pair.eval_f2(Point{0.1}) == pair.eval_f1(Point{0.1}));
  CHECK(pair.f2_peak_value() == doctest::Approx(1.1).epsilon(1e-14));
  CHECK(pair.f2_mode() == Point{0.05});
  CHECK_THROWS_AS(TwoPointPair(1, 1.0, 0.5, 0.6), std::invalid_argument);
  CHECK_THROWS_AS(TwoPointPair(1, 1.0, 0.5, 0.0), std::invalid_argument);
}

TEST_CASE("g vanishes outside, peaks at the new mode, integrates to zero") {
  for (int d : {1, 2}) {
    TwoPointPair pair(d, 1.0, 0.5, 0.1);
    CAPTURE(d);
    CHECK(pair.eval_g(Point(static_cast<std::size_t>(d), 0.2)) == 0.0);
    CHECK(pair.eval_g(Point(static_cast<std::size_t>(d), -0.11)) == 0.0);
    CHECK(pair.eval_g(pair.f2_mode()) ==
          doctest::Approx((std::pow(2.0, d) - 1.0) * 0.1).epsilon(1e-13));

    Point lo(static_cast<std::size_t>(d), -0.1), hi(static_cast<std::size_t>(d), 0.1);
    std::vector<std::vector<double>> breaks(static_cast<std::size_t>(d),
                                            std::vector<double>{0.0, 0.05});
    auto g = [&](std::span<const double> t) { return pair.eval_g(t); };
    CHECK(std::fabs(integrate_box(g, lo, hi, breaks, 1e-11)) < 1e-8);
  }
}

TEST_CASE("pointwise identity f2 = f1 + g") {
  Rng rng(321);
  for (int d : {1, 2}) {
    TwoPointPair pair(d, 2.0, 0.5, 0.2);
    Point t(static_cast<std::size_t>(d));
    for (int i = 0; i < 10000; ++i) {
      // half the points inside the perturbation box, half across the support
      const double range = (i % 2 == 0) ? 0.2 : 1.2;
      for (double& v : t) v = rng.uniform(-range, range);
      CHECK(pair.eval_f2(t) ==
            doctest::Approx(pair.eval_f1(t) + pair.eval_g(t)).epsilon(1e-12));
    }
  }
}

TEST_CASE("f2 has its maximum at h/2") {
  TwoPointPair pair(1, 1.0, 0.5, 0.1);
  const double R = pair.f1().outer_radius();
  const int cells = 4001;
  double best_v = -1.0, best_t = 0.0;
  for (int i = 0; i <= cells; ++i) {
    double t = -R + 2.0 * R * i / cells;
    double v = pair.eval_f2(Point{t});
    if (v > best_v) {
      best_v = v;
      best_t = t;
    }
  }
  CHECK(std::fabs(best_t - 0.05) <= 2.0 * R / cells);

  TwoPointPair pair2(2, 2.0, 0.5, 0.2);
  double best2 = -1.0;
  Point best_pt{0, 0};
  for (int i = 0; i <= 400; ++i) {
    for (int j = 0; j <= 400; ++j) {
      Point t{-0.4 + 0.8 * i / 400, -0.4 + 0.8 * j / 400};
      double v = pair2.eval_f2(t);
      if (v > best2) {
        best2 = v;
        best_pt = t;
      }
    }
  }
  CHECK(sup_dist(best_pt, pair2.f2_mode()) <= 0.8 / 400 + 1e-12);
}

TEST_CASE("chi-squared scaling in h") {
  // d=1, beta=1, h0=0.5: the proof's constant is 2^(2(d+beta+3))/(1-h0^beta) = 2048
  const double bound = 2048.0;
  double prev_ratio = 0.0;
  for (double h : {0.2, 0.1, 0.05, 0.025}) {
    TwoPointPair pair(1, 1.0, 0.5, h);
    const double chi2 = pair.chi_squared();
    CHECK(chi2 > 0.0);
    const double ratio = chi2 / std::pow(h, 3.0);
    CAPTURE(h);
    CHECK(ratio <= bound);
    // the ratio stays bounded as h halves (limit 2/3 with the f1 weight -> 1)
    CHECK(ratio < 1.0);
    CHECK(ratio > 0.5);
    prev_ratio = ratio;
  }
  (void)prev_ratio;
  // h -> 0: divergence vanishes
  TwoPointPair tiny(1, 1.0, 0.5, 0.002);
  CHECK(tiny.chi_squared() < 1e-7);
}

TEST_CASE("sampler draws inside the support box, deterministically") {
  PowerPeakDensity f(2, 2.0, 0.5, Point{0.3, 0.4});
  const Box box = f.support();
  PointSet a = sample(f, 2000, std::uint64_t{77});
  PointSet b = sample(f, 2000, std::uint64_t{77});
  PointSet c = sample(f, 2000, std::uint64_t{78});
  REQUIRE(a.size() == 2000);
  CHECK(std::equal(a.flat().begin(), a.flat().end(), b.flat().begin()));
  CHECK(!std::equal(a.flat().begin(), a.flat().end(), c.flat().begin()));
  for (std::int64_t i = 0; i < a.size(); ++i) {
    auto p = a[i];
    for (int j = 0; j < 2; ++j) {
      CHECK(p[j] >= box.lo[static_cast<std::size_t>(j)]);
      CHECK(p[j] <= box.hi[static_cast<std::size_t>(j)]);
    }
  }
  CHECK_THROWS_AS((void)sample(f, 0, std::uint64_t{1}), std::invalid_argument);
}

TEST_CASE("sampler bin frequencies match quadrature masses") {
  PowerPeakDensity f(1, 2.0, 0.5, Point{0.3});
  const std::int64_t n = 30000;
  PointSet pts = sample(f, n, std::uint64_t{2024});
  const double h = 0.25;
  // count occupancy per bin over the support
  const Box box = f.support();
  const std::int64_t k_lo = static_cast<std::int64_t>(std::floor(box.lo[0] / h));
  const std::int64_t k_hi = static_cast<std::int64_t>(std::floor(box.hi[0] / h));
  for (std::int64_t k = k_lo; k <= k_hi; ++k) {
    const double mass = bin_mass(f, BinKey{k}, h, 1e-10);
    std::int64_t count = 0;
    for (std::int64_t i = 0; i < n; ++i) {
      double x = pts[i][0];
      if (x >= k * h && x < (k + 1) * h) ++count;
    }
    const double freq = static_cast<double>(count) / n;
    const double se = std::sqrt(std::max(mass * (1.0 - mass), 1e-12) / n);
    CAPTURE(k);
    CHECK(std::fabs(freq - mass) <= 4.0 * se + 1e-9);
  }
}

TEST_CASE("KS distance of seeded samples against the quadrature CDF") {
  // alpha = 1e-3 asymptotic critical value: sqrt(-ln(alpha/2)/2) / sqrt(n)
  const double kcrit = 1.9495;
  auto ks_stat = [](std::vector<double> xs, const AxisCdf& cdf) {
    std::sort(xs.begin(), xs.end());
    const double n = static_cast<double>(xs.size());
    double d = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const double F = cdf(xs[i]) / cdf.total();
      d = std::max(d, std::fabs(F - static_cast<double>(i) / n));
      d = std::max(d, std::fabs(static_cast<double>(i + 1) / n - F));
    }
    return d;
  };

  SUBCASE("power peak, d = 1") {
    PowerPeakDensity f(1, 2.0, 0.5, Point{0.3});
    const std::int64_t n = 100000;
    PointSet pts = sample(f, n, std::uint64_t{31337});
    AxisCdf cdf(f, 0);
    CHECK(cdf.total() == doctest::Approx(1.0).epsilon(1e-6));
    std::vector<double> xs(pts.flat().begin(), pts.flat().end());
    CHECK(ks_stat(std::move(xs), cdf) < kcrit / std::sqrt(static_cast<double>(n)));
  }

  SUBCASE("f2, d = 1") {
    TwoPointPair pair(1, 1.0, 0.5, 0.1);
    auto f2 = pair.f2_density();
    const std::int64_t n = 100000;
    PointSet pts = sample(*f2, n, std::uint64_t{4242});
    AxisCdf cdf(*f2, 0);
    CHECK(cdf.total() == doctest::Approx(1.0).epsilon(1e-6));
    std::vector<double> xs(pts.flat().begin(), pts.flat().end());
    CHECK(ks_stat(std::move(xs), cdf) < kcrit / std::sqrt(static_cast<double>(n)));
  }

  SUBCASE("power peak, d = 2, both axes") {
    PowerPeakDensity f(2, 1.0, 0.5, Point{0.1, -0.2});
    const std::int64_t n = 60000;
    PointSet pts = sample(f, n, std::uint64_t{555});
    for (int axis = 0; axis < 2; ++axis) {
      AxisCdf cdf(f, axis, 1024, 1e-8);
      CHECK(cdf.total() == doctest::Approx(1.0).epsilon(1e-4));
      std::vector<double> xs;
      xs.reserve(static_cast<std::size_t>(n));
      for (std::int64_t i = 0; i < n; ++i) xs.push_back(pts[i][axis]);
      CHECK(ks_stat(std::move(xs), cdf) < kcrit / std::sqrt(static_cast<double>(n)));
    }
  }
}

TEST_CASE("check_envelope") {
  SUBCASE("exact power peak passes with zero violation") {
    PowerPeakDensity f(1, 2.0, 0.5, Point{0.3});
    auto report = check_envelope(f, envelope_spec_for(f), 201, 10000, 7);
    CHECK(report.pass);
    CHECK(report.worst_violation <= 1e-12);
    CHECK(report.points_checked >= 10000);
  }

  SUBCASE("f2 passes with the declared constants") {
    for (int d : {1, 2}) {
      for (double beta : {1.0, 2.0}) {
        TwoPointPair pair(d, beta, 0.5, 0.1);
        auto f2 = pair.f2_density();
        auto report = check_envelope(*f2, envelope_spec_for_f2(pair), d == 1 ? 401 : 41, 10000,
                                     13);
        CAPTURE(d);
        CAPTURE(beta);
        CHECK(report.pass);
      }
    }
  }

  SUBCASE("a flattened peak fails with positive violation") {
    struct Corrupt final : Density {
      PowerPeakDensity base{1, 2.0, 0.5, Point{0.0}};
      int dim() const override { return 1; }
      double eval(std::span<const double> x) const override {
        double r = std::fabs(x[0]);
        if (r <= 0.25) return base.peak_value();  // flat top
        return base.eval(x);
      }
      Box support() const override { return base.support(); }
      double max_value() const override { return base.peak_value(); }
      Point mode() const override { return base.mode(); }
    } corrupt;
    auto report = check_envelope(corrupt, envelope_spec_for(corrupt.base), 101, 2000, 3);
    CHECK(!report.pass);
    CHECK(report.worst_violation > 0.0);
    CHECK(report.worst_kind == "upper-envelope");
  }
}

}  // TEST_SUITE
