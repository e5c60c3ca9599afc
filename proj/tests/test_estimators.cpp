#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "modehunt/densities.hpp"
#include "modehunt/estimators.hpp"
#include "modehunt/histogram.hpp"
#include "modehunt/rng.hpp"

using namespace modehunt;

namespace {

PointSet points_1d(std::initializer_list<double> xs) {
  PointSet p(1);
  for (double x : xs) p.push_back({x});
  return p;
}

PointSet random_unit_box(Rng& rng, int max_n, int max_d) {
  const int d = static_cast<int>(rng.uniform_int(1, max_d));
  const std::int64_t n = rng.uniform_int(1, max_n);
  PointSet pts(d);
  std::vector<double> row(static_cast<std::size_t>(d));
  for (std::int64_t i = 0; i < n; ++i) {
    for (double& v : row) v = rng.uniform01();
    pts.push_back(row);
  }
  return pts;
}

}  // namespace

TEST_SUITE("estimators") {

TEST_CASE("theoretical_bandwidth") {
  CHECK(theoretical_bandwidth(100000, 1, 2.0, 1.0) == doctest::Approx(0.1).epsilon(1e-12));
  CHECK(theoretical_bandwidth(1, 3, 0.7, 2.5) == doctest::Approx(2.5).epsilon(1e-15));
  // n = 2^(d+2*beta) with c = 1 gives exactly 1/2
  CHECK(theoretical_bandwidth(32, 1, 2.0, 1.0) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK_THROWS_AS((void)theoretical_bandwidth(0, 1, 2.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS((void)theoretical_bandwidth(10, 1, 0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS((void)theoretical_bandwidth(10, 1, 2.0, 0.0), std::invalid_argument);
}

TEST_CASE("max_scale") {
  CHECK(max_scale(1000, 1, 2.0) == 9);
  CHECK(max_scale(1000, 2, 2.0) == 4);
  CHECK(max_scale(1, 1, 2.0) == 0);
  // exact powers must not lose a scale to floating-point drift
  CHECK(max_scale(1024, 1, 2.0) == 10);
  CHECK(max_scale(1 << 20, 2, 2.0) == 10);
  CHECK(max_scale(81, 2, 3.0) == 2);
  CHECK_THROWS_AS((void)max_scale(10, 1, 1.5), std::invalid_argument);
}

TEST_CASE("mono_mode examples") {
  CHECK(mono_mode(points_1d({0.1, 0.15, 0.9}), MonoParams{0.5}) == Point{0.0});
  // single point: the only occupied bin
  Point x{3.71};
  CHECK(mono_mode(points_1d({3.71}), MonoParams{0.4}) ==
        bin_origin(bin_index(x, 0.4), 0.4));
  PointSet empty(1);
  CHECK_THROWS_AS((void)mono_mode(empty, MonoParams{0.5}), std::invalid_argument);
}

TEST_CASE("multi_mode hand trace") {
  // s_max = 2; s=1 (h=0.5): bins {0:3, 1:1}, argmax 0, margin 1 keeps all;
  // s=2 (h=0.25): bins {0:3, 3:1}, argmax 0; corner 0*0.25 = 0
  MultiTrace trace;
  Point est = multi_mode(points_1d({0.11, 0.12, 0.13, 0.81}), MultiParams{2.0, 1}, &trace);
  CHECK(est == Point{0.0});
  REQUIRE(trace.scales.size() == 2);
  CHECK(trace.rescaled == false);
  CHECK(trace.scales[0].h == 0.5);
  CHECK(trace.scales[0].active == 4);
  CHECK(trace.scales[0].argmax == BinKey{0});
  CHECK(trace.scales[1].active == 4);  // bin 1 is within margin 1 of bin 0
  CHECK(trace.scales[1].argmax == BinKey{0});
}

TEST_CASE("multi_mode single point and parameter validation") {
  Point est = multi_mode(points_1d({0.3}), MultiParams{2.0, 2});
  // s_max = 0 falls back to one pass at s = 1
  CHECK(est == bin_origin(bin_index(Point{0.3}, 0.5), 0.5));
  CHECK_THROWS_AS((void)multi_mode(points_1d({0.3}), MultiParams{1.5, 2}), std::invalid_argument);
  CHECK_THROWS_AS((void)multi_mode(points_1d({0.3}), MultiParams{2.0, -1}), std::invalid_argument);
}

TEST_CASE("oversized margin reduces multi_mode to mono_mode at the finest scale") {
  Rng rng(505);
  for (int t = 0; t < 200; ++t) {
    PointSet pts = random_unit_box(rng, 200, 3);
    const double b = 2.0;
    const int smax = std::max(1, max_scale(pts.size(), pts.dim(), b));
    // margin larger than the data diameter in bins at every scale
    const int kappa = static_cast<int>(std::pow(b, smax)) + 2;
    Point multi = multi_mode(pts, MultiParams{b, kappa});
    Point mono = mono_mode(pts, MonoParams{std::pow(b, -smax)});
    CHECK(multi == mono);
  }
}

TEST_CASE("estimators are deterministic under permutation") {
  Rng rng(606);
  for (int t = 0; t < 40; ++t) {
    PointSet pts = random_unit_box(rng, 150, 2);
    Point mono_ref = mono_mode(pts, MonoParams{0.2});
    Point multi_ref = multi_mode(pts, MultiParams{2.0, 1});

    std::vector<std::int64_t> order(static_cast<std::size_t>(pts.size()));
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<std::int64_t>(i);
    for (std::size_t i = order.size(); i > 1; --i) {
      std::swap(order[i - 1], order[static_cast<std::size_t>(rng.uniform_int(
                                  0, static_cast<std::int64_t>(i) - 1))]);
    }
    PointSet shuffled(pts.dim());
    for (std::int64_t idx : order) shuffled.push_back(pts[idx]);
    CHECK(mono_mode(shuffled, MonoParams{0.2}) == mono_ref);
    CHECK(multi_mode(shuffled, MultiParams{2.0, 1}) == multi_ref);
  }
}

TEST_CASE("mono_mode grid-shift equivariance (power-of-two widths)") {
  Rng rng(707);
  const double h = 0.125;
  for (int t = 0; t < 50; ++t) {
    const int d = static_cast<int>(rng.uniform_int(1, 2));
    PointSet pts(d);
    std::vector<double> row(static_cast<std::size_t>(d));
    const std::int64_t n = rng.uniform_int(2, 60);
    for (std::int64_t i = 0; i < n; ++i) {
      for (double& v : row) v = static_cast<double>(rng.uniform_int(-4000, 4000)) * 0x1.0p-12;
      pts.push_back(row);
    }
    Point base = mono_mode(pts, MonoParams{h});

    Point shift(static_cast<std::size_t>(d));
    for (double& v : shift) v = static_cast<double>(rng.uniform_int(-20, 20)) * h;
    PointSet moved(d);
    for (std::int64_t i = 0; i < n; ++i) {
      auto p = pts[i];
      for (int j = 0; j < d; ++j) row[static_cast<std::size_t>(j)] = p[j] + shift[j];
      moved.push_back(row);
    }
    Point got = mono_mode(moved, MonoParams{h});
    for (int j = 0; j < d; ++j) {
      CHECK(got[static_cast<std::size_t>(j)] ==
            doctest::Approx(base[static_cast<std::size_t>(j)] + shift[static_cast<std::size_t>(j)])
                .epsilon(1e-14));
    }
  }
}

TEST_CASE("multi_mode active set never grows") {
  Rng rng(808);
  for (int t = 0; t < 60; ++t) {
    PointSet pts = random_unit_box(rng, 400, 2);
    MultiTrace trace;
    (void)multi_mode(pts, MultiParams{2.0, 1}, &trace);
    for (std::size_t s = 1; s < trace.scales.size(); ++s) {
      CHECK(trace.scales[s].active <= trace.scales[s - 1].active);
    }
    REQUIRE(!trace.scales.empty());
    CHECK(trace.scales.front().active == pts.size());
  }
}

TEST_CASE("multi_mode rescales data that leaves the unit box") {
  // cluster near 5000.3, one outlier; the min-max map must bring the
  // estimate back to raw coordinates near the cluster
  PointSet pts(1);
  Rng rng(909);
  for (int i = 0; i < 400; ++i) pts.push_back({5000.3 + 0.01 * rng.uniform01()});
  for (int i = 0; i < 20; ++i) pts.push_back({5003.0 + 0.5 * rng.uniform01()});
  MultiTrace trace;
  Point est = multi_mode(pts, MultiParams{2.0, 2}, &trace);
  CHECK(trace.rescaled == true);
  CHECK(est[0] > 5000.0);
  CHECK(est[0] < 5000.5);
}

TEST_CASE("subsampled wrapper") {
  Estimator mono = [](const PointSet& p) { return mono_mode(p, MonoParams{0.5}); };
  PointSet pts = points_1d({0.1, 0.15, 0.9, 0.92, 0.93});
  CHECK(subsampled(mono, pts, pts.size()) == mono(pts));
  // k = 1: estimate from the first point only
  CHECK(subsampled(mono, pts, 1) == mono_mode(points_1d({0.1}), MonoParams{0.5}));
  CHECK_THROWS_AS((void)subsampled(mono, pts, 0), std::invalid_argument);
  CHECK_THROWS_AS((void)subsampled(mono, pts, 6), std::invalid_argument);
}

TEST_CASE("mono_mode lands near a power-peak mode at the oracle bandwidth") {
  // light version of the rate experiments: most reps land within 5h
  const PowerPeakDensity f(1, 2.0, 0.5, Point{0.3});
  const std::int64_t n = 10000;
  const double h = theoretical_bandwidth(n, 1, 2.0, 1.0);
  int hits = 0;
  const int reps = 40;
  for (int rep = 0; rep < reps; ++rep) {
    PointSet pts = sample(f, n, derive_seed(42, 0, static_cast<std::uint64_t>(rep)));
    Point est = mono_mode(pts, MonoParams{h});
    if (sup_dist(est, f.mode()) <= 5.0 * h) ++hits;
  }
  CHECK(static_cast<double>(hits) / reps >= 0.9);
}

}  // TEST_SUITE
