#include "modehunt/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace modehunt {

namespace {

using GK = boost::math::quadrature::gauss_kronrod<double, 31>;

std::vector<double> segment_edges(double a, double b, std::span<const double> breakpoints) {
  std::vector<double> edges{a};
  for (double x : breakpoints) {
    if (x > a && x < b) edges.push_back(x);
  }
  edges.push_back(b);
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  return edges;
}

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b, double tol) {
  if (a == b) return 0.0;
  return GK::integrate(f, a, b, 15, tol);
}

double integrate_segments(const std::function<double(double)>& f, double a, double b,
                          std::span<const double> breakpoints, double tol) {
  if (!(a < b)) return 0.0;
  double total = 0.0;
  auto edges = segment_edges(a, b, breakpoints);
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    total += integrate(f, edges[i], edges[i + 1], tol);
  }
  return total;
}

double integrate_radial(const std::function<double(double)>& profile, int d, double rmax,
                        std::span<const double> breakpoints, double tol) {
  if (d < 1) throw std::invalid_argument("integrate_radial: d must be >= 1");
  const double shell = static_cast<double>(d) * std::pow(2.0, d);
  auto integrand = [&](double s) {
    return profile(s) * shell * std::pow(s, d - 1);
  };
  return integrate_segments(integrand, 0.0, rmax, breakpoints, tol);
}

double integrate_box(const std::function<double(std::span<const double>)>& f,
                     std::span<const double> lo, std::span<const double> hi,
                     std::span<const std::vector<double>> breakpoints, double tol) {
  const std::size_t d = lo.size();
  if (d == 0 || hi.size() != d) throw std::invalid_argument("integrate_box: bad box");
  if (!breakpoints.empty() && breakpoints.size() != d) {
    throw std::invalid_argument("integrate_box: breakpoints per dimension mismatch");
  }
  std::vector<double> x(d, 0.0);
  static const std::vector<double> kNoBreaks;

  // nested 1-d quadrature, outermost dimension first
  std::function<double(std::size_t)> level = [&](std::size_t dim_idx) -> double {
    const std::vector<double>& br = breakpoints.empty() ? kNoBreaks : breakpoints[dim_idx];
    auto g = [&](double v) -> double {
      x[dim_idx] = v;
      if (dim_idx + 1 == d) return f(x);
      return level(dim_idx + 1);
    };
    return integrate_segments(g, lo[dim_idx], hi[dim_idx], br, tol);
  };
  return level(0);
}

}  // namespace modehunt
