#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "modehunt/lattice.hpp"
#include "modehunt/rng.hpp"

namespace modehunt {

struct Box {
  Point lo, hi;
  int dim() const { return static_cast<int>(lo.size()); }
  double volume() const;
};

/// A probability density with compact support and a known mode. The test-bed
/// densities are immutable after construction; evaluation is pure.
class Density {
 public:
  virtual ~Density() = default;
  virtual int dim() const = 0;
  virtual double eval(std::span<const double> x) const = 0;
  virtual Box support() const = 0;
  /// Tight upper bound on the density: the rejection envelope height.
  virtual double max_value() const = 0;
  virtual Point mode() const = 0;
  /// Coordinates where the density is non-smooth along one axis (with the
  /// other coordinates free); quadrature aligns panel edges to these.
  virtual std::vector<double> axis_breakpoints(int axis) const;

  double eval_point(const Point& x) const { return eval(std::span<const double>(x)); }
};

/// Multiplicative perturbation of the peak profile: the radial deviation
/// r^beta is scaled by a smooth factor oscillating within [c0, C0]. With
/// c0 = C0 = 1 the profile is the exact power law.
struct PeakWobble {
  double c0 = 1.0;
  double C0 = 1.0;
  double cycles = 1.0;
};

/// Outer support radius R > h0 that makes the peaked profile integrate to
/// one. Closed-form in one dimension; in higher dimensions by bisection
/// against 1-d radial quadrature with the sup-norm shell measure
/// d·2^d·s^{d-1} ds, to tolerance 1e-12.
/// Errors when the peak region alone carries mass >= 1.
double normalize_radius(int d, double beta, double h0, double peak_value,
                        const std::optional<PeakWobble>& wobble = std::nullopt);

/// Synthetic density with a power-law peak: f(x) = peak_value - w(r)·r^beta
/// for r = ||x - mode||_∞ <= h0, decreasing linearly to 0 at the outer
/// radius R, and 0 beyond. R is chosen at construction so the density
/// integrates to one.
class PowerPeakDensity final : public Density {
 public:
  PowerPeakDensity(int d, double beta, double h0, Point mode, double peak_value = 1.0,
                   std::optional<PeakWobble> wobble = std::nullopt);

  double beta() const { return beta_; }
  double h0() const { return h0_; }
  double peak_value() const { return peak_; }
  double outer_radius() const { return R_; }
  const std::optional<PeakWobble>& wobble() const { return wobble_; }

  /// Same profile translated to a new mode (mass is translation invariant,
  /// so no renormalization happens).
  PowerPeakDensity with_mode(Point new_mode) const;

  /// Profile value at sup-norm radius r from the mode.
  double radial(double r) const;

  int dim() const override { return d_; }
  double eval(std::span<const double> x) const override;
  Box support() const override;
  double max_value() const override { return peak_; }
  Point mode() const override { return mode_; }
  std::vector<double> axis_breakpoints(int axis) const override;

 private:
  int d_;
  double beta_, h0_, peak_;
  Point mode_;
  std::optional<PeakWobble> wobble_;
  double R_ = 0.0;
  double edge_ = 0.0;  // profile value at radius h0
};

/// The explicit two-density construction behind the information bound:
/// f1 is the symmetric power-peak density with mode at the origin and peak
/// value 1; f2 = f1 + g flattens f1 on the open box (-h,h)^d and adds a
/// rescaled peak on (0,h)^d, moving the mode to (h/2,...,h/2) while keeping
/// unit mass (∫g = 0). Requires 0 < h <= h0.
class TwoPointPair {
 public:
  TwoPointPair(int d, double beta, double h0, double h);

  int dim() const { return d_; }
  double beta() const { return beta_; }
  double h0() const { return h0_; }
  double h() const { return h_; }
  const PowerPeakDensity& f1() const { return f1_; }

  double eval_f1(std::span<const double> t) const { return f1_.eval(t); }
  /// Three-branch piecewise value; branch membership uses the open boxes
  /// literally, so boundary points fall to the outer branch.
  double eval_f2(std::span<const double> t) const;
  /// The perturbation g with eval_f2 = eval_f1 + eval_g pointwise.
  double eval_g(std::span<const double> t) const;

  double f2_peak_value() const;       // 1 + (2^d - 1) h^beta
  Point f2_mode() const;              // (h/2, ..., h/2)
  /// Density view of f2 (for sampling and experiments).
  std::unique_ptr<Density> f2_density() const;

  /// Chi-squared divergence ∫ f2²/f1 - 1, evaluated as ∫ g²/f1 over the
  /// perturbation box (the two are equal since ∫g = 0 and the densities
  /// agree outside; the g form avoids cancellation at small h).
  double chi_squared(double tol = 1e-11) const;

 private:
  int d_;
  double beta_, h0_, h_;
  PowerPeakDensity f1_;
};

/// n iid draws by rejection from the uniform envelope on the support box
/// with envelope height max_value(). Deterministic given the generator
/// state; expected proposals per accepted draw = height × box volume.
PointSet sample(const Density& f, std::int64_t n, Rng& rng);
PointSet sample(const Density& f, std::int64_t n, std::uint64_t seed);

/// Probability mass of the bin [k*h, (k+1)*h) under f, by quadrature.
double bin_mass(const Density& f, const BinKey& k, double h, double tol = 1e-9);

/// Total mass of f over its support by tensor quadrature (testing aid; the
/// defining property is total_mass == 1).
double total_mass(const Density& f, double tol = 1e-9);

/// Marginal CDF of one coordinate, precomputed by quadrature on a grid and
/// evaluated by monotone linear interpolation. Used for the KS-style
/// sampler checks.
class AxisCdf {
 public:
  AxisCdf(const Density& f, int axis, int grid_cells = 2048, double tol = 1e-9);
  double operator()(double v) const;
  double total() const { return cdf_.back(); }

 private:
  std::vector<double> xs_, cdf_;
};

/// Declared envelope constants for the sandwich checks: inside `radius`
/// of `mode` the density must lie between peak_value - C0·r^beta and
/// peak_value - c0·r^beta; outside it must stay below
/// peak_value - c0·radius^beta.
struct EnvelopeSpec {
  Point mode;
  double peak_value;
  double beta;
  double c0;
  double C0;
  double radius;
};

struct EnvelopeReport {
  bool pass;
  /// Largest violation over all checked points; <= 0 means every
  /// inequality held (the value is then the worst margin).
  double worst_violation;
  Point worst_point;
  std::string worst_kind;  // "upper-envelope", "lower-envelope", "outside-gap"
  std::int64_t points_checked;
};

EnvelopeSpec envelope_spec_for(const PowerPeakDensity& f);
EnvelopeSpec envelope_spec_for_f2(const TwoPointPair& pair);

/// Evaluates the density on a deterministic grid over its support plus
/// seeded random points and checks the declared envelope inequalities.
/// A failed check is a returned report, not an error.
EnvelopeReport check_envelope(const Density& f, const EnvelopeSpec& spec, int grid_per_dim,
                              std::int64_t random_points, std::uint64_t seed);

}  // namespace modehunt
