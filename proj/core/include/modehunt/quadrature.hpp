#pragma once

#include <functional>
#include <span>
#include <vector>

namespace modehunt {

/// Adaptive integral of f over [a, b]. tol is a relative error target.
double integrate(const std::function<double(double)>& f, double a, double b, double tol = 1e-12);

/// Integral over [a, b] split at interior breakpoints (where the integrand
/// may be non-smooth); breakpoints outside (a, b) are ignored.
double integrate_segments(const std::function<double(double)>& f, double a, double b,
                          std::span<const double> breakpoints, double tol = 1e-12);

/// Integral of a sup-norm radial profile over R^d:
/// ∫ φ(||x||_∞) dx = ∫_0^rmax φ(s) · d·2^d·s^{d-1} ds.
double integrate_radial(const std::function<double(double)>& profile, int d, double rmax,
                        std::span<const double> breakpoints, double tol = 1e-12);

/// Tensor integral of f over the box [lo, hi], with per-dimension interior
/// breakpoints aligned to the integrand's non-smooth surfaces.
double integrate_box(const std::function<double(std::span<const double>)>& f,
                     std::span<const double> lo, std::span<const double> hi,
                     std::span<const std::vector<double>> breakpoints, double tol = 1e-9);

}  // namespace modehunt
