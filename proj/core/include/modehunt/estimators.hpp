#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "modehunt/lattice.hpp"

namespace modehunt {

struct MonoParams {
  double h;  // bin width, > 0
};

struct MultiParams {
  double b = 2.0;  // scale multiplier, >= 2
  int kappa = 2;   // margin in bins, >= 0
};

/// Oracle bin width c * n^{-1/(d+2*beta)} for the mono-scale estimator.
double theoretical_bandwidth(std::int64_t n, int d, double beta, double c);

/// Finest scale floor(log(n) / (d log b)), computed exactly (the floating
/// quotient is corrected against integer powers of b).
int max_scale(std::int64_t n, int d, double b);

/// Mono-scale estimate: the lower corner k*h of the fullest bin of a single
/// histogram pass at width h. Ties between bins go to the lexicographically
/// smallest index. Note the estimate is the bin corner, not the bin center.
Point mono_mode(const PointSet& points, const MonoParams& params);

/// Per-scale diagnostics for the multiscale estimator.
struct MultiTrace {
  struct Scale {
    int s;
    double h;
    std::int64_t active;  // active points entering this scale
    BinKey argmax;
  };
  std::vector<Scale> scales;
  bool rescaled = false;  // data left the unit box and was affinely mapped
};

/// Multi-scale estimate: recursively refine a histogram at widths b^{-s},
/// s = 1..s_max, keeping after each scale only the points whose bin lies
/// within kappa (sup-norm on keys) of the fullest bin; returns the fullest
/// bin's corner at the finest scale.
///
/// The b^{-s} grids presume data of unit scale, so inputs that leave
/// [0,1]^d are first mapped into it by a componentwise min-max affine map
/// and the estimate is mapped back; data already inside the unit box is
/// binned as-is. When n < b^d the scale loop would be empty, so a single
/// pass at s = 1 is run regardless and the estimator is total for n >= 1.
Point multi_mode(const PointSet& points, const MultiParams& params, MultiTrace* trace = nullptr);

using Estimator = std::function<Point(const PointSet&)>;

/// Applies an estimator to the first k points only. Since the sample is
/// iid, a fixed-index prefix is itself an iid sample of size k; using the
/// prefix keeps results reproducible without threading a seed through.
Point subsampled(const Estimator& estimator, const PointSet& points, std::int64_t k);

}  // namespace modehunt
