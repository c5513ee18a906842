#ifndef PLANDIS_TREND_HPP
#define PLANDIS_TREND_HPP

#include <string>
#include <vector>

#include "plandis/graph.hpp"

namespace plandis {

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;        // 1 for a perfect fit and for constant data
  double rms_residual = 0.0;
  std::size_t n = 0;
};

LinearFit linear_fit(const std::vector<double>& xs, const std::vector<double>& ys);

// Geometric and power-law fits of positive trace data:
//   log y ~ -rate_per_step * r + c       (rate_per_step > 0 means decay)
//   log y ~ power_exponent * log r + c
struct DecayFit {
  double rate_per_step = 0.0;
  double geometric_r2 = 0.0;
  double geometric_residual = 0.0;
  double power_exponent = 0.0;
  double power_r2 = 0.0;
  double power_residual = 0.0;
  std::size_t points = 0;
};

// Fits the per-annulus maxima of |u| over the given radii. Annuli with
// max |u| = 0 are skipped; fewer than two usable points is DegenerateData.
DecayFit decay_fit(const WeightedGraph& g, const VertexFunction& u, const std::vector<int>& annuli);
// Same on an already-extracted positive trace indexed by radius.
DecayFit decay_fit_trace(const std::vector<int>& radii, const std::vector<double>& values);

enum class TrendClass { DecayingToZero, Flat, Growing, Inconclusive };

std::string to_string(TrendClass t);

struct TrendOptions {
  double slope_tol = 0.02;     // log-scale slope below which a trace is flat
  double min_goodness = 0.9;   // fit quality needed for a decay/growth verdict
  std::size_t min_points = 8;  // annuli needed for a decay verdict
};

struct TrendReport {
  TrendClass cls = TrendClass::Inconclusive;
  LinearFit geometric;   // log y vs r
  LinearFit power;       // log y vs log r
  double best_goodness = 0.0;
  bool exact_zeros = false;  // trace hits exact zeros: counts as decayed
};

// Classifies a nonnegative trace indexed by radius. DecayingToZero needs a
// geometric or power fit with goodness >= min_goodness over >= min_points
// annuli (or exact zeros); |slope| <= slope_tol is Flat; a clearly positive
// slope is Growing.
TrendReport classify_trend(const std::vector<int>& radii, const std::vector<double>& values,
                           const TrendOptions& opts = {});

// Per-radius statistics of a function over spheres S_r.
struct AnnulusTrace {
  std::vector<int> radii;
  std::vector<double> sup;  // max over the sphere
  std::vector<double> min;  // min over the sphere
};

// abs: statistics of |f| instead of f.
AnnulusTrace annulus_trace(const WeightedGraph& g, const VertexFunction& f,
                           const std::vector<int>& radii, bool abs = true);

std::vector<int> radius_range(int lo, int hi);

}  // namespace plandis

#endif  // PLANDIS_TREND_HPP
