#include "plandis/trend.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace plandis {

LinearFit linear_fit(const std::vector<double>& xs, const std::vector<double>& ys) {
  LinearFit fit;
  fit.n = xs.size();
  if (xs.size() != ys.size() || xs.size() < 2) {
    throw DegenerateData("linear fit needs at least two points");
  }
  const double n = static_cast<double>(xs.size());
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double dx = xs[i] - mx, dy = ys[i] - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (sxx == 0.0) throw DegenerateData("linear fit needs distinct abscissae");
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss_res = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double r = ys[i] - (fit.intercept + fit.slope * xs[i]);
    ss_res += r * r;
  }
  fit.rms_residual = std::sqrt(ss_res / n);
  fit.r2 = (syy == 0.0) ? 1.0 : 1.0 - ss_res / syy;
  return fit;
}

DecayFit decay_fit_trace(const std::vector<int>& radii, const std::vector<double>& values) {
  if (radii.size() != values.size()) throw DegenerateData("trace size mismatch");
  std::vector<double> rs, logrs, logys;
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (values[i] > 0.0 && std::isfinite(values[i])) {
      rs.push_back(static_cast<double>(radii[i]));
      if (radii[i] > 0) logrs.push_back(std::log(static_cast<double>(radii[i])));
      logys.push_back(std::log(values[i]));
    }
  }
  if (logys.size() < 2) throw DegenerateData("decay fit needs two nonzero annuli");
  DecayFit out;
  out.points = logys.size();
  const LinearFit geo = linear_fit(rs, logys);
  out.rate_per_step = -geo.slope;
  out.geometric_r2 = geo.r2;
  out.geometric_residual = geo.rms_residual;
  // Power fit only over radii >= 1 (log r undefined at the root).
  if (logrs.size() >= 2) {
    std::vector<double> ys_pos;
    std::size_t j = 0;
    for (std::size_t i = 0; i < radii.size(); ++i) {
      if (values[i] > 0.0 && std::isfinite(values[i])) {
        if (radii[i] > 0) ys_pos.push_back(logys[j]);
        ++j;
      }
    }
    const LinearFit pow_fit = linear_fit(logrs, ys_pos);
    out.power_exponent = pow_fit.slope;
    out.power_r2 = pow_fit.r2;
    out.power_residual = pow_fit.rms_residual;
  }
  return out;
}

DecayFit decay_fit(const WeightedGraph& g, const VertexFunction& u, const std::vector<int>& annuli) {
  const AnnulusTrace trace = annulus_trace(g, u, annuli, /*abs=*/true);
  return decay_fit_trace(trace.radii, trace.sup);
}

std::string to_string(TrendClass t) {
  switch (t) {
    case TrendClass::DecayingToZero: return "decaying-to-zero";
    case TrendClass::Flat: return "flat";
    case TrendClass::Growing: return "growing";
    default: return "inconclusive";
  }
}

TrendReport classify_trend(const std::vector<int>& radii, const std::vector<double>& values,
                           const TrendOptions& opts) {
  TrendReport rep;
  if (radii.size() != values.size() || values.empty()) {
    throw DegenerateData("trend classification needs a nonempty trace");
  }
  std::size_t zeros = 0;
  for (const double v : values) {
    if (v < 0.0) throw DegenerateData("trend traces must be nonnegative");
    if (v == 0.0) ++zeros;
  }
  // A trace that reaches exact zero witnesses the decay directly.
  if (zeros > 0) {
    rep.exact_zeros = true;
    rep.cls = TrendClass::DecayingToZero;
    rep.best_goodness = 1.0;
    return rep;
  }

  std::vector<double> rs, logrs, logys, logys_pos;
  for (std::size_t i = 0; i < values.size(); ++i) {
    rs.push_back(static_cast<double>(radii[i]));
    logys.push_back(std::log(values[i]));
    if (radii[i] > 0) {
      logrs.push_back(std::log(static_cast<double>(radii[i])));
      logys_pos.push_back(std::log(values[i]));
    }
  }
  if (rs.size() < 2) {
    rep.cls = TrendClass::Inconclusive;
    return rep;
  }
  rep.geometric = linear_fit(rs, logys);
  bool have_power = false;
  if (logrs.size() >= 2 &&
      *std::max_element(logrs.begin(), logrs.end()) >
          *std::min_element(logrs.begin(), logrs.end())) {
    rep.power = linear_fit(logrs, logys_pos);
    have_power = true;
  }

  const double gslope = rep.geometric.slope;
  rep.best_goodness = rep.geometric.r2;
  if (have_power) rep.best_goodness = std::max(rep.best_goodness, rep.power.r2);

  if (std::abs(gslope) <= opts.slope_tol &&
      (!have_power || std::abs(rep.power.slope) <= 10.0 * opts.slope_tol)) {
    rep.cls = TrendClass::Flat;
    return rep;
  }

  const bool enough = rs.size() >= opts.min_points;
  const bool geo_decay = gslope < -opts.slope_tol && rep.geometric.r2 >= opts.min_goodness;
  const bool pow_decay = have_power && rep.power.slope < -opts.slope_tol &&
                         rep.power.r2 >= opts.min_goodness;
  const bool geo_grow = gslope > opts.slope_tol && rep.geometric.r2 >= opts.min_goodness;
  const bool pow_grow = have_power && rep.power.slope > opts.slope_tol &&
                        rep.power.r2 >= opts.min_goodness;

  if (enough && (geo_decay || pow_decay)) {
    rep.cls = TrendClass::DecayingToZero;
  } else if ((geo_grow || pow_grow) && rs.size() >= 3) {
    rep.cls = TrendClass::Growing;
  } else if (std::abs(gslope) <= opts.slope_tol) {
    rep.cls = TrendClass::Flat;
  } else {
    rep.cls = TrendClass::Inconclusive;
  }
  return rep;
}

AnnulusTrace annulus_trace(const WeightedGraph& g, const VertexFunction& f,
                           const std::vector<int>& radii, bool abs) {
  if (f.size() != g.n()) throw PreconditionError("function not aligned with graph");
  AnnulusTrace out;
  for (const int r : radii) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    std::size_t count = 0;
    for (VertexId x = 0; static_cast<std::size_t>(x) < g.n(); ++x) {
      if (g.depth(x) != r) continue;
      const double v = abs ? std::abs(f[x]) : f[x];
      lo = std::min(lo, v);
      hi = std::max(hi, v);
      ++count;
    }
    if (count == 0) {
      throw EmptyAnnulus("no vertices at radius " + std::to_string(r));
    }
    out.radii.push_back(r);
    out.sup.push_back(hi);
    out.min.push_back(lo);
  }
  return out;
}

std::vector<int> radius_range(int lo, int hi) {
  std::vector<int> out;
  for (int r = lo; r <= hi; ++r) out.push_back(r);
  return out;
}

}  // namespace plandis
