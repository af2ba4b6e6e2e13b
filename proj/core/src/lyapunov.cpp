#include "kerr/lyapunov.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "kerr/embedding.hpp"
#include "kerr/error.hpp"
#include "kerr/kdtree.hpp"
#include "kerr/stats.hpp"

namespace kerr {

namespace {

// Prefix sums for O(1) least-squares fits of y(k) on k over any window.
class WindowFitter {
 public:
  explicit WindowFitter(const std::vector<double>& y) : s_(y.size() + 1) {
    for (std::size_t k = 0; k < y.size(); ++k) {
      const double x = static_cast<double>(k);
      s_[k + 1] = s_[k];
      s_[k + 1].x += x;
      s_[k + 1].y += y[k];
      s_[k + 1].xx += x * x;
      s_[k + 1].xy += x * y[k];
      s_[k + 1].yy += y[k] * y[k];
    }
  }

  // Slope and R^2 over inclusive [lo, hi].
  std::pair<double, double> fit(std::size_t lo, std::size_t hi) const {
    const auto& a = s_[lo];
    const auto& b = s_[hi + 1];
    const double n = static_cast<double>(hi - lo + 1);
    const double sx = b.x - a.x, sy = b.y - a.y;
    const double sxx = (b.xx - a.xx) - sx * sx / n;
    const double sxy = (b.xy - a.xy) - sx * sy / n;
    const double syy = (b.yy - a.yy) - sy * sy / n;
    if (sxx <= 0.0) return {0.0, 0.0};
    const double slope = sxy / sxx;
    const double r2 = syy > 0.0 ? std::clamp(sxy * sxy / (sxx * syy), 0.0, 1.0) : 1.0;
    return {slope, r2};
  }

 private:
  struct Sums {
    double x = 0, y = 0, xx = 0, xy = 0, yy = 0;
  };
  std::vector<Sums> s_;
};

}  // namespace

FitWindow select_fit_range(const std::vector<double>& y, const RosensteinOptions& opt) {
  const std::size_t K = y.size();
  const std::size_t min_pts_req = std::max<std::size_t>(3, opt.min_fit_points);
  if (K < min_pts_req + 1) throw InsufficientData("select_fit_range: curve shorter than minimum window");

  // Plateau: median of the second half of the curve.
  std::vector<double> tail(y.begin() + static_cast<std::ptrdiff_t>(K / 2), y.end());
  std::nth_element(tail.begin(), tail.begin() + static_cast<std::ptrdiff_t>(tail.size() / 2),
                   tail.end());
  const double plateau = tail[tail.size() / 2];
  const double rise = plateau - y[0];

  FitWindow w;
  w.saturation_k = K - 1;
  if (rise > 0.0) {
    const double level = y[0] + opt.saturation_fraction * rise;
    for (std::size_t k = 1; k < K; ++k) {
      if (y[k] >= level) {
        w.saturation_k = k;
        break;
      }
    }
  }
  // k = 0 is excluded: it is the selection point of the neighbour search.
  // A pre-saturation region shorter than min_pts shrinks the window rather
  // than letting it run into the plateau.
  const std::size_t hi_limit = std::max<std::size_t>(3, w.saturation_k);
  const std::size_t min_pts = std::min(min_pts_req, hi_limit);

  const WindowFitter fitter(y);
  bool found_good = false;
  std::size_t best_len = 0;
  double best_r2 = -1.0;
  for (std::size_t lo = 1; lo + min_pts - 1 <= hi_limit; ++lo) {
    for (std::size_t hi = lo + min_pts - 1; hi <= hi_limit; ++hi) {
      const double r2 = fitter.fit(lo, hi).second;
      const std::size_t len = hi - lo + 1;
      const bool good = r2 >= opt.min_r2;
      bool take = false;
      if (good) {
        take = !found_good || len > best_len || (len == best_len && r2 > best_r2);
      } else if (!found_good && len == min_pts) {
        take = r2 > best_r2;
      }
      if (take) {
        found_good = found_good || good;
        best_len = len;
        best_r2 = r2;
        w.lo = lo;
        w.hi = hi;
      }
    }
  }
  return w;
}

void refit(LyapunovCurve& c, std::size_t lo, std::size_t hi) {
  if (hi >= c.mean_log_sep.size() || hi < lo + 2) {
    throw InvalidArgument("refit: fit range must hold >= 3 points inside the curve");
  }
  std::vector<double> t, y;
  for (std::size_t k = lo; k <= hi; ++k) {
    t.push_back(static_cast<double>(k) * c.dt);
    y.push_back(c.mean_log_sep[k]);
  }
  const LinearFit f = fit_line(t, y);
  c.fit_range = {lo, hi};
  c.lambda_max = f.slope;
  c.slope_per_step = f.slope * c.dt;
  c.lambda_stderr = f.slope_stderr;
  c.fit_r2 = f.r2;
}

LyapunovCurve rosenstein_lambda(const TimeSeries& series, const RosensteinOptions& opt) {
  series.validate();
  if (opt.kmax < 2) throw InvalidArgument("rosenstein_lambda: kmax must be >= 2");
  const auto x = series.view();
  const Embedding emb(x, opt.delay, opt.dim);
  if (emb.size() <= opt.kmax + opt.theiler + 2) {
    throw InsufficientData("rosenstein_lambda: series too short for kmax and Theiler window");
  }
  const std::size_t searchable = emb.size() - opt.kmax;
  const KdTree tree(emb.flatten(searchable), opt.dim);

  const auto [lo_it, hi_it] = std::minmax_element(x.begin(), x.end());
  const double diameter = (*hi_it - *lo_it) * std::sqrt(static_cast<double>(opt.dim));
  if (diameter <= 0.0) throw DegenerateSeries("rosenstein_lambda: constant series");
  const double max_initial = opt.max_initial_fraction * diameter;

  LyapunovCurve c;
  c.dt = series.dt;
  c.delay = opt.delay;
  c.dim = opt.dim;
  c.theiler = opt.theiler;
  c.k_values.resize(opt.kmax + 1);
  for (std::size_t k = 0; k <= opt.kmax; ++k) c.k_values[k] = k;

  std::vector<NeumaierSum> sums(opt.kmax + 1);
  c.pair_counts.assign(opt.kmax + 1, 0);

  const std::size_t refs = std::min(opt.max_refs, searchable);
  auto separation = [&](std::size_t i, std::size_t j) {
    double s = 0.0;
    for (std::size_t d = 0; d < opt.dim; ++d) {
      const double diff = emb.at(i, d) - emb.at(j, d);
      s += diff * diff;
    }
    return std::sqrt(s);
  };
  for (std::size_t r = 0; r < refs; ++r) {
    const std::size_t i = refs == searchable ? r : r * (searchable - 1) / (refs - 1);
    const Neighbor nb = tree.nearest_to(i, opt.theiler);
    if (!nb.found() || nb.dist2 <= 0.0) continue;
    if (std::sqrt(nb.dist2) > max_initial) continue;
    ++c.valid_pairs;
    for (std::size_t k = 0; k <= opt.kmax; ++k) {
      const double d = separation(i + k, nb.index + k);
      if (d > 0.0) {
        sums[k].add(std::log(d));
        ++c.pair_counts[k];
      }
    }
  }
  c.unreliable = c.valid_pairs < kMinNeighborPairs;
  if (c.valid_pairs == 0) throw InsufficientData("rosenstein_lambda: no valid neighbour pairs");

  c.mean_log_sep.resize(opt.kmax + 1);
  for (std::size_t k = 0; k <= opt.kmax; ++k) {
    c.mean_log_sep[k] = c.pair_counts[k] ? sums[k].value() / static_cast<double>(c.pair_counts[k])
                                         : c.mean_log_sep[k > 0 ? k - 1 : 0];
  }

  double mean = 0.0, var = 0.0;
  for (double v : x) mean += v;
  mean /= static_cast<double>(x.size());
  for (double v : x) var += (v - mean) * (v - mean);
  var /= static_cast<double>(x.size());
  c.decorrelation_log = 0.5 * std::log(2.0 * static_cast<double>(opt.dim) * var);
  {
    const std::size_t K = opt.kmax;
    double s = 0.0;
    for (std::size_t k = K / 2; k <= K; ++k) s += c.mean_log_sep[k];
    c.plateau_log = s / static_cast<double>(K - K / 2 + 1);
    std::vector<double> lk, y;
    for (std::size_t k = std::max<std::size_t>(1, K / 10); k <= K; ++k) {
      lk.push_back(std::log(static_cast<double>(k)));
      y.push_back(c.mean_log_sep[k]);
    }
    c.late_growth = lk.size() >= 3 ? fit_line(lk, y).slope : 0.0;
  }
  c.saturated = c.decorrelation_log - c.plateau_log < opt.max_plateau_gap &&
                std::abs(c.late_growth) < opt.max_late_growth;

  const FitWindow w = select_fit_range(c.mean_log_sep, opt);
  c.saturation_k = w.saturation_k;
  if (opt.fit_override) {
    c.fit_overridden = true;
    refit(c, opt.fit_override->first, opt.fit_override->second);
  } else {
    refit(c, w.lo, w.hi);
  }
  return c;
}

Table curve_for_plot(const std::vector<LyapunovCurve>& curves, double g) {
  if (curves.empty()) throw InvalidArgument("curve_for_plot: no curves");
  const auto& first = curves.front();
  for (const auto& c : curves) {
    if (c.k_values.size() != first.k_values.size() || c.dt != first.dt) {
      throw InvalidArgument("curve_for_plot: curves must share dt and kmax");
    }
  }
  Table t;
  t.columns = {"k", "t", "t_g"};
  for (const auto& c : curves) t.columns.push_back("mean_log_sep_d" + std::to_string(c.dim));
  t.tag_column = "region";
  for (std::size_t i = 0; i < first.k_values.size(); ++i) {
    const auto k = first.k_values[i];
    const double time = static_cast<double>(k) * first.dt;
    std::vector<double> row{static_cast<double>(k), time, time * g};
    for (const auto& c : curves) row.push_back(c.mean_log_sep[i]);
    t.rows.push_back(std::move(row));
    t.tags.push_back(k < first.fit_range.first    ? "transient"
                     : k <= first.fit_range.second ? "linear"
                                                   : "saturation");
  }
  auto num = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
  };
  t.metadata.emplace_back("dt", num(first.dt));
  t.metadata.emplace_back("g", num(g));
  for (const auto& c : curves) {
    const std::string d = "d" + std::to_string(c.dim);
    t.metadata.emplace_back(d + ".fit_range",
                            std::to_string(c.fit_range.first) + ".." + std::to_string(c.fit_range.second));
    t.metadata.emplace_back(d + ".lambda_max", num(c.lambda_max));
    t.metadata.emplace_back(d + ".lambda_max_units_of_g", num(c.lambda_max / g));
    t.metadata.emplace_back(d + ".slope_per_step", num(c.slope_per_step));
    t.metadata.emplace_back(d + ".lambda_stderr", num(c.lambda_stderr));
    t.metadata.emplace_back(d + ".fit_r2", num(c.fit_r2));
    t.metadata.emplace_back(d + ".plateau_gap", num(c.decorrelation_log - c.plateau_log));
    t.metadata.emplace_back(d + ".late_growth", num(c.late_growth));
    t.metadata.emplace_back(d + ".saturated", c.saturated ? "true" : "false");
  }
  return t;
}

}  // namespace kerr
