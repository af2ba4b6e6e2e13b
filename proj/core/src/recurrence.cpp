#include "kerr/recurrence.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <numbers>
#include <sstream>

#include "kerr/error.hpp"
#include "kerr/stats.hpp"

namespace kerr {

std::size_t InvariantDensity::bin_of(double v) const {
  const std::size_t nb = bins();
  if (nb == 0 || v < bin_edges.front() || v > bin_edges.back()) return nb;
  auto b = static_cast<std::size_t>(std::floor((v - bin_edges.front()) / bin_width));
  b = std::min(b, nb - 1);
  while (b > 0 && v < bin_edges[b]) --b;
  while (b + 1 < nb && v >= bin_edges[b + 1]) ++b;
  return b;
}

InvariantDensity invariant_density(std::span<const double> x, double bin_width) {
  if (x.empty()) throw InvalidArgument("invariant_density: empty series");
  const auto [lo_it, hi_it] = std::minmax_element(x.begin(), x.end());
  const double lo = *lo_it;
  const double hi = *hi_it;
  if (hi == lo) throw DegenerateSeries("invariant_density: constant series");
  if (!(bin_width > 0.0) || bin_width > (hi - lo) / 10.0) {
    throw InvalidArgument("invariant_density: bin_width must lie in (0, range/10]");
  }
  InvariantDensity d;
  d.bin_width = bin_width;
  const auto nb = static_cast<std::size_t>(std::ceil((hi - lo) / bin_width));
  d.bin_edges.resize(nb + 1);
  for (std::size_t i = 0; i <= nb; ++i) d.bin_edges[i] = lo + static_cast<double>(i) * bin_width;
  d.bin_edges.back() = std::max(d.bin_edges.back(), hi);
  d.counts.assign(nb, 0);
  for (double v : x) ++d.counts[d.bin_of(v)];
  d.total = x.size();
  d.rho.resize(nb);
  for (std::size_t i = 0; i < nb; ++i) {
    d.rho[i] = static_cast<double>(d.counts[i]) / (static_cast<double>(d.total) * bin_width);
  }
  return d;
}

std::string describe(const CellPolicy& policy) {
  return std::visit(
      [](const auto& p) -> std::string {
        using P = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<P, ModeCell>) {
          return "mode";
        } else if constexpr (std::is_same_v<P, MedianSupportCell>) {
          return "median-support";
        } else {
          char buf[96];
          std::snprintf(buf, sizeof buf, "explicit(%.17g,%.17g%c", p.lo, p.hi,
                        p.closed_right ? ']' : ')');
          return buf;
        }
      },
      policy);
}

CellPolicy cell_policy_from_string(const std::string& text) {
  if (text == "mode") return ModeCell{};
  if (text == "median-support") return MedianSupportCell{};
  ExplicitCell c;
  char close = 0;
  int used = 0;
  if (std::sscanf(text.c_str(), "explicit(%lf,%lf%c%n", &c.lo, &c.hi, &close, &used) == 3 &&
      static_cast<std::size_t>(used) == text.size() && (close == ')' || close == ']') &&
      c.lo < c.hi) {
    c.closed_right = close == ']';
    return c;
  }
  throw InvalidArgument("unknown cell policy '" + text + "'");
}

namespace {

Cell bin_cell(const InvariantDensity& d, std::size_t b) {
  return Cell{d.bin_edges[b], d.bin_edges[b + 1], b + 1 == d.bins()};
}

}  // namespace

Cell select_cell(const InvariantDensity& density, const CellPolicy& policy,
                 std::span<const double> series) {
  if (density.bins() == 0 || density.total == 0) {
    throw InvalidArgument("select_cell: empty density");
  }
  return std::visit(
      [&](const auto& p) -> Cell {
        using P = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<P, ModeCell>) {
          const auto it = std::max_element(density.counts.begin(), density.counts.end());
          return bin_cell(density, static_cast<std::size_t>(it - density.counts.begin()));
        } else if constexpr (std::is_same_v<P, MedianSupportCell>) {
          if (series.empty()) throw InvalidArgument("select_cell: median-support needs the series");
          std::vector<double> v(series.begin(), series.end());
          std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2), v.end());
          const std::size_t b = density.bin_of(v[v.size() / 2]);
          return bin_cell(density, b);
        } else {
          return Cell{p.lo, p.hi, p.closed_right};
        }
      },
      policy);
}

std::vector<std::pair<std::size_t, std::size_t>> RecurrenceReport::histogram() const {
  std::map<std::size_t, std::size_t> h;
  for (auto t : taus) ++h[t];
  return {h.begin(), h.end()};
}

RecurrenceReport recurrence_times(const TimeSeries& series, const Cell& cell,
                                  const RecurrenceOptions& options) {
  series.validate();
  RecurrenceReport r;
  r.cell = cell;
  r.dt = series.dt;
  r.length = series.size();
  r.collapsed_runs = options.collapse_runs;

  std::size_t inside = 0;
  std::size_t last = 0;
  bool have_last = false;
  bool prev_inside = false;
  for (std::size_t j = 0; j < series.size(); ++j) {
    const bool in = cell.contains(series.values[j]);
    if (in) ++inside;
    const bool visit = in && !(options.collapse_runs && prev_inside);
    if (visit) {
      if (have_last) r.taus.push_back(j - last);
      last = j;
      have_last = true;
      ++r.visits;
    }
    prev_inside = in;
  }
  if (r.visits < 2) throw InsufficientData("recurrence_times: fewer than 2 visits to the cell");
  const double n = static_cast<double>(r.length);
  r.mu = static_cast<double>(inside) / n;
  r.visit_rate = static_cast<double>(r.visits) / n;
  double sum = 0.0;
  for (auto t : r.taus) sum += static_cast<double>(t);
  r.mean_tau = sum / static_cast<double>(r.taus.size());
  r.mean_tau_time = r.mean_tau * r.dt;
  r.kac_ratio = r.mean_tau * r.visit_rate;
  return r;
}

std::string to_string(ReturnLaw law) {
  switch (law) {
    case ReturnLaw::Exponential:
      return "exponential";
    case ReturnLaw::Discrete:
      return "discrete";
    case ReturnLaw::Neither:
      return "neither";
  }
  return "neither";
}

namespace {

// sup_x |F_n(x) - F(x)| for integer-valued data; both CDFs are step
// functions constant between integers, so integer points suffice.
template <class Cdf>
double discrete_ks(std::vector<std::size_t> values, Cdf&& cdf) {
  std::sort(values.begin(), values.end());
  const double n = static_cast<double>(values.size());
  double d = 0.0;
  std::size_t idx = 0;
  for (std::size_t x = 0; x <= values.back(); ++x) {
    while (idx < values.size() && values[idx] <= x) ++idx;
    d = std::max(d, std::abs(static_cast<double>(idx) / n - cdf(x)));
  }
  return d;
}

}  // namespace

ReturnFit fit_return_distribution(const RecurrenceReport& report, const ReturnFitOptions& opt) {
  if (report.taus.size() < opt.min_returns) {
    throw InsufficientData("fit_return_distribution: need at least " +
                           std::to_string(opt.min_returns) + " return times, have " +
                           std::to_string(report.taus.size()));
  }
  ReturnFit f;
  f.returns = report.taus.size();
  f.rate = report.visit_rate;
  const double q = 1.0 - f.rate;
  f.ks_statistic = discrete_ks(report.taus, [&](std::size_t x) {
    return 1.0 - std::pow(q, static_cast<double>(x));
  });
  f.ks_pvalue = ks_pvalue(f.ks_statistic, f.returns);

  const auto hist = report.histogram();
  f.distinct = hist.size();
  std::vector<std::size_t> counts;
  for (const auto& [tau, c] : hist) counts.push_back(c);
  std::sort(counts.rbegin(), counts.rend());
  std::size_t top = 0;
  for (std::size_t i = 0; i < std::min(opt.top_values, counts.size()); ++i) top += counts[i];
  f.top_mass = static_cast<double>(top) / static_cast<double>(f.returns);

  if (f.top_mass > opt.discrete_mass) {
    f.verdict = ReturnLaw::Discrete;
  } else if (f.ks_pvalue > opt.ks_alpha) {
    f.verdict = ReturnLaw::Exponential;
  } else {
    f.verdict = ReturnLaw::Neither;
  }
  return f;
}

SuccessiveReturnFit successive_return_test(const RecurrenceReport& report,
                                           const SuccessiveReturnOptions& opt) {
  if (report.visits < opt.min_visits) {
    throw InsufficientData("successive_return_test: need at least " +
                           std::to_string(opt.min_visits) + " visits, have " +
                           std::to_string(report.visits));
  }
  const auto& tau = report.taus;
  SuccessiveReturnFit f;
  f.rate = report.visit_rate;
  std::vector<std::size_t> sums;
  for (std::size_t i = 0; i + 1 < tau.size(); i += 2) sums.push_back(tau[i] + tau[i + 1]);
  f.sums = sums.size();
  const double p = f.rate;
  const double q = 1.0 - p;
  f.ks_statistic = discrete_ks(sums, [&](std::size_t s) {
    if (s < 2) return 0.0;
    const double sd = static_cast<double>(s);
    return 1.0 - std::pow(q, sd) - sd * p * std::pow(q, sd - 1.0);
  });
  f.ks_pvalue = ks_pvalue(f.ks_statistic, f.sums);
  f.accepted = f.ks_pvalue > opt.ks_alpha;

  std::vector<double> a, b;
  for (std::size_t i = 0; i + 1 < tau.size(); ++i) {
    a.push_back(static_cast<double>(tau[i]));
    b.push_back(static_cast<double>(tau[i + 1]));
  }
  f.serial_correlation = pearson(a, b);
  return f;
}

GaussianFit gaussian_fit(const InvariantDensity& density, std::span<const double> series) {
  GaussianFit g;
  g.mean = mean(series);
  g.stddev = std::sqrt(variance(series));
  if (g.stddev == 0.0) throw DegenerateSeries("gaussian_fit: zero variance");
  double ss_res = 0.0, ss_tot = 0.0;
  const double rho_mean = mean(density.rho);
  for (std::size_t b = 0; b < density.bins(); ++b) {
    const double c = 0.5 * (density.bin_edges[b] + density.bin_edges[b + 1]);
    const double z = (c - g.mean) / g.stddev;
    const double model = std::exp(-0.5 * z * z) / (g.stddev * std::sqrt(2.0 * std::numbers::pi));
    ss_res += (density.rho[b] - model) * (density.rho[b] - model);
    ss_tot += (density.rho[b] - rho_mean) * (density.rho[b] - rho_mean);
  }
  g.r2 = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 0.0;
  const auto jb = jarque_bera(series);
  g.jarque_bera = jb.statistic;
  g.skewness = jb.skewness;
  g.excess_kurtosis = jb.excess_kurtosis;
  return g;
}

}  // namespace kerr
