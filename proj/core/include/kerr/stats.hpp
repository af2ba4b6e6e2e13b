#pragma once

#include <cmath>
#include <cstddef>
#include <span>

namespace kerr {

/// Neumaier's variant of Kahan summation.
class NeumaierSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  double slope_stderr = 0.0;
  std::size_t points = 0;
};

/// Ordinary least squares y = intercept + slope x. Requires >= 3 points.
LinearFit fit_line(std::span<const double> x, std::span<const double> y);

double mean(std::span<const double> v);
/// Population variance.
double variance(std::span<const double> v);
double pearson(std::span<const double> a, std::span<const double> b);

/// Survival function of the Kolmogorov distribution, P(K > lambda).
double kolmogorov_sf(double lambda);

/// Asymptotic KS p-value for statistic D on n samples (Stephens' correction).
double ks_pvalue(double d, std::size_t n);

/// Standard normal CDF.
double normal_cdf(double z);

/// Jarque-Bera statistic and its chi-square(2) p-value.
struct JarqueBera {
  double statistic = 0.0;
  double pvalue = 0.0;
  double skewness = 0.0;
  double excess_kurtosis = 0.0;
};
JarqueBera jarque_bera(std::span<const double> v);

}  // namespace kerr
