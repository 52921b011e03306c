#pragma once

#include <functional>
#include <span>
#include <vector>

namespace ym2d::stats {

struct MeanStdErr {
	double mean = 0.0;
	double std_error = 0.0;
	long n = 0;
};

MeanStdErr mean_std_error(std::span<const double> xs);

/** Kolmogorov-Smirnov statistic of samples against a reference CDF */
double ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf);

/** asymptotic one-sample KS p-value (Stephens' finite-n correction) */
double ks_pvalue(double d, std::size_t n);

/** two-sample KS p-value */
double ks_two_sample_pvalue(std::vector<double> a, std::vector<double> b);

/** numerically-normalized CDF from a positive density on [lo,hi] (Simpson grid) */
std::function<double(double)> numeric_cdf(const std::function<double(double)>& density, double lo,
                                          double hi, int panels = 4096);

} // namespace ym2d::stats
