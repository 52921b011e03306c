#include "ym2d/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ym2d::stats {

MeanStdErr mean_std_error(std::span<const double> xs)
{
	MeanStdErr r;
	r.n = static_cast<long>(xs.size());
	if (r.n == 0)
		return r;
	double sum = 0.0;
	for (double x : xs)
		sum += x;
	r.mean = sum / static_cast<double>(r.n);
	if (r.n < 2)
		return r;
	double ss = 0.0;
	for (double x : xs)
		ss += (x - r.mean) * (x - r.mean);
	r.std_error = std::sqrt(ss / (static_cast<double>(r.n) * (r.n - 1.0)));
	return r;
}

double ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf)
{
	if (samples.empty())
		throw std::invalid_argument("ks_statistic: no samples");
	std::sort(samples.begin(), samples.end());
	const double n = static_cast<double>(samples.size());
	double d = 0.0;
	for (std::size_t i = 0; i < samples.size(); ++i)
	{
		const double f = cdf(samples[i]);
		d = std::max(d, std::fabs(f - static_cast<double>(i) / n));
		d = std::max(d, std::fabs(static_cast<double>(i + 1) / n - f));
	}
	return d;
}

namespace {
double kolmogorov_q(double lambda)
{
	if (lambda < 1e-3)
		return 1.0;
	double sum = 0.0;
	for (int k = 1; k <= 100; ++k)
	{
		const double term = 2.0 * ((k % 2) ? 1.0 : -1.0) * std::exp(-2.0 * k * k * lambda * lambda);
		sum += term;
		if (std::fabs(term) < 1e-12)
			break;
	}
	return std::clamp(sum, 0.0, 1.0);
}
} // namespace

double ks_pvalue(double d, std::size_t n)
{
	const double sn = std::sqrt(static_cast<double>(n));
	return kolmogorov_q((sn + 0.12 + 0.11 / sn) * d);
}

double ks_two_sample_pvalue(std::vector<double> a, std::vector<double> b)
{
	if (a.empty() || b.empty())
		throw std::invalid_argument("ks_two_sample_pvalue: empty sample");
	std::sort(a.begin(), a.end());
	std::sort(b.begin(), b.end());
	const double na = static_cast<double>(a.size());
	const double nb = static_cast<double>(b.size());
	double d = 0.0;
	std::size_t i = 0, j = 0;
	while (i < a.size() && j < b.size())
	{
		if (a[i] <= b[j])
			++i;
		else
			++j;
		d = std::max(d, std::fabs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
	}
	const double ne = std::sqrt(na * nb / (na + nb));
	return kolmogorov_q((ne + 0.12 + 0.11 / ne) * d);
}

std::function<double(double)> numeric_cdf(const std::function<double(double)>& density, double lo,
                                          double hi, int panels)
{
	if (panels % 2)
		++panels;
	const double h = (hi - lo) / panels;
	std::vector<double> vals(panels + 1);
	for (int i = 0; i <= panels; ++i)
		vals[i] = density(lo + i * h);
	// cumulative Simpson on pairs of panels
	std::vector<double> cum(panels / 2 + 1, 0.0);
	for (int p = 0; p < panels / 2; ++p)
		cum[p + 1] = cum[p] + h / 3.0 * (vals[2 * p] + 4.0 * vals[2 * p + 1] + vals[2 * p + 2]);
	const double total = cum.back();
	if (!(total > 0.0))
		throw std::runtime_error("numeric_cdf: density integrates to zero");
	return [=](double x) {
		if (x <= lo)
			return 0.0;
		if (x >= hi)
			return 1.0;
		const double pos = (x - lo) / (2.0 * h);
		const int p = std::min(static_cast<int>(pos), panels / 2 - 1);
		// linear interpolation inside a Simpson pair is accurate enough here
		const double frac = pos - p;
		const double seg = cum[p + 1] - cum[p];
		return std::clamp((cum[p] + seg * frac) / total, 0.0, 1.0);
	};
}

} // namespace ym2d::stats
