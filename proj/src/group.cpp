#include "ym2d/group.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ym2d {

namespace {

constexpr double kPi = 3.14159265358979323846;

// ---------------------------------------------------------------------------
// circle (circumference 1) heat kernel, one coordinate
// ---------------------------------------------------------------------------

double circle_wrapped(double t, double x)
{
	// sum_k (2 pi t)^{-1/2} exp(-(x+k)^2 / 2t); converges fast for t < 1
	const double norm = 1.0 / std::sqrt(2.0 * kPi * t);
	double sum = std::exp(-x * x / (2.0 * t));
	for (int k = 1; k < 64; ++k)
	{
		const double a = x + k, b = x - k;
		const double term = std::exp(-a * a / (2.0 * t)) + std::exp(-b * b / (2.0 * t));
		sum += term;
		if (term < 1e-18 * sum)
			break;
	}
	return norm * sum;
}

double circle_fourier(double t, double x)
{
	// 1 + 2 sum_n exp(-2 pi^2 n^2 t) cos(2 pi n x)
	double sum = 1.0;
	for (int n = 1; n < 64; ++n)
	{
		const double damp = std::exp(-2.0 * kPi * kPi * n * n * t);
		sum += 2.0 * damp * std::cos(2.0 * kPi * n * x);
		if (damp < 1e-18)
			break;
	}
	return sum;
}

double circle_heat(double t, double x)
{
	return t < 0.5 ? circle_wrapped(t, x) : circle_fourier(t, x);
}

// ---------------------------------------------------------------------------
// SU(2) model: S(theta, s) = sum_{n>=1} n chi_n(theta) exp(-(n^2-1) s),
// chi_n(theta) = sin(n theta)/sin(theta). The heat kernel on the
// unit-volume group is S with s = casimir_scale * t / 2 (volume factor
// handled by the caller). Two regimes:
//   s >= 0.35  character series, a handful of terms;
//   s <  0.35  Jacobi-transformed (wrapped Gaussian) form, which stays
//              well conditioned near theta = pi where the character series
//              cancels catastrophically.
// ---------------------------------------------------------------------------

double chi_ratio(int n, double theta)
{
	// sin(n u)/sin(u) folded to u in [0, pi/2] for accuracy near pi
	double u = theta;
	double sign = 1.0;
	if (u > kPi / 2.0)
	{
		u = kPi - u;
		if (n % 2 == 0)
			sign = -1.0;
	}
	if (u < 1e-9)
	{
		const double n2 = static_cast<double>(n) * n;
		return sign * n * (1.0 - (n2 - 1.0) * u * u / 6.0);
	}
	return sign * std::sin(n * u) / std::sin(u);
}

double su2_series_large(double theta, double s, double tol)
{
	double sum = 0.0;
	for (int n = 1; n < 20000; ++n)
	{
		const double dn = n;
		const double damp = std::exp(-(dn * dn - 1.0) * s);
		sum += dn * chi_ratio(n, theta) * damp;
		const double bound = dn * dn * damp; // |chi_n| <= n
		if (dn * dn * s > 1.0 && bound < tol * std::max(std::fabs(sum), 1e-300))
			return sum;
	}
	throw std::runtime_error("su2 character series did not converge (t too small)");
}

// sum_{k in Z} (theta + 2 pi k) exp(-(theta+2 pi k)^2/(4s)) / sin(theta),
// organized in pairs so both endpoints theta -> 0 and theta -> pi stay finite.
double wrapped_radial_over_sin(double theta, double s)
{
	// paired term ((A-u) e^{-(A-u)^2/4s} - (A+u) e^{-(A+u)^2/4s}) / sin(u)
	auto pair_over_sin = [s](double big, double u) {
		const double arg = u * big / (2.0 * s);
		if (arg < 30.0)
		{
			const double common = std::exp(-(big * big + u * u) / (4.0 * s));
			if (u < 1e-9)
				return common * (big * big / s - 2.0);
			return common * (2.0 * big * std::sinh(arg) - 2.0 * u * std::cosh(arg)) / std::sin(u);
		}
		const double t1 = (big - u) * std::exp(-(big - u) * (big - u) / (4.0 * s));
		const double t2 = (big + u) * std::exp(-(big + u) * (big + u) / (4.0 * s));
		return (t1 - t2) / std::sin(u);
	};

	double sum = 0.0;
	if (theta <= kPi / 2.0)
	{
		// solo k = 0 plus pairs (k, -k), k >= 1
		const double ratio = theta < 1e-9 ? 1.0 - theta * theta / 6.0 : theta / std::sin(theta);
		sum = std::exp(-theta * theta / (4.0 * s)) * ratio;
		for (int k = 1; k <= 8; ++k)
		{
			const double term = -pair_over_sin(2.0 * kPi * k, theta);
			sum += term;
			if (std::fabs(term) < 1e-18 * std::fabs(sum))
				break;
		}
	}
	else
	{
		// pairs (k, -k-1), k >= 0, around A_k = pi (2k+1)
		const double u = kPi - theta;
		for (int k = 0; k <= 8; ++k)
		{
			const double term = pair_over_sin(kPi * (2 * k + 1), u);
			sum += term;
			if (k > 0 && std::fabs(term) < 1e-18 * std::fabs(sum))
				break;
		}
	}
	return sum;
}

double su2_series(double theta, double s, double tol)
{
	if (!(s > 1e-12))
		throw std::invalid_argument("heat-kernel time too small");
	if (s >= 0.35)
		return su2_series_large(theta, s, tol);
	const double pref = std::exp(s) * std::sqrt(kPi) / (4.0 * std::pow(s, 1.5));
	return pref * wrapped_radial_over_sin(theta, s);
}

} // namespace

std::string to_string(GroupKind k)
{
	switch (k)
	{
	case GroupKind::u1:
		return "u1";
	case GroupKind::su2:
		return "su2";
	case GroupKind::so3:
		return "so3";
	}
	return "?";
}

GroupContext::GroupContext(GroupKind kind, int m, double series_tol)
    : kind_(kind), m_(m), series_tol_(series_tol)
{
	if (series_tol <= 0.0)
		throw std::invalid_argument("series_tol must be positive");
	switch (kind)
	{
	case GroupKind::u1:
		// product of circumference-1 circles; cover kernel = standard Gaussian
		casimir_scale_ = 4.0 * kPi * kPi; // eigenvalue on exp(2 pi i n x) is scale * n^2
		cover_volume_ = 0.0;              // infinite (Lebesgue on R^m)
		break;
	case GroupKind::su2:
		casimir_scale_ = std::pow(2.0 * kPi * kPi, 2.0 / 3.0);
		cover_volume_ = 1.0;
		break;
	case GroupKind::so3:
		// SO(3) has unit volume, so the cover SU(2) has volume 2
		casimir_scale_ = std::pow(kPi * kPi, 2.0 / 3.0);
		cover_volume_ = 2.0;
		break;
	}
}

GroupContext GroupContext::u1(int m, double series_tol)
{
	if (m < 1)
		throw std::invalid_argument("u1 rank must be positive");
	return GroupContext(GroupKind::u1, m, series_tol);
}

GroupContext GroupContext::su2(double series_tol)
{
	return GroupContext(GroupKind::su2, 0, series_tol);
}

GroupContext GroupContext::so3(double series_tol)
{
	return GroupContext(GroupKind::so3, 0, series_tol);
}

int GroupContext::deck_order() const
{
	switch (kind_)
	{
	case GroupKind::u1:
		return 0;
	case GroupKind::su2:
		return 1;
	case GroupKind::so3:
		return 2;
	}
	return 0;
}

void GroupContext::check_kind(GroupKind expected, const char* op) const
{
	if (kind_ != expected)
		throw std::invalid_argument(std::string(op) + ": not supported for group " + to_string(kind_));
}

// ---- elements -------------------------------------------------------------

GroupElement GroupContext::identity() const
{
	GroupElement g;
	if (kind_ == GroupKind::u1)
		g.angle.assign(m_, 0.0);
	return g;
}

CoverElement GroupContext::cover_identity() const
{
	CoverElement c;
	if (kind_ == GroupKind::u1)
		c.coord.assign(m_, 0.0);
	return c;
}

CenterElement GroupContext::center_identity() const
{
	CenterElement z;
	if (kind_ == GroupKind::u1)
		z.winding.assign(m_, 0);
	return z;
}

namespace {
double frac01(double x)
{
	double f = x - std::floor(x);
	if (f >= 1.0)
		f -= 1.0;
	return f;
}
} // namespace

GroupElement GroupContext::mul(const GroupElement& a, const GroupElement& b) const
{
	GroupElement r;
	switch (kind_)
	{
	case GroupKind::u1:
		r.angle.resize(m_);
		for (int i = 0; i < m_; ++i)
			r.angle[i] = frac01(a.angle[i] + b.angle[i]);
		break;
	case GroupKind::su2:
		r.q = (a.q * b.q).normalized();
		break;
	case GroupKind::so3:
		r.q = (a.q * b.q).normalized().canonical();
		break;
	}
	return r;
}

GroupElement GroupContext::inv(const GroupElement& a) const
{
	GroupElement r;
	switch (kind_)
	{
	case GroupKind::u1:
		r.angle.resize(m_);
		for (int i = 0; i < m_; ++i)
			r.angle[i] = frac01(-a.angle[i]);
		break;
	case GroupKind::su2:
		r.q = a.q.conj();
		break;
	case GroupKind::so3:
		r.q = a.q.conj().canonical();
		break;
	}
	return r;
}

CoverElement GroupContext::cover_mul(const CoverElement& a, const CoverElement& b) const
{
	CoverElement r;
	if (kind_ == GroupKind::u1)
	{
		r.coord.resize(m_);
		for (int i = 0; i < m_; ++i)
			r.coord[i] = a.coord[i] + b.coord[i];
	}
	else
		r.q = (a.q * b.q).normalized();
	return r;
}

CoverElement GroupContext::cover_inv(const CoverElement& a) const
{
	CoverElement r;
	if (kind_ == GroupKind::u1)
	{
		r.coord.resize(m_);
		for (int i = 0; i < m_; ++i)
			r.coord[i] = -a.coord[i];
	}
	else
		r.q = a.q.conj();
	return r;
}

CenterElement GroupContext::center_mul(const CenterElement& a, const CenterElement& b) const
{
	CenterElement r;
	if (kind_ == GroupKind::u1)
	{
		r.winding.resize(m_);
		for (int i = 0; i < m_; ++i)
			r.winding[i] = a.winding[i] + b.winding[i];
	}
	else
		r.sign = a.sign * b.sign;
	return r;
}

CenterElement GroupContext::center_inv(const CenterElement& a) const
{
	CenterElement r;
	if (kind_ == GroupKind::u1)
	{
		r.winding.resize(m_);
		for (int i = 0; i < m_; ++i)
			r.winding[i] = -a.winding[i];
	}
	else
		r.sign = a.sign;
	return r;
}

bool GroupContext::approx_equal(const GroupElement& a, const GroupElement& b, double tol) const
{
	if (kind_ == GroupKind::u1)
	{
		for (int i = 0; i < m_; ++i)
		{
			double d = std::fabs(a.angle[i] - b.angle[i]);
			d = std::min(d, 1.0 - d);
			if (d > tol)
				return false;
		}
		return true;
	}
	if (kind_ == GroupKind::su2)
		return a.q.max_abs_diff(b.q) <= tol;
	return a.q.canonical().max_abs_diff(b.q.canonical()) <= tol ||
	       a.q.canonical().max_abs_diff(b.q.canonical().neg()) <= tol;
}

bool GroupContext::cover_approx_equal(const CoverElement& a, const CoverElement& b, double tol) const
{
	if (kind_ == GroupKind::u1)
	{
		for (int i = 0; i < m_; ++i)
			if (std::fabs(a.coord[i] - b.coord[i]) > tol)
				return false;
		return true;
	}
	return a.q.max_abs_diff(b.q) <= tol;
}

bool GroupContext::center_equal(const CenterElement& a, const CenterElement& b) const
{
	if (kind_ == GroupKind::u1)
		return a.winding == b.winding;
	return a.sign == b.sign;
}

GroupElement GroupContext::project(const CoverElement& c) const
{
	GroupElement g;
	switch (kind_)
	{
	case GroupKind::u1:
		g.angle.resize(m_);
		for (int i = 0; i < m_; ++i)
			g.angle[i] = frac01(c.coord[i]);
		break;
	case GroupKind::su2:
		g.q = c.q;
		break;
	case GroupKind::so3:
		g.q = c.q.canonical();
		break;
	}
	return g;
}

CoverElement GroupContext::principal_lift(const GroupElement& g) const
{
	CoverElement c;
	switch (kind_)
	{
	case GroupKind::u1:
		c.coord.resize(m_);
		for (int i = 0; i < m_; ++i)
			c.coord[i] = g.angle[i] < 0.5 ? g.angle[i] : g.angle[i] - 1.0;
		break;
	case GroupKind::su2:
	case GroupKind::so3:
		c.q = g.q;
		break;
	}
	return c;
}

CoverElement GroupContext::deck(const CenterElement& z) const
{
	CoverElement c;
	switch (kind_)
	{
	case GroupKind::u1:
		c.coord.resize(m_);
		for (int i = 0; i < m_; ++i)
			c.coord[i] = static_cast<double>(z.winding[i]);
		break;
	case GroupKind::su2:
		break;
	case GroupKind::so3:
		if (z.sign < 0)
			c.q = Quat::identity().neg();
		break;
	}
	return c;
}

CoverElement GroupContext::cover_translate(const CoverElement& c, const CenterElement& z) const
{
	return cover_mul(c, deck(z));
}

CenterElement GroupContext::center_from_cover(const CoverElement& c, double tol) const
{
	CenterElement z = center_identity();
	switch (kind_)
	{
	case GroupKind::u1:
		for (int i = 0; i < m_; ++i)
		{
			const double r = std::round(c.coord[i]);
			if (std::fabs(c.coord[i] - r) > tol)
				throw std::runtime_error("cover element is not a deck element");
			z.winding[i] = static_cast<long long>(r);
		}
		break;
	case GroupKind::su2:
		if (c.q.max_abs_diff(Quat::identity()) > tol)
			throw std::runtime_error("cover element is not a deck element");
		break;
	case GroupKind::so3:
		if (c.q.max_abs_diff(Quat::identity()) <= tol)
			z.sign = +1;
		else if (c.q.max_abs_diff(Quat::identity().neg()) <= tol)
			z.sign = -1;
		else
			throw std::runtime_error("cover element is not a deck element");
		break;
	}
	return z;
}

double GroupContext::class_angle(const GroupElement& g) const
{
	if (kind_ == GroupKind::u1)
		return g.angle[0];
	return g.q.angle();
}

double GroupContext::cover_class_angle(const CoverElement& c) const
{
	if (kind_ == GroupKind::u1)
		return c.coord[0];
	return c.q.angle();
}

double GroupContext::class_distance(const GroupElement& a, const GroupElement& b) const
{
	if (kind_ == GroupKind::u1)
	{
		double d = 0.0;
		for (int i = 0; i < m_; ++i)
		{
			double di = std::fabs(a.angle[i] - b.angle[i]);
			di = std::min(di, 1.0 - di);
			d = std::max(d, di);
		}
		return d;
	}
	return std::fabs(a.q.angle() - b.q.angle());
}

double GroupContext::rotation_distance(const GroupElement& a, const GroupElement& b) const
{
	if (kind_ == GroupKind::u1)
	{
		double d = 0.0;
		for (int i = 0; i < m_; ++i)
		{
			double di = std::fabs(a.angle[i] - b.angle[i]);
			di = std::min(di, 1.0 - di);
			d = std::max(d, di);
		}
		return d;
	}
	const Quat rel = a.q.conj() * b.q;
	if (kind_ == GroupKind::su2)
		return rel.angle();
	// so3: rotation angle = 2 * quaternion half-angle of the nearer lift
	double c = std::fabs(rel.w);
	if (c > 1.0)
		c = 1.0;
	return 2.0 * std::acos(c);
}

// ---- heat kernels -----------------------------------------------------------

double GroupContext::heat_kernel(double t, const GroupElement& x) const
{
	if (!(t > 0.0))
		throw std::invalid_argument("heat_kernel: t must be positive");
	switch (kind_)
	{
	case GroupKind::u1: {
		double p = 1.0;
		for (int i = 0; i < m_; ++i)
			p *= circle_heat(t, x.angle[i]);
		return p;
	}
	case GroupKind::su2:
		return su2_series(x.q.angle(), casimir_scale_ * t / 2.0, series_tol_);
	case GroupKind::so3: {
		const double s = casimir_scale_ * t / 2.0;
		const double theta = x.q.angle(); // canonical lift, theta in [0, pi/2]
		if (s >= 0.35)
		{
			// odd-character series
			double sum = 0.0;
			for (int n = 1; n < 20000; n += 2)
			{
				const double dn = n;
				const double damp = std::exp(-(dn * dn - 1.0) * s);
				sum += dn * chi_ratio(n, theta) * damp;
				if (dn * dn * s > 1.0 && dn * dn * damp < series_tol_ * std::max(std::fabs(sum), 1e-300))
					return sum;
			}
			throw std::runtime_error("so3 character series did not converge");
		}
		// small time: fold the cover kernel through the projection identity
		return 0.5 * (su2_series(theta, s, series_tol_) + su2_series(kPi - theta, s, series_tol_));
	}
	}
	return 0.0;
}

double GroupContext::cover_heat_kernel(double t, const CoverElement& x) const
{
	if (!(t > 0.0))
		throw std::invalid_argument("cover_heat_kernel: t must be positive");
	switch (kind_)
	{
	case GroupKind::u1: {
		double p = 1.0;
		for (int i = 0; i < m_; ++i)
			p *= std::exp(-x.coord[i] * x.coord[i] / (2.0 * t)) / std::sqrt(2.0 * kPi * t);
		return p;
	}
	case GroupKind::su2:
		return su2_series(x.q.angle(), casimir_scale_ * t / 2.0, series_tol_);
	case GroupKind::so3:
		return 0.5 * su2_series(x.q.angle(), casimir_scale_ * t / 2.0, series_tol_);
	}
	return 0.0;
}

std::pair<double, double> GroupContext::projection_sum_check(double t, const CoverElement& x) const
{
	if (!(t > 0.0))
		throw std::invalid_argument("projection_sum_check: t must be positive");
	double lhs = 0.0;
	switch (kind_)
	{
	case GroupKind::u1: {
		// factorizes over coordinates; truncate each z-sum by Gaussian decay
		lhs = 1.0;
		for (int i = 0; i < m_; ++i)
		{
			const double norm = 1.0 / std::sqrt(2.0 * kPi * t);
			const double c = x.coord[i] - std::round(x.coord[i]);
			double sum = std::exp(-c * c / (2.0 * t));
			for (int k = 1; k < 256; ++k)
			{
				const double a = c + k, b = c - k;
				const double term = std::exp(-a * a / (2.0 * t)) + std::exp(-b * b / (2.0 * t));
				sum += term;
				if (term < 1e-2 * series_tol_ * sum)
					break;
			}
			lhs *= norm * sum;
		}
		break;
	}
	case GroupKind::su2:
		lhs = cover_heat_kernel(t, x);
		break;
	case GroupKind::so3: {
		CoverElement minus = x;
		minus.q = x.q.neg();
		lhs = cover_heat_kernel(t, x) + cover_heat_kernel(t, minus);
		break;
	}
	}
	return {lhs, heat_kernel(t, project(x))};
}

// ---- sampling ---------------------------------------------------------------

GroupElement GroupContext::haar_sample(RngStream& rng) const
{
	GroupElement g;
	if (kind_ == GroupKind::u1)
	{
		g.angle.resize(m_);
		for (int i = 0; i < m_; ++i)
			g.angle[i] = rng.uniform();
		return g;
	}
	Quat q;
	double n2 = 0.0;
	do
	{
		q = {rng.normal(), rng.normal(), rng.normal(), rng.normal()};
		n2 = q.norm2();
	} while (n2 < 1e-12);
	q = q.normalized();
	g.q = kind_ == GroupKind::so3 ? q.canonical() : q;
	return g;
}

CoverElement GroupContext::cover_haar_sample(RngStream& rng) const
{
	if (kind_ == GroupKind::u1)
		throw std::invalid_argument("cover_haar_sample: cover of u1 has infinite volume");
	Quat q;
	double n2 = 0.0;
	do
	{
		q = {rng.normal(), rng.normal(), rng.normal(), rng.normal()};
		n2 = q.norm2();
	} while (n2 < 1e-12);
	CoverElement c;
	c.q = q.normalized();
	return c;
}

namespace {

// Draw the class angle of a heat-kernel increment on the SU(2) model:
// density f(theta) = (2/pi) sin(theta) sum_n n sin(n theta) e^{-(n^2-1)s}
// on [0, pi]. Exact rejection sampling in both time regimes.
double sample_heat_angle(double s, RngStream& rng)
{
	if (s <= 0.3)
	{
		// proposal theta = sqrt(2s) * |3d normal|, envelope
		// A theta^2 exp(-theta^2/4s) with A the exact k=0 coefficient;
		// dominance follows from the monotone pairing of the +-k terms.
		for (int it = 0; it < 1000000; ++it)
		{
			const double z1 = rng.normal(), z2 = rng.normal(), z3 = rng.normal();
			const double theta = std::sqrt(2.0 * s * (z1 * z1 + z2 * z2 + z3 * z3));
			if (theta >= kPi || theta <= 0.0)
				continue;
			// ratio = (sin t / t) * sum_k (t+2pik) e^{-((t+2pik)^2 - t^2)/4s} / t
			double series = 1.0;
			for (int k = 1; k <= 6; ++k)
			{
				const double ap = theta + 2.0 * kPi * k, am = theta - 2.0 * kPi * k;
				series += (ap * std::exp(-(ap * ap - theta * theta) / (4.0 * s)) +
				           am * std::exp(-(am * am - theta * theta) / (4.0 * s))) /
				          theta;
			}
			const double ratio = std::sin(theta) / theta * series;
			if (ratio > 1.0 + 1e-9)
				throw std::runtime_error("heat-angle envelope violated");
			if (rng.uniform() < ratio)
				return theta;
		}
	}
	else
	{
		// uniform proposal; f <= (2/pi) sum n^2 e^{-(n^2-1)s} since |sin nt| <= n sin t
		double bound = 0.0;
		for (int n = 1; n < 1000; ++n)
		{
			const double term = static_cast<double>(n) * n * std::exp(-(static_cast<double>(n) * n - 1.0) * s);
			bound += term;
			if (term < 1e-14 * bound)
				break;
		}
		for (int it = 0; it < 1000000; ++it)
		{
			const double theta = kPi * rng.uniform();
			const double st = std::sin(theta);
			const double f = st * st * su2_series_large(theta, s, 1e-12);
			if (f > bound * (1.0 + 1e-9))
				throw std::runtime_error("heat-angle envelope violated");
			if (rng.uniform() * bound < f)
				return theta;
		}
	}
	throw std::runtime_error("heat-angle sampler failed to accept");
}

} // namespace

CoverElement GroupContext::cover_heat_sample(double t, RngStream& rng) const
{
	if (!(t > 0.0))
		throw std::invalid_argument("cover_heat_sample: t must be positive");
	CoverElement c;
	if (kind_ == GroupKind::u1)
	{
		c.coord.resize(m_);
		const double sd = std::sqrt(t);
		for (int i = 0; i < m_; ++i)
			c.coord[i] = sd * rng.normal();
		return c;
	}
	const double theta = sample_heat_angle(casimir_scale_ * t / 2.0, rng);
	double nx, ny, nz, n2;
	do
	{
		nx = rng.normal();
		ny = rng.normal();
		nz = rng.normal();
		n2 = nx * nx + ny * ny + nz * nz;
	} while (n2 < 1e-12);
	const double inv = 1.0 / std::sqrt(n2);
	c.q = Quat::axis_angle(theta, nx * inv, ny * inv, nz * inv);
	return c;
}

CoverElement GroupContext::commutator_lift(const GroupElement& a, const GroupElement& b) const
{
	CoverElement c = cover_identity();
	if (kind_ == GroupKind::u1)
		return c; // Abelian: commutators vanish in the cover as well
	const Quat qa = a.q, qb = b.q;
	c.q = (qa * qb * qa.conj() * qb.conj()).normalized();
	return c;
}

std::vector<CoverElement> GroupContext::bridge_sample(double total_time, std::span<const double> grid,
                                                      const CoverElement& endpoint, RngStream& rng) const
{
	if (grid.empty())
		throw std::invalid_argument("bridge_sample: empty grid");
	if (grid.front() != 0.0)
		throw std::invalid_argument("bridge_sample: grid must start at 0");
	if (!(total_time > 0.0))
		throw std::invalid_argument("bridge_sample: total_time must be positive");
	for (std::size_t k = 1; k < grid.size(); ++k)
		if (!(grid[k] > grid[k - 1]) || grid[k] > total_time * (1.0 + 1e-12))
			throw std::invalid_argument("bridge_sample: grid must increase within [0, total_time]");

	std::vector<CoverElement> path;
	path.reserve(grid.size());
	path.push_back(cover_identity());

	if (kind_ == GroupKind::u1)
	{
		// exact Gaussian bridge, sequential conditioning
		CoverElement cur = cover_identity();
		for (std::size_t k = 1; k < grid.size(); ++k)
		{
			const double dt = grid[k] - grid[k - 1];
			const double remaining = total_time - grid[k - 1];
			if (grid[k] >= total_time * (1.0 - 1e-12))
			{
				cur = endpoint;
			}
			else
			{
				const double sd = std::sqrt(dt * (remaining - dt) / remaining);
				for (int i = 0; i < m_; ++i)
				{
					const double mean = cur.coord[i] + dt * (endpoint.coord[i] - cur.coord[i]) / remaining;
					cur.coord[i] = mean + sd * rng.normal();
				}
			}
			path.push_back(cur);
		}
		return path;
	}

	CoverElement cur = cover_identity();
	for (std::size_t k = 1; k < grid.size(); ++k)
	{
		const double dt = grid[k] - grid[k - 1];
		const double rem = total_time - grid[k];
		if (grid[k] >= total_time * (1.0 - 1e-12))
		{
			cur = endpoint;
			path.push_back(cur);
			continue;
		}
		// proposal = free heat step; accept against the remaining-time kernel,
		// whose maximum over the group sits at the identity
		const double envelope = cover_heat_kernel(rem, cover_identity());
		bool accepted = false;
		for (long attempt = 0; attempt < 2000000; ++attempt)
		{
			const CoverElement step = cover_heat_sample(dt, rng);
			const CoverElement cand = cover_mul(cur, step);
			const double w = cover_heat_kernel(rem, cover_mul(cover_inv(cand), endpoint));
			if (rng.uniform() * envelope < w)
			{
				cur = cand;
				accepted = true;
				break;
			}
		}
		if (!accepted)
			throw std::runtime_error("bridge_sample: rejection step failed to accept");
		path.push_back(cur);
	}
	return path;
}

bool GroupContext::singular_set_member(const GroupElement& x) const
{
	check_kind(GroupKind::so3, "singular_set_member");
	// rotations of angle pi: the SU(2) lift has spectrum {i,-i}, i.e. w = 0
	return std::fabs(x.q.w) <= 1e-9;
}

} // namespace ym2d
