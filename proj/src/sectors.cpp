#include "ym2d/sectors.hpp"

#include <cmath>
#include <stdexcept>

namespace ym2d {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

AbelianSpec::AbelianSpec(int m_, std::vector<double> areas, double T, std::vector<long long> z_)
    : m(m_), face_areas(std::move(areas)), temperature(T), z(std::move(z_))
{
	if (m < 1)
		throw std::invalid_argument("abelian spec: m must be positive");
	if (face_areas.empty())
		throw std::invalid_argument("abelian spec: need at least one face");
	for (double a : face_areas)
		if (!(a > 0.0))
			throw std::invalid_argument("abelian spec: face areas must be positive");
	if (!(temperature > 0.0))
		throw std::invalid_argument("abelian spec: temperature must be positive");
	if (static_cast<int>(z.size()) != m)
		throw std::invalid_argument("abelian spec: class size differs from m");
}

double AbelianSpec::total_area() const
{
	double s = 0.0;
	for (double a : face_areas)
		s += a;
	return s;
}

namespace {

// windowed 1d lattice sum helper: values g(k) = exp(-(shift+k)^2/(2 var))
struct Window {
	long long offset = 0;
	std::vector<double> vals;
};

Window gaussian_terms(double shift, double variance, double tol)
{
	const long long radius =
	    static_cast<long long>(std::ceil(std::sqrt(-2.0 * std::log(tol * 1e-3) * variance))) + 1;
	const long long center = std::llround(-shift);
	Window w;
	w.offset = center - radius;
	w.vals.resize(static_cast<std::size_t>(2 * radius + 1));
	for (long long k = 0; k < static_cast<long long>(w.vals.size()); ++k)
	{
		const double x = shift + static_cast<double>(w.offset + k);
		w.vals[static_cast<std::size_t>(k)] = std::exp(-x * x / (2.0 * variance));
	}
	return w;
}

Window convolve(const Window& a, const Window& b)
{
	Window out;
	out.offset = a.offset + b.offset;
	out.vals.assign(a.vals.size() + b.vals.size() - 1, 0.0);
	for (std::size_t i = 0; i < a.vals.size(); ++i)
		for (std::size_t j = 0; j < b.vals.size(); ++j)
			out.vals[i + j] += a.vals[i] * b.vals[j];
	return out;
}

double eval_at(const Window& w, long long k)
{
	const long long idx = k - w.offset;
	return (idx >= 0 && idx < static_cast<long long>(w.vals.size()))
	           ? w.vals[static_cast<std::size_t>(idx)]
	           : 0.0;
}

// constrained lattice sum over (k_1..k_n) with sum = target of
// prod_i exp(-(x_i + shift_i + k_i)^2 / (2 T s_i))
double lattice_sum(const AbelianSpec& spec, const std::vector<double>& x_coord,
                   const std::vector<double>& extra_shift, long long target)
{
	Window acc;
	bool first = true;
	for (std::size_t i = 0; i < spec.face_areas.size(); ++i)
	{
		Window w = gaussian_terms(x_coord[i] + extra_shift[i],
		                          spec.temperature * spec.face_areas[i], spec.series_tol);
		acc = first ? std::move(w) : convolve(acc, w);
		first = false;
	}
	return eval_at(acc, target);
}

} // namespace

AbelianIdentityReport abelian_identity_check(const AbelianSpec& spec, int probes, RngStream& rng,
                                             double tolerance)
{
	if (spec.face_areas.size() < 2)
		throw std::invalid_argument("abelian identity: need at least two faces");
	const std::size_t n = spec.face_areas.size();
	const double total = spec.total_area();

	AbelianIdentityReport report;
	for (int p = 0; p < probes; ++p)
	{
		// probe: x_1..x_{n-1} uniform, x_n = -(x_1+...+x_{n-1})
		std::vector<std::vector<double>> x(n, std::vector<double>(spec.m, 0.0));
		for (std::size_t i = 0; i + 1 < n; ++i)
			for (int c = 0; c < spec.m; ++c)
			{
				x[i][c] = rng.uniform();
				x[n - 1][c] -= x[i][c];
			}

		double lhs = 1.0, rhs = 1.0, z2 = 0.0;
		for (int c = 0; c < spec.m; ++c)
		{
			std::vector<double> xc(n), no_shift(n, 0.0), shift(n);
			for (std::size_t i = 0; i < n; ++i)
			{
				xc[i] = x[i][c];
				shift[i] = -spec.face_areas[i] / total * static_cast<double>(spec.z[c]);
			}
			lhs *= lattice_sum(spec, xc, no_shift, spec.z[c]);
			rhs *= lattice_sum(spec, xc, shift, spec.z[c]);
			z2 += static_cast<double>(spec.z[c]) * static_cast<double>(spec.z[c]);
		}
		lhs *= std::exp(z2 / (2.0 * spec.temperature * total));
		report.lhs.push_back(lhs);
		report.rhs.push_back(rhs);
		const double rel = std::fabs(lhs - rhs) / std::max(std::fabs(rhs), 1e-300);
		report.max_rel_error = std::max(report.max_rel_error, rel);
	}
	report.pass = report.max_rel_error <= tolerance;
	return report;
}

double abelian_dl_sum_over_classes(const AbelianSpec& spec,
                                   const std::vector<std::vector<double>>& probe, int radius)
{
	// the prefactor-free D_L summed over classes in a window; the exact limit
	// is the unconstrained product of wrapped Gaussian theta sums
	const std::size_t n = spec.face_areas.size();
	if (probe.size() != n)
		throw std::invalid_argument("abelian_dl_sum_over_classes: probe size mismatch");
	double out = 1.0;
	for (int c = 0; c < spec.m; ++c)
	{
		std::vector<double> xc(n), no_shift(n, 0.0);
		for (std::size_t i = 0; i < n; ++i)
			xc[i] = probe[i][c];
		double sum = 0.0;
		for (long long k = -radius; k <= radius; ++k)
			sum += lattice_sum(spec, xc, no_shift, k);
		out *= sum;
	}
	return out;
}

std::vector<GroupElement> abelian_face_sampler(const AbelianSpec& spec, RngStream& rng)
{
	const std::size_t n = spec.face_areas.size();
	const double total = spec.total_area();
	std::vector<std::vector<double>> y(n, std::vector<double>(spec.m));
	std::vector<double> s(spec.m, 0.0);
	for (std::size_t i = 0; i < n; ++i)
		for (int c = 0; c < spec.m; ++c)
		{
			y[i][c] = std::sqrt(spec.temperature * spec.face_areas[i]) * rng.normal();
			s[c] += y[i][c];
		}
	std::vector<GroupElement> faces(n);
	for (std::size_t i = 0; i < n; ++i)
	{
		faces[i].angle.resize(spec.m);
		for (int c = 0; c < spec.m; ++c)
		{
			const double x = y[i][c] + spec.face_areas[i] / total *
			                               (static_cast<double>(spec.z[c]) - s[c]);
			faces[i].angle[c] = x - std::floor(x);
		}
	}
	return faces;
}

// ---- the loop-holonomy process -----------------------------------------------------

LoopProcessSample loop_process_sample(const GroupContext& ctx, int genus, double T,
                                      double total_area, const CenterElement& z, int grid_points,
                                      RngStream& rng, bool auto_refine, HandleLaw law)
{
	if (genus < 0)
		throw std::invalid_argument("loop_process_sample: negative genus");
	if (!(T > 0.0) || !(total_area > 0.0))
		throw std::invalid_argument("loop_process_sample: T and area must be positive");
	if (grid_points < 2)
		throw std::invalid_argument("loop_process_sample: need at least two grid points");

	LoopProcessSample out;
	out.threshold = ctx.kind() == GroupKind::u1 ? 0.25 : kPi / 2.0;

	// handle holonomies and the commutator word; under the measure law they
	// carry the density p~(word z) / p~(1), realized by exact rejection from
	// Haar (for u1 the density is constant and Haar is already the marginal)
	const double t_total = T * total_area;
	for (int attempt = 0; attempt < 1000000; ++attempt)
	{
		out.handles.clear();
		CoverElement word = ctx.cover_identity();
		for (int h = 0; h < genus; ++h)
		{
			GroupElement a = ctx.haar_sample(rng);
			GroupElement b = ctx.haar_sample(rng);
			out.handles.push_back(a);
			out.handles.push_back(b);
			word = ctx.cover_mul(word, ctx.commutator_lift(a, b));
		}
		out.handle_word = word;
		if (law == HandleLaw::haar || ctx.kind() == GroupKind::u1 || genus == 0)
			break;
		const double w = ctx.cover_heat_kernel(t_total, ctx.cover_translate(word, z));
		const double env = ctx.cover_heat_kernel(t_total, ctx.cover_identity());
		if (rng.uniform() * env < w)
			break;
	}

	const CoverElement endpoint = ctx.cover_translate(out.handle_word, z);

	int points = grid_points;
	for (int refine = 0; refine < 24; ++refine)
	{
		out.grid.resize(points);
		std::vector<double> time_grid(points);
		for (int k = 0; k < points; ++k)
		{
			out.grid[k] = total_area * static_cast<double>(k) / (points - 1);
			time_grid[k] = T * out.grid[k];
		}
		out.bridge = ctx.bridge_sample(t_total, time_grid, endpoint, rng);
		out.values.clear();
		out.values.reserve(points);
		for (const auto& b : out.bridge)
			out.values.push_back(ctx.project(b));

		out.max_step = 0.0;
		for (int k = 0; k + 1 < points; ++k)
			out.max_step =
			    std::max(out.max_step, ctx.rotation_distance(out.values[k], out.values[k + 1]));
		out.grid_points = points;
		out.continuity_ok = out.max_step < out.threshold;
		if (out.continuity_ok || !auto_refine)
			return out;
		points *= 2;
	}
	throw std::runtime_error("loop_process_sample: grid refinement did not reach continuity");
}

SectorEstimate extract_obstruction(const GroupContext& ctx, const LoopProcessSample& sample)
{
	SectorEstimate est;
	est.o_hat = ctx.center_identity();
	if (!sample.continuity_ok)
	{
		est.refused = true;
		return est;
	}

	int comfortable = 0;
	CoverElement lift = ctx.cover_identity();
	for (std::size_t k = 0; k + 1 < sample.values.size(); ++k)
	{
		const GroupElement rel =
		    ctx.mul(ctx.inv(sample.values[k]), sample.values[k + 1]);
		CoverElement step = ctx.cover_identity();
		if (ctx.kind() == GroupKind::u1)
		{
			for (int c = 0; c < ctx.rank(); ++c)
			{
				const double d = rel.angle[c];
				step.coord[c] = d - std::round(d); // nearest representative
			}
		}
		else
		{
			// nearest lift: the quaternion branch with positive real part
			step.q = rel.q.w >= 0.0 ? rel.q : rel.q.neg();
		}
		lift = ctx.cover_mul(lift, step);
		if (ctx.rotation_distance(sample.values[k], sample.values[k + 1]) <
		    0.5 * sample.threshold)
			++comfortable;
	}
	est.confidence = sample.values.size() > 1
	                     ? static_cast<double>(comfortable) /
	                           static_cast<double>(sample.values.size() - 1)
	                     : 1.0;

	// o = (lifted endpoint) (commutator word)^{-1}, a deck element
	const CoverElement o_cover = ctx.cover_mul(lift, ctx.cover_inv(sample.handle_word));
	try
	{
		est.o_hat = ctx.center_from_cover(o_cover, 1e-5);
	}
	catch (const std::exception&)
	{
		est.refused = true;
	}
	return est;
}

} // namespace ym2d
