#include "ym2d/partition.hpp"

#include <cmath>
#include <stdexcept>

#include "ym2d/stats.hpp"

namespace ym2d {

NuSampler::NuSampler(FatGraph graph)
    : graph_(std::move(graph)), orient_(Orientation::canonical(graph_))
{
	if (graph_.face_count() != 1)
		throw std::invalid_argument("nu sampler: graph must have a single face");
	word_ = graph_.faces()[0];
}

CoverElement nu_sample(const GroupContext& ctx, const NuSampler& sampler, RngStream& rng)
{
	// h_Gamma: reverse-order product of lifted labels along the face word;
	// every edge shows up once with each orientation, so the lift choice
	// cancels and the class is well-defined
	Configuration cfg{sampler.orient(), {}};
	cfg.values.reserve(sampler.orient().size());
	for (int i = 0; i < sampler.orient().size(); ++i)
		cfg.values.push_back(ctx.haar_sample(rng));
	LiftedConfiguration lifted = lift_configuration(ctx, sampler.graph(), cfg);

	CoverElement h = ctx.cover_identity();
	for (Dart d : sampler.word())
		h = ctx.cover_mul(lifted.values[d], h);

	// canonical class representative
	if (ctx.kind() == GroupKind::u1)
		return h;
	CoverElement rep = ctx.cover_identity();
	const double a = h.q.angle();
	rep.q = Quat::axis_angle(a, 1.0, 0.0, 0.0);
	return rep;
}

namespace {

double cover_class_distance(const GroupContext& ctx, const CoverElement& a, const CoverElement& b)
{
	if (ctx.kind() == GroupKind::u1)
	{
		double d = 0.0;
		for (int i = 0; i < ctx.rank(); ++i)
			d = std::max(d, std::fabs(a.coord[i] - b.coord[i]));
		return d;
	}
	return std::fabs(a.q.angle() - b.q.angle());
}

CoverElement word_holonomy_lift(const GroupContext& ctx, const LiftedConfiguration& lifted,
                                const std::vector<Dart>& word)
{
	CoverElement h = ctx.cover_identity();
	for (Dart d : word)
		h = ctx.cover_mul(lifted.values[d], h);
	return h;
}

// orientation whose representative set contains the given darts
Orientation orientation_with(const FatGraph& graph, const std::vector<Dart>& wanted)
{
	std::vector<Dart> reps = graph.orientation_reps();
	for (Dart w : wanted)
		for (auto& r : reps)
			if (r == graph.alpha(w))
				r = w;
	return Orientation(graph, reps);
}

} // namespace

MoveReport move_equivariance_check(const GroupContext& ctx, const FatGraph& graph, Dart e,
                                   MoveKind move, int trials, RngStream& rng)
{
	if (graph.face_count() != 1)
		throw std::invalid_argument("move_equivariance_check: graph must have a single face");
	MoveReport report;
	report.trials = trials;

	if (move == MoveKind::cut_paste)
	{
		const FatGraph moved = cut_paste(graph, e); // validates its own preconditions
		const Dart d = graph.sigma(e);              // the dart being reinserted after e
		Orientation orient = orientation_with(graph, {e, d});
		const int idx_e = orient.index_of(e);
		const int idx_d = orient.index_of(d);

		for (int t = 0; t < trials; ++t)
		{
			Configuration cfg{orient, {}};
			cfg.values.reserve(orient.size());
			for (int i = 0; i < orient.size(); ++i)
				cfg.values.push_back(ctx.haar_sample(rng));
			// change of variables: k_e = g_d^{-1} g_e, all other labels kept
			Configuration cov = cfg;
			cov.values[idx_e] = ctx.mul(ctx.inv(cfg.values[idx_d]), cfg.values[idx_e]);

			const CoverElement ha = word_holonomy_lift(
			    ctx, lift_configuration(ctx, graph, cfg), graph.faces()[0]);
			const CoverElement hb = word_holonomy_lift(
			    ctx, lift_configuration(ctx, moved, cov), moved.faces()[0]);
			report.max_class_distance =
			    std::max(report.max_class_distance, cover_class_distance(ctx, ha, hb));
		}
	}
	else
	{
		auto res = whitehead(graph, e); // validates distinct endpoints
		const int vbar = graph.target_vertex(e);
		Orientation orient = orientation_with(graph, {e});
		const int idx_e = orient.index_of(e);

		for (int t = 0; t < trials; ++t)
		{
			Configuration cfg{orient, {}};
			cfg.values.reserve(orient.size());
			for (int i = 0; i < orient.size(); ++i)
				cfg.values.push_back(ctx.haar_sample(rng));
			const GroupElement g1 = cfg.values[idx_e];

			// labels seen from the contracted graph: edges touching the top
			// vertex of e are dragged through g1
			Configuration cov = cfg;
			for (int i = 0; i < orient.size(); ++i)
			{
				if (i == idx_e)
					continue;
				const Dart di = orient.reps()[i];
				const bool starts = graph.source_vertex(di) == vbar;
				const bool ends = graph.target_vertex(di) == vbar;
				if (starts && !ends)
					cov.values[i] = ctx.mul(cfg.values[i], g1);
				else if (!starts && ends)
					cov.values[i] = ctx.mul(ctx.inv(g1), cfg.values[i]);
				else if (starts && ends)
					cov.values[i] = ctx.mul(ctx.inv(g1), ctx.mul(cfg.values[i], g1));
			}

			// transfer to the renumbered dart set of the contracted graph
			std::vector<Dart> reps_new;
			std::vector<GroupElement> vals_new;
			for (int i = 0; i < orient.size(); ++i)
			{
				if (i == idx_e)
					continue;
				const Dart nd = res.old_to_new[orient.reps()[i]];
				reps_new.push_back(nd);
				vals_new.push_back(cov.values[i]);
			}
			Configuration cov_new{Orientation(res.graph, reps_new), vals_new};

			const CoverElement ha = word_holonomy_lift(
			    ctx, lift_configuration(ctx, graph, cfg), graph.faces()[0]);
			const CoverElement hb = word_holonomy_lift(
			    ctx, lift_configuration(ctx, res.graph, cov_new), res.graph.faces()[0]);
			report.max_class_distance =
			    std::max(report.max_class_distance, cover_class_distance(ctx, ha, hb));
		}
	}
	report.pass = report.max_class_distance <= 1e-9;
	return report;
}

PartitionEstimate closed_form_Z(const GroupContext& ctx, int genus, double T, double total_area,
                                const CenterElement& z, long effort, RngStream& rng)
{
	if (genus < 0)
		throw std::invalid_argument("closed_form_Z: negative genus");
	if (!(T > 0.0) || !(total_area > 0.0))
		throw std::invalid_argument("closed_form_Z: T and area must be positive");
	PartitionEstimate est;
	est.method = "closed_form";
	est.effort = effort;
	const double t = T * total_area;

	if (genus == 0 || ctx.kind() == GroupKind::u1)
	{
		// the integrand is constant: commutator lifts vanish for u1 and the
		// empty product is the identity in genus 0
		est.value = ctx.cover_heat_kernel(t, ctx.deck(z));
		est.std_error = 0.0;
		est.effort = 0;
		return est;
	}

	std::vector<double> vals(static_cast<std::size_t>(effort));
	for (auto& v : vals)
	{
		CoverElement word = ctx.cover_identity();
		for (int h = 0; h < genus; ++h)
		{
			const GroupElement a = ctx.haar_sample(rng);
			const GroupElement b = ctx.haar_sample(rng);
			word = ctx.cover_mul(word, ctx.commutator_lift(a, b));
		}
		v = ctx.cover_heat_kernel(t, ctx.cover_translate(word, z));
	}
	auto ms = stats::mean_std_error(vals);
	est.value = ms.mean;
	est.std_error = ms.std_error;
	return est;
}

PartitionEstimate character_sum_Z(const GroupContext& ctx, int genus, double T, double total_area,
                                  const CenterElement& z)
{
	if (ctx.kind() == GroupKind::u1)
		throw std::invalid_argument("character_sum_Z: not available for u1");
	if (genus < 0)
		throw std::invalid_argument("character_sum_Z: negative genus");
	PartitionEstimate est;
	est.method = "character_sum";
	est.std_error = 0.0;

	const double s = ctx.casimir_scale() * T * total_area / 2.0;
	const bool flip = ctx.kind() == GroupKind::so3 && z.sign < 0;
	const double volume = ctx.cover_volume(); // |Pi| normalization of the cover kernel
	double sum = 0.0;
	for (int n = 1; n < 100000; ++n)
	{
		const double dn = n;
		const double damp = std::exp(-(dn * dn - 1.0) * s);
		const double chi_sign = flip && n % 2 == 0 ? -1.0 : 1.0;
		sum += chi_sign * std::pow(dn, 2.0 - 2.0 * genus) * damp;
		const double bound = std::pow(dn, 2.0 - 2.0 * genus) * damp;
		if (dn * dn * s > 1.0 && bound < ctx.series_tol() * std::max(std::fabs(sum), 1e-300))
		{
			est.value = sum / volume;
			est.effort = n;
			return est;
		}
	}
	throw std::runtime_error("character_sum_Z: series did not converge");
}

PipelineReport full_pipeline_check(const FatGraph& graph, const MeasureSpec& spec, long effort,
                                   RngStream& rng)
{
	PipelineReport report;
	report.seed = rng.seed();
	const GroupContext& ctx = spec.ctx;
	const double total = spec.areas.total();

	// (a) direct integration on the given graph
	{
		RngStream sub = rng.split("pipeline-direct");
		long n_per_dim = 0;
		if (ctx.kind() == GroupKind::u1 && graph.edge_count() > 0)
		{
			const int dims = ctx.rank() * graph.edge_count();
			n_per_dim = static_cast<long>(std::floor(std::pow(2e6, 1.0 / dims)));
		}
		const bool quad = ctx.kind() == GroupKind::u1 &&
		                  (graph.edge_count() == 0 || n_per_dim >= 8);
		report.direct =
		    quad ? partition_estimate(graph, spec, PartitionMethod::quadrature,
		                              std::min<long>(32, std::max<long>(8, n_per_dim)), sub)
		         : partition_estimate(graph, spec, PartitionMethod::monte_carlo, effort, sub);
		report.direct.method = "direct:" + report.direct.method;
	}

	// (b) dual-tree contraction plus the nu integral
	{
		RngStream sub = rng.split("pipeline-reduced");
		auto contracted = contract_dual_tree(graph, spec.areas, spanning_tree_dual(graph));
		report.reduced.method = "reduced:nu";
		if (ctx.kind() == GroupKind::u1 || contracted.graph.dart_count() == 0)
		{
			// nu is the Dirac mass at the identity (u1 words cancel; genus 0
			// has no darts), so the integral is the kernel at the deck element
			report.reduced.value = ctx.cover_heat_kernel(spec.temperature * total, ctx.deck(spec.z));
			report.reduced.std_error = 0.0;
			report.reduced.effort = 0;
		}
		else
		{
			NuSampler nu(contracted.graph);
			std::vector<double> vals(static_cast<std::size_t>(effort));
			for (auto& v : vals)
				v = ctx.cover_heat_kernel(spec.temperature * total,
				                          ctx.cover_translate(nu_sample(ctx, nu, sub), spec.z));
			auto ms = stats::mean_std_error(vals);
			report.reduced.value = ms.mean;
			report.reduced.std_error = ms.std_error;
			report.reduced.effort = effort;
		}
	}

	// (c) the genus closed form
	{
		RngStream sub = rng.split("pipeline-closed");
		report.closed = closed_form_Z(ctx, graph.genus(), spec.temperature, total, spec.z, effort, sub);
	}

	auto compare = [&](const char* na, const PartitionEstimate& a, const char* nb,
	                   const PartitionEstimate& b) {
		PipelineComparison c;
		c.a = na;
		c.b = nb;
		c.difference = std::fabs(a.value - b.value);
		const double sigma = std::sqrt(a.std_error * a.std_error + b.std_error * b.std_error);
		c.tolerance = sigma > 0.0 ? 3.0 * sigma
		                          : 1e-8 * std::max({std::fabs(a.value), std::fabs(b.value), 1.0});
		c.pass = c.difference <= c.tolerance;
		report.comparisons.push_back(c);
		report.pass = report.pass && c.pass;
	};
	compare("direct", report.direct, "reduced", report.reduced);
	compare("direct", report.direct, "closed_form", report.closed);
	compare("reduced", report.reduced, "closed_form", report.closed);
	return report;
}

} // namespace ym2d
