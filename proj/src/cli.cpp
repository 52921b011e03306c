#include "ym2d/cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <json.hpp>

#include "ym2d/graph_io.hpp"
#include "ym2d/partition.hpp"
#include "ym2d/run_config.hpp"
#include "ym2d/sectors.hpp"
#include "ym2d/stats.hpp"

namespace ym2d::cli {

using nlohmann::json;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitNumerical = 1;
constexpr int kExitValidation = 2;
constexpr int kExitInternal = 3;

std::string fmt(double v)
{
	char buf[64];
	std::snprintf(buf, sizeof buf, "%.17g", v);
	return buf;
}

std::string csv_field(const std::string& s)
{
	if (s.find_first_of(",\"\n") == std::string::npos)
		return s;
	std::string out = "\"";
	for (char c : s)
	{
		if (c == '"')
			out += '"';
		out += c;
	}
	out += '"';
	return out;
}

void write_file(const std::string& path, const std::string& content)
{
	std::ofstream out(path, std::ios::binary);
	if (!out)
		throw std::runtime_error("cannot write output file: " + path);
	out << content;
}

void emit_report(const RunConfig& cfg, const json& body)
{
	if (!cfg.out_report.empty())
		write_file(cfg.out_report, body.dump(2) + "\n");
}

json estimate_json(const PartitionEstimate& e)
{
	return {{"value", e.value}, {"std_error", e.std_error}, {"method", e.method}, {"effort", e.effort}};
}

struct CheckAccumulator
{
	json lines = json::array();
	bool pass = true;
	std::vector<std::string> warnings;

	void add(const std::string& what, bool ok, double error, double tolerance)
	{
		lines.push_back({{"what", what}, {"pass", ok}, {"error", error}, {"tolerance", tolerance}});
		pass = pass && ok;
		std::cout << (ok ? "[PASS] " : "[FAIL] ") << what << "  error=" << fmt(error)
		          << " tol=" << fmt(tolerance) << "\n";
	}

	void warn(const std::string& message)
	{
		warnings.push_back(message);
		std::cout << "[WARN] " << message << "\n";
	}
};

std::string center_to_string(const GroupContext& ctx, const CenterElement& z)
{
	if (ctx.kind() == GroupKind::u1)
	{
		std::string s = "(";
		for (std::size_t i = 0; i < z.winding.size(); ++i)
			s += (i ? "," : "") + std::to_string(z.winding[i]);
		return s + ")";
	}
	return z.sign > 0 ? "+1" : "-1";
}

// ---- partition -------------------------------------------------------------------

int cmd_partition(const RunConfig& cfg)
{
	auto [graph, areas] = load_graph(cfg.graph_path);
	GroupContext ctx = cfg.context();
	MeasureSpec spec(ctx, cfg.temperature, cfg.bundle_class(), areas);
	RngStream rng(cfg.seed);

	PipelineReport report = full_pipeline_check(graph, spec, cfg.effort, rng);

	std::cout << "partition: group=" << to_string(ctx.kind())
	          << " genus=" << graph.genus() << " T=" << fmt(cfg.temperature)
	          << " z=" << center_to_string(ctx, spec.z) << "\n";
	std::cout << "  direct  = " << fmt(report.direct.value) << " +- " << fmt(report.direct.std_error)
	          << "  (" << report.direct.method << ")\n";
	std::cout << "  reduced = " << fmt(report.reduced.value) << " +- "
	          << fmt(report.reduced.std_error) << "  (" << report.reduced.method << ")\n";
	std::cout << "  closed  = " << fmt(report.closed.value) << " +- " << fmt(report.closed.std_error)
	          << "  (" << report.closed.method << ")\n";
	json comparisons = json::array();
	for (const auto& c : report.comparisons)
	{
		std::cout << (c.pass ? "[PASS] " : "[FAIL] ") << c.a << " vs " << c.b
		          << "  |diff|=" << fmt(c.difference) << " tol=" << fmt(c.tolerance) << "\n";
		comparisons.push_back({{"a", c.a},
		                       {"b", c.b},
		                       {"difference", c.difference},
		                       {"tolerance", c.tolerance},
		                       {"pass", c.pass}});
	}

	emit_report(cfg, json{{"command", "partition"},
	                      {"seed", cfg.seed},
	                      {"pass", report.pass},
	                      {"direct", estimate_json(report.direct)},
	                      {"reduced", estimate_json(report.reduced)},
	                      {"closed_form", estimate_json(report.closed)},
	                      {"comparisons", comparisons}});
	return report.pass ? kExitPass : kExitNumerical;
}

// ---- check suites -------------------------------------------------------------------

void check_heat(const RunConfig& cfg, CheckAccumulator& acc)
{
	GroupContext ctx = cfg.context();
	RngStream rng = RngStream(cfg.seed).split("check-heat");
	const int trials = std::max(1, cfg.trials);

	// projection identity at random points
	double worst = 0.0;
	for (int i = 0; i < trials; ++i)
	{
		const double t = 0.05 + 2.0 * rng.uniform();
		CoverElement x = ctx.cover_identity();
		if (ctx.kind() == GroupKind::u1)
		{
			for (auto& c : x.coord)
				c = 4.0 * rng.uniform() - 2.0;
		}
		else
			x = ctx.cover_haar_sample(rng);
		auto [lhs, rhs] = ctx.projection_sum_check(t, x);
		worst = std::max(worst, std::fabs(lhs - rhs) / std::max(std::fabs(rhs), 1e-300));
	}
	acc.add("projection identity over " + std::to_string(trials) + " points", worst <= cfg.exact_tol,
	        worst, cfg.exact_tol);

	// semigroup property
	if (ctx.kind() == GroupKind::u1)
	{
		// the kernel factorizes over coordinates, so the rank-1 quadrature is
		// the substantive check
		GroupContext one = GroupContext::u1(1, ctx.series_tol());
		const double s = 0.2, t = 0.5;
		const int n = 256;
		double worst_sg = 0.0;
		for (int rep = 0; rep < 3; ++rep)
		{
			GroupElement x = one.haar_sample(rng);
			double conv = 0.0;
			for (int i = 0; i < n; ++i)
			{
				GroupElement y = one.identity();
				y.angle[0] = (i + 0.5) / n;
				conv += one.heat_kernel(s, one.mul(x, one.inv(y))) * one.heat_kernel(t, y);
			}
			conv /= n;
			const double rhs = one.heat_kernel(s + t, x);
			worst_sg = std::max(worst_sg, std::fabs(conv - rhs) / rhs);
		}
		acc.add("semigroup by periodic quadrature", worst_sg <= cfg.exact_tol, worst_sg,
		        cfg.exact_tol);
	}
	else
	{
		const double s = 0.35, t = 0.4;
		GroupElement x = ctx.haar_sample(rng);
		const long n = std::max<long>(cfg.effort, 20000);
		std::vector<double> vals(static_cast<std::size_t>(n));
		for (auto& v : vals)
		{
			GroupElement y = ctx.haar_sample(rng);
			v = ctx.heat_kernel(s, ctx.mul(x, ctx.inv(y))) * ctx.heat_kernel(t, y);
		}
		auto ms = stats::mean_std_error(vals);
		const double want = ctx.heat_kernel(s + t, x);
		const double sigmas = std::fabs(ms.mean - want) / std::max(ms.std_error, 1e-300);
		acc.add("semigroup by Monte Carlo (sigmas)", sigmas <= 3.0, sigmas, 3.0);
	}

	// unit mass
	if (ctx.kind() == GroupKind::u1)
	{
		GroupContext one = GroupContext::u1(1, ctx.series_tol());
		double mass = 0.0;
		const int n = 512;
		for (int i = 0; i < n; ++i)
		{
			GroupElement y = one.identity();
			y.angle[0] = (i + 0.5) / n;
			mass += one.heat_kernel(0.3, y);
		}
		mass /= n;
		acc.add("unit mass of the kernel", std::fabs(mass - 1.0) <= cfg.exact_tol,
		        std::fabs(mass - 1.0), cfg.exact_tol);
	}
	else
	{
		// Weyl-measure quadrature
		const double t = 0.3;
		const int n = 4096;
		double mass = 0.0;
		const double pi = 3.14159265358979323846;
		for (int i = 0; i < n; ++i)
		{
			const double psi = (i + 0.5) / n * pi;
			GroupElement x;
			const double half = ctx.kind() == GroupKind::so3 ? psi / 2.0 : psi;
			x.q = Quat::axis_angle(half, 0.0, 0.0, 1.0);
			const double weight = ctx.kind() == GroupKind::so3
			                          ? (1.0 - std::cos(psi)) / pi
			                          : 2.0 / pi * std::sin(psi) * std::sin(psi);
			mass += ctx.heat_kernel(t, x) * weight;
		}
		mass *= pi / n;
		acc.add("unit mass of the kernel (Weyl quadrature)", std::fabs(mass - 1.0) <= 1e-6,
		        std::fabs(mass - 1.0), 1e-6);
	}
}

void check_gauge(const RunConfig& cfg, CheckAccumulator& acc)
{
	auto [graph, areas] = load_graph(cfg.graph_path);
	GroupContext ctx = cfg.context();
	MeasureSpec spec(ctx, cfg.temperature, cfg.bundle_class(), areas);
	RngStream rng = RngStream(cfg.seed).split("check-gauge");

	if (cfg.trials == 0)
	{
		acc.warn("gauge suite ran with 0 trials: vacuous pass");
		acc.add("gauge suite (0 trials)", true, 0.0, 0.0);
		return;
	}

	double worst_proj = 0.0, worst_obs = 0.0, worst_class = 0.0, worst_lift = 0.0, worst_sum = 0.0;
	for (int i = 0; i < cfg.trials; ++i)
	{
		Configuration config = haar_configuration(ctx, graph, rng);
		LiftedConfiguration lifted = lift_configuration(ctx, graph, config);
		GaugeTransform j = random_gauge(ctx, graph, rng);
		LiftedConfiguration moved = gauge_apply(ctx, graph, j, lifted);

		// projection constraint preserved
		try
		{
			validate_lifted(ctx, graph, moved);
		}
		catch (const std::exception&)
		{
			worst_proj = 1.0;
		}
		// obstruction invariant
		if (!ctx.center_equal(obstruction(ctx, graph, moved), obstruction(ctx, graph, lifted)))
			worst_obs = 1.0;
		// boundary classes unchanged
		for (int f = 0; f < graph.face_count(); ++f)
		{
			const double a = ctx.cover_class_angle(boundary_holonomy_lift(ctx, graph, lifted, f));
			const double b = ctx.cover_class_angle(boundary_holonomy_lift(ctx, graph, moved, f));
			worst_class = std::max(worst_class, std::fabs(a - b));
		}
		// lift independence of the density
		const double base = density_D_lifted(graph, spec, lifted);
		for (Dart d = 0; d < graph.dart_count(); ++d)
		{
			LiftedConfiguration tweaked = lifted;
			if (ctx.kind() == GroupKind::u1)
				tweaked.values[d].coord[0] += 1.0;
			else if (ctx.kind() == GroupKind::so3)
				tweaked.values[d].q = tweaked.values[d].q.neg();
			else
				continue;
			worst_lift = std::max(worst_lift, std::fabs(density_D_lifted(graph, spec, tweaked) - base) /
			                                      std::max(base, 1e-300));
		}
		// class decomposition
		double lhs = 0.0;
		if (ctx.kind() == GroupKind::u1)
		{
			for (long long k = -8; k <= 8; ++k)
			{
				CenterElement z = ctx.center_identity();
				z.winding[0] = k;
				MeasureSpec sk(ctx, cfg.temperature, z, areas);
				lhs += density_D(graph, sk, config);
			}
			if (ctx.rank() > 1)
				lhs = 0.0; // the window trick is rank-1 only; skip for higher rank
		}
		else if (ctx.kind() == GroupKind::so3)
		{
			CenterElement plus, minus;
			minus.sign = -1;
			lhs = density_D(graph, MeasureSpec(ctx, cfg.temperature, plus, areas), config) +
			      density_D(graph, MeasureSpec(ctx, cfg.temperature, minus, areas), config);
		}
		else
			lhs = density_D(graph, spec, config);
		if (!(ctx.kind() == GroupKind::u1 && ctx.rank() > 1))
		{
			const double rhs = usual_density(graph, spec, config);
			worst_sum = std::max(worst_sum, std::fabs(lhs - rhs) / std::max(rhs, 1e-300));
		}
	}
	acc.add("gauge action preserves the configuration space", worst_proj == 0.0, worst_proj, 0.0);
	acc.add("obstruction class is gauge invariant", worst_obs == 0.0, worst_obs, 0.0);
	acc.add("boundary classes are gauge invariant", worst_class <= 1e-9, worst_class, 1e-9);
	acc.add("density is lift independent", worst_lift <= 1e-10, worst_lift, 1e-10);
	acc.add("class densities sum to the plain density", worst_sum <= cfg.exact_tol, worst_sum,
	        cfg.exact_tol);
}

void check_moves(const RunConfig& cfg, CheckAccumulator& acc)
{
	auto [graph, areas] = load_graph(cfg.graph_path);
	GroupContext ctx = cfg.context();
	RngStream rng = RngStream(cfg.seed).split("check-moves");

	FatGraph single = graph;
	if (single.face_count() != 1)
		single = contract_dual_tree(graph, areas, spanning_tree_dual(graph)).graph;

	double worst_k = 0.0, worst_w = 0.0;
	bool any_k = false, any_w = false;
	for (Dart e = 0; e < single.dart_count(); ++e)
	{
		if (single.phi(e) != single.alpha(e))
		{
			auto rep = move_equivariance_check(ctx, single, e, MoveKind::cut_paste, cfg.trials, rng);
			worst_k = std::max(worst_k, rep.max_class_distance);
			any_k = true;
		}
		if (single.vertex_of(e) != single.vertex_of(single.alpha(e)))
		{
			auto rep = move_equivariance_check(ctx, single, e, MoveKind::whitehead, cfg.trials, rng);
			worst_w = std::max(worst_w, rep.max_class_distance);
			any_w = true;
		}
	}
	if (any_k)
		acc.add("cut-and-paste equivariance (" + std::to_string(cfg.trials) + " trials/dart)",
		        worst_k <= 1e-9, worst_k, 1e-9);
	if (any_w)
		acc.add("whitehead equivariance (" + std::to_string(cfg.trials) + " trials/dart)",
		        worst_w <= 1e-9, worst_w, 1e-9);
	if (!any_k && !any_w)
		acc.warn("no applicable moves on this graph");

	// distributional invariance through standardization
	if (single.vertex_count() == 1 && single.genus() > 0 && ctx.kind() != GroupKind::u1)
	{
		auto std_form = standardize(single);
		const int n = 4000;
		NuSampler before(single), after(std_form.graph);
		std::vector<double> a(n), b(n);
		RngStream r1 = rng.split(1), r2 = rng.split(2);
		for (int i = 0; i < n; ++i)
		{
			a[i] = nu_sample(ctx, before, r1).q.angle();
			b[i] = nu_sample(ctx, after, r2).q.angle();
		}
		const double p = stats::ks_two_sample_pvalue(a, b);
		acc.add("nu histogram preserved by standardize (KS p-value)", p > 0.01, p, 0.01);
	}
}

void check_subdivision(const RunConfig& cfg, CheckAccumulator& acc)
{
	auto [graph, areas] = load_graph(cfg.graph_path);
	GroupContext ctx = cfg.context();
	MeasureSpec spec(ctx, cfg.temperature, cfg.bundle_class(), areas);
	RngStream rng = RngStream(cfg.seed).split("check-subdivision");

	const int face = 0;
	const int len = static_cast<int>(graph.faces()[face].size());
	std::vector<SubdivisionStep> steps = {
	    {SubdivideOp::add_vertex, {.dart = 0, .face = -1, .pos_i = 0, .pos_j = 0, .area_first = 0}},
	    {SubdivideOp::add_pendant_edge, {.dart = 0, .face = -1, .pos_i = 0, .pos_j = 0, .area_first = 0}},
	    {SubdivideOp::split_face,
	     {.dart = -1, .face = face, .pos_i = 0, .pos_j = len > 1 ? 1 : 0,
	      .area_first = areas.area(face) / 3.0}},
	};
	auto report = pushforward_check(graph, spec, steps, cfg.effort, rng);
	for (const auto& line : report.lines)
		acc.add(line.what, line.pass, line.error, line.tolerance);
}

void check_abelian(const RunConfig& cfg, CheckAccumulator& acc)
{
	GroupContext ctx = cfg.context();
	if (ctx.kind() != GroupKind::u1)
		throw std::invalid_argument("abelian suite requires a u1 group");
	auto [graph, areas] = load_graph(cfg.graph_path);
	if (graph.face_count() < 2)
		throw std::invalid_argument("abelian suite needs a graph with at least two faces");
	RngStream rng = RngStream(cfg.seed).split("check-abelian");

	AbelianSpec aspec(ctx.rank(), areas.by_face(), cfg.temperature, cfg.z_winding);
	auto idrep = abelian_identity_check(aspec, std::max(1, cfg.trials), rng, cfg.exact_tol);
	acc.add("gaussian-representation identity", idrep.pass, idrep.max_rel_error, cfg.exact_tol);

	MeasureSpec spec(ctx, cfg.temperature, cfg.bundle_class(), areas);
	const int n = static_cast<int>(std::max<long>(cfg.effort, 2000));
	RngStream r1 = rng.split(1), r2 = rng.split(2);
	double worst_p = 1.0;
	std::vector<std::vector<double>> lat(graph.face_count(), std::vector<double>(n));
	std::vector<std::vector<double>> gau(graph.face_count(), std::vector<double>(n));
	for (int i = 0; i < n; ++i)
	{
		Configuration config = sample_config(graph, spec, r1);
		auto faces = abelian_face_sampler(aspec, r2);
		for (int f = 0; f < graph.face_count(); ++f)
		{
			lat[f][i] = holonomy(ctx, graph, config, graph.faces()[f]).angle[0];
			gau[f][i] = faces[f].angle[0];
		}
	}
	for (int f = 0; f < graph.face_count(); ++f)
		worst_p = std::min(worst_p, stats::ks_two_sample_pvalue(lat[f], gau[f]));
	acc.add("face sampler vs lattice sampler (KS p-value)", worst_p > 0.01, worst_p, 0.01);
}

void check_sectors(const RunConfig& cfg, CheckAccumulator& acc)
{
	GroupContext ctx = cfg.context();
	if (ctx.kind() == GroupKind::su2)
		throw std::invalid_argument("sectors suite needs a nontrivial deck group");
	RngStream rng = RngStream(cfg.seed).split("check-sectors");
	int mismatches = 0, refusals = 0;
	const int n = std::max(1, cfg.trials);
	for (int i = 0; i < n; ++i)
	{
		auto sample = loop_process_sample(ctx, cfg.genus, cfg.temperature, cfg.total_area,
		                                  cfg.bundle_class(), cfg.grid, rng);
		auto est = extract_obstruction(ctx, sample);
		if (est.refused)
			++refusals;
		else if (!ctx.center_equal(est.o_hat, cfg.bundle_class()))
			++mismatches;
	}
	acc.add("sector extraction refusals", refusals == 0, refusals, 0.0);
	acc.add("sector extraction mismatches", mismatches == 0, mismatches, 0.0);
}

int cmd_check(const RunConfig& cfg)
{
	CheckAccumulator acc;
	if (cfg.suite == "heat")
		check_heat(cfg, acc);
	else if (cfg.suite == "gauge")
		check_gauge(cfg, acc);
	else if (cfg.suite == "moves")
		check_moves(cfg, acc);
	else if (cfg.suite == "subdivision")
		check_subdivision(cfg, acc);
	else if (cfg.suite == "abelian")
		check_abelian(cfg, acc);
	else
		check_sectors(cfg, acc);

	emit_report(cfg, json{{"command", "check"},
	                      {"suite", cfg.suite},
	                      {"seed", cfg.seed},
	                      {"pass", acc.pass},
	                      {"warnings", acc.warnings},
	                      {"lines", acc.lines}});
	return acc.pass ? kExitPass : kExitNumerical;
}

// ---- sample -----------------------------------------------------------------------

int cmd_sample(const RunConfig& cfg)
{
	GroupContext ctx = cfg.context();
	std::ostringstream csv;

	if (cfg.sample_kind == "config")
	{
		auto [graph, areas] = load_graph(cfg.graph_path);
		MeasureSpec spec(ctx, cfg.temperature, cfg.bundle_class(), areas);
		RngStream rng(cfg.seed);
		ChainParams params;
		params.burn_in = cfg.burn_in;
		params.thinning = cfg.thinning;
		auto samples = sample_configs(graph, spec, cfg.count, rng, params);

		csv << "sample";
		Orientation orient = Orientation::canonical(graph);
		for (Dart d : orient.reps())
		{
			if (ctx.kind() == GroupKind::u1)
				for (int c = 0; c < ctx.rank(); ++c)
					csv << "," << csv_field("d" + std::to_string(d) + "_x" + std::to_string(c));
			else
				for (const char* part : {"_w", "_x", "_y", "_z"})
					csv << "," << csv_field("d" + std::to_string(d) + part);
		}
		csv << "\n";
		for (int i = 0; i < cfg.count; ++i)
		{
			csv << i;
			for (int k = 0; k < orient.size(); ++k)
			{
				const GroupElement& v = samples[i].values[k];
				if (ctx.kind() == GroupKind::u1)
					for (int c = 0; c < ctx.rank(); ++c)
						csv << "," << fmt(v.angle[c]);
				else
					csv << "," << fmt(v.q.w) << "," << fmt(v.q.x) << "," << fmt(v.q.y) << ","
					    << fmt(v.q.z);
			}
			csv << "\n";
		}
	}
	else
	{
		RngStream rng(cfg.seed);
		csv << "sample,t";
		if (ctx.kind() == GroupKind::u1)
			for (int c = 0; c < ctx.rank(); ++c)
				csv << ",x" << c;
		else
			csv << ",w,x,y,z";
		csv << "\n";
		for (int i = 0; i < cfg.count; ++i)
		{
			auto sample = loop_process_sample(ctx, cfg.genus, cfg.temperature, cfg.total_area,
			                                  cfg.bundle_class(), cfg.grid, rng);
			for (std::size_t k = 0; k < sample.grid.size(); ++k)
			{
				csv << i << "," << fmt(sample.grid[k]);
				const GroupElement& v = sample.values[k];
				if (ctx.kind() == GroupKind::u1)
					for (int c = 0; c < ctx.rank(); ++c)
						csv << "," << fmt(v.angle[c]);
				else
					csv << "," << fmt(v.q.w) << "," << fmt(v.q.x) << "," << fmt(v.q.y) << ","
					    << fmt(v.q.z);
				csv << "\n";
			}
		}
	}

	if (cfg.out_csv.empty())
		std::cout << csv.str();
	else
		write_file(cfg.out_csv, csv.str());
	emit_report(cfg, json{{"command", "sample"},
	                      {"kind", cfg.sample_kind},
	                      {"seed", cfg.seed},
	                      {"count", cfg.count},
	                      {"pass", true}});
	return kExitPass;
}

// ---- reduce -----------------------------------------------------------------------

int cmd_reduce(const RunConfig& cfg)
{
	auto [graph, areas] = load_graph(cfg.graph_path);
	json moves = json::array();

	auto contracted = contract_dual_tree(graph, areas, spanning_tree_dual(graph));
	for (Dart d : spanning_tree_dual(graph).pair_reps())
		moves.push_back({{"kind", "contract_dual_edge"}, {"dart", d}});

	FatGraph single = contracted.graph;
	// whitehead contractions along a spanning tree bring it to one vertex
	while (single.vertex_count() > 1)
	{
		Dart bridge = -1;
		for (Dart d = 0; d < single.dart_count() && bridge < 0; ++d)
			if (single.vertex_of(d) != single.vertex_of(single.alpha(d)))
				bridge = d;
		if (bridge < 0)
			throw std::runtime_error("reduce: connected graph without a contractible edge");
		moves.push_back({{"kind", "whitehead"}, {"dart", bridge}});
		single = whitehead(single, bridge).graph;
	}

	auto standardized = standardize(single);
	for (const auto& entry : standardized.log)
	{
		if (entry.kind == MoveLogEntry::Kind::cut_paste)
			moves.push_back({{"kind", "cut_paste"}, {"dart", entry.dart}});
		else
			moves.push_back({{"kind", "relabel"}, {"old_to_new", entry.old_to_new}});
	}

	const std::string single_path =
	    cfg.out_graph.empty() ? "reduced_single_face.json" : cfg.out_graph;
	save_graph(single_path, contracted.graph, contracted.areas);
	const std::string standard_path = single_path + ".standard.json";
	save_graph(standard_path, standardized.graph,
	           AreaMap(standardized.graph, {areas.total()}));
	if (!cfg.out_moves.empty())
		write_file(cfg.out_moves, moves.dump(2) + "\n");

	std::cout << "reduce: faces " << graph.face_count() << " -> 1, vertices "
	          << graph.vertex_count() << " -> " << standardized.graph.vertex_count()
	          << ", genus " << graph.genus() << ", moves " << moves.size() << "\n";
	emit_report(cfg, json{{"command", "reduce"},
	                      {"seed", cfg.seed},
	                      {"pass", true},
	                      {"genus", graph.genus()},
	                      {"single_face_graph", single_path},
	                      {"standard_graph", standard_path},
	                      {"moves", moves}});
	return kExitPass;
}

// ---- sectors -----------------------------------------------------------------------

int cmd_sectors(const RunConfig& cfg)
{
	GroupContext ctx = cfg.context();
	if (ctx.kind() == GroupKind::su2)
		throw std::invalid_argument("sectors: su2 has a single sector");
	RngStream rng(cfg.seed);
	std::ostringstream csv;
	csv << "sample,o_hat,refused,grid_points,max_step,confidence\n";
	int mismatches = 0, refusals = 0;
	for (int i = 0; i < cfg.count; ++i)
	{
		auto sample = loop_process_sample(ctx, cfg.genus, cfg.temperature, cfg.total_area,
		                                  cfg.bundle_class(), cfg.grid, rng);
		auto est = extract_obstruction(ctx, sample);
		if (est.refused)
			++refusals;
		else if (!ctx.center_equal(est.o_hat, cfg.bundle_class()))
			++mismatches;
		csv << i << "," << csv_field(center_to_string(ctx, est.o_hat)) << ","
		    << (est.refused ? 1 : 0) << "," << sample.grid_points << "," << fmt(sample.max_step)
		    << "," << fmt(est.confidence) << "\n";
	}
	const bool pass = mismatches == 0 && refusals == 0;
	std::cout << "sectors: " << cfg.count << " samples, " << refusals << " refusals, "
	          << mismatches << " mismatches\n";
	if (!cfg.out_csv.empty())
		write_file(cfg.out_csv, csv.str());
	else
		std::cout << csv.str();
	emit_report(cfg, json{{"command", "sectors"},
	                      {"seed", cfg.seed},
	                      {"samples", cfg.count},
	                      {"refusals", refusals},
	                      {"mismatches", mismatches},
	                      {"pass", pass}});
	return pass ? kExitPass : kExitNumerical;
}

} // namespace

int run(const std::vector<std::string>& args)
{
	std::string command, config_path, out_override;
	std::optional<std::uint64_t> seed_override;
	std::optional<long> effort_override;

	if (args.empty())
	{
		std::cerr << "usage: ym2d <partition|check|sample|reduce|sectors> --config <file> "
		             "[--seed N] [--effort N] [--out report.json]\n";
		return kExitValidation;
	}
	command = args[0];
	for (std::size_t i = 1; i < args.size(); ++i)
	{
		const std::string& a = args[i];
		auto next = [&]() -> const std::string& {
			if (i + 1 >= args.size())
				throw std::invalid_argument("missing value after " + a);
			return args[++i];
		};
		try
		{
			if (a == "--config")
				config_path = next();
			else if (a == "--seed")
				seed_override = std::stoull(next());
			else if (a == "--effort")
				effort_override = std::stol(next());
			else if (a == "--out")
				out_override = next();
			else
				throw std::invalid_argument("unknown flag " + a);
		}
		catch (const std::exception& e)
		{
			std::cerr << "error: " << e.what() << "\n";
			return kExitValidation;
		}
	}
	if (config_path.empty())
	{
		std::cerr << "error: --config is required\n";
		return kExitValidation;
	}

	RunConfig cfg;
	try
	{
		cfg = load_run_config(config_path, command);
		if (seed_override)
			cfg.seed = *seed_override;
		if (effort_override)
		{
			cfg.effort = *effort_override;
			cfg.count = static_cast<int>(std::min<long>(*effort_override, 1000000));
			cfg.trials = static_cast<int>(std::min<long>(*effort_override, 1000000));
		}
		if (!out_override.empty())
			cfg.out_report = out_override;
	}
	catch (const std::exception& e)
	{
		std::cerr << "config error: " << e.what() << "\n";
		return kExitValidation;
	}

	try
	{
		if (command == "partition")
			return cmd_partition(cfg);
		if (command == "check")
			return cmd_check(cfg);
		if (command == "sample")
			return cmd_sample(cfg);
		if (command == "reduce")
			return cmd_reduce(cfg);
		return cmd_sectors(cfg);
	}
	catch (const std::invalid_argument& e)
	{
		std::cerr << "validation error: " << e.what() << "\n";
		return kExitValidation;
	}
	catch (const std::exception& e)
	{
		std::cerr << "internal error: " << e.what() << "\n";
		return kExitInternal;
	}
}

} // namespace ym2d::cli
