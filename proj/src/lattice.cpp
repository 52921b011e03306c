#include "ym2d/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>
#include <stdexcept>

#include "ym2d/stats.hpp"

namespace ym2d {

// ---- orientation and configurations -----------------------------------------

Orientation::Orientation(const FatGraph& graph, std::vector<Dart> reps) : reps_(std::move(reps))
{
	index_.assign(graph.dart_count(), -1);
	if (static_cast<int>(reps_.size()) != graph.edge_count())
		throw std::invalid_argument("orientation: need exactly one dart per edge");
	for (int i = 0; i < static_cast<int>(reps_.size()); ++i)
	{
		const Dart d = reps_[i];
		if (d < 0 || d >= graph.dart_count())
			throw std::invalid_argument("orientation: dart out of range");
		if (index_[d] >= 0 || index_[graph.alpha(d)] >= 0)
			throw std::invalid_argument("orientation: both darts of a pair selected");
		index_[d] = i;
	}
}

Orientation Orientation::canonical(const FatGraph& graph)
{
	return Orientation(graph, graph.orientation_reps());
}

Configuration haar_configuration(const GroupContext& ctx, const FatGraph& graph, RngStream& rng)
{
	Configuration cfg{Orientation::canonical(graph), {}};
	cfg.values.reserve(cfg.orient.size());
	for (int i = 0; i < cfg.orient.size(); ++i)
		cfg.values.push_back(ctx.haar_sample(rng));
	return cfg;
}

GroupElement config_value(const GroupContext& ctx, const Configuration& cfg, const FatGraph& graph,
                          Dart d)
{
	const int i = cfg.orient.index_of(d);
	if (i >= 0)
		return cfg.values[i];
	const int j = cfg.orient.index_of(graph.alpha(d));
	if (j < 0)
		throw std::invalid_argument("config_value: dart not covered by the orientation");
	return ctx.inv(cfg.values[j]);
}

LiftedConfiguration lift_configuration(const GroupContext& ctx, const FatGraph& graph,
                                       const Configuration& cfg)
{
	LiftedConfiguration lifted;
	lifted.values.resize(graph.dart_count(), ctx.cover_identity());
	for (int i = 0; i < cfg.orient.size(); ++i)
	{
		const Dart d = cfg.orient.reps()[i];
		const CoverElement up = ctx.principal_lift(cfg.values[i]);
		lifted.values[d] = up;
		lifted.values[graph.alpha(d)] = ctx.cover_inv(up);
	}
	return lifted;
}

void validate_lifted(const GroupContext& ctx, const FatGraph& graph, const LiftedConfiguration& lifted)
{
	if (static_cast<int>(lifted.values.size()) != graph.dart_count())
		throw std::invalid_argument("lifted configuration: size mismatch");
	for (Dart d = 0; d < graph.dart_count(); ++d)
	{
		const GroupElement a = ctx.project(lifted.values[d]);
		const GroupElement b = ctx.inv(ctx.project(lifted.values[graph.alpha(d)]));
		if (!ctx.approx_equal(a, b, 1e-9))
			throw std::invalid_argument("lifted configuration: projection constraint violated");
	}
}

Configuration project_lifted(const GroupContext& ctx, const FatGraph& graph,
                             const LiftedConfiguration& lifted, const Orientation& orient)
{
	Configuration cfg{orient, {}};
	cfg.values.reserve(orient.size());
	for (Dart d : orient.reps())
		cfg.values.push_back(ctx.project(lifted.values[d]));
	(void)graph;
	return cfg;
}

// ---- gauge group -------------------------------------------------------------

void validate_gauge(const GroupContext& ctx, const FatGraph& graph, const GaugeTransform& j)
{
	if (static_cast<int>(j.vertex.size()) != graph.vertex_count() ||
	    static_cast<int>(j.dart_center.size()) != graph.dart_count())
		throw std::invalid_argument("gauge transform: size mismatch");
	for (const auto& face : graph.faces())
	{
		CenterElement prod = ctx.center_identity();
		for (Dart d : face)
			prod = ctx.center_mul(prod, j.dart_center[d]);
		if (!ctx.center_equal(prod, ctx.center_identity()))
			throw std::invalid_argument("gauge transform: face product of central parts is not 1");
	}
}

GaugeTransform random_gauge(const GroupContext& ctx, const FatGraph& graph, RngStream& rng)
{
	GaugeTransform j;
	j.vertex.reserve(graph.vertex_count());
	for (int v = 0; v < graph.vertex_count(); ++v)
	{
		CoverElement c = ctx.cover_identity();
		if (ctx.kind() == GroupKind::u1)
		{
			for (auto& x : c.coord)
				x = 3.0 * (rng.uniform() - 0.5);
		}
		else
			c = ctx.cover_haar_sample(rng);
		j.vertex.push_back(c);
	}
	j.dart_center.assign(graph.dart_count(), ctx.center_identity());
	for (const auto& face : graph.faces())
	{
		if (face.empty())
			continue;
		CenterElement acc = ctx.center_identity();
		for (std::size_t i = 0; i + 1 < face.size(); ++i)
		{
			CenterElement z = ctx.center_identity();
			if (ctx.kind() == GroupKind::u1)
			{
				for (auto& w : z.winding)
					w = static_cast<long long>(rng.uniform_below(5)) - 2;
			}
			else if (ctx.kind() == GroupKind::so3)
				z.sign = rng.uniform() < 0.5 ? 1 : -1;
			j.dart_center[face[i]] = z;
			acc = ctx.center_mul(acc, z);
		}
		j.dart_center[face.back()] = ctx.center_inv(acc);
	}
	return j;
}

LiftedConfiguration gauge_apply(const GroupContext& ctx, const FatGraph& graph,
                                const GaugeTransform& j, const LiftedConfiguration& lifted)
{
	LiftedConfiguration out;
	out.values.reserve(graph.dart_count());
	for (Dart d = 0; d < graph.dart_count(); ++d)
	{
		const CoverElement& jt = j.vertex[graph.target_vertex(d)];
		const CoverElement& js = j.vertex[graph.source_vertex(d)];
		CoverElement v = ctx.cover_mul(ctx.cover_inv(jt), ctx.cover_mul(lifted.values[d], js));
		out.values.push_back(ctx.cover_translate(v, j.dart_center[d]));
	}
	return out;
}

Configuration vertex_gauge_apply(const GroupContext& ctx, const FatGraph& graph,
                                 const std::vector<GroupElement>& vertex, const Configuration& cfg)
{
	Configuration out = cfg;
	for (int i = 0; i < cfg.orient.size(); ++i)
	{
		const Dart d = cfg.orient.reps()[i];
		const GroupElement& jt = vertex[graph.target_vertex(d)];
		const GroupElement& js = vertex[graph.source_vertex(d)];
		out.values[i] = ctx.mul(ctx.inv(jt), ctx.mul(cfg.values[i], js));
	}
	return out;
}

// ---- holonomy and obstruction ---------------------------------------------------

void validate_word(const FatGraph& graph, std::span<const Dart> word)
{
	for (std::size_t i = 0; i < word.size(); ++i)
	{
		if (word[i] < 0 || word[i] >= graph.dart_count())
			throw std::invalid_argument("word: dart out of range");
		if (i + 1 < word.size() &&
		    graph.target_vertex(word[i]) != graph.source_vertex(word[i + 1]))
			throw std::invalid_argument("word: consecutive darts do not concatenate");
	}
}

GroupElement holonomy(const GroupContext& ctx, const FatGraph& graph, const Configuration& cfg,
                      std::span<const Dart> word)
{
	validate_word(graph, word);
	GroupElement h = ctx.identity();
	for (Dart d : word)
		h = ctx.mul(config_value(ctx, cfg, graph, d), h);
	return h;
}

CoverElement boundary_holonomy_lift(const GroupContext& ctx, const FatGraph& graph,
                                    const LiftedConfiguration& lifted, int face)
{
	CoverElement h = ctx.cover_identity();
	for (Dart d : graph.faces()[face])
		h = ctx.cover_mul(lifted.values[d], h);
	return h;
}

CenterElement obstruction(const GroupContext& ctx, const FatGraph& graph,
                          const LiftedConfiguration& lifted)
{
	CenterElement o = ctx.center_identity();
	for (Dart d = 0; d < graph.dart_count(); ++d)
	{
		if (d > graph.alpha(d))
			continue;
		// g(e) g(e^-1) projects to 1, hence lies in the deck group; round each
		// pair before multiplying so the product stays exact
		const CoverElement pair = ctx.cover_mul(lifted.values[d], lifted.values[graph.alpha(d)]);
		o = ctx.center_mul(o, ctx.center_from_cover(pair, 1e-6));
	}
	return o;
}

// ---- measures ---------------------------------------------------------------------

MeasureSpec::MeasureSpec(GroupContext ctx_, double temperature_, CenterElement z_, AreaMap areas_)
    : ctx(std::move(ctx_)), temperature(temperature_), z(std::move(z_)), areas(std::move(areas_))
{
	if (!(temperature > 0.0))
		throw std::invalid_argument("measure: temperature must be positive");
	switch (ctx.kind())
	{
	case GroupKind::u1:
		if (static_cast<int>(z.winding.size()) != ctx.rank())
			throw std::invalid_argument("measure: bundle class size differs from the group rank");
		break;
	case GroupKind::su2:
		if (z.sign != 1 || !z.winding.empty())
			throw std::invalid_argument("measure: su2 has a trivial deck group");
		break;
	case GroupKind::so3:
		if (z.sign != 1 && z.sign != -1)
			throw std::invalid_argument("measure: so3 bundle class must be a sign");
		break;
	}
}

namespace {

// windowed 1d lattice Gaussian, f(k) stored for k in [offset, offset+size)
struct LatticeWindow {
	long long offset = 0;
	std::vector<double> vals;
};

LatticeWindow gaussian_window(double center_shift, double variance, double tol)
{
	// f(k) = exp(-(center_shift + k)^2 / (2 variance)) / sqrt(2 pi variance)
	const double radius_f = std::sqrt(-2.0 * std::log(tol * 1e-3)) * std::sqrt(variance);
	const long long radius = static_cast<long long>(std::ceil(radius_f)) + 1;
	const long long center = std::llround(-center_shift);
	LatticeWindow w;
	w.offset = center - radius;
	w.vals.resize(static_cast<std::size_t>(2 * radius + 1));
	const double norm = 1.0 / std::sqrt(2.0 * 3.14159265358979323846 * variance);
	for (long long k = 0; k < static_cast<long long>(w.vals.size()); ++k)
	{
		const double x = center_shift + static_cast<double>(w.offset + k);
		w.vals[static_cast<std::size_t>(k)] = norm * std::exp(-x * x / (2.0 * variance));
	}
	return w;
}

LatticeWindow convolve(const LatticeWindow& a, const LatticeWindow& b)
{
	LatticeWindow out;
	out.offset = a.offset + b.offset;
	out.vals.assign(a.vals.size() + b.vals.size() - 1, 0.0);
	for (std::size_t i = 0; i < a.vals.size(); ++i)
		for (std::size_t j = 0; j < b.vals.size(); ++j)
			out.vals[i + j] += a.vals[i] * b.vals[j];
	return out;
}

double density_u1(const FatGraph& graph, const MeasureSpec& spec,
                  const std::vector<CoverElement>& face_holonomy, const CenterElement& z_eff)
{
	// both the deck sum and the Gaussians factorize over the m coordinates;
	// the constrained sum over (z_F) with product z is the discrete
	// convolution of the per-face lattice Gaussians evaluated at z
	const int m = spec.ctx.rank();
	double density = 1.0;
	for (int c = 0; c < m; ++c)
	{
		LatticeWindow acc;
		bool first = true;
		for (int f = 0; f < graph.face_count(); ++f)
		{
			const double variance = spec.temperature * spec.areas.area(f);
			LatticeWindow w =
			    gaussian_window(face_holonomy[f].coord[c], variance, spec.ctx.series_tol());
			acc = first ? std::move(w) : convolve(acc, w);
			first = false;
		}
		const long long idx = z_eff.winding[c] - acc.offset;
		density *= (idx >= 0 && idx < static_cast<long long>(acc.vals.size()))
		               ? acc.vals[static_cast<std::size_t>(idx)]
		               : 0.0;
	}
	return density;
}

} // namespace

double density_D_lifted(const FatGraph& graph, const MeasureSpec& spec,
                        const LiftedConfiguration& lifted)
{
	const GroupContext& ctx = spec.ctx;
	std::vector<CoverElement> face_h;
	face_h.reserve(graph.face_count());
	for (int f = 0; f < graph.face_count(); ++f)
		face_h.push_back(boundary_holonomy_lift(ctx, graph, lifted, f));

	// the (z_F) constraint is corrected by the lift's obstruction class, so
	// the value depends only on the projected configuration; lifts of a plain
	// configuration have trivial obstruction and reproduce the raw sum
	const CenterElement z_eff =
	    ctx.center_mul(ctx.center_inv(obstruction(ctx, graph, lifted)), spec.z);

	switch (ctx.kind())
	{
	case GroupKind::u1:
		return density_u1(graph, spec, face_h, z_eff);
	case GroupKind::su2: {
		double d = 1.0;
		for (int f = 0; f < graph.face_count(); ++f)
			d *= ctx.cover_heat_kernel(spec.temperature * spec.areas.area(f), face_h[f]);
		return d;
	}
	case GroupKind::so3: {
		// sum over (z_F) with prod z_F = z_eff via the parity split
		double prod_sum = 1.0, prod_diff = 1.0;
		for (int f = 0; f < graph.face_count(); ++f)
		{
			const double t = spec.temperature * spec.areas.area(f);
			const double a = ctx.cover_heat_kernel(t, face_h[f]);
			CoverElement neg = face_h[f];
			neg.q = neg.q.neg();
			const double b = ctx.cover_heat_kernel(t, neg);
			prod_sum *= a + b;
			prod_diff *= a - b;
		}
		return 0.5 * (prod_sum + static_cast<double>(z_eff.sign) * prod_diff);
	}
	}
	return 0.0;
}

double density_D(const FatGraph& graph, const MeasureSpec& spec, const Configuration& cfg)
{
	return density_D_lifted(graph, spec, lift_configuration(spec.ctx, graph, cfg));
}

double usual_density(const FatGraph& graph, const MeasureSpec& spec, const Configuration& cfg)
{
	const GroupContext& ctx = spec.ctx;
	double d = 1.0;
	for (int f = 0; f < graph.face_count(); ++f)
	{
		GroupElement h = ctx.identity();
		for (Dart dart : graph.faces()[f])
			h = ctx.mul(config_value(ctx, cfg, graph, dart), h);
		d *= ctx.heat_kernel(spec.temperature * spec.areas.area(f), h);
	}
	return d;
}

// ---- partition function -----------------------------------------------------------

namespace {

double quadrature_pass(const FatGraph& graph, const MeasureSpec& spec, long n_per_dim)
{
	const int m = spec.ctx.rank();
	const int edges = graph.edge_count();
	const int dims = m * edges;
	if (dims == 0)
		return density_D(graph, spec, Configuration{Orientation::canonical(graph), {}});
	double logpoints = dims * std::log(static_cast<double>(n_per_dim));
	if (logpoints > std::log(3e7))
		throw std::invalid_argument("partition quadrature: grid too large; lower the effort or use Monte Carlo");

	Configuration cfg{Orientation::canonical(graph),
	                  std::vector<GroupElement>(edges, spec.ctx.identity())};
	for (auto& v : cfg.values)
		v.angle.assign(m, 0.0);

	std::vector<long> idx(dims, 0);
	double sum = 0.0;
	long count = 0;
	while (true)
	{
		for (int d = 0; d < dims; ++d)
			cfg.values[d / m].angle[d % m] = (idx[d] + 0.5) / static_cast<double>(n_per_dim);
		sum += density_D(graph, spec, cfg);
		++count;
		int d = 0;
		while (d < dims && ++idx[d] == n_per_dim)
			idx[d++] = 0;
		if (d == dims)
			break;
	}
	return sum / static_cast<double>(count);
}

} // namespace

PartitionEstimate partition_estimate(const FatGraph& graph, const MeasureSpec& spec,
                                     PartitionMethod method, long effort, RngStream& rng)
{
	PartitionEstimate est;
	est.effort = effort;
	if (method == PartitionMethod::quadrature)
	{
		if (spec.ctx.kind() != GroupKind::u1)
			throw std::invalid_argument("partition quadrature: only available for u1 groups");
		est.method = "quadrature";
		if (graph.edge_count() == 0)
		{
			est.value = quadrature_pass(graph, spec, 1);
			est.std_error = 0.0;
			return est;
		}
		const long n = std::max<long>(4, effort);
		const double coarse = quadrature_pass(graph, spec, n / 2);
		est.value = quadrature_pass(graph, spec, n);
		est.std_error = std::fabs(est.value - coarse);
		return est;
	}
	est.method = "monte_carlo";
	if (effort < 2)
		throw std::invalid_argument("partition monte carlo: effort must be at least 2");
	std::vector<double> vals(static_cast<std::size_t>(effort));
	for (auto& v : vals)
		v = density_D(graph, spec, haar_configuration(spec.ctx, graph, rng));
	auto ms = stats::mean_std_error(vals);
	est.value = ms.mean;
	est.std_error = ms.std_error;
	return est;
}

// ---- samplers ----------------------------------------------------------------------

namespace {

struct CotreeSolve {
	std::vector<int> order;      // faces in BFS order from the root face
	std::vector<Dart> link;      // for each face != root: its dart whose alpha lies in the parent
	std::vector<char> is_cotree; // by dart
};

CotreeSolve build_cotree(const FatGraph& graph, const GraphTree& tree)
{
	CotreeSolve c;
	c.link.assign(graph.face_count(), -1);
	c.is_cotree.assign(graph.dart_count(), 0);
	std::vector<char> seen(graph.face_count(), 0);
	seen[0] = 1;
	c.order.push_back(0);
	std::queue<int> q;
	q.push(0);
	while (!q.empty())
	{
		const int f = q.front();
		q.pop();
		for (Dart d : graph.faces()[f])
		{
			if (tree.contains(d))
				continue; // keep the cotree disjoint from the tree
			const int other = graph.face_of(graph.alpha(d));
			if (!seen[other])
			{
				seen[other] = 1;
				c.link[other] = graph.alpha(d); // dart on the child face
				c.is_cotree[d] = 1;
				c.is_cotree[graph.alpha(d)] = 1;
				c.order.push_back(other);
				q.push(other);
			}
		}
	}
	if (static_cast<int>(c.order.size()) != graph.face_count())
		throw std::runtime_error("cotree construction failed: dual not spanned by non-tree edges");
	return c;
}

Configuration exact_u1_sample(const FatGraph& graph, const MeasureSpec& spec, RngStream& rng)
{
	const GroupContext& ctx = spec.ctx;
	const int m = ctx.rank();
	const int nf = graph.face_count();
	const double total = spec.areas.total();

	// face-boundary variables via the Gaussian representation
	std::vector<std::vector<double>> y(nf, std::vector<double>(m));
	std::vector<double> s(m, 0.0);
	for (int f = 0; f < nf; ++f)
		for (int c = 0; c < m; ++c)
		{
			y[f][c] = std::sqrt(spec.temperature * spec.areas.area(f)) * rng.normal();
			s[c] += y[f][c];
		}
	std::vector<GroupElement> u(nf, ctx.identity());
	for (int f = 0; f < nf; ++f)
		for (int c = 0; c < m; ++c)
		{
			const double x =
			    y[f][c] + spec.areas.area(f) / total * (static_cast<double>(spec.z.winding[c]) - s[c]);
			u[f].angle[c] = x - std::floor(x);
		}

	if (graph.dart_count() == 0)
		return Configuration{Orientation::canonical(graph), {}};

	// tree-cotree split: tree and free labels are Haar, cotree labels solve
	// the face-holonomy constraints from the leaves inward
	GraphTree tree = GraphTree::bfs(graph, 0);
	CotreeSolve cot = build_cotree(graph, tree);

	Configuration cfg{Orientation::canonical(graph), {}};
	cfg.values.assign(cfg.orient.size(), ctx.identity());
	std::vector<char> solved(cfg.orient.size(), 0);
	for (int i = 0; i < cfg.orient.size(); ++i)
	{
		const Dart d = cfg.orient.reps()[i];
		if (!cot.is_cotree[d])
		{
			cfg.values[i] = ctx.haar_sample(rng);
			solved[i] = 1;
		}
	}
	for (int k = nf - 1; k >= 1; --k)
	{
		const int f = cot.order[k];
		const Dart unknown = cot.link[f];
		const int rep_idx =
		    cfg.orient.index_of(unknown) >= 0 ? cfg.orient.index_of(unknown)
		                                      : cfg.orient.index_of(graph.alpha(unknown));
		// holonomy of the face with the unknown label set to 0
		std::vector<double> acc(m, 0.0);
		double sign = 1.0;
		for (Dart d : graph.faces()[f])
		{
			const bool fwd = cfg.orient.is_rep(d);
			if (d == unknown)
			{
				// contribution of the unknown rep label: +x forward, -x reversed
				sign = fwd ? 1.0 : -1.0;
				continue;
			}
			const int i = fwd ? cfg.orient.index_of(d) : cfg.orient.index_of(graph.alpha(d));
			if (!solved[i])
				throw std::runtime_error("exact u1 sampler: face visited before its children");
			for (int c = 0; c < m; ++c)
				acc[c] += fwd ? cfg.values[i].angle[c] : -cfg.values[i].angle[c];
		}
		for (int c = 0; c < m; ++c)
		{
			double x = sign * (u[f].angle[c] - acc[c]);
			cfg.values[rep_idx].angle[c] = x - std::floor(x);
		}
		solved[rep_idx] = 1;
	}
	// the root face closes automatically; verify
	{
		GroupElement h = ctx.identity();
		for (Dart d : graph.faces()[0])
			h = ctx.mul(config_value(ctx, cfg, graph, d), h);
		if (!ctx.approx_equal(h, u[0], 1e-7))
			throw std::runtime_error("exact u1 sampler: root face constraint failed");
	}
	return cfg;
}

struct Chain {
	Configuration cfg;
	double density;
};

void chain_sweep(const FatGraph& graph, const MeasureSpec& spec, Chain& chain, RngStream& rng)
{
	for (int i = 0; i < chain.cfg.orient.size(); ++i)
	{
		const GroupElement old = chain.cfg.values[i];
		chain.cfg.values[i] = spec.ctx.haar_sample(rng); // symmetric proposal
		const double cand = density_D(graph, spec, chain.cfg);
		if (rng.uniform() * std::max(chain.density, 1e-300) < cand)
			chain.density = cand;
		else
			chain.cfg.values[i] = old;
	}
}

} // namespace

GraphTree::GraphTree(const FatGraph& graph, std::vector<Dart> pair_reps, int root)
    : pair_reps_(std::move(pair_reps)), root_(root)
{
	if (root < 0 || root >= graph.vertex_count())
		throw std::invalid_argument("graph tree: root out of range");
	if (static_cast<int>(pair_reps_.size()) != graph.vertex_count() - 1)
		throw std::invalid_argument("graph tree: wrong edge count for a spanning tree");
	in_tree_.assign(graph.dart_count(), 0);
	for (Dart d : pair_reps_)
	{
		if (d < 0 || d >= graph.dart_count())
			throw std::invalid_argument("graph tree: dart out of range");
		in_tree_[d] = 1;
		in_tree_[graph.alpha(d)] = 1;
	}
	// build parent darts by BFS inside the tree; also validates spanning+acyclic
	parent_dart_.assign(graph.vertex_count(), -1);
	parent_vertex_.assign(graph.vertex_count(), -1);
	std::vector<char> seen(graph.vertex_count(), 0);
	seen[root] = 1;
	std::queue<int> q;
	q.push(root);
	int reached = 1;
	while (!q.empty())
	{
		const int v = q.front();
		q.pop();
		for (Dart d = 0; d < graph.dart_count(); ++d)
		{
			if (!in_tree_[d] || graph.source_vertex(d) != v)
				continue;
			const int w = graph.target_vertex(d);
			if (!seen[w])
			{
				seen[w] = 1;
				parent_dart_[w] = d;
				parent_vertex_[w] = v;
				++reached;
				q.push(w);
			}
		}
	}
	if (reached != graph.vertex_count())
		throw std::invalid_argument("graph tree: does not span the vertices");
}

GraphTree GraphTree::bfs(const FatGraph& graph, int root)
{
	std::vector<char> seen(graph.vertex_count(), 0);
	std::vector<Dart> pairs;
	seen[root] = 1;
	std::queue<int> q;
	q.push(root);
	while (!q.empty())
	{
		const int v = q.front();
		q.pop();
		for (Dart d = 0; d < graph.dart_count(); ++d)
		{
			if (graph.source_vertex(d) != v)
				continue;
			const int w = graph.target_vertex(d);
			if (!seen[w])
			{
				seen[w] = 1;
				pairs.push_back(std::min(d, graph.alpha(d)));
				q.push(w);
			}
		}
	}
	return GraphTree(graph, std::move(pairs), root);
}

std::vector<Dart> GraphTree::path_from_root(int vertex) const
{
	std::vector<Dart> path;
	for (int v = vertex; parent_dart_[v] >= 0; v = parent_vertex_[v])
		path.push_back(parent_dart_[v]);
	std::reverse(path.begin(), path.end());
	return path;
}

Configuration sample_config(const FatGraph& graph, const MeasureSpec& spec, RngStream& rng,
                            const ChainParams& params)
{
	return sample_configs(graph, spec, 1, rng, params).front();
}

std::vector<Configuration> sample_configs(const FatGraph& graph, const MeasureSpec& spec, int count,
                                          RngStream& rng, const ChainParams& params)
{
	std::vector<Configuration> out;
	out.reserve(count);
	if (spec.ctx.kind() == GroupKind::u1 && !params.force_chain)
	{
		for (int i = 0; i < count; ++i)
			out.push_back(exact_u1_sample(graph, spec, rng));
		return out;
	}
	Chain chain{haar_configuration(spec.ctx, graph, rng), 0.0};
	chain.density = density_D(graph, spec, chain.cfg);
	for (int i = 0; i < params.burn_in; ++i)
		chain_sweep(graph, spec, chain, rng);
	for (int i = 0; i < count; ++i)
	{
		for (int k = 0; k < params.thinning; ++k)
			chain_sweep(graph, spec, chain, rng);
		out.push_back(chain.cfg);
	}
	return out;
}

GaugeFixResult gauge_fix(const GroupContext& ctx, const FatGraph& graph, const Configuration& cfg,
                         const GraphTree& tree)
{
	// j_v = holonomy of the tree path from the root to v
	std::vector<GroupElement> j(graph.vertex_count(), ctx.identity());
	std::vector<char> done(graph.vertex_count(), 0);
	done[tree.root()] = 1;
	// vertices in tree BFS order: repeated passes are fine at this scale
	bool progress = true;
	while (progress)
	{
		progress = false;
		for (int v = 0; v < graph.vertex_count(); ++v)
		{
			if (done[v])
				continue;
			const Dart d = tree.parent_dart(v);
			const int p = graph.source_vertex(d);
			if (!done[p])
				continue;
			j[v] = ctx.mul(config_value(ctx, cfg, graph, d), j[p]);
			done[v] = 1;
			progress = true;
		}
	}

	GaugeFixResult res{vertex_gauge_apply(ctx, graph, j, cfg), {}, {}};
	for (int i = 0; i < cfg.orient.size(); ++i)
	{
		const Dart d = cfg.orient.reps()[i];
		if (tree.contains(d))
		{
			if (!ctx.approx_equal(res.fixed.values[i], ctx.identity(), 1e-9))
				throw std::runtime_error("gauge_fix: tree dart not sent to the identity");
		}
		else
		{
			res.loop_reps.push_back(d);
			res.loop_coords.push_back(res.fixed.values[i]);
		}
	}
	return res;
}

// ---- subdivision invariance ------------------------------------------------------

namespace {

std::vector<Dart> coarse_word(const FatGraph& coarse, const SubdivisionStep& step, Dart old_rep,
                              int n_old)
{
	if (step.op == SubdivideOp::add_vertex)
	{
		// the split edge becomes a two-dart path through the new midpoint
		const Dart e = step.loc.dart;
		if (old_rep == e)
			return {n_old, e};
		if (old_rep == coarse.alpha(e))
			return {n_old + 1, old_rep};
	}
	return {old_rep};
}

double wilson_observable(const GroupContext& ctx, const GroupElement& g)
{
	if (ctx.kind() == GroupKind::u1)
		return std::cos(2.0 * 3.14159265358979323846 * g.angle[0]);
	if (ctx.kind() == GroupKind::su2)
		return g.q.w; // trace / 2
	return std::cos(2.0 * g.q.angle()); // so3: cosine of the rotation angle
}

} // namespace

SubdivisionReport pushforward_check(const FatGraph& graph, const MeasureSpec& spec,
                                    const std::vector<SubdivisionStep>& steps, long effort,
                                    RngStream& rng)
{
	SubdivisionReport report;
	FatGraph cur = graph;
	AreaMap cur_areas = spec.areas;

	int step_no = 0;
	for (const auto& step : steps)
	{
		++step_no;
		auto next = elementary_subdivide(cur, cur_areas, step.op, step.loc);
		MeasureSpec spec_cur(spec.ctx, spec.temperature, spec.z, cur_areas);
		MeasureSpec spec_next(spec.ctx, spec.temperature, spec.z, next.areas);
		const int n_old = cur.dart_count();

		if (step.op == SubdivideOp::add_vertex || step.op == SubdivideOp::add_pendant_edge)
		{
			// pointwise-exact identity: the refined density only depends on the
			// coarse path labels (V) resp. cancels the pendant label (E1)
			const int trials = std::max(3L, std::min<long>(effort, 16));
			double worst = 0.0;
			for (int k = 0; k < trials; ++k)
			{
				Configuration fine = haar_configuration(spec.ctx, next.graph, rng);
				Configuration coarse{Orientation::canonical(cur), {}};
				for (Dart rep : coarse.orient.reps())
				{
					const auto word = coarse_word(cur, step, rep, n_old);
					coarse.values.push_back(holonomy(spec.ctx, next.graph, fine, word));
				}
				const double a = density_D(next.graph, spec_next, fine);
				const double b = density_D(cur, spec_cur, coarse);
				worst = std::max(worst, std::fabs(a - b) / std::max(std::fabs(b), 1e-300));
			}
			const char* tag = step.op == SubdivideOp::add_vertex ? "V" : "E1";
			report.lines.push_back({"step " + std::to_string(step_no) + " (" + tag +
			                            "): pointwise density identity",
			                        worst <= 1e-9, worst, 1e-9});
		}
		else if (spec.ctx.kind() == GroupKind::u1)
		{
			// E2: integrate the new edge out by periodic quadrature
			const int m = spec.ctx.rank();
			if (m > 2)
				throw std::invalid_argument("pushforward_check: E2 quadrature limited to rank <= 2");
			const int trials = 3;
			const int npts = 48;
			double worst = 0.0;
			for (int k = 0; k < trials; ++k)
			{
				Configuration coarse = haar_configuration(spec.ctx, cur, rng);
				Configuration fine{Orientation::canonical(next.graph), {}};
				for (Dart rep : fine.orient.reps())
					fine.values.push_back(rep < n_old
					                          ? config_value(spec.ctx, coarse, cur, rep)
					                          : spec.ctx.identity());
				const int new_idx = fine.orient.index_of(n_old) >= 0
				                        ? fine.orient.index_of(n_old)
				                        : fine.orient.index_of(n_old + 1);
				double integral = 0.0;
				std::vector<long> idx(m, 0);
				long count = 0;
				while (true)
				{
					for (int c = 0; c < m; ++c)
						fine.values[new_idx].angle[c] = (idx[c] + 0.5) / npts;
					integral += density_D(next.graph, spec_next, fine);
					++count;
					int c = 0;
					while (c < m && ++idx[c] == npts)
						idx[c++] = 0;
					if (c == m)
						break;
				}
				integral /= static_cast<double>(count);
				const double want = density_D(cur, spec_cur, coarse);
				worst = std::max(worst, std::fabs(integral - want) / std::max(want, 1e-300));
			}
			report.lines.push_back({"step " + std::to_string(step_no) +
			                            " (E2): marginal density by quadrature",
			                        worst <= 1e-8, worst, 1e-8});
		}
		else
		{
			// E2, non-abelian: compare Wilson observables of the coarse faces
			// under both measures by Monte Carlo
			const int samples = static_cast<int>(std::max<long>(effort, 1000));
			ChainParams chain;
			RngStream rng_a = rng.split("pushforward-coarse");
			RngStream rng_b = rng.split("pushforward-fine");
			auto coarse_samples = sample_configs(cur, spec_cur, samples, rng_a, chain);
			auto fine_samples = sample_configs(next.graph, spec_next, samples, rng_b, chain);
			double worst_sigma = 0.0;
			for (int f = 0; f < cur.face_count(); ++f)
			{
				const std::vector<Dart>& word = cur.faces()[f];
				std::vector<double> wa(coarse_samples.size()), wb(fine_samples.size());
				for (std::size_t i = 0; i < coarse_samples.size(); ++i)
					wa[i] = wilson_observable(spec.ctx,
					                          holonomy(spec.ctx, cur, coarse_samples[i], word));
				for (std::size_t i = 0; i < fine_samples.size(); ++i)
					wb[i] = wilson_observable(spec.ctx,
					                          holonomy(spec.ctx, next.graph, fine_samples[i], word));
				auto ma = stats::mean_std_error(wa);
				auto mb = stats::mean_std_error(wb);
				const double sigma = std::sqrt(ma.std_error * ma.std_error +
				                               mb.std_error * mb.std_error);
				worst_sigma = std::max(worst_sigma, std::fabs(ma.mean - mb.mean) / std::max(sigma, 1e-300));
			}
			report.lines.push_back({"step " + std::to_string(step_no) +
			                            " (E2): Wilson-loop Monte Carlo match (sigmas)",
			                        worst_sigma <= 3.0, worst_sigma, 3.0});
		}

		cur = next.graph;
		cur_areas = next.areas;
	}
	for (const auto& line : report.lines)
		report.pass = report.pass && line.pass;
	return report;
}

} // namespace ym2d
