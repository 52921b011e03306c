#include "ym2d/fat_graph.hpp"

#include <algorithm>
#include <numeric>
#include <queue>
#include <stdexcept>
#include <string>

namespace ym2d {

namespace {

std::vector<std::vector<Dart>> cycles_of(const std::vector<Dart>& perm)
{
	const int n = static_cast<int>(perm.size());
	std::vector<char> seen(n, 0);
	std::vector<std::vector<Dart>> out;
	for (Dart start = 0; start < n; ++start)
	{
		if (seen[start])
			continue;
		std::vector<Dart> cyc;
		Dart d = start;
		do
		{
			seen[d] = 1;
			cyc.push_back(d);
			d = perm[d];
		} while (d != start);
		out.push_back(std::move(cyc));
	}
	// cycles already start at their lowest dart and are ordered by it
	return out;
}

std::vector<Dart> invert(const std::vector<Dart>& perm)
{
	std::vector<Dart> inv(perm.size());
	for (Dart d = 0; d < static_cast<int>(perm.size()); ++d)
		inv[perm[d]] = d;
	return inv;
}

void check_permutation(const std::vector<Dart>& p, const char* name)
{
	const int n = static_cast<int>(p.size());
	std::vector<char> seen(n, 0);
	for (Dart v : p)
	{
		if (v < 0 || v >= n)
			throw std::invalid_argument(std::string(name) + ": value out of range");
		if (seen[v]++)
			throw std::invalid_argument(std::string(name) + ": not a bijection");
	}
}

} // namespace

FatGraph::FatGraph() : genus_(0)
{
	// degenerate sphere: one (empty) vertex and one (empty) face
	vertices_.push_back({});
	faces_.push_back({});
}

FatGraph::FatGraph(std::vector<Dart> sigma, std::vector<Dart> alpha)
    : sigma_(std::move(sigma)), alpha_(std::move(alpha))
{
	const int n = dart_count();
	if (static_cast<int>(alpha_.size()) != n)
		throw std::invalid_argument("fat graph: sigma and alpha sizes differ");
	if (n == 0)
	{
		vertices_.push_back({});
		faces_.push_back({});
		genus_ = 0;
		return;
	}
	if (n % 2)
		throw std::invalid_argument("fat graph: odd dart count");
	check_permutation(sigma_, "sigma");
	check_permutation(alpha_, "alpha");
	for (Dart d = 0; d < n; ++d)
	{
		if (alpha_[d] == d)
			throw std::invalid_argument("alpha: involution must be fixed-point free");
		if (alpha_[alpha_[d]] != d)
			throw std::invalid_argument("alpha: not an involution");
	}
	sigma_inv_ = invert(sigma_);

	// connectivity of the group generated by sigma and alpha
	{
		std::vector<char> seen(n, 0);
		std::queue<Dart> q;
		q.push(0);
		seen[0] = 1;
		int count = 1;
		while (!q.empty())
		{
			const Dart d = q.front();
			q.pop();
			for (Dart e : {sigma_[d], sigma_inv_[d], alpha_[d]})
				if (!seen[e])
				{
					seen[e] = 1;
					++count;
					q.push(e);
				}
		}
		if (count != n)
			throw std::invalid_argument("fat graph: not connected");
	}

	vertices_ = cycles_of(sigma_);
	std::vector<Dart> phi(n);
	for (Dart d = 0; d < n; ++d)
		phi[d] = alpha_[sigma_inv_[d]];
	faces_ = cycles_of(phi);

	vertex_of_.assign(n, -1);
	for (int v = 0; v < static_cast<int>(vertices_.size()); ++v)
		for (Dart d : vertices_[v])
			vertex_of_[d] = v;
	face_of_.assign(n, -1);
	for (int f = 0; f < static_cast<int>(faces_.size()); ++f)
		for (Dart d : faces_[f])
			face_of_[d] = f;

	const int euler = static_cast<int>(vertices_.size()) - n / 2 + static_cast<int>(faces_.size());
	if ((2 - euler) % 2 != 0 || euler > 2)
		throw std::invalid_argument("fat graph: Euler relation does not give an orientable genus");
	genus_ = (2 - euler) / 2;
}

int FatGraph::vertex_count() const
{
	return static_cast<int>(vertices_.size());
}

int FatGraph::face_count() const
{
	return static_cast<int>(faces_.size());
}

std::vector<Dart> FatGraph::orientation_reps() const
{
	std::vector<Dart> reps;
	reps.reserve(edge_count());
	for (Dart d = 0; d < dart_count(); ++d)
		if (d < alpha_[d])
			reps.push_back(d);
	return reps;
}

FatGraph graph_from_phi(int dart_count, const std::vector<Dart>& alpha,
                        const std::vector<std::vector<Dart>>& phi_cycles)
{
	std::vector<Dart> phi(dart_count, -1);
	for (const auto& cyc : phi_cycles)
		for (std::size_t i = 0; i < cyc.size(); ++i)
			phi[cyc[i]] = cyc[(i + 1) % cyc.size()];
	for (Dart d = 0; d < dart_count; ++d)
		if (phi[d] < 0)
			throw std::invalid_argument("graph_from_phi: incomplete face cycles");
	// sigma alpha phi = 1  =>  sigma = phi^{-1} alpha
	std::vector<Dart> phi_inv = invert(phi);
	std::vector<Dart> sigma(dart_count);
	for (Dart d = 0; d < dart_count; ++d)
		sigma[d] = phi_inv[alpha[d]];
	return FatGraph(std::move(sigma), alpha);
}

FatGraph standard_graph(int genus)
{
	if (genus < 0)
		throw std::invalid_argument("standard_graph: negative genus");
	if (genus == 0)
		return FatGraph();
	const int n = 4 * genus;
	std::vector<Dart> alpha(n);
	std::vector<Dart> word(n);
	for (int b = 0; b < genus; ++b)
	{
		alpha[4 * b] = 4 * b + 2;
		alpha[4 * b + 2] = 4 * b;
		alpha[4 * b + 1] = 4 * b + 3;
		alpha[4 * b + 3] = 4 * b + 1;
	}
	std::iota(word.begin(), word.end(), 0);
	return graph_from_phi(n, alpha, {word});
}

AreaMap::AreaMap(const FatGraph& graph, std::vector<double> area_by_face)
    : area_by_face_(std::move(area_by_face))
{
	if (static_cast<int>(area_by_face_.size()) != graph.face_count())
		throw std::invalid_argument("area map: face count mismatch");
	total_ = 0.0;
	for (double a : area_by_face_)
	{
		if (!(a > 0.0))
			throw std::invalid_argument("area map: face areas must be positive");
		total_ += a;
	}
}

AreaMap AreaMap::uniform(const FatGraph& graph, double total_area)
{
	if (!(total_area > 0.0))
		throw std::invalid_argument("area map: total area must be positive");
	return AreaMap(graph,
	               std::vector<double>(graph.face_count(), total_area / graph.face_count()));
}

// ---- dual graph and trees ----------------------------------------------------

DualGraph dual_graph(const FatGraph& graph)
{
	DualGraph d;
	d.vertex_count = graph.face_count();
	d.edges.reserve(graph.dart_count());
	for (Dart e = 0; e < graph.dart_count(); ++e)
		d.edges.push_back({e, graph.face_of(e), graph.face_of(graph.alpha(e))});
	return d;
}

DualTree::DualTree(const FatGraph& graph, std::vector<Dart> pair_reps)
    : pair_reps_(std::move(pair_reps)), in_tree_(graph.dart_count(), 0)
{
	if (static_cast<int>(pair_reps_.size()) != graph.face_count() - 1)
		throw std::invalid_argument("dual tree: wrong edge count for a spanning tree");
	for (Dart d : pair_reps_)
	{
		if (d < 0 || d >= graph.dart_count())
			throw std::invalid_argument("dual tree: dart out of range");
		in_tree_[d] = 1;
		in_tree_[graph.alpha(d)] = 1;
	}
	// spanning and acyclic: f-1 edges joining all f faces without repeats
	std::vector<int> comp(graph.face_count());
	std::iota(comp.begin(), comp.end(), 0);
	auto find = [&](int x) {
		while (comp[x] != x)
			x = comp[x] = comp[comp[x]];
		return x;
	};
	for (Dart d : pair_reps_)
	{
		const int a = find(graph.face_of(d));
		const int b = find(graph.face_of(graph.alpha(d)));
		if (a == b)
			throw std::invalid_argument("dual tree: contains a cycle");
		comp[a] = b;
	}
}

DualTree spanning_tree_dual(const FatGraph& graph)
{
	const int f = graph.face_count();
	std::vector<char> reached(f, 0);
	std::vector<Dart> pairs;
	reached[0] = 1;
	std::queue<int> frontier;
	frontier.push(0);
	while (!frontier.empty())
	{
		const int face = frontier.front();
		frontier.pop();
		for (Dart d : graph.faces()[face])
		{
			const int other = graph.face_of(graph.alpha(d));
			if (!reached[other])
			{
				reached[other] = 1;
				pairs.push_back(std::min(d, graph.alpha(d)));
				frontier.push(other);
			}
		}
	}
	if (static_cast<int>(pairs.size()) != f - 1)
		throw std::runtime_error("spanning_tree_dual: dual graph not connected");
	return DualTree(graph, std::move(pairs));
}

namespace {

/** delete a set of darts; remaining darts are renumbered in order */
struct Deletion {
	FatGraph graph;
	std::vector<Dart> old_to_new, new_to_old;
};

Deletion delete_darts_raw(const std::vector<Dart>& sigma_in, const std::vector<Dart>& alpha_in,
                          const std::vector<char>& removed)
{
	const int n = static_cast<int>(sigma_in.size());
	std::vector<Dart> old_to_new(n, -1), new_to_old;
	for (Dart d = 0; d < n; ++d)
		if (!removed[d])
		{
			old_to_new[d] = static_cast<int>(new_to_old.size());
			new_to_old.push_back(d);
		}
	const int nn = static_cast<int>(new_to_old.size());
	std::vector<Dart> sigma(nn), alpha(nn);
	for (int i = 0; i < nn; ++i)
	{
		const Dart d = new_to_old[i];
		Dart s = sigma_in[d];
		while (removed[s])
			s = sigma_in[s]; // skip deleted darts inside the vertex cycle
		sigma[i] = old_to_new[s];
		alpha[i] = old_to_new[alpha_in[d]];
		if (alpha[i] < 0)
			throw std::runtime_error("delete_darts: removed set not closed under alpha");
	}
	return {FatGraph(std::move(sigma), std::move(alpha)), std::move(old_to_new), std::move(new_to_old)};
}

} // namespace

ContractResult contract_dual_tree(const FatGraph& graph, const AreaMap& areas, const DualTree& tree)
{
	if (tree.pair_reps().empty())
		return {graph, areas, {}, {}}; // already a single face
	std::vector<char> removed(graph.dart_count(), 0);
	for (Dart d : tree.pair_reps())
	{
		removed[d] = 1;
		removed[graph.alpha(d)] = 1;
	}
	if (2 * static_cast<int>(tree.pair_reps().size()) == graph.dart_count())
	{
		// everything removed: only possible for a one-vertex genus-0 graph,
		// which contracts to the degenerate sphere
		if (graph.vertex_count() != 1 || graph.genus() != 0)
			throw std::runtime_error("contract_dual_tree: a vertex lost all darts");
		FatGraph deg;
		AreaMap merged(deg, {areas.total()});
		return {std::move(deg), std::move(merged), std::vector<Dart>(graph.dart_count(), -1), {}};
	}
	// every vertex keeps a dart: the endpoints of the complement of a dual
	// tree exhaust the vertex set
	for (const auto& cyc : graph.vertex_cycles())
	{
		bool alive = false;
		for (Dart d : cyc)
			alive = alive || !removed[d];
		if (!alive)
			throw std::runtime_error("contract_dual_tree: a vertex lost all darts");
	}
	Deletion del = delete_darts_raw(graph.sigma_perm(), graph.alpha_perm(), removed);
	if (del.graph.face_count() != 1)
		throw std::runtime_error("contract_dual_tree: result does not have a single face");
	if (del.graph.genus() != graph.genus() || del.graph.vertex_count() != graph.vertex_count())
		throw std::runtime_error("contract_dual_tree: topology changed");
	AreaMap merged(del.graph, {areas.total()});
	return {std::move(del.graph), std::move(merged), std::move(del.old_to_new), std::move(del.new_to_old)};
}

WhiteheadResult whitehead(const FatGraph& graph, Dart e)
{
	if (e < 0 || e >= graph.dart_count())
		throw std::invalid_argument("whitehead: dart out of range");
	const Dart einv = graph.alpha(e);
	if (graph.vertex_of(e) == graph.vertex_of(einv))
		throw std::invalid_argument("whitehead: edge endpoints must be distinct");

	if (graph.dart_count() == 2)
	{
		// contracting the only edge of the arc graph leaves the degenerate sphere
		return {FatGraph(), {-1, -1}, {}};
	}

	// sigma = (e, e1..ek)(einv, ek+1..el) s0  ->  (e1..ek ek+1..el) s0
	std::vector<Dart> sigma = graph.sigma_perm();
	const Dart after_e = sigma[e]; // e1 (or e itself if the target has degree 1)
	const Dart before_e = graph.sigma_inv(e);
	const Dart after_inv = sigma[einv];
	const Dart before_inv = graph.sigma_inv(einv);

	if (after_e == e)
	{
		// target vertex has degree 1: just drop einv from its cycle
		sigma[before_inv] = after_inv;
	}
	else if (after_inv == einv)
	{
		sigma[before_e] = after_e;
	}
	else
	{
		sigma[before_e] = after_inv; // ...ek -> ek+1...
		sigma[before_inv] = after_e; // ...el -> e1...
	}
	sigma[e] = e; // detached; deleted below
	sigma[einv] = einv;

	std::vector<char> removed(graph.dart_count(), 0);
	removed[e] = 1;
	removed[einv] = 1;
	Deletion del = delete_darts_raw(sigma, graph.alpha_perm(), removed);
	if (del.graph.face_count() != graph.face_count() || del.graph.genus() != graph.genus() ||
	    del.graph.vertex_count() != graph.vertex_count() - 1)
		throw std::runtime_error("whitehead: topology check failed");
	return {std::move(del.graph), std::move(del.old_to_new), std::move(del.new_to_old)};
}

FatGraph cut_paste(const FatGraph& graph, Dart e)
{
	if (graph.face_count() != 1)
		throw std::invalid_argument("cut_paste: graph must have a single face");
	if (e < 0 || e >= graph.dart_count())
		throw std::invalid_argument("cut_paste: dart out of range");
	const Dart einv = graph.alpha(e);
	if (graph.phi(e) == einv)
		throw std::invalid_argument("cut_paste: no dart between e and its inverse in the face word");

	// read the face word from e and move d = phi^{-1}(einv) right after e
	std::vector<Dart> word;
	word.reserve(graph.dart_count());
	Dart d = e;
	do
	{
		word.push_back(d);
		d = graph.phi(d);
	} while (d != e);

	std::size_t pos_inv = 0;
	for (std::size_t i = 0; i < word.size(); ++i)
		if (word[i] == einv)
			pos_inv = i;
	const Dart moved = word[pos_inv - 1];

	std::vector<Dart> next;
	next.reserve(word.size());
	next.push_back(word[0]);
	next.push_back(moved);
	for (std::size_t i = 1; i < word.size(); ++i)
		if (word[i] != moved)
			next.push_back(word[i]);

	return graph_from_phi(graph.dart_count(), graph.alpha_perm(), {next});
}

namespace {

int order_from(const FatGraph& graph, const std::vector<Dart>& word, std::size_t start)
{
	const std::size_t n = word.size();
	int m = 0;
	for (std::size_t base = 0; base + 3 < n; base += 4)
	{
		const Dart a = word[(start + base) % n];
		const Dart b = word[(start + base + 1) % n];
		const Dart ai = word[(start + base + 2) % n];
		const Dart bi = word[(start + base + 3) % n];
		if (graph.alpha(a) == ai && graph.alpha(b) == bi)
			++m;
		else
			break;
	}
	return m;
}

std::vector<Dart> single_face_word(const FatGraph& graph)
{
	if (graph.face_count() != 1)
		throw std::invalid_argument("graph must have a single face");
	return graph.faces()[0];
}

} // namespace

int standard_order(const FatGraph& graph)
{
	if (graph.dart_count() == 0)
		return 0;
	if (graph.face_count() != 1 || graph.vertex_count() != 1)
		throw std::invalid_argument("standard_order: need a one-vertex one-face graph");
	const std::vector<Dart> word = single_face_word(graph);
	int best = 0;
	for (std::size_t start = 0; start < word.size(); ++start)
		best = std::max(best, order_from(graph, word, start));
	return best;
}

bool is_standard(const FatGraph& graph)
{
	if (graph.dart_count() == 0)
		return graph.genus() == 0;
	if (graph.face_count() != 1 || graph.vertex_count() != 1)
		return false;
	return standard_order(graph) == graph.genus();
}

StandardizeResult standardize(const FatGraph& graph)
{
	if (graph.dart_count() == 0)
		return {graph, {}};
	if (graph.face_count() != 1 || graph.vertex_count() != 1)
		throw std::invalid_argument("standardize: need a one-vertex one-face graph");

	FatGraph cur = graph;
	std::vector<MoveLogEntry> log;
	const int g = graph.genus();

	int order = standard_order(cur);
	if (order == g)
		return {cur, {}}; // already standard, leave labels untouched

	auto apply_k = [&](Dart dart, int times) {
		for (int i = 0; i < times; ++i)
		{
			cur = cut_paste(cur, dart);
			log.push_back({MoveLogEntry::Kind::cut_paste, dart, {}});
		}
	};

	while (order < g)
	{
		const std::vector<Dart> word = single_face_word(cur);
		const std::size_t n = word.size();
		std::size_t start = 0;
		for (std::size_t cand = 0; cand < n; ++cand)
			if (order_from(cur, word, cand) == order)
			{
				start = cand;
				break;
			}
		auto at = [&](std::size_t i) { return word[(start + i) % n]; };

		const std::size_t base = 4 * static_cast<std::size_t>(order);
		const Dart e = at(base);
		std::size_t pos_inv = 0;
		for (std::size_t i = base + 1; i < n; ++i)
			if (at(i) == cur.alpha(e))
				pos_inv = i;
		// first dart between e and e^-1 whose inverse lies beyond e^-1
		std::size_t q = 0, q_inv = 0;
		for (std::size_t i = base + 1; i < pos_inv && q == 0; ++i)
			for (std::size_t j = pos_inv + 1; j < n; ++j)
				if (at(j) == cur.alpha(at(i)))
				{
					q = i;
					q_inv = j;
					break;
				}
		if (q == 0)
			throw std::runtime_error("standardize: interleaved partner not found");
		const Dart f = at(q);

		const long r = static_cast<long>(q - base - 1);
		const long s = static_cast<long>(pos_inv - base - 2);
		const long t = static_cast<long>(q_inv - base - 3);

		apply_k(f, static_cast<int>(t - s));
		apply_k(e, static_cast<int>(t - r));
		apply_k(cur.alpha(f), static_cast<int>(t));

		const int next_order = standard_order(cur);
		if (next_order <= order)
			throw std::runtime_error("standardize: order did not increase");
		order = next_order;
	}

	// canonical relabeling so phi is literally (0,1,...,4g-1) with the
	// standard pairing
	const std::vector<Dart> word = single_face_word(cur);
	const std::size_t n = word.size();
	std::size_t start = 0;
	for (std::size_t cand = 0; cand < n; ++cand)
		if (order_from(cur, word, cand) == g)
		{
			start = cand;
			break;
		}
	std::vector<Dart> old_to_new(n);
	for (std::size_t i = 0; i < n; ++i)
		old_to_new[word[(start + i) % n]] = static_cast<int>(i);
	std::vector<Dart> sigma(n), alpha(n);
	for (Dart d = 0; d < static_cast<int>(n); ++d)
	{
		sigma[old_to_new[d]] = old_to_new[cur.sigma(d)];
		alpha[old_to_new[d]] = old_to_new[cur.alpha(d)];
	}
	cur = FatGraph(std::move(sigma), std::move(alpha));
	log.push_back({MoveLogEntry::Kind::relabel, -1, old_to_new});

	if (!(cur == standard_graph(g)))
		throw std::runtime_error("standardize: result is not the standard graph");
	return {std::move(cur), std::move(log)};
}

// ---- elementary subdivisions ---------------------------------------------------

namespace {

std::vector<std::vector<Dart>> face_words(const FatGraph& graph)
{
	return graph.faces();
}

SubdivideResult rebuild_with_areas(const FatGraph& old_graph, const AreaMap& old_areas,
                                   FatGraph&& next, int split_face, double area_first)
{
	// faces are identified across the operation by their lowest old dart;
	// the two new darts are larger than every old one, so ids stay aligned
	// except for a split face
	std::vector<double> by_face(next.face_count(), -1.0);
	if (split_face < 0)
	{
		for (int f = 0; f < old_graph.face_count(); ++f)
			by_face[f] = old_areas.area(f);
	}
	else
	{
		const Dart fresh = old_graph.dart_count(); // first new dart
		for (int f = 0; f < next.face_count(); ++f)
		{
			bool has_fresh = false, has_fresh_inv = false;
			Dart lowest_old = -1;
			for (Dart d : next.faces()[f])
			{
				if (d == fresh)
					has_fresh = true;
				else if (d == fresh + 1)
					has_fresh_inv = true;
				else if (lowest_old < 0)
					lowest_old = d;
			}
			if (has_fresh)
				by_face[f] = area_first;
			else if (has_fresh_inv)
				by_face[f] = old_areas.area(split_face) - area_first;
			else
				by_face[f] = old_areas.area(old_graph.face_of(lowest_old));
		}
	}
	AreaMap areas(next, std::move(by_face));
	return {std::move(next), std::move(areas)};
}

} // namespace

SubdivideResult elementary_subdivide(const FatGraph& graph, const AreaMap& areas, SubdivideOp op,
                                     const SubdivideLocation& loc)
{
	const int n = graph.dart_count();
	const Dart n0 = n, n1 = n + 1;
	std::vector<Dart> alpha = graph.alpha_perm();

	switch (op)
	{
	case SubdivideOp::add_vertex: {
		const Dart e = loc.dart;
		if (e < 0 || e >= n)
			throw std::invalid_argument("subdivide V: dart out of range");
		const Dart einv = graph.alpha(e);
		// split {e, einv}: e keeps its target, einv keeps its target, the new
		// degree-2 vertex sits between; alpha re-pairs  e<->n1, einv<->n0
		alpha.resize(n + 2);
		alpha[e] = n1;
		alpha[n1] = e;
		alpha[einv] = n0;
		alpha[n0] = einv;
		auto words = face_words(graph);
		for (auto& w : words)
		{
			std::vector<Dart> out;
			for (Dart d : w)
			{
				if (d == e)
					out.push_back(n0);
				else if (d == einv)
					out.push_back(n1);
				out.push_back(d);
			}
			w = std::move(out);
		}
		FatGraph next = graph_from_phi(n + 2, alpha, words);
		if (next.face_count() != graph.face_count() || next.genus() != graph.genus() ||
		    next.vertex_count() != graph.vertex_count() + 1)
			throw std::runtime_error("subdivide V: topology check failed");
		return rebuild_with_areas(graph, areas, std::move(next), -1, 0.0);
	}
	case SubdivideOp::add_pendant_edge: {
		const Dart before = loc.dart;
		if (before < 0 || before >= n)
			throw std::invalid_argument("subdivide E1: dart out of range");
		alpha.resize(n + 2);
		alpha[n0] = n1;
		alpha[n1] = n0;
		auto words = face_words(graph);
		for (auto& w : words)
		{
			std::vector<Dart> out;
			for (Dart d : w)
			{
				if (d == before)
				{
					out.push_back(n0);
					out.push_back(n1);
				}
				out.push_back(d);
			}
			w = std::move(out);
		}
		FatGraph next = graph_from_phi(n + 2, alpha, words);
		if (next.face_count() != graph.face_count() || next.genus() != graph.genus() ||
		    next.vertex_count() != graph.vertex_count() + 1)
			throw std::runtime_error("subdivide E1: topology check failed");
		return rebuild_with_areas(graph, areas, std::move(next), -1, 0.0);
	}
	case SubdivideOp::split_face: {
		if (loc.face < 0 || loc.face >= graph.face_count())
			throw std::invalid_argument("subdivide E2: face out of range");
		const std::vector<Dart> w = graph.faces()[loc.face];
		const int len = static_cast<int>(w.size());
		const int i = loc.pos_i, j = loc.pos_j;
		if (i < 0 || j < 0 || (len > 0 && (i >= len || j >= len)) || (len == 0 && (i != 0 || j != 0)))
			throw std::invalid_argument("subdivide E2: positions out of range");
		if (!(loc.area_first > 0.0) || !(loc.area_first < areas.area(loc.face)))
			throw std::invalid_argument("subdivide E2: area split must cut the face area in two positive parts");
		alpha.resize(n + 2);
		alpha[n0] = n1;
		alpha[n1] = n0;
		// F' = (n0, w_i ... w_{j-1}), F'' = (n1, w_j ... w_{i-1}) cyclically
		std::vector<Dart> first = {n0}, second = {n1};
		if (len > 0)
		{
			for (int k = i; k != j; k = (k + 1) % len)
				first.push_back(w[k]);
			for (int k = j; k != i; k = (k + 1) % len)
				second.push_back(w[k]);
			if (i == j)
				for (int k = 0; k < len; ++k)
					first.push_back(w[(i + k) % len]);
		}
		auto words = face_words(graph);
		words.erase(words.begin() + loc.face);
		words.push_back(first);
		words.push_back(second);
		FatGraph next = graph_from_phi(n + 2, alpha, words);
		if (next.face_count() != graph.face_count() + 1 || next.genus() != graph.genus() ||
		    next.vertex_count() != graph.vertex_count())
			throw std::runtime_error("subdivide E2: topology check failed");
		return rebuild_with_areas(graph, areas, std::move(next), loc.face, loc.area_first);
	}
	}
	throw std::invalid_argument("elementary_subdivide: unknown op");
}

} // namespace ym2d
