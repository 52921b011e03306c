#pragma once

#include <vector>

namespace ym2d {

using Dart = int;

/**
 * Combinatorial map: a fixed-point-free involution alpha pairing the darts
 * into edges and a permutation sigma whose cycles are the vertices (sigma
 * sends a dart to the next incoming dart at its target, in the surface
 * orientation). Faces are the cycles of phi = alpha o sigma^{-1}; the genus
 * comes from Euler's relation s - a + f = 2 - 2g.
 *
 * Graphs are immutable; the moves below return new graphs.
 *
 * The dartless graph is accepted as the degenerate sphere (one vertex, one
 * face, genus 0).
 */
class FatGraph {
  public:
	/** degenerate sphere */
	FatGraph();
	FatGraph(std::vector<Dart> sigma, std::vector<Dart> alpha);

	int dart_count() const { return static_cast<int>(sigma_.size()); }
	int edge_count() const { return dart_count() / 2; }
	int vertex_count() const;
	int face_count() const;
	int genus() const { return genus_; }

	Dart sigma(Dart d) const { return sigma_[d]; }
	Dart sigma_inv(Dart d) const { return sigma_inv_[d]; }
	Dart alpha(Dart d) const { return alpha_[d]; }
	Dart phi(Dart d) const { return alpha_[sigma_inv_[d]]; }
	Dart phi_inv(Dart d) const { return sigma_[alpha_[d]]; }

	/** id of the sigma-cycle containing d (the target vertex of d) */
	int vertex_of(Dart d) const { return vertex_of_[d]; }
	/** id of the phi-cycle containing d */
	int face_of(Dart d) const { return face_of_[d]; }
	int source_vertex(Dart d) const { return vertex_of_[alpha_[d]]; }
	int target_vertex(Dart d) const { return vertex_of_[d]; }

	/** face cycles, each rotated to start at its lowest dart, ordered by that dart */
	const std::vector<std::vector<Dart>>& faces() const { return faces_; }
	const std::vector<std::vector<Dart>>& vertex_cycles() const { return vertices_; }
	Dart face_representative(int face) const { return faces_[face].front(); }

	/** canonical orientation: the lower dart of each alpha-pair */
	std::vector<Dart> orientation_reps() const;

	const std::vector<Dart>& sigma_perm() const { return sigma_; }
	const std::vector<Dart>& alpha_perm() const { return alpha_; }

	bool operator==(const FatGraph& o) const { return sigma_ == o.sigma_ && alpha_ == o.alpha_; }

  private:
	std::vector<Dart> sigma_, sigma_inv_, alpha_;
	std::vector<int> vertex_of_, face_of_;
	std::vector<std::vector<Dart>> vertices_, faces_;
	int genus_ = 0;
};

/** build a graph from its face cycles; sigma is recovered as phi^{-1} o alpha */
FatGraph graph_from_phi(int dart_count, const std::vector<Dart>& alpha,
                        const std::vector<std::vector<Dart>>& phi_cycles);

/** the standard one-vertex one-face graph of the given genus:
 *  phi = (a1, b1, a1^-1, b1^-1, ..., ag, bg, ag^-1, bg^-1) on darts 0..4g-1 */
FatGraph standard_graph(int genus);

/** positive area per face, summing to the surface's total area */
class AreaMap {
  public:
	AreaMap(const FatGraph& graph, std::vector<double> area_by_face);
	static AreaMap uniform(const FatGraph& graph, double total_area);

	double area(int face) const { return area_by_face_[face]; }
	double total() const { return total_; }
	const std::vector<double>& by_face() const { return area_by_face_; }

  private:
	std::vector<double> area_by_face_;
	double total_;
};

// ---- dual graph and spanning trees -----------------------------------------

struct DualGraph {
	int vertex_count = 0; // = number of faces
	struct Edge {
		Dart dart;
		int from, to; // L(dart), L(alpha(dart))
	};
	std::vector<Edge> edges; // one per dart
};

DualGraph dual_graph(const FatGraph& graph);

/** spanning tree of the dual graph, stored as a set of alpha-pairs */
class DualTree {
  public:
	DualTree(const FatGraph& graph, std::vector<Dart> pair_reps);
	const std::vector<Dart>& pair_reps() const { return pair_reps_; }
	bool contains(Dart d) const { return in_tree_[d]; }

  private:
	std::vector<Dart> pair_reps_;
	std::vector<char> in_tree_;
};

/** deterministic: BFS from the lowest-index face, darts scanned in index order */
DualTree spanning_tree_dual(const FatGraph& graph);

struct ContractResult {
	FatGraph graph;
	AreaMap areas;
	std::vector<Dart> old_to_new; // -1 for removed darts
	std::vector<Dart> new_to_old;
};

/** remove the dual-tree edges: a single-face graph on the same vertices,
 *  same genus, whose unique face carries the total area */
ContractResult contract_dual_tree(const FatGraph& graph, const AreaMap& areas, const DualTree& tree);

// ---- moves ------------------------------------------------------------------

struct WhiteheadResult {
	FatGraph graph;
	std::vector<Dart> old_to_new; // -1 for the two removed darts
	std::vector<Dart> new_to_old;
};

/** contraction of the edge of e; requires distinct endpoints */
WhiteheadResult whitehead(const FatGraph& graph, Dart e);

/** cut-and-paste along e on a single-face graph: the dart before alpha(e)
 *  in the face word is reinserted right after e */
FatGraph cut_paste(const FatGraph& graph, Dart e);

/** largest m such that the face word starts (up to rotation) with m
 *  interleaved blocks (x, y, x^-1, y^-1); requires a one-vertex one-face graph */
int standard_order(const FatGraph& graph);
bool is_standard(const FatGraph& graph);

struct MoveLogEntry {
	enum class Kind { cut_paste, relabel };
	Kind kind = Kind::cut_paste;
	Dart dart = -1;                 // for cut_paste
	std::vector<Dart> old_to_new;   // for relabel
};

struct StandardizeResult {
	FatGraph graph;
	std::vector<MoveLogEntry> log;
};

/** reduce a one-vertex one-face graph to the standard form of its genus by
 *  cut-and-paste moves (the induction of the standard-form proposition),
 *  relabeling darts canonically at the end */
StandardizeResult standardize(const FatGraph& graph);

// ---- elementary subdivisions -------------------------------------------------

enum class SubdivideOp { add_vertex, add_pendant_edge, split_face }; // V, E1, E2

struct SubdivideLocation {
	Dart dart = -1;          // V: a dart of the edge to split; E1: corner before this dart
	int face = -1;           // E2
	int pos_i = 0, pos_j = 0; // E2: positions on the face word
	double area_first = 0.0; // E2: area of the face starting with the new dart
};

struct SubdivideResult {
	FatGraph graph;
	AreaMap areas;
};

/** the two new darts are always 2a and 2a+1 = alpha(2a); old darts keep their
 *  indices, so configurations extend without relabeling */
SubdivideResult elementary_subdivide(const FatGraph& graph, const AreaMap& areas, SubdivideOp op,
                                     const SubdivideLocation& loc);

} // namespace ym2d
