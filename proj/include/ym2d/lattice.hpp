#pragma once

#include <span>
#include <string>
#include <vector>

#include "ym2d/fat_graph.hpp"
#include "ym2d/group.hpp"
#include "ym2d/rng.hpp"

namespace ym2d {

/** subset E+ of darts containing exactly one dart per alpha-pair */
class Orientation {
  public:
	static Orientation canonical(const FatGraph& graph); // lower dart of each pair
	Orientation(const FatGraph& graph, std::vector<Dart> reps);

	const std::vector<Dart>& reps() const { return reps_; }
	bool is_rep(Dart d) const { return index_[d] >= 0; }
	int index_of(Dart d) const { return index_[d]; }
	int size() const { return static_cast<int>(reps_.size()); }

  private:
	std::vector<Dart> reps_;
	std::vector<int> index_;
};

/** group labels on E+; the reversed dart carries the inverse label */
struct Configuration {
	Orientation orient;
	std::vector<GroupElement> values; // aligned with orient.reps()
};

Configuration haar_configuration(const GroupContext& ctx, const FatGraph& graph, RngStream& rng);
GroupElement config_value(const GroupContext& ctx, const Configuration& cfg, const FatGraph& graph,
                          Dart d);

/** cover labels on every dart subject to pi(g(e)) = pi(g(e^-1))^-1 */
struct LiftedConfiguration {
	std::vector<CoverElement> values; // by dart
};

/** principal-branch lift of a configuration (u1 coords in [-1/2,1/2), canonical quaternions) */
LiftedConfiguration lift_configuration(const GroupContext& ctx, const FatGraph& graph,
                                       const Configuration& cfg);
void validate_lifted(const GroupContext& ctx, const FatGraph& graph, const LiftedConfiguration& lifted);
Configuration project_lifted(const GroupContext& ctx, const FatGraph& graph,
                             const LiftedConfiguration& lifted, const Orientation& orient);

/**
 * Discrete gauge group element: a cover element per vertex plus a central
 * element per dart whose product over each face boundary is the identity.
 */
struct GaugeTransform {
	std::vector<CoverElement> vertex;       // by vertex id
	std::vector<CenterElement> dart_center; // by dart
};

void validate_gauge(const GroupContext& ctx, const FatGraph& graph, const GaugeTransform& j);
GaugeTransform random_gauge(const GroupContext& ctx, const FatGraph& graph, RngStream& rng);
/** (j . g)(e) = j(target)^-1 g(e) j(source) z_e */
LiftedConfiguration gauge_apply(const GroupContext& ctx, const FatGraph& graph,
                                const GaugeTransform& j, const LiftedConfiguration& lifted);
/** the projected vertex-only action on plain configurations */
Configuration vertex_gauge_apply(const GroupContext& ctx, const FatGraph& graph,
                                 const std::vector<GroupElement>& vertex, const Configuration& cfg);

void validate_word(const FatGraph& graph, std::span<const Dart> word);
/** reverse-order product: h(d1 d2 ... dn) = g(dn) ... g(d1) */
GroupElement holonomy(const GroupContext& ctx, const FatGraph& graph, const Configuration& cfg,
                      std::span<const Dart> word);
/** boundary holonomy of a face in the cover, read from the lowest dart */
CoverElement boundary_holonomy_lift(const GroupContext& ctx, const FatGraph& graph,
                                    const LiftedConfiguration& lifted, int face);
/** product over edges of g(e) g(e^-1), a deck element independent of orientation */
CenterElement obstruction(const GroupContext& ctx, const FatGraph& graph,
                          const LiftedConfiguration& lifted);

/** parameters of the per-class measure: temperature, bundle class, areas */
struct MeasureSpec {
	GroupContext ctx;
	double temperature;
	CenterElement z;
	AreaMap areas;

	MeasureSpec(GroupContext ctx_, double temperature_, CenterElement z_, AreaMap areas_);
};

/** per-class density D_{T,z}(g); finite, lift-independent */
double density_D(const FatGraph& graph, const MeasureSpec& spec, const Configuration& cfg);
/** same sum evaluated on an explicit lift (for lift-independence checks) */
double density_D_lifted(const FatGraph& graph, const MeasureSpec& spec,
                        const LiftedConfiguration& lifted);
/** plain heat-kernel product over faces (the z-summed density) */
double usual_density(const FatGraph& graph, const MeasureSpec& spec, const Configuration& cfg);

struct PartitionEstimate {
	double value = 0.0;
	double std_error = 0.0;
	std::string method;
	long effort = 0;
};

enum class PartitionMethod { quadrature, monte_carlo };

/** Z_{T,z} = integral of D over Haar; quadrature is u1-only (tensor grid of
 *  `effort` points per dimension, error from grid refinement) */
PartitionEstimate partition_estimate(const FatGraph& graph, const MeasureSpec& spec,
                                     PartitionMethod method, long effort, RngStream& rng);

struct ChainParams {
	int burn_in = 1000;   // sweeps before the first sample
	int thinning = 20;    // sweeps between samples
	bool force_chain = false; // use Metropolis even where an exact sampler exists
};

/** one draw from P_{T,z}; exact for u1, Metropolis-Hastings otherwise */
Configuration sample_config(const FatGraph& graph, const MeasureSpec& spec, RngStream& rng,
                            const ChainParams& params = {});
std::vector<Configuration> sample_configs(const FatGraph& graph, const MeasureSpec& spec, int count,
                                          RngStream& rng, const ChainParams& params = {});

/** spanning tree of the graph itself (not the dual), rooted */
class GraphTree {
  public:
	GraphTree(const FatGraph& graph, std::vector<Dart> pair_reps, int root);
	static GraphTree bfs(const FatGraph& graph, int root = 0);

	bool contains(Dart d) const { return in_tree_[d]; }
	int root() const { return root_; }
	/** dart arriving at v from its parent; -1 at the root */
	Dart parent_dart(int vertex) const { return parent_dart_[vertex]; }
	const std::vector<Dart>& pair_reps() const { return pair_reps_; }
	/** tree path from the root to a vertex, as a dart word */
	std::vector<Dart> path_from_root(int vertex) const;

  private:
	std::vector<Dart> pair_reps_;
	std::vector<char> in_tree_;
	std::vector<Dart> parent_dart_;
	std::vector<int> parent_vertex_;
	int root_;
};

struct GaugeFixResult {
	Configuration fixed;                  // identity on tree darts
	std::vector<Dart> loop_reps;          // non-tree representatives
	std::vector<GroupElement> loop_coords; // h along the loops [r,src] e [tgt,r]
};

GaugeFixResult gauge_fix(const GroupContext& ctx, const FatGraph& graph, const Configuration& cfg,
                         const GraphTree& tree);

// ---- subdivision invariance ---------------------------------------------------

struct SubdivisionStep {
	SubdivideOp op;
	SubdivideLocation loc;
};

struct CheckLine {
	std::string what;
	bool pass = false;
	double error = 0.0;
	double tolerance = 0.0;
};

struct SubdivisionReport {
	bool pass = true;
	std::vector<CheckLine> lines;
};

/**
 * Verifies the pushforward identity along a logged refinement: V and E1
 * steps are pointwise-exact identities of densities, the E2 step is the
 * marginalization integral (quadrature for u1, Wilson-loop Monte Carlo
 * match for su2/so3).
 */
SubdivisionReport pushforward_check(const FatGraph& graph, const MeasureSpec& spec,
                                    const std::vector<SubdivisionStep>& steps, long effort,
                                    RngStream& rng);

} // namespace ym2d
