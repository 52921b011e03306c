#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ym2d/lattice.hpp"

namespace ym2d {

/** pushes Haar measure on the edge labels through the face word of a
 *  single-face graph; the resulting class measure on the cover is nu */
class NuSampler {
  public:
	explicit NuSampler(FatGraph graph);

	const FatGraph& graph() const { return graph_; }
	const std::vector<Dart>& word() const { return word_; }
	const Orientation& orient() const { return orient_; }

  private:
	FatGraph graph_;
	std::vector<Dart> word_;
	Orientation orient_;
};

/** one draw from nu, returned as the canonical class representative
 *  (u1: the point itself; su2/so3: the quaternion (cos a, sin a, 0, 0)) */
CoverElement nu_sample(const GroupContext& ctx, const NuSampler& sampler, RngStream& rng);

enum class MoveKind { whitehead, cut_paste };

struct MoveReport {
	int trials = 0;
	double max_class_distance = 0.0;
	bool pass = false;
};

/**
 * Checks the pointwise intertwining h_Gamma(g) = h_move(Gamma)(cov(g)) for
 * the explicit change of variables of the invariance proofs, on random
 * inputs; class-level equality within 1e-9 per trial.
 */
MoveReport move_equivariance_check(const GroupContext& ctx, const FatGraph& graph, Dart e,
                                   MoveKind move, int trials, RngStream& rng);

/**
 * Z_{T,z} = int over G^{2g} of p~_{T area}([a1,b1]~ ... [ag,bg]~ z).
 * Exact for genus 0 and for u1 (commutators vanish); Monte Carlo otherwise.
 */
PartitionEstimate closed_form_Z(const GroupContext& ctx, int genus, double T, double total_area,
                                const CenterElement& z, long effort, RngStream& rng);

/**
 * Independent series oracle for su2/so3 (Frobenius character identities):
 *   Z = (1/|Pi|) sum_n chi_n(z)/n * n^(3-2g) * exp(-(n^2-1) * scale * T area / 2).
 * Cross-checked against closed_form_Z by the test suite before use.
 */
PartitionEstimate character_sum_Z(const GroupContext& ctx, int genus, double T, double total_area,
                                  const CenterElement& z);

struct PipelineComparison {
	std::string a, b;
	double difference = 0.0;
	double tolerance = 0.0;
	bool pass = false;
};

struct PipelineReport {
	PartitionEstimate direct;
	PartitionEstimate reduced;
	PartitionEstimate closed;
	std::vector<PipelineComparison> comparisons;
	bool pass = true;
	std::uint64_t seed = 0;
};

/**
 * Computes Z three ways: directly on the graph, through dual-tree
 * contraction and the nu integral, and by the genus closed form; reports
 * pairwise agreement with combined error bars.
 */
PipelineReport full_pipeline_check(const FatGraph& graph, const MeasureSpec& spec, long effort,
                                   RngStream& rng);

} // namespace ym2d
