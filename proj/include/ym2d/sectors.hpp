#pragma once

#include <vector>

#include "ym2d/lattice.hpp"

namespace ym2d {

/** parameters of the Gaussian representation for G = U(1)^m */
struct AbelianSpec {
	int m = 1;
	std::vector<double> face_areas;
	double temperature = 1.0;
	std::vector<long long> z;
	double series_tol = 1e-10;

	AbelianSpec(int m_, std::vector<double> areas, double T, std::vector<long long> z_);
	double total_area() const;
};

struct AbelianIdentityReport {
	std::vector<double> lhs, rhs; // exp(|z|^2/(2T sM)) D_L and D_R per probe
	double max_rel_error = 0.0;
	bool pass = false;
};

/**
 * Evaluates the two truncated lattice sums of the Gaussian-representation
 * proof at random probe points and verifies
 * exp(|z|^2 / (2 T sigma_M)) D_L = D_R.
 */
AbelianIdentityReport abelian_identity_check(const AbelianSpec& spec, int probes, RngStream& rng,
                                             double tolerance = 1e-8);

/** sum of D_L over bundle classes in a window; equals the unconstrained
 *  product of wrapped Gaussian sums (used by the class-decomposition test) */
double abelian_dl_sum_over_classes(const AbelianSpec& spec,
                                   const std::vector<std::vector<double>>& probe, int radius);

/** one joint draw of the face-boundary variables e(X_i + (s_i/sM) z) */
std::vector<GroupElement> abelian_face_sampler(const AbelianSpec& spec, RngStream& rng);

/** how the handle holonomies are drawn: plain Haar, or reweighted to their
 *  marginal under the discrete measure on the standard one-vertex graph
 *  (the laws coincide for u1) */
enum class HandleLaw { haar, measure };

struct LoopProcessSample {
	std::vector<double> grid;         // area parameters in [0, total_area]
	std::vector<GroupElement> values; // X_t, the projected loop holonomies
	std::vector<CoverElement> bridge; // the underlying cover path
	std::vector<GroupElement> handles; // a_1, b_1, ..., a_g, b_g
	CoverElement handle_word;          // product of the commutator lifts
	int grid_points = 0;
	bool continuity_ok = false;
	double max_step = 0.0;  // largest consecutive rotation distance
	double threshold = 0.0; // refusal threshold on that distance
};

/**
 * Samples the loop-holonomy process: handle holonomies, then the Brownian
 * bridge on the cover of length T*total_area pinned at
 * [a1,b1]~ ... [ag,bg]~ deck(z), observed through the projection on a
 * uniform area grid. With auto_refine the grid doubles until every step is
 * below the lift-continuity threshold.
 */
LoopProcessSample loop_process_sample(const GroupContext& ctx, int genus, double T,
                                      double total_area, const CenterElement& z, int grid_points,
                                      RngStream& rng, bool auto_refine = true,
                                      HandleLaw law = HandleLaw::measure);

struct SectorEstimate {
	CenterElement o_hat;
	bool refused = false;
	double confidence = 0.0; // fraction of steps comfortably below threshold
};

/**
 * Recovers the bundle class from the projected path alone: relift the path
 * continuously from the identity and compare its endpoint with the
 * commutator word. Refuses (rather than guessing) when a step exceeds the
 * continuity threshold.
 */
SectorEstimate extract_obstruction(const GroupContext& ctx, const LoopProcessSample& sample);

} // namespace ym2d
