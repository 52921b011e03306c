#pragma once

#include <span>
#include <string>
#include <vector>

#include "ym2d/quaternion.hpp"
#include "ym2d/rng.hpp"

namespace ym2d {

enum class GroupKind { u1, su2, so3 };

std::string to_string(GroupKind k);

/**
 * Element of the base group G.
 *  u1(m): m angles in [0,1), the circle of circumference 1 per factor
 *  su2:   unit quaternion
 *  so3:   unit quaternion with q ~ -q, stored as the canonical representative
 */
struct GroupElement {
	std::vector<double> angle; // u1 payload
	Quat q = Quat::identity(); // su2 / so3 payload
};

/**
 * Element of the universal cover G~.
 *  u1(m): point of R^m
 *  su2 / so3: unit quaternion (the cover of SO(3) is SU(2))
 */
struct CoverElement {
	std::vector<double> coord;
	Quat q = Quat::identity();
};

/**
 * Element of the deck group Pi = ker(G~ -> G). Integer winding vector for
 * u1(m), a sign for so3, trivial for su2. Pi embeds in the center of G~.
 */
struct CenterElement {
	std::vector<long long> winding;
	int sign = +1;
};

/**
 * A supported compact connected group together with its universal cover,
 * deck group, metric normalization and heat-kernel evaluators.
 *
 * Metric convention: G carries the unit-volume bi-invariant metric and G~
 * the pulled-back one (so vol(G~) = |Pi|). For u1 this makes the cover
 * kernel the standard Gaussian on R^m; for su2/so3 the Laplacian acts on
 * the n-dimensional SU(2) representation with eigenvalue
 * casimir_scale * (n^2 - 1), casimir_scale = (vol_of_unit_sphere_model)^(2/3):
 * (2 pi^2)^(2/3) for su2, (pi^2)^(2/3) for so3.
 */
class GroupContext {
  public:
	static GroupContext u1(int m, double series_tol = 1e-10);
	static GroupContext su2(double series_tol = 1e-10);
	static GroupContext so3(double series_tol = 1e-10);

	GroupKind kind() const { return kind_; }
	int rank() const { return m_; } // m for u1, 0 otherwise
	double casimir_scale() const { return casimir_scale_; }
	double series_tol() const { return series_tol_; }
	/** |Pi| for finite deck groups (1 for su2, 2 for so3); 0 means infinite (u1) */
	int deck_order() const;
	double cover_volume() const { return cover_volume_; }

	// ---- elements ------------------------------------------------------
	GroupElement identity() const;
	CoverElement cover_identity() const;
	CenterElement center_identity() const;

	GroupElement mul(const GroupElement& a, const GroupElement& b) const;
	GroupElement inv(const GroupElement& a) const;
	CoverElement cover_mul(const CoverElement& a, const CoverElement& b) const;
	CoverElement cover_inv(const CoverElement& a) const;
	CenterElement center_mul(const CenterElement& a, const CenterElement& b) const;
	CenterElement center_inv(const CenterElement& a) const;

	bool approx_equal(const GroupElement& a, const GroupElement& b, double tol = 1e-9) const;
	bool cover_approx_equal(const CoverElement& a, const CoverElement& b, double tol = 1e-9) const;
	bool center_equal(const CenterElement& a, const CenterElement& b) const;

	GroupElement project(const CoverElement& c) const;
	/** principal-branch lift: u1 coordinates in [-1/2,1/2), so3 canonical quaternion */
	CoverElement principal_lift(const GroupElement& g) const;
	CoverElement deck(const CenterElement& z) const;
	/** c * deck(z) */
	CoverElement cover_translate(const CoverElement& c, const CenterElement& z) const;
	/** nearest deck element; throws if c is farther than tol from Pi */
	CenterElement center_from_cover(const CoverElement& c, double tol = 1e-6) const;

	/** conjugacy-class coordinate: quaternion angle in [0,pi] (su2 / so3 lift); u1: first coordinate */
	double class_angle(const GroupElement& g) const;
	double cover_class_angle(const CoverElement& c) const;
	/** distance between conjugacy classes (angle difference; u1: circle distance max over coords) */
	double class_distance(const GroupElement& a, const GroupElement& b) const;
	/**
	 * rotation distance between group elements: so3 rotation angle of a^-1 b
	 * in [0,pi], su2 quaternion angle, u1 max per-coordinate circle distance.
	 */
	double rotation_distance(const GroupElement& a, const GroupElement& b) const;

	// ---- heat kernels ----------------------------------------------------
	/** p_t(x) on G, density w.r.t. the unit-mass Riemannian volume */
	double heat_kernel(double t, const GroupElement& x) const;
	/** p~_t(x~) on G~, density w.r.t. the pulled-back volume (mass |Pi|) */
	double cover_heat_kernel(double t, const CoverElement& x) const;
	/**
	 * lhs = sum over Pi of p~_t(x~ z) (truncated for u1), rhs = p_t(pi(x~));
	 * the two must agree within 10 * series_tol
	 */
	std::pair<double, double> projection_sum_check(double t, const CoverElement& x) const;

	// ---- sampling --------------------------------------------------------
	GroupElement haar_sample(RngStream& rng) const;
	/** Haar on G~ for finite covers (su2/so3); throws for u1 */
	CoverElement cover_haar_sample(RngStream& rng) const;
	/** one heat-kernel increment: law with density p~_t w.r.t. cover volume */
	CoverElement cover_heat_sample(double t, RngStream& rng) const;
	/** commutator lift [a~,b~]; independent of the choice of lifts */
	CoverElement commutator_lift(const GroupElement& a, const GroupElement& b) const;

	/**
	 * Brownian bridge on G~ from the identity, of length total_time, pinned
	 * at `endpoint`. Returns the path at the grid times; grid must start at 0
	 * and increase. Marginals are exact: each step is a heat-kernel increment
	 * accepted against the remaining-time kernel, whose sup over the group is
	 * attained at the identity (so the rejection envelope is exact).
	 */
	std::vector<CoverElement> bridge_sample(double total_time, std::span<const double> grid,
	                                        const CoverElement& endpoint, RngStream& rng) const;

	/** spectrum-{i,-i} test (rotations of angle pi); only so3 supports a nontrivial test */
	bool singular_set_member(const GroupElement& x) const;

  private:
	GroupContext(GroupKind kind, int m, double series_tol);

	void check_kind(GroupKind expected, const char* op) const;

	GroupKind kind_;
	int m_;
	double casimir_scale_;
	double series_tol_;
	double cover_volume_;
};

} // namespace ym2d
