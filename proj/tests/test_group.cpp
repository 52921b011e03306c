#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "ym2d/group.hpp"
#include "ym2d/stats.hpp"

using namespace ym2d;

namespace {

GroupElement u1_elem(double x)
{
	GroupElement g;
	g.angle = {x};
	return g;
}

CoverElement u1_cover(double x)
{
	CoverElement c;
	c.coord = {x};
	return c;
}

CoverElement quat_cover(const Quat& q)
{
	CoverElement c;
	c.q = q;
	return c;
}

} // namespace

TEST_SUITE_BEGIN("group");

TEST_CASE("rng determinism and splitting")
{
	RngStream a(42), b(42);
	for (int i = 0; i < 100; ++i)
		CHECK(a.next_u64() == b.next_u64());

	// split depends only on seed + label, not on consumption
	RngStream c(7), d(7);
	(void)c.uniform();
	(void)c.uniform();
	RngStream c1 = c.split(3), d1 = d.split(3);
	CHECK(c1.next_u64() == d1.next_u64());
	CHECK(c.split(1).next_u64() != c.split(2).next_u64());

	// uniform range and rough mean
	RngStream e(11);
	double sum = 0.0;
	for (int i = 0; i < 10000; ++i)
	{
		const double u = e.uniform();
		CHECK(u >= 0.0);
		CHECK(u < 1.0);
		sum += u;
	}
	CHECK(std::fabs(sum / 10000 - 0.5) < 0.02);
}

TEST_CASE("u1 heat kernel values")
{
	auto ctx = GroupContext::u1(1);

	// long-time limit is the uniform density on a unit-volume group
	CHECK(ctx.heat_kernel(10.0, u1_elem(0.37)) == doctest::Approx(1.0).epsilon(1e-8));

	// frozen from the Fourier-series oracle
	const double frozen = 1.2785669994156844;
	CHECK(oracles::circle_heat_fourier(0.1, 0.0) == doctest::Approx(frozen).epsilon(1e-12));
	CHECK(ctx.heat_kernel(0.1, u1_elem(0.0)) == doctest::Approx(frozen).epsilon(1e-10));

	const double frozen2 = 0.9999999998967537;
	CHECK(ctx.heat_kernel(0.3, u1_elem(0.25)) == doctest::Approx(frozen2).epsilon(1e-10));

	// wrapped and Fourier regimes agree across the crossover
	for (double t : {0.2, 0.4, 0.4999, 0.5001, 0.7})
		for (double x : {0.0, 0.1, 0.5, 0.93})
			CHECK(ctx.heat_kernel(t, u1_elem(x)) ==
			      doctest::Approx(oracles::circle_heat_fourier(t, x)).epsilon(1e-10));

	CHECK_THROWS(ctx.heat_kernel(0.0, u1_elem(0.0)));
	CHECK_THROWS(ctx.heat_kernel(-1.0, u1_elem(0.0)));
}

TEST_CASE("u1 rank 2 kernel factorizes")
{
	auto ctx2 = GroupContext::u1(2);
	auto ctx1 = GroupContext::u1(1);
	GroupElement g;
	g.angle = {0.2, 0.71};
	CHECK(ctx2.heat_kernel(0.3, g) ==
	      doctest::Approx(ctx1.heat_kernel(0.3, u1_elem(0.2)) * ctx1.heat_kernel(0.3, u1_elem(0.71)))
	          .epsilon(1e-12));
}

TEST_CASE("cover kernel gaussian values")
{
	auto ctx = GroupContext::u1(1);
	CHECK(ctx.cover_heat_kernel(1.0, u1_cover(0.0)) == doctest::Approx(0.3989422804014327).epsilon(1e-12));
	CHECK(ctx.cover_heat_kernel(0.25, u1_cover(1.3)) ==
	      doctest::Approx(std::exp(-1.3 * 1.3 / 0.5) / std::sqrt(2.0 * oracles::kPi * 0.25)).epsilon(1e-12));
}

TEST_CASE("su2 kernel: class function, positivity, frozen value")
{
	auto ctx = GroupContext::su2();
	RngStream rng(5);
	for (int i = 0; i < 20; ++i)
	{
		GroupElement x = ctx.haar_sample(rng);
		GroupElement y = ctx.haar_sample(rng);
		GroupElement conj = ctx.mul(ctx.mul(y, x), ctx.inv(y));
		for (double t : {0.08, 0.5, 2.0})
		{
			const double a = ctx.heat_kernel(t, x);
			const double b = ctx.heat_kernel(t, conj);
			CHECK(a > 0.0);
			CHECK(a == doctest::Approx(b).epsilon(1e-9));
		}
	}
	// frozen from the plain character-sum oracle at the identity
	GroupElement id = ctx.identity();
	CHECK(ctx.heat_kernel(0.5, id) == doctest::Approx(1.0167163851246788).epsilon(1e-10));

	// su2 is simply connected: cover kernel is the base kernel
	RngStream rng2(6);
	for (int i = 0; i < 10; ++i)
	{
		GroupElement x = ctx.haar_sample(rng2);
		CoverElement c = ctx.principal_lift(x);
		CHECK(ctx.heat_kernel(0.7, x) == doctest::Approx(ctx.cover_heat_kernel(0.7, c)).epsilon(1e-12));
	}
}

TEST_CASE("su2 kernel: series and wrapped regimes agree")
{
	// the implementation switches form at s = 0.35; compare both against the
	// plain character sum where that sum is still well conditioned
	auto ctx = GroupContext::su2();
	const double kappa = ctx.casimir_scale();
	for (double s : {0.2, 0.3, 0.34, 0.36, 0.5})
	{
		const double t = 2.0 * s / kappa;
		for (double theta : {0.0, 0.3, 1.2, oracles::kPi / 2, 2.4, oracles::kPi})
		{
			GroupElement x;
			x.q = Quat::axis_angle(theta, 0.0, 1.0, 0.0);
			const double want = oracles::su2_char_sum(theta, s);
			CHECK(ctx.heat_kernel(t, x) == doctest::Approx(want).epsilon(5e-9));
		}
	}
}

TEST_CASE("so3 cover kernel lives on SU(2), not the quotient")
{
	auto ctx = GroupContext::so3();
	CoverElement c = quat_cover(Quat::axis_angle(0.6, 0.0, 0.0, 1.0));
	CoverElement cneg = quat_cover(c.q.neg());
	const double a = ctx.cover_heat_kernel(0.5, c);
	const double b = ctx.cover_heat_kernel(0.5, cneg);
	CHECK(std::fabs(a - b) > 1e-6);
}

TEST_CASE("projection identity")
{
	SUBCASE("u1 wrapped gaussian")
	{
		auto ctx = GroupContext::u1(2);
		RngStream rng(17);
		for (int i = 0; i < 30; ++i)
		{
			const double t = 0.05 + 2.0 * rng.uniform();
			CoverElement c;
			c.coord = {4.0 * rng.uniform() - 2.0, 4.0 * rng.uniform() - 2.0};
			auto [lhs, rhs] = ctx.projection_sum_check(t, c);
			CHECK(lhs == doctest::Approx(rhs).epsilon(1e-9));
		}
	}
	SUBCASE("so3 identity quaternion, frozen oracle")
	{
		auto ctx = GroupContext::so3();
		auto [lhs, rhs] = ctx.projection_sum_check(1.0, ctx.cover_identity());
		// frozen from the odd-character series: chi_n(-1) = (-1)^{n+1} n kills even n
		CHECK(lhs == doctest::Approx(1.0000000914585584).epsilon(1e-10));
		CHECK(rhs == doctest::Approx(1.0000000914585584).epsilon(1e-10));
	}
	SUBCASE("so3 random points both regimes")
	{
		auto ctx = GroupContext::so3();
		RngStream rng(23);
		for (int i = 0; i < 40; ++i)
		{
			const double t = 0.01 + 2.0 * rng.uniform();
			CoverElement c = ctx.cover_haar_sample(rng);
			auto [lhs, rhs] = ctx.projection_sum_check(t, c);
			CHECK(lhs == doctest::Approx(rhs).epsilon(1e-8));
		}
	}
	SUBCASE("su2 trivial")
	{
		auto ctx = GroupContext::su2();
		RngStream rng(29);
		CoverElement c = ctx.cover_haar_sample(rng);
		auto [lhs, rhs] = ctx.projection_sum_check(0.4, c);
		CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
	}
}

TEST_CASE("heat kernel integrates to one")
{
	SUBCASE("u1 by periodic quadrature")
	{
		auto ctx = GroupContext::u1(1);
		for (double t : {0.05, 0.3, 1.0})
		{
			const double mass =
			    oracles::periodic_avg([&](double x) { return ctx.heat_kernel(t, u1_elem(x)); }, 512);
			CHECK(mass == doctest::Approx(1.0).epsilon(1e-10));
		}
	}
	SUBCASE("su2 by Weyl-measure quadrature")
	{
		auto ctx = GroupContext::su2();
		for (double t : {0.05, 0.3, 1.0})
		{
			auto f = [&](double theta) {
				GroupElement x;
				x.q = Quat::axis_angle(theta, 1.0, 0.0, 0.0);
				return ctx.heat_kernel(t, x) * (2.0 / oracles::kPi) * std::sin(theta) * std::sin(theta);
			};
			CHECK(oracles::simpson(f, 0.0, oracles::kPi, 2048) == doctest::Approx(1.0).epsilon(1e-9));
		}
	}
	SUBCASE("so3 by Weyl-measure quadrature")
	{
		auto ctx = GroupContext::so3();
		for (double t : {0.05, 0.3, 1.0})
		{
			// rotation angle psi has Haar density (1-cos psi)/pi on [0,pi]
			auto f = [&](double psi) {
				GroupElement x;
				x.q = Quat::axis_angle(psi / 2.0, 0.0, 1.0, 0.0);
				return ctx.heat_kernel(t, x) * (1.0 - std::cos(psi)) / oracles::kPi;
			};
			CHECK(oracles::simpson(f, 0.0, oracles::kPi, 2048) == doctest::Approx(1.0).epsilon(1e-9));
		}
	}
}

TEST_CASE("heat kernel semigroup")
{
	SUBCASE("u1 by quadrature")
	{
		auto ctx = GroupContext::u1(1);
		const double s = 0.17, t = 0.41;
		for (double x : {0.0, 0.2, 0.66})
		{
			const double conv = oracles::periodic_avg(
			    [&](double y) {
				    return ctx.heat_kernel(s, u1_elem(x - y + 1.0 >= 1.0 ? x - y : x - y + 1.0)) *
				           ctx.heat_kernel(t, u1_elem(y));
			    },
			    512);
			CHECK(conv == doctest::Approx(ctx.heat_kernel(s + t, u1_elem(x))).epsilon(1e-9));
		}
	}
	SUBCASE("su2 and so3 by Monte Carlo")
	{
		for (auto ctx : {GroupContext::su2(), GroupContext::so3()})
		{
			RngStream rng(31);
			GroupElement x = ctx.haar_sample(rng);
			const double s = 0.35, t = 0.4;
			const int n = 200000;
			std::vector<double> vals(n);
			for (int i = 0; i < n; ++i)
			{
				GroupElement y = ctx.haar_sample(rng);
				vals[i] = ctx.heat_kernel(s, ctx.mul(x, ctx.inv(y))) * ctx.heat_kernel(t, y);
			}
			auto ms = stats::mean_std_error(vals);
			const double want = ctx.heat_kernel(s + t, x);
			CHECK(std::fabs(ms.mean - want) < 3.0 * ms.std_error + 1e-12);
		}
	}
}

TEST_CASE("haar sampling moments")
{
	SUBCASE("u1 character mean vanishes")
	{
		auto ctx = GroupContext::u1(1);
		RngStream rng(101);
		const int n = 100000;
		double cre = 0.0, cim = 0.0;
		for (int i = 0; i < n; ++i)
		{
			const double x = ctx.haar_sample(rng).angle[0];
			cre += std::cos(2.0 * oracles::kPi * x);
			cim += std::sin(2.0 * oracles::kPi * x);
		}
		// each component has variance 1/2
		CHECK(std::fabs(cre / n) < 3.0 * std::sqrt(0.5 / n));
		CHECK(std::fabs(cim / n) < 3.0 * std::sqrt(0.5 / n));
	}
	SUBCASE("su2 fundamental character mean vanishes")
	{
		auto ctx = GroupContext::su2();
		RngStream rng(103);
		const int n = 100000;
		std::vector<double> tr(n);
		for (int i = 0; i < n; ++i)
			tr[i] = ctx.haar_sample(rng).q.w; // trace/2
		auto ms = stats::mean_std_error(tr);
		CHECK(std::fabs(ms.mean) < 3.0 * ms.std_error);
	}
	SUBCASE("so3 rotation angle matches the Weyl density")
	{
		auto ctx = GroupContext::so3();
		RngStream rng(107);
		std::vector<double> angles(20000);
		for (auto& a : angles)
			a = 2.0 * ctx.haar_sample(rng).q.angle(); // rotation angle in [0,pi]
		auto cdf = [](double psi) { return (psi - std::sin(psi)) / oracles::kPi; };
		const double d = stats::ks_statistic(angles, cdf);
		CHECK(stats::ks_pvalue(d, angles.size()) > 0.01);
	}
}

TEST_CASE("commutator lift")
{
	SUBCASE("u1 commutators vanish")
	{
		auto ctx = GroupContext::u1(3);
		RngStream rng(41);
		auto c = ctx.commutator_lift(ctx.haar_sample(rng), ctx.haar_sample(rng));
		for (double v : c.coord)
			CHECK(v == 0.0);
	}
	SUBCASE("so3 equal arguments give the identity")
	{
		auto ctx = GroupContext::so3();
		RngStream rng(43);
		GroupElement a = ctx.haar_sample(rng);
		auto c = ctx.commutator_lift(a, a);
		CHECK(c.q.max_abs_diff(Quat::identity()) < 1e-12);
	}
	SUBCASE("so3 lift choice is irrelevant (all four signs)")
	{
		auto ctx = GroupContext::so3();
		RngStream rng(47);
		for (int i = 0; i < 25; ++i)
		{
			GroupElement a = ctx.haar_sample(rng), b = ctx.haar_sample(rng);
			const Quat ref = ctx.commutator_lift(a, b).q;
			for (int sa : {1, -1})
				for (int sb : {1, -1})
				{
					Quat qa = sa > 0 ? a.q : a.q.neg();
					Quat qb = sb > 0 ? b.q : b.q.neg();
					const Quat alt = qa * qb * qa.conj() * qb.conj();
					CHECK(alt.max_abs_diff(ref) < 1e-12);
				}
		}
	}
}

TEST_CASE("singular set membership")
{
	auto ctx = GroupContext::so3();
	GroupElement rot_pi;
	rot_pi.q = Quat::axis_angle(oracles::kPi / 2.0, 0.0, 0.0, 1.0); // rotation by pi about z
	CHECK(ctx.singular_set_member(rot_pi));
	CHECK_FALSE(ctx.singular_set_member(ctx.identity()));
	GroupElement rot_half;
	rot_half.q = Quat::axis_angle(oracles::kPi / 4.0, 0.0, 0.0, 1.0); // rotation by pi/2
	CHECK_FALSE(ctx.singular_set_member(rot_half));

	auto u1 = GroupContext::u1(1);
	CHECK_THROWS(u1.singular_set_member(u1.identity()));
	auto su2 = GroupContext::su2();
	CHECK_THROWS(su2.singular_set_member(su2.identity()));
}

TEST_CASE("heat step angle law")
{
	// the bridge sampler rests on exact heat increments; check the sampled
	// class angle against the density (2/pi) sin^2(theta) S(theta) in both
	// rejection regimes
	auto ctx = GroupContext::so3();
	const double kappa = ctx.casimir_scale();
	for (double s : {0.05, 0.5})
	{
		const double t = 2.0 * s / kappa;
		RngStream rng(211 + static_cast<int>(100 * s));
		std::vector<double> angles(8000);
		for (auto& a : angles)
			a = ctx.cover_heat_sample(t, rng).q.angle();
		auto density = [&](double theta) {
			const double st = std::sin(theta);
			return 2.0 / oracles::kPi * st * st * oracles::su2_char_sum(theta, s, 2000);
		};
		auto cdf = stats::numeric_cdf(density, 0.0, oracles::kPi);
		const double d = stats::ks_statistic(angles, cdf);
		CHECK(stats::ks_pvalue(d, angles.size()) > 0.01);
	}
}

TEST_CASE("bridge on the u1 cover")
{
	auto ctx = GroupContext::u1(1);

	SUBCASE("pinned endpoints and linear mean")
	{
		RngStream rng(301);
		const std::vector<double> grid = {0.0, 0.25, 0.5, 0.75, 1.0};
		const int n = 20000;
		std::vector<double> mid(n);
		for (int i = 0; i < n; ++i)
		{
			auto path = ctx.bridge_sample(1.0, grid, u1_cover(3.0), rng);
			CHECK(path.front().coord[0] == 0.0);
			CHECK(path.back().coord[0] == 3.0);
			mid[i] = path[2].coord[0];
		}
		auto ms = stats::mean_std_error(mid);
		CHECK(std::fabs(ms.mean - 1.5) < 3.0 * ms.std_error);
	}

	SUBCASE("bridge covariance oracle")
	{
		RngStream rng(307);
		const std::vector<double> grid = {0.0, 0.3, 1.0};
		const int n = 40000;
		std::vector<double> at(n);
		for (int i = 0; i < n; ++i)
			at[i] = ctx.bridge_sample(1.0, grid, u1_cover(0.0), rng)[1].coord[0];
		auto ms = stats::mean_std_error(at);
		CHECK(std::fabs(ms.mean) < 3.0 * ms.std_error);
		double var = 0.0;
		for (double v : at)
			var += v * v;
		var /= n;
		const double want = 0.3 * (1.0 - 0.3); // t (1 - t/total)
		CHECK(std::fabs(var - want) < 3.0 * want * std::sqrt(2.0 / (n - 1.0)));
	}

	SUBCASE("input validation")
	{
		RngStream rng(1);
		CHECK_THROWS(ctx.bridge_sample(1.0, std::vector<double>{}, u1_cover(0.0), rng));
		CHECK_THROWS(ctx.bridge_sample(1.0, std::vector<double>{0.5, 1.0}, u1_cover(0.0), rng));
		CHECK_THROWS(ctx.bridge_sample(-1.0, std::vector<double>{0.0}, u1_cover(0.0), rng));
	}
}

TEST_CASE("bridge on the so3 cover: midpoint marginal")
{
	auto ctx = GroupContext::so3();
	const double total = 0.5;
	CoverElement minus_one = quat_cover(Quat::identity().neg());
	const std::vector<double> grid = {0.0, total / 2.0, total};

	RngStream rng(401);
	const int n = 4000;
	std::vector<double> angles(n);
	for (int i = 0; i < n; ++i)
	{
		auto path = ctx.bridge_sample(total, grid, minus_one, rng);
		CHECK(path.back().q.max_abs_diff(minus_one.q) < 1e-12);
		angles[i] = path[1].q.angle();
	}
	// density ratio oracle: p~_{t}(x) p~_{T-t}(x^{-1} y) / p~_T(y) against the
	// shell measure, y = -1 so everything is a class function
	auto density = [&](double theta) {
		CoverElement a = quat_cover(Quat::axis_angle(theta, 1.0, 0.0, 0.0));
		CoverElement b = quat_cover(Quat::axis_angle(oracles::kPi - theta, 1.0, 0.0, 0.0));
		const double st = std::sin(theta);
		return ctx.cover_heat_kernel(total / 2, a) * ctx.cover_heat_kernel(total / 2, b) * st * st;
	};
	auto cdf = stats::numeric_cdf(density, 0.0, oracles::kPi);
	const double d = stats::ks_statistic(angles, cdf);
	CHECK(stats::ks_pvalue(d, angles.size()) > 0.01);
}

TEST_CASE("deck group arithmetic")
{
	auto so3 = GroupContext::so3();
	CenterElement minus;
	minus.sign = -1;
	CHECK(so3.center_mul(minus, minus).sign == +1);
	CHECK(so3.center_from_cover(so3.deck(minus)).sign == -1);
	CHECK(so3.cover_approx_equal(so3.deck(so3.center_mul(minus, minus)), so3.cover_identity()));

	auto u1 = GroupContext::u1(2);
	CenterElement z1, z2;
	z1.winding = {1, -2};
	z2.winding = {3, 5};
	auto z3 = u1.center_mul(z1, z2);
	CHECK(z3.winding == std::vector<long long>{4, 3});
	CHECK(u1.center_from_cover(u1.deck(z3)).winding == z3.winding);
	// projection kills the deck translation
	RngStream rng(3);
	GroupElement g = u1.haar_sample(rng);
	CoverElement lift = u1.principal_lift(g);
	CHECK(u1.approx_equal(u1.project(u1.cover_translate(lift, z1)), g));
}

TEST_SUITE_END();
