#pragma once

#include <cmath>

namespace ym2d {

/** Unit quaternion; the model we use for SU(2). */
struct Quat {
	double w = 1.0, x = 0.0, y = 0.0, z = 0.0;

	static Quat identity() { return {1.0, 0.0, 0.0, 0.0}; }

	static Quat axis_angle(double theta, double nx, double ny, double nz)
	{
		const double s = std::sin(theta);
		return {std::cos(theta), s * nx, s * ny, s * nz};
	}

	Quat conj() const { return {w, -x, -y, -z}; }

	Quat neg() const { return {-w, -x, -y, -z}; }

	double norm2() const { return w * w + x * x + y * y + z * z; }

	Quat normalized() const
	{
		const double n = std::sqrt(norm2());
		return {w / n, x / n, y / n, z / n};
	}

	/** rotation angle of the SU(2) class, acos(w) in [0,pi] */
	double angle() const
	{
		double c = w;
		if (c > 1.0)
			c = 1.0;
		if (c < -1.0)
			c = -1.0;
		return std::acos(c);
	}

	friend Quat operator*(const Quat& a, const Quat& b)
	{
		return {a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
		        a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
		        a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x,
		        a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w};
	}

	/** canonical representative of {q,-q}: first coordinate above tolerance is positive */
	Quat canonical(double tol = 1e-12) const
	{
		const double c[4] = {w, x, y, z};
		for (double v : c)
		{
			if (v > tol)
				return *this;
			if (v < -tol)
				return neg();
		}
		return *this;
	}

	double max_abs_diff(const Quat& o) const
	{
		double d = std::fabs(w - o.w);
		d = std::max(d, std::fabs(x - o.x));
		d = std::max(d, std::fabs(y - o.y));
		d = std::max(d, std::fabs(z - o.z));
		return d;
	}
};

} // namespace ym2d
