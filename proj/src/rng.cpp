#include "ym2d/rng.hpp"

#include <cmath>

namespace ym2d {

namespace {

// splitmix64 step; good enough statistics for desk-scale Monte Carlo and
// fully reproducible across platforms.
inline std::uint64_t mix64(std::uint64_t z)
{
	z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
	z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
	return z ^ (z >> 31);
}

inline std::uint64_t combine(std::uint64_t a, std::uint64_t b)
{
	// hash-combine; keeps child seeds well separated from the parent's
	return mix64(a + 0x9E3779B97F4A7C15ull + (b ^ (b >> 32)) * 0xD6E8FEB86659FD93ull);
}

} // namespace

RngStream::RngStream(std::uint64_t seed) : seed_(seed), state_(mix64(seed ^ 0xA0761D6478BD642Full)) {}

RngStream RngStream::split(std::uint64_t label) const
{
	return RngStream(combine(seed_, label));
}

RngStream RngStream::split(std::string_view label) const
{
	// FNV-1a over the label bytes
	std::uint64_t h = 0xCBF29CE484222325ull;
	for (char c : label)
	{
		h ^= static_cast<unsigned char>(c);
		h *= 0x100000001B3ull;
	}
	return split(h);
}

std::uint64_t RngStream::next_u64()
{
	state_ += 0x9E3779B97F4A7C15ull;
	return mix64(state_);
}

double RngStream::uniform()
{
	return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

std::uint64_t RngStream::uniform_below(std::uint64_t n)
{
	// rejection to avoid modulo bias
	const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
	std::uint64_t v;
	do
		v = next_u64();
	while (v >= limit);
	return v % n;
}

double RngStream::normal()
{
	if (have_spare_)
	{
		have_spare_ = false;
		return spare_;
	}
	double u1 = 0.0;
	while (u1 == 0.0)
		u1 = uniform();
	const double u2 = uniform();
	const double r = std::sqrt(-2.0 * std::log(u1));
	const double a = 2.0 * M_PI * u2;
	spare_ = r * std::sin(a);
	have_spare_ = true;
	return r * std::cos(a);
}

} // namespace ym2d
