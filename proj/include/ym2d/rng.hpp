#pragma once

#include <cstdint>
#include <string_view>

namespace ym2d {

/**
 * Deterministic splittable random stream. Every sampler in the library
 * takes one of these explicitly; there is no hidden global state.
 * Child streams obtained through split() depend only on the parent's
 * seed and the label, never on how much the parent has been consumed,
 * so parallel tasks can derive independent streams up front.
 */
class RngStream {
  public:
	explicit RngStream(std::uint64_t seed);

	RngStream split(std::uint64_t label) const;
	RngStream split(std::string_view label) const;

	std::uint64_t next_u64();

	/** uniform double in [0,1) with 53 random bits */
	double uniform();

	/** uniform integer in [0,n) */
	std::uint64_t uniform_below(std::uint64_t n);

	/** standard normal via Box-Muller (implementation-independent) */
	double normal();

	std::uint64_t seed() const { return seed_; }

  private:
	std::uint64_t seed_;
	std::uint64_t state_;
	bool have_spare_ = false;
	double spare_ = 0.0;
};

} // namespace ym2d
