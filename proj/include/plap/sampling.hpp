#ifndef PLAP_SAMPLING_HPP
#define PLAP_SAMPLING_HPP

#include <cmath>
#include <cstdint>
#include <vector>

#include "plap/geometry.hpp"

namespace plap {

/// Deterministic xorshift64 uniform sampler. Unlike
/// std::uniform_real_distribution, the stream is identical across standard
/// libraries, which keeps sampled CSV outputs byte-stable.
class UniformSampler {
public:
    explicit UniformSampler(std::uint64_t seed) : state_(seed ? seed : 0x9e3779b9ull) {}

    double next() { // in [0, 1)
        state_ ^= state_ << 13;
        state_ ^= state_ >> 7;
        state_ ^= state_ << 17;
        return static_cast<double>(state_ >> 11) * 0x1.0p-53;
    }
    double in(double lo, double hi) { return lo + (hi - lo) * next(); }

private:
    std::uint64_t state_;
};

/// Polar-uniform interior sector points with the given margin from the
/// boundary in both rho and theta.
inline std::vector<Vec2> sector_interior_points(const AnnularSector& d, int count,
                                                double margin, std::uint64_t seed) {
    UniformSampler rng(seed);
    std::vector<Vec2> points;
    points.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        const double rho = rng.in(1.0 - d.s + margin, 1.0 + d.s - margin);
        const double theta = rng.in(-d.alpha + margin, d.alpha - margin);
        points.push_back({rho * std::cos(theta), rho * std::sin(theta)});
    }
    return points;
}

} // namespace plap

#endif
