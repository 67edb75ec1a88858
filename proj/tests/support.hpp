#ifndef PLAP_TESTS_SUPPORT_HPP
#define PLAP_TESTS_SUPPORT_HPP

#include <chrono>
#include <cmath>

#include "plap/geometry.hpp"
#include "plap/radial.hpp"
#include "plap/sampling.hpp"
#include "plap/solver.hpp"

namespace plap::test {

using plap::UniformSampler;
using plap::sector_interior_points;

/// Max-norm gap between FEM nodal values and the radial oracle profile.
inline double max_gap_to_profile(const Solution& solution, const RadialProfile& profile) {
    double gap = 0.0;
    for (std::size_t v = 0; v < solution.mesh->vertices.size(); ++v) {
        const double rho = norm(solution.mesh->vertices[v]);
        gap = std::max(gap, std::abs(solution.nodal_values[v] - profile.eval(rho)));
    }
    return gap;
}

class Timer {
public:
    Timer() : start_(std::chrono::steady_clock::now()) {}
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_)
            .count();
    }

private:
    std::chrono::steady_clock::time_point start_;
};

} // namespace plap::test

#endif
