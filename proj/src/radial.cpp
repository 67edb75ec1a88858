#include "plap/radial.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "plap/errors.hpp"

namespace plap {

namespace {

// State along the radius: the value u and the flux w = rho |u'|^(p-2) u'.
// Then u' = sign(w) (|w|/rho)^(1/(p-1)) and w' = -rho f(u); at rho = 0 the
// flux vanishes like rho^2, so u'(0) = 0.
struct RadialRhs {
    double p;
    const NonlinearitySpec& f;

    double slope(double rho, double w) const {
        if (rho <= 0.0 || w == 0.0) return 0.0;
        const double magnitude = std::pow(std::abs(w) / rho, 1.0 / (p - 1.0));
        return w > 0.0 ? magnitude : -magnitude;
    }
    void operator()(double rho, double u, double w, double& du, double& dw) const {
        du = slope(rho, w);
        dw = -rho * f_value(f, u);
    }
};

struct Shot {
    std::vector<double> u;
    std::vector<double> w;
};

Shot integrate(const RadialRhs& rhs, double r_start, double r_end, int steps,
               double u0, double w0) {
    Shot shot;
    shot.u.resize(static_cast<std::size_t>(steps) + 1);
    shot.w.resize(static_cast<std::size_t>(steps) + 1);
    shot.u[0] = u0;
    shot.w[0] = w0;
    const double h = (r_end - r_start) / steps;
    double u = u0, w = w0;
    for (int i = 0; i < steps; ++i) {
        const double r = r_start + h * i;
        double k1u, k1w, k2u, k2w, k3u, k3w, k4u, k4w;
        rhs(r, u, w, k1u, k1w);
        rhs(r + 0.5 * h, u + 0.5 * h * k1u, w + 0.5 * h * k1w, k2u, k2w);
        rhs(r + 0.5 * h, u + 0.5 * h * k2u, w + 0.5 * h * k2w, k3u, k3w);
        rhs(r + h, u + h * k3u, w + h * k3w, k4u, k4w);
        u += (h / 6.0) * (k1u + 2.0 * k2u + 2.0 * k3u + k4u);
        w += (h / 6.0) * (k1w + 2.0 * k2w + 2.0 * k3w + k4w);
        shot.u[static_cast<std::size_t>(i) + 1] = u;
        shot.w[static_cast<std::size_t>(i) + 1] = w;
    }
    return shot;
}

/// Positive root of parameter -> terminal value by scan-then-bisect. The scan
/// walks geometrically up and down from the seed until the terminal value
/// changes sign; the zero parameter is excluded, so the power branch never
/// returns the trivial profile.
template <typename Terminal>
double shoot(const Terminal& terminal, double seed, const char* what) {
    const double target = 1e-10;
    double lo = 0.0, hi = 0.0, g_lo = 0.0;
    bool bracketed = false;

    const double g_seed = terminal(seed);
    if (std::abs(g_seed) <= target) return seed;
    for (int direction = 0; direction < 2 && !bracketed; ++direction) {
        double prev = seed, g_prev = g_seed;
        const double factor = direction == 0 ? 2.0 : 0.5;
        for (int k = 0; k < 60; ++k) {
            const double cur = prev * factor;
            const double g_cur = terminal(cur);
            if (std::isnan(g_cur)) break;
            if (std::abs(g_cur) <= target) return cur;
            if (g_cur * g_prev < 0.0) {
                lo = std::min(prev, cur);
                hi = std::max(prev, cur);
                g_lo = prev < cur ? g_prev : g_cur;
                bracketed = true;
                break;
            }
            prev = cur;
            g_prev = g_cur;
        }
    }
    if (!bracketed)
        throw OracleFailureError(std::string("solve_radial: no bracket for ") + what);

    for (int iter = 0; iter < 200; ++iter) {
        const double mid = 0.5 * (lo + hi);
        const double g_mid = terminal(mid);
        if (std::abs(g_mid) <= target) return mid;
        if (g_mid * g_lo > 0.0) {
            lo = mid;
            g_lo = g_mid;
        } else {
            hi = mid;
        }
    }
    throw OracleFailureError(
        std::string("solve_radial: bisection did not reach |u| <= 1e-10 for ") + what);
}

} // namespace

double RadialProfile::eval(double r) const {
    const auto it = std::upper_bound(rho.begin(), rho.end(), r);
    std::size_t i = it == rho.begin() ? 0 : static_cast<std::size_t>(it - rho.begin()) - 1;
    i = std::min(i, rho.size() - 2);
    const double h = rho[i + 1] - rho[i];
    const double t = std::clamp((r - rho[i]) / h, 0.0, 1.0);
    const double h00 = (1.0 + 2.0 * t) * (1.0 - t) * (1.0 - t);
    const double h10 = t * (1.0 - t) * (1.0 - t);
    const double h01 = t * t * (3.0 - 2.0 * t);
    const double h11 = t * t * (t - 1.0);
    return h00 * u[i] + h10 * h * du[i] + h01 * u[i + 1] + h11 * h * du[i + 1];
}

double RadialProfile::eval_derivative(double r) const {
    const auto it = std::upper_bound(rho.begin(), rho.end(), r);
    std::size_t i = it == rho.begin() ? 0 : static_cast<std::size_t>(it - rho.begin()) - 1;
    i = std::min(i, rho.size() - 2);
    const double h = rho[i + 1] - rho[i];
    const double t = std::clamp((r - rho[i]) / h, 0.0, 1.0);
    const double dh00 = 6.0 * t * (t - 1.0);
    const double dh10 = (1.0 - t) * (1.0 - 3.0 * t);
    const double dh01 = -dh00;
    const double dh11 = t * (3.0 * t - 2.0);
    return (dh00 * u[i] + dh01 * u[i + 1]) / h + dh10 * du[i] + dh11 * du[i + 1];
}

RadialProfile solve_radial(const DomainSpec& domain, double p,
                           const NonlinearitySpec& nonlinearity, int grid_size) {
    validate(domain);
    if (!(p > 1.0)) throw std::invalid_argument("solve_radial: p must be > 1");
    if (grid_size < 16)
        throw std::invalid_argument("solve_radial: grid_size must be >= 16");
    if (std::holds_alternative<AnnularSector>(domain))
        throw InvalidDomainError("solve_radial: domain must be radially symmetric");

    const RadialRhs rhs{p, nonlinearity};
    RadialProfile profile;
    profile.p = p;
    profile.nonlinearity = nonlinearity;

    double r_start = 0.0, r_end = 0.0;
    Shot final_shot;

    if (const auto* disk = std::get_if<Disk>(&domain)) {
        r_start = 0.0;
        r_end = disk->radius;
        auto terminal = [&](double center_value) {
            return integrate(rhs, r_start, r_end, grid_size, center_value, 0.0)
                .u.back();
        };
        const double center = shoot(terminal, 0.0625, "disk center value");
        final_shot = integrate(rhs, r_start, r_end, grid_size, center, 0.0);
    } else {
        const auto& ann = std::get<Annulus>(domain);
        r_start = ann.r_inner;
        r_end = ann.r_outer;
        auto terminal = [&](double initial_flux) {
            return integrate(rhs, r_start, r_end, grid_size, 0.0, initial_flux)
                .u.back();
        };
        const double flux = shoot(terminal, 0.0625, "annulus inner slope");
        final_shot = integrate(rhs, r_start, r_end, grid_size, 0.0, flux);
    }

    profile.rho.resize(static_cast<std::size_t>(grid_size) + 1);
    profile.u = std::move(final_shot.u);
    profile.du.resize(profile.u.size());
    for (int i = 0; i <= grid_size; ++i) {
        const double r = r_start + (r_end - r_start) * i / grid_size;
        profile.rho[static_cast<std::size_t>(i)] = r;
        profile.du[static_cast<std::size_t>(i)] =
            rhs.slope(r, final_shot.w[static_cast<std::size_t>(i)]);
    }
    return profile;
}

} // namespace plap
