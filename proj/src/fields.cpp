#include "plap/fields.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "plap/errors.hpp"

namespace plap {

namespace {

constexpr double kPi = std::numbers::pi;

struct Polar {
    double rho, theta, c, s; // c = cos(theta), s = sin(theta)
};

Polar sector_polar(Vec2 p) {
    if (p.x == 0.0 && p.y == 0.0)
        throw UndefinedAngleError("sector field undefined at the origin");
    const double rho = std::hypot(p.x, p.y);
    const double theta = std::atan2(p.y, p.x);
    if (theta >= kPi || theta <= -kPi)
        throw UndefinedAngleError("sector field undefined on the branch cut theta = pi");
    return {rho, theta, p.x / rho, p.y / rho};
}

} // namespace

Vec2 eval_field(const VectorFieldSpec& spec, Vec2 point) {
    if (spec.kind == FieldKind::Radial) return spec.scale * point;
    const Polar pp = sector_polar(point);
    const Vec2 e_rho{pp.c, pp.s};
    const Vec2 e_theta{-pp.s, pp.c};
    return spec.scale * ((pp.rho - 1.0) * e_rho + (pp.rho * pp.theta) * e_theta);
}

double divergence(const VectorFieldSpec& spec, Vec2 point) {
    if (spec.kind == FieldKind::Radial) return 2.0 * spec.scale;
    const Polar pp = sector_polar(point);
    return spec.scale * (3.0 - 1.0 / pp.rho);
}

double quad_form(const VectorFieldSpec& spec, Vec2 point, Vec2 xi) {
    if (spec.kind == FieldKind::Radial) return spec.scale * dot(xi, xi);
    const Polar pp = sector_polar(point);
    const double xi_n = xi.x * pp.c + xi.y * pp.s;
    const double xi_t = -xi.x * pp.s + xi.y * pp.c;
    return spec.scale * (xi_n * xi_n + (2.0 - 1.0 / pp.rho) * xi_t * xi_t);
}

FieldSample sample_field(const VectorFieldSpec& spec, Vec2 point, Vec2 xi) {
    return {eval_field(spec, point), divergence(spec, point), quad_form(spec, point, xi)};
}

double FdConsistency::max_error() const {
    double m = div_error;
    for (double e : quad_errors) m = std::max(m, e);
    return m;
}

FdConsistency fd_consistency(const VectorFieldSpec& spec, Vec2 point, double h) {
    if (!(h > 0.0)) throw std::invalid_argument("fd_consistency: step h must be > 0");

    // Central-difference Jacobian J[i][j] = d v_i / d x_j.
    const Vec2 vxp = eval_field(spec, {point.x + h, point.y});
    const Vec2 vxm = eval_field(spec, {point.x - h, point.y});
    const Vec2 vyp = eval_field(spec, {point.x, point.y + h});
    const Vec2 vym = eval_field(spec, {point.x, point.y - h});
    const double inv2h = 1.0 / (2.0 * h);
    const double j00 = (vxp.x - vxm.x) * inv2h;
    const double j01 = (vyp.x - vym.x) * inv2h;
    const double j10 = (vxp.y - vxm.y) * inv2h;
    const double j11 = (vyp.y - vym.y) * inv2h;

    FdConsistency out;
    out.div_fd = j00 + j11;
    out.div_error = std::abs(divergence(spec, point) - out.div_fd);
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    const std::array<Vec2, 3> dirs{Vec2{1.0, 0.0}, Vec2{0.0, 1.0},
                                   Vec2{inv_sqrt2, inv_sqrt2}};
    for (std::size_t k = 0; k < dirs.size(); ++k) {
        const Vec2 xi = dirs[k];
        const double fd = xi.x * (j00 * xi.x + j01 * xi.y) + xi.y * (j10 * xi.x + j11 * xi.y);
        out.quad_errors[k] = std::abs(quad_form(spec, point, xi) - fd);
    }
    return out;
}

FluxAudit boundary_flux_audit(const AnnularSector& domain, int n_samples) {
    validate(DomainSpec{domain});
    if (n_samples < 4)
        throw std::invalid_argument("boundary_flux_audit: n_samples must be >= 4");

    const int m = (n_samples + 3) / 4;
    const VectorFieldSpec field = sector_field();
    FluxAudit audit;
    audit.samples.reserve(static_cast<std::size_t>(4 * m));

    auto push = [&](EdgeKind kind, double rho, double theta, Vec2 normal) {
        const Vec2 point{rho * std::cos(theta), rho * std::sin(theta)};
        const double flux = dot(eval_field(field, point), normal);
        audit.samples.push_back({kind, rho, theta, flux});
    };

    // Arcs: interior angles only, radial normals.
    for (int arc = 0; arc < 2; ++arc) {
        const double rho = arc == 0 ? 1.0 - domain.s : 1.0 + domain.s;
        const double sign = arc == 0 ? -1.0 : 1.0;
        const EdgeKind kind = arc == 0 ? EdgeKind::InnerArc : EdgeKind::OuterArc;
        for (int k = 0; k < m; ++k) {
            const double theta = -domain.alpha + 2.0 * domain.alpha * (k + 0.5) / m;
            push(kind, rho, theta, {sign * std::cos(theta), sign * std::sin(theta)});
        }
    }

    // Straight sides: radii cover [1-s, 1+s] inclusive, so the minimum of the
    // side branch rho * alpha is attained at rho = 1 - s.
    for (int side = 0; side < 2; ++side) {
        const double theta = side == 0 ? -domain.alpha : domain.alpha;
        const double sign = side == 0 ? -1.0 : 1.0;
        const Vec2 normal{sign * -std::sin(theta), sign * std::cos(theta)};
        for (int k = 0; k < m; ++k) {
            const double rho =
                m == 1 ? 1.0 : (1.0 - domain.s) + 2.0 * domain.s * k / (m - 1);
            push(EdgeKind::StraightSide, rho, theta, normal);
        }
    }

    audit.min_flux = audit.samples.front().flux;
    for (const auto& s : audit.samples) audit.min_flux = std::min(audit.min_flux, s.flux);
    return audit;
}

} // namespace plap
