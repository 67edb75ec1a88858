#include "plap/identity.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <stdexcept>

#include "plap/errors.hpp"

namespace plap {

namespace {

bool same_sector(const AnnularSector& a, const AnnularSector& b) {
    return a.alpha == b.alpha && a.s == b.s;
}

void require_converged(const Solution& solution, const char* who) {
    if (!solution.mesh) throw std::invalid_argument(std::string(who) + ": null mesh");
    if (!solution.convergence.converged)
        throw std::invalid_argument(std::string(who) + ": solution is not converged");
}

/// The sector field needs theta bounded away from the branch cut; radial
/// fields pair with anything.
void require_pairable(const VectorFieldSpec& field, const Solution& solution,
                      const char* who) {
    if (field.kind == FieldKind::Radial) return;
    if (!std::holds_alternative<AnnularSector>(solution.mesh->provenance.domain))
        throw InvalidPairingError(std::string(who) +
                                  ": sector field requires an annular sector domain");
}

} // namespace

double integrate_domain(const Mesh& mesh,
                        const std::function<double(int, Vec2)>& integrand,
                        QuadRule rule) {
    double sum = 0.0;
    for (int t = 0; t < mesh.n_triangles(); ++t) {
        const double area = mesh.signed_area(t);
        if (rule == QuadRule::Centroid) {
            sum += area * integrand(t, mesh.centroid(t));
        } else {
            const auto c = mesh.corners(t);
            sum += (area / 3.0) * (integrand(t, 0.5 * (c[0] + c[1])) +
                                   integrand(t, 0.5 * (c[1] + c[2])) +
                                   integrand(t, 0.5 * (c[2] + c[0])));
        }
    }
    return sum;
}

double integrate_boundary(const Mesh& mesh,
                          const std::function<double(const BoundaryEdge&, Vec2)>& integrand) {
    if (mesh.boundary_edges.empty())
        throw std::invalid_argument("integrate_boundary: mesh has no boundary edges");
    double sum = 0.0;
    for (const auto& be : mesh.boundary_edges) {
        const Vec2 mid = 0.5 * (mesh.vertices[static_cast<std::size_t>(be.a)] +
                                mesh.vertices[static_cast<std::size_t>(be.b)]);
        sum += be.length * integrand(be, mid);
    }
    return sum;
}

IdentityReport identity_sides(const Solution& solution, const VectorFieldSpec& field,
                              const NonlinearitySpec& nonlinearity) {
    require_converged(solution, "identity_sides");
    require_pairable(field, solution, "identity_sides");

    const Mesh& mesh = *solution.mesh;
    const double p = solution.p;
    IdentityReport report;
    report.mesh_n_radial = mesh.provenance.n_radial;
    report.mesh_n_angular = mesh.provenance.n_angular;
    report.mesh_h = mesh.max_edge_length();

    // Per-triangle gradients are reused by all three terms.
    std::vector<Vec2> grad(static_cast<std::size_t>(mesh.n_triangles()));
    for (int t = 0; t < mesh.n_triangles(); ++t)
        grad[static_cast<std::size_t>(t)] =
            triangle_gradient(mesh, solution.nodal_values, t);

    report.lhs =
        (1.0 - 1.0 / p) *
        integrate_boundary(mesh, [&](const BoundaryEdge& be, Vec2 mid) {
            const Vec2 g = grad[static_cast<std::size_t>(be.parent_triangle)];
            const double grad_pow = std::pow(dot(g, g), 0.5 * p);
            return grad_pow * dot(eval_field(field, mid), be.normal);
        });

    report.rhs_jacobian = integrate_domain(
        mesh,
        [&](int t, Vec2 centroid) {
            const Vec2 g = grad[static_cast<std::size_t>(t)];
            const double g_sq = dot(g, g);
            if (g_sq == 0.0) return 0.0; // limit of |Du|^(p-2) dv[Du].Du
            return std::pow(g_sq, 0.5 * (p - 2.0)) * quad_form(field, centroid, g);
        },
        QuadRule::Centroid);

    // F(u) needs the midpoint rule; |Du|^p is constant per triangle, so the
    // same rule integrates it exactly.
    std::vector<double> grad_pow(static_cast<std::size_t>(mesh.n_triangles()));
    for (int t = 0; t < mesh.n_triangles(); ++t)
        grad_pow[static_cast<std::size_t>(t)] =
            std::pow(dot(grad[static_cast<std::size_t>(t)], grad[static_cast<std::size_t>(t)]),
                     0.5 * p);
    const auto& nodal = solution.nodal_values;
    report.rhs_divergence = integrate_domain(
        mesh,
        [&](int t, Vec2 point) {
            const double um = p1_value(mesh, nodal, t, point);
            const double bracket = F_primitive(nonlinearity, um) -
                                   grad_pow[static_cast<std::size_t>(t)] / p;
            return divergence(field, point) * bracket;
        },
        QuadRule::EdgeMidpoints);

    report.rhs_total = report.rhs_jacobian + report.rhs_divergence;
    report.residual_abs = std::abs(report.lhs - report.rhs_total);
    report.residual_rel =
        report.residual_abs /
        std::max({std::abs(report.lhs), std::abs(report.rhs_total), kResidualFloor});
    return report;
}

CorollaryReport corollary_bound(const Solution& solution, const AnnularSector& domain,
                                const NonlinearitySpec& nonlinearity) {
    require_converged(solution, "corollary_bound");
    const auto* mesh_sector =
        std::get_if<AnnularSector>(&solution.mesh->provenance.domain);
    if (!mesh_sector)
        throw InvalidDomainError("corollary_bound: solution domain is not a sector");
    if (!same_sector(*mesh_sector, domain))
        throw InvalidDomainError(
            "corollary_bound: sector parameters disagree with the mesh provenance");

    const Mesh& mesh = *solution.mesh;
    const double p = solution.p;
    const double s = domain.s;
    const VectorFieldSpec field = sector_field();

    CorollaryReport report;
    report.gradient_coefficient = 1.0 - 2.0 / p + (1.0 + 1.0 / p) * s / (1.0 - s);
    report.gradient_term =
        report.gradient_coefficient *
        integrate_domain(
            mesh,
            [&](int t, Vec2) {
                const Vec2 g = triangle_gradient(mesh, solution.nodal_values, t);
                return std::pow(dot(g, g), 0.5 * p);
            },
            QuadRule::Centroid);

    const auto& nodal = solution.nodal_values;
    report.divF_term = integrate_domain(
        mesh,
        [&](int t, Vec2 point) {
            const double um = p1_value(mesh, nodal, t, point);
            return divergence(field, point) * F_primitive(nonlinearity, um);
        },
        QuadRule::EdgeMidpoints);

    report.bound_value = report.gradient_term + report.divF_term;
    return report;
}

std::vector<ConvergenceRow> convergence_study(const DomainSpec& domain, double p,
                                              const NonlinearitySpec& nonlinearity,
                                              const VectorFieldSpec& field,
                                              std::span<const int> levels,
                                              const SolverConfig& config) {
    if (levels.size() < 3)
        throw std::invalid_argument("convergence_study: need at least 3 levels");
    for (std::size_t i = 1; i < levels.size(); ++i)
        if (levels[i] <= levels[i - 1])
            throw std::invalid_argument(
                "convergence_study: levels must be strictly increasing");

    std::vector<ConvergenceRow> rows;
    rows.reserve(levels.size());
    for (int level : levels) {
        auto mesh = std::make_shared<Mesh>(build_mesh(domain, level, 2 * level));
        const Solution solution = solve(std::move(mesh), p, nonlinearity, config);
        const IdentityReport report = identity_sides(solution, field, nonlinearity);
        ConvergenceRow row;
        row.level = level;
        row.h = report.mesh_h;
        row.lhs = report.lhs;
        row.rhs_total = report.rhs_total;
        row.residual_rel = report.residual_rel;
        if (!rows.empty()) {
            const ConvergenceRow& prev = rows.back();
            row.observed_order = std::log(prev.residual_rel / row.residual_rel) /
                                 std::log(static_cast<double>(level) / prev.level);
        }
        rows.push_back(row);
    }
    return rows;
}

} // namespace plap
