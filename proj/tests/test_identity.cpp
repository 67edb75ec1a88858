#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <memory>
#include <numbers>

#include "plap/errors.hpp"
#include "plap/identity.hpp"
#include "support.hpp"

using namespace plap;

namespace {

constexpr double kPi = std::numbers::pi;

std::shared_ptr<const Mesh> make_mesh(const DomainSpec& d, int nr, int nt) {
    return std::make_shared<Mesh>(build_mesh(d, nr, nt));
}

Solution zero_solution(std::shared_ptr<const Mesh> mesh, double p) {
    Solution s;
    s.nodal_values.assign(mesh->vertices.size(), 0.0);
    s.mesh = std::move(mesh);
    s.p = p;
    s.convergence.converged = true;
    return s;
}

} // namespace

TEST_CASE("domain quadrature: areas") {
    const auto one = [](int, Vec2) { return 1.0; };
    const Mesh disk = build_mesh(DomainSpec{Disk{1.0}}, 64, 128);
    CHECK(std::abs(integrate_domain(disk, one, QuadRule::Centroid) - kPi) <= 1e-2);
    CHECK(std::abs(integrate_domain(disk, one, QuadRule::EdgeMidpoints) - kPi) <= 1e-2);

    const Mesh sector = build_mesh(DomainSpec{AnnularSector{2.0, 0.3}}, 64, 128);
    CHECK(std::abs(integrate_domain(sector, one, QuadRule::Centroid) - 2.4) <= 1e-2);

    Mesh empty;
    CHECK(integrate_domain(empty, one, QuadRule::Centroid) == 0.0);
}

TEST_CASE("boundary quadrature: perimeters") {
    const auto one = [](const BoundaryEdge&, Vec2) { return 1.0; };
    const Mesh disk = build_mesh(DomainSpec{Disk{1.0}}, 64, 128);
    CHECK(std::abs(integrate_boundary(disk, one) - 2.0 * kPi) <= 2e-2);

    // Sector perimeter: 2 alpha (1+s) + 2 alpha (1-s) + 4 s = 4 alpha + 4 s.
    const Mesh sector = build_mesh(DomainSpec{AnnularSector{2.0, 0.3}}, 64, 128);
    CHECK(std::abs(integrate_boundary(sector, one) - 9.2) <= 2e-2);

    Mesh no_boundary;
    CHECK_THROWS_AS(integrate_boundary(no_boundary, one), std::invalid_argument);
}

TEST_CASE("identity on the disk torsion solution with the radial field") {
    const Solution sol = solve(make_mesh(DomainSpec{Disk{1.0}}, 64, 128), 2.0, Constant{1.0});
    const IdentityReport report = identity_sides(sol, radial_field(), Constant{1.0});
    CHECK(std::abs(report.lhs - kPi / 4.0) <= 2e-2 * (kPi / 4.0));
    CHECK(std::abs(report.rhs_total - kPi / 4.0) <= 2e-2 * (kPi / 4.0));
    CHECK(report.residual_rel <= 2e-2);
    CHECK(report.rhs_total == report.rhs_jacobian + report.rhs_divergence);
    CHECK(report.mesh_n_radial == 64);
    CHECK(report.mesh_n_angular == 128);
    CHECK(report.mesh_h > 0.0);
}

TEST_CASE("identity is exactly zero on the trivial solution") {
    const IdentityReport report = identity_sides(
        zero_solution(make_mesh(DomainSpec{Disk{1.0}}, 8, 16), 2.0), radial_field(),
        Constant{1.0});
    CHECK(report.lhs == 0.0);
    CHECK(report.rhs_total == 0.0);
    CHECK(report.residual_rel == 0.0); // floored denominator
}

TEST_CASE("identity preconditions") {
    auto mesh = make_mesh(DomainSpec{Disk{1.0}}, 8, 16);
    Solution unconverged = zero_solution(mesh, 2.0);
    unconverged.convergence.converged = false;
    CHECK_THROWS_AS(identity_sides(unconverged, radial_field(), Constant{1.0}),
                    std::invalid_argument);
    // Sector field on a disk solution: not evaluable on the closure.
    CHECK_THROWS_AS(identity_sides(zero_solution(mesh, 2.0), sector_field(), Constant{1.0}),
                    InvalidPairingError);
}

TEST_CASE("identity is linear in the field") {
    const Solution sol =
        solve(make_mesh(DomainSpec{AnnularSector{2.0, 0.3}}, 16, 32), 1.5, Constant{1.0});
    const IdentityReport base = identity_sides(sol, sector_field(), Constant{1.0});
    const IdentityReport doubled = identity_sides(sol, sector_field(2.0), Constant{1.0});
    CHECK(std::abs(doubled.lhs - 2.0 * base.lhs) <= 1e-12 * std::abs(base.lhs));
    CHECK(std::abs(doubled.rhs_total - 2.0 * base.rhs_total) <=
          1e-12 * std::abs(base.rhs_total));
}

TEST_CASE("radial field at p = 2 reduces to the classical identity") {
    // Classical planar form: (1/2) int_bnd |Du|^2 x.nu = 2 int F(u).
    const Solution sol = solve(make_mesh(DomainSpec{Disk{1.0}}, 32, 64), 2.0, Constant{1.0});
    const IdentityReport generic = identity_sides(sol, radial_field(), Constant{1.0});

    const Mesh& mesh = *sol.mesh;
    const double classical_lhs =
        0.5 * integrate_boundary(mesh, [&](const BoundaryEdge& be, Vec2 mid) {
            const Vec2 g = triangle_gradient(mesh, sol.nodal_values, be.parent_triangle);
            return dot(g, g) * dot(mid, be.normal);
        });
    const double classical_rhs =
        2.0 * integrate_domain(
                  mesh,
                  [&](int t, Vec2 point) {
                      return F_primitive(Constant{1.0},
                                         p1_value(mesh, sol.nodal_values, t, point));
                  },
                  QuadRule::EdgeMidpoints);

    CHECK(std::abs(generic.lhs - classical_lhs) <= 1e-12 * std::abs(classical_lhs));
    CHECK(std::abs(generic.rhs_total - classical_rhs) <= 1e-12 * std::abs(classical_rhs));
}

TEST_CASE("jacobian integrand is finite on zero-gradient patches") {
    // p < 2 with Du = 0 exercises the 0-convention for |Du|^(p-2) dv[Du].Du.
    const IdentityReport report = identity_sides(
        zero_solution(make_mesh(DomainSpec{AnnularSector{2.0, 0.3}}, 8, 16), 1.5),
        sector_field(), Constant{1.0});
    CHECK(std::isfinite(report.rhs_jacobian));
    CHECK(report.rhs_jacobian == 0.0);
}

TEST_CASE("sector identity residual decreases under refinement") {
    const DomainSpec sector{AnnularSector{2.0, 0.3}};
    const int levels[] = {8, 16, 32};
    const auto rows =
        convergence_study(sector, 1.5, Constant{1.0}, sector_field(), levels);
    REQUIRE(rows.size() == 3);
    CHECK(rows[0].residual_rel > rows[1].residual_rel);
    CHECK(rows[1].residual_rel > rows[2].residual_rel);
    CHECK_FALSE(rows[0].observed_order.has_value());
    REQUIRE(rows[1].observed_order.has_value());
    REQUIRE(rows[2].observed_order.has_value());
    MESSAGE("sector residual_rel: ", rows[0].residual_rel, " -> ", rows[1].residual_rel,
            " -> ", rows[2].residual_rel);
}

TEST_CASE("annulus identity residual reaches 2e-2 at level 64") {
    const int levels[] = {16, 32, 64};
    const auto rows = convergence_study(DomainSpec{Annulus{0.5, 1.5}}, 2.0,
                                        Constant{1.0}, radial_field(), levels);
    CHECK(rows.back().residual_rel <= 2e-2);
    for (std::size_t i = 1; i < rows.size(); ++i)
        CHECK(rows[i].residual_rel < rows[i - 1].residual_rel);
}

TEST_CASE("convergence study argument errors") {
    const DomainSpec disk{Disk{1.0}};
    const int too_few[] = {16};
    CHECK_THROWS_AS(
        convergence_study(disk, 2.0, Constant{1.0}, radial_field(), too_few),
        std::invalid_argument);
    const int not_increasing[] = {16, 16, 32};
    CHECK_THROWS_AS(
        convergence_study(disk, 2.0, Constant{1.0}, radial_field(), not_increasing),
        std::invalid_argument);
}

TEST_CASE("corollary bound on the sector solution") {
    const AnnularSector sector{2.0, 0.3};
    const Solution sol =
        solve(make_mesh(DomainSpec{sector}, 32, 64), 1.5, Constant{1.0});
    const CorollaryReport report = corollary_bound(sol, sector, Constant{1.0});

    // coefficient = 1 - 2/p + (1 + 1/p) s/(1-s) = 8/21 for p = 1.5, s = 0.3.
    CHECK(report.gradient_coefficient == doctest::Approx(8.0 / 21.0).epsilon(1e-14));
    const double tol =
        1e-2 * (std::abs(report.gradient_term) + std::abs(report.divF_term));
    CHECK(report.bound_value >= -tol);

    // Trivial solution: all terms vanish.
    const CorollaryReport trivial = corollary_bound(
        zero_solution(make_mesh(DomainSpec{sector}, 8, 16), 1.5), sector, Constant{1.0});
    CHECK(trivial.gradient_term == 0.0);
    CHECK(trivial.divF_term == 0.0);
    CHECK(trivial.bound_value == 0.0);

    // Inconsistent sector parameters are rejected.
    CHECK_THROWS_AS(corollary_bound(sol, AnnularSector{2.0, 0.2}, Constant{1.0}),
                    InvalidDomainError);
    const Solution disk_sol =
        zero_solution(make_mesh(DomainSpec{Disk{1.0}}, 8, 16), 1.5);
    CHECK_THROWS_AS(corollary_bound(disk_sol, sector, Constant{1.0}), InvalidDomainError);
}
