#include "plap/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <unordered_map>

#include "plap/errors.hpp"

namespace plap {

namespace {

constexpr double kPi = std::numbers::pi;

void require(bool cond, const char* msg) {
    if (!cond) throw std::invalid_argument(msg);
}

} // namespace

void validate(const DomainSpec& domain) {
    std::visit(
        [](const auto& d) {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, AnnularSector>) {
                require(d.alpha > 0.0 && d.alpha < kPi,
                        "domain invariant: sector needs 0 < alpha < pi");
                require(d.s > 0.0 && d.s < 1.0,
                        "domain invariant: sector needs 0 < s < 1");
            } else if constexpr (std::is_same_v<T, Annulus>) {
                require(d.r_inner > 0.0 && d.r_inner < d.r_outer,
                        "domain invariant: annulus needs 0 < r_inner < r_outer");
            } else {
                require(d.radius > 0.0, "domain invariant: disk needs radius > 0");
            }
        },
        domain);
}

double exact_area(const DomainSpec& domain) {
    return std::visit(
        [](const auto& d) -> double {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, AnnularSector>) {
                return 4.0 * d.alpha * d.s;
            } else if constexpr (std::is_same_v<T, Annulus>) {
                return kPi * (d.r_outer * d.r_outer - d.r_inner * d.r_inner);
            } else {
                return kPi * d.radius * d.radius;
            }
        },
        domain);
}

std::string domain_name(const DomainSpec& domain) {
    return std::visit(
        [](const auto& d) -> std::string {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, AnnularSector>) return "sector";
            else if constexpr (std::is_same_v<T, Annulus>) return "annulus";
            else return "disk";
        },
        domain);
}

PolarPoint polar_coords(Vec2 point) {
    if (point.x == 0.0 && point.y == 0.0)
        throw UndefinedAngleError("polar angle undefined at the origin");
    return {std::hypot(point.x, point.y), std::atan2(point.y, point.x)};
}

bool contains(const DomainSpec& domain, Vec2 point) {
    const double rho = std::hypot(point.x, point.y);
    return std::visit(
        [&](const auto& d) -> bool {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, AnnularSector>) {
                if (std::abs(rho - 1.0) >= d.s) return false;
                const double theta = std::atan2(point.y, point.x); // rho > 0 here
                return std::abs(theta) < d.alpha;
            } else if constexpr (std::is_same_v<T, Annulus>) {
                return rho > d.r_inner && rho < d.r_outer;
            } else {
                return rho < d.radius;
            }
        },
        domain);
}

const char* to_string(EdgeKind kind) {
    switch (kind) {
        case EdgeKind::OuterArc: return "OuterArc";
        case EdgeKind::InnerArc: return "InnerArc";
        case EdgeKind::StraightSide: return "StraightSide";
        case EdgeKind::Other: return "Other";
    }
    return "Other";
}

double Mesh::total_area() const {
    double sum = 0.0;
    for (int t = 0; t < n_triangles(); ++t) sum += signed_area(t);
    return sum;
}

double Mesh::max_edge_length() const {
    double h = 0.0;
    for (const auto& tri : triangles) {
        for (int e = 0; e < 3; ++e) {
            const Vec2 d = vertices[static_cast<std::size_t>(tri[(e + 1) % 3])] -
                           vertices[static_cast<std::size_t>(tri[e])];
            h = std::max(h, norm(d));
        }
    }
    return h;
}

namespace {

struct GridBuild {
    std::vector<Vec2> vertices;
    std::vector<std::array<int, 3>> triangles;
};

// Split a quad cell (in grid orientation: i = radial, j = angular) into two
// ccw triangles along the fixed v00-v11 diagonal. The polar map preserves
// orientation, so ccw in (rho, theta) indices is ccw in the plane.
void emit_cell(GridBuild& g, int v00, int v10, int v11, int v01) {
    g.triangles.push_back({v00, v10, v11});
    g.triangles.push_back({v00, v11, v01});
}

GridBuild build_sector_grid(const AnnularSector& d, int nr, int nt) {
    GridBuild g;
    const double r0 = 1.0 - d.s;
    const double r1 = 1.0 + d.s;
    g.vertices.reserve(static_cast<std::size_t>((nr + 1) * (nt + 1)));
    for (int i = 0; i <= nr; ++i) {
        const double rho = (i == 0) ? r0 : (i == nr ? r1 : r0 + (r1 - r0) * i / nr);
        for (int j = 0; j <= nt; ++j) {
            const double theta =
                (j == 0) ? -d.alpha : (j == nt ? d.alpha : -d.alpha + 2.0 * d.alpha * j / nt);
            g.vertices.push_back({rho * std::cos(theta), rho * std::sin(theta)});
        }
    }
    auto vid = [nt](int i, int j) { return i * (nt + 1) + j; };
    for (int i = 0; i < nr; ++i)
        for (int j = 0; j < nt; ++j)
            emit_cell(g, vid(i, j), vid(i + 1, j), vid(i + 1, j + 1), vid(i, j + 1));
    return g;
}

GridBuild build_annulus_grid(double r0, double r1, int nr, int nt) {
    GridBuild g;
    g.vertices.reserve(static_cast<std::size_t>((nr + 1) * nt));
    for (int i = 0; i <= nr; ++i) {
        const double rho = (i == 0) ? r0 : (i == nr ? r1 : r0 + (r1 - r0) * i / nr);
        for (int j = 0; j < nt; ++j) {
            const double theta = 2.0 * kPi * j / nt;
            g.vertices.push_back({rho * std::cos(theta), rho * std::sin(theta)});
        }
    }
    auto vid = [nt](int i, int j) { return i * nt + (j % nt); };
    for (int i = 0; i < nr; ++i)
        for (int j = 0; j < nt; ++j)
            emit_cell(g, vid(i, j), vid(i + 1, j), vid(i + 1, j + 1), vid(i, j + 1));
    return g;
}

GridBuild build_disk_grid(double radius, int nr, int nt) {
    GridBuild g;
    g.vertices.reserve(static_cast<std::size_t>(1 + nr * nt));
    g.vertices.push_back({0.0, 0.0});
    for (int i = 1; i <= nr; ++i) {
        const double rho = (i == nr) ? radius : radius * i / nr;
        for (int j = 0; j < nt; ++j) {
            const double theta = 2.0 * kPi * j / nt;
            g.vertices.push_back({rho * std::cos(theta), rho * std::sin(theta)});
        }
    }
    auto vid = [nt](int i, int j) { return 1 + (i - 1) * nt + (j % nt); };
    for (int j = 0; j < nt; ++j) g.triangles.push_back({0, vid(1, j), vid(1, j + 1)});
    for (int i = 1; i < nr; ++i)
        for (int j = 0; j < nt; ++j)
            emit_cell(g, vid(i, j), vid(i + 1, j), vid(i + 1, j + 1), vid(i, j + 1));
    return g;
}

bool on_circle(Vec2 v, double r) {
    return std::abs(std::hypot(v.x, v.y) - r) <= 1e-9 * (1.0 + r);
}

bool on_ray(Vec2 v, double theta) {
    // Distance from the ray at angle theta; vertices lie exactly on it.
    return std::abs(v.x * std::sin(theta) - v.y * std::cos(theta)) <= 1e-9 * (1.0 + norm(v));
}

EdgeKind classify_edge(const DomainSpec& domain, Vec2 va, Vec2 vb) {
    return std::visit(
        [&](const auto& d) -> EdgeKind {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, AnnularSector>) {
                if (on_circle(va, 1.0 - d.s) && on_circle(vb, 1.0 - d.s))
                    return EdgeKind::InnerArc;
                if (on_circle(va, 1.0 + d.s) && on_circle(vb, 1.0 + d.s))
                    return EdgeKind::OuterArc;
                if ((on_ray(va, d.alpha) && on_ray(vb, d.alpha)) ||
                    (on_ray(va, -d.alpha) && on_ray(vb, -d.alpha)))
                    return EdgeKind::StraightSide;
                return EdgeKind::Other;
            } else if constexpr (std::is_same_v<T, Annulus>) {
                if (on_circle(va, d.r_inner) && on_circle(vb, d.r_inner))
                    return EdgeKind::InnerArc;
                if (on_circle(va, d.r_outer) && on_circle(vb, d.r_outer))
                    return EdgeKind::OuterArc;
                return EdgeKind::Other;
            } else {
                if (on_circle(va, d.radius) && on_circle(vb, d.radius))
                    return EdgeKind::OuterArc;
                return EdgeKind::Other;
            }
        },
        domain);
}

} // namespace

Mesh build_mesh(const DomainSpec& domain, int n_radial, int n_angular) {
    validate(domain);
    require(n_radial >= 1, "build_mesh: n_radial must be >= 1");
    require(n_angular >= 1, "build_mesh: n_angular must be >= 1");
    const bool periodic = !std::holds_alternative<AnnularSector>(domain);
    require(!periodic || n_angular >= 3,
            "build_mesh: periodic domains need n_angular >= 3");

    GridBuild g = std::visit(
        [&](const auto& d) {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, AnnularSector>)
                return build_sector_grid(d, n_radial, n_angular);
            else if constexpr (std::is_same_v<T, Annulus>)
                return build_annulus_grid(d.r_inner, d.r_outer, n_radial, n_angular);
            else
                return build_disk_grid(d.radius, n_radial, n_angular);
        },
        domain);

    Mesh mesh;
    mesh.vertices = std::move(g.vertices);
    mesh.triangles = std::move(g.triangles);
    mesh.provenance = {domain, n_radial, n_angular};
    if (std::holds_alternative<Disk>(domain)) mesh.center_vertex = 0;

    for (int t = 0; t < mesh.n_triangles(); ++t) {
        if (!(mesh.signed_area(t) > 0.0))
            throw std::logic_error("build_mesh: non-positive triangle area");
    }

    // Count undirected edge occurrences; occurrences == 1 means boundary.
    const std::size_t nv = mesh.vertices.size();
    std::unordered_map<std::uint64_t, int> edge_count;
    edge_count.reserve(mesh.triangles.size() * 3);
    auto key = [nv](int a, int b) {
        const auto lo = static_cast<std::uint64_t>(std::min(a, b));
        const auto hi = static_cast<std::uint64_t>(std::max(a, b));
        return lo * static_cast<std::uint64_t>(nv) + hi;
    };
    for (const auto& tri : mesh.triangles)
        for (int e = 0; e < 3; ++e) ++edge_count[key(tri[e], tri[(e + 1) % 3])];

    for (int t = 0; t < mesh.n_triangles(); ++t) {
        const auto& tri = mesh.triangles[static_cast<std::size_t>(t)];
        for (int e = 0; e < 3; ++e) {
            const int a = tri[e];
            const int b = tri[(e + 1) % 3];
            const int count = edge_count.at(key(a, b));
            if (count == 1) {
                const Vec2 va = mesh.vertices[static_cast<std::size_t>(a)];
                const Vec2 vb = mesh.vertices[static_cast<std::size_t>(b)];
                BoundaryEdge be;
                be.a = a;
                be.b = b;
                be.parent_triangle = t;
                be.length = norm(vb - va);
                // Triangles are ccw, so the interior lies left of a->b and the
                // outward normal is the right-hand perpendicular.
                be.normal = (1.0 / be.length) * Vec2{(vb - va).y, -(vb - va).x};
                be.kind = classify_edge(domain, va, vb);
                mesh.boundary_edges.push_back(be);
            } else if (count != 2) {
                throw std::logic_error("build_mesh: edge shared by more than two triangles");
            }
        }
    }

    mesh.is_boundary_vertex.assign(nv, 0);
    for (const auto& be : mesh.boundary_edges) {
        mesh.is_boundary_vertex[static_cast<std::size_t>(be.a)] = 1;
        mesh.is_boundary_vertex[static_cast<std::size_t>(be.b)] = 1;
    }
    return mesh;
}

void validate_mesh(const Mesh& mesh) {
    auto fail = [](const char* msg) { throw std::logic_error(msg); };

    for (int t = 0; t < mesh.n_triangles(); ++t)
        if (!(mesh.signed_area(t) > 0.0)) fail("validate_mesh: non-positive area");

    const std::size_t nv = mesh.vertices.size();
    std::unordered_map<std::uint64_t, int> edge_count;
    auto key = [nv](int a, int b) {
        const auto lo = static_cast<std::uint64_t>(std::min(a, b));
        const auto hi = static_cast<std::uint64_t>(std::max(a, b));
        return lo * static_cast<std::uint64_t>(nv) + hi;
    };
    for (const auto& tri : mesh.triangles)
        for (int e = 0; e < 3; ++e) ++edge_count[key(tri[e], tri[(e + 1) % 3])];
    for (const auto& [k, count] : edge_count) {
        (void)k;
        if (count != 1 && count != 2) fail("validate_mesh: bad edge multiplicity");
    }

    std::size_t n_single = 0;
    for (const auto& [k, count] : edge_count) {
        (void)k;
        if (count == 1) ++n_single;
    }
    if (n_single != mesh.boundary_edges.size())
        fail("validate_mesh: boundary edge list does not match mesh topology");

    std::vector<int> incidence(nv, 0);
    for (const auto& be : mesh.boundary_edges) {
        if (edge_count.at(key(be.a, be.b)) != 1)
            fail("validate_mesh: listed boundary edge is interior");
        if (std::abs(norm(be.normal) - 1.0) > 1e-12)
            fail("validate_mesh: boundary normal is not unit");
        const Vec2 mid = 0.5 * (mesh.vertices[static_cast<std::size_t>(be.a)] +
                                mesh.vertices[static_cast<std::size_t>(be.b)]);
        if (!(dot(be.normal, mesh.centroid(be.parent_triangle) - mid) < 0.0))
            fail("validate_mesh: boundary normal does not point outward");
        ++incidence[static_cast<std::size_t>(be.a)];
        ++incidence[static_cast<std::size_t>(be.b)];
    }
    for (std::size_t v = 0; v < nv; ++v) {
        if (incidence[v] != 0 && incidence[v] != 2)
            fail("validate_mesh: boundary edges do not form closed loops");
        const bool flagged = !mesh.is_boundary_vertex.empty() && mesh.is_boundary_vertex[v] != 0;
        if ((incidence[v] != 0) != flagged)
            fail("validate_mesh: boundary vertex flag mismatch");
    }
}

} // namespace plap
