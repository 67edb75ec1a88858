#ifndef PLAP_GEOMETRY_HPP
#define PLAP_GEOMETRY_HPP

#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace plap {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }
/// Counter-clockwise quarter turn.
inline Vec2 rot90(Vec2 a) { return {-a.y, a.x}; }

/// Annular sector {(rho cos t, rho sin t) : |t| < alpha, |rho - 1| < s}.
struct AnnularSector {
    double alpha = 0.0; // half opening angle, 0 < alpha < pi
    double s = 0.0;     // half width, 0 < s < 1
};

struct Annulus {
    double r_inner = 0.0;
    double r_outer = 0.0;
};

struct Disk {
    double radius = 0.0;
};

using DomainSpec = std::variant<AnnularSector, Annulus, Disk>;

/// Throws std::invalid_argument when the domain violates its invariants.
void validate(const DomainSpec& domain);

double exact_area(const DomainSpec& domain);
std::string domain_name(const DomainSpec& domain);

/// True iff the point lies in the open domain.
bool contains(const DomainSpec& domain, Vec2 point);

struct PolarPoint {
    double rho;
    double theta; // in (-pi, pi]
};

/// Throws UndefinedAngleError at the origin.
PolarPoint polar_coords(Vec2 point);

enum class EdgeKind : std::uint8_t { OuterArc, InnerArc, StraightSide, Other };

const char* to_string(EdgeKind kind);

struct BoundaryEdge {
    int a = -1;              // endpoint vertex indices, domain on the left of a->b
    int b = -1;
    Vec2 normal;             // unit outward normal
    int parent_triangle = -1;
    double length = 0.0;
    EdgeKind kind = EdgeKind::Other;
};

struct MeshProvenance {
    DomainSpec domain;
    int n_radial = 0;
    int n_angular = 0;
};

/// Triangulation of a DomainSpec. All triangles are counter-clockwise;
/// boundary vertices of the generating grid sit exactly on the bounding
/// circles and rays, so arcs are chord polygons through exact circle points.
struct Mesh {
    std::vector<Vec2> vertices;
    std::vector<std::array<int, 3>> triangles;
    std::vector<BoundaryEdge> boundary_edges;
    std::vector<std::uint8_t> is_boundary_vertex;
    MeshProvenance provenance;
    int center_vertex = -1; // disk fan center, never a polar evaluation point

    std::array<Vec2, 3> corners(int t) const {
        const auto& tri = triangles[static_cast<std::size_t>(t)];
        return {vertices[static_cast<std::size_t>(tri[0])],
                vertices[static_cast<std::size_t>(tri[1])],
                vertices[static_cast<std::size_t>(tri[2])]};
    }
    double signed_area(int t) const {
        auto c = corners(t);
        return 0.5 * cross(c[1] - c[0], c[2] - c[0]);
    }
    Vec2 centroid(int t) const {
        auto c = corners(t);
        return (1.0 / 3.0) * (c[0] + c[1] + c[2]);
    }
    double total_area() const;
    double max_edge_length() const;
    int n_vertices() const { return static_cast<int>(vertices.size()); }
    int n_triangles() const { return static_cast<int>(triangles.size()); }
};

/// Structured polar mesh: non-periodic grid on sectors, periodic grid on
/// annuli, periodic grid plus a center fan on disks. Each grid cell is split
/// into two triangles along a fixed diagonal.
///
/// Periodic domains (annulus, disk) need n_angular >= 3 to close the loop.
Mesh build_mesh(const DomainSpec& domain, int n_radial, int n_angular);

/// Consistency audit used by the tests: positive areas, each boundary edge in
/// exactly one triangle, interior edges in exactly two, unit outward normals,
/// boundary edges forming closed loops. Throws std::logic_error on violation.
void validate_mesh(const Mesh& mesh);

} // namespace plap

#endif
