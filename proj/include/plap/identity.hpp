#ifndef PLAP_IDENTITY_HPP
#define PLAP_IDENTITY_HPP

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "plap/fields.hpp"
#include "plap/geometry.hpp"
#include "plap/nonlinearity.hpp"
#include "plap/solver.hpp"

namespace plap {

enum class QuadRule {
    Centroid,      // one point per triangle; exact for per-triangle constants
    EdgeMidpoints, // three points per triangle; exact for quadratics
};

/// Sum over triangles of area-weighted integrand values. The integrand is
/// called with the triangle index and the quadrature point.
double integrate_domain(const Mesh& mesh,
                        const std::function<double(int, Vec2)>& integrand,
                        QuadRule rule);

/// Sum over boundary edges of length-weighted integrand values at edge
/// midpoints. Throws std::invalid_argument when the mesh has no boundary.
double integrate_boundary(const Mesh& mesh,
                          const std::function<double(const BoundaryEdge&, Vec2)>& integrand);

/// Both sides of the identity
///   (1 - 1/p) int_bnd |Du|^p v.nu = int |Du|^(p-2) dv[Du].Du
///                                 + int div v (F(u) - |Du|^p / p)
/// on a discrete solution. |Du| on a boundary edge is the parent triangle's
/// P1 gradient; the Jacobian-term integrand takes the value 0 where Du = 0
/// (the limit is O(|Du|^p)).
struct IdentityReport {
    double lhs = 0.0;
    double rhs_jacobian = 0.0;
    double rhs_divergence = 0.0;
    double rhs_total = 0.0;
    double residual_abs = 0.0;
    double residual_rel = 0.0; // floored denominator, see kResidualFloor
    int mesh_n_radial = 0;
    int mesh_n_angular = 0;
    double mesh_h = 0.0;
};

/// Denominator floor preventing 0/0 for the trivial solution.
inline constexpr double kResidualFloor = 1e-14;

IdentityReport identity_sides(const Solution& solution, const VectorFieldSpec& field,
                              const NonlinearitySpec& nonlinearity);

/// Terms of the sector inequality
///   0 <= [1 - 2/p + (1 + 1/p) s/(1-s)] int |Du|^p + int div v F(u)
/// evaluated with the sector field divergence. The domain argument must match
/// the mesh provenance (InvalidDomainError otherwise).
struct CorollaryReport {
    double gradient_coefficient = 0.0;
    double gradient_term = 0.0;
    double divF_term = 0.0;
    double bound_value = 0.0;
};

CorollaryReport corollary_bound(const Solution& solution, const AnnularSector& domain,
                                const NonlinearitySpec& nonlinearity);

struct ConvergenceRow {
    int level = 0;    // n_radial; n_angular = 2 * level
    double h = 0.0;   // max edge length
    double lhs = 0.0;
    double rhs_total = 0.0;
    double residual_rel = 0.0;
    std::optional<double> observed_order; // vs previous level
};

/// Solves on meshes (level, 2*level) for each level and reports how the
/// identity residual decays. Needs >= 3 strictly increasing levels;
/// observed_order = log(rr_coarse / rr_fine) / log(level_fine / level_coarse),
/// which reduces to log2 of the ratio under dyadic refinement.
std::vector<ConvergenceRow> convergence_study(const DomainSpec& domain, double p,
                                              const NonlinearitySpec& nonlinearity,
                                              const VectorFieldSpec& field,
                                              std::span<const int> levels,
                                              const SolverConfig& config = {});

} // namespace plap

#endif
