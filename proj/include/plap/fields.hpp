#ifndef PLAP_FIELDS_HPP
#define PLAP_FIELDS_HPP

#include <array>
#include <vector>

#include "plap/geometry.hpp"

namespace plap {

/// The two admissible test fields.
///
/// Sector: in polar coordinates, radial part (rho - 1) e_rho plus tangential
/// part rho * theta * e_theta. Evaluable for rho > 0 and theta in (-pi, pi),
/// which covers the closure of every annular sector with alpha < pi.
/// Radial: v(x) = x, evaluable everywhere.
enum class FieldKind { Sector, Radial };

struct VectorFieldSpec {
    FieldKind kind = FieldKind::Radial;
    double scale = 1.0; // fields scale linearly; used by the scaling checks
};

inline VectorFieldSpec sector_field(double scale = 1.0) {
    return {FieldKind::Sector, scale};
}
inline VectorFieldSpec radial_field(double scale = 1.0) {
    return {FieldKind::Radial, scale};
}

Vec2 eval_field(const VectorFieldSpec& spec, Vec2 point);

/// Sector: 3 - 1/rho. Radial: 2.
double divergence(const VectorFieldSpec& spec, Vec2 point);

/// Quadratic form of the field Jacobian, dv(point)[xi] . xi.
/// Sector: xi_N^2 + (2 - 1/rho) xi_T^2 with xi_N, xi_T the radial and
/// tangential components of xi at the point. Radial: |xi|^2.
double quad_form(const VectorFieldSpec& spec, Vec2 point, Vec2 xi);

/// Value, divergence and one quadratic-form evaluation in a single record.
struct FieldSample {
    Vec2 value;
    double divergence = 0.0;
    double quad_form = 0.0;
};

FieldSample sample_field(const VectorFieldSpec& spec, Vec2 point, Vec2 xi);

/// Central-difference self check of divergence() and quad_form() at one
/// point. quad_errors covers the direction set {(1,0), (0,1), (1,1)/sqrt 2}.
struct FdConsistency {
    double div_fd = 0.0; // trace of the central-difference Jacobian
    double div_error = 0.0;
    std::array<double, 3> quad_errors{};
    double max_error() const;
};

FdConsistency fd_consistency(const VectorFieldSpec& spec, Vec2 point, double h);

struct FluxSample {
    EdgeKind kind;    // InnerArc, OuterArc or StraightSide
    double rho;
    double theta;
    double flux;      // v . nu with the exact analytic normal
};

struct FluxAudit {
    double min_flux = 0.0;
    std::vector<FluxSample> samples;
};

/// Samples v . nu over the four boundary pieces of a sector with analytic
/// normals: radial on the arcs, rotated tangential on the straight sides.
/// Arc samples are strictly interior; side samples cover rho in [1-s, 1+s]
/// inclusive, where the endpoint flux is the one-sided limit of the side
/// branch (the corner itself has no single normal). n_samples is the total
/// budget, split evenly (rounded up) over the four pieces.
FluxAudit boundary_flux_audit(const AnnularSector& domain, int n_samples);

} // namespace plap

#endif
