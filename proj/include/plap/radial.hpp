#ifndef PLAP_RADIAL_HPP
#define PLAP_RADIAL_HPP

#include <vector>

#include "plap/geometry.hpp"
#include "plap/nonlinearity.hpp"

namespace plap {

/// Radial solution profile u(rho) with nodal derivatives, produced by the
/// shooting oracle. Evaluation between nodes is cubic Hermite.
struct RadialProfile {
    std::vector<double> rho; // strictly increasing abscissae
    std::vector<double> u;
    std::vector<double> du;
    double p = 2.0;
    NonlinearitySpec nonlinearity = Constant{1.0};

    double eval(double r) const;
    double eval_derivative(double r) const;
};

/// Independent oracle for radially symmetric domains: integrates the radial
/// reduction (rho |u'|^(p-2) u')' = -rho f(u) with classical RK4 on a uniform
/// grid of grid_size steps and shoots until |u| <= 1e-10 at the far boundary.
///
/// Disk: u'(0) = 0, shooting on the center value u(0).
/// Annulus: u(r_inner) = 0, shooting on the initial slope u'(r_inner).
/// Sector domains are rejected (InvalidDomainError); grid_size must be >= 16.
/// Throws OracleFailureError when no bisection bracket exists.
RadialProfile solve_radial(const DomainSpec& domain, double p,
                           const NonlinearitySpec& nonlinearity, int grid_size);

} // namespace plap

#endif
