#ifndef PLAP_SOLVER_HPP
#define PLAP_SOLVER_HPP

#include <memory>
#include <span>
#include <vector>

#include "plap/geometry.hpp"
#include "plap/nonlinearity.hpp"

namespace plap {

struct SolverConfig {
    double eps = 1e-6;   // gradient regularization (|Du|^2 + eps^2)^((p-2)/2)
    double tol = 1e-10;  // Euclidean norm of the interior weak residual
    int max_iter = 100;  // Newton iterations
};

struct ConvergenceInfo {
    int iterations = 0;
    double final_residual_norm = 0.0;
    bool converged = false;
    /// Regularized energy at each Newton iterate; the line search makes this
    /// non-increasing for the Constant nonlinearity.
    std::vector<double> energy_history;
};

/// Piecewise-linear discrete solution. nodal_values has one entry per mesh
/// vertex and vanishes exactly on boundary vertices; the per-triangle
/// constant gradient defines Du.
struct Solution {
    std::shared_ptr<const Mesh> mesh;
    std::vector<double> nodal_values;
    double p = 2.0;
    double regularization_eps = 1e-6;
    ConvergenceInfo convergence;
};

/// Constant gradient of the P1 interpolant on triangle t.
Vec2 triangle_gradient(const Mesh& mesh, std::span<const double> nodal_values, int t);

/// Value of the P1 interpolant at a point of triangle t (barycentric).
double p1_value(const Mesh& mesh, std::span<const double> nodal_values, int t,
                Vec2 point);

/// Solves div(|Du|^(p-2) Du) + f(u) = 0 with zero boundary values on the
/// given mesh.
///
/// Constant nonlinearity: damped Newton from u = 0 with backtracking on the
/// regularized energy; Newton systems are SPD and solved by Jacobi-scaled CG.
///
/// Power nonlinearity: requires p < q and, for p < 2, q below the critical
/// exponent 2p/(2-p) (supercritical targets are refused). Minimizes the
/// regularized gradient energy on the constraint set integral |w|^q = 1 by
/// preconditioned projected descent, rescales by the multiplier
/// mu = integral |Dw|^p (so u = mu^(1/(q-p)) w solves the equation), then
/// polishes with Newton; those systems are symmetric indefinite and use
/// MINRES with a residual-norm line search.
///
/// Throws ConvergenceFailureError (carrying the last residual norm) if the
/// tolerance is not reached within max_iter.
Solution solve(std::shared_ptr<const Mesh> mesh, double p,
               const NonlinearitySpec& nonlinearity, const SolverConfig& config = {});

/// Variational energy integral |Du|^p / p - integral F(u), unregularized,
/// with the centroid rule for the gradient term and the edge-midpoint rule
/// for F(u).
double energy(const Solution& solution, const NonlinearitySpec& nonlinearity);

struct WeakPowerIdentity {
    double lhs = 0.0;     // integral |Du|^p
    double rhs = 0.0;     // integral u f(u)
    double rel_gap = 0.0; // |lhs-rhs| / max(lhs, rhs), 0 when both vanish
};

/// Discrete check of integral u f(u) = integral |Du|^p for a converged
/// solution (u itself is an admissible test function).
WeakPowerIdentity weak_power_identity(const Solution& solution,
                                      const NonlinearitySpec& nonlinearity);

} // namespace plap

#endif
