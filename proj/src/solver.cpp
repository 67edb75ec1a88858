#include "plap/solver.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "plap/criteria.hpp"
#include "plap/errors.hpp"
#include "plap/linalg.hpp"

namespace plap {

Vec2 triangle_gradient(const Mesh& mesh, std::span<const double> nodal_values, int t) {
    const auto& tri = mesh.triangles[static_cast<std::size_t>(t)];
    const auto c = mesh.corners(t);
    const double inv_two_area = 1.0 / (2.0 * mesh.signed_area(t));
    // Barycentric gradients: grad lambda_i = rot90(opposite edge) / (2 area).
    const Vec2 g0 = inv_two_area * rot90(c[2] - c[1]);
    const Vec2 g1 = inv_two_area * rot90(c[0] - c[2]);
    const Vec2 g2 = inv_two_area * rot90(c[1] - c[0]);
    const double u0 = nodal_values[static_cast<std::size_t>(tri[0])];
    const double u1 = nodal_values[static_cast<std::size_t>(tri[1])];
    const double u2 = nodal_values[static_cast<std::size_t>(tri[2])];
    return u0 * g0 + u1 * g1 + u2 * g2;
}

double p1_value(const Mesh& mesh, std::span<const double> nodal_values, int t,
                Vec2 point) {
    const auto& tri = mesh.triangles[static_cast<std::size_t>(t)];
    const auto c = mesh.corners(t);
    const double inv_two_area = 1.0 / (2.0 * mesh.signed_area(t));
    const double l0 = cross(c[1] - point, c[2] - point) * inv_two_area;
    const double l1 = cross(c[2] - point, c[0] - point) * inv_two_area;
    const double l2 = cross(c[0] - point, c[1] - point) * inv_two_area;
    return l0 * nodal_values[static_cast<std::size_t>(tri[0])] +
           l1 * nodal_values[static_cast<std::size_t>(tri[1])] +
           l2 * nodal_values[static_cast<std::size_t>(tri[2])];
}

namespace {

constexpr int kLocalEdges[3][2] = {{0, 1}, {1, 2}, {2, 0}};

/// Per-solve cache: interior dof numbering, triangle geometry, CSR pattern.
struct FemWorkspace {
    const Mesh& mesh;
    std::vector<int> dof_of_vertex; // -1 on boundary vertices
    std::vector<int> vertex_of_dof;
    std::vector<double> area;
    std::vector<std::array<Vec2, 3>> dphi;
    CsrMatrix matrix;
    int n_dof = 0;

    explicit FemWorkspace(const Mesh& m) : mesh(m) {
        const std::size_t nv = m.vertices.size();
        dof_of_vertex.assign(nv, -1);
        for (std::size_t v = 0; v < nv; ++v) {
            if (!m.is_boundary_vertex[v]) {
                dof_of_vertex[v] = n_dof++;
                vertex_of_dof.push_back(static_cast<int>(v));
            }
        }
        area.resize(static_cast<std::size_t>(m.n_triangles()));
        dphi.resize(static_cast<std::size_t>(m.n_triangles()));
        for (int t = 0; t < m.n_triangles(); ++t) {
            const auto c = m.corners(t);
            area[static_cast<std::size_t>(t)] = m.signed_area(t);
            const double inv_two_area = 1.0 / (2.0 * area[static_cast<std::size_t>(t)]);
            dphi[static_cast<std::size_t>(t)] = {inv_two_area * rot90(c[2] - c[1]),
                                                 inv_two_area * rot90(c[0] - c[2]),
                                                 inv_two_area * rot90(c[1] - c[0])};
        }
        std::vector<std::vector<int>> adjacency(static_cast<std::size_t>(n_dof));
        for (const auto& tri : m.triangles) {
            for (int i = 0; i < 3; ++i) {
                const int di = dof_of_vertex[static_cast<std::size_t>(tri[i])];
                if (di < 0) continue;
                for (int j = 0; j < 3; ++j) {
                    const int dj = dof_of_vertex[static_cast<std::size_t>(tri[j])];
                    if (dj >= 0) adjacency[static_cast<std::size_t>(di)].push_back(dj);
                }
            }
        }
        matrix = CsrMatrix::from_adjacency(adjacency);
    }
};

double regularized_density(double grad_sq, double eps, double p) {
    return std::pow(grad_sq + eps * eps, 0.5 * p);
}

/// Weight a(g) = (|g|^2 + eps^2)^((p-2)/2).
double weight(double grad_sq, double eps, double p) {
    return std::pow(grad_sq + eps * eps, 0.5 * (p - 2.0));
}

/// Interior weak residual of the regularized operator, indexed by dof:
/// R_i = integral a(Du) Du . Dphi_i - integral f(u) phi_i.
void assemble_residual(const FemWorkspace& ws, std::span<const double> u, double p,
                       double eps, const NonlinearitySpec& f,
                       std::vector<double>& residual) {
    residual.assign(static_cast<std::size_t>(ws.n_dof), 0.0);
    const Mesh& mesh = ws.mesh;
    for (int t = 0; t < mesh.n_triangles(); ++t) {
        const auto& tri = mesh.triangles[static_cast<std::size_t>(t)];
        const auto& dphi = ws.dphi[static_cast<std::size_t>(t)];
        const double area = ws.area[static_cast<std::size_t>(t)];
        const Vec2 g = u[static_cast<std::size_t>(tri[0])] * dphi[0] +
                       u[static_cast<std::size_t>(tri[1])] * dphi[1] +
                       u[static_cast<std::size_t>(tri[2])] * dphi[2];
        const double a = weight(dot(g, g), eps, p);
        for (int i = 0; i < 3; ++i) {
            const int d = ws.dof_of_vertex[static_cast<std::size_t>(tri[i])];
            if (d >= 0) residual[static_cast<std::size_t>(d)] += area * a * dot(g, dphi[i]);
        }
        for (const auto& e : kLocalEdges) {
            const int va = tri[e[0]];
            const int vb = tri[e[1]];
            const double um = 0.5 * (u[static_cast<std::size_t>(va)] +
                                     u[static_cast<std::size_t>(vb)]);
            const double load = (area / 3.0) * f_value(f, um) * 0.5;
            const int da = ws.dof_of_vertex[static_cast<std::size_t>(va)];
            const int db = ws.dof_of_vertex[static_cast<std::size_t>(vb)];
            if (da >= 0) residual[static_cast<std::size_t>(da)] -= load;
            if (db >= 0) residual[static_cast<std::size_t>(db)] -= load;
        }
    }
}

/// Newton matrix: stiffness linearization of the regularized flux minus the
/// f'(u) mass term (the latter vanishes for Constant, leaving an SPD system).
void assemble_jacobian(FemWorkspace& ws, std::span<const double> u, double p, double eps,
                       const NonlinearitySpec& f, bool include_mass) {
    ws.matrix.zero_values();
    const Mesh& mesh = ws.mesh;
    for (int t = 0; t < mesh.n_triangles(); ++t) {
        const auto& tri = mesh.triangles[static_cast<std::size_t>(t)];
        const auto& dphi = ws.dphi[static_cast<std::size_t>(t)];
        const double area = ws.area[static_cast<std::size_t>(t)];
        const Vec2 g = u[static_cast<std::size_t>(tri[0])] * dphi[0] +
                       u[static_cast<std::size_t>(tri[1])] * dphi[1] +
                       u[static_cast<std::size_t>(tri[2])] * dphi[2];
        const double t_sq = dot(g, g);
        const double a = weight(t_sq, eps, p);
        // d(a(g) g)/dg = a I + (p-2) a / (t + eps^2) g x g, SPD for p > 1.
        const double coeff = (p - 2.0) * a / (t_sq + eps * eps);
        for (int i = 0; i < 3; ++i) {
            const int di = ws.dof_of_vertex[static_cast<std::size_t>(tri[i])];
            if (di < 0) continue;
            for (int j = 0; j < 3; ++j) {
                const int dj = ws.dof_of_vertex[static_cast<std::size_t>(tri[j])];
                if (dj < 0) continue;
                const double val =
                    area * (a * dot(dphi[i], dphi[j]) +
                            coeff * dot(g, dphi[i]) * dot(g, dphi[j]));
                ws.matrix.add(di, dj, val);
            }
        }
        if (!include_mass) continue;
        for (const auto& e : kLocalEdges) {
            const int va = tri[e[0]];
            const int vb = tri[e[1]];
            const double um = 0.5 * (u[static_cast<std::size_t>(va)] +
                                     u[static_cast<std::size_t>(vb)]);
            const double w = (area / 3.0) * f_prime(f, um) * 0.25;
            const int da = ws.dof_of_vertex[static_cast<std::size_t>(va)];
            const int db = ws.dof_of_vertex[static_cast<std::size_t>(vb)];
            if (da >= 0) ws.matrix.add(da, da, -w);
            if (da >= 0 && db >= 0) {
                ws.matrix.add(da, db, -w);
                ws.matrix.add(db, da, -w);
            }
            if (db >= 0) ws.matrix.add(db, db, -w);
        }
    }
}

double regularized_energy(const FemWorkspace& ws, std::span<const double> u, double p,
                          double eps, const NonlinearitySpec& f) {
    const Mesh& mesh = ws.mesh;
    double grad_part = 0.0;
    double load_part = 0.0;
    for (int t = 0; t < mesh.n_triangles(); ++t) {
        const auto& tri = mesh.triangles[static_cast<std::size_t>(t)];
        const auto& dphi = ws.dphi[static_cast<std::size_t>(t)];
        const double area = ws.area[static_cast<std::size_t>(t)];
        const Vec2 g = u[static_cast<std::size_t>(tri[0])] * dphi[0] +
                       u[static_cast<std::size_t>(tri[1])] * dphi[1] +
                       u[static_cast<std::size_t>(tri[2])] * dphi[2];
        grad_part += area * regularized_density(dot(g, g), eps, p) / p;
        for (const auto& e : kLocalEdges) {
            const double um = 0.5 * (u[static_cast<std::size_t>(tri[e[0]])] +
                                     u[static_cast<std::size_t>(tri[e[1]])]);
            load_part += (area / 3.0) * F_primitive(f, um);
        }
    }
    return grad_part - load_part;
}

double norm2(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

int linear_iter_cap(int n) { return std::max(2000, 6 * n); }

/// Damped Newton from the given iterate. line_search_on_energy selects the
/// Constant-route globalization (energy descent, CG); otherwise the merit is
/// the residual norm and systems go through MINRES.
ConvergenceInfo newton_loop(FemWorkspace& ws, std::vector<double>& nodal, double p,
                            const NonlinearitySpec& f, const SolverConfig& config,
                            bool line_search_on_energy) {
    ConvergenceInfo info;
    const int n = ws.n_dof;
    std::vector<double> residual, delta(static_cast<std::size_t>(n)), neg_r;
    std::vector<double> trial(nodal.size());

    assemble_residual(ws, nodal, p, config.eps, f, residual);
    double res_norm = norm2(residual);

    for (int iter = 0; iter < config.max_iter; ++iter) {
        info.iterations = iter;
        info.final_residual_norm = res_norm;
        info.energy_history.push_back(regularized_energy(ws, nodal, p, config.eps, f));
        if (res_norm <= config.tol) {
            info.converged = true;
            return info;
        }

        assemble_jacobian(ws, nodal, p, config.eps, f, !line_search_on_energy);
        neg_r.assign(residual.begin(), residual.end());
        for (double& x : neg_r) x = -x;
        std::fill(delta.begin(), delta.end(), 0.0);
        const KrylovResult lin =
            line_search_on_energy
                ? cg_solve(ws.matrix, neg_r, delta, 1e-10, linear_iter_cap(n))
                : minres_solve(ws.matrix, neg_r, delta, 1e-10, linear_iter_cap(n));
        if (!lin.converged && lin.relative_residual > 1e-6)
            throw ConvergenceFailureError("solve: inner linear solver stalled", res_norm);

        const double merit =
            line_search_on_energy ? info.energy_history.back() : res_norm;
        double step = 1.0;
        bool accepted = false;
        for (int halving = 0; halving <= 40; ++halving) {
            trial = nodal;
            for (int d = 0; d < n; ++d)
                trial[static_cast<std::size_t>(
                    ws.vertex_of_dof[static_cast<std::size_t>(d)])] +=
                    step * delta[static_cast<std::size_t>(d)];
            if (line_search_on_energy) {
                const double e_trial = regularized_energy(ws, trial, p, config.eps, f);
                if (e_trial < merit) {
                    accepted = true;
                    break;
                }
                // Rounding-level plateau: accept the full Newton step so the
                // final iterates are not rejected on a flat energy.
                if (halving == 0 && e_trial <= merit + 1e-14 * (1.0 + std::abs(merit))) {
                    accepted = true;
                    break;
                }
            } else {
                assemble_residual(ws, trial, p, config.eps, f, residual);
                if (norm2(residual) < merit) {
                    accepted = true;
                    break;
                }
            }
            step *= 0.5;
        }
        if (!accepted)
            throw ConvergenceFailureError("solve: line search found no decrease",
                                          res_norm);
        nodal = trial;
        assemble_residual(ws, nodal, p, config.eps, f, residual);
        res_norm = norm2(residual);
    }
    info.iterations = config.max_iter;
    info.final_residual_norm = res_norm;
    if (res_norm <= config.tol) {
        info.converged = true;
        info.energy_history.push_back(regularized_energy(ws, nodal, p, config.eps, f));
        return info;
    }
    throw ConvergenceFailureError("solve: Newton did not reach the residual tolerance",
                                  res_norm);
}

double integral_abs_pow_q(const FemWorkspace& ws, std::span<const double> u, double q) {
    double s = 0.0;
    for (int t = 0; t < ws.mesh.n_triangles(); ++t) {
        const auto& tri = ws.mesh.triangles[static_cast<std::size_t>(t)];
        const double area = ws.area[static_cast<std::size_t>(t)];
        for (const auto& e : kLocalEdges) {
            const double um = 0.5 * (u[static_cast<std::size_t>(tri[e[0]])] +
                                     u[static_cast<std::size_t>(tri[e[1]])]);
            s += (area / 3.0) * std::pow(std::abs(um), q);
        }
    }
    return s;
}

double integral_grad_pow_p(const FemWorkspace& ws, std::span<const double> u, double p) {
    double s = 0.0;
    for (int t = 0; t < ws.mesh.n_triangles(); ++t) {
        const auto& tri = ws.mesh.triangles[static_cast<std::size_t>(t)];
        const auto& dphi = ws.dphi[static_cast<std::size_t>(t)];
        const Vec2 g = u[static_cast<std::size_t>(tri[0])] * dphi[0] +
                       u[static_cast<std::size_t>(tri[1])] * dphi[1] +
                       u[static_cast<std::size_t>(tri[2])] * dphi[2];
        s += ws.area[static_cast<std::size_t>(t)] * std::pow(dot(g, g), 0.5 * p);
    }
    return s;
}

/// Positive distance-like initial bump for the power route.
std::vector<double> initial_bump(const Mesh& mesh) {
    std::vector<double> nodal(mesh.vertices.size(), 0.0);
    for (std::size_t v = 0; v < mesh.vertices.size(); ++v) {
        if (mesh.is_boundary_vertex[v]) continue;
        const Vec2 pt = mesh.vertices[v];
        const double value = std::visit(
            [&](const auto& d) -> double {
                using T = std::decay_t<decltype(d)>;
                const double rho = std::hypot(pt.x, pt.y);
                if constexpr (std::is_same_v<T, AnnularSector>) {
                    const double theta = std::atan2(pt.y, pt.x);
                    return std::min({d.s - std::abs(rho - 1.0),
                                     rho * std::sin(d.alpha - theta),
                                     rho * std::sin(d.alpha + theta)});
                } else if constexpr (std::is_same_v<T, Annulus>) {
                    return std::min(rho - d.r_inner, d.r_outer - rho);
                } else {
                    return d.radius - rho;
                }
            },
            mesh.provenance.domain);
        nodal[v] = std::max(value, 0.0);
    }
    return nodal;
}

void normalize_constraint(const FemWorkspace& ws, std::vector<double>& nodal, double q) {
    const double mass = integral_abs_pow_q(ws, nodal, q);
    if (!(mass > 0.0))
        throw ConvergenceFailureError("solve: power iterate collapsed to zero", 0.0);
    const double scale = std::pow(mass, -1.0 / q);
    for (double& x : nodal) x *= scale;
}

/// Gradient-energy descent on the constraint manifold {integral |w|^q = 1}.
void constrained_descent(FemWorkspace& ws, std::vector<double>& nodal, double p,
                         double q, double eps) {
    const int n = ws.n_dof;
    const NonlinearitySpec no_load = Constant{0.0};
    std::vector<double> grad(static_cast<std::size_t>(n));
    std::vector<double> constraint_grad(static_cast<std::size_t>(n));
    std::vector<double> direction(static_cast<std::size_t>(n));
    std::vector<double> trial(nodal.size());

    normalize_constraint(ws, nodal, q);
    double e_current = regularized_energy(ws, nodal, p, eps, no_load);

    const int max_descent = 400;
    for (int k = 0; k < max_descent; ++k) {
        // Energy gradient (the residual with zero load is exactly
        // integral a(Dw) Dw . Dphi_i, i.e. (1/p) of dE).
        assemble_residual(ws, nodal, p, eps, no_load, grad);
        // Constraint gradient q integral |w|^(q-2) w phi_i.
        {
            std::fill(constraint_grad.begin(), constraint_grad.end(), 0.0);
            const Mesh& mesh = ws.mesh;
            for (int t = 0; t < mesh.n_triangles(); ++t) {
                const auto& tri = mesh.triangles[static_cast<std::size_t>(t)];
                const double area = ws.area[static_cast<std::size_t>(t)];
                for (const auto& e : kLocalEdges) {
                    const int va = tri[e[0]];
                    const int vb = tri[e[1]];
                    const double um = 0.5 * (nodal[static_cast<std::size_t>(va)] +
                                             nodal[static_cast<std::size_t>(vb)]);
                    const double fm = um == 0.0
                                          ? 0.0
                                          : q * std::pow(std::abs(um), q - 2.0) * um;
                    const double contribution = (area / 3.0) * fm * 0.5;
                    const int da = ws.dof_of_vertex[static_cast<std::size_t>(va)];
                    const int db = ws.dof_of_vertex[static_cast<std::size_t>(vb)];
                    if (da >= 0) constraint_grad[static_cast<std::size_t>(da)] += contribution;
                    if (db >= 0) constraint_grad[static_cast<std::size_t>(db)] += contribution;
                }
            }
        }
        double gn = 0.0, nn = 0.0;
        for (int d = 0; d < n; ++d) {
            gn += grad[static_cast<std::size_t>(d)] * constraint_grad[static_cast<std::size_t>(d)];
            nn += constraint_grad[static_cast<std::size_t>(d)] *
                  constraint_grad[static_cast<std::size_t>(d)];
        }
        const double lambda = nn > 0.0 ? gn / nn : 0.0;
        for (int d = 0; d < n; ++d)
            grad[static_cast<std::size_t>(d)] -=
                lambda * constraint_grad[static_cast<std::size_t>(d)];
        if (norm2(grad) <= 1e-12 * (1.0 + std::abs(e_current))) break;

        assemble_jacobian(ws, nodal, p, eps, no_load, false);
        std::fill(direction.begin(), direction.end(), 0.0);
        cg_solve(ws.matrix, grad, direction, 1e-8, linear_iter_cap(n));

        double step = 1.0;
        bool accepted = false;
        for (int halving = 0; halving <= 30; ++halving) {
            trial = nodal;
            for (int d = 0; d < n; ++d)
                trial[static_cast<std::size_t>(
                    ws.vertex_of_dof[static_cast<std::size_t>(d)])] -=
                    step * direction[static_cast<std::size_t>(d)];
            normalize_constraint(ws, trial, q);
            const double e_trial = regularized_energy(ws, trial, p, eps, no_load);
            if (e_trial < e_current) {
                nodal = trial;
                e_current = e_trial;
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) break; // at the manifold minimum to rounding accuracy
    }
}

} // namespace

Solution solve(std::shared_ptr<const Mesh> mesh, double p,
               const NonlinearitySpec& nonlinearity, const SolverConfig& config) {
    if (!mesh) throw std::invalid_argument("solve: mesh must not be null");
    if (!(p > 1.0)) throw std::invalid_argument("solve: p must be > 1");
    if (!(config.eps > 0.0)) throw std::invalid_argument("solve: eps must be > 0");
    if (!(config.tol > 0.0)) throw std::invalid_argument("solve: tol must be > 0");
    if (config.max_iter < 1) throw std::invalid_argument("solve: max_iter must be >= 1");

    const auto* power = std::get_if<PowerLaw>(&nonlinearity);
    if (power) {
        if (!(power->q > p))
            throw std::invalid_argument("solve: power nonlinearity needs q > p");
        if (p < 2.0 && power->q >= critical_exponent(p, 2))
            throw RefusedRegimeError(
                "solve: refused supercritical power target q >= 2p/(2-p)");
    }

    FemWorkspace ws(*mesh);
    if (ws.n_dof == 0)
        throw std::invalid_argument("solve: mesh has no interior vertices");

    Solution solution;
    solution.mesh = std::move(mesh);
    solution.p = p;
    solution.regularization_eps = config.eps;
    solution.nodal_values.assign(ws.mesh.vertices.size(), 0.0);

    if (!power) {
        solution.convergence =
            newton_loop(ws, solution.nodal_values, p, nonlinearity, config, true);
        return solution;
    }

    const double q = power->q;
    solution.nodal_values = initial_bump(ws.mesh);
    constrained_descent(ws, solution.nodal_values, p, q, config.eps);

    // Rescale the constrained minimizer into a solution of the equation:
    // with mu = integral |Dw|^p on {integral |w|^q = 1}, u = mu^(1/(q-p)) w.
    const double mu = integral_grad_pow_p(ws, solution.nodal_values, p) /
                      integral_abs_pow_q(ws, solution.nodal_values, q);
    if (!(mu > 0.0))
        throw ConvergenceFailureError("solve: degenerate power multiplier", mu);
    const double scale = std::pow(mu, 1.0 / (q - p));
    for (double& x : solution.nodal_values) x *= scale;

    solution.convergence =
        newton_loop(ws, solution.nodal_values, p, nonlinearity, config, false);
    return solution;
}

double energy(const Solution& solution, const NonlinearitySpec& nonlinearity) {
    const Mesh& mesh = *solution.mesh;
    double grad_part = 0.0;
    double f_part = 0.0;
    for (int t = 0; t < mesh.n_triangles(); ++t) {
        const auto& tri = mesh.triangles[static_cast<std::size_t>(t)];
        const double area = mesh.signed_area(t);
        const Vec2 g = triangle_gradient(mesh, solution.nodal_values, t);
        grad_part += area * std::pow(dot(g, g), 0.5 * solution.p) / solution.p;
        for (const auto& e : kLocalEdges) {
            const double um =
                0.5 * (solution.nodal_values[static_cast<std::size_t>(tri[e[0]])] +
                       solution.nodal_values[static_cast<std::size_t>(tri[e[1]])]);
            f_part += (area / 3.0) * F_primitive(nonlinearity, um);
        }
    }
    return grad_part - f_part;
}

WeakPowerIdentity weak_power_identity(const Solution& solution,
                                      const NonlinearitySpec& nonlinearity) {
    if (!solution.convergence.converged)
        throw std::invalid_argument("weak_power_identity: solution is not converged");
    const Mesh& mesh = *solution.mesh;
    WeakPowerIdentity out;
    for (int t = 0; t < mesh.n_triangles(); ++t) {
        const auto& tri = mesh.triangles[static_cast<std::size_t>(t)];
        const double area = mesh.signed_area(t);
        const Vec2 g = triangle_gradient(mesh, solution.nodal_values, t);
        out.lhs += area * std::pow(dot(g, g), 0.5 * solution.p);
        for (const auto& e : kLocalEdges) {
            const double um =
                0.5 * (solution.nodal_values[static_cast<std::size_t>(tri[e[0]])] +
                       solution.nodal_values[static_cast<std::size_t>(tri[e[1]])]);
            out.rhs += (area / 3.0) * um * f_value(nonlinearity, um);
        }
    }
    const double denom = std::max(out.lhs, out.rhs);
    out.rel_gap = denom == 0.0 ? 0.0 : std::abs(out.lhs - out.rhs) / denom;
    return out;
}

} // namespace plap
