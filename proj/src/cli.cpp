#include "plap/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <memory>
#include <numbers>
#include <optional>
#include <sstream>
#include <vector>

#include "plap/criteria.hpp"
#include "plap/errors.hpp"
#include "plap/fields.hpp"
#include "plap/identity.hpp"
#include "plap/io.hpp"
#include "plap/radial.hpp"
#include "plap/sampling.hpp"
#include "plap/solver.hpp"

namespace plap {

NonlinearitySpec parse_nonlinearity(const std::string& text) {
    const auto colon = text.find(':');
    const std::string grammar = "expected 'constant:<float>' or 'power:<float>'";
    if (colon == std::string::npos)
        throw ParseError("parse_nonlinearity: " + grammar + ", got '" + text + "'");
    const std::string head = text.substr(0, colon);
    const std::string tail = text.substr(colon + 1);
    double value = 0.0;
    std::size_t used = 0;
    try {
        value = std::stod(tail, &used);
    } catch (const std::exception&) {
        throw ParseError("parse_nonlinearity: bad number '" + tail + "', " + grammar);
    }
    if (used != tail.size())
        throw ParseError("parse_nonlinearity: bad number '" + tail + "', " + grammar);
    if (head == "constant") return Constant{value};
    if (head == "power") {
        if (!(value > 1.0))
            throw ParseError("parse_nonlinearity: power exponent must exceed 1");
        return PowerLaw{value};
    }
    throw ParseError("parse_nonlinearity: unknown kind '" + head + "', " + grammar);
}

namespace {

constexpr double kPi = std::numbers::pi;

// ---------------------------------------------------------------------------
// config file preprocessing: flat key=value lines become long flags unless the
// flag is already present; a `subcommand` key must match the invoked one.
// ---------------------------------------------------------------------------

std::vector<std::string> apply_config_file(const std::vector<std::string>& args) {
    std::vector<std::string> out;
    std::string config_path;
    for (std::size_t i = 0; i < args.size(); ++i) {
        const std::string& a = args[i];
        if (a == "--config") {
            if (i + 1 >= args.size()) throw ParseError("--config needs a file path");
            config_path = args[++i];
        } else if (a.rfind("--config=", 0) == 0) {
            config_path = a.substr(9);
        } else {
            out.push_back(a);
        }
    }
    if (config_path.empty()) return out;
    if (out.empty()) throw ParseError("--config requires a subcommand");

    std::ifstream in(config_path);
    if (!in) throw ParseError("cannot open config file '" + config_path + "'");

    auto has_flag = [&](const std::string& key) {
        const std::string flag = "--" + key;
        for (const auto& a : out)
            if (a == flag || a.rfind(flag + "=", 0) == 0) return true;
        return false;
    };

    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::size_t begin = line.find_first_not_of(" \t");
        if (begin == std::string::npos) continue;
        if (line[begin] == '#') continue;
        const auto eq = line.find('=', begin);
        if (eq == std::string::npos)
            throw ParseError("config line " + std::to_string(line_no) +
                             ": expected key=value");
        const std::string key = line.substr(begin, eq - begin);
        const std::string value = line.substr(eq + 1);
        if (key == "subcommand") {
            if (value != out.front())
                throw ParseError("config subcommand '" + value +
                                 "' does not match invoked subcommand '" + out.front() +
                                 "'");
            continue;
        }
        if (!has_flag(key)) {
            out.push_back("--" + key);
            out.push_back(value);
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// shared option bundles
// ---------------------------------------------------------------------------

struct DomainFlags {
    std::string domain = "sector";
    double alpha = 2.0;
    double s = 0.3;
    double r0 = 0.5;
    double r1 = 1.5;

    void attach(CLI::App* app) {
        app->add_option("--domain", domain, "sector | annulus | disk")
            ->check(CLI::IsMember({"sector", "annulus", "disk"}));
        app->add_option("--alpha", alpha, "sector half opening angle (0, pi)");
        app->add_option("--s", s, "sector half width (0, 1)");
        app->add_option("--r0", r0, "annulus inner radius");
        app->add_option("--r1", r1, "annulus outer radius; doubles as the disk radius");
    }
    DomainSpec spec() const {
        if (domain == "sector") return AnnularSector{alpha, s};
        if (domain == "annulus") return Annulus{r0, r1};
        return Disk{r1};
    }
    void echo(ConfigEcho& config) const {
        config.emplace_back("domain", domain);
        if (domain == "sector") {
            config.emplace_back("alpha", format_double(alpha));
            config.emplace_back("s", format_double(s));
        } else if (domain == "annulus") {
            config.emplace_back("r0", format_double(r0));
            config.emplace_back("r1", format_double(r1));
        } else {
            config.emplace_back("r1", format_double(r1));
        }
    }
};

struct SolveFlags {
    double p = 2.0;
    std::string f = "constant:1";
    int nr = 64;
    int nt = 128;
    double eps = 1e-6;
    double tol = 1e-10;

    void attach(CLI::App* app) {
        app->add_option("--p", p, "gradient growth exponent, p > 1");
        app->add_option("--f", f, "nonlinearity, constant:<c> | power:<q>");
        app->add_option("--nr", nr, "radial cells (default 64)");
        app->add_option("--nt", nt, "angular cells (default 128)");
        app->add_option("--eps", eps, "gradient regularization (default 1e-6)");
        app->add_option("--tol", tol, "residual tolerance (default 1e-10)");
    }
    SolverConfig config() const { return SolverConfig{eps, tol, 100}; }
    void echo(ConfigEcho& config, bool include_mesh = true) const {
        config.emplace_back("p", format_double(p));
        config.emplace_back("f", f);
        if (include_mesh) {
            config.emplace_back("nr", std::to_string(nr));
            config.emplace_back("nt", std::to_string(nt));
        }
        config.emplace_back("eps", format_double(eps));
        config.emplace_back("tol", format_double(tol));
    }
};

/// Resolves --field against the domain: sectors default to the sector field,
/// radially symmetric domains to v(x) = x.
VectorFieldSpec resolve_field(std::string& field, const std::string& domain) {
    if (field.empty()) field = domain == "sector" ? "paper" : "radial";
    if (field == "paper" || field == "sector") return sector_field();
    if (field == "radial") return radial_field();
    throw ParseError("unknown field '" + field + "', expected paper | radial");
}

std::ofstream open_output(const std::string& path) {
    std::ofstream out(path, std::ios::binary); // byte-stable newlines everywhere
    if (!out) throw std::invalid_argument("cannot open output file '" + path + "'");
    return out;
}

std::string json_number(double x) { return format_double(x); }

std::shared_ptr<const Mesh> shared_mesh(const DomainSpec& domain, int nr, int nt) {
    return std::make_shared<Mesh>(build_mesh(domain, nr, nt));
}

// ---------------------------------------------------------------------------
// subcommand bodies
// ---------------------------------------------------------------------------

int run_threshold(double p, double q) {
    if (!(p > 1.0 && p < 2.0)) throw std::invalid_argument("p outside (1,2)");
    const double q_critical = critical_exponent(p, 2);
    const double threshold = s_bar(p, q); // throws NoWindowError when q <= q*
    std::cout << "{\"p\": " << json_number(p) << ", \"q\": " << json_number(q)
              << ", \"q_critical\": " << json_number(q_critical)
              << ", \"s_bar\": " << json_number(threshold) << "}\n";
    return 0;
}

int run_certificate(double p, double q, double s, double alpha, const std::string& f) {
    const NonlinearitySpec nonlinearity = parse_nonlinearity(f);
    const CertificateVerdict cv = certificate(p, q, s, alpha, nonlinearity);
    std::ostringstream os;
    os << "{\"p\": " << json_number(p) << ", \"q\": " << json_number(q)
       << ", \"s\": " << json_number(s) << ", \"alpha\": " << json_number(alpha)
       << ", \"f\": \"" << f << "\"";
    os << ", \"s_bar\": " << (cv.s_bar ? json_number(*cv.s_bar) : "null");
    os << ", \"coefficient\": "
       << (cv.coefficient ? json_number(*cv.coefficient) : "null");
    os << ", \"verdict\": \"" << to_string(cv.verdict) << "\"";
    os << ", \"reasons\": [";
    for (std::size_t i = 0; i < cv.reasons.size(); ++i)
        os << (i ? ", " : "") << "\"" << cv.reasons[i] << "\"";
    os << "]}";
    std::cout << os.str() << "\n";
    return 0;
}

int run_sweep(double p_min, double p_max, int p_steps, double q_min, double q_max,
              int q_steps, double s_min, double s_max, int s_steps,
              const std::string& out_path) {
    auto linspace = [](double lo, double hi, int steps) {
        std::vector<double> grid;
        if (steps < 0) throw std::invalid_argument("grid steps must be >= 0");
        for (int i = 0; i < steps; ++i)
            grid.push_back(steps == 1 ? lo : lo + (hi - lo) * i / (steps - 1));
        return grid;
    };
    const auto p_grid = linspace(p_min, p_max, p_steps);
    const auto q_grid = linspace(q_min, q_max, q_steps);
    const auto s_grid = linspace(s_min, s_max, s_steps);
    const auto rows = sweep(p_grid, q_grid, s_grid);

    ConfigEcho config{{"subcommand", "sweep"},
                      {"p-min", format_double(p_min)},
                      {"p-max", format_double(p_max)},
                      {"p-steps", std::to_string(p_steps)},
                      {"q-min", format_double(q_min)},
                      {"q-max", format_double(q_max)},
                      {"q-steps", std::to_string(q_steps)},
                      {"s-min", format_double(s_min)},
                      {"s-max", format_double(s_max)},
                      {"s-steps", std::to_string(s_steps)},
                      {"out", out_path}};
    auto out = open_output(out_path);
    write_config_echo(out, config);
    out << "p,q,s,q_critical,coefficient,s_bar,verdict\n";
    for (const auto& row : rows) {
        out << format_double(row.p) << "," << format_double(row.q) << ","
            << format_double(row.s) << "," << format_double(row.q_critical) << ","
            << format_double(row.coefficient) << ","
            << (row.s_bar ? format_double(*row.s_bar) : "") << ","
            << to_string(row.verdict) << "\n";
    }
    return 0;
}

int run_mesh(const DomainFlags& domain, int nr, int nt, const std::string& out_path) {
    const Mesh mesh = build_mesh(domain.spec(), nr, nt);
    ConfigEcho config{{"subcommand", "mesh"}};
    domain.echo(config);
    config.emplace_back("nr", std::to_string(nr));
    config.emplace_back("nt", std::to_string(nt));
    config.emplace_back("out", out_path);
    auto out = open_output(out_path);
    write_config_echo(out, config);
    write_mesh_csv(out, mesh);
    return 0;
}

int run_solve(const DomainFlags& domain, const SolveFlags& sf, const std::string& out_path) {
    const NonlinearitySpec nonlinearity = parse_nonlinearity(sf.f);
    const Solution solution =
        solve(shared_mesh(domain.spec(), sf.nr, sf.nt), sf.p, nonlinearity, sf.config());

    ConfigEcho config{{"subcommand", "solve"}};
    domain.echo(config);
    sf.echo(config);
    config.emplace_back("out", out_path);
    auto out = open_output(out_path);
    write_config_echo(out, config);
    out << "# iterations=" << solution.convergence.iterations
        << " final_residual=" << format_double(solution.convergence.final_residual_norm)
        << "\n";
    out << "vertex_index,x,y,u\n";
    for (std::size_t v = 0; v < solution.nodal_values.size(); ++v) {
        const Vec2 pt = solution.mesh->vertices[v];
        out << v << "," << format_double(pt.x) << "," << format_double(pt.y) << ","
            << format_double(solution.nodal_values[v]) << "\n";
    }
    return 0;
}

int run_field_check(double alpha, double s, int samples, double h, std::uint64_t seed,
                    int audit_samples, const std::string& out_path,
                    const std::string& audit_path) {
    const AnnularSector sector{alpha, s};
    validate(DomainSpec{sector});
    if (!(h > 0.0)) throw std::invalid_argument("field-check: h must be > 0");
    const double margin = std::max(1e-3, 10.0 * h);
    if (margin >= s || margin >= alpha)
        throw std::invalid_argument("field-check: step too large for this sector");

    ConfigEcho config{{"subcommand", "field-check"},
                      {"alpha", format_double(alpha)},
                      {"s", format_double(s)},
                      {"samples", std::to_string(samples)},
                      {"step", format_double(h)},
                      {"seed", std::to_string(seed)},
                      {"audit-samples", std::to_string(audit_samples)},
                      {"out", out_path},
                      {"audit-out", audit_path}};

    const VectorFieldSpec field = sector_field();
    auto out = open_output(out_path);
    write_config_echo(out, config);
    out << "point_x,point_y,div_analytic,div_fd,err_div,err_quad_max\n";
    for (const Vec2 pt : sector_interior_points(sector, samples, margin, seed)) {
        const FdConsistency fd = fd_consistency(field, pt, h);
        const double div_analytic = divergence(field, pt);
        double err_quad_max = 0.0;
        for (double e : fd.quad_errors) err_quad_max = std::max(err_quad_max, e);
        out << format_double(pt.x) << "," << format_double(pt.y) << ","
            << format_double(div_analytic) << "," << format_double(fd.div_fd) << ","
            << format_double(fd.div_error) << "," << format_double(err_quad_max)
            << "\n";
    }

    const FluxAudit audit = boundary_flux_audit(sector, audit_samples);
    auto audit_out = open_output(audit_path);
    write_config_echo(audit_out, config);
    audit_out << "edge_kind,rho,theta,flux\n";
    for (const auto& sample : audit.samples) {
        audit_out << to_string(sample.kind) << "," << format_double(sample.rho) << ","
                  << format_double(sample.theta) << "," << format_double(sample.flux)
                  << "\n";
    }
    audit_out << "# min_flux=" << format_double(audit.min_flux) << "\n";
    return 0;
}

int run_verify_identity(const DomainFlags& domain, const SolveFlags& sf,
                        std::string field_name) {
    const VectorFieldSpec field = resolve_field(field_name, domain.domain);
    const NonlinearitySpec nonlinearity = parse_nonlinearity(sf.f);
    const Solution solution =
        solve(shared_mesh(domain.spec(), sf.nr, sf.nt), sf.p, nonlinearity, sf.config());
    const IdentityReport report = identity_sides(solution, field, nonlinearity);
    std::cout << "{\"lhs\": " << json_number(report.lhs)
              << ", \"rhs_jacobian\": " << json_number(report.rhs_jacobian)
              << ", \"rhs_divergence\": " << json_number(report.rhs_divergence)
              << ", \"rhs_total\": " << json_number(report.rhs_total)
              << ", \"residual_abs\": " << json_number(report.residual_abs)
              << ", \"residual_rel\": " << json_number(report.residual_rel)
              << ", \"mesh\": {\"nr\": " << report.mesh_n_radial
              << ", \"nt\": " << report.mesh_n_angular
              << ", \"h\": " << json_number(report.mesh_h) << "}}\n";
    return 0;
}

int run_convergence(const DomainFlags& domain, const SolveFlags& sf,
                    std::string field_name, const std::string& levels_text,
                    const std::string& out_path) {
    const VectorFieldSpec field = resolve_field(field_name, domain.domain);
    const NonlinearitySpec nonlinearity = parse_nonlinearity(sf.f);

    std::vector<int> levels;
    std::stringstream ss(levels_text);
    std::string token;
    while (std::getline(ss, token, ',')) {
        try {
            std::size_t used = 0;
            const int level = std::stoi(token, &used);
            if (used != token.size()) throw std::invalid_argument(token);
            levels.push_back(level);
        } catch (const std::exception&) {
            throw ParseError("--levels expects a comma-separated integer list, got '" +
                             levels_text + "'");
        }
    }

    const auto rows =
        convergence_study(domain.spec(), sf.p, nonlinearity, field, levels, sf.config());

    ConfigEcho config{{"subcommand", "convergence"}};
    domain.echo(config);
    sf.echo(config, /*include_mesh=*/false);
    config.emplace_back("field", field_name);
    config.emplace_back("levels", levels_text);
    config.emplace_back("out", out_path);
    auto out = open_output(out_path);
    write_config_echo(out, config);
    out << "level,h,lhs,rhs_total,residual_rel,observed_order\n";
    for (const auto& row : rows) {
        out << row.level << "," << format_double(row.h) << "," << format_double(row.lhs)
            << "," << format_double(row.rhs_total) << ","
            << format_double(row.residual_rel) << ","
            << (row.observed_order ? format_double(*row.observed_order) : "") << "\n";
    }
    return 0;
}

} // namespace

int run_cli(int argc, const char* const* argv) {
    CLI::App app{"plap: p-Laplacian Dirichlet problems on annular sectors, annuli and "
                 "disks; vector-field checks, integral-identity verification and "
                 "nonexistence thresholds",
                 "plap"};
    app.require_subcommand(1);
    auto fail_line = [](const std::string& msg) {
        std::cerr << "error: " << msg << "\n";
        return 1;
    };

    // threshold
    double th_p = 1.5, th_q = 10.0;
    auto* threshold_cmd =
        app.add_subcommand("threshold", "closed-form nonexistence threshold s_bar(p, q)");
    threshold_cmd->add_option("--p", th_p)->required();
    threshold_cmd->add_option("--q", th_q)->required();

    // certificate
    double ce_p = 1.5, ce_q = 10.0, ce_s = 0.05, ce_alpha = 3.0;
    std::string ce_f = "power:10";
    auto* certificate_cmd =
        app.add_subcommand("certificate", "nonexistence certificate for (p, q, s, alpha)");
    certificate_cmd->add_option("--p", ce_p)->required();
    certificate_cmd->add_option("--q", ce_q)->required();
    certificate_cmd->add_option("--s", ce_s)->required();
    certificate_cmd->add_option("--alpha", ce_alpha)->required();
    certificate_cmd->add_option("--f", ce_f, "nonlinearity (default power:10)");

    // sweep
    double sw_pmin = 1.1, sw_pmax = 1.9, sw_qmin = 7.0, sw_qmax = 30.0, sw_smin = 0.01,
           sw_smax = 0.2;
    int sw_psteps = 5, sw_qsteps = 5, sw_ssteps = 5;
    std::string sw_out = "sweep.csv";
    auto* sweep_cmd = app.add_subcommand("sweep", "grid sweep of thresholds and verdicts");
    sweep_cmd->add_option("--p-min", sw_pmin);
    sweep_cmd->add_option("--p-max", sw_pmax);
    sweep_cmd->add_option("--p-steps", sw_psteps);
    sweep_cmd->add_option("--q-min", sw_qmin);
    sweep_cmd->add_option("--q-max", sw_qmax);
    sweep_cmd->add_option("--q-steps", sw_qsteps);
    sweep_cmd->add_option("--s-min", sw_smin);
    sweep_cmd->add_option("--s-max", sw_smax);
    sweep_cmd->add_option("--s-steps", sw_ssteps);
    sweep_cmd->add_option("--out", sw_out);

    // mesh
    DomainFlags mesh_domain;
    int mesh_nr = 64, mesh_nt = 128;
    std::string mesh_out = "mesh.csv";
    auto* mesh_cmd = app.add_subcommand("mesh", "triangulate a domain and export CSV");
    mesh_domain.attach(mesh_cmd);
    mesh_cmd->add_option("--nr", mesh_nr);
    mesh_cmd->add_option("--nt", mesh_nt);
    mesh_cmd->add_option("--out", mesh_out);

    // solve
    DomainFlags solve_domain;
    SolveFlags solve_flags;
    std::string solve_out = "solution.csv";
    auto* solve_cmd = app.add_subcommand("solve", "discrete Dirichlet solution CSV");
    solve_domain.attach(solve_cmd);
    solve_flags.attach(solve_cmd);
    solve_cmd->add_option("--out", solve_out);

    // field-check
    double fc_alpha = 2.0, fc_s = 0.3, fc_h = 1e-5;
    int fc_samples = 1000, fc_audit_samples = 10000;
    std::uint64_t fc_seed = 1;
    std::string fc_out = "field-check.csv", fc_audit_out = "field-audit.csv";
    auto* field_cmd = app.add_subcommand(
        "field-check", "finite-difference field audit and boundary flux audit");
    field_cmd->add_option("--alpha", fc_alpha);
    field_cmd->add_option("--s", fc_s);
    field_cmd->add_option("--samples", fc_samples);
    field_cmd->add_option("--step", fc_h);
    field_cmd->add_option("--seed", fc_seed);
    field_cmd->add_option("--audit-samples", fc_audit_samples);
    field_cmd->add_option("--out", fc_out);
    field_cmd->add_option("--audit-out", fc_audit_out);

    // verify-identity
    DomainFlags vi_domain;
    SolveFlags vi_flags;
    std::string vi_field;
    auto* verify_cmd =
        app.add_subcommand("verify-identity", "evaluate both identity sides as JSON");
    vi_domain.attach(verify_cmd);
    vi_flags.attach(verify_cmd);
    verify_cmd->add_option("--field", vi_field, "paper | radial (default by domain)");

    // convergence
    DomainFlags cv_domain;
    SolveFlags cv_flags;
    std::string cv_field;
    std::string cv_levels = "16,32,64";
    std::string cv_out = "convergence.csv";
    auto* convergence_cmd =
        app.add_subcommand("convergence", "identity residual decay across mesh levels");
    cv_domain.attach(convergence_cmd);
    cv_flags.attach(convergence_cmd);
    convergence_cmd->add_option("--field", cv_field, "paper | radial (default by domain)");
    convergence_cmd->add_option("--levels", cv_levels, "comma list, e.g. 16,32,64");
    convergence_cmd->add_option("--out", cv_out);

    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    try {
        args = apply_config_file(args);
    } catch (const std::exception& e) {
        return fail_line(e.what());
    }

    try {
        // CLI11 consumes arguments in reverse.
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        std::cout << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n" << app.help();
        return 1;
    }

    try {
        if (threshold_cmd->parsed()) return run_threshold(th_p, th_q);
        if (certificate_cmd->parsed())
            return run_certificate(ce_p, ce_q, ce_s, ce_alpha, ce_f);
        if (sweep_cmd->parsed())
            return run_sweep(sw_pmin, sw_pmax, sw_psteps, sw_qmin, sw_qmax, sw_qsteps,
                             sw_smin, sw_smax, sw_ssteps, sw_out);
        if (mesh_cmd->parsed()) return run_mesh(mesh_domain, mesh_nr, mesh_nt, mesh_out);
        if (solve_cmd->parsed()) return run_solve(solve_domain, solve_flags, solve_out);
        if (field_cmd->parsed())
            return run_field_check(fc_alpha, fc_s, fc_samples, fc_h, fc_seed,
                                   fc_audit_samples, fc_out, fc_audit_out);
        if (verify_cmd->parsed()) return run_verify_identity(vi_domain, vi_flags, vi_field);
        if (convergence_cmd->parsed())
            return run_convergence(cv_domain, cv_flags, cv_field, cv_levels, cv_out);
        return fail_line("no subcommand selected");
    } catch (const ConvergenceFailureError& e) {
        std::cerr << "error: " << e.what()
                  << " (last residual " << format_double(e.last_residual()) << ")\n";
        return 2;
    } catch (const std::exception& e) {
        return fail_line(e.what());
    }
}

} // namespace plap
