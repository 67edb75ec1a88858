#include "plap/criteria.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "plap/errors.hpp"
#include "plap/io.hpp"

namespace plap {

namespace {
constexpr double kPi = std::numbers::pi;
}

double critical_exponent(double p, int n) {
    if (!(p > 1.0)) throw std::invalid_argument("critical_exponent: p must be > 1");
    if (!(n >= 2)) throw std::invalid_argument("critical_exponent: n must be >= 2");
    if (!(p < n))
        throw NotDefinedError("critical_exponent: not defined for p >= n");
    return n * p / (n - p);
}

double coefficient(double p, double q, double s) {
    if (!(p > 1.0)) throw std::invalid_argument("coefficient: p must be > 1");
    if (!(q > 0.0)) throw std::invalid_argument("coefficient: q must be > 0");
    if (!(s >= 0.0 && s < 1.0))
        throw std::invalid_argument("coefficient: s must lie in [0, 1)");
    return 1.0 - 2.0 / p + 2.0 / q + (1.0 + 1.0 / p + 1.0 / q) * s / (1.0 - s);
}

double s_bar(double p, double q) {
    if (!(p > 1.0 && p < 2.0))
        throw std::invalid_argument("s_bar: p must lie in (1, 2)");
    if (!(q > 0.0)) throw std::invalid_argument("s_bar: q must be > 0");
    // c(p, q, 0) = 1 - 2/p + 2/q must be negative for a window to exist,
    // which is exactly q > 2p/(2-p).
    const double t = (2.0 / p - 1.0 - 2.0 / q) / (1.0 + 1.0 / p + 1.0 / q);
    if (!(t > 0.0))
        throw NoWindowError("s_bar: no window, q <= 2p/(2-p)");
    return t / (1.0 + t);
}

double s_bar_bisect(double p, double q, double tol) {
    if (!(p > 1.0 && p < 2.0))
        throw std::invalid_argument("s_bar_bisect: p must lie in (1, 2)");
    if (!(tol > 0.0)) throw std::invalid_argument("s_bar_bisect: tol must be > 0");
    double lo = 0.0;
    double hi = 1.0 - 1e-14;
    if (!(coefficient(p, q, lo) < 0.0))
        throw NoWindowError("s_bar_bisect: no window, q <= 2p/(2-p)");
    // c is increasing in s and blows up as s -> 1, so [lo, hi] brackets.
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        (coefficient(p, q, mid) < 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

GrowthCheck check_growth_condition(const NonlinearitySpec& nonlinearity, double q,
                                   std::span<const double> sample_points) {
    if (sample_points.empty())
        throw std::invalid_argument("check_growth_condition: samples must be nonempty");
    bool has_zero = false, has_pos = false, has_neg = false;
    for (double t : sample_points) {
        has_zero |= t == 0.0;
        has_pos |= t > 0.0;
        has_neg |= t < 0.0;
    }
    if (!has_zero || !has_pos || !has_neg)
        throw std::invalid_argument(
            "check_growth_condition: samples must include 0 and both signs");

    GrowthCheck out;
    for (double t : sample_points) {
        const double tf = t * f_value(nonlinearity, t);
        const double qF = q * F_primitive(nonlinearity, t);
        const double slack = 1e-12 * std::max({1.0, std::abs(tf), std::abs(qF)});
        if (qF < -slack) {
            out.first_violation_t = t;
            out.detail = "q*F(t) < 0 at t = " + format_double(t);
            return out;
        }
        if (tf < qF - slack) {
            out.first_violation_t = t;
            out.detail = "t*f(t) < q*F(t) at t = " + format_double(t);
            return out;
        }
    }
    out.holds = true;
    return out;
}

const char* to_string(Verdict v) {
    return v == Verdict::NoNontrivialSolution ? "NoNontrivialSolution" : "Inconclusive";
}

CertificateVerdict certificate(double p, double q, double s, double alpha,
                               const NonlinearitySpec& nonlinearity) {
    CertificateVerdict out;
    bool ok = true;
    auto check = [&](bool cond, const std::string& label) {
        out.reasons.push_back((cond ? "satisfied: " : "failed: ") + label);
        ok = ok && cond;
    };

    check(p > 1.0 && p < 2.0, "1 < p < 2 (p = " + format_double(p) + ")");

    std::optional<double> q_crit;
    if (p > 1.0 && p < 2.0) q_crit = critical_exponent(p, 2);
    check(q_crit.has_value() && q > *q_crit,
          q_crit ? "q > 2p/(2-p) = " + format_double(*q_crit)
                 : "q > 2p/(2-p) (critical exponent undefined)");

    {
        // Fixed sample set with 0, both signs and a spread of magnitudes.
        const double samples[] = {-10.0, -2.0, -1.0, -0.5, -0.1, 0.0,
                                  0.1,   0.5,  1.0,  2.0,  10.0};
        const GrowthCheck gc = check_growth_condition(nonlinearity, q, samples);
        check(gc.holds, gc.holds ? "growth condition t*f(t) >= q*F(t) >= 0"
                                 : "growth condition (" + gc.detail + ")");
    }

    check(alpha > 0.0 && alpha < kPi,
          "0 < alpha < pi (alpha = " + format_double(alpha) + ")");

    if (q_crit && q > *q_crit) {
        out.s_bar = s_bar(p, q);
        check(s > 0.0 && s < *out.s_bar,
              "0 < s < s_bar = " + format_double(*out.s_bar) +
                  " (s = " + format_double(s) + ")");
    } else {
        check(false, "0 < s < s_bar (no window)");
    }

    if (p > 1.0 && q > 0.0 && s >= 0.0 && s < 1.0) out.coefficient = coefficient(p, q, s);

    out.verdict = ok ? Verdict::NoNontrivialSolution : Verdict::Inconclusive;
    return out;
}

std::vector<SweepRow> sweep(std::span<const double> p_grid,
                            std::span<const double> q_grid,
                            std::span<const double> s_grid) {
    std::vector<SweepRow> rows;
    rows.reserve(p_grid.size() * q_grid.size() * s_grid.size());
    for (double p : p_grid) {
        for (double q : q_grid) {
            for (double s : s_grid) {
                SweepRow row{p, q, s, 0.0, 0.0, std::nullopt, Verdict::Inconclusive};
                row.q_critical = critical_exponent(p, 2);
                row.coefficient = coefficient(p, q, s);
                // alpha does not enter the coefficient; pi/2 stands in for the
                // whole admissible range (0, pi).
                const CertificateVerdict cv =
                    certificate(p, q, s, kPi / 2.0, PowerLaw{q});
                row.s_bar = cv.s_bar;
                row.verdict = cv.verdict;
                rows.push_back(std::move(row));
            }
        }
    }
    return rows;
}

} // namespace plap
