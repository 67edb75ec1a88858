#ifndef PLAP_CRITERIA_HPP
#define PLAP_CRITERIA_HPP

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "plap/nonlinearity.hpp"

namespace plap {

/// q*(p, n) = n p / (n - p) for 1 < p < n. Throws NotDefinedError for p >= n.
double critical_exponent(double p, int n);

/// c(p, q, s) = 1 - 2/p + 2/q + (1 + 1/p + 1/q) s/(1-s), strictly increasing
/// in s on [0, 1). Requires p > 1, q > 0, 0 <= s < 1.
double coefficient(double p, double q, double s);

/// Unique root of c(p, q, .) in (0, 1), in closed form: with
/// t = (2/p - 1 - 2/q) / (1 + 1/p + 1/q), the root is t / (1 + t).
/// Requires 1 < p < 2; throws NoWindowError when q <= 2p/(2-p).
double s_bar(double p, double q);

/// Independent cross-check: bisection root of c(p, q, .) on (0, 1).
double s_bar_bisect(double p, double q, double tol = 1e-12);

struct GrowthCheck {
    bool holds = false;
    std::optional<double> first_violation_t; // sample where the check failed
    std::string detail;                      // which inequality failed
};

/// Checks t f(t) >= q F(t) >= 0 at every sample, with relative slack 1e-12.
/// Samples must be nonempty and include 0 and both signs.
GrowthCheck check_growth_condition(const NonlinearitySpec& nonlinearity, double q,
                                   std::span<const double> sample_points);

enum class Verdict { NoNontrivialSolution, Inconclusive };

const char* to_string(Verdict v);

struct CertificateVerdict {
    Verdict verdict = Verdict::Inconclusive;
    std::vector<std::string> reasons;      // one line per hypothesis checked
    std::optional<double> s_bar;           // present when the window exists
    std::optional<double> coefficient;     // c(p, q, s) when evaluable
};

/// Nonexistence certificate. NoNontrivialSolution requires all of:
/// 1 < p < 2, the growth condition for q, q > 2p/(2-p), 0 < alpha < pi and
/// 0 < s < s_bar(p, q). Any failure yields Inconclusive (never an existence
/// claim), with each failed hypothesis listed in reasons.
CertificateVerdict certificate(double p, double q, double s, double alpha,
                               const NonlinearitySpec& nonlinearity);

struct SweepRow {
    double p, q, s;
    double q_critical;
    double coefficient;
    std::optional<double> s_bar;
    Verdict verdict;
};

/// One row per grid point, p-major then q then s. Verdicts assume the power
/// nonlinearity f(t) = |t|^(q-2) t and hold uniformly in alpha on (0, pi).
std::vector<SweepRow> sweep(std::span<const double> p_grid,
                            std::span<const double> q_grid,
                            std::span<const double> s_grid);

} // namespace plap

#endif
