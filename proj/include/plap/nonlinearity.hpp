#ifndef PLAP_NONLINEARITY_HPP
#define PLAP_NONLINEARITY_HPP

#include <string>
#include <variant>

namespace plap {

/// f(t) = c, F(t) = c t.
struct Constant {
    double c = 1.0;
};

/// f(t) = |t|^(q-2) t, F(t) = |t|^q / q.
struct PowerLaw {
    double q = 2.0;
};

using NonlinearitySpec = std::variant<Constant, PowerLaw>;

double f_value(const NonlinearitySpec& spec, double t);
/// Derivative f'(t); the PowerLaw branch returns 0 at t = 0 (the q > 2 limit).
double f_prime(const NonlinearitySpec& spec, double t);
/// Exact primitive with F(0) = 0.
double F_primitive(const NonlinearitySpec& spec, double t);

/// "constant:<c>" or "power:<q>", matching the CLI grammar.
std::string describe(const NonlinearitySpec& spec);

} // namespace plap

#endif
