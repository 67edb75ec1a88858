#include "plap/nonlinearity.hpp"

#include <cmath>

#include "plap/io.hpp"

namespace plap {

double f_value(const NonlinearitySpec& spec, double t) {
    if (const auto* c = std::get_if<Constant>(&spec)) return c->c;
    const auto& pw = std::get<PowerLaw>(spec);
    if (t == 0.0) return 0.0;
    return std::pow(std::abs(t), pw.q - 2.0) * t;
}

double f_prime(const NonlinearitySpec& spec, double t) {
    if (std::holds_alternative<Constant>(spec)) return 0.0;
    const auto& pw = std::get<PowerLaw>(spec);
    if (t == 0.0) return 0.0;
    return (pw.q - 1.0) * std::pow(std::abs(t), pw.q - 2.0);
}

double F_primitive(const NonlinearitySpec& spec, double t) {
    if (const auto* c = std::get_if<Constant>(&spec)) return c->c * t;
    const auto& pw = std::get<PowerLaw>(spec);
    if (t == 0.0) return 0.0;
    return std::pow(std::abs(t), pw.q) / pw.q;
}

std::string describe(const NonlinearitySpec& spec) {
    if (const auto* c = std::get_if<Constant>(&spec))
        return "constant:" + format_double(c->c);
    return "power:" + format_double(std::get<PowerLaw>(spec).q);
}

} // namespace plap
