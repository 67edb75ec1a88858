#ifndef PLAP_IO_HPP
#define PLAP_IO_HPP

#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "plap/geometry.hpp"

namespace plap {

/// 17 significant digits, round-trip safe for IEEE doubles.
std::string format_double(double x);

/// Ordered key=value block echoed at the top of every output file, one
/// "# key=value" line each. Feeding the same pairs back through --config
/// reproduces the run.
using ConfigEcho = std::vector<std::pair<std::string, std::string>>;

void write_config_echo(std::ostream& os, const ConfigEcho& config);

/// Sections: "#vertices x,y", "#triangles i,j,k", "#boundary i,j,nx,ny,kind".
void write_mesh_csv(std::ostream& os, const Mesh& mesh);

} // namespace plap

#endif
