#include "plap/io.hpp"

#include <cstdio>

namespace plap {

std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

void write_config_echo(std::ostream& os, const ConfigEcho& config) {
    for (const auto& [key, value] : config) os << "# " << key << "=" << value << "\n";
}

void write_mesh_csv(std::ostream& os, const Mesh& mesh) {
    os << "#vertices x,y\n";
    for (const auto& v : mesh.vertices)
        os << format_double(v.x) << "," << format_double(v.y) << "\n";
    os << "#triangles i,j,k\n";
    for (const auto& t : mesh.triangles)
        os << t[0] << "," << t[1] << "," << t[2] << "\n";
    os << "#boundary i,j,nx,ny,kind\n";
    for (const auto& be : mesh.boundary_edges)
        os << be.a << "," << be.b << "," << format_double(be.normal.x) << ","
           << format_double(be.normal.y) << "," << to_string(be.kind) << "\n";
}

} // namespace plap
