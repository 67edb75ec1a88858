#define DOCTEST_CONFIG_IMPLEMENT
#include <doctest.h>

#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "plap/cli.hpp"
#include "plap/errors.hpp"

using namespace plap;
namespace fs = std::filesystem;

namespace {

std::string g_cli_path;
fs::path g_scratch;

int run_command(const std::string& args, const std::string& stdout_file = "") {
    std::string cmd = g_cli_path + " " + args;
    if (!stdout_file.empty()) cmd += " > " + (g_scratch / stdout_file).string();
    cmd += " 2> " + (g_scratch / "stderr.txt").string();
    const int status = std::system(cmd.c_str());
    REQUIRE(status != -1);
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

nlohmann::json run_json(const std::string& args) {
    REQUIRE(run_command(args, "out.json") == 0);
    return nlohmann::json::parse(slurp(g_scratch / "out.json"));
}

} // namespace

TEST_CASE("parse_nonlinearity grammar") {
    CHECK(std::get<Constant>(parse_nonlinearity("constant:1")).c == 1.0);
    CHECK(std::get<Constant>(parse_nonlinearity("constant:-2.5")).c == -2.5);
    CHECK(std::get<PowerLaw>(parse_nonlinearity("power:10")).q == 10.0);
    CHECK_THROWS_AS(parse_nonlinearity("cubic"), ParseError);
    CHECK_THROWS_AS(parse_nonlinearity("power:"), ParseError);
    CHECK_THROWS_AS(parse_nonlinearity("power:1x"), ParseError);
    CHECK_THROWS_AS(parse_nonlinearity("power:0.5"), ParseError); // must exceed 1
    CHECK_THROWS_AS(parse_nonlinearity("gaussian:2"), ParseError);
}

TEST_CASE("threshold subcommand") {
    const auto json = run_json("threshold --p 1.5 --q 10");
    CHECK(json["p"].get<double>() == 1.5);
    CHECK(json["q"].get<double>() == 10.0);
    CHECK(json["q_critical"].get<double>() == 6.0);
    CHECK(std::abs(json["s_bar"].get<double>() - 4.0 / 57.0) <= 1e-12);

    CHECK(run_command("threshold --p 2.5 --q 10") == 1);
    const std::string diagnostic = slurp(g_scratch / "stderr.txt");
    CHECK(diagnostic.find("p outside (1,2)") != std::string::npos);

    CHECK(run_command("threshold --p 1.5 --q 6") == 1); // empty window
}

TEST_CASE("certificate subcommand") {
    const auto yes = run_json("certificate --p 1.5 --q 10 --s 0.05 --alpha 3.0 --f power:10");
    CHECK(yes["verdict"] == "NoNontrivialSolution");
    CHECK(yes["reasons"].is_array());

    const auto no = run_json("certificate --p 1.5 --q 10 --s 0.08 --alpha 3.0 --f power:10");
    CHECK(no["verdict"] == "Inconclusive");
}

TEST_CASE("unknown subcommand and flags exit 1 with usage") {
    CHECK(run_command("frobnicate") == 1);
    CHECK(slurp(g_scratch / "stderr.txt").find("Usage") != std::string::npos);
    CHECK(run_command("threshold --p 1.5 --q 10 --bogus 3") == 1);
}

TEST_CASE("mesh subcommand writes the three sections") {
    const fs::path out = g_scratch / "mesh.csv";
    REQUIRE(run_command("mesh --domain sector --alpha 2.0 --s 0.3 --nr 2 --nt 4 --out " +
                        out.string()) == 0);
    const std::string text = slurp(out);
    CHECK(text.find("# subcommand=mesh\n") != std::string::npos);
    CHECK(text.find("#vertices x,y\n") != std::string::npos);
    CHECK(text.find("#triangles i,j,k\n") != std::string::npos);
    CHECK(text.find("#boundary i,j,nx,ny,kind\n") != std::string::npos);
}

TEST_CASE("solve subcommand is deterministic and round-trips its config") {
    const fs::path dir_a = g_scratch / "det_a";
    const fs::path dir_b = g_scratch / "det_b";
    fs::create_directories(dir_a);
    fs::create_directories(dir_b);
    const std::string flags =
        "solve --domain disk --r1 1.0 --p 2 --f constant:1 --nr 8 --nt 16 --out ";
    REQUIRE(run_command(flags + (dir_a / "u.csv").string()) == 0);
    REQUIRE(run_command(flags + (dir_b / "u.csv").string()) == 0);
    // identical bytes apart from the echoed output path line
    const std::string a = slurp(dir_a / "u.csv");
    const std::string b = slurp(dir_b / "u.csv");
    CHECK(a.substr(a.find("vertex_index")) == b.substr(b.find("vertex_index")));

    // Feed the echoed metadata back as a config file.
    std::ofstream cfg(g_scratch / "replay.cfg");
    std::istringstream lines(a);
    std::string line;
    while (std::getline(lines, line)) {
        if (line.rfind("# ", 0) == 0 && line.find('=') != std::string::npos &&
            line.find("iterations") == std::string::npos)
            cfg << line.substr(2) << "\n";
    }
    cfg.close();
    REQUIRE(run_command("solve --config " + (g_scratch / "replay.cfg").string()) == 0);
    CHECK(slurp(dir_a / "u.csv") == a);

    // A config naming another subcommand is rejected.
    CHECK(run_command("mesh --config " + (g_scratch / "replay.cfg").string()) == 1);
}

TEST_CASE("solve reports non-convergence with exit 2") {
    const fs::path out = g_scratch / "fail.csv";
    CHECK(run_command("solve --domain disk --r1 1.0 --p 2 --f constant:1 --nr 8 --nt 16 "
                      "--tol 1e-18 --out " +
                      out.string()) == 2);
    CHECK(slurp(g_scratch / "stderr.txt").find("last residual") != std::string::npos);
}

TEST_CASE("verify-identity prints the report schema") {
    const auto json = run_json(
        "verify-identity --domain disk --r1 1.0 --p 2 --f constant:1 --nr 16 --nt 32");
    for (const char* key :
         {"lhs", "rhs_jacobian", "rhs_divergence", "rhs_total", "residual_abs",
          "residual_rel"})
        CHECK(json.contains(key));
    CHECK(json["mesh"]["nr"].get<int>() == 16);
    CHECK(json["mesh"]["nt"].get<int>() == 32);
    CHECK(json["rhs_total"].get<double>() ==
          json["rhs_jacobian"].get<double>() + json["rhs_divergence"].get<double>());
}

TEST_CASE("convergence subcommand emits one row per level") {
    const fs::path out = g_scratch / "conv.csv";
    REQUIRE(run_command("convergence --domain disk --r1 1.0 --p 2 --f constant:1 "
                        "--levels 8,16,32 --out " +
                        out.string()) == 0);
    const std::string text = slurp(out);
    CHECK(text.find("level,h,lhs,rhs_total,residual_rel,observed_order\n") !=
          std::string::npos);
    int rows = 0;
    std::istringstream lines(text);
    std::string line;
    while (std::getline(lines, line))
        if (!line.empty() && line[0] != '#' && line.find("level,") != 0) ++rows;
    CHECK(rows == 3);

    CHECK(run_command("convergence --domain disk --r1 1.0 --levels 16 --out " +
                      out.string()) == 1); // fewer than 3 levels
}

TEST_CASE("field-check emits interior and audit tables") {
    const fs::path out = g_scratch / "fc.csv";
    const fs::path audit = g_scratch / "fa.csv";
    REQUIRE(run_command("field-check --alpha 2.0 --s 0.3 --samples 50 --audit-samples 64 "
                        "--out " +
                        out.string() + " --audit-out " + audit.string()) == 0);
    const std::string fc = slurp(out);
    CHECK(fc.find("point_x,point_y,div_analytic,div_fd,err_div,err_quad_max\n") !=
          std::string::npos);
    const std::string fa = slurp(audit);
    CHECK(fa.find("edge_kind,rho,theta,flux\n") != std::string::npos);
    CHECK(fa.find("InnerArc") != std::string::npos);
    CHECK(fa.find("StraightSide") != std::string::npos);
    CHECK(fa.find("# min_flux=") != std::string::npos);
}

int main(int argc, char** argv) {
    doctest::Context context;
    std::vector<const char*> forwarded;
    for (int i = 0; i < argc; ++i) {
        const std::string arg = argv[i];
        if (arg.rfind("--cli=", 0) == 0) {
            g_cli_path = arg.substr(6);
        } else {
            forwarded.push_back(argv[i]);
        }
    }
    if (g_cli_path.empty()) {
        std::fprintf(stderr, "usage: test_cli --cli=<path-to-plap-binary>\n");
        return 1;
    }
    g_scratch = fs::temp_directory_path() / "plap_cli_tests";
    fs::remove_all(g_scratch);
    fs::create_directories(g_scratch);
    context.applyCommandLine(static_cast<int>(forwarded.size()), forwarded.data());
    return context.run();
}
