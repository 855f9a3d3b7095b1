#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

namespace fs = std::filesystem;

namespace {

const std::string cli = SIMONS_CLI_PATH;

int run(const std::string& args) {
    const std::string cmd = cli + " " + args + " > /dev/null 2>&1";
    const int rc = std::system(cmd.c_str());
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path fresh_dir(const std::string& leaf) {
    const fs::path dir = fs::temp_directory_path() / ("simons_cli_test" ) / leaf;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::vector<std::vector<std::string>> parse_csv(const fs::path& p) {
    std::vector<std::vector<std::string>> rows;
    std::ifstream in(p);
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        rows.push_back(cells);
    }
    return rows;
}

} // namespace

TEST_CASE("exit codes") {
    const fs::path dir = fresh_dir("codes");
    CHECK(run("roots --n 3 --p 1 --outdir " + dir.string()) == 0);
    CHECK(run("--help") == 0);
    CHECK(run("roots --help") == 0);
    CHECK(run("roots --n 1 --p 1 --outdir " + dir.string()) == 1); // invalid cone
    CHECK(run("roots --n 3 --p 1 --abs-tol 1e-20 --outdir " + dir.string()) == 1);
    CHECK(run("roots --bogus-flag") == 64);
    CHECK(run("not-a-subcommand") == 64);
    CHECK(run("") == 64); // a subcommand is required
}

TEST_CASE("roots CSV content") {
    const fs::path dir = fresh_dir("roots");
    REQUIRE(run("roots --n 3 --p 1 --max-mode 2 --outdir " + dir.string()) == 0);
    const fs::path csv = dir / "roots_n3_p1.csv";
    REQUIRE(fs::exists(csv));
    const auto rows = parse_csv(csv);
    REQUIRE(rows.size() == 19); // header + 2 branches x 9 modes
    CHECK(rows[0] == std::vector<std::string>{"k", "l", "branch", "re", "im"});
    // (0,0) plus branch: -2 + i sqrt(2) for n = 3
    bool found = false;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        if (rows[i][0] == "0" && rows[i][1] == "0" && rows[i][2] == "1") {
            CHECK(std::abs(std::stod(rows[i][3]) + 2.0) < 1e-15);
            CHECK(std::abs(std::stod(rows[i][4]) - std::sqrt(2.0)) < 1e-15);
            found = true;
        }
    }
    CHECK(found);
}

TEST_CASE("determinism of emitted artifacts") {
    const fs::path d1 = fresh_dir("det1");
    const fs::path d2 = fresh_dir("det2");
    const std::string args = "profile --n 3 --p 2 --sign - --rho-span 8 --outdir ";
    REQUIRE(run(args + d1.string()) == 0);
    REQUIRE(run(args + d2.string()) == 0);
    const std::string f1 = slurp(d1 / "profile_n3_p2_minus.csv");
    const std::string f2 = slurp(d2 / "profile_n3_p2_minus.csv");
    REQUIRE(!f1.empty());
    CHECK(f1 == f2);
}

TEST_CASE("json config with flag override") {
    const fs::path dir = fresh_dir("config");
    {
        std::ofstream cfg(dir / "cfg.json");
        cfg << "{\"n\": 4, \"p\": 2, \"outdir\": \"" << dir.string() << "\"}\n";
    }
    REQUIRE(run("roots --config " + (dir / "cfg.json").string()) == 0);
    CHECK(fs::exists(dir / "roots_n4_p2.csv"));
    // explicit flag wins over the config value
    REQUIRE(run("roots --config " + (dir / "cfg.json").string() + " --n 5") == 0);
    CHECK(fs::exists(dir / "roots_n5_p2.csv"));
    CHECK(run("roots --config " + (dir / "missing.json").string()) == 1);
}

TEST_CASE("environment variable selects the output directory") {
    const fs::path dir = fresh_dir("envdir");
    const std::string cmd =
        "SIMONS_OUTDIR=" + dir.string() + " " + cli + " roots --n 2 --p 1 > /dev/null 2>&1";
    REQUIRE(std::system(cmd.c_str()) == 0);
    CHECK(fs::exists(dir / "roots_n2_p1.csv"));
}

TEST_CASE("density subcommand on the exact cone") {
    const fs::path dir = fresh_dir("density");
    REQUIRE(run("density --n 2 --p 1 --cone --r-lo 2 --r-hi 50 --r-count 4 --outdir " +
                dir.string()) == 0);
    const auto rows = parse_csv(dir / "density_cone_n2_p1.csv");
    REQUIRE(rows.size() == 5);
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const double theta = std::stod(rows[i][1]);
        CHECK(std::abs(theta - 1.5707963267948966) < 1e-9);
    }
}

TEST_CASE("mesh emits a point cloud and an OBJ surface") {
    const fs::path dir = fresh_dir("mesh");
    REQUIRE(run("mesh --n 2 --p 1 --sign + --rho-span 6 --outdir " + dir.string()) == 0);
    CHECK(fs::exists(dir / "mesh_n2_p1_plus_points.csv"));
    const fs::path obj = dir / "mesh_n2_p1_plus.obj";
    REQUIRE(fs::exists(obj));
    const std::string content = slurp(obj);
    CHECK(content.find("\nv ") != std::string::npos);
    CHECK(content.find("\nf ") != std::string::npos);
    CHECK(content.find("x4") != std::string::npos); // dropped-coordinate note
}
