#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "copulasim/distortion.hpp"
#include "copulasim/image_io.hpp"
#include "test_util.hpp"

using namespace csim;
using namespace testutil;
namespace fs = std::filesystem;

#ifndef CLI_BINARY
#error "CLI_BINARY must be defined"
#endif

namespace {

struct RunResult {
    int exit_code;
    std::string stdout_text;
};

RunResult run_cli(const std::string& args, const fs::path& dir) {
    const fs::path out = dir / "stdout.txt";
    const fs::path err = dir / "stderr.txt";
    const std::string cmd = std::string(CLI_BINARY) + " " + args + " > " +
                            out.string() + " 2> " + err.string();
    const int status = std::system(cmd.c_str());
    std::ifstream in(out);
    std::stringstream ss;
    ss << in.rdbuf();
    return {WEXITSTATUS(status), ss.str()};
}

fs::path setup_dir() {
    const fs::path dir = fs::temp_directory_path() / "copulasim_cli_test";
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

} // namespace

TEST_CASE("cli compare, map, sweep and bench") {
    const fs::path dir = setup_dir();
    const Image img = textured_image(64, 64, 3, 1);
    const fs::path a = dir / "a.png";
    const fs::path b = dir / "b.png";
    const fs::path small = dir / "small.png";
    save_image(img, a.string());
    save_image(add_gaussian_noise(img, 5.0, 10.0, 3), b.string());
    save_image(Image(16, 16, 3, 0), small.string());

    SUBCASE("compare identical file") {
        const auto r = run_cli("compare " + a.string() + " " + a.string() +
                                   " --metrics csim",
                               dir);
        CHECK(r.exit_code == 0);
        CHECK(r.stdout_text == "CSIM\t1.000000\n");
    }

    SUBCASE("compare all metrics in fixed order") {
        const auto r = run_cli("compare " + a.string() + " " + b.string(), dir);
        CHECK(r.exit_code == 0);
        std::istringstream lines(r.stdout_text);
        std::string line;
        const char* expected[] = {"CSIM", "SSIM", "FSIM", "ISSM"};
        for (const char* name : expected) {
            REQUIRE(std::getline(lines, line));
            CHECK(line.rfind(std::string(name) + "\t", 0) == 0);
        }
    }

    SUBCASE("mismatched sizes exit 2 with both shapes on stderr") {
        const auto r = run_cli("compare " + a.string() + " " + small.string(), dir);
        CHECK(r.exit_code == 2);
        std::ifstream err(dir / "stderr.txt");
        std::stringstream ss;
        ss << err.rdbuf();
        CHECK(ss.str().find("64x64x3") != std::string::npos);
        CHECK(ss.str().find("16x16x3") != std::string::npos);
    }

    SUBCASE("map outputs") {
        const fs::path csv = dir / "map.csv";
        const fs::path png = dir / "map.png";
        const auto r = run_cli("map " + a.string() + " " + a.string() +
                                   " --out-csv " + csv.string() + " --out-png " +
                                   png.string(),
                               dir);
        CHECK(r.exit_code == 0);
        std::ifstream in(csv);
        std::string line;
        int rows = 0;
        while (std::getline(in, line)) {
            ++rows;
            CHECK(line ==
                  "1.000000,1.000000,1.000000,1.000000,1.000000,1.000000,"
                  "1.000000,1.000000");
        }
        CHECK(rows == 8);

        const Image heat = load_image(png.string());
        CHECK(heat.width == 64);
        CHECK(heat.channels == 1);
        for (auto v : heat.data) CHECK(v == 255);
    }

    SUBCASE("sweep writes csv with metadata") {
        const fs::path csv = dir / "sweep.csv";
        const auto r = run_cli("sweep " + a.string() +
                                   " --blur-sigmas 0 --noise-sigmas 0"
                                   " --noise-mean 0 --metrics csim --seed 9"
                                   " --out " + csv.string(),
                               dir);
        CHECK(r.exit_code == 0);
        std::ifstream in(csv);
        std::string line;
        std::getline(in, line);
        CHECK(line.rfind("# tool: copulasim", 0) == 0);
    }

    SUBCASE("bench writes csv") {
        const fs::path csv = dir / "bench.csv";
        const auto r = run_cli("bench " + a.string() + " " + b.string() +
                                   " --sizes 8 16 --reps 3 --out " + csv.string(),
                               dir);
        CHECK(r.exit_code == 0);
        std::ifstream in(csv);
        int data_rows = 0;
        std::string line;
        while (std::getline(in, line))
            if (!line.empty() && line[0] != '#' && line[0] != 'p') ++data_rows;
        CHECK(data_rows == 2);
    }

    fs::remove_all(dir);
}
