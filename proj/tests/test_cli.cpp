#include <sys/wait.h>
#include <unistd.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include "doctest.h"

namespace {

namespace fs = std::filesystem;

struct RunResult {
    int exit_code = -1;
    std::string output;  // stdout + stderr
};

RunResult run_cli(const std::string& args) {
    const char* cli = std::getenv("PHASOR_CLI");
    REQUIRE(cli != nullptr);
    const std::string cmd = std::string(cli) + " " + args + " 2>&1";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    RunResult res;
    char buf[512];
    while (std::size_t n = std::fread(buf, 1, sizeof buf, pipe)) res.output.append(buf, n);
    const int status = pclose(pipe);
    res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return res;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), {});
}

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("phasor_cli_" + std::to_string(::getpid()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("cli: render is deterministic and honors the format") {
    TempDir tmp;
    const std::string out1 = (tmp.path / "a.ppm").string();
    const std::string out2 = (tmp.path / "b.ppm").string();
    const std::string args =
        "render -f \"exp(1/z)\" --frame -0.5,0.5,-0.5,0.5 --res 64x64 --scheme plain -o ";
    CHECK(run_cli(args + out1).exit_code == 0);
    CHECK(run_cli(args + out2).exit_code == 0);
    const std::string a = slurp(out1), b = slurp(out2);
    CHECK(a.size() > 64 * 64 * 3);
    CHECK(a == b);
    CHECK(a.substr(0, 3) == "P6\n");

    const std::string png = (tmp.path / "c.png").string();
    CHECK(run_cli("render -f \"z\" --res 16x16 -o " + png).exit_code == 0);
    const std::string pbytes = slurp(png);
    CHECK(pbytes.substr(1, 3) == "PNG");
}

TEST_CASE("cli: analyze count prints the winding") {
    RunResult r = run_cli("analyze count -f \"(z-1)/(z^2+z+1)\" --rect -2,2,-2,2");
    CHECK(r.exit_code == 0);
    CHECK(r.output == "-1\n");
}

TEST_CASE("cli: analyze locate emits the report format") {
    RunResult r = run_cli("analyze locate -f \"z^2*(z-1)\" --rect -2,2,-2,2 --min-box 1e-3");
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("zero ") != std::string::npos);
    CHECK(r.output.find("net 3") != std::string::npos);
}

TEST_CASE("cli: boundary solve rejects nonzero chromatic number with exit 2") {
    TempDir tmp;
    const fs::path ring = tmp.path / "ring.txt";
    {
        std::ofstream out(ring);
        out << 64 << "\n";
        char line[80];
        for (int k = 0; k < 64; ++k) {
            const double t = 2.0 * 3.141592653589793 * k / 64.0;
            std::snprintf(line, sizeof line, "%.17g %.17g\n", std::cos(t), std::sin(t));
            out << line;
        }
    }
    RunResult r = run_cli("boundary solve -B " + ring.string());
    CHECK(r.exit_code == 2);
    CHECK(r.output.find("nonzero chromatic number") != std::string::npos);
}

TEST_CASE("cli: usage errors exit 1, --help exits 0") {
    CHECK(run_cli("analyze count --rect -2,2,-2,2").exit_code == 1);  // missing -f
    CHECK(run_cli("--help").exit_code == 0);
    CHECK(run_cli("render --help").exit_code == 0);
    CHECK(run_cli("nonsense").exit_code == 1);
    CHECK(run_cli("render -f \"z\" --res 3x3 --scheme nope -o /tmp/x.ppm").exit_code == 2);
}

TEST_CASE("cli: config file supplies defaults, flags override") {
    TempDir tmp;
    const fs::path cfg = tmp.path / "phasor.toml";
    {
        std::ofstream out(cfg);
        out << "[analyze.count]\n";
        out << "function = \"z^3\"\n";
        out << "rect = \"-0.5,0.5,-0.5,0.5\"\n";
    }
    RunResult r = run_cli("analyze count --config " + cfg.string());
    CHECK(r.exit_code == 0);
    CHECK(r.output == "3\n");
    // flag wins over the config value
    RunResult s = run_cli("analyze count -f \"z^2\" --config " + cfg.string());
    CHECK(s.exit_code == 0);
    CHECK(s.output == "2\n");
    // unknown keys are rejected
    {
        std::ofstream out(cfg, std::ios::app);
        out << "substitute = 1\n";
    }
    CHECK(run_cli("analyze count --config " + cfg.string()).exit_code == 1);
}

TEST_CASE("cli: probes, periods, orbits, sequences") {
    RunResult probe =
        run_cli("analyze probe -f \"1/z^3\" --center 0,0 --radii 0.2,0.1 --color-turn 0.1");
    CHECK(probe.exit_code == 0);
    CHECK(probe.output == "0.2 3\n0.1 3\n");

    RunResult period = run_cli("analyze period -f \"exp(2*z+1)\" --rect 0.3,1.7,0.2,1.3");
    CHECK(period.exit_code == 0);
    CHECK(period.output.substr(0, 8) == "striped ");

    RunResult orbit = run_cli("flow orbits -f \"z\" --start 0.5,0 --reversed --domain -1,1,-1,1");
    CHECK(orbit.exit_code == 0);
    CHECK(orbit.output.find("reached-zero") == 0);

    RunResult seq = run_cli("flow sequence --zeros \"0.5,0;-0.5,0\"");
    CHECK(seq.exit_code == 0);
    CHECK(seq.output.find("SEQUENCE\n1 2\n") != std::string::npos);
}

TEST_CASE("cli: wilmshurst demo runs with zero required flags") {
    TempDir tmp;
    RunResult r = run_cli("demo wilmshurst --outdir " + tmp.path.string());
    CHECK(r.exit_code == 0);
    CHECK(fs::exists(tmp.path / "wilmshurst.png"));
}
