#include <doctest.h>

#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>

#include "gm2/cli.hpp"
#include "gm2/error.hpp"
#include "gm2/io.hpp"

using namespace gm2;
namespace fs = std::filesystem;

namespace {

/// Scratch directory under the system temp dir, removed on destruction.
struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& tag)
        : path(fs::temp_directory_path() / ("gm2_test_" + tag + "_" + std::to_string(::getpid())))
    {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    fs::path write(const std::string& name, const std::string& text) const
    {
        std::ofstream(path / name, std::ios::binary) << text;
        return path / name;
    }
};

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct RunResult {
    int code;
    std::string out;
    std::string err;
};

RunResult run(std::vector<std::string> args)
{
    std::ostringstream out;
    std::ostringstream err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

io::Json parsed(const RunResult& r) { return io::Json::parse(r.out); }

}  // namespace

TEST_CASE("format_double is shortest round trip")
{
    CHECK(io::format_double(0.1) == "0.1");
    CHECK(io::format_double(1.0) == "1");
    CHECK(io::format_double(-2.5e-300) == "-2.5e-300");
    CHECK(io::format_double(INFINITY) == "inf");
    CHECK(io::format_double(NAN) == "nan");
    const double x = std::numbers::pi / 7;
    CHECK(std::stod(io::format_double(x)) == x);
    CHECK(io::number(NAN).is_null());
}

TEST_CASE("malformed JSON reports line and column")
{
    TempDir dir("parse");
    const auto p = dir.write("bad.json", "{\n  \"vertices\": [[1, 2],\n    [3 4]]\n}\n");
    try {
        (void)io::read_json(p);
        FAIL("expected ParseError");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Parse);
        CHECK(std::string(e.what()).find("bad.json:3:") != std::string::npos);
    }
    try {
        (void)io::read_json(dir.path / "missing.json");
        FAIL("expected IoError");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Io);
    }
}

TEST_CASE("schema errors name the field")
{
    try {
        (void)io::parse_polygon(io::Json::parse(R"({"vertices": [[1, 1], [-1, "a"], [0, -1]]})"));
        FAIL("expected ParseError");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Parse);
        CHECK(std::string(e.what()).find("vertices[1][1]") != std::string::npos);
    }
    CHECK_THROWS_AS((void)io::parse_support(io::Json::parse(R"({"n": 3, "values": [1, 1]})")), Error);
}

TEST_CASE("density input forms")
{
    const auto plain = io::parse_density(io::Json::parse(R"({"fourier_cos": [0.05, 0.015]})"), 16);
    const auto pairs = io::parse_density(io::Json::parse(R"({"fourier_cos": [[0, 0.05], [2, 0.015]]})"), 16);
    REQUIRE(plain.size() == 16);
    for (std::size_t j = 0; j < 16; ++j) {
        CHECK(plain[j] == doctest::Approx(0.05 + 0.015 * std::cos(2 * 2 * std::numbers::pi * j / 16)).epsilon(1e-14));
        CHECK(plain[j] == pairs[j]);
    }
    try {
        (void)io::parse_density(io::Json::parse(R"({"fourier_cos": [[0, 0.05], [3, 0.01]]})"), 16);
        FAIL("expected ParseError");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Parse);
        CHECK(std::string(e.what()).find("odd mode 3") != std::string::npos);
    }
    CHECK_THROWS_AS((void)io::parse_density(io::Json::parse(R"({"fourier_cos": [0.05]})"), std::nullopt), Error);
    CHECK_THROWS_AS((void)io::parse_density(io::Json::parse(R"({"n": 4, "values": [1, 1, 1, 1]})"), 8), Error);
}

TEST_CASE("exit codes are distinct and nonzero")
{
    std::vector<int> codes;
    for (int k = 0; k <= static_cast<int>(ErrorKind::Io); ++k) {
        const int c = exit_code(static_cast<ErrorKind>(k));
        CHECK(c != 0);
        CHECK(c != 1);
        CHECK(c != 2);
        for (int prev : codes) CHECK(prev != c);
        codes.push_back(c);
        CHECK_FALSE(error_name(static_cast<ErrorKind>(k)).empty());
    }
}

TEST_CASE("constant-solutions around the threshold")
{
    TempDir dir("const");
    const auto two = run({"--out", dir.path.string(), "constant-solutions", "--C", "0.05"});
    REQUIRE(two.code == 0);
    CHECK(parsed(two)["count"] == 2);
    CHECK(parsed(two)["r2"].get<double>() < 1.0);
    CHECK(parsed(two)["r1"].get<double>() > 1.0);
    CHECK(fs::exists(dir.path / "constant_solutions.json"));

    CHECK(parsed(run({"--out", dir.path.string(), "constant-solutions", "--C", "0.0965"}))["count"] == 2);
    const std::string thr = io::format_double(std::exp(-0.5) / (2 * std::numbers::pi));
    CHECK(parsed(run({"--out", dir.path.string(), "constant-solutions", "--C", thr}))["count"] == 1);
    CHECK(parsed(run({"--out", dir.path.string(), "constant-solutions", "--C", "0.1"}))["count"] == 0);

    const auto bad = run({"--out", dir.path.string(), "constant-solutions", "--C", "-1"});
    CHECK(bad.code == exit_code(ErrorKind::Domain));
    CHECK(bad.err.rfind("DomainError:", 0) == 0);
}

TEST_CASE("usage errors exit 2")
{
    CHECK(run({}).code == 2);
    CHECK(run({"theta", "--c", "0.5"}).code == 2);
    CHECK(run({"no-such-command"}).code == 2);
    CHECK(run({"--format", "xml", "constant-solutions", "--C", "0.05"}).code == 2);
}

TEST_CASE("file errors map to their exit codes")
{
    TempDir dir("files");
    const auto bad = dir.write("bad.json", "{\"vertices\": [1,\n");
    const auto r = run({"--out", dir.path.string(), "measure", "--polygon", bad.string()});
    CHECK(r.code == exit_code(ErrorKind::Parse));
    CHECK(r.err.rfind("ParseError:", 0) == 0);
    CHECK(r.err.find(":2:") != std::string::npos);
    const auto missing = run({"--out", dir.path.string(), "measure", "--polygon", (dir.path / "nope.json").string()});
    CHECK(missing.code == exit_code(ErrorKind::Io));
    CHECK(missing.err.rfind("IoError:", 0) == 0);
}

TEST_CASE("measure, density and iso-check commands")
{
    TempDir dir("geom");
    const auto sq = dir.write("square.json", R"({"vertices": [[1, 1], [-1, 1], [-1, -1], [1, -1]]})");
    const auto m = run({"--out", dir.path.string(), "measure", "--polygon", sq.string()});
    REQUIRE(m.code == 0);
    CHECK(parsed(m)["atoms"].size() == 4);

    const auto iso = run({"--out", dir.path.string(), "iso-check", "--body", sq.string()});
    REQUIRE(iso.code == 0);
    CHECK(parsed(iso)["holds"] == true);
    CHECK(parsed(iso)["body"] == "polygon");

    const auto disk = dir.write("disk.json", R"({"n": 8, "values": [1, 1, 1, 1, 1, 1, 1, 1]})");
    const auto d = run({"--out", dir.path.string(), "density", "--support", disk.string()});
    REQUIRE(d.code == 0);
    const std::string csv = slurp(dir.path / "density.csv");
    CHECK(csv.rfind("theta,density\n0,", 0) == 0);

    const auto dent = dir.write("dent.json", R"({"n": 8, "values": [1, 1, 1, 0.5, 1, 1, 1, 1]})");
    CHECK(run({"--out", dir.path.string(), "density", "--support", dent.string()}).code ==
          exit_code(ErrorKind::ConvexityViolation));
}

TEST_CASE("theta command and pair consistency")
{
    TempDir dir("theta");
    const auto t = run({"--out", dir.path.string(), "theta", "--c", "0.5", "--h0", "0.3"});
    REQUIRE(t.code == 0);
    const auto j = parsed(t);
    CHECK(j["theta"].get<double>() > std::numbers::pi);
    const std::string r = io::format_double(j["pair"]["r"].get<double>());
    CHECK(run({"--out", dir.path.string(), "theta", "--c", "0.5", "--h0", "0.3", "--r", r, "--scheme", "de"}).code == 0);
    CHECK(run({"--out", dir.path.string(), "theta", "--c", "0.4", "--h0", "0.3", "--r", r}).code ==
          exit_code(ErrorKind::InvalidPair));
    CHECK(run({"--out", dir.path.string(), "theta", "--c", "0.5", "--h0", "0.9"}).code ==
          exit_code(ErrorKind::InvalidPair));
}

TEST_CASE("scan-theta writes the surface table")
{
    TempDir dir("scan");
    const auto s = run({"--out", dir.path.string(), "scan-theta", "--c", "0.5", "--n", "8"});
    REQUIRE(s.code == 0);
    CHECK(parsed(s)["scans"][0]["min_theta"].get<double>() > std::numbers::pi);
    const std::string csv = slurp(dir.path / "theta_surface.csv");
    CHECK(csv.rfind("h0,r,theta\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 9);
    const auto two = run({"--out", dir.path.string(), "scan-theta", "--c", "0.3", "0.5", "--n", "4"});
    REQUIRE(two.code == 0);
    CHECK(fs::exists(dir.path / "theta_surface_0.csv"));
    CHECK(fs::exists(dir.path / "theta_surface_1.csv"));
}

TEST_CASE("phase-portrait and search-periodic")
{
    TempDir dir("orbit");
    const auto p = run({"--out", dir.path.string(), "phase-portrait", "--c", "0.5", "--h0", "0.3", "--span", "8.4"});
    REQUIRE(p.code == 0);
    CHECK(parsed(p)["max_drift"].get<double>() < 1e-8);
    CHECK(slurp(dir.path / "trajectory.csv").rfind("theta,h,hp,drift\n", 0) == 0);

    const auto s = run({"--out", dir.path.string(), "search-periodic", "--c", "0.3", "0.65", "--n", "8"});
    REQUIRE(s.code == 0);
    const auto j = parsed(s);
    CHECK(j["found_nonconstant"].empty());
    CHECK(j["entries"][1]["constant_only"] == true);
    CHECK(j["entries"][1]["margin"].is_null());
}

TEST_CASE("solve command: CSV, JSON and rejected inputs")
{
    TempDir dir("solve");
    const auto f = dir.write("f.json", R"({"fourier_cos": [0.05, 0.015]})");
    const auto s = run({"--out", dir.path.string(), "solve", "--f", f.string(), "--n", "64", "--tau", "29"});
    REQUIRE(s.code == 0);
    const auto j = parsed(s);
    CHECK(j["branch"] == "small");
    CHECK(j["n"] == 64);
    CHECK(j["gamma2"].get<double>() < 0.5);
    CHECK(j.contains("apriori"));
    CHECK(slurp(dir.path / "solution.csv").rfind("theta,h,density,f\n", 0) == 0);

    const auto large = run({"--out", dir.path.string(), "--format", "json", "solve", "--f", f.string(), "--n", "64", "--branch", "large"});
    REQUIRE(large.code == 0);
    CHECK(parsed(large)["gamma2"].get<double>() > 0.5);
    CHECK(parsed(large)["density"].size() == 64);

    const auto heavy = dir.write("heavy.json", R"({"fourier_cos": [0.07]})");
    CHECK(run({"--out", dir.path.string(), "solve", "--f", heavy.string(), "--n", "64"}).code ==
          exit_code(ErrorKind::L1TooLarge));
    const auto odd = dir.write("odd.json", R"({"fourier_cos": [[0, 0.05], [1, 0.01]]})");
    const auto r = run({"--out", dir.path.string(), "solve", "--f", odd.string(), "--n", "64"});
    CHECK(r.code == exit_code(ErrorKind::Parse));
    CHECK(r.err.find("odd mode") != std::string::npos);
}

TEST_CASE("identical invocations produce byte-identical files")
{
    TempDir a("det_a");
    TempDir b("det_b");
    const auto f = a.write("f.json", R"({"fourier_cos": [0.05, 0.01, 0.004]})");
    for (const auto* d : {&a, &b}) {
        REQUIRE(run({"--out", d->path.string(), "solve", "--f", f.string(), "--n", "32"}).code == 0);
        REQUIRE(run({"--out", d->path.string(), "scan-theta", "--c", "0.3", "--n", "16"}).code == 0);
        REQUIRE(run({"--out", d->path.string(), "phase-portrait", "--c", "0.3", "--h0", "0.2", "--span", "3"}).code == 0);
    }
    for (const char* name : {"solution.csv", "solve.json", "theta_surface.csv", "scan_theta.json", "trajectory.csv",
                             "phase_portrait.json"}) {
        CHECK(slurp(a.path / name) == slurp(b.path / name));
    }
}
