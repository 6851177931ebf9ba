#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace gm2::cli {

struct ConstantSolutions {
    double C = 0.0;
    bool normalized = false;
};
struct Measure {
    std::filesystem::path polygon;
};
struct Density {
    std::filesystem::path support;
    bool normalized = false;
};
struct Theta {
    double c = 0.0;
    double h0 = 0.0;
    std::optional<double> r;
    bool double_exponential = false;
};
struct ScanTheta {
    std::vector<double> c_list;
    std::size_t n_h0 = 64;
};
struct PhasePortrait {
    double c = 0.0;
    double h0 = 0.0;
    double span = 0.0;
    double tol = 1e-10;
};
struct SearchPeriodic {
    std::vector<double> c_list;
    std::size_t n_h0 = 64;
    int k_max = 8;
};
struct Solve {
    std::filesystem::path f;
    std::string branch = "small";
    std::optional<std::size_t> n;
    std::optional<double> mollify;
    std::optional<double> tau;
};
struct IsoCheck {
    std::filesystem::path body;
};

using Command = std::variant<ConstantSolutions, Measure, Density, Theta, ScanTheta, PhasePortrait,
                             SearchPeriodic, Solve, IsoCheck>;

enum class Format { Csv, Json };

struct Invocation {
    Command command;
    std::filesystem::path out_dir = ".";
    Format format = Format::Csv;
};

/**
 * Runs the command, writes its JSON result (and CSV plot data when the format
 * is csv) under out_dir, and echoes the JSON result to `out`. Library errors
 * propagate as gm2::Error.
 */
void dispatch(const Invocation& inv, std::ostream& out);

/// Full front end: parses argv, dispatches, and maps failures to exit codes
/// (0 success, 1 unexpected, 2 usage, exit_code(kind) for library errors)
/// with the error name on `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace gm2::cli
