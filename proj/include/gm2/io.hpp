#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "gm2/gauss_geom.hpp"
#include "gm2/minkowski_solve.hpp"
#include "gm2/phase_plane.hpp"
#include "gm2/scalar_core.hpp"
#include "gm2/theta.hpp"

namespace gm2::io {

using Json = nlohmann::ordered_json;

/// Shortest decimal string that parses back to the same double; '.' as the
/// decimal separator regardless of locale. Non-finite values print as
/// "inf", "-inf" or "nan".
[[nodiscard]] std::string format_double(double x);

/// Reads and parses a JSON file. Throws Io when the file cannot be read and
/// Parse with the line and column of a syntax error.
[[nodiscard]] Json read_json(const std::filesystem::path& path);

/// Writes `j` indented by two spaces with a trailing newline. Throws Io.
void write_json(const std::filesystem::path& path, const Json& j);

/// CSV with a header row; every cell is format_double. Throws Io.
void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& columns);

/// Finite doubles as numbers, non-finite ones as null.
[[nodiscard]] Json number(double x);

// Input schemas. Field errors throw Parse naming the offending field.

/// {"vertices": [[x, y], ...]}
[[nodiscard]] ConvexPolygon parse_polygon(const Json& j);
/// {"n": N, "values": [...]}
[[nodiscard]] SupportSamples parse_support(const Json& j);
/// A polygon when "vertices" is present, support samples otherwise.
[[nodiscard]] Body parse_body(const Json& j);

/**
 * Density samples for the solver. Accepts {"n": N, "values": [...]} or
 * {"fourier_cos": [a0, a2, a4, ...]}, the coefficients of cos(k theta) for
 * k = 0, 2, 4, ...; the second form may instead list [k, a_k] pairs, where
 * an odd k is rejected. grid_n must match "n" when both are given and is
 * required for the Fourier form.
 */
[[nodiscard]] std::vector<double> parse_density(const Json& j, std::optional<std::size_t> grid_n);

// Output schemas.

[[nodiscard]] Json to_json(const ConvexPolygon& p);
[[nodiscard]] Json to_json(const SupportSamples& s);
/// {"atoms": [[angle, weight], ...], "total": w}
[[nodiscard]] Json to_json(const DiscreteMeasure& m);
[[nodiscard]] Json to_json(const ConstantSolutionSet& s);
[[nodiscard]] Json to_json(const GoodPair& p);
[[nodiscard]] Json to_json(const ThetaResult& r);
[[nodiscard]] Json to_json(const ThetaScan& s);
[[nodiscard]] Json to_json(const PeriodicSearchReport& r);
/// {branch, n, h_values, residual_inf, gamma2, perimeter, c0_used, t_reached}
[[nodiscard]] Json to_json(const SolveResult& r);
[[nodiscard]] Json to_json(const AprioriReport& r);
[[nodiscard]] Json to_json(const IsoperimetricReport& r);
[[nodiscard]] Json to_json(const Trajectory& t, bool with_samples);

}  // namespace gm2::io
