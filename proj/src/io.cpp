#include "gm2/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "gm2/error.hpp"

namespace gm2::io {

namespace {

[[noreturn]] void field_error(const std::string& field, const std::string& what)
{
    throw Error(ErrorKind::Parse, "field '" + field + "': " + what);
}

double as_number(const Json& j, const std::string& field)
{
    if (!j.is_number()) field_error(field, "expected a number");
    const double x = j.get<double>();
    if (!std::isfinite(x)) field_error(field, "expected a finite number");
    return x;
}

const Json& member(const Json& j, const char* key)
{
    if (!j.is_object()) throw Error(ErrorKind::Parse, "expected a JSON object at top level");
    const auto it = j.find(key);
    if (it == j.end()) field_error(key, "missing");
    return *it;
}

std::vector<double> number_array(const Json& j, const std::string& field)
{
    if (!j.is_array()) field_error(field, "expected an array of numbers");
    std::vector<double> out;
    out.reserve(j.size());
    for (std::size_t i = 0; i < j.size(); ++i) {
        out.push_back(as_number(j[i], field + "[" + std::to_string(i) + "]"));
    }
    return out;
}

std::size_t as_count(const Json& j, const std::string& field)
{
    if (!j.is_number_integer() || j.get<long long>() < 0) {
        field_error(field, "expected a nonnegative integer");
    }
    return j.get<std::size_t>();
}

Json array_of(const std::vector<double>& xs)
{
    Json a = Json::array();
    for (const double x : xs) a.push_back(number(x));
    return a;
}

}  // namespace

std::string format_double(double x)
{
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return {buf, res.ptr};
}

Json number(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

Json read_json(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::Io, "cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    const std::string text = ss.str();
    try {
        return Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        std::size_t line = 1;
        std::size_t col = 1;
        const std::size_t stop = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
        for (std::size_t i = 0; i < stop; ++i) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        throw Error(ErrorKind::Parse, path.string() + ":" + std::to_string(line) + ":" +
                                          std::to_string(col) + ": malformed JSON");
    }
}

void write_json(const std::filesystem::path& path, const Json& j)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::Io, "cannot write " + path.string());
    out << j.dump(2) << '\n';
    if (!out) throw Error(ErrorKind::Io, "write failed for " + path.string());
}

void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& columns)
{
    if (header.size() != columns.size()) {
        throw Error(ErrorKind::Domain, "CSV header and column counts differ");
    }
    const std::size_t rows = columns.empty() ? 0 : columns.front().size();
    for (const auto& c : columns) {
        if (c.size() != rows) throw Error(ErrorKind::Domain, "CSV columns differ in length");
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::Io, "cannot write " + path.string());
    for (std::size_t k = 0; k < header.size(); ++k) out << (k ? "," : "") << header[k];
    out << '\n';
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t k = 0; k < columns.size(); ++k) {
            out << (k ? "," : "") << format_double(columns[k][r]);
        }
        out << '\n';
    }
    if (!out) throw Error(ErrorKind::Io, "write failed for " + path.string());
}

ConvexPolygon parse_polygon(const Json& j)
{
    const Json& v = member(j, "vertices");
    if (!v.is_array()) field_error("vertices", "expected an array of [x, y] pairs");
    std::vector<Point2> pts;
    pts.reserve(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        const std::string f = "vertices[" + std::to_string(i) + "]";
        if (!v[i].is_array() || v[i].size() != 2) field_error(f, "expected [x, y]");
        pts.push_back({as_number(v[i][0], f + "[0]"), as_number(v[i][1], f + "[1]")});
    }
    return ConvexPolygon::from_vertices(std::move(pts));
}

SupportSamples parse_support(const Json& j)
{
    const std::size_t n = as_count(member(j, "n"), "n");
    SupportSamples s{number_array(member(j, "values"), "values")};
    if (s.values.size() != n) {
        field_error("values", "has " + std::to_string(s.values.size()) + " entries, n = " +
                                  std::to_string(n));
    }
    return s;
}

Body parse_body(const Json& j)
{
    if (j.is_object() && j.contains("vertices")) return parse_polygon(j);
    return parse_support(j);
}

std::vector<double> parse_density(const Json& j, std::optional<std::size_t> grid_n)
{
    if (!j.is_object()) throw Error(ErrorKind::Parse, "expected a JSON object at top level");
    if (j.contains("fourier_cos")) {
        if (!grid_n) field_error("fourier_cos", "needs a grid size");
        const Json& a = j["fourier_cos"];
        if (!a.is_array()) field_error("fourier_cos", "expected an array");
        std::vector<double> coeffs;
        for (std::size_t i = 0; i < a.size(); ++i) {
            const std::string f = "fourier_cos[" + std::to_string(i) + "]";
            if (a[i].is_array()) {
                if (a[i].size() != 2 || !a[i][0].is_number_integer()) {
                    field_error(f, "expected [k, a_k] with integer k");
                }
                const long long k = a[i][0].get<long long>();
                if (k < 0) field_error(f, "mode must be nonnegative");
                if (k % 2 != 0) field_error(f, "odd mode " + std::to_string(k) + " is not even data");
                const auto m = static_cast<std::size_t>(k / 2);
                if (coeffs.size() <= m) coeffs.resize(m + 1, 0.0);
                coeffs[m] += as_number(a[i][1], f + "[1]");
            } else {
                if (coeffs.size() <= i) coeffs.resize(i + 1, 0.0);
                coeffs[i] += as_number(a[i], f);
            }
        }
        if (j.contains("n") && as_count(j["n"], "n") != *grid_n) {
            field_error("n", "disagrees with the requested grid size");
        }
        return sample_fourier_cos(coeffs, *grid_n);
    }
    const std::size_t n = as_count(member(j, "n"), "n");
    if (grid_n && *grid_n != n) {
        field_error("n", "is " + std::to_string(n) + " but the requested grid size is " +
                             std::to_string(*grid_n));
    }
    std::vector<double> values = number_array(member(j, "values"), "values");
    if (values.size() != n) {
        field_error("values", "has " + std::to_string(values.size()) + " entries, n = " +
                                  std::to_string(n));
    }
    return values;
}

Json to_json(const ConvexPolygon& p)
{
    Json v = Json::array();
    for (const Point2& q : p.vertices()) v.push_back({q.x, q.y});
    return {{"vertices", v}};
}

Json to_json(const SupportSamples& s) { return {{"n", s.n()}, {"values", array_of(s.values)}}; }

Json to_json(const DiscreteMeasure& m)
{
    Json atoms = Json::array();
    for (const Atom& a : m.atoms) atoms.push_back({a.angle, a.weight});
    return {{"atoms", atoms}, {"total", m.total()}};
}

Json to_json(const ConstantSolutionSet& s)
{
    Json j{{"count", solution_count(s)}};
    if (const auto* one = std::get_if<OneConstantSolution>(&s)) j["r"] = one->t;
    if (const auto* two = std::get_if<TwoConstantSolutions>(&s)) {
        j["r2"] = two->r2;
        j["r1"] = two->r1;
    }
    return j;
}

Json to_json(const GoodPair& p)
{
    return {{"c", p.c}, {"h0", p.h0}, {"r", p.r}, {"E", p.E}};
}

Json to_json(const ThetaResult& r)
{
    return {{"theta", number(r.value)},
            {"est_error", r.est_error ? number(*r.est_error) : Json(nullptr)},
            {"divergent", r.divergent()},
            {"endpoint_flags", {r.endpoint_flags[0], r.endpoint_flags[1]}},
            {"levels", r.levels}};
}

Json to_json(const ThetaScan& s)
{
    Json j{{"c", s.c},
           {"n_h0", s.points.size()},
           {"min_theta", number(s.min_theta)},
           {"margin", number(s.margin())},
           {"max_est_error", number(s.max_est_error())},
           {"failures", s.failures}};
    if (s.argmin) j["argmin"] = to_json(s.points[*s.argmin].pair);
    Json fails = Json::array();
    for (const ThetaPoint& p : s.points) {
        if (!p.failure.empty()) fails.push_back({{"h0", p.pair.h0}, {"error", p.failure}});
    }
    j["failure_details"] = fails;
    return j;
}

Json to_json(const PeriodicSearchReport& r)
{
    Json found = Json::array();
    for (const NonconstantCandidate& c : r.found_nonconstant) {
        found.push_back({{"c", c.c}, {"h0", c.h0}, {"hp0", 0.0}, {"theta", c.theta}, {"k", c.k}});
    }
    Json entries = Json::array();
    for (const PeriodicSearchEntry& e : r.entries) {
        entries.push_back({{"c", e.c},
                           {"constant_only", e.constant_only},
                           {"points", e.points},
                           {"min_theta", number(e.min_theta)},
                           {"margin", number(e.margin)},
                           {"max_oracle_gap", e.max_oracle_gap},
                           {"failures", e.failures}});
    }
    return {{"c_grid", array_of(r.c_grid)},
            {"found_nonconstant", found},
            {"per_c_margin", array_of(r.per_c_margin)},
            {"entries", entries}};
}

Json to_json(const SolveResult& r)
{
    return {{"branch", branch_name(r.branch)},
            {"n", r.h.n()},
            {"h_values", array_of(r.h.values)},
            {"residual_inf", r.residual_inf},
            {"gamma2", r.gamma2},
            {"perimeter", r.perimeter},
            {"c0_used", r.c0_used},
            {"t_reached", r.t_reached},
            {"newton_iterations", r.newton_iterations},
            {"continuation_steps", r.continuation_steps}};
}

Json to_json(const AprioriReport& r)
{
    return {{"tau", r.tau},           {"tau_prime", r.tau_prime}, {"h_min", r.h_min},
            {"h_max", r.h_max},       {"h_lower", r.h_lower},     {"h_upper", r.h_upper},
            {"curv_min", r.curv_min}, {"curv_max", r.curv_max},   {"grad_min", r.grad_min},
            {"grad_max", r.grad_max}};
}

Json to_json(const IsoperimetricReport& r)
{
    return {{"gamma2", r.gamma},
            {"surface", r.surface},
            {"bound", r.bound},
            {"slack", r.slack()},
            {"holds", r.holds}};
}

Json to_json(const Trajectory& t, bool with_samples)
{
    Json j{{"c", t.c}, {"E0", t.E0}, {"max_drift", t.max_drift}, {"samples", t.samples.size()}};
    if (with_samples) {
        Json rows = Json::array();
        for (const OdeState& s : t.samples) {
            rows.push_back({s.theta, s.h, s.hp, first_integral(t.c, s.h, s.hp) - t.E0});
        }
        j["columns"] = {"theta", "h", "hp", "drift"};
        j["rows"] = rows;
    }
    return j;
}

}  // namespace gm2::io
