#include "gm2/cli.hpp"

#include <cmath>
#include <numbers>
#include <ostream>

#include <CLI11.hpp>

#include "gm2/error.hpp"
#include "gm2/gauss_geom.hpp"
#include "gm2/io.hpp"
#include "gm2/minkowski_solve.hpp"
#include "gm2/phase_plane.hpp"
#include "gm2/scalar_core.hpp"
#include "gm2/theta.hpp"

namespace gm2::cli {

namespace {

namespace fs = std::filesystem;
using io::Json;

void emit(const Invocation& inv, std::ostream& out, const std::string& name, const Json& j)
{
    io::write_json(inv.out_dir / (name + ".json"), j);
    out << j.dump(2) << '\n';
}

void run_cmd(const Invocation& inv, std::ostream& out, const ConstantSolutions& c)
{
    const ConstantSolutionSet set = constant_solutions(c.C, c.normalized);
    Json j{{"C", c.C}, {"c", c.normalized ? c.C : 2.0 * std::numbers::pi * c.C}};
    j.update(io::to_json(set));
    emit(inv, out, "constant_solutions", j);
}

void run_cmd(const Invocation& inv, std::ostream& out, const Measure& m)
{
    const ConvexPolygon p = io::parse_polygon(io::read_json(m.polygon));
    emit(inv, out, "measure", io::to_json(boundary_measure_polygon(p)));
}

void run_cmd(const Invocation& inv, std::ostream& out, const Density& d)
{
    const SupportSamples h = io::parse_support(io::read_json(d.support));
    validate_support(h);
    const std::vector<double> dens = density_smooth(h, d.normalized);
    std::vector<double> theta(h.n());
    for (std::size_t j = 0; j < h.n(); ++j) theta[j] = h.theta(j);
    Json j{{"n", h.n()}, {"normalized", d.normalized}, {"surface", surface_smooth(h)}};
    if (inv.format == Format::Json) {
        j["theta"] = theta;
        j["density"] = dens;
    } else {
        io::write_csv(inv.out_dir / "density.csv", {"theta", "density"}, {theta, dens});
    }
    emit(inv, out, "density", j);
}

void run_cmd(const Invocation& inv, std::ostream& out, const Theta& t)
{
    GoodPair pair;
    if (t.r) {
        const PairConstant pc = c_from_pair(t.h0, *t.r);
        if (!pc) throw Error(ErrorKind::InvalidPair, "(h0, h0 + r) is not good: " + pc.reason);
        if (std::abs(pc.c - t.c) > 1e-9 * t.c) {
            throw Error(ErrorKind::InvalidPair, "the pair (h0, h0 + r) belongs to c = " +
                                                    io::format_double(pc.c));
        }
        pair = {pc.c, t.h0, *t.r, phi_eval(pc.c, t.h0)};
    } else {
        const auto p = good_pair_from_h0(t.c, t.h0);
        if (!p) throw Error(ErrorKind::InvalidPair, "h0 lies outside the admissible levels of c");
        pair = *p;
    }
    QuadratureConfig cfg;
    if (t.double_exponential) cfg.scheme = QuadratureConfig::Scheme::DoubleExponential;
    const ThetaResult res = theta_eval(pair, cfg);
    Json j{{"pair", io::to_json(pair)}};
    j.update(io::to_json(res));
    j["theta_minus_pi"] = io::number(res.value - std::numbers::pi);
    j["small_r_limit"] = theta_small_r_limit(pair.c);
    emit(inv, out, "theta", j);
}

void run_cmd(const Invocation& inv, std::ostream& out, const ScanTheta& s)
{
    Json scans = Json::array();
    for (std::size_t k = 0; k < s.c_list.size(); ++k) {
        const ThetaScan scan = scan_min_theta(s.c_list[k], s.n_h0);
        Json j = io::to_json(scan);
        std::vector<double> h0;
        std::vector<double> r;
        std::vector<double> theta;
        for (const ThetaPoint& p : scan.points) {
            h0.push_back(p.pair.h0);
            r.push_back(p.pair.r);
            theta.push_back(p.result ? p.result->value : std::nan(""));
        }
        if (inv.format == Format::Json) {
            Json rows = Json::array();
            for (std::size_t i = 0; i < h0.size(); ++i) {
                rows.push_back({h0[i], r[i], io::number(theta[i])});
            }
            j["surface"] = {{"columns", {"h0", "r", "theta"}}, {"rows", rows}};
        } else {
            const std::string name = s.c_list.size() == 1
                                         ? "theta_surface.csv"
                                         : "theta_surface_" + std::to_string(k) + ".csv";
            io::write_csv(inv.out_dir / name, {"h0", "r", "theta"}, {h0, r, theta});
            j["surface_file"] = name;
        }
        scans.push_back(j);
    }
    emit(inv, out, "scan_theta", {{"scans", scans}});
}

void run_cmd(const Invocation& inv, std::ostream& out, const PhasePortrait& p)
{
    const Trajectory t = integrate(p.c, {0.0, p.h0, 0.0}, p.span, p.tol);
    if (inv.format == Format::Csv) {
        std::vector<double> th, h, hp, drift;
        for (const OdeState& s : t.samples) {
            th.push_back(s.theta);
            h.push_back(s.h);
            hp.push_back(s.hp);
            drift.push_back(first_integral(t.c, s.h, s.hp) - t.E0);
        }
        io::write_csv(inv.out_dir / "trajectory.csv", {"theta", "h", "hp", "drift"},
                      {th, h, hp, drift});
    }
    Json j = io::to_json(t, inv.format == Format::Json);
    j["h0"] = p.h0;
    j["span"] = p.span;
    emit(inv, out, "phase_portrait", j);
}

void run_cmd(const Invocation& inv, std::ostream& out, const SearchPeriodic& s)
{
    PeriodicSearchConfig cfg;
    cfg.n_h0 = s.n_h0;
    cfg.k_max = s.k_max;
    emit(inv, out, "search_periodic", io::to_json(search_periodic(s.c_list, cfg)));
}

void run_cmd(const Invocation& inv, std::ostream& out, const Solve& s)
{
    Branch branch;
    if (s.branch == "small") {
        branch = Branch::Small;
    } else if (s.branch == "large") {
        branch = Branch::Large;
    } else {
        throw Error(ErrorKind::Domain, "branch must be small or large");
    }
    std::vector<double> raw = io::parse_density(io::read_json(s.f), s.n);
    if (s.mollify) raw = mollify(raw, *s.mollify);
    const PrescribedData f = validate_f(std::move(raw));
    const SolveResult res = solve_branch(f, branch);
    Json j = io::to_json(res);
    if (s.tau) j["apriori"] = io::to_json(apriori_check(res, f, *s.tau));
    const std::vector<double> dens = density_smooth(res.h);
    if (inv.format == Format::Json) {
        j["density"] = dens;
        j["f"] = f.values;
    } else {
        std::vector<double> theta(f.n());
        for (std::size_t k = 0; k < f.n(); ++k) theta[k] = res.h.theta(k);
        io::write_csv(inv.out_dir / "solution.csv", {"theta", "h", "density", "f"},
                      {theta, res.h.values, dens, f.values});
    }
    emit(inv, out, "solve", j);
}

void run_cmd(const Invocation& inv, std::ostream& out, const IsoCheck& c)
{
    const Body body = io::parse_body(io::read_json(c.body));
    Json j = io::to_json(isoperimetric_check(body));
    j["body"] = std::holds_alternative<ConvexPolygon>(body) ? "polygon" : "support";
    emit(inv, out, "iso_check", j);
}

struct Parsed {
    std::optional<Invocation> inv;
    int exit = 0;
};

Parsed parse(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Planar Gaussian Minkowski problem toolkit", "gm2"};
    app.require_subcommand(1);
    app.fallthrough();
    std::string out_dir = ".";
    std::string format = "csv";
    app.add_option("--out", out_dir, "Output directory (created if missing)");
    app.add_option("--format", format, "Plot data format")->check(CLI::IsMember({"csv", "json"}));

    ConstantSolutions cs;
    auto* s_cs = app.add_subcommand("constant-solutions", "Classify the disk solutions for f = C");
    s_cs->add_option("--C", cs.C, "Constant density C")->required();
    s_cs->add_flag("--normalized", cs.normalized, "Treat --C as c = 2 pi C");

    Measure ms;
    auto* s_ms = app.add_subcommand("measure", "Gaussian surface-area measure of a polygon");
    s_ms->add_option("--polygon", ms.polygon, "Polygon JSON")->required();

    Density ds;
    auto* s_ds = app.add_subcommand("density", "Gaussian surface-area density of support samples");
    s_ds->add_option("--support", ds.support, "Support samples JSON")->required();
    s_ds->add_flag("--normalized", ds.normalized, "Omit the 1/(2 pi) factor");

    Theta th;
    double r_value = 0.0;
    std::string scheme = "trig";
    auto* s_th = app.add_subcommand("theta", "Half period Theta of a good pair");
    s_th->add_option("--c", th.c, "Normalized constant c")->required();
    s_th->add_option("--h0", th.h0, "Lower level h0")->required();
    auto* r_opt = s_th->add_option("--r", r_value, "Gap r (checked against c)");
    s_th->add_option("--scheme", scheme, "Quadrature")->check(CLI::IsMember({"trig", "de"}));

    ScanTheta st;
    auto* s_st = app.add_subcommand("scan-theta", "Minimum of Theta over the good pairs of each c");
    s_st->add_option("--c", st.c_list, "Constants c")->required()->expected(1, -1);
    s_st->add_option("--n", st.n_h0, "Grid points per c");

    PhasePortrait pp;
    auto* s_pp = app.add_subcommand("phase-portrait", "Integrate the orbit through (h0, 0)");
    s_pp->add_option("--c", pp.c, "Normalized constant c")->required();
    s_pp->add_option("--h0", pp.h0, "Initial h")->required();
    s_pp->add_option("--span", pp.span, "Angular span")->required();
    s_pp->add_option("--tol", pp.tol, "Local error tolerance");

    SearchPeriodic sp;
    auto* s_sp = app.add_subcommand("search-periodic", "Search for nonconstant periodic solutions");
    s_sp->add_option("--c", sp.c_list, "Constants c")->required()->expected(1, -1);
    s_sp->add_option("--n", sp.n_h0, "Grid points per c");
    s_sp->add_option("--k-max", sp.k_max, "Largest k in pi/k");

    Solve sv;
    std::size_t n_value = 0;
    double moll = 0.0;
    double tau = 0.0;
    auto* s_sv = app.add_subcommand("solve", "Solve the prescribed-measure equation");
    s_sv->add_option("--f", sv.f, "Density JSON")->required();
    s_sv->add_option("--branch", sv.branch, "small or large")
        ->check(CLI::IsMember({"small", "large"}));
    auto* n_opt = s_sv->add_option("--n", n_value, "Grid size");
    auto* m_opt = s_sv->add_option("--mollify", moll, "Gaussian smoothing bandwidth (radians)");
    auto* t_opt = s_sv->add_option("--tau", tau, "Run the a-priori checks with this tau");

    IsoCheck ic;
    auto* s_ic = app.add_subcommand("iso-check", "Gaussian isoperimetric inequality for a body");
    s_ic->add_option("--body", ic.body, "Polygon or support samples JSON")->required();

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        return {std::nullopt, app.exit(e, out, err) == 0 ? 0 : 2};
    }

    Invocation inv;
    inv.out_dir = out_dir;
    inv.format = format == "json" ? Format::Json : Format::Csv;
    if (s_cs->parsed()) inv.command = cs;
    if (s_ms->parsed()) inv.command = ms;
    if (s_ds->parsed()) inv.command = ds;
    if (s_th->parsed()) {
        if (r_opt->count() > 0) th.r = r_value;
        th.double_exponential = scheme == "de";
        inv.command = th;
    }
    if (s_st->parsed()) inv.command = st;
    if (s_pp->parsed()) inv.command = pp;
    if (s_sp->parsed()) inv.command = sp;
    if (s_sv->parsed()) {
        if (n_opt->count() > 0) sv.n = n_value;
        if (m_opt->count() > 0) sv.mollify = moll;
        if (t_opt->count() > 0) sv.tau = tau;
        inv.command = sv;
    }
    if (s_ic->parsed()) inv.command = ic;
    return {inv, 0};
}

}  // namespace

void dispatch(const Invocation& inv, std::ostream& out)
{
    std::error_code ec;
    fs::create_directories(inv.out_dir, ec);
    if (ec) throw Error(ErrorKind::Io, "cannot create " + inv.out_dir.string() + ": " + ec.message());
    std::visit([&](const auto& cmd) { run_cmd(inv, out, cmd); }, inv.command);
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    const Parsed p = parse(args, out, err);
    if (!p.inv) return p.exit;
    try {
        dispatch(*p.inv, out);
        return 0;
    } catch (const Error& e) {
        err << e.name() << ": " << e.what() << '\n';
        return exit_code(e.kind());
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
}

}  // namespace gm2::cli
