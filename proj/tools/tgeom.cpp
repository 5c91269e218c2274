// tgeom command-line front end.
//
// Exit codes: 0 success / expectations met, 1 expectation mismatch,
// 2 input error, 3 internal numeric failure.

#include <CLI11.hpp>

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tgeom/io.hpp"
#include "tgeom/svg.hpp"
#include "tgeom/tgeom.hpp"

namespace {

using namespace tgeom;
using io::json;

constexpr int kOk = 0;
constexpr int kMismatch = 1;
constexpr int kInputError = 2;
constexpr int kInternal = 3;

int exit_code_for(Errc e) {
    switch (e) {
    case Errc::internal:
    case Errc::degenerate_skeleton:
    case Errc::degenerate_projection: return kInternal;
    default: return kInputError;
    }
}

void emit(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-")
        std::cout << text;
    else
        io::write_file(path, text);
}

Point parse_point(const std::string& s) {
    std::vector<double> c;
    for (const auto& cell : io::split_csv_line(s)) c.push_back(io::parse_double(cell));
    if (c.empty()) throw Error(Errc::parse_error, "empty point");
    return Point(std::move(c));
}

/// "x,y;x,y;..." -> points
std::vector<Point> parse_points(const std::string& s) {
    std::vector<Point> out;
    std::size_t start = 0;
    while (start <= s.size()) {
        const auto pos = s.find(';', start);
        const auto part = s.substr(start, pos == std::string::npos ? std::string::npos : pos - start);
        if (!part.empty()) out.push_back(parse_point(part));
        if (pos == std::string::npos) break;
        start = pos + 1;
    }
    return out;
}

void apply_tolerance(SuiteOptions& opt, const std::string& kv) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw Error(Errc::parse_error, "--tol expects KEY=VALUE, got '" + kv + "'");
    const auto key = kv.substr(0, eq);
    const double v = io::parse_double(kv.substr(eq + 1));
    if (key == "symmetry") opt.tol.symmetry = v;
    else if (key == "dimension") opt.tol.dimension = v;
    else if (key == "linear") opt.tol.linear = v;
    else if (key == "continuity") opt.tol.continuity = v;
    else if (key == "metric") opt.tol.metric = v;
    else if (key == "sample_size") opt.sample_size = static_cast<std::size_t>(v);
    else if (key == "targets") opt.targets = static_cast<std::size_t>(v);
    else if (key == "half_width") opt.half_width = v;
    else if (key == "restarts") opt.restarts = static_cast<int>(v);
    else throw Error(Errc::parse_error, "unknown tolerance key '" + key + "'");
}

std::vector<Expectation> parse_expectations(const std::vector<std::string>& items) {
    std::vector<Expectation> out;
    for (const auto& e : items) {
        auto part = parse_expectation(e);
        out.insert(out.end(), part.begin(), part.end());
    }
    return out;
}

/// Prints one line per expectation; returns kOk when all are met.
int report_expectations(const SuiteReport& rep, const std::vector<Expectation>& expect) {
    int rc = kOk;
    for (const auto& r : evaluate_expectations(rep, expect)) {
        std::cerr << (r.met ? "ok   " : "FAIL ") << to_string(r.expected.id) << " expected "
                  << to_string(r.expected.verdict) << ", got " << (r.actual ? to_string(*r.actual) : "missing")
                  << "\n";
        if (!r.met) rc = kMismatch;
    }
    return rc;
}

DegeneracyOptions degeneracy_options(const json& j, std::uint64_t seed) {
    DegeneracyOptions o;
    o.seed = seed;
    o.starts = j.value("starts", o.starts);
    o.cluster_radius = j.value("cluster_radius", o.cluster_radius);
    o.residual_tol = j.value("residual_tol", o.residual_tol);
    return o;
}

Point json_point(const json& j) { return Point(j.get<std::vector<double>>()); }

struct DistortionFlags {
    double d = 0.01;
    double sigma0 = 0.1;
    double mu = 1.0;
    double c = 1.0;

    DistortionParams params() const { return {.d = d, .sigma0 = sigma0, .c = c, .mu_d = mu}; }
};

void add_distortion_flags(CLI::App* cmd, DistortionFlags& f) {
    cmd->add_option("--d", f.d, "distortion d >= 0")->capture_default_str();
    cmd->add_option("--sigma0", f.sigma0, "threshold sigma0 > 0")->capture_default_str();
    cmd->add_option("--mu", f.mu, "link length mu_d")->capture_default_str();
    cmd->add_option("--c", f.c, "light speed")->capture_default_str();
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Numerical engine for geometries defined by a world function"};
    app.require_subcommand(1);

    std::string geometry_path, out_path;
    std::uint64_t seed = 1;
    std::vector<std::string> tolerances, expectations;

    // check
    auto* check = app.add_subcommand("check", "run conditions I-V, metric axioms and optional degeneracy probes");
    check->add_option("--geometry", geometry_path, "geometry spec JSON")->required();
    check->add_option("--out", out_path, "report JSON (default stdout)");
    check->add_option("--seed", seed, "master seed")->capture_default_str();
    check->add_option("--tol", tolerances, "KEY=VALUE override (repeatable)");
    check->add_option("--expect", expectations, "COND:VERDICT or all-pass (repeatable)");

    // tube-profile
    DistortionFlags tf;
    std::size_t tau_points = 101;
    std::string parametrization = "arc";
    auto* tube = app.add_subcommand("tube-profile", "sample r(tau) of the distorted segment");
    add_distortion_flags(tube, tf);
    tube->add_option("--tau-points", tau_points, "grid size")->capture_default_str();
    tube->add_option("--parametrization", parametrization, "arc | coordinate")->capture_default_str();
    tube->add_option("--out", out_path, "CSV (default stdout)");
    tube->add_option("--seed", seed, "recorded in the output")->capture_default_str();

    // chain
    DistortionFlags cf;
    std::size_t links = 1000, ensemble = 1;
    std::string summary_path;
    auto* chain = app.add_subcommand("chain", "simulate world chains");
    add_distortion_flags(chain, cf);
    chain->add_option("--links", links, "links per chain")->capture_default_str();
    chain->add_option("--ensemble", ensemble, "number of chains (seeds seed..seed+K-1)")->capture_default_str();
    chain->add_option("--seed", seed, "first seed")->capture_default_str();
    chain->add_option("--out", out_path, "chain CSV of the first seed (default stdout)");
    chain->add_option("--summary", summary_path, "summary JSON (default stderr)");

    // scalar
    std::string points_arg, op = "dot";
    auto* scalar = app.add_subcommand("scalar", "evaluate a sigma-algebra quantity");
    scalar->add_option("--geometry", geometry_path, "geometry spec JSON")->required();
    scalar->add_option("--op", op, "sigma | rho | dot | dot4 | gram | collinear")->capture_default_str();
    scalar->add_option("--points", points_arg, "points as 'x,y;x,y;...'")->required();
    scalar->add_option("--out", out_path, "JSON (default stdout)");

    // degeneracy
    std::string p0_arg, dir_arg;
    double a = 1.0, half_width = 2.0;
    auto* degen = app.add_subcommand("degeneracy", "count same-direction fixed-length continuations");
    degen->add_option("--geometry", geometry_path, "geometry spec JSON")->required();
    degen->add_option("--p0", p0_arg, "origin point 'x,y,...'")->required();
    degen->add_option("--dir", dir_arg, "direction vector as 'origin;end'")->required();
    degen->add_option("--a", a, "length a != 0")->capture_default_str();
    degen->add_option("--half-width", half_width, "search box half width around p0")->capture_default_str();
    degen->add_option("--seed", seed, "seed")->capture_default_str();
    degen->add_option("--expect", expectations, "degeneracy_probe:VERDICT");
    degen->add_option("--out", out_path, "JSON (default stdout)");

    // plot
    std::string in_path;
    auto* plot = app.add_subcommand("plot", "SVG from a tube-profile or chain CSV");
    plot->add_option("--in", in_path, "input CSV")->required();
    plot->add_option("--out", out_path, "SVG (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kInputError;
    }

    try {
        if (*check) {
            const auto path = std::filesystem::path(geometry_path);
            const auto spec = json::parse(io::read_file(path), nullptr, false);
            if (spec.is_discarded()) throw Error(Errc::parse_error, "malformed JSON in " + geometry_path);
            const Geometry g = io::geometry_from_json(spec, path.parent_path());
            SuiteOptions opt;
            opt.seed = seed;
            if (spec.contains("suite")) {
                const auto& s = spec["suite"];
                opt.sample_size = s.value("sample_size", opt.sample_size);
                opt.targets = s.value("targets", opt.targets);
                opt.half_width = s.value("half_width", opt.half_width);
                opt.restarts = s.value("restarts", opt.restarts);
            }
            for (const auto& t : tolerances) apply_tolerance(opt, t);
            const auto expect = parse_expectations(expectations);

            SuiteReport rep = run_suite(g, opt);
            if (spec.contains("probes")) {
                for (const auto& pj : spec["probes"]) {
                    const Point p0 = json_point(pj.at("p0"));
                    const auto dir = pj.at("direction");
                    const PointVector v{json_point(dir.at(0)), json_point(dir.at(1))};
                    const double hw = pj.value("half_width", 2.0);
                    rep.reports.push_back(degeneracy_probe(g, p0, v, pj.at("a").get<double>(), Box::around(p0, hw),
                                                           degeneracy_options(pj, seed)));
                }
            }
            json out = io::to_json(rep);
            out["geometry"] = io::geometry_to_json(g);
            emit(out_path, out.dump(2) + "\n");
            return report_expectations(rep, expect);
        }

        if (*tube) {
            SegmentProfileOptions o;
            o.points = tau_points;
            if (parametrization == "arc")
                o.parametrization = Parametrization::arc_fraction;
            else if (parametrization == "coordinate")
                o.parametrization = Parametrization::coordinate_time;
            else
                throw Error(Errc::parse_error, "--parametrization must be arc or coordinate");
            const auto sp = segment_profile(tf.params(), o);
            emit(out_path, io::profile_csv(sp, seed));
            return kOk;
        }

        if (*chain) {
            if (ensemble == 0) throw Error(Errc::invalid_parameter, "--ensemble must be >= 1");
            std::vector<std::uint64_t> seeds;
            for (std::size_t k = 0; k < ensemble; ++k) seeds.push_back(seed + k);
            std::vector<WorldChain> chains;
            const auto summary = run_ensemble(cf.params(), links, seeds, &chains);
            if (summary.max_link_error > 1e-9 || summary.max_parallel_residual > 1e-9)
                throw Error(Errc::internal, "chain verification failed");
            emit(out_path, io::chain_csv(chains.front()));
            const auto text = io::to_json(summary).dump(2) + "\n";
            if (summary_path.empty())
                std::cerr << text;
            else
                io::write_file(summary_path, text);
            return kOk;
        }

        if (*scalar) {
            const Geometry g = io::load_geometry(geometry_path);
            const auto pts = parse_points(points_arg);
            auto need = [&](std::size_t n) {
                if (pts.size() != n)
                    throw Error(Errc::invalid_parameter, op + " needs " + std::to_string(n) + " points");
            };
            json out{{"op", op}};
            if (op == "sigma") {
                need(2);
                out["value"] = g.sigma(pts[0], pts[1]);
            } else if (op == "rho") {
                need(2);
                const auto l = distance(g, pts[0], pts[1]);
                out["value"] = l.magnitude;
                out["class"] = l.is_real() ? "real" : "imaginary";
            } else if (op == "dot") {
                need(3);
                out["value"] = scalar_common_origin(g, pts[0], pts[1], pts[2]);
            } else if (op == "dot4") {
                need(4);
                out["value"] = scalar_general(g, PointVector{pts[0], pts[1]}, PointVector{pts[2], pts[3]});
            } else if (op == "gram") {
                const Skeleton sk(pts);
                out["value"] = gram_determinant(g, sk);
                const auto m = gram_matrix(g, sk);
                json rows = json::array();
                for (Eigen::Index i = 0; i < m.rows(); ++i) {
                    json row = json::array();
                    for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back(m(i, k));
                    rows.push_back(row);
                }
                out["matrix"] = rows;
            } else if (op == "collinear") {
                need(3);
                out["value"] = is_collinear(g, pts[0], pts[1], pts[2]);
            } else {
                throw Error(Errc::parse_error, "unknown --op '" + op + "'");
            }
            emit(out_path, out.dump(2) + "\n");
            return kOk;
        }

        if (*degen) {
            const Geometry g = io::load_geometry(geometry_path);
            const Point p0 = parse_point(p0_arg);
            const auto dir = parse_points(dir_arg);
            if (dir.size() != 2) throw Error(Errc::parse_error, "--dir needs 'origin;end'");
            DegeneracyOptions o;
            o.seed = seed;
            SuiteReport rep{.seed = seed};
            rep.reports.push_back(degeneracy_probe(g, p0, {dir[0], dir[1]}, a, Box::around(p0, half_width), o));
            emit(out_path, io::to_json(rep.reports.front()).dump(2) + "\n");
            return report_expectations(rep, parse_expectations(expectations));
        }

        if (*plot) {
            const auto text = io::read_file(in_path);
            const auto table = io::parse_csv(text);
            if (table.rows.empty()) throw Error(Errc::parse_error, "CSV has no data rows");
            auto column = [&](const std::string& name) {
                const auto idx = table.column(name);
                std::vector<double> v;
                for (const auto& row : table.rows)
                    v.push_back(row[idx].empty() ? std::numeric_limits<double>::quiet_NaN() : io::parse_double(row[idx]));
                return v;
            };
            std::string svg;
            const auto& h = table.header;
            if (std::find(h.begin(), h.end(), "tau") != h.end()) {
                const auto tau = column("tau");
                std::vector<svg::Series> s{{"numeric", tau, column("r_numeric"), false, "#1f77b4"},
                                           {"closed form", tau, column("r_closed_form"), false, "#d62728"}};
                svg = svg::plot(s, "segment radius profile", "tau", "r");
            } else if (std::find(h.begin(), h.end(), "link_index") != h.end()) {
                std::vector<svg::Series> s{{"chain (x, y)", column("x"), column("y"), true, "#2ca02c"}};
                svg = svg::plot(s, "world chain transverse drift", "x", "y");
            } else {
                throw Error(Errc::parse_error, "CSV is neither a tube profile nor a chain");
            }
            if (text.rfind("# seed=", 0) == 0) svg += "<!-- " + text.substr(2, text.find('\n') - 2) + " -->\n";
            emit(out_path, svg);
            return kOk;
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code_for(e.code());
    } catch (const json::exception& e) {
        std::cerr << "error (parse_error): " << e.what() << "\n";
        return kInputError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInternal;
    }
    return kOk;
}
