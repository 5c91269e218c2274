#pragma once

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include <json.hpp>

#include "tgeom/checker.hpp"
#include "tgeom/envelope.hpp"
#include "tgeom/error.hpp"
#include "tgeom/spacetime.hpp"
#include "tgeom/worldfunc.hpp"

namespace tgeom::io {

using json = nlohmann::json;

/// Shortest-safe text for a double: 17 significant digits, '.' decimal, locale free.
inline std::string format_double(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

inline double parse_double(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    double v = 0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size())
        throw Error(Errc::parse_error, "not a number: '" + std::string(s) + "'");
    return v;
}

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(Errc::parse_error, "cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_file(const std::filesystem::path& path, std::string_view text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(Errc::parse_error, "cannot write " + path.string());
    out << text;
}

// ---------------------------------------------------------------------------
// CSV

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    std::size_t column(std::string_view name) const {
        for (std::size_t i = 0; i < header.size(); ++i)
            if (header[i] == name) return i;
        throw Error(Errc::parse_error, "missing CSV column '" + std::string(name) + "'");
    }
};

inline std::vector<std::string> split_csv_line(std::string_view line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find(',', start);
        std::string cell(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        while (!cell.empty() && (cell.back() == '\r' || cell.back() == ' ')) cell.pop_back();
        while (!cell.empty() && cell.front() == ' ') cell.erase(cell.begin());
        out.push_back(std::move(cell));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

/// Header line required; blank lines and lines starting with '#' are skipped.
inline CsvTable parse_csv(std::string_view text) {
    CsvTable t;
    std::size_t start = 0;
    bool have_header = false;
    while (start < text.size()) {
        auto end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = text.substr(start, end - start);
        start = end + 1;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (line.empty() || line.front() == '#') continue;
        auto cells = split_csv_line(line);
        if (!have_header) {
            t.header = std::move(cells);
            have_header = true;
        } else {
            if (cells.size() != t.header.size())
                throw Error(Errc::parse_error, "CSV row has " + std::to_string(cells.size()) + " cells, header has " +
                                                   std::to_string(t.header.size()));
            t.rows.push_back(std::move(cells));
        }
    }
    if (!have_header) throw Error(Errc::parse_error, "empty CSV");
    return t;
}

/// points CSV: point_id,x0,x1,...
inline std::vector<LabeledPoint> parse_points_csv(std::string_view text) {
    const auto t = parse_csv(text);
    if (t.header.size() < 2) throw Error(Errc::parse_error, "points CSV needs an id and at least one coordinate");
    std::vector<LabeledPoint> out;
    for (const auto& row : t.rows) {
        std::vector<double> c;
        for (std::size_t i = 1; i < row.size(); ++i) c.push_back(parse_double(row[i]));
        out.push_back({row[0], Point(std::move(c))});
    }
    return out;
}

/// sigma CSV: point_id_a,point_id_b,sigma (short headers a,b also accepted)
inline std::vector<SigmaSample> parse_sigma_csv(std::string_view text) {
    const auto t = parse_csv(text);
    const bool long_names = std::find(t.header.begin(), t.header.end(), "point_id_a") != t.header.end();
    const auto ia = t.column(long_names ? "point_id_a" : "a");
    const auto ib = t.column(long_names ? "point_id_b" : "b");
    const auto is = t.column("sigma");
    std::vector<SigmaSample> out;
    for (const auto& row : t.rows) out.push_back({row[ia], row[ib], parse_double(row[is])});
    return out;
}

// ---------------------------------------------------------------------------
// Geometry specs

/// {"kind": "euclidean"|"minkowski"|"distorted"|"tabulated", "dim", "c", "d", "sigma0",
///  "points": csv path, "sigma" (or "file"): csv path}; relative paths resolve against base_dir.
inline Geometry geometry_from_json(const json& j, const std::filesystem::path& base_dir = {}) {
    try {
        const auto kind = j.at("kind").get<std::string>();
        if (kind == "tabulated") {
            auto resolve = [&](const std::string& rel) {
                std::filesystem::path p(rel);
                return p.is_absolute() ? p : base_dir / p;
            };
            const auto pts = parse_points_csv(read_file(resolve(j.at("points").get<std::string>())));
            const auto& table = j.contains("sigma") ? j.at("sigma") : j.at("file");
            const auto sig = parse_sigma_csv(read_file(resolve(table.get<std::string>())));
            return load_tabulated(pts, sig, j.value("tolerance", 1e-9));
        }
        const auto dim = j.at("dim").get<std::size_t>();
        if (kind == "euclidean") return Geometry::euclidean(dim);
        if (kind == "minkowski") return Geometry::minkowski(dim, j.value("c", 1.0));
        if (kind == "distorted")
            return Geometry::distorted(dim, j.value("c", 1.0), j.at("d").get<double>(), j.at("sigma0").get<double>());
        throw Error(Errc::parse_error, "unknown geometry kind '" + kind + "'");
    } catch (const json::exception& e) {
        throw Error(Errc::parse_error, std::string("geometry spec: ") + e.what());
    }
}

inline Geometry load_geometry(const std::filesystem::path& path) {
    json j;
    try {
        j = json::parse(read_file(path));
    } catch (const json::exception& e) {
        throw Error(Errc::parse_error, path.string() + ": " + e.what());
    }
    return geometry_from_json(j, path.parent_path());
}

inline json geometry_to_json(const Geometry& g) {
    json j{{"kind", to_string(g.kind())}, {"dim", g.dim()}};
    if (g.is_spacetime()) j["c"] = g.c();
    if (g.kind() == GeometryKind::distorted) {
        j["d"] = g.d();
        j["sigma0"] = g.sigma0();
    }
    if (g.is_discrete()) j["points"] = g.carrier().size();
    return j;
}

// ---------------------------------------------------------------------------
// Reports

inline json point_to_json(const Point& p) {
    json a = json::array();
    for (double x : p.coords()) a.push_back(x);
    return a;
}

inline json to_json(const ConditionReport& r) {
    json j{{"condition_id", to_string(r.id)},
           {"verdict", to_string(r.verdict)},
           {"residual_max", r.residual_max},
           {"seed", r.seed}};
    json ev = json::array();
    for (const auto& e : r.evidence) {
        json pts = json::array();
        for (const auto& p : e.points) pts.push_back(point_to_json(p));
        ev.push_back({{"points", pts}, {"residual", e.residual}});
    }
    j["evidence"] = ev;
    if (r.estimated_dimension) j["estimated_dimension"] = *r.estimated_dimension;
    if (r.solution_count) j["solution_count"] = *r.solution_count;
    if (!r.note.empty()) j["note"] = r.note;
    return j;
}

inline json to_json(const SuiteReport& s) {
    json reports = json::array();
    for (const auto& r : s.reports) reports.push_back(to_json(r));
    return {{"seed", s.seed}, {"reports", reports}};
}

inline json to_json(const EnsembleSummary& s) {
    json rms = json::array();
    for (const auto& t : s.transverse_rms_by_N) rms.push_back({{"N", t.n}, {"rms", t.rms}});
    return {{"mean_cosh", s.mean_cosh},
            {"theta_exact", s.theta_exact},
            {"theta_small_d", s.theta_small_d},
            {"transverse_rms_by_N", rms},
            {"max_link_error", s.max_link_error},
            {"max_parallel_residual", s.max_parallel_residual},
            {"links", s.links},
            {"seeds", s.seeds},
            {"d", s.params.d},
            {"sigma0", s.params.sigma0},
            {"mu_d", s.params.mu_d},
            {"c", s.params.c},
            {"direction_measure", "uniform on the rest-frame 2-sphere"}};
}

/// link_index,t,x,y,z,cosh_theta_dM; the joint angle column is blank where undefined.
inline std::string chain_csv(const WorldChain& ch) {
    std::string out = "# seed=" + std::to_string(ch.seed) + "\nlink_index,t,x,y,z,cosh_theta_dM\n";
    for (std::size_t i = 0; i < ch.points.size(); ++i) {
        const auto p = to_double(ch.points[i]);
        out += std::to_string(i);
        for (double x : p.coords()) out += "," + format_double(x);
        out += ",";
        if (i >= 1 && i - 1 < ch.cosh_theta_dM.size()) out += format_double(ch.cosh_theta_dM[i - 1]);
        out += "\n";
    }
    return out;
}

/// tau,r_numeric,r_closed_form followed by a summary comment line.
inline std::string profile_csv(const SegmentProfile& sp, std::uint64_t seed) {
    std::string out = "# seed=" + std::to_string(seed) + "\ntau,r_numeric,r_closed_form\n";
    const auto& pr = sp.profile;
    for (std::size_t i = 0; i < pr.tau_grid.size(); ++i) {
        out += format_double(pr.tau_grid[i]) + "," + format_double(pr.radius[i]) + ",";
        if (pr.radius_closed_form) out += format_double((*pr.radius_closed_form)[i]);
        out += "\n";
    }
    out += "# max_abs_deviation=" + format_double(sp.max_abs_deviation) +
           " max_rel_deviation=" + format_double(sp.max_rel_deviation) + "\n";
    return out;
}

// ---------------------------------------------------------------------------
// Envelope declarations

/// {"op":"sigma","slots":[i,j]} | {"op":"const","value":v} |
/// {"op":"add"|"sub"|"mul"|"div"|"max"|"neg"|"sqrt"|"abs","args":[...]} |
/// {"op":"det","n":k,"args":[k*k entries]}
inline Expr expr_from_json(const json& j) {
    try {
        const auto op = j.at("op").get<std::string>();
        if (op == "sigma") {
            const auto s = j.at("slots").get<std::vector<int>>();
            if (s.size() != 2) throw Error(Errc::parse_error, "sigma needs two slots");
            return Expr::sigma(s[0], s[1]);
        }
        if (op == "const") return Expr::constant(j.at("value").get<double>());
        std::vector<Expr> args;
        for (const auto& a : j.at("args")) args.push_back(expr_from_json(a));
        auto need = [&](std::size_t n) {
            if (args.size() != n) throw Error(Errc::parse_error, "'" + op + "' takes " + std::to_string(n) + " args");
        };
        static const std::map<std::string, ExprOp> binary{
            {"add", ExprOp::add}, {"sub", ExprOp::sub}, {"mul", ExprOp::mul}, {"div", ExprOp::div}};
        static const std::map<std::string, ExprOp> unary{
            {"neg", ExprOp::neg}, {"sqrt", ExprOp::sqrt}, {"abs", ExprOp::abs}};
        if (auto it = binary.find(op); it != binary.end()) {
            need(2);
            return Expr::binary(it->second, args[0], args[1]);
        }
        if (auto it = unary.find(op); it != unary.end()) {
            need(1);
            return Expr::unary(it->second, args[0]);
        }
        if (op == "max") return Expr::max_of(std::move(args));
        if (op == "det") return Expr::det(j.at("n").get<int>(), std::move(args));
        throw Error(Errc::parse_error, "unknown expression op '" + op + "'");
    } catch (const json::exception& e) {
        throw Error(Errc::parse_error, std::string("expression: ") + e.what());
    }
}

/// {"object":"cylinder","skeleton":[ids],"q":id} and friends; ids index `points`.
/// "custom" objects carry an "envelope" expression (and optional "scale").
inline EnvelopeObject object_from_json(const json& j, const Geometry& g, const std::map<std::string, Point>& points) {
    try {
        auto pt = [&](const json& id) {
            const auto key = id.get<std::string>();
            auto it = points.find(key);
            if (it == points.end()) throw Error(Errc::unknown_point, "unknown point id '" + key + "'");
            return it->second;
        };
        std::vector<Point> skel;
        for (const auto& id : j.at("skeleton")) skel.push_back(pt(id));
        const auto kind = j.at("object").get<std::string>();
        auto need = [&](std::size_t n) {
            if (skel.size() != n)
                throw Error(Errc::parse_error, kind + " needs " + std::to_string(n) + " skeleton points");
        };
        if (kind == "cylinder") {
            need(2);
            return cylinder(g, skel[0], skel[1], pt(j.at("q")));
        }
        if (kind == "ellipsoid") {
            need(2);
            return ellipsoid(g, skel[0], skel[1], j.at("two_a").get<double>());
        }
        if (kind == "segment") {
            need(2);
            return segment(g, skel[0], skel[1]);
        }
        if (kind == "tube_straight") {
            need(1);
            return tube_straight(g, skel[0], pt(j.at("q")));
        }
        if (kind == "tube_remote") {
            need(2);
            return tube_remote(g, pt(j.at("q0")), skel[0], skel[1]);
        }
        if (kind == "tube_frame") return tube_frame(g, Skeleton(skel), pt(j.at("q")));
        if (kind == "custom") {
            Expr scale = j.contains("scale") ? expr_from_json(j["scale"]) : Expr::constant(1.0);
            return EnvelopeObject(j.value("name", "custom"), skel, expr_from_json(j.at("envelope")), scale);
        }
        throw Error(Errc::parse_error, "unknown object '" + kind + "'");
    } catch (const json::exception& e) {
        throw Error(Errc::parse_error, std::string("object declaration: ") + e.what());
    }
}

} // namespace tgeom::io
