#include "glab/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "glab/error.hpp"

namespace glab {
namespace {

[[noreturn]] void bad(const std::string& path, const std::string& message) {
    throw ParameterError(path + ": " + message);
}

const Json& field(const Json& j, const std::string& key, const std::string& path) {
    if (!j.is_object()) bad(path, "expected an object");
    auto it = j.find(key);
    if (it == j.end()) bad(path + "." + key, "missing required field");
    return *it;
}

double number(const Json& j, const std::string& path) {
    if (j.is_number()) return j.get<double>();
    if (j.is_string() && (j == "inf" || j == "infinity")) return kInfinity;
    bad(path, "expected a number");
}

double positive(const Json& j, const std::string& path) {
    const double v = number(j, path);
    if (!(v > 0.0) || !std::isfinite(v)) bad(path, "expected a positive number");
    return v;
}

double get_positive(const Json& j, const std::string& key, const std::string& path) {
    return positive(field(j, key, path), path + "." + key);
}

double get_positive_or(const Json& j, const std::string& key, const std::string& path, double fallback) {
    return j.contains(key) ? positive(j[key], path + "." + key) : fallback;
}

Json number_json(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (std::isnan(v)) return nullptr;
    return v;
}

Json point_json(const Point& p) {
    Json a = Json::array();
    for (Eigen::Index i = 0; i < p.size(); ++i) a.push_back(p[i]);
    return a;
}

Point point_from(const Json& j, const std::string& path) {
    if (!j.is_array() || j.empty()) bad(path, "expected a coordinate array");
    Point p(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) p[static_cast<Eigen::Index>(i)] = number(j[i], path + "[" + std::to_string(i) + "]");
    return p;
}

std::vector<Vertex> vertices_from(const Json& j, const std::string& path) {
    const Json& arr = field(j, "vertices", path);
    if (!arr.is_array()) bad(path + ".vertices", "expected an array");
    std::vector<Vertex> out;
    for (std::size_t i = 0; i < arr.size(); ++i) {
        const std::string p = path + ".vertices[" + std::to_string(i) + "]";
        Vertex v{point_from(field(arr[i], "pos", p), p + ".pos"), std::nullopt};
        if (arr[i].contains("atom") && !arr[i]["atom"].is_null()) {
            if (!arr[i]["atom"].is_number_unsigned()) bad(p + ".atom", "expected an atom index or null");
            v.atom = arr[i]["atom"].get<std::size_t>();
        }
        out.push_back(std::move(v));
    }
    return out;
}

}  // namespace

std::string format_number(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (std::isnan(v)) return "nan";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

// ---------------------------------------------------------------------------
// Descriptors and windows

Json to_json(const IntensityDescriptor& nu) {
    return std::visit(
        [](const auto& m) -> Json {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, DiracMarks>) {
                return {{"kind", "dirac"}, {"atom", m.atom}, {"rate", m.rate}};
            } else if constexpr (std::is_same_v<T, ExponentialMarks>) {
                return {{"kind", "exponential"}, {"rate", m.rate}, {"total", m.total}};
            } else if constexpr (std::is_same_v<T, ParetoMarks>) {
                return {{"kind", "pareto"}, {"scale", m.scale}, {"shape", m.shape}, {"total", m.total}};
            } else {
                Json comps = Json::array();
                for (const auto& c : m.components) comps.push_back({{"atom", c.atom}, {"rate", c.rate}});
                return {{"kind", "mixture"}, {"components", comps}};
            }
        },
        nu.law);
}

IntensityDescriptor descriptor_from_json(const Json& j, int dim, const std::string& path) {
    const Json& kind_j = field(j, "kind", path);
    if (!kind_j.is_string()) bad(path + ".kind", "expected a string");
    const std::string kind = kind_j.get<std::string>();
    IntensityDescriptor nu;
    if (kind == "dirac") {
        nu = IntensityDescriptor::dirac(dim, get_positive(j, "atom", path), get_positive(j, "rate", path));
    } else if (kind == "exponential") {
        nu = IntensityDescriptor::exponential(dim, get_positive(j, "rate", path), get_positive_or(j, "total", path, 1.0));
    } else if (kind == "pareto") {
        nu = IntensityDescriptor::pareto(dim, get_positive(j, "scale", path), get_positive(j, "shape", path),
                                         get_positive_or(j, "total", path, 1.0));
    } else if (kind == "mixture" || kind == "finite-mixture-of-diracs") {
        const Json& comps = field(j, "components", path);
        if (!comps.is_array() || comps.empty()) bad(path + ".components", "expected a nonempty array");
        std::vector<DiracMarks> cs;
        for (std::size_t i = 0; i < comps.size(); ++i) {
            const std::string p = path + ".components[" + std::to_string(i) + "]";
            cs.push_back({get_positive(comps[i], "atom", p), get_positive(comps[i], "rate", p)});
        }
        nu = IntensityDescriptor::mixture(dim, std::move(cs));
    } else {
        bad(path + ".kind", "unknown kind '" + kind + "'");
    }
    try {
        nu.validate();
    } catch (const ParameterError& e) {
        bad(path, e.what());
    }
    return nu;
}

Json to_json(const Box& box) {
    Json a = Json::array();
    for (auto [lo, hi] : box.bounds) a.push_back({lo, hi});
    return a;
}

Box box_from_json(const Json& j, const std::string& path) {
    if (!j.is_array() || j.empty()) bad(path, "expected an array of [lo, hi] pairs");
    Box box;
    for (std::size_t i = 0; i < j.size(); ++i) {
        const std::string p = path + "[" + std::to_string(i) + "]";
        if (!j[i].is_array() || j[i].size() != 2) bad(p, "expected [lo, hi]");
        const double lo = number(j[i][0], p + "[0]"), hi = number(j[i][1], p + "[1]");
        if (!(lo <= hi) || !std::isfinite(lo) || !std::isfinite(hi)) bad(p, "need finite lo <= hi");
        box.bounds.push_back({lo, hi});
    }
    return box;
}

Json to_json(const SampleSpec& spec) {
    Json j;
    j["dim"] = spec.dim;
    j["window"] = to_json(spec.window);
    j["nu"] = to_json(spec.nu);
    if (spec.seed) j["seed"] = *spec.seed;
    return j;
}

SampleSpec sample_spec_from_json(const Json& j) {
    SampleSpec s;
    const Json& d = field(j, "dim", "config");
    if (!d.is_number_integer() || d.get<int>() < 2) bad("dim", "expected an integer >= 2");
    s.dim = d.get<int>();
    s.window = box_from_json(field(j, "window", "config"));
    if (s.window.dim() != s.dim) bad("window", "has " + std::to_string(s.window.dim()) + " axes, dim is " + std::to_string(s.dim));
    s.nu = descriptor_from_json(field(j, "nu", "config"), s.dim);
    if (j.contains("seed")) {
        if (!j["seed"].is_number_unsigned()) bad("seed", "expected a non-negative integer");
        s.seed = j["seed"].get<std::uint64_t>();
    }
    return s;
}

// ---------------------------------------------------------------------------
// Configurations

Json to_json(const PointConfiguration& cfg) {
    Json j;
    j["dim"] = cfg.dim;
    j["window"] = to_json(cfg.window);
    Json pts = Json::array();
    for (const auto& p : cfg.points) pts.push_back({{"pos", point_json(p.pos)}, {"mass", p.mass}});
    j["points"] = std::move(pts);
    Json prov = Json::object();
    if (cfg.provenance.seed) prov["seed"] = *cfg.provenance.seed;
    if (cfg.provenance.nu) prov["nu"] = to_json(*cfg.provenance.nu);
    prov["history"] = cfg.provenance.history;
    j["provenance"] = std::move(prov);
    return j;
}

PointConfiguration configuration_from_json(const Json& j) {
    PointConfiguration cfg;
    const Json& d = field(j, "dim", "configuration");
    if (!d.is_number_integer() || d.get<int>() < 2) bad("dim", "expected an integer >= 2");
    cfg.dim = d.get<int>();
    if (j.contains("window")) {
        cfg.window = box_from_json(j["window"]);
    }
    const Json& pts = field(j, "points", "configuration");
    if (!pts.is_array()) bad("points", "expected an array");
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const std::string p = "points[" + std::to_string(i) + "]";
        Point pos = point_from(field(pts[i], "pos", p), p + ".pos");
        if (pos.size() != cfg.dim) bad(p + ".pos", "wrong dimension");
        cfg.points.push_back({std::move(pos), get_positive(pts[i], "mass", p)});
    }
    if (!j.contains("window")) {
        // Tight bounding box when the dump carries no window.
        cfg.window = Box::cube(cfg.dim, 0.0, 0.0);
        for (int a = 0; a < cfg.dim; ++a) {
            double lo = kInfinity, hi = -kInfinity;
            for (const auto& p : cfg.points) {
                lo = std::min(lo, p.pos[a]);
                hi = std::max(hi, p.pos[a]);
            }
            if (cfg.points.empty()) lo = hi = 0.0;
            cfg.window.bounds[static_cast<std::size_t>(a)] = {lo, hi};
        }
    }
    if (j.contains("provenance")) {
        const Json& prov = j["provenance"];
        if (prov.contains("seed") && prov["seed"].is_number_unsigned()) cfg.provenance.seed = prov["seed"].get<std::uint64_t>();
        if (prov.contains("nu")) cfg.provenance.nu = descriptor_from_json(prov["nu"], cfg.dim, "provenance.nu");
        if (prov.contains("history") && prov["history"].is_array())
            for (const auto& h : prov["history"]) cfg.provenance.history.push_back(h.get<std::string>());
    }
    try {
        cfg.validate();
    } catch (const Error& e) {
        bad("points", e.what());
    }
    return cfg;
}

// ---------------------------------------------------------------------------
// Witnesses and results

Json to_json(const Vertex& v) {
    Json j;
    j["pos"] = point_json(v.pos);
    j["atom"] = v.atom ? Json(*v.atom) : Json(nullptr);
    return j;
}

Json to_json(const Path& path) {
    Json vs = Json::array();
    for (const auto& v : path.vertices) vs.push_back(to_json(v));
    return {{"vertices", vs}};
}

Json to_json(const Animal& animal) {
    Json vs = Json::array();
    for (const auto& v : animal.vertices) vs.push_back(to_json(v));
    Json es = Json::array();
    for (auto [a, b] : animal.edges) es.push_back({a, b});
    return {{"vertices", vs}, {"edges", es}};
}

Path path_from_json(const Json& j, const std::string& path) {
    Path p;
    p.vertices = vertices_from(j, path);
    if (p.vertices.empty()) bad(path + ".vertices", "a path needs at least one vertex");
    return p;
}

Animal animal_from_json(const Json& j, const std::string& path) {
    Animal a;
    a.vertices = vertices_from(j, path);
    const Json& es = field(j, "edges", path);
    if (!es.is_array()) bad(path + ".edges", "expected an array");
    for (std::size_t i = 0; i < es.size(); ++i) {
        const std::string p = path + ".edges[" + std::to_string(i) + "]";
        if (!es[i].is_array() || es[i].size() != 2 || !es[i][0].is_number_unsigned() || !es[i][1].is_number_unsigned())
            bad(p, "expected a pair of vertex indices");
        a.edges.push_back({es[i][0].get<std::size_t>(), es[i][1].get<std::size_t>()});
    }
    if (!is_well_formed(a)) bad(path, "edges out of range, self-loops, or disconnected");
    return a;
}

Json to_json(const Query& query) {
    Json j;
    j["model"] = std::string(to_string(query.model));
    j["x"] = point_json(query.x);
    j["y"] = query.y ? point_json(*query.y) : Json(nullptr);
    j["budget"] = query.budget;
    if (query.model == Model::animal_penalized) j["q"] = number_json(query.q);
    return j;
}

Json to_json(const SolveResult& r) {
    Json j;
    j["status"] = std::string(to_string(r.status));
    switch (r.status) {
        case SolveStatus::exact:
        case SolveStatus::lower_bound:
            j["value"] = r.value;
            break;
        case SolveStatus::bracket:
            j["low"] = r.low;
            j["high"] = number_json(r.high);
            break;
        case SolveStatus::infeasible:
            break;
    }
    j["candidates"] = r.candidates;
    if (const auto* p = std::get_if<Path>(&r.witness)) j["witness"] = to_json(*p);
    if (const auto* a = std::get_if<Animal>(&r.witness)) j["witness"] = to_json(*a);
    return j;
}

// ---------------------------------------------------------------------------
// Reports

Json to_json(const ChainReport& report) {
    Json cs = Json::array();
    for (const auto& c : report.comparisons)
        cs.push_back({{"name", c.name}, {"lhs", c.lhs}, {"rhs", number_json(c.rhs)}, {"pass", c.pass}});
    return {{"budget", report.budget}, {"q", number_json(report.q)}, {"comparisons", cs}, {"pass", report.pass}};
}

Json to_json(const VerifyReport& report) {
    Json fs = Json::array();
    for (const auto& f : report.failures)
        fs.push_back({{"trial", f.trial}, {"check", f.check}, {"lhs", number_json(f.lhs)}, {"rhs", number_json(f.rhs)}});
    Json ms = Json::object();
    for (const auto& [k, v] : report.metrics) ms[k] = number_json(v);
    return {{"check", report.name},   {"pass", report.pass()},         {"trials", report.trials},
            {"checks", report.checks}, {"failures", report.failure_count}, {"failure_details", fs},
            {"metrics", ms}};
}

Json to_json(const ShapeReport& report) {
    Json fs = Json::array();
    for (const auto& f : report.flags) fs.push_back({{"kind", f.kind}, {"index", f.index}, {"margin", f.margin}});
    return {{"k_sigma", report.k_sigma},
            {"certified", report.certified},
            {"monotonicity_flags", report.monotonicity_flags},
            {"concavity_flags", report.concavity_flags},
            {"strict_decrease_flags", report.strict_decrease_flags},
            {"flags", fs}};
}

Json to_json(const StretchReport& report) {
    Json rows = Json::array();
    for (const auto& r : report.rows)
        rows.push_back({{"beta", r.beta}, {"f_hat", r.f_hat}, {"g", r.g}, {"bound", r.bound}, {"sigma", r.sigma}, {"pass", r.pass}});
    return {{"pass", report.pass}, {"rows", rows}};
}

Json to_json(const QScanResult& r) {
    Json rows = Json::array();
    for (const auto& row : r.rows)
        rows.push_back({{"q", number_json(row.q)},
                        {"low_mean", row.low.mean},
                        {"low_stderr", row.low.std_error},
                        {"high_mean", row.high.mean},
                        {"high_stderr", row.high.std_error},
                        {"exact", row.exact}});
    return {{"pass", r.pass()},
            {"rows", rows},
            {"monotonicity_violations", r.monotonicity_violations},
            {"q0_mismatches", r.q0_mismatches},
            {"dominance_checked", r.dominance_checked},
            {"dominance_mismatches", r.dominance_mismatches},
            {"lipschitz_constant", r.lipschitz_constant},
            {"lipschitz_violations", r.lipschitz_violations}};
}

Json to_json(const UniversalReport& report) {
    Json rows = Json::array();
    for (const auto& r : report.rows)
        rows.push_back({{"L", r.length}, {"mean", r.ratio.mean}, {"stderr", r.ratio.std_error}, {"midpoints", r.midpoints}});
    return {{"pass", report.pass},
            {"moment_integral", number_json(report.moment.value)},
            {"moment_finite", report.moment.finite},
            {"rows", rows}};
}

Json to_json(const KsResult& ks) {
    return {{"statistic", ks.statistic}, {"critical", ks.critical}, {"p_value", ks.p_value}, {"pass", ks.pass}};
}

Json to_json(const CurveEstimate& curve) {
    Json points = Json::array();
    for (const auto& p : curve.points)
        points.push_back({{"beta", p.beta},
                          {"L", p.length},
                          {"mean", p.summary.mean},
                          {"stderr", p.summary.std_error},
                          {"replicates", p.summary.count},
                          {"exact", p.exact}});
    Json f_hat = Json::array();
    for (std::size_t b = 0; b < curve.betas.size(); ++b) {
        const auto& p = curve.f_hat(b);
        f_hat.push_back({{"beta", p.beta}, {"mean", p.summary.mean}, {"stderr", p.summary.std_error}});
    }
    return {{"model", to_string(curve.model)},
            {"q", number_json(curve.q)},
            {"dim", curve.dim},
            {"replicates", curve.replicates},
            {"seed", curve.seed},
            {"all_exact", curve.all_exact()},
            {"points", points},
            {"f_hat", f_hat},
            {"stretch_checked", curve.stretch_checked},
            {"stretch_violations", curve.stretch_violations}};
}

// ---------------------------------------------------------------------------
// CSV

std::string curve_csv(const CurveEstimate& curve) {
    std::ostringstream os;
    os << "model,q,beta,L,replicate,value,exact\n";
    const std::string model(to_string(curve.model));
    for (const auto& s : curve.samples) {
        os << model << ',' << format_number(curve.q) << ',' << format_number(curve.betas[s.beta_index]) << ','
           << format_number(curve.lengths[s.length_index]) << ',' << s.replicate << ',' << format_number(s.value)
           << ',' << (s.exact ? 1 : 0) << '\n';
    }
    return os.str();
}

std::string curve_summary_csv(const CurveEstimate& curve) {
    std::ostringstream os;
    os << "model,q,beta,L,mean,stderr,replicates,exact\n";
    const std::string model(to_string(curve.model));
    for (const auto& p : curve.points) {
        os << model << ',' << format_number(curve.q) << ',' << format_number(p.beta) << ',' << format_number(p.length)
           << ',' << format_number(p.summary.mean) << ',' << format_number(p.summary.std_error) << ','
           << p.summary.count << ',' << (p.exact ? 1 : 0) << '\n';
    }
    return os.str();
}

std::string overlay_csv(const CurveEstimate& curve) {
    std::ostringstream os;
    os << "beta,f_hat,stderr,g,overlay\n";
    std::optional<double> base;
    for (std::size_t i = 0; i < curve.betas.size(); ++i)
        if (curve.betas[i] == 0.0) base = curve.f_hat(i).summary.mean;
    const double t = g_threshold(curve.dim);
    for (std::size_t i = 0; i < curve.betas.size(); ++i) {
        const double beta = curve.betas[i];
        const auto& s = curve.f_hat(i).summary;
        os << format_number(beta) << ',' << format_number(s.mean) << ',' << format_number(s.std_error) << ',';
        if (beta >= t - 1e-12) {
            const double g = g_function(beta, curve.dim);
            os << format_number(g) << ',';
            if (base) os << format_number(g * *base);
        } else {
            os << ',';
        }
        os << '\n';
    }
    return os.str();
}

// ---------------------------------------------------------------------------
// Files

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
    namespace fs = std::filesystem;
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot open " + tmp.string() + " for writing");
        out << content;
        out.flush();
        if (!out) throw Error("write to " + tmp.string() + " failed");
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp);
        throw Error("cannot rename " + tmp.string() + " to " + path.string() + ": " + ec.message());
    }
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace glab
