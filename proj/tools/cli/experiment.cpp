#include "experiment.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <random>
#include <sstream>

#include "glab/error.hpp"
#include "glab/estimation.hpp"
#include "glab/verify.hpp"

namespace glab::cli {

namespace {

[[noreturn]] void bad(const std::string& field, const std::string& msg) { throw ParameterError(field + ": " + msg); }

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else if (c != ' ') {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

double parse_double(const std::string& text, const std::string& field) {
    if (text == "inf" || text == "+inf" || text == "infinity") return kInfinity;
    double v = 0.0;
    const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || end != text.data() + text.size() || std::isnan(v))
        bad(field, "expected a number, got '" + text + "'");
    return v;
}

std::uint64_t parse_unsigned(const std::string& text, const std::string& field) {
    std::uint64_t v = 0;
    const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || end != text.data() + text.size() || text.empty())
        bad(field, "expected a nonnegative integer, got '" + text + "'");
    return v;
}

Json number_json(double v) { return std::isinf(v) ? Json("inf") : Json(v); }

// Reads one parameter; every accessor records the canonical value in params.
class Reader {
public:
    Reader(const Json& values, Json& params) : values_(values), params_(params) {}

    bool has(const std::string& key) const { return values_.contains(key) && !values_[key].is_null(); }

    double real(const std::string& key, double fallback) {
        const double v = has(key) ? to_double(values_[key], key) : fallback;
        params_[key] = number_json(v);
        return v;
    }

    double positive(const std::string& key, double fallback) {
        const double v = real(key, fallback);
        if (!(v > 0.0) || std::isinf(v)) bad(key, "expected a positive finite number");
        return v;
    }

    std::uint64_t count(const std::string& key, std::uint64_t fallback) {
        std::uint64_t v = fallback;
        if (has(key)) {
            const Json& j = values_[key];
            if (j.is_number_unsigned()) {
                v = j.get<std::uint64_t>();
            } else if (j.is_number_integer() && j.get<std::int64_t>() >= 0) {
                v = static_cast<std::uint64_t>(j.get<std::int64_t>());
            } else if (j.is_string()) {
                v = parse_unsigned(j.get<std::string>(), key);
            } else {
                bad(key, "expected a nonnegative integer");
            }
        }
        params_[key] = v;
        return v;
    }

    std::string text(const std::string& key, const std::string& fallback) {
        std::string v = fallback;
        if (has(key)) {
            if (!values_[key].is_string()) bad(key, "expected a string");
            v = values_[key].get<std::string>();
        }
        params_[key] = v;
        return v;
    }

    bool flag(const std::string& key) {
        bool v = false;
        if (has(key)) {
            const Json& j = values_[key];
            if (j.is_boolean()) {
                v = j.get<bool>();
            } else if (j.is_string() && (j == "true" || j == "false")) {
                v = j == "true";
            } else {
                bad(key, "expected true or false");
            }
        }
        params_[key] = v;
        return v;
    }

    std::vector<double> list(const std::string& key, const std::string& fallback) {
        std::vector<double> out;
        const Json j = has(key) ? values_[key] : Json(fallback);
        if (j.is_array()) {
            for (std::size_t i = 0; i < j.size(); ++i) out.push_back(to_double(j[i], key + "[" + std::to_string(i) + "]"));
        } else if (j.is_string()) {
            for (const auto& part : split(j.get<std::string>(), ',')) out.push_back(parse_double(part, key));
        } else {
            out.push_back(to_double(j, key));
        }
        if (out.empty()) bad(key, "expected a nonempty list");
        Json canon = Json::array();
        for (double v : out) canon.push_back(number_json(v));
        params_[key] = canon;
        return out;
    }

    std::optional<Point> point(const std::string& key, int dim, bool required) {
        if (!has(key)) {
            if (required) {
                params_[key] = Json::array();
                for (int i = 0; i < dim; ++i) params_[key].push_back(0.0);
                return Point::Zero(dim);
            }
            params_[key] = nullptr;
            return std::nullopt;
        }
        const auto coords = list(key, "");
        if (static_cast<int>(coords.size()) != dim)
            bad(key, "expected " + std::to_string(dim) + " coordinates, got " + std::to_string(coords.size()));
        Point p(dim);
        for (int i = 0; i < dim; ++i) {
            if (std::isinf(coords[static_cast<std::size_t>(i)])) bad(key, "coordinates must be finite");
            p[i] = coords[static_cast<std::size_t>(i)];
        }
        return p;
    }

    // lo:hi:step, or an explicit array of values.
    std::vector<double> grid(const std::string& key, const std::string& fallback, int dim) {
        const Json j = has(key) ? values_[key] : Json(fallback);
        std::vector<double> out;
        if (j.is_array()) {
            for (std::size_t i = 0; i < j.size(); ++i) out.push_back(to_double(j[i], key + "[" + std::to_string(i) + "]"));
            if (out.empty()) bad(key, "expected a nonempty grid");
            params_[key] = j;
            return out;
        }
        if (!j.is_string()) bad(key, "expected lo:hi:step");
        const auto parts = split(j.get<std::string>(), ':');
        if (parts.size() != 3) bad(key, "expected lo:hi:step, got '" + j.get<std::string>() + "'");
        const double lo = parse_double(parts[0], key), hi = parse_double(parts[1], key), step = parse_double(parts[2], key);
        if (lo < 0.0 || hi > 1.0 || lo > hi) bad(key, "expected 0 <= lo <= hi <= 1");
        if (!(step > 0.0)) bad(key, "step must be positive");
        params_[key] = j;
        return beta_grid(lo, hi, step, dim, false);
    }

private:
    static double to_double(const Json& j, const std::string& field) {
        if (j.is_number()) return j.get<double>();
        if (j.is_string()) return parse_double(j.get<std::string>(), field);
        bad(field, "expected a number");
    }

    const Json& values_;
    Json& params_;
};

IntensityDescriptor parse_nu(const Json& j, int dim) {
    if (j.is_object()) return descriptor_from_json(j, dim, "nu");
    if (!j.is_string()) bad("nu", "expected kind:params or a descriptor object");
    const auto parts = split(j.get<std::string>(), ':');
    const std::string& kind = parts[0];
    std::vector<double> p;
    for (std::size_t i = 1; i < parts.size(); ++i) p.push_back(parse_double(parts[i], "nu"));
    try {
        if (kind == "dirac") {
            if (p.size() != 2) bad("nu", "dirac takes atom:rate");
            return IntensityDescriptor::dirac(dim, p[0], p[1]);
        }
        if (kind == "exponential") {
            if (p.empty() || p.size() > 2) bad("nu", "exponential takes rate[:total]");
            return IntensityDescriptor::exponential(dim, p[0], p.size() > 1 ? p[1] : 1.0);
        }
        if (kind == "pareto") {
            if (p.size() < 2 || p.size() > 3) bad("nu", "pareto takes scale:shape[:total]");
            return IntensityDescriptor::pareto(dim, p[0], p[1], p.size() > 2 ? p[2] : 1.0);
        }
        if (kind == "mixture") {
            if (p.empty() || p.size() % 2 != 0) bad("nu", "mixture takes atom:rate pairs");
            std::vector<DiracMarks> comps;
            for (std::size_t i = 0; i < p.size(); i += 2) comps.push_back({p[i], p[i + 1]});
            return IntensityDescriptor::mixture(dim, std::move(comps));
        }
    } catch (const ParameterError& e) {
        if (std::string(e.what()).rfind("nu:", 0) == 0) throw;
        bad("nu", e.what());
    }
    bad("nu", "unknown kind '" + kind + "' (dirac, exponential, pareto, mixture)");
}

Box parse_window(const Json& j, int dim) {
    if (j.is_array()) return box_from_json(j, "window");
    if (!j.is_string()) bad("window", "expected lo:hi[,lo:hi...]");
    auto axes = split(j.get<std::string>(), ',');
    if (axes.size() == 1) axes.assign(static_cast<std::size_t>(dim), axes[0]);
    if (static_cast<int>(axes.size()) != dim) bad("window", "expected " + std::to_string(dim) + " intervals");
    Box box;
    for (const auto& axis : axes) {
        const auto lh = split(axis, ':');
        if (lh.size() != 2) bad("window", "expected lo:hi, got '" + axis + "'");
        const double lo = parse_double(lh[0], "window"), hi = parse_double(lh[1], "window");
        if (!(lo <= hi) || std::isinf(lo) || std::isinf(hi)) bad("window", "expected finite lo <= hi");
        box.bounds.push_back({lo, hi});
    }
    return box;
}

std::size_t default_trials(const std::string& check) {
    if (check == "chain") return 200;
    if (check == "stretch") return 10000;
    if (check == "sprinkle") return 500;
    if (check == "moment") return 1;
    return 1000;
}

const std::vector<std::string> kCommon{"seed", "out", "workers", "dim", "nu"};

std::vector<std::string> with_common(std::vector<std::string> v) {
    v.insert(v.end(), kCommon.begin(), kCommon.end());
    return v;
}

std::string utc_stamp() {
    const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y%m%dT%H%M%SZ", &tm);
    return buf;
}

std::filesystem::path fresh_directory(const std::filesystem::path& out, std::uint64_t seed) {
    const std::string base = utc_stamp() + "-seed" + std::to_string(seed);
    std::filesystem::path dir = out / base;
    for (int k = 2; std::filesystem::exists(dir); ++k) dir = out / (base + "-" + std::to_string(k));
    std::filesystem::create_directories(dir);
    return dir;
}

Query make_query(const ExperimentSpec& s) { return Query{s.model, s.x, s.y, s.budget, s.q}; }

}  // namespace

std::string_view to_string(Command c) noexcept {
    switch (c) {
        case Command::sample: return "sample";
        case Command::solve: return "solve";
        case Command::estimate_curve: return "estimate-curve";
        case Command::verify: return "verify";
        case Command::scaling_test: return "scaling-test";
        case Command::q_scan: return "q-scan";
        case Command::universal_bound: return "universal-bound";
    }
    return "?";
}

Command parse_command(std::string_view name) {
    for (Command c : {Command::sample, Command::solve, Command::estimate_curve, Command::verify, Command::scaling_test,
                      Command::q_scan, Command::universal_bound})
        if (to_string(c) == name) return c;
    throw ParameterError("command: unknown command '" + std::string(name) + "'");
}

const std::vector<std::string>& verify_checks() {
    static const std::vector<std::string> v{"chain", "stretch", "rewire", "prune", "sprinkle", "moment"};
    return v;
}

const std::vector<std::string>& flag_names(Command c) {
    static const auto sample = with_common({"window"});
    static const auto solve = with_common({"window", "input", "model", "q", "budget", "x", "y", "mode", "effort"});
    static const auto curve = with_common({"model", "q", "beta-grid", "lengths", "reps", "mode", "effort"});
    static const auto verify = with_common({"trials", "q-grid", "eps"});
    static const auto scaling = with_common({"lambda", "model", "q", "budget", "x", "y", "reps", "coupled"});
    static const auto qscan = with_common({"beta", "length", "q-grid", "reps", "effort"});
    static const auto universal = with_common({"lengths", "reps", "effort"});
    switch (c) {
        case Command::sample: return sample;
        case Command::solve: return solve;
        case Command::estimate_curve: return curve;
        case Command::verify: return verify;
        case Command::scaling_test: return scaling;
        case Command::q_scan: return qscan;
        case Command::universal_bound: return universal;
    }
    return sample;
}

Json ExperimentSpec::to_json() const {
    Json j{{"command", std::string(cli::to_string(command))}};
    if (command == Command::verify) j["check"] = check;
    j["params"] = params;
    return j;
}

ExperimentSpec parse_spec(Command command, const std::string& check, const Json& values,
                          const std::optional<std::string>& env_seed) {
    if (!values.is_object()) bad("config", "expected an object of parameters");
    const auto& allowed = flag_names(command);
    for (const auto& [key, _] : values.items())
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
            bad(key, "not a parameter of '" + std::string(to_string(command)) + "'");

    ExperimentSpec s;
    s.command = command;
    s.params = Json::object();
    Reader r(values, s.params);

    if (command == Command::verify) {
        if (std::find(verify_checks().begin(), verify_checks().end(), check) == verify_checks().end())
            bad("check", "unknown check '" + check + "'");
        s.check = check;
    }

    if (r.has("seed")) {
        s.seed = r.count("seed", 0);
    } else if (env_seed) {
        s.seed = parse_unsigned(*env_seed, "GLAB_SEED");
        s.params["seed"] = s.seed;
    } else {
        s.seed = std::random_device{}();
        s.params["seed"] = s.seed;
    }
    s.out = r.text("out", "runs");
    s.workers = r.count("workers", 1);
    if (s.workers == 0) bad("workers", "must be at least 1");
    const auto dim = r.count("dim", 2);
    if (dim < 1 || dim > 8) bad("dim", "expected 1..8");
    s.dim = static_cast<int>(dim);
    s.nu = parse_nu(r.has("nu") ? values["nu"] : Json("dirac:1:1"), s.dim);
    try {
        s.nu.validate();
    } catch (const ParameterError& e) {
        bad("nu", e.what());
    }
    s.params["nu"] = glab::to_json(s.nu);

    auto read_model = [&](const std::string& fallback) {
        s.model = parse_model(r.text("model", fallback));
        const bool q_given = r.has("q");
        switch (s.model) {
            case Model::path:
                if (q_given) bad("q", "not defined for the path model");
                s.q = 0.0;
                break;
            case Model::animal_unrestricted:
                if (q_given) bad("q", "not defined for animal-unrestricted (use animal-penalized)");
                s.q = 0.0;
                break;
            case Model::animal_restricted:
                if (q_given && !std::isinf(r.real("q", kInfinity))) bad("q", "animal-restricted fixes q = inf");
                s.q = kInfinity;
                break;
            case Model::animal_penalized:
                if (!q_given) bad("q", "required for animal-penalized");
                s.q = r.real("q", 0.0);
                if (s.q < 0.0) bad("q", "must be nonnegative");
                break;
        }
        if (s.model != Model::animal_penalized) s.params.erase("q");
    };
    auto read_query = [&](double budget, std::optional<std::string> y_default) {
        s.budget = r.positive("budget", budget);
        s.x = *r.point("x", s.dim, true);
        if (!r.has("y") && y_default) {
            Json tmp{{"y", *y_default}};
            Json scratch;
            s.y = Reader(tmp, scratch).point("y", s.dim, false);
            s.params["y"] = scratch["y"];
        } else {
            s.y = r.point("y", s.dim, false);
        }
    };
    auto read_mode = [&] {
        try {
            s.mode = parse_solver_mode(r.text("mode", "auto"));
        } catch (const Error&) {
            bad("mode", "expected exact, heuristic or auto");
        }
        s.effort = r.count("effort", 64);
    };
    auto read_reps = [&](std::size_t fallback, std::size_t minimum) {
        s.reps = r.count("reps", fallback);
        if (s.reps < minimum) bad("reps", "must be at least " + std::to_string(minimum));
    };

    switch (command) {
        case Command::sample:
            s.window = r.has("window") ? parse_window(values["window"], s.dim) : Box::cube(s.dim, 0.0, 10.0);
            s.params["window"] = glab::to_json(*s.window);
            break;
        case Command::solve:
            read_model("path");
            read_query(1.0, std::nullopt);
            read_mode();
            if (r.has("input")) {
                s.input = r.text("input", "");
                if (r.has("window")) bad("window", "not used together with input");
            } else {
                s.window = r.has("window") ? parse_window(values["window"], s.dim) : query_window(make_query(s));
                s.params["window"] = glab::to_json(*s.window);
            }
            break;
        case Command::estimate_curve:
            read_model("path");
            s.betas = r.grid("beta-grid", "0:1:0.1", s.dim);
            s.lengths = r.list("lengths", "5");
            for (double L : s.lengths)
                if (!(L > 0.0) || std::isinf(L)) bad("lengths", "expected positive finite scales");
            read_reps(8, 2);
            read_mode();
            break;
        case Command::verify:
            s.trials = r.count("trials", default_trials(s.check));
            if (s.check == "chain") {
                s.qs = r.list("q-grid", "0,0.5,inf");
                for (double q : s.qs)
                    if (q < 0.0) bad("q-grid", "penalties must be nonnegative");
            }
            if (s.check == "sprinkle") s.eps = r.positive("eps", 1.0);
            if (s.check != "chain" && r.has("q-grid")) bad("q-grid", "only used by the chain check");
            if (s.check != "sprinkle" && r.has("eps")) bad("eps", "only used by the sprinkle check");
            break;
        case Command::scaling_test:
            s.lambda = r.positive("lambda", 2.0);
            read_model("animal-restricted");
            {
                std::string y = "0.3";
                for (int i = 1; i < s.dim; ++i) y += ",0";
                read_query(0.6, y);
            }
            read_reps(500, 200);
            s.coupled = r.flag("coupled");
            if (s.coupled && s.lambda != 1.0) bad("coupled", "only meaningful with lambda = 1");
            break;
        case Command::q_scan:
            s.beta = r.real("beta", 0.5);
            if (s.beta < 0.0 || s.beta > 1.0) bad("beta", "expected a value in [0, 1]");
            s.length = r.positive("length", 2.0);
            s.qs = r.list("q-grid", "0,0.5,1,2,inf");
            if (!std::is_sorted(s.qs.begin(), s.qs.end())) bad("q-grid", "must be sorted");
            if (s.qs.front() < 0.0) bad("q-grid", "penalties must be nonnegative");
            read_reps(16, 2);
            s.effort = r.count("effort", 64);
            break;
        case Command::universal_bound:
            s.lengths = r.list("lengths", "2,4,6");
            for (double L : s.lengths)
                if (!(L > 0.0) || std::isinf(L)) bad("lengths", "expected positive finite scales");
            read_reps(8, 2);
            s.effort = r.count("effort", 64);
            break;
    }
    return s;
}

Json load_config(const std::filesystem::path& path, Command command, const std::string& check) {
    Json j;
    try {
        j = Json::parse(read_file(path));
    } catch (const Json::parse_error& e) {
        bad("config", "cannot parse " + path.string() + ": " + e.what());
    }
    if (j.contains("spec")) j = j["spec"];
    if (j.contains("params")) {
        if (j.contains("command") && j["command"] != std::string(to_string(command)))
            bad("config.command", "recorded command " + j["command"].dump() + " does not match");
        if (j.contains("check") && j["check"] != check) bad("config.check", "recorded check " + j["check"].dump() + " does not match");
        j = j["params"];
    }
    if (!j.is_object()) bad("config", "expected an object of parameters");
    return j;
}

std::vector<std::filesystem::path> emit_plot_data(const CurveEstimate& curve, const std::filesystem::path& dir) {
    const std::vector<std::pair<std::string, std::string>> files{
        {"curve.csv", curve_csv(curve)}, {"curve_summary.csv", curve_summary_csv(curve)}, {"overlay.csv", overlay_csv(curve)}};
    std::vector<std::filesystem::path> out;
    for (const auto& [name, body] : files) {
        write_file_atomic(dir / name, body);
        out.push_back(dir / name);
    }
    return out;
}

RunOutcome run(const ExperimentSpec& spec) {
    RunOutcome o;
    o.directory = fresh_directory(spec.out, spec.seed);
    const Json spec_json = spec.to_json();
    auto write_json = [&](const std::string& name, Json body) {
        Json doc{{"spec", spec_json}};
        for (auto& [k, v] : body.items()) doc[k] = std::move(v);
        write_file_atomic(o.directory / name, doc.dump(2) + "\n");
        o.files.push_back(o.directory / name);
    };
    auto write_text = [&](const std::string& name, const std::string& body) {
        write_file_atomic(o.directory / name, body);
        o.files.push_back(o.directory / name);
    };
    write_file_atomic(o.directory / "spec.json", spec_json.dump(2) + "\n");
    o.files.push_back(o.directory / "spec.json");

    switch (spec.command) {
        case Command::sample: {
            const auto cfg = sample_ppp(spec.nu, *spec.window, spec.seed);
            write_json("configuration.json", {{"configuration", to_json(cfg)}});
            double mass = 0.0;
            for (const auto& p : cfg.points) mass += p.mass;
            o.summary = {{"atoms", cfg.size()}, {"total_mass", mass}};
            break;
        }
        case Command::solve: {
            PointConfiguration cfg;
            if (spec.input) {
                const Json doc = Json::parse(read_file(*spec.input));
                cfg = configuration_from_json(doc.contains("configuration") ? doc["configuration"] : doc);
            } else {
                cfg = sample_ppp(spec.nu, *spec.window, spec.seed);
            }
            SolveSettings settings;
            settings.effort = spec.effort;
            settings.seed = spec.seed;
            const Query query = make_query(spec);
            const auto result = solve(cfg, query, spec.mode, settings);
            write_json("result.json", {{"query", to_json(query)}, {"atoms", cfg.size()}, {"result", to_json(result)}});
            o.summary = {{"solver_status", std::string(to_string(result.status))}, {"low", result.low},
                         {"high", std::isinf(result.high) ? Json("inf") : Json(result.high)}, {"candidates", result.candidates}};
            break;
        }
        case Command::estimate_curve: {
            CurveSpec cs;
            cs.nu = spec.nu;
            cs.model = spec.model;
            cs.q = spec.q;
            cs.betas = spec.betas;
            cs.lengths = spec.lengths;
            cs.replicates = spec.reps;
            cs.seed = spec.seed;
            cs.mode = spec.mode;
            cs.settings.effort = spec.effort;
            cs.workers = spec.workers;
            // The stretching comparison needs g(β) at the threshold itself.
            if (const double t = g_threshold(spec.dim); t >= cs.betas.front() && t <= cs.betas.back() &&
                std::none_of(cs.betas.begin(), cs.betas.end(), [t](double b) { return std::abs(b - t) < 1e-12; })) {
                cs.betas.insert(std::upper_bound(cs.betas.begin(), cs.betas.end(), t), t);
            }
            const auto curve = estimate_curve(cs);
            for (const auto& f : emit_plot_data(curve, o.directory)) o.files.push_back(f);
            const auto shape = check_curve_shape(curve, 2.0);
            Json report{{"curve", to_json(curve)}, {"shape", to_json(shape)}};
            bool ok = curve.stretch_violations == 0 && !(shape.certified && shape.monotonicity_flags > 0);
            if (curve.betas.front() == 0.0) {
                const auto stretch = stretching_bound_check(curve);
                report["stretching_bound"] = to_json(stretch);
                ok = ok && (stretch.pass || !shape.certified);
            }
            write_json("summary.json", report);
            o.status = ok ? 0 : 1;
            o.summary = {{"all_exact", curve.all_exact()},
                         {"monotonicity_flags", shape.monotonicity_flags},
                         {"stretch_violations", curve.stretch_violations}};
            break;
        }
        case Command::verify: {
            VerifyReport rep;
            if (spec.check == "chain") {
                rep = verify_chain_trials(ChainTrials{spec.nu, spec.trials, spec.qs, 12, spec.seed});
            } else if (spec.check == "stretch") {
                rep = verify_stretch(spec.dim, spec.trials, spec.seed);
            } else if (spec.check == "rewire") {
                rep = verify_rewire(spec.dim, spec.trials, spec.seed);
            } else if (spec.check == "prune") {
                rep = verify_prune(spec.dim, spec.trials, spec.seed);
            } else if (spec.check == "sprinkle") {
                rep = verify_sprinkle(SprinkleTrials{spec.nu, spec.eps, spec.trials, spec.seed});
            } else {
                rep = verify_moment({spec.nu});
            }
            write_json("report.json", {{"report", to_json(rep)}});
            o.status = rep.pass() ? 0 : 1;
            o.summary = {{"check", spec.check}, {"pass", rep.pass()}, {"checks", rep.checks}, {"failures", rep.failure_count}};
            break;
        }
        case Command::scaling_test: {
            ScalingSpec ss;
            ss.nu = spec.nu;
            ss.lambda = spec.lambda;
            ss.query = make_query(spec);
            ss.samples = spec.reps;
            ss.seed = spec.seed;
            ss.coupled = spec.coupled;
            ss.workers = spec.workers;
            const auto res = scaling_test(ss);
            std::ostringstream csv;
            csv << "side,index,value\n";
            for (std::size_t i = 0; i < res.a.size(); ++i) csv << "A," << i << "," << format_number(res.a[i]) << "\n";
            for (std::size_t i = 0; i < res.b.size(); ++i) csv << "B," << i << "," << format_number(res.b[i]) << "\n";
            write_text("samples.csv", csv.str());
            write_json("report.json", {{"ks", to_json(res.ks)}});
            o.status = res.ks.pass ? 0 : 1;
            o.summary = {{"statistic", res.ks.statistic}, {"critical", res.ks.critical}, {"pass", res.ks.pass}};
            break;
        }
        case Command::q_scan: {
            QScanSpec qs;
            qs.nu = spec.nu;
            qs.beta = spec.beta;
            qs.length = spec.length;
            qs.qs = spec.qs;
            qs.replicates = spec.reps;
            qs.seed = spec.seed;
            qs.settings.effort = spec.effort;
            qs.workers = spec.workers;
            const auto res = q_scan(qs);
            std::ostringstream csv;
            csv << "q,replicate,low,high,exact\n";
            for (std::size_t qi = 0; qi < res.qs.size(); ++qi)
                for (std::size_t r = 0; r < spec.reps; ++r) {
                    const auto& c = res.cells[qi * spec.reps + r];
                    csv << format_number(res.qs[qi]) << "," << r << "," << format_number(c.low) << ","
                        << format_number(c.high) << "," << (c.exact ? 1 : 0) << "\n";
                }
            write_text("qscan.csv", csv.str());
            write_json("report.json", {{"report", to_json(res)}});
            o.status = res.pass() ? 0 : 1;
            o.summary = {{"pass", res.pass()}, {"monotonicity_violations", res.monotonicity_violations}};
            break;
        }
        case Command::universal_bound: {
            UniversalSpec us;
            us.nu = spec.nu;
            us.lengths = spec.lengths;
            us.replicates = spec.reps;
            us.seed = spec.seed;
            us.settings.effort = spec.effort;
            us.workers = spec.workers;
            const auto rep = universal_bound_check(us);
            std::ostringstream csv;
            csv << "L,mean,stderr,midpoints\n";
            for (const auto& row : rep.rows)
                csv << format_number(row.length) << "," << format_number(row.ratio.mean) << ","
                    << format_number(row.ratio.std_error) << "," << (row.midpoints ? 1 : 0) << "\n";
            write_text("universal.csv", csv.str());
            write_json("report.json", {{"report", to_json(rep)}});
            o.status = rep.pass ? 0 : 1;
            o.summary = {{"pass", rep.pass}};
            break;
        }
    }
    return o;
}

}  // namespace glab::cli
