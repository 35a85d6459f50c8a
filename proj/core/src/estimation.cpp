#include "glab/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "glab/error.hpp"
#include "glab/parallel.hpp"

namespace glab {
namespace {

void require(bool ok, const std::string& field, const std::string& message) {
    if (!ok) throw ParameterError(field + ": " + message);
}

Point origin(int dim) { return Point::Zero(dim); }

Point on_axis(int dim, double t) {
    Point p = Point::Zero(dim);
    p[0] = t;
    return p;
}

Query curve_query(int dim, Model model, double q, double beta, double length) {
    Query query;
    query.model = model;
    query.x = origin(dim);
    if (beta > 0.0) query.y = on_axis(dim, beta * length);
    query.budget = length;
    query.q = model == Model::animal_penalized ? q : model == Model::animal_restricted ? kInfinity : 0.0;
    return query;
}

bool stretch_violated(const SolveResult& r, double beta, double length, int dim) {
    const auto* path = std::get_if<Path>(&r.witness);
    if (!path) return false;
    return path_length(transform_stretch(*path, beta)) > length * g_function(beta, dim) + kFeasibilityTol;
}

}  // namespace

double g_threshold(int dim) { return 1.0 / std::sqrt(static_cast<double>(dim)); }

double g_function(double beta, int dim) {
    if (dim < 2) throw DomainError("g_function: dimension must be >= 2");
    const double lo = g_threshold(dim);
    // Let the threshold itself through despite rounding in 1/√d.
    if (!(beta >= lo - 1e-15 && beta <= 1.0))
        throw DomainError("g_function: beta must lie in [1/sqrt(d), 1], got " + std::to_string(beta));
    beta = std::max(beta, lo);
    const double d = static_cast<double>(dim);
    const double spread = std::max(0.0, (1.0 - beta * beta) / (d - 1.0));
    return std::sqrt(d) * std::pow(beta, 1.0 / d) * std::pow(spread, (d - 1.0) / (2.0 * d));
}

std::vector<double> beta_grid(double lo, double hi, double step, int dim, bool add_threshold) {
    require(step > 0.0, "beta-grid", "step must be positive");
    require(lo >= 0.0 && hi <= 1.0 && lo <= hi, "beta-grid", "need 0 <= lo <= hi <= 1");
    std::vector<double> grid;
    const auto count = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9));
    for (std::size_t i = 0; i <= count; ++i) grid.push_back(std::min(hi, lo + static_cast<double>(i) * step));
    if (add_threshold) {
        const double t = g_threshold(dim);
        const bool present =
            std::any_of(grid.begin(), grid.end(), [t](double b) { return std::abs(b - t) <= 1e-12; });
        if (t >= lo && t <= hi && !present) grid.insert(std::lower_bound(grid.begin(), grid.end(), t), t);
    }
    return grid;
}

Box curve_window(int dim, double beta, double length) {
    Box box = Box::cube(dim, -length, length);
    box.bounds[0].second = beta * length + length;
    return box;
}

Box query_window(const Query& query) {
    Box box;
    for (int i = 0; i < query.dim(); ++i) {
        double lo = query.x[i], hi = query.x[i];
        if (query.y) {
            lo = std::min(lo, (*query.y)[i]);
            hi = std::max(hi, (*query.y)[i]);
        }
        box.bounds.push_back({lo - query.budget, hi + query.budget});
    }
    return box;
}

// ---------------------------------------------------------------------------
// Curves

void CurveSpec::validate() const {
    nu.validate();
    require(!betas.empty(), "betas", "grid is empty");
    require(!lengths.empty(), "lengths", "grid is empty");
    require(std::is_sorted(betas.begin(), betas.end()), "betas", "grid must be sorted");
    for (double b : betas) require(b >= 0.0 && b <= 1.0, "betas", "entries must lie in [0, 1]");
    for (double l : lengths) require(l > 0.0 && std::isfinite(l), "lengths", "entries must be positive");
    require(replicates >= 2, "replicates", "need at least 2");
    require(q >= 0.0, "q", "must be >= 0");
    require(model == Model::animal_penalized || q == 0.0, "q", "only the animal-penalized model takes a penalty");
    require(workers >= 1, "workers", "need at least 1");
}

const CurvePoint& CurveEstimate::at(std::size_t beta_index, std::size_t length_index) const {
    return points.at(beta_index * lengths.size() + length_index);
}

const CurvePoint& CurveEstimate::f_hat(std::size_t beta_index) const { return at(beta_index, lengths.size() - 1); }

bool CurveEstimate::all_exact() const {
    return std::all_of(points.begin(), points.end(), [](const CurvePoint& p) { return p.exact; });
}

CurveEstimate estimate_curve(const CurveSpec& spec) {
    spec.validate();
    const int dim = spec.nu.dim;
    const std::size_t nb = spec.betas.size(), nl = spec.lengths.size(), nr = spec.replicates;

    CurveEstimate out;
    out.model = spec.model;
    out.q = spec.q;
    out.dim = dim;
    out.betas = spec.betas;
    out.lengths = spec.lengths;
    out.replicates = nr;
    out.seed = spec.seed;
    out.samples.resize(nb * nl * nr);
    std::vector<int> stretch(out.samples.size(), -1);  // -1 unchecked, 0 ok, 1 violated

    parallel_for(out.samples.size(), spec.workers, [&](std::size_t task) {
        const std::size_t bi = task / (nl * nr), li = (task / nr) % nl, r = task % nr;
        const double beta = spec.betas[bi], length = spec.lengths[li];
        const auto cfg = sample_ppp(spec.nu, curve_window(dim, beta, length), derive_seed(spec.seed, {bi, li, r}));
        SolveSettings settings = spec.settings;
        settings.seed = derive_seed(spec.seed, {bi, li, r, 1});
        const SolveResult res = solve(cfg, curve_query(dim, spec.model, spec.q, beta, length), spec.mode, settings);

        ReplicateValue& v = out.samples[task];
        v.beta_index = bi;
        v.length_index = li;
        v.replicate = r;
        v.value = res.low / length;
        v.high = res.high / length;
        v.status = res.status;
        v.exact = res.status == SolveStatus::exact;
        v.atoms = cfg.size();
        if (spec.model == Model::path && beta >= g_threshold(dim) && beta < 1.0)
            stretch[task] = stretch_violated(res, beta, length, dim) ? 1 : 0;
    });

    for (int s : stretch) {
        if (s < 0) continue;
        ++out.stretch_checked;
        if (s == 1) ++out.stretch_violations;
    }
    for (std::size_t bi = 0; bi < nb; ++bi) {
        for (std::size_t li = 0; li < nl; ++li) {
            std::vector<double> values;
            bool exact = true;
            for (std::size_t r = 0; r < nr; ++r) {
                const auto& v = out.samples[(bi * nl + li) * nr + r];
                values.push_back(v.value);
                exact = exact && v.exact;
            }
            out.points.push_back({spec.betas[bi], spec.lengths[li], summarize(values), exact});
        }
    }
    return out;
}

ShapeReport check_curve_shape(const CurveEstimate& curve, double k_sigma) {
    ShapeReport report;
    report.k_sigma = k_sigma;
    report.certified = curve.all_exact();
    const std::size_t n = curve.betas.size();
    auto f = [&](std::size_t i) { return curve.f_hat(i).summary.mean; };
    auto s = [&](std::size_t i) { return curve.f_hat(i).summary.std_error; };
    auto flag = [&](const char* kind, std::size_t i, double margin, std::size_t& counter) {
        report.flags.push_back({kind, i, margin});
        ++counter;
    };

    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double margin = f(i + 1) - f(i) - k_sigma * combined_stderr(s(i), s(i + 1));
        if (margin > 0.0) flag("monotonicity", i + 1, margin, report.monotonicity_flags);
    }
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double b0 = curve.betas[i - 1], b1 = curve.betas[i], b2 = curve.betas[i + 1];
        if (b2 == b0) continue;
        const double w0 = (b2 - b1) / (b2 - b0), w2 = (b1 - b0) / (b2 - b0);
        const double sigma = std::sqrt(s(i) * s(i) + w0 * w0 * s(i - 1) * s(i - 1) + w2 * w2 * s(i + 1) * s(i + 1));
        const double margin = w0 * f(i - 1) + w2 * f(i + 1) - f(i) - k_sigma * sigma;
        if (margin > 0.0) flag("concavity", i, margin, report.concavity_flags);
    }
    const double t = g_threshold(curve.dim);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        if (curve.betas[i] < t - 1e-12) continue;
        const double margin = f(i + 1) - (f(i) - k_sigma * combined_stderr(s(i), s(i + 1)));
        if (margin >= 0.0) flag("strict-decrease", i + 1, margin, report.strict_decrease_flags);
    }
    return report;
}

bool strictly_below(const CurveEstimate& curve, std::size_t a, std::size_t b, double k_sigma) {
    const auto& pa = curve.f_hat(a).summary;
    const auto& pb = curve.f_hat(b).summary;
    return pb.mean < pa.mean - k_sigma * combined_stderr(pa.std_error, pb.std_error);
}

StretchReport stretching_bound_check(const CurveEstimate& curve, double k_sigma) {
    const auto zero = std::find(curve.betas.begin(), curve.betas.end(), 0.0);
    if (zero == curve.betas.end()) throw ParameterError("stretching_bound_check: the beta grid must contain 0");
    const auto& base = curve.f_hat(static_cast<std::size_t>(zero - curve.betas.begin())).summary;

    StretchReport report;
    const double t = g_threshold(curve.dim);
    for (std::size_t i = 0; i < curve.betas.size(); ++i) {
        const double beta = curve.betas[i];
        if (beta < t - 1e-12) continue;
        StretchRow row;
        row.beta = beta;
        row.f_hat = curve.f_hat(i).summary.mean;
        row.g = g_function(beta, curve.dim);
        row.bound = row.g * base.mean;
        row.sigma = combined_stderr(curve.f_hat(i).summary.std_error, row.g * base.std_error);
        row.pass = row.f_hat <= row.bound + k_sigma * row.sigma;
        report.pass = report.pass && row.pass;
        report.rows.push_back(row);
    }
    return report;
}

// ---------------------------------------------------------------------------
// Scaling

void ScalingSpec::validate() const {
    nu.validate();
    query.validate();
    require(lambda > 0.0 && std::isfinite(lambda), "lambda", "must be positive");
    require(query.dim() == nu.dim, "query.x", "dimension differs from nu");
    require(samples >= 200, "samples", "need at least 200 for the asymptotic KS test");
    require(alpha > 0.0 && alpha < 1.0, "alpha", "must lie in (0, 1)");
    require(!coupled || lambda == 1.0, "coupled", "coupled samples require lambda = 1");
    require(workers >= 1, "workers", "need at least 1");
}

namespace {

double exact_value(const PointConfiguration& cfg, const Query& query, const ExactCaps& caps) {
    SolveSettings settings;
    settings.caps = caps;
    settings.bracket.enumeration_cap = caps.animal;
    return solve(cfg, query, SolverMode::exact, settings).low;
}

}  // namespace

ScalingResult scaling_test(const ScalingSpec& spec) {
    spec.validate();
    Query scaled = spec.query;
    scaled.x = spec.lambda * spec.query.x;
    if (scaled.y) scaled.y = spec.lambda * *spec.query.y;
    scaled.budget = spec.lambda * spec.query.budget;
    const IntensityDescriptor denser = spec.nu.scaled(std::pow(spec.lambda, spec.nu.dim));
    const Box window_a = query_window(scaled), window_b = query_window(spec.query);

    ScalingResult out;
    out.a.resize(spec.samples);
    out.b.resize(spec.samples);
    parallel_for(2 * spec.samples, spec.workers, [&](std::size_t task) {
        const std::size_t side = task / spec.samples, i = task % spec.samples;
        const std::uint64_t seed = derive_seed(spec.seed, {spec.coupled ? 0 : side, i});
        if (side == 0) {
            out.a[i] = exact_value(sample_ppp(spec.nu, window_a, seed), scaled, spec.caps);
        } else {
            out.b[i] = exact_value(sample_ppp(denser, window_b, seed), spec.query, spec.caps);
        }
    });
    out.ks = ks_two_sample(out.a, out.b, spec.alpha);
    return out;
}

// ---------------------------------------------------------------------------
// q scan

void QScanSpec::validate() const {
    nu.validate();
    require(!qs.empty(), "q-grid", "grid is empty");
    require(std::is_sorted(qs.begin(), qs.end()), "q-grid", "grid must be sorted");
    for (double q : qs) require(q >= 0.0, "q-grid", "entries must be >= 0");
    require(beta >= 0.0 && beta <= 1.0, "beta", "must lie in [0, 1]");
    require(length > 0.0 && std::isfinite(length), "length", "must be positive");
    require(replicates >= 2, "replicates", "need at least 2");
    require(workers >= 1, "workers", "need at least 1");
}

QScanResult q_scan(const QScanSpec& spec) {
    spec.validate();
    const int dim = spec.nu.dim;
    const std::size_t nq = spec.qs.size(), nr = spec.replicates;
    const double L = spec.length;

    QScanResult out;
    out.qs = spec.qs;
    out.cells.resize(nq * nr);
    out.unrestricted.resize(nr);
    out.flattened.resize(nr);
    out.realization_mass.resize(nr);
    out.restricted.assign(nr, std::nan(""));

    auto cell_of = [](const SolveResult& r) { return QScanCell{r.low, r.high, r.status == SolveStatus::exact}; };

    parallel_for(nr, spec.workers, [&](std::size_t r) {
        const auto cfg = sample_ppp(spec.nu, curve_window(dim, spec.beta, L), derive_seed(spec.seed, {r}));
        SolveSettings settings = spec.settings;
        settings.seed = derive_seed(spec.seed, {r, 1});
        out.realization_mass[r] = cfg.total_mass();
        for (std::size_t qi = 0; qi < nq; ++qi) {
            const Query query = curve_query(dim, Model::animal_penalized, spec.qs[qi], spec.beta, L);
            out.cells[qi * nr + r] = cell_of(solve(cfg, query, SolverMode::automatic, settings));
        }
        const Query unrestricted = curve_query(dim, Model::animal_unrestricted, 0.0, spec.beta, L);
        out.unrestricted[r] = cell_of(solve(cfg, unrestricted, SolverMode::automatic, settings));
        out.flattened[r] = cell_of(solve(flatten_marks(cfg), unrestricted, SolverMode::automatic, settings));
        const Query restricted = curve_query(dim, Model::animal_restricted, 0.0, spec.beta, L);
        const SolveResult rr = solve(cfg, restricted, SolverMode::automatic, settings);
        if (rr.status == SolveStatus::exact) out.restricted[r] = rr.low;
    });

    constexpr double tol = kFeasibilityTol;
    std::vector<double> flat;
    for (const auto& c : out.flattened) flat.push_back(c.high / L);
    out.lipschitz_constant = summarize(flat).mean;

    for (std::size_t qi = 0; qi < nq; ++qi) {
        QScanRow row;
        row.q = spec.qs[qi];
        std::vector<double> lows, highs;
        for (std::size_t r = 0; r < nr; ++r) {
            const QScanCell& c = out.cells[qi * nr + r];
            lows.push_back(c.low / L);
            highs.push_back(c.high / L);
            if (c.exact) ++row.exact;
            if (qi > 0) {
                const QScanCell& prev = out.cells[(qi - 1) * nr + r];
                if (c.low > prev.low + tol || c.high > prev.high + tol) ++out.monotonicity_violations;
            }
            if (row.q == 0.0) {
                const QScanCell& u = out.unrestricted[r];
                if (std::abs(c.low - u.low) > tol || std::abs(c.high - u.high) > tol) ++out.q0_mismatches;
            }
            if (row.q >= out.realization_mass[r] && !std::isnan(out.restricted[r])) {
                ++out.dominance_checked;
                if (!c.exact || c.low != out.restricted[r] || c.high != out.restricted[r]) ++out.dominance_mismatches;
            }
        }
        row.low = summarize(lows);
        row.high = summarize(highs);
        out.rows.push_back(row);
    }
    for (std::size_t qi = 0; qi + 1 < nq; ++qi) {
        const QScanRow &a = out.rows[qi], &b = out.rows[qi + 1];
        if (!std::isfinite(b.q)) continue;
        const double drop = std::abs(b.low.mean - a.low.mean);
        const double allowance = (b.q - a.q) * out.lipschitz_constant +
                                 3.0 * combined_stderr(a.low.std_error, b.low.std_error);
        if (drop > allowance + tol) ++out.lipschitz_violations;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Universal bound

void UniversalSpec::validate() const {
    nu.validate();
    require(!lengths.empty(), "lengths", "grid is empty");
    require(std::is_sorted(lengths.begin(), lengths.end()), "lengths", "grid must be sorted");
    for (double l : lengths) require(l > 0.0 && std::isfinite(l), "lengths", "entries must be positive");
    require(replicates >= 2, "replicates", "need at least 2");
    require(workers >= 1, "workers", "need at least 1");
}

UniversalReport universal_bound_check(const UniversalSpec& spec) {
    spec.validate();
    const int dim = spec.nu.dim;
    const std::size_t nl = spec.lengths.size(), nr = spec.replicates;
    std::vector<SolveResult> results(nl * nr);
    parallel_for(results.size(), spec.workers, [&](std::size_t task) {
        const std::size_t li = task / nr, r = task % nr;
        const double L = spec.lengths[li];
        const auto cfg = sample_ppp(spec.nu, Box::cube(dim, -L, L), derive_seed(spec.seed, {li, r}));
        SolveSettings settings = spec.settings;
        settings.seed = derive_seed(spec.seed, {li, r, 1});
        results[task] = solve(cfg, curve_query(dim, Model::animal_unrestricted, 0.0, 0.0, L), SolverMode::automatic,
                              settings);
    });

    UniversalReport report;
    report.moment = check_moment_condition(spec.nu, 1e-10);
    for (std::size_t li = 0; li < nl; ++li) {
        UniversalRow row;
        row.length = spec.lengths[li];
        // Above the enumeration cap the high end is only the total candidate
        // mass, so the low end is the better point estimate there.
        row.midpoints = std::all_of(results.begin() + static_cast<std::ptrdiff_t>(li * nr),
                                    results.begin() + static_cast<std::ptrdiff_t>((li + 1) * nr),
                                    [&](const SolveResult& r) { return r.candidates <= spec.settings.bracket.enumeration_cap; });
        std::vector<double> ratios;
        for (std::size_t r = 0; r < nr; ++r) {
            const SolveResult& res = results[li * nr + r];
            ratios.push_back((row.midpoints ? res.midpoint() : res.low) / row.length);
        }
        row.ratio = summarize(ratios);
        report.rows.push_back(row);
    }
    const Summary& first = report.rows.front().ratio;
    const Summary& last = report.rows.back().ratio;
    report.pass = last.mean <= 1.5 * first.mean + 3.0 * combined_stderr(first.std_error, last.std_error);
    return report;
}

}  // namespace glab
