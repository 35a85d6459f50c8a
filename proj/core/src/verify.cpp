#include "glab/verify.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "glab/error.hpp"
#include "glab/estimation.hpp"
#include "glab/stats.hpp"

namespace glab {

void VerifyReport::record(std::size_t trial, const std::string& check, bool ok, double lhs, double rhs) {
    ++checks;
    if (ok) return;
    ++failure_count;
    if (failures.size() < 20) failures.push_back({trial, check, lhs, rhs});
}

namespace {

double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

std::size_t uniform_index(Rng& rng, std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

Point random_point(Rng& rng, int dim, double lo, double hi) {
    Point p(dim);
    for (int i = 0; i < dim; ++i) p[i] = uniform(rng, lo, hi);
    return p;
}

Point random_direction(Rng& rng, int dim) {
    std::normal_distribution<double> normal;
    Point p(dim);
    do {
        for (int i = 0; i < dim; ++i) p[i] = normal(rng);
    } while (p.norm() == 0.0);
    return p / p.norm();
}

// Smallest pairwise distance between incident unit directions, over all vertices.
double min_direction_gap(const Animal& a) {
    double gap = kInfinity;
    const auto adj = a.adjacency();
    for (std::size_t v = 0; v < a.size(); ++v) {
        for (std::size_t i = 0; i < adj[v].size(); ++i) {
            const Point ui = (a.vertices[adj[v][i]].pos - a.vertices[v].pos).normalized();
            for (std::size_t j = i + 1; j < adj[v].size(); ++j) {
                const Point uj = (a.vertices[adj[v][j]].pos - a.vertices[v].pos).normalized();
                gap = std::min(gap, (ui - uj).norm());
            }
        }
    }
    return gap;
}

}  // namespace

Animal random_tree(std::vector<Vertex> vertices, Rng& rng) {
    Animal a;
    a.vertices = std::move(vertices);
    for (std::size_t i = 1; i < a.size(); ++i) {
        const std::size_t parent = uniform(rng, 0.0, 1.0) < 0.6 ? uniform_index(rng, 0, std::min<std::size_t>(i, 3) - 1)
                                                                : uniform_index(rng, 0, i - 1);
        a.edges.push_back({parent, i});
    }
    return a;
}

// ---------------------------------------------------------------------------

VerifyReport verify_chain_trials(const ChainTrials& spec) {
    spec.nu.validate();
    VerifyReport report;
    report.name = "chain";
    const int dim = spec.nu.dim;
    std::size_t exact_brackets = 0, brackets = 0;
    for (std::size_t t = 0; t < spec.trials; ++t) {
        Rng rng = make_rng(derive_seed(spec.seed, {t}));
        const double budget = uniform(rng, 0.5, 2.0);
        PointConfiguration cfg;
        for (std::uint64_t attempt = 0;; ++attempt) {
            cfg = sample_ppp(spec.nu, Box::cube(dim, -budget, budget), derive_seed(spec.seed, {t, attempt + 1}));
            if (cfg.size() <= spec.max_atoms) break;
            if (attempt > 10000) throw InfeasibleError("verify_chain_trials: cannot draw a small enough instance");
        }
        ++report.trials;
        for (double q : spec.qs) {
            const ChainReport chain = verify_chain(cfg, budget, q, Point::Zero(dim));
            for (const auto& c : chain.comparisons) report.record(t, c.name + " (q=" + std::to_string(q) + ")", c.pass, c.lhs, c.rhs);
            for (const SolveResult* r : {&chain.penalized, &chain.unrestricted}) {
                ++brackets;
                if (r->status == SolveStatus::exact) ++exact_brackets;
            }
        }
    }
    report.metrics["exact_fraction"] = brackets ? static_cast<double>(exact_brackets) / static_cast<double>(brackets) : 1.0;
    return report;
}

VerifyReport verify_stretch(int dim, std::size_t trials, std::uint64_t seed) {
    VerifyReport report;
    report.name = "stretch";
    const double lo = g_threshold(dim);
    double worst = -kInfinity;
    for (std::size_t t = 0; report.trials < trials; ++t) {
        Rng rng = make_rng(derive_seed(seed, {t}));
        const double beta = uniform(rng, 0.0, 1.0) < 0.1 ? lo : uniform(rng, lo, 0.99);
        const double budget = uniform(rng, 0.5, 5.0);
        const Point x = Point::Zero(dim);
        Point y = Point::Zero(dim);
        y[0] = budget * beta;

        // Intermediate points: positions along the segment plus deviations,
        // shrunk until the path fits the budget.
        const std::size_t k = uniform_index(rng, 0, 8);
        std::vector<double> along(k);
        for (auto& a : along) a = uniform(rng, 0.0, 1.0);
        if (uniform(rng, 0.0, 1.0) < 0.7) std::sort(along.begin(), along.end());
        std::vector<Point> offset(k);
        for (auto& o : offset) o = random_direction(rng, dim) * uniform(rng, 0.0, budget);

        auto build = [&](double s) {
            Path p;
            p.vertices.push_back(Vertex::free(x));
            for (std::size_t i = 0; i < k; ++i) p.vertices.push_back(Vertex::free(along[i] * y + s * offset[i]));
            p.vertices.push_back(Vertex::free(y));
            return p;
        };
        if (path_length(build(0.0)) > budget) std::sort(along.begin(), along.end());
        double a = 0.0, b = 1.0;
        if (path_length(build(1.0)) <= budget) {
            a = 1.0;
        } else {
            for (int it = 0; it < 60; ++it) {
                const double m = 0.5 * (a + b);
                (path_length(build(m)) <= budget ? a : b) = m;
            }
        }
        const double shrink = uniform(rng, 0.0, 1.0) < 0.5 ? 1.0 : uniform(rng, 0.0, 1.0);
        const Path path = build(a * shrink);
        const double len = path_length(path);
        if (len > budget) continue;  // rounding at the boundary; not a member of S_P
        ++report.trials;
        const double stretched = path_length(transform_stretch(path, beta));
        const double bound = budget * g_function(beta, dim);
        worst = std::max(worst, stretched - bound);
        report.record(t, "stretched length <= l g(beta)", stretched <= bound + kFeasibilityTol, stretched, bound);
    }
    report.metrics["worst_margin"] = worst;
    return report;
}

VerifyReport verify_rewire(int dim, std::size_t trials, std::uint64_t seed) {
    VerifyReport report;
    report.name = "rewire";
    std::size_t steps = 0, top_degree = 0;
    for (std::size_t t = 0; t < trials; ++t) {
        Rng rng = make_rng(derive_seed(seed, {t}));
        const std::size_t n = uniform_index(rng, 2, 40);
        std::vector<Vertex> vs;
        for (std::size_t i = 0; i < n; ++i) vs.push_back(Vertex::free(random_point(rng, dim, 0.0, 1.0)));
        const Animal tree = random_tree(vs, rng);
        const RewireTrace trace = rewire_high_degree_traced(tree);
        const Animal& out = trace.animal;
        ++report.trials;
        steps += trace.lengths.size() - 1;

        bool same = out.size() == tree.size();
        for (std::size_t i = 0; same && i < tree.size(); ++i) same = out.vertices[i].pos == tree.vertices[i].pos;
        report.record(t, "vertex set preserved", same);
        report.record(t, "connected", is_well_formed(out));
        for (std::size_t i = 1; i < trace.lengths.size(); ++i)
            report.record(t, "strict length decrease per step", trace.lengths[i] < trace.lengths[i - 1],
                          trace.lengths[i], trace.lengths[i - 1]);
        report.record(t, "length non-increasing", animal_length(out) <= animal_length(tree) + kLengthTol,
                      animal_length(out), animal_length(tree));
        const double gap = min_direction_gap(out);
        report.record(t, "incident directions pairwise >= 1 apart", gap >= 1.0 - 1e-9, gap, 1.0);
        const std::size_t deg = max_degree(out);
        top_degree = std::max(top_degree, deg);
        if (dim == 2) report.record(t, "max degree <= 6", deg <= 6, static_cast<double>(deg), 6.0);
        if (dim == 3) report.record(t, "max degree <= 12", deg <= 12, static_cast<double>(deg), 12.0);
    }
    report.metrics["rewire_steps"] = static_cast<double>(steps);
    report.metrics["max_degree"] = static_cast<double>(top_degree);
    return report;
}

VerifyReport verify_prune(int dim, std::size_t trials, std::uint64_t seed) {
    VerifyReport report;
    report.name = "prune";
    std::size_t removed = 0;
    const double qs[] = {0.0, 0.5, 2.0, kInfinity};
    for (std::size_t t = 0; t < trials; ++t) {
        Rng rng = make_rng(derive_seed(seed, {t}));
        PointConfiguration cfg;
        cfg.dim = dim;
        cfg.window = Box::cube(dim, -1.0, 2.0);
        const std::size_t atoms = uniform_index(rng, 0, 6);
        for (std::size_t i = 0; i < atoms; ++i)
            cfg.points.push_back({random_point(rng, dim, 0.0, 1.0), uniform(rng, 0.5, 3.0)});

        std::vector<Vertex> vs;
        for (std::size_t i = 0; i < atoms; ++i) vs.push_back(Vertex::at_atom(cfg, i));
        const std::size_t free = uniform_index(rng, 1, 10);
        for (std::size_t i = 0; i < free; ++i) vs.push_back(Vertex::free(random_point(rng, dim, 0.0, 1.0)));
        std::shuffle(vs.begin(), vs.end(), rng);
        Animal animal = random_tree(std::move(vs), rng);
        const bool tree = uniform(rng, 0.0, 1.0) < 0.8;
        if (!tree && animal.size() >= 3) {
            const std::size_t a = uniform_index(rng, 0, animal.size() - 1);
            std::size_t b = uniform_index(rng, 0, animal.size() - 2);
            if (b >= a) ++b;
            const Edge e{std::min(a, b), std::max(a, b)};
            const bool present = std::any_of(animal.edges.begin(), animal.edges.end(), [&](const Edge& f) {
                return std::min(f.first, f.second) == e.first && std::max(f.first, f.second) == e.second;
            });
            if (!present) animal.edges.push_back(e);
        }
        const bool is_tree = animal.edges.size() + 1 == animal.size();

        Query query;
        query.model = Model::animal_penalized;
        query.x = random_point(rng, dim, -0.5, 1.5);
        if (uniform(rng, 0.0, 1.0) < 0.5) query.y = random_point(rng, dim, -0.5, 1.5);
        query.q = qs[uniform_index(rng, 0, 3)];
        query.budget = animal_length(animal) + distance_to_vertices(query.x, animal) +
                       (query.y ? distance_to_vertices(*query.y, animal) : 0.0) + uniform(rng, 0.0, 1.0);

        const PruneResult pr = prune_bad_vertices(animal, query.x, query.y);
        const Animal& out = pr.animal;
        ++report.trials;
        removed += pr.deleted + pr.contracted;

        report.record(t, "feasible before", is_feasible(animal, query));
        report.record(t, "feasibility preserved", is_feasible(out, query));
        report.record(t, "well formed", is_well_formed(out));
        const double before = penalized_score(animal, cfg, query.q);
        const double after = penalized_score(out, cfg, query.q);
        report.record(t, "score non-decreasing", after >= before - kLengthTol || std::isinf(before), after, before);

        const auto good = good_vertices(out, query.x, query.y);
        const auto deg = out.degrees();
        std::size_t bad = 0, n_good = 0;
        for (std::size_t v = 0; v < out.size(); ++v) {
            if (good[v]) {
                ++n_good;
                continue;
            }
            ++bad;
            report.record(t, "surviving bad vertex has degree >= 3", deg[v] >= 3, static_cast<double>(deg[v]), 3.0);
        }
        if (is_tree) {
            const double bad_d = static_cast<double>(bad);
            report.record(t, "#bad <= #good - 2 (tree, #bad > 0)", bad == 0 || bad + 2 <= n_good, bad_d,
                          static_cast<double>(n_good) - 2.0);
            const double flat = static_cast<double>(out.atom_count());
            report.record(t, "#bad <= flattened mass (tree)", bad_d <= flat, bad_d, flat);
        }
    }
    report.metrics["removed_vertices"] = static_cast<double>(removed);
    return report;
}

VerifyReport verify_sprinkle(const SprinkleTrials& spec) {
    spec.nu.validate();
    if (!(spec.eps > 0.0)) throw ParameterError("eps: must be positive");
    VerifyReport report;
    report.name = "sprinkle";
    const int dim = spec.nu.dim;

    // Closed form against quadrature.
    double worst = 0.0;
    std::vector<IntensityDescriptor> menu{spec.nu};
    for (int d : {2, 3, 4}) {
        menu.push_back(IntensityDescriptor::dirac(d, 1.0, 1.0));
        menu.push_back(IntensityDescriptor::exponential(d, 1.0, 2.0));
        menu.push_back(IntensityDescriptor::pareto(d, 1.0, d + 1.0, 0.5));
        menu.push_back(IntensityDescriptor::mixture(d, {{1.0, 0.3}, {4.0, 0.2}}));
    }
    for (const auto& nu : menu) {
        for (double eps : {0.05, 0.5, 1.0, 2.0, 10.0, spec.eps}) {
            const double closed = sprinkle_integral(nu, eps);
            const double quad = sprinkle_integral_quadrature(nu, eps, 1e-11);
            worst = std::max(worst, std::abs(closed - quad));
            report.record(0, "I(eps) closed form vs quadrature", std::abs(closed - quad) <= 1e-8, closed, quad);
        }
    }
    const double half = sprinkle_integral(IntensityDescriptor::dirac(2, 1.0, 1.0), 1.0);
    report.record(0, "I(1) = 1/2 in d = 2", std::abs(half - 0.5) <= 1e-12, half, 0.5);
    report.metrics["quadrature_gap"] = worst;

    // Replacement on random animals.
    const Box window = Box::cube(dim, 0.0, 6.0);
    const IntensityDescriptor thin = spec.nu.scaled(spec.eps);
    auto sprinkle_for = [&](std::uint64_t s) {
        for (std::uint64_t attempt = 0;; ++attempt) {
            auto cfg = sample_ppp(thin, window, derive_seed(s, {attempt}));
            if (!cfg.empty()) return cfg;
        }
    };
    for (std::size_t t = 0; t < spec.trials; ++t) {
        Rng rng = make_rng(derive_seed(spec.seed, {0, t}));
        const auto base = sample_ppp(spec.nu, window, derive_seed(spec.seed, {1, t}));
        const auto sprinkle = sprinkle_for(derive_seed(spec.seed, {2, t}));
        std::vector<Vertex> vs;
        for (std::size_t i = 0; i < base.size() && vs.size() < 4; ++i)
            if (uniform(rng, 0.0, 1.0) < 0.3) vs.push_back(Vertex::at_atom(base, i));
        const std::size_t free = uniform_index(rng, 1, 8);
        for (std::size_t i = 0; i < free; ++i) vs.push_back(Vertex::free(random_point(rng, dim, 1.0, 5.0)));
        const Animal animal = random_tree(std::move(vs), rng);
        const SprinkleOutcome out = sprinkle_replace(animal, sprinkle, base.size());
        const auto merged = superpose(base, sprinkle);
        ++report.trials;
        report.record(t, "length bound", out.bound_holds(), out.length_after,
                      out.length_before + static_cast<double>(out.max_replaced_degree) * out.shift);
        report.record(t, "no free vertices left", out.animal.free_count() == 0);
        report.record(t, "tags match the superposition", tags_consistent(out.animal, merged));
        report.record(t, "connected", is_well_formed(out.animal));
    }

    // Markov: P(R <= 2 E[R]) >= 1/2 for a fixed animal.
    std::vector<Point> fixed;
    {
        Rng rng = make_rng(derive_seed(spec.seed, {3}));
        for (int i = 0; i < 5; ++i) fixed.push_back(random_point(rng, dim, 2.0, 4.0));
    }
    std::vector<double> shifts;
    for (std::size_t t = 0; t < spec.trials; ++t) {
        const auto sprinkle = sprinkle_for(derive_seed(spec.seed, {4, t}));
        double r = 0.0;
        for (const auto& p : fixed) r += nearest_atom_distance(sprinkle, p);
        shifts.push_back(r);
    }
    const double mean = summarize(shifts).mean;
    const double freq = static_cast<double>(std::count_if(shifts.begin(), shifts.end(),
                                                          [&](double r) { return r <= 2.0 * mean; })) /
                        static_cast<double>(shifts.size());
    const double sigma = std::sqrt(freq * (1.0 - freq) / static_cast<double>(shifts.size()));
    report.record(0, "P(R <= 2E[R]) >= 1/2 - 3 sigma", freq >= 0.5 - 3.0 * sigma, freq, 0.5 - 3.0 * sigma);
    report.metrics["markov_frequency"] = freq;
    report.metrics["mean_shift_per_vertex"] = mean / static_cast<double>(fixed.size());
    report.metrics["I_eps"] = sprinkle_integral(spec.nu, spec.eps);
    return report;
}

VerifyReport verify_moment(const std::vector<IntensityDescriptor>& extra, double tol) {
    VerifyReport report;
    report.name = "moment";
    auto expect = [&](const IntensityDescriptor& nu, double value) {
        const MomentCheck m = check_moment_condition(nu, tol);
        report.record(0, nu.kind() + " closed form", m.finite && std::abs(m.value - value) <= 1e-12, m.value, value);
    };
    expect(IntensityDescriptor::dirac(2, 1.0, 1.0), 1.0);
    expect(IntensityDescriptor::exponential(2, 1.0), 2.0);
    report.record(0, "pareto shape = d diverges", !check_moment_condition(IntensityDescriptor::pareto(2, 1.0, 2.0), tol).finite);

    std::vector<IntensityDescriptor> menu = extra;
    for (int d : {2, 3, 5}) {
        menu.push_back(IntensityDescriptor::dirac(d, 2.0, 0.7));
        menu.push_back(IntensityDescriptor::exponential(d, 0.5, 3.0));
        menu.push_back(IntensityDescriptor::pareto(d, 1.5, d + 0.5, 2.0));
        menu.push_back(IntensityDescriptor::mixture(d, {{0.5, 1.0}, {2.0, 0.25}, {7.0, 0.01}}));
    }
    double worst = 0.0;
    for (const auto& nu : menu) {
        ++report.trials;
        const MomentCheck m = check_moment_condition(nu, tol);
        if (!m.finite) continue;
        const double quad = moment_integral_quadrature(nu, tol);
        worst = std::max(worst, std::abs(m.value - quad));
        report.record(report.trials, nu.kind() + " closed form vs quadrature", std::abs(m.value - quad) <= tol, m.value,
                      quad);
    }
    report.metrics["quadrature_gap"] = worst;
    return report;
}

}  // namespace glab
