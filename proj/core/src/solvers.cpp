#include "glab/solvers.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <numeric>

#include "glab/error.hpp"
#include "glab/steiner.hpp"
#include "solver_common.hpp"

namespace glab {
namespace detail {

double Candidates::total_mass() const noexcept { return std::accumulate(mass.begin(), mass.end(), 0.0); }

Candidates make_candidates(const PointConfiguration& cfg, const Point& x, const std::optional<Point>& y,
                           double budget, std::vector<std::size_t> atoms) {
    Candidates c;
    c.cfg = &cfg;
    c.x = x;
    c.y = y;
    c.budget = budget;
    c.atoms = std::move(atoms);
    for (std::size_t a : c.atoms) {
        const Point& p = cfg.points[a].pos;
        c.mass.push_back(cfg.points[a].mass);
        c.to_x.push_back((p - x).norm());
        c.to_y.push_back(y ? (p - *y).norm() : 0.0);
    }
    return c;
}

Vertex endpoint_vertex(const PointConfiguration& cfg, const Point& p) { return {p, atom_at(p, cfg)}; }

namespace {

// Prim's algorithm on an explicit point list; O(n²).
template <class DistFn>
double prim_length(std::size_t n, DistFn dist) {
    if (n < 2) return 0.0;
    std::vector<double> best(n, kInfinity);
    std::vector<bool> in(n, false);
    best[0] = 0.0;
    double total = 0.0;
    for (std::size_t step = 0; step < n; ++step) {
        std::size_t u = n;
        for (std::size_t i = 0; i < n; ++i)
            if (!in[i] && (u == n || best[i] < best[u])) u = i;
        in[u] = true;
        total += best[u];
        for (std::size_t v = 0; v < n; ++v)
            if (!in[v]) best[v] = std::min(best[v], dist(u, v));
    }
    return total;
}

void remove_vertex(Animal& a, std::size_t v) {
    a.vertices.erase(a.vertices.begin() + static_cast<std::ptrdiff_t>(v));
    std::vector<Edge> kept;
    for (auto [p, r] : a.edges) {
        if (p == v || r == v) continue;
        kept.push_back({p > v ? p - 1 : p, r > v ? r - 1 : r});
    }
    a.edges = std::move(kept);
}

}  // namespace

Animal restricted_animal(const Candidates& c, const std::vector<std::size_t>& members) {
    std::vector<Vertex> vs;
    vs.reserve(members.size());
    for (std::size_t m : members) vs.push_back(Vertex::at_atom(*c.cfg, c.atoms[m]));
    return mst_animal(std::move(vs));
}

double restricted_cost(const Candidates& c, const std::vector<std::size_t>& members) {
    double dx = kInfinity, dy = c.y ? kInfinity : 0.0;
    for (std::size_t m : members) {
        dx = std::min(dx, c.to_x[m]);
        if (c.y) dy = std::min(dy, c.to_y[m]);
    }
    const double tree =
        prim_length(members.size(), [&](std::size_t i, std::size_t j) { return c.dist(members[i], members[j]); });
    return tree + dx + dy;
}

double terminal_mst_length(const Candidates& c, const std::vector<std::size_t>& members) {
    std::vector<Point> pts;
    pts.reserve(members.size() + 2);
    for (std::size_t m : members) pts.push_back(c.pos(m));
    pts.push_back(c.x);
    if (c.y) pts.push_back(*c.y);
    return prim_length(pts.size(), [&](std::size_t i, std::size_t j) { return (pts[i] - pts[j]).norm(); });
}

double tilde_cost(const Animal& a, const Point& x, const std::optional<Point>& y) {
    if (a.empty()) return 0.0;
    double cost = animal_length(a) + distance_to_vertices(x, a);
    if (y) cost += distance_to_vertices(*y, a);
    return cost;
}

Animal junction_animal(const Candidates& c, const std::vector<std::size_t>& members) {
    std::vector<Vertex> vs;
    for (std::size_t m : members) vs.push_back(Vertex::at_atom(*c.cfg, c.atoms[m]));
    auto index_of = [&](const Point& p) -> std::optional<std::size_t> {
        for (std::size_t i = 0; i < vs.size(); ++i)
            if (vs[i].pos == p) return i;
        return std::nullopt;
    };
    std::vector<std::size_t> added;
    if (!index_of(c.x)) {
        added.push_back(vs.size());
        vs.push_back(endpoint_vertex(*c.cfg, c.x));
    }
    if (c.y && !index_of(*c.y)) {
        added.push_back(vs.size());
        vs.push_back(endpoint_vertex(*c.cfg, *c.y));
    }
    Animal tree = steiner_improve(mst_animal(std::move(vs)));

    // Free endpoint leaves only cost length already charged by d(x, ξ), d(y, ξ).
    std::sort(added.rbegin(), added.rend());
    for (std::size_t v : added) {
        if (tree.size() > 1 && !tree.vertices[v].atom && tree.degrees()[v] <= 1) remove_vertex(tree, v);
    }
    return prune_bad_vertices(tree, c.x, c.y).animal;
}

Animal attach_endpoints(const Animal& a, const PointConfiguration& cfg, const Point& x,
                        const std::optional<Point>& y) {
    if (a.empty()) {
        Animal out;
        out.vertices.push_back(endpoint_vertex(cfg, x));
        if (y && *y != x) {
            out.vertices.push_back(endpoint_vertex(cfg, *y));
            out.edges.push_back({0, 1});
        }
        return out;
    }
    Animal out = a;
    auto attach = [&](const Point& p) {
        for (const auto& v : out.vertices)
            if (v.pos == p) return;
        std::size_t nearest = 0;
        for (std::size_t i = 1; i < out.size(); ++i)
            if ((out.vertices[i].pos - p).norm() < (out.vertices[nearest].pos - p).norm()) nearest = i;
        out.vertices.push_back(endpoint_vertex(cfg, p));
        out.edges.push_back({nearest, out.size() - 1});
    };
    attach(x);
    if (y) attach(*y);
    return out;
}

double proven_steiner_ratio(int dim) { return dim == 2 ? std::sqrt(3.0) / 2.0 : 0.5; }

}  // namespace detail

using namespace detail;

namespace {

using Mask = std::uint32_t;

std::vector<std::size_t> members_of(Mask mask) {
    std::vector<std::size_t> out;
    for (Mask m = mask; m != 0; m &= m - 1) out.push_back(static_cast<std::size_t>(std::countr_zero(m)));
    return out;
}

// Lexicographic order of the sorted index lists encoded by the masks.
bool lex_less(Mask a, Mask b) {
    if (a == b) return false;
    const int i = std::countr_zero(a ^ b);
    if ((a >> i) & 1u) return (b >> (i + 1)) != 0;
    return (a >> (i + 1)) == 0;
}

std::vector<double> subset_masses(const Candidates& c) {
    const std::size_t k = c.size();
    std::vector<double> mass(std::size_t{1} << k, 0.0);
    for (Mask m = 1; m < mass.size(); ++m) {
        const int low = std::countr_zero(m);
        mass[m] = mass[m & (m - 1)] + c.mass[static_cast<std::size_t>(low)];
    }
    return mass;
}

// All subsets, heaviest first, ties in lexicographic order of atom indices.
std::vector<Mask> masks_by_mass(const std::vector<double>& mass) {
    std::vector<Mask> order(mass.size());
    std::iota(order.begin(), order.end(), Mask{0});
    std::sort(order.begin(), order.end(), [&](Mask a, Mask b) {
        if (mass[a] != mass[b]) return mass[a] > mass[b];
        return lex_less(a, b);
    });
    return order;
}

std::string cap_message(const char* solver, std::size_t count, std::size_t cap) {
    return std::string(solver) + ": " + std::to_string(count) + " candidate atoms exceed the exact-size cap of " +
           std::to_string(cap) + "; use the heuristic solver";
}

double effective_q(const Query& q) {
    switch (q.model) {
        case Model::animal_unrestricted: return 0.0;
        case Model::animal_restricted: return kInfinity;
        default: return q.q;
    }
}

}  // namespace

std::string_view to_string(SolveStatus s) noexcept {
    switch (s) {
        case SolveStatus::exact: return "exact";
        case SolveStatus::bracket: return "bracket";
        case SolveStatus::lower_bound: return "lower-bound";
        case SolveStatus::infeasible: return "infeasible";
    }
    return "unknown";
}

SolveStatus parse_status(std::string_view name) {
    for (auto s : {SolveStatus::exact, SolveStatus::bracket, SolveStatus::lower_bound, SolveStatus::infeasible})
        if (to_string(s) == name) return s;
    throw ParameterError("unknown solve status '" + std::string(name) + "'");
}

std::string_view to_string(SolverMode m) noexcept {
    switch (m) {
        case SolverMode::exact: return "exact";
        case SolverMode::heuristic: return "heuristic";
        case SolverMode::automatic: return "auto";
    }
    return "unknown";
}

SolverMode parse_solver_mode(std::string_view name) {
    for (auto m : {SolverMode::exact, SolverMode::heuristic, SolverMode::automatic})
        if (to_string(m) == name) return m;
    throw ParameterError("unknown solver mode '" + std::string(name) + "'");
}

std::vector<std::size_t> path_candidates(const PointConfiguration& cfg, const Point& x,
                                         const std::optional<Point>& y, double budget) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < cfg.size(); ++i) {
        const Point& p = cfg.points[i].pos;
        const double reach = (p - x).norm() + (y ? (p - *y).norm() : 0.0);
        if (reach <= budget + kLengthTol) out.push_back(i);
    }
    return out;
}

std::vector<std::size_t> animal_candidates(const PointConfiguration& cfg, const Point& x,
                                           const std::optional<Point>& y, double budget) {
    std::vector<std::size_t> out;
    const double gap = y ? (x - *y).norm() : 0.0;
    for (std::size_t i = 0; i < cfg.size(); ++i) {
        const Point& p = cfg.points[i].pos;
        const double reach = y ? 0.5 * ((p - x).norm() + (p - *y).norm() + gap) : (p - x).norm();
        if (reach <= budget + kLengthTol) out.push_back(i);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Paths: subset DP

SolveResult solve_path_exact(const PointConfiguration& cfg, const Point& x, const std::optional<Point>& y,
                             double budget, std::size_t cap) {
    Query{Model::path, x, y, budget, 0.0}.validate();
    SolveResult result;
    if (y && (x - *y).norm() > budget) return result;  // infeasible

    auto atoms = path_candidates(cfg, x, y, budget);
    if (atoms.size() > cap) throw SizeError(cap_message("solve_path_exact", atoms.size(), cap), atoms.size(), cap);
    const Candidates c = make_candidates(cfg, x, y, budget, std::move(atoms));
    const std::size_t k = c.size();
    const std::size_t full = std::size_t{1} << k;

    std::vector<double> gap(k * k);
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) gap[i * k + j] = c.dist(i, j);
    auto closing = [&](std::size_t i) { return y ? c.to_y[i] : 0.0; };

    // dp[mask*k + last]: shortest walk from x through `mask` ending at `last`.
    std::vector<double> dp(full * k, kInfinity);
    std::vector<std::int8_t> parent(full * k, -1);
    for (std::size_t i = 0; i < k; ++i)
        if (c.to_x[i] + closing(i) <= budget) dp[(std::size_t{1} << i) * k + i] = c.to_x[i];

    for (std::size_t mask = 1; mask < full; ++mask) {
        for (std::size_t last = 0; last < k; ++last) {
            if (!((mask >> last) & 1u)) continue;
            const double cur = dp[mask * k + last];
            if (cur == kInfinity) continue;
            for (std::size_t nxt = 0; nxt < k; ++nxt) {
                if ((mask >> nxt) & 1u) continue;
                const double nd = cur + gap[last * k + nxt];
                if (nd + closing(nxt) > budget) continue;
                const std::size_t idx = (mask | (std::size_t{1} << nxt)) * k + nxt;
                if (nd < dp[idx]) {
                    dp[idx] = nd;
                    parent[idx] = static_cast<std::int8_t>(last);
                }
            }
        }
    }

    const auto mass = subset_masses(c);
    Mask best_mask = 0;
    double best_len = y ? (x - *y).norm() : 0.0;
    std::size_t best_last = k;
    for (std::size_t mask = 1; mask < full; ++mask) {
        double len = kInfinity;
        std::size_t last = k;
        for (std::size_t i = 0; i < k; ++i) {
            if (!((mask >> i) & 1u)) continue;
            const double total = dp[mask * k + i] + closing(i);
            if (total < len) {
                len = total;
                last = i;
            }
        }
        if (len > budget) continue;
        const Mask m = static_cast<Mask>(mask);
        const bool better = mass[m] > mass[best_mask] ||
                            (mass[m] == mass[best_mask] && (lex_less(m, best_mask) || (m == best_mask && len < best_len)));
        if (better) {
            best_mask = m;
            best_len = len;
            best_last = last;
        }
    }

    std::vector<std::size_t> order;
    for (std::size_t mask = best_mask, last = best_last; mask != 0;) {
        order.push_back(last);
        const auto prev = parent[mask * k + last];
        mask &= ~(std::size_t{1} << last);
        if (prev < 0) break;
        last = static_cast<std::size_t>(prev);
    }
    std::reverse(order.begin(), order.end());

    Path path;
    path.vertices.push_back(endpoint_vertex(cfg, x));
    for (std::size_t i : order) path.vertices.push_back(Vertex::at_atom(cfg, c.atoms[i]));
    if (y) path.vertices.push_back(endpoint_vertex(cfg, *y));

    result.status = SolveStatus::exact;
    result.value = result.low = result.high = mass_of(path, cfg);
    result.witness = std::move(path);
    result.candidates = k;
    return result;
}

// ---------------------------------------------------------------------------
// Restricted animals: heaviest-first subset search

SolveResult solve_restricted_animal_exact(const PointConfiguration& cfg, const Point& x,
                                          const std::optional<Point>& y, double budget, std::size_t cap) {
    Query{Model::animal_restricted, x, y, budget, kInfinity}.validate();
    auto atoms = animal_candidates(cfg, x, y, budget);
    if (atoms.size() > cap)
        throw SizeError(cap_message("solve_restricted_animal_exact", atoms.size(), cap), atoms.size(), cap);
    const Candidates c = make_candidates(cfg, x, y, budget, std::move(atoms));

    SolveResult result;
    result.status = SolveStatus::exact;
    result.candidates = c.size();
    result.witness = Animal{};

    // Scanning heaviest first, the first admissible subset is optimal; the
    // remaining masses bound everything after it.
    const auto mass = subset_masses(c);
    for (Mask mask : masks_by_mass(mass)) {
        if (mask == 0) break;
        const auto members = members_of(mask);
        if (restricted_cost(c, members) <= budget) {
            Animal a = restricted_animal(c, members);
            result.value = result.low = result.high = mass_of(a, cfg);
            result.witness = std::move(a);
            return result;
        }
    }
    return result;
}

// ---------------------------------------------------------------------------
// Unrestricted / penalized animals: bracket

SolveResult solve_animal_bracket(const PointConfiguration& cfg, const Query& query, const BracketOptions& options) {
    query.validate();
    if (query.model != Model::animal_unrestricted && query.model != Model::animal_penalized)
        throw ParameterError("solve_animal_bracket needs model animal-unrestricted or animal-penalized");
    if (!(options.steiner_ratio > 0.0 && options.steiner_ratio <= 1.0))
        throw ParameterError("steiner_ratio must lie in (0, 1]");

    const Point& x = query.x;
    const auto& y = query.y;
    const double budget = query.budget;
    const bool unrestricted = query.model == Model::animal_unrestricted;
    const double q = effective_q(query);

    if (unrestricted && y && (x - *y).norm() > budget) return SolveResult{};

    auto atoms = animal_candidates(cfg, x, y, budget);
    const Candidates c = make_candidates(cfg, x, y, budget, atoms);
    const double total = c.total_mass();

    // With q = ∞, or q at least the total reachable mass, no free vertex can
    // pay for itself and the penalized value is the restricted one.
    if (!unrestricted && q >= total) {
        if (c.size() <= options.enumeration_cap)
            return solve_restricted_animal_exact(cfg, x, y, budget, options.enumeration_cap);
        Query restricted = query;
        restricted.model = Model::animal_restricted;
        SolveResult r = solve_heuristic(cfg, restricted, options.heuristic_effort, options.heuristic_seed);
        r.status = SolveStatus::bracket;
        r.high = total;
        return r;
    }

    if (c.size() > options.enumeration_cap) {
        SolveResult r = solve_heuristic(cfg, query, options.heuristic_effort, options.heuristic_seed);
        r.status = SolveStatus::bracket;
        r.high = std::max(total, r.low);
        return r;
    }

    const auto mass = subset_masses(c);
    const auto order = masks_by_mass(mass);

    // Upper side: SMT(S ∪ {x, y}) <= ℓ for any admissible animal with atom set S,
    // and SMT >= ratio·MST.
    double high = 0.0;
    for (Mask mask : order) {
        if (mask == 0) break;
        if (options.steiner_ratio * terminal_mst_length(c, members_of(mask)) <= budget + kFeasibilityTol) {
            high = mass[mask];
            break;
        }
    }

    // Lower side: best explicit S̃ witness.
    const double plane_ratio = proven_steiner_ratio(cfg.dim);
    Animal best;
    double best_score = 0.0;
    for (Mask mask : order) {
        if (mask == 0 || mass[mask] <= best_score) break;
        const auto members = members_of(mask);
        if (restricted_cost(c, members) <= budget) {
            Animal a = restricted_animal(c, members);
            const double s = penalized_score(a, cfg, q);
            if (s > best_score) {
                best_score = s;
                best = std::move(a);
            }
            continue;
        }
        // A junction witness has at least one free vertex here.
        if (!options.fermat || mass[mask] - q <= best_score) continue;
        if (plane_ratio * terminal_mst_length(c, members) > budget) continue;
        Animal a = junction_animal(c, members);
        if (tilde_cost(a, x, y) > budget) continue;
        const double s = penalized_score(a, cfg, q);
        if (s > best_score) {
            best_score = s;
            best = std::move(a);
        }
    }

    SolveResult r;
    r.candidates = c.size();
    r.witness = unrestricted ? attach_endpoints(best, cfg, x, y) : best;
    r.value = r.low = penalized_score(std::get<Animal>(r.witness), cfg, q);
    r.high = std::max(high, r.low);
    r.status = r.high == r.low ? SolveStatus::exact : SolveStatus::bracket;
    return r;
}

// ---------------------------------------------------------------------------
// Dispatch and checks

SolveResult solve(const PointConfiguration& cfg, const Query& query, SolverMode mode, const SolveSettings& settings) {
    query.validate();
    if (mode == SolverMode::heuristic) return solve_heuristic(cfg, query, settings.effort, settings.seed);

    const bool restricted = query.model == Model::animal_restricted ||
                            (query.model == Model::animal_penalized && std::isinf(query.q));
    if (query.model == Model::path) {
        if (mode == SolverMode::automatic &&
            path_candidates(cfg, query.x, query.y, query.budget).size() > settings.caps.path)
            return solve_heuristic(cfg, query, settings.effort, settings.seed);
        return solve_path_exact(cfg, query.x, query.y, query.budget, settings.caps.path);
    }
    if (restricted) {
        if (mode == SolverMode::automatic &&
            animal_candidates(cfg, query.x, query.y, query.budget).size() > settings.caps.animal)
            return solve_heuristic(cfg, query, settings.effort, settings.seed);
        return solve_restricted_animal_exact(cfg, query.x, query.y, query.budget, settings.caps.animal);
    }
    BracketOptions opts = settings.bracket;
    opts.heuristic_effort = settings.effort;
    opts.heuristic_seed = settings.seed;
    return solve_animal_bracket(cfg, query, opts);
}

bool witness_consistent(const SolveResult& result, const PointConfiguration& cfg, const Query& query) {
    if (result.status == SolveStatus::infeasible) return std::holds_alternative<std::monostate>(result.witness);
    if (const auto* path = std::get_if<Path>(&result.witness)) {
        return is_feasible(*path, query) && tags_consistent(*path, cfg) &&
               std::abs(mass_of(*path, cfg) - result.low) <= kFeasibilityTol;
    }
    if (const auto* animal = std::get_if<Animal>(&result.witness)) {
        return is_feasible(*animal, query) && tags_consistent(*animal, cfg) &&
               std::abs(penalized_score(*animal, cfg, effective_q(query)) - result.low) <= kFeasibilityTol;
    }
    return false;
}

ChainReport verify_chain(const PointConfiguration& cfg, double budget, double q, const Point& x,
                         const ExactCaps& caps, const BracketOptions& bracket) {
    ChainReport report;
    report.budget = budget;
    report.q = q;
    report.path = solve_path_exact(cfg, x, std::nullopt, budget, caps.path);
    report.path_double = solve_path_exact(cfg, x, std::nullopt, 2.0 * budget, caps.path);
    if (std::isinf(q)) {
        report.penalized = solve_restricted_animal_exact(cfg, x, std::nullopt, budget, caps.animal);
    } else {
        report.penalized = solve_animal_bracket(cfg, Query{Model::animal_penalized, x, std::nullopt, budget, q}, bracket);
    }
    report.unrestricted =
        solve_animal_bracket(cfg, Query{Model::animal_unrestricted, x, std::nullopt, budget, 0.0}, bracket);

    auto compare = [&](std::string name, double lhs, double rhs) {
        const bool pass = lhs <= rhs + kFeasibilityTol;
        report.comparisons.push_back({std::move(name), lhs, rhs, pass});
        report.pass = report.pass && pass;
    };
    compare("N_P(l) <= high N^(q)(l)", report.path.value, report.penalized.high);
    compare("low N^(q)(l) <= high N_A(l)", report.penalized.low, report.unrestricted.high);
    compare("low N_A(l) <= N_P(2l)", report.unrestricted.low, report.path_double.value);
    if (report.penalized.status == SolveStatus::exact)
        compare("N_P(l) <= N^(q)(l) exact", report.path.value, report.penalized.value);
    return report;
}

SprinkleOutcome sprinkle_replace(const Animal& animal, const PointConfiguration& sprinkle, std::size_t index_offset) {
    if (sprinkle.empty()) throw InfeasibleError("sprinkle_replace: sprinkled configuration is empty");
    SprinkleOutcome out;
    out.length_before = animal_length(animal);
    const auto deg = animal.degrees();

    // Merge vertices that land on the same sprinkled atom.
    std::vector<std::size_t> remap(animal.size());
    std::vector<std::pair<std::size_t, std::size_t>> landed;  // (sprinkle atom, new index)
    for (std::size_t i = 0; i < animal.size(); ++i) {
        const Vertex& v = animal.vertices[i];
        if (v.atom) {
            remap[i] = out.animal.vertices.size();
            out.animal.vertices.push_back(v);
            continue;
        }
        const std::size_t j = nearest_atom(sprinkle, v.pos);
        out.shift += (sprinkle.points[j].pos - v.pos).norm();
        out.max_replaced_degree = std::max(out.max_replaced_degree, deg[i]);
        ++out.replaced;
        auto hit = std::find_if(landed.begin(), landed.end(), [j](const auto& e) { return e.first == j; });
        if (hit != landed.end()) {
            remap[i] = hit->second;
        } else {
            remap[i] = out.animal.vertices.size();
            landed.push_back({j, remap[i]});
            out.animal.vertices.push_back({sprinkle.points[j].pos, index_offset + j});
        }
    }
    for (auto [a, b] : animal.edges) {
        std::size_t p = remap[a], r = remap[b];
        if (p == r) continue;
        if (p > r) std::swap(p, r);
        if (std::find(out.animal.edges.begin(), out.animal.edges.end(), Edge{p, r}) == out.animal.edges.end())
            out.animal.edges.push_back({p, r});
    }
    out.length_after = animal_length(out.animal);
    return out;
}

}  // namespace glab
