// Iterated local search for all four models. Each iteration perturbs the
// current solution and repairs it greedily; the best witness seen so far is
// kept, so the returned value never decreases with effort.

#include <algorithm>
#include <cmath>
#include <numeric>

#include "glab/error.hpp"
#include "glab/solvers.hpp"
#include "solver_common.hpp"

namespace glab {

using namespace detail;

namespace {

constexpr double kTiny = 1e-12;

// ---------------------------------------------------------------------------
// Paths

class PathSearch {
public:
    PathSearch(const Candidates& c, Rng& rng) : c_(c), rng_(rng), in_route_(c.size(), false) {}

    void run(std::size_t effort) {
        insert_greedy();
        two_opt();
        insert_greedy();
        keep_if_better();
        std::size_t stale = 0;
        for (std::size_t it = 1; it < effort; ++it) {
            if (stale >= 8) {
                restore(best_route_);
                stale = 0;
            }
            const auto tabu = perturb();
            two_opt();
            insert_greedy(&tabu);
            two_opt();
            insert_greedy();
            if (keep_if_better()) {
                stale = 0;
            } else {
                ++stale;
            }
        }
    }

    const std::vector<std::size_t>& best_route() const { return best_route_; }
    double best_mass() const { return best_mass_; }

private:
    // Gap from route_[i] to the next stop (y, or nothing, after the last atom).
    double gap_after(std::size_t i) const {
        const std::size_t a = route_[i];
        if (i + 1 < route_.size()) return c_.dist(a, route_[i + 1]);
        return c_.y ? c_.to_y[a] : 0.0;
    }

    double length() const {
        if (route_.empty()) return c_.y ? (c_.x - *c_.y).norm() : 0.0;
        double len = c_.to_x[route_.front()];
        for (std::size_t i = 0; i < route_.size(); ++i) len += gap_after(i);
        return len;
    }

    double mass() const {
        double m = 0.0;
        for (std::size_t i : route_) m += c_.mass[i];
        return m;
    }

    // Insertion delta of candidate u at slot s (before route_[s]; s = size is the end).
    double delta(std::size_t u, std::size_t s) const {
        const bool has_prev = s > 0;
        const bool has_next = s < route_.size();
        const double prev_u = has_prev ? c_.dist(route_[s - 1], u) : c_.to_x[u];
        if (has_next) {
            const double u_next = c_.dist(u, route_[s]);
            const double old = has_prev ? c_.dist(route_[s - 1], route_[s]) : c_.to_x[route_[s]];
            return prev_u + u_next - old;
        }
        if (c_.y) {
            const double old = has_prev ? c_.to_y[route_[s - 1]] : (c_.x - *c_.y).norm();
            return prev_u + c_.to_y[u] - old;
        }
        return prev_u;
    }

    struct Slot {
        double delta = kInfinity;
        std::size_t slot = 0;
    };

    Slot best_slot(std::size_t u) const {
        Slot best;
        for (std::size_t s = 0; s <= route_.size(); ++s) {
            const double d = delta(u, s);
            if (d < best.delta) best = {d, s};
        }
        return best;
    }

    // Cheapest-insertion by mass per added length, with a per-candidate cache
    // that is refreshed only where the route changed.
    // Candidates marked in `tabu` are skipped, so a kicked route does not
    // simply regrow into the one it came from.
    void insert_greedy(const std::vector<bool>* tabu = nullptr) {
        double len = length();
        std::vector<Slot> cache(c_.size());
        for (std::size_t u = 0; u < c_.size(); ++u)
            if (!in_route_[u]) cache[u] = best_slot(u);
        while (true) {
            std::size_t pick = c_.size();
            double pick_ratio = -1.0;
            for (std::size_t u = 0; u < c_.size(); ++u) {
                if (in_route_[u] || (tabu && (*tabu)[u]) || len + cache[u].delta > c_.budget) continue;
                const double ratio = c_.mass[u] / (std::max(cache[u].delta, 0.0) + kTiny);
                if (ratio > pick_ratio) {
                    pick_ratio = ratio;
                    pick = u;
                }
            }
            if (pick == c_.size()) return;
            const std::size_t s = cache[pick].slot;
            len += cache[pick].delta;
            route_.insert(route_.begin() + static_cast<std::ptrdiff_t>(s), pick);
            in_route_[pick] = true;
            for (std::size_t u = 0; u < c_.size(); ++u) {
                if (in_route_[u]) continue;
                Slot& cu = cache[u];
                if (cu.slot == s) {
                    cu = best_slot(u);
                    continue;
                }
                if (cu.slot > s) ++cu.slot;
                for (std::size_t t : {s, s + 1}) {
                    const double d = delta(u, t);
                    if (d < cu.delta) cu = {d, t};
                }
            }
        }
    }

    // First-improvement 2-opt on the open route; without y the tail can be
    // reversed as a whole.
    void two_opt() {
        const std::size_t n = route_.size();
        if (n < 2) return;
        auto pos = [&](std::ptrdiff_t i) -> const Point& {
            if (i < 0) return c_.x;
            if (static_cast<std::size_t>(i) >= n) return *c_.y;
            return c_.pos(route_[static_cast<std::size_t>(i)]);
        };
        bool improved = true;
        for (int sweep = 0; improved && sweep < 64; ++sweep) {
            improved = false;
            for (std::size_t i = 0; i + 1 < n; ++i) {
                const Point& a = pos(static_cast<std::ptrdiff_t>(i) - 1);
                const Point& b = pos(static_cast<std::ptrdiff_t>(i));
                for (std::size_t j = i + 1; j < n; ++j) {
                    const Point& e = pos(static_cast<std::ptrdiff_t>(j));
                    double change;
                    if (j + 1 < n || c_.y) {
                        const Point& f = pos(static_cast<std::ptrdiff_t>(j) + 1);
                        change = (a - e).norm() + (b - f).norm() - (a - b).norm() - (e - f).norm();
                    } else {
                        change = (a - e).norm() - (a - b).norm();
                    }
                    if (change < -1e-10) {
                        std::reverse(route_.begin() + static_cast<std::ptrdiff_t>(i),
                                     route_.begin() + static_cast<std::ptrdiff_t>(j) + 1);
                        improved = true;
                        break;
                    }
                }
            }
        }
    }

    // Returns the atoms removed from the route.
    std::vector<bool> perturb() {
        std::vector<bool> removed(c_.size(), false);
        const std::size_t n = route_.size();
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        const double r = unit(rng_);
        if (r < 1.0 / 3.0 && n < c_.size()) {
            kick(removed);
            return removed;
        }
        if (n == 0) return removed;
        std::vector<std::size_t> kept;
        if (r < 2.0 / 3.0) {
            const std::size_t span = 1 + std::uniform_int_distribution<std::size_t>(0, std::max<std::size_t>(n / 4, 1) - 1)(rng_);
            const std::size_t start = std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_);
            for (std::size_t i = 0; i < n; ++i)
                if (i < start || i >= start + span) kept.push_back(route_[i]);
        } else {
            for (std::size_t i : route_)
                if (unit(rng_) >= 0.2) kept.push_back(i);
        }
        if (kept.size() == n) kept.erase(kept.begin() + static_cast<std::ptrdiff_t>(std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_)));
        for (std::size_t i : route_) removed[i] = true;
        for (std::size_t i : kept) removed[i] = false;
        restore(kept);
        return removed;
    }

    // Forces a random outside candidate into the route, then drops random
    // other stops until the budget holds again.
    void kick(std::vector<bool>& removed) {
        std::vector<std::size_t> outside;
        for (std::size_t u = 0; u < c_.size(); ++u)
            if (!in_route_[u]) outside.push_back(u);
        const std::size_t u = outside[std::uniform_int_distribution<std::size_t>(0, outside.size() - 1)(rng_)];
        const Slot s = best_slot(u);
        route_.insert(route_.begin() + static_cast<std::ptrdiff_t>(s.slot), u);
        in_route_[u] = true;
        while (length() > c_.budget && route_.size() > 1) {
            std::size_t i = std::uniform_int_distribution<std::size_t>(0, route_.size() - 2)(rng_);
            if (route_[i] == u) i = route_.size() - 1;
            removed[route_[i]] = true;
            in_route_[route_[i]] = false;
            route_.erase(route_.begin() + static_cast<std::ptrdiff_t>(i));
        }
        two_opt();
    }

    void restore(const std::vector<std::size_t>& route) {
        route_ = route;
        std::fill(in_route_.begin(), in_route_.end(), false);
        for (std::size_t i : route_) in_route_[i] = true;
    }

    bool keep_if_better() {
        const double m = mass();
        const double len = length();
        if (len > c_.budget) return false;
        if (m > best_mass_ + kTiny) {
            best_mass_ = m;
            best_route_ = route_;
            return true;
        }
        return false;
    }

    const Candidates& c_;
    Rng& rng_;
    std::vector<std::size_t> route_;
    std::vector<bool> in_route_;
    std::vector<std::size_t> best_route_;
    double best_mass_ = 0.0;
};

// ---------------------------------------------------------------------------
// Animals

class AnimalSearch {
public:
    AnimalSearch(const Candidates& c, double q, Rng& rng)
        : c_(c), q_(q), rng_(rng), in_(c.size(), false) {}

    void run(std::size_t effort) {
        grow();
        consider();
        std::size_t stale = 0;
        for (std::size_t it = 1; it < effort; ++it) {
            if (stale >= 8) {
                restore(best_members_);
                stale = 0;
            }
            const auto tabu = perturb();
            grow(&tabu);
            grow();
            if (consider()) {
                stale = 0;
            } else {
                ++stale;
            }
        }
    }

    const Animal& best() const { return best_; }
    double best_score() const { return best_score_; }

private:
    std::vector<std::size_t> members() const {
        std::vector<std::size_t> out;
        for (std::size_t i = 0; i < c_.size(); ++i)
            if (in_[i]) out.push_back(i);
        return out;
    }

    // Greedy insertion under the restricted cost, using the attachment bound
    // MST(S ∪ {u}) <= MST(S) + d(u, S) to rank, then recomputing exactly.
    void grow(const std::vector<bool>* tabu = nullptr) {
        auto ms = members();
        double cost = ms.empty() ? 0.0 : restricted_cost(c_, ms);
        std::vector<double> near(c_.size(), kInfinity);
        double dx = kInfinity, dy = c_.y ? kInfinity : 0.0;
        auto absorb = [&](std::size_t m) {
            dx = std::min(dx, c_.to_x[m]);
            if (c_.y) dy = std::min(dy, c_.to_y[m]);
            for (std::size_t u = 0; u < c_.size(); ++u)
                if (!in_[u]) near[u] = std::min(near[u], c_.dist(u, m));
        };
        for (std::size_t m : ms) absorb(m);

        while (true) {
            std::size_t pick = c_.size();
            double pick_ratio = -1.0;
            for (std::size_t u = 0; u < c_.size(); ++u) {
                if (in_[u] || (tabu && (*tabu)[u])) continue;
                double bound;
                if (ms.empty()) {
                    bound = c_.to_x[u] + c_.to_y[u];
                } else {
                    const double tree = cost - dx - dy;
                    bound = tree + near[u] + std::min(dx, c_.to_x[u]) + (c_.y ? std::min(dy, c_.to_y[u]) : 0.0);
                }
                if (bound > c_.budget) continue;
                const double ratio = c_.mass[u] / (std::max(bound - cost, 0.0) + kTiny);
                if (ratio > pick_ratio) {
                    pick_ratio = ratio;
                    pick = u;
                }
            }
            if (pick == c_.size()) break;
            in_[pick] = true;
            ms.push_back(pick);
            std::sort(ms.begin(), ms.end());
            cost = restricted_cost(c_, ms);
            absorb(pick);
        }
        cost_ = ms.empty() ? 0.0 : restricted_cost(c_, ms);
    }

    // Scores the current set, then (free vertices allowed) tries to extend it
    // with Fermat-junction witnesses.
    bool consider() {
        bool improved = false;
        auto ms = members();
        if (!ms.empty() && cost_ <= c_.budget) {
            double m = 0.0;
            for (std::size_t i : ms) m += c_.mass[i];
            if (m > best_score_ + kTiny) {
                best_score_ = m;
                best_ = restricted_animal(c_, ms);
                best_members_ = ms;
                improved = true;
            }
        }
        if (std::isinf(q_) || ms.empty()) return improved;

        double base = 0.0;
        for (std::size_t i : ms) base += c_.mass[i];
        if (base + 1e-9 < best_score_) return improved;

        // Nearest outsiders, tried one at a time on top of the current set.
        std::vector<std::pair<double, std::size_t>> outside;
        for (std::size_t u = 0; u < c_.size(); ++u) {
            if (in_[u]) continue;
            double d = kInfinity;
            for (std::size_t m : ms) d = std::min(d, c_.dist(u, m));
            outside.push_back({d, u});
        }
        std::sort(outside.begin(), outside.end());
        std::vector<std::size_t> grown = ms;
        for (std::size_t k = 0; k < outside.size() && k < 4; ++k) {
            std::vector<std::size_t> trial = grown;
            trial.push_back(outside[k].second);
            std::sort(trial.begin(), trial.end());
            Animal a = junction_animal(c_, trial);
            if (tilde_cost(a, c_.x, c_.y) > c_.budget) continue;
            const double s = penalized_score(a, *c_.cfg, q_);
            if (s > best_score_ + kTiny) {
                best_score_ = s;
                best_ = std::move(a);
                best_members_ = trial;
                improved = true;
                grown = trial;
            }
        }
        return improved;
    }

    // Returns the candidates removed from the set.
    std::vector<bool> perturb() {
        std::vector<bool> removed(c_.size(), false);
        auto ms = members();
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        const double r = unit(rng_);
        if (r < 1.0 / 3.0 && ms.size() < c_.size()) {
            kick(ms, removed);
            return removed;
        }
        if (ms.empty()) return removed;
        if (r < 2.0 / 3.0) {
            // Drop a neighbourhood of a random member.
            const std::size_t centre = ms[std::uniform_int_distribution<std::size_t>(0, ms.size() - 1)(rng_)];
            std::vector<double> d;
            for (std::size_t m : ms) d.push_back(c_.dist(m, centre));
            std::vector<double> sorted = d;
            std::sort(sorted.begin(), sorted.end());
            const std::size_t take = 1 + std::uniform_int_distribution<std::size_t>(0, std::max<std::size_t>(ms.size() / 4, 1) - 1)(rng_);
            const double radius = sorted[std::min(take, sorted.size()) - 1];
            for (std::size_t i = 0; i < ms.size(); ++i)
                if (d[i] <= radius) removed[ms[i]] = true;
        } else {
            bool any = false;
            for (std::size_t m : ms) {
                if (unit(rng_) < 0.2) {
                    removed[m] = true;
                    any = true;
                }
            }
            if (!any) removed[ms[std::uniform_int_distribution<std::size_t>(0, ms.size() - 1)(rng_)]] = true;
        }
        for (std::size_t m : ms)
            if (removed[m]) in_[m] = false;
        return removed;
    }

    // Forces a random outside candidate into the set and drops random other
    // members until the restricted cost fits.
    void kick(std::vector<std::size_t> ms, std::vector<bool>& removed) {
        std::vector<std::size_t> outside;
        for (std::size_t u = 0; u < c_.size(); ++u)
            if (!in_[u]) outside.push_back(u);
        const std::size_t u = outside[std::uniform_int_distribution<std::size_t>(0, outside.size() - 1)(rng_)];
        in_[u] = true;
        ms.push_back(u);
        std::sort(ms.begin(), ms.end());
        while (ms.size() > 1 && restricted_cost(c_, ms) > c_.budget) {
            std::size_t i = std::uniform_int_distribution<std::size_t>(0, ms.size() - 1)(rng_);
            if (ms[i] == u) i = (i + 1) % ms.size();
            in_[ms[i]] = false;
            removed[ms[i]] = true;
            ms.erase(ms.begin() + static_cast<std::ptrdiff_t>(i));
        }
    }

    void restore(const std::vector<std::size_t>& ms) {
        std::fill(in_.begin(), in_.end(), false);
        for (std::size_t m : ms) in_[m] = true;
    }

    const Candidates& c_;
    double q_;
    Rng& rng_;
    std::vector<bool> in_;
    double cost_ = 0.0;
    Animal best_;
    std::vector<std::size_t> best_members_;
    double best_score_ = 0.0;
};

}  // namespace

SolveResult solve_heuristic(const PointConfiguration& cfg, const Query& query, std::size_t effort,
                            std::uint64_t seed) {
    query.validate();
    const Point& x = query.x;
    const auto& y = query.y;
    SolveResult result;
    const bool needs_endpoints = query.model == Model::path || query.model == Model::animal_unrestricted;
    if (needs_endpoints && y && (x - *y).norm() > query.budget) return result;

    result.status = SolveStatus::lower_bound;
    result.high = kInfinity;
    Rng rng = make_rng(derive_seed(seed, {static_cast<std::uint64_t>(query.model)}));

    if (query.model == Model::path) {
        const Candidates c = make_candidates(cfg, x, y, query.budget, path_candidates(cfg, x, y, query.budget));
        result.candidates = c.size();
        PathSearch search(c, rng);
        if (effort > 0) search.run(effort);
        Path path;
        path.vertices.push_back(endpoint_vertex(cfg, x));
        for (std::size_t i : search.best_route()) path.vertices.push_back(Vertex::at_atom(cfg, c.atoms[i]));
        if (y) path.vertices.push_back(endpoint_vertex(cfg, *y));
        result.value = result.low = mass_of(path, cfg);
        result.witness = std::move(path);
        return result;
    }

    const double q = query.model == Model::animal_unrestricted ? 0.0
                     : query.model == Model::animal_restricted ? kInfinity
                                                               : query.q;
    const Candidates c = make_candidates(cfg, x, y, query.budget, animal_candidates(cfg, x, y, query.budget));
    result.candidates = c.size();
    AnimalSearch search(c, q, rng);
    if (effort > 0) search.run(effort);
    Animal best = search.best();
    if (query.model == Model::animal_unrestricted) best = attach_endpoints(best, cfg, x, y);
    result.value = result.low = penalized_score(best, cfg, q);
    result.witness = std::move(best);
    return result;
}

}  // namespace glab
