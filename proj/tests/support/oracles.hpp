#pragma once

// Independent reference computations. Deliberately naive: brute force over
// orders, subsets and spanning trees, sharing no code with the library.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <vector>

#include <Eigen/Core>

namespace oracle {

using Vec = Eigen::VectorXd;

struct Atom {
    Vec pos;
    double mass;
};

inline double dist(const Vec& a, const Vec& b) { return (a - b).norm(); }

/// Best mass over all atom subsets and visiting orders, x → (y) within budget.
inline double path_value(const std::vector<Atom>& atoms, const Vec& x, const std::optional<Vec>& y, double budget) {
    const std::size_t n = atoms.size();
    double best = 0.0;
    for (std::size_t mask = 1; mask < (std::size_t{1} << n); ++mask) {
        std::vector<std::size_t> order;
        double mass = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            if (mask >> i & 1u) {
                order.push_back(i);
                mass += atoms[i].mass;
            }
        if (mass <= best) continue;
        do {
            double len = dist(x, atoms[order.front()].pos);
            for (std::size_t k = 1; k < order.size(); ++k) len += dist(atoms[order[k - 1]].pos, atoms[order[k]].pos);
            if (y) len += dist(atoms[order.back()].pos, *y);
            if (len <= budget) {
                best = mass;
                break;
            }
        } while (std::next_permutation(order.begin(), order.end()));
    }
    return best;
}

/// Length of a minimum spanning tree by enumerating every labelled tree
/// (Prüfer sequences). Exponential; meant for n <= 8.
inline double cayley_mst(const std::vector<Vec>& pts) {
    const std::size_t n = pts.size();
    if (n < 2) return 0.0;
    if (n == 2) return dist(pts[0], pts[1]);
    std::vector<std::size_t> seq(n - 2, 0);
    double best = std::numeric_limits<double>::infinity();
    while (true) {
        std::vector<std::size_t> degree(n, 1);
        for (std::size_t s : seq) ++degree[s];
        double len = 0.0;
        for (std::size_t s : seq) {
            std::size_t leaf = 0;
            while (degree[leaf] != 1) ++leaf;
            len += dist(pts[leaf], pts[s]);
            --degree[leaf];
            --degree[s];
        }
        std::size_t u = n, v = n;
        for (std::size_t i = 0; i < n; ++i)
            if (degree[i] == 1) (u == n ? u : v) = i;
        len += dist(pts[u], pts[v]);
        best = std::min(best, len);

        std::size_t k = 0;
        while (k < seq.size() && ++seq[k] == n) seq[k++] = 0;
        if (k == seq.size()) break;
    }
    return best;
}

/// Plain O(n³) Prim without heaps.
inline double prim(const std::vector<Vec>& pts) {
    const std::size_t n = pts.size();
    if (n < 2) return 0.0;
    std::vector<bool> in(n, false);
    in[0] = true;
    double total = 0.0;
    for (std::size_t step = 1; step < n; ++step) {
        double best = std::numeric_limits<double>::infinity();
        std::size_t pick = 0;
        for (std::size_t i = 0; i < n; ++i)
            if (in[i])
                for (std::size_t j = 0; j < n; ++j)
                    if (!in[j] && dist(pts[i], pts[j]) < best) {
                        best = dist(pts[i], pts[j]);
                        pick = j;
                    }
        in[pick] = true;
        total += best;
    }
    return total;
}

/// Best mass over all atom subsets S with MST(S) + d(x,S) + d(y,S) <= budget.
inline double restricted_value(const std::vector<Atom>& atoms, const Vec& x, const std::optional<Vec>& y,
                               double budget) {
    const std::size_t n = atoms.size();
    double best = 0.0;
    for (std::size_t mask = 1; mask < (std::size_t{1} << n); ++mask) {
        std::vector<Vec> pts;
        double mass = 0.0, dx = std::numeric_limits<double>::infinity(), dy = y ? dx : 0.0;
        for (std::size_t i = 0; i < n; ++i)
            if (mask >> i & 1u) {
                pts.push_back(atoms[i].pos);
                mass += atoms[i].mass;
                dx = std::min(dx, dist(x, atoms[i].pos));
                if (y) dy = std::min(dy, dist(*y, atoms[i].pos));
            }
        if (mass <= best) continue;
        if (prim(pts) + dx + dy <= budget) best = mass;
    }
    return best;
}

}  // namespace oracle
