#include "glab/steiner.hpp"

#include <algorithm>
#include <cmath>

namespace glab {
namespace {

// cos of the angle at `apex` in the triangle (apex, p, r)
double cos_at(const Point& apex, const Point& p, const Point& r) {
    const Point u = p - apex;
    const Point v = r - apex;
    const double nu = u.norm();
    const double nv = v.norm();
    if (nu == 0.0 || nv == 0.0) return -1.0;
    return u.dot(v) / (nu * nv);
}

double star_length(const Point& f, const Point& a, const Point& b, const Point& c) {
    return (f - a).norm() + (f - b).norm() + (f - c).norm();
}

}  // namespace

Point fermat_point(const Point& a, const Point& b, const Point& c) {
    if (cos_at(a, b, c) <= -0.5) return a;
    if (cos_at(b, a, c) <= -0.5) return b;
    if (cos_at(c, a, b) <= -0.5) return c;

    const double scale = std::max({(a - b).norm(), (b - c).norm(), (a - c).norm()});
    Point f = (a + b + c) / 3.0;
    for (int it = 0; it < 2000; ++it) {
        const double wa = 1.0 / std::max((f - a).norm(), 1e-300);
        const double wb = 1.0 / std::max((f - b).norm(), 1e-300);
        const double wc = 1.0 / std::max((f - c).norm(), 1e-300);
        const Point next = (a * wa + b * wb + c * wc) / (wa + wb + wc);
        const double step = (next - f).norm();
        f = next;
        if (step <= 1e-15 * scale) break;
    }
    return f;
}

Animal steiner_improve(Animal tree) {
    const std::size_t limit = 4 * tree.size() + 4;
    for (std::size_t round = 0; round < limit; ++round) {
        const auto adj = tree.adjacency();
        double best_gain = kLengthTol;
        std::size_t best_v = 0, best_a = 0, best_b = 0;
        Point best_f;
        for (std::size_t v = 0; v < tree.size(); ++v) {
            const Point& pv = tree.vertices[v].pos;
            for (std::size_t i = 0; i < adj[v].size(); ++i) {
                for (std::size_t j = i + 1; j < adj[v].size(); ++j) {
                    const Point& pa = tree.vertices[adj[v][i]].pos;
                    const Point& pb = tree.vertices[adj[v][j]].pos;
                    if (cos_at(pv, pa, pb) <= -0.5) continue;
                    const Point f = fermat_point(pv, pa, pb);
                    const double gain = (pa - pv).norm() + (pb - pv).norm() - star_length(f, pv, pa, pb);
                    if (gain > best_gain) {
                        best_gain = gain;
                        best_v = v;
                        best_a = adj[v][i];
                        best_b = adj[v][j];
                        best_f = f;
                    }
                }
            }
        }
        if (best_gain <= kLengthTol) break;

        const std::size_t junction = tree.vertices.size();
        tree.vertices.push_back(Vertex::free(best_f));
        auto drop = [&](std::size_t p, std::size_t r) {
            auto it = std::find_if(tree.edges.begin(), tree.edges.end(), [&](const Edge& e) {
                return (e.first == p && e.second == r) || (e.first == r && e.second == p);
            });
            tree.edges.erase(it);
        };
        drop(best_v, best_a);
        drop(best_v, best_b);
        tree.edges.push_back({best_v, junction});
        tree.edges.push_back({best_a, junction});
        tree.edges.push_back({best_b, junction});
    }
    return tree;
}

}  // namespace glab
