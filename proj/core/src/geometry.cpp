#include "glab/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "glab/error.hpp"

namespace glab {
namespace {

bool same_point(const Point& a, const Point& b) {
    return a.size() == b.size() && (a - b).norm() <= kLengthTol;
}

class DisjointSets {
public:
    explicit DisjointSets(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }

    std::size_t find(std::size_t i) {
        while (parent_[i] != i) {
            parent_[i] = parent_[parent_[i]];
            i = parent_[i];
        }
        return i;
    }

    bool unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        parent_[std::max(a, b)] = std::min(a, b);
        return true;
    }

private:
    std::vector<std::size_t> parent_;
};

Edge normalized(std::size_t a, std::size_t b) { return a < b ? Edge{a, b} : Edge{b, a}; }

bool has_edge(const std::vector<Edge>& edges, Edge e) {
    e = normalized(e.first, e.second);
    return std::any_of(edges.begin(), edges.end(),
                       [&](const Edge& f) { return normalized(f.first, f.second) == e; });
}

void erase_edge(std::vector<Edge>& edges, Edge e) {
    e = normalized(e.first, e.second);
    auto it = std::find_if(edges.begin(), edges.end(),
                           [&](const Edge& f) { return normalized(f.first, f.second) == e; });
    if (it != edges.end()) edges.erase(it);
}

std::size_t nearest_vertex(const Animal& animal, const Point& p) {
    std::size_t best = 0;
    double best_d = kInfinity;
    for (std::size_t i = 0; i < animal.size(); ++i) {
        const double d = (animal.vertices[i].pos - p).norm();
        if (d < best_d) {
            best_d = d;
            best = i;
        }
    }
    return best;
}

}  // namespace

// ---------------------------------------------------------------------------
// Animal helpers

std::vector<std::size_t> Animal::degrees() const {
    std::vector<std::size_t> deg(vertices.size(), 0);
    for (auto [a, b] : edges) {
        ++deg[a];
        ++deg[b];
    }
    return deg;
}

std::vector<std::vector<std::size_t>> Animal::adjacency() const {
    std::vector<std::vector<std::size_t>> adj(vertices.size());
    for (auto [a, b] : edges) {
        adj[a].push_back(b);
        adj[b].push_back(a);
    }
    for (auto& list : adj) std::sort(list.begin(), list.end());
    return adj;
}

std::size_t Animal::free_count() const noexcept {
    return static_cast<std::size_t>(
        std::count_if(vertices.begin(), vertices.end(), [](const Vertex& v) { return !v.atom; }));
}

std::size_t Animal::atom_count() const noexcept { return vertices.size() - free_count(); }

std::size_t max_degree(const Animal& animal) {
    const auto deg = animal.degrees();
    return deg.empty() ? 0 : *std::max_element(deg.begin(), deg.end());
}

// ---------------------------------------------------------------------------
// Query

std::string_view to_string(Model m) noexcept {
    switch (m) {
        case Model::path: return "path";
        case Model::animal_unrestricted: return "animal-unrestricted";
        case Model::animal_restricted: return "animal-restricted";
        case Model::animal_penalized: return "animal-penalized";
    }
    return "unknown";
}

Model parse_model(std::string_view name) {
    for (Model m : {Model::path, Model::animal_unrestricted, Model::animal_restricted, Model::animal_penalized}) {
        if (to_string(m) == name) return m;
    }
    throw ParameterError("unknown model '" + std::string(name) + "'");
}

void Query::validate() const {
    if (!(budget > 0.0) || !std::isfinite(budget)) throw ParameterError("budget must be positive and finite");
    if (!(q >= 0.0)) throw ParameterError("penalty q must be >= 0");
    if (x.size() < 2) throw ParameterError("query point x must have dimension >= 2");
    if (y && y->size() != x.size()) throw ShapeError("query points x and y have different dimensions");
}

// ---------------------------------------------------------------------------
// Lengths and feasibility

double path_length(const Path& path) {
    double len = 0.0;
    for (std::size_t i = 1; i < path.vertices.size(); ++i)
        len += (path.vertices[i].pos - path.vertices[i - 1].pos).norm();
    return len;
}

double animal_length(const Animal& animal) {
    double len = 0.0;
    for (auto [a, b] : animal.edges) len += (animal.vertices[a].pos - animal.vertices[b].pos).norm();
    return len;
}

double distance_to_vertices(const Point& x, const Animal& animal) {
    double best = kInfinity;
    for (const auto& v : animal.vertices) best = std::min(best, (v.pos - x).norm());
    return best;
}

bool is_connected(const Animal& animal) {
    if (animal.empty()) return true;
    DisjointSets sets(animal.size());
    std::size_t components = animal.size();
    for (auto [a, b] : animal.edges)
        if (sets.unite(a, b)) --components;
    return components == 1;
}

bool is_well_formed(const Animal& animal) {
    for (auto [a, b] : animal.edges) {
        if (a >= animal.size() || b >= animal.size() || a == b) return false;
    }
    return is_connected(animal);
}

namespace {

bool vertex_tags_consistent(const Vertex& v, const PointConfiguration& cfg) {
    if (v.atom) return *v.atom < cfg.size() && cfg.points[*v.atom].pos == v.pos;
    return !atom_at(v.pos, cfg).has_value();
}

}  // namespace

bool tags_consistent(const Animal& animal, const PointConfiguration& cfg) {
    return std::all_of(animal.vertices.begin(), animal.vertices.end(),
                       [&](const Vertex& v) { return vertex_tags_consistent(v, cfg); });
}

bool tags_consistent(const Path& path, const PointConfiguration& cfg) {
    return std::all_of(path.vertices.begin(), path.vertices.end(),
                       [&](const Vertex& v) { return vertex_tags_consistent(v, cfg); });
}

bool is_feasible(const Path& path, const Query& query) {
    if (query.model != Model::path || path.vertices.empty()) return false;
    if (!same_point(path.vertices.front().pos, query.x)) return false;
    if (query.y && !same_point(path.vertices.back().pos, *query.y)) return false;
    return path_length(path) <= query.budget + kFeasibilityTol;
}

bool is_feasible(const Animal& animal, const Query& query) {
    if (!is_well_formed(animal)) return false;
    switch (query.model) {
        case Model::path: return false;
        case Model::animal_unrestricted: {
            if (animal.empty()) return false;
            auto contains = [&](const Point& p) {
                return std::any_of(animal.vertices.begin(), animal.vertices.end(),
                                   [&](const Vertex& v) { return same_point(v.pos, p); });
            };
            if (!contains(query.x) || (query.y && !contains(*query.y))) return false;
            return animal_length(animal) <= query.budget + kFeasibilityTol;
        }
        case Model::animal_restricted:
        case Model::animal_penalized: {
            if (animal.empty()) return true;
            if (query.model == Model::animal_restricted && animal.free_count() > 0) return false;
            double cost = animal_length(animal) + distance_to_vertices(query.x, animal);
            if (query.y) cost += distance_to_vertices(*query.y, animal);
            return cost <= query.budget + kFeasibilityTol;
        }
    }
    return false;
}

// ---------------------------------------------------------------------------
// Masses and scores

namespace {

template <class Vertices>
double tagged_mass(const Vertices& vertices, const PointConfiguration& cfg) {
    std::vector<std::size_t> atoms;
    for (const auto& v : vertices)
        if (v.atom) atoms.push_back(*v.atom);
    std::sort(atoms.begin(), atoms.end());
    atoms.erase(std::unique(atoms.begin(), atoms.end()), atoms.end());
    double s = 0.0;
    for (std::size_t i : atoms) s += cfg.points.at(i).mass;
    return s;
}

}  // namespace

double mass_of(const Path& path, const PointConfiguration& cfg) { return tagged_mass(path.vertices, cfg); }

double mass_of(const Animal& animal, const PointConfiguration& cfg) { return tagged_mass(animal.vertices, cfg); }

double penalized_score(const Animal& animal, const PointConfiguration& cfg, double q) {
    const double mass = mass_of(animal, cfg);
    const std::size_t free = animal.free_count();
    if (free == 0) return mass;
    if (std::isinf(q)) return -kInfinity;
    return mass - q * static_cast<double>(free);
}

// ---------------------------------------------------------------------------
// Depth-first cover

Path dfs_cover_path(const Animal& animal) {
    if (animal.empty()) throw InfeasibleError("cannot cover the empty animal by a path");
    const auto adj = animal.adjacency();
    std::vector<bool> seen(animal.size(), false);
    Path path;
    // Walk with explicit backtracking steps; remember where the last new
    // vertex was appended so the trailing walk back can be dropped.
    std::vector<std::pair<std::size_t, std::size_t>> stack{{0, 0}};
    seen[0] = true;
    path.vertices.push_back(animal.vertices[0]);
    std::size_t last_discovery = 1;
    while (!stack.empty()) {
        auto& [v, next] = stack.back();
        if (next < adj[v].size()) {
            const std::size_t w = adj[v][next++];
            if (!seen[w]) {
                seen[w] = true;
                path.vertices.push_back(animal.vertices[w]);
                last_discovery = path.vertices.size();
                stack.push_back({w, 0});
            }
        } else {
            stack.pop_back();
            if (!stack.empty()) path.vertices.push_back(animal.vertices[stack.back().first]);
        }
    }
    path.vertices.resize(last_discovery);
    return path;
}

// ---------------------------------------------------------------------------
// Degree rewiring

RewireTrace rewire_high_degree_traced(const Animal& animal) {
    RewireTrace trace{animal, {animal_length(animal)}};
    Animal& xi = trace.animal;
    for (;;) {
        bool fired = false;
        const auto adj = xi.adjacency();
        for (std::size_t v = 0; v < xi.size() && !fired; ++v) {
            const Point& center = xi.vertices[v].pos;
            const auto& nbrs = adj[v];
            for (std::size_t i = 0; i < nbrs.size() && !fired; ++i) {
                for (std::size_t j = i + 1; j < nbrs.size() && !fired; ++j) {
                    const Point da = xi.vertices[nbrs[i]].pos - center;
                    const Point db = xi.vertices[nbrs[j]].pos - center;
                    const double la = da.norm();
                    const double lb = db.norm();
                    if (la == 0.0 || lb == 0.0) continue;
                    if ((da / la - db / lb).norm() >= 1.0) continue;
                    const std::size_t near = la <= lb ? nbrs[i] : nbrs[j];
                    const std::size_t far = la <= lb ? nbrs[j] : nbrs[i];
                    const double bridge = (xi.vertices[near].pos - xi.vertices[far].pos).norm();
                    if (!(bridge < std::max(la, lb))) continue;  // rounding at gap ≈ 1
                    erase_edge(xi.edges, {v, far});
                    if (!has_edge(xi.edges, {near, far})) xi.edges.push_back(normalized(near, far));
                    trace.lengths.push_back(animal_length(xi));
                    fired = true;
                }
            }
        }
        if (!fired) break;
    }
    return trace;
}

Animal rewire_high_degree(const Animal& animal) { return rewire_high_degree_traced(animal).animal; }

// ---------------------------------------------------------------------------
// Bad-vertex pruning

std::vector<bool> good_vertices(const Animal& animal, const Point& x, const std::optional<Point>& y) {
    std::vector<bool> good(animal.size(), false);
    if (animal.empty()) return good;
    for (std::size_t i = 0; i < animal.size(); ++i) good[i] = animal.vertices[i].atom.has_value();
    good[nearest_vertex(animal, x)] = true;
    if (y) good[nearest_vertex(animal, *y)] = true;
    return good;
}

PruneResult prune_bad_vertices(const Animal& animal, const Point& x, const std::optional<Point>& y) {
    PruneResult result;
    if (animal.empty()) return result;

    const auto good = good_vertices(animal, x, y);
    const std::size_t n = animal.size();
    std::vector<std::set<std::size_t>> adj(n);
    for (auto [a, b] : animal.edges) {
        adj[a].insert(b);
        adj[b].insert(a);
    }
    std::vector<bool> alive(n, true);

    for (;;) {
        std::size_t v = n;
        for (std::size_t i = 0; i < n; ++i) {
            if (alive[i] && !good[i] && adj[i].size() <= 2) {
                v = i;
                break;
            }
        }
        if (v == n) break;
        const std::vector<std::size_t> nbrs(adj[v].begin(), adj[v].end());
        for (std::size_t w : nbrs) adj[w].erase(v);
        adj[v].clear();
        alive[v] = false;
        if (nbrs.size() == 2) {
            adj[nbrs[0]].insert(nbrs[1]);
            adj[nbrs[1]].insert(nbrs[0]);
            ++result.contracted;
        } else {
            ++result.deleted;
        }
    }

    std::vector<std::size_t> remap(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!alive[i]) continue;
        remap[i] = result.animal.vertices.size();
        result.animal.vertices.push_back(animal.vertices[i]);
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j : adj[i])
            if (i < j) result.animal.edges.push_back({remap[i], remap[j]});
    }
    return result;
}

// ---------------------------------------------------------------------------
// Minimum spanning tree

SpanningTree euclidean_mst(std::span<const Point> points) {
    SpanningTree tree;
    const std::size_t n = points.size();
    if (n < 2) return tree;
    struct Candidate {
        double length;
        std::size_t i, j;
    };
    std::vector<Candidate> all;
    all.reserve(n * (n - 1) / 2);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) all.push_back({(points[i] - points[j]).norm(), i, j});
    std::sort(all.begin(), all.end(), [](const Candidate& a, const Candidate& b) {
        if (a.length != b.length) return a.length < b.length;
        if (a.i != b.i) return a.i < b.i;
        return a.j < b.j;
    });
    DisjointSets sets(n);
    for (const auto& c : all) {
        if (sets.unite(c.i, c.j)) {
            tree.edges.push_back({c.i, c.j});
            tree.length += c.length;
            if (tree.edges.size() + 1 == n) break;
        }
    }
    return tree;
}

Animal mst_animal(std::vector<Vertex> vertices) {
    std::vector<Point> pts;
    pts.reserve(vertices.size());
    for (const auto& v : vertices) pts.push_back(v.pos);
    Animal a{std::move(vertices), euclidean_mst(pts).edges};
    return a;
}

Path transform_stretch(const Path& path, double beta) {
    if (path.vertices.empty()) return path;
    const StretchMap f(static_cast<int>(path.vertices.front().pos.size()), beta);
    Path out = path;
    for (auto& v : out.vertices) v.pos = f(v.pos);
    return out;
}

}  // namespace glab
