#pragma once

#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "glab/point_process.hpp"

namespace glab {

/// Slack used when checking a budget constraint on a finished witness.
inline constexpr double kFeasibilityTol = 1e-9;
/// Slack for internal length comparisons.
inline constexpr double kLengthTol = 1e-12;

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// A vertex of a path or animal. `atom` indexes the configuration the object
/// lives in; free vertices leave it empty.
struct Vertex {
    Point pos;
    std::optional<std::size_t> atom;

    static Vertex free(Point p) { return {std::move(p), std::nullopt}; }
    static Vertex at_atom(const PointConfiguration& cfg, std::size_t i) { return {cfg.points[i].pos, i}; }
};

/// Finite sequence of points; repetitions allowed.
struct Path {
    std::vector<Vertex> vertices;
};

using Edge = std::pair<std::size_t, std::size_t>;

/// Finite connected graph with vertices in R^d, or the empty animal.
struct Animal {
    std::vector<Vertex> vertices;
    std::vector<Edge> edges;

    bool empty() const noexcept { return vertices.empty(); }
    std::size_t size() const noexcept { return vertices.size(); }
    std::vector<std::size_t> degrees() const;
    std::vector<std::vector<std::size_t>> adjacency() const;
    std::size_t free_count() const noexcept;
    std::size_t atom_count() const noexcept;
};

enum class Model { path, animal_unrestricted, animal_restricted, animal_penalized };

std::string_view to_string(Model m) noexcept;
/// Accepts "path", "animal-unrestricted", "animal-restricted", "animal-penalized".
Model parse_model(std::string_view name);

/// A value-function request: endpoints, budget and (penalized model) q.
struct Query {
    Model model = Model::path;
    Point x;
    std::optional<Point> y;
    double budget = 1.0;
    double q = 0.0;

    /// Throws ParameterError on budget <= 0, q < 0, or mismatched dimensions.
    void validate() const;
    int dim() const noexcept { return static_cast<int>(x.size()); }
};

double path_length(const Path& path);
double animal_length(const Animal& animal);

/// Distance from x to the vertex set; +inf for the empty animal.
double distance_to_vertices(const Point& x, const Animal& animal);

bool is_connected(const Animal& animal);
/// Edges in range, no self-loops, connected (or empty).
bool is_well_formed(const Animal& animal);
/// Every tagged vertex sits on its atom and every free vertex avoids all atoms.
bool tags_consistent(const Animal& animal, const PointConfiguration& cfg);
bool tags_consistent(const Path& path, const PointConfiguration& cfg);

bool is_feasible(const Path& path, const Query& query);
bool is_feasible(const Animal& animal, const Query& query);

/// Mass of the vertex set, read from atom tags; each atom counts once.
double mass_of(const Path& path, const PointConfiguration& cfg);
double mass_of(const Animal& animal, const PointConfiguration& cfg);

/// mass − q·#free vertices; −∞ when q = ∞ and a free vertex exists.
double penalized_score(const Animal& animal, const PointConfiguration& cfg, double q);

/// Depth-first traversal of ξ, without the final walk back to the root.
/// Length is at most 2‖ξ‖. Throws InfeasibleError on the empty animal.
Path dfs_cover_path(const Animal& animal);

struct RewireTrace {
    Animal animal;
    /// Animal length before the first step and after each step.
    std::vector<double> lengths;
};

/// Repeatedly replaces {x, x₂} by {x₁, x₂} while some vertex x has two
/// neighbours whose unit directions are closer than 1 (x₁ the nearer one).
Animal rewire_high_degree(const Animal& animal);
RewireTrace rewire_high_degree_traced(const Animal& animal);

std::size_t max_degree(const Animal& animal);

struct PruneResult {
    Animal animal;
    std::size_t deleted = 0;
    std::size_t contracted = 0;
};

/// Good vertices are atoms and the vertices nearest to x and y (lowest index
/// on ties). Deletes bad leaves and contracts bad degree-2 vertices until
/// every remaining bad vertex has degree >= 3.
PruneResult prune_bad_vertices(const Animal& animal, const Point& x, const std::optional<Point>& y);

/// Indices of the good vertices in the sense of prune_bad_vertices.
std::vector<bool> good_vertices(const Animal& animal, const Point& x, const std::optional<Point>& y);

struct SpanningTree {
    std::vector<Edge> edges;
    double length = 0.0;
};

/// Minimum Euclidean spanning tree (Kruskal, ties by (i, j)). Edges have i < j.
SpanningTree euclidean_mst(std::span<const Point> points);

/// Animal on the given vertices connected by their MST.
Animal mst_animal(std::vector<Vertex> vertices);

/// γ ↦ f(γ) for the stretch map at beta (tags kept).
Path transform_stretch(const Path& path, double beta);

}  // namespace glab
