#pragma once

// Internal pieces shared by solvers.cpp and heuristic.cpp.

#include <optional>
#include <vector>

#include "glab/geometry.hpp"
#include "glab/point_process.hpp"
#include "glab/solvers.hpp"

namespace glab::detail {

/// Candidate atoms of one query with their distances to the endpoints.
struct Candidates {
    const PointConfiguration* cfg = nullptr;
    Point x;
    std::optional<Point> y;
    double budget = 0.0;
    std::vector<std::size_t> atoms;  // indices into cfg, ascending
    std::vector<double> mass;
    std::vector<double> to_x;
    std::vector<double> to_y;  // zeros when y is absent

    std::size_t size() const noexcept { return atoms.size(); }
    const Point& pos(std::size_t i) const { return cfg->points[atoms[i]].pos; }
    double dist(std::size_t i, std::size_t j) const { return (pos(i) - pos(j)).norm(); }
    double total_mass() const noexcept;
};

Candidates make_candidates(const PointConfiguration& cfg, const Point& x, const std::optional<Point>& y,
                           double budget, std::vector<std::size_t> atoms);

/// Vertex at p, tagged with the atom sitting exactly there if any.
Vertex endpoint_vertex(const PointConfiguration& cfg, const Point& p);

/// Restricted animal on the listed candidates (MST edges).
Animal restricted_animal(const Candidates& c, const std::vector<std::size_t>& members);

/// MST(S) + d(x,S) + d(y,S) for candidate subset S (nonempty).
double restricted_cost(const Candidates& c, const std::vector<std::size_t>& members);

/// Length of a minimum spanning tree on S plus the endpoints.
double terminal_mst_length(const Candidates& c, const std::vector<std::size_t>& members);

/// ‖ξ‖ + d(x,ξ) + d(y,ξ), or 0 for the empty animal.
double tilde_cost(const Animal& a, const Point& x, const std::optional<Point>& y);

/// Fermat-junction witness for S in the one/two-endpoint S̃ family: Steiner-
/// improved tree on S ∪ {x, y}, terminal leaves dropped, bad vertices pruned.
Animal junction_animal(const Candidates& c, const std::vector<std::size_t>& members);

/// S̃ animal → S_A animal by adding x and y with an edge to their nearest vertex.
Animal attach_endpoints(const Animal& a, const PointConfiguration& cfg, const Point& x,
                        const std::optional<Point>& y);

/// Safe lower bound for SMT/MST in dimension d (√3/2 in the plane, 1/2 otherwise).
double proven_steiner_ratio(int dim);

}  // namespace glab::detail
