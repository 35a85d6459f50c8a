#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "glab/geometry.hpp"
#include "glab/point_process.hpp"

namespace glab {

enum class SolveStatus { exact, bracket, lower_bound, infeasible };

std::string_view to_string(SolveStatus s) noexcept;
SolveStatus parse_status(std::string_view name);

using Witness = std::variant<std::monostate, Path, Animal>;

/// Answer to a value-function query. For `exact`, value == low == high. For
/// `bracket`, value == low. For `lower_bound`, high is +inf. The witness
/// realises `low` and is feasible for the query that produced it.
struct SolveResult {
    SolveStatus status = SolveStatus::infeasible;
    double value = 0.0;
    double low = 0.0;
    double high = 0.0;
    Witness witness;
    /// Atoms that survived candidate filtering.
    std::size_t candidates = 0;

    bool feasible() const noexcept { return status != SolveStatus::infeasible; }
    double midpoint() const noexcept { return 0.5 * (low + high); }
};

struct ExactCaps {
    std::size_t path = 16;
    std::size_t animal = 14;
};

/// Atoms reachable by a path from x (to y) of length <= budget: the ellipse
/// ‖x−p‖ + ‖p−y‖ <= budget, or the ball ‖x−p‖ <= budget without y.
std::vector<std::size_t> path_candidates(const PointConfiguration& cfg, const Point& x,
                                         const std::optional<Point>& y, double budget);

/// Atoms that can belong to an admissible animal: any tree through x, y and p
/// is at least half the perimeter of the triangle (x, y, p).
std::vector<std::size_t> animal_candidates(const PointConfiguration& cfg, const Point& x,
                                           const std::optional<Point>& y, double budget);

/// Exact N_P(x, y, ℓ) (or N_P from x when y is absent) by subset dynamic
/// programming over (visited set, last atom). Throws SizeError above `cap`.
SolveResult solve_path_exact(const PointConfiguration& cfg, const Point& x, const std::optional<Point>& y,
                             double budget, std::size_t cap = ExactCaps{}.path);

/// Exact N^{(∞)}: heaviest atom set S with MST(S) + d(x,S) + d(y,S) <= ℓ.
SolveResult solve_restricted_animal_exact(const PointConfiguration& cfg, const Point& x,
                                          const std::optional<Point>& y, double budget,
                                          std::size_t cap = ExactCaps{}.animal);

struct BracketOptions {
    /// Safe lower bound on SMT/MST used by the upper relaxation.
    double steiner_ratio = 0.5;
    /// Try Fermat-junction witnesses for the lower bound.
    bool fermat = true;
    /// Largest candidate count enumerated exhaustively.
    std::size_t enumeration_cap = ExactCaps{}.animal;
    /// Local-search effort used above the enumeration cap.
    std::size_t heuristic_effort = 64;
    std::uint64_t heuristic_seed = 0;
};

/// Bracket [low, high] for N_A (animal-unrestricted) or N^{(q)} (animal-penalized).
SolveResult solve_animal_bracket(const PointConfiguration& cfg, const Query& query,
                                 const BracketOptions& options = {});

/// Iterated local search; always returns a feasible witness (status
/// lower_bound) unless the query itself is infeasible. Deterministic in
/// (cfg, query, effort, seed); the value is nondecreasing in effort.
SolveResult solve_heuristic(const PointConfiguration& cfg, const Query& query, std::size_t effort,
                            std::uint64_t seed);

enum class SolverMode { exact, heuristic, automatic };

std::string_view to_string(SolverMode m) noexcept;
SolverMode parse_solver_mode(std::string_view name);

struct SolveSettings {
    ExactCaps caps;
    BracketOptions bracket;
    std::size_t effort = 64;
    std::uint64_t seed = 0;
};

/// Routes a query to the exact, bracket or heuristic solver. `automatic`
/// uses exact solvers when the candidate count fits the caps.
SolveResult solve(const PointConfiguration& cfg, const Query& query, SolverMode mode,
                  const SolveSettings& settings = {});

/// True when `result` carries a witness that is feasible for `query` and
/// re-scores to result.low within kFeasibilityTol.
bool witness_consistent(const SolveResult& result, const PointConfiguration& cfg, const Query& query);

struct ChainComparison {
    std::string name;
    double lhs = 0.0;
    double rhs = 0.0;
    bool pass = false;
};

struct ChainReport {
    double budget = 0.0;
    double q = 0.0;
    SolveResult path;         // N_P(ℓ)
    SolveResult penalized;    // N^{(q)}(ℓ)
    SolveResult unrestricted; // N_A(ℓ)
    SolveResult path_double;  // N_P(2ℓ)
    std::vector<ChainComparison> comparisons;
    bool pass = true;
};

/// Checks N_P(ℓ) <= N^{(q)}(ℓ) <= N_A(ℓ) <= N_P(2ℓ) for walks and animals
/// rooted at x, comparing exact values or the safe side of brackets.
ChainReport verify_chain(const PointConfiguration& cfg, double budget, double q, const Point& x,
                         const ExactCaps& caps = {}, const BracketOptions& bracket = {});

struct SprinkleOutcome {
    Animal animal;
    /// R = Σ distances from each replaced vertex to its sprinkled atom.
    double shift = 0.0;
    std::size_t replaced = 0;
    /// Largest degree among replaced vertices.
    std::size_t max_replaced_degree = 0;
    double length_before = 0.0;
    double length_after = 0.0;

    bool bound_holds() const noexcept {
        return length_after <= length_before + static_cast<double>(max_replaced_degree) * shift + kLengthTol;
    }
};

/// Moves every free vertex onto its nearest atom of `sprinkle`. Sprinkled
/// atom j is tagged `index_offset + j`, its index in superpose(base, sprinkle)
/// when index_offset = base.size(). Vertices landing on the same atom merge.
/// Throws InfeasibleError if `sprinkle` is empty.
SprinkleOutcome sprinkle_replace(const Animal& animal, const PointConfiguration& sprinkle,
                                 std::size_t index_offset);

}  // namespace glab
