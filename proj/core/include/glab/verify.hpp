#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "glab/geometry.hpp"
#include "glab/point_process.hpp"
#include "glab/solvers.hpp"

namespace glab {

struct CheckFailure {
    std::size_t trial = 0;
    std::string check;
    double lhs = 0.0;
    double rhs = 0.0;
};

/// Outcome of one randomized property check.
struct VerifyReport {
    std::string name;
    std::size_t trials = 0;
    std::size_t checks = 0;
    std::size_t failure_count = 0;
    /// The first few failures, for diagnosis.
    std::vector<CheckFailure> failures;
    std::map<std::string, double> metrics;

    bool pass() const noexcept { return failure_count == 0; }
    /// Records one check; keeps at most 20 failure details.
    void record(std::size_t trial, const std::string& check, bool ok, double lhs = 0.0, double rhs = 0.0);
};

/// Random directed instances within the exact caps (at most `max_atoms`
/// atoms in the window, budget uniform in [0.5, 2], x = 0), each checked for
/// every q in `qs`.
struct ChainTrials {
    IntensityDescriptor nu = IntensityDescriptor::dirac(2, 1.0, 1.0);
    std::size_t trials = 200;
    std::vector<double> qs{0.0, 0.5, kInfinity};
    std::size_t max_atoms = 12;
    std::uint64_t seed = 0;
};
VerifyReport verify_chain_trials(const ChainTrials& spec);

/// Random feasible paths in S_P(0, ℓβe₁, ℓ) with β in [1/√d, 0.99]; the
/// stretched length must stay within ℓ·g(β) + 1e-9.
VerifyReport verify_stretch(int dim, std::size_t trials, std::uint64_t seed);

/// Random trees (many high-degree stars) through rewire_high_degree.
VerifyReport verify_rewire(int dim, std::size_t trials, std::uint64_t seed);

/// Random feasible S̃ animals with free vertices through prune_bad_vertices.
VerifyReport verify_prune(int dim, std::size_t trials, std::uint64_t seed);

struct SprinkleTrials {
    IntensityDescriptor nu = IntensityDescriptor::dirac(2, 1.0, 1.0);
    double eps = 1.0;
    std::size_t trials = 500;
    std::uint64_t seed = 0;
};
/// Closed form of I(ε) against quadrature, the length bound of the
/// replacement on random animals, and the Markov frequency of {R <= 2Ê[R]}.
VerifyReport verify_sprinkle(const SprinkleTrials& spec);

/// Closed form against quadrature for the moment integral over a menu of
/// descriptors (plus `extra` when given).
VerifyReport verify_moment(const std::vector<IntensityDescriptor>& extra, double tol = 1e-8);

/// A random tree on n vertices: attaches each new vertex to an earlier one,
/// preferring a few hubs so that high degrees occur.
Animal random_tree(std::vector<Vertex> vertices, Rng& rng);

}  // namespace glab
