#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "glab/geometry.hpp"
#include "glab/point_process.hpp"
#include "glab/solvers.hpp"
#include "glab/stats.hpp"

namespace glab {

/// √d·β^{1/d}·((1−β²)/(d−1))^{(d−1)/(2d)} on [1/√d, 1]; DomainError outside.
double g_function(double beta, int dim);

/// 1/√d, the left end of the domain of g.
double g_threshold(int dim);

/// lo, lo+step, ..., hi (hi included when it lies on the grid up to 1e-9).
/// With `add_threshold`, 1/√d is inserted in sorted position if it is in
/// [lo, hi] and not already present.
std::vector<double> beta_grid(double lo, double hi, double step, int dim, bool add_threshold);

/// The box [−L, Lβ+L] × [−L, L]^{d−1}, which contains every point within L of
/// the segment [0, Lβe₁].
Box curve_window(int dim, double beta, double length);

struct CurveSpec {
    IntensityDescriptor nu;
    Model model = Model::path;
    double q = 0.0;
    std::vector<double> betas;
    std::vector<double> lengths;
    std::size_t replicates = 2;
    std::uint64_t seed = 0;
    SolverMode mode = SolverMode::automatic;
    SolveSettings settings;
    std::size_t workers = 1;

    /// ParameterError naming the offending field.
    void validate() const;
};

struct ReplicateValue {
    std::size_t beta_index = 0;
    std::size_t length_index = 0;
    std::size_t replicate = 0;
    /// Solver value (the low end for brackets) divided by L.
    double value = 0.0;
    double high = 0.0;
    SolveStatus status = SolveStatus::exact;
    bool exact = false;
    std::size_t atoms = 0;
};

struct CurvePoint {
    double beta = 0.0;
    double length = 0.0;
    Summary summary;
    /// Every replicate was solved exactly.
    bool exact = false;
};

struct CurveEstimate {
    Model model = Model::path;
    double q = 0.0;
    int dim = 2;
    std::vector<double> betas;
    std::vector<double> lengths;
    std::size_t replicates = 0;
    std::uint64_t seed = 0;
    /// Ordered by (beta index, length index, replicate).
    std::vector<ReplicateValue> samples;
    /// Ordered by (beta index, length index).
    std::vector<CurvePoint> points;
    /// Witness paths at β ∈ [1/√d, 1) checked against ‖f(γ)‖ <= L·g(β).
    std::size_t stretch_checked = 0;
    std::size_t stretch_violations = 0;

    const CurvePoint& at(std::size_t beta_index, std::size_t length_index) const;
    /// Summary at the largest L.
    const CurvePoint& f_hat(std::size_t beta_index) const;
    bool all_exact() const;
};

/// Monte Carlo estimate of β ↦ N(0, Lβe₁, L)/L; β = 0 uses the one-endpoint
/// value N(L)/L. Deterministic in the spec for any worker count.
CurveEstimate estimate_curve(const CurveSpec& spec);

struct ShapeFlag {
    std::string kind;  // "monotonicity", "concavity", "strict-decrease"
    std::size_t index = 0;
    double margin = 0.0;
};

struct ShapeReport {
    double k_sigma = 2.0;
    /// False for heuristic curves: the flags are then informational only.
    bool certified = false;
    std::vector<ShapeFlag> flags;
    std::size_t monotonicity_flags = 0;
    std::size_t concavity_flags = 0;
    std::size_t strict_decrease_flags = 0;
};

ShapeReport check_curve_shape(const CurveEstimate& curve, double k_sigma = 2.0);

/// f̂(b) < f̂(a) − k·σ, with σ the combined standard error.
bool strictly_below(const CurveEstimate& curve, std::size_t a, std::size_t b, double k_sigma);

struct StretchRow {
    double beta = 0.0;
    double f_hat = 0.0;
    double g = 0.0;
    double bound = 0.0;
    double sigma = 0.0;
    bool pass = false;
};

struct StretchReport {
    std::vector<StretchRow> rows;
    bool pass = true;
};

/// f̂(β) <= g(β)·f̂(0) + 3σ for every grid β >= 1/√d. Needs β = 0 in the grid.
StretchReport stretching_bound_check(const CurveEstimate& curve, double k_sigma = 3.0);

/// Box containing every point within `budget` of x or y.
Box query_window(const Query& query);

struct ScalingSpec {
    IntensityDescriptor nu;
    double lambda = 2.0;
    Query query;
    std::size_t samples = 500;
    std::uint64_t seed = 0;
    double alpha = 0.01;
    /// Reuse the A-side seeds on the B side (meaningful for λ = 1).
    bool coupled = false;
    ExactCaps caps;
    std::size_t workers = 1;

    void validate() const;
};

struct ScalingResult {
    /// N(λx, λy, λℓ) under ν.
    std::vector<double> a;
    /// N(x, y, ℓ) under λ^d·ν.
    std::vector<double> b;
    KsResult ks;
};

ScalingResult scaling_test(const ScalingSpec& spec);

struct QScanSpec {
    IntensityDescriptor nu;
    double beta = 0.5;
    double length = 2.0;
    /// Sorted; may end with +inf.
    std::vector<double> qs;
    std::size_t replicates = 2;
    std::uint64_t seed = 0;
    SolveSettings settings;
    std::size_t workers = 1;

    void validate() const;
};

struct QScanCell {
    double low = 0.0;
    double high = 0.0;
    bool exact = false;
};

struct QScanRow {
    double q = 0.0;
    Summary low;   // of low/L
    Summary high;  // of high/L
    std::size_t exact = 0;
};

struct QScanResult {
    std::vector<double> qs;
    /// cells[qi * replicates + r]
    std::vector<QScanCell> cells;
    std::vector<QScanRow> rows;
    /// N_A on the realization (q = 0 reference) and on its flattening.
    std::vector<QScanCell> unrestricted;
    std::vector<QScanCell> flattened;
    std::vector<double> realization_mass;
    /// Exact restricted value per realization.
    std::vector<double> restricted;

    std::size_t monotonicity_violations = 0;
    std::size_t q0_mismatches = 0;
    std::size_t dominance_checked = 0;
    std::size_t dominance_mismatches = 0;
    std::size_t lipschitz_violations = 0;
    /// Mean of high N_A[π̂]/L: the Lipschitz constant of the surrogate.
    double lipschitz_constant = 0.0;

    bool pass() const noexcept {
        return monotonicity_violations == 0 && q0_mismatches == 0 && dominance_mismatches == 0 &&
               lipschitz_violations == 0;
    }
};

QScanResult q_scan(const QScanSpec& spec);

struct UniversalSpec {
    IntensityDescriptor nu;
    std::vector<double> lengths;
    std::size_t replicates = 2;
    std::uint64_t seed = 0;
    SolveSettings settings;
    std::size_t workers = 1;

    void validate() const;
};

struct UniversalRow {
    double length = 0.0;
    Summary ratio;
    /// Bracket midpoints were used (every replicate enumerated); otherwise lows.
    bool midpoints = false;
};

struct UniversalReport {
    std::vector<UniversalRow> rows;
    MomentCheck moment;
    bool pass = true;
};

/// Ê[N_A(L)]/L across L, with the boundedness check
/// mean(largest L) <= 1.5·mean(smallest L) + 3σ.
UniversalReport universal_bound_check(const UniversalSpec& spec);

}  // namespace glab
