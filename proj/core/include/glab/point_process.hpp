#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <Eigen/Core>

#include "glab/rng.hpp"

namespace glab {

using Point = Eigen::VectorXd;

/// Axis-aligned box; bounds[i] = {lo, hi} with lo <= hi.
struct Box {
    std::vector<std::pair<double, double>> bounds;

    static Box cube(int dim, double lo, double hi);

    int dim() const noexcept { return static_cast<int>(bounds.size()); }
    double volume() const noexcept;
    bool contains(const Point& p) const noexcept;

    bool operator==(const Box&) const = default;
};

// Mark laws. Each carries its own total mass so that c·ν stays in the family.

/// rate·δ_atom
struct DiracMarks {
    double atom = 1.0;
    double rate = 1.0;
};

/// total · rate·e^{-rate·t} dt
struct ExponentialMarks {
    double rate = 1.0;
    double total = 1.0;
};

/// total · Pareto(scale, shape); tail total·(scale/t)^shape for t >= scale.
struct ParetoMarks {
    double scale = 1.0;
    double shape = 3.0;
    double total = 1.0;
};

/// Σ rate_i·δ_{atom_i}
struct DiracMixtureMarks {
    std::vector<DiracMarks> components;
};

using MarkLaw = std::variant<DiracMarks, ExponentialMarks, ParetoMarks, DiracMixtureMarks>;

/// The mark measure ν together with the ambient dimension d.
struct IntensityDescriptor {
    int dim = 2;
    MarkLaw law = DiracMarks{};

    static IntensityDescriptor dirac(int dim, double atom, double rate);
    static IntensityDescriptor exponential(int dim, double rate, double total = 1.0);
    static IntensityDescriptor pareto(int dim, double scale, double shape, double total = 1.0);
    static IntensityDescriptor mixture(int dim, std::vector<DiracMarks> components);

    /// Throws ParameterError on non-positive rates, d < 2, empty mixtures.
    void validate() const;

    std::string kind() const;
    double total_mass() const;
    /// ν([t, ∞))
    double tail(double t) const;
    /// The descriptor of c·ν.
    IntensityDescriptor scaled(double c) const;
    /// One mark drawn from ν / ν((0,∞)).
    double sample_mark(Rng& rng) const;
};

struct MarkedPoint {
    Point pos;
    double mass = 1.0;
};

struct Provenance {
    std::optional<std::uint64_t> seed;
    std::optional<IntensityDescriptor> nu;
    /// Transformations applied after sampling, oldest first.
    std::vector<std::string> history;
};

struct PointConfiguration {
    int dim = 2;
    Box window;
    std::vector<MarkedPoint> points;
    Provenance provenance;

    std::size_t size() const noexcept { return points.size(); }
    bool empty() const noexcept { return points.empty(); }
    double total_mass() const noexcept;
    /// Throws ShapeError / ParameterError if positions leave the window,
    /// repeat, or masses are not positive.
    void validate() const;
};

struct MomentCheck {
    double value = 0.0;
    bool finite = true;
};

/// ∫₀^∞ ν([t,∞))^{1/d} dt in closed form; finite=false when it diverges.
MomentCheck check_moment_condition(const IntensityDescriptor& nu, double tol);

/// The same integral by adaptive Gauss-Kronrod quadrature on [0, T], with T
/// taken from the descriptor's tail so the neglected part is below tol / 2.
/// Throws DomainError if the integral diverges.
double moment_integral_quadrature(const IntensityDescriptor& nu, double tol);

PointConfiguration sample_ppp(const IntensityDescriptor& nu, const Box& window, std::uint64_t seed);

using Region = std::function<bool(const Point&)>;

/// Region predicate of the closed ball B̄(center, radius).
Region closed_ball(Point center, double radius);

double mass_of(const Region& region, const PointConfiguration& cfg);
/// Mass of a finite point set: atoms whose position equals one of `points`.
/// Each atom counts once even if listed repeatedly.
double mass_of(std::span<const Point> points, const PointConfiguration& cfg);

/// Index of the atom at exactly `p`, if any.
std::optional<std::size_t> atom_at(const Point& p, const PointConfiguration& cfg);

/// Positions z ↦ z / lambda; masses unchanged.
PointConfiguration transform_scale(const PointConfiguration& cfg, double lambda);

/// The volume-preserving linear map contracting e₁ by λ^{-(d-1)} and
/// dilating the other axes by λ, λ = ((d-1)β²/(1-β²))^{1/(2d)}.
class StretchMap {
public:
    /// Throws DomainError unless 1/√d <= beta < 1.
    StretchMap(int dim, double beta);

    int dim() const noexcept { return dim_; }
    double beta() const noexcept { return beta_; }
    double lambda() const noexcept { return lambda_; }
    Point operator()(const Point& x) const;

private:
    int dim_;
    double beta_;
    double lambda_;
};

PointConfiguration transform_stretch(const PointConfiguration& cfg, double beta);

/// Union of the atom sets. Throws ShapeError on mismatched dim or window.
PointConfiguration superpose(const PointConfiguration& a, const PointConfiguration& b);

/// Every mass set to 1.
PointConfiguration flatten_marks(const PointConfiguration& cfg);

/// Throws InfeasibleError on an empty configuration.
double nearest_atom_distance(const PointConfiguration& cfg, const Point& x);
std::size_t nearest_atom(const PointConfiguration& cfg, const Point& x);

/// Leb(B̄(0,1)) in dimension d.
double unit_ball_volume(int dim);

/// I(ε) = ∫₀^∞ exp(-ε ν((0,∞)) ω_d s^d) ds = Γ(1+1/d) (ε ν((0,∞)) ω_d)^{-1/d}.
double sprinkle_integral(const IntensityDescriptor& nu, double eps);
double sprinkle_integral_quadrature(const IntensityDescriptor& nu, double eps, double tol);

}  // namespace glab
