#include "glab/point_process.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "glab/error.hpp"

namespace glab {
namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::string fmt_double(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

void require_positive(double v, const char* what) {
    if (!(v > 0.0) || !std::isfinite(v)) {
        throw ParameterError(std::string(what) + " must be a positive finite number, got " + fmt_double(v));
    }
}

// Gauss-Kronrod on [a, b] split into `pieces` equal parts.
template <class F>
double integrate_pieces(F f, double a, double b, int pieces) {
    using boost::math::quadrature::gauss_kronrod;
    double sum = 0.0;
    const double h = (b - a) / pieces;
    for (int i = 0; i < pieces; ++i) {
        const double lo = a + i * h;
        const double hi = (i + 1 == pieces) ? b : lo + h;
        // Bounded depth: far-tail pieces underflow and never meet a relative tolerance.
        sum += gauss_kronrod<double, 31>::integrate(f, lo, hi, 6, 1e-14);
    }
    return sum;
}

}  // namespace

// ---------------------------------------------------------------------------
// Box

Box Box::cube(int dim, double lo, double hi) {
    Box b;
    b.bounds.assign(static_cast<std::size_t>(dim), {lo, hi});
    return b;
}

double Box::volume() const noexcept {
    double v = 1.0;
    for (auto [lo, hi] : bounds) v *= (hi - lo);
    return v;
}

bool Box::contains(const Point& p) const noexcept {
    if (p.size() != dim()) return false;
    for (int i = 0; i < dim(); ++i) {
        if (p[i] < bounds[i].first || p[i] > bounds[i].second) return false;
    }
    return true;
}

// ---------------------------------------------------------------------------
// IntensityDescriptor

IntensityDescriptor IntensityDescriptor::dirac(int dim, double atom, double rate) {
    return {dim, DiracMarks{atom, rate}};
}

IntensityDescriptor IntensityDescriptor::exponential(int dim, double rate, double total) {
    return {dim, ExponentialMarks{rate, total}};
}

IntensityDescriptor IntensityDescriptor::pareto(int dim, double scale, double shape, double total) {
    return {dim, ParetoMarks{scale, shape, total}};
}

IntensityDescriptor IntensityDescriptor::mixture(int dim, std::vector<DiracMarks> components) {
    return {dim, DiracMixtureMarks{std::move(components)}};
}

void IntensityDescriptor::validate() const {
    if (dim < 2) throw ParameterError("dimension must be >= 2, got " + std::to_string(dim));
    std::visit(overloaded{
                   [](const DiracMarks& m) {
                       require_positive(m.atom, "dirac atom");
                       require_positive(m.rate, "dirac rate");
                   },
                   [](const ExponentialMarks& m) {
                       require_positive(m.rate, "exponential rate");
                       require_positive(m.total, "exponential total");
                   },
                   [](const ParetoMarks& m) {
                       require_positive(m.scale, "pareto scale");
                       require_positive(m.shape, "pareto shape");
                       require_positive(m.total, "pareto total");
                   },
                   [](const DiracMixtureMarks& m) {
                       if (m.components.empty()) throw ParameterError("mixture needs at least one component");
                       for (const auto& c : m.components) {
                           require_positive(c.atom, "mixture atom");
                           require_positive(c.rate, "mixture rate");
                       }
                   },
               },
               law);
}

std::string IntensityDescriptor::kind() const {
    return std::visit(overloaded{
                          [](const DiracMarks&) { return std::string("dirac"); },
                          [](const ExponentialMarks&) { return std::string("exponential"); },
                          [](const ParetoMarks&) { return std::string("pareto"); },
                          [](const DiracMixtureMarks&) { return std::string("mixture"); },
                      },
                      law);
}

double IntensityDescriptor::total_mass() const {
    return std::visit(overloaded{
                          [](const DiracMarks& m) { return m.rate; },
                          [](const ExponentialMarks& m) { return m.total; },
                          [](const ParetoMarks& m) { return m.total; },
                          [](const DiracMixtureMarks& m) {
                              double s = 0.0;
                              for (const auto& c : m.components) s += c.rate;
                              return s;
                          },
                      },
                      law);
}

double IntensityDescriptor::tail(double t) const {
    return std::visit(overloaded{
                          [t](const DiracMarks& m) { return t <= m.atom ? m.rate : 0.0; },
                          [t](const ExponentialMarks& m) {
                              return t <= 0.0 ? m.total : m.total * std::exp(-m.rate * t);
                          },
                          [t](const ParetoMarks& m) {
                              return t <= m.scale ? m.total : m.total * std::pow(m.scale / t, m.shape);
                          },
                          [t](const DiracMixtureMarks& m) {
                              double s = 0.0;
                              for (const auto& c : m.components)
                                  if (t <= c.atom) s += c.rate;
                              return s;
                          },
                      },
                      law);
}

IntensityDescriptor IntensityDescriptor::scaled(double c) const {
    require_positive(c, "intensity scale factor");
    IntensityDescriptor out = *this;
    std::visit(overloaded{
                   [c](DiracMarks& m) { m.rate *= c; },
                   [c](ExponentialMarks& m) { m.total *= c; },
                   [c](ParetoMarks& m) { m.total *= c; },
                   [c](DiracMixtureMarks& m) {
                       for (auto& comp : m.components) comp.rate *= c;
                   },
               },
               out.law);
    return out;
}

double IntensityDescriptor::sample_mark(Rng& rng) const {
    return std::visit(overloaded{
                          [](const DiracMarks& m) { return m.atom; },
                          [&rng](const ExponentialMarks& m) {
                              return std::exponential_distribution<double>(m.rate)(rng);
                          },
                          [&rng](const ParetoMarks& m) {
                              const double u = 1.0 - std::uniform_real_distribution<double>(0.0, 1.0)(rng);
                              return m.scale * std::pow(u, -1.0 / m.shape);
                          },
                          [&rng](const DiracMixtureMarks& m) {
                              std::vector<double> w;
                              w.reserve(m.components.size());
                              for (const auto& c : m.components) w.push_back(c.rate);
                              std::discrete_distribution<std::size_t> pick(w.begin(), w.end());
                              return m.components[pick(rng)].atom;
                          },
                      },
                      law);
}

// ---------------------------------------------------------------------------
// PointConfiguration

double PointConfiguration::total_mass() const noexcept {
    double s = 0.0;
    for (const auto& p : points) s += p.mass;
    return s;
}

void PointConfiguration::validate() const {
    if (window.dim() != dim) throw ShapeError("window dimension does not match configuration dimension");
    for (std::size_t i = 0; i < points.size(); ++i) {
        const auto& p = points[i];
        if (p.pos.size() != dim) throw ShapeError("atom " + std::to_string(i) + " has wrong dimension");
        if (!window.contains(p.pos)) throw ShapeError("atom " + std::to_string(i) + " lies outside the window");
        if (!(p.mass > 0.0)) throw ParameterError("atom " + std::to_string(i) + " has non-positive mass");
    }
    std::vector<std::size_t> order(points.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    auto lex_less = [this](std::size_t a, std::size_t b) {
        const auto& pa = points[a].pos;
        const auto& pb = points[b].pos;
        return std::lexicographical_compare(pa.data(), pa.data() + pa.size(), pb.data(), pb.data() + pb.size());
    };
    std::sort(order.begin(), order.end(), lex_less);
    for (std::size_t i = 1; i < order.size(); ++i) {
        if (points[order[i - 1]].pos == points[order[i]].pos) {
            throw ParameterError("atoms " + std::to_string(order[i - 1]) + " and " + std::to_string(order[i]) +
                                 " share a position");
        }
    }
}

// ---------------------------------------------------------------------------
// Moment condition

MomentCheck check_moment_condition(const IntensityDescriptor& nu, double tol) {
    if (!(tol > 0.0)) throw ParameterError("tolerance must be positive");
    nu.validate();
    const double d = nu.dim;
    return std::visit(
        overloaded{
            [d](const DiracMarks& m) { return MomentCheck{m.atom * std::pow(m.rate, 1.0 / d), true}; },
            [d](const ExponentialMarks& m) {
                return MomentCheck{std::pow(m.total, 1.0 / d) * d / m.rate, true};
            },
            [d](const ParetoMarks& m) {
                if (m.shape <= d) return MomentCheck{std::numeric_limits<double>::infinity(), false};
                return MomentCheck{std::pow(m.total, 1.0 / d) * m.scale * m.shape / (m.shape - d), true};
            },
            [d](const DiracMixtureMarks& m) {
                auto comps = m.components;
                std::sort(comps.begin(), comps.end(),
                          [](const DiracMarks& a, const DiracMarks& b) { return a.atom < b.atom; });
                // Tail is a step function: Σ_{atoms >= t} rate on each gap.
                double remaining = 0.0;
                for (const auto& c : comps) remaining += c.rate;
                double prev = 0.0;
                double value = 0.0;
                for (const auto& c : comps) {
                    value += (c.atom - prev) * std::pow(remaining, 1.0 / d);
                    remaining -= c.rate;
                    prev = c.atom;
                }
                return MomentCheck{value, true};
            },
        },
        nu.law);
}

double moment_integral_quadrature(const IntensityDescriptor& nu, double tol) {
    if (!(tol > 0.0)) throw ParameterError("tolerance must be positive");
    nu.validate();
    const double d = nu.dim;
    auto integrand = [&nu, d](double t) { return std::pow(nu.tail(t), 1.0 / d); };

    return std::visit(
        overloaded{
            [&](const DiracMarks& m) { return integrate_pieces(integrand, 0.0, m.atom, 1); },
            [&](const ExponentialMarks& m) {
                // ∫_T^∞ total^{1/d} e^{-rt/d} dt = total^{1/d} (d/r) e^{-rT/d} <= tol/2
                const double c = std::pow(m.total, 1.0 / d) * d / m.rate;
                const double horizon = std::max(d / m.rate, (d / m.rate) * std::log(2.0 * c / tol));
                const int pieces = std::max(1, static_cast<int>(std::ceil(horizon * m.rate / d)));
                return integrate_pieces(integrand, 0.0, horizon, pieces);
            },
            [&](const ParetoMarks& m) {
                const double a = m.shape / d;
                if (a <= 1.0) throw DomainError("moment integral diverges for pareto shape <= d");
                const double head = std::pow(m.total, 1.0 / d) * m.scale;
                // Beyond scale: t = scale·e^u turns the power tail into e^{-(a-1)u}.
                const double c = head / (a - 1.0);
                const double u_max = std::max(1.0, std::log(2.0 * c / tol) / (a - 1.0));
                auto in_log = [&](double u) { return integrand(m.scale * std::exp(u)) * m.scale * std::exp(u); };
                const int pieces = std::max(1, static_cast<int>(std::ceil(u_max * (a - 1.0))));
                return integrate_pieces(integrand, 0.0, m.scale, 1) + integrate_pieces(in_log, 0.0, u_max, pieces);
            },
            [&](const DiracMixtureMarks& m) {
                std::vector<double> breaks{0.0};
                for (const auto& c : m.components) breaks.push_back(c.atom);
                std::sort(breaks.begin(), breaks.end());
                double sum = 0.0;
                for (std::size_t i = 1; i < breaks.size(); ++i) {
                    // Kronrod nodes are interior, so the jumps at the atoms are never sampled.
                    if (breaks[i] > breaks[i - 1]) sum += integrate_pieces(integrand, breaks[i - 1], breaks[i], 1);
                }
                return sum;
            },
        },
        nu.law);
}

// ---------------------------------------------------------------------------
// Sampling and measuring

PointConfiguration sample_ppp(const IntensityDescriptor& nu, const Box& window, std::uint64_t seed) {
    nu.validate();
    if (window.dim() != nu.dim) throw ShapeError("window dimension does not match intensity dimension");
    for (auto [lo, hi] : window.bounds) {
        if (!(lo <= hi)) throw ParameterError("window bounds must satisfy lo <= hi");
    }

    PointConfiguration cfg;
    cfg.dim = nu.dim;
    cfg.window = window;
    cfg.provenance.seed = seed;
    cfg.provenance.nu = nu;

    Rng rng = make_rng(seed);
    const double mean = window.volume() * nu.total_mass();
    if (!(mean > 0.0)) return cfg;
    const auto count = std::poisson_distribution<std::uint64_t>(mean)(rng);

    cfg.points.reserve(count);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (std::uint64_t n = 0; n < count; ++n) {
        MarkedPoint mp;
        mp.pos.resize(nu.dim);
        for (int i = 0; i < nu.dim; ++i) {
            const auto [lo, hi] = window.bounds[i];
            mp.pos[i] = lo + (hi - lo) * unit(rng);
        }
        mp.mass = nu.sample_mark(rng);
        cfg.points.push_back(std::move(mp));
    }
    return cfg;
}

Region closed_ball(Point center, double radius) {
    return [c = std::move(center), radius](const Point& p) { return (p - c).norm() <= radius; };
}

double mass_of(const Region& region, const PointConfiguration& cfg) {
    double s = 0.0;
    for (const auto& p : cfg.points)
        if (region(p.pos)) s += p.mass;
    return s;
}

double mass_of(std::span<const Point> points, const PointConfiguration& cfg) {
    double s = 0.0;
    for (const auto& atom : cfg.points) {
        const bool hit = std::any_of(points.begin(), points.end(), [&](const Point& q) {
            return q.size() == atom.pos.size() && q == atom.pos;
        });
        if (hit) s += atom.mass;
    }
    return s;
}

std::optional<std::size_t> atom_at(const Point& p, const PointConfiguration& cfg) {
    for (std::size_t i = 0; i < cfg.points.size(); ++i) {
        if (cfg.points[i].pos.size() == p.size() && cfg.points[i].pos == p) return i;
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Transformations

PointConfiguration transform_scale(const PointConfiguration& cfg, double lambda) {
    require_positive(lambda, "scale factor");
    PointConfiguration out = cfg;
    for (auto& p : out.points) p.pos /= lambda;
    for (auto& [lo, hi] : out.window.bounds) {
        lo /= lambda;
        hi /= lambda;
    }
    out.provenance.history.push_back("scale(" + fmt_double(lambda) + ")");
    return out;
}

StretchMap::StretchMap(int dim, double beta) : dim_(dim), beta_(beta) {
    if (dim < 2) throw DomainError("stretch map needs d >= 2");
    const double threshold = 1.0 / std::sqrt(static_cast<double>(dim));
    if (!(beta >= threshold && beta < 1.0)) {
        throw DomainError("stretch map needs 1/sqrt(d) <= beta < 1, got " + fmt_double(beta));
    }
    lambda_ = std::pow((dim - 1) * beta * beta / (1.0 - beta * beta), 1.0 / (2.0 * dim));
    // Rounding at the threshold can land a hair below 1.
    lambda_ = std::max(lambda_, 1.0);
}

Point StretchMap::operator()(const Point& x) const {
    Point y = x * lambda_;
    y[0] = x[0] * std::pow(lambda_, -(dim_ - 1));
    return y;
}

PointConfiguration transform_stretch(const PointConfiguration& cfg, double beta) {
    const StretchMap f(cfg.dim, beta);
    PointConfiguration out = cfg;
    for (auto& p : out.points) p.pos = f(p.pos);
    const double contract = std::pow(f.lambda(), -(cfg.dim - 1));
    for (int i = 0; i < out.window.dim(); ++i) {
        const double s = i == 0 ? contract : f.lambda();
        out.window.bounds[i].first *= s;
        out.window.bounds[i].second *= s;
    }
    out.provenance.history.push_back("stretch(" + fmt_double(beta) + ")");
    return out;
}

PointConfiguration superpose(const PointConfiguration& a, const PointConfiguration& b) {
    if (a.dim != b.dim) throw ShapeError("superpose: dimensions differ");
    if (!(a.window == b.window)) throw ShapeError("superpose: windows differ");
    PointConfiguration out = a;
    out.points.insert(out.points.end(), b.points.begin(), b.points.end());
    std::string note = "superpose(";
    note += b.provenance.seed ? "seed=" + std::to_string(*b.provenance.seed) : std::string("unseeded");
    note += ")";
    out.provenance.history.push_back(std::move(note));
    return out;
}

PointConfiguration flatten_marks(const PointConfiguration& cfg) {
    PointConfiguration out = cfg;
    for (auto& p : out.points) p.mass = 1.0;
    out.provenance.history.push_back("flatten");
    return out;
}

std::size_t nearest_atom(const PointConfiguration& cfg, const Point& x) {
    if (cfg.empty()) throw InfeasibleError("nearest atom of an empty configuration");
    std::size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < cfg.points.size(); ++i) {
        const double dist = (cfg.points[i].pos - x).norm();
        if (dist < best_d) {
            best_d = dist;
            best = i;
        }
    }
    return best;
}

double nearest_atom_distance(const PointConfiguration& cfg, const Point& x) {
    return (cfg.points[nearest_atom(cfg, x)].pos - x).norm();
}

// ---------------------------------------------------------------------------
// Sprinkling integral

double unit_ball_volume(int dim) {
    const double d = dim;
    return std::pow(std::numbers::pi, d / 2.0) / std::tgamma(d / 2.0 + 1.0);
}

double sprinkle_integral(const IntensityDescriptor& nu, double eps) {
    if (!(eps > 0.0)) throw ParameterError("sprinkling intensity eps must be positive");
    nu.validate();
    const double d = nu.dim;
    const double c = eps * nu.total_mass() * unit_ball_volume(nu.dim);
    return std::tgamma(1.0 + 1.0 / d) * std::pow(c, -1.0 / d);
}

double sprinkle_integral_quadrature(const IntensityDescriptor& nu, double eps, double tol) {
    if (!(eps > 0.0)) throw ParameterError("sprinkling intensity eps must be positive");
    if (!(tol > 0.0)) throw ParameterError("tolerance must be positive");
    nu.validate();
    const double d = nu.dim;
    const double c = eps * nu.total_mass() * unit_ball_volume(nu.dim);
    const double unit = std::pow(c, -1.0 / d);
    // ∫_T^∞ e^{-cs^d} ds <= e^{-cT^d} / (c d T^{d-1})
    double horizon = unit;
    while (std::exp(-c * std::pow(horizon, d)) / (c * d * std::pow(horizon, d - 1.0)) > tol / 2.0) horizon *= 1.5;
    const int pieces = std::max(1, static_cast<int>(std::ceil(4.0 * horizon / unit)));
    return integrate_pieces([c, d](double s) { return std::exp(-c * std::pow(s, d)); }, 0.0, horizon, pieces);
}

}  // namespace glab
