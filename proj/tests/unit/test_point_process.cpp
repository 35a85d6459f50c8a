#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "glab/error.hpp"
#include "glab/point_process.hpp"
#include "glab/stats.hpp"

using namespace glab;

namespace {

Point pt(std::initializer_list<double> v) {
    Point p(static_cast<Eigen::Index>(v.size()));
    Eigen::Index i = 0;
    for (double c : v) p[i++] = c;
    return p;
}

PointConfiguration two_atoms() {
    PointConfiguration cfg;
    cfg.dim = 2;
    cfg.window = Box::cube(2, -5, 5);
    cfg.points = {{pt({0.5, 0.0}), 2.0}, {pt({1.0, 1.0}), 3.0}};
    return cfg;
}

}  // namespace

TEST(MomentCondition, ClosedForms) {
    EXPECT_NEAR(check_moment_condition(IntensityDescriptor::dirac(2, 1.0, 1.0), 1e-10).value, 1.0, 1e-14);
    EXPECT_NEAR(check_moment_condition(IntensityDescriptor::exponential(2, 1.0), 1e-10).value, 2.0, 1e-14);
    EXPECT_FALSE(check_moment_condition(IntensityDescriptor::pareto(2, 1.0, 2.0), 1e-10).finite);
    EXPECT_FALSE(check_moment_condition(IntensityDescriptor::pareto(3, 1.0, 2.5), 1e-10).finite);
    EXPECT_TRUE(check_moment_condition(IntensityDescriptor::pareto(2, 1.0, 2.5), 1e-10).finite);
}

TEST(MomentCondition, ParetoClosedFormValue) {
    // total^{1/d}·scale·shape/(shape−d) with total 4, scale 2, shape 3, d 2
    const auto m = check_moment_condition(IntensityDescriptor::pareto(2, 2.0, 3.0, 4.0), 1e-10);
    EXPECT_NEAR(m.value, 2.0 * 2.0 * 3.0, 1e-12);
}

TEST(MomentCondition, QuadratureAgrees) {
    for (int d : {2, 3, 4}) {
        for (const auto& nu : {IntensityDescriptor::dirac(d, 1.5, 2.0), IntensityDescriptor::exponential(d, 0.7, 3.0),
                               IntensityDescriptor::pareto(d, 0.5, d + 1.5, 2.0),
                               IntensityDescriptor::mixture(d, {{1.0, 1.0}, {3.0, 0.5}})}) {
            const double closed = check_moment_condition(nu, 1e-10).value;
            EXPECT_NEAR(moment_integral_quadrature(nu, 1e-10), closed, 1e-9) << nu.kind() << " d=" << d;
        }
    }
}

TEST(MomentCondition, RejectsBadParameters) {
    EXPECT_THROW(check_moment_condition(IntensityDescriptor::dirac(2, -1.0, 1.0), 1e-8), ParameterError);
    EXPECT_THROW(check_moment_condition(IntensityDescriptor::exponential(2, 0.0), 1e-8), ParameterError);
    EXPECT_THROW(check_moment_condition(IntensityDescriptor::dirac(2, 1.0, 1.0), 0.0), ParameterError);
    EXPECT_THROW(IntensityDescriptor::dirac(1, 1.0, 1.0).validate(), ParameterError);
}

TEST(SamplePpp, SeededDeterminism) {
    const auto nu = IntensityDescriptor::exponential(2, 1.0);
    const auto a = sample_ppp(nu, Box::cube(2, 0, 10), 42);
    const auto b = sample_ppp(nu, Box::cube(2, 0, 10), 42);
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        EXPECT_EQ(a.points[i].pos, b.points[i].pos);
        EXPECT_EQ(a.points[i].mass, b.points[i].mass);
    }
    EXPECT_EQ(a.provenance.seed, std::optional<std::uint64_t>(42));
    a.validate();
}

TEST(SamplePpp, ZeroVolumeWindowIsEmpty) {
    Box flat{{{0.0, 10.0}, {3.0, 3.0}}};
    EXPECT_TRUE(sample_ppp(IntensityDescriptor::dirac(2, 1.0, 1.0), flat, 1).empty());
}

TEST(SamplePpp, CountStatistics) {
    // Poisson mean and variance Leb(W)·ν((0,∞)) = 100 over 1000 samples.
    const auto nu = IntensityDescriptor::dirac(2, 1.0, 1.0);
    std::vector<double> counts;
    for (std::uint64_t s = 0; s < 1000; ++s)
        counts.push_back(static_cast<double>(sample_ppp(nu, Box::cube(2, 0, 10), derive_seed(9, {s})).size()));
    const Summary sm = summarize(counts);
    EXPECT_LE(std::abs(sm.mean - 100.0), 3.0 * sm.std_error);
    double var = 0.0;
    for (double c : counts) var += (c - sm.mean) * (c - sm.mean);
    var /= static_cast<double>(counts.size() - 1);
    // Var of the sample variance for Poisson(μ): (μ + 2μ²)/n approximately.
    const double se_var = std::sqrt((100.0 + 2.0 * 100.0 * 100.0) / 1000.0);
    EXPECT_LE(std::abs(var - 100.0), 3.0 * se_var);
}

TEST(SamplePpp, PositionsAndMarks) {
    const auto nu = IntensityDescriptor::mixture(3, {{1.0, 0.5}, {2.0, 0.5}});
    const auto cfg = sample_ppp(nu, Box::cube(3, -1, 2), 5);
    for (const auto& p : cfg.points) {
        EXPECT_TRUE(cfg.window.contains(p.pos));
        EXPECT_TRUE(p.mass == 1.0 || p.mass == 2.0);
    }
}

TEST(MassOf, RegionsAndPointSets) {
    const auto cfg = two_atoms();
    EXPECT_DOUBLE_EQ(mass_of(closed_ball(pt({0, 0}), 0.6), cfg), 2.0);
    EXPECT_DOUBLE_EQ(mass_of([](const Point&) { return false; }, cfg), 0.0);
    const Region left = [](const Point& p) { return p[0] < 0.75; };
    const Region right = [](const Point& p) { return p[0] >= 0.75; };
    EXPECT_DOUBLE_EQ(mass_of(left, cfg) + mass_of(right, cfg), cfg.total_mass());
    const std::vector<Point> pts{pt({1.0, 1.0}), pt({1.0, 1.0}), pt({9.0, 9.0})};
    EXPECT_DOUBLE_EQ(mass_of(std::span<const Point>(pts), cfg), 3.0);
}

TEST(TransformScale, Definition) {
    PointConfiguration cfg;
    cfg.dim = 2;
    cfg.window = Box::cube(2, 0, 4);
    cfg.points = {{pt({2.0, 2.0}), 5.0}};
    const auto s = transform_scale(cfg, 2.0);
    EXPECT_EQ(s.points[0].pos, pt({1.0, 1.0}));
    EXPECT_EQ(s.points[0].mass, 5.0);
    EXPECT_EQ(s.window, Box::cube(2, 0, 2));
    const auto id = transform_scale(cfg, 1.0);
    EXPECT_EQ(id.points[0].pos, cfg.points[0].pos);
    EXPECT_THROW(transform_scale(cfg, 0.0), ParameterError);
}

TEST(TransformScale, PreservesRegionMass) {
    const auto cfg = sample_ppp(IntensityDescriptor::exponential(2, 1.0), Box::cube(2, 0, 6), 3);
    const double lambda = 1.7;
    const auto s = transform_scale(cfg, lambda);
    const Point c = pt({2.0, 3.0});
    EXPECT_DOUBLE_EQ(mass_of(closed_ball(c / lambda, 1.5 / lambda), s), mass_of(closed_ball(c, 1.5), cfg));
    EXPECT_EQ(s.size(), cfg.size());
}

TEST(StretchMap, Lambda) {
    EXPECT_NEAR(StretchMap(2, 1.0 / std::sqrt(2.0)).lambda(), 1.0, 1e-12);
    EXPECT_NEAR(StretchMap(2, 0.9).lambda(), 1.4369208763307242, 1e-12);
    EXPECT_THROW(StretchMap(2, 0.5), DomainError);
    EXPECT_THROW(StretchMap(2, 1.0), DomainError);
    EXPECT_THROW(StretchMap(3, 0.5), DomainError);
}

TEST(StretchMap, LambdaAtLeastOneAboveThreshold) {
    for (int d : {2, 3, 4}) {
        const double lo = 1.0 / std::sqrt(static_cast<double>(d));
        for (double b = lo + 1e-3; b < 1.0; b += 0.01) EXPECT_GT(StretchMap(d, b).lambda(), 1.0);
    }
}

TEST(StretchMap, VolumePreservingCounts) {
    const auto cfg = sample_ppp(IntensityDescriptor::dirac(3, 1.0, 1.0), Box::cube(3, 0, 5), 11);
    const double beta = 0.8;
    const StretchMap f(3, beta);
    const auto s = transform_stretch(cfg, beta);
    ASSERT_EQ(s.size(), cfg.size());
    // A = ball; f(A) membership tested through the inverse map.
    const Point c = pt({2.5, 2.5, 2.5});
    const Region a = closed_ball(c, 1.2);
    const double l = f.lambda();
    const Region fa = [&](const Point& p) {
        Point q = p;
        q[0] *= std::pow(l, 2.0);
        q[1] /= l;
        q[2] /= l;
        return a(q);
    };
    EXPECT_DOUBLE_EQ(mass_of(fa, flatten_marks(s)), mass_of(a, flatten_marks(cfg)));
    // det f = 1
    const Point e = f(pt({1, 1, 1}));
    EXPECT_NEAR(e[0] * e[1] * e[2], 1.0, 1e-12);
}

TEST(Superpose, CountsAndMismatch) {
    const auto nu = IntensityDescriptor::dirac(2, 1.0, 1.0);
    const auto a = sample_ppp(nu, Box::cube(2, 0, 5), 1);
    const auto b = sample_ppp(nu, Box::cube(2, 0, 5), 2);
    EXPECT_EQ(superpose(a, b).size(), a.size() + b.size());
    EXPECT_DOUBLE_EQ(superpose(a, b).total_mass(), a.total_mass() + b.total_mass());
    PointConfiguration empty;
    empty.dim = 2;
    empty.window = a.window;
    EXPECT_EQ(superpose(a, empty).size(), a.size());
    EXPECT_THROW(superpose(a, sample_ppp(nu, Box::cube(2, 0, 4), 3)), ShapeError);
}

TEST(Superpose, MeanCountMatchesSummedIntensity) {
    const auto nu = IntensityDescriptor::dirac(2, 1.0, 1.0);
    const double eps = 0.5;
    std::vector<double> counts;
    for (std::uint64_t s = 0; s < 400; ++s) {
        const auto a = sample_ppp(nu, Box::cube(2, 0, 5), derive_seed(1, {s}));
        const auto b = sample_ppp(nu.scaled(eps), Box::cube(2, 0, 5), derive_seed(2, {s}));
        counts.push_back(static_cast<double>(superpose(a, b).size()));
    }
    const Summary sm = summarize(counts);
    EXPECT_LE(std::abs(sm.mean - 25.0 * (1.0 + eps)), 3.0 * sm.std_error);
}

TEST(FlattenMarks, UnitMasses) {
    auto cfg = two_atoms();
    cfg.points[1].mass = 7.0;
    const auto f = flatten_marks(cfg);
    EXPECT_EQ(f.points[1].mass, 1.0);
    EXPECT_DOUBLE_EQ(mass_of(closed_ball(pt({0, 0}), 10.0), f), 2.0);
    PointConfiguration empty;
    empty.dim = 2;
    EXPECT_TRUE(flatten_marks(empty).empty());
}

TEST(NearestAtom, Distances) {
    PointConfiguration cfg;
    cfg.dim = 2;
    cfg.window = Box::cube(2, -10, 10);
    cfg.points = {{pt({3.0, 4.0}), 1.0}};
    EXPECT_DOUBLE_EQ(nearest_atom_distance(cfg, pt({0, 0})), 5.0);
    EXPECT_DOUBLE_EQ(nearest_atom_distance(cfg, pt({3, 4})), 0.0);
    cfg.points.push_back({pt({1.0, 0.0}), 1.0});
    EXPECT_DOUBLE_EQ(nearest_atom_distance(cfg, pt({0, 0})), 1.0);
    cfg.points.clear();
    EXPECT_THROW(nearest_atom_distance(cfg, pt({0, 0})), InfeasibleError);
}

TEST(SprinkleIntegral, FrozenValues) {
    EXPECT_NEAR(sprinkle_integral(IntensityDescriptor::dirac(2, 1.0, 1.0), 1.0), 0.5, 1e-14);
    EXPECT_NEAR(sprinkle_integral(IntensityDescriptor::dirac(3, 1.0, 2.0), 0.5), 0.5539602783650904, 1e-13);
    EXPECT_NEAR(sprinkle_integral(IntensityDescriptor::exponential(4, 3.0), 2.0), 0.5113828360565844, 1e-13);
    EXPECT_THROW(sprinkle_integral(IntensityDescriptor::dirac(2, 1.0, 1.0), 0.0), ParameterError);
}

TEST(SprinkleIntegral, DecreasingAndQuadrature) {
    const auto nu = IntensityDescriptor::pareto(3, 1.0, 4.0, 2.0);
    EXPECT_GT(sprinkle_integral(nu, 0.5), sprinkle_integral(nu, 1.5));
    for (double eps : {0.01, 0.3, 1.0, 7.0})
        EXPECT_NEAR(sprinkle_integral_quadrature(nu, eps, 1e-11), sprinkle_integral(nu, eps), 1e-8);
}

TEST(UnitBall, Volumes) {
    EXPECT_NEAR(unit_ball_volume(2), std::numbers::pi, 1e-14);
    EXPECT_NEAR(unit_ball_volume(3), 4.0 * std::numbers::pi / 3.0, 1e-14);
}
