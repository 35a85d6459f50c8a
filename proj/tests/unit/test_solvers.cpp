#include <gtest/gtest.h>

#include <cmath>

#include "glab/error.hpp"
#include "glab/solvers.hpp"
#include "oracles.hpp"

using namespace glab;

namespace {

Point pt(double a, double b) {
    Point p(2);
    p << a, b;
    return p;
}

PointConfiguration config(std::vector<MarkedPoint> pts) {
    PointConfiguration cfg;
    cfg.dim = 2;
    cfg.window = Box::cube(2, -10, 10);
    cfg.points = std::move(pts);
    return cfg;
}

std::vector<oracle::Atom> atoms_of(const PointConfiguration& cfg) {
    std::vector<oracle::Atom> out;
    for (const auto& p : cfg.points) out.push_back({p.pos, p.mass});
    return out;
}

// Instance with all atoms inside a window of side 2ℓ around x.
PointConfiguration small_instance(std::uint64_t seed, std::size_t max_atoms, double budget, bool exponential) {
    const auto nu = exponential ? IntensityDescriptor::exponential(2, 1.0, 1.0) : IntensityDescriptor::dirac(2, 1.0, 1.0);
    for (std::uint64_t a = 0;; ++a) {
        auto cfg = sample_ppp(nu, Box::cube(2, -budget, budget), derive_seed(seed, {a}));
        if (cfg.size() <= max_atoms) return cfg;
    }
}

}  // namespace

TEST(PathExact, SpecExamples) {
    auto cfg = config({{pt(0.3, 0), 1.0}, {pt(0.6, 0), 1.0}});
    auto r = solve_path_exact(cfg, pt(0, 0), pt(1, 0), 1.0);
    EXPECT_EQ(r.status, SolveStatus::exact);
    EXPECT_DOUBLE_EQ(r.value, 2.0);

    r = solve_path_exact(cfg, pt(0, 0), pt(1, 0), 0.9);
    EXPECT_EQ(r.status, SolveStatus::infeasible);

    cfg.points.push_back({pt(0.5, 0.1), 10.0});
    r = solve_path_exact(cfg, pt(0, 0), pt(1, 0), 1.02);
    EXPECT_DOUBLE_EQ(r.value, 10.0);
    EXPECT_NEAR(path_length(std::get<Path>(r.witness)), 1.019803902718557, 1e-12);
    // collecting everything needs ≈ 1.0650
    EXPECT_DOUBLE_EQ(solve_path_exact(cfg, pt(0, 0), pt(1, 0), 1.0650281539872886 + 1e-12).value, 12.0);
    EXPECT_DOUBLE_EQ(solve_path_exact(cfg, pt(0, 0), pt(1, 0), 1.0650281539872886 - 1e-9).value, 11.0);
}

TEST(PathExact, OneEndpointAndEmpty) {
    const auto empty = config({});
    auto r = solve_path_exact(empty, pt(0, 0), std::nullopt, 1.0);
    EXPECT_EQ(r.status, SolveStatus::exact);
    EXPECT_EQ(r.value, 0.0);
    EXPECT_EQ(std::get<Path>(r.witness).vertices.size(), 1u);

    const auto cfg = config({{pt(1, 0), 1.0}, {pt(-1, 0), 1.0}, {pt(0, 3), 5.0}});
    EXPECT_DOUBLE_EQ(solve_path_exact(cfg, pt(0, 0), std::nullopt, 3.0).value, 5.0);
    EXPECT_DOUBLE_EQ(solve_path_exact(cfg, pt(0, 0), std::nullopt, 2.9).value, 1.0);
    EXPECT_DOUBLE_EQ(solve_path_exact(cfg, pt(0, 0), std::nullopt, 3.0 + 1e-9).value, 5.0);
}

TEST(PathExact, TieBreakLexicographic) {
    const auto cfg = config({{pt(0, 1), 1.0}, {pt(0, -1), 1.0}, {pt(1, 0), 1.0}});
    const auto r = solve_path_exact(cfg, pt(0, 0), std::nullopt, 1.0);
    ASSERT_EQ(std::get<Path>(r.witness).vertices.size(), 2u);
    EXPECT_EQ(std::get<Path>(r.witness).vertices[1].atom, std::optional<std::size_t>(0));
}

TEST(PathExact, SizeCap) {
    std::vector<MarkedPoint> pts;
    for (int i = 0; i < 17; ++i) pts.push_back({pt(0.01 * (i + 1), 0.001 * i), 1.0});
    const auto cfg = config(pts);
    try {
        solve_path_exact(cfg, pt(0, 0), std::nullopt, 1.0);
        FAIL() << "expected SizeError";
    } catch (const SizeError& e) {
        EXPECT_EQ(e.cap(), 16u);
        EXPECT_NE(std::string(e.what()).find("heuristic"), std::string::npos);
    }
}

TEST(PathExact, MatchesPermutationOracle) {
    for (std::uint64_t t = 0; t < 80; ++t) {
        Rng rng = make_rng(t);
        const double budget = std::uniform_real_distribution<double>(0.5, 2.5)(rng);
        const auto cfg = small_instance(derive_seed(3, {t}), 8, budget, t % 2 == 1);
        const auto atoms = atoms_of(cfg);
        const std::optional<Point> y = t % 3 == 0 ? std::nullopt : std::optional<Point>(pt(0.4 * budget, 0.1));
        const auto r = solve_path_exact(cfg, pt(0, 0), y, budget);
        EXPECT_NEAR(r.value, oracle::path_value(atoms, pt(0, 0), y, budget), 1e-12) << t;
        EXPECT_TRUE(witness_consistent(r, cfg, Query{Model::path, pt(0, 0), y, budget, 0.0}));
    }
}

TEST(RestrictedExact, SpecExample) {
    const auto cfg = config({{pt(0.2, 0), 1.0}, {pt(0.2, 0.3), 5.0}});
    const auto r = solve_restricted_animal_exact(cfg, pt(0, 0), pt(0.5, 0), 0.9);
    EXPECT_EQ(r.status, SolveStatus::exact);
    EXPECT_DOUBLE_EQ(r.value, 6.0);
    const Animal& a = std::get<Animal>(r.witness);
    EXPECT_NEAR(animal_length(a) + distance_to_vertices(pt(0, 0), a) + distance_to_vertices(pt(0.5, 0), a), 0.8, 1e-12);
    EXPECT_DOUBLE_EQ(solve_restricted_animal_exact(cfg, pt(0, 0), pt(0.5, 0), 0.79).value, 5.0);
}

TEST(RestrictedExact, EmptyConfiguration) {
    const auto r = solve_restricted_animal_exact(config({}), pt(0, 0), pt(1, 0), 0.5);
    EXPECT_EQ(r.status, SolveStatus::exact);
    EXPECT_EQ(r.value, 0.0);
    EXPECT_TRUE(std::get<Animal>(r.witness).empty());
}

TEST(RestrictedExact, MatchesSubsetOracleAndMonotoneInBudget) {
    for (std::uint64_t t = 0; t < 60; ++t) {
        const auto cfg = small_instance(derive_seed(4, {t}), 10, 1.5, t % 2 == 0);
        const auto atoms = atoms_of(cfg);
        const std::optional<Point> y = t % 2 == 0 ? std::optional<Point>(pt(0.5, -0.2)) : std::nullopt;
        double prev = 0.0;
        for (double l : {0.4, 0.8, 1.2, 1.6}) {
            const auto r = solve_restricted_animal_exact(cfg, pt(0, 0), y, l);
            EXPECT_NEAR(r.value, oracle::restricted_value(atoms, pt(0, 0), y, l), 1e-12);
            EXPECT_GE(r.value, prev);
            prev = r.value;
            EXPECT_TRUE(witness_consistent(r, cfg, Query{Model::animal_restricted, pt(0, 0), y, l, kInfinity}));
        }
    }
}

TEST(Bracket, InfiniteQIsRestrictedExact) {
    const auto cfg = small_instance(8, 10, 1.0, true);
    const Query q{Model::animal_penalized, pt(0, 0), pt(0.3, 0), 1.0, kInfinity};
    const auto b = solve_animal_bracket(cfg, q);
    const auto r = solve_restricted_animal_exact(cfg, pt(0, 0), pt(0.3, 0), 1.0);
    EXPECT_EQ(b.status, SolveStatus::exact);
    EXPECT_EQ(b.value, r.value);
}

TEST(Bracket, LargePenaltyCollapses) {
    for (std::uint64_t t = 0; t < 30; ++t) {
        const auto cfg = small_instance(derive_seed(9, {t}), 10, 1.2, t % 2 == 0);
        const Query q{Model::animal_penalized, pt(0, 0), pt(0.4, 0), 1.2, cfg.total_mass() + 0.1};
        const auto b = solve_animal_bracket(cfg, q);
        const auto r = solve_restricted_animal_exact(cfg, pt(0, 0), pt(0.4, 0), 1.2);
        EXPECT_EQ(b.status, SolveStatus::exact);
        EXPECT_EQ(b.low, r.value);
        EXPECT_EQ(b.high, r.value);
    }
}

TEST(Bracket, EquilateralFermatWitness) {
    // Three unit-mass atoms on a triangle of side s; x at one corner.
    const double s = 1.0;
    const auto cfg = config({{pt(0, 0), 1.0}, {pt(s, 0), 1.0}, {pt(s / 2, s * std::sqrt(3.0) / 2), 1.0}});
    const double budget = 0.5 * (std::sqrt(3.0) * s + 2.0 * s);  // between √3·s and 2s
    const Query q{Model::animal_unrestricted, pt(0, 0), std::nullopt, budget, 0.0};
    BracketOptions no_fermat;
    no_fermat.fermat = false;
    const auto mst_only = solve_animal_bracket(cfg, q, no_fermat);
    const auto with_fermat = solve_animal_bracket(cfg, q);
    EXPECT_DOUBLE_EQ(mst_only.low, 2.0);
    EXPECT_DOUBLE_EQ(with_fermat.low, 3.0);
    EXPECT_GE(with_fermat.low, mst_only.low);
    EXPECT_TRUE(witness_consistent(with_fermat, cfg, q));
    EXPECT_LE(with_fermat.low, with_fermat.high);
}

TEST(Bracket, ZeroPenaltyMatchesUnrestricted) {
    for (std::uint64_t t = 0; t < 30; ++t) {
        const auto cfg = small_instance(derive_seed(10, {t}), 10, 1.2, true);
        const Query pen{Model::animal_penalized, pt(0, 0), pt(0.4, 0.1), 1.2, 0.0};
        Query unr = pen;
        unr.model = Model::animal_unrestricted;
        const auto a = solve_animal_bracket(cfg, pen);
        const auto b = solve_animal_bracket(cfg, unr);
        EXPECT_NEAR(a.low, b.low, 1e-12);
        EXPECT_EQ(a.high, b.high);
        EXPECT_TRUE(witness_consistent(a, cfg, pen));
        EXPECT_TRUE(witness_consistent(b, cfg, unr));
    }
}

TEST(Bracket, ContainsRestrictedAndIsMonotoneInQ) {
    for (std::uint64_t t = 0; t < 30; ++t) {
        const auto cfg = small_instance(derive_seed(11, {t}), 10, 1.0, false);
        const auto restricted = solve_restricted_animal_exact(cfg, pt(0, 0), std::nullopt, 1.0).value;
        double prev_low = kInfinity, prev_high = kInfinity;
        for (double q : {0.0, 0.25, 0.5, 1.0, 4.0, kInfinity}) {
            const Query query{Model::animal_penalized, pt(0, 0), std::nullopt, 1.0, q};
            const auto b = solve_animal_bracket(cfg, query);
            EXPECT_LE(b.low, b.high);
            EXPECT_GE(b.high + 1e-12, restricted);
            EXPECT_GE(b.low + 1e-12, restricted);
            EXPECT_LE(b.low, prev_low + 1e-12);
            EXPECT_LE(b.high, prev_high + 1e-12);
            prev_low = b.low;
            prev_high = b.high;
        }
    }
}

TEST(Bracket, UnrestrictedInfeasibleWhenEndpointsTooFar) {
    const Query q{Model::animal_unrestricted, pt(0, 0), pt(2, 0), 1.0, 0.0};
    EXPECT_EQ(solve_animal_bracket(config({}), q).status, SolveStatus::infeasible);
}

TEST(Heuristic, TrivialAtZeroEffort) {
    const auto cfg = small_instance(12, 10, 1.0, true);
    const auto p = solve_heuristic(cfg, Query{Model::path, pt(0, 0), pt(0.5, 0), 1.0, 0.0}, 0, 1);
    EXPECT_EQ(p.status, SolveStatus::lower_bound);
    EXPECT_EQ(std::get<Path>(p.witness).vertices.size(), 2u);
    const auto a = solve_heuristic(cfg, Query{Model::animal_restricted, pt(0, 0), pt(0.5, 0), 1.0, kInfinity}, 0, 1);
    EXPECT_TRUE(std::get<Animal>(a.witness).empty());
    EXPECT_EQ(a.value, 0.0);
}

TEST(Heuristic, DeterministicAndMonotoneInEffort) {
    const auto cfg = sample_ppp(IntensityDescriptor::exponential(2, 1.0, 3.0), Box::cube(2, -4, 4), 99);
    for (Model m : {Model::path, Model::animal_restricted, Model::animal_penalized, Model::animal_unrestricted}) {
        const Query q{m, pt(0, 0), pt(1.5, 0), 4.0, m == Model::animal_restricted ? kInfinity : 0.5};
        double prev = 0.0;
        for (std::size_t effort : {0, 1, 4, 16, 48}) {
            const auto a = solve_heuristic(cfg, q, effort, 7);
            const auto b = solve_heuristic(cfg, q, effort, 7);
            EXPECT_EQ(a.value, b.value);
            EXPECT_GE(a.value, prev) << to_string(m) << " effort " << effort;
            EXPECT_TRUE(witness_consistent(a, cfg, q)) << to_string(m);
            prev = a.value;
        }
    }
}

TEST(Heuristic, NeverAboveExact) {
    std::size_t matches = 0, total = 0;
    for (std::uint64_t t = 0; t < 100; ++t) {
        const auto cfg = small_instance(derive_seed(13, {t}), 12, 1.5, t % 2 == 0);
        const std::optional<Point> y = t % 3 == 0 ? std::nullopt : std::optional<Point>(pt(0.5, 0));
        const Query pq{Model::path, pt(0, 0), y, 1.5, 0.0};
        const Query rq{Model::animal_restricted, pt(0, 0), y, 1.5, kInfinity};
        for (const Query* q : {&pq, &rq}) {
            const auto h = solve_heuristic(cfg, *q, 64, t);
            const auto e = solve(cfg, *q, SolverMode::exact);
            EXPECT_LE(h.value, e.value + 1e-12);
            ++total;
            if (std::abs(h.value - e.value) <= 1e-9) ++matches;
        }
    }
    EXPECT_GE(static_cast<double>(matches), 0.9 * static_cast<double>(total));
}

TEST(Chain, EmptyConfiguration) {
    const auto rep = verify_chain(config({}), 1.0, 0.5, pt(0, 0));
    EXPECT_TRUE(rep.pass);
    EXPECT_EQ(rep.path.value, 0.0);
    EXPECT_EQ(rep.penalized.value, 0.0);
    EXPECT_EQ(rep.unrestricted.value, 0.0);
    EXPECT_EQ(rep.path_double.value, 0.0);
}

TEST(Chain, InfinitePenaltyExact) {
    for (std::uint64_t t = 0; t < 40; ++t) {
        const auto cfg = small_instance(derive_seed(14, {t}), 12, 1.0, t % 2 == 0);
        const auto rep = verify_chain(cfg, 1.0, kInfinity, pt(0, 0));
        EXPECT_TRUE(rep.pass);
        EXPECT_EQ(rep.penalized.status, SolveStatus::exact);
        EXPECT_LE(rep.path.value, rep.penalized.value + 1e-12);
    }
}

TEST(Sprinkle, NoFreeVertices) {
    const auto base = config({{pt(0, 0), 1.0}, {pt(1, 0), 1.0}});
    const auto sprinkle = config({{pt(5, 5), 1.0}});
    const Animal a{{Vertex::at_atom(base, 0), Vertex::at_atom(base, 1)}, {{0, 1}}};
    const auto out = sprinkle_replace(a, sprinkle, base.size());
    EXPECT_EQ(out.shift, 0.0);
    EXPECT_EQ(out.replaced, 0u);
    EXPECT_EQ(out.animal.edges, a.edges);
    EXPECT_DOUBLE_EQ(out.length_after, out.length_before);
}

TEST(Sprinkle, DegreeTwoBound) {
    const auto base = config({{pt(0, 0), 1.0}, {pt(2, 0), 1.0}});
    const auto sprinkle = config({{pt(1, 0.3), 1.0}, {pt(7, 7), 1.0}});
    const Animal a{{Vertex::at_atom(base, 0), Vertex::free(pt(1, 0)), Vertex::at_atom(base, 1)}, {{0, 1}, {1, 2}}};
    const auto out = sprinkle_replace(a, sprinkle, base.size());
    EXPECT_NEAR(out.shift, 0.3, 1e-15);
    EXPECT_LE(out.length_after - out.length_before, 2.0 * 0.3 + 1e-12);
    EXPECT_TRUE(out.bound_holds());
    EXPECT_EQ(out.animal.vertices[1].atom, std::optional<std::size_t>(2));
    EXPECT_THROW(sprinkle_replace(a, config({}), 2), InfeasibleError);
}

TEST(Status, Names) {
    for (auto s : {SolveStatus::exact, SolveStatus::bracket, SolveStatus::lower_bound, SolveStatus::infeasible})
        EXPECT_EQ(parse_status(to_string(s)), s);
    EXPECT_EQ(parse_solver_mode("auto"), SolverMode::automatic);
}
