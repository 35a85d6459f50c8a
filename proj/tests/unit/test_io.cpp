#include <gtest/gtest.h>

#include <filesystem>

#include "glab/error.hpp"
#include "glab/io.hpp"

using namespace glab;

TEST(Json, SampleSpecRoundTrip) {
    const auto j = Json::parse(R"({"dim":2,"window":[[0,10],[0,10]],"nu":{"kind":"dirac","atom":1.0,"rate":1.0},"seed":42})");
    const auto spec = sample_spec_from_json(j);
    EXPECT_EQ(spec.dim, 2);
    EXPECT_EQ(spec.window, Box::cube(2, 0, 10));
    EXPECT_EQ(spec.seed, std::optional<std::uint64_t>(42));
    EXPECT_EQ(to_json(spec), j);
}

TEST(Json, FieldPathsInErrors) {
    auto j = Json::parse(R"({"dim":2,"window":[[0,10],[0,10]],"nu":{"kind":"dirac","atom":1.0,"rate":-1.0}})");
    try {
        sample_spec_from_json(j);
        FAIL();
    } catch (const ParameterError& e) {
        EXPECT_NE(std::string(e.what()).find("nu.rate"), std::string::npos) << e.what();
    }
    j = Json::parse(R"({"dim":2,"window":[[0,10]],"nu":{"kind":"dirac","atom":1.0,"rate":1.0}})");
    EXPECT_THROW(sample_spec_from_json(j), ParameterError);
    j = Json::parse(R"({"dim":2,"window":[[0,10],[0,1]],"nu":{"kind":"gamma"}})");
    try {
        sample_spec_from_json(j);
        FAIL();
    } catch (const ParameterError& e) {
        EXPECT_NE(std::string(e.what()).find("nu.kind"), std::string::npos);
    }
}

TEST(Json, DescriptorKinds) {
    for (const auto& nu : {IntensityDescriptor::dirac(3, 1.0, 2.0), IntensityDescriptor::exponential(3, 2.0, 0.5),
                           IntensityDescriptor::pareto(3, 1.0, 4.0, 2.0),
                           IntensityDescriptor::mixture(3, {{1.0, 0.5}, {2.0, 0.25}})}) {
        const auto back = descriptor_from_json(to_json(nu), 3);
        EXPECT_EQ(to_json(back), to_json(nu));
        EXPECT_EQ(back.total_mass(), nu.total_mass());
    }
}

TEST(Json, ConfigurationDumpRoundTrip) {
    const auto cfg = sample_ppp(IntensityDescriptor::exponential(2, 1.0), Box::cube(2, 0, 3), 8);
    const auto j = to_json(cfg);
    const auto back = configuration_from_json(Json::parse(j.dump()));
    ASSERT_EQ(back.size(), cfg.size());
    for (std::size_t i = 0; i < cfg.size(); ++i) {
        EXPECT_EQ(back.points[i].pos, cfg.points[i].pos);
        EXPECT_EQ(back.points[i].mass, cfg.points[i].mass);
    }
    EXPECT_EQ(back.provenance.seed, cfg.provenance.seed);
}

TEST(Json, AnimalAndResult) {
    Point a(2), b(2);
    a << 0, 0;
    b << 1, 0;
    const Animal an{{Vertex{a, 3}, Vertex::free(b)}, {{0, 1}}};
    const auto j = to_json(an);
    EXPECT_EQ(j["vertices"][0]["atom"], 3);
    EXPECT_TRUE(j["vertices"][1]["atom"].is_null());
    const Animal back = animal_from_json(j);
    EXPECT_EQ(back.edges, an.edges);
    EXPECT_EQ(back.vertices[0].atom, an.vertices[0].atom);

    SolveResult r;
    r.status = SolveStatus::bracket;
    r.low = 1.0;
    r.high = 2.0;
    r.witness = an;
    const auto rj = to_json(r);
    EXPECT_EQ(rj["status"], "bracket");
    EXPECT_EQ(rj["low"], 1.0);
    EXPECT_EQ(rj["high"], 2.0);
    EXPECT_FALSE(rj.contains("value"));

    Json bad = j;
    bad["edges"] = Json::array({Json::array({0, 0})});
    EXPECT_THROW(animal_from_json(bad), ParameterError);
}

TEST(Csv, CurveFiles) {
    CurveEstimate c;
    c.model = Model::path;
    c.dim = 2;
    c.betas = {0.0, 0.5, 0.8};
    c.lengths = {2.0};
    c.replicates = 2;
    for (std::size_t b = 0; b < 3; ++b) {
        for (std::size_t r = 0; r < 2; ++r) c.samples.push_back({b, 0, r, 1.0 - 0.25 * static_cast<double>(b), 0.0, SolveStatus::exact, true, 0});
        CurvePoint p;
        p.beta = c.betas[b];
        p.length = 2.0;
        p.summary = {2, 1.0 - 0.25 * static_cast<double>(b), 0.0};
        p.exact = true;
        c.points.push_back(p);
    }
    const std::string rows = curve_csv(c);
    EXPECT_EQ(rows.substr(0, rows.find('\n')), "model,q,beta,L,replicate,value,exact");
    EXPECT_EQ(std::count(rows.begin(), rows.end(), '\n'), 7);
    EXPECT_NE(rows.find("path,0,0.5,2,1,0.75,1"), std::string::npos);

    const std::string overlay = overlay_csv(c);
    EXPECT_NE(overlay.find("0.5,0.75,0,,\n"), std::string::npos) << overlay;
    const double g = g_function(0.8, 2);
    EXPECT_NE(overlay.find("0.8,0.5,0," + format_number(g) + "," + format_number(g * 1.0)), std::string::npos);
    const std::string summary = curve_summary_csv(c);
    EXPECT_EQ(std::count(summary.begin(), summary.end(), '\n'), 4);
}

TEST(Files, AtomicWrite) {
    const auto dir = std::filesystem::temp_directory_path() / "glab_io_test";
    std::filesystem::remove_all(dir);
    write_file_atomic(dir / "sub" / "a.txt", "hello\n");
    EXPECT_EQ(read_file(dir / "sub" / "a.txt"), "hello\n");
    EXPECT_FALSE(std::filesystem::exists(dir / "sub" / "a.txt.tmp"));
    std::filesystem::remove_all(dir);
}
