#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "glab/estimation.hpp"
#include "glab/geometry.hpp"
#include "glab/point_process.hpp"
#include "glab/solvers.hpp"
#include "glab/verify.hpp"

namespace glab {

using Json = nlohmann::ordered_json;

// Parsers throw ParameterError with the JSON field path in the message,
// e.g. "nu.rate: expected a positive number".

Json to_json(const IntensityDescriptor& nu);
/// `dim` is supplied by the enclosing document.
IntensityDescriptor descriptor_from_json(const Json& j, int dim, const std::string& path = "nu");

Json to_json(const Box& box);
Box box_from_json(const Json& j, const std::string& path = "window");

/// The sampling configuration {"dim", "window", "nu", "seed"}.
struct SampleSpec {
    int dim = 2;
    Box window;
    IntensityDescriptor nu;
    std::optional<std::uint64_t> seed;
};
Json to_json(const SampleSpec& spec);
SampleSpec sample_spec_from_json(const Json& j);

Json to_json(const PointConfiguration& cfg);
PointConfiguration configuration_from_json(const Json& j);

Json to_json(const Vertex& v);
Json to_json(const Path& path);
Json to_json(const Animal& animal);
Path path_from_json(const Json& j, const std::string& path = "witness");
Animal animal_from_json(const Json& j, const std::string& path = "witness");

Json to_json(const Query& query);
Json to_json(const SolveResult& result);

Json to_json(const ChainReport& report);
Json to_json(const VerifyReport& report);
Json to_json(const ShapeReport& report);
Json to_json(const StretchReport& report);
Json to_json(const QScanResult& result);
Json to_json(const UniversalReport& report);
Json to_json(const KsResult& ks);
/// Per-(β, L) summaries, f̂ at the largest L and the witness stretch counts.
Json to_json(const CurveEstimate& curve);

/// Shortest round-trip decimal form of a double ("inf" for +∞).
std::string format_number(double v);

/// Per-replicate rows: model,q,beta,L,replicate,value,exact
std::string curve_csv(const CurveEstimate& curve);
/// Per-(β, L) summary rows: model,q,beta,L,mean,stderr,replicates,exact
std::string curve_summary_csv(const CurveEstimate& curve);
/// beta,f_hat,stderr,g,overlay; g and overlay are empty below 1/√d.
std::string overlay_csv(const CurveEstimate& curve);

/// Writes through a temporary file in the same directory and renames it.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);
std::string read_file(const std::filesystem::path& path);

}  // namespace glab
