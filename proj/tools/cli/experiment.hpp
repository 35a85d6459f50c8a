#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "glab/io.hpp"

namespace glab::cli {

enum class Command { sample, solve, estimate_curve, verify, scaling_test, q_scan, universal_bound };

std::string_view to_string(Command c) noexcept;
Command parse_command(std::string_view name);

/// Names of the verify checks: chain, stretch, rewire, prune, sprinkle, moment.
const std::vector<std::string>& verify_checks();

/// A fully resolved run. `params` holds every parameter the command reads,
/// defaults included, in canonical JSON form; it is what gets persisted.
struct ExperimentSpec {
    Command command = Command::sample;
    std::string check;
    Json params;

    int dim = 2;
    std::optional<Box> window;
    IntensityDescriptor nu;
    std::uint64_t seed = 0;
    Model model = Model::path;
    double q = 0.0;
    double budget = 1.0;
    Point x;
    std::optional<Point> y;
    std::vector<double> betas;
    std::vector<double> lengths;
    double beta = 0.5;
    double length = 2.0;
    std::size_t reps = 2;
    SolverMode mode = SolverMode::automatic;
    std::size_t effort = 64;
    std::size_t workers = 1;
    std::size_t trials = 200;
    std::vector<double> qs;
    double lambda = 2.0;
    double eps = 1.0;
    bool coupled = false;
    std::optional<std::filesystem::path> input;
    std::filesystem::path out = "runs";

    Json to_json() const;
};

/// Flag names accepted per command (without leading dashes).
const std::vector<std::string>& flag_names(Command c);

/// Resolves `values` (config-file entries overlaid by command-line flags,
/// each either a JSON value or the flag's string form) into a spec. Unknown
/// keys, malformed values and conflicting combinations raise ParameterError
/// naming the field. `env_seed` is the GLAB_SEED fallback.
ExperimentSpec parse_spec(Command command, const std::string& check, const Json& values,
                          const std::optional<std::string>& env_seed);

/// Reads a config file: either a flat object of flag values or a persisted
/// spec ({"command", "check", "params"}), possibly nested under "spec".
/// Returns the parameter object; a recorded command must match `command`.
Json load_config(const std::filesystem::path& path, Command command, const std::string& check);

/// Writes curve.csv, curve_summary.csv and overlay.csv into `dir`.
std::vector<std::filesystem::path> emit_plot_data(const CurveEstimate& curve, const std::filesystem::path& dir);

struct RunOutcome {
    /// 0 when every check passed, 1 otherwise.
    int status = 0;
    std::filesystem::path directory;
    std::vector<std::filesystem::path> files;
    Json summary;
};

/// Executes the pipeline and writes its artifacts under
/// <out>/<UTC timestamp>-seed<seed>/.
RunOutcome run(const ExperimentSpec& spec);

}  // namespace glab::cli
