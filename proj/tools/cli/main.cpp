#include <cstdlib>
#include <iostream>
#include <map>

#include <CLI11.hpp>

#include "experiment.hpp"
#include "glab/error.hpp"

namespace {

const std::map<std::string, std::string>& help_text() {
    static const std::map<std::string, std::string> h{
        {"seed", "master seed (falls back to GLAB_SEED)"},
        {"out", "output root; each run gets <out>/<timestamp>-seed<seed>"},
        {"workers", "worker threads for replicate loops"},
        {"dim", "ambient dimension"},
        {"nu", "mark measure: dirac:atom:rate | exponential:rate[:total] | pareto:scale:shape[:total] | mixture:a:r[:a:r...]"},
        {"window", "sampling box lo:hi[,lo:hi...]"},
        {"input", "configuration JSON to solve on instead of sampling"},
        {"model", "path | animal-unrestricted | animal-restricted | animal-penalized"},
        {"q", "free-vertex penalty (animal-penalized only)"},
        {"budget", "length budget"},
        {"x", "start point, comma separated"},
        {"y", "end point, comma separated (omit for one-endpoint queries)"},
        {"mode", "exact | heuristic | auto"},
        {"effort", "local-search iterations for the heuristic"},
        {"beta-grid", "lo:hi:step (1/sqrt(d) is added)"},
        {"lengths", "comma separated scales L"},
        {"reps", "replicates (samples per side for scaling-test)"},
        {"trials", "random instances"},
        {"q-grid", "comma separated penalties; inf allowed"},
        {"eps", "sprinkling intensity"},
        {"lambda", "scaling factor"},
        {"coupled", "reuse side-A seeds on side B (lambda = 1 only)"},
        {"beta", "relative endpoint distance"},
        {"length", "scale L"},
    };
    return h;
}

}  // namespace

int main(int argc, char** argv) {
    using namespace glab::cli;
    CLI::App app{"Greedy paths and animals in marked Poisson clouds"};
    app.require_subcommand(1);

    struct Sub {
        Command command;
        CLI::App* app;
        std::map<std::string, std::string> values;
        std::string config;
        std::string check;
        bool coupled = false;
    };
    std::vector<std::unique_ptr<Sub>> subs;
    const std::map<Command, std::string> about{
        {Command::sample, "sample a marked Poisson configuration"},
        {Command::solve, "solve one value-function query"},
        {Command::estimate_curve, "Monte Carlo estimate of the limit curve"},
        {Command::verify, "randomized geometric property checks"},
        {Command::scaling_test, "two-sample KS test of the scaling identity"},
        {Command::q_scan, "penalized values across a q grid on common realizations"},
        {Command::universal_bound, "boundedness of E[N_A(L)]/L across L"},
    };
    for (const auto& [command, text] : about) {
        auto sub = std::make_unique<Sub>();
        sub->command = command;
        sub->app = app.add_subcommand(std::string(to_string(command)), text);
        if (command == Command::verify)
            sub->app->add_option("check", sub->check, "chain | stretch | rewire | prune | sprinkle | moment")
                ->required()
                ->check(CLI::IsMember(verify_checks()));
        sub->app->add_option("--config", sub->config, "JSON file of parameters (flags override it)");
        for (const auto& name : flag_names(command)) {
            if (name == "coupled") {
                sub->app->add_flag("--coupled", sub->coupled, help_text().at(name));
            } else {
                sub->app->add_option("--" + name, sub->values[name], help_text().at(name));
            }
        }
        subs.push_back(std::move(sub));
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    for (const auto& sub : subs) {
        if (!sub->app->parsed()) continue;
        try {
            glab::Json values = sub->config.empty() ? glab::Json::object() : load_config(sub->config, sub->command, sub->check);
            for (const auto& [name, value] : sub->values)
                if (sub->app->count("--" + name) > 0) values[name] = value;
            if (sub->coupled) values["coupled"] = true;
            std::optional<std::string> env_seed;
            if (const char* s = std::getenv("GLAB_SEED")) env_seed = s;
            const auto spec = parse_spec(sub->command, sub->check, values, env_seed);
            const auto outcome = run(spec);
            glab::Json line{{"directory", outcome.directory.string()}, {"status", outcome.status == 0 ? "pass" : "fail"}};
            for (const auto& [k, v] : outcome.summary.items()) line[k] = v;
            std::cout << line.dump() << "\n";
            return outcome.status;
        } catch (const glab::ParameterError& e) {
            std::cerr << "glab: invalid parameters: " << e.what() << "\n";
            return 2;
        } catch (const std::exception& e) {
            std::cerr << "glab: " << e.what() << "\n";
            return 3;
        }
    }
    return 2;
}
