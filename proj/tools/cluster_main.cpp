#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

#include "tsclust/errors.hpp"
#include "tsclust/pipeline.hpp"

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

void apply_override(json& config, const std::string& expr) {
    const auto eq = expr.find('=');
    if (eq == std::string::npos)
        throw tsclust::ValidationError({"override '" + expr + "' is not key=value"});
    const std::string key = expr.substr(0, eq);
    const std::string raw = expr.substr(eq + 1);

    json* node = &config;
    std::size_t start = 0;
    while (true) {
        const auto dot = key.find('.', start);
        const std::string part = key.substr(start, dot - start);
        if (part.empty())
            throw tsclust::ValidationError({"override key '" + key + "' has an empty segment"});
        if (dot == std::string::npos) {
            json value;
            try {
                value = json::parse(raw);
            } catch (const json::exception&) {
                value = raw;  // bare strings need no quoting
            }
            (*node)[part] = value;
            return;
        }
        node = &(*node)[part];
        start = dot + 1;
    }
}

json load_config_json(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw tsclust::DataError("cannot open config file: " + path.string());
    try {
        json j;
        in >> j;
        return j;
    } catch (const json::exception& e) {
        throw tsclust::ValidationError({std::string("config is not valid JSON: ") + e.what()});
    }
}

int dispatch(int argc, char** argv) {
    CLI::App app{"Time series clustering pipeline for daily load profiles"};
    app.require_subcommand(1);

    std::string config_path;
    std::vector<std::string> overrides;
    std::size_t k_min = 2, k_max = 8;

    auto* cmd_run = app.add_subcommand("run", "Execute one clustering job");
    cmd_run->add_option("--config", config_path, "JSON run configuration")->required();
    cmd_run->add_option("--override", overrides, "Override a config field, key=value");

    auto* cmd_sweep = app.add_subcommand("sweep", "Run a k sweep with elbow selection");
    cmd_sweep->add_option("--config", config_path, "JSON run configuration")->required();
    cmd_sweep->add_option("--k-min", k_min, "Smallest k to try")->required();
    cmd_sweep->add_option("--k-max", k_max, "Largest k to try")->required();
    cmd_sweep->add_option("--override", overrides, "Override a config field, key=value");

    auto* cmd_validate = app.add_subcommand("validate", "Validate a config and echo it");
    cmd_validate->add_option("--config", config_path, "JSON run configuration")->required();
    cmd_validate->add_option("--override", overrides, "Override a config field, key=value");

    std::vector<std::string> run_dirs;
    std::string traj_out;
    auto* cmd_traj = app.add_subcommand(
        "trajectory", "Concatenate per-run cluster ids into per-label codes");
    cmd_traj
        ->add_option("--runs", run_dirs,
                     "Comma-separated run output dirs (or labels.json paths), in order")
        ->required()
        ->delimiter(',');
    cmd_traj->add_option("--out", traj_out, "Write the trajectory JSON here (default stdout)");

    std::string fixture_out;
    std::size_t per_template = 50;
    std::uint64_t seed = 0;
    double noise_sigma = 0.05;
    std::size_t max_shift = 0;
    auto* cmd_fixture =
        app.add_subcommand("fixture", "Generate a synthetic daily-profile CSV");
    cmd_fixture->add_option("--out", fixture_out, "Output CSV path")->required();
    cmd_fixture->add_option("--per-template", per_template, "Series per template shape");
    cmd_fixture->add_option("--seed", seed, "RNG seed");
    cmd_fixture->add_option("--noise-sigma", noise_sigma, "Gaussian noise level");
    cmd_fixture->add_option("--max-shift", max_shift, "Max circular shift in 15-min steps");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;  // bad usage is a validation error
    }

    using namespace tsclust;

    if (cmd_fixture->parsed()) {
        pipeline::FixtureConfig fc;
        fc.n_per_template = per_template;
        fc.seed = seed;
        fc.noise_sigma = noise_sigma;
        fc.max_shift = max_shift;
        const auto ds = pipeline::generate_fixture(fc);
        pipeline::write_fixture_csv(ds, fixture_out);
        std::cout << "wrote " << ds.labels.size() << " series (" << ds.grid.size()
                  << " points each) to " << fixture_out << "\n";
        return 0;
    }

    if (cmd_traj->parsed()) {
        std::vector<fs::path> labels_files;
        for (const auto& r : run_dirs) {
            fs::path p = r;
            if (fs::is_directory(p)) p /= "labels.json";
            labels_files.push_back(p);
        }
        const auto result = pipeline::trajectory_from_labels_files(labels_files);
        json j;
        j["trajectories"] = result.code_of;
        j["frequencies"] = result.frequencies;
        if (traj_out.empty()) {
            std::cout << j.dump(2) << "\n";
        } else {
            std::ofstream out(traj_out);
            if (!out) throw DataError("cannot write " + traj_out);
            out << j.dump(2) << "\n";
        }
        return 0;
    }

    json config_json = load_config_json(config_path);
    for (const auto& o : overrides) apply_override(config_json, o);
    pipeline::RunConfig config = pipeline::config_from_json(config_json);

    if (cmd_sweep->parsed()) config.k_sweep = pipeline::KSweepRange{k_min, k_max};

    if (cmd_validate->parsed()) {
        const auto validated = pipeline::validate(config);
        std::cout << pipeline::config_to_json(validated).dump(2) << "\n";
        return 0;
    }

    const auto outputs = pipeline::run(config);
    std::cout << "run " << outputs.run_id << "\n"
              << "  labels: " << outputs.labels_file.string() << "\n"
              << "  scores: " << outputs.scores_file.string() << "\n";
    if (outputs.report_file)
        std::cout << "  report: " << outputs.report_file->string() << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return dispatch(argc, argv);
    } catch (const tsclust::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return static_cast<int>(e.category());
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 4;
    }
}
