#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "tsclust/clustering.hpp"
#include "tsclust/dataset.hpp"
#include "tsclust/representation.hpp"
#include "tsclust/validity.hpp"

namespace tsclust::pipeline {

struct AggregationConfig {
    std::int64_t resolution_minutes = 0;  // 0 = keep source resolution
    dataset::AggregationMethod method = dataset::AggregationMethod::mean;
};

struct KSweepRange {
    std::size_t k_min = 2;
    std::size_t k_max = 2;
};

// The full declarative parameter set for one clustering job.
struct RunConfig {
    std::filesystem::path input_path;
    dataset::ColumnMapping mapping;
    std::string timestamp_format = "%Y-%m-%dT%H:%M";
    char delimiter = ',';
    AggregationConfig aggregation;
    std::size_t max_gap = 8;
    repr::NormalizationKind normalization = repr::NormalizationKind::z_score;
    std::optional<repr::FpcaConfig> fpca;  // nullopt = no dimensionality reduction
    clustering::ClusterConfig cluster;
    std::optional<KSweepRange> k_sweep;    // set = sweep mode, unset = fixed-k
    std::filesystem::path output_dir = ".";
    bool report = true;
    std::string unit = "kW";
};

RunConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const RunConfig& config);

RunConfig load_config(const std::filesystem::path& path);

// Checks every cross-field constraint, collecting all violations into one
// ValidationError, and returns the config with defaults materialized.
RunConfig validate(const RunConfig& config);

struct RunOutputs {
    std::filesystem::path labels_file;
    std::filesystem::path scores_file;
    std::optional<std::filesystem::path> report_file;
    std::string run_id;
};

// Executes ingest -> aggregate -> align -> represent -> cluster -> score and
// writes the output artifacts atomically (no partial files on failure).
RunOutputs run(const RunConfig& config);

void write_labels(const clustering::ClusterAssignment& assignment, const std::string& run_id,
                  const std::filesystem::path& path);

nlohmann::json scores_json_fixed(const clustering::ClusterAssignment& assignment,
                                 const validity::ValidityScores& scores, double elapsed_seconds,
                                 const RunConfig& config, const std::string& run_id,
                                 const std::vector<dataset::DroppedSeries>& dropped);
nlohmann::json scores_json_sweep(const clustering::KSweepResult& sweep, double elapsed_seconds,
                                 const RunConfig& config, const std::string& run_id,
                                 const std::vector<dataset::DroppedSeries>& dropped);

void write_scores(const nlohmann::json& scores, const std::filesystem::path& path);

// Self-contained HTML report: one inline-SVG panel per cluster, member
// series in light strokes and the cluster center in a heavy black stroke.
void write_report(const repr::RepresentedMatrix& matrix,
                  const clustering::ClusterAssignment& assignment,
                  const validity::ValidityScores& scores, const std::string& run_id,
                  const std::filesystem::path& path);

struct TrajectoryResult {
    std::map<std::string, std::string> code_of;       // label -> digit string
    std::map<std::string, std::size_t> frequencies;   // code -> count
};

// Concatenates each label's cluster id across the given runs, in order,
// with 'x' marking runs the label is absent from.
TrajectoryResult label_trajectory(
    const std::vector<std::map<std::string, std::size_t>>& runs);

TrajectoryResult trajectory_from_labels_files(
    const std::vector<std::filesystem::path>& labels_files);

enum class FixtureTemplate {
    residential_two_peak,
    nonresidential_flat,
    summer_flattened,
    hybrid,
};

std::string to_string(FixtureTemplate t);

struct FixtureConfig {
    std::size_t n_per_template = 50;
    std::vector<FixtureTemplate> templates = {
        FixtureTemplate::residential_two_peak, FixtureTemplate::nonresidential_flat,
        FixtureTemplate::summer_flattened, FixtureTemplate::hybrid};
    double noise_sigma = 0.05;
    double amplitude_jitter = 0.2;   // uniform scale in [1-j, 1+j]
    std::size_t max_shift = 0;       // circular shift in steps
    std::uint64_t seed = 0;
};

// 96-point daily profiles (15-min steps) from parameterized template shapes;
// the generating template is encoded in each label.
dataset::TimeSeriesDataset generate_fixture(const FixtureConfig& config);

void write_fixture_csv(const dataset::TimeSeriesDataset& ds,
                       const std::filesystem::path& path);

std::string run_id_for(const RunConfig& config, const std::string& input_bytes);

}  // namespace tsclust::pipeline
