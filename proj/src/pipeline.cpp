#include "tsclust/pipeline.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <random>
#include <set>
#include <sstream>

#include "tsclust/errors.hpp"

namespace tsclust::pipeline {

using nlohmann::json;

namespace {

std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t h = 0xCBF29CE484222325ULL) {
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001B3ULL;
    }
    return h;
}

std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

std::string method_name(dataset::AggregationMethod m) {
    return m == dataset::AggregationMethod::sum ? "sum" : "mean";
}

dataset::AggregationMethod method_from_string(const std::string& s) {
    if (s == "sum") return dataset::AggregationMethod::sum;
    if (s == "mean") return dataset::AggregationMethod::mean;
    throw ValidationError({"aggregation.method: unknown method '" + s + "'"});
}

}  // namespace

RunConfig config_from_json(const json& j) {
    RunConfig c;
    c.input_path = j.value("input", std::string{});
    if (j.contains("mapping")) {
        const auto& m = j.at("mapping");
        c.mapping.time_column = m.value("time_column", std::string{});
        c.mapping.value_column = m.value("value_column", std::string{});
        c.mapping.label_column = m.value("label_column", std::string{});
    }
    c.timestamp_format = j.value("timestamp_format", c.timestamp_format);
    const std::string delim = j.value("delimiter", std::string{","});
    c.delimiter = delim.empty() ? ',' : delim[0];
    if (j.contains("aggregation")) {
        const auto& a = j.at("aggregation");
        c.aggregation.resolution_minutes = a.value("resolution_minutes", std::int64_t{0});
        c.aggregation.method = method_from_string(a.value("method", std::string{"mean"}));
    }
    c.max_gap = j.value("max_gap", c.max_gap);
    c.normalization =
        repr::normalization_from_string(j.value("normalization", std::string{"z-score"}));
    if (j.contains("representation")) {
        const auto& r = j.at("representation");
        const std::string mode = r.value("mode", std::string{"none"});
        if (mode == "fpca") {
            repr::FpcaConfig f;
            f.components = r.value("components", f.components);
            f.center = r.value("center", f.center);
            c.fpca = f;
        } else if (mode != "none") {
            throw ValidationError({"representation.mode: unknown mode '" + mode + "'"});
        }
    }
    if (j.contains("cluster")) {
        const auto& k = j.at("cluster");
        c.cluster.algorithm =
            clustering::algorithm_from_string(k.value("algorithm", std::string{"kmeans"}));
        c.cluster.k = k.value("k", std::size_t{2});
        c.cluster.distance.variant =
            metrics::distance_from_string(k.value("distance", std::string{"euclidean"}));
        if (k.contains("dtw_window") && !k.at("dtw_window").is_null())
            c.cluster.distance.dtw_window = k.at("dtw_window").get<std::size_t>();
        c.cluster.seed = k.value("seed", std::uint64_t{0});
        c.cluster.max_iter = k.value("max_iter", std::size_t{300});
        c.cluster.n_init = k.value("n_init", std::size_t{10});
        c.cluster.linkage =
            clustering::linkage_from_string(k.value("linkage", std::string{"ward"}));
    }
    if (j.contains("k_sweep") && !j.at("k_sweep").is_null()) {
        KSweepRange r;
        r.k_min = j.at("k_sweep").value("k_min", std::size_t{2});
        r.k_max = j.at("k_sweep").value("k_max", r.k_min);
        c.k_sweep = r;
    }
    c.output_dir = j.value("output_dir", std::string{"."});
    c.report = j.value("report", true);
    c.unit = j.value("unit", c.unit);
    return c;
}

json config_to_json(const RunConfig& c) {
    json j;
    j["input"] = c.input_path.string();
    j["mapping"] = {{"time_column", c.mapping.time_column},
                    {"value_column", c.mapping.value_column},
                    {"label_column", c.mapping.label_column}};
    j["timestamp_format"] = c.timestamp_format;
    j["delimiter"] = std::string(1, c.delimiter);
    j["aggregation"] = {{"resolution_minutes", c.aggregation.resolution_minutes},
                        {"method", method_name(c.aggregation.method)}};
    j["max_gap"] = c.max_gap;
    j["normalization"] = repr::to_string(c.normalization);
    if (c.fpca)
        j["representation"] = {{"mode", "fpca"},
                               {"components", c.fpca->components},
                               {"center", c.fpca->center}};
    else
        j["representation"] = {{"mode", "none"}};
    json cluster = {{"algorithm", clustering::to_string(c.cluster.algorithm)},
                    {"k", c.cluster.k},
                    {"distance", metrics::to_string(c.cluster.distance.variant)},
                    {"seed", c.cluster.seed},
                    {"max_iter", c.cluster.max_iter},
                    {"n_init", c.cluster.n_init},
                    {"linkage", clustering::to_string(c.cluster.linkage)}};
    if (c.cluster.distance.dtw_window)
        cluster["dtw_window"] = *c.cluster.distance.dtw_window;
    else
        cluster["dtw_window"] = nullptr;
    j["cluster"] = cluster;
    if (c.k_sweep)
        j["k_sweep"] = {{"k_min", c.k_sweep->k_min}, {"k_max", c.k_sweep->k_max}};
    else
        j["k_sweep"] = nullptr;
    j["output_dir"] = c.output_dir.string();
    j["report"] = c.report;
    j["unit"] = c.unit;
    return j;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open config file: " + path.string());
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ValidationError({std::string("config is not valid JSON: ") + e.what()});
    }
    return config_from_json(j);
}

RunConfig validate(const RunConfig& config) {
    std::vector<std::string> problems;
    auto bad = [&](const std::string& field, const std::string& why) {
        problems.push_back(field + ": " + why);
    };

    if (config.input_path.empty()) bad("input", "path is required");
    if (config.mapping.time_column.empty()) bad("mapping.time_column", "must be non-empty");
    if (config.mapping.value_column.empty()) bad("mapping.value_column", "must be non-empty");
    if (config.mapping.label_column.empty()) bad("mapping.label_column", "must be non-empty");
    if (!config.mapping.time_column.empty() &&
        (config.mapping.time_column == config.mapping.value_column ||
         config.mapping.time_column == config.mapping.label_column ||
         config.mapping.value_column == config.mapping.label_column))
        bad("mapping", "column names must be distinct");
    if (config.aggregation.resolution_minutes < 0)
        bad("aggregation.resolution_minutes", "must be >= 0");
    if (config.timestamp_format.empty()) bad("timestamp_format", "must be non-empty");

    if (config.fpca && config.fpca->components < 1)
        bad("representation.components", "must be >= 1");

    const auto& cl = config.cluster;
    if (!config.k_sweep && cl.k < 2) bad("cluster.k", "must be >= 2");
    if (cl.algorithm == clustering::Algorithm::kmeans &&
        cl.distance.variant != metrics::DistanceVariant::euclidean)
        bad("cluster.distance", "kmeans requires euclidean");
    if (cl.algorithm == clustering::Algorithm::kshape &&
        cl.distance.variant != metrics::DistanceVariant::sbd)
        bad("cluster.distance", "kshape requires sbd");
    if (cl.algorithm == clustering::Algorithm::hierarchical &&
        cl.linkage == clustering::Linkage::ward &&
        cl.distance.variant != metrics::DistanceVariant::euclidean)
        bad("cluster.linkage", "ward linkage requires euclidean distance");
    if (cl.max_iter < 1) bad("cluster.max_iter", "must be >= 1");
    if (cl.n_init < 1) bad("cluster.n_init", "must be >= 1");

    if (config.k_sweep) {
        if (config.k_sweep->k_min < 2) bad("k_sweep.k_min", "must be >= 2");
        if (config.k_sweep->k_max < config.k_sweep->k_min)
            bad("k_sweep.k_max", "must be >= k_min");
    }
    if (config.output_dir.empty()) bad("output_dir", "must be non-empty");

    if (!problems.empty()) throw ValidationError(problems);
    return config;  // defaults are materialized by construction
}

std::string run_id_for(const RunConfig& config, const std::string& input_bytes) {
    RunConfig canonical = config;
    canonical.output_dir.clear();  // where outputs land does not change the result
    const std::string cfg = config_to_json(canonical).dump();
    return hex64(fnv1a64(cfg, fnv1a64(input_bytes)));
}

namespace {

// Collects temp files and renames them all at commit; anything not
// committed is removed, so failures leave no partial artifacts.
class AtomicWriter {
public:
    ~AtomicWriter() {
        for (const auto& [tmp, final_] : pending_) {
            std::error_code ec;
            std::filesystem::remove(tmp, ec);
        }
    }

    void stage(const std::filesystem::path& final_path, const std::string& content) {
        auto tmp = final_path;
        tmp += ".tmp";
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw DataError("cannot write " + tmp.string());
        out << content;
        out.close();
        if (!out) throw DataError("write failed for " + tmp.string());
        pending_.push_back({tmp, final_path});
    }

    void commit() {
        for (const auto& [tmp, final_] : pending_)
            std::filesystem::rename(tmp, final_);
        pending_.clear();
    }

private:
    std::vector<std::pair<std::filesystem::path, std::filesystem::path>> pending_;
};

json labels_json(const clustering::ClusterAssignment& a, const std::string& run_id) {
    json clusters = json::object();
    std::vector<std::vector<std::string>> by_cluster(a.k);
    for (std::size_t i = 0; i < a.labels.size(); ++i)
        by_cluster[a.cluster_of[i]].push_back(a.labels[i]);
    for (std::size_t c = 0; c < a.k; ++c) {
        std::sort(by_cluster[c].begin(), by_cluster[c].end());
        clusters[std::to_string(c)] = by_cluster[c];
    }
    json assignment = json::object();
    for (std::size_t i = 0; i < a.labels.size(); ++i)
        assignment[a.labels[i]] = a.cluster_of[i];
    return json{{"run_id", run_id}, {"clusters", clusters}, {"assignment", assignment}};
}

json dropped_json(const std::vector<dataset::DroppedSeries>& dropped) {
    json arr = json::array();
    for (const auto& d : dropped) arr.push_back({{"label", d.label}, {"reason", d.reason}});
    return arr;
}

double finite_or_null(json& slot, double v) {
    if (std::isfinite(v))
        slot = v;
    else
        slot = nullptr;
    return v;
}

std::string svg_panel(const repr::RepresentedMatrix& matrix,
                      const clustering::ClusterAssignment& a, std::size_t cluster_id) {
    const std::size_t d = matrix.data.cols();
    const double width = 640.0, height = 260.0, pad = 12.0;

    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < matrix.data.rows(); ++i) {
        if (a.cluster_of[i] != cluster_id) continue;
        for (double v : matrix.data.row(i)) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    }
    for (double v : a.centers.row(cluster_id)) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    if (!(hi > lo)) hi = lo + 1.0;

    auto polyline = [&](std::span<const double> row, const char* style) {
        std::ostringstream p;
        p << "<polyline fill=\"none\" " << style << " points=\"";
        for (std::size_t j = 0; j < d; ++j) {
            const double x =
                pad + (width - 2 * pad) * (d > 1 ? static_cast<double>(j) / (d - 1) : 0.0);
            const double y = height - pad - (height - 2 * pad) * ((row[j] - lo) / (hi - lo));
            if (j) p << ' ';
            p << x << ',' << y;
        }
        p << "\"/>";
        return p.str();
    };

    std::ostringstream svg;
    svg << "<svg viewBox=\"0 0 " << width << ' '
        << height << "\" width=\"" << width << "\" height=\"" << height << "\">";
    for (std::size_t i = 0; i < matrix.data.rows(); ++i)
        if (a.cluster_of[i] == cluster_id)
            svg << polyline(matrix.data.row(i),
                            "stroke=\"#9ecae1\" stroke-width=\"1\" opacity=\"0.6\"");
    svg << polyline(a.centers.row(cluster_id), "stroke=\"#000000\" stroke-width=\"3\"");
    svg << "</svg>";
    return svg.str();
}

std::string html_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '&': out += "&amp;"; break;
            default: out += c;
        }
    }
    return out;
}

std::string report_html(const repr::RepresentedMatrix& matrix,
                        const clustering::ClusterAssignment& a,
                        const validity::ValidityScores& scores, const std::string& run_id) {
    std::vector<std::size_t> sizes(a.k, 0);
    for (std::size_t c : a.cluster_of) ++sizes[c];

    std::ostringstream out;
    out << "<!DOCTYPE html>\n<html><head><meta charset=\"utf-8\">"
        << "<title>Cluster report " << run_id << "</title>"
        << "<style>body{font-family:sans-serif;margin:20px}"
        << ".panel{margin-bottom:28px}h2{margin-bottom:4px}"
        << ".meta{color:#555;font-size:14px}</style></head><body>\n";
    out << "<h1>Cluster report</h1>\n<p class=\"meta\">run " << html_escape(run_id) << " | "
        << a.labels.size() << " series | k=" << a.k
        << " | silhouette=" << scores.silhouette << " | davies-bouldin=" << scores.davies_bouldin
        << " | calinski-harabasz=" << scores.calinski_harabasz << "</p>\n";
    for (std::size_t c = 0; c < a.k; ++c) {
        out << "<div class=\"panel\"><h2>Cluster " << c << "</h2><p class=\"meta\">"
            << sizes[c] << " members</p>\n"
            << svg_panel(matrix, a, c) << "\n</div>\n";
    }
    out << "</body></html>\n";
    return out.str();
}

}  // namespace

void write_labels(const clustering::ClusterAssignment& assignment, const std::string& run_id,
                  const std::filesystem::path& path) {
    AtomicWriter w;
    w.stage(path, labels_json(assignment, run_id).dump(2) + "\n");
    w.commit();
}

json scores_json_fixed(const clustering::ClusterAssignment& assignment,
                       const validity::ValidityScores& scores, double elapsed_seconds,
                       const RunConfig& config, const std::string& run_id,
                       const std::vector<dataset::DroppedSeries>& dropped) {
    json j;
    j["run_id"] = run_id;
    {
        RunConfig canonical = config;
        canonical.output_dir.clear();  // keep scores identical across output locations
        j["config"] = config_to_json(canonical);
    }
    j["silhouette"] = scores.silhouette;
    j["davies_bouldin"] = scores.davies_bouldin;
    finite_or_null(j["calinski_harabasz"], scores.calinski_harabasz);
    j["inertia"] = assignment.inertia;
    j["iterations"] = assignment.iterations;
    j["converged"] = assignment.converged;
    j["elapsed_seconds"] = elapsed_seconds;
    j["dropped_labels"] = dropped_json(dropped);
    j["flags"] = {{"zero_within_scatter", scores.zero_within_scatter},
                  {"non_euclidean_clustering", scores.non_euclidean_clustering}};
    if (!assignment.notes.empty()) j["notes"] = assignment.notes;
    return j;
}

json scores_json_sweep(const clustering::KSweepResult& sweep, double elapsed_seconds,
                       const RunConfig& config, const std::string& run_id,
                       const std::vector<dataset::DroppedSeries>& dropped) {
    json j;
    j["run_id"] = run_id;
    {
        RunConfig canonical = config;
        canonical.output_dir.clear();  // keep scores identical across output locations
        j["config"] = config_to_json(canonical);
    }
    json per_k = json::array();
    for (const auto& e : sweep.per_k) {
        json entry;
        entry["k"] = e.k;
        entry["inertia"] = e.inertia;
        entry["silhouette"] = e.silhouette;
        entry["davies_bouldin"] = e.davies_bouldin;
        finite_or_null(entry["calinski_harabasz"], e.calinski_harabasz);
        per_k.push_back(entry);
    }
    j["per_k"] = per_k;
    j["suggested_k"] = sweep.suggested_k;
    j["method"] = sweep.method;
    j["elapsed_seconds"] = elapsed_seconds;
    j["dropped_labels"] = dropped_json(dropped);
    return j;
}

void write_scores(const json& scores, const std::filesystem::path& path) {
    AtomicWriter w;
    w.stage(path, scores.dump(2) + "\n");
    w.commit();
}

void write_report(const repr::RepresentedMatrix& matrix,
                  const clustering::ClusterAssignment& assignment,
                  const validity::ValidityScores& scores, const std::string& run_id,
                  const std::filesystem::path& path) {
    AtomicWriter w;
    w.stage(path, report_html(matrix, assignment, scores, run_id));
    w.commit();
}

RunOutputs run(const RunConfig& raw_config) {
    const RunConfig config = validate(raw_config);

    std::ifstream in(config.input_path, std::ios::binary);
    if (!in) throw DataError("cannot open input: " + config.input_path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    const std::string input_bytes = buf.str();
    const std::string run_id = run_id_for(config, input_bytes);

    // ingest -> aggregate -> align
    dataset::IngestOptions opts;
    opts.delimiter = config.delimiter;
    opts.timestamp_format = config.timestamp_format;
    std::istringstream source(input_bytes);
    auto wrap = [](const std::string& stage, auto&& fn) {
        try {
            return fn();
        } catch (const Error&) {
            throw;
        } catch (const std::exception& e) {
            throw NumericError(stage + ": " + e.what());
        }
    };
    dataset::RawRecordTable table =
        wrap("ingest", [&] { return dataset::ingest(source, config.mapping, opts); });
    if (config.aggregation.resolution_minutes > 0)
        table = wrap("aggregate", [&] {
            return dataset::aggregate(table, config.aggregation.resolution_minutes,
                                      config.aggregation.method);
        });
    dataset::AlignOptions align_opts;
    align_opts.max_gap = config.max_gap;
    dataset::TimeSeriesDataset ds = wrap(
        "align", [&] { return dataset::interpolate_and_align(table, align_opts); });
    ds.unit = config.unit;

    // represent
    repr::RepresentedMatrix matrix = repr::from_dataset(ds);
    matrix = repr::normalize(matrix, config.normalization);
    if (config.fpca) matrix = repr::fpca(matrix, *config.fpca);

    const std::size_t n = matrix.data.rows();
    const auto t0 = std::chrono::steady_clock::now();

    clustering::ClusterAssignment assignment;
    json scores_doc;
    if (config.k_sweep) {
        const auto sweep =
            clustering::sweep_k(matrix, config.cluster, config.k_sweep->k_min,
                                std::min(config.k_sweep->k_max, n));
        clustering::ClusterConfig chosen = config.cluster;
        chosen.k = sweep.suggested_k;
        assignment = clustering::cluster(matrix, chosen);
        const double elapsed =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        scores_doc = scores_json_sweep(sweep, elapsed, config, run_id, ds.dropped);
    } else {
        assignment = clustering::cluster(matrix, config.cluster);
        validity::ValidityScores scores;
        if (config.cluster.k <= n - 1)
            scores = validity::score_all(matrix, assignment.cluster_of, config.cluster.k,
                                         config.cluster.distance);
        const double elapsed =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        scores_doc =
            scores_json_fixed(assignment, scores, elapsed, config, run_id, ds.dropped);
    }

    validity::ValidityScores report_scores;
    if (assignment.k <= n - 1)
        report_scores = validity::score_all(matrix, assignment.cluster_of, assignment.k,
                                            config.cluster.distance);

    std::filesystem::create_directories(config.output_dir);
    RunOutputs out;
    out.run_id = run_id;
    out.labels_file = config.output_dir / "labels.json";
    out.scores_file = config.output_dir / "scores.json";

    AtomicWriter writer;
    writer.stage(out.labels_file, labels_json(assignment, run_id).dump(2) + "\n");
    writer.stage(out.scores_file, scores_doc.dump(2) + "\n");
    if (config.report) {
        out.report_file = config.output_dir / "report.html";
        writer.stage(*out.report_file, report_html(matrix, assignment, report_scores, run_id));
    }
    writer.commit();
    return out;
}

TrajectoryResult label_trajectory(
    const std::vector<std::map<std::string, std::size_t>>& runs) {
    TrajectoryResult result;
    std::set<std::string> all_labels;
    for (const auto& r : runs)
        for (const auto& [label, _] : r) all_labels.insert(label);
    for (const auto& label : all_labels) {
        std::string code;
        for (const auto& r : runs) {
            const auto it = r.find(label);
            code += it == r.end() ? "x" : std::to_string(it->second);
        }
        result.code_of[label] = code;
        ++result.frequencies[code];
    }
    return result;
}

TrajectoryResult trajectory_from_labels_files(
    const std::vector<std::filesystem::path>& labels_files) {
    std::vector<std::map<std::string, std::size_t>> runs;
    for (const auto& path : labels_files) {
        std::ifstream in(path);
        if (!in) throw DataError("cannot open labels file: " + path.string());
        json j;
        try {
            in >> j;
        } catch (const json::exception& e) {
            throw DataError(path.string() + " is not valid JSON: " + e.what());
        }
        if (!j.contains("assignment"))
            throw DataError(path.string() + " has no 'assignment' object");
        std::map<std::string, std::size_t> run;
        for (const auto& [label, cid] : j.at("assignment").items())
            run[label] = cid.get<std::size_t>();
        runs.push_back(std::move(run));
    }
    if (runs.size() < 2) throw DataError("trajectory requires at least 2 runs");
    return label_trajectory(runs);
}

std::string to_string(FixtureTemplate t) {
    switch (t) {
        case FixtureTemplate::residential_two_peak: return "residential_two_peak";
        case FixtureTemplate::nonresidential_flat: return "nonresidential_flat";
        case FixtureTemplate::summer_flattened: return "summer_flattened";
        case FixtureTemplate::hybrid: return "hybrid";
    }
    return "unknown";
}

namespace {

double gauss_bump(double hour, double center, double width) {
    const double z = (hour - center) / width;
    return std::exp(-0.5 * z * z);
}

// smooth working-hours plateau
double plateau(double hour, double start, double end) {
    auto edge = [](double x) { return 1.0 / (1.0 + std::exp(-2.0 * x)); };
    return edge(hour - start) * edge(end - hour);
}

double template_value(FixtureTemplate t, double hour) {
    switch (t) {
        case FixtureTemplate::residential_two_peak:
            return 0.30 + 0.90 * gauss_bump(hour, 8.0, 1.5) + 1.20 * gauss_bump(hour, 20.0, 2.0);
        case FixtureTemplate::nonresidential_flat:
            return 0.20 + 1.00 * plateau(hour, 8.5, 18.5);
        case FixtureTemplate::summer_flattened:
            return 0.40 + 1.10 * gauss_bump(hour, 15.0, 2.0);
        case FixtureTemplate::hybrid:
            return 0.30 + 0.60 * gauss_bump(hour, 8.0, 1.5) + 0.55 * plateau(hour, 9.0, 17.0) +
                   0.70 * gauss_bump(hour, 20.0, 2.0);
    }
    return 0.0;
}

}  // namespace

dataset::TimeSeriesDataset generate_fixture(const FixtureConfig& config) {
    if (config.n_per_template < 1)
        throw ValidationError({"fixture.n_per_template: must be >= 1"});
    constexpr std::size_t points = 96;  // one day at 15-min resolution
    constexpr std::int64_t step = 15;

    dataset::TimeSeriesDataset ds;
    ds.resolution_minutes = step;
    ds.unit = "kW";
    ds.grid.resize(points);
    const std::int64_t day0 = dataset::parse_timestamp("2024-01-01T00:00", "%Y-%m-%dT%H:%M");
    for (std::size_t j = 0; j < points; ++j)
        ds.grid[j] = day0 + static_cast<std::int64_t>(j) * step;

    const std::size_t n = config.templates.size() * config.n_per_template;
    ds.values = Matrix(n, points);
    std::mt19937_64 rng(fnv1a64("fixture", config.seed ^ 0x5851F42D4C957F2DULL));
    std::normal_distribution<double> noise(0.0, 1.0);
    std::uniform_real_distribution<double> amp(1.0 - config.amplitude_jitter,
                                               1.0 + config.amplitude_jitter);

    std::size_t row = 0;
    for (const auto t : config.templates) {
        for (std::size_t i = 0; i < config.n_per_template; ++i, ++row) {
            char suffix[16];
            std::snprintf(suffix, sizeof(suffix), "_%03zu", i);
            ds.labels.push_back(to_string(t) + suffix);

            const double scale = amp(rng);
            std::size_t shift = 0;
            if (config.max_shift > 0) {
                std::uniform_int_distribution<std::size_t> sh(0, 2 * config.max_shift);
                shift = sh(rng);  // interpreted as circular shift minus max_shift
            }
            auto out = ds.values.row(row);
            for (std::size_t j = 0; j < points; ++j) {
                const long src =
                    (static_cast<long>(j) - static_cast<long>(shift) +
                     static_cast<long>(config.max_shift) + static_cast<long>(points)) %
                    static_cast<long>(points);
                const double hour = static_cast<double>(src) * 0.25;
                out[j] = scale * template_value(t, hour) + config.noise_sigma * noise(rng);
            }
        }
    }
    return ds;
}

void write_fixture_csv(const dataset::TimeSeriesDataset& ds,
                       const std::filesystem::path& path) {
    std::ostringstream out;
    out << "timestamp,label,value\n";
    for (std::size_t i = 0; i < ds.labels.size(); ++i) {
        for (std::size_t j = 0; j < ds.grid.size(); ++j) {
            out << dataset::format_timestamp(ds.grid[j], "%Y-%m-%dT%H:%M") << ','
                << ds.labels[i] << ',' << ds.values(i, j) << '\n';
        }
    }
    AtomicWriter w;
    w.stage(path, out.str());
    w.commit();
}

}  // namespace tsclust::pipeline
