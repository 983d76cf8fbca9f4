#pragma once

#include <cstdint>
#include <istream>
#include <optional>
#include <string>
#include <vector>

#include "tsclust/matrix.hpp"

namespace tsclust::dataset {

// Which input columns carry the timestamps, the values and the series labels.
struct ColumnMapping {
    std::string time_column;
    std::string value_column;
    std::string label_column;
};

struct RawRecord {
    std::string label;
    std::int64_t ts_minutes;  // naive local time, minutes since epoch
    std::optional<double> value;  // nullopt = missing sample
};

// Long-format samples, sorted by (label, timestamp), duplicates rejected.
struct RawRecordTable {
    std::vector<RawRecord> rows;
};

enum class AggregationMethod { sum, mean };

struct DroppedSeries {
    std::string label;
    std::string reason;
};

// Aligned, gap-free matrix of equal-length series on a shared uniform grid.
struct TimeSeriesDataset {
    std::vector<std::string> labels;       // n series identifiers
    std::vector<std::int64_t> grid;        // d timestamps, constant step
    Matrix values;                         // n x d
    std::string unit;
    std::int64_t resolution_minutes = 0;
    std::vector<DroppedSeries> dropped;    // labels removed during alignment
};

struct IngestOptions {
    char delimiter = ',';
    std::string timestamp_format = "%Y-%m-%dT%H:%M";  // strptime-style
};

std::int64_t parse_timestamp(const std::string& text, const std::string& format);
std::string format_timestamp(std::int64_t ts_minutes, const std::string& format);

RawRecordTable ingest(std::istream& source, const ColumnMapping& mapping,
                      const IngestOptions& options = {});

RawRecordTable aggregate(const RawRecordTable& table, std::int64_t target_resolution_minutes,
                         AggregationMethod method);

struct AlignOptions {
    // Longest run of consecutive missing grid steps that interpolation will
    // bridge; series with a longer outage are dropped and reported.
    std::size_t max_gap = 8;
};

TimeSeriesDataset interpolate_and_align(const RawRecordTable& table,
                                        const AlignOptions& options = {});

// Smallest positive step between consecutive samples of any one series.
std::int64_t infer_resolution(const RawRecordTable& table);

}  // namespace tsclust::dataset
