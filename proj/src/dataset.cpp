#include "tsclust/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <ctime>
#include <iomanip>
#include <map>
#include <numeric>
#include <sstream>

#include "tsclust/errors.hpp"

namespace tsclust::dataset {

namespace {

bool is_missing_token(std::string_view s) {
    if (s.empty()) return true;
    static constexpr std::string_view tokens[] = {"NaN", "nan", "NAN", "null", "NULL", "Null"};
    for (auto t : tokens)
        if (s == t) return true;
    return false;
}

std::vector<std::string> split_csv_line(const std::string& line, char delimiter) {
    std::vector<std::string> fields;
    std::string field;
    bool in_quotes = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    field += '"';
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                field += c;
            }
        } else if (c == '"') {
            in_quotes = true;
        } else if (c == delimiter) {
            fields.push_back(std::move(field));
            field.clear();
        } else if (c != '\r') {
            field += c;
        }
    }
    fields.push_back(std::move(field));
    return fields;
}

std::int64_t gcd64(std::int64_t a, std::int64_t b) { return std::gcd(a, b); }

}  // namespace

std::int64_t parse_timestamp(const std::string& text, const std::string& format) {
    std::tm tm{};
    std::istringstream in(text);
    in >> std::get_time(&tm, format.c_str());
    if (in.fail()) throw DataError("unparseable timestamp '" + text + "'");
    tm.tm_isdst = 0;
    const std::time_t secs = timegm(&tm);  // naive local time, no TZ applied
    return static_cast<std::int64_t>(secs) / 60;
}

std::string format_timestamp(std::int64_t ts_minutes, const std::string& format) {
    const std::time_t secs = static_cast<std::time_t>(ts_minutes) * 60;
    std::tm tm{};
    gmtime_r(&secs, &tm);
    char buf[64];
    if (std::strftime(buf, sizeof(buf), format.c_str(), &tm) == 0)
        throw DataError("timestamp format too long: " + format);
    return buf;
}

RawRecordTable ingest(std::istream& source, const ColumnMapping& mapping,
                      const IngestOptions& options) {
    if (mapping.time_column.empty() || mapping.value_column.empty() ||
        mapping.label_column.empty())
        throw DataError("column mapping names must be non-empty");
    if (mapping.time_column == mapping.value_column ||
        mapping.time_column == mapping.label_column ||
        mapping.value_column == mapping.label_column)
        throw DataError("column mapping names must be distinct");

    std::string line;
    if (!std::getline(source, line)) throw DataError("empty input: no header row");
    // tolerate a UTF-8 BOM
    if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);

    const auto header = split_csv_line(line, options.delimiter);
    auto find_column = [&](const std::string& name) {
        const auto it = std::find(header.begin(), header.end(), name);
        if (it == header.end())
            throw DataError("missing column '" + name + "' in input header");
        return static_cast<std::size_t>(it - header.begin());
    };
    const std::size_t time_idx = find_column(mapping.time_column);
    const std::size_t value_idx = find_column(mapping.value_column);
    const std::size_t label_idx = find_column(mapping.label_column);

    RawRecordTable table;
    std::size_t line_no = 1;
    while (std::getline(source, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        const auto fields = split_csv_line(line, options.delimiter);
        const std::size_t needed = std::max({time_idx, value_idx, label_idx});
        if (fields.size() <= needed)
            throw DataError("line " + std::to_string(line_no) + ": too few fields");

        RawRecord rec;
        rec.label = fields[label_idx];
        rec.ts_minutes = parse_timestamp(fields[time_idx], options.timestamp_format);
        const std::string& raw = fields[value_idx];
        if (is_missing_token(raw)) {
            rec.value = std::nullopt;
        } else {
            try {
                std::size_t pos = 0;
                const double v = std::stod(raw, &pos);
                if (pos != raw.size() || !std::isfinite(v))
                    rec.value = std::nullopt;
                else
                    rec.value = v;
            } catch (const std::exception&) {
                rec.value = std::nullopt;
            }
        }
        table.rows.push_back(std::move(rec));
    }
    if (table.rows.empty()) throw DataError("empty input: no data rows");

    std::stable_sort(table.rows.begin(), table.rows.end(),
                     [](const RawRecord& a, const RawRecord& b) {
                         if (a.label != b.label) return a.label < b.label;
                         return a.ts_minutes < b.ts_minutes;
                     });
    for (std::size_t i = 1; i < table.rows.size(); ++i) {
        const auto& prev = table.rows[i - 1];
        const auto& cur = table.rows[i];
        if (prev.label == cur.label && prev.ts_minutes == cur.ts_minutes)
            throw DataError("duplicate sample for label '" + cur.label + "' at " +
                            std::to_string(cur.ts_minutes));
    }
    return table;
}

std::int64_t infer_resolution(const RawRecordTable& table) {
    std::int64_t g = 0;
    std::int64_t global_min = table.rows.empty() ? 0 : table.rows.front().ts_minutes;
    for (const auto& r : table.rows) global_min = std::min(global_min, r.ts_minutes);
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        const auto& r = table.rows[i];
        if (i > 0 && table.rows[i - 1].label == r.label)
            g = gcd64(g, r.ts_minutes - table.rows[i - 1].ts_minutes);
        g = gcd64(g, r.ts_minutes - global_min);
    }
    if (g <= 0) throw DataError("cannot infer sampling resolution (single timestamp?)");
    return g;
}

RawRecordTable aggregate(const RawRecordTable& table, std::int64_t target_resolution_minutes,
                         AggregationMethod method) {
    if (table.rows.empty()) throw DataError("empty table");
    if (target_resolution_minutes <= 0)
        throw DataError("target resolution must be positive");
    const std::int64_t source_step = infer_resolution(table);
    if (target_resolution_minutes % source_step != 0)
        throw DataError("target resolution " + std::to_string(target_resolution_minutes) +
                        " min is not a multiple of the source step " +
                        std::to_string(source_step) + " min");

    // Half-open windows [t, t+target) anchored at midnight.
    struct Acc {
        double total = 0.0;
        std::size_t count = 0;
    };
    std::map<std::pair<std::string, std::int64_t>, Acc> windows;
    for (const auto& r : table.rows) {
        std::int64_t w = r.ts_minutes - (r.ts_minutes % target_resolution_minutes);
        if (r.ts_minutes < 0 && r.ts_minutes % target_resolution_minutes != 0)
            w -= target_resolution_minutes;
        auto& acc = windows[{r.label, w}];
        if (r.value) {
            acc.total += *r.value;
            ++acc.count;
        }
    }

    RawRecordTable out;
    out.rows.reserve(windows.size());
    for (const auto& [key, acc] : windows) {
        RawRecord rec;
        rec.label = key.first;
        rec.ts_minutes = key.second;
        if (acc.count == 0)
            rec.value = std::nullopt;
        else if (method == AggregationMethod::sum)
            rec.value = acc.total;
        else
            rec.value = acc.total / static_cast<double>(acc.count);
        out.rows.push_back(std::move(rec));
    }
    return out;
}

TimeSeriesDataset interpolate_and_align(const RawRecordTable& table,
                                        const AlignOptions& options) {
    if (table.rows.empty()) throw DataError("empty table");
    const std::int64_t res = infer_resolution(table);

    std::int64_t lo = table.rows.front().ts_minutes, hi = lo;
    for (const auto& r : table.rows) {
        lo = std::min(lo, r.ts_minutes);
        hi = std::max(hi, r.ts_minutes);
    }
    const std::size_t d = static_cast<std::size_t>((hi - lo) / res) + 1;
    if (d < 2) throw DataError("grid has fewer than 2 points");

    // group rows per label (table is sorted by label, timestamp)
    std::vector<std::pair<std::string, std::vector<const RawRecord*>>> groups;
    for (const auto& r : table.rows) {
        if (groups.empty() || groups.back().first != r.label)
            groups.push_back({r.label, {}});
        groups.back().second.push_back(&r);
    }

    TimeSeriesDataset out;
    out.resolution_minutes = res;
    out.grid.resize(d);
    for (std::size_t j = 0; j < d; ++j) out.grid[j] = lo + static_cast<std::int64_t>(j) * res;

    std::vector<std::vector<double>> kept_rows;
    const double nan = std::numeric_limits<double>::quiet_NaN();
    for (const auto& [label, rows] : groups) {
        std::vector<double> series(d, nan);
        for (const RawRecord* r : rows) {
            if (r->value)
                series[static_cast<std::size_t>((r->ts_minutes - lo) / res)] = *r->value;
        }
        const std::size_t present =
            static_cast<std::size_t>(std::count_if(series.begin(), series.end(),
                                                   [](double v) { return !std::isnan(v); }));
        if (present < 2) {
            out.dropped.push_back({label, "insufficient data: fewer than 2 valid samples"});
            continue;
        }
        // longest run of consecutive missing steps
        std::size_t run = 0, longest = 0;
        for (double v : series) {
            run = std::isnan(v) ? run + 1 : 0;
            longest = std::max(longest, run);
        }
        if (longest > options.max_gap) {
            out.dropped.push_back({label, "gap of " + std::to_string(longest) +
                                              " steps exceeds max_gap " +
                                              std::to_string(options.max_gap)});
            continue;
        }
        // interior gaps: linear; leading/trailing gaps: nearest-value extension
        std::size_t first = 0;
        while (std::isnan(series[first])) ++first;
        std::size_t last = d - 1;
        while (std::isnan(series[last])) --last;
        for (std::size_t j = 0; j < first; ++j) series[j] = series[first];
        for (std::size_t j = last + 1; j < d; ++j) series[j] = series[last];
        std::size_t prev = first;
        for (std::size_t j = first + 1; j <= last; ++j) {
            if (std::isnan(series[j])) continue;
            for (std::size_t g = prev + 1; g < j; ++g) {
                const double t = static_cast<double>(g - prev) / static_cast<double>(j - prev);
                series[g] = series[prev] + t * (series[j] - series[prev]);
            }
            prev = j;
        }
        out.labels.push_back(label);
        kept_rows.push_back(std::move(series));
    }

    if (out.labels.size() < 2)
        throw DataError("fewer than 2 usable series after alignment (" +
                        std::to_string(out.dropped.size()) + " dropped)");

    out.values = Matrix(out.labels.size(), d);
    for (std::size_t i = 0; i < kept_rows.size(); ++i)
        std::copy(kept_rows[i].begin(), kept_rows[i].end(), out.values.row(i).begin());
    return out;
}

}  // namespace tsclust::dataset
