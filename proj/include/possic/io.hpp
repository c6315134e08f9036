#pragma once

// Dataset ingestion and emission: a small RFC-4180 CSV reader/writer, the
// embedded alligator food-choice data, and a loader for the UCI glass file.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <utility>
#include <vector>

#include "possic/core.hpp"

namespace possic::io {

// ============================================================================
// CSV primitives
// ============================================================================

using Row = std::vector<std::string>;

/// Reads all records. Lines beginning with '#' outside quotes are comments.
inline std::vector<Row> read_csv_records(std::istream& in) {
    std::vector<Row> rows;
    Row row;
    std::string field;
    bool in_quotes = false;
    bool field_started = false;
    bool at_line_start = true;
    std::size_t line = 1;
    char c;

    auto end_field = [&] {
        row.push_back(std::move(field));
        field.clear();
        field_started = false;
    };
    auto end_row = [&] {
        end_field();
        if (!(row.size() == 1 && row.front().empty())) rows.push_back(std::move(row));
        row.clear();
        at_line_start = true;
        ++line;
    };

    while (in.get(c)) {
        if (in_quotes) {
            if (c == '"') {
                if (in.peek() == '"') {
                    in.get(c);
                    field.push_back('"');
                } else {
                    in_quotes = false;
                }
            } else {
                if (c == '\n') ++line;
                field.push_back(c);
            }
            continue;
        }
        if (at_line_start && c == '#') {
            std::string skip;
            std::getline(in, skip);
            ++line;
            continue;
        }
        at_line_start = false;
        if (c == '"') {
            POSSIC_REQUIRE(!field_started, ErrorKind::bad_csv,
                           "line " + std::to_string(line) + ": quote inside unquoted field");
            in_quotes = true;
            field_started = true;
        } else if (c == ',') {
            end_field();
        } else if (c == '\r') {
            if (in.peek() == '\n') in.get(c);
            end_row();
        } else if (c == '\n') {
            end_row();
        } else {
            field.push_back(c);
            field_started = true;
        }
    }
    POSSIC_REQUIRE(!in_quotes, ErrorKind::bad_csv, "unterminated quoted field");
    if (!at_line_start) end_row();
    return rows;
}

inline std::string quote_field(std::string_view s) {
    if (s.find_first_of(",\"\r\n") == std::string_view::npos && (s.empty() || s.front() != '#')) {
        return std::string(s);
    }
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

/// Shortest decimal text that parses back to the same double.
inline std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

inline std::optional<double> parse_double(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
    if (s.empty()) return std::nullopt;
    if (s.front() == '+') s.remove_prefix(1);
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
    return v;
}

// ============================================================================
// Datasets
// ============================================================================

enum class Task { automatic, regression, classification };

namespace detail {

inline std::string trimmed(std::string s) {
    auto first = s.find_first_not_of(" \t");
    auto last = s.find_last_not_of(" \t");
    return first == std::string::npos ? std::string{} : s.substr(first, last - first + 1);
}

inline std::ifstream open_file(const std::filesystem::path& path) {
    POSSIC_REQUIRE(std::filesystem::exists(path), ErrorKind::file_not_found, "no such file: " + path.string());
    std::ifstream in(path, std::ios::binary);
    POSSIC_REQUIRE(in.good(), ErrorKind::file_not_found, "cannot open: " + path.string());
    return in;
}

/// Builds a dataset from feature rows and raw response strings.
inline Dataset assemble(std::vector<std::vector<double>> features, const std::vector<std::string>& responses,
                        Task task, const std::optional<std::vector<std::string>>& alphabet) {
    bool numeric = true;
    for (const auto& r : responses) numeric = numeric && parse_double(r).has_value();
    const bool regression = task == Task::regression || (task == Task::automatic && numeric && !alphabet);

    Dataset out;
    if (regression) {
        out.space = ResponseSpace::continuous();
        for (std::size_t i = 0; i < responses.size(); ++i) {
            auto v = parse_double(responses[i]);
            POSSIC_REQUIRE(v.has_value(), ErrorKind::bad_csv,
                           "row " + std::to_string(i + 1) + ": response '" + responses[i] + "' is not numeric");
            out.observations.push_back({std::move(features[i]), *v});
        }
        validate_dataset(out);
        return out;
    }

    std::vector<std::string> labels;
    if (alphabet) {
        labels = *alphabet;
    } else {
        for (const auto& r : responses) {
            if (std::find(labels.begin(), labels.end(), r) == labels.end()) labels.push_back(r);
        }
    }
    out.space = ResponseSpace::finite(labels);
    for (std::size_t i = 0; i < responses.size(); ++i) {
        auto id = out.space.find_label(responses[i]);
        POSSIC_REQUIRE(id.has_value(), ErrorKind::label_outside_space,
                       "row " + std::to_string(i + 1) + ": label '" + responses[i] + "' is not in the alphabet");
        out.observations.push_back({std::move(features[i]), *id});
    }
    validate_dataset(out);
    return out;
}

}  // namespace detail

struct CsvOptions {
    Task task = Task::automatic;
    /// Declared label alphabet; labels outside it are rejected.
    std::optional<std::vector<std::string>> alphabet;
};

/// Header row required. The response column is `y`; every other column is a numeric feature.
inline Dataset read_dataset_csv(std::istream& in, const CsvOptions& opts = {}) {
    auto records = read_csv_records(in);
    POSSIC_REQUIRE(!records.empty(), ErrorKind::bad_csv, "missing header row");
    Row header = records.front();
    for (auto& h : header) h = detail::trimmed(h);
    auto y_it = std::find(header.begin(), header.end(), "y");
    POSSIC_REQUIRE(y_it != header.end(), ErrorKind::bad_csv, "missing response column 'y'");
    const std::size_t y_col = static_cast<std::size_t>(y_it - header.begin());
    POSSIC_REQUIRE(header.size() >= 2, ErrorKind::bad_csv, "no feature columns");

    std::vector<std::vector<double>> features;
    std::vector<std::string> responses;
    for (std::size_t r = 1; r < records.size(); ++r) {
        const auto& rec = records[r];
        POSSIC_REQUIRE(rec.size() == header.size(), ErrorKind::bad_csv,
                       "record " + std::to_string(r) + " has " + std::to_string(rec.size()) + " fields, expected " +
                           std::to_string(header.size()));
        std::vector<double> x;
        for (std::size_t c = 0; c < rec.size(); ++c) {
            if (c == y_col) continue;
            auto v = parse_double(rec[c]);
            POSSIC_REQUIRE(v.has_value(), ErrorKind::bad_csv,
                           "record " + std::to_string(r) + ", column '" + header[c] + "': '" + rec[c] +
                               "' is not numeric");
            x.push_back(*v);
        }
        features.push_back(std::move(x));
        responses.push_back(detail::trimmed(rec[y_col]));
    }
    return detail::assemble(std::move(features), responses, opts.task, opts.alphabet);
}

inline Dataset read_dataset_csv(const std::filesystem::path& path, const CsvOptions& opts = {}) {
    auto in = detail::open_file(path);
    return read_dataset_csv(in, opts);
}

/// Writes header x1..xd,y and one record per observation.
inline void write_dataset_csv(std::ostream& out, const Dataset& d) {
    for (std::size_t c = 0; c < d.dimension(); ++c) out << 'x' << (c + 1) << ',';
    out << "y\n";
    for (const auto& o : d.observations) {
        for (double v : o.x) out << format_double(v) << ',';
        if (d.space.is_finite()) {
            out << quote_field(d.space.label_name(label_of(o.y)));
        } else {
            out << format_double(real_of(o.y));
        }
        out << '\n';
    }
}

// ============================================================================
// Embedded and known datasets
// ============================================================================

/// Lengths (m) and primary food choice of 39 male alligators, ordered by length.
inline Dataset alligator() {
    static constexpr std::pair<double, char> rows[] = {
        {1.30, 'I'}, {1.32, 'F'}, {1.32, 'F'}, {1.40, 'F'}, {1.42, 'I'}, {1.42, 'F'}, {1.47, 'I'}, {1.47, 'F'},
        {1.50, 'I'}, {1.52, 'I'}, {1.63, 'I'}, {1.65, 'O'}, {1.65, 'O'}, {1.65, 'I'}, {1.65, 'F'}, {1.68, 'F'},
        {1.70, 'I'}, {1.73, 'O'}, {1.78, 'F'}, {1.78, 'O'}, {1.80, 'F'}, {1.85, 'F'}, {1.93, 'I'}, {1.93, 'F'},
        {1.98, 'I'}, {2.03, 'F'}, {2.03, 'F'}, {2.31, 'F'}, {2.36, 'F'}, {2.46, 'F'}, {3.25, 'O'}, {3.28, 'O'},
        {3.33, 'F'}, {3.56, 'F'}, {3.58, 'F'}, {3.66, 'F'}, {3.68, 'O'}, {3.71, 'F'}, {3.89, 'F'},
    };
    Dataset d;
    d.space = ResponseSpace::finite({"I", "F", "O"});
    for (const auto& [len, food] : rows) {
        d.observations.push_back({{len}, *d.space.find_label(std::string(1, food))});
    }
    return d;
}

/// UCI glass identification file: 9 numeric attributes and a type label,
/// optionally preceded by an integer Id column (11 columns) and a header row.
inline Dataset read_uci_glass(std::istream& in) {
    auto records = read_csv_records(in);
    POSSIC_REQUIRE(!records.empty(), ErrorKind::bad_csv, "glass file is empty");
    std::size_t first = 0;
    if (!parse_double(records.front().front()).has_value()) first = 1;  // header row

    std::vector<std::vector<double>> features;
    std::vector<std::string> responses;
    for (std::size_t r = first; r < records.size(); ++r) {
        const auto& rec = records[r];
        POSSIC_REQUIRE(rec.size() == 10 || rec.size() == 11, ErrorKind::bad_csv,
                       "glass record " + std::to_string(r + 1) + " has " + std::to_string(rec.size()) +
                           " fields, expected 10 or 11");
        std::size_t start = 0;
        if (rec.size() == 11) {
            auto id = parse_double(rec.front());
            POSSIC_REQUIRE(id && *id == std::floor(*id), ErrorKind::bad_csv,
                           "glass record " + std::to_string(r + 1) + ": leading Id column is not an integer");
            start = 1;
        }
        std::vector<double> x;
        for (std::size_t c = start; c + 1 < rec.size(); ++c) {
            auto v = parse_double(rec[c]);
            POSSIC_REQUIRE(v.has_value(), ErrorKind::bad_csv,
                           "glass record " + std::to_string(r + 1) + ": non-numeric attribute '" + rec[c] + "'");
            x.push_back(*v);
        }
        features.push_back(std::move(x));
        responses.push_back(detail::trimmed(rec.back()));
    }
    return detail::assemble(std::move(features), responses, Task::classification, std::nullopt);
}

inline Dataset read_uci_glass(const std::filesystem::path& path) {
    auto in = detail::open_file(path);
    return read_uci_glass(in);
}

struct BuiltinInfo {
    std::string name;
    std::string description;
};

inline std::vector<BuiltinInfo> builtin_datasets() {
    return {
        {"alligator", "39 male alligators: length (m) -> primary food choice {I, F, O}; embedded"},
        {"glass", "UCI glass identification (214 rows, 9 oxide features, 6 types); needs --glass-path"},
    };
}

struct LoadOptions {
    CsvOptions csv;
    /// Local copy of the UCI glass file, required for the `glass` name.
    std::optional<std::filesystem::path> glass_path;
};

/// Resolves a builtin name (`alligator`, `glass`) or reads a CSV path.
inline Dataset load_dataset(const std::string& name_or_path, const LoadOptions& opts = {}) {
    if (name_or_path == "alligator") return alligator();
    if (name_or_path == "glass") {
        POSSIC_REQUIRE(opts.glass_path.has_value(), ErrorKind::file_not_found,
                       "the glass dataset is not bundled; pass the path of a local UCI glass file");
        return read_uci_glass(*opts.glass_path);
    }
    return read_dataset_csv(std::filesystem::path(name_or_path), opts.csv);
}

}  // namespace possic::io
