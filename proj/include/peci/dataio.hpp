#pragma once

// File formats: whitespace-separated two-column pair files, pairmeta-style
// ground-truth metadata, and CSV/JSONL result export. Parsing uses
// std::from_chars throughout, so it is locale-independent.

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "peci/core.hpp"
#include "peci/errors.hpp"

namespace peci {

struct PairRecord {
    std::string id;
    SamplePairs pairs;
    Direction truth = Direction::Undecided;
    double weight = 1.0;  // metadata weight; reported, never used in scoring
};

struct ResultRecord {
    std::string id;
    std::string method;  // base | majority | sigmoid | tanh
    std::size_t subsample_size = 0;
    std::size_t task_count = 0;
    std::string weighting;
    Direction decision = Direction::Undecided;
    double vote_sum = 0.0;
    bool correct = false;
    double elapsed_seconds = 0.0;

    bool operator==(const ResultRecord&) const = default;
};

enum class ResultFormat { Csv, Jsonl };

namespace detail {

inline bool parse_double(std::string_view token, double& out) {
    const auto res = std::from_chars(token.data(), token.data() + token.size(), out);
    return res.ec == std::errc() && res.ptr == token.data() + token.size();
}

inline std::vector<std::string_view> split_whitespace(std::string_view line) {
    std::vector<std::string_view> tokens;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
        std::size_t j = i;
        while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
        if (j > i) tokens.push_back(line.substr(i, j - i));
        i = j;
    }
    return tokens;
}

inline std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline Direction direction_from_string(std::string_view s) {
    if (s == "x->y") return Direction::XCausesY;
    if (s == "y->x") return Direction::YCausesX;
    return Direction::Undecided;
}

}  // namespace detail

struct PairFileWarnings {
    bool multi_column = false;    // rows had more than two numeric fields
    std::size_t column_count = 0; // widest row seen
};

/// Reads a two-column pair file: one observation per row, extra columns
/// ignored with a warning, blank lines skipped. Values must be finite.
inline SamplePairs load_pair_file(const std::filesystem::path& path,
                                  PairFileWarnings* warnings = nullptr) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open pair file: " + path.string());
    SamplePairs pairs;
    std::string line;
    std::size_t line_number = 0;
    while (std::getline(in, line)) {
        ++line_number;
        const auto tokens = detail::split_whitespace(line);
        if (tokens.empty()) continue;
        if (tokens.size() < 2)
            throw ParseError("pair file row needs at least 2 numeric fields", line_number);
        double x = 0.0, y = 0.0;
        if (!detail::parse_double(tokens[0], x) || !detail::parse_double(tokens[1], y))
            throw ParseError("pair file row has a non-numeric field", line_number);
        if (!std::isfinite(x) || !std::isfinite(y))
            throw ParseError("pair file row has a non-finite value", line_number);
        if (tokens.size() > 2 && warnings) {
            warnings->multi_column = true;
            warnings->column_count = std::max(warnings->column_count, tokens.size());
        }
        pairs.x.push_back(x);
        pairs.y.push_back(y);
    }
    if (pairs.size() < 3)
        throw TooFewRows("pair file " + path.string() + ": fewer than 3 rows");
    return pairs;
}

/// Writes a pair file in the format load_pair_file reads.
inline void write_pair_file(const std::filesystem::path& path, const SamplePairs& pairs) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write pair file: " + path.string());
    for (std::size_t i = 0; i < pairs.size(); ++i)
        out << detail::format_double(pairs.x[i]) << ' ' << detail::format_double(pairs.y[i])
            << '\n';
    if (!out) throw IoError("write failed: " + path.string());
}

struct MetadataEntry {
    Direction truth = Direction::Undecided;
    double weight = 1.0;
};

struct MetadataTable {
    std::map<std::string, MetadataEntry> entries;
    std::vector<std::string> excluded;  // multidimensional or unsupported layout
};

/// Parses pairmeta-style rows "id cause_first cause_last effect_first
/// effect_last weight". Rows whose cause or effect spans more than one
/// column (or uses columns other than 1 and 2) are excluded and reported.
inline MetadataTable load_metadata(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open metadata file: " + path.string());
    MetadataTable table;
    std::string line;
    std::size_t line_number = 0;
    while (std::getline(in, line)) {
        ++line_number;
        const auto tokens = detail::split_whitespace(line);
        if (tokens.empty()) continue;
        if (tokens.size() < 6)
            throw ParseError("metadata row needs 6 fields", line_number);
        double c_first = 0, c_last = 0, e_first = 0, e_last = 0, weight = 0;
        if (!detail::parse_double(tokens[1], c_first) || !detail::parse_double(tokens[2], c_last) ||
            !detail::parse_double(tokens[3], e_first) || !detail::parse_double(tokens[4], e_last) ||
            !detail::parse_double(tokens[5], weight))
            throw ParseError("metadata row has a non-numeric field", line_number);
        const std::string id(tokens[0]);
        const bool scalar = (c_first == c_last) && (e_first == e_last);
        MetadataEntry entry;
        entry.weight = weight;
        if (scalar && c_first == 1 && e_first == 2)
            entry.truth = Direction::XCausesY;
        else if (scalar && c_first == 2 && e_first == 1)
            entry.truth = Direction::YCausesX;
        else {
            table.excluded.push_back(id);
            continue;
        }
        table.entries[id] = entry;
    }
    return table;
}

inline const char* result_csv_header() {
    return "id,method,k,T,weighting,decision,vote_sum,correct,elapsed_seconds";
}

/// Writes result records as CSV (fixed header, one row per record) or as
/// JSON lines (one object per record, fixed field order).
inline void write_results(const std::filesystem::path& path,
                          std::span<const ResultRecord> records, ResultFormat format) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write results file: " + path.string());
    if (format == ResultFormat::Csv) {
        out << result_csv_header() << '\n';
        for (const auto& r : records) {
            out << r.id << ',' << r.method << ',' << r.subsample_size << ',' << r.task_count
                << ',' << r.weighting << ',' << to_string(r.decision) << ','
                << detail::format_double(r.vote_sum) << ',' << (r.correct ? "true" : "false")
                << ',' << detail::format_double(r.elapsed_seconds) << '\n';
        }
    } else {
        for (const auto& r : records) {
            nlohmann::ordered_json obj;
            obj["id"] = r.id;
            obj["method"] = r.method;
            obj["k"] = r.subsample_size;
            obj["T"] = r.task_count;
            obj["weighting"] = r.weighting;
            obj["decision"] = to_string(r.decision);
            obj["vote_sum"] = r.vote_sum;
            obj["correct"] = r.correct;
            obj["elapsed_seconds"] = r.elapsed_seconds;
            out << obj.dump() << '\n';
        }
    }
    if (!out) throw IoError("write failed: " + path.string());
}

/// Reads back a JSONL results file written by write_results.
inline std::vector<ResultRecord> read_results_jsonl(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open results file: " + path.string());
    std::vector<ResultRecord> records;
    std::string line;
    std::size_t line_number = 0;
    while (std::getline(in, line)) {
        ++line_number;
        if (line.empty()) continue;
        nlohmann::json obj = nlohmann::json::parse(line, nullptr, false);
        if (obj.is_discarded()) throw ParseError("invalid JSON line", line_number);
        ResultRecord r;
        r.id = obj.at("id").get<std::string>();
        r.method = obj.at("method").get<std::string>();
        r.subsample_size = obj.at("k").get<std::size_t>();
        r.task_count = obj.at("T").get<std::size_t>();
        r.weighting = obj.at("weighting").get<std::string>();
        r.decision = detail::direction_from_string(obj.at("decision").get<std::string>());
        r.vote_sum = obj.at("vote_sum").get<double>();
        r.correct = obj.at("correct").get<bool>();
        r.elapsed_seconds = obj.at("elapsed_seconds").get<double>();
        records.push_back(std::move(r));
    }
    return records;
}

}  // namespace peci
