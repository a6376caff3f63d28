// Copyright (C) 2026 The orient authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "orient/errors.hpp"
#include "orient/geometry.hpp"

namespace orient {

// One DOTA annotation line: four perimeter-ordered vertices, a category
// token, and a 0/1 difficulty flag.
struct AnnotationRecord {
  VertexQuad quad;
  std::string category;
  bool difficult = false;
};

// One prediction line: category, confidence in [0, 1], four vertices.
struct PredictionRecord {
  VertexQuad quad;
  std::string category;
  double score = 0.0;
};

struct LineDiagnostic {
  int line = 0;  // 1-based
  std::string reason;
};

struct AnnotationParse {
  std::vector<AnnotationRecord> records;
  std::vector<LineDiagnostic> diagnostics;
};

struct PredictionParse {
  std::vector<PredictionRecord> records;
  std::vector<LineDiagnostic> diagnostics;
};

namespace detail {

inline std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
    if (i > start) fields.push_back(line.substr(start, i - start));
  }
  return fields;
}

inline bool parse_double(std::string_view token, double& out) {
  const char* begin = token.data();
  const char* end = begin + token.size();
  const auto [ptr, ec] = std::from_chars(begin, end, out);
  return ec == std::errc{} && ptr == end && std::isfinite(out);
}

inline bool is_metadata_line(std::string_view line) {
  return line.starts_with("imagesource:") || line.starts_with("gsd:");
}

inline std::string_view strip_cr(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  return line;
}

inline bool parse_quad(std::span<const std::string_view> tokens, VertexQuad& quad,
                       std::string& reason) {
  std::array<Vec2, 4> pts{};
  for (int i = 0; i < 4; ++i) {
    if (!parse_double(tokens[2 * i], pts[i].x) ||
        !parse_double(tokens[2 * i + 1], pts[i].y)) {
      reason = "unparseable coordinate";
      return false;
    }
  }
  try {
    quad = make_vertex_quad(pts);
  } catch (const InvalidPolygonError& e) {
    reason = e.what();
    return false;
  }
  return true;
}

template <typename Result>
inline void finish_parse(const Result& result, int data_lines) {
  if (data_lines > 0 && result.records.empty()) {
    std::string msg = "no parseable records";
    if (!result.diagnostics.empty()) {
      msg += " (line " + std::to_string(result.diagnostics.front().line) +
             ": " + result.diagnostics.front().reason + ")";
    }
    throw FormatError(msg);
  }
}

}  // namespace detail

// Parses `x1 y1 x2 y2 x3 y3 x4 y4 category difficult` lines. Metadata lines
// beginning `imagesource:` or `gsd:` and blank lines are skipped. Malformed
// lines become diagnostics; only an entirely unparseable nonempty input is
// an error.
inline AnnotationParse parse_annotation_file(std::istream& in) {
  if (!in) throw IoError("annotation stream is not readable");
  AnnotationParse result;
  std::string raw;
  int line_no = 0;
  int data_lines = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string_view line = detail::strip_cr(raw);
    if (line.empty() || detail::is_metadata_line(line)) continue;
    const std::vector<std::string_view> fields = detail::split_fields(line);
    if (fields.empty()) continue;
    ++data_lines;
    if (fields.size() != 10) {
      result.diagnostics.push_back(
          {line_no, "expected 10 fields, got " + std::to_string(fields.size())});
      continue;
    }
    AnnotationRecord rec;
    std::string reason;
    if (!detail::parse_quad(std::span(fields).subspan(0, 8), rec.quad, reason)) {
      result.diagnostics.push_back({line_no, reason});
      continue;
    }
    rec.category = std::string(fields[8]);
    if (fields[9] == "0") {
      rec.difficult = false;
    } else if (fields[9] == "1") {
      rec.difficult = true;
    } else {
      result.diagnostics.push_back({line_no, "difficult flag must be 0 or 1"});
      continue;
    }
    result.records.push_back(std::move(rec));
  }
  if (in.bad()) throw IoError("annotation stream read failure");
  detail::finish_parse(result, data_lines);
  return result;
}

// Parses `category score x1 y1 x2 y2 x3 y3 x4 y4` lines with the same
// diagnostic policy as the annotation parser.
inline PredictionParse parse_prediction_file(std::istream& in) {
  if (!in) throw IoError("prediction stream is not readable");
  PredictionParse result;
  std::string raw;
  int line_no = 0;
  int data_lines = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string_view line = detail::strip_cr(raw);
    if (line.empty() || detail::is_metadata_line(line)) continue;
    const std::vector<std::string_view> fields = detail::split_fields(line);
    if (fields.empty()) continue;
    ++data_lines;
    if (fields.size() != 10) {
      result.diagnostics.push_back(
          {line_no, "expected 10 fields, got " + std::to_string(fields.size())});
      continue;
    }
    PredictionRecord rec;
    rec.category = std::string(fields[0]);
    if (!detail::parse_double(fields[1], rec.score) || rec.score < 0.0 ||
        rec.score > 1.0) {
      result.diagnostics.push_back({line_no, "score must be in [0, 1]"});
      continue;
    }
    std::string reason;
    if (!detail::parse_quad(std::span(fields).subspan(2, 8), rec.quad, reason)) {
      result.diagnostics.push_back({line_no, reason});
      continue;
    }
    result.records.push_back(std::move(rec));
  }
  if (in.bad()) throw IoError("prediction stream read failure");
  detail::finish_parse(result, data_lines);
  return result;
}

inline AnnotationParse parse_annotation_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  return parse_annotation_file(in);
}

inline PredictionParse parse_prediction_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  return parse_prediction_file(in);
}

// Shortest decimal representation that round-trips the exact double.
inline std::string format_coordinate(double v) {
  if (v == 0.0) return "0";  // normalizes -0
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

inline void write_annotation_file(std::ostream& out,
                                  std::span<const AnnotationRecord> records) {
  for (const AnnotationRecord& rec : records) {
    for (const Vec2& p : rec.quad.v) {
      out << format_coordinate(p.x) << ' ' << format_coordinate(p.y) << ' ';
    }
    out << rec.category << ' ' << (rec.difficult ? '1' : '0') << '\n';
  }
}

inline void write_prediction_file(std::ostream& out,
                                  std::span<const PredictionRecord> records) {
  for (const PredictionRecord& rec : records) {
    out << rec.category << ' ' << format_coordinate(rec.score);
    for (const Vec2& p : rec.quad.v) {
      out << ' ' << format_coordinate(p.x) << ' ' << format_coordinate(p.y);
    }
    out << '\n';
  }
}

inline std::string write_annotation_string(std::span<const AnnotationRecord> r) {
  std::ostringstream out;
  write_annotation_file(out, r);
  return out.str();
}

inline std::string write_prediction_string(std::span<const PredictionRecord> r) {
  std::ostringstream out;
  write_prediction_file(out, r);
  return out.str();
}

struct CorpusFinding {
  std::filesystem::path file;
  int line = 0;  // 0 when the finding is file-level
  std::string kind;
  std::string message;
};

struct CorpusReport {
  int n_files = 0;
  int n_records = 0;
  std::vector<CorpusFinding> findings;
};

// Scans a directory of per-image annotation files (*.txt). Reports parse
// diagnostics, duplicate image ids (case-insensitive stem collisions), and
// categories missing from `known_categories` when that list is nonempty.
inline CorpusReport validate_corpus(
    const std::filesystem::path& dir,
    const std::vector<std::string>& known_categories = {}) {
  if (!std::filesystem::is_directory(dir)) {
    throw IoError("not a directory: " + dir.string());
  }
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".txt") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());

  CorpusReport report;
  std::map<std::string, std::filesystem::path> stems;
  for (const std::filesystem::path& file : files) {
    ++report.n_files;
    std::string stem = file.stem().string();
    std::transform(stem.begin(), stem.end(), stem.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    const auto [it, inserted] = stems.emplace(stem, file);
    if (!inserted) {
      report.findings.push_back({file, 0, "duplicate-id",
                                 "image id collides with " +
                                     it->second.filename().string()});
    }
    try {
      const AnnotationParse parsed = parse_annotation_file(file);
      report.n_records += static_cast<int>(parsed.records.size());
      for (const LineDiagnostic& d : parsed.diagnostics) {
        report.findings.push_back({file, d.line, "bad-line", d.reason});
      }
      if (!known_categories.empty()) {
        int line = 0;
        for (const AnnotationRecord& rec : parsed.records) {
          ++line;
          if (std::find(known_categories.begin(), known_categories.end(),
                        rec.category) == known_categories.end()) {
            report.findings.push_back(
                {file, 0, "unknown-category", rec.category});
          }
        }
      }
    } catch (const FormatError& e) {
      report.findings.push_back({file, 0, "format", e.what()});
    } catch (const IoError& e) {
      report.findings.push_back({file, 0, "io", e.what()});
    }
  }
  return report;
}

}  // namespace orient
