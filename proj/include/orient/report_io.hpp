// Copyright (C) 2026 The orient authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cstdio>
#include <map>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "orient/evaluator.hpp"
#include "orient/synthgen.hpp"

namespace orient {

inline ApMode ap_mode_from_string(const std::string& s) {
  if (s == "all_points" || s == "all") return ApMode::kAllPoints;
  if (s == "eleven_point" || s == "11pt") return ApMode::kElevenPoint;
  throw ConfigError("unknown ap mode: " + s);
}

inline nlohmann::json report_to_json(const EvalReport& report) {
  nlohmann::json j;
  j["config"] = {{"iou_threshold", report.config.iou_threshold},
                 {"ap_mode", to_string(report.config.ap_mode)}};
  j["n_images"] = report.n_images;
  j["n_gt"] = report.n_gt;
  j["map"] = report.map;
  nlohmann::json per_class = nlohmann::json::object();
  for (const auto& [name, result] : report.per_class) {
    nlohmann::json curve = nlohmann::json::array();
    for (const PrPoint& p : result.curve.points) {
      curve.push_back({p.recall, p.precision});
    }
    per_class[name] = {{"ap", result.ap},
                       {"n_gt", result.n_gt},
                       {"n_detections", result.n_detections},
                       {"pr_curve", std::move(curve)}};
  }
  j["per_class"] = std::move(per_class);
  j["undefined_classes"] = report.undefined_classes;
  if (!report.conditions.empty()) {
    nlohmann::json conditions = nlohmann::json::object();
    for (const auto& [tag, sub] : report.conditions) {
      conditions[tag] = report_to_json(sub);
    }
    j["conditions"] = std::move(conditions);
  }
  return j;
}

namespace detail {

inline std::string percent(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v * 100.0);
  return buf;
}

inline std::string pad(const std::string& s, std::size_t width) {
  return s.size() >= width ? s : s + std::string(width - s.size(), ' ');
}

}  // namespace detail

// Per-class results as an aligned text table, mAP as a percentage.
inline std::string render_report_text(const EvalReport& report) {
  std::string out;
  out += "mAP " + detail::percent(report.map) + "  (iou_threshold " +
         detail::percent(report.config.iou_threshold) + "%, ap_mode " +
         to_string(report.config.ap_mode) + ", images " +
         std::to_string(report.n_images) + ", gt " + std::to_string(report.n_gt) +
         ")\n";
  std::size_t name_width = 5;
  for (const auto& [name, result] : report.per_class) {
    name_width = std::max(name_width, name.size());
  }
  out += detail::pad("class", name_width + 2) + detail::pad("ap", 8) +
         detail::pad("gt", 6) + "det\n";
  for (const auto& [name, result] : report.per_class) {
    out += detail::pad(name, name_width + 2) +
           detail::pad(detail::percent(result.ap), 8) +
           detail::pad(std::to_string(result.n_gt), 6) +
           std::to_string(result.n_detections) + "\n";
  }
  for (const std::string& name : report.undefined_classes) {
    out += detail::pad(name, name_width + 2) + "(no ground truth)\n";
  }
  return out;
}

// Condition comparison table. Conditions of one kind line up as columns of
// a single mAP row (the shape of a distance or rain ablation); mixed kinds
// become one row per condition.
inline std::string render_comparison_table(
    const std::map<std::string, EvalReport>& by_condition,
    std::span<const ConditionSpec> conditions = {}) {
  bool single_kind = !conditions.empty();
  for (std::size_t i = 1; i < conditions.size(); ++i) {
    if (conditions[i].kind != conditions[0].kind) single_kind = false;
  }

  std::string out;
  if (single_kind && by_condition.size() > 1) {
    // Columns in the caller's condition order.
    std::vector<std::string> tags;
    for (const ConditionSpec& cond : conditions) {
      tags.push_back(condition_tag(cond));
    }
    std::size_t width = 8;
    for (const std::string& tag : tags) width = std::max(width, tag.size() + 2);
    out += detail::pad("", 6);
    for (const std::string& tag : tags) out += detail::pad(tag, width);
    out += "\n" + detail::pad("mAP", 6);
    for (const std::string& tag : tags) {
      out += detail::pad(detail::percent(by_condition.at(tag).map), width);
    }
    out += "\n";
    return out;
  }

  std::size_t width = 10;
  for (const auto& [tag, report] : by_condition) {
    width = std::max(width, tag.size() + 2);
  }
  out += detail::pad("condition", width) + detail::pad("mAP", 8) +
         detail::pad("images", 8) + "gt\n";
  for (const auto& [tag, report] : by_condition) {
    out += detail::pad(tag, width) + detail::pad(detail::percent(report.map), 8) +
           detail::pad(std::to_string(report.n_images), 8) +
           std::to_string(report.n_gt) + "\n";
  }
  return out;
}

}  // namespace orient
