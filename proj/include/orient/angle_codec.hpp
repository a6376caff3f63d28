// Copyright (C) 2026 The orient authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>
#include <vector>

#include "orient/errors.hpp"

namespace orient {

// Label window shapes. Pulse degenerates to a one-hot label regardless of
// the configured radius.
enum class CslWindow { kGaussian, kTriangle, kRectangle, kPulse };

// Circular smooth label configuration. The angle range [0, 180) is split
// into num_classes bins; radius is measured in bins (one bin is one degree
// at the default resolution).
struct CslConfig {
  int num_classes = 180;
  CslWindow window = CslWindow::kGaussian;
  double radius = 6.0;
};

inline void validate(const CslConfig& cfg) {
  if (cfg.num_classes < 2) {
    throw ConfigError("csl num_classes must be at least 2");
  }
  if (!std::isfinite(cfg.radius) || cfg.radius < 0.0 ||
      cfg.radius >= cfg.num_classes / 2.0) {
    throw ConfigError("csl radius must satisfy 0 <= radius < num_classes/2");
  }
}

inline double effective_radius(const CslConfig& cfg) {
  return cfg.window == CslWindow::kPulse ? 0.0 : cfg.radius;
}

// Circular smooth label: value 1 at the true angle class, window-shaped
// falloff within the radius, exact zeros beyond it.
struct CslLabel {
  std::vector<double> values;
};

// Unnormalized per-class scores, the loss input.
struct AngleLogits {
  std::vector<double> values;
};

// Distance between two angle classes on the circular label, in bins.
inline int angular_distance(int a, int b, int n) {
  const int d = std::abs(a - b);
  return std::min(d, n - d);
}

namespace detail {

inline double window_value(CslWindow window, int d, double radius) {
  if (d == 0) return 1.0;
  if (static_cast<double>(d) > radius) return 0.0;
  switch (window) {
    case CslWindow::kGaussian: {
      const double sigma = radius / 3.0;
      return std::exp(-static_cast<double>(d) * d / (2.0 * sigma * sigma));
    }
    case CslWindow::kTriangle:
      return 1.0 - static_cast<double>(d) / (radius + 1.0);
    case CslWindow::kRectangle:
      return 1.0;
    case CslWindow::kPulse:
      return 0.0;
  }
  return 0.0;
}

}  // namespace detail

inline CslLabel encode_csl(double theta_deg, const CslConfig& cfg) {
  validate(cfg);
  if (!std::isfinite(theta_deg)) {
    throw ConfigError("csl encode requires a finite angle");
  }
  const int n = cfg.num_classes;
  double t = std::fmod(theta_deg, 180.0);
  if (t < 0.0) t += 180.0;
  const int k_star =
      static_cast<int>(std::llround(t * n / 180.0)) % n;
  const double radius = effective_radius(cfg);
  CslLabel label;
  label.values.assign(static_cast<std::size_t>(n), 0.0);
  for (int k = 0; k < n; ++k) {
    const int d = angular_distance(k, k_star, n);
    label.values[static_cast<std::size_t>(k)] =
        detail::window_value(cfg.window, d, radius);
  }
  return label;
}

// Argmax decode, ties toward the smaller class index.
inline double decode_angle(const AngleLogits& logits, const CslConfig& cfg) {
  validate(cfg);
  if (logits.values.size() != static_cast<std::size_t>(cfg.num_classes)) {
    throw ShapeError("logit length does not match num_classes");
  }
  const auto it = std::max_element(logits.values.begin(), logits.values.end());
  const auto idx = static_cast<double>(it - logits.values.begin());
  return idx * (180.0 / cfg.num_classes);
}

struct CslLoss {
  double loss = 0.0;
  std::vector<double> grad;
};

// Softmax cross-entropy against the label normalized to a distribution.
// The gradient is softmax(logits) - normalized_target, which sums to zero.
inline CslLoss csl_loss(const AngleLogits& logits, const CslLabel& target) {
  const std::size_t n = logits.values.size();
  if (n == 0 || target.values.size() != n) {
    throw ShapeError("logits and target must have equal nonzero length");
  }
  double target_mass = 0.0;
  for (double t : target.values) target_mass += t;
  if (!(target_mass > 0.0)) {
    throw ShapeError("target label carries no mass");
  }

  const double max_logit =
      *std::max_element(logits.values.begin(), logits.values.end());
  double z = 0.0;
  for (double l : logits.values) z += std::exp(l - max_logit);
  const double log_z = std::log(z);

  CslLoss out;
  out.grad.resize(n);
  double loss = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double t_hat = target.values[k] / target_mass;
    const double log_p = logits.values[k] - max_logit - log_z;
    loss -= t_hat * log_p;
    out.grad[k] = std::exp(log_p) - t_hat;
  }
  out.loss = std::max(loss, 0.0);
  return out;
}

inline std::string to_string(CslWindow w) {
  switch (w) {
    case CslWindow::kGaussian: return "gaussian";
    case CslWindow::kTriangle: return "triangle";
    case CslWindow::kRectangle: return "rectangle";
    case CslWindow::kPulse: return "pulse";
  }
  return "gaussian";
}

inline CslWindow csl_window_from_string(const std::string& s) {
  if (s == "gaussian") return CslWindow::kGaussian;
  if (s == "triangle") return CslWindow::kTriangle;
  if (s == "rectangle") return CslWindow::kRectangle;
  if (s == "pulse") return CslWindow::kPulse;
  throw ConfigError("unknown csl window: " + s);
}

}  // namespace orient
