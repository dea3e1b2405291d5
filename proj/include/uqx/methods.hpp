// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "uqx/audit.hpp"
#include "uqx/config.hpp"
#include "uqx/dataset.hpp"
#include "uqx/model.hpp"

namespace uqx {

struct BuiltMethod {
  SamplerFactory factory;
  std::string label;
  bool supports_hpd = false;
};

/// Materialises the configured dataset (directory load or synthetic draw).
Dataset build_dataset(const RunConfig& cfg);

/// Observation model from config; a BSNR setting derives sigma from the
/// dataset's average blurred-pixel variance.
ObservationModel build_model(const RunConfig& cfg, const Dataset& ds);

/// Builds the configured sampler as an audit factory. Method parameter
/// violations are collected into one ConfigError.
BuiltMethod build_method(const RunConfig& cfg, const ObservationModel& m, int height,
                         int width);

}  // namespace uqx
