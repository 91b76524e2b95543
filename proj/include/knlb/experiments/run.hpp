#pragma once

#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "knlb/experiments/config.hpp"

namespace knlb::experiments {

struct ScalingRecord {
  std::size_t point, n, d, trial;
  std::string statistic;
  double value;
  double wall_time;  // seconds spent on the (point, trial) unit
};

struct RunOptions {
  std::size_t workers = 1;
  std::function<void(const std::string&)> progress;  // called from worker threads, serialized
};

struct RunResult {
  std::vector<ScalingRecord> records;  // ordered by (point, trial)
  nlohmann::json summary;
};

// Runs every (grid point, trial) unit, then summarizes per point and fits
// log(mean primary statistic) against log d. Failed units are listed in the
// summary and left out of the means.
RunResult run(const ExperimentConfig& config, const RunOptions& opts = {});

// Name of the statistic the summary fit uses for this kind.
std::string primary_statistic(ExperimentKind kind);

// CSV columns, frozen for schema 1: point,n,d,trial,statistic,value,wall_time
void write_records_csv(std::ostream& os, std::span<const ScalingRecord> records);

// Writes <dir>/records.csv and <dir>/summary.json, creating dir if needed.
void write_outputs(const RunResult& result, const std::string& dir);

}  // namespace knlb::experiments
