/*
 * Copyright 2026 The damp Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "damp/recovery.hpp"
#include "damp/state_evolution.hpp"
#include "json.hpp"

namespace damp {

inline constexpr int kExperimentSchemaVersion = 1;

struct RunSpec {
  std::string name;
  Algorithm algorithm = Algorithm::damp;
  OnsagerMode onsager = OnsagerMode::monte_carlo;
  nlohmann::json denoiser;
  std::size_t max_iters = 30;
  double stop_rel_change = 0.0;
  double oversmooth_factor = 2.0;
  McDivergenceOptions mc;
  bool predict = true;  // SE trace for amp / damp runs
};

struct SeSpec {
  std::size_t mc_trials = 0;
  SeMethod method = SeMethod::automatic;
};

struct SweepSpec {
  Vec delta;
  Vec sigma_w;
  std::vector<std::uint64_t> seeds;
  double budget = 1e4;  // max recovery runs (cells x seeds x runs)
};

struct ExperimentSpec {
  int schema_version = kExperimentSchemaVersion;
  std::string name;
  std::string base_dir;
  SignalClass signal;
  std::size_t n = 0;  // 0 for image_file
  double delta = 0.5;
  MatrixScaling scaling = MatrixScaling::column_normalized;
  double sigma_w = 0.0;
  std::uint64_t seed = 0;
  std::vector<RunSpec> runs;
  SeSpec se;
  std::vector<std::size_t> snapshot_iters;
  double psnr_peak = 0.0;
  std::optional<SweepSpec> sweep;
  nlohmann::json raw;  // as parsed, for the artifact copy
};

// Every problem is collected; a single ValidationError lists them all.
ExperimentSpec parse_experiment(const nlohmann::json& j, const std::string& base_dir = "");
ExperimentSpec load_experiment(const std::string& path);

// Files outside the output directory that a spec reads.
std::vector<std::string> experiment_inputs(const ExperimentSpec& spec);

struct RunResult {
  std::string name;
  RecoveryTrace trace;
  std::optional<SETrace> se;
  double final_mse = 0.0;
  double final_psnr = 0.0;
};

struct InstanceResult {
  Signal x;
  MeasurementMatrix a;
  Measurement meas;
  std::vector<RunResult> runs;
};

// One problem instance: signal, matrix and noise all derive from `seed`.
InstanceResult run_instance(const ExperimentSpec& spec, double delta, double sigma_w,
                            std::uint64_t seed, Exec exec = Exec::parallel);

std::string trace_jsonl(const RecoveryTrace& t);

// Writes the artifact directory and its manifest. Returns the relative
// paths of the written files.
std::vector<std::string> cmd_run(const ExperimentSpec& spec, const std::string& out_dir);

struct SweepRow {
  std::string run;
  double delta = 0.0;
  double sigma_w = 0.0;
  std::size_t seeds = 0;
  double mse_mean = 0.0, mse_std = 0.0;
  double psnr_mean = 0.0, psnr_std = 0.0;
};

struct SweepSummary {
  std::vector<SweepRow> rows;  // sorted by run, sigma_w, delta
  // (run, sigma_w) pairs whose mean MSE increases somewhere along delta
  std::vector<std::pair<std::string, double>> non_monotone;
};

// Throws BudgetError before doing any work when the grid is too large.
SweepSummary cmd_sweep(const ExperimentSpec& spec, const std::string& out_dir,
                       std::size_t workers = 0);

}  // namespace damp
