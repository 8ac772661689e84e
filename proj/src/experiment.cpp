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

#include "damp/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <map>
#include <mutex>
#include <set>
#include <thread>

#include "damp/denoiser_config.hpp"
#include "damp/diagnostics.hpp"
#include "damp/errors.hpp"
#include "damp/io.hpp"
#include "damp/manifest.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace damp {

namespace {

// Collects every problem in a spec before failing.
class Checker {
 public:
  void add(std::string msg) { errors_.push_back(std::move(msg)); }

  void keys(const json& j, const std::string& where, const std::set<std::string>& allowed) {
    if (!j.is_object()) {
      add(where + ": expected an object");
      return;
    }
    for (auto it = j.begin(); it != j.end(); ++it)
      if (!allowed.count(it.key())) add(where + "." + it.key() + ": unknown key");
  }

  template <class T>
  T get(const json& j, const std::string& key, const std::string& where, T fallback,
        bool required = false) {
    if (!j.is_object() || !j.contains(key)) {
      if (required) add(where + "." + key + ": required");
      return fallback;
    }
    try {
      return j.at(key).get<T>();
    } catch (const std::exception&) {
      add(where + "." + key + ": wrong type");
      return fallback;
    }
  }

  void finish() const {
    if (errors_.empty()) return;
    std::string msg = "invalid experiment spec (" + std::to_string(errors_.size()) + " problem" +
                      (errors_.size() > 1 ? "s" : "") + "):";
    for (const auto& e : errors_) msg += "\n  " + e;
    throw ValidationError(msg);
  }

 private:
  std::vector<std::string> errors_;
};

MatrixScaling parse_scaling(const std::string& s) {
  if (s == "column_normalized") return MatrixScaling::column_normalized;
  if (s == "raw") return MatrixScaling::raw;
  if (s == "inv_sqrt_m") return MatrixScaling::inv_sqrt_m;
  throw ParameterError("unknown matrix scaling '" + s + "'");
}

SeMethod parse_se_method(const std::string& s) {
  if (s == "monte_carlo") return SeMethod::monte_carlo;
  if (s == "exact") return SeMethod::exact;
  if (s == "automatic") return SeMethod::automatic;
  throw ParameterError("unknown SE method '" + s + "'");
}

bool is_image(const ExperimentSpec& s) { return s.signal.kind == SignalKind::image_file; }

DenoiserHandle make_denoiser(const ExperimentSpec& spec, const json& d) {
  if (d.is_string()) return denoiser_preset(d.get<std::string>(), is_image(spec));
  return denoiser_from_json(d, spec.base_dir);
}

std::string resolve_path(const std::string& base, const std::string& p) {
  if (p.empty() || fs::path(p).is_absolute() || base.empty()) return p;
  return (fs::path(base) / p).string();
}

json num_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

void collect_tables(const json& d, const std::string& base, std::vector<std::string>& out) {
  if (!d.is_object()) return;
  if (d.contains("table") && d["table"].is_string())
    out.push_back(resolve_path(base, d["table"].get<std::string>()));
  if (d.contains("inner")) collect_tables(d["inner"], base, out);
}

std::size_t measurements_for(double delta, std::size_t n) {
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(delta * static_cast<double>(n))));
}

std::string csv_row(std::initializer_list<double> vals) {
  std::string s;
  for (double v : vals) {
    if (!s.empty()) s += ',';
    s += std::isfinite(v) ? format_double(v) : (std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf"));
  }
  return s + "\n";
}

}  // namespace

ExperimentSpec parse_experiment(const json& j, const std::string& base_dir) {
  Checker c;
  ExperimentSpec s;
  s.base_dir = base_dir;
  s.raw = j;
  if (!j.is_object()) throw ValidationError("experiment spec must be a JSON object");
  c.keys(j, "spec",
         {"schema_version", "name", "signal", "n", "delta", "matrix_scaling", "sigma_w", "seed",
          "runs", "se", "snapshot_iters", "psnr_peak", "sweep"});

  s.schema_version = c.get<int>(j, "schema_version", "spec", 0, true);
  if (j.contains("schema_version") && s.schema_version != kExperimentSchemaVersion)
    c.add("spec.schema_version: unsupported version " + std::to_string(s.schema_version));
  s.name = c.get<std::string>(j, "name", "spec", "experiment");
  s.n = c.get<std::size_t>(j, "n", "spec", 0);
  s.delta = c.get<double>(j, "delta", "spec", 0.5);
  if (!(s.delta > 0.0 && s.delta <= 1.0)) c.add("spec.delta: must be in (0, 1]");
  try {
    s.scaling = parse_scaling(c.get<std::string>(j, "matrix_scaling", "spec", "column_normalized"));
  } catch (const Error& e) {
    c.add(std::string("spec.matrix_scaling: ") + e.what());
  }
  s.sigma_w = c.get<double>(j, "sigma_w", "spec", 0.0);
  if (!(s.sigma_w >= 0.0)) c.add("spec.sigma_w: must be >= 0");
  s.seed = c.get<std::uint64_t>(j, "seed", "spec", 0, true);
  s.psnr_peak = c.get<double>(j, "psnr_peak", "spec", 0.0);
  s.snapshot_iters = c.get<std::vector<std::size_t>>(j, "snapshot_iters", "spec", {});

  if (!j.contains("signal")) {
    c.add("spec.signal: required");
  } else {
    const json& sg = j["signal"];
    c.keys(sg, "signal", {"kind", "k", "rho", "p", "segments", "path"});
    try {
      s.signal.kind = parse_signal_kind(c.get<std::string>(sg, "kind", "signal", "", true));
    } catch (const Error& e) {
      c.add(std::string("signal.kind: ") + e.what());
    }
    s.signal.k = c.get<std::size_t>(sg, "k", "signal", 0);
    if (sg.is_object() && sg.contains("rho")) {
      double rho = c.get<double>(sg, "rho", "signal", 0.0);
      if (!(rho >= 0.0 && rho <= 1.0)) c.add("signal.rho: must be in [0, 1]");
      if (sg.contains("k")) c.add("signal: give k or rho, not both");
      s.signal.k = static_cast<std::size_t>(std::llround(rho * static_cast<double>(s.n)));
    }
    s.signal.p = c.get<double>(sg, "p", "signal", 1.0);
    s.signal.segments = c.get<std::size_t>(sg, "segments", "signal", 1);
    s.signal.path = resolve_path(base_dir, c.get<std::string>(sg, "path", "signal", ""));
    if (s.signal.kind == SignalKind::image_file) {
      if (s.signal.path.empty()) c.add("signal.path: required for image_file");
      else if (!fs::exists(s.signal.path)) c.add("signal.path: '" + s.signal.path + "' not found");
    } else if (s.n == 0) {
      c.add("spec.n: required for generated signals");
    }
    if ((s.signal.kind == SignalKind::k_sparse_binary ||
         s.signal.kind == SignalKind::k_sparse_gaussian) && s.n && s.signal.k > s.n)
      c.add("signal.k: exceeds n");
  }

  if (!j.contains("runs") || !j["runs"].is_array() || j["runs"].empty()) {
    c.add("spec.runs: required non-empty array");
  } else {
    std::set<std::string> names;
    for (std::size_t i = 0; i < j["runs"].size(); ++i) {
      const json& r = j["runs"][i];
      const std::string where = "runs[" + std::to_string(i) + "]";
      c.keys(r, where,
             {"name", "algorithm", "onsager", "denoiser", "max_iters", "stop_rel_change",
              "oversmooth_factor", "mc", "predict"});
      RunSpec rs;
      rs.name = c.get<std::string>(r, "name", where, "", true);
      if (!rs.name.empty() && !names.insert(rs.name).second) c.add(where + ".name: duplicate");
      if (rs.name.find_first_of("/\\ ") != std::string::npos)
        c.add(where + ".name: must not contain spaces or slashes");
      try {
        rs.algorithm = parse_algorithm(c.get<std::string>(r, "algorithm", where, "damp"));
      } catch (const Error& e) {
        c.add(where + ".algorithm: " + e.what());
      }
      const bool plain = rs.algorithm == Algorithm::ist || rs.algorithm == Algorithm::dit;
      try {
        rs.onsager = parse_onsager(
            c.get<std::string>(r, "onsager", where, plain ? "none" : "monte_carlo"));
      } catch (const Error& e) {
        c.add(where + ".onsager: " + e.what());
      }
      rs.denoiser = r.is_object() && r.contains("denoiser") ? r["denoiser"] : json();
      if (rs.denoiser.is_null()) c.add(where + ".denoiser: required");
      rs.max_iters = c.get<std::size_t>(r, "max_iters", where, 30);
      rs.stop_rel_change = c.get<double>(r, "stop_rel_change", where, 0.0);
      rs.oversmooth_factor = c.get<double>(r, "oversmooth_factor", where, 2.0);
      rs.predict = c.get<bool>(r, "predict", where, !plain);
      if (r.is_object() && r.contains("mc")) {
        c.keys(r["mc"], where + ".mc", {"epsilon", "samples", "epsilon_sigma_cap"});
        rs.mc.epsilon = c.get<double>(r["mc"], "epsilon", where + ".mc", 0.0);
        rs.mc.samples = c.get<std::size_t>(r["mc"], "samples", where + ".mc", 0);
        rs.mc.epsilon_sigma_cap = c.get<double>(r["mc"], "epsilon_sigma_cap", where + ".mc", 0.0);
      }
      if (!rs.denoiser.is_null()) {
        try {
          RecoveryConfig cfg;
          cfg.algorithm = rs.algorithm;
          cfg.onsager = rs.onsager;
          cfg.denoiser = make_denoiser(s, rs.denoiser);
          cfg.max_iters = rs.max_iters;
          cfg.stop_rel_change = rs.stop_rel_change;
          cfg.oversmooth_factor = rs.oversmooth_factor;
          cfg.mc = rs.mc;
          cfg.validate();
        } catch (const Error& e) {
          c.add(where + ": " + e.what());
        }
      }
      s.runs.push_back(std::move(rs));
    }
  }

  if (j.contains("se")) {
    c.keys(j["se"], "se", {"mc_trials", "method"});
    s.se.mc_trials = c.get<std::size_t>(j["se"], "mc_trials", "se", 0);
    try {
      s.se.method = parse_se_method(c.get<std::string>(j["se"], "method", "se", "automatic"));
    } catch (const Error& e) {
      c.add(std::string("se.method: ") + e.what());
    }
  }

  if (j.contains("sweep")) {
    const json& sw = j["sweep"];
    c.keys(sw, "sweep", {"delta", "sigma_w", "seeds", "budget"});
    SweepSpec sp;
    sp.delta = c.get<Vec>(sw, "delta", "sweep", {});
    sp.sigma_w = c.get<Vec>(sw, "sigma_w", "sweep", {});
    sp.seeds = c.get<std::vector<std::uint64_t>>(sw, "seeds", "sweep", {});
    sp.budget = c.get<double>(sw, "budget", "sweep", 1e4);
    // An empty axis falls back to the single spec value.
    if (sp.delta.empty()) sp.delta = {s.delta};
    if (sp.sigma_w.empty()) sp.sigma_w = {s.sigma_w};
    if (sp.seeds.empty()) sp.seeds = {s.seed};
    for (double d : sp.delta)
      if (!(d > 0.0 && d <= 1.0)) c.add("sweep.delta: values must be in (0, 1]");
    for (double w : sp.sigma_w)
      if (!(w >= 0.0)) c.add("sweep.sigma_w: values must be >= 0");
    s.sweep = sp;
  }
  c.finish();
  return s;
}

ExperimentSpec load_experiment(const std::string& path) {
  json j;
  try {
    j = json::parse(read_file(path));
  } catch (const json::exception& e) {
    throw ValidationError(path + ": " + e.what());
  }
  return parse_experiment(j, fs::path(path).parent_path().string());
}

std::vector<std::string> experiment_inputs(const ExperimentSpec& spec) {
  std::vector<std::string> in;
  if (is_image(spec)) in.push_back(spec.signal.path);
  for (const auto& r : spec.runs) collect_tables(r.denoiser, spec.base_dir, in);
  std::sort(in.begin(), in.end());
  in.erase(std::unique(in.begin(), in.end()), in.end());
  return in;
}

InstanceResult run_instance(const ExperimentSpec& spec, double delta, double sigma_w,
                            std::uint64_t seed, Exec exec) {
  InstanceResult out;
  out.x = gen_signal(spec.signal, spec.n, seed);
  const std::size_t n = out.x.size();
  out.a = gen_matrix(measurements_for(delta, n), n, seed, spec.scaling);
  out.meas = measure(out.a, out.x, sigma_w, seed);
  const double peak = spec.psnr_peak > 0.0 ? spec.psnr_peak : (is_image(spec) ? 255.0 : 0.0);
  for (const auto& rs : spec.runs) {
    RecoveryConfig cfg;
    cfg.algorithm = rs.algorithm;
    cfg.denoiser = make_denoiser(spec, rs.denoiser);
    cfg.onsager = rs.onsager;
    cfg.max_iters = rs.max_iters;
    cfg.stop_rel_change = rs.stop_rel_change;
    cfg.oversmooth_factor = rs.oversmooth_factor;
    cfg.mc = rs.mc;
    cfg.seed = seed;
    cfg.snapshot_iters = spec.snapshot_iters;
    cfg.psnr_peak = peak;
    cfg.exec = exec;
    RunResult rr;
    rr.name = rs.name;
    rr.trace = run_recovery(out.meas, out.a, cfg, &out.x);
    rr.final_mse = rr.trace.records.back().mse;
    rr.final_psnr = rr.trace.records.back().psnr;
    if (rs.predict) {
      SeOptions so;
      so.mc_trials = spec.se.mc_trials;
      so.seed = seed;
      so.method = spec.se.method;
      so.exec = exec;
      rr.se = se_trace(cfg.denoiser, out.x, out.a.delta(), sigma_w * sigma_w, rs.max_iters, so);
    }
    out.runs.push_back(std::move(rr));
  }
  return out;
}

std::string trace_jsonl(const RecoveryTrace& t) {
  std::map<std::size_t, const NoiseSnapshot*> snaps;
  for (const auto& s : t.snapshots) snaps[s.iter] = &s;
  std::string out;
  for (const auto& r : t.records) {
    json j = {{"iter", r.iter},
              {"mse", num_or_null(r.mse)},
              {"psnr", num_or_null(r.psnr)},
              {"sigma_hat", num_or_null(r.sigma_hat)},
              {"rel_change", num_or_null(r.rel_change)},
              {"wallclock_ms", r.wallclock_ms}};
    if (r.div) {
      j["div"] = num_or_null(r.div->value);
      j["div_method"] = to_string(r.div->method);
      if (r.div->method == DivergenceMethod::monte_carlo) {
        j["epsilon"] = r.div->epsilon;
        j["mc_samples"] = r.div->mc_samples;
        j["mc_seed"] = r.div->seed;
      }
    } else {
      j["div"] = nullptr;
    }
    if (auto it = snaps.find(r.iter); it != snaps.end()) j["effective_noise"] = it->second->v;
    out += j.dump() + "\n";
  }
  if (t.aborted()) out += json{{"abort", t.abort_reason}}.dump() + "\n";
  return out;
}

std::vector<std::string> cmd_run(const ExperimentSpec& spec, const std::string& out_dir) {
  fs::create_directories(out_dir);
  std::vector<std::string> files;
  auto put = [&](const std::string& rel, const std::string& body) {
    fs::create_directories((fs::path(out_dir) / rel).parent_path());
    write_file_atomic((fs::path(out_dir) / rel).string(), body);
    files.push_back(rel);
  };

  put("spec.json", spec.raw.dump(2) + "\n");
  auto inst = run_instance(spec, spec.delta, spec.sigma_w, spec.seed);
  write_matrix((fs::path(out_dir) / "matrix.bin").string(), inst.a);
  files.push_back("matrix.bin");
  std::string col;
  for (double v : inst.x.values) col += format_double(v) + "\n";
  put("signal.csv", "x\n" + col);
  if (inst.x.is_grid()) {
    write_pgm((fs::path(out_dir) / "signal.pgm").string(), inst.x);
    files.push_back("signal.pgm");
  }
  col.clear();
  for (double v : inst.meas.y) col += format_double(v) + "\n";
  put("y.csv", "y\n" + col);

  json summary = json::array();
  for (const auto& rr : inst.runs) {
    const std::string d = rr.name + "/";
    put(d + "trace.jsonl", trace_jsonl(rr.trace));
    std::string mse = "iter,mse,psnr,sigma_hat,div\n";
    for (const auto& r : rr.trace.records)
      mse += csv_row({static_cast<double>(r.iter), r.mse, r.psnr, r.sigma_hat,
                      r.div ? r.div->value : std::nan("")});
    put(d + "mse.csv", mse);
    col.clear();
    for (double v : rr.trace.estimate().values) col += format_double(v) + "\n";
    put(d + "estimate.csv", "x\n" + col);
    if (rr.trace.estimate().is_grid()) {
      write_pgm((fs::path(out_dir) / (d + "estimate.pgm")).string(), rr.trace.estimate());
      files.push_back(d + "estimate.pgm");
    }
    json run_summary = {{"name", rr.name},
                        {"final_mse", num_or_null(rr.final_mse)},
                        {"final_psnr", num_or_null(rr.final_psnr)},
                        {"iterations", rr.trace.records.size() - 1},
                        {"aborted", rr.trace.aborted()}};
    if (rr.se) {
      std::string se = "iter,theta,sigma\n";
      for (std::size_t t = 0; t < rr.se->theta.size(); ++t)
        se += csv_row({static_cast<double>(t), rr.se->theta[t], rr.se->sigma[t]});
      put(d + "se.csv", se);
      auto cmp = compare_traces(rr.trace, *rr.se);
      std::string cs = "iter,empirical,predicted,rel_error\n";
      for (std::size_t t = 0; t < cmp.rel_error.size(); ++t)
        cs += csv_row({static_cast<double>(t), cmp.empirical[t], cmp.predicted[t], cmp.rel_error[t]});
      put(d + "compare.csv", cs);
      run_summary["se_max_rel_error"] = num_or_null(cmp.max_rel_error);
      run_summary["se_terminal_rel_error"] = num_or_null(cmp.terminal_rel_error);
    }
    json norm = json::array();
    for (const auto& snap : rr.trace.snapshots) {
      try {
        auto rep = normality(snap.v);
        put(d + "qq_iter" + std::to_string(snap.iter) + ".csv", qq_csv(rep));
        norm.push_back({{"iter", snap.iter},
                        {"mean", rep.mean},
                        {"std_dev", rep.std_dev},
                        {"excess_kurtosis", rep.excess_kurtosis},
                        {"skewness", rep.skewness},
                        {"anderson_darling", rep.anderson_darling}});
      } catch (const DegenerateInputError&) {
        norm.push_back({{"iter", snap.iter}, {"degenerate", true}});
      }
    }
    if (!norm.empty()) {
      put(d + "normality.json", norm.dump(2) + "\n");
      run_summary["normality"] = norm;
    }
    summary.push_back(run_summary);
  }
  put("summary.json", summary.dump(2) + "\n");
  write_manifest(out_dir, files, experiment_inputs(spec), {{"spec_name", spec.name}});
  return files;
}

SweepSummary cmd_sweep(const ExperimentSpec& spec, const std::string& out_dir,
                       std::size_t workers) {
  SweepSpec sw = spec.sweep ? *spec.sweep : SweepSpec{{spec.delta}, {spec.sigma_w}, {spec.seed}};
  const double total = static_cast<double>(sw.delta.size() * sw.sigma_w.size() * sw.seeds.size() *
                                           spec.runs.size());
  if (total > sw.budget)
    throw BudgetError("sweep needs " + format_double(total) + " recovery runs, budget is " +
                          format_double(sw.budget),
                      total, sw.budget);

  struct Cell {
    std::size_t di, wi, si;
  };
  std::vector<Cell> cells;
  for (std::size_t di = 0; di < sw.delta.size(); ++di)
    for (std::size_t wi = 0; wi < sw.sigma_w.size(); ++wi)
      for (std::size_t si = 0; si < sw.seeds.size(); ++si) cells.push_back({di, wi, si});

  fs::create_directories(fs::path(out_dir) / "cells");
  write_file_atomic((fs::path(out_dir) / "spec.json").string(), spec.raw.dump(2) + "\n");
  // results[cell][run] = (mse, psnr)
  std::vector<std::vector<std::pair<double, double>>> results(cells.size());
  std::vector<std::string> cell_files(cells.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr err;
  std::mutex err_mu;
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, cells.size());
  const Exec inner = workers > 1 ? Exec::serial : Exec::parallel;
  auto work = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < cells.size();) {
      try {
        const Cell& c = cells[i];
        auto inst = run_instance(spec, sw.delta[c.di], sw.sigma_w[c.wi], sw.seeds[c.si], inner);
        json j = {{"delta", sw.delta[c.di]}, {"sigma_w", sw.sigma_w[c.wi]}, {"seed", sw.seeds[c.si]}};
        json runs = json::array();
        for (const auto& rr : inst.runs) {
          results[i].emplace_back(rr.final_mse, rr.final_psnr);
          runs.push_back({{"name", rr.name},
                          {"final_mse", num_or_null(rr.final_mse)},
                          {"final_psnr", num_or_null(rr.final_psnr)},
                          {"aborted", rr.trace.aborted()}});
        }
        j["runs"] = runs;
        cell_files[i] = "cells/d" + std::to_string(c.di) + "_w" + std::to_string(c.wi) + "_s" +
                        std::to_string(sw.seeds[c.si]) + ".json";
        write_file_atomic((fs::path(out_dir) / cell_files[i]).string(), j.dump(2) + "\n");
      } catch (...) {
        std::lock_guard lk(err_mu);
        if (!err) err = std::current_exception();
        next = cells.size();
      }
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  if (err) std::rethrow_exception(err);

  SweepSummary sum;
  auto mean_std = [](const Vec& v) {
    double m = 0.0;
    for (double x : v) m += x;
    m /= static_cast<double>(v.size());
    double s = 0.0;
    for (double x : v) s += (x - m) * (x - m);
    return std::pair{m, v.size() > 1 ? std::sqrt(s / static_cast<double>(v.size() - 1)) : 0.0};
  };
  for (std::size_t r = 0; r < spec.runs.size(); ++r)
    for (std::size_t wi = 0; wi < sw.sigma_w.size(); ++wi) {
      double prev = INFINITY;
      bool mono = true;
      std::vector<std::size_t> order(sw.delta.size());
      for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
      std::sort(order.begin(), order.end(), [&](auto a, auto b) { return sw.delta[a] < sw.delta[b]; });
      for (std::size_t di : order) {
        Vec mses, psnrs;
        for (std::size_t i = 0; i < cells.size(); ++i)
          if (cells[i].di == di && cells[i].wi == wi) {
            mses.push_back(results[i][r].first);
            psnrs.push_back(results[i][r].second);
          }
        SweepRow row;
        row.run = spec.runs[r].name;
        row.delta = sw.delta[di];
        row.sigma_w = sw.sigma_w[wi];
        row.seeds = mses.size();
        std::tie(row.mse_mean, row.mse_std) = mean_std(mses);
        std::tie(row.psnr_mean, row.psnr_std) = mean_std(psnrs);
        if (!(row.mse_mean <= prev)) mono = false;
        prev = row.mse_mean;
        sum.rows.push_back(row);
      }
      if (!mono) sum.non_monotone.emplace_back(spec.runs[r].name, sw.sigma_w[wi]);
    }

  std::string csv = "run,delta,sigma_w,seeds,mse_mean,mse_std,psnr_mean,psnr_std\n";
  for (const auto& r : sum.rows)
    csv += r.run + "," +
           csv_row({r.delta, r.sigma_w, static_cast<double>(r.seeds), r.mse_mean, r.mse_std,
                    r.psnr_mean, r.psnr_std});
  write_file_atomic((fs::path(out_dir) / "sweep.csv").string(), csv);
  json mono = json::array();
  for (const auto& [run, w] : sum.non_monotone) mono.push_back({{"run", run}, {"sigma_w", w}});
  json summary = {{"cells", cells.size()},
                  {"runs_per_cell", spec.runs.size()},
                  {"mse_non_increasing_in_delta", sum.non_monotone.empty()},
                  {"non_monotone", mono}};
  write_file_atomic((fs::path(out_dir) / "summary.json").string(), summary.dump(2) + "\n");

  std::vector<std::string> outs{"spec.json", "sweep.csv", "summary.json"};
  std::vector<std::string> sorted_cells = cell_files;
  std::sort(sorted_cells.begin(), sorted_cells.end());
  outs.insert(outs.end(), sorted_cells.begin(), sorted_cells.end());
  write_manifest(out_dir, outs, experiment_inputs(spec), {{"spec_name", spec.name}});
  return sum;
}

}  // namespace damp
