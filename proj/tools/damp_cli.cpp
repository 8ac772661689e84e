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

// damp command line: generate, measure, recover, predict, diagnose, run, sweep.

#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "damp/denoiser_config.hpp"
#include "damp/diagnostics.hpp"
#include "damp/errors.hpp"
#include "damp/experiment.hpp"
#include "damp/io.hpp"
#include "damp/manifest.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace damp;

namespace {

enum Exit { kOk = 0, kFailure = 1, kValidation = 2, kNumerical = 3, kBudget = 4 };

DenoiserHandle load_denoiser(const std::string& arg, bool image) {
  if (fs::exists(arg)) {
    auto j = json::parse(read_file(arg));
    return denoiser_from_json(j, fs::path(arg).parent_path().string());
  }
  if (!arg.empty() && arg.front() == '{') return denoiser_from_json(json::parse(arg));
  return denoiser_preset(arg, image);
}

MatrixScaling scaling_from(const std::string& s) {
  if (s == "column_normalized") return MatrixScaling::column_normalized;
  if (s == "raw") return MatrixScaling::raw;
  if (s == "inv_sqrt_m") return MatrixScaling::inv_sqrt_m;
  throw ParameterError("unknown matrix scaling '" + s + "'");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"damp: denoising-based approximate message passing"};
  app.require_subcommand(1);

  // gen-signal
  auto* gs = app.add_subcommand("gen-signal", "generate a test signal");
  std::string gs_kind = "k_sparse_gaussian", gs_path, gs_out;
  std::size_t gs_n = 0, gs_k = 0, gs_segments = 10;
  double gs_rho = -1.0, gs_p = 1.0;
  std::uint64_t gs_seed = 0;
  gs->add_option("--kind", gs_kind, "k_sparse_binary|k_sparse_gaussian|piecewise_constant|lp_ball|image_file");
  gs->add_option("--n", gs_n, "length");
  gs->add_option("--k", gs_k, "sparsity");
  gs->add_option("--rho", gs_rho, "sparsity as a fraction of n");
  gs->add_option("--p", gs_p, "lp ball exponent");
  gs->add_option("--segments", gs_segments, "piecewise constant segments");
  gs->add_option("--path", gs_path, "image file for image_file");
  gs->add_option("--seed", gs_seed);
  gs->add_option("--out", gs_out, "output .csv or .pgm")->required();

  // gen-matrix
  auto* gm = app.add_subcommand("gen-matrix", "generate a Gaussian measurement matrix");
  std::size_t gm_m = 0, gm_n = 0;
  double gm_delta = 0.0;
  std::uint64_t gm_seed = 0;
  std::string gm_scaling = "column_normalized", gm_out;
  gm->add_option("--m", gm_m, "rows");
  gm->add_option("--delta", gm_delta, "m / n, used when --m is absent");
  gm->add_option("--n", gm_n, "columns")->required();
  gm->add_option("--seed", gm_seed);
  gm->add_option("--scaling", gm_scaling, "column_normalized|raw|inv_sqrt_m");
  gm->add_option("--out", gm_out)->required();

  // measure
  auto* ms = app.add_subcommand("measure", "y = A x + w");
  std::string ms_matrix, ms_signal, ms_out;
  double ms_sigma = 0.0;
  std::uint64_t ms_seed = 0;
  ms->add_option("--matrix", ms_matrix)->required();
  ms->add_option("--signal", ms_signal)->required();
  ms->add_option("--sigma-w", ms_sigma, "noise standard deviation");
  ms->add_option("--seed", ms_seed);
  ms->add_option("--out", ms_out)->required();

  // recover
  auto* rc = app.add_subcommand("recover", "run IST, AMP, D-IT or D-AMP");
  std::string rc_algo = "damp", rc_den = "soft", rc_onsager, rc_matrix, rc_y, rc_truth, rc_out,
              rc_estimate;
  std::size_t rc_iters = 30, rc_h = 0, rc_w = 0, rc_mc_samples = 0;
  std::uint64_t rc_seed = 0;
  double rc_stop = 0.0, rc_over = 2.0, rc_eps = 0.0, rc_cap = 0.0, rc_peak = 0.0;
  std::vector<std::size_t> rc_snap;
  rc->add_option("--algo", rc_algo, "ist|amp|dit|damp");
  rc->add_option("--denoiser", rc_den, "preset name, JSON file or inline JSON");
  rc->add_option("--onsager", rc_onsager, "exact|monte_carlo|none");
  rc->add_option("--matrix", rc_matrix)->required();
  rc->add_option("--y", rc_y)->required();
  rc->add_option("--truth", rc_truth);
  rc->add_option("--iters", rc_iters);
  rc->add_option("--seed", rc_seed);
  rc->add_option("--stop-rel-change", rc_stop);
  rc->add_option("--oversmooth", rc_over);
  rc->add_option("--mc-samples", rc_mc_samples);
  rc->add_option("--mc-epsilon", rc_eps);
  rc->add_option("--mc-epsilon-cap", rc_cap, "epsilon <= cap * sigma_hat");
  rc->add_option("--height", rc_h);
  rc->add_option("--width", rc_w);
  rc->add_option("--psnr-peak", rc_peak);
  rc->add_option("--snapshot", rc_snap, "iterations whose effective noise is logged");
  rc->add_option("--out", rc_out, "trace JSON lines")->required();
  rc->add_option("--estimate", rc_estimate, "final estimate .csv or .pgm");

  // se
  auto* se = app.add_subcommand("se", "state evolution trace");
  std::string se_den = "soft", se_signal, se_out, se_method = "automatic";
  double se_delta = 0.5, se_sigma = 0.0;
  std::size_t se_iters = 30, se_trials = 0;
  std::uint64_t se_seed = 0;
  se->add_option("--denoiser", se_den);
  se->add_option("--signal", se_signal)->required();
  se->add_option("--delta", se_delta);
  se->add_option("--sigma-w", se_sigma);
  se->add_option("--iters", se_iters);
  se->add_option("--trials", se_trials, "Monte Carlo trials per step (0: default)");
  se->add_option("--seed", se_seed);
  se->add_option("--method", se_method, "monte_carlo|exact|automatic");
  se->add_option("--out", se_out)->required();

  // diag qq
  auto* dg = app.add_subcommand("diag", "effective-noise diagnostics");
  dg->require_subcommand(1);
  auto* qq = dg->add_subcommand("qq", "normality report and QQ pairs for one iteration");
  std::string qq_trace, qq_out;
  std::size_t qq_iter = 5;
  qq->add_option("--trace", qq_trace)->required();
  qq->add_option("--iter", qq_iter);
  qq->add_option("--out", qq_out, "QQ CSV");

  // run / sweep / verify
  auto* rn = app.add_subcommand("run", "run an experiment spec");
  std::string rn_spec, rn_out;
  rn->add_option("spec", rn_spec)->required();
  rn->add_option("--out", rn_out)->required();
  auto* sw = app.add_subcommand("sweep", "sweep delta x sigma_w x seeds");
  std::string sw_spec, sw_out;
  std::size_t sw_workers = 0;
  sw->add_option("spec", sw_spec)->required();
  sw->add_option("--out", sw_out)->required();
  sw->add_option("--workers", sw_workers);
  auto* vf = app.add_subcommand("verify", "check an artifact manifest");
  std::string vf_dir;
  vf->add_option("dir", vf_dir)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kValidation;
  }

  try {
    if (*gs) {
      SignalClass c;
      c.kind = parse_signal_kind(gs_kind);
      c.k = gs_rho >= 0.0 ? static_cast<std::size_t>(std::llround(gs_rho * gs_n)) : gs_k;
      c.p = gs_p;
      c.segments = gs_segments;
      c.path = gs_path;
      write_signal(gs_out, gen_signal(c, gs_n, gs_seed));
    } else if (*gm) {
      std::size_t m = gm_m;
      if (m == 0) {
        if (!(gm_delta > 0.0)) throw ParameterError("give --m or --delta");
        m = static_cast<std::size_t>(std::llround(gm_delta * gm_n));
      }
      write_matrix(gm_out, gen_matrix(m, gm_n, gm_seed, scaling_from(gm_scaling)));
    } else if (*ms) {
      auto a = read_matrix(ms_matrix);
      auto meas = measure(a, read_signal(ms_signal), ms_sigma, ms_seed);
      write_csv_column(ms_out, meas.y);
    } else if (*rc) {
      auto a = read_matrix(rc_matrix);
      Measurement meas{read_csv_column(rc_y), 0.0, 0};
      std::optional<Signal> truth;
      if (!rc_truth.empty()) truth = read_signal(rc_truth);
      RecoveryConfig cfg;
      cfg.algorithm = parse_algorithm(rc_algo);
      const bool image = (truth && truth->is_grid()) || rc_h > 0;
      cfg.denoiser = load_denoiser(rc_den, image);
      const bool plain = cfg.algorithm == Algorithm::ist || cfg.algorithm == Algorithm::dit;
      cfg.onsager = parse_onsager(rc_onsager.empty() ? (plain ? "none" : "monte_carlo") : rc_onsager);
      cfg.max_iters = rc_iters;
      cfg.seed = rc_seed;
      cfg.stop_rel_change = rc_stop;
      cfg.oversmooth_factor = rc_over;
      cfg.mc.samples = rc_mc_samples;
      cfg.mc.epsilon = rc_eps;
      cfg.mc.epsilon_sigma_cap = rc_cap;
      cfg.height = rc_h;
      cfg.width = rc_w;
      cfg.psnr_peak = rc_peak;
      cfg.snapshot_iters = rc_snap;
      auto tr = run_recovery(meas, a, cfg, truth ? &*truth : nullptr);
      write_file_atomic(rc_out, trace_jsonl(tr));
      if (!rc_estimate.empty()) write_signal(rc_estimate, tr.estimate());
      const auto& last = tr.records.back();
      std::cout << "iterations " << last.iter << " sigma_hat " << format_double(last.sigma_hat);
      if (truth) std::cout << " mse " << format_double(last.mse) << " psnr " << format_double(last.psnr);
      std::cout << "\n";
      if (tr.aborted()) {
        std::cerr << "aborted: " << tr.abort_reason << "\n";
        return tr.abort == AbortKind::numerical ? kNumerical : kFailure;
      }
    } else if (*se) {
      auto x = read_signal(se_signal);
      auto h = load_denoiser(se_den, x.is_grid());
      SeOptions o;
      o.mc_trials = se_trials;
      o.seed = se_seed;
      o.method = se_method == "exact"        ? SeMethod::exact
                 : se_method == "monte_carlo" ? SeMethod::monte_carlo
                 : se_method == "automatic"   ? SeMethod::automatic
                                              : throw ParameterError("unknown SE method '" + se_method + "'");
      write_se_csv(se_out, se_trace(h, x, se_delta, se_sigma * se_sigma, se_iters, o));
    } else if (*dg) {
      std::ifstream in(qq_trace);
      if (!in) throw ValidationError("cannot open '" + qq_trace + "'");
      std::string line;
      std::optional<Vec> v;
      while (std::getline(in, line)) {
        auto j = json::parse(line);
        if (j.contains("iter") && j["iter"] == qq_iter && j.contains("effective_noise"))
          v = j["effective_noise"].get<Vec>();
      }
      if (!v)
        throw ValidationError("trace has no effective-noise snapshot at iteration " +
                              std::to_string(qq_iter) + " (record it with --snapshot)");
      auto rep = normality(*v);
      if (!qq_out.empty()) write_file_atomic(qq_out, qq_csv(rep));
      json j = {{"iter", qq_iter},
                {"mean", rep.mean},
                {"std_dev", rep.std_dev},
                {"excess_kurtosis", rep.excess_kurtosis},
                {"skewness", rep.skewness},
                {"anderson_darling", rep.anderson_darling}};
      std::cout << j.dump() << "\n";
    } else if (*rn) {
      auto files = cmd_run(load_experiment(rn_spec), rn_out);
      std::cout << "wrote " << files.size() << " files to " << rn_out << "\n";
    } else if (*sw) {
      auto sum = cmd_sweep(load_experiment(sw_spec), sw_out, sw_workers);
      std::cout << "wrote " << sum.rows.size() << " rows to " << (fs::path(sw_out) / "sweep.csv").string()
                << "\n";
      for (const auto& [run, w] : sum.non_monotone)
        std::cout << "note: mean MSE of " << run << " is not non-increasing in delta at sigma_w="
                  << format_double(w) << "\n";
    } else if (*vf) {
      auto bad = verify_manifest(vf_dir);
      for (const auto& b : bad) std::cerr << b << "\n";
      if (!bad.empty()) return kValidation;
      std::cout << "manifest ok\n";
    }
  } catch (const BudgetError& e) {
    std::cerr << "budget: " << e.what() << "\n";
    return kBudget;
  } catch (const NumericalError& e) {
    std::cerr << "numerical: " << e.what() << "\n";
    return kNumerical;
  } catch (const DegenerateInputError& e) {
    std::cerr << "numerical: " << e.what() << "\n";
    return kNumerical;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kValidation;
  } catch (const json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kValidation;
  } catch (const std::exception& e) {
    std::cerr << "failure: " << e.what() << "\n";
    return kFailure;
  }
  return kOk;
}
