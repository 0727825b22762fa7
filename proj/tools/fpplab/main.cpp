// Copyright 2026 The fpplab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <exception>
#include <iostream>

#include "CLI11.hpp"
#include "commands.hpp"

namespace {

void add_common(CLI::App* app, fpplab::CommonFlags& c) {
  app->add_option("--config", c.config, "Experiment config (JSON); flags override its values")
      ->check(CLI::ExistingFile);
  app->add_option("--dim", c.dim, "Lattice dimension");
  app->add_option("--radius", c.radius, "Box radius");
  app->add_option("--dist", c.dist, "Weight law, e.g. exponential:1, uniform:0:1, table:1@0.5,2@0.5");
  app->add_option("--mode", c.mode, "exact|float");
  app->add_option("--grid", c.grid, "Exact-mode grid exponent g (weights on 2^-g)");
  app->add_option("--seed", c.seed, "Master seed");
  app->add_option("--trials", c.trials, "Trial count");
  app->add_option("--workers", c.workers, "Worker threads (default FPP_WORKERS, else 1)");
  app->add_option("--out", c.out, "Output directory; without it the main output goes to stdout");
}

void add_field_source(CLI::App* app, fpplab::CommonFlags& c) {
  app->add_option("--trial", c.trial, "Trial index of the sampled field");
  app->add_option("--field", c.field, "Read this field dump instead of sampling")->check(CLI::ExistingFile);
}

void add_black(CLI::App* app, fpplab::ParamFlags& p) {
  app->add_option("--delta", p.delta, "delta of the black clauses");
  app->add_option("--m", p.m, "M (heavy threshold 3M; black2 window length)");
  app->add_option("--alpha2", p.alpha2, "alpha2 (black2, n-box good)");
  app->add_option("--size-reading", p.size_reading, "path-length|path-count");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fpplab: first-passage percolation experiments on finite lattice boxes"};
  app.require_subcommand(1);
  fpplab::CommonFlags common;
  fpplab::ParamFlags params;
  std::string source;
  std::string target;
  std::string probe;
  std::string badness = "general";
  std::string a;
  std::string b;
  std::optional<std::int64_t> scan_k;
  std::string black_mode = "black";
  bool assume_interior = false;
  std::string series;
  int fixtures = 50;
  int max_radius = 3;
  bool validate_only = false;

  auto* sample = app.add_subcommand("sample", "Emit a sampled field as a plain-text dump");
  add_common(sample, common);
  add_field_source(sample, common);

  auto* fpt = app.add_subcommand("fpt", "Passage times from a source to every vertex (CSV)");
  add_common(fpt, common);
  add_field_source(fpt, common);
  fpt->add_option("--source", source, "Source vertex, e.g. 0,0 (default origin)");

  auto* rays = app.add_subcommand("rays", "Boundary rays and their coalescence matrix");
  add_common(rays, common);
  add_field_source(rays, common);
  rays->add_option("--source", source, "Ray source (default origin)");
  rays->add_option("--horizon", params.horizon, "Coalescence horizon (default radius/2)");

  auto* bad = app.add_subcommand("badpoints", "Bad indices of every boundary ray for a probe source");
  add_common(bad, common);
  add_field_source(bad, common);
  bad->add_option("--source", source, "Ray source (default origin)");
  bad->add_option("--probe", probe, "Probe source (default e_1)");
  bad->add_option("--badness", badness, "general|unique");

  auto* cert = app.add_subcommand("certify", "Black certificate of a pair, or a scan of the event over [-k,k]^d");
  add_common(cert, common);
  add_field_source(cert, common);
  add_black(cert, params);
  cert->add_option("--a", a, "First vertex");
  cert->add_option("--b", b, "Second vertex");
  cert->add_option("--black-mode", black_mode, "black|black2|black3 (pair mode)");
  cert->add_flag("--assume-interior", assume_interior, "Skip the interiority check (pair mode)");
  cert->add_option("--scan", scan_k, "Scan every pair of [-k,k]^d instead");
  cert->add_option("--event", params.event, "C|C2|C3 (scan mode)");
  cert->add_option("--short-bound", params.short_bound, "half-k|delta-k (scan mode)");
  cert->add_option("--pair-budget", params.pair_budget, "Subsample sources beyond this many pairs");

  auto* nbox = app.add_subcommand("nbox", "Colors of the n-boxes met by the canonical optimal path");
  add_common(nbox, common);
  add_field_source(nbox, common);
  nbox->add_option("--source", source, "Path source (default origin)");
  nbox->add_option("--target", target, "Path target (default (min(distance, radius), 0, ...))");
  nbox->add_option("--n", params.n, "Box scale n");
  nbox->add_option("--delta-speed", params.delta_speed, "delta' of the speed condition");
  nbox->add_option("--r", params.r, "R of the weight cap");
  nbox->add_option("--m", params.m, "Window length M");
  nbox->add_option("--alpha2", params.alpha2, "Heavy level alpha2 of the good condition");
  nbox->add_option("--distance", params.distance, "|x|_1 of the default target");

  auto* res = app.add_subcommand("resample-exp", "Single-edge resampling experiment");
  add_common(res, common);
  res->add_option("--m", params.m, "M");
  res->add_option("--target-qualifying", params.target_qualifying, "Stop after this many qualifying instances");

  auto* decay = app.add_subcommand("decay", "Fit an exponential decay rate to a failure series");
  add_common(decay, common);
  decay->add_option("--series", series, "CSV with header scale,probability[,trials]")->check(CLI::ExistingFile);
  decay->add_option("--abscissa", params.abscissa, "sqrt-k|k|l1");
  decay->add_option("--k", params.k_list, "Scales (with --config)");
  decay->add_option("--threshold", params.threshold, "Failure threshold c or C0");
  add_black(decay, params);
  decay->add_option("--event", params.event, "C|C2|C3");
  decay->add_option("--short-bound", params.short_bound, "half-k|delta-k");
  decay->add_option("--pair-budget", params.pair_budget, "Pair budget per scan");

  auto* self = app.add_subcommand("selftest", "Oracle equivalence suite on small exact fields");
  add_common(self, common);
  self->add_option("--fixtures", fixtures, "Fixture count");
  self->add_option("--max-radius", max_radius, "Largest fixture radius (radii alternate 2 and this)");

  auto* run = app.add_subcommand("run", "Run any experiment config");
  add_common(run, common);
  run->add_flag("--validate-only", validate_only, "Check the config against the schema and exit");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*sample) return fpplab::cmd_sample(common);
    if (*fpt) return fpplab::cmd_fpt(common, source);
    if (*rays) return fpplab::cmd_rays(common, params, source);
    if (*bad) return fpplab::cmd_badpoints(common, source, probe, badness);
    if (*cert) return fpplab::cmd_certify(common, params, a, b, scan_k, black_mode, assume_interior);
    if (*nbox) return fpplab::cmd_nbox(common, params, source, target);
    if (*res) return fpplab::cmd_resample(common, params);
    if (*decay) return fpplab::cmd_decay(common, params, series);
    if (*self) return fpplab::cmd_selftest(common, fixtures, max_radius);
    if (*run) {
      if (common.config.empty()) {
        std::cerr << "fpplab run: --config is required\n";
        return 2;
      }
      return fpplab::cmd_run(common, params, validate_only);
    }
  } catch (const std::exception& e) {
    std::cerr << "fpplab: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
