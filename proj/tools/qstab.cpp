// Copyright 2026 The qstab Authors
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

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "qstab/app/config.hpp"
#include "qstab/app/pipeline.hpp"
#include "qstab/ingest/results.hpp"
#include "qstab/ingest/snapshot.hpp"

namespace fs = std::filesystem;
using namespace qstab;

namespace {

struct Options {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string epochs;
  std::optional<double> k;
  std::string snapshot;
  std::vector<int> cycles;
};

app::ExperimentConfig load(const Options& o) {
  if (o.config.empty()) throw ValidationError("--config is required");
  auto c = app::load_config(o.config);
  if (o.seed) c.seed = *o.seed;
  if (!o.out.empty()) c.output = o.out;
  return c;
}

void print_estimates(const std::vector<bench::InfidelityEstimate>& es) {
  for (const auto& e : es)
    std::cout << bench::source_name(e.source) << ' ' << e.target << " e_F=" << app::fixed(e.e_F)
              << " sigma=" << app::fixed(e.sigma) << '\n';
}

int cmd_simulate(const Options& o) {
  const auto c = load(o);
  const auto rows = app::run_occupation(c, app::stage_model(c, o.epochs));
  const std::string csv = app::occupation_to_csv(rows);
  ingest::write_file(fs::path(c.output) / "occupation.csv", csv);
  std::cout << csv;
  return 0;
}

int cmd_cb(const Options& o) {
  const auto c = load(o);
  int k = 0;
  const auto m = app::stage_model(c, o.epochs, &k);
  const std::vector<int> ids = o.cycles.empty() ? std::vector<int>{1, 2, 3, 4} : o.cycles;
  const auto runs = app::run_cycles(c, m, c.cb, ids, k, app::Task::Cb);
  std::vector<bench::InfidelityEstimate> es;
  for (const auto& r : runs) {
    ingest::write_results(fs::path(c.output) / ("cb_" + app::cycle_target(r.id) + "_decays.csv"), r.result.records);
    ingest::write_results(fs::path(c.output) / ("cb_" + app::cycle_target(r.id) + "_fits.csv"), r.result.fits);
    es.push_back(r.result.estimate);
  }
  ingest::write_results(fs::path(c.output) / "estimates.csv", es);
  print_estimates(es);
  return 0;
}

int cmd_rb(const Options& o) {
  const auto c = load(o);
  int k = 0;
  const auto m = app::stage_model(c, o.epochs, &k);
  std::vector<bench::InfidelityEstimate> es;
  for (const auto& r : app::run_pairs(c, m, k)) {
    ingest::write_results(fs::path(c.output) / ("rb_" + app::pair_target(r.pair) + "_decays.csv"), r.result.records);
    es.push_back(r.result.estimate);
  }
  ingest::write_results(fs::path(c.output) / "estimates.csv", es);
  print_estimates(es);
  return 0;
}

int cmd_qcap(const Options& o) {
  const auto c = load(o);
  int k = 0;
  const auto m = app::stage_model(c, o.epochs, &k);
  const auto cycles = app::run_cycles(c, m, c.qcap, app::distinct(app::step_cycle_ids(c)), k, app::Task::QcapCb);
  const auto pairs = app::run_pairs(c, m, k);
  const std::vector<qcap::QcapCurve> curves = {app::cb_curve(c, cycles), app::rb_curve(c, pairs)};
  ingest::write_results(fs::path(c.output) / "curves.csv", curves);
  std::cout << ingest::curves_to_csv(curves);
  return 0;
}

int cmd_schedule(const Options& o) {
  const auto c = load(o);
  std::cout << app::run_schedule(c, c.output, o.epochs);
  return 0;
}

int cmd_report(const Options& o) {
  double k = 1.0;
  fs::path out = o.out;
  if (!o.config.empty()) {
    const auto c = load(o);
    k = c.drift_k;
    out = c.output;
  }
  if (o.k) k = *o.k;
  if (out.empty()) throw ValidationError("report needs --out or --config");
  std::cout << app::report_from_dir(out, k);
  return 0;
}

int cmd_ingest(const Options& o) {
  if (o.snapshot.empty()) throw ValidationError("--snapshot is required");
  const auto snap = ingest::parse_backend_snapshot(ingest::read_file(o.snapshot));
  for (const auto& w : snap.warnings) std::cerr << "warning: " << w << '\n';
  std::vector<std::string> warnings;
  ingest::noise_model_from_snapshot(snap, &warnings);
  for (const auto& w : warnings) std::cerr << "warning: " << w << '\n';
  std::cout << ingest::to_text(snap);
  for (const auto& p : snap.pairs)
    std::cout << "# pair " << p.a << ' ' << p.b << " e_F=" << format_double(snap.pair_infidelity(p)) << '\n';
  if (!o.out.empty()) ingest::write_file(fs::path(o.out) / "snapshot.txt", ingest::to_text(snap));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App cli{"Noisy circuit simulation and cycle benchmarking toolkit"};
  cli.require_subcommand(1);
  Options o;
  auto common = [&](CLI::App* s) {
    s->add_option("--config", o.config, "experiment config (JSON)");
    s->add_option("--seed", o.seed, "master seed (overrides the config)");
    s->add_option("--out", o.out, "output directory (overrides the config)");
    s->add_option("--epochs", o.epochs, "comma-separated <day> or <day>_<label> filter");
  };
  auto* simulate = cli.add_subcommand("simulate", "TFIM site occupations per Trotter step");
  auto* cb = cli.add_subcommand("cb", "cycle benchmarking on the layout cycles");
  auto* rb = cli.add_subcommand("rb", "randomized benchmarking per CNOT pair");
  auto* qc = cli.add_subcommand("qcap", "QCAP curves from CB and RB");
  auto* schedule = cli.add_subcommand("schedule", "full multi-epoch pipeline");
  auto* report = cli.add_subcommand("report", "recompute drift verdicts from a schedule output");
  auto* ing = cli.add_subcommand("ingest", "parse a backend snapshot");
  for (auto* s : {simulate, cb, rb, qc, schedule, report}) common(s);
  cb->add_option("--cycle", o.cycles, "cycle ids (default 1 2 3 4)")->check(CLI::Range(1, 4));
  report->add_option("--k", o.k, "sigma multiplier (default: config drift_k or 1)");
  ing->add_option("--snapshot", o.snapshot, "snapshot file")->required();
  ing->add_option("--out", o.out, "directory for the normalized snapshot");

  try {
    cli.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = cli.exit(e);
    return rc == 0 ? 0 : 1;
  }
  try {
    if (*simulate) return cmd_simulate(o);
    if (*cb) return cmd_cb(o);
    if (*rb) return cmd_rb(o);
    if (*qc) return cmd_qcap(o);
    if (*schedule) return cmd_schedule(o);
    if (*report) return cmd_report(o);
    if (*ing) return cmd_ingest(o);
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "runtime error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}
