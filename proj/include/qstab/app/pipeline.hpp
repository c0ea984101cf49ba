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

#pragma once

#include <cstdio>
#include <filesystem>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "qstab/app/config.hpp"
#include "qstab/bench/cb.hpp"
#include "qstab/bench/rb.hpp"
#include "qstab/circuits/layout.hpp"
#include "qstab/circuits/tfim.hpp"
#include "qstab/core/format.hpp"
#include "qstab/core/rng.hpp"
#include "qstab/ingest/results.hpp"
#include "qstab/noise/execute.hpp"
#include "qstab/qcap/qcap.hpp"

namespace qstab::app {

namespace fs = std::filesystem;
using bench::InfidelityEstimate;
using qcap::QcapCurve;

enum class Task { Cb = 1, QcapCb = 2, Rb = 3 };

/// Seed of one benchmarking task; independent of thread count and epoch filter.
inline std::uint64_t task_seed(std::uint64_t master, int epoch_index, Task task, int id) {
  const std::uint64_t stream = (static_cast<std::uint64_t>(epoch_index) << 24) |
                               (static_cast<std::uint64_t>(task) << 16) | static_cast<std::uint64_t>(id);
  return Rng(master, stream)();
}

inline std::vector<int> layout_labels(const ExperimentConfig& c) {
  const auto q = circuits::layout_qubits(c.layout);
  return {q.begin(), q.end()};
}

/// Hard-cycle ids of one TFIM step in time order.
inline std::vector<int> step_cycle_ids(const ExperimentConfig& c) {
  std::vector<int> ids;
  for (const auto& cy : circuits::tfim_hard_cycles(c.variant, c.tfim)) {
    const int id = circuits::identify_cycle(cy);
    qstab::detail::require(id != 0, "TFIM hard cycle does not match a layout cycle");
    ids.push_back(id);
  }
  return ids;
}

inline std::vector<int> distinct(std::vector<int> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

/// Physical CNOT pairs in layout order (neighbours along the chain).
inline std::vector<std::pair<int, int>> chain_pairs(const ExperimentConfig& c) {
  const auto l = layout_labels(c);
  std::vector<std::pair<int, int>> out;
  for (std::size_t i = 0; i + 1 < l.size(); ++i) out.push_back({l[i], l[i + 1]});
  return out;
}

/// Physical pair of every CNOT in one TFIM step, keyed like chain_pairs.
inline std::vector<std::pair<int, int>> step_pairs(const ExperimentConfig& c) {
  const auto l = layout_labels(c);
  std::vector<std::pair<int, int>> out;
  for (const auto& cy : circuits::tfim_hard_cycles(c.variant, c.tfim))
    for (const auto& g : cy.gates) {
      const int a = std::min(g.qubits[0], g.qubits[1]), b = std::max(g.qubits[0], g.qubits[1]);
      out.push_back({l[static_cast<std::size_t>(a)], l[static_cast<std::size_t>(b)]});
    }
  return out;
}

inline std::string cycle_target(int id) { return "cycle" + std::to_string(id); }
inline std::string qcap_target(int id) { return "qcap_cycle" + std::to_string(id); }
inline std::string pair_target(std::pair<int, int> p) {
  return "pair" + std::to_string(p.first) + "-" + std::to_string(p.second);
}

struct CycleRun {
  int id = 0;
  bench::CbResult result;
};

struct PairRun {
  std::pair<int, int> pair;
  bench::RbResult result;
};

struct OccupationRow {
  int steps = 0;
  int site = 0;
  double occupation = 0.0;
  double ideal = 0.0;
};

inline std::vector<CycleRun> run_cycles(const ExperimentConfig& c, const noise::NoiseModel& m,
                                        const bench::CbParams& p, const std::vector<int>& ids, int epoch_index,
                                        Task task) {
  std::vector<CycleRun> out;
  for (int id : ids) {
    CycleRun r;
    r.id = id;
    r.result = bench::run_cb(circuits::layout_cycles(c.layout, id), layout_labels(c), m, p,
                             task_seed(c.seed, epoch_index, task, id), c.exact, c.threads);
    r.result.estimate.target = task == Task::Cb ? cycle_target(id) : qcap_target(id);
    out.push_back(std::move(r));
  }
  return out;
}

inline std::vector<PairRun> run_pairs(const ExperimentConfig& c, const noise::NoiseModel& m, int epoch_index) {
  std::vector<PairRun> out;
  int k = 0;
  for (const auto& pr : chain_pairs(c)) {
    PairRun r;
    r.pair = pr;
    r.result = bench::run_rb({pr.first, pr.second}, c.rb, m, task_seed(c.seed, epoch_index, Task::Rb, ++k), c.exact,
                             c.threads);
    r.result.estimate.target = pair_target(pr);
    out.push_back(std::move(r));
  }
  return out;
}

inline QcapCurve cb_curve(const ExperimentConfig& c, const std::vector<CycleRun>& runs) {
  std::map<int, InfidelityEstimate> est;
  for (const auto& r : runs) est[r.id] = r.result.estimate;
  QcapCurve q = qcap::qcap_cb_curve(est, step_cycle_ids(c), c.qcap_steps);
  q.variant = circuits::tfim_variant_name(c.variant);
  q.layout = c.layout;
  return q;
}

inline QcapCurve rb_curve(const ExperimentConfig& c, const std::vector<PairRun>& runs) {
  std::map<std::pair<int, int>, InfidelityEstimate> est;
  for (const auto& r : runs) est[r.pair] = r.result.estimate;
  QcapCurve q = qcap::qcap_rb_curve(est, step_pairs(c), c.qcap_steps);
  q.variant = circuits::tfim_variant_name(c.variant);
  q.layout = c.layout;
  return q;
}

/// Site occupations after 0..tfim.steps Trotter steps from |1000>, under
/// the model (readout included) and noiselessly.
inline std::vector<OccupationRow> run_occupation(const ExperimentConfig& c, const noise::NoiseModel& m) {
  const auto labels = layout_labels(c);
  circuits::TfimParams one = c.tfim;
  one.steps = 1;
  const circuits::Circuit step = circuits::build_tfim_step(c.variant, one, labels);
  circuits::Circuit circ(step.n_qubits, labels);
  circ.add(circuits::Cycle::easy({circuits::Gate::single(circuits::GateKind::X, 0)}));
  const noise::Executor noisy(m, labels), ideal(noise::NoiseModel{}, labels);
  std::vector<OccupationRow> out;
  for (int s = 0; s <= c.tfim.steps; ++s) {
    if (s > 0) circ.append(step);
    for (int site = 1; site <= c.tfim.n_sites; ++site) {
      qsim::PauliString z(c.tfim.n_sites);
      z.set(site - 1, qsim::PauliLetter::Z);
      out.push_back({s, site, (1.0 - noisy.expectation_exact(circ, z)) / 2.0,
                     (1.0 - ideal.expectation_exact(circ, z)) / 2.0});
    }
  }
  return out;
}

inline std::string occupation_to_csv(const std::vector<OccupationRow>& rows) {
  std::ostringstream os;
  os << "steps,site,occupation,ideal\n";
  for (const auto& r : rows)
    os << r.steps << ',' << r.site << ',' << format_double(r.occupation) << ',' << format_double(r.ideal) << '\n';
  return os.str();
}

inline void tag_estimates(std::vector<InfidelityEstimate>& v, const noise::Epoch& e) {
  for (auto& x : v) {
    x.day = e.day;
    x.epoch = noise::epoch_label_name(e.label);
  }
}

inline std::string epoch_tag(int day, const std::string& label) { return std::to_string(day) + "_" + label; }

/// Comma-separated `<day>` or `<day>_<label>` items; empty selects all.
inline std::vector<int> select_epochs(const noise::DriftSchedule& s, const std::string& filter) {
  std::vector<int> out;
  if (filter.empty()) {
    for (std::size_t i = 0; i < s.epochs.size(); ++i) out.push_back(static_cast<int>(i));
    return out;
  }
  std::set<int> chosen;
  for (auto item : circuits::detail::split_on(filter, ',')) {
    if (item.empty()) continue;
    bool matched = false;
    for (std::size_t i = 0; i < s.epochs.size(); ++i) {
      const auto& e = s.epochs[i];
      if (item == e.tag() || item == std::to_string(e.day)) {
        chosen.insert(static_cast<int>(i));
        matched = true;
      }
    }
    qstab::detail::require(matched, "epoch filter item '" + std::string(item) + "' matches no epoch");
  }
  return {chosen.begin(), chosen.end()};
}

/// Noise model for single-stage commands: the first selected epoch, or the
/// base model when no filter is given.
inline noise::NoiseModel stage_model(const ExperimentConfig& c, const std::string& filter, int* epoch_index = nullptr) {
  if (filter.empty()) {
    if (epoch_index) *epoch_index = 0;
    return c.noise();
  }
  const int k = select_epochs(c.drift, filter).front();
  if (epoch_index) *epoch_index = k;
  const auto& e = c.drift.epochs[static_cast<std::size_t>(k)];
  return noise::drift_params_at(c.drift, e.day, e.label, c.seed);
}

struct EpochOutput {
  std::string tag;
  std::vector<InfidelityEstimate> estimates;
  std::vector<QcapCurve> curves;
};

inline std::string fixed(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6e", v);
  return buf;
}

/// Drift report from the estimate table and each epoch's curves. Epochs
/// appear in estimate order; every (source, target) is compared between
/// consecutive epochs.
inline std::string build_summary(const std::vector<InfidelityEstimate>& estimates,
                                 const std::map<std::string, std::vector<QcapCurve>>& curves, double k) {
  std::vector<std::string> tags;
  for (const auto& e : estimates) {
    const std::string t = epoch_tag(e.day, e.epoch);
    if (std::find(tags.begin(), tags.end(), t) == tags.end()) tags.push_back(t);
  }
  std::ostringstream os;
  os << "qstab drift summary\n";
  os << "drift_k " << format_double(k) << "\n";
  os << "epochs";
  for (const auto& t : tags) os << ' ' << t;
  os << "\n\n[estimates]\n";
  for (const auto& e : estimates)
    os << epoch_tag(e.day, e.epoch) << ' ' << bench::source_name(e.source) << ' ' << e.target << " e_F=" << fixed(e.e_F)
       << " sigma=" << fixed(e.sigma) << '\n';

  std::vector<std::pair<std::string, std::string>> keys;
  std::map<std::pair<std::string, std::string>, std::vector<const InfidelityEstimate*>> series;
  for (const auto& e : estimates) {
    const std::pair<std::string, std::string> key{bench::source_name(e.source), e.target};
    if (!series.count(key)) keys.push_back(key);
    series[key].push_back(&e);
  }
  int n_drift = 0, n_cmp = 0;
  os << "\n[verdicts]\n";
  for (const auto& key : keys) {
    const auto& s = series[key];
    for (std::size_t i = 1; i < s.size(); ++i) {
      const auto v = qcap::compare_estimates(*s[i - 1], *s[i], k);
      ++n_cmp;
      n_drift += v == qcap::Verdict::DriftDetected;
      os << key.first << ' ' << key.second << ' ' << epoch_tag(s[i - 1]->day, s[i - 1]->epoch) << " -> "
         << epoch_tag(s[i]->day, s[i]->epoch) << ": " << qcap::verdict_name(v)
         << " gap=" << fixed(std::abs(s[i]->e_F - s[i - 1]->e_F)) << " tol=" << fixed(k * (s[i]->sigma + s[i - 1]->sigma))
         << '\n';
    }
  }
  os << "drift-detected " << n_drift << " of " << n_cmp << " comparisons\n";

  os << "\n[qcap]\n";
  std::map<std::string, const QcapCurve*> previous;
  std::string previous_tag;
  for (const auto& t : tags) {
    auto it = curves.find(t);
    if (it == curves.end()) continue;
    for (const auto& c : it->second) {
      if (c.size() == 0) continue;
      const std::string src = bench::source_name(c.source);
      const auto above = qcap::first_step_above(c, 0.5);
      os << t << ' ' << src << " steps=" << c.steps.back() << " final_bound=" << fixed(c.bound.back())
         << " sigma=" << fixed(c.sigma.back()) << " above_0.5_from=" << (above ? std::to_string(*above) : "none");
      if (auto p = previous.find(src); p != previous.end() && p->second->steps == c.steps) {
        int n = 0;
        for (auto v : qcap::compare_estimates(*p->second, c, k)) n += v == qcap::Verdict::DriftDetected;
        os << " drift_points_vs_previous=" << n;
      }
      os << '\n';
      previous[src] = &c;
    }
  }
  return os.str();
}

/// Recomputes the summary from a schedule output directory.
inline std::string report_from_dir(const fs::path& out, double k) {
  const auto estimates = ingest::read_estimates(out / "estimates.csv");
  std::map<std::string, std::vector<QcapCurve>> curves;
  for (const auto& e : estimates) {
    const std::string t = epoch_tag(e.day, e.epoch);
    if (curves.count(t)) continue;
    const fs::path p = out / t / "curves.csv";
    curves[t] = fs::exists(p) ? ingest::read_curves(p) : std::vector<QcapCurve>{};
  }
  return build_summary(estimates, curves, k);
}

/// Runs one epoch and writes its bundle under out/<tag>/.
inline EpochOutput run_epoch(const ExperimentConfig& c, int epoch_index, const fs::path& out) {
  const noise::Epoch& ep = c.drift.epochs[static_cast<std::size_t>(epoch_index)];
  const noise::NoiseModel m = noise::drift_params_at(c.drift, ep.day, ep.label, c.seed);
  const fs::path dir = out / ep.tag();
  fs::create_directories(dir);
  EpochOutput res;
  res.tag = ep.tag();

  const auto cycles = run_cycles(c, m, c.cb, {1, 2, 3, 4}, epoch_index, Task::Cb);
  for (const auto& r : cycles) {
    ingest::write_results(dir / ("cb_" + cycle_target(r.id) + "_decays.csv"), r.result.records);
    ingest::write_results(dir / ("cb_" + cycle_target(r.id) + "_fits.csv"), r.result.fits);
    res.estimates.push_back(r.result.estimate);
  }
  const auto qcap_cycles = run_cycles(c, m, c.qcap, distinct(step_cycle_ids(c)), epoch_index, Task::QcapCb);
  for (const auto& r : qcap_cycles) {
    ingest::write_results(dir / (qcap_target(r.id) + "_decays.csv"), r.result.records);
    ingest::write_results(dir / (qcap_target(r.id) + "_fits.csv"), r.result.fits);
    res.estimates.push_back(r.result.estimate);
  }
  const auto pairs = run_pairs(c, m, epoch_index);
  for (const auto& r : pairs) {
    ingest::write_results(dir / ("rb_" + pair_target(r.pair) + "_decays.csv"), r.result.records);
    res.estimates.push_back(r.result.estimate);
  }
  tag_estimates(res.estimates, ep);
  res.curves = {cb_curve(c, qcap_cycles), rb_curve(c, pairs)};
  ingest::write_results(dir / "curves.csv", res.curves);
  ingest::write_results(dir / "estimates.csv", res.estimates);
  ingest::write_file(dir / "occupation.csv", occupation_to_csv(run_occupation(c, m)));
  return res;
}

/// Full pipeline over the selected epochs (sequentially); returns the summary text.
inline std::string run_schedule(const ExperimentConfig& c, const fs::path& out, const std::string& filter = "") {
  const auto selected = select_epochs(c.drift, filter);
  fs::create_directories(out);
  std::vector<InfidelityEstimate> all;
  std::map<std::string, std::vector<QcapCurve>> curves;
  for (int k : selected) {
    auto r = run_epoch(c, k, out);
    all.insert(all.end(), r.estimates.begin(), r.estimates.end());
    curves[r.tag] = r.curves;
  }
  ingest::write_results(out / "estimates.csv", all);
  const std::string summary = build_summary(all, curves, c.drift_k);
  ingest::write_file(out / "summary.txt", summary);
  return summary;
}

}  // namespace qstab::app
