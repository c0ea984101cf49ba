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

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>

#include "qstab/core/rng.hpp"
#include "qstab/ingest/results.hpp"
#include "qstab/ingest/snapshot.hpp"
#include "qstab/noise/channels.hpp"

namespace {

using namespace qstab;
using namespace qstab::ingest;
namespace fs = std::filesystem;

fs::path data_dir() { return fs::path(QSTAB_DATA_DIR); }

fs::path temp_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("qstab_ingest_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

TEST(Snapshot, QubitRow) {
  const auto s = parse_backend_snapshot("qubit 6 t1=67.1 t2=99.9 ro=0.0254 u2=2.87e-4 u3=5.74e-4\n");
  ASSERT_EQ(s.qubits.size(), 1u);
  EXPECT_EQ(s.qubits[0], (QubitRecord{6, 67.1, 99.9, 0.0254, 2.87e-4, 5.74e-4}));
  EXPECT_FALSE(s.day.has_value());
}

TEST(Snapshot, PairRowWithDefaultConvention) {
  const auto s = parse_backend_snapshot("pair 6 7 err=0.0330");
  ASSERT_EQ(s.pairs.size(), 1u);
  EXPECT_EQ(s.pairs[0], (PairRecord{6, 7, 0.0330}));
  EXPECT_EQ(s.convention, PairConvention::ProcessInfidelity);
  EXPECT_TRUE(s.convention_defaulted);
  EXPECT_EQ(s.warnings.size(), 1u);
}

TEST(Snapshot, EmptyStream) {
  const auto s = parse_backend_snapshot("");
  EXPECT_TRUE(s.empty());
  EXPECT_TRUE(s.warnings.empty());
  EXPECT_TRUE(parse_backend_snapshot("# nothing\n\n  \n").empty());
}

TEST(Snapshot, HeaderAndFixtures) {
  const auto s = parse_backend_snapshot(read_file(data_dir() / "snapshots" / "day24_morning.txt"));
  EXPECT_EQ(s.day, 24);
  EXPECT_EQ(s.epoch, noise::EpochLabel::Morning);
  EXPECT_FALSE(s.convention_defaulted);
  EXPECT_EQ(s.qubits.size(), 4u);
  EXPECT_EQ(s.pairs.size(), 3u);
  EXPECT_DOUBLE_EQ(s.find_pair(7, 6)->error, 0.00908);
  EXPECT_DOUBLE_EQ(s.find_qubit(11)->u3, 8.88e-4);
  const auto t = parse_backend_snapshot(read_file(data_dir() / "snapshots" / "day29_morning.txt"));
  EXPECT_DOUBLE_EQ(t.find_pair(6, 7)->error, 0.0330);
  EXPECT_DOUBLE_EQ(t.find_qubit(6)->t2_us, 4.97);
}

TEST(Snapshot, RawRConvention) {
  const auto s = parse_backend_snapshot("snapshot day=1 epoch=night pair_convention=raw-r\npair 1 2 err=0.00908\n");
  EXPECT_EQ(s.convention, PairConvention::RawR);
  EXPECT_NEAR(s.pair_infidelity(s.pairs[0]), 0.01135, 1e-15);
  EXPECT_TRUE(s.warnings.empty());
}

TEST(Snapshot, RoundTrip) {
  const auto s = parse_backend_snapshot(read_file(data_dir() / "snapshots" / "day29_morning.txt"));
  const auto t = parse_backend_snapshot(to_text(s));
  EXPECT_EQ(t.qubits, s.qubits);
  EXPECT_EQ(t.pairs, s.pairs);
  EXPECT_EQ(t.day, s.day);
  EXPECT_EQ(t.epoch, s.epoch);
}

TEST(Snapshot, MalformedRowsReportLine) {
  const std::vector<std::pair<std::string, int>> bad = {
      {"qubit 6 t1=67.1 t2=99.9 ro=0.0254 u2=2.87e-4\n", 1},
      {"# c\nqubit 6 t1=67.1 t2=99.9 ro=1.5 u2=0 u3=0\n", 2},
      {"qubit 6 t1=-1 t2=99.9 ro=0.1 u2=0 u3=0\n", 1},
      {"qubit 6 t1=1 t2=0 ro=0.1 u2=0 u3=0\n", 1},
      {"\n\npair 6 7 err=abc\n", 3},
      {"pair 6 6 err=0.1\n", 1},
      {"pair 6 err=0.1\n", 1},
      {"pair 6 7 err=0.1 extra=2\n", 1},
      {"pair 6 7 err=0.1\npair 7 6 err=0.2\n", 2},
      {"qubit 6 t1=1 t2=1 ro=0 u2=0 u3=0\nqubit 6 t1=1 t2=1 ro=0 u2=0 u3=0\n", 2},
      {"gate 6 7\n", 1},
      {"pair 6 7 err=0.1\nsnapshot day=1\n", 2},
      {"snapshot day=1 epoch=noon\n", 1},
      {"snapshot day=1 pair_convention=r\n", 1},
      {"snapshot day=x\n", 1},
      {"pair 6 7 err\n", 1},
  };
  for (const auto& [text, line] : bad) {
    try {
      parse_backend_snapshot(text);
      ADD_FAILURE() << "accepted: " << text;
    } catch (const ParseError& e) {
      EXPECT_EQ(e.line(), line) << text << " -> " << e.what();
    }
  }
}

TEST(SnapshotModel, MapsRecordsToNoise) {
  const auto s = parse_backend_snapshot(read_file(data_dir() / "snapshots" / "day24_morning.txt"));
  const auto m = noise_model_from_snapshot(s);
  EXPECT_DOUBLE_EQ(m.qubit(6).t1_us, 67.1);
  EXPECT_DOUBLE_EQ(m.qubit(6).readout.m[0][1], 0.0254);
  EXPECT_DOUBLE_EQ(m.qubit(6).readout.m[1][0], 0.0254);
  const auto& g1 = m.single(6);
  EXPECT_NEAR(1.0 - noise::pauli_fidelity(g1.pauli, qsim::PauliString::parse("X")), 2 * 2.87e-4, 1e-15);
  const auto& g2 = m.cnot(7, 6);
  double total = 0;
  for (const auto& [p, w] : g2.pauli) total += w;
  EXPECT_NEAR(total, 0.00908, 1e-15);
  EXPECT_EQ(&m.cnot(1, 2), &m.cnot_default);
}

TEST(SnapshotModel, ClipsT2) {
  const auto s = parse_backend_snapshot("qubit 1 t1=10 t2=30 ro=0 u2=0 u3=0\n");
  std::vector<std::string> w;
  EXPECT_DOUBLE_EQ(noise_model_from_snapshot(s, &w).qubit(1).t2_us, 20.0);
  EXPECT_EQ(w.size(), 1u);
}

std::vector<DecayRecord> random_decays(int n_m, int n_c, int n_p, std::uint64_t seed) {
  Rng rng(seed);
  const auto paulis = qsim::non_identity_paulis(2);
  std::vector<DecayRecord> out;
  for (int p = 0; p < n_p; ++p)
    for (int mi = 0; mi < n_m; ++mi)
      for (int c = 0; c < n_c; ++c)
        out.push_back({paulis[static_cast<std::size_t>(p % 15)], 2 + 10 * mi, c, 2 * rng.uniform() - 1, rng.uniform() / 7});
  return out;
}

TEST(Results, EmptyTablesAreHeaderOnly) {
  const auto dir = temp_dir("empty");
  write_results(dir / "d.csv", std::vector<DecayRecord>{});
  EXPECT_EQ(read_file(dir / "d.csv"), std::string(kDecayHeader) + "\n");
  EXPECT_TRUE(read_decays(dir / "d.csv").empty());
  EXPECT_TRUE(fits_from_csv(fits_to_csv({})).empty());
  EXPECT_TRUE(curves_from_csv(curves_to_csv({})).empty());
  EXPECT_TRUE(estimates_from_csv(estimates_to_csv({})).empty());
}

TEST(Results, FitRoundTripsExactly) {
  const auto dir = temp_dir("fit");
  const std::vector<DecayFit> fits = {{qsim::PauliString::parse("XZ"), 0.95, 0.98, 0.003}};
  write_results(dir / "f.csv", fits);
  EXPECT_EQ(read_fits(dir / "f.csv"), fits);
}

TEST(Results, DecayTableRoundTrips) {
  const auto dir = temp_dir("decay");
  const auto rows = random_decays(3, 48, 16, 5);
  ASSERT_EQ(rows.size(), 3u * 48u * 16u);
  write_results(dir / "d.csv", rows);
  const auto back = read_decays(dir / "d.csv");
  ASSERT_EQ(back.size(), rows.size());
  EXPECT_EQ(back, rows);
}

TEST(Results, CurvesAndEstimatesRoundTrip) {
  qcap::QcapCurve a, b;
  a.source = bench::Source::CB;
  b.source = bench::Source::RB;
  Rng rng(2);
  for (int n = 0; n <= 5; ++n) {
    for (auto* c : {&a, &b}) {
      c->steps.push_back(n);
      c->bound.push_back(rng.uniform());
      c->sigma.push_back(rng.uniform() * 1e-3);
    }
  }
  auto back = curves_from_csv(curves_to_csv({a, b, a}));
  ASSERT_EQ(back.size(), 3u);
  EXPECT_EQ(back[0], a);
  EXPECT_EQ(back[1], b);
  EXPECT_EQ(back[2], a);

  bench::InfidelityEstimate e{1.0 / 3.0, 1e-17, bench::Source::RB, "cycle2", 24, "morning"};
  EXPECT_EQ(estimates_from_csv(estimates_to_csv({e, e})), (std::vector<bench::InfidelityEstimate>{e, e}));
  e.target = "a,b";
  EXPECT_THROW(estimates_to_csv({e}), ValidationError);
}

TEST(Results, SchemaMismatchAndIo) {
  EXPECT_THROW(decays_from_csv(fits_to_csv({})), ParseError);
  EXPECT_THROW(fits_from_csv(""), ParseError);
  try {
    fits_from_csv(std::string(kFitHeader) + "\nXX,1,0.9,0.1\nXX,1,0.9\n");
    ADD_FAILURE();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3);
  }
  EXPECT_THROW(fits_from_csv(std::string(kFitHeader) + "\nQQ,1,0.9,0.1\n"), ParseError);
  EXPECT_THROW(decays_from_csv(std::string(kDecayHeader) + "\nXX,2.5,0,1,0\n"), ParseError);
  EXPECT_THROW(read_fits("/nonexistent/dir/f.csv"), std::runtime_error);
  EXPECT_THROW(write_file("/proc/qstab_cannot_write/f.csv", "x"), std::exception);
}

}  // namespace
