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
#include <set>

#include "oracles.hpp"
#include "qstab/bench/cb.hpp"
#include "qstab/bench/fit.hpp"
#include "qstab/bench/infidelity.hpp"
#include "qstab/bench/rb.hpp"
#include "qstab/circuits/layout.hpp"
#include "qstab/circuits/propagate.hpp"
#include "qstab/noise/channels.hpp"

namespace {

using namespace qstab;
using namespace qstab::bench;
using noise::GateNoise;
using noise::NoiseModel;

const std::vector<int> kPair = {6, 7};

Cycle cnot01() { return Cycle::hard({Gate::cnot(0, 1)}); }

NoiseModel depolarized_cnot(double lambda) {
  NoiseModel m;
  m.cnot_default = GateNoise::depolarizing(lambda, 2);
  return m;
}

CbParams small_params() {
  CbParams p;
  p.n_random = 4;
  p.n_decays = 15;
  return p;
}

TEST(MakeCb, DefaultSizedCollectionMetadata) {
  CbParams p;
  const auto coll = make_cb(cnot01(), kPair, p, 1);
  EXPECT_EQ(coll.n_decays, 15);
  EXPECT_EQ(coll.decays.size(), 15u);
  EXPECT_EQ(coll.circuits.size(), 15u * 3u * 48u);
  std::map<std::pair<std::string, int>, int> per;
  for (const auto& c : coll.circuits) ++per[{c.prepared.str(), c.m}];
  for (const auto& [k, v] : per) EXPECT_EQ(v, 48);
  EXPECT_EQ(coll.m_list, (std::vector<int>{2, 10, 22}));
  EXPECT_EQ(coll.labels, kPair);
  const auto& deep = coll.circuits.back();
  EXPECT_EQ(deep.m, 22);
  EXPECT_EQ(deep.circuit.count_cycles(circuits::CycleKind::Hard), 22);
  EXPECT_EQ(deep.circuit.count_cycles(circuits::CycleKind::Easy), 24);
}

TEST(MakeCb, DecaysSampledWithoutReplacement) {
  const Cycle c1 = circuits::layout_cycles(1, 1);
  CbParams p = small_params();
  p.n_decays = 16;
  const auto coll = make_cb(c1, {0, 1, 2, 3}, p, 9);
  EXPECT_EQ(coll.n_qubits(), 4);
  std::set<std::string> uniq;
  for (const auto& d : coll.decays) {
    EXPECT_FALSE(d.is_identity());
    uniq.insert(d.str());
  }
  EXPECT_EQ(uniq.size(), 16u);
  EXPECT_NE(make_cb(c1, {0, 1, 2, 3}, p, 10).decays, coll.decays);
  EXPECT_EQ(make_cb(c1, {0, 1, 2, 3}, p, 9).decays, coll.decays);
}

TEST(MakeCb, RegisterIsCycleSupport) {
  const auto coll = make_cb(circuits::layout_cycles(2, 3), {6, 7, 12, 11}, small_params(), 1);
  EXPECT_EQ(coll.labels, (std::vector<int>{7, 12}));
  EXPECT_EQ(coll.target.gates.front(), Gate::cnot(0, 1));
}

TEST(MakeCb, NoiselessCircuitsReturnPlusOne) {
  for (Twirl tw : {Twirl::Pauli, Twirl::C1}) {
    CbParams p = small_params();
    p.twirl = tw;
    auto check = [&](const Cycle& c, const std::vector<int>& layout) {
      const auto coll = make_cb(c, layout, p, 3);
      const noise::Executor ex(NoiseModel{}, coll.labels);
      for (const auto& cc : coll.circuits) {
        ASSERT_NEAR(ex.expectation_exact(cc.circuit, cc.measured), 1.0, 1e-9) << to_text(cc.circuit);
        for (int q = 0; q < cc.measured.n_qubits(); ++q)
          EXPECT_TRUE(cc.measured[q] == qsim::PauliLetter::I || cc.measured[q] == qsim::PauliLetter::Z);
      }
    };
    check(cnot01(), kPair);
    check(circuits::layout_cycles(1, 1), {0, 1, 2, 3});
    check(Cycle::hard({Gate::cnot(1, 0)}), kPair);
  }
}

TEST(MakeCb, TwirlGroupsShareStructure) {
  CbParams p = small_params();
  const auto a = make_cb(cnot01(), kPair, p, 5);
  p.twirl = Twirl::C1;
  const auto b = make_cb(cnot01(), kPair, p, 5);
  ASSERT_EQ(a.circuits.size(), b.circuits.size());
  bool differ = false;
  for (std::size_t i = 0; i < a.circuits.size(); ++i) {
    EXPECT_EQ(a.circuits[i].circuit.cycles.size(), b.circuits[i].circuit.cycles.size());
    differ = differ || !(a.circuits[i].circuit == b.circuits[i].circuit);
  }
  EXPECT_TRUE(differ);
}

TEST(MakeCb, Errors) {
  CbParams p = small_params();
  EXPECT_THROW(make_cb(Cycle::easy({Gate::rz(0, 0.1)}), {0}, p, 1), ValidationError);
  p.m_list = {2, 10};
  EXPECT_THROW(make_cb(cnot01(), kPair, p, 1), ValidationError);
  p = small_params();
  p.n_decays = 17;
  EXPECT_THROW(make_cb(cnot01(), kPair, p, 1), ValidationError);
}

TEST(ExecuteCollection, NoiselessIsExactlyOne) {
  const auto coll = make_cb(cnot01(), kPair, small_params(), 2);
  for (const auto& r : execute_collection(coll, NoiseModel{}, {128, false, 0}, 4)) {
    EXPECT_DOUBLE_EQ(r.expectation, 1.0);
    EXPECT_DOUBLE_EQ(r.shot_error, 0.0);
  }
}

TEST(ExecuteCollection, DepolarizingDecayIsAnalytic) {
  const auto coll = make_cb(cnot01(), kPair, small_params(), 2);
  for (const auto& r : execute_collection(coll, depolarized_cnot(0.02), {1, true, 0}, 4))
    EXPECT_NEAR(r.expectation, std::pow(0.98, r.m), 1e-12);
}

TEST(ExecuteCollection, DeterministicPerSeed) {
  const auto coll = make_cb(cnot01(), kPair, small_params(), 2);
  const auto a = execute_collection(coll, depolarized_cnot(0.05), {128, false, 0}, 4);
  EXPECT_EQ(a, execute_collection(coll, depolarized_cnot(0.05), {128, false, 0}, 4));
  EXPECT_EQ(a, execute_collection(coll, depolarized_cnot(0.05), {128, false, 1}, 4));
  EXPECT_NE(a, execute_collection(coll, depolarized_cnot(0.05), {128, false, 0}, 5));
  for (const auto& r : a) EXPECT_NEAR(r.shot_error, std::sqrt((1 - r.expectation * r.expectation) / 128), 1e-15);
}

TEST(FitDecay, ExactPointsRecovered) {
  std::vector<DecayPoint> pts;
  for (int m : {2, 10, 22}) pts.push_back({double(m), 0.95 * std::pow(0.98, m), 0.01});
  const auto f = fit_decay(pts);
  EXPECT_NEAR(f.A, 0.95, 1e-9);
  EXPECT_NEAR(f.p, 0.98, 1e-9);
}

TEST(FitDecay, AllOnes) {
  std::vector<DecayRecord> recs;
  for (int m : {2, 10, 22})
    for (int i = 0; i < 5; ++i) recs.push_back({qsim::PauliString::parse("XZ"), m, i, 1.0, 0.0});
  const auto f = fit_decay(recs, {}, Rng(1));
  EXPECT_NEAR(f.A, 1.0, 1e-12);
  EXPECT_NEAR(f.p, 1.0, 1e-12);
  EXPECT_NEAR(f.sigma_p, 0.0, 1e-12);
  EXPECT_EQ(f.pauli.str(), "XZ");
}

TEST(FitDecay, Errors) {
  std::vector<DecayPoint> neg = {{2, -0.1, 0.1}, {10, 0.0, 0.1}, {22, -0.2, 0.1}};
  EXPECT_THROW(fit_decay(neg), FitError);
  std::vector<DecayPoint> two = {{2, 0.9, 0.1}, {10, 0.8, 0.1}};
  EXPECT_THROW(fit_decay(two), ValidationError);
  EXPECT_NO_THROW(fit_decay(two, 2));
}

TEST(FitDecay, NegativeDeepPointKeptInRefinement) {
  std::vector<DecayPoint> pts = {{1, 0.9, 0.02}, {5, 0.6, 0.02}, {40, -0.01, 0.02}};
  const auto f = fit_decay(pts);
  EXPECT_GE(f.p, 0.0);
  EXPECT_LE(f.p, 1.0);
  EXPECT_NEAR(f.A * std::pow(f.p, 5), 0.6, 0.05);
}

TEST(FitDecay, BootstrapCoversTruth) {
  // Reduced-size smoke version of the 500-trial coverage property.
  int covered = 0;
  const int trials = 100;
  for (int t = 0; t < trials; ++t) {
    Rng rng(1000 + t);
    std::vector<DecayRecord> recs;
    for (int m : {2, 10, 22})
      for (int i = 0; i < 48; ++i) {
        const double x = 0.95 * std::pow(0.98, m);
        const int ups = rng.binomial(128, (1 + x) / 2);
        const double e = (2.0 * ups - 128) / 128;
        recs.push_back({qsim::PauliString::parse("X"), m, i, e, std::sqrt((1 - e * e) / 128)});
      }
    const auto f = fit_decay(recs, {}, Rng(7, t));
    covered += std::abs(f.p - 0.98) <= 3 * f.sigma_p ? 1 : 0;
  }
  EXPECT_GE(covered, 97);
}

TEST(Estimator, AllOnesIsZero) {
  std::vector<DecayFit> fits;
  for (const auto& p : qsim::non_identity_paulis(2)) fits.push_back({p, 1.0, 1.0, 0.0});
  const auto e = estimate_process_infidelity(fits, 2);
  EXPECT_DOUBLE_EQ(e.e_F, 0.0);
  EXPECT_DOUBLE_EQ(e.sigma, 0.0);
}

TEST(Estimator, ExhaustiveDepolarizing) {
  std::vector<DecayFit> fits;
  for (const auto& p : qsim::non_identity_paulis(2)) fits.push_back({p, 1.0, 0.98, 0.001});
  const auto e = estimate_process_infidelity(fits, 2);
  EXPECT_NEAR(e.e_F, 0.01875, 1e-15);
  EXPECT_NEAR(e.sigma, (15.0 / 16.0) * std::sqrt(15 * 1e-6) / 15.0, 1e-15);
}

TEST(Estimator, ExhaustiveEqualsMean) {
  Rng rng(3);
  std::vector<DecayFit> fits;
  double mean = 0;
  for (const auto& p : qsim::non_identity_paulis(2)) {
    const double pk = 0.9 + 0.1 * rng.uniform();
    mean += pk / 15.0;
    fits.push_back({p, 1.0, pk, 0.0});
  }
  EXPECT_NEAR(estimate_process_infidelity(fits, 2).e_F, 1.0 - (1.0 + 15.0 * mean) / 16.0, 1e-15);
  EXPECT_DOUBLE_EQ(estimate_process_infidelity(fits, 2).sigma, 0.0);
}

TEST(Estimator, Errors) {
  EXPECT_THROW(estimate_process_infidelity({}, 2), ValidationError);
  const DecayFit f{qsim::PauliString::parse("XX"), 1, 0.9, 0};
  EXPECT_THROW(estimate_process_infidelity({f, f}, 2), ValidationError);
  EXPECT_THROW(estimate_process_infidelity({{qsim::PauliString::parse("II"), 1, 1, 0}}, 2), ValidationError);
}

TEST(Cb, ExhaustiveExactDepolarizing) {
  CbParams p = small_params();
  const auto res = run_cb(cnot01(), kPair, depolarized_cnot(0.02), p, 11, true);
  EXPECT_NEAR(res.estimate.e_F, 0.01875, 1e-9);
  for (const auto& f : res.fits) EXPECT_NEAR(f.p, 0.98, 1e-9);
}

TEST(Cb, TwirlYieldsAnalyticPauliFidelities) {
  NoiseModel m;
  m.cnot_default.pauli = {{qsim::PauliString::parse("XI"), 0.02}, {qsim::PauliString::parse("ZY"), 0.01},
                          {qsim::PauliString::parse("IZ"), 0.015}};
  const auto res = run_cb(cnot01(), kPair, m, small_params(), 4, true);
  const auto tab = circuits::cycle_tableau(cnot01(), 2);
  for (const auto& f : res.fits) {
    // Geometric mean of the fidelities along the frame orbit under the cycle.
    double log_f = 0;
    int period = 0;
    qsim::PauliString q = f.pauli;
    do {
      q = tab.conjugate(q).unsigned_copy();
      log_f += std::log(noise::pauli_fidelity(m.cnot_default.pauli, q));
      ++period;
    } while (q.letters() != f.pauli.letters());
    EXPECT_NEAR(f.p, std::exp(log_f / period), 1e-9) << f.pauli.str();
  }
}

TEST(Cb, CoherentZZMatchesPtmOracle) {
  NoiseModel m;
  noise::CoherentError ce{qsim::PauliString::parse("ZZ"), 0.1};
  m.cnot_default.coherent = ce;
  const auto res = run_cb(cnot01(), kPair, m, CbParams{}, 21);
  const oracle::Mat u = oracle::expm_hermitian(oracle::pauli("ZZ"), 0.05);
  const double ref = oracle::process_infidelity(oracle::ptm(oracle::pauli_twirl(oracle::kraus_map({u}), 2), 2));
  EXPECT_NEAR(ref, std::pow(std::sin(0.05), 2), 1e-12);
  EXPECT_LE(std::abs(res.estimate.e_F - ref), 3 * res.estimate.sigma) << res.estimate.e_F << " +- " << res.estimate.sigma;
}

TEST(Cb, ExactSpamOnlyChangesA) {
  NoiseModel clean = depolarized_cnot(0.03);
  NoiseModel spam = clean;
  for (int l : kPair) {
    spam.qubits[l].readout = noise::Confusion::symmetric(0.05);
    spam.qubits[l].prep_flip = 0.02;
  }
  const auto a = run_cb(cnot01(), kPair, clean, small_params(), 8, true);
  const auto b = run_cb(cnot01(), kPair, spam, small_params(), 8, true);
  for (std::size_t i = 0; i < a.fits.size(); ++i) {
    EXPECT_NEAR(a.fits[i].p, b.fits[i].p, 1e-9);
    EXPECT_LT(b.fits[i].A, a.fits[i].A);
  }
}

TEST(Cb, ExactCrosstalkFitsStayFinite) {
  NoiseModel m;
  m.crosstalk = {{{6, 7}, 12, 0.3}, {{12, 11}, 7, 0.3}};
  CbParams p;
  p.n_random = 4;
  p.n_decays = 255;
  const auto res = run_cb(circuits::layout_cycles(2, 1), {6, 7, 12, 11}, m, p, 3, true);
  for (const auto& f : res.fits) {
    EXPECT_TRUE(std::isfinite(f.A) && std::isfinite(f.p) && std::isfinite(f.sigma_p)) << f.pauli.str();
  }
  // Both spectator terms act as ZZ on the middle pair, 0.6 rad in total.
  const double ref = std::pow(std::sin(0.3), 2);
  ASSERT_TRUE(std::isfinite(res.estimate.e_F));
  EXPECT_LE(std::abs(res.estimate.e_F - ref), 3 * res.estimate.sigma) << res.estimate.e_F << " +- " << res.estimate.sigma;
}

TEST(FitDecay, RoundingLevelErrorsStayFinite) {
  std::vector<DecayRecord> recs;
  const qsim::PauliString pz = qsim::PauliString::parse("ZI");
  for (int m : {2, 10, 30})
    for (int i = 0; i < 8; ++i) recs.push_back({pz, m, i, 1.0 - (i % 3) * 1e-16, 0.0});
  const auto f = fit_decay(recs, {}, Rng(4));
  EXPECT_TRUE(std::isfinite(f.sigma_p));
  EXPECT_NEAR(f.p, 1.0, 1e-12);
}

TEST(RbConversion, Examples) {
  auto c = rb_to_process_infidelity(1.0, 4);
  EXPECT_EQ(c.r, 0.0);
  EXPECT_EQ(c.e_F, 0.0);
  c = rb_to_process_infidelity(0.0, 2);
  EXPECT_DOUBLE_EQ(c.r, 0.5);
  EXPECT_DOUBLE_EQ(c.e_F, 0.75);
  EXPECT_NEAR(rb_rate_to_process_infidelity(0.00908, 4).e_F, 0.01135, 1e-15);
  EXPECT_NEAR(rb_to_process_infidelity(0.9867, 4).r, 0.0099750, 1e-12);
  EXPECT_THROW(rb_to_process_infidelity(0.5, 3), ValidationError);
  EXPECT_THROW(rb_to_process_infidelity(1.5, 2), ValidationError);
  EXPECT_THROW(rb_rate_to_process_infidelity(-0.1, 2), ValidationError);
}

TEST(Rb, NoiselessHasNoError) {
  RbParams p;
  p.n_random = 5;
  for (const auto& labels : {std::vector<int>{3}, std::vector<int>{6, 7}}) {
    const auto res = run_rb(labels, p, NoiseModel{}, 1);
    EXPECT_DOUBLE_EQ(res.p, 1.0);
    EXPECT_DOUBLE_EQ(res.r, 0.0);
    EXPECT_DOUBLE_EQ(res.estimate.e_F, 0.0);
  }
}

TEST(Rb, SingleQubitDepolarizingRecoversHalfLambda) {
  NoiseModel m;
  m.single_default = GateNoise::depolarizing(0.01, 1);
  RbParams p;
  p.shots = 256;
  const auto res = run_rb({0}, p, m, 17);
  EXPECT_LE(std::abs(res.r - 0.005), 3 * res.sigma_r) << res.r << " +- " << res.sigma_r;
  const auto exact = run_rb({0}, p, m, 17, true);
  EXPECT_NEAR(exact.r, 0.005, 1e-9);
}

TEST(Rb, TwoQubitExactDepolarizing) {
  NoiseModel m = depolarized_cnot(0.0133);
  RbParams p;
  p.n_random = 3;
  const auto res = run_rb({6, 7}, p, m, 2, true);
  EXPECT_NEAR(res.p, 1 - 0.0133, 1e-9);
  EXPECT_NEAR(res.r, 0.75 * 0.0133, 1e-9);
}

TEST(Rb, Errors) {
  EXPECT_THROW(run_rb({0, 1, 2}, RbParams{}, NoiseModel{}, 1), ValidationError);
  RbParams p;
  p.m_list = {1, 2};
  EXPECT_THROW(run_rb({0}, p, NoiseModel{}, 1), ValidationError);
}

}  // namespace
