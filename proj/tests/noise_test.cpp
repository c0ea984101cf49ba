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

#include "oracles.hpp"
#include "qstab/circuits/circuit.hpp"
#include "qstab/core/rng.hpp"
#include "qstab/noise/channels.hpp"
#include "qstab/noise/drift.hpp"
#include "qstab/noise/execute.hpp"
#include "qstab/noise/model.hpp"

namespace {

using namespace qstab;
using namespace qstab::noise;
using circuits::Circuit;
using circuits::Cycle;
using circuits::Gate;
using qsim::DensityMatrix;
using qsim::StateVector;

PauliString P(const char* s) { return PauliString::parse(s); }

oracle::Mat random_unitary(int dim, Rng& rng) {
  oracle::Mat a(dim, dim);
  for (int r = 0; r < dim; ++r)
    for (int c = 0; c < dim; ++c) a(r, c) = oracle::cplx(rng.normal(), rng.normal());
  Eigen::HouseholderQR<oracle::Mat> qr(a);
  return qr.householderQ();
}

DensityMatrix plus_state() {
  StateVector s(1);
  s.apply(oracle::h(), std::vector<int>{0});
  return DensityMatrix(s);
}

TEST(PauliChannel, EmptyIsIdentity) {
  EXPECT_TRUE(pauli_channel({}, 2).is_identity());
  EXPECT_TRUE(depolarizing_channel(0.0, 2).is_identity());
}

TEST(PauliChannel, SingleFlipExpectation) {
  const auto ch = pauli_channel({{P("XI"), 0.1}}, 2);
  const auto rho = qsim::apply_channel(DensityMatrix(2), ch, {0, 1});
  EXPECT_NEAR(qsim::expectation_pauli(rho, P("ZI")), 0.8, 1e-12);
  EXPECT_NEAR(qsim::expectation_pauli(rho, P("IZ")), 1.0, 1e-12);
}

TEST(PauliChannel, ProcessInfidelityMatchesPtm) {
  const auto ch = pauli_channel({{P("XX"), 0.05}, {P("ZZ"), 0.05}}, 2);
  const double ef = oracle::process_infidelity(oracle::ptm(oracle::kraus_map(ch.operators()), 2));
  EXPECT_NEAR(ef, 0.1, 1e-12);
  double mean_f = 0.0;
  for (const auto& q : qsim::non_identity_paulis(2)) mean_f += pauli_fidelity({{P("XX"), 0.05}, {P("ZZ"), 0.05}}, q);
  EXPECT_NEAR(1.0 - (1.0 + mean_f) / 16.0, ef, 1e-12);
}

TEST(PauliChannel, Errors) {
  EXPECT_THROW(pauli_channel({{P("X"), -0.1}}, 1), ValidationError);
  EXPECT_THROW(pauli_channel({{P("X"), 0.6}, {P("Z"), 0.5}}, 1), ValidationError);
  EXPECT_THROW(pauli_channel({{P("XX"), 0.1}}, 1), ValidationError);
}

TEST(Depolarizing, FullyMixedAtOne) {
  Rng rng(1);
  StateVector psi(2);
  psi.apply(random_unitary(4, rng), std::vector<int>{0, 1});
  const auto rho = qsim::apply_channel(DensityMatrix(psi), depolarizing_channel(1.0, 2), {0, 1});
  EXPECT_LT((rho.matrix() - oracle::Mat::Identity(4, 4) / 4.0).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Depolarizing, FidelitiesAndInfidelity) {
  const auto ch = depolarizing_channel(0.02, 2);
  const auto r = oracle::ptm(oracle::kraus_map(ch.operators()), 2);
  for (int i = 1; i < 16; ++i) EXPECT_NEAR(r(i, i), 0.98, 1e-12);
  EXPECT_NEAR(oracle::process_infidelity(r), 0.01875, 1e-12);
  EXPECT_THROW(depolarizing_channel(1.5, 1), ValidationError);
  EXPECT_THROW(depolarizing_channel(-0.1, 1), ValidationError);
}

TEST(Damping, ZeroDurationIsIdentity) { EXPECT_TRUE(damping_channel(67.1, 99.9, 0.0).is_identity()); }

TEST(Damping, InfiniteLimitIsIdentity) {
  const auto ch = damping_channel(1e12, 2e12, 300.0);
  const auto r = oracle::ptm(oracle::kraus_map(ch.operators()), 1);
  EXPECT_LT((r - Eigen::MatrixXd::Identity(4, 4)).cwiseAbs().maxCoeff(), 1e-9);
}

TEST(Damping, CoherenceDecayMatchesT2) {
  const auto rho = qsim::apply_channel(plus_state(), damping_channel(67.1, 99.9, 300.0), {0});
  EXPECT_NEAR(std::abs(rho.matrix()(0, 1)), 0.5 * std::exp(-0.3 / 99.9), 1e-12);
  EXPECT_NEAR(rho.matrix()(0, 0).real(), 0.5 + 0.5 * (1.0 - std::exp(-0.3 / 67.1)), 1e-12);
  const auto excited = qsim::apply_channel(DensityMatrix(StateVector::from_bits("1")), damping_channel(67.1, 99.9, 300.0), {0});
  EXPECT_NEAR(excited.matrix()(1, 1).real(), std::exp(-0.3 / 67.1), 1e-12);
}

TEST(Damping, UnphysicalT2Rejected) {
  EXPECT_THROW(damping_channel(10.0, 21.0, 10.0), ValidationError);
  EXPECT_THROW(damping_channel(0.0, 1.0, 10.0), ValidationError);
  EXPECT_THROW(damping_channel(10.0, 5.0, -1.0), ValidationError);
}

TEST(Coherent, ZeroAngleIsIdentity) {
  EXPECT_LT((coherent_overrotation(P("XZ"), 0.0) - oracle::Mat::Identity(4, 4)).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Coherent, InverseCancels) {
  const oracle::Mat u = coherent_overrotation(P("ZZ"), 0.37) * coherent_overrotation(P("ZZ"), -0.37);
  EXPECT_LT((u - oracle::Mat::Identity(4, 4)).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Coherent, RotationsAdd) {
  const auto one = coherent_overrotation(P("XI"), 0.1);
  oracle::Mat acc = oracle::Mat::Identity(4, 4);
  for (int m = 1; m <= 25; ++m) {
    acc = one * acc;
    EXPECT_LT((acc - coherent_overrotation(P("XI"), 0.1 * m)).cwiseAbs().maxCoeff(), 1e-10);
  }
  EXPECT_LT((coherent_overrotation(P("ZZ"), 0.3) - oracle::expm_hermitian(oracle::pauli("ZZ"), 0.15)).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Coherent, IdentityAxisRejected) { EXPECT_THROW(coherent_overrotation(P("II"), 0.1), ValidationError); }

TEST(NoiseProperties, EmittedChannelsAreCptp) {
  Rng rng(3);
  for (int i = 0; i < 50; ++i) {
    const double t1 = 1.0 + 100.0 * rng.uniform();
    const double t2 = 2.0 * t1 * rng.uniform() + 1e-3;
    const auto d = damping_channel(t1, t2, 1000.0 * rng.uniform());
    EXPECT_TRUE(d.is_trace_preserving() && d.is_completely_positive());
    const auto dep = depolarizing_channel(rng.uniform(), 2);
    EXPECT_TRUE(dep.is_trace_preserving() && dep.is_completely_positive());
  }
}

TEST(NoiseProperties, PauliTwirlDiagonalizes) {
  Rng rng(12);
  for (int n = 1; n <= 2; ++n) {
    for (int trial = 0; trial < 5; ++trial) {
      const int d = 1 << n;
      const auto v = random_unitary(4 * d, rng);
      std::vector<qsim::Matrix> ops;
      for (int e = 0; e < 4; ++e) ops.push_back(v.block(d * e, 0, d, d));
      const qsim::KrausChannel ch(ops);
      const auto r = oracle::ptm(oracle::pauli_twirl(oracle::kraus_map(ch.operators()), n), n);
      Eigen::MatrixXd off = r;
      off.diagonal().setZero();
      EXPECT_LT(off.cwiseAbs().maxCoeff(), 1e-9);
    }
  }
  const auto amp = damping_channel(20.0, 15.0, 5000.0);
  const auto r = oracle::ptm(oracle::pauli_twirl(oracle::kraus_map(amp.operators()), 1), 1);
  Eigen::MatrixXd off = r;
  off.diagonal().setZero();
  EXPECT_LT(off.cwiseAbs().maxCoeff(), 1e-9);
}

NoiseModel composite_model() {
  NoiseModel m;
  QubitNoise q0, q1;
  q0.t1_us = 30.0;
  q0.t2_us = 20.0;
  q1.t1_us = 50.0;
  q1.t2_us = 70.0;
  m.qubits = {{6, q0}, {7, q1}};
  GateNoise g;
  g.pauli = {{P("XY"), 0.03}, {P("ZI"), 0.02}};
  g.coherent = CoherentError{P("XZ"), 0.2};
  m.cnots[{6, 7}] = g;
  m.durations.cnot_ns = 2000.0;
  return m;
}

TEST(Executor, CompositionOrderIsGateCoherentPauliDamping) {
  const NoiseModel m = composite_model();
  Circuit c(2, {6, 7});
  c.add(Cycle::easy({Gate::single(circuits::GateKind::H, 0), Gate::single(circuits::GateKind::H, 1)}));
  c.add(Cycle::hard({Gate::cnot(0, 1)}));
  const Executor ex(NoiseModel{}, {6, 7});
  const DensityMatrix start = ex.run_density([&] {
    Circuit pre(2, {6, 7});
    pre.add(c.cycles[0]);
    return pre;
  }());
  // Reference in the declared order.
  oracle::Mat rho = start.matrix();
  rho = oracle::cnot() * rho * oracle::cnot().adjoint();
  const oracle::Mat u = oracle::expm_hermitian(oracle::pauli("XZ"), 0.1);
  rho = u * rho * u.adjoint();
  rho = oracle::kraus_map({std::sqrt(0.95) * oracle::pauli("II"), std::sqrt(0.03) * oracle::pauli("XY"),
                           std::sqrt(0.02) * oracle::pauli("ZI")})(rho);
  auto damp = [](double t1, double t2, int q) {
    std::vector<oracle::Mat> e;
    const auto ch = damping_channel(t1, t2, 2000.0);
    for (const auto& k : ch.operators()) e.push_back(oracle::embed(k, {q}, 2));
    return oracle::kraus_map(e);
  };
  rho = damp(30.0, 20.0, 0)(damp(50.0, 70.0, 1)(rho));
  NoiseModel no_damp_easy = m;
  no_damp_easy.durations.single_ns = 0.0;
  const DensityMatrix full = Executor(no_damp_easy, {6, 7}).run_density(c);
  EXPECT_LT((full.matrix() - rho).cwiseAbs().maxCoeff(), 1e-12);
  // A different order (Pauli before coherent) gives a different state.
  oracle::Mat alt = start.matrix();
  alt = oracle::cnot() * alt * oracle::cnot().adjoint();
  alt = oracle::kraus_map({std::sqrt(0.95) * oracle::pauli("II"), std::sqrt(0.03) * oracle::pauli("XY"),
                           std::sqrt(0.02) * oracle::pauli("ZI")})(alt);
  alt = u * alt * u.adjoint();
  alt = damp(30.0, 20.0, 0)(damp(50.0, 70.0, 1)(alt));
  EXPECT_GT((alt - rho).cwiseAbs().maxCoeff(), 1e-4);
}

TEST(Executor, ReversedPairKeyOrientsAxis) {
  NoiseModel m;
  GateNoise g;
  g.coherent = CoherentError{P("XI"), 0.4};
  m.cnots[{7, 6}] = g;
  Circuit c(2, {6, 7});
  c.add(Cycle::hard({Gate::cnot(0, 1)}));
  const DensityMatrix rho = Executor(m, {6, 7}).run_density(c);
  // Axis letter 0 belongs to label 7 (logical 1).
  const oracle::Mat u = oracle::expm_hermitian(oracle::pauli("IX"), 0.2) * oracle::cnot();
  const oracle::Mat ref = u * DensityMatrix(2).matrix() * u.adjoint();
  EXPECT_LT((rho.matrix() - ref).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Executor, IdleQubitsAreDamped) {
  NoiseModel m;
  QubitNoise q;
  q.t1_us = 10.0;
  q.t2_us = 10.0;
  m.qubits[2] = q;
  Circuit c(3, {0, 1, 2});
  c.add(Cycle::easy({Gate::single(circuits::GateKind::H, 2)}));
  c.add(Cycle::hard({Gate::cnot(0, 1)}));
  const auto rho = Executor(m, {0, 1, 2}).run_density(c);
  const double expect = std::exp(-(0.05 + 0.3) / 10.0);
  EXPECT_NEAR(qsim::expectation_pauli(rho, P("IIX")), expect, 1e-12);
}

TEST(Executor, CrosstalkOnlyInHardCyclesAndInRegister) {
  NoiseModel m;
  m.crosstalk.push_back({{0, 1}, 2, 0.3});
  Circuit c(3);
  c.add(Cycle::easy({Gate::single(circuits::GateKind::H, 1), Gate::single(circuits::GateKind::H, 2)}));
  c.add(Cycle::hard({Gate::cnot(0, 1)}));
  const auto rho = Executor(m, {0, 1, 2}).run_density(c);
  // CNOT leaves |0>|+>|+> unchanged, then exp(-i 0.15 Z1 Z2).
  const oracle::Mat u = oracle::expm_hermitian(oracle::pauli("IZZ"), 0.15);
  StateVector psi(3);
  psi.apply(oracle::h(), std::vector<int>{1});
  psi.apply(oracle::h(), std::vector<int>{2});
  const oracle::Mat ref = u * psi.amplitudes() * psi.amplitudes().adjoint() * u.adjoint();
  EXPECT_LT((rho.matrix() - ref).cwiseAbs().maxCoeff(), 1e-12);
  Circuit pair_only(2);
  pair_only.add(Cycle::hard({Gate::cnot(0, 1)}));
  const auto rho2 = Executor(m, {0, 1}).run_density(pair_only);
  EXPECT_NEAR(rho2.matrix()(0, 0).real(), 1.0, 1e-12);
}

TEST(Executor, ReadoutAndPrepExactVersusSampled) {
  NoiseModel m;
  QubitNoise q;
  q.readout = Confusion::symmetric(0.05);
  q.prep_flip = 0.02;
  m.qubits[0] = q;
  Circuit c(1);
  const Executor ex(m, {0});
  const double exact = ex.expectation_exact(c, P("Z"));
  EXPECT_NEAR(exact, (1 - 2 * 0.02) * (1 - 2 * 0.05), 1e-12);
  Rng rng(5);
  EXPECT_NEAR(ex.expectation_sampled(c, P("Z"), 200000, rng), exact, 0.01);
  EXPECT_THROW(ex.expectation_exact(c, P("X")), ValidationError);
  EXPECT_NEAR(ex.expectation_exact(c, P("-Z")), -exact, 1e-15);
}

TEST(Executor, NoiselessUsesStatevector) {
  Circuit c(2);
  c.add(Cycle::hard({Gate::cnot(0, 1)}));
  EXPECT_FALSE(Executor(NoiseModel{}, {0, 1}).needs_density(c));
  NoiseModel ro;
  ro.qubits[0].readout = Confusion::symmetric(0.1);
  EXPECT_FALSE(Executor(ro, {0, 1}).needs_density(c));
  EXPECT_TRUE(Executor(composite_model(), {6, 7}).needs_density(Circuit(2, {6, 7})));
}

DriftSchedule q6_schedule() {
  DriftSchedule s;
  QubitNoise q6;
  q6.t1_us = 67.1;
  q6.t2_us = 99.9;
  q6.readout = Confusion::symmetric(0.0254);
  s.base.qubits[6] = q6;
  s.base.cnots[{6, 7}] = GateNoise::depolarizing(0.01, 2);
  s.base.crosstalk.push_back({{6, 7}, 12, 0.05});
  s.epochs = {{1, EpochLabel::Morning, {}}, {6, EpochLabel::Morning, {{"qubit.6.t2", 4.97}}}};
  return s;
}

TEST(Drift, NoOverridesNoWalkIsBase) {
  const auto s = q6_schedule();
  EXPECT_EQ(drift_params_at(s, 1, EpochLabel::Morning, 123), s.base);
}

TEST(Drift, OverrideApplied) {
  const auto m = drift_params_at(q6_schedule(), 6, EpochLabel::Morning, 1);
  EXPECT_DOUBLE_EQ(m.qubit(6).t2_us, 4.97);
  EXPECT_DOUBLE_EQ(m.qubit(6).t1_us, 67.1);
}

TEST(Drift, ZeroWalkIgnoresSeed) {
  const auto s = q6_schedule();
  EXPECT_EQ(drift_params_at(s, 6, EpochLabel::Morning, 1), drift_params_at(s, 6, EpochLabel::Morning, 999));
}

TEST(Drift, WalkIsDeterministicAndPhysical) {
  auto s = q6_schedule();
  s.walk = {0.2, 0.2, 0.01, 0.002, 0.01};
  const auto a = drift_params_at(s, 6, EpochLabel::Morning, 5);
  EXPECT_EQ(a, drift_params_at(s, 6, EpochLabel::Morning, 5));
  EXPECT_NE(a, drift_params_at(s, 6, EpochLabel::Morning, 6));
  Rng rng(1);
  for (int seed = 0; seed < 50; ++seed) {
    s.walk = {1.0, 1.0, 0.2, 0.2, 0.5};
    const auto m = drift_params_at(s, 6, EpochLabel::Morning, static_cast<std::uint64_t>(seed));
    EXPECT_NO_THROW(m.validate());
    EXPECT_LE(m.qubit(6).t2_us, 2 * m.qubit(6).t1_us);
    EXPECT_GT(m.qubit(6).t1_us, 0.0);
  }
}

TEST(Drift, ErrorsAndValidation) {
  auto s = q6_schedule();
  EXPECT_THROW(drift_params_at(s, 2, EpochLabel::Night, 1), ValidationError);
  EXPECT_NO_THROW(s.validate());
  s.epochs.push_back({6, EpochLabel::Morning, {}});
  EXPECT_THROW(s.validate(), ValidationError);
  s = q6_schedule();
  s.epochs[1].overrides["qubit.9.t1"] = 10.0;
  EXPECT_THROW(s.validate(), ValidationError);
  s = q6_schedule();
  s.epochs[1].overrides["cnot.7-12.depolarizing"] = 0.1;
  EXPECT_THROW(s.validate(), ValidationError);
  s = q6_schedule();
  s.epochs[1].overrides["cnot.7-6.pauli.XX"] = 0.1;
  s.epochs[1].overrides["crosstalk.0.angle"] = 0.2;
  EXPECT_NO_THROW(s.validate());
  const auto m = drift_params_at(s, 6, EpochLabel::Morning, 0);
  EXPECT_DOUBLE_EQ(m.cnot(6, 7).pauli.at(P("XX")), 0.1);
  EXPECT_DOUBLE_EQ(m.crosstalk[0].angle, 0.2);
  s.epochs[1].overrides["qubit.6.t2"] = 500.0;
  EXPECT_THROW(s.validate(), ValidationError);
}

}  // namespace
