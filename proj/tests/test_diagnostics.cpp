#include "wft/diagnostics.hpp"
#include "wft/profile.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace wft;

namespace {

constexpr double kNu = 0.01;

SourceSpec indicator(double lo, double hi, double a0, double a1, double scale) {
  SourceModel m;
  m.shape = SourceModel::Shape::Indicator;
  m.lo = lo;
  m.hi = hi;
  m.a0 = {a0};
  m.a1 = a1;
  m.omega_scale = scale;
  return make_source(m, burgers());
}

TrackerConfig config(double t_end = 1.0) {
  TrackerConfig cfg;
  cfg.h = 0.1;
  cfg.eps = 1e-5;
  cfg.nu = kNu;
  cfg.t_end = t_end;
  return cfg;
}

TrajectoryLog rarefaction_log() {
  return run(burgers(), no_source(), config(),
             step_profile(0.0, scalar_state(0.8), scalar_state(1.2)));
}

// zero-wave at x = 0.1 only: ω = 0.5 on [0.1, 0.2]
TrajectoryLog single_zero_log() {
  return run(burgers(), indicator(0.1, 0.2, 0.5, 0.0, 0.5), config(),
             constant_profile(scalar_state(1.0)));
}

TrajectoryLog damped_hat_log() {
  return run(burgers(), indicator(-1.0, 1.0, 0.0, -0.3, 0.45), config(),
             hat_profile(-0.4, 0.6, 0.8, 0.35));
}

Front make(FrontKind kind, int family, double strength) {
  Front f;
  f.kind = kind;
  f.family = family;
  f.strength = strength;
  return f;
}

// O(N²) reference for Q over the extended approaching set
double brute_q(const std::vector<Front>& fs, int p) {
  double q = 0.0;
  for (std::size_t a = 0; a < fs.size(); ++a)
    for (std::size_t b = a + 1; b < fs.size(); ++b)
      if (approaching(fs[a], fs[b], p)) q += std::abs(fs[a].strength * fs[b].strength);
  return q;
}

}  // namespace

TEST(Approaching, Rules) {
  EXPECT_TRUE(approaching(make(FrontKind::Shock, 2, -0.1), make(FrontKind::Shock, 1, -0.1), 1));
  const Front zero = make(FrontKind::Zero, 0, 0.05);
  const Front r1 = make(FrontKind::Rarefaction, 1, 0.1);
  EXPECT_FALSE(approaching(zero, r1, 0));
  EXPECT_TRUE(approaching(r1, zero, 0));
  EXPECT_FALSE(approaching(r1, make(FrontKind::Rarefaction, 1, 0.1), 0));
  EXPECT_TRUE(approaching(r1, make(FrontKind::Shock, 1, -0.1), 0));
  EXPECT_FALSE(approaching(make(FrontKind::NonPhysical, 0, 0.1), r1, 0));
  EXPECT_FALSE(approaching(r1, make(FrontKind::NonPhysical, 0, 0.1), 0));
}

TEST(Functionals, ShockAndZeroWave) {
  const auto src = indicator(-1.0, 1.0, 0.5, 0.0, 0.5);
  const double sz = zero_strength(src, 0, 0.1);
  EXPECT_NEAR(sz, 0.05, 1e-15);
  std::vector<Front> fs{make(FrontKind::Shock, 1, -0.4), make(FrontKind::Zero, 0, sz)};
  const auto g = glimm_values(fs, 1, 0);
  EXPECT_NEAR(g.V, 0.45, 1e-15);
  EXPECT_NEAR(g.Q, 0.4 * 0.05, 1e-15);
  EXPECT_NEAR(g.Q, brute_q(fs, 0), 1e-15);
  const auto empty = glimm_values(std::vector<Front>{}, 1, 0);
  EXPECT_EQ(empty.V, 0.0);
  EXPECT_EQ(empty.Q, 0.0);
}

TEST(Functionals, FastSumMatchesBruteForceProperty) {
  std::mt19937 rng(17);
  std::uniform_int_distribution<int> kind(0, 4), fam(1, 3);
  std::uniform_real_distribution<double> str(0.001, 0.2);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + trial % 3;
    const int p = trial % (n + 1);
    std::vector<Front> fs;
    for (int k = 0; k < 30; ++k) {
      const int kd = kind(rng);
      if (kd == 0) fs.push_back(make(FrontKind::Zero, 0, str(rng)));
      else if (kd == 1) fs.push_back(make(FrontKind::NonPhysical, 0, str(rng)));
      else if (kd == 2) fs.push_back(make(FrontKind::Shock, 1 + fam(rng) % n, -str(rng)));
      else fs.push_back(make(FrontKind::Rarefaction, 1 + fam(rng) % n, str(rng)));
    }
    const auto g = glimm_values(fs, n, p);
    EXPECT_NEAR(g.Q, brute_q(fs, p), 1e-12);
    double v = 0.0;
    for (const auto& f : fs) v += std::abs(f.strength);
    EXPECT_NEAR(g.V, v, 1e-12);
  }
}

TEST(Functionals, SeriesOrderingProperty) {
  const auto log = damped_hat_log();
  const auto fs = functionals(log, 10.0);
  ASSERT_GT(fs.times.size(), 2u);
  for (std::size_t k = 0; k < fs.times.size(); ++k) {
    EXPECT_LE(fs.Q[k], fs.V[k] * fs.V[k] + 1e-15);
    EXPECT_LE(fs.Q_wave[k], fs.Q_h[k] + 1e-15);
    EXPECT_LE(fs.Q_h[k], fs.Q_wave[k] + log.omega_mass * fs.V_wave[k] + 1e-12);
    EXPECT_NEAR(fs.upsilon[k], fs.V_h[k] + 10.0 * fs.Q_h[k], 1e-12);
    if (k) { EXPECT_LT(fs.times[k - 1], fs.times[k]); }
  }
  EXPECT_TRUE(fs.flagged_events.empty());
  EXPECT_EQ(fs.event_dQ.size(), log.events.size());
}

TEST(ZeroStrength, Examples) {
  EXPECT_NEAR(zero_strength(indicator(-1.0, 1.0, 0.5, 0.0, 0.5), 0, 0.1), 0.05, 1e-15);
  EXPECT_EQ(zero_strength(no_source(), 0, 0.1), 0.0);
  SourceModel m;
  m.shape = SourceModel::Shape::Hat;
  m.lo = 0.0;
  m.hi = 1.0;
  m.a0 = {1.0};
  m.omega_scale = 1.0;
  const auto hat = make_source(m, burgers());
  EXPECT_NEAR(zero_strength(hat, 0, 0.1), 0.1 - 0.005, 1e-14);
}

TEST(MinCharacteristic, ConstantState) {
  const auto log = run(burgers(), no_source(), config(), constant_profile(scalar_state(1.0)));
  const auto path = min_characteristic(log, burgers(), 1, 0.0, 0.0, 1.0);
  EXPECT_NEAR(path.at(0.0), -1.0, 1e-14);
  EXPECT_NEAR(path.at(0.5), -0.5, 1e-14);
}

TEST(MinCharacteristic, RarefactionTracesToOrigin) {
  const auto log = rarefaction_log();
  const auto path = min_characteristic(log, burgers(), 1, 1.0, 0.0, 1.0);
  EXPECT_NEAR(path.at(0.0), 0.0, kNu);
  // the path never leaves the fan 0.8 t <= x <= 1.2 t
  for (std::size_t k = 0; k < path.t.size(); ++k) {
    EXPECT_GE(path.x[k], 0.8 * path.t[k] - 1e-12);
    EXPECT_LE(path.x[k], 1.2 * path.t[k] + 1e-12);
  }
}

TEST(MinCharacteristic, ZeroWaveChangesSlope) {
  const auto log = single_zero_log();
  const double up = std::sqrt(2.0 * (0.5 + 0.1 * 0.5));  // Φ_h(1.0) for g = 0.5
  // state right of x = 0.1 is u⁺ until the shock (speed (u⁺+1)/2) passes
  const double x_bar = 0.6;
  ASSERT_LT(x_bar, 0.1 + 0.5 * (up + 1.0));
  const auto path = min_characteristic(log, burgers(), 1, x_bar, 0.0, 1.0);
  const double t_cross = 1.0 - (x_bar - 0.1) / up;
  EXPECT_NEAR(path.at(t_cross), 0.1, 1e-12);
  EXPECT_NEAR(path.at(0.0), 0.1 - t_cross, 1e-12);
  const double eps = 1e-3;
  EXPECT_NEAR((path.at(t_cross + eps) - path.at(t_cross)) / eps, up, 1e-9);
  EXPECT_NEAR((path.at(t_cross) - path.at(t_cross - eps)) / eps, 1.0, 1e-9);
}

TEST(MinCharacteristic, OutsideTimeRangeThrows) {
  const auto log = rarefaction_log();
  EXPECT_THROW(min_characteristic(log, burgers(), 1, 0.0, 0.0, 2.0), Error);
  EXPECT_THROW(min_characteristic(log, burgers(), 1, 0.0, 0.5, 0.5), Error);
}

TEST(ProofFunctionals, ConstantState) {
  const auto log = run(burgers(), no_source(), config(), constant_profile(scalar_state(1.0)));
  const auto ps = proof_functionals(log, burgers(), 1, -0.2, 0.3, 1.0);
  ASSERT_FALSE(ps.samples.empty());
  for (const auto& s : ps.samples) {
    EXPECT_EQ(s.M, 0.0);
    EXPECT_EQ(s.K, 0.0);
    EXPECT_EQ(s.Phi, 0.0);
    EXPECT_NEAR(s.m, 0.5, 1e-14);
  }
}

TEST(ProofFunctionals, RarefactionMass) {
  const auto log = rarefaction_log();
  const auto ps = proof_functionals(log, burgers(), 1, 0.5, 1.5, 1.0);
  const auto& last = ps.samples.back();
  EXPECT_DOUBLE_EQ(last.t, 1.0);
  EXPECT_NEAR(last.M, 0.4, kNu);
}

TEST(ProofFunctionals, ZeroWaveCountsInK) {
  const auto log = single_zero_log();
  const double sz = 0.05;
  const auto ps = proof_functionals(log, burgers(), 1, 0.3, 1.5, 1.0);
  bool seen_inside = false, seen_outside = false;
  for (const auto& s : ps.samples) {
    const bool inside = s.a <= 0.1 && 0.1 < s.b;
    EXPECT_NEAR(s.K, inside ? sz : 0.0, 1e-15) << "t=" << s.t;
    (inside ? seen_inside : seen_outside) = true;
  }
  EXPECT_TRUE(seen_inside);
  EXPECT_TRUE(seen_outside);
}

TEST(ProofFunctionals, FunnelMonotonicityProperty) {
  const auto log = damped_hat_log();
  const auto sys = burgers();
  const auto ps = proof_functionals(log, sys, 1, -0.2, 0.6, 1.0);
  const auto au = audit_funnel(log, sys, ps, 1.0);
  EXPECT_GT(au.spans, 0u);
  EXPECT_GE(au.min_dphi, -1e-12);
  EXPECT_LE(au.worst_kbound, 1e-9);
  EXPECT_GT(au.c_emp, 0.0);
  EXPECT_LE(au.unexplained_jump, 1e-12);
  // m(t) = b(t) − a(t) stays positive
  for (const auto& s : ps.samples) EXPECT_GT(s.m, 0.0);
}

TEST(ProofFunctionals, SystemAuditSeparatesNonPhysicalJumps) {
  const auto sys = coupled2x2();
  SourceModel m;
  m.shape = SourceModel::Shape::Indicator;
  m.lo = -0.5;
  m.hi = 0.5;
  m.a0 = {0.05, -0.05};
  m.a1 = -0.1;
  TrackerConfig cfg;
  cfg.eps = 1e-4;
  cfg.h = 0.1;
  cfg.nu = 0.02;
  cfg.t_end = 0.2;
  const StepProfile sp{{-0.4, 0.3},
                       {make_state({0.1, -0.1}), make_state({-0.1, 0.1}), make_state({0.05, 0.05})}};
  const auto log = run(sys, make_source(m, sys), cfg, from_steps(sp));
  std::size_t np_events = 0;
  for (const auto& e : log.events)
    if (log.front(e.left_id).kind == FrontKind::NonPhysical || log.front(e.right_id).kind == FrontKind::NonPhysical)
      ++np_events;
  ASSERT_GT(np_events, 0u);
  for (int fam : {1, 2}) {
    const auto ps = proof_functionals(log, sys, fam, fam == 1 ? -0.8 : 0.2, fam == 1 ? -0.2 : 0.8, 0.2);
    const auto au = audit_funnel(log, sys, ps, 0.2);
    EXPECT_GT(au.np_jumps, 0u);
    // weights lie in [0, 1] and only the non-physical strength changes
    EXPECT_LE(au.np_jump_excess, 1e-12);
    EXPECT_EQ(au.jumps, au.np_jumps + au.event_jumps.size());
    EXPECT_GE(au.min_dphi, -1e-12);
    EXPECT_LE(au.worst_kbound_rate, 1e-9);
  }
}

TEST(Oleinik, RarefactionMatchesExactDecay) {
  const auto log = rarefaction_log();
  const auto r = oleinik_report(log, 1, IntervalUnion{{0.9, 1.1}}, 0.0, 1.0);
  EXPECT_NEAR(r.lhs, 0.2, 2 * kNu);
  EXPECT_NEAR(r.meas_term, 0.2, 1e-15);
  EXPECT_EQ(r.source_term, 0.0);
  EXPECT_LE(r.c_emp, 1.0 + 10 * kNu);
}

TEST(Oleinik, ConstantAndDisjoint) {
  const auto flat = run(burgers(), no_source(), config(), constant_profile(scalar_state(1.0)));
  const auto r0 = oleinik_report(flat, 1, IntervalUnion{{-1.0, 1.0}}, 0.0, 1.0);
  EXPECT_EQ(r0.lhs, 0.0);
  EXPECT_EQ(r0.c_emp, 0.0);
  const auto log = rarefaction_log();
  const auto r1 = oleinik_report(log, 1, IntervalUnion{{3.0, 4.0}}, 0.0, 1.0);
  EXPECT_EQ(r1.lhs, 0.0);
  EXPECT_THROW(oleinik_report(log, 1, IntervalUnion{{0.0, 1.0}}, 0.5, 0.5), Error);
}

TEST(WaveMeasure, ConsistencyProperty) {
  const auto log = damped_hat_log();
  for (double t : {0.0, 0.3, 0.77, 1.0}) {
    const auto slice = wave_measure(log, t);
    const IntervalUnion all{{-1e9, 1e9}};
    double plus = 0.0, minus = 0.0;
    for (double lo = -3.0; lo < 3.0; lo += 0.25) {
      const IntervalUnion J{{lo, lo + 0.25}};
      plus += slice.mu_plus(1, J);
      minus += slice.mu_minus(1, J);
      EXPECT_NEAR(slice.mu(1, J), slice.mu_plus(1, J) - slice.mu_minus(1, J), 1e-15);
      EXPECT_NEAR(slice.mu_abs(1, J), slice.mu_plus(1, J) + slice.mu_minus(1, J), 1e-15);
      EXPECT_LE(slice.mu_plus(1, J), slice.mu_plus(1, IntervalUnion{{lo - 0.1, lo + 0.35}}) + 1e-15);
    }
    EXPECT_NEAR(plus, slice.mu_plus(1, all), 1e-12);
    EXPECT_NEAR(minus, slice.mu_minus(1, all), 1e-12);
  }
}

TEST(Lsc, ConstantSequenceHasZeroMargin) {
  LscSettings st{burgers(), no_source(), config(), 10.0, 1, {IntervalUnion{{-1.0, 1.0}}}};
  const auto u = hat_profile(0.0, 1.0, 0.9, 0.3);
  const auto rep = lsc_probe(st, {u, u, u, u}, u);
  EXPECT_NEAR(rep.q_margin, 0.0, 1e-15);
  EXPECT_NEAR(rep.upsilon_margin, 0.0, 1e-15);
  EXPECT_NEAR(rep.min_margin(), 0.0, 1e-15);
}

TEST(Lsc, MergingShocksDropQ) {
  LscSettings st{burgers(), no_source(), config(), 10.0, 1, {IntervalUnion{{-1.0, 1.0}}}};
  std::vector<Profile> seq;
  for (int k = 1; k <= 8; ++k) {
    const double w = 1.0 / (1 << k);
    seq.push_back(from_steps(StepProfile{{0.0, w}, {scalar_state(1.2), scalar_state(1.0), scalar_state(0.8)}}));
  }
  const auto limit = step_profile(0.0, scalar_state(1.2), scalar_state(0.8));
  const auto rep = lsc_probe(st, seq, limit);
  EXPECT_NEAR(rep.sequence.back().Q_h, 0.04, 1e-12);
  EXPECT_EQ(rep.limit.Q_h, 0.0);
  EXPECT_GT(rep.q_margin, 0.0);
  EXPECT_GE(rep.min_margin(), -1e-9);
}

TEST(Lsc, SmoothedStepsToSharpStep) {
  LscSettings st{burgers(), no_source(), config(), 10.0, 1,
                 {IntervalUnion{{-1.0, 1.0}}, IntervalUnion{{-0.5, 0.0}, {0.2, 0.4}}}};
  std::vector<Profile> seq;
  for (int k = 1; k <= 8; ++k) seq.push_back(ramp_profile(0.0, 1.0 / (1 << k), 0.8, 1.2));
  const auto rep = lsc_probe(st, seq, step_profile(0.0, scalar_state(0.8), scalar_state(1.2)));
  for (double m : rep.mu_plus_margin) EXPECT_GE(m, -1e-9);
  EXPECT_GE(rep.min_margin(), -1e-9);
}
