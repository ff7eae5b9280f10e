#include "wft/oracle.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace wft;

namespace {

// 1 + 0.05 (1 + cos(π x / 2)) on [−2, 2], constant 1 outside
Profile smooth_bump() {
  Profile p;
  p.nodes = {-2.0, 0.0, 2.0};
  const auto one = [](double) { return scalar_state(1.0); };
  const auto bump = [](double x) { return scalar_state(1.0 + 0.05 * (1.0 + std::cos(M_PI * x / 2.0))); };
  p.pieces = {{one, true}, {bump, false}, {bump, false}, {one, true}};
  p.description = "bump";
  return p;
}

SourceSpec damping(double a1) {
  SourceModel m;
  m.shape = SourceModel::Shape::Indicator;
  m.lo = -1.0;
  m.hi = 1.0;
  m.a1 = a1;
  m.omega_scale = std::abs(a1) * 1.5;
  return make_source(m, burgers());
}

}  // namespace

TEST(LaxOleinik, RarefactionFan) {
  const auto u0 = step_profile(0.0, scalar_state(0.8), scalar_state(1.2));
  EXPECT_NEAR(lax_oleinik(burgers(), u0, 1.0, 1.0), 1.0, 2e-4);
  EXPECT_NEAR(lax_oleinik(burgers(), u0, 1.0, 0.9), 0.9, 2e-4);
  EXPECT_NEAR(lax_oleinik(burgers(), u0, 1.0, 0.5), 0.8, 1e-6);
  EXPECT_NEAR(lax_oleinik(burgers(), u0, 1.0, 1.5), 1.2, 1e-6);
}

TEST(LaxOleinik, ShockPosition) {
  const auto u0 = step_profile(0.0, scalar_state(1.2), scalar_state(0.8));
  EXPECT_NEAR(lax_oleinik(burgers(), u0, 1.0, 0.99), 1.2, 1e-6);
  EXPECT_NEAR(lax_oleinik(burgers(), u0, 1.0, 1.01), 0.8, 1e-6);
}

TEST(LaxOleinik, ConstantData) {
  const auto u0 = constant_profile(scalar_state(1.1));
  for (double x : {-3.0, 0.0, 2.5}) EXPECT_NEAR(lax_oleinik(burgers(), u0, 0.7, x), 1.1, 1e-12);
  const auto poly = scalar_polynomial({0.0, 0.0, 0.5, 0.1}, 0.5, 1.5, 0, 0.5);
  EXPECT_NEAR(lax_oleinik(poly, u0, 0.7, 0.3), 1.1, 1e-9);
}

TEST(LaxOleinik, OleinikInequalityProperty) {
  const auto u0 = hat_profile(0.0, 1.0, 0.7, 0.6);
  for (double t : {0.5, 1.0, 2.0}) {
    const LaxOleinik sol(burgers(), u0, t, -2.0, 4.0);
    std::mt19937 rng(static_cast<unsigned>(t * 100));
    std::uniform_real_distribution<double> d(-2.0, 4.0);
    for (int k = 0; k < 400; ++k) {
      double x = d(rng), y = d(rng);
      if (x > y) std::swap(x, y);
      if (y - x < 1e-3) continue;
      EXPECT_LE((sol(y) - sol(x)) / (y - x), 1.0 / t + 1e-6) << "t=" << t << " x=" << x << " y=" << y;
    }
  }
}

TEST(Riccati, Examples) {
  EXPECT_NEAR(riccati_bound(1.0, 1.0, 1.0), std::exp(1.0), 1e-15);
  EXPECT_NEAR(riccati_bound(1.0, 1.0, 1.0), 2.718281828, 1e-9);
  EXPECT_DOUBLE_EQ(riccati_bound(1.0, 0.0, 2.0), 0.5);
  EXPECT_NEAR(riccati_bound(2.0, 0.5, 1.0), 0.824360635, 1e-9);
  EXPECT_THROW(riccati_bound(0.0, 1.0, 1.0), Error);
}

TEST(Riccati, MonotoneAndAboveHomogeneousProperty) {
  double prev = kInf;
  for (double t = 0.1; t < 5.0; t += 0.1) {
    const double b = riccati_bound(1.5, 0.0, t);
    EXPECT_LT(b, prev);
    prev = b;
    EXPECT_GT(riccati_bound(1.5, 0.3, t), 1.0 / (1.5 * t));
  }
}

TEST(Riccati, SolutionSolvesOde) {
  const double k = 1.3, L = 0.4;
  for (double z0 : {0.5, 2.0, kInf}) {
    for (double t = 0.2; t < 3.0; t += 0.4) {
      const double h = 1e-5;
      const double z = riccati_solution(k, L, z0, t);
      const double dz = (riccati_solution(k, L, z0, t + h) - riccati_solution(k, L, z0, t - h)) / (2 * h);
      EXPECT_NEAR(dz, -k * z * z + L * z, 1e-6 * (1 + std::abs(dz)));
      // the bound dominates every solution started below +inf
      EXPECT_LE(z, riccati_bound(k, L, t) + 1e-12);
    }
  }
}

TEST(Godunov, ShockPositionAndError) {
  const auto sys = burgers();
  const auto u0 = step_profile(0.0, scalar_state(1.2), scalar_state(0.8));
  const GridSpec grid{-1.0, 3.0, 4000};
  const auto sol = godunov_split(sys, no_source(), u0, grid, 1.0);
  const double dx = sol.dx;
  EXPECT_LE(sol.cfl, 0.5);
  const auto& c = sol.final_cells();
  double xs = 0.0;
  for (std::size_t k = 0; k + 1 < c.size(); ++k)
    if (c[k][0] >= 1.0 && c[k + 1][0] < 1.0) xs = grid.x_min + static_cast<double>(k + 1) * dx;
  EXPECT_NEAR(xs, 1.0, dx);
  const auto ref = lax_oleinik_profile(sys, u0, 1.0, -1.0, 3.0, 4000);
  EXPECT_LE(l1_distance(ref, sol, -1.0, 3.0), 5 * dx);
}

TEST(Godunov, ConstantPreserved) {
  const auto sol = godunov_split(burgers(), no_source(), constant_profile(scalar_state(0.9)),
                                 GridSpec{-1.0, 1.0, 200}, 0.5);
  for (const auto& v : sol.final_cells()) EXPECT_EQ(v[0], 0.9);
  const auto sys2 = coupled2x2();
  const auto sol2 = godunov_split(sys2, no_source(), constant_profile(make_state({0.1, -0.2})),
                                  GridSpec{-1.0, 1.0, 100}, 0.2);
  for (const auto& v : sol2.final_cells()) EXPECT_EQ(v, make_state({0.1, -0.2}));
}

TEST(Godunov, SourceMatchesOdeInside) {
  // constant data under g = −u on [−1, 1]: away from the support edges u = e^{−t}
  const auto sol = godunov_split(burgers(), damping(-1.0), constant_profile(scalar_state(1.0)),
                                 GridSpec{-2.0, 2.0, 800}, 0.2);
  const auto& c = sol.final_cells();
  for (std::size_t k = 0; k < c.size(); ++k) {
    const double x = -2.0 + (static_cast<double>(k) + 0.5) * sol.dx;
    if (x > -0.5 && x < 0.8) { EXPECT_NEAR(c[k][0], std::exp(-0.2), 1e-5); }
  }
}

TEST(Godunov, SelfConvergenceOrderProperty) {
  const auto sys = burgers();
  const auto src = damping(-0.3);
  const auto u0 = smooth_bump();
  std::vector<StepProfile> sols;
  for (std::size_t cells : {200u, 400u, 800u, 1600u})
    sols.push_back(godunov_split(sys, src, u0, GridSpec{-3.0, 3.0, cells}, 0.4).to_profile());
  std::vector<double> diffs;
  for (std::size_t k = 0; k + 1 < sols.size(); ++k)
    diffs.push_back(l1_distance(sols[k], sols[k + 1], -0.5, 0.5));
  for (std::size_t k = 0; k + 1 < diffs.size(); ++k) {
    const double order = std::log2(diffs[k] / diffs[k + 1]);
    EXPECT_GE(order, 0.8) << "level " << k;
  }
}

TEST(Godunov, BadCflThrows) {
  EXPECT_THROW(godunov_split(burgers(), no_source(), constant_profile(scalar_state(1.0)),
                             GridSpec{-1.0, 1.0, 10}, 1.0, 0.9),
               Error);
}

TEST(L1Distance, Examples) {
  const StepProfile a{{0.0}, {scalar_state(1.0), scalar_state(0.6)}};
  EXPECT_EQ(l1_distance(a, a, -1.0, 1.0), 0.0);
  const StepProfile one{{}, {scalar_state(1.0)}}, zero{{}, {scalar_state(0.0)}};
  EXPECT_DOUBLE_EQ(l1_distance(one, zero, -1.0, 1.0), 2.0);
  const StepProfile b{{0.5}, {scalar_state(1.0), scalar_state(0.6)}};
  EXPECT_NEAR(l1_distance(a, b, -1.0, 1.0), 0.2, 1e-15);
}

TEST(L1Distance, GridProfile) {
  const auto sol = godunov_split(burgers(), no_source(), constant_profile(scalar_state(1.0)),
                                 GridSpec{0.0, 1.0, 10}, 0.1);
  const StepProfile half{{0.5}, {scalar_state(1.0), scalar_state(0.5)}};
  EXPECT_NEAR(l1_distance(half, sol, 0.0, 1.0), 0.25, 1e-15);
}
