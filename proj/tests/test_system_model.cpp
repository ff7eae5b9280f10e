#include "wft/system_model.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace wft;

namespace {

// Central differences, independent of the library's Jacobian path.
Matrix fd_jacobian(const SystemSpec& sys, const State& u) {
  const int n = sys.n;
  Matrix J(n, n);
  constexpr double d = 1e-6;
  for (int k = 0; k < n; ++k) {
    State a = u, b = u;
    a[k] += d;
    b[k] -= d;
    J.col(k) = (sys.f(a) - sys.f(b)) / (2 * d);
  }
  return J;
}

std::vector<State> random_states(const Box& box, int count, unsigned seed) {
  std::mt19937 rng(seed);
  std::vector<State> out;
  for (int s = 0; s < count; ++s) {
    State u(box.lo.size());
    for (Eigen::Index k = 0; k < u.size(); ++k) {
      std::uniform_real_distribution<double> d(box.lo[k], box.hi[k]);
      u[k] = d(rng);
    }
    out.push_back(u);
  }
  return out;
}

SourceSpec indicator_source(const SystemSpec& sys, double a0, double scale) {
  SourceModel m;
  m.shape = SourceModel::Shape::Indicator;
  m.lo = -1.0;
  m.hi = 1.0;
  m.a0 = std::vector<double>(static_cast<std::size_t>(sys.n), a0);
  m.omega_scale = scale;
  return make_source(m, sys);
}

}  // namespace

TEST(EigenDecompose, BurgersAtOne) {
  const auto e = eigen_decompose(burgers(), scalar_state(1.0));
  EXPECT_DOUBLE_EQ(e.values[0], 1.0);
  EXPECT_DOUBLE_EQ(e.right(0, 0), 1.0);
  EXPECT_DOUBLE_EQ(e.left(0, 0), 1.0);
}

TEST(EigenDecompose, BurgersSpeedEqualsState) {
  EXPECT_DOUBLE_EQ(eigen_decompose(burgers(), scalar_state(0.8)).values[0], 0.8);
}

TEST(EigenDecompose, CoupledAtOriginGivesAxes) {
  const auto e = eigen_decompose(coupled2x2(), make_state({0.0, 0.0}));
  EXPECT_NEAR(e.values[0], -2.0, 1e-12);
  EXPECT_NEAR(e.values[1], 2.0, 1e-12);
  // 1-field is the v axis, 2-field the u axis
  EXPECT_NEAR(std::abs(e.right(1, 0)), 1.0, 1e-9);
  EXPECT_NEAR(e.right(0, 0), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(e.right(0, 1)), 1.0, 1e-9);
  EXPECT_NEAR(e.right(1, 1), 0.0, 1e-12);
  EXPECT_TRUE((e.left * e.right).isApprox(Matrix::Identity(2, 2), 1e-12));
}

TEST(EigenDecompose, OutOfDomainThrows) {
  try {
    eigen_decompose(burgers(), scalar_state(2.0));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::OutOfDomain);
  }
}

TEST(EigenDecompose, ComplexEigenvaluesThrow) {
  SystemSpec s;
  s.name = "rotation";
  s.n = 2;
  s.flux = [](const State& w) { return make_state({w[1], -w[0]}); };
  s.field_kind = {FieldKind::LinearlyDegenerate, FieldKind::LinearlyDegenerate};
  s.domain = {make_state({-1, -1}), make_state({1, 1})};
  try {
    eigen_decompose(s, make_state({0, 0}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NonHyperbolic);
  }
}

TEST(EigenDecompose, JacobianConsistencyProperty) {
  for (const auto& sys : {burgers(), coupled2x2()}) {
    for (const auto& u : random_states(sys.domain, 200, 7)) {
      const auto e = eigen_decompose(sys, u);
      const Matrix J = fd_jacobian(sys, u);
      for (int i = 0; i < sys.n; ++i) {
        const State r = e.right.col(i);
        EXPECT_LE((J * r - e.values[i] * r).norm(), 1e-8 * (1 + r.norm()));
        if (i + 1 < sys.n) { EXPECT_LT(e.values[i], e.values[i + 1]); }
      }
      EXPECT_LE((e.left * e.right - Matrix::Identity(sys.n, sys.n)).cwiseAbs().maxCoeff(), 1e-10);
    }
  }
}

TEST(EigenDecompose, GnlNormalizationProperty) {
  for (const auto& sys : {burgers(), coupled2x2()}) {
    for (const auto& u : random_states(sys.domain, 100, 11)) {
      const auto e = eigen_decompose(sys, u);
      for (int i = 0; i < sys.n; ++i) {
        const double t = 1e-6;
        const State v = u + t * State(e.right.col(i));
        const double lam = eigen_decompose(sys, v, false).values[i];
        EXPECT_NEAR((lam - e.values[i]) / t, 1.0, 1e-3);
      }
    }
  }
}

TEST(EigenDecompose, NumericalJacobianMatchesAnalytic) {
  SystemSpec s = coupled2x2();
  SystemSpec fd = s;
  fd.jacobian = nullptr;
  const State u = make_state({0.2, -0.3});
  EXPECT_LE((s.jac(u) - fd.jac(u)).cwiseAbs().maxCoeff(), 1e-6);
}

TEST(Validate, BurgersMarginZero) {
  const auto rep = validate_assumptions(burgers(), no_source(), 1000);
  EXPECT_TRUE(rep.all_passed()) << rep.to_text();
  const auto* nr = rep.find("non_resonance");
  ASSERT_NE(nr, nullptr);
  EXPECT_NEAR(nr->margin, 0.0, 1e-12);
  EXPECT_NE(nr->worst_at.find("0.5"), std::string::npos);
  EXPECT_GE(rep.state_samples, 1000u);
}

TEST(Validate, WideDomainFailsNonResonance) {
  SystemSpec s = burgers();
  s.domain = {scalar_state(-0.5), scalar_state(1.5)};
  const auto rep = validate_assumptions(s, no_source(), 1000);
  const auto* nr = rep.find("non_resonance");
  ASSERT_NE(nr, nullptr);
  EXPECT_FALSE(nr->passed);
  EXPECT_NEAR(nr->margin, -1.0, 1e-12);
  EXPECT_NE(nr->worst_at.find("-0.5"), std::string::npos);
  EXPECT_FALSE(rep.all_passed());
}

TEST(Validate, SourceDominationMargin) {
  const auto rep = validate_assumptions(burgers(), indicator_source(burgers(), 0.5, 0.6), 200);
  const auto* d = rep.find("source_domination");
  ASSERT_NE(d, nullptr);
  EXPECT_TRUE(d->passed);
  EXPECT_NEAR(d->margin, 0.1, 1e-9);
  const auto* m = rep.find("omega_integrable");
  ASSERT_NE(m, nullptr);
  EXPECT_TRUE(m->passed);
}

TEST(Validate, SourceDominationFails) {
  const auto rep = validate_assumptions(burgers(), indicator_source(burgers(), 0.5, 0.4), 200);
  EXPECT_FALSE(rep.find("source_domination")->passed);
  EXPECT_NEAR(rep.find("source_domination")->margin, -0.1, 1e-9);
}

TEST(Validate, CoupledPasses) {
  const auto rep = validate_assumptions(coupled2x2(), no_source(), 1000);
  EXPECT_TRUE(rep.all_passed()) << rep.to_text();
  EXPECT_GT(rep.hyperbolicity_gap, 0.0);
}

TEST(Validate, LinearFluxIsLinearlyDegenerate) {
  SystemSpec s = scalar_polynomial({0.0, 1.0}, 0.0, 1.0, 0, 0.5);
  s.field_kind = {FieldKind::LinearlyDegenerate};
  EXPECT_TRUE(validate_assumptions(s, no_source(), 50).find("field_classification")->passed);
  s.field_kind = {FieldKind::GenuinelyNonlinear};
  EXPECT_FALSE(validate_assumptions(s, no_source(), 50).find("field_classification")->passed);
}

TEST(MakeSystem, OverridesAndErrors) {
  SystemModel m;
  m.name = "burgers";
  m.domain_lo = std::vector<double>{0.6};
  m.c = 0.6;
  const auto s = make_system(m);
  EXPECT_DOUBLE_EQ(s.domain.lo[0], 0.6);
  EXPECT_DOUBLE_EQ(s.c, 0.6);
  m.name = "nope";
  EXPECT_THROW(make_system(m), Error);
  m.name = "burgers";
  m.p = 3;
  EXPECT_THROW(make_system(m), Error);
}

TEST(MakeSource, IndicatorMassAndShape) {
  const auto src = indicator_source(burgers(), 0.5, 0.6);
  EXPECT_DOUBLE_EQ(src.omega_mass, 1.2);
  EXPECT_DOUBLE_EQ(src.weight(0.0), 0.6);
  EXPECT_DOUBLE_EQ(src.weight(1.5), 0.0);
  EXPECT_DOUBLE_EQ(src.eval(0.3, scalar_state(1.0))[0], 0.5);
  EXPECT_DOUBLE_EQ(src.scalar_g(0.3, 1.0), 0.5);
}

TEST(MakeSource, DerivedScaleDominates) {
  SourceModel m;
  m.shape = SourceModel::Shape::Hat;
  m.lo = 0.0;
  m.hi = 1.0;
  m.a0 = {0.1};
  m.a1 = -0.3;
  const auto src = make_source(m, burgers());
  EXPECT_TRUE(validate_assumptions(burgers(), src, 200).all_passed());
  EXPECT_NEAR(src.omega_sup, 0.35, 1e-12);  // max |0.1 - 0.3u| on [0.5,1.5]
}
