#pragma once

#include "wft/core.hpp"

#include <Eigen/Eigenvalues>

#include <optional>
#include <sstream>

namespace wft {

enum class FieldKind { GenuinelyNonlinear, LinearlyDegenerate };

using FluxFn = std::function<State(const State&)>;
using JacobianFn = std::function<Matrix(const State&)>;
using SourceFn = std::function<State(double, const State&)>;

/// A strictly hyperbolic flux u -> f(u) on a box Ω, with field classification and
/// the split index p separating negative (i <= p) from positive (i > p) speeds.
struct SystemSpec {
  std::string name;
  int n = 1;
  int p = 0;
  FluxFn flux;
  JacobianFn jacobian;  // empty: forward differences with step 1e-7
  std::vector<FieldKind> field_kind;
  Box domain;
  double c = 0.0;
  std::optional<double> kappa;
  // Scalar fast paths (n == 1): f, f', f''. Optional.
  std::function<double(double)> scalar_f, scalar_df, scalar_d2f;

  State f(const State& u) const { return flux(u); }

  Matrix jac(const State& u) const {
    if (jacobian) return jacobian(u);
    constexpr double step = 1e-7;
    const State f0 = flux(u);
    Matrix J(n, n);
    for (int k = 0; k < n; ++k) {
      State v = u;
      v[k] += step;
      J.col(k) = (flux(v) - f0) / step;
    }
    return J;
  }

  /// D^2 f(u)[r, r].
  State curvature(const State& u, const State& r) const {
    if (n == 1 && scalar_d2f) return State::Constant(1, scalar_d2f(u[0]) * r[0] * r[0]);
    if (jacobian) {
      constexpr double d = 1e-5;
      return (jacobian(u + d * r) - jacobian(u - d * r)) * r / (2.0 * d);
    }
    constexpr double d = 1e-4;
    return (flux(u + d * r) - 2.0 * flux(u) + flux(u - d * r)) / (d * d);
  }

  bool gnl(int family) const {
    return field_kind.at(static_cast<std::size_t>(family - 1)) == FieldKind::GenuinelyNonlinear;
  }
};

/// Source g(x, u) dominated by ω(x); ω vanishes outside `support`.
struct SourceSpec {
  std::string description = "none";
  SourceFn g;                          // empty: g == 0
  std::function<double(double)> omega;  // empty: ω == 0
  double omega_mass = 0.0;
  double omega_sup = 0.0;
  Interval support{0.0, 0.0};
  double lip_g = 0.0;
  std::function<double(double, double)> scalar_g;  // optional fast path for n == 1
  std::vector<double> breaks;  // x where the shape jumps or kinks; cell quadrature splits here

  bool is_zero() const { return !g; }

  State eval(double x, const State& u) const {
    if (!g) return State::Zero(u.size());
    return g(x, u);
  }
  double weight(double x) const { return omega ? omega(x) : 0.0; }
};

/// Parameters of the source family g(x,u) = shape(x) * (a0 + a1 u), ω(x) = shape(x) * scale.
struct SourceModel {
  enum class Shape { None, Indicator, Hat, Uniform };
  Shape shape = Shape::None;
  double lo = 0.0;  // Indicator: [lo, hi]; Hat: center = lo, half-width = hi
  double hi = 0.0;
  std::vector<double> a0;  // empty means zero
  double a1 = 0.0;
  std::optional<double> omega_scale;  // derived from Ω when absent
};

/// Parameters selecting a built-in or polynomial system, with optional overrides.
struct SystemModel {
  std::string name = "burgers";      // burgers | coupled2x2 | poly
  std::vector<double> coeffs;        // poly: f(u) = sum_k coeffs[k] u^k
  std::optional<std::vector<double>> domain_lo, domain_hi;
  std::optional<int> p;
  std::optional<double> c;
};

struct EigenDecomposition {
  State values;  // ascending
  Matrix right;  // columns r_i
  Matrix left;   // rows l_i
};

inline EigenDecomposition eigen_decompose(const SystemSpec& sys, const State& u,
                                          bool check_domain = true) {
  if (check_domain && !sys.domain.contains(u)) {
    std::ostringstream os;
    os << "state (" << u.transpose() << ") outside the domain of " << sys.name;
    throw Error(ErrorKind::OutOfDomain, os.str());
  }
  const int n = sys.n;
  const Matrix J = sys.jac(u);
  EigenDecomposition out;
  out.values.resize(n);
  out.right.resize(n, n);

  if (n == 1) {
    out.values[0] = J(0, 0);
    out.right(0, 0) = 1.0;
  } else {
    Eigen::EigenSolver<Matrix> es(J);
    if (es.info() != Eigen::Success) throw Error(ErrorKind::NonHyperbolic, "eigen solver failed");
    const auto ev = es.eigenvalues();
    const auto evec = es.eigenvectors();
    const double scale = 1.0 + J.cwiseAbs().maxCoeff();
    std::vector<int> order(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
      if (std::abs(ev[k].imag()) > 1e-12 * scale)
        throw Error(ErrorKind::NonHyperbolic, "complex eigenvalue");
      order[static_cast<std::size_t>(k)] = k;
    }
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return ev[a].real() < ev[b].real(); });
    for (int k = 0; k < n; ++k) {
      const int src = order[static_cast<std::size_t>(k)];
      out.values[k] = ev[src].real();
      State r = evec.col(src).real();
      r.normalize();
      Eigen::Index big = 0;
      r.cwiseAbs().maxCoeff(&big);
      if (r[big] < 0) r = -r;
      out.right.col(k) = r;
    }
    for (int k = 0; k + 1 < n; ++k) {
      if (out.values[k + 1] - out.values[k] <= 1e-12)
        throw Error(ErrorKind::NonHyperbolic, "coinciding eigenvalues");
    }
  }
  out.left = out.right.inverse();

  for (int k = 0; k < n; ++k) {
    if (!sys.gnl(k + 1)) continue;
    const State r = out.right.col(k);
    const double d = out.left.row(k).dot(sys.curvature(u, r));
    if (std::abs(d) <= 1e-12) continue;  // degenerate point: keep unit length
    out.right.col(k) /= d;
    out.left.row(k) *= d;
  }
  return out;
}

inline double characteristic_speed(const SystemSpec& sys, int family, const State& u) {
  if (sys.n == 1) return sys.jac(u)(0, 0);
  return eigen_decompose(sys, u, false).values[family - 1];
}

// ---------------------------------------------------------------------------
// Built-in systems

inline SystemSpec burgers() {
  SystemSpec s;
  s.name = "burgers";
  s.n = 1;
  s.p = 0;
  s.flux = [](const State& u) { return State(0.5 * u.array().square()); };
  s.jacobian = [](const State& u) { return Matrix::Constant(1, 1, u[0]); };
  s.field_kind = {FieldKind::GenuinelyNonlinear};
  s.domain = {scalar_state(0.5), scalar_state(1.5)};
  s.c = 0.5;
  s.kappa = 1.0;
  s.scalar_f = [](double u) { return 0.5 * u * u; };
  s.scalar_df = [](double u) { return u; };
  s.scalar_d2f = [](double) { return 1.0; };
  return s;
}

/// f(u, v) = (2u + u^2/2 + v^2/10, u^2/10 - 2v + v^2/2); Df(0) = diag(2, -2).
inline SystemSpec coupled2x2() {
  SystemSpec s;
  s.name = "coupled2x2";
  s.n = 2;
  s.p = 1;
  s.flux = [](const State& w) {
    const double u = w[0], v = w[1];
    return make_state({2.0 * u + 0.5 * u * u + 0.1 * v * v, 0.1 * u * u - 2.0 * v + 0.5 * v * v});
  };
  s.jacobian = [](const State& w) {
    const double u = w[0], v = w[1];
    Matrix J(2, 2);
    J << 2.0 + u, 0.2 * v, 0.2 * u, -2.0 + v;
    return J;
  };
  s.field_kind = {FieldKind::GenuinelyNonlinear, FieldKind::GenuinelyNonlinear};
  s.domain = {make_state({-0.5, -0.5}), make_state({0.5, 0.5})};
  s.c = 1.0;
  return s;
}

/// Scalar f(u) = sum_k coeffs[k] u^k.
inline SystemSpec scalar_polynomial(std::vector<double> coeffs, double lo, double hi, int p,
                                    double c) {
  SystemSpec s;
  s.name = "poly";
  s.n = 1;
  s.p = p;
  auto deriv_eval = [coeffs](double u, int deriv) {
    double acc = 0.0;
    for (std::size_t k = static_cast<std::size_t>(deriv); k < coeffs.size(); ++k) {
      double factor = 1.0;
      for (int d = 0; d < deriv; ++d) factor *= static_cast<double>(k) - d;
      acc += factor * coeffs[k] * std::pow(u, static_cast<double>(k) - deriv);
    }
    return acc;
  };
  s.flux = [deriv_eval](const State& u) { return scalar_state(deriv_eval(u[0], 0)); };
  s.scalar_f = [deriv_eval](double u) { return deriv_eval(u, 0); };
  s.scalar_df = [deriv_eval](double u) { return deriv_eval(u, 1); };
  s.scalar_d2f = [deriv_eval](double u) { return deriv_eval(u, 2); };
  s.jacobian = [deriv_eval](const State& u) { return Matrix::Constant(1, 1, deriv_eval(u[0], 1)); };
  s.field_kind = {FieldKind::GenuinelyNonlinear};
  s.domain = {scalar_state(lo), scalar_state(hi)};
  s.c = c;
  // κ = min f'' over Ω (f'' of a polynomial: check endpoints and a fine grid)
  double kmin = kInf;
  for (int k = 0; k <= 256; ++k) kmin = std::min(kmin, deriv_eval(lo + (hi - lo) * k / 256.0, 2));
  if (kmin > 0) s.kappa = kmin;
  bool linear = true;
  for (std::size_t k = 2; k < coeffs.size(); ++k) linear = linear && coeffs[k] == 0.0;
  if (linear) s.field_kind = {FieldKind::LinearlyDegenerate};
  return s;
}

inline SystemSpec make_system(const SystemModel& m) {
  SystemSpec s;
  if (m.name == "burgers") {
    s = burgers();
  } else if (m.name == "coupled2x2") {
    s = coupled2x2();
  } else if (m.name == "poly") {
    if (m.coeffs.empty()) throw Error(ErrorKind::InvalidArgument, "poly system needs coefficients");
    const double lo = m.domain_lo && !m.domain_lo->empty() ? m.domain_lo->front() : 0.5;
    const double hi = m.domain_hi && !m.domain_hi->empty() ? m.domain_hi->front() : 1.5;
    s = scalar_polynomial(m.coeffs, lo, hi, m.p.value_or(0), m.c.value_or(0.5));
  } else {
    throw Error(ErrorKind::InvalidArgument, "unknown system '" + m.name + "'");
  }
  auto to_state = [&](const std::vector<double>& v) {
    if (static_cast<int>(v.size()) != s.n)
      throw Error(ErrorKind::InvalidArgument, "domain bound has wrong dimension");
    State st(s.n);
    for (int k = 0; k < s.n; ++k) st[k] = v[static_cast<std::size_t>(k)];
    return st;
  };
  if (m.domain_lo) s.domain.lo = to_state(*m.domain_lo);
  if (m.domain_hi) s.domain.hi = to_state(*m.domain_hi);
  if (m.p) s.p = *m.p;
  if (m.c) s.c = *m.c;
  if (s.p < 0 || s.p > s.n) throw Error(ErrorKind::InvalidArgument, "split index out of range");
  return s;
}

// ---------------------------------------------------------------------------
// Sources

inline SourceSpec no_source() { return SourceSpec{}; }

inline SourceSpec make_source(const SourceModel& m, const SystemSpec& sys) {
  SourceSpec s;
  if (m.shape == SourceModel::Shape::None) return s;
  State a0 = State::Zero(sys.n);
  if (!m.a0.empty()) {
    if (static_cast<int>(m.a0.size()) != sys.n)
      throw Error(ErrorKind::InvalidArgument, "source offset has wrong dimension");
    for (int k = 0; k < sys.n; ++k) a0[k] = m.a0[static_cast<std::size_t>(k)];
  }
  const double a1 = m.a1;

  double scale = 0.0;
  if (m.omega_scale) {
    scale = *m.omega_scale;
  } else {
    // |a0 + a1 u| is convex in u, so its maximum over the box sits at a corner.
    const int corners = 1 << sys.n;
    for (int mask = 0; mask < corners; ++mask) {
      State u(sys.n);
      for (int k = 0; k < sys.n; ++k)
        u[k] = (mask >> k) & 1 ? sys.domain.hi[k] : sys.domain.lo[k];
      scale = std::max(scale, (a0 + a1 * u).norm());
    }
    scale = std::max(scale, std::abs(a1) * std::sqrt(static_cast<double>(sys.n)));
  }

  std::function<double(double)> shape;
  std::ostringstream desc;
  desc.precision(17);
  switch (m.shape) {
    case SourceModel::Shape::Indicator: {
      const double lo = m.lo, hi = m.hi;
      shape = [lo, hi](double x) { return (x >= lo && x <= hi) ? 1.0 : 0.0; };
      s.support = {lo, hi};
      s.breaks = {lo, hi};
      s.omega_mass = scale * (hi - lo);
      desc << "indicator[" << lo << "," << hi << "]";
      break;
    }
    case SourceModel::Shape::Hat: {
      const double c0 = m.lo, w = m.hi;
      shape = [c0, w](double x) { return std::max(0.0, 1.0 - std::abs(x - c0) / w); };
      s.support = {c0 - w, c0 + w};
      s.breaks = {c0 - w, c0, c0 + w};
      s.omega_mass = scale * w;
      desc << "hat(" << c0 << "," << w << ")";
      break;
    }
    case SourceModel::Shape::Uniform: {
      shape = [](double) { return 1.0; };
      s.support = {-kInf, kInf};
      s.omega_mass = scale == 0.0 ? 0.0 : kInf;
      desc << "uniform";
      break;
    }
    case SourceModel::Shape::None:
      break;
  }
  desc << "*(a0=" << a0.transpose() << ", a1=" << a1 << "), omega_scale=" << scale;
  s.description = desc.str();
  s.g = [shape, a0, a1](double x, const State& u) -> State { return shape(x) * (a0 + a1 * u); };
  if (sys.n == 1) {
    const double b0 = a0[0];
    s.scalar_g = [shape, b0, a1](double x, double u) { return shape(x) * (b0 + a1 * u); };
  }
  s.omega = [shape, scale](double x) { return scale * shape(x); };
  s.omega_sup = scale;
  s.lip_g = std::abs(a1);
  return s;
}

// ---------------------------------------------------------------------------
// Validation

struct AssumptionCheck {
  std::string name;
  bool passed = false;
  double margin = 0.0;
  std::string worst_at;
};

struct ValidationReport {
  std::vector<AssumptionCheck> checks;
  double hyperbolicity_gap = kInf;
  std::size_t state_samples = 0;

  bool all_passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.passed; });
  }
  const AssumptionCheck* find(const std::string& name) const {
    for (const auto& c : checks)
      if (c.name == name) return &c;
    return nullptr;
  }
  std::string to_text() const {
    std::ostringstream os;
    os.precision(12);
    for (const auto& c : checks)
      os << c.name << " = " << (c.passed ? "pass" : "FAIL") << " margin=" << c.margin
         << " at=" << c.worst_at << "\n";
    os << "hyperbolicity_gap = " << hyperbolicity_gap << "\n";
    os << "state_samples = " << state_samples << "\n";
    return os.str();
  }
};

namespace detail {

inline std::string fmt_state(const State& u) {
  std::ostringstream os;
  os.precision(12);
  for (Eigen::Index k = 0; k < u.size(); ++k) os << (k ? " " : "") << u[k];
  return os.str();
}

/// Dyadic grid with 1 + 2^k points per axis; smallest k giving at least `samples` points.
inline std::vector<State> box_samples(const Box& box, std::size_t samples) {
  const int n = static_cast<int>(box.lo.size());
  int k = 1;
  auto total = [&](int kk) { return std::pow((1 << kk) + 1.0, n); };
  while (total(k) < static_cast<double>(samples) && k < 20) ++k;
  const int per = (1 << k) + 1;
  std::vector<State> pts;
  std::vector<int> idx(static_cast<std::size_t>(n), 0);
  while (true) {
    State u(n);
    for (int a = 0; a < n; ++a)
      u[a] = box.lo[a] + (box.hi[a] - box.lo[a]) * idx[static_cast<std::size_t>(a)] / double(per - 1);
    pts.push_back(u);
    int a = 0;
    while (a < n && ++idx[static_cast<std::size_t>(a)] == per) idx[static_cast<std::size_t>(a++)] = 0;
    if (a == n) break;
  }
  return pts;
}

inline Matrix source_gradient(const SourceSpec& src, double x, const State& u) {
  const int n = static_cast<int>(u.size());
  Matrix G(n, n);
  constexpr double d = 1e-6;
  for (int k = 0; k < n; ++k) {
    State a = u, b = u;
    a[k] += d;
    b[k] -= d;
    G.col(k) = (src.eval(x, a) - src.eval(x, b)) / (2 * d);
  }
  return G;
}

}  // namespace detail

inline ValidationReport validate_assumptions(const SystemSpec& sys, const SourceSpec& src,
                                             std::size_t samples) {
  if (samples < 1) samples = 1;
  ValidationReport rep;
  const auto pts = detail::box_samples(sys.domain, samples);
  rep.state_samples = pts.size();

  AssumptionCheck hyp{"hyperbolicity", true, kInf, ""};
  AssumptionCheck nonres{"non_resonance", true, kInf, ""};
  AssumptionCheck fields{"field_classification", true, kInf, ""};

  // Orientation reference for r_i at the domain center.
  std::optional<EigenDecomposition> ref;
  try {
    ref = eigen_decompose(sys, sys.domain.center(), false);
  } catch (const Error&) {
  }

  for (const auto& u : pts) {
    EigenDecomposition ed;
    try {
      ed = eigen_decompose(sys, u, false);
    } catch (const Error&) {
      hyp.passed = false;
      if (hyp.margin > 0 || hyp.worst_at.empty()) {
        hyp.margin = 0.0;
        hyp.worst_at = detail::fmt_state(u);
      }
      continue;
    }
    for (int k = 0; k + 1 < sys.n; ++k) {
      const double gap = ed.values[k + 1] - ed.values[k];
      if (gap < hyp.margin) {
        hyp.margin = gap;
        hyp.worst_at = detail::fmt_state(u);
      }
    }
    for (int k = 0; k < sys.n; ++k) {
      const double lam = ed.values[k];
      const double m = (k + 1 <= sys.p) ? (-sys.c - lam) : (lam - sys.c);
      if (m < nonres.margin) {
        nonres.margin = m;
        nonres.worst_at = detail::fmt_state(u);
      }
      State r = ed.right.col(k).normalized();
      if (ref && r.dot(ref->right.col(k)) < 0) r = -r;
      const State l = ed.left.row(k) * ed.right.col(k).norm();  // l . r_unit = 1
      const double d = l.dot(sys.curvature(u, r));
      const double m_field = sys.gnl(k + 1) ? d : (1e-10 - std::abs(d));
      if (m_field < fields.margin) {
        fields.margin = m_field;
        fields.worst_at = detail::fmt_state(u) + " family " + std::to_string(k + 1);
      }
    }
  }
  if (sys.n == 1) hyp.margin = kInf;
  rep.hyperbolicity_gap = hyp.margin;
  hyp.passed = hyp.passed && hyp.margin > 0;
  nonres.passed = nonres.margin >= -1e-12;
  bool any_gnl = false;
  for (int k = 1; k <= sys.n; ++k) any_gnl = any_gnl || sys.gnl(k);
  // GNL families need a positive lower bound; LD families need |grad λ . r| <= 1e-10.
  fields.passed = any_gnl ? fields.margin > 0 : fields.margin >= 0;
  rep.checks = {hyp, nonres, fields};

  AssumptionCheck dom{"source_domination", true, kInf, ""};
  AssumptionCheck integ{"omega_integrable", true, 0.0, ""};
  if (!src.is_zero()) {
    double a = src.support.lo, b = src.support.hi;
    if (!std::isfinite(a) || !std::isfinite(b)) {
      // unbounded support: sample a window and flag integrability
      a = -10.0;
      b = 10.0;
      integ.passed = src.omega_mass == 0.0;
      integ.margin = -kInf;
      integ.worst_at = "unbounded support";
    }
    const auto xs = detail::box_samples({scalar_state(a), scalar_state(b)},
                                        std::max<std::size_t>(257, std::min<std::size_t>(samples, 1025)));
    for (const auto& xv : xs) {
      const double x = xv[0];
      const double w = src.weight(x);
      for (const auto& u : pts) {
        const double gn = src.eval(x, u).norm();
        const double gg = detail::source_gradient(src, x, u).norm();
        if (w == 0.0 && gn == 0.0 && gg < 1e-12) continue;
        const double m = std::min(w - gn, w - gg);
        if (m < dom.margin) {
          dom.margin = m;
          dom.worst_at = "x=" + std::to_string(x) + " u=" + detail::fmt_state(u);
        }
      }
    }
    // the u-gradient is a central difference, good to about 1e-10
    dom.passed = dom.margin >= -1e-9;
    if (std::isfinite(src.support.lo) && std::isfinite(src.support.hi)) {
      const double q = quad::composite_gauss4(
          [&](double x) { return src.weight(x); }, src.support.lo, src.support.hi, 4096);
      const double err = std::abs(q - src.omega_mass);
      const double rel = src.omega_mass != 0.0 ? err / std::abs(src.omega_mass) : err;
      integ.margin = 1e-6 - rel;
      integ.passed = rel <= 1e-6;
      integ.worst_at = "quadrature=" + std::to_string(q);
    }
  }
  rep.checks.push_back(dom);
  rep.checks.push_back(integ);
  return rep;
}

}  // namespace wft
