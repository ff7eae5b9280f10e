#pragma once

#include "wft/system_model.hpp"

#include <optional>

namespace wft {

enum class WaveKind { Shock, Rarefaction, Contact, ZeroJump };

inline const char* to_string(WaveKind k) {
  switch (k) {
    case WaveKind::Shock: return "shock";
    case WaveKind::Rarefaction: return "rarefaction";
    case WaveKind::Contact: return "contact";
    case WaveKind::ZeroJump: return "zero";
  }
  return "?";
}

struct ElementaryWave {
  int family = 0;  // 0 for the zero jump
  WaveKind kind = WaveKind::Shock;
  State left_state;
  State right_state;
  double speed_lo = 0.0;
  double speed_hi = 0.0;
  double strength = 0.0;  // λ-difference for GNL families, curve parameter for LD, ∫ω for zero
  double param = 0.0;     // wave-curve parameter

  double speed() const { return kind == WaveKind::Rarefaction ? speed_hi : speed_lo; }
};

struct WaveFan {
  std::vector<ElementaryWave> waves;
  std::vector<State> intermediate_states;  // u_l, ..., u_r
  std::optional<State> u_minus;
  std::optional<State> u_plus;
  State params;  // one wave-curve parameter per family

  const State& left() const { return intermediate_states.front(); }
  const State& right() const { return intermediate_states.back(); }
};

namespace detail {

inline void require_in_domain(const SystemSpec& sys, const State& u, const char* what) {
  if (!sys.domain.contains(u)) {
    std::ostringstream os;
    os << what << " (" << u.transpose() << ") outside the domain of " << sys.name;
    throw Error(ErrorKind::OutOfDomain, os.str());
  }
}

/// Normalized i-th right eigenvector, sign-aligned with `prev` when given.
inline State field_direction(const SystemSpec& sys, int family, const State& u, const State* prev) {
  const auto ed = eigen_decompose(sys, u, false);
  State r = ed.right.col(family - 1);
  if (prev && r.dot(*prev) < 0) r = -r;
  return r;
}

inline State integral_curve(const SystemSpec& sys, int family, const State& u0, double s) {
  const int steps = std::max(1, static_cast<int>(std::ceil(std::abs(s) / 1e-3)));
  const double ds = s / steps;
  State u = u0;
  State prev = field_direction(sys, family, u0, nullptr);
  for (int k = 0; k < steps; ++k) {
    const State k1 = field_direction(sys, family, u, &prev);
    const State k2 = field_direction(sys, family, u + 0.5 * ds * k1, &k1);
    const State k3 = field_direction(sys, family, u + 0.5 * ds * k2, &k2);
    const State k4 = field_direction(sys, family, u + ds * k3, &k3);
    u += ds / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    prev = k4;
    if (!sys.domain.contains(u)) {
      std::ostringstream os;
      os << "integral curve of family " << family << " left the domain at (" << u.transpose() << ")";
      throw Error(ErrorKind::CurveLeftDomain, os.str());
    }
  }
  return u;
}

inline State hugoniot_point(const SystemSpec& sys, int family, const State& u0, double eps) {
  const int n = sys.n;
  const auto ed0 = eigen_decompose(sys, u0, false);
  const State r0 = ed0.right.col(family - 1);
  const State l0 = ed0.left.row(family - 1).transpose();
  const State f0 = sys.f(u0);

  State u = u0 + eps * r0;
  double s = ed0.values[family - 1] + 0.5 * eps;

  auto residual = [&](const State& w, double sp) {
    State F(n + 1);
    F.head(n) = sys.f(w) - f0 - sp * (w - u0);
    F[n] = l0.dot(w - u0) - eps;
    return F;
  };
  State F = residual(u, s);
  double best = F.norm();
  int stalls = 0;
  for (int it = 0; it < 50; ++it) {
    if (best <= 1e-15 * (1.0 + f0.norm())) break;
    Matrix Jb = Matrix::Zero(n + 1, n + 1);
    Jb.topLeftCorner(n, n) = sys.jac(u) - s * Matrix::Identity(n, n);
    Jb.topRightCorner(n, 1) = -(u - u0);
    Jb.bottomLeftCorner(1, n) = l0.transpose();
    const State step = Jb.partialPivLu().solve(-F);
    double lam = 1.0;
    bool improved = false;
    for (int h = 0; h < 30; ++h, lam *= 0.5) {
      const State ut = u + lam * step.head(n);
      const double st = s + lam * step[n];
      const State Ft = residual(ut, st);
      if (Ft.norm() < best) {
        u = ut;
        s = st;
        F = Ft;
        best = Ft.norm();
        improved = true;
        break;
      }
    }
    if (!improved && ++stalls >= 2) break;
  }
  if (!(best <= 1e-11)) {
    std::ostringstream os;
    os << "Hugoniot locus of family " << family << " at eps=" << eps << ", residual " << best;
    throw Error(ErrorKind::NewtonDiverged, os.str());
  }
  if (!sys.domain.contains(u)) {
    std::ostringstream os;
    os << "shock curve of family " << family << " left the domain at (" << u.transpose() << ")";
    throw Error(ErrorKind::CurveLeftDomain, os.str());
  }
  return u;
}

/// Scalar GNL: solve λ(w) = target.
inline double scalar_speed_inverse(const SystemSpec& sys, double u0, double target) {
  double w = u0;
  const State one = scalar_state(1.0);
  for (int it = 0; it < 60; ++it) {
    const State ws = scalar_state(w);
    const double res = sys.jac(ws)(0, 0) - target;
    if (std::abs(res) <= 1e-15 * (1.0 + std::abs(target))) break;
    const double d2 = sys.curvature(ws, one)[0];
    if (d2 == 0.0) throw Error(ErrorKind::NewtonDiverged, "flat flux in scalar speed inverse");
    const double next = w - res / d2;
    if (next == w) break;
    w = next;
  }
  return w;
}

}  // namespace detail

inline double wave_strength(const SystemSpec& sys, int family, const State& ul, const State& ur,
                            double param) {
  if (!sys.gnl(family)) return param;
  return characteristic_speed(sys, family, ur) - characteristic_speed(sys, family, ul);
}

/// Point at parameter `eps` on the i-th Lax wave curve through u0: the integral curve of
/// r_i for eps >= 0 (or any eps on an LD family), the Hugoniot locus for eps < 0.
inline State wave_curve(const SystemSpec& sys, int family, const State& u0, double eps) {
  if (family < 1 || family > sys.n) throw Error(ErrorKind::InvalidArgument, "bad family index");
  detail::require_in_domain(sys, u0, "wave curve base point");
  if (eps == 0.0) return u0;
  State out;
  if (sys.n == 1) {
    if (sys.gnl(1)) {
      const double target = sys.jac(u0)(0, 0) + eps;
      out = scalar_state(detail::scalar_speed_inverse(sys, u0[0], target));
    } else {
      out = scalar_state(u0[0] + eps);
    }
    if (!sys.domain.contains(out)) {
      std::ostringstream os;
      os << "scalar wave curve left the domain at " << out[0];
      throw Error(ErrorKind::CurveLeftDomain, os.str());
    }
    return out;
  }
  if (eps > 0.0 || !sys.gnl(family)) return detail::integral_curve(sys, family, u0, eps);
  return detail::hugoniot_point(sys, family, u0, eps);
}

inline ElementaryWave make_wave(const SystemSpec& sys, int family, const State& ul, const State& ur,
                                double param) {
  ElementaryWave w;
  w.family = family;
  w.left_state = ul;
  w.right_state = ur;
  w.param = param;
  const double lam_l = characteristic_speed(sys, family, ul);
  const double lam_r = characteristic_speed(sys, family, ur);
  if (!sys.gnl(family)) {
    w.kind = WaveKind::Contact;
    w.speed_lo = w.speed_hi = lam_l;
    w.strength = param;
  } else if (param > 0.0) {
    w.kind = WaveKind::Rarefaction;
    w.speed_lo = lam_l;
    w.speed_hi = lam_r;
    w.strength = lam_r - lam_l;
  } else {
    w.kind = WaveKind::Shock;
    const State du = ur - ul;
    const State df = sys.f(ur) - sys.f(ul);
    const double s = du.dot(df) / du.squaredNorm();
    w.speed_lo = w.speed_hi = s;
    w.strength = lam_r - lam_l;
  }
  return w;
}

namespace detail {

using ChainFn = std::function<State(const State& eps, std::vector<State>* states)>;

/// Damped Newton on G(eps) = chain(eps) - target with a central-difference Jacobian.
inline State newton_strengths(const ChainFn& chain, const State& target, int n, const char* what) {
  State eps = State::Zero(n);
  auto G = [&](const State& e) { return State(chain(e, nullptr) - target); };
  State r = G(eps);
  double best = r.norm();
  int stalls = 0;
  for (int it = 0; it < 50; ++it) {
    if (best <= 1e-14) break;
    Matrix J(n, n);
    for (int k = 0; k < n; ++k) {
      const double d = 1e-7 * std::max(1.0, std::abs(eps[k]));
      State ep = eps, em = eps;
      ep[k] += d;
      em[k] -= d;
      J.col(k) = (G(ep) - G(em)) / (2 * d);
    }
    const State step = J.partialPivLu().solve(-r);
    double lam = 1.0;
    bool improved = false;
    for (int h = 0; h < 30; ++h, lam *= 0.5) {
      State trial = eps + lam * step;
      State rt;
      try {
        rt = G(trial);
      } catch (const Error&) {
        continue;
      }
      if (rt.norm() < best) {
        eps = trial;
        r = rt;
        best = rt.norm();
        improved = true;
        break;
      }
    }
    if (!improved && ++stalls >= 2) break;
  }
  if (!(best <= 1e-10)) {
    std::ostringstream os;
    os << what << ": residual " << best << " after Newton";
    throw Error(ErrorKind::NewtonDiverged, os.str());
  }
  return eps;
}

inline std::vector<ElementaryWave> waves_from_chain(const SystemSpec& sys, int first_family,
                                                    const std::vector<State>& states,
                                                    const State& eps) {
  std::vector<ElementaryWave> out;
  for (std::size_t k = 0; k + 1 < states.size(); ++k) {
    const int fam = first_family + static_cast<int>(k);
    const double e = eps[fam - 1];
    if (e == 0.0) continue;
    out.push_back(make_wave(sys, fam, states[k], states[k + 1], e));
  }
  return out;
}

inline void zero_tiny(State& eps) {
  for (Eigen::Index k = 0; k < eps.size(); ++k)
    if (std::abs(eps[k]) <= 1e-14) eps[k] = 0.0;
}

}  // namespace detail

/// Classical Lax Riemann solver: n elementary waves connecting u_l to u_r.
inline WaveFan solve_homogeneous(const SystemSpec& sys, const State& ul, const State& ur) {
  detail::require_in_domain(sys, ul, "left state");
  detail::require_in_domain(sys, ur, "right state");
  const int n = sys.n;
  WaveFan fan;
  if (n == 1) {
    const double e = sys.gnl(1) ? sys.jac(ur)(0, 0) - sys.jac(ul)(0, 0) : ur[0] - ul[0];
    fan.params = scalar_state(e);
    fan.intermediate_states = {ul, ur};
    if (ul[0] != ur[0]) fan.waves.push_back(make_wave(sys, 1, ul, ur, e));
    return fan;
  }

  auto chain = [&](const State& eps, std::vector<State>* states) {
    State u = ul;
    if (states) states->push_back(u);
    for (int k = 1; k <= n; ++k) {
      u = wave_curve(sys, k, u, eps[k - 1]);
      if (states) states->push_back(u);
    }
    return u;
  };
  State eps = (ul == ur) ? State(State::Zero(n))
                         : detail::newton_strengths(chain, ur, n, "homogeneous Riemann problem");
  detail::zero_tiny(eps);
  std::vector<State> states;
  chain(eps, &states);
  states.back() = ur;
  fan.params = eps;
  fan.intermediate_states = states;
  fan.waves = detail::waves_from_chain(sys, 1, states, eps);
  return fan;
}

namespace detail {

// [a, b] cut at the source breaks inside it
inline std::vector<double> cell_cuts(const SourceSpec& src, double a, double b) {
  std::vector<double> c{a};
  for (double x : src.breaks)
    if (x > a && x < b) c.push_back(x);
  std::sort(c.begin() + 1, c.end());
  c.push_back(b);
  return c;
}

}  // namespace detail

/// ∫_0^h ω(x_o + s) ds, 4-point Gauss–Legendre on each smooth piece.
inline double zero_wave_strength(const SourceSpec& src, double x_o, double h) {
  if (!src.omega) return 0.0;
  const auto c = detail::cell_cuts(src, x_o, x_o + h);
  double acc = 0.0;
  for (std::size_t k = 0; k + 1 < c.size(); ++k)
    acc += quad::gauss4_scalar([&](double x) { return src.weight(x); }, c[k], c[k + 1]);
  return acc;
}

/// ∫_0^h g(x_o + s, u) ds with u frozen, piecewise 4-point Gauss–Legendre.
inline State frozen_source_integral(const SourceSpec& src, double x_o, double h, const State& u) {
  if (src.is_zero()) return State::Zero(u.size());
  const auto c = detail::cell_cuts(src, x_o, x_o + h);
  State acc = State::Zero(u.size());
  for (std::size_t k = 0; k + 1 < c.size(); ++k)
    acc += quad::gauss4([&](double x) { return src.eval(x, u); }, c[k], c[k + 1]);
  return acc;
}

/// Φ_h(x_o, u) = f^{-1}[f(u) + ∫_0^h g(x_o + s, u) ds].
inline State phi_h(const SystemSpec& sys, const SourceSpec& src, double x_o, double h,
                   const State& u) {
  detail::require_in_domain(sys, u, "Φ_h argument");
  if (src.is_zero()) return u;
  const State q = frozen_source_integral(src, x_o, h, u);
  if (q.isZero(0.0)) return u;
  const State target = sys.f(u) + q;
  State w = u;
  State res = sys.f(w) - target;
  double best = res.norm();
  for (int it = 0; it < 50 && best > 1e-15 * (1.0 + target.norm()); ++it) {
    const State step = sys.jac(w).partialPivLu().solve(-res);
    const State wn = w + step;
    const State rn = sys.f(wn) - target;
    if (!(rn.norm() < best)) break;
    w = wn;
    res = rn;
    best = rn.norm();
  }
  if (!(best <= 1e-12)) {
    std::ostringstream os;
    os << "flux inversion residual " << best;
    throw Error(ErrorKind::InverseDiverged, os.str());
  }
  if (!sys.domain.contains(w)) {
    std::ostringstream os;
    os << "Φ_h image (" << w.transpose() << ") outside the domain";
    throw Error(ErrorKind::OutOfDomain, os.str());
  }
  return w;
}

/// h-Riemann solver: families 1..p from u_l to u⁻, a zero jump u⁻ -> u⁺ = Φ_h(x_o, u⁻) at
/// speed 0, families p+1..n from u⁺ to u_r.
inline WaveFan solve_h(const SystemSpec& sys, const SourceSpec& src, double x_o, double h,
                       const State& ul, const State& ur) {
  detail::require_in_domain(sys, ul, "left state");
  detail::require_in_domain(sys, ur, "right state");
  const int n = sys.n;
  const int p = sys.p;

  auto chain = [&](const State& eps, std::vector<State>* states) {
    State u = ul;
    if (states) states->push_back(u);
    for (int k = 1; k <= p; ++k) {
      u = wave_curve(sys, k, u, eps[k - 1]);
      if (states) states->push_back(u);
    }
    u = phi_h(sys, src, x_o, h, u);
    if (states) states->push_back(u);
    for (int k = p + 1; k <= n; ++k) {
      u = wave_curve(sys, k, u, eps[k - 1]);
      if (states) states->push_back(u);
    }
    return u;
  };

  State eps;
  if (n == 1 && p == 0) {
    const State up = phi_h(sys, src, x_o, h, ul);
    eps = scalar_state(sys.gnl(1) ? sys.jac(ur)(0, 0) - sys.jac(up)(0, 0) : ur[0] - up[0]);
  } else {
    eps = detail::newton_strengths(chain, ur, n, "h-Riemann problem");
  }
  detail::zero_tiny(eps);
  std::vector<State> states;
  chain(eps, &states);
  states.back() = ur;

  // states: [u_l, (p states), u⁺, (n - p states)] with u⁻ = states[p]
  WaveFan fan;
  fan.params = eps;
  fan.u_minus = states[static_cast<std::size_t>(p)];
  fan.u_plus = states[static_cast<std::size_t>(p) + 1];
  std::vector<State> left_chain(states.begin(), states.begin() + p + 1);
  std::vector<State> right_chain(states.begin() + p + 1, states.end());
  fan.waves = detail::waves_from_chain(sys, 1, left_chain, eps);
  ElementaryWave z;
  z.family = 0;
  z.kind = WaveKind::ZeroJump;
  z.left_state = *fan.u_minus;
  z.right_state = *fan.u_plus;
  z.strength = zero_wave_strength(src, x_o, h);
  fan.waves.push_back(z);
  for (auto& w : detail::waves_from_chain(sys, p + 1, right_chain, eps)) fan.waves.push_back(w);
  fan.intermediate_states = states;

  for (const auto& w : fan.waves) {
    if (w.kind == WaveKind::ZeroJump) continue;
    const bool left = w.family <= p;
    if ((left && !(w.speed_hi < 0.0)) || (!left && !(w.speed_lo > 0.0))) {
      std::ostringstream os;
      os << "h-fan wave of family " << w.family << " has speed on the wrong side of the zero wave";
      throw Error(ErrorKind::NewtonDiverged, os.str());
    }
  }
  return fan;
}

/// State of the self-similar fan solution along the ray (x - x_o)/t = xi.
inline State sample_fan(const SystemSpec& sys, const WaveFan& fan, double xi) {
  for (const auto& w : fan.waves) {
    if (xi < w.speed_lo) return w.left_state;
    if (w.kind == WaveKind::Rarefaction && xi < w.speed_hi)
      return wave_curve(sys, w.family, w.left_state, xi - w.speed_lo);
  }
  return fan.right();
}

}  // namespace wft
