#pragma once

#include "wft/profile.hpp"
#include "wft/riemann.hpp"

#include <sstream>

namespace wft {

// ---------------------------------------------------------------------------
// Exact scalar solutions and bounds

/// e^{L t} / (κ t): one-sided slope bound for u_t + f(u)_x = g(x, u) with f'' ≥ κ, Lip(g) = L.
inline double riccati_bound(double kappa, double lip_g, double t) {
  if (!(kappa > 0.0) || !(t > 0.0))
    throw Error(ErrorKind::InvalidArgument, "riccati_bound needs kappa > 0 and t > 0");
  return std::exp(lip_g * t) / (kappa * t);
}

/// Solution of z' = −κ z² + L z with z(0) = z0 (z0 = inf gives the blow-down from +inf).
inline double riccati_solution(double kappa, double lip_g, double z0, double t) {
  const double growth = std::exp(lip_g * t);
  const double inv0 = std::isinf(z0) ? 0.0 : 1.0 / z0;
  const double integral = lip_g == 0.0 ? t : (growth - 1.0) / lip_g;
  return growth / (inv0 + kappa * integral);
}

/// Entropy solution of a convex scalar conservation law by minimizing
/// y -> U0(y) + t f*((x − y)/t) on a grid of spacing `resolution`, refined by ternary search.
class LaxOleinik {
 public:
  LaxOleinik(const SystemSpec& sys, const Profile& u0, double t, double x_lo, double x_hi,
             double resolution = 1e-4)
      : sys_(sys), u0_(u0), t_(t), res_(resolution) {
    if (sys.n != 1) throw Error(ErrorKind::InvalidArgument, "Lax–Oleinik needs a scalar flux");
    if (!sys_.scalar_df) {
      sys_.scalar_df = [s = sys_](double u) { return s.jac(scalar_state(u))(0, 0); };
      sys_.scalar_f = [s = sys_](double u) { return s.f(scalar_state(u))[0]; };
      sys_.scalar_d2f = [s = sys_](double u) { return s.curvature(scalar_state(u), scalar_state(1.0))[0]; };
    }
    const auto [lo, hi] = u0.value_range();
    u_lo_ = lo;
    u_hi_ = hi;
    q_lo_ = sys_.scalar_df(lo);
    q_hi_ = sys_.scalar_df(hi);
    if (!(q_hi_ >= q_lo_)) throw Error(ErrorKind::InvalidArgument, "flux is not convex on the data range");
    if (t_ <= 0.0) return;
    y0_ = x_lo - t_ * q_hi_ - 2.0 * res_;
    const double y1 = x_hi - t_ * q_lo_ + 2.0 * res_;
    const auto cells = static_cast<std::size_t>(std::ceil((y1 - y0_) / res_)) + 1;
    cum_.resize(cells + 1);
    cum_[0] = 0.0;
    for (std::size_t k = 0; k < cells; ++k) {
      const double a = y0_ + static_cast<double>(k) * res_;
      cum_[k + 1] = cum_[k] + u0_.integral(a, a + res_, 1)[0];
    }
  }

  double operator()(double x) const {
    if (t_ <= 0.0) return u0_.at(x)[0];
    const double ya = x - t_ * q_hi_, yb = x - t_ * q_lo_;
    if (yb - ya <= 0.0) return u0_.at(x)[0];
    const auto steps = static_cast<long>(std::ceil((yb - ya) / res_));
    double best = kInf, best_y = ya;
    for (long k = 0; k <= steps; ++k) {
      const double y = std::min(yb, ya + static_cast<double>(k) * res_);
      const double v = objective(x, y);
      if (v < best) {
        best = v;
        best_y = y;
      }
    }
    double lo = std::max(ya, best_y - res_), hi = std::min(yb, best_y + res_);
    for (int it = 0; it < 200 && hi - lo > 1e-15 * (1.0 + std::abs(lo)); ++it) {
      const double m1 = lo + (hi - lo) / 3.0, m2 = hi - (hi - lo) / 3.0;
      if (objective(x, m1) <= objective(x, m2)) hi = m2;
      else lo = m1;
    }
    double y = 0.5 * (lo + hi);
    if (objective(x, best_y) < objective(x, y)) y = best_y;
    return speed_inverse((x - y) / t_);
  }

 private:
  double U0(double y) const {
    const double pos = (y - y0_) / res_;
    auto k = static_cast<long>(std::floor(pos));
    k = std::clamp<long>(k, 0, static_cast<long>(cum_.size()) - 1);
    const double yk = y0_ + static_cast<double>(k) * res_;
    return cum_[static_cast<std::size_t>(k)] + u0_.integral(yk, y, 1)[0];
  }

  double speed_inverse(double q) const {
    if (q <= q_lo_) return u_lo_;
    if (q >= q_hi_) return u_hi_;
    double lo = u_lo_, hi = u_hi_;
    double w = u_lo_ + (u_hi_ - u_lo_) * (q - q_lo_) / (q_hi_ - q_lo_);
    for (int it = 0; it < 100; ++it) {
      const double r = sys_.scalar_df(w) - q;
      if (r == 0.0) break;
      if (r > 0) hi = w;
      else lo = w;
      const double d2 = sys_.scalar_d2f(w);
      double next = d2 > 0 ? w - r / d2 : 0.5 * (lo + hi);
      if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
      if (next == w || hi - lo < 1e-16) break;
      w = next;
    }
    return w;
  }

  /// f*(q) = q v − f(v) with f'(v) = q; linear continuation outside the data range.
  double conjugate(double q) const {
    const double v = speed_inverse(q);
    return q * v - sys_.scalar_f(v);
  }

  double objective(double x, double y) const { return U0(y) + t_ * conjugate((x - y) / t_); }

  SystemSpec sys_;
  const Profile& u0_;
  double t_;
  double res_;
  double u_lo_ = 0.0, u_hi_ = 0.0, q_lo_ = 0.0, q_hi_ = 0.0;
  double y0_ = 0.0;
  std::vector<double> cum_;
};

inline double lax_oleinik(const SystemSpec& sys, const Profile& u0, double t, double x) {
  return LaxOleinik(sys, u0, t, x, x)(x);
}

/// Midpoint sampling of the Lax–Oleinik solution on `cells` equal cells of [lo, hi].
inline StepProfile lax_oleinik_profile(const SystemSpec& sys, const Profile& u0, double t,
                                       double lo, double hi, std::size_t cells) {
  const LaxOleinik lo_sol(sys, u0, t, lo, hi);
  StepProfile sp;
  const double dx = (hi - lo) / static_cast<double>(cells);
  for (std::size_t k = 0; k < cells; ++k) {
    if (k) sp.breaks.push_back(lo + static_cast<double>(k) * dx);
    sp.values.push_back(scalar_state(lo_sol(lo + (static_cast<double>(k) + 0.5) * dx)));
  }
  return sp;
}

// ---------------------------------------------------------------------------
// Finite-volume reference

struct GridSpec {
  double x_min = -1.0;
  double x_max = 1.0;
  std::size_t cells = 1000;
};

struct GridSolution {
  double x_min = 0.0;
  double x_max = 0.0;
  double dx = 0.0;
  double cfl = 0.0;
  double dt = 0.0;
  std::size_t steps = 0;
  std::vector<double> level_times;
  std::vector<std::vector<State>> levels;  // cell averages, levels.back() at t_end

  const std::vector<State>& final_cells() const { return levels.back(); }

  StepProfile to_profile(std::size_t level) const {
    StepProfile sp;
    const auto& c = levels.at(level);
    for (std::size_t k = 0; k < c.size(); ++k) {
      if (k) sp.breaks.push_back(x_min + static_cast<double>(k) * dx);
      sp.values.push_back(c[k]);
    }
    return sp;
  }
  StepProfile to_profile() const { return to_profile(levels.size() - 1); }

  /// Same layout as a front-diagram profile dump: x_lo, x_hi, components.
  std::string to_csv(std::size_t level) const {
    std::ostringstream os;
    os.precision(17);
    os << "# t=" << level_times.at(level) << " dx=" << dx << " cfl=" << cfl << "\n";
    os << "x_lo,x_hi,u\n";
    const auto& c = levels.at(level);
    for (std::size_t k = 0; k < c.size(); ++k) {
      os << x_min + static_cast<double>(k) * dx << ',' << x_min + static_cast<double>(k + 1) * dx << ',';
      for (Eigen::Index j = 0; j < c[k].size(); ++j) os << (j ? " " : "") << c[k][j];
      os << "\n";
    }
    return os.str();
  }
};

/// First-order Godunov scheme (exact Riemann solver at interfaces) with Strang splitting of
/// the source, midpoint rule for the ODE half-steps and transmissive boundaries.
inline GridSolution godunov_split(const SystemSpec& sys, const SourceSpec& src, const Profile& u0,
                                  const GridSpec& grid, double t_end, double cfl = 0.45,
                                  std::size_t extra_levels = 0) {
  if (!(cfl > 0.0 && cfl <= 0.5)) throw Error(ErrorKind::CFLViolation, "CFL number must lie in (0, 0.5]");
  if (!(grid.x_max > grid.x_min) || grid.cells < 2)
    throw Error(ErrorKind::InvalidArgument, "bad grid");
  const int n = sys.n;
  GridSolution sol;
  sol.x_min = grid.x_min;
  sol.x_max = grid.x_max;
  sol.dx = (grid.x_max - grid.x_min) / static_cast<double>(grid.cells);
  sol.cfl = cfl;
  const std::size_t N = grid.cells;

  double max_speed = 0.0;
  for (const auto& u : detail::box_samples(sys.domain, 1000))
    max_speed = std::max(max_speed, eigen_decompose(sys, u, false).values.cwiseAbs().maxCoeff());
  if (!(max_speed > 0.0)) throw Error(ErrorKind::CFLViolation, "zero characteristic speed bound");
  const double dt_max = cfl * sol.dx / max_speed;
  sol.steps = static_cast<std::size_t>(std::ceil(t_end / dt_max));
  if (sol.steps == 0) sol.steps = 1;
  sol.dt = t_end / static_cast<double>(sol.steps);
  if (sol.dt * max_speed / sol.dx > 0.5 + 1e-12) throw Error(ErrorKind::CFLViolation, "time step too large");

  std::vector<State> u(N);
  for (std::size_t k = 0; k < N; ++k) {
    const double a = grid.x_min + static_cast<double>(k) * sol.dx;
    u[k] = u0.average(a, a + sol.dx);
    detail::require_in_domain(sys, u[k], "initial cell average");
  }
  sol.level_times.push_back(0.0);
  sol.levels.push_back(u);

  const bool fast = n == 1 && sys.scalar_f && (src.is_zero() || src.scalar_g);
  std::vector<double> xc(N);
  for (std::size_t k = 0; k < N; ++k) xc[k] = grid.x_min + (static_cast<double>(k) + 0.5) * sol.dx;

  const double dt = sol.dt, lam = dt / sol.dx;
  auto source_half = [&](std::vector<State>& v) {
    if (src.is_zero()) return;
    const double hdt = 0.5 * dt;
    for (std::size_t k = 0; k < N; ++k) {
      if (fast) {
        const double w = v[k][0];
        const double mid = w + 0.5 * hdt * src.scalar_g(xc[k], w);
        v[k][0] = w + hdt * src.scalar_g(xc[k], mid);
      } else {
        const State mid = v[k] + 0.5 * hdt * src.eval(xc[k], v[k]);
        v[k] += hdt * src.eval(xc[k], mid);
      }
    }
  };

  std::vector<double> us(fast ? N : 0), flux(fast ? N + 1 : 0);
  std::vector<State> F(fast ? 0 : N + 1);
  const std::size_t every = extra_levels ? std::max<std::size_t>(1, sol.steps / (extra_levels + 1)) : 0;
  for (std::size_t step = 0; step < sol.steps; ++step) {
    source_half(u);
    if (fast) {
      for (std::size_t k = 0; k < N; ++k) us[k] = u[k][0];
      // scalar non-resonant: upwind in the direction of the sign of f'
      const bool right_moving = sys.p == 0;
      for (std::size_t k = 0; k <= N; ++k) {
        const double ul = us[k == 0 ? 0 : k - 1], ur = us[k == N ? N - 1 : k];
        flux[k] = sys.scalar_f(right_moving ? ul : ur);
      }
      for (std::size_t k = 0; k < N; ++k) u[k][0] = us[k] - lam * (flux[k + 1] - flux[k]);
    } else {
      for (std::size_t k = 0; k <= N; ++k) {
        const State& ul = u[k == 0 ? 0 : k - 1];
        const State& ur = u[k == N ? N - 1 : k];
        if (ul == ur) {
          F[k] = sys.f(ul);
          continue;
        }
        const WaveFan fan = solve_homogeneous(sys, ul, ur);
        F[k] = sys.f(fan.intermediate_states[static_cast<std::size_t>(sys.p)]);
      }
      for (std::size_t k = 0; k < N; ++k) u[k] -= lam * (F[k + 1] - F[k]);
    }
    source_half(u);
    for (std::size_t k = 0; k < N; ++k) {
      if (!sys.domain.contains(u[k], 1e-9)) {
        std::ostringstream os;
        os << "cell " << k << " left the domain at step " << step << ": (" << u[k].transpose() << ")";
        throw Error(ErrorKind::DomainEscape, os.str());
      }
    }
    if (every && (step + 1) % every == 0 && step + 1 < sol.steps) {
      sol.level_times.push_back(static_cast<double>(step + 1) * dt);
      sol.levels.push_back(u);
    }
  }
  sol.level_times.push_back(t_end);
  sol.levels.push_back(u);
  return sol;
}

inline double l1_distance(const StepProfile& a, const GridSolution& b, double lo, double hi) {
  return l1_distance(a, b.to_profile(), lo, hi);
}

}  // namespace wft
