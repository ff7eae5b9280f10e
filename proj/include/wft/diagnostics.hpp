#pragma once

#include "wft/tracker.hpp"

#include <map>
#include <sstream>

namespace wft {

// ---------------------------------------------------------------------------
// Wave measures

struct Atom {
  double x = 0.0;
  double sigma = 0.0;
};

/// Atomic measures μ^i at one time; atoms[i - 1] lists the family-i physical fronts.
struct WaveMeasureSlice {
  double time = 0.0;
  std::vector<std::vector<Atom>> atoms;

  double mu_plus(int i, const IntervalUnion& J, bool open = false) const {
    return sum(i, J, open, [](double s) { return std::max(s, 0.0); });
  }
  double mu_minus(int i, const IntervalUnion& J, bool open = false) const {
    return sum(i, J, open, [](double s) { return std::max(-s, 0.0); });
  }
  double mu(int i, const IntervalUnion& J, bool open = false) const {
    return sum(i, J, open, [](double s) { return s; });
  }
  double mu_abs(int i, const IntervalUnion& J, bool open = false) const {
    return sum(i, J, open, [](double s) { return std::abs(s); });
  }

 private:
  template <class F>
  double sum(int i, const IntervalUnion& J, bool open, F&& part) const {
    double acc = 0.0;
    for (const auto& a : atoms.at(static_cast<std::size_t>(i - 1)))
      if (open ? J.contains_open(a.x) : J.contains(a.x)) acc += part(a.sigma);
    return acc;
  }
};

template <class Ids, class Get>
WaveMeasureSlice wave_measure(const Ids& order, Get&& get, int n, double t) {
  WaveMeasureSlice s;
  s.time = t;
  s.atoms.resize(static_cast<std::size_t>(n));
  for (const auto& id : order) {
    const Front& f = get(id);
    if (!f.physical()) continue;
    s.atoms[static_cast<std::size_t>(f.family - 1)].push_back({f.position(t), f.strength});
  }
  return s;
}

inline WaveMeasureSlice wave_measure(const TrajectoryLog& log, const std::vector<int>& order,
                                     double t) {
  return wave_measure(order, [&](int id) -> const Front& { return log.front(id); }, log.n, t);
}

inline WaveMeasureSlice wave_measure(const TrajectoryLog& log, double t) {
  const Snapshots s = snapshots(log);
  return wave_measure(log, s.orders[s.post(t)], t);
}

// ---------------------------------------------------------------------------
// Glimm functionals

inline double zero_strength(const SourceSpec& src, long j, double h) {
  return zero_wave_strength(src, static_cast<double>(j) * h, h);
}

struct FunctionalSeries {
  double C0 = 10.0;
  double omega_mass = 0.0;
  std::vector<double> times;
  std::vector<double> V, Q, V_wave, Q_wave, V_np, V_h, Q_h, upsilon;
  std::vector<double> event_dQ;
  std::vector<std::size_t> flagged_events;  // physical-physical events with ΔQ > 0

  std::string to_csv() const {
    std::ostringstream os;
    os << "# C0=" << detail::fmt(C0) << " omega_mass=" << detail::fmt(omega_mass) << "\n";
    os << "t,V,Q,V_wave,Q_wave,V_np,V_h,Q_h,Upsilon_h\n";
    for (std::size_t k = 0; k < times.size(); ++k)
      os << detail::fmt(times[k]) << ',' << detail::fmt(V[k]) << ',' << detail::fmt(Q[k]) << ','
         << detail::fmt(V_wave[k]) << ',' << detail::fmt(Q_wave[k]) << ',' << detail::fmt(V_np[k])
         << ',' << detail::fmt(V_h[k]) << ',' << detail::fmt(Q_h[k]) << ','
         << detail::fmt(upsilon[k]) << "\n";
    return os.str();
  }
};

/// V, Q (zero fronts included), V_h = V_wave + ‖ω‖, Q_h = Q and Υ_h = V_h + C0 Q_h at every
/// snapshot of the log.
inline FunctionalSeries functionals(const TrajectoryLog& log, double C0 = 10.0) {
  FunctionalSeries fs;
  fs.C0 = C0;
  fs.omega_mass = log.omega_mass;
  const Snapshots snaps = snapshots(log);
  for (std::size_t k = 0; k < snaps.size(); ++k) {
    const GlimmValues g = glimm_values(log, snaps.orders[k]);
    fs.times.push_back(snaps.times[k]);
    fs.V.push_back(g.V);
    fs.Q.push_back(g.Q);
    fs.V_wave.push_back(g.V_wave);
    fs.Q_wave.push_back(g.Q_wave);
    fs.V_np.push_back(g.V_np);
    fs.V_h.push_back(g.V_wave + log.omega_mass);
    fs.Q_h.push_back(g.Q);
    fs.upsilon.push_back(fs.V_h.back() + C0 * fs.Q_h.back());
  }
  for (std::size_t k = 0; k < log.events.size(); ++k) {
    const auto& e = log.events[k];
    fs.event_dQ.push_back(e.dQ);
    if (e.type == EventType::WaveWave && e.dQ > 1e-12) fs.flagged_events.push_back(k);
  }
  return fs;
}

// ---------------------------------------------------------------------------
// Minimal characteristics

/// Polygonal curve x(t), vertices in increasing t.
struct CharPath {
  std::vector<double> t;
  std::vector<double> x;

  double at(double tq) const {
    if (t.size() == 1 || tq <= t.front()) return x.front();
    if (tq >= t.back()) return x.back();
    const auto it = std::upper_bound(t.begin(), t.end(), tq);
    const std::size_t k = static_cast<std::size_t>(it - t.begin());
    const double t0 = t[k - 1], t1 = t[k];
    if (t1 == t0) return x[k];
    return x[k - 1] + (x[k] - x[k - 1]) * (tq - t0) / (t1 - t0);
  }
};

namespace detail {

inline double lambda_i(const SystemSpec& sys, int i, const State& u) {
  if (sys.n == 1 && sys.scalar_df) return sys.scalar_df(u[0]);
  return characteristic_speed(sys, i, u);
}

}  // namespace detail

/// Backward trace of the minimal i-characteristic through (t_to, x_bar) down to t_from.
/// In constant regions the slope is λ_i(u); at a cluster of fronts the leftmost gap whose
/// characteristic enters it backward is chosen, otherwise the path follows the front
/// (inside a split rarefaction or along an i-shock).
inline CharPath min_characteristic(const TrajectoryLog& log, const SystemSpec& sys, int i,
                                   double x_bar, double t_from, double t_to,
                                   const Snapshots* snaps_in = nullptr) {
  if (!(t_from < t_to) || t_from < 0.0 || t_to > log.t_end)
    throw Error(ErrorKind::LeftDomain, "characteristic time range outside the computed region");
  if (i < 1 || i > log.n) throw Error(ErrorKind::InvalidArgument, "bad family index");
  std::optional<Snapshots> own;
  if (!snaps_in) own = snapshots(log);
  const Snapshots& snaps = snaps_in ? *snaps_in : *own;

  std::vector<double> pts_t{t_to}, pts_x{x_bar};
  double t = t_to, x = x_bar;
  std::size_t guard = 0;
  while (t > t_from) {
    std::size_t k = snaps.pre(t);
    const double t_lo = std::max(snaps.times[k], t_from);
    const auto& order = snaps.orders[k];
    auto F = [&](std::size_t idx) -> const Front& { return log.front(order[idx]); };
    const std::size_t N = order.size();

    while (t > t_lo) {
      if (++guard > 10'000'000) throw Error(ErrorKind::LeftDomain, "characteristic trace did not terminate");
      const double tolx = 1e-11 * (1.0 + std::abs(x));
      // first index with position >= x - tol
      std::size_t c0 = 0;
      while (c0 < N && F(c0).position(t) < x - tolx) ++c0;
      std::size_t c1 = c0;
      while (c1 < N && std::abs(F(c1).position(t) - x) <= tolx) ++c1;
      // gaps g = 0..m around the cluster [c0, c1)
      auto gap_state = [&](std::size_t g) -> State {
        const std::size_t idx = c0 + g;
        if (idx > 0) return F(idx - 1).right_state;
        if (N > 0) return F(0).left_state;
        return log.far_left;
      };
      const std::size_t m = c1 - c0;
      double slope = 0.0;
      std::optional<std::size_t> follow;
      std::size_t gap = 0;
      {
        bool found = false;
        std::vector<double> lam(m + 1);
        for (std::size_t g = 0; g <= m; ++g) lam[g] = detail::lambda_i(sys, i, gap_state(g));
        for (std::size_t g = 0; g <= m && !found; ++g) {
          const bool right_of_prev = g == 0 || lam[g] < F(c0 + g - 1).speed;
          const bool left_of_next = g == m || lam[g] > F(c0 + g).speed;
          if (right_of_prev && left_of_next) {
            found = true;
            gap = g;
            slope = lam[g];
          }
        }
        if (!found) {
          const double tol = 1e-12;
          for (std::size_t j = 0; j < m && !follow; ++j) {
            const double s = F(c0 + j).speed;
            if (lam[j] <= s + tol && lam[j + 1] >= s - tol) follow = c0 + j;
          }
          if (!follow) follow = c0;
        }
      }

      if (follow) {
        const Front& f = F(*follow);
        t = t_lo;
        x = f.position(t);
      } else {
        // backward motion inside gap `gap`: neighbours are c0 + gap - 1 and c0 + gap
        double dt_hit = kInf;
        std::optional<std::size_t> hit;
        const std::size_t left_idx = c0 + gap;  // fronts before it lie to the left
        if (left_idx > 0) {
          const Front& L = F(left_idx - 1);
          if (slope > L.speed) {
            const double d = (x - L.position(t)) / (slope - L.speed);
            if (d < dt_hit) {
              dt_hit = std::max(0.0, d);
              hit = left_idx - 1;
            }
          }
        }
        if (left_idx < N) {
          const Front& R = F(left_idx);
          if (R.speed > slope) {
            const double d = (R.position(t) - x) / (R.speed - slope);
            if (d < dt_hit) {
              dt_hit = std::max(0.0, d);
              hit = left_idx;
            }
          }
        }
        if (hit && t - dt_hit > t_lo) {
          t -= dt_hit;
          x = F(*hit).position(t);
        } else {
          x -= slope * (t - t_lo);
          t = t_lo;
        }
      }
      pts_t.push_back(t);
      pts_x.push_back(x);
    }
  }

  CharPath path;
  for (std::size_t k = pts_t.size(); k-- > 0;) {
    if (!path.t.empty() && path.t.back() == pts_t[k]) {
      path.x.back() = pts_x[k];
      continue;
    }
    path.t.push_back(pts_t[k]);
    path.x.push_back(pts_x[k]);
  }
  return path;
}

// ---------------------------------------------------------------------------
// Funnel functionals

struct ProofSample {
  double t = 0.0;
  bool pre_event = false;  // configuration just before the events at t
  double a = 0.0, b = 0.0;
  double m = 0.0, M = 0.0, K = 0.0, Phi = 0.0;
  std::size_t terms = 0;  // fronts summed into Φ
};

struct ProofSeries {
  int family = 1;
  CharPath left, right;
  std::vector<ProofSample> samples;

  std::string to_csv() const {
    std::ostringstream os;
    os << "t,side,a,b,m,M,K,Phi\n";
    for (const auto& s : samples)
      os << detail::fmt(s.t) << ',' << (s.pre_event ? "pre" : "post") << ',' << detail::fmt(s.a)
         << ',' << detail::fmt(s.b) << ',' << detail::fmt(s.m) << ',' << detail::fmt(s.M) << ','
         << detail::fmt(s.K) << ',' << detail::fmt(s.Phi) << "\n";
    return os.str();
  }
};

namespace detail {

/// True when front f counts among the waves slower than the i-th family.
inline bool slower_than(const Front& f, int i, int p) {
  if (f.kind == FrontKind::NonPhysical) return false;
  if (f.is_zero()) return i > p;
  return f.family < i;
}

inline ProofSample funnel_sample(const TrajectoryLog& log, const std::vector<int>& order, int i,
                                 double t, double a, double b) {
  ProofSample s;
  s.t = t;
  s.a = a;
  s.b = b;
  s.m = b - a;
  for (int id : order) {
    const Front& f = log.front(id);
    const double x = f.position(t);
    const bool inside = x >= a && x < b;
    if (f.physical() && f.family == i) {
      if (inside) s.M += f.strength;
      continue;
    }
    const double w = std::abs(f.strength);
    if (inside) s.K += w;
    double phi;
    if (slower_than(f, i, log.p)) phi = x < a ? 1.0 : (x >= b ? 0.0 : (b - x) / s.m);
    else phi = x < a ? 0.0 : (x >= b ? 1.0 : (x - a) / s.m);
    s.Phi += phi * w;
    ++s.terms;
  }
  return s;
}

/// Times in (t0, t1) where a front of `order` meets the straight path piece x0 -> x1.
inline void edge_crossings(const TrajectoryLog& log, const std::vector<int>& order, double t0,
                           double x0, double t1, double x1, std::vector<double>& out) {
  if (!(t1 > t0)) return;
  const double v = (x1 - x0) / (t1 - t0);
  for (int id : order) {
    const Front& f = log.front(id);
    const double dv = f.speed - v;
    if (dv == 0.0) continue;
    const double tc = t0 + (x0 - f.position(t0)) / dv;
    if (tc > t0 && tc < t1) out.push_back(tc);
  }
}

}  // namespace detail

/// Funnel I(t) = [a(t), b(t)) bounded by minimal i-characteristics through (T, a), (T, b),
/// with m, M, K, Φ sampled at every event time (before and after), path vertex and edge
/// crossing on [0, T].
inline ProofSeries proof_functionals(const TrajectoryLog& log, const SystemSpec& sys, int i,
                                     double a, double b, double T) {
  if (!(a < b)) throw Error(ErrorKind::InvalidArgument, "funnel needs a < b");
  const Snapshots snaps = snapshots(log);
  ProofSeries ps;
  ps.family = i;
  ps.left = min_characteristic(log, sys, i, a, 0.0, T, &snaps);
  ps.right = min_characteristic(log, sys, i, b, 0.0, T, &snaps);

  std::vector<double> times{0.0, T};
  for (double t : snaps.times)
    if (t > 0.0 && t < T) times.push_back(t);
  for (const CharPath* p : {&ps.left, &ps.right})
    for (double t : p->t)
      if (t > 0.0 && t < T) times.push_back(t);
  // vertices of both paths split [0, T] into pieces where both edges are affine
  std::vector<double> base = times;
  std::sort(base.begin(), base.end());
  base.erase(std::unique(base.begin(), base.end()), base.end());
  for (std::size_t k = 0; k + 1 < base.size(); ++k) {
    const double t0 = base[k], t1 = base[k + 1];
    const auto& order = snaps.orders[snaps.post(t0)];
    for (const CharPath* p : {&ps.left, &ps.right})
      detail::edge_crossings(log, order, t0, p->at(t0), t1, p->at(t1), times);
  }
  std::sort(times.begin(), times.end());
  times.erase(std::unique(times.begin(), times.end()), times.end());

  for (double t : times) {
    const double ea = ps.left.at(t), eb = ps.right.at(t);
    const bool event_time =
        t > 0.0 && std::binary_search(snaps.times.begin(), snaps.times.end(), t) &&
        snaps.events_applied[snaps.post(t)] > snaps.events_applied[snaps.pre(t)];
    if (event_time) {
      auto pre = detail::funnel_sample(log, snaps.orders[snaps.pre(t)], i, t, ea, eb);
      pre.pre_event = true;
      ps.samples.push_back(pre);
    }
    ps.samples.push_back(detail::funnel_sample(log, snaps.orders[snaps.post(t)], i, t, ea, eb));
  }
  return ps;
}

struct FunnelAudit {
  double c_emp = 0.0;
  std::size_t spans = 0;
  std::size_t jumps = 0;
  double min_dphi = kInf;             // smallest ΔΦ over event-free spans
  double worst_kbound = -kInf;        // max of K c ∫dt/m − ΔΦ over spans
  double worst_kbound_rate = -kInf;   // max of K c − (ΔΦ + ρ)/Δt max(m), ρ the rounding of ΔΦ
  // jumps below are |ΔΦ| less ρ, floored at 0
  double max_jump = 0.0;              // max |ΔΦ| at events
  double jump_ratio = 0.0;            // max |ΔΦ| / |ΔQ| at events with a nonzero jump
  double unexplained_jump = 0.0;      // max |ΔΦ| at events with ΔQ == 0
  std::vector<std::pair<double, double>> event_jumps;  // (|ΔΦ|, ΔQ) at the events above
  // Events where every collision involves a non-physical front: Q does not see them, so they
  // are audited against |ΔΦ| <= Σ|ΔV| instead (weights lie in [0, 1]).
  std::size_t np_jumps = 0;
  double np_jump_excess = -kInf;      // max of |ΔΦ| − Σ|ΔV|
};

/// Empirical gap between λ_i and the speeds of slower/faster fronts over [0, T].
inline double empirical_speed_gap(const TrajectoryLog& log, const SystemSpec& sys, int i, double T) {
  double lam_min = kInf, lam_max = -kInf, slow_max = -kInf, fast_min = kInf;
  for (const auto& f : log.fronts) {
    if (f.t_birth > T) continue;
    for (const State* u : {&f.left_state, &f.right_state}) {
      const double l = detail::lambda_i(sys, i, *u);
      lam_min = std::min(lam_min, l);
      lam_max = std::max(lam_max, l);
    }
    if (f.physical() && f.family == i) continue;
    if (detail::slower_than(f, i, log.p)) slow_max = std::max(slow_max, f.speed);
    else fast_min = std::min(fast_min, f.speed);
  }
  return std::min(lam_min - slow_max, fast_min - lam_max);
}

inline FunnelAudit audit_funnel(const TrajectoryLog& log, const SystemSpec& sys,
                                const ProofSeries& ps, double T) {
  FunnelAudit au;
  au.c_emp = empirical_speed_gap(log, sys, ps.family, T);
  const Snapshots snaps = snapshots(log);
  struct AtTime {
    double dq = 0.0, dv = 0.0;
    bool np_only = true;
  };
  std::map<double, AtTime> at;
  for (const auto& e : log.events) {
    auto& a = at[e.time];
    a.dq += e.dQ;
    a.dv += std::abs(e.dV);
    a.np_only = a.np_only && (log.front(e.left_id).kind == FrontKind::NonPhysical ||
                              log.front(e.right_id).kind == FrontKind::NonPhysical);
  }

  const auto& S = ps.samples;
  for (std::size_t k = 0; k + 1 < S.size(); ++k) {
    const auto& s0 = S[k];
    const auto& s1 = S[k + 1];
    // rounding bound of ΔΦ: both sums carry at most (N − 1) u Σ|terms|
    const double rho = static_cast<double>(std::max(s0.terms, s1.terms)) *
                       std::numeric_limits<double>::epsilon() * (std::abs(s0.Phi) + std::abs(s1.Phi));
    if (s0.pre_event && !s1.pre_event && s1.t == s0.t) {
      ++au.jumps;
      const double jump = std::max(0.0, std::abs(s1.Phi - s0.Phi) - rho);
      const auto it = at.find(s0.t);
      const AtTime a = it == at.end() ? AtTime{} : it->second;
      au.max_jump = std::max(au.max_jump, jump);
      if (it != at.end() && a.np_only) {
        ++au.np_jumps;
        au.np_jump_excess = std::max(au.np_jump_excess, jump - a.dv);
        continue;
      }
      const double dq = a.dq;
      au.event_jumps.emplace_back(jump, dq);
      if (std::abs(dq) > 0.0) au.jump_ratio = std::max(au.jump_ratio, jump / std::abs(dq));
      else au.unexplained_jump = std::max(au.unexplained_jump, jump);
      continue;
    }
    // event-free span [s0.t, s1.t]: the configuration is constant inside
    const double dt = s1.t - s0.t;
    if (!(dt > 0.0)) continue;
    ++au.spans;
    const double dphi = s1.Phi - s0.Phi;
    au.min_dphi = std::min(au.min_dphi, dphi);
    const double tm = 0.5 * (s0.t + s1.t);
    const auto mid = detail::funnel_sample(log, snaps.orders[snaps.pre(s1.t)], ps.family, tm,
                                           ps.left.at(tm), ps.right.at(tm));
    // ∫ dt / m for m affine on the span
    const double m0 = s0.m, m1 = s1.m;
    double inv = 0.0;
    if (m0 > 0 && m1 > 0)
      inv = std::abs(m1 - m0) > 1e-14 * m0 ? dt * std::log(m1 / m0) / (m1 - m0) : dt / m0;
    else
      inv = kInf;
    const double slack = mid.K * au.c_emp * inv - dphi;
    if (mid.K > 0.0) au.worst_kbound = std::max(au.worst_kbound, slack);
    // on spans of a few ulps ΔΦ is pure rounding; credit it with its error bound
    const double rate = mid.K * au.c_emp - (dphi + rho) / dt * std::max(m0, m1);
    if (mid.K > 0.0) au.worst_kbound_rate = std::max(au.worst_kbound_rate, rate);
  }
  if (au.worst_kbound == -kInf) au.worst_kbound = 0.0;
  if (au.worst_kbound_rate == -kInf) au.worst_kbound_rate = 0.0;
  if (au.min_dphi == kInf) au.min_dphi = 0.0;
  if (au.np_jump_excess == -kInf) au.np_jump_excess = 0.0;
  return au;
}

// ---------------------------------------------------------------------------
// Decay report

struct OleinikReport {
  int family = 1;
  double s = 0.0, t = 0.0;
  double lhs = 0.0;
  double meas_term = 0.0;    // meas(J) / (t - s)
  double dq_term = 0.0;      // Q_h(s) - Q_h(t)
  double source_term = 0.0;  // V(u0) ‖ω‖
  double c_emp = 0.0;

  double rhs_sum() const { return meas_term + dq_term + source_term; }

  std::string to_text() const {
    std::ostringstream os;
    os << "family=" << family << "\ns=" << detail::fmt(s) << "\nt=" << detail::fmt(t)
       << "\nlhs=" << detail::fmt(lhs) << "\nmeas_term=" << detail::fmt(meas_term)
       << "\ndq_term=" << detail::fmt(dq_term) << "\nsource_term=" << detail::fmt(source_term)
       << "\nc_emp=" << detail::fmt(c_emp) << "\n";
    return os.str();
  }
};

inline OleinikReport oleinik_report(const TrajectoryLog& log, int i, const IntervalUnion& J,
                                    double s, double t, const Snapshots* snaps_in = nullptr) {
  if (!(s >= 0.0 && s < t && t <= log.t_end))
    throw Error(ErrorKind::InvalidArgument, "oleinik_report needs 0 <= s < t <= t_end");
  std::optional<Snapshots> own;
  if (!snaps_in) own = snapshots(log);
  const Snapshots& snaps = snaps_in ? *snaps_in : *own;

  OleinikReport r;
  r.family = i;
  r.s = s;
  r.t = t;
  const auto& order_t = snaps.orders[snaps.post(t)];
  r.lhs = wave_measure(log, order_t, t).mu_plus(i, J);
  r.meas_term = J.measure() / (t - s);
  r.dq_term = glimm_values(log, snaps.orders[snaps.post(s)]).Q - glimm_values(log, order_t).Q;
  r.source_term = log.initial_strength * log.omega_mass;
  const double sum = r.rhs_sum();
  if (r.lhs <= 0.0) r.c_emp = 0.0;
  else r.c_emp = sum > 0.0 ? r.lhs / sum : kInf;
  return r;
}

// ---------------------------------------------------------------------------
// Lower semicontinuity probe

struct LscSettings {
  SystemSpec sys;
  SourceSpec src;
  TrackerConfig cfg;
  double C0 = 10.0;
  int family = 1;
  std::vector<IntervalUnion> sets;  // open sets J for the measure inequality
};

struct LscValues {
  double Q_h = 0.0;
  double V_h = 0.0;
  double upsilon = 0.0;
  std::vector<double> mu_plus, mu_minus;  // per set, open membership
};

struct LscReport {
  std::vector<LscValues> sequence;
  LscValues limit;
  double q_margin = 0.0;        // min over the tail of Q_h minus Q_h(limit)
  double upsilon_margin = 0.0;  // same for Υ_h
  std::vector<double> mu_plus_margin, mu_minus_margin;  // μ^{i±}(J) + C0 Q_h, per set

  double min_margin() const {
    double m = std::min(q_margin, upsilon_margin);
    for (double v : mu_plus_margin) m = std::min(m, v);
    for (double v : mu_minus_margin) m = std::min(m, v);
    return m;
  }

  std::string to_text() const {
    std::ostringstream os;
    os << "profiles=" << sequence.size() << "\nq_margin=" << detail::fmt(q_margin)
       << "\nupsilon_margin=" << detail::fmt(upsilon_margin) << "\n";
    for (std::size_t k = 0; k < mu_plus_margin.size(); ++k)
      os << "mu_plus_margin[" << k << "]=" << detail::fmt(mu_plus_margin[k]) << "\nmu_minus_margin["
         << k << "]=" << detail::fmt(mu_minus_margin[k]) << "\n";
    os << "limit_Q_h=" << detail::fmt(limit.Q_h) << "\nlimit_Upsilon_h=" << detail::fmt(limit.upsilon)
       << "\n";
    return os.str();
  }
};

/// Functionals of a profile at t = 0 (sampled, resolved at t = 0+ with the zero-waves).
inline LscValues lsc_values(const LscSettings& st, const Profile& u) {
  const InitialData init = init_approx(st.sys, st.src, st.cfg, u);
  const GlimmValues g = glimm_values(init.fronts, st.sys.n, st.sys.p);
  LscValues v;
  v.Q_h = g.Q;
  v.V_h = g.V_wave + init.omega_mass;
  v.upsilon = v.V_h + st.C0 * v.Q_h;
  const auto slice = wave_measure(init.fronts, [](const Front& f) -> const Front& { return f; },
                                  st.sys.n, 0.0);
  for (const auto& J : st.sets) {
    v.mu_plus.push_back(slice.mu_plus(st.family, J, true));
    v.mu_minus.push_back(slice.mu_minus(st.family, J, true));
  }
  return v;
}

/// Margins are liminf over the second half of the sequence minus the limit value; a
/// non-negative margin is the discrete form of lower semicontinuity.
inline LscReport lsc_probe(const LscSettings& st, const std::vector<Profile>& profiles,
                           const Profile& limit) {
  if (profiles.empty()) throw Error(ErrorKind::InvalidArgument, "lsc_probe needs a sequence");
  LscReport rep;
  for (const auto& p : profiles) rep.sequence.push_back(lsc_values(st, p));
  rep.limit = lsc_values(st, limit);
  const std::size_t tail = rep.sequence.size() / 2;
  auto tail_min = [&](auto&& value) {
    double m = kInf;
    for (std::size_t k = tail; k < rep.sequence.size(); ++k) m = std::min(m, value(rep.sequence[k]));
    return m;
  };
  rep.q_margin = tail_min([](const LscValues& v) { return v.Q_h; }) - rep.limit.Q_h;
  rep.upsilon_margin = tail_min([](const LscValues& v) { return v.upsilon; }) - rep.limit.upsilon;
  for (std::size_t j = 0; j < st.sets.size(); ++j) {
    rep.mu_plus_margin.push_back(
        tail_min([&](const LscValues& v) { return v.mu_plus[j] + st.C0 * v.Q_h; }) -
        (rep.limit.mu_plus[j] + st.C0 * rep.limit.Q_h));
    rep.mu_minus_margin.push_back(
        tail_min([&](const LscValues& v) { return v.mu_minus[j] + st.C0 * v.Q_h; }) -
        (rep.limit.mu_minus[j] + st.C0 * rep.limit.Q_h));
  }
  return rep;
}

}  // namespace wft
