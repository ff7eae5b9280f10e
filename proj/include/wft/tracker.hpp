#pragma once

#include "wft/front.hpp"
#include "wft/profile.hpp"
#include "wft/riemann.hpp"

#include <cstdio>
#include <optional>
#include <utility>

namespace wft {

struct TrackerConfig {
  double eps = 1e-6;
  double h = 0.1;
  double nu = 0.01;
  std::optional<double> lambda_hat;  // default: max λ over Ω + 1
  double t_end = 1.0;
  double tie_perturb = 1e-12;  // window within which collision times count as simultaneous
  double delta = 1e-3;         // L¹ sampling tolerance for the initial data
  std::size_t event_cap = 1'000'000;
};

enum class Solver { Accurate, Simplified };
enum class EventType { WaveWave, WaveZero, NonPhysical };

inline const char* to_string(Solver s) { return s == Solver::Accurate ? "accurate" : "simplified"; }
inline const char* to_string(EventType e) {
  switch (e) {
    case EventType::WaveWave: return "wave-wave";
    case EventType::WaveZero: return "wave-zero";
    case EventType::NonPhysical: return "nonphysical";
  }
  return "?";
}

struct InteractionEvent {
  double time = 0.0;
  double x = 0.0;
  int left_id = -1;
  int right_id = -1;
  std::vector<int> outgoing;
  Solver solver = Solver::Accurate;
  EventType type = EventType::WaveWave;
  double dQ = 0.0;
  double dV = 0.0;
};

/// Every front segment ever created plus the ordered list of interactions. Configurations
/// at any time are recovered by replaying events from `initial_order`.
struct TrajectoryLog {
  std::vector<std::pair<std::string, std::string>> header;
  int n = 1;
  int p = 0;
  double t_end = 0.0;
  State far_left;
  State far_right;
  double omega_mass = 0.0;        // Σ of zero-front strengths on the truncated lattice
  double initial_strength = 0.0;  // V(u0): wave strengths of the sampled data, no source
  std::vector<Front> fronts;      // fronts[id].id == id
  std::vector<int> initial_order;
  std::vector<InteractionEvent> events;

  const Front& front(int id) const { return fronts.at(static_cast<std::size_t>(id)); }

  std::string header_value(const std::string& key) const {
    for (const auto& [k, v] : header)
      if (k == key) return v;
    return {};
  }
};

/// Configurations at t = 0, after each distinct event time, and at t_end.
/// orders[k] is the spatial order on [times[k], times[k+1]).
struct Snapshots {
  std::vector<double> times;
  std::vector<std::vector<int>> orders;
  std::vector<std::size_t> events_applied;  // events[0, events_applied[k]) are in orders[k]

  std::size_t size() const { return times.size(); }
  /// Index of the configuration holding just after t (events at t applied).
  std::size_t post(double t) const {
    const auto it = std::upper_bound(times.begin(), times.end(), t);
    return it == times.begin() ? 0 : static_cast<std::size_t>(it - times.begin()) - 1;
  }
  /// Index of the configuration holding just before t (events at t not applied).
  std::size_t pre(double t) const {
    const auto it = std::lower_bound(times.begin(), times.end(), t);
    return it == times.begin() ? 0 : static_cast<std::size_t>(it - times.begin()) - 1;
  }
};

inline void apply_event(std::vector<int>& order, const InteractionEvent& ev) {
  const auto it = std::find(order.begin(), order.end(), ev.left_id);
  if (it == order.end() || it + 1 == order.end() || *(it + 1) != ev.right_id)
    throw Error(ErrorKind::InvalidArgument, "event does not match an adjacent front pair");
  const auto pos = it - order.begin();
  order.erase(it, it + 2);
  order.insert(order.begin() + pos, ev.outgoing.begin(), ev.outgoing.end());
}

inline Snapshots snapshots(const TrajectoryLog& log) {
  Snapshots s;
  std::vector<int> order = log.initial_order;
  s.times.push_back(0.0);
  s.orders.push_back(order);
  s.events_applied.push_back(0);
  std::size_t k = 0;
  while (k < log.events.size()) {
    const double t = log.events[k].time;
    while (k < log.events.size() && log.events[k].time == t) apply_event(order, log.events[k++]);
    if (t == s.times.back()) {
      s.orders.back() = order;
      s.events_applied.back() = k;
    } else {
      s.times.push_back(t);
      s.orders.push_back(order);
      s.events_applied.push_back(k);
    }
  }
  if (log.t_end > s.times.back()) {
    s.times.push_back(log.t_end);
    s.orders.push_back(order);
    s.events_applied.push_back(k);
  }
  return s;
}

inline GlimmValues glimm_values(const TrajectoryLog& log, const std::vector<int>& order) {
  return glimm_values(order, [&](int id) -> const Front& { return log.front(id); }, log.n, log.p);
}

/// Piecewise-constant solution at time t for a configuration valid at t.
inline StepProfile profile_at(const TrajectoryLog& log, const std::vector<int>& order, double t) {
  StepProfile sp;
  if (order.empty()) {
    sp.values.push_back(log.far_left);
    return sp;
  }
  sp.values.push_back(log.front(order.front()).left_state);
  for (int id : order) {
    const Front& f = log.front(id);
    sp.breaks.push_back(f.position(t));
    sp.values.push_back(f.right_state);
  }
  return sp;
}

// ---------------------------------------------------------------------------
// Initial data

inline std::vector<double> split_rarefaction(double sigma, double nu) {
  if (!(sigma > 0.0) || !(nu > 0.0))
    throw Error(ErrorKind::InvalidArgument, "split_rarefaction needs sigma > 0 and nu > 0");
  // The 1e-9 guard keeps exact multiples such as 0.4 / 0.01 from rounding down.
  const auto m = static_cast<std::size_t>(std::floor(sigma / nu + 1e-9)) + 1;
  return std::vector<double>(m, sigma / static_cast<double>(m));
}

/// Piecewise-constant sampling with L¹ error at most delta. Scalar monotone pieces are
/// sampled by level sets so the total variation is kept exactly.
inline StepProfile sample_profile(const Profile& u0, double delta) {
  if (!(delta > 0.0)) throw Error(ErrorKind::InvalidArgument, "sampling tolerance must be positive");
  const std::size_t np = u0.pieces.size();
  const bool scalar = u0.dim() == 1;

  double smooth_len = 0.0, smooth_tv = 0.0;
  for (std::size_t k = 1; k + 1 < np; ++k) {
    if (u0.pieces[k].constant) continue;
    const double a = u0.nodes[k - 1], b = u0.nodes[k];
    smooth_len += b - a;
    State prev = u0.pieces[k].f(a);
    for (int q = 1; q <= 64; ++q) {
      const State cur = u0.pieces[k].f(a + (b - a) * q / 64.0);
      smooth_tv += (cur - prev).norm();
      prev = cur;
    }
  }

  StepProfile out;
  out.values.push_back(u0.pieces.front().f(u0.nodes.empty() ? 0.0 : u0.nodes.front()));
  auto push = [&](double x, const State& v) {
    out.breaks.push_back(x);
    out.values.push_back(v);
  };

  for (std::size_t k = 1; k < np; ++k) {
    const double a = u0.nodes[k - 1];
    const auto& pc = u0.pieces[k];
    if (pc.constant || k + 1 == np) {
      push(a, pc.f(a));
      continue;
    }
    const double b = u0.nodes[k];
    if (scalar) {
      const double A = pc.f(a)[0], B = pc.f(b)[0];
      const double q = 2.0 * delta / smooth_len;
      const auto steps =
          std::max<long>(1, static_cast<long>(std::ceil(std::abs(B - A) / q - 1e-9)));
      push(a, scalar_state(A));
      const double dir = B >= A ? 1.0 : -1.0;
      for (long s = 1; s <= steps; ++s) {
        const double level = A + (B - A) * (static_cast<double>(s) - 0.5) / static_cast<double>(steps);
        double lo = a, hi = b;
        for (int it = 0; it < 200 && hi - lo > 1e-15 * (1.0 + std::abs(lo)); ++it) {
          const double mid = 0.5 * (lo + hi);
          if (dir * (pc.f(mid)[0] - level) < 0.0) lo = mid;
          else hi = mid;
        }
        push(0.5 * (lo + hi), scalar_state(A + (B - A) * static_cast<double>(s) / static_cast<double>(steps)));
      }
    } else {
      const double w_max = smooth_tv > 0 ? delta / smooth_tv : (b - a);
      const auto cells = std::max<long>(1, static_cast<long>(std::ceil((b - a) / w_max)));
      const double w = (b - a) / static_cast<double>(cells);
      for (long c = 0; c < cells; ++c) push(a + c * w, pc.f(a + (c + 0.5) * w));
    }
  }
  out.compact();
  return out;
}

/// Lattice indices j with −1/(hε) < j < 1/(hε) whose cell carries positive ω-mass.
inline std::vector<long> lattice_sites(const SourceSpec& src, double h, double eps) {
  std::vector<long> out;
  if (src.is_zero() || !src.omega) return out;
  const double limit = 1.0 / (h * eps);
  const double jmax = std::ceil(limit) - 1.0;
  double lo = std::isfinite(src.support.lo) ? std::floor(src.support.lo / h) - 1.0 : -jmax;
  double hi = std::isfinite(src.support.hi) ? std::ceil(src.support.hi / h) + 1.0 : jmax;
  lo = std::max(lo, -jmax);
  hi = std::min(hi, jmax);
  if (hi - lo > 2e6)
    throw Error(ErrorKind::InvalidArgument, "source support covers too many lattice cells");
  for (auto j = static_cast<long>(lo); j <= static_cast<long>(hi); ++j) {
    if (!(std::abs(static_cast<double>(j)) < limit)) continue;
    if (zero_wave_strength(src, static_cast<double>(j) * h, h) > 0.0) out.push_back(j);
  }
  return out;
}

namespace detail {

inline Front front_from_wave(const ElementaryWave& w, double t, double x, int generation) {
  Front f;
  f.family = w.family;
  f.generation = generation;
  f.t_birth = t;
  f.x_birth = x;
  f.left_state = w.left_state;
  f.right_state = w.right_state;
  f.strength = w.strength;
  f.param = w.param;
  switch (w.kind) {
    case WaveKind::Shock: f.kind = FrontKind::Shock; break;
    case WaveKind::Rarefaction: f.kind = FrontKind::Rarefaction; break;
    case WaveKind::Contact: f.kind = FrontKind::Contact; break;
    case WaveKind::ZeroJump: f.kind = FrontKind::Zero; break;
  }
  f.speed = f.kind == FrontKind::Zero ? 0.0 : w.speed();
  return f;
}

/// Appends the fronts of one elementary wave, splitting rarefactions when asked.
inline void append_wave(const SystemSpec& sys, const ElementaryWave& w, double t, double x,
                        int generation, bool split, double nu, std::vector<Front>& out) {
  if (w.kind != WaveKind::Rarefaction || !split) {
    out.push_back(front_from_wave(w, t, x, w.kind == WaveKind::ZeroJump ? 0 : generation));
    return;
  }
  const auto parts = split_rarefaction(w.strength, nu);
  const double m = static_cast<double>(parts.size());
  State ul = w.left_state;
  for (std::size_t k = 0; k < parts.size(); ++k) {
    const bool last = k + 1 == parts.size();
    State ur = last ? w.right_state : wave_curve(sys, w.family, ul, w.param / m);
    ElementaryWave sub = make_wave(sys, w.family, ul, ur, w.param / m);
    out.push_back(front_from_wave(sub, t, x, generation));
    ul = ur;
  }
}

/// Single front of `family` with parameter `param` starting from ul (no splitting).
inline std::optional<Front> transmitted(const SystemSpec& sys, int family, const State& ul,
                                        double param, double t, double x, int generation,
                                        State& ur) {
  ur = wave_curve(sys, family, ul, param);
  if (param == 0.0) return std::nullopt;
  return front_from_wave(make_wave(sys, family, ul, ur, param), t, x, generation);
}

inline double max_speed_on_domain(const SystemSpec& sys) {
  double m = -kInf;
  for (const auto& u : box_samples(sys.domain, 257)) {
    const auto ed = eigen_decompose(sys, u, false);
    m = std::max(m, ed.values.maxCoeff());
  }
  return m;
}

inline std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace detail

inline double default_lambda_hat(const SystemSpec& sys) { return detail::max_speed_on_domain(sys) + 1.0; }

struct InitialData {
  StepProfile sampled;
  std::vector<Front> fronts;  // spatial order, ids 0..N-1
  std::vector<long> lattice;
  double wave_strength = 0.0;  // V(u0) without the source
  double omega_mass = 0.0;
};

/// Samples u0 and resolves every jump (and every supported lattice point) at t = 0.
inline InitialData init_approx(const SystemSpec& sys, const SourceSpec& src,
                               const TrackerConfig& cfg, const Profile& u0) {
  InitialData out;
  out.sampled = sample_profile(u0, cfg.delta);
  out.lattice = lattice_sites(src, cfg.h, cfg.eps);
  for (const auto& v : out.sampled.values) detail::require_in_domain(sys, v, "initial value");

  struct Site {
    double x;
    bool lattice;
    State ul, ur;
  };
  std::vector<Site> sites;
  std::size_t li = 0;
  const auto& br = out.sampled.breaks;
  for (std::size_t k = 0; k < br.size(); ++k) {
    const double x = br[k];
    while (li < out.lattice.size() &&
           static_cast<double>(out.lattice[li]) * cfg.h < x - 1e-12 * (1.0 + std::abs(x))) {
      const double xl = static_cast<double>(out.lattice[li]) * cfg.h;
      const State u = out.sampled.at(xl);
      sites.push_back({xl, true, u, u});
      ++li;
    }
    const State& ul = out.sampled.values[k];
    const State& ur = out.sampled.values[k + 1];
    out.wave_strength += [&] {
      double s = 0.0;
      for (const auto& w : solve_homogeneous(sys, ul, ur).waves) s += std::abs(w.strength);
      return s;
    }();
    if (li < out.lattice.size() &&
        std::abs(static_cast<double>(out.lattice[li]) * cfg.h - x) <= 1e-12 * (1.0 + std::abs(x))) {
      sites.push_back({static_cast<double>(out.lattice[li]) * cfg.h, true, ul, ur});
      ++li;
    } else {
      sites.push_back({x, false, ul, ur});
    }
  }
  for (; li < out.lattice.size(); ++li) {
    const double xl = static_cast<double>(out.lattice[li]) * cfg.h;
    const State u = out.sampled.at(xl);
    sites.push_back({xl, true, u, u});
  }

  for (const auto& s : sites) {
    const WaveFan fan = s.lattice ? solve_h(sys, src, s.x, cfg.h, s.ul, s.ur)
                                  : solve_homogeneous(sys, s.ul, s.ur);
    for (const auto& w : fan.waves) {
      if (w.kind == WaveKind::ZeroJump) out.omega_mass += w.strength;
      detail::append_wave(sys, w, 0.0, s.x, 1, true, cfg.nu, out.fronts);
    }
  }
  for (std::size_t k = 0; k < out.fronts.size(); ++k) out.fronts[k].id = static_cast<int>(k);
  return out;
}

// ---------------------------------------------------------------------------
// Scheduling and interactions

inline double collision_time(const Front& a, const Front& b, double t_now) {
  if (a.is_zero() && b.is_zero()) return kInf;
  if (!(a.speed > b.speed)) return kInf;
  double tc;
  if (b.is_zero()) {
    tc = a.t_birth + (b.x_birth - a.x_birth) / a.speed;
  } else if (a.is_zero()) {
    tc = b.t_birth + (a.x_birth - b.x_birth) / b.speed;
  } else {
    const double gap = b.position(t_now) - a.position(t_now);
    tc = t_now + std::max(0.0, gap) / (a.speed - b.speed);
  }
  return std::max(tc, t_now);
}

struct NextEvent {
  bool end = true;
  double time = 0.0;
  std::size_t index = 0;  // collision between fronts[index] and fronts[index + 1]
};

/// Earliest crossing of adjacent fronts before t_end. Crossings within `tie` of the earliest
/// count as simultaneous and the leftmost pair goes first.
template <class FrontRange, class Get>
NextEvent next_event(const FrontRange& ordered, Get&& get, double t_now, double t_end,
                     double tie = 1e-12) {
  NextEvent ev;
  const std::size_t N = ordered.size();
  if (N < 2) return ev;
  std::vector<double> tc(N - 1);
  double best = kInf;
  for (std::size_t k = 0; k + 1 < N; ++k) {
    tc[k] = collision_time(get(ordered[k]), get(ordered[k + 1]), t_now);
    best = std::min(best, tc[k]);
  }
  if (!(best < t_end)) return ev;
  const double window = best + tie * std::max(1.0, std::abs(best));
  for (std::size_t k = 0; k + 1 < N; ++k) {
    if (tc[k] <= window) {
      ev.end = false;
      ev.time = tc[k];
      ev.index = k;
      return ev;
    }
  }
  return ev;
}

inline NextEvent next_event(const std::vector<Front>& ordered, double t_now, double t_end,
                            double tie = 1e-12) {
  return next_event(ordered, [](const Front& f) -> const Front& { return f; }, t_now, t_end, tie);
}

struct Resolution {
  std::vector<Front> outgoing;  // spatial order, ids unassigned
  Solver solver = Solver::Accurate;
  EventType type = EventType::WaveWave;
};

/// Resolves the collision of adjacent fronts a (left) and b (right) at time t. `lambda_hat`
/// must be set in cfg.
inline Resolution resolve_interaction(const SystemSpec& sys, const SourceSpec& src,
                                      const TrackerConfig& cfg, const Front& a, const Front& b,
                                      double t) {
  if (a.is_zero() && b.is_zero())
    throw Error(ErrorKind::InvalidArgument, "zero fronts do not interact");
  const double lambda_hat = cfg.lambda_hat ? *cfg.lambda_hat : default_lambda_hat(sys);
  const Front* zero = a.is_zero() ? &a : (b.is_zero() ? &b : nullptr);
  const double x = zero ? zero->x_birth : a.position(t);
  const State& ul = a.left_state;
  const State& ur = b.right_state;

  Resolution res;
  const bool np = a.kind == FrontKind::NonPhysical || b.kind == FrontKind::NonPhysical;
  res.type = np ? EventType::NonPhysical : (zero ? EventType::WaveZero : EventType::WaveWave);

  int max_gen = 0;
  bool first_gen = false;
  for (const Front* f : {&a, &b}) {
    max_gen = std::max(max_gen, f->generation);
    if (f->physical() && f->generation == 1) first_gen = true;
  }
  const bool accurate = !np && (std::abs(a.strength * b.strength) >= cfg.eps || first_gen);

  auto emit_np = [&](const State& from) {
    const double s = (ur - from).norm();
    if (s <= 1e-14 * (1.0 + ur.norm())) {
      if (!res.outgoing.empty()) res.outgoing.back().right_state = ur;
      return;
    }
    Front f;
    f.kind = FrontKind::NonPhysical;
    f.family = 0;
    f.generation = max_gen + 1;
    f.t_birth = t;
    f.x_birth = x;
    f.speed = lambda_hat;
    f.strength = s;
    f.left_state = from;
    f.right_state = ur;
    res.outgoing.push_back(f);
  };
  auto emit_zero = [&](const State& from) {
    const State to = phi_h(sys, src, zero->x_birth, cfg.h, from);
    Front f = *zero;
    f.id = -1;
    f.t_birth = t;
    f.t_death = kInf;
    f.left_state = from;
    f.right_state = to;
    f.strength = zero_wave_strength(src, zero->x_birth, cfg.h);
    f.generation = 0;
    res.outgoing.push_back(f);
    return to;
  };
  auto emit_phys = [&](const Front& in, const State& from, double param) {
    State to;
    if (auto f = detail::transmitted(sys, in.family, from, param, t, x, in.generation, to))
      res.outgoing.push_back(*f);
    return to;
  };

  if (accurate) {
    res.solver = Solver::Accurate;
    const WaveFan fan = zero ? solve_h(sys, src, zero->x_birth, cfg.h, ul, ur)
                             : solve_homogeneous(sys, ul, ur);
    for (const auto& w : fan.waves) {
      if (w.kind == WaveKind::ZeroJump) {
        detail::append_wave(sys, w, t, x, 0, false, cfg.nu, res.outgoing);
        continue;
      }
      int gen = -1;
      bool split = true;
      for (const Front* f : {&a, &b}) {
        if (!f->physical() || f->family != w.family) continue;
        gen = gen < 0 ? f->generation : std::min(gen, f->generation);
        if (f->kind == FrontKind::Rarefaction) split = false;
      }
      if (gen < 0) gen = max_gen + 1;
      detail::append_wave(sys, w, t, x, gen, split, cfg.nu, res.outgoing);
    }
    if (!res.outgoing.empty()) res.outgoing.back().right_state = ur;
    return res;
  }

  res.solver = Solver::Simplified;
  if (a.kind == FrontKind::NonPhysical) {
    // the non-physical front overtakes b, which keeps its parameter
    const State mid = b.is_zero() ? emit_zero(ul) : emit_phys(b, ul, b.param);
    emit_np(mid);
  } else if (zero == &b) {
    const State mid = emit_zero(ul);
    emit_np(emit_phys(a, mid, a.param));
  } else if (zero == &a) {
    const State mid = emit_phys(b, ul, b.param);
    emit_np(emit_zero(mid));
  } else if (a.family == b.family) {
    Front merged = a;
    merged.generation = std::min(a.generation, b.generation);
    emit_np(emit_phys(merged, ul, a.param + b.param));
  } else {
    const State mid = emit_phys(b, ul, b.param);
    emit_np(emit_phys(a, mid, a.param));
  }
  return res;
}

// ---------------------------------------------------------------------------
// Event loop

namespace detail {

inline void require_config(const TrackerConfig& cfg) {
  auto bad = [](const char* what) { throw Error(ErrorKind::InvalidArgument, what); };
  if (!(cfg.eps > 0.0)) bad("eps must be positive");
  if (!(cfg.h > 0.0)) bad("h must be positive");
  if (!(cfg.nu > 0.0)) bad("nu must be positive");
  if (!(cfg.t_end > 0.0)) bad("t_end must be positive");
  if (!(cfg.delta > 0.0)) bad("delta must be positive");
  if (!(cfg.tie_perturb >= 0.0)) bad("tie_perturb must be non-negative");
}

}  // namespace detail

inline TrajectoryLog run(const SystemSpec& sys, const SourceSpec& src, TrackerConfig cfg,
                         const Profile& u0) {
  detail::require_config(cfg);
  if (!cfg.lambda_hat) cfg.lambda_hat = default_lambda_hat(sys);
  if (u0.dim() != sys.n) throw Error(ErrorKind::InvalidArgument, "initial data has wrong dimension");

  TrajectoryLog log;
  log.n = sys.n;
  log.p = sys.p;
  log.t_end = cfg.t_end;
  log.header = {{"system", sys.name},
                {"n", std::to_string(sys.n)},
                {"p", std::to_string(sys.p)},
                {"source", src.description},
                {"initial", u0.description},
                {"eps", detail::fmt(cfg.eps)},
                {"h", detail::fmt(cfg.h)},
                {"nu", detail::fmt(cfg.nu)},
                {"lambda_hat", detail::fmt(*cfg.lambda_hat)},
                {"t_end", detail::fmt(cfg.t_end)},
                {"tie_perturb", detail::fmt(cfg.tie_perturb)},
                {"delta", detail::fmt(cfg.delta)},
                {"event_cap", std::to_string(cfg.event_cap)}};

  InitialData init = init_approx(sys, src, cfg, u0);
  log.omega_mass = init.omega_mass;
  log.initial_strength = init.wave_strength;
  log.far_left = init.sampled.values.front();
  log.far_right = init.sampled.values.back();
  log.fronts = std::move(init.fronts);
  std::vector<int> alive;
  for (const auto& f : log.fronts) alive.push_back(f.id);
  log.initial_order = alive;

  auto get = [&](int id) -> const Front& { return log.fronts[static_cast<std::size_t>(id)]; };
  GlimmValues cur = glimm_values(alive, get, sys.n, sys.p);
  double t = 0.0;
  std::size_t stalled = 0;

  while (true) {
    const NextEvent ne = next_event(alive, get, t, cfg.t_end, cfg.tie_perturb);
    if (ne.end) break;
    if (log.events.size() >= cfg.event_cap) {
      std::ostringstream os;
      os << "event cap " << cfg.event_cap << " reached at t=" << t << " with " << alive.size()
         << " fronts";
      throw Error(ErrorKind::EventCapExceeded, os.str());
    }
    stalled = (ne.time - t < 1e-14) ? stalled + 1 : 0;
    if (stalled > 10000) {
      std::ostringstream os;
      os << "event loop stalled at t=" << t << " (" << stalled << " events below the time floor)";
      throw Error(ErrorKind::EventCapExceeded, os.str());
    }
    t = ne.time;
    const Front a = get(alive[ne.index]);
    const Front b = get(alive[ne.index + 1]);

    Resolution res;
    try {
      res = resolve_interaction(sys, src, cfg, a, b, t);
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::NewtonDiverged) throw;
      std::ostringstream os;
      os << "interaction of fronts " << a.id << " and " << b.id << " at t=" << t
         << " x=" << a.position(t) << ": " << e.what();
      throw Error(ErrorKind::DomainEscape, os.str());
    }

    InteractionEvent ev;
    ev.time = t;
    ev.x = a.is_zero() ? a.x_birth : (b.is_zero() ? b.x_birth : a.position(t));
    ev.left_id = a.id;
    ev.right_id = b.id;
    ev.solver = res.solver;
    ev.type = res.type;
    log.fronts[static_cast<std::size_t>(a.id)].t_death = t;
    log.fronts[static_cast<std::size_t>(b.id)].t_death = t;
    for (auto& f : res.outgoing) {
      f.id = static_cast<int>(log.fronts.size());
      f.t_birth = t;
      f.x_birth = ev.x;
      ev.outgoing.push_back(f.id);
      log.fronts.push_back(std::move(f));
    }
    alive.erase(alive.begin() + static_cast<long>(ne.index),
                alive.begin() + static_cast<long>(ne.index) + 2);
    alive.insert(alive.begin() + static_cast<long>(ne.index), ev.outgoing.begin(),
                 ev.outgoing.end());
    const GlimmValues next = glimm_values(alive, get, sys.n, sys.p);
    ev.dQ = next.Q - cur.Q;
    ev.dV = next.V - cur.V;
    cur = next;
    log.events.push_back(std::move(ev));
  }
  return log;
}

}  // namespace wft
