#pragma once

// Scenario files are line-oriented:
//
//   # comment
//   [section]
//   key = value
//
// Sections: system, source, initial, tracker, diagnostics, sweep, output. Vector-valued
// states are space-separated; lists of states use ';' between states. Repeated keys
// (diagnostics J / times, sweep entry) append.

#include "wft/diagnostics.hpp"
#include "wft/log_io.hpp"
#include "wft/oracle.hpp"

#include <filesystem>
#include <fstream>
#include <future>
#include <map>
#include <sstream>

namespace wft {

struct InitialSpec {
  std::string preset = "step";  // step | staircase | hat | ramp | constant | breakpoints
  double x0 = 0.0;
  double width = 1.0;
  long steps = 4;
  std::vector<double> left{0.8};
  std::vector<double> right{1.2};
  double center = 0.0, halfwidth = 1.0, base = 1.0, height = 0.2;
  std::vector<double> breaks;
  std::vector<std::vector<double>> values;
};

struct DiagnosticsSpec {
  std::vector<int> families{1};
  std::vector<IntervalUnion> sets;
  std::vector<std::pair<double, double>> times;
  double C0 = 10.0;
  std::optional<std::array<double, 3>> funnel;  // a, b, T
  std::size_t validation_samples = 1000;
};

struct SweepEntry {
  double eps = 1e-6, h = 0.1, nu = 0.01, dx = 1e-3;
};

struct SweepSpec {
  std::vector<SweepEntry> entries;
  double window_lo = -2.0, window_hi = 2.0;
};

struct Scenario {
  SystemModel system;
  SourceModel source;
  InitialSpec initial;
  TrackerConfig tracker;
  DiagnosticsSpec diagnostics;
  std::optional<SweepSpec> sweep;
  std::string output_dir = "out";
};

namespace detail {

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split_on(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(trim(cur));
  return out;
}

inline std::vector<std::string> words(const std::string& s) {
  std::istringstream is(s);
  std::vector<std::string> out;
  std::string w;
  while (is >> w) out.push_back(w);
  return out;
}

inline std::string join(const std::vector<double>& v) {
  std::string s;
  for (std::size_t k = 0; k < v.size(); ++k) s += (k ? " " : "") + fmt(v[k]);
  return s;
}

inline State to_state(const std::vector<double>& v) {
  State u(static_cast<Eigen::Index>(v.size()));
  for (std::size_t k = 0; k < v.size(); ++k) u[static_cast<Eigen::Index>(k)] = v[k];
  return u;
}

}  // namespace detail

inline Profile build_profile(const InitialSpec& in, int n) {
  auto need_dim = [&](const std::vector<double>& v, const char* what) {
    if (static_cast<int>(v.size()) != n)
      throw Error(ErrorKind::InvalidArgument, std::string(what) + " has wrong dimension");
    return detail::to_state(v);
  };
  std::ostringstream os;
  os.precision(17);
  if (in.preset == "step") {
    Profile p = step_profile(in.x0, need_dim(in.left, "left"), need_dim(in.right, "right"));
    return p;
  }
  if (in.preset == "constant") {
    return constant_profile(need_dim(in.left, "left"));
  }
  if (in.preset == "staircase") {
    if (in.steps < 1 || !(in.width > 0)) throw Error(ErrorKind::InvalidArgument, "bad staircase");
    const State l = need_dim(in.left, "left"), r = need_dim(in.right, "right");
    StepProfile sp;
    sp.values.push_back(l);
    // `steps` equal jumps at equally spaced points of [x0, x0 + width]
    for (long k = 1; k <= in.steps; ++k) {
      const double frac = in.steps > 1 ? static_cast<double>(k - 1) / static_cast<double>(in.steps - 1) : 0.0;
      sp.breaks.push_back(in.x0 + in.width * frac);
      sp.values.push_back(l + (static_cast<double>(k) / static_cast<double>(in.steps)) * (r - l));
    }
    Profile p = from_steps(sp);
    os << "staircase(" << in.x0 << "," << in.width << "," << in.steps << ")";
    p.description = os.str();
    return p;
  }
  if (in.preset == "hat") {
    if (n != 1) throw Error(ErrorKind::InvalidArgument, "hat preset is scalar");
    return hat_profile(in.center, in.halfwidth, in.base, in.height);
  }
  if (in.preset == "ramp") {
    if (n != 1) throw Error(ErrorKind::InvalidArgument, "ramp preset is scalar");
    return ramp_profile(in.x0, in.width, need_dim(in.left, "left")[0], need_dim(in.right, "right")[0]);
  }
  if (in.preset == "breakpoints") {
    if (in.values.size() != in.breaks.size() + 1)
      throw Error(ErrorKind::InvalidArgument, "breakpoints need one more value than breaks");
    if (!std::is_sorted(in.breaks.begin(), in.breaks.end()))
      throw Error(ErrorKind::InvalidArgument, "breaks must be increasing");
    StepProfile sp;
    sp.breaks = in.breaks;
    for (const auto& v : in.values) sp.values.push_back(need_dim(v, "value"));
    return from_steps(sp);
  }
  throw Error(ErrorKind::InvalidArgument, "unknown initial preset '" + in.preset + "'");
}

// ---------------------------------------------------------------------------
// Parsing and serialization

inline Scenario parse_scenario(const std::string& text) {
  Scenario sc;
  std::istringstream is(text);
  std::string raw, section;
  std::size_t lineno = 0;
  bool sweep_seen = false;
  auto fail = [&](const std::string& what) {
    throw Error(ErrorKind::ParseError, "line " + std::to_string(lineno) + ": " + what);
  };
  auto num = [&](const std::string& s) {
    const std::string t = detail::trim(s);
    char* end = nullptr;
    const double v = std::strtod(t.c_str(), &end);
    if (t.empty() || *end != '\0') fail("expected a number, got '" + t + "'");
    return v;
  };
  auto integer = [&](const std::string& s) {
    const double v = num(s);
    if (v != std::floor(v)) fail("expected an integer, got '" + s + "'");
    return static_cast<long>(v);
  };
  auto nums = [&](const std::string& s) {
    std::vector<double> out;
    for (const auto& w : detail::words(s)) out.push_back(num(w));
    return out;
  };
  auto shape_of = [&](const std::string& s) {
    if (s == "none") return SourceModel::Shape::None;
    if (s == "indicator") return SourceModel::Shape::Indicator;
    if (s == "hat") return SourceModel::Shape::Hat;
    if (s == "uniform") return SourceModel::Shape::Uniform;
    fail("unknown source shape '" + s + "'");
    return SourceModel::Shape::None;
  };

  while (std::getline(is, raw)) {
    ++lineno;
    const auto hash = raw.find('#');
    const std::string line = detail::trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') fail("unterminated section header");
      section = detail::trim(line.substr(1, line.size() - 2));
      static const std::vector<std::string> known{"system", "source",  "initial", "tracker",
                                                  "diagnostics", "sweep", "output"};
      if (std::find(known.begin(), known.end(), section) == known.end())
        fail("unknown section [" + section + "]");
      if (section == "sweep" && !sweep_seen) {
        sweep_seen = true;
        sc.sweep = SweepSpec{};
      }
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) fail("expected 'key = value'");
    const std::string key = detail::trim(line.substr(0, eq));
    const std::string val = detail::trim(line.substr(eq + 1));
    if (section.empty()) fail("key '" + key + "' outside any section");
    auto unknown = [&] { fail("unknown key '" + key + "' in [" + section + "]"); };

    if (section == "system") {
      auto& m = sc.system;
      if (key == "name") m.name = val;
      else if (key == "coeffs") m.coeffs = nums(val);
      else if (key == "domain_lo") m.domain_lo = nums(val);
      else if (key == "domain_hi") m.domain_hi = nums(val);
      else if (key == "p") m.p = static_cast<int>(integer(val));
      else if (key == "c") m.c = num(val);
      else unknown();
    } else if (section == "source") {
      auto& m = sc.source;
      if (key == "shape") m.shape = shape_of(val);
      else if (key == "lo") m.lo = num(val);
      else if (key == "hi") m.hi = num(val);
      else if (key == "a0") m.a0 = nums(val);
      else if (key == "a1") m.a1 = num(val);
      else if (key == "omega_scale") {
        if (val == "auto") m.omega_scale.reset();
        else m.omega_scale = num(val);
      } else unknown();
    } else if (section == "initial") {
      auto& m = sc.initial;
      if (key == "preset") m.preset = val;
      else if (key == "x0") m.x0 = num(val);
      else if (key == "width") m.width = num(val);
      else if (key == "steps") m.steps = integer(val);
      else if (key == "left") m.left = nums(val);
      else if (key == "right") m.right = nums(val);
      else if (key == "center") m.center = num(val);
      else if (key == "halfwidth") m.halfwidth = num(val);
      else if (key == "base") m.base = num(val);
      else if (key == "height") m.height = num(val);
      else if (key == "breaks") m.breaks = nums(val);
      else if (key == "values") {
        m.values.clear();
        for (const auto& part : detail::split_on(val, ';')) m.values.push_back(nums(part));
      } else unknown();
    } else if (section == "tracker") {
      auto& c = sc.tracker;
      if (key == "eps") c.eps = num(val);
      else if (key == "h") c.h = num(val);
      else if (key == "nu") c.nu = num(val);
      else if (key == "t_end") c.t_end = num(val);
      else if (key == "delta") c.delta = num(val);
      else if (key == "tie_perturb") c.tie_perturb = num(val);
      else if (key == "event_cap") c.event_cap = static_cast<std::size_t>(integer(val));
      else if (key == "lambda_hat") {
        if (val == "auto") c.lambda_hat.reset();
        else c.lambda_hat = num(val);
      } else unknown();
    } else if (section == "diagnostics") {
      auto& d = sc.diagnostics;
      if (key == "families") {
        d.families.clear();
        for (double v : nums(val)) d.families.push_back(static_cast<int>(v));
      } else if (key == "J") {
        std::vector<Interval> parts;
        for (const auto& part : detail::split_on(val, '|')) {
          const auto v = nums(part);
          if (v.size() != 2 || !(v[0] < v[1])) fail("interval needs 'lo hi' with lo < hi");
          parts.push_back({v[0], v[1]});
        }
        d.sets.emplace_back(parts);
      } else if (key == "times") {
        const auto v = nums(val);
        if (v.size() != 2 || !(v[0] < v[1])) fail("times needs 's t' with s < t");
        d.times.emplace_back(v[0], v[1]);
      } else if (key == "C0") {
        d.C0 = num(val);
      } else if (key == "funnel") {
        const auto v = nums(val);
        if (v.size() != 3) fail("funnel needs 'a b T'");
        d.funnel = std::array<double, 3>{v[0], v[1], v[2]};
      } else if (key == "validation_samples") {
        d.validation_samples = static_cast<std::size_t>(integer(val));
      } else unknown();
    } else if (section == "sweep") {
      auto& s = *sc.sweep;
      if (key == "entry") {
        const auto v = nums(val);
        if (v.size() != 4) fail("sweep entry needs 'eps h nu dx'");
        s.entries.push_back({v[0], v[1], v[2], v[3]});
      } else if (key == "window") {
        const auto v = nums(val);
        if (v.size() != 2 || !(v[0] < v[1])) fail("window needs 'lo hi' with lo < hi");
        s.window_lo = v[0];
        s.window_hi = v[1];
      } else unknown();
    } else if (section == "output") {
      if (key == "dir") sc.output_dir = val;
      else unknown();
    }
  }
  return sc;
}

inline Scenario load_scenario(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw Error(ErrorKind::ParseError, "cannot open scenario file " + path);
  std::stringstream ss;
  ss << is.rdbuf();
  return parse_scenario(ss.str());
}

inline std::string serialize_scenario(const Scenario& sc) {
  using detail::fmt;
  using detail::join;
  std::ostringstream os;
  os << "[system]\nname = " << sc.system.name << "\n";
  if (!sc.system.coeffs.empty()) os << "coeffs = " << join(sc.system.coeffs) << "\n";
  if (sc.system.domain_lo) os << "domain_lo = " << join(*sc.system.domain_lo) << "\n";
  if (sc.system.domain_hi) os << "domain_hi = " << join(*sc.system.domain_hi) << "\n";
  if (sc.system.p) os << "p = " << *sc.system.p << "\n";
  if (sc.system.c) os << "c = " << fmt(*sc.system.c) << "\n";

  const auto& s = sc.source;
  static const char* shapes[] = {"none", "indicator", "hat", "uniform"};
  os << "\n[source]\nshape = " << shapes[static_cast<int>(s.shape)] << "\nlo = " << fmt(s.lo)
     << "\nhi = " << fmt(s.hi) << "\na0 = " << join(s.a0) << "\na1 = " << fmt(s.a1)
     << "\nomega_scale = " << (s.omega_scale ? fmt(*s.omega_scale) : std::string("auto")) << "\n";

  const auto& in = sc.initial;
  os << "\n[initial]\npreset = " << in.preset << "\nx0 = " << fmt(in.x0) << "\nwidth = " << fmt(in.width)
     << "\nsteps = " << in.steps << "\nleft = " << join(in.left) << "\nright = " << join(in.right)
     << "\ncenter = " << fmt(in.center) << "\nhalfwidth = " << fmt(in.halfwidth)
     << "\nbase = " << fmt(in.base) << "\nheight = " << fmt(in.height) << "\n";
  if (!in.breaks.empty()) os << "breaks = " << join(in.breaks) << "\n";
  if (!in.values.empty()) {
    os << "values = ";
    for (std::size_t k = 0; k < in.values.size(); ++k) os << (k ? "; " : "") << join(in.values[k]);
    os << "\n";
  }

  const auto& c = sc.tracker;
  os << "\n[tracker]\neps = " << fmt(c.eps) << "\nh = " << fmt(c.h) << "\nnu = " << fmt(c.nu)
     << "\nt_end = " << fmt(c.t_end) << "\ndelta = " << fmt(c.delta)
     << "\ntie_perturb = " << fmt(c.tie_perturb) << "\nevent_cap = " << c.event_cap
     << "\nlambda_hat = " << (c.lambda_hat ? fmt(*c.lambda_hat) : std::string("auto")) << "\n";

  const auto& d = sc.diagnostics;
  os << "\n[diagnostics]\nfamilies =";
  for (int f : d.families) os << ' ' << f;
  os << "\nC0 = " << fmt(d.C0) << "\nvalidation_samples = " << d.validation_samples << "\n";
  for (const auto& J : d.sets) {
    os << "J = ";
    for (std::size_t k = 0; k < J.parts().size(); ++k)
      os << (k ? " | " : "") << fmt(J.parts()[k].lo) << ' ' << fmt(J.parts()[k].hi);
    os << "\n";
  }
  for (const auto& [a, b] : d.times) os << "times = " << fmt(a) << ' ' << fmt(b) << "\n";
  if (d.funnel)
    os << "funnel = " << fmt((*d.funnel)[0]) << ' ' << fmt((*d.funnel)[1]) << ' ' << fmt((*d.funnel)[2])
       << "\n";

  if (sc.sweep) {
    os << "\n[sweep]\nwindow = " << fmt(sc.sweep->window_lo) << ' ' << fmt(sc.sweep->window_hi) << "\n";
    for (const auto& e : sc.sweep->entries)
      os << "entry = " << fmt(e.eps) << ' ' << fmt(e.h) << ' ' << fmt(e.nu) << ' ' << fmt(e.dx) << "\n";
  }
  os << "\n[output]\ndir = " << sc.output_dir << "\n";
  return os.str();
}

// ---------------------------------------------------------------------------
// Running

struct ResolvedScenario {
  SystemSpec sys;
  SourceSpec src;
  Profile u0;
};

inline ResolvedScenario resolve(const Scenario& sc) {
  ResolvedScenario r;
  r.sys = make_system(sc.system);
  r.src = make_source(sc.source, r.sys);
  r.u0 = build_profile(sc.initial, r.sys.n);
  return r;
}

struct ConvergenceRow {
  SweepEntry entry;
  double l1_reference = 0.0;  // distance to the finest reference at t_end
  double l1_own_grid = 0.0;   // distance to the reference computed at this entry's dx
  double V = 0.0, Q = 0.0;
  double c_emp = 0.0;
  std::size_t events = 0;
};

struct ConvergenceTable {
  std::string reference;  // "godunov" or "lax-oleinik"
  double window_lo = 0.0, window_hi = 0.0;
  double u0_l1_window = 0.0;
  std::vector<ConvergenceRow> rows;
  bool monotone = true;

  std::string to_csv() const {
    using detail::fmt;
    std::ostringstream os;
    os << "# reference=" << reference << " window=" << fmt(window_lo) << ' ' << fmt(window_hi)
       << " u0_l1_window=" << fmt(u0_l1_window) << " monotone=" << (monotone ? "yes" : "FLAGGED")
       << "\n";
    os << "eps,h,nu,dx,l1_reference,l1_own_grid,V,Q,C_emp,events\n";
    for (const auto& r : rows)
      os << fmt(r.entry.eps) << ',' << fmt(r.entry.h) << ',' << fmt(r.entry.nu) << ','
         << fmt(r.entry.dx) << ',' << fmt(r.l1_reference) << ',' << fmt(r.l1_own_grid) << ','
         << fmt(r.V) << ',' << fmt(r.Q) << ',' << fmt(r.c_emp) << ',' << r.events << "\n";
    return os.str();
  }
};

namespace detail {

inline StepProfile reference_profile(const ResolvedScenario& rs, double t_end, double lo, double hi,
                                     double dx, bool exact) {
  if (exact) {
    const auto cells = static_cast<std::size_t>(std::ceil((hi - lo) / dx));
    return lax_oleinik_profile(rs.sys, rs.u0, t_end, lo, hi, cells);
  }
  // pad the grid so boundary effects cannot reach the window
  double smax = 0.0;
  for (const auto& u : box_samples(rs.sys.domain, 257))
    smax = std::max(smax, eigen_decompose(rs.sys, u, false).values.cwiseAbs().maxCoeff());
  const double pad = smax * t_end + 1.0;
  const double a = lo - pad, b = hi + pad;
  const auto cells = static_cast<std::size_t>(std::llround((b - a) / dx));
  return godunov_split(rs.sys, rs.src, rs.u0, {a, a + static_cast<double>(cells) * dx, cells}, t_end)
      .to_profile();
}

}  // namespace detail

/// Runs every sweep entry (concurrently) and measures the L¹ distance at t_end to the
/// reference on the finest grid: Lax–Oleinik when g ≡ 0 for a convex scalar flux, the
/// split Godunov scheme otherwise.
inline ConvergenceTable compare_refinements(const Scenario& sc) {
  if (!sc.sweep || sc.sweep->entries.size() < 2)
    throw Error(ErrorKind::InvalidArgument, "sweep too short: at least two entries are required");
  const ResolvedScenario rs = resolve(sc);
  const auto& sw = *sc.sweep;
  const double T = sc.tracker.t_end;

  ConvergenceTable tab;
  tab.window_lo = sw.window_lo;
  tab.window_hi = sw.window_hi;
  const bool exact = rs.src.is_zero() && rs.sys.n == 1 && rs.sys.kappa.has_value();
  tab.reference = exact ? "lax-oleinik" : "godunov";
  {
    const StepProfile fine = sample_profile(rs.u0, 1e-6);
    StepProfile zero;
    zero.values.push_back(State::Zero(rs.sys.n));
    tab.u0_l1_window = l1_distance(fine, zero, sw.window_lo, sw.window_hi);
  }

  using Job = std::pair<ConvergenceRow, StepProfile>;
  std::vector<std::future<Job>> jobs;
  for (const auto& e : sw.entries) {
    jobs.push_back(std::async(std::launch::async, [&rs, &sc, &sw, e, T, exact] {
      TrackerConfig cfg = sc.tracker;
      cfg.eps = e.eps;
      cfg.h = e.h;
      cfg.nu = e.nu;
      const TrajectoryLog log = run(rs.sys, rs.src, cfg, rs.u0);
      const Snapshots snaps = snapshots(log);
      const auto& order = snaps.orders[snaps.post(T)];
      ConvergenceRow row;
      row.entry = e;
      row.events = log.events.size();
      const GlimmValues g = glimm_values(log, order);
      row.V = g.V;
      row.Q = g.Q;
      StepProfile mine = profile_at(log, order, T);
      row.l1_own_grid =
          l1_distance(mine, detail::reference_profile(rs, T, sw.window_lo, sw.window_hi, e.dx, exact),
                      sw.window_lo, sw.window_hi);
      const IntervalUnion J = sc.diagnostics.sets.empty()
                                  ? IntervalUnion{{sw.window_lo, sw.window_hi}}
                                  : sc.diagnostics.sets.front();
      const double s = sc.diagnostics.times.empty() ? 0.0 : sc.diagnostics.times.front().first;
      const double t = sc.diagnostics.times.empty() ? T : sc.diagnostics.times.front().second;
      row.c_emp = oleinik_report(log, sc.diagnostics.families.front(), J, s, t, &snaps).c_emp;
      return Job{row, std::move(mine)};
    }));
  }
  double finest = kInf;
  for (const auto& e : sw.entries) finest = std::min(finest, e.dx);
  const StepProfile ref = detail::reference_profile(rs, T, sw.window_lo, sw.window_hi, finest, exact);
  for (auto& job : jobs) {
    Job j = job.get();
    j.first.l1_reference = l1_distance(j.second, ref, sw.window_lo, sw.window_hi);
    tab.rows.push_back(j.first);
  }
  for (std::size_t k = 1; k < tab.rows.size(); ++k)
    if (tab.rows[k].l1_reference > 1.1 * tab.rows[k - 1].l1_reference) tab.monotone = false;
  return tab;
}

struct RunOutcome {
  int exit_code = 0;
  std::string message;
  std::vector<std::string> files;
};

namespace detail {

inline std::string banner(const TrajectoryLog& log) {
  std::string s;
  for (const auto& [k, v] : log.header) s += "# " + k + "=" + v + "\n";
  return s;
}

inline void write_file(const std::filesystem::path& p, const std::string& content,
                       std::vector<std::string>& files) {
  std::ofstream os(p);
  if (!os) throw Error(ErrorKind::InvalidArgument, "cannot write " + p.string());
  os << content;
  files.push_back(p.string());
}

}  // namespace detail

enum class Mode { Run, Sweep, Validate };

/// Runs one scenario and writes its artifacts under out_root / sc.output_dir.
/// Exit codes: 0 success, 1 bad scenario, 2 assumption check failed, 3 numerical failure.
inline RunOutcome run_scenario(const Scenario& sc, const std::filesystem::path& out_root,
                               Mode mode = Mode::Run) {
  RunOutcome out;
  ResolvedScenario rs;
  try {
    rs = resolve(sc);
  } catch (const Error& e) {
    out.exit_code = 1;
    out.message = e.what();
    return out;
  }
  const std::filesystem::path dir = out_root / sc.output_dir;
  std::filesystem::create_directories(dir);
  detail::write_file(dir / "scenario.resolved", serialize_scenario(sc), out.files);

  const ValidationReport vr = validate_assumptions(rs.sys, rs.src, sc.diagnostics.validation_samples);
  detail::write_file(dir / "validation.txt", vr.to_text(), out.files);
  if (!vr.all_passed()) {
    out.exit_code = 2;
    out.message = "assumption check failed:";
    for (const auto& c : vr.checks)
      if (!c.passed) out.message += " " + c.name + " (margin " + detail::fmt(c.margin) + ")";
    return out;
  }
  if (mode == Mode::Validate) {
    out.message = "all assumption checks passed";
    return out;
  }

  try {
    if (mode == Mode::Sweep) {
      if (!sc.sweep) {
        out.exit_code = 1;
        out.message = "scenario has no [sweep] section";
        return out;
      }
      const ConvergenceTable tab = compare_refinements(sc);
      detail::write_file(dir / "convergence.csv", tab.to_csv(), out.files);
      out.message = tab.monotone ? "sweep finished" : "sweep finished; distances not monotone (flagged)";
      return out;
    }

    const TrajectoryLog log = run(rs.sys, rs.src, sc.tracker, rs.u0);
    const std::string head = detail::banner(log);
    {
      std::ostringstream os;
      write_log(os, log);
      detail::write_file(dir / "trajectory.txt", os.str(), out.files);
    }
    {
      std::ostringstream os;
      write_fronts_csv(os, log);
      detail::write_file(dir / "fronts.csv", head + os.str(), out.files);
    }
    {
      std::ostringstream os;
      write_events_csv(os, log);
      detail::write_file(dir / "events.csv", head + os.str(), out.files);
    }
    const Snapshots snaps = snapshots(log);
    const FunctionalSeries fs = functionals(log, sc.diagnostics.C0);
    detail::write_file(dir / "functionals.csv", head + fs.to_csv(), out.files);
    {
      const StepProfile fin = profile_at(log, snaps.orders.back(), log.t_end);
      std::ostringstream os;
      os << head << "x_lo,x_hi,u\n";
      for (std::size_t k = 0; k < fin.values.size(); ++k) {
        os << (k == 0 ? "-inf" : detail::fmt(fin.breaks[k - 1])) << ','
           << (k == fin.breaks.size() ? "inf" : detail::fmt(fin.breaks[k])) << ',' << io::vec(fin.values[k])
           << "\n";
      }
      detail::write_file(dir / "profile_t_end.csv", os.str(), out.files);
    }

    std::ostringstream ol;
    ol << head;
    auto sets = sc.diagnostics.sets;
    if (sets.empty()) sets.push_back(IntervalUnion{{-1.0, 1.0}});
    auto times = sc.diagnostics.times;
    if (times.empty()) times.emplace_back(0.0, log.t_end);
    for (int i : sc.diagnostics.families) {
      if (i < 1 || i > rs.sys.n) throw Error(ErrorKind::InvalidArgument, "diagnostic family out of range");
      for (std::size_t j = 0; j < sets.size(); ++j)
        for (const auto& [s, t] : times) {
          ol << "[report family=" << i << " set=" << j << "]\n";
          ol << oleinik_report(log, i, sets[j], s, t, &snaps).to_text();
        }
    }
    detail::write_file(dir / "oleinik.txt", ol.str(), out.files);

    {
      LscSettings st{rs.sys, rs.src, sc.tracker, sc.diagnostics.C0, sc.diagnostics.families.front(), sets};
      std::vector<Profile> seq;
      for (int k = 0; k < 6; ++k)
        seq.push_back(from_steps(sample_profile(rs.u0, 0.1 * std::pow(0.5, k))));
      const LscReport lr = lsc_probe(st, seq, rs.u0);
      detail::write_file(dir / "lsc.txt", head + lr.to_text(), out.files);
    }

    if (sc.diagnostics.funnel) {
      const auto [a, b, T] = *sc.diagnostics.funnel;
      const ProofSeries ps = proof_functionals(log, rs.sys, sc.diagnostics.families.front(), a, b, T);
      detail::write_file(dir / "funnel.csv", head + ps.to_csv(), out.files);
    }

    if (sc.sweep) {
      const ConvergenceTable tab = compare_refinements(sc);
      detail::write_file(dir / "convergence.csv", head + tab.to_csv(), out.files);
      if (!tab.monotone) out.message = "convergence distances not monotone (flagged)";
    }
  } catch (const Error& e) {
    out.exit_code = e.kind() == ErrorKind::InvalidArgument ? 1 : 3;
    out.message = e.what();
    detail::write_file(dir / "error.txt", std::string(e.what()) + "\n", out.files);
    return out;
  }
  if (out.message.empty()) out.message = "ok";
  return out;
}

}  // namespace wft
