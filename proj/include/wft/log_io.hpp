#pragma once

// Text format of a TrajectoryLog:
//
//   # wft trajectory log v1
//   [header]            key=value lines (system, source, configuration)
//   [meta]              n, p, t_end, far_left, far_right, omega_mass, initial_strength, initial_order
//   [fronts]            CSV, one row per front segment
//   [events]            CSV, one row per interaction
//
// Reals are written with 17 significant digits so a write/read cycle is bit-exact. Vector
// fields (states, id lists) are space-separated inside one CSV cell.

#include "wft/tracker.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace wft {

namespace io {

inline std::string num(double v) { return detail::fmt(v); }

inline std::string vec(const State& u) {
  std::string s;
  for (Eigen::Index k = 0; k < u.size(); ++k) {
    if (k) s += ' ';
    s += num(u[k]);
  }
  return s;
}

inline std::string ids(const std::vector<int>& v) {
  std::string s;
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (k) s += ' ';
    s += std::to_string(v[k]);
  }
  return s;
}

inline double parse_num(const std::string& s) {
  const char* begin = s.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  if (end == begin) throw Error(ErrorKind::ParseError, "expected a number, got '" + s + "'");
  return v;
}

inline State parse_vec(const std::string& s) {
  std::istringstream is(s);
  std::vector<double> vals;
  std::string tok;
  while (is >> tok) vals.push_back(parse_num(tok));
  State u(static_cast<Eigen::Index>(vals.size()));
  for (std::size_t k = 0; k < vals.size(); ++k) u[static_cast<Eigen::Index>(k)] = vals[k];
  return u;
}

inline std::vector<int> parse_ids(const std::string& s) {
  std::istringstream is(s);
  std::vector<int> out;
  int v;
  while (is >> v) out.push_back(v);
  return out;
}

inline std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace io

inline constexpr const char* kFrontColumns =
    "id,kind,family,generation,t_birth,x_birth,t_death,speed,strength,param,left_state,right_state";
inline constexpr const char* kEventColumns =
    "time,x,left_id,right_id,outgoing,solver,type,dQ,dV";

inline void write_fronts_csv(std::ostream& os, const TrajectoryLog& log) {
  os << kFrontColumns << "\n";
  for (const auto& f : log.fronts) {
    os << f.id << ',' << to_string(f.kind) << ',' << f.family << ',' << f.generation << ','
       << io::num(f.t_birth) << ',' << io::num(f.x_birth) << ',' << io::num(f.t_death) << ','
       << io::num(f.speed) << ',' << io::num(f.strength) << ',' << io::num(f.param) << ','
       << io::vec(f.left_state) << ',' << io::vec(f.right_state) << "\n";
  }
}

inline void write_events_csv(std::ostream& os, const TrajectoryLog& log) {
  os << kEventColumns << "\n";
  for (const auto& e : log.events) {
    os << io::num(e.time) << ',' << io::num(e.x) << ',' << e.left_id << ',' << e.right_id << ','
       << io::ids(e.outgoing) << ',' << to_string(e.solver) << ',' << to_string(e.type) << ','
       << io::num(e.dQ) << ',' << io::num(e.dV) << "\n";
  }
}

inline void write_log(std::ostream& os, const TrajectoryLog& log) {
  os << "# wft trajectory log v1\n[header]\n";
  for (const auto& [k, v] : log.header) os << k << '=' << v << "\n";
  os << "[meta]\n"
     << "n=" << log.n << "\n"
     << "p=" << log.p << "\n"
     << "t_end=" << io::num(log.t_end) << "\n"
     << "far_left=" << io::vec(log.far_left) << "\n"
     << "far_right=" << io::vec(log.far_right) << "\n"
     << "omega_mass=" << io::num(log.omega_mass) << "\n"
     << "initial_strength=" << io::num(log.initial_strength) << "\n"
     << "initial_order=" << io::ids(log.initial_order) << "\n";
  os << "[fronts]\n";
  write_fronts_csv(os, log);
  os << "[events]\n";
  write_events_csv(os, log);
}

inline TrajectoryLog read_log(std::istream& is) {
  TrajectoryLog log;
  std::string line, section;
  std::size_t lineno = 0;
  bool columns_seen = false;
  auto fail = [&](const std::string& what) {
    throw Error(ErrorKind::ParseError, "line " + std::to_string(lineno) + ": " + what);
  };
  while (std::getline(is, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    if (line.front() == '[' && line.back() == ']') {
      section = line.substr(1, line.size() - 2);
      columns_seen = false;
      continue;
    }
    if (section == "header" || section == "meta") {
      const auto eq = line.find('=');
      if (eq == std::string::npos) fail("expected key=value");
      const std::string key = line.substr(0, eq), val = line.substr(eq + 1);
      if (section == "header") {
        log.header.emplace_back(key, val);
        continue;
      }
      try {
        if (key == "n") log.n = std::stoi(val);
        else if (key == "p") log.p = std::stoi(val);
        else if (key == "t_end") log.t_end = io::parse_num(val);
        else if (key == "far_left") log.far_left = io::parse_vec(val);
        else if (key == "far_right") log.far_right = io::parse_vec(val);
        else if (key == "omega_mass") log.omega_mass = io::parse_num(val);
        else if (key == "initial_strength") log.initial_strength = io::parse_num(val);
        else if (key == "initial_order") log.initial_order = io::parse_ids(val);
        else fail("unknown meta key '" + key + "'");
      } catch (const std::invalid_argument&) {
        fail("bad value for '" + key + "'");
      }
      continue;
    }
    if (!columns_seen) {
      columns_seen = true;
      continue;
    }
    const auto c = io::split_csv(line);
    try {
      if (section == "fronts") {
        if (c.size() != 12) fail("front row needs 12 fields");
        Front f;
        f.id = std::stoi(c[0]);
        f.kind = front_kind_from_string(c[1]);
        f.family = std::stoi(c[2]);
        f.generation = std::stoi(c[3]);
        f.t_birth = io::parse_num(c[4]);
        f.x_birth = io::parse_num(c[5]);
        f.t_death = io::parse_num(c[6]);
        f.speed = io::parse_num(c[7]);
        f.strength = io::parse_num(c[8]);
        f.param = io::parse_num(c[9]);
        f.left_state = io::parse_vec(c[10]);
        f.right_state = io::parse_vec(c[11]);
        if (f.id != static_cast<int>(log.fronts.size())) fail("front ids must be consecutive");
        log.fronts.push_back(std::move(f));
      } else if (section == "events") {
        if (c.size() != 9) fail("event row needs 9 fields");
        InteractionEvent e;
        e.time = io::parse_num(c[0]);
        e.x = io::parse_num(c[1]);
        e.left_id = std::stoi(c[2]);
        e.right_id = std::stoi(c[3]);
        e.outgoing = io::parse_ids(c[4]);
        if (c[5] == "accurate") e.solver = Solver::Accurate;
        else if (c[5] == "simplified") e.solver = Solver::Simplified;
        else fail("unknown solver '" + c[5] + "'");
        if (c[6] == "wave-wave") e.type = EventType::WaveWave;
        else if (c[6] == "wave-zero") e.type = EventType::WaveZero;
        else if (c[6] == "nonphysical") e.type = EventType::NonPhysical;
        else fail("unknown event type '" + c[6] + "'");
        e.dQ = io::parse_num(c[7]);
        e.dV = io::parse_num(c[8]);
        log.events.push_back(std::move(e));
      } else {
        fail("data outside a known section");
      }
    } catch (const std::invalid_argument&) {
      fail("malformed integer field");
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::ParseError && std::string(e.what()).rfind("ParseError: line", 0) == 0)
        throw;
      fail(e.what());
    }
  }
  return log;
}

inline void save_log(const std::string& path, const TrajectoryLog& log) {
  std::ofstream os(path);
  if (!os) throw Error(ErrorKind::InvalidArgument, "cannot write " + path);
  write_log(os, log);
}

inline TrajectoryLog load_log(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw Error(ErrorKind::InvalidArgument, "cannot read " + path);
  return read_log(is);
}

}  // namespace wft
