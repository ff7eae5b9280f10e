#pragma once

#include "wft/core.hpp"

#include <sstream>

namespace wft {

/// Piecewise-constant profile: values[k] on [breaks[k-1], breaks[k]), values.front() on the
/// left of breaks.front(), values.back() on the right of breaks.back().
struct StepProfile {
  std::vector<double> breaks;
  std::vector<State> values;

  State at(double x) const {
    const auto it = std::upper_bound(breaks.begin(), breaks.end(), x);
    return values[static_cast<std::size_t>(it - breaks.begin())];
  }

  double total_variation() const {
    double tv = 0.0;
    for (std::size_t k = 1; k < values.size(); ++k) tv += (values[k] - values[k - 1]).norm();
    return tv;
  }

  /// Drops breaks between equal values.
  void compact() {
    std::vector<double> b;
    std::vector<State> v{values.front()};
    for (std::size_t k = 0; k < breaks.size(); ++k) {
      if (values[k + 1] == v.back()) continue;
      b.push_back(breaks[k]);
      v.push_back(values[k + 1]);
    }
    breaks = std::move(b);
    values = std::move(v);
  }
};

/// Piecewise-smooth profile with finitely many nodes (jumps or kinks). Pieces between nodes
/// are monotone; the two outer pieces are constant.
struct Profile {
  struct Piece {
    std::function<State(double)> f;
    bool constant = false;
  };
  std::vector<double> nodes;
  std::vector<Piece> pieces;  // nodes.size() + 1 pieces
  std::string description;

  int dim() const { return static_cast<int>(pieces.front().f(0.0).size()); }

  State at(double x) const {
    const auto it = std::upper_bound(nodes.begin(), nodes.end(), x);
    return pieces[static_cast<std::size_t>(it - nodes.begin())].f(x);
  }

  /// Mean of u over [a, b]; exact when [a, b] lies inside one constant piece.
  State average(double a, double b, int panels = 64) const {
    const auto ka = std::upper_bound(nodes.begin(), nodes.end(), a) - nodes.begin();
    const auto kb = std::lower_bound(nodes.begin(), nodes.end(), b) - nodes.begin();
    const auto& pc = pieces[static_cast<std::size_t>(ka)];
    if (ka == kb && pc.constant) return pc.f(0.5 * (a + b));
    return integral(a, b, panels) / (b - a);
  }

  /// ∫_a^b u(x) dx, exact on constant pieces; `panels` Gauss–Legendre panels per smooth piece.
  State integral(double a, double b, int panels = 64) const {
    const double sign = b >= a ? 1.0 : -1.0;
    if (b < a) std::swap(a, b);
    State acc = State::Zero(dim());
    double lo = a;
    std::size_t k = static_cast<std::size_t>(std::upper_bound(nodes.begin(), nodes.end(), a) - nodes.begin());
    while (lo < b) {
      const double hi = k < nodes.size() ? std::min(b, nodes[k]) : b;
      if (hi > lo) {
        const auto& pc = pieces[k];
        if (pc.constant) {
          acc += (hi - lo) * pc.f(0.5 * (lo + hi));
        } else {
          const double w = (hi - lo) / panels;
          for (int q = 0; q < panels; ++q)
            acc += quad::gauss4([&](double x) { return pc.f(x); }, lo + q * w, lo + (q + 1) * w);
        }
      }
      lo = hi;
      ++k;
    }
    return sign * acc;
  }

  std::pair<double, double> value_range() const {
    double lo = kInf, hi = -kInf;
    for (std::size_t k = 0; k < pieces.size(); ++k) {
      double a, b;
      if (k == 0) a = b = nodes.empty() ? 0.0 : nodes.front() - 1.0;
      else if (k == nodes.size()) a = b = nodes.back() + 1.0;
      else { a = nodes[k - 1]; b = nodes[k]; }
      for (int q = 0; q <= 16; ++q) {
        const State v = pieces[k].f(a + (b - a) * q / 16.0);
        lo = std::min(lo, v.minCoeff());
        hi = std::max(hi, v.maxCoeff());
      }
    }
    return {lo, hi};
  }
};

inline Profile from_steps(const StepProfile& sp) {
  Profile p;
  p.nodes = sp.breaks;
  for (const auto& v : sp.values) p.pieces.push_back({[v](double) { return v; }, true});
  std::ostringstream os;
  os.precision(17);
  os << "steps(" << sp.breaks.size() << " breaks)";
  p.description = os.str();
  return p;
}

inline Profile step_profile(double x0, const State& left, const State& right) {
  Profile p = from_steps(StepProfile{{x0}, {left, right}});
  std::ostringstream os;
  os.precision(17);
  os << "step(" << x0 << ")";
  p.description = os.str();
  return p;
}

inline Profile constant_profile(const State& u) {
  Profile p;
  p.pieces.push_back({[u](double) { return u; }, true});
  p.description = "constant";
  return p;
}

/// base + height * max(0, 1 - |x - center| / halfwidth), scalar.
inline Profile hat_profile(double center, double halfwidth, double base, double height) {
  Profile p;
  p.nodes = {center - halfwidth, center, center + halfwidth};
  const auto cst = [base](double) { return scalar_state(base); };
  const auto ramp = [=](double x) {
    return scalar_state(base + height * std::max(0.0, 1.0 - std::abs(x - center) / halfwidth));
  };
  p.pieces = {{cst, true}, {ramp, false}, {ramp, false}, {cst, true}};
  std::ostringstream os;
  os.precision(17);
  os << "hat(" << center << "," << halfwidth << "," << base << "," << height << ")";
  p.description = os.str();
  return p;
}

/// Linear ramp from `left` at x0 to `right` at x0 + width, scalar.
inline Profile ramp_profile(double x0, double width, double left, double right) {
  Profile p;
  p.nodes = {x0, x0 + width};
  const auto l = [left](double) { return scalar_state(left); };
  const auto r = [right](double) { return scalar_state(right); };
  const auto m = [=](double x) { return scalar_state(left + (right - left) * (x - x0) / width); };
  p.pieces = {{l, true}, {m, false}, {r, true}};
  p.description = "ramp";
  return p;
}

/// Exact L¹ distance between two step profiles on [lo, hi] over the merged partition.
inline double l1_distance(const StepProfile& a, const StepProfile& b, double lo, double hi) {
  std::vector<double> cuts{lo, hi};
  for (double x : a.breaks)
    if (x > lo && x < hi) cuts.push_back(x);
  for (double x : b.breaks)
    if (x > lo && x < hi) cuts.push_back(x);
  std::sort(cuts.begin(), cuts.end());
  double acc = 0.0;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    const double w = cuts[k + 1] - cuts[k];
    if (w <= 0) continue;
    const double mid = 0.5 * (cuts[k] + cuts[k + 1]);
    acc += w * (a.at(mid) - b.at(mid)).norm();
  }
  return acc;
}

}  // namespace wft
