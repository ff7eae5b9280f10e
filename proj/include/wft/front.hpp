#pragma once

#include "wft/core.hpp"

namespace wft {

enum class FrontKind { Shock, Rarefaction, Contact, Zero, NonPhysical };

inline const char* to_string(FrontKind k) {
  switch (k) {
    case FrontKind::Shock: return "shock";
    case FrontKind::Rarefaction: return "rarefaction";
    case FrontKind::Contact: return "contact";
    case FrontKind::Zero: return "zero";
    case FrontKind::NonPhysical: return "nonphysical";
  }
  return "?";
}

inline FrontKind front_kind_from_string(const std::string& s) {
  if (s == "shock") return FrontKind::Shock;
  if (s == "rarefaction") return FrontKind::Rarefaction;
  if (s == "contact") return FrontKind::Contact;
  if (s == "zero") return FrontKind::Zero;
  if (s == "nonphysical") return FrontKind::NonPhysical;
  throw Error(ErrorKind::ParseError, "unknown front kind '" + s + "'");
}

/// One straight segment of the front diagram. The position is affine in t from the birth
/// point; zero fronts sit at x_birth = j h forever.
struct Front {
  int id = -1;
  FrontKind kind = FrontKind::Shock;
  int family = 0;  // 1..n for physical fronts, 0 otherwise
  int generation = 1;
  double t_birth = 0.0;
  double x_birth = 0.0;
  double t_death = kInf;
  double speed = 0.0;
  double strength = 0.0;  // σ: λ-jump (GNL), curve parameter (LD), ∫ω (zero), |Δu| (non-physical)
  double param = 0.0;     // wave-curve parameter
  State left_state;
  State right_state;

  bool physical() const { return kind != FrontKind::Zero && kind != FrontKind::NonPhysical; }
  bool is_zero() const { return kind == FrontKind::Zero; }
  bool alive_at(double t) const { return t >= t_birth && t <= t_death; }
  double position(double t) const {
    if (kind == FrontKind::Zero) return x_birth;
    return x_birth + speed * (t - t_birth);
  }
};

/// Membership in the extended approaching set Ã for a left of b.
inline bool approaching(const Front& a, const Front& b, int p) {
  if (a.kind == FrontKind::NonPhysical || b.kind == FrontKind::NonPhysical) return false;
  if (a.is_zero() && b.is_zero()) return false;
  if (a.is_zero()) return b.family <= p;
  if (b.is_zero()) return a.family > p;
  if (a.family > b.family) return true;
  return a.family == b.family &&
         (a.kind == FrontKind::Shock || b.kind == FrontKind::Shock);
}

struct GlimmValues {
  double V = 0.0;       // all fronts, zero and non-physical included
  double Q = 0.0;       // Ã pairs, zero fronts included
  double V_wave = 0.0;  // physical fronts only
  double Q_wave = 0.0;  // approaching physical pairs only
  double V_zero = 0.0;
  double V_np = 0.0;
};

/// V and Q for fronts listed in spatial order, in O(N n) via running per-family sums.
template <class FrontRange, class Get>
GlimmValues glimm_values(const FrontRange& ordered, Get&& get, int n, int p) {
  GlimmValues g;
  std::vector<double> fam(static_cast<std::size_t>(n + 1), 0.0);
  std::vector<double> shocks(static_cast<std::size_t>(n + 1), 0.0);
  double zeros = 0.0;
  for (const auto& item : ordered) {
    const Front& f = get(item);
    const double s = std::abs(f.strength);
    g.V += s;
    if (f.kind == FrontKind::NonPhysical) {
      g.V_np += s;
      continue;
    }
    if (f.is_zero()) {
      g.V_zero += s;
      double faster = 0.0;
      for (int k = p + 1; k <= n; ++k) faster += fam[static_cast<std::size_t>(k)];
      g.Q += s * faster;
      zeros += s;
      continue;
    }
    const auto k = static_cast<std::size_t>(f.family);
    double left = 0.0;
    for (std::size_t j = k + 1; j < fam.size(); ++j) left += fam[j];
    left += f.kind == FrontKind::Shock ? fam[k] : shocks[k];
    g.Q_wave += s * left;
    g.Q += s * left;
    if (f.family <= p) g.Q += s * zeros;
    g.V_wave += s;
    fam[k] += s;
    if (f.kind == FrontKind::Shock) shocks[k] += s;
  }
  return g;
}

inline GlimmValues glimm_values(const std::vector<Front>& ordered, int n, int p) {
  return glimm_values(ordered, [](const Front& f) -> const Front& { return f; }, n, p);
}

}  // namespace wft
