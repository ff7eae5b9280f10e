#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace wft {

using State = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class ErrorKind {
  NonHyperbolic,
  OutOfDomain,
  CurveLeftDomain,
  NewtonDiverged,
  InverseDiverged,
  EventCapExceeded,
  DomainEscape,
  LeftDomain,
  CFLViolation,
  ParseError,
  InvalidArgument,
};

inline const char* to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::NonHyperbolic: return "NonHyperbolic";
    case ErrorKind::OutOfDomain: return "OutOfDomain";
    case ErrorKind::CurveLeftDomain: return "CurveLeftDomain";
    case ErrorKind::NewtonDiverged: return "NewtonDiverged";
    case ErrorKind::InverseDiverged: return "InverseDiverged";
    case ErrorKind::EventCapExceeded: return "EventCapExceeded";
    case ErrorKind::DomainEscape: return "DomainEscape";
    case ErrorKind::LeftDomain: return "LeftDomain";
    case ErrorKind::CFLViolation: return "CFLViolation";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline State make_state(std::initializer_list<double> v) {
  State s(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) s[i++] = x;
  return s;
}

inline State scalar_state(double v) {
  State s(1);
  s[0] = v;
  return s;
}

/// Axis-aligned box Ω.
struct Box {
  State lo;
  State hi;

  bool contains(const State& u, double tol = 1e-12) const {
    if (u.size() != lo.size()) return false;
    for (Eigen::Index k = 0; k < u.size(); ++k) {
      if (!(u[k] >= lo[k] - tol && u[k] <= hi[k] + tol)) return false;
    }
    return true;
  }
  State center() const { return 0.5 * (lo + hi); }
};

/// Half-open interval [lo, hi).
struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  double length() const { return std::max(0.0, hi - lo); }
};

/// Finite union of intervals. Membership is half-open by default; `open` membership
/// excludes the left endpoint as well.
class IntervalUnion {
 public:
  IntervalUnion() = default;
  IntervalUnion(std::initializer_list<Interval> parts) : parts_(parts) { normalize(); }
  explicit IntervalUnion(std::vector<Interval> parts) : parts_(std::move(parts)) { normalize(); }

  const std::vector<Interval>& parts() const { return parts_; }
  bool empty() const { return parts_.empty(); }

  bool contains(double x) const {
    for (const auto& I : parts_)
      if (x >= I.lo && x < I.hi) return true;
    return false;
  }
  bool contains_open(double x) const {
    for (const auto& I : parts_)
      if (x > I.lo && x < I.hi) return true;
    return false;
  }
  double measure() const {
    double m = 0.0;
    for (const auto& I : parts_) m += I.length();
    return m;
  }

 private:
  void normalize() {
    std::erase_if(parts_, [](const Interval& I) { return !(I.hi > I.lo); });
    std::sort(parts_.begin(), parts_.end(),
              [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
    std::vector<Interval> merged;
    for (const auto& I : parts_) {
      if (!merged.empty() && I.lo <= merged.back().hi)
        merged.back().hi = std::max(merged.back().hi, I.hi);
      else
        merged.push_back(I);
    }
    parts_ = std::move(merged);
  }

  std::vector<Interval> parts_;
};

namespace quad {

// 4-point Gauss–Legendre on [-1, 1].
inline constexpr std::array<double, 4> kNodes = {
    -0.861136311594052575224, -0.339981043584856264803,
    0.339981043584856264803, 0.861136311594052575224};
inline constexpr std::array<double, 4> kWeights = {
    0.347854845137453857373, 0.652145154862546142627,
    0.652145154862546142627, 0.347854845137453857373};

template <class F>
State gauss4(F&& f, double a, double b) {
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  State acc = kWeights[0] * f(mid + half * kNodes[0]);
  for (std::size_t k = 1; k < 4; ++k) acc += kWeights[k] * f(mid + half * kNodes[k]);
  return half * acc;
}

inline double gauss4_scalar(const std::function<double(double)>& f, double a, double b) {
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  double acc = 0.0;
  for (std::size_t k = 0; k < 4; ++k) acc += kWeights[k] * f(mid + half * kNodes[k]);
  return half * acc;
}

inline double composite_gauss4(const std::function<double(double)>& f, double a, double b,
                               int panels) {
  if (!(b > a) || panels < 1) return 0.0;
  const double w = (b - a) / panels;
  double acc = 0.0;
  for (int k = 0; k < panels; ++k) {
    const double lo = a + k * w;
    acc += gauss4_scalar(f, lo, k + 1 == panels ? b : lo + w);
  }
  return acc;
}

}  // namespace quad

}  // namespace wft
