// Burgers with a damping source on [-1, 1]: run the tracker, print the functionals at a few
// times and the decay report for a window behind the shock.

#include "wft/wft.hpp"

#include <cstdio>

int main() {
  using namespace wft;
  const SystemSpec sys = burgers();
  SourceModel sm;
  sm.shape = SourceModel::Shape::Indicator;
  sm.lo = -1.0;
  sm.hi = 1.0;
  sm.a1 = -0.3;
  const SourceSpec src = make_source(sm, sys);

  TrackerConfig cfg;
  cfg.eps = 1e-6;
  cfg.h = 0.05;
  cfg.nu = 0.01;
  cfg.t_end = 1.0;

  StepProfile data;
  data.breaks = {-0.5, 0.0, 0.4};
  data.values = {scalar_state(0.9), scalar_state(1.15), scalar_state(0.85), scalar_state(1.1)};
  const TrajectoryLog log = run(sys, src, cfg, from_steps(data));
  std::printf("fronts: %zu  events: %zu  lattice mass: %.6f\n", log.fronts.size(),
              log.events.size(), log.omega_mass);

  const FunctionalSeries fs = functionals(log);
  for (std::size_t k = 0; k < fs.times.size(); k += std::max<std::size_t>(1, fs.times.size() / 8))
    std::printf("t=%.4f  V=%.6f  Q=%.6f  Upsilon_h=%.6f\n", fs.times[k], fs.V[k], fs.Q[k], fs.upsilon[k]);

  const OleinikReport rep = oleinik_report(log, 1, IntervalUnion{{0.5, 2.0}}, 0.0, 1.0);
  std::printf("%s", rep.to_text().c_str());
  return 0;
}
