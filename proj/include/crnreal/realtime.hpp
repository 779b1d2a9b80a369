#pragma once

#include "crnreal/compiler.hpp"
#include "crnreal/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

// Choosing a speed-up factor empirically: measure the decay of the unsped
// program, pick a from the measured (tau, gamma), then confirm by simulating
// the sped-up program and bump a until the 2^-t bound holds.

namespace crnreal {

struct DecayEstimate {
  double tau = 0.0;    // error <= e^{-gamma t} for every sample with t >= tau
  double gamma = 0.0;  // usable rate (a safety fraction of the fitted rate)
  double fitted_gamma = std::numeric_limits<double>::quiet_NaN();
  bool reached_floor = false;
};

struct SpeedupOptions {
  double measure_t_end = 30.0;
  double certify_t_end = 20.0;
  double safety = 0.8;
  // Least-squares window for log|error|; errors at or below fit_floor are noise.
  double fit_window_lo = 5.0;
  double fit_window_hi = 15.0;
  double fit_floor = 1e-11;
  double fit_ceiling = 1e-2;
  unsigned long max_factor = 64;
  IntegratorOptions integrator;
};

inline DecayEstimate estimate_decay(const Trajectory& traj, std::size_t designated, double target,
                                    const SpeedupOptions& opt = {}) {
  if (!traj.completed()) throw std::runtime_error("estimate_decay: measurement run did not complete");
  std::vector<double> ts, errs;
  for (std::size_t k = 0; k < traj.size(); ++k) {
    ts.push_back(traj.times[k]);
    errs.push_back(std::abs(traj.states[k][designated] - target));
  }
  DecayEstimate d;
  d.fitted_gamma = fit_decay_rate(ts, errs, opt.fit_window_lo, opt.fit_window_hi, opt.fit_floor);
  if (!(d.fitted_gamma > 0)) {
    // Fast programs hit the noise floor before the window; fit on the tail past
    // the last excursion above fit_ceiling instead.
    double start = 0.0;
    for (std::size_t k = 0; k < ts.size(); ++k)
      if (errs[k] >= opt.fit_ceiling) start = ts[k];
    d.fitted_gamma = fit_decay_rate(ts, errs, start, opt.fit_window_hi, opt.fit_floor);
  }
  d.reached_floor = errs.back() <= opt.fit_floor;
  if (!(d.fitted_gamma > 0)) throw std::runtime_error("estimate_decay: no exponential decay observed");
  d.gamma = opt.safety * d.fitted_gamma;
  // tau: just past the last sample that violates e^{-gamma t}. Noise-level
  // errors are ignored; the certification run catches anything this misses.
  d.tau = 0.0;
  for (std::size_t k = 0; k < ts.size(); ++k)
    if (errs[k] > opt.fit_floor && errs[k] > std::exp(-d.gamma * ts[k])) d.tau = ts[k] + 0.1;
  d.tau = std::max(d.tau, 1e-3);
  return d;
}

struct SpeedupResult {
  unsigned long factor = 1;
  unsigned long initial_factor = 1;
  DecayEstimate decay;
  ConvergenceReport certificate;
};

// Smallest factor >= the (tau, gamma) estimate whose sped-up run meets
// |x(t) - |alpha|| <= 2^{-t} on [1, certify_t_end].
inline SpeedupResult auto_speedup(const SignedProgram& program, const SpeedupOptions& opt = {}) {
  const double target = program.magnitude();
  const Trajectory measured = integrate_from_zero(program.crn, opt.measure_t_end, opt.integrator);
  SpeedupResult r;
  r.decay = estimate_decay(measured, program.designated, target, opt);
  r.initial_factor = choose_speedup_factor(r.decay.tau, r.decay.gamma, 1.0, std::log(2.0));
  for (unsigned long a = r.initial_factor; a <= opt.max_factor; ++a) {
    const SignedProgram fast = speed_up(program, a);
    const Trajectory traj = integrate_from_zero(fast.crn, opt.certify_t_end, opt.integrator);
    r.certificate = check_convergence(traj, fast.designated, target);
    if (r.certificate.pass) {
      r.factor = a;
      return r;
    }
  }
  throw std::runtime_error("auto_speedup: no factor up to " + std::to_string(opt.max_factor) +
                           " meets the 2^-t bound");
}

}  // namespace crnreal
