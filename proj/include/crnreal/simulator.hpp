#pragma once

#include "crnreal/crn.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <cstddef>
#include <limits>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace crnreal {

struct IntegratorOptions {
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  // Forced samples at every multiple of 1/samples_per_unit.
  unsigned samples_per_unit = 10;
  // Concentrations above this mark the run unbounded.
  double divergence_cap = 1e9;
  // Negative values down to -clamp_threshold are clamped to 0; below that the
  // step is rejected and halved.
  double clamp_threshold = 1e-12;
  // Disables error control and uses this step (still capped at sample points).
  std::optional<double> fixed_step;
  std::size_t max_steps = 50'000'000;
};

enum class IntegrationStatus { completed, unbounded, step_underflow };

inline const char* to_string(IntegrationStatus s) {
  switch (s) {
    case IntegrationStatus::completed: return "completed";
    case IntegrationStatus::unbounded: return "unbounded";
    case IntegrationStatus::step_underflow: return "step_underflow";
  }
  return "?";
}

struct Trajectory {
  std::vector<std::string> species;
  std::vector<double> times;
  std::vector<State> states;
  std::vector<State> derivatives;

  IntegrationStatus status = IntegrationStatus::completed;
  double failure_time = std::numeric_limits<double>::quiet_NaN();
  double t_end = 0.0;
  double rel_tol = 0.0;
  double abs_tol = 0.0;
  std::size_t accepted_steps = 0;
  std::size_t rejected_steps = 0;
  std::size_t clamped_values = 0;
  // Most negative value produced by an accepted step before clamping.
  double most_negative = 0.0;

  bool completed() const { return status == IntegrationStatus::completed; }
  std::size_t size() const { return times.size(); }

  std::size_t species_index(std::string_view name) const {
    for (std::size_t i = 0; i < species.size(); ++i)
      if (species[i] == name) return i;
    throw std::invalid_argument("trajectory has no species '" + std::string(name) + "'");
  }

  std::vector<double> column(std::size_t i) const {
    std::vector<double> out;
    out.reserve(states.size());
    for (const auto& s : states) out.push_back(s.at(i));
    return out;
  }

  // Cubic Hermite interpolation between stored samples.
  double value_at(std::size_t i, double t) const {
    if (times.empty() || t < times.front() || t > times.back())
      throw std::out_of_range("value_at: time outside trajectory");
    auto it = std::lower_bound(times.begin(), times.end(), t);
    auto k = static_cast<std::size_t>(it - times.begin());
    if (*it == t) return states[k][i];
    const std::size_t a = k - 1;
    const double h = times[k] - times[a];
    const double s = (t - times[a]) / h;
    const double h00 = (1 + 2 * s) * (1 - s) * (1 - s), h10 = s * (1 - s) * (1 - s);
    const double h01 = s * s * (3 - 2 * s), h11 = s * s * (s - 1);
    return h00 * states[a][i] + h10 * h * derivatives[a][i] + h01 * states[k][i] + h11 * h * derivatives[k][i];
  }
};

namespace detail {

// Dormand-Prince 5(4) tableau.
struct DormandPrince {
  static constexpr std::array<double, 7> c{0.0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0};
  static constexpr double a[7][6] = {
      {},
      {1.0 / 5},
      {3.0 / 40, 9.0 / 40},
      {44.0 / 45, -56.0 / 15, 32.0 / 9},
      {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729},
      {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656},
      {35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84}};
  // 5th-order weights minus embedded 4th-order weights.
  static constexpr std::array<double, 7> e{71.0 / 57600,      0.0,          -71.0 / 16695, 71.0 / 1920,
                                           -17253.0 / 339200, 22.0 / 525, -1.0 / 40};
};

}  // namespace detail

// Adaptive explicit Runge-Kutta (Dormand-Prince 5(4), FSAL) for the mass-action
// ODE from x0 over [0, t_end]. Failures are reported in the trajectory status.
inline Trajectory integrate(const Crn& crn, const State& x0, double t_end, const IntegratorOptions& opt = {}) {
  using DP = detail::DormandPrince;
  if (!(t_end > 0)) throw std::invalid_argument("integrate: t_end must be positive");
  if (!(opt.rel_tol > 0) || !(opt.abs_tol > 0)) throw std::invalid_argument("integrate: tolerances must be positive");
  if (opt.samples_per_unit == 0) throw std::invalid_argument("integrate: samples_per_unit must be positive");
  if (opt.fixed_step && !(*opt.fixed_step > 0)) throw std::invalid_argument("integrate: fixed step must be positive");
  const std::size_t n = crn.size();
  if (x0.size() != n) throw std::invalid_argument("integrate: initial state dimension mismatch");
  for (double v : x0)
    if (!(v >= 0)) throw std::invalid_argument("integrate: initial concentrations must be nonnegative");

  Trajectory traj;
  traj.species = crn.species();
  traj.t_end = t_end;
  traj.rel_tol = opt.rel_tol;
  traj.abs_tol = opt.abs_tol;

  State y = x0, y_new(n), err(n), tmp(n);
  std::array<State, 7> k;
  for (auto& ki : k) ki.assign(n, 0.0);
  vector_field(crn, y, k[0]);
  traj.times.push_back(0.0);
  traj.states.push_back(y);
  traj.derivatives.push_back(k[0]);

  double t = 0.0;
  double h = opt.fixed_step.value_or(1e-4);
  std::size_t next_sample = 1;
  const double spu = opt.samples_per_unit;

  for (std::size_t step = 0; t < t_end; ++step) {
    if (step >= opt.max_steps) {
      traj.status = IntegrationStatus::step_underflow;
      traj.failure_time = t;
      break;
    }
    const double sample_t = std::min(next_sample / spu, t_end);
    const bool hits_sample = h >= sample_t - t;
    const double h_used = hits_sample ? sample_t - t : h;
    if (!opt.fixed_step && h_used < 1e-14 * std::max(1.0, t) && !hits_sample) {
      traj.status = IntegrationStatus::step_underflow;
      traj.failure_time = t;
      break;
    }

    for (std::size_t s = 1; s < 7; ++s) {
      for (std::size_t i = 0; i < n; ++i) {
        double acc = y[i];
        for (std::size_t j = 0; j < s; ++j) acc += h_used * DP::a[s][j] * k[j][i];
        tmp[i] = acc;
      }
      if (s == 6) y_new = tmp;
      vector_field(crn, tmp, k[s]);
    }

    double err_norm = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double e = 0.0;
      for (std::size_t j = 0; j < 7; ++j) e += DP::e[j] * k[j][i];
      e *= h_used;
      const double scale = opt.abs_tol + opt.rel_tol * std::max(std::abs(y[i]), std::abs(y_new[i]));
      err_norm = std::max(err_norm, std::abs(e) / scale);
    }
    if (!std::isfinite(err_norm)) err_norm = std::numeric_limits<double>::infinity();

    bool accept = opt.fixed_step || err_norm <= 1.0;
    bool negative = false;
    if (accept)
      for (std::size_t i = 0; i < n; ++i)
        if (y_new[i] < -opt.clamp_threshold) negative = true;
    if (accept && negative && !opt.fixed_step) accept = false;

    if (!accept) {
      ++traj.rejected_steps;
      h = negative ? h_used / 2 : h_used * std::max(0.2, 0.9 * std::pow(err_norm, -0.2));
      continue;
    }

    bool clamped = false;
    for (std::size_t i = 0; i < n; ++i) {
      if (y_new[i] < 0) {
        traj.most_negative = std::min(traj.most_negative, y_new[i]);
        y_new[i] = 0.0;
        ++traj.clamped_values;
        clamped = true;
      }
    }
    t = hits_sample ? sample_t : t + h_used;
    if (hits_sample) ++next_sample;
    y = y_new;
    // FSAL: the last stage is f(y_new) unless clamping changed y.
    if (clamped)
      vector_field(crn, y, k[0]);
    else
      k[0] = k[6];
    ++traj.accepted_steps;
    traj.times.push_back(t);
    traj.states.push_back(y);
    traj.derivatives.push_back(k[0]);

    if (std::any_of(y.begin(), y.end(), [&](double v) { return !(v <= opt.divergence_cap); })) {
      traj.status = IntegrationStatus::unbounded;
      traj.failure_time = t;
      break;
    }
    if (!opt.fixed_step) {
      const double grow = err_norm == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err_norm, -0.2), 0.2, 5.0);
      // A step shortened to land on a sample point does not limit the next one.
      h = hits_sample ? std::max(h, h_used * grow) : h_used * grow;
    }
  }
  return traj;
}

inline Trajectory integrate_from_zero(const Crn& crn, double t_end, const IntegratorOptions& opt = {}) {
  return integrate(crn, State(crn.size(), 0.0), t_end, opt);
}

// beta: maximum concentration over all species and samples.
inline double check_boundedness(const Trajectory& traj) {
  if (traj.times.empty()) throw std::invalid_argument("check_boundedness: empty trajectory");
  double m = 0.0;
  for (const auto& s : traj.states)
    for (double v : s) m = std::max(m, v);
  return m;
}

struct ConvergenceSample {
  double t;
  double x;
  double error;
  double bound;
};

struct ConvergenceReport {
  double target = 0.0;
  std::string species;
  std::vector<ConvergenceSample> samples;
  bool pass = false;
  std::optional<double> first_failure;
  bool trajectory_complete = true;
  double beta_observed = 0.0;
  // Negated least-squares slope of log|error|; NaN when too few usable samples.
  double empirical_gamma = std::numeric_limits<double>::quiet_NaN();
};

struct ConvergenceOptions {
  double window_lo = 1.0 / 3;  // fraction of t_end
  double window_hi = 2.0 / 3;
  // Errors at or below this are integrator noise and excluded from the fit.
  double noise_floor = 1e-11;
};

// Least-squares slope of log(error) against t over [lo, hi], errors above floor.
inline double fit_decay_rate(const std::vector<double>& times, const std::vector<double>& errors, double lo, double hi,
                             double floor) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t m = 0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (times[i] < lo || times[i] > hi || !(errors[i] > floor)) continue;
    const double ly = std::log(errors[i]);
    sx += times[i];
    sy += ly;
    sxx += times[i] * times[i];
    sxy += times[i] * ly;
    ++m;
  }
  if (m < 3) return std::numeric_limits<double>::quiet_NaN();
  const double denom = m * sxx - sx * sx;
  if (denom <= 0) return std::numeric_limits<double>::quiet_NaN();
  return -(m * sxy - sx * sy) / denom;
}

// |x(t) - target| <= 2^{-t} at every sample with t >= 1.
inline ConvergenceReport check_convergence(const Trajectory& traj, std::size_t designated, double target,
                                           const ConvergenceOptions& opt = {}) {
  if (std::isnan(target) || target < 0) throw std::invalid_argument("check_convergence: target must be a nonnegative number");
  if (designated >= traj.species.size()) throw std::invalid_argument("check_convergence: designated species out of range");
  if (traj.times.empty() || (traj.completed() && traj.times.back() < 1.0))
    throw std::invalid_argument("check_convergence: trajectory must reach t >= 1");
  ConvergenceReport r;
  r.target = target;
  r.species = traj.species[designated];
  r.trajectory_complete = traj.completed();
  r.beta_observed = check_boundedness(traj);
  bool ok = true;
  std::vector<double> ts, errs;
  for (std::size_t k = 0; k < traj.size(); ++k) {
    const double t = traj.times[k];
    const double x = traj.states[k][designated];
    const double e = std::abs(x - target);
    ts.push_back(t);
    errs.push_back(e);
    if (t < 1.0) continue;
    const double bound = std::exp2(-t);
    r.samples.push_back({t, x, e, bound});
    if (!(e <= bound) && ok) {
      ok = false;
      r.first_failure = t;
    }
  }
  r.pass = ok && r.trajectory_complete;
  const double t_end = traj.times.back();
  r.empirical_gamma = fit_decay_rate(ts, errs, opt.window_lo * t_end, opt.window_hi * t_end, opt.noise_floor);
  return r;
}

// Closed-form trajectories used as oracles.
struct ReferenceSolution {
  enum class Kind { rational, inv_sqrt2, x_relax, y_transcendental };
  Kind kind;
  double a = 0.0;
  double b = 1.0;

  // "rational(a,b)", "inv_sqrt2", "x_relax" or "y_transcendental".
  static ReferenceSolution parse(std::string_view name) {
    if (name == "inv_sqrt2") return {Kind::inv_sqrt2};
    if (name == "x_relax") return {Kind::x_relax};
    if (name == "y_transcendental") return {Kind::y_transcendental};
    if (name.starts_with("rational(") && name.ends_with(")")) {
      const std::string args(name.substr(9, name.size() - 10));
      const auto comma = args.find(',');
      if (comma != std::string::npos) {
        try {
          const double a = std::stod(args.substr(0, comma)), b = std::stod(args.substr(comma + 1));
          if (b > 0 && a >= 0) return {Kind::rational, a, b};
        } catch (const std::exception&) {
        }
      }
    }
    throw std::invalid_argument("unknown reference solution '" + std::string(name) + "'");
  }

  double operator()(double t) const {
    if (t < 0) throw std::invalid_argument("reference solution needs t >= 0");
    switch (kind) {
      case Kind::rational: return a / b * -std::expm1(-b * t);
      case Kind::inv_sqrt2: return std::tanh(std::sqrt(2.0) * t) / std::sqrt(2.0);
      case Kind::x_relax: return -std::expm1(-t);
      case Kind::y_transcendental: return std::expm1(-std::expm1(-t));
    }
    return std::numeric_limits<double>::quiet_NaN();
  }
};

inline double reference_solution(std::string_view name, double t) { return ReferenceSolution::parse(name)(t); }

// Closed forms around the transcendental construction.
namespace transcendental {

inline double f(double t) { return std::exp(-t) + std::exp(-std::expm1(-t)) - 1.0; }
inline double r1(double t) { return (f(t) + std::sqrt(f(t) * f(t) + 4)) / 2; }
inline double r2(double t) { return (f(t) - std::sqrt(f(t) * f(t) + 4)) / 2; }
inline double limit() {
  const double em1 = std::exp(1.0) - 1.0;
  return (em1 + std::sqrt(em1 * em1 + 4)) / 2;
}
// Solution of du/dt = -(u - L(1 - e^{-t}))(sqrt2 - 1), u(0) = 0.
inline double u_lower(double t) {
  const double c = std::sqrt(2.0) - 1.0;
  return limit() * (1 - (std::exp(-c * t) - c * std::exp(-t)) / (1 - c));
}

}  // namespace transcendental

struct TranscendentalBoundsReport {
  bool sandwich = true;     // u_lower - eps <= u <= r1 + eps
  bool gap = true;          // u - r2 >= sqrt2 - 1 - eps
  double max_identity_error = 0.0;  // max |(u - v) - (e^{1 - e^{-t}} - 1)|
  std::optional<double> first_violation;

  bool ok() const { return sandwich && gap; }
};

inline TranscendentalBoundsReport transcendental_bounds_report(const Trajectory& traj, double eps = 1e-6) {
  if (traj.species.size() != 3) throw std::invalid_argument("transcendental bounds: expected species X, U, V");
  const std::size_t iu = traj.species_index("U"), iv = traj.species_index("V");
  traj.species_index("X");
  TranscendentalBoundsReport r;
  const double gap = std::sqrt(2.0) - 1.0;
  for (std::size_t k = 0; k < traj.size(); ++k) {
    const double t = traj.times[k], u = traj.states[k][iu], v = traj.states[k][iv];
    const bool sandwich = transcendental::u_lower(t) - eps <= u && u <= transcendental::r1(t) + eps;
    const bool gap_ok = u - transcendental::r2(t) >= gap - eps;
    if ((!sandwich || !gap_ok) && !r.first_violation) r.first_violation = t;
    r.sandwich = r.sandwich && sandwich;
    r.gap = r.gap && gap_ok;
    r.max_identity_error = std::max(r.max_identity_error, std::abs((u - v) - std::expm1(-std::expm1(-t))));
  }
  return r;
}

inline bool check_transcendental_bounds(const Trajectory& traj) { return transcendental_bounds_report(traj).ok(); }

inline void write_csv(std::ostream& out, const Trajectory& traj) {
  out << "t";
  for (const auto& s : traj.species) out << ',' << s;
  out << '\n';
  char buf[32];
  for (std::size_t k = 0; k < traj.size(); ++k) {
    std::snprintf(buf, sizeof buf, "%.17g", traj.times[k]);
    out << buf;
    for (double v : traj.states[k]) {
      std::snprintf(buf, sizeof buf, "%.17g", v);
      out << ',' << buf;
    }
    out << '\n';
  }
}

}  // namespace crnreal
