#pragma once

#include "crnreal/compiler.hpp"
#include "crnreal/crn.hpp"
#include "crnreal/multipoly.hpp"
#include "crnreal/simulator.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace crnreal {

// entries[i][j] = d f_i / d y_j, exact.
struct SymbolicJacobian {
  std::vector<std::vector<MultiPolynomial>> entries;

  std::size_t size() const { return entries.size(); }
};

inline SymbolicJacobian symbolic_jacobian(const Crn& crn) {
  const auto field = symbolic_vector_field(crn);
  SymbolicJacobian j;
  j.entries.resize(crn.size());
  for (std::size_t i = 0; i < crn.size(); ++i)
    for (std::size_t k = 0; k < crn.size(); ++k) j.entries[i].push_back(field[i].partial(k));
  return j;
}

inline Eigen::MatrixXd evaluate(const SymbolicJacobian& j, const State& state) {
  const auto n = static_cast<Eigen::Index>(j.size());
  if (state.size() != j.size()) throw std::invalid_argument("jacobian: state dimension mismatch");
  Eigen::MatrixXd m(n, n);
  for (Eigen::Index r = 0; r < n; ++r)
    for (Eigen::Index c = 0; c < n; ++c) m(r, c) = j.entries[r][c].evaluate(state);
  return m;
}

inline Eigen::MatrixXd jacobian_at(const Crn& crn, const State& state) {
  if (state.size() != crn.size()) throw std::invalid_argument("jacobian_at: state dimension mismatch");
  return evaluate(symbolic_jacobian(crn), state);
}

class FixedPointError : public std::runtime_error {
 public:
  FixedPointError(const std::string& what, State last, double residual)
      : std::runtime_error(what), last_(std::move(last)), residual_(residual) {}
  const State& last() const { return last_; }
  double residual() const { return residual_; }

 private:
  State last_;
  double residual_;
};

inline double residual_norm(const Crn& crn, const State& z) {
  double r = 0.0;
  for (double v : vector_field(crn, z)) r = std::max(r, std::abs(v));
  return r;
}

struct NewtonOptions {
  std::size_t max_iterations = 100;
  std::size_t max_halvings = 60;
};

// Damped Newton on the symbolic field: each step is halved until the residual
// decreases. Returns z with ||f(z)||_inf <= tol and z >= 0.
inline State find_fixed_point(const Crn& crn, State guess, double tol, const NewtonOptions& opt = {}) {
  if (!(tol > 0)) throw std::invalid_argument("find_fixed_point: tol must be positive");
  if (guess.size() != crn.size()) throw std::invalid_argument("find_fixed_point: guess dimension mismatch");
  const auto jac = symbolic_jacobian(crn);
  const auto n = static_cast<Eigen::Index>(crn.size());
  State z = std::move(guess);
  double res = residual_norm(crn, z);
  for (std::size_t it = 0; it < opt.max_iterations && res > tol; ++it) {
    const auto f = vector_field(crn, z);
    Eigen::VectorXd rhs(n);
    for (Eigen::Index i = 0; i < n; ++i) rhs(i) = -f[i];
    const Eigen::MatrixXd j = evaluate(jac, z);
    Eigen::VectorXd step = j.colPivHouseholderQr().solve(rhs);
    if (!step.allFinite()) throw FixedPointError("find_fixed_point: singular Jacobian", z, res);
    double scale = 1.0;
    bool improved = false;
    for (std::size_t h = 0; h <= opt.max_halvings; ++h, scale /= 2) {
      State trial = z;
      for (Eigen::Index i = 0; i < n; ++i) trial[i] += scale * step(i);
      const double r = residual_norm(crn, trial);
      if (r < res) {
        z = std::move(trial);
        res = r;
        improved = true;
        break;
      }
    }
    if (!improved) break;
  }
  if (res > tol)
    throw FixedPointError("find_fixed_point: no convergence (residual " + std::to_string(res) + ")", z, res);
  for (double v : z)
    if (v < 0) throw FixedPointError("find_fixed_point: converged to a state with a negative coordinate", z, res);
  return z;
}

// Sorted by real part, then imaginary part.
inline std::vector<std::complex<double>> eigenvalues(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("eigenvalues: matrix must be square");
  std::vector<std::complex<double>> out;
  if (m.rows() == 0) return out;
  Eigen::EigenSolver<Eigen::MatrixXd> solver(m, false);
  if (solver.info() != Eigen::Success) throw std::runtime_error("eigenvalues: QR iteration did not converge");
  for (Eigen::Index i = 0; i < m.rows(); ++i) out.push_back(solver.eigenvalues()(i));
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
  return out;
}

enum class Verdict { exponentially_stable, unstable, inconclusive };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::exponentially_stable: return "exponentially_stable";
    case Verdict::unstable: return "unstable";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "?";
}

struct StabilityReport {
  State fixed_point;
  double residual = 0.0;
  std::vector<std::complex<double>> eigenvalues;
  double max_real_part = 0.0;
  Verdict verdict = Verdict::inconclusive;
  bool is_fixed_point = true;
};

// Lyapunov's criterion at z: all real parts < -margin is stable, any > margin is
// unstable, anything else (or z not a fixed point) is inconclusive.
inline StabilityReport check_exponential_stability(const Crn& crn, const State& z, double margin = 1e-9,
                                                   double residual_tol = 1e-8) {
  if (!(margin > 0)) throw std::invalid_argument("check_exponential_stability: margin must be positive");
  StabilityReport r;
  r.fixed_point = z;
  r.residual = residual_norm(crn, z);
  r.eigenvalues = eigenvalues(jacobian_at(crn, z));
  r.max_real_part = -std::numeric_limits<double>::infinity();
  for (const auto& l : r.eigenvalues) r.max_real_part = std::max(r.max_real_part, l.real());
  r.is_fixed_point = r.residual <= residual_tol;
  if (!r.is_fixed_point)
    r.verdict = Verdict::inconclusive;
  else if (r.max_real_part < -margin)
    r.verdict = Verdict::exponentially_stable;
  else if (r.max_real_part > margin)
    r.verdict = Verdict::unstable;
  else
    r.verdict = Verdict::inconclusive;
  return r;
}

struct ReachableFixedPointOptions {
  double t_end = 50.0;
  double tol = 1e-12;
  IntegratorOptions integrator;
};

// Simulate from 0, then polish the endpoint with Newton.
inline State reachable_fixed_point(const Crn& crn, const ReachableFixedPointOptions& opt = {}) {
  const auto traj = integrate_from_zero(crn, opt.t_end, opt.integrator);
  if (!traj.completed())
    throw FixedPointError(std::string("reachable_fixed_point: simulation ") + to_string(traj.status),
                          traj.states.back(), std::numeric_limits<double>::infinity());
  try {
    return find_fixed_point(crn, traj.states.back(), opt.tol);
  } catch (const FixedPointError&) {
    // Degenerate equilibria (a singular Jacobian) stall Newton; the endpoint
    // itself is then the best available fixed point if its residual is small.
    if (residual_norm(crn, traj.states.back()) <= std::max(opt.tol, 1e-9)) return traj.states.back();
    throw;
  }
}

namespace detail {
inline bool zero_block(const SymbolicJacobian& j, std::size_t r0, std::size_t r1, std::size_t c0, std::size_t c1) {
  for (std::size_t r = r0; r < r1; ++r)
    for (std::size_t c = c0; c < c1; ++c)
      if (!j.entries[r][c].is_zero()) return false;
  return true;
}
}  // namespace detail

// Checks the zero blocks of a composition's Jacobian: operand blocks do not
// depend on each other or on the fresh species. Recurses into operands.
inline bool verify_block_structure(const SignedProgram& composite) {
  if (!composite.composition) throw std::invalid_argument("verify_block_structure: program is not a composition");
  const auto& comp = *composite.composition;
  const auto j = symbolic_jacobian(composite.crn);
  const std::size_t n = composite.crn.size();
  std::vector<std::size_t> starts{0};
  for (const auto& op : comp.operands) starts.push_back(starts.back() + op.crn.size());
  if (starts.back() + 1 != n) return false;
  for (std::size_t b = 0; b < comp.operands.size(); ++b) {
    const std::size_t r0 = starts[b], r1 = starts[b + 1];
    // Everything to the left and right of the diagonal block must vanish.
    if (!detail::zero_block(j, r0, r1, 0, r0) || !detail::zero_block(j, r0, r1, r1, n)) return false;
  }
  for (const auto& op : comp.operands)
    if (op.composition && !verify_block_structure(op)) return false;
  return true;
}

}  // namespace crnreal
