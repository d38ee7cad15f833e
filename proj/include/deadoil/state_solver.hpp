#pragma once

#include "deadoil/operators.hpp"

#include <iosfwd>
#include <vector>

namespace deadoil {

struct SolverSettings {
  double tol_nonlinear = 1e-10;  // on |(F1,F2)|_2 relative to 1 + |f|_2
  int maxit_nonlinear = 100;
  double tol_linear = 1e-12;     // relative residual of inner linear solves
  int maxit_linear = 10000;
  double armijo_c = 1e-4;
  double armijo_shrink = 0.5;
  double min_step = 1e-8;
  int dense_cap = 4096;          // largest system the dense fallback accepts
};

struct IterationRecord {
  int iter = 0;
  double residual = 0.0;
  double step = 0.0;
};
using IterationLog = std::vector<IterationRecord>;

// One JSON object per line with keys iter, residual, step.
void write_jsonl(const IterationLog& log, std::ostream& os);

// Nonconvergence that also carries the iteration history accumulated so far.
class StateSolveError : public NonconvergenceError {
 public:
  StateSolveError(const std::string& msg, double residual, int iterations,
                  IterationLog log)
      : NonconvergenceError(msg, residual, iterations), log_(std::move(log)) {}
  const IterationLog& log() const { return log_; }

 private:
  IterationLog log_;
};

struct StateResult {
  StateSolution state;
  IterationLog log;
};

// sqrt(|F1|_2^2 + |F2|_2^2) at the given state.
double residual_norm(const CoefficientModel& m, const StateSolution& s,
                     const Field& f, const Field* sat_source = nullptr);

// Pressure solve with frozen saturation: -div(d(u) grad p) = f by conjugate
// gradients on the SPD flux operator.
Field solve_pressure(const CoefficientModel& m, const Field& u, const Field& f,
                     const SolverSettings& st);

// One Picard step for the saturation equation with frozen coefficients:
// the face coefficient is the secant slope of phi across the face (the
// divided difference of nodal phi values, phi'(u) in the coincident limit),
// so a fixed point of the sweep satisfies the discrete residual exactly.
// Solves  L_sec(u_prev) u_new = div_h(g(u_prev) grad_h p) + s1.
Field solve_saturation(const CoefficientModel& m, const Field& u_prev,
                       const Field& p, const SolverSettings& st,
                       const Field* sat_source = nullptr);

// Alternates solve_pressure / solve_saturation from zero initial fields until
// |(F1,F2)|_2 <= tol_nonlinear * (1 + |f|_2). Throws StateSolveError when the
// sweep budget is exhausted.
StateResult solve_state_picard(const CoefficientModel& m, const Field& f,
                               const SolverSettings& st,
                               const Field* sat_source = nullptr);

// Damped Newton on the coupled residual: exact sparse Jacobian, BiCGStab with
// dense fallback for the step, Armijo backtracking on |F|_2^2.
StateResult solve_state_newton(const CoefficientModel& m, const Field& f,
                               const StateSolution& init,
                               const SolverSettings& st,
                               const Field* sat_source = nullptr);

// Convenience driver: a few Picard warm-up sweeps, then Newton. When warm is
// given it skips the warm-up and starts Newton there.
StateResult solve_state(const CoefficientModel& m, const Field& f,
                        const SolverSettings& st,
                        const StateSolution* warm = nullptr,
                        const Field* sat_source = nullptr);

}  // namespace deadoil
