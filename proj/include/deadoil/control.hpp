#pragma once

#include "deadoil/state_solver.hpp"

namespace deadoil {

// Tracking-type objective for the injection control f:
//   J = 1/2 |u - U|_2^2 + 1/2 |p - P|_2^2 + beta1 * integral |f|^(2 q0)
// with the penalty smoothed as (f^2 + eps^2)^q0 - eps^(2 q0), which vanishes
// identically at f = 0 and is invisible away from zero for small eps.
struct ControlProblem {
  double beta1 = 0.1;       // > 0
  double q0 = 1.5;          // in (1, 2)
  double eps_smooth = 1e-8; // >= 0
  Field target_u;
  Field target_p;
};

double eval_cost(const ControlProblem& cp, const StateSolution& s, const Field& f);

struct AdjointSolution {
  Field e1;  // multiplier paired with the saturation equation
  Field p1;  // multiplier paired with the pressure equation
};

// continuous: discretizes the adjoint system as it is written for the
//             continuous problem and solves it with right-hand side
//             (u - U, p - P); an independent route to the multipliers.
// discrete:   solves transpose(J) (e1, p1) = -(u - U, p - P) with J the exact
//             Jacobian of the discrete residual; the quadrature weights of
//             the pairing cancel against those of the misfit gradient. This
//             is the exact gradient path and the optimizer default.
// Both modes use BiCGStab with the dense fallback and agree under refinement.
enum class AdjointMode { continuous, discrete };

AdjointSolution solve_adjoint(AdjointMode mode, const CoefficientModel& m,
                              const StateSolution& s, const ControlProblem& cp,
                              const SolverSettings& st);

// Gradient of the reduced objective as a nodal field:
//   2 q0 beta1 (f^2 + eps^2)^(q0-1) f - p1.
// Zero exactly at a stationary point of the optimality system.
Field reduced_gradient(const ControlProblem& cp, const Field& f,
                       const AdjointSolution& adj);

struct OptimizeOptions {
  int max_outer = 200;
  double tol_stationarity = 1e-6;  // relative to the initial gradient norm
  double step0 = 1.0;
  AdjointMode mode = AdjointMode::discrete;
};

struct OptimizeRecord {
  int iter = 0;
  double cost = 0.0;
  double stationarity = 0.0;
  double step = 0.0;  // step that produced this iterate (0 for the start)
};

struct OptimizeResult {
  Field f;
  StateSolution state;
  AdjointSolution adjoint;
  std::vector<OptimizeRecord> history;
  double initial_stationarity = 0.0;
  double final_stationarity = 0.0;
  bool converged = false;  // stationarity tolerance reached
};

class OptimizeError : public NonconvergenceError {
 public:
  OptimizeError(const std::string& msg, double residual, int iterations,
                std::vector<OptimizeRecord> history)
      : NonconvergenceError(msg, residual, iterations),
        history_(std::move(history)) {}
  const std::vector<OptimizeRecord>& history() const { return history_; }

 private:
  std::vector<OptimizeRecord> history_;
};

// Steepest descent on the reduced objective: direction is minus the reduced
// gradient, the trial step starts from a safeguarded Barzilai-Borwein ratio
// and Armijo backtracking enforces strict descent. State solves are
// warm-started Newton. Stops at the relative stationarity tolerance or after
// max_outer accepted steps; throws OptimizeError when no step is accepted.
OptimizeResult optimize(const ControlProblem& cp, const CoefficientModel& m,
                        const Field& f0, const SolverSettings& st,
                        const OptimizeOptions& opt);

}  // namespace deadoil
