#include "deadoil/control.hpp"

#include <algorithm>
#include <cmath>

namespace deadoil {

namespace {

void check_problem(const ControlProblem& cp, const Grid& g) {
  if (!(cp.beta1 > 0.0))
    throw std::invalid_argument("ControlProblem: beta1 must be positive");
  if (!(cp.q0 > 1.0 && cp.q0 < 2.0))
    throw std::invalid_argument("ControlProblem: q0 must lie in (1, 2)");
  if (!(cp.eps_smooth >= 0.0))
    throw std::invalid_argument("ControlProblem: eps_smooth must be >= 0");
  if (!(cp.target_u.grid == g) || !(cp.target_p.grid == g))
    throw std::invalid_argument("ControlProblem: target grids do not match");
}

Eigen::VectorXd solve_with_fallback(const SparseMatrix& a,
                                    const Eigen::VectorXd& b,
                                    const SolverSettings& st) {
  try {
    return solve_bicgstab(a, b, st.tol_linear, st.maxit_linear);
  } catch (const NonconvergenceError&) {
    if (a.nrows > st.dense_cap) throw;
    return solve_dense(a, b, nullptr, st.dense_cap);
  }
}

}  // namespace

double eval_cost(const ControlProblem& cp, const StateSolution& s, const Field& f) {
  check_problem(cp, f.grid);
  if (!(s.u.grid == f.grid))
    throw std::invalid_argument("eval_cost: state grid does not match control");
  const double misfit = 0.5 * lp_power_norm(s.u - cp.target_u, 2.0) +
                        0.5 * lp_power_norm(s.p - cp.target_p, 2.0);
  const double e2 = cp.eps_smooth * cp.eps_smooth;
  const double offset = std::pow(e2, cp.q0);
  double penalty = 0.0;
  for (Eigen::Index k = 0; k < f.values.size(); ++k) {
    const double fk = f.values[k];
    penalty += std::pow(fk * fk + e2, cp.q0) - offset;
  }
  return misfit + cp.beta1 * f.grid.cell_weight() * penalty;
}

AdjointSolution solve_adjoint(AdjointMode mode, const CoefficientModel& m,
                              const StateSolution& s, const ControlProblem& cp,
                              const SolverSettings& st) {
  const Grid& g = s.u.grid;
  check_problem(cp, g);
  const int n = g.size();
  Eigen::VectorXd rhs(2 * n);
  Eigen::VectorXd x;
  if (mode == AdjointMode::continuous) {
    rhs << (s.u - cp.target_u).values, (s.p - cp.target_p).values;
    x = solve_with_fallback(assemble_adjoint_continuous(m, s), rhs, st);
  } else {
    rhs << -(s.u - cp.target_u).values, -(s.p - cp.target_p).values;
    const LinearizedOperator lin = assemble_linearized(m, s);
    x = solve_with_fallback(transpose(lin.op), rhs, st);
  }
  AdjointSolution adj{Field(g), Field(g)};
  adj.e1.values = x.head(n);
  adj.p1.values = x.tail(n);
  return adj;
}

Field reduced_gradient(const ControlProblem& cp, const Field& f,
                       const AdjointSolution& adj) {
  check_problem(cp, f.grid);
  if (!(adj.p1.grid == f.grid))
    throw std::invalid_argument("reduced_gradient: adjoint grid mismatch");
  const double e2 = cp.eps_smooth * cp.eps_smooth;
  Field grad(f.grid);
  for (Eigen::Index k = 0; k < f.values.size(); ++k) {
    const double fk = f.values[k];
    grad.values[k] =
        2.0 * cp.q0 * cp.beta1 * std::pow(fk * fk + e2, cp.q0 - 1.0) * fk -
        adj.p1.values[k];
  }
  return grad;
}

OptimizeResult optimize(const ControlProblem& cp, const CoefficientModel& m,
                        const Field& f0, const SolverSettings& st,
                        const OptimizeOptions& opt) {
  check_problem(cp, f0.grid);
  if (opt.max_outer < 0)
    throw std::invalid_argument("optimize: max_outer must be >= 0");
  if (!(opt.step0 > 0.0))
    throw std::invalid_argument("optimize: step0 must be positive");

  OptimizeResult res;
  res.f = f0;
  res.state = solve_state(m, res.f, st).state;
  res.adjoint = solve_adjoint(opt.mode, m, res.state, cp, st);
  Field grad = reduced_gradient(cp, res.f, res.adjoint);
  double cost = eval_cost(cp, res.state, res.f);
  double sn = l2_norm(grad);
  res.initial_stationarity = sn;
  res.history.push_back({0, cost, sn, 0.0});
  res.converged = sn == 0.0;
  const double target = opt.tol_stationarity * sn;

  Field prev_f = res.f;
  Field prev_grad = grad;
  bool has_prev = false;
  double alpha_accept = opt.step0;

  for (int k = 1; k <= opt.max_outer && !res.converged; ++k) {
    // Barzilai-Borwein trial step when the curvature estimate is usable.
    double alpha = 2.0 * alpha_accept;
    if (k == 1) alpha = opt.step0;
    if (has_prev) {
      const Field sdiff = res.f - prev_f;
      const Field ydiff = grad - prev_grad;
      const double sy = inner_product(sdiff, ydiff);
      if (sy > 0.0) {
        const double bb = inner_product(sdiff, sdiff) / sy;
        if (std::isfinite(bb) && bb > 0.0) alpha = std::clamp(bb, 1e-12, 1e10);
      }
    }

    const double gg = inner_product(grad, grad);
    bool accepted = false;
    Field f_trial;
    StateSolution s_trial;
    double cost_trial = 0.0;
    while (alpha >= st.min_step) {
      f_trial = res.f - alpha * grad;
      // A trial step the state solver cannot follow is rejected like a
      // failed sufficient-decrease test.
      try {
        s_trial = solve_state(m, f_trial, st, &res.state).state;
      } catch (const StateSolveError&) {
        alpha *= st.armijo_shrink;
        continue;
      }
      cost_trial = eval_cost(cp, s_trial, f_trial);
      if (cost_trial <= cost - st.armijo_c * alpha * gg) {
        accepted = true;
        break;
      }
      alpha *= st.armijo_shrink;
    }
    if (!accepted)
      throw OptimizeError("optimize: no Armijo step accepted", sn, k, res.history);

    prev_f = res.f;
    prev_grad = grad;
    has_prev = true;
    res.f = f_trial;
    res.state = s_trial;
    cost = cost_trial;
    alpha_accept = alpha;

    res.adjoint = solve_adjoint(opt.mode, m, res.state, cp, st);
    grad = reduced_gradient(cp, res.f, res.adjoint);
    sn = l2_norm(grad);
    res.history.push_back({k, cost, sn, alpha});
    if (sn <= target) res.converged = true;
  }
  res.final_stationarity = sn;
  return res;
}

}  // namespace deadoil
