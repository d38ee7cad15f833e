#include "deadoil/state_solver.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <ostream>

namespace deadoil {

namespace {

Eigen::VectorXd stack(const StateSolution& s) {
  Eigen::VectorXd x(2 * s.u.values.size());
  x << s.u.values, s.p.values;
  return x;
}

StateSolution unstack(const Grid& g, const Eigen::VectorXd& x) {
  StateSolution s{Field(g), Field(g)};
  s.u.values = x.head(g.size());
  s.p.values = x.tail(g.size());
  return s;
}

// Secant slope of phi across a face; falls back to the midpoint derivative
// when the two values coincide to rounding.
double phi_secant(const CoefficientModel& m, double ua, double ub) {
  const double du = ua - ub;
  if (std::abs(du) <= 1e-8 * (1.0 + std::abs(ua) + std::abs(ub)))
    return m.dphi(0.5 * (ua + ub));
  return (m.phi(ua) - m.phi(ub)) / du;
}

}  // namespace

void write_jsonl(const IterationLog& log, std::ostream& os) {
  for (const IterationRecord& r : log) {
    nlohmann::ordered_json j;
    j["iter"] = r.iter;
    j["residual"] = r.residual;
    j["step"] = r.step;
    os << j.dump() << "\n";
  }
}

double residual_norm(const CoefficientModel& m, const StateSolution& s,
                     const Field& f, const Field* sat_source) {
  const auto [r1, r2] = state_residual(m, s, f, sat_source);
  return std::sqrt(lp_power_norm(r1, 2.0) + lp_power_norm(r2, 2.0));
}

Field solve_pressure(const CoefficientModel& m, const Field& u, const Field& f,
                     const SolverSettings& st) {
  if (!(u.grid == f.grid))
    throw std::invalid_argument("solve_pressure: field grids differ");
  Field d_of_u(u.grid);
  for (Eigen::Index k = 0; k < u.values.size(); ++k)
    d_of_u.values[k] = m.d(u.values[k]);
  const SparseMatrix a = assemble_flux_operator(d_of_u, m.d(0.0));
  Field p(u.grid);
  p.values = solve_cg(a, f.values, st.tol_linear, st.maxit_linear);
  return p;
}

Field solve_saturation(const CoefficientModel& m, const Field& u_prev,
                       const Field& p, const SolverSettings& st,
                       const Field* sat_source) {
  const Grid& g = u_prev.grid;
  if (!(p.grid == g))
    throw std::invalid_argument("solve_saturation: field grids differ");

  // Frozen-coefficient operator with secant face slopes of phi.
  const int n = g.size();
  std::vector<Triplet> ts;
  ts.reserve(5 * n);
  Field g_of_u(g);
  for (Eigen::Index k = 0; k < n; ++k) g_of_u.values[k] = m.g(u_prev.values[k]);
  const SparseMatrix lg = assemble_flux_operator(g_of_u, m.g(0.0));
  for (int i = 0; i < g.nx; ++i)
    for (int j = 0; j < g.ny; ++j) {
      const int row = g.index(i, j);
      const double uc = u_prev(i, j);
      const struct { int di, dj; } faces[4] = {{-1, 0}, {1, 0}, {0, -1}, {0, 1}};
      for (const auto& fc : faces) {
        const int ni = i + fc.di, nj = j + fc.dj;
        const double w = fc.di != 0 ? 1.0 / (g.hx * g.hx) : 1.0 / (g.hy * g.hy);
        const bool in = ni >= 0 && ni < g.nx && nj >= 0 && nj < g.ny;
        const double un = in ? u_prev(ni, nj) : 0.0;
        const double sec = phi_secant(m, uc, un);
        ts.push_back({row, row, sec * w});
        if (in) ts.push_back({row, g.index(ni, nj), -sec * w});
      }
    }
  const SparseMatrix a = SparseMatrix::from_triplets(n, n, std::move(ts));

  Eigen::VectorXd b = -spmv(lg, p.values);
  if (sat_source) {
    if (!(sat_source->grid == g))
      throw std::invalid_argument("solve_saturation: source grid mismatch");
    b += sat_source->values;
  }
  Field u(g);
  u.values = solve_cg(a, b, st.tol_linear, st.maxit_linear);
  return u;
}

StateResult solve_state_picard(const CoefficientModel& m, const Field& f,
                               const SolverSettings& st,
                               const Field* sat_source) {
  const Grid& g = f.grid;
  StateResult out{{Field(g), Field(g)}, {}};
  const double target = st.tol_nonlinear * (1.0 + l2_norm(f));
  double res = residual_norm(m, out.state, f, sat_source);
  out.log.push_back({0, res, 0.0});
  if (res <= target) return out;
  for (int k = 1; k <= st.maxit_nonlinear; ++k) {
    out.state.p = solve_pressure(m, out.state.u, f, st);
    out.state.u = solve_saturation(m, out.state.u, out.state.p, st, sat_source);
    res = residual_norm(m, out.state, f, sat_source);
    out.log.push_back({k, res, 1.0});
    if (res <= target) return out;
  }
  throw StateSolveError("solve_state_picard: sweep budget exhausted", res,
                        st.maxit_nonlinear, out.log);
}

namespace {

// Newton step solve: BiCGStab first, dense fallback when the system fits.
Eigen::VectorXd newton_step(const SparseMatrix& a, const Eigen::VectorXd& b,
                            double tol, const SolverSettings& st) {
  try {
    return solve_bicgstab(a, b, tol, st.maxit_linear);
  } catch (const NonconvergenceError&) {
    if (a.nrows > st.dense_cap) throw;
    return solve_dense(a, b, nullptr, st.dense_cap);
  }
}

}  // namespace

StateResult solve_state_newton(const CoefficientModel& m, const Field& f,
                               const StateSolution& init,
                               const SolverSettings& st,
                               const Field* sat_source) {
  const Grid& g = f.grid;
  if (!(init.u.grid == g) || !(init.p.grid == g))
    throw std::invalid_argument("solve_state_newton: field grids differ");

  StateResult out{init, {}};
  const double fnorm = l2_norm(f);
  const double target = st.tol_nonlinear * (1.0 + fnorm);
  auto norm_of = [&](const StateSolution& s) {
    return residual_norm(m, s, f, sat_source);
  };
  double res = norm_of(out.state);
  out.log.push_back({0, res, 0.0});
  if (res <= target) return out;

  for (int k = 1; k <= st.maxit_nonlinear; ++k) {
    const auto [r1, r2] = state_residual(m, out.state, f, sat_source);
    Eigen::VectorXd rhs(2 * g.size());
    rhs << -r1.values, -r2.values;
    const LinearizedOperator lin = assemble_linearized(m, out.state);
    // Inexact Newton forcing: loose early, tightening with the residual.
    const double rel = res / (1.0 + fnorm);
    const double tol = std::clamp(0.5 * rel, st.tol_linear, 1e-4);
    const Eigen::VectorXd delta = newton_step(lin.op, rhs, tol, st);

    const Eigen::VectorXd x = stack(out.state);
    double step = 1.0;
    double trial_res = 0.0;
    bool accepted = false;
    while (step >= st.min_step) {
      const StateSolution trial = unstack(g, x + step * delta);
      trial_res = norm_of(trial);
      if (trial_res * trial_res <= (1.0 - 2.0 * st.armijo_c * step) * res * res) {
        out.state = trial;
        accepted = true;
        break;
      }
      step *= st.armijo_shrink;
    }
    if (!accepted)
      throw StateSolveError("solve_state_newton: line search stagnated", res, k,
                            out.log);
    res = trial_res;
    out.log.push_back({k, res, step});
    if (res <= target) return out;
  }
  throw StateSolveError("solve_state_newton: iteration budget exhausted", res,
                        st.maxit_nonlinear, out.log);
}

StateResult solve_state(const CoefficientModel& m, const Field& f,
                        const SolverSettings& st, const StateSolution* warm,
                        const Field* sat_source) {
  StateSolution start{Field(f.grid), Field(f.grid)};
  if (warm) {
    start = *warm;
  } else {
    // A few fixed-point sweeps bring Newton into its contraction basin; no
    // convergence demand here, Newton carries the stopping rule.
    const double target = st.tol_nonlinear * (1.0 + l2_norm(f));
    for (int k = 0; k < 5; ++k) {
      start.p = solve_pressure(m, start.u, f, st);
      start.u = solve_saturation(m, start.u, start.p, st, sat_source);
      if (residual_norm(m, start, f, sat_source) <= target) break;
    }
  }
  return solve_state_newton(m, f, start, st, sat_source);
}

}  // namespace deadoil
