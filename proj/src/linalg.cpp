#include "deadoil/linalg.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

namespace deadoil {

void SparseMatrix::check() const {
  if (nrows < 0 || ncols < 0)
    throw std::invalid_argument("SparseMatrix: negative dimension");
  if (row_offsets.size() != static_cast<size_t>(nrows) + 1)
    throw std::invalid_argument("SparseMatrix: row_offsets must have nrows+1 entries");
  if (row_offsets.front() != 0 || row_offsets.back() != nnz())
    throw std::invalid_argument("SparseMatrix: row_offsets must run from 0 to nnz");
  if (col_indices.size() != values.size())
    throw std::invalid_argument("SparseMatrix: col_indices/values size mismatch");
  for (int r = 0; r < nrows; ++r) {
    if (row_offsets[r] > row_offsets[r + 1])
      throw std::invalid_argument("SparseMatrix: row_offsets must be nondecreasing");
    for (int k = row_offsets[r]; k < row_offsets[r + 1]; ++k) {
      if (col_indices[k] < 0 || col_indices[k] >= ncols)
        throw std::invalid_argument("SparseMatrix: column index out of range");
      if (k > row_offsets[r] && col_indices[k] <= col_indices[k - 1])
        throw std::invalid_argument("SparseMatrix: columns must be strictly increasing per row");
    }
  }
}

SparseMatrix SparseMatrix::from_triplets(int nrows, int ncols, std::vector<Triplet> ts) {
  for (const Triplet& t : ts)
    if (t.row < 0 || t.row >= nrows || t.col < 0 || t.col >= ncols)
      throw std::invalid_argument("from_triplets: entry out of range");
  std::stable_sort(ts.begin(), ts.end(), [](const Triplet& a, const Triplet& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  SparseMatrix m;
  m.nrows = nrows;
  m.ncols = ncols;
  m.row_offsets.assign(static_cast<size_t>(nrows) + 1, 0);
  size_t k = 0;
  while (k < ts.size()) {
    double v = ts[k].value;
    size_t next = k + 1;
    while (next < ts.size() && ts[next].row == ts[k].row && ts[next].col == ts[k].col) {
      v += ts[next].value;  // duplicates are summed in sorted order
      ++next;
    }
    m.col_indices.push_back(ts[k].col);
    m.values.push_back(v);
    ++m.row_offsets[ts[k].row + 1];
    k = next;
  }
  for (int r = 0; r < nrows; ++r) m.row_offsets[r + 1] += m.row_offsets[r];
  m.check();
  return m;
}

Eigen::VectorXd spmv(const SparseMatrix& a, const Eigen::VectorXd& x) {
  if (x.size() != a.ncols)
    throw std::invalid_argument("spmv: vector length does not match ncols");
  Eigen::VectorXd y = Eigen::VectorXd::Zero(a.nrows);
  for (int r = 0; r < a.nrows; ++r) {
    double acc = 0.0;
    for (int k = a.row_offsets[r]; k < a.row_offsets[r + 1]; ++k)
      acc += a.values[k] * x[a.col_indices[k]];
    y[r] = acc;
  }
  return y;
}

SparseMatrix transpose(const SparseMatrix& a) {
  SparseMatrix t;
  t.nrows = a.ncols;
  t.ncols = a.nrows;
  t.row_offsets.assign(static_cast<size_t>(a.ncols) + 1, 0);
  t.col_indices.resize(a.col_indices.size());
  t.values.resize(a.values.size());
  for (int c : a.col_indices) ++t.row_offsets[c + 1];
  for (int r = 0; r < t.nrows; ++r) t.row_offsets[r + 1] += t.row_offsets[r];
  std::vector<int> cursor(t.row_offsets.begin(), t.row_offsets.end() - 1);
  // Walking the source rows in order keeps each transposed row sorted.
  for (int r = 0; r < a.nrows; ++r)
    for (int k = a.row_offsets[r]; k < a.row_offsets[r + 1]; ++k) {
      const int pos = cursor[a.col_indices[k]]++;
      t.col_indices[pos] = r;
      t.values[pos] = a.values[k];
    }
  return t;
}

Eigen::MatrixXd to_dense(const SparseMatrix& a) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(a.nrows, a.ncols);
  for (int r = 0; r < a.nrows; ++r)
    for (int k = a.row_offsets[r]; k < a.row_offsets[r + 1]; ++k)
      m(r, a.col_indices[k]) = a.values[k];
  return m;
}

void write_coordinate(const SparseMatrix& a, std::ostream& os) {
  char buf[80];
  for (int r = 0; r < a.nrows; ++r)
    for (int k = a.row_offsets[r]; k < a.row_offsets[r + 1]; ++k) {
      std::snprintf(buf, sizeof buf, "%d %d %.17g\n", r, a.col_indices[k], a.values[k]);
      os << buf;
    }
}

static void require_square_system(const SparseMatrix& a, const Eigen::VectorXd& b,
                                  const char* who) {
  if (a.nrows != a.ncols)
    throw std::invalid_argument(std::string(who) + ": matrix must be square");
  if (b.size() != a.nrows)
    throw std::invalid_argument(std::string(who) + ": right-hand side length mismatch");
}

Eigen::VectorXd solve_cg(const SparseMatrix& a, const Eigen::VectorXd& b,
                         double tol, int maxit, SolveInfo* info) {
  require_square_system(a, b, "solve_cg");
  const double bnorm = b.norm();
  Eigen::VectorXd x = Eigen::VectorXd::Zero(a.nrows);
  if (bnorm == 0.0) {
    if (info) *info = {0, 0.0};
    return x;  // exact zero solution, no iteration drift
  }
  Eigen::VectorXd r = b;
  Eigen::VectorXd p = r;
  double rho = r.squaredNorm();
  for (int it = 1; it <= maxit; ++it) {
    const Eigen::VectorXd ap = spmv(a, p);
    const double pap = p.dot(ap);
    if (!(pap > 0.0))
      throw NonconvergenceError("solve_cg: operator is not positive definite",
                                std::sqrt(rho) / bnorm, it);
    const double alpha = rho / pap;
    x += alpha * p;
    r -= alpha * ap;
    const double rho_next = r.squaredNorm();
    if (std::sqrt(rho_next) <= tol * bnorm) {
      // Certify with the true residual; the recurrence can drift.
      const double true_res = (b - spmv(a, x)).norm() / bnorm;
      if (true_res <= tol) {
        if (info) *info = {it, true_res};
        return x;
      }
    }
    p = r + (rho_next / rho) * p;
    rho = rho_next;
  }
  throw NonconvergenceError("solve_cg: no convergence within iteration budget",
                            std::sqrt(rho) / bnorm, maxit);
}

Eigen::VectorXd solve_bicgstab(const SparseMatrix& a, const Eigen::VectorXd& b,
                               double tol, int maxit, SolveInfo* info) {
  require_square_system(a, b, "solve_bicgstab");
  const double bnorm = b.norm();
  Eigen::VectorXd x = Eigen::VectorXd::Zero(a.nrows);
  if (bnorm == 0.0) {
    if (info) *info = {0, 0.0};
    return x;
  }

  // Jacobi preconditioning only when the full diagonal is available.
  Eigen::VectorXd invdiag = Eigen::VectorXd::Ones(a.nrows);
  bool use_jacobi = true;
  for (int r = 0; r < a.nrows && use_jacobi; ++r) {
    double d = 0.0;
    for (int k = a.row_offsets[r]; k < a.row_offsets[r + 1]; ++k)
      if (a.col_indices[k] == r) d = a.values[k];
    if (d == 0.0)
      use_jacobi = false;
    else
      invdiag[r] = 1.0 / d;
  }
  auto precond = [&](const Eigen::VectorXd& v) -> Eigen::VectorXd {
    return use_jacobi ? invdiag.cwiseProduct(v).eval() : v;
  };

  Eigen::VectorXd r = b;
  const Eigen::VectorXd r0 = r;
  double rho = 1.0, alpha = 1.0, omega = 1.0;
  Eigen::VectorXd v = Eigen::VectorXd::Zero(a.nrows);
  Eigen::VectorXd p = Eigen::VectorXd::Zero(a.nrows);
  const double breakdown = 1e-300;
  for (int it = 1; it <= maxit; ++it) {
    const double rho_next = r0.dot(r);
    if (std::abs(rho_next) < breakdown)
      throw NonconvergenceError(
          "solve_bicgstab: breakdown (rho ~ 0); consider the dense fallback",
          r.norm() / bnorm, it);
    const double beta = (rho_next / rho) * (alpha / omega);
    rho = rho_next;
    p = r + beta * (p - omega * v);
    const Eigen::VectorXd phat = precond(p);
    v = spmv(a, phat);
    const double r0v = r0.dot(v);
    if (std::abs(r0v) < breakdown)
      throw NonconvergenceError(
          "solve_bicgstab: breakdown (r0'v ~ 0); consider the dense fallback",
          r.norm() / bnorm, it);
    alpha = rho / r0v;
    const Eigen::VectorXd s = r - alpha * v;
    if (s.norm() <= tol * bnorm) {
      x += alpha * phat;
      const double true_res = (b - spmv(a, x)).norm() / bnorm;
      if (info) *info = {it, true_res};
      if (true_res <= 10 * tol) return x;
      throw NonconvergenceError(
          "solve_bicgstab: stagnated above tolerance; consider the dense fallback",
          true_res, it);
    }
    const Eigen::VectorXd shat = precond(s);
    const Eigen::VectorXd t = spmv(a, shat);
    const double tt = t.squaredNorm();
    if (tt < breakdown)
      throw NonconvergenceError(
          "solve_bicgstab: breakdown (t ~ 0); consider the dense fallback",
          s.norm() / bnorm, it);
    omega = t.dot(s) / tt;
    x += alpha * phat + omega * shat;
    r = s - omega * t;
    if (r.norm() <= tol * bnorm) {
      const double true_res = (b - spmv(a, x)).norm() / bnorm;
      if (true_res <= 10 * tol) {
        if (info) *info = {it, true_res};
        return x;
      }
    }
    if (std::abs(omega) < breakdown)
      throw NonconvergenceError(
          "solve_bicgstab: breakdown (omega ~ 0); consider the dense fallback",
          r.norm() / bnorm, it);
  }
  throw NonconvergenceError(
      "solve_bicgstab: no convergence within iteration budget; consider the dense fallback",
      r.norm() / bnorm, maxit);
}

Eigen::VectorXd solve_dense(const SparseMatrix& a, const Eigen::VectorXd& b,
                            SolveInfo* info, int cap) {
  require_square_system(a, b, "solve_dense");
  if (a.nrows > cap)
    throw std::invalid_argument("solve_dense: system exceeds the dense size cap");
  const Eigen::MatrixXd m = to_dense(a);
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(m);
  const Eigen::VectorXd udiag = lu.matrixLU().diagonal().cwiseAbs();
  const double umax = a.nrows > 0 ? udiag.maxCoeff() : 0.0;
  if (a.nrows > 0 &&
      udiag.minCoeff() <= umax * a.nrows * std::numeric_limits<double>::epsilon())
    throw SingularMatrixError("solve_dense: matrix is singular to working precision");
  Eigen::VectorXd x = lu.solve(b);
  if (info) {
    const double bnorm = b.norm();
    info->iterations = 0;
    info->residual = bnorm == 0.0 ? (m * x - b).norm() : (m * x - b).norm() / bnorm;
  }
  return x;
}

}  // namespace deadoil
