#pragma once

#include <Eigen/Core>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace deadoil {

// Thrown when an iterative solver exhausts its iteration budget or breaks
// down; carries the last residual so callers can report it.
class NonconvergenceError : public std::runtime_error {
 public:
  NonconvergenceError(const std::string& msg, double residual, int iterations)
      : std::runtime_error(msg), residual_(residual), iterations_(iterations) {}
  double residual() const { return residual_; }
  int iterations() const { return iterations_; }

 private:
  double residual_;
  int iterations_;
};

class SingularMatrixError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Triplet {
  int row = 0;
  int col = 0;
  double value = 0.0;
};

// Compressed sparse row storage. Invariants: row_offsets has nrows+1 entries,
// starts at 0, is nondecreasing and ends at nnz; column indices are strictly
// increasing within each row; duplicate triplets are summed on construction.
struct SparseMatrix {
  int nrows = 0;
  int ncols = 0;
  std::vector<int> row_offsets;
  std::vector<int> col_indices;
  std::vector<double> values;

  int nnz() const { return static_cast<int>(col_indices.size()); }
  // Throws std::invalid_argument when a structural invariant is violated.
  void check() const;

  static SparseMatrix from_triplets(int nrows, int ncols, std::vector<Triplet> ts);
};

// y = A*x with a fixed sequential accumulation order, so results are
// bit-reproducible across runs.
Eigen::VectorXd spmv(const SparseMatrix& a, const Eigen::VectorXd& x);

SparseMatrix transpose(const SparseMatrix& a);

Eigen::MatrixXd to_dense(const SparseMatrix& a);

// Coordinate text dump: one "row col value" line per entry, 0-based indices.
void write_coordinate(const SparseMatrix& a, std::ostream& os);

struct SolveInfo {
  int iterations = 0;
  double residual = 0.0;  // final |A*x - b|_2 / |b|_2 (absolute when b = 0)
};

// Conjugate gradients for symmetric positive definite systems. Stops when the
// true relative residual drops below tol; throws NonconvergenceError after
// maxit iterations.
Eigen::VectorXd solve_cg(const SparseMatrix& a, const Eigen::VectorXd& b,
                         double tol, int maxit, SolveInfo* info = nullptr);

// BiCGStab for general square systems, Jacobi-preconditioned whenever every
// diagonal entry is nonzero. Throws NonconvergenceError on breakdown or when
// the iteration budget runs out; the message points at the dense fallback.
Eigen::VectorXd solve_bicgstab(const SparseMatrix& a, const Eigen::VectorXd& b,
                               double tol, int maxit, SolveInfo* info = nullptr);

// Dense LU with partial pivoting, intended as the small-system fallback and
// reference path. Refuses systems larger than cap.
Eigen::VectorXd solve_dense(const SparseMatrix& a, const Eigen::VectorXd& b,
                            SolveInfo* info = nullptr, int cap = 4096);

}  // namespace deadoil
