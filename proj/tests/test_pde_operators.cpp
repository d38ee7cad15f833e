#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "deadoil/operators.hpp"

#include <cmath>
#include <random>

using namespace deadoil;

namespace {

bool inside(const Grid& g, int i, int j) {
  return i >= 0 && i < g.nx && j >= 0 && j < g.ny;
}

// Independent residual evaluation straight from the definition, with plain
// loops and explicit boundary cases. Deliberately shares no code with the
// library assembly.
std::pair<Field, Field> residual_oracle(const CoefficientModel& m,
                                        const StateSolution& s, const Field& f,
                                        const Field* s1) {
  const Grid& g = s.u.grid;
  Field F1(g), F2(g);
  const double wx = 1.0 / (g.hx * g.hx), wy = 1.0 / (g.hy * g.hy);
  const int di[4] = {-1, 1, 0, 0};
  const int dj[4] = {0, 0, -1, 1};
  for (int i = 0; i < g.nx; ++i) {
    for (int j = 0; j < g.ny; ++j) {
      double r1 = 0.0, r2 = 0.0;
      for (int k = 0; k < 4; ++k) {
        const int ni = i + di[k], nj = j + dj[k];
        const double w = (k < 2) ? wx : wy;
        const bool in = inside(g, ni, nj);
        const double u_here = s.u(i, j);
        const double u_nbr = in ? s.u(ni, nj) : 0.0;
        const double p_nbr = in ? s.p(ni, nj) : 0.0;
        const double phi_nbr = in ? m.phi(u_nbr) : m.phi(0.0);
        const double g_face = 0.5 * (m.g(u_here) + (in ? m.g(u_nbr) : m.g(0.0)));
        const double d_face = 0.5 * (m.d(u_here) + (in ? m.d(u_nbr) : m.d(0.0)));
        r1 += w * (m.phi(u_here) - phi_nbr);
        r1 += w * g_face * (s.p(i, j) - p_nbr);
        r2 += w * d_face * (s.p(i, j) - p_nbr);
      }
      F1(i, j) = r1 - (s1 ? (*s1)(i, j) : 0.0);
      F2(i, j) = r2 - f(i, j);
    }
  }
  return {F1, F2};
}

StateSolution random_state(const Grid& g, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  StateSolution s{Field(g), Field(g)};
  for (int k = 0; k < g.size(); ++k) {
    s.u.values[k] = 0.5 * unif(rng);
    s.p.values[k] = unif(rng);
  }
  return s;
}

Eigen::VectorXd stack(const Field& a, const Field& b) {
  const int n = a.grid.size();
  Eigen::VectorXd z(2 * n);
  z.head(n) = a.values;
  z.tail(n) = b.values;
  return z;
}

}  // namespace

TEST_CASE("five-point matrix on a single interior node") {
  Grid g = create_grid(1, 1, 1.0, 1.0);  // h = 1/2 in both directions
  SparseMatrix lap = assemble_laplacian(g);
  REQUIRE(lap.nnz() == 1);
  CHECK(lap.values[0] == doctest::Approx(16.0));  // 2/h^2 + 2/h^2
  Field ones = field_from(g, [](double, double) { return 1.0; });
  SparseMatrix flux = assemble_flux_operator(ones, 1.0);
  REQUIRE(flux.nnz() == 1);
  CHECK(flux.values[0] == doctest::Approx(16.0));
}

TEST_CASE("flux operator with unit coefficient is the five-point matrix") {
  Grid g = create_grid(5, 3, 1.3, 0.9);
  Field ones = field_from(g, [](double, double) { return 1.0; });
  SparseMatrix a = assemble_flux_operator(ones, 1.0);
  SparseMatrix b = assemble_laplacian(g);
  REQUIRE(a.nnz() == b.nnz());
  CHECK(a.row_offsets == b.row_offsets);
  CHECK(a.col_indices == b.col_indices);
  for (int k = 0; k < a.nnz(); ++k)
    CHECK(a.values[k] == doctest::Approx(b.values[k]).epsilon(1e-15));
}

TEST_CASE("flux operator is exactly symmetric") {
  Grid g = create_grid(6, 4, 1.0, 2.0);
  Field a = field_from(g, [](double x, double y) { return 1.0 + 0.3 * x + 0.5 * y * y; });
  SparseMatrix A = assemble_flux_operator(a, 1.0);
  SparseMatrix At = transpose(A);
  REQUIRE(At.nnz() == A.nnz());
  CHECK(At.row_offsets == A.row_offsets);
  CHECK(At.col_indices == A.col_indices);
  for (int k = 0; k < A.nnz(); ++k) CHECK(At.values[k] == A.values[k]);
}

TEST_CASE("nodal gradient against hand-computed central differences") {
  Grid g = create_grid(3, 3, 1.0, 1.0);  // h = 1/4
  Field v = field_from(g, [](double x, double y) { return x + 10.0 * y; });
  auto [gx, gy] = nodal_gradient(v);
  // interior node (1,1): exact central difference of a linear function
  CHECK(gx(1, 1) == doctest::Approx(1.0));
  CHECK(gy(1, 1) == doctest::Approx(10.0));
  // boundary-adjacent node (0,1): left neighbor is the zero ghost
  // (v(1,1) - 0) / (2 h) with v(1,1) = 0.5 + 5.0
  CHECK(gx(0, 1) == doctest::Approx((0.5 + 5.0) / 0.5));
}

TEST_CASE("residual agrees with the loop oracle on random states") {
  for (auto name : {"smooth_bounded", "verification_linear_phi"}) {
    CoefficientModel m = builtin_model(name);
    Grid g = create_grid(7, 5, 1.4, 0.8);
    StateSolution s = random_state(g, 1234);
    Field f = field_from(g, [](double x, double y) { return std::sin(3 * x) + y; });
    Field s1 = field_from(g, [](double x, double y) { return x - y * y; });

    auto [F1, F2] = state_residual(m, s, f, &s1);
    auto [G1, G2] = residual_oracle(m, s, f, &s1);
    CHECK(linf_norm(F1 - G1) <= 1e-12 * (1.0 + linf_norm(G1)));
    CHECK(linf_norm(F2 - G2) <= 1e-12 * (1.0 + linf_norm(G2)));
  }
}

TEST_CASE("zero state with zero source has zero residual") {
  CoefficientModel m = builtin_model("smooth_bounded");
  Grid g = create_grid(4, 4, 1.0, 1.0);
  StateSolution s{Field(g), Field(g)};
  Field f(g);
  auto [F1, F2] = state_residual(m, s, f);
  CHECK(linf_norm(F1) == 0.0);
  CHECK(linf_norm(F2) == 0.0);
  // and a pure source enters F2 with a minus sign
  Field fs = field_from(g, [](double x, double) { return x; });
  auto [H1, H2] = state_residual(m, s, fs);
  CHECK(linf_norm(H1) == 0.0);
  CHECK(linf_norm(H2 + fs) == 0.0);
}

TEST_CASE("linearization of the decoupled constant model is block diagonal") {
  CoefficientModel m = builtin_model("verification_constant");
  Grid g = create_grid(3, 4, 1.0, 1.0);
  const int n = g.size();
  StateSolution s = random_state(g, 99);
  LinearizedOperator lin = assemble_linearized(m, s);
  CHECK(lin.control_block_is_negative_identity);
  Eigen::MatrixXd J = to_dense(lin.op);
  Eigen::MatrixXd L = to_dense(assemble_laplacian(g));
  CHECK((J.topLeftCorner(n, n) - L).cwiseAbs().maxCoeff() <= 1e-13 * L.cwiseAbs().maxCoeff());
  CHECK((J.bottomRightCorner(n, n) - L).cwiseAbs().maxCoeff() <= 1e-13 * L.cwiseAbs().maxCoeff());
  CHECK(J.topRightCorner(n, n).cwiseAbs().maxCoeff() == 0.0);
  CHECK(J.bottomLeftCorner(n, n).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("linearization matches finite differences of the residual entrywise") {
  CoefficientModel m = builtin_model("smooth_bounded");
  Grid g = create_grid(3, 3, 1.0, 1.0);
  const int n = g.size();
  StateSolution s = random_state(g, 7);
  Field f(g);

  Eigen::MatrixXd J = to_dense(assemble_linearized(m, s).op);

  auto eval = [&](const Eigen::VectorXd& z) {
    StateSolution t{Field(g), Field(g)};
    t.u.values = z.head(n);
    t.p.values = z.tail(n);
    auto [F1, F2] = state_residual(m, t, f);
    return stack(F1, F2);
  };
  Eigen::VectorXd x0 = stack(s.u, s.p);
  const double delta = 1e-6;
  Eigen::MatrixXd Jfd(2 * n, 2 * n);
  for (int c = 0; c < 2 * n; ++c) {
    Eigen::VectorXd xp = x0, xm = x0;
    xp[c] += delta;
    xm[c] -= delta;
    Jfd.col(c) = (eval(xp) - eval(xm)) / (2 * delta);
  }
  // entries scale like 1/h^2 = 16; central differences are good to ~1e-8 here
  CHECK((J - Jfd).cwiseAbs().maxCoeff() <= 1e-6);
}

TEST_CASE("linearization leaves a second-order Taylor remainder") {
  CoefficientModel m = builtin_model("smooth_bounded");
  Grid g = create_grid(6, 6, 1.0, 1.0);
  const int n = g.size();
  StateSolution s = random_state(g, 21);
  Field f(g);
  Eigen::VectorXd x0 = stack(s.u, s.p);
  std::mt19937_64 rng(22);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  Eigen::VectorXd w(2 * n);
  for (int k = 0; k < 2 * n; ++k) w[k] = unif(rng);
  w /= w.norm();

  SparseMatrix J = assemble_linearized(m, s).op;
  auto eval = [&](const Eigen::VectorXd& z) {
    StateSolution t{Field(g), Field(g)};
    t.u.values = z.head(n);
    t.p.values = z.tail(n);
    auto [F1, F2] = state_residual(m, t, f);
    return stack(F1, F2);
  };
  Eigen::VectorXd F0 = eval(x0);
  auto remainder = [&](double step) {
    Eigen::VectorXd Fs = eval(x0 + step * w);
    return (Fs - F0 - step * spmv(J, w)).norm();
  };
  double r1 = remainder(1e-3);
  double r2 = remainder(5e-4);
  CHECK(r1 / r2 == doctest::Approx(4.0).epsilon(0.2));
}

TEST_CASE("written adjoint form approaches the negative transposed jacobian") {
  CoefficientModel m = builtin_model("smooth_bounded");
  auto defect = [&](int n) {
    Grid g = create_grid(n, n, 1.0, 1.0);
    StateSolution s{
        field_from(g, [](double x, double y) {
          return 0.3 * std::sin(M_PI * x) * std::sin(M_PI * y);
        }),
        field_from(g, [](double x, double y) {
          return 0.2 * std::sin(M_PI * x) * std::sin(2 * M_PI * y);
        })};
    Field e = field_from(g, [](double x, double y) {
      return std::sin(2 * M_PI * x) * std::sin(M_PI * y);
    });
    Field w = field_from(g, [](double x, double y) {
      return 0.7 * std::sin(M_PI * x) * std::sin(M_PI * y);
    });
    Eigen::VectorXd z = stack(e, w);
    SparseMatrix A = assemble_adjoint_continuous(m, s);
    SparseMatrix Jt = transpose(assemble_linearized(m, s).op);
    Eigen::VectorXd diff = spmv(A, z) + spmv(Jt, z);
    Field d1(g), d2(g);
    d1.values = diff.head(g.size());
    d2.values = diff.tail(g.size());
    return std::sqrt(lp_power_norm(d1, 2.0) + lp_power_norm(d2, 2.0));
  };
  double d8 = defect(8);
  double d16 = defect(16);
  double d32 = defect(32);
  CHECK(d8 / d16 >= 1.5);
  CHECK(d16 / d32 >= 1.5);
}

TEST_CASE("validity window reports excursions") {
  CoefficientModel m = builtin_model("smooth_bounded");
  Grid g = create_grid(3, 3, 1.0, 1.0);
  StateSolution ok{field_from(g, [](double, double) { return 0.5; }), Field(g)};
  CHECK(within_validity(m, ok));
  StateSolution bad{field_from(g, [](double, double) { return 5.0; }), Field(g)};
  CHECK_FALSE(within_validity(m, bad));
}
