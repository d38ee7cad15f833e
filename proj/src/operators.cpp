#include "deadoil/operators.hpp"

#include <cmath>
#include <stdexcept>

namespace deadoil {

namespace {

// One of the four faces of a node: neighbor offset and the 1/h^2 weight of
// the axis the face lives on.
struct Face {
  int di, dj;
};

constexpr Face kFaces[4] = {{-1, 0}, {1, 0}, {0, -1}, {0, 1}};

inline double face_weight(const Grid& g, const Face& f) {
  return f.di != 0 ? 1.0 / (g.hx * g.hx) : 1.0 / (g.hy * g.hy);
}

inline bool interior(const Grid& g, int i, int j) {
  return i >= 0 && i < g.nx && j >= 0 && j < g.ny;
}

void require_state(const CoefficientModel&, const StateSolution& s) {
  if (!(s.u.grid == s.p.grid))
    throw std::invalid_argument("state fields live on different grids");
  if (!s.u.finite() || !s.p.finite())
    throw std::invalid_argument("state fields contain non-finite values");
}

}  // namespace

bool within_validity(const CoefficientModel& m, const StateSolution& s) {
  for (Eigen::Index k = 0; k < s.u.values.size(); ++k)
    if (s.u.values[k] < m.validity_lo || s.u.values[k] > m.validity_hi) return false;
  return true;
}

SparseMatrix assemble_flux_operator(const Field& a, double a_boundary) {
  const Grid& g = a.grid;
  const int n = g.size();
  std::vector<Triplet> ts;
  ts.reserve(5 * n);
  for (int i = 0; i < g.nx; ++i)
    for (int j = 0; j < g.ny; ++j) {
      const int row = g.index(i, j);
      for (const Face& f : kFaces) {
        const int ni = i + f.di, nj = j + f.dj;
        const double w = face_weight(g, f);
        const double a_nbr = interior(g, ni, nj) ? a(ni, nj) : a_boundary;
        const double mean = 0.5 * (a(i, j) + a_nbr);
        ts.push_back({row, row, mean * w});
        if (interior(g, ni, nj)) ts.push_back({row, g.index(ni, nj), -mean * w});
      }
    }
  return SparseMatrix::from_triplets(n, n, std::move(ts));
}

SparseMatrix assemble_laplacian(const Grid& g) {
  Field ones(g);
  ones.values.setOnes();
  return assemble_flux_operator(ones, 1.0);
}

std::pair<Field, Field> nodal_gradient(const Field& v) {
  const Grid& g = v.grid;
  Field gx(g), gy(g);
  for (int i = 0; i < g.nx; ++i)
    for (int j = 0; j < g.ny; ++j) {
      const double e = interior(g, i + 1, j) ? v(i + 1, j) : 0.0;
      const double w = interior(g, i - 1, j) ? v(i - 1, j) : 0.0;
      const double n = interior(g, i, j + 1) ? v(i, j + 1) : 0.0;
      const double s = interior(g, i, j - 1) ? v(i, j - 1) : 0.0;
      gx(i, j) = (e - w) / (2.0 * g.hx);
      gy(i, j) = (n - s) / (2.0 * g.hy);
    }
  return {gx, gy};
}

std::pair<Field, Field> state_residual(const CoefficientModel& m,
                                       const StateSolution& s, const Field& f,
                                       const Field* sat_source) {
  require_state(m, s);
  const Grid& g = s.u.grid;
  if (!(f.grid == g))
    throw std::invalid_argument("state_residual: source grid mismatch");
  if (sat_source && !(sat_source->grid == g))
    throw std::invalid_argument("state_residual: saturation source grid mismatch");

  const double phi0 = m.phi(0.0), g0 = m.g(0.0), d0 = m.d(0.0);
  Field r1(g), r2(g);
  for (int i = 0; i < g.nx; ++i)
    for (int j = 0; j < g.ny; ++j) {
      const double phi_c = m.phi(s.u(i, j));
      const double g_c = m.g(s.u(i, j));
      const double d_c = m.d(s.u(i, j));
      const double p_c = s.p(i, j);
      double acc1 = 0.0, acc2 = 0.0;
      for (const Face& fc : kFaces) {
        const int ni = i + fc.di, nj = j + fc.dj;
        const double w = face_weight(g, fc);
        const bool in = interior(g, ni, nj);
        const double phi_n = in ? m.phi(s.u(ni, nj)) : phi0;
        const double g_n = in ? m.g(s.u(ni, nj)) : g0;
        const double d_n = in ? m.d(s.u(ni, nj)) : d0;
        const double p_n = in ? s.p(ni, nj) : 0.0;
        acc1 += (phi_c - phi_n) * w;
        acc1 += 0.5 * (g_c + g_n) * (p_c - p_n) * w;
        acc2 += 0.5 * (d_c + d_n) * (p_c - p_n) * w;
      }
      r1(i, j) = acc1 - (sat_source ? (*sat_source)(i, j) : 0.0);
      r2(i, j) = acc2 - f(i, j);
    }
  return {r1, r2};
}

LinearizedOperator assemble_linearized(const CoefficientModel& m,
                                       const StateSolution& s) {
  require_state(m, s);
  const Grid& g = s.u.grid;
  const int n = g.size();
  std::vector<Triplet> ts;
  ts.reserve(14 * n);

  for (int i = 0; i < g.nx; ++i)
    for (int j = 0; j < g.ny; ++j) {
      const int row = g.index(i, j);
      const double u_c = s.u(i, j), p_c = s.p(i, j);
      const double dphi_c = m.dphi(u_c);
      const double dg_c = m.dg(u_c), dd_c = m.dd(u_c);
      const double g_c = m.g(u_c), d_c = m.d(u_c);
      for (const Face& fc : kFaces) {
        const int ni = i + fc.di, nj = j + fc.dj;
        const double w = face_weight(g, fc);
        const bool in = interior(g, ni, nj);
        const int col = in ? g.index(ni, nj) : -1;
        const double u_n = in ? s.u(ni, nj) : 0.0;
        const double p_n = in ? s.p(ni, nj) : 0.0;
        const double g_n = in ? m.g(u_n) : m.g(0.0);
        const double d_n = in ? m.d(u_n) : m.d(0.0);

        // d(Lap_h phi(u))/du: the 5-point Laplacian of the nodal product
        // phi'(u)*e, ghost values drop out because e vanishes there.
        ts.push_back({row, row, dphi_c * w});
        if (in) ts.push_back({row, col, -m.dphi(u_n) * w});

        // d/du of the face means of g(u) and d(u): mean of nodal products.
        const double t = (p_c - p_n) * w;
        ts.push_back({row, row, 0.5 * dg_c * t});
        ts.push_back({n + row, row, 0.5 * dd_c * t});
        if (in) {
          ts.push_back({row, col, 0.5 * m.dg(u_n) * t});
          ts.push_back({n + row, col, 0.5 * m.dd(u_n) * t});
        }

        // d/dp: the frozen-coefficient flux operators themselves.
        ts.push_back({row, n + row, 0.5 * (g_c + g_n) * w});
        ts.push_back({n + row, n + row, 0.5 * (d_c + d_n) * w});
        if (in) {
          ts.push_back({row, n + col, -0.5 * (g_c + g_n) * w});
          ts.push_back({n + row, n + col, -0.5 * (d_c + d_n) * w});
        }
      }
    }

  LinearizedOperator lin;
  lin.op = SparseMatrix::from_triplets(2 * n, 2 * n, std::move(ts));
  lin.control_block_is_negative_identity = true;
  return lin;
}

SparseMatrix assemble_adjoint_continuous(const CoefficientModel& m,
                                    const StateSolution& s) {
  require_state(m, s);
  const Grid& g = s.u.grid;
  const int n = g.size();
  const auto [ux, uy] = nodal_gradient(s.u);
  const auto [px, py] = nodal_gradient(s.p);

  std::vector<Triplet> ts;
  ts.reserve(14 * n);
  for (int i = 0; i < g.nx; ++i)
    for (int j = 0; j < g.ny; ++j) {
      const int row = g.index(i, j);
      const double u_c = s.u(i, j);
      const double dphi_c = m.dphi(u_c);
      const double g_c = m.g(u_c), d_c = m.d(u_c);

      // Advection-like weights at this node.
      const double ax = m.d2phi(u_c) * ux(i, j) + m.dg(u_c) * px(i, j);
      const double ay = m.d2phi(u_c) * uy(i, j) + m.dg(u_c) * py(i, j);
      const double bx = m.dd(u_c) * px(i, j);
      const double by = m.dd(u_c) * py(i, j);

      for (const Face& fc : kFaces) {
        const int ni = i + fc.di, nj = j + fc.dj;
        const double w = face_weight(g, fc);
        const bool in = interior(g, ni, nj);
        const int col = in ? g.index(ni, nj) : -1;
        const double u_n = in ? s.u(ni, nj) : 0.0;

        // div(phi' grad e1), div(g grad e1), div(d grad p1): negated flux
        // operators with arithmetic face means.
        const double mean_phi = 0.5 * (dphi_c + m.dphi(u_n));
        const double mean_g = 0.5 * (g_c + m.g(u_n));
        const double mean_d = 0.5 * (d_c + m.d(u_n));
        ts.push_back({row, row, -mean_phi * w});
        ts.push_back({n + row, row, -mean_g * w});
        ts.push_back({n + row, n + row, -mean_d * w});
        if (in) {
          ts.push_back({row, col, mean_phi * w});
          ts.push_back({n + row, col, mean_g * w});
          ts.push_back({n + row, n + col, mean_d * w});
        }

        if (!in) continue;
        // Central differences of the unknowns: +/- 1/(2h) on the neighbors.
        const double c = 0.5 * (fc.di != 0 ? fc.di / g.hx : fc.dj / g.hy);
        const double adv_e = fc.di != 0 ? ax : ay;
        const double adv_p = fc.di != 0 ? bx : by;
        ts.push_back({row, col, -adv_e * c});
        ts.push_back({row, n + col, -adv_p * c});
      }
    }
  return SparseMatrix::from_triplets(2 * n, 2 * n, std::move(ts));
}

}  // namespace deadoil
