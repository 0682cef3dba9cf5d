#include "unibound/operators.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numbers>

namespace unibound {

namespace {

using Triplet = Eigen::Triplet<double>;

void check_box(const std::vector<double>& sides, const std::vector<int>& grid, int min_points) {
  if (sides.empty() || sides.size() > 3) throw Error(Errc::domain, "need 1 to 3 box sides");
  if (grid.size() != sides.size()) throw Error(Errc::shape, "need one grid size per side");
  for (double a : sides)
    if (!(a > 0.0) || !std::isfinite(a)) throw Error(Errc::domain, "box sides must be positive");
  for (int g : grid)
    if (g < min_points)
      throw Error(Errc::domain, "need at least " + std::to_string(min_points) + " interior points per axis");
}

struct Grid {
  std::vector<int> N;
  std::vector<Index> stride;
  Index size = 1;

  explicit Grid(const std::vector<int>& points) : N(points) {
    for (int g : N) {
      stride.push_back(size);
      size *= g;
    }
  }
  std::vector<int> coords(Index idx) const {
    std::vector<int> c(N.size());
    for (std::size_t j = 0; j < N.size(); ++j) {
      c[j] = static_cast<int>(idx % N[j]);
      idx /= N[j];
    }
    return c;
  }
};

DiscreteOperator make_operator(const std::vector<double>& sides, const std::vector<int>& grid,
                               std::string stencil) {
  DiscreteOperator op;
  op.extents = sides;
  op.points = grid;
  for (std::size_t j = 0; j < sides.size(); ++j) op.spacing.push_back(sides[j] / (grid[j] + 1));
  op.stencil = std::move(stencil);
  op.n = static_cast<int>(sides.size());
  return op;
}

/// Assembles a symmetric matrix from its upper-triangle entries.
SparseMatrix symmetric_from_upper(Index n, const std::vector<Triplet>& upper) {
  std::vector<Triplet> all;
  all.reserve(2 * upper.size());
  for (const auto& t : upper) {
    all.push_back(t);
    if (t.row() != t.col()) all.emplace_back(t.col(), t.row(), t.value());
  }
  SparseMatrix M(n, n);
  M.setFromTriplets(all.begin(), all.end());
  M.makeCompressed();
  return M;
}

/// 1D skew central difference (u_{i+1} - u_{i-1}) / (2h) with zero boundary values.
SparseMatrix central_difference(int N, double h) {
  std::vector<Triplet> t;
  for (int i = 0; i + 1 < N; ++i) {
    t.emplace_back(i, i + 1, 0.5 / h);
    t.emplace_back(i + 1, i, -0.5 / h);
  }
  SparseMatrix D(N, N);
  D.setFromTriplets(t.begin(), t.end());
  return D;
}

SparseMatrix identity(int N) {
  SparseMatrix I(N, N);
  I.setIdentity();
  return I;
}

/// kron(C, kron(B, A)) so that axis 0 runs fastest.
SparseMatrix kron3(const SparseMatrix& A, const SparseMatrix& B, const SparseMatrix& C) {
  auto kron = [](const SparseMatrix& P, const SparseMatrix& Q) {
    std::vector<Triplet> t;
    for (Index kp = 0; kp < P.outerSize(); ++kp)
      for (SparseMatrix::InnerIterator ip(P, kp); ip; ++ip)
        for (Index kq = 0; kq < Q.outerSize(); ++kq)
          for (SparseMatrix::InnerIterator iq(Q, kq); iq; ++iq)
            t.emplace_back(ip.row() * Q.rows() + iq.row(), ip.col() * Q.cols() + iq.col(),
                           ip.value() * iq.value());
    SparseMatrix K(P.rows() * Q.rows(), P.cols() * Q.cols());
    K.setFromTriplets(t.begin(), t.end());
    return K;
  };
  return kron(C, kron(B, A));
}

SparseMatrix diagonal(const RealVector& d) {
  SparseMatrix D(d.size(), d.size());
  std::vector<Triplet> t;
  for (Index i = 0; i < d.size(); ++i) t.emplace_back(i, i, d(i));
  D.setFromTriplets(t.begin(), t.end());
  return D;
}

double centered(double side, int N, int i) { return -0.5 * side + (i + 1) * side / (N + 1); }

}  // namespace

SpectrumPrefix box_spectrum(const std::vector<double>& sides, int count) {
  if (sides.empty()) throw Error(Errc::domain, "need at least one box side");
  for (double a : sides)
    if (!(a > 0.0) || !std::isfinite(a)) throw Error(Errc::domain, "box sides must be positive");
  if (count < 1) throw Error(Errc::domain, "count must be >= 1");
  const double pi2 = std::numbers::pi * std::numbers::pi;
  const std::size_t d = sides.size();

  // Enumerate sum_j (p_j/a_j)^2 <= R for growing R until `count` modes fit.
  double R = 0.0;
  for (double a : sides) R += 1.0 / (a * a);
  std::vector<double> found;
  for (;;) {
    found.clear();
    std::vector<int> p(d, 1);
    std::function<void(std::size_t, double)> rec = [&](std::size_t j, double acc) {
      if (j == d) {
        found.push_back(acc);
        return;
      }
      for (int q = 1;; ++q) {
        const double t = acc + (q / sides[j]) * (q / sides[j]);
        if (t > R * (1.0 + 1e-15)) break;
        rec(j + 1, t);
      }
    };
    rec(0, 0.0);
    if (static_cast<int>(found.size()) >= count) break;
    R *= 2.0;
  }
  std::sort(found.begin(), found.end());
  SpectrumPrefix out;
  for (int i = 0; i < count; ++i) out.values.push_back(pi2 * found[i]);
  out.n = static_cast<int>(d);
  out.l = 1;
  out.problem = Problem::euclidean_polyharmonic;
  out.label = "box";
  return out;
}

DiscreteOperator fd_laplacian(const std::vector<double>& sides, const std::vector<int>& grid) {
  check_box(sides, grid, 2);
  auto op = make_operator(sides, grid, "fd-laplacian");
  const Grid g(grid);
  std::vector<Triplet> upper;
  for (Index idx = 0; idx < g.size; ++idx) {
    const auto c = g.coords(idx);
    double diag = 0.0;
    for (std::size_t j = 0; j < grid.size(); ++j) {
      const double w = 1.0 / (op.spacing[j] * op.spacing[j]);
      diag += 2.0 * w;
      if (c[j] + 1 < grid[j]) upper.emplace_back(idx, idx + g.stride[j], -w);
    }
    upper.emplace_back(idx, idx, diag);
  }
  op.matrix = symmetric_from_upper(g.size, upper);
  return op;
}

DiscreteOperator fd_clamped_plate(const std::vector<double>& sides, const std::vector<int>& grid) {
  check_box(sides, grid, 4);
  auto op = make_operator(sides, grid, "fd-clamped");
  op.l = 2;
  const std::size_t d = grid.size();

  // Stencil of (sum_j L_j)^2 with L_j = (-1, 2, -1) / h_j^2.
  std::map<std::vector<int>, double> stencil;
  for (std::size_t j = 0; j < d; ++j)
    for (int a = -1; a <= 1; ++a)
      for (std::size_t k = 0; k < d; ++k)
        for (int b = -1; b <= 1; ++b) {
          const double cj = (a == 0 ? 2.0 : -1.0) / (op.spacing[j] * op.spacing[j]);
          const double ck = (b == 0 ? 2.0 : -1.0) / (op.spacing[k] * op.spacing[k]);
          std::vector<int> off(d, 0);
          off[j] += a;
          off[k] += b;
          stencil[off] += cj * ck;
        }

  const Grid g(grid);
  std::vector<Triplet> upper;
  for (Index idx = 0; idx < g.size; ++idx) {
    const auto c = g.coords(idx);
    for (const auto& [off, w] : stencil) {
      Index target = 0;
      bool drop = false;
      for (std::size_t j = 0; j < d; ++j) {
        int t = c[j] + off[j];  // 0-based interior index; -1 and N are boundary nodes
        if (t == -1 || t == grid[j]) {
          drop = true;  // u = 0 on the boundary
          break;
        }
        if (t == -2) t = 0;  // ghost mirrors the first interior value
        if (t == grid[j] + 1) t = grid[j] - 1;
        target += t * g.stride[j];
      }
      if (!drop && target >= idx) upper.emplace_back(idx, target, w);
    }
  }
  op.matrix = symmetric_from_upper(g.size, upper);
  return op;
}

KohnFields kohn_fd(int n, const std::vector<double>& sides, const std::vector<int>& grid) {
  if (n != 1) throw Error(Errc::unsupported, "Kohn discretization supports n = 1 only");
  if (sides.size() != 3 || grid.size() != 3) throw Error(Errc::shape, "Kohn box needs 3 sides and 3 grid sizes");
  check_box(sides, grid, 4);
  KohnFields out;
  auto& op = out.laplacian;
  op = make_operator(sides, grid, "fd-kohn");
  op.problem = Problem::heisenberg_kohn;
  op.n = 1;

  const int Nx = grid[0], Ny = grid[1], Nt = grid[2];
  const auto Ix = identity(Nx), Iy = identity(Ny), It = identity(Nt);
  const SparseMatrix Dx = kron3(central_difference(Nx, op.spacing[0]), Iy, It);
  const SparseMatrix Dy = kron3(Ix, central_difference(Ny, op.spacing[1]), It);
  const SparseMatrix Dt = kron3(Ix, Iy, central_difference(Nt, op.spacing[2]));

  const Grid g(grid);
  RealVector xs(g.size), ys(g.size);
  for (Index idx = 0; idx < g.size; ++idx) {
    const auto c = g.coords(idx);
    xs(idx) = centered(sides[0], Nx, c[0]);
    ys(idx) = centered(sides[1], Ny, c[1]);
  }
  const SparseMatrix Yh = diagonal(0.5 * ys), Xh = diagonal(0.5 * xs);
  const SparseMatrix ty = 0.5 * (SparseMatrix(Yh * Dt) + SparseMatrix(Dt * Yh));
  const SparseMatrix tx = 0.5 * (SparseMatrix(Xh * Dt) + SparseMatrix(Dt * Xh));
  out.X = Dx + ty;
  out.Y = Dy - tx;
  out.T = Dt;
  out.X.makeCompressed();
  out.Y.makeCompressed();

  const SparseMatrix L = SparseMatrix(out.X.transpose()) * out.X + SparseMatrix(out.Y.transpose()) * out.Y;
  op.matrix = 0.5 * (L + SparseMatrix(L.transpose()));
  op.matrix.prune(0.0);
  op.matrix.makeCompressed();
  return out;
}

double kohn_commutator_residual(double side, int N) {
  const auto f = kohn_fd(1, {side, side, side}, {N, N, N});
  const Index size = static_cast<Index>(N) * N * N;
  const Grid g({N, N, N});
  RealVector phi(size);
  for (Index idx = 0; idx < size; ++idx) {
    const auto c = g.coords(idx);
    double v = 1.0;
    for (int j = 0; j < 3; ++j) v *= std::sin(std::numbers::pi * (centered(side, N, c[j]) / side + 0.5));
    phi(idx) = v;
  }
  const RealVector Tphi = f.T * phi;
  const RealVector r = f.Y * (f.X * phi) - f.X * (f.Y * phi) - Tphi;
  double worst = 0.0, peak = 0.0;
  for (Index idx = 0; idx < size; ++idx) {
    const auto c = g.coords(idx);
    bool interior = true;
    for (int j = 0; j < 3; ++j) interior = interior && c[j] >= 1 && c[j] <= N - 2;
    if (interior) {
      worst = std::max(worst, std::abs(r(idx)));
      peak = std::max(peak, std::abs(Tphi(idx)));
    }
  }
  return worst / peak;
}

SpectrumPrefix operator_power_spectrum(const DiscreteOperator& op, int l, int count,
                                       const SmallestEigsOptions& options) {
  if (l < 1) throw Error(Errc::domain, "power l must be >= 1");
  const Index dim = op.matrix.rows();
  if (count < 1 || count > dim)
    throw Error(Errc::precondition, "count " + std::to_string(count) + " exceeds dimension " + std::to_string(dim));
  RealVector ev;
  if (dim < options.dense_below) {
    ev = dense_symmetric_eig(RealMatrix(op.matrix), false).eigenvalues.head(count);
  } else {
    const auto r = smallest_eigs(op.matrix, count, options);
    if (!r.converged) throw Error(Errc::precondition, "iterative eigensolver did not converge");
    ev = r.eigenvalues;
  }
  SpectrumPrefix out;
  for (Index i = 0; i < ev.size(); ++i) out.values.push_back(l == 1 ? ev(i) : std::pow(ev(i), l));
  std::sort(out.values.begin(), out.values.end());
  out.problem = op.problem;
  out.n = op.n;
  out.l = op.l * l;
  out.label = op.stencil;
  if (op.stencil == "fd-laplacian" && l > 1) out.label = "navier-power";
  return out;
}

}  // namespace unibound
