#include "flexcross/lp.hpp"

#include <cmath>
#include <limits>
#include <vector>

namespace flexcross {

namespace {

struct Tableau {
  Mat T;  // (m+1) x (cols+1); last row objective, last column rhs
  std::vector<int> basis;
  int m = 0, cols = 0;

  void pivot(int r, int c) {
    T.row(r) /= T(r, c);
    for (int i = 0; i <= m; ++i) {
      if (i == r) continue;
      double f = T(i, c);
      if (f != 0.0) T.row(i) -= f * T.row(r);
    }
    basis[r] = c;
  }

  // Minimizes the objective row over columns < limit. Returns false if unbounded.
  bool run(int limit, double tol) {
    for (int iter = 0; iter < 50000; ++iter) {
      int enter = -1;
      for (int j = 0; j < limit; ++j)
        if (T(m, j) < -tol) {
          enter = j;
          break;
        }
      if (enter < 0) return true;
      int leave = -1;
      double best = std::numeric_limits<double>::infinity();
      for (int i = 0; i < m; ++i) {
        if (T(i, enter) > tol) {
          double ratio = T(i, cols) / T(i, enter);
          if (ratio < best - 1e-15 || (std::abs(ratio - best) <= 1e-15 && leave >= 0 && basis[i] < basis[leave])) {
            best = ratio;
            leave = i;
          }
        }
      }
      if (leave < 0) return false;
      pivot(leave, enter);
    }
    return true;
  }
};

}  // namespace

LpResult solve_lp(const Mat& A_in, const Vec& b_in, const Vec& c, double tol) {
  const int m = static_cast<int>(A_in.rows());
  const int nv = static_cast<int>(A_in.cols());
  Mat A = A_in;
  Vec b = b_in;
  for (int i = 0; i < m; ++i)
    if (b[i] < 0) {
      A.row(i) *= -1.0;
      b[i] = -b[i];
    }
  // phase one: artificial variables nv..nv+m-1
  Tableau tb;
  tb.m = m;
  tb.cols = nv + m;
  tb.T = Mat::Zero(m + 1, nv + m + 1);
  tb.T.block(0, 0, m, nv) = A;
  tb.T.block(0, nv, m, m) = Mat::Identity(m, m);
  tb.T.block(0, nv + m, m, 1) = b;
  tb.basis.resize(m);
  for (int i = 0; i < m; ++i) {
    tb.basis[i] = nv + i;
    tb.T.row(m) -= tb.T.row(i);
  }
  for (int i = 0; i < m; ++i) tb.T(m, nv + i) = 0.0;
  tb.run(nv + m, tol);
  LpResult res;
  const double scale = std::max(1.0, b.cwiseAbs().maxCoeff());
  if (-tb.T(m, nv + m) > 1e-9 * scale) {
    res.status = LpStatus::infeasible;
    return res;
  }
  // drive remaining artificials out of the basis
  for (int i = 0; i < m; ++i) {
    if (tb.basis[i] < nv) continue;
    int col = -1;
    for (int j = 0; j < nv; ++j)
      if (std::abs(tb.T(i, j)) > 1e-10) {
        col = j;
        break;
      }
    if (col >= 0) tb.pivot(i, col);
  }
  // phase two: forbid artificial columns by zeroing them out of consideration
  tb.T.row(m).setZero();
  for (int j = 0; j < nv; ++j) tb.T(m, j) = c[j];
  for (int i = 0; i < m; ++i) {
    int bj = tb.basis[i];
    if (bj < nv && tb.T(m, bj) != 0.0) tb.T.row(m) -= tb.T(m, bj) * tb.T.row(i);
  }
  if (!tb.run(nv, tol)) {
    res.status = LpStatus::unbounded;
    return res;
  }
  res.status = LpStatus::optimal;
  res.x = Vec::Zero(nv);
  for (int i = 0; i < m; ++i)
    if (tb.basis[i] < nv) res.x[tb.basis[i]] = std::max(0.0, tb.T(i, nv + m));
  res.objective = c.dot(res.x);
  return res;
}

}  // namespace flexcross
