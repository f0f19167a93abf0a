#include "cachenet/lp.hpp"

#include <limits>
#include <stdexcept>

namespace cachenet {

namespace {

struct Tableau {
  Mat t;                   // m x (cols + 1); last column is the rhs
  Vec obj;                 // cols + 1; reduced costs, obj[cols] = -objective
  std::vector<int> basis;  // basic column per row
  int cols = 0;
  double tol = 1e-9;

  int rows() const { return static_cast<int>(t.rows()); }

  void pivot(int r, int e) {
    t.row(r) /= t(r, e);
    for (int i = 0; i < rows(); ++i)
      if (i != r && t(i, e) != 0.0) t.row(i) -= t(i, e) * t.row(r);
    if (obj[e] != 0.0) obj -= obj[e] * t.row(r).transpose();
    basis[r] = e;
  }

  // Leaving row by minimum ratio; ties broken on the lowest basic column,
  // which together with Bland entering prevents cycling. -1 if unbounded.
  int ratio_row(int e) const {
    int r = -1;
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < rows(); ++i) {
      if (t(i, e) <= tol) continue;
      const double ratio = t(i, cols) / t(i, e);
      if (ratio < best - tol || (ratio < best + tol && (r < 0 || basis[i] < basis[r]))) {
        best = std::min(best, ratio);
        r = i;
      }
    }
    return r;
  }

  // Minimizes the current objective row. `allowed` masks enterable columns.
  // Returns false on unboundedness.
  bool run(const std::vector<char>& allowed) {
    long degenerate_streak = 0;
    const long bland_after = 50 + 2L * rows();
    while (true) {
      int e = -1;
      if (degenerate_streak < bland_after) {
        double best = -tol;
        for (int j = 0; j < cols; ++j)
          if (allowed[j] && obj[j] < best) {
            best = obj[j];
            e = j;
          }
      } else {
        for (int j = 0; j < cols; ++j)
          if (allowed[j] && obj[j] < -tol) {
            e = j;
            break;
          }
      }
      if (e < 0) return true;
      const int r = ratio_row(e);
      if (r < 0) return false;
      const double before = obj[cols];
      pivot(r, e);
      degenerate_streak = obj[cols] > before + tol ? 0 : degenerate_streak + 1;
    }
  }
};

}  // namespace

LpResult solve_lp(const LinearProgram& lp, double tol) {
  const int n = static_cast<int>(lp.cost.size());
  const int me = static_cast<int>(lp.eq_rhs.size());
  const int mi = static_cast<int>(lp.ineq_rhs.size());
  const int m = me + mi;
  if ((me > 0 && lp.eq_lhs.cols() != n) || (mi > 0 && lp.ineq_lhs.cols() != n))
    throw std::invalid_argument("solve_lp: constraint width != variable count");

  // Columns: structural | slacks (one per inequality) | artificials.
  // Rows are sign-normalized so every rhs is nonnegative; rows that then
  // lack an identity slack get an artificial.
  std::vector<int> art_rows;
  for (int i = 0; i < me; ++i) art_rows.push_back(i);
  for (int i = 0; i < mi; ++i)
    if (lp.ineq_rhs[i] < 0.0) art_rows.push_back(me + i);

  const int na = static_cast<int>(art_rows.size());
  const int cols = n + mi + na;

  Tableau tab;
  tab.tol = tol;
  tab.cols = cols;
  tab.t = Mat::Zero(m, cols + 1);
  tab.basis.assign(m, -1);

  for (int i = 0; i < me; ++i) {
    const double sign = lp.eq_rhs[i] < 0.0 ? -1.0 : 1.0;
    tab.t.block(i, 0, 1, n) = sign * lp.eq_lhs.row(i);
    tab.t(i, cols) = sign * lp.eq_rhs[i];
  }
  for (int i = 0; i < mi; ++i) {
    const double sign = lp.ineq_rhs[i] < 0.0 ? -1.0 : 1.0;
    tab.t.block(me + i, 0, 1, n) = sign * lp.ineq_lhs.row(i);
    tab.t(me + i, n + i) = sign;  // slack
    tab.t(me + i, cols) = sign * lp.ineq_rhs[i];
    if (sign > 0.0) tab.basis[me + i] = n + i;
  }
  for (int a = 0; a < na; ++a) {
    tab.t(art_rows[a], n + mi + a) = 1.0;
    tab.basis[art_rows[a]] = n + mi + a;
  }

  // Phase 1: minimize the artificial sum.
  if (na > 0) {
    tab.obj = Vec::Zero(cols + 1);
    for (int a = 0; a < na; ++a) tab.obj -= tab.t.row(art_rows[a]).transpose();
    for (int a = 0; a < na; ++a) tab.obj[n + mi + a] = 0.0;
    std::vector<char> allowed(cols, 1);
    if (!tab.run(allowed)) return {LpStatus::Infeasible, Vec(), 0.0};
    if (-tab.obj[cols] > 1e-7) return {LpStatus::Infeasible, Vec(), 0.0};
    // Drive leftover artificials out of the basis where possible.
    for (int i = 0; i < m; ++i) {
      if (tab.basis[i] < n + mi) continue;
      int e = -1;
      for (int j = 0; j < n + mi; ++j)
        if (std::abs(tab.t(i, j)) > tol) {
          e = j;
          break;
        }
      if (e >= 0) tab.pivot(i, e);
      // else: redundant row; its artificial stays basic at zero.
    }
  }

  // Phase 2: minimize the true cost; artificials may not re-enter.
  tab.obj = Vec::Zero(cols + 1);
  tab.obj.segment(0, n) = lp.cost;
  for (int i = 0; i < m; ++i) {
    const int b = tab.basis[i];
    if (b < n && lp.cost[b] != 0.0) tab.obj -= lp.cost[b] * tab.t.row(i).transpose();
  }
  std::vector<char> allowed(cols, 0);
  for (int j = 0; j < n + mi; ++j) allowed[j] = 1;
  if (!tab.run(allowed)) return {LpStatus::Unbounded, Vec(), 0.0};

  Vec x = Vec::Zero(n);
  for (int i = 0; i < m; ++i)
    if (tab.basis[i] < n) x[tab.basis[i]] = tab.t(i, cols);
  return {LpStatus::Optimal, x, lp.cost.dot(x)};
}

}  // namespace cachenet
