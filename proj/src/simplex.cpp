#include "pantograph/simplex.hpp"

namespace pantograph {

namespace {

// Internal standard form: A x >= b over x >= 0 (equalities split in two).
struct StdForm {
  int nvars = 0;
  std::vector<std::vector<Rat>> A;
  std::vector<Rat> b;
  std::vector<std::pair<int, int>> origin;  // (original row, +1 / -1 for split direction)
};

StdForm to_standard(const LinearSystem& sys) {
  StdForm sf;
  sf.nvars = sys.nvars;
  for (size_t i = 0; i < sys.rows.size(); ++i) {
    const LinearRow& r = sys.rows[i];
    auto push = [&](int dir) {
      std::vector<Rat> row(sys.nvars);
      for (int j = 0; j < sys.nvars; ++j) row[j] = dir > 0 ? r.a[j] : -r.a[j];
      sf.A.push_back(std::move(row));
      sf.b.push_back(dir > 0 ? r.b : -r.b);
      sf.origin.emplace_back(int(i), dir);
    };
    if (r.rel >= 0) push(+1);  // >= stays
    if (r.rel <= 0) push(-1);  // <= becomes -a x >= -b
  }
  return sf;
}

// Exact Gaussian solve of M y = c (square, invertible for a simplex basis).
std::vector<Rat> solve_square(std::vector<std::vector<Rat>> M, std::vector<Rat> c) {
  const int m = int(M.size());
  for (int col = 0; col < m; ++col) {
    int piv = -1;
    for (int r = col; r < m; ++r)
      if (!M[r][col].is_zero()) {
        piv = r;
        break;
      }
    if (piv < 0) throw std::runtime_error("simplex: singular basis matrix");
    std::swap(M[col], M[piv]);
    std::swap(c[col], c[piv]);
    Rat p = M[col][col];
    for (int j = col; j < m; ++j) M[col][j] = M[col][j] / p;
    c[col] = c[col] / p;
    for (int r = 0; r < m; ++r) {
      if (r == col || M[r][col].is_zero()) continue;
      Rat f = M[r][col];
      for (int j = col; j < m; ++j) M[r][j] = M[r][j] - f * M[col][j];
      c[r] = c[r] - f * c[col];
    }
  }
  return c;
}

}  // namespace

SimplexResult solve_feasibility(const LinearSystem& sys) {
  StdForm sf = to_standard(sys);
  const int m = int(sf.A.size());
  const int n = sf.nvars;
  // Canonical equation system: [A | -I | A_art] x = b, all variables >= 0.
  int nart = 0;
  std::vector<int> art_col(m, -1);
  for (int i = 0; i < m; ++i)
    if (sf.b[i] > Rat(0)) art_col[i] = n + m + nart++;
  const int ncols = n + m + nart;
  auto canonical = [&](int i, int j) -> Rat {
    if (j < n) return sf.A[i][j];
    if (j < n + m) return j - n == i ? Rat(-1) : Rat(0);
    return art_col[i] == j ? Rat(1) : Rat(0);
  };
  auto cost = [&](int j) { return j >= n + m ? Rat(1) : Rat(0); };

  // Tableau rows (scaled so the starting基 basic entry is +1).
  std::vector<std::vector<Rat>> T(m, std::vector<Rat>(ncols));
  std::vector<Rat> rhs(m);
  std::vector<int> basis(m);
  for (int i = 0; i < m; ++i) {
    int scale = 1;
    if (art_col[i] >= 0)
      basis[i] = art_col[i];
    else {
      basis[i] = n + i;  // surplus column -e_i with b_i <= 0: scale row by -1
      scale = -1;
    }
    for (int j = 0; j < ncols; ++j) T[i][j] = scale > 0 ? canonical(i, j) : -canonical(i, j);
    rhs[i] = scale > 0 ? sf.b[i] : -sf.b[i];
  }

  auto pivot = [&](int pr, int pc) {
    Rat p = T[pr][pc];
    for (int j = 0; j < ncols; ++j) T[pr][j] = T[pr][j] / p;
    rhs[pr] = rhs[pr] / p;
    for (int i = 0; i < m; ++i) {
      if (i == pr || T[i][pc].is_zero()) continue;
      Rat f = T[i][pc];
      for (int j = 0; j < ncols; ++j) T[i][j] = T[i][j] - f * T[pr][j];
      rhs[i] = rhs[i] - f * rhs[pr];
    }
    basis[pr] = pc;
  };

  // Phase 1 with Bland's rule; reduced costs recomputed per iteration (the
  // systems here are small and exactness trumps speed).
  for (int iter = 0; iter < 200000; ++iter) {
    std::vector<Rat> y_acc(m, Rat(0));  // c_B^T applied to tableau rows
    bool any_basic_cost = false;
    for (int i = 0; i < m; ++i)
      if (cost(basis[i]).sign() != 0) any_basic_cost = true;
    int pc = -1;
    for (int j = 0; j < ncols && pc < 0; ++j) {
      bool is_basic = false;
      for (int i = 0; i < m; ++i)
        if (basis[i] == j) is_basic = true;
      if (is_basic) continue;
      Rat z = cost(j);
      if (any_basic_cost)
        for (int i = 0; i < m; ++i)
          if (cost(basis[i]).sign() != 0) z = z - cost(basis[i]) * T[i][j];
      if (z.sign() < 0) pc = j;
    }
    if (pc < 0) break;
    int pr = -1;
    for (int i = 0; i < m; ++i) {
      if (T[i][pc].sign() <= 0) continue;
      if (pr < 0) {
        pr = i;
        continue;
      }
      Rat cur = rhs[i] / T[i][pc];
      Rat best = rhs[pr] / T[pr][pc];
      if (cur < best || (cur == best && basis[i] < basis[pr])) pr = i;
    }
    if (pr < 0) break;
    pivot(pr, pc);
  }

  Rat obj(0);
  for (int i = 0; i < m; ++i)
    if (cost(basis[i]).sign() != 0) obj = obj + rhs[i];

  SimplexResult out;
  if (obj.is_zero()) {
    out.feasible = true;
    out.x.assign(sys.nvars, Rat(0));
    for (int i = 0; i < m; ++i)
      if (basis[i] < n) out.x[basis[i]] = rhs[i];
    return out;
  }

  // Infeasible: exact simplex multipliers from B^T y = c_B over the canonical
  // columns; y satisfies y^T A_std <= 0, y >= 0, y^T b = obj > 0.
  std::vector<std::vector<Rat>> Bt(m, std::vector<Rat>(m));
  std::vector<Rat> cB(m);
  for (int i = 0; i < m; ++i) {
    cB[i] = cost(basis[i]);
    for (int r = 0; r < m; ++r) Bt[i][r] = canonical(r, basis[i]);  // row i of B^T = column basis[i]
  }
  std::vector<Rat> ystd = solve_square(Bt, cB);
  out.farkas_y.assign(sys.rows.size(), Rat(0));
  for (int i = 0; i < m; ++i) {
    auto [orig, dir] = sf.origin[i];
    out.farkas_y[orig] = out.farkas_y[orig] + (dir > 0 ? ystd[i] : -ystd[i]);
  }
  return out;
}

bool verify_point(const LinearSystem& sys, const std::vector<Rat>& x) {
  for (const Rat& v : x)
    if (v.sign() < 0) return false;
  for (const auto& r : sys.rows) {
    Rat acc(0);
    for (int j = 0; j < sys.nvars; ++j) acc = acc + r.a[j] * x[j];
    if (r.rel > 0 && acc < r.b) return false;
    if (r.rel < 0 && acc > r.b) return false;
    if (r.rel == 0 && !(acc == r.b)) return false;
  }
  return true;
}

bool verify_farkas(const LinearSystem& sys, const std::vector<Rat>& y) {
  if (y.size() != sys.rows.size()) return false;
  for (size_t i = 0; i < y.size(); ++i) {
    if (sys.rows[i].rel > 0 && y[i].sign() < 0) return false;
    if (sys.rows[i].rel < 0 && y[i].sign() > 0) return false;
  }
  for (int j = 0; j < sys.nvars; ++j) {
    Rat acc(0);
    for (size_t i = 0; i < y.size(); ++i) acc = acc + y[i] * sys.rows[i].a[j];
    if (acc.sign() > 0) return false;
  }
  Rat yb(0);
  for (size_t i = 0; i < y.size(); ++i) yb = yb + y[i] * sys.rows[i].b;
  return yb.sign() > 0;
}

}  // namespace pantograph
