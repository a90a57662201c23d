#include "kirby/invariants.hpp"

#include <algorithm>
#include <optional>
#include <sstream>

namespace kirby {

IntMatrix boundary_matrix(const HandleDiagram& d) {
  IntMatrix m(d.dots.size(), d.handles.size());
  for (std::size_t c = 0; c < d.handles.size(); ++c) {
    auto col = exponent_vector(d.handles[c].word, d.dots);
    for (std::size_t r = 0; r < col.size(); ++r) m(r, c) = col[r];
  }
  return m;
}

IntMatrix linking_matrix(const HandleDiagram& d) {
  const std::size_t n = d.handles.size();
  IntMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      m(i, j) = i == j ? d.handles[i].framing : d.linking.get(d.handles[i].id, d.handles[j].id);
  return m;
}

// ---------------------------------------------------------------------------
// Smith normal form

namespace {

struct Position {
  std::size_t r, c;
};

std::optional<Position> smallest_nonzero(const IntMatrix& a, std::size_t t) {
  std::optional<Position> best;
  BigInt best_abs;
  for (std::size_t r = t; r < a.rows(); ++r)
    for (std::size_t c = t; c < a.cols(); ++c) {
      if (a(r, c) == 0) continue;
      BigInt v = abs(a(r, c));
      if (!best || v < best_abs) {
        best = Position{r, c};
        best_abs = v;
      }
    }
  return best;
}

// Smallest nonzero entry in row t / column t from position t on.
Position smallest_in_cross(const IntMatrix& a, std::size_t t) {
  Position best{t, t};
  BigInt best_abs = abs(a(t, t));
  auto consider = [&](std::size_t r, std::size_t c) {
    if (a(r, c) == 0) return;
    BigInt v = abs(a(r, c));
    if (best_abs == 0 || v < best_abs) {
      best = {r, c};
      best_abs = v;
    }
  };
  for (std::size_t r = t + 1; r < a.rows(); ++r) consider(r, t);
  for (std::size_t c = t + 1; c < a.cols(); ++c) consider(t, c);
  return best;
}

}  // namespace

SmithForm smith_normal_form(const IntMatrix& M) {
  const std::size_t m = M.rows(), n = M.cols();
  SmithForm s{M, IntMatrix::identity(m), IntMatrix::identity(n), 0};
  IntMatrix& A = s.D;

  auto move_to_pivot = [&](std::size_t t, Position p) {
    A.swap_rows(t, p.r);
    s.U.swap_rows(t, p.r);
    A.swap_cols(t, p.c);
    s.V.swap_cols(t, p.c);
  };

  std::size_t t = 0;
  for (; t < std::min(m, n); ++t) {
    auto start = smallest_nonzero(A, t);
    if (!start) break;
    move_to_pivot(t, *start);
    for (;;) {
      bool clean = true;
      for (std::size_t r = t + 1; r < m; ++r) {
        if (A(r, t) == 0) continue;
        BigInt q = A(r, t) / A(t, t);
        A.add_row(r, t, -q);
        s.U.add_row(r, t, -q);
        if (A(r, t) != 0) clean = false;
      }
      for (std::size_t c = t + 1; c < n; ++c) {
        if (A(t, c) == 0) continue;
        BigInt q = A(t, c) / A(t, t);
        A.add_col(c, t, -q);
        s.V.add_col(c, t, -q);
        if (A(t, c) != 0) clean = false;
      }
      if (!clean) {
        move_to_pivot(t, smallest_in_cross(A, t));
        continue;
      }
      // divisibility: pull an offending row into the pivot row
      std::optional<std::size_t> offending;
      for (std::size_t r = t + 1; r < m && !offending; ++r)
        for (std::size_t c = t + 1; c < n; ++c)
          if (A(r, c) % A(t, t) != 0) {
            offending = r;
            break;
          }
      if (!offending) break;
      A.add_row(t, *offending, 1);
      s.U.add_row(t, *offending, 1);
    }
    if (A(t, t) < 0) {
      A.negate_row(t);
      s.U.negate_row(t);
    }
  }
  s.rank = t;
  return s;
}

std::vector<BigInt> invariant_factors(const IntMatrix& M) {
  SmithForm s = smith_normal_form(M);
  std::vector<BigInt> out;
  for (std::size_t i = 0; i < std::min(M.rows(), M.cols()); ++i) out.push_back(s.D(i, i));
  return out;
}

IntMatrix kernel_basis(const IntMatrix& M) {
  SmithForm s = smith_normal_form(M);
  return s.V.columns_from(s.rank);
}

// ---------------------------------------------------------------------------
// Congruence diagonalization

Congruence congruence_diagonalize(const IntMatrix& G) {
  const std::size_t n = G.rows();
  Congruence c;
  auto& A = c.D;
  auto& P = c.P;
  A.assign(n, std::vector<Rational>(n));
  P.assign(n, std::vector<Rational>(n));
  for (std::size_t i = 0; i < n; ++i) {
    P[i][i] = 1;
    for (std::size_t j = 0; j < n; ++j) A[i][j] = Rational(G(i, j));
  }

  auto sym_swap = [&](std::size_t a, std::size_t b) {
    if (a == b) return;
    std::swap(A[a], A[b]);
    for (auto& row : A) std::swap(row[a], row[b]);
    std::swap(P[a], P[b]);
  };
  // row/col i -= f * row/col k, mirrored into P
  auto sym_sub = [&](std::size_t i, std::size_t k, const Rational& f) {
    if (f == 0) return;
    for (std::size_t j = 0; j < n; ++j) A[i][j] -= f * A[k][j];
    for (std::size_t j = 0; j < n; ++j) A[j][i] -= f * A[j][k];
    for (std::size_t j = 0; j < n; ++j) P[i][j] -= f * P[k][j];
  };

  std::size_t k = 0;
  while (k < n) {
    std::optional<std::size_t> diag;
    for (std::size_t i = k; i < n && !diag; ++i)
      if (A[i][i] != 0) diag = i;
    if (diag) {
      sym_swap(k, *diag);
      for (std::size_t i = k + 1; i < n; ++i) sym_sub(i, k, A[i][k] / A[k][k]);
      c.block_sizes.push_back(1);
      ++k;
      continue;
    }
    std::optional<std::pair<std::size_t, std::size_t>> off;
    for (std::size_t i = k; i < n && !off; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        if (A[i][j] != 0) {
          off = {i, j};
          break;
        }
    if (!off) {
      for (; k < n; ++k) c.block_sizes.push_back(1);
      break;
    }
    sym_swap(k, off->first);
    sym_swap(k + 1, off->second == k ? off->first : off->second);
    // block ((0,b),(b,0)); its inverse is ((0,1/b),(1/b,0))
    const Rational b = A[k][k + 1];
    for (std::size_t i = k + 2; i < n; ++i) {
      Rational x = A[i][k + 1] / b;
      Rational y = A[i][k] / b;
      sym_sub(i, k, x);
      sym_sub(i, k + 1, y);
    }
    c.block_sizes.push_back(2);
    k += 2;
  }
  return c;
}

FormData form_data(const IntMatrix& G) {
  FormData f;
  Congruence c = congruence_diagonalize(G);
  std::size_t k = 0;
  for (std::size_t size : c.block_sizes) {
    if (size == 1) {
      if (c.D[k][k] > 0) {
        ++f.rank;
        ++f.signature;
      } else if (c.D[k][k] < 0) {
        ++f.rank;
        --f.signature;
      }
    } else {
      f.rank += 2;
    }
    k += size;
  }
  for (std::size_t i = 0; i < G.rows(); ++i)
    if (G(i, i) % 2 != 0) f.odd = true;
  for (auto& v : invariant_factors(G))
    if (v != 0) f.torsion.push_back(v);
  return f;
}

// ---------------------------------------------------------------------------

HomologySummary homology_summary(const HandleDiagram& d) {
  HomologySummary h;
  IntMatrix b = boundary_matrix(d);
  SmithForm s = smith_normal_form(b);
  for (std::size_t i = 0; i < s.rank; ++i)
    if (s.D(i, i) != 1) h.h1.push_back(s.D(i, i));
  for (std::size_t i = s.rank; i < b.rows(); ++i) h.h1.push_back(0);
  long nullity = static_cast<long>(b.cols() - s.rank);
  h.h2_rank = std::max<long>(0, nullity - static_cast<long>(d.n3));
  h.three_handle_flag = d.n3 > 0;
  return h;
}

IntMatrix restricted_gram(const HandleDiagram& d) {
  IntMatrix basis = kernel_basis(boundary_matrix(d));
  return basis.transpose() * linking_matrix(d) * basis;
}

FormData intersection_form(const HandleDiagram& d) { return form_data(restricted_gram(d)); }

bool InvariantSummary::same_invariants(const InvariantSummary& o) const {
  return h1_invariant_factors == o.h1_invariant_factors && h2_rank == o.h2_rank && form_rank == o.form_rank &&
         signature == o.signature && odd == o.odd && gram_torsion == o.gram_torsion;
}

InvariantSummary invariant_summary(const HandleDiagram& d) {
  HomologySummary h = homology_summary(d);
  FormData f = intersection_form(d);
  return {h.h1, h.h2_rank, f.rank, f.signature, f.odd, f.torsion, h.three_handle_flag};
}

namespace {

std::string list(const std::vector<BigInt>& v) {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
  os << ')';
  return os.str();
}

}  // namespace

std::string render(const InvariantSummary& s) {
  std::ostringstream os;
  os << "h1_invariant_factors: " << list(s.h1_invariant_factors) << '\n'
     << "h2_rank: " << s.h2_rank << '\n'
     << "form_rank: " << s.form_rank << '\n'
     << "signature: " << s.signature << '\n'
     << "parity: " << (s.odd ? "odd" : "even") << '\n'
     << "gram_torsion: " << list(s.gram_torsion) << '\n'
     << "three_handle_flag: " << (s.three_handle_flag ? "true" : "false") << '\n';
  return os.str();
}

bool has_odd_square_class(const HandleDiagram& d) { return intersection_form(d).odd; }

bool is_free_trivial(const FreeWord& w) { return FreeWord::reduce(w.letters()).empty(); }

}  // namespace kirby
