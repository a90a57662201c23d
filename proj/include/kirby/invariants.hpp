#pragma once

// Exact algebraic invariants of a handle diagram.
//
// The 2-skeleton chain complex has C2 = Z^{handles}, C1 = Z^{dots} and
// boundary d2 whose columns are exponent vectors.  H1 = coker d2; the
// intersection form is the Gram matrix (framings on the diagonal, linking
// off it) restricted to ker d2.

#include <string>
#include <vector>

#include "kirby/diagram.hpp"
#include "kirby/matrix.hpp"

namespace kirby {

/// dots x handles; column per 2-handle = exponent vector of its word.
IntMatrix boundary_matrix(const HandleDiagram& d);

/// Full symmetric handles x handles linking matrix, framings on the diagonal.
IntMatrix linking_matrix(const HandleDiagram& d);

struct SmithForm {
  IntMatrix D;  ///< diagonal, d1 | d2 | ..., all >= 0
  IntMatrix U;  ///< rows x rows, unimodular
  IntMatrix V;  ///< cols x cols, unimodular
  std::size_t rank = 0;  ///< number of nonzero diagonal entries
};

/// U * M * V = D.  Pivots on the smallest nonzero absolute value, ties by
/// row-major position.
SmithForm smith_normal_form(const IntMatrix& M);

/// The min(rows, cols) diagonal entries of the Smith form, zeros included.
std::vector<BigInt> invariant_factors(const IntMatrix& M);

/// Integer basis of ker M as columns (taken from the Smith transform V).
IntMatrix kernel_basis(const IntMatrix& M);

/// Result of symmetric congruence diagonalization over Q:
/// P * G * P^T = D, with D made of 1x1 and 2x2 blocks ((0,b),(b,0)).
struct Congruence {
  std::vector<std::vector<Rational>> P;
  std::vector<std::vector<Rational>> D;
  std::vector<std::size_t> block_sizes;
};

Congruence congruence_diagonalize(const IntMatrix& G);

struct FormData {
  std::size_t rank = 0;
  long signature = 0;
  bool odd = false;
  /// Nonzero invariant factors of the Gram matrix.
  std::vector<BigInt> torsion;

  bool operator==(const FormData&) const = default;
};

/// Rank, signature, parity and torsion of an arbitrary symmetric matrix.
FormData form_data(const IntMatrix& G);

struct HomologySummary {
  /// Invariant factors of H1 with 1s suppressed; 0 encodes a free Z.
  std::vector<BigInt> h1;
  /// Nullity of d2 less the number of 3-handles, floored at 0.
  long h2_rank = 0;
  bool three_handle_flag = false;

  bool operator==(const HomologySummary&) const = default;
};

HomologySummary homology_summary(const HandleDiagram& d);

/// Gram matrix of the intersection form on ker d2, B^T L B.
IntMatrix restricted_gram(const HandleDiagram& d);

FormData intersection_form(const HandleDiagram& d);

struct InvariantSummary {
  std::vector<BigInt> h1_invariant_factors;
  long h2_rank = 0;
  std::size_t form_rank = 0;
  long signature = 0;
  bool odd = false;
  std::vector<BigInt> gram_torsion;
  bool three_handle_flag = false;

  bool operator==(const InvariantSummary&) const = default;
  /// Everything except three_handle_flag, which counts 3-handles rather than
  /// measuring the manifold.
  bool same_invariants(const InvariantSummary& o) const;
};

InvariantSummary invariant_summary(const HandleDiagram& d);

/// Stable `key: value` lines.
std::string render(const InvariantSummary& s);

bool has_odd_square_class(const HandleDiagram& d);
bool is_free_trivial(const FreeWord& w);

}  // namespace kirby
