#pragma once

// Smith normal form and the integer-lattice algebra built on top of it:
// exact linear solving, kernel bases, lattice membership, and a small
// assembler for systems whose unknowns are integer matrices.

#include <okt/core.hpp>

#include <optional>
#include <vector>

namespace okt {

/// Decomposition a = u * s * v with u, v unimodular and s diagonal,
/// diag entries nonnegative and each dividing the next.  The inverses are
/// tracked alongside, so u * u_inv == I and v * v_inv == I exactly.
template <typename Scalar>
struct SmithDecomposition {
  using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  Mat u, s, v;
  Mat u_inv, v_inv;
  Index rank = 0;
  /// diag[i] = s(i, i) for i < min(rows, cols); nonzero entries first.
  std::vector<Scalar> diag;
};

namespace detail {

template <typename Mat>
void add_row(Mat& m, Index dst, Index src, const typename Mat::Scalar& c) {
  // row[dst] += c * row[src]
  for (Index j = 0; j < m.cols(); ++j) m(dst, j) += c * m(src, j);
}
template <typename Mat>
void add_col(Mat& m, Index dst, Index src, const typename Mat::Scalar& c) {
  for (Index i = 0; i < m.rows(); ++i) m(i, dst) += c * m(i, src);
}

}  // namespace detail

/// divides_entry(d, x): does d divide x?  (d == 0 only divides 0.)
inline bool divides_entry(const Int& d, const Int& x) { return divides(d, x); }
inline bool divides_entry(long long d, long long x) {
  if (d == 0) return x == 0;
  return x % d == 0;
}

/// Smith normal form by alternating row/column Euclidean reduction with a
/// divisibility fix-up pass.  All four transform matrices are maintained so
/// that a == u * s * v holds throughout.
template <typename Scalar>
SmithDecomposition<Scalar> smith_normal_form(
    const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& a) {
  using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  const Index r = a.rows(), c = a.cols();
  SmithDecomposition<Scalar> out;
  out.s = a;
  out.u = Mat::Identity(r, r);
  out.u_inv = Mat::Identity(r, r);
  out.v = Mat::Identity(c, c);
  out.v_inv = Mat::Identity(c, c);
  Mat& s = out.s;

  const Scalar zero(0);

  // Row op s <- E s keeps a == u s v when u <- u E^{-1}; column op s <- s F
  // when v <- F^{-1} v.  Each helper applies E (or F) and its inverse pair.
  auto swap_rows = [&](Index i, Index j) {
    s.row(i).swap(s.row(j));
    out.u.col(i).swap(out.u.col(j));
    out.u_inv.row(i).swap(out.u_inv.row(j));
  };
  auto swap_cols = [&](Index i, Index j) {
    s.col(i).swap(s.col(j));
    out.v.row(i).swap(out.v.row(j));
    out.v_inv.col(i).swap(out.v_inv.col(j));
  };
  auto negate_row = [&](Index i) {
    for (Index j = 0; j < c; ++j) s(i, j) = -s(i, j);
    for (Index k = 0; k < r; ++k) {
      out.u(k, i) = -out.u(k, i);
      out.u_inv(i, k) = -out.u_inv(i, k);
    }
  };
  auto row_op = [&](Index dst, Index src, const Scalar& q) {
    // s.row(dst) -= q * s.row(src)
    detail::add_row(s, dst, src, -q);
    detail::add_col(out.u, src, dst, q);       // u <- u E^{-1}
    detail::add_row(out.u_inv, dst, src, -q);  // u_inv <- E u_inv
  };
  auto col_op = [&](Index dst, Index src, const Scalar& q) {
    detail::add_col(s, dst, src, -q);
    detail::add_row(out.v, src, dst, q);
    detail::add_col(out.v_inv, dst, src, -q);
  };

  const Index n = std::min(r, c);
  for (Index t = 0; t < n; ++t) {
    // Locate a pivot: the nonzero entry of smallest magnitude in s[t:, t:].
    auto find_pivot = [&]() -> std::optional<std::pair<Index, Index>> {
      std::optional<std::pair<Index, Index>> best;
      for (Index i = t; i < r; ++i)
        for (Index j = t; j < c; ++j) {
          if (s(i, j) == zero) continue;
          if (!best || abs(s(i, j)) < abs(s(best->first, best->second)))
            best = {i, j};
        }
      return best;
    };
    auto piv = find_pivot();
    if (!piv) break;
    if (piv->first != t) swap_rows(t, piv->first);
    if (piv->second != t) swap_cols(t, piv->second);

    // Clear the pivot's row and column; each pass shrinks |pivot| or zeroes
    // another entry, so this terminates.
    bool dirty = true;
    while (dirty) {
      dirty = false;
      for (Index i = t + 1; i < r; ++i) {
        if (s(i, t) == zero) continue;
        Scalar q = s(i, t) / s(t, t);
        if (!(q == zero)) row_op(i, t, q);
        if (!(s(i, t) == zero)) {
          swap_rows(t, i);  // remainder is strictly smaller; continue there
          dirty = true;
        }
      }
      for (Index j = t + 1; j < c; ++j) {
        if (s(t, j) == zero) continue;
        Scalar q = s(t, j) / s(t, t);
        if (!(q == zero)) col_op(j, t, q);
        if (!(s(t, j) == zero)) {
          swap_cols(t, j);
          dirty = true;
        }
      }
    }

    // Divisibility fix-up: fold any entry the pivot misses into the pivot's
    // row and restart the clearing loop.
    bool fixed = true;
    while (fixed) {
      fixed = false;
      for (Index i = t + 1; i < r && !fixed; ++i)
        for (Index j = t + 1; j < c && !fixed; ++j) {
          if (divides_entry(s(t, t), s(i, j))) continue;
          detail::add_row(s, t, i, Scalar(1));
          detail::add_col(out.u, i, t, Scalar(-1));
          detail::add_row(out.u_inv, t, i, Scalar(1));
          fixed = true;
        }
      if (fixed) {
        bool dirty2 = true;
        while (dirty2) {
          dirty2 = false;
          for (Index j = t + 1; j < c; ++j) {
            if (s(t, j) == zero) continue;
            Scalar q = s(t, j) / s(t, t);
            if (!(q == zero)) col_op(j, t, q);
            if (!(s(t, j) == zero)) {
              swap_cols(t, j);
              dirty2 = true;
            }
          }
          for (Index i = t + 1; i < r; ++i) {
            if (s(i, t) == zero) continue;
            Scalar q = s(i, t) / s(t, t);
            if (!(q == zero)) row_op(i, t, q);
            if (!(s(i, t) == zero)) {
              swap_rows(t, i);
              dirty2 = true;
            }
          }
        }
      }
    }

    if (s(t, t) < zero) negate_row(t);
  }

  for (Index i = 0; i < n; ++i) {
    out.diag.push_back(s(i, i));
    if (!(s(i, i) == zero)) out.rank = i + 1;
  }
  return out;
}

using SmithNormalForm = SmithDecomposition<Int>;

/// One integer solution of a x = b, or nullopt when none exists.
std::optional<IntVec> solve_linear(const IntMat& a, const IntVec& b);

/// Columnwise solve of a x = b for each column of b.
std::optional<IntMat> solve_linear_mat(const IntMat& a, const IntMat& b);

/// Columns form a basis of the lattice { x : a x = 0 }.
IntMat kernel_basis(const IntMat& a);

/// Basis of the same column lattice in column-echelon form with entries kept
/// small (unimodular column operations only).  Composed eliminations feed one
/// solver's output into the next; without this size control the intermediate
/// entries grow multiplicatively along such chains.
IntMat lattice_reduce(const IntMat& basis);

/// Is x in the integer column span of basis?
bool lattice_contains(const IntMat& basis, const IntVec& x);

/// Is every column of m in the integer column span of basis?
bool lattice_contains_all(const IntMat& basis, const IntMat& m);

/// Kronecker product (a ⊗ b).
IntMat kron(const IntMat& a, const IntMat& b);

/// Column-major flattening of m.
IntVec vectorize(const IntMat& m);
IntMat unvectorize(const IntVec& v, Index rows, Index cols);

/// Solver for simultaneous equations whose unknowns are integer matrices.
/// Each equation constrains sum_k L_k * X_{var_k} * R_k == rhs; everything is
/// flattened through vec(L X R) = (R^T ⊗ L) vec(X) and handed to one Smith
/// solve.
class MatrixEquationSystem {
 public:
  struct Term {
    IntMat left;
    int var;
    IntMat right;
  };

  /// Registers an unknown matrix of the given shape; returns its id.
  int add_unknown(Index rows, Index cols);

  void add_equation(std::vector<Term> terms, const IntMat& rhs);

  /// One solution for all unknowns, or nullopt when the system is
  /// inconsistent over the integers.
  std::optional<std::vector<IntMat>> solve() const;

 private:
  struct Unknown {
    Index rows, cols;
    Index offset;  // column offset in the assembled system
  };
  struct Equation {
    std::vector<Term> terms;
    IntMat rhs;
  };
  std::vector<Unknown> unknowns_;
  std::vector<Equation> equations_;
  Index total_cols_ = 0;
};

}  // namespace okt
