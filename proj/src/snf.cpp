#include <okt/snf.hpp>

namespace okt {

std::optional<IntVec> solve_linear(const IntMat& a, const IntVec& b) {
  if (a.rows() != b.rows()) throw ShapeError("solve_linear: a and b row counts differ");
  auto m = solve_linear_mat(a, IntMat(b));
  if (!m) return std::nullopt;
  return IntVec(m->col(0));
}

std::optional<IntMat> solve_linear_mat(const IntMat& a, const IntMat& b) {
  if (a.rows() != b.rows()) throw ShapeError("solve_linear_mat: a and b row counts differ");
  SmithNormalForm snf = smith_normal_form<Int>(a);
  // a x = b  <=>  s (v x) = u_inv b.  Solve diagonally, then x = v_inv y.
  IntMat c = snf.u_inv * b;
  IntMat y = IntMat::Zero(a.cols(), b.cols());
  const Index n = std::min(a.rows(), a.cols());
  for (Index k = 0; k < b.cols(); ++k) {
    for (Index i = 0; i < n; ++i) {
      const Int& d = snf.s(i, i);
      if (d.is_zero()) {
        if (!c(i, k).is_zero()) return std::nullopt;
      } else {
        if (!divides(d, c(i, k))) return std::nullopt;
        y(i, k) = divexact(c(i, k), d);
      }
    }
    for (Index i = n; i < a.rows(); ++i)
      if (!c(i, k).is_zero()) return std::nullopt;
  }
  IntMat x = snf.v_inv * y;
  // Shrink the particular solution modulo the kernel so callers that compose
  // solves do not inherit the transform matrices' large entries.  Skipped for
  // very wide systems (the flattened matrix-equation solves) where the
  // reduction would cost more than it saves.
  const Index nullity = a.cols() - snf.rank;
  if (nullity > 0 && nullity <= 64) {
    IntMat kb(a.cols(), nullity);
    for (Index j = 0; j < nullity; ++j) kb.col(j) = snf.v_inv.col(snf.rank + j);
    kb = lattice_reduce(kb);
    for (Index j = 0; j < kb.cols(); ++j) {
      Index pr = -1;
      for (Index i = 0; i < kb.rows(); ++i)
        if (!kb(i, j).is_zero()) {
          pr = i;
          break;
        }
      if (pr < 0) continue;
      for (Index k = 0; k < x.cols(); ++k) {
        const Int q = round_div(x(pr, k), kb(pr, j));
        if (!q.is_zero()) x.col(k) -= kb.col(j) * q;
      }
    }
  }
  return x;
}

IntMat kernel_basis(const IntMat& a) {
  SmithNormalForm snf = smith_normal_form<Int>(a);
  // s (v x) = 0 exactly when the first rank coordinates of v x vanish, so the
  // kernel is spanned by the trailing columns of v_inv.
  const Index k = a.cols() - snf.rank;
  IntMat basis(a.cols(), k);
  for (Index j = 0; j < k; ++j) basis.col(j) = snf.v_inv.col(snf.rank + j);
  return lattice_reduce(basis);
}

IntMat lattice_reduce(const IntMat& basis) {
  IntMat b = basis;
  const Index rows = b.rows(), k = b.cols();
  Index t = 0;
  for (Index r = 0; r < rows && t < k; ++r) {
    for (;;) {
      // Smallest nonzero entry of the active row segment becomes the pivot.
      Index m = -1;
      int live = 0;
      for (Index j = t; j < k; ++j) {
        if (b(r, j).is_zero()) continue;
        ++live;
        if (m == -1 || abs(b(r, j)) < abs(b(r, m))) m = j;
      }
      if (live == 0) break;
      if (live == 1) {
        if (m != t) b.col(m).swap(b.col(t));
        if (b(r, t).sign() < 0) b.col(t) = -b.col(t);
        // Reduce this row's entries in the earlier pivot columns; column t is
        // zero above row r, so the established pivots are untouched.
        for (Index j = 0; j < t; ++j) {
          const Int q = round_div(b(r, j), b(r, t));
          if (!q.is_zero()) b.col(j) -= b.col(t) * q;
        }
        ++t;
        break;
      }
      for (Index j = t; j < k; ++j) {
        if (j == m || b(r, j).is_zero()) continue;
        // |entry| >= |pivot|, so the rounded quotient is nonzero and every
        // pass at least halves the row minimum: this terminates.
        const Int q = round_div(b(r, j), b(r, m));
        b.col(j) -= b.col(m) * q;
      }
    }
  }
  return b;
}

bool lattice_contains(const IntMat& basis, const IntVec& x) {
  return solve_linear(basis, x).has_value();
}

bool lattice_contains_all(const IntMat& basis, const IntMat& m) {
  return solve_linear_mat(basis, m).has_value();
}

IntMat kron(const IntMat& a, const IntMat& b) {
  IntMat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j)
      for (Index p = 0; p < b.rows(); ++p)
        for (Index q = 0; q < b.cols(); ++q)
          out(i * b.rows() + p, j * b.cols() + q) = a(i, j) * b(p, q);
  return out;
}

IntVec vectorize(const IntMat& m) {
  IntVec v(m.rows() * m.cols());
  for (Index j = 0; j < m.cols(); ++j)
    for (Index i = 0; i < m.rows(); ++i) v(j * m.rows() + i) = m(i, j);
  return v;
}

IntMat unvectorize(const IntVec& v, Index rows, Index cols) {
  if (v.size() != rows * cols) throw ShapeError("unvectorize: size mismatch");
  IntMat m(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) m(i, j) = v(j * rows + i);
  return m;
}

int MatrixEquationSystem::add_unknown(Index rows, Index cols) {
  Unknown u{rows, cols, total_cols_};
  total_cols_ += rows * cols;
  unknowns_.push_back(u);
  return static_cast<int>(unknowns_.size()) - 1;
}

void MatrixEquationSystem::add_equation(std::vector<Term> terms, const IntMat& rhs) {
  for (const Term& t : terms) {
    if (t.var < 0 || t.var >= static_cast<int>(unknowns_.size()))
      throw ValidationError("MatrixEquationSystem: unknown variable id");
    const Unknown& u = unknowns_[static_cast<std::size_t>(t.var)];
    if (t.left.cols() != u.rows || t.right.rows() != u.cols)
      throw ShapeError("MatrixEquationSystem: term shape does not fit unknown");
    if (t.left.rows() != rhs.rows() || t.right.cols() != rhs.cols())
      throw ShapeError("MatrixEquationSystem: term shape does not fit rhs");
  }
  equations_.push_back(Equation{std::move(terms), rhs});
}

std::optional<std::vector<IntMat>> MatrixEquationSystem::solve() const {
  Index total_rows = 0;
  for (const Equation& e : equations_) total_rows += e.rhs.rows() * e.rhs.cols();
  IntMat big = IntMat::Zero(total_rows, total_cols_);
  IntVec rhs = IntVec::Zero(total_rows);
  Index row_off = 0;
  for (const Equation& e : equations_) {
    const Index block = e.rhs.rows() * e.rhs.cols();
    for (const Term& t : e.terms) {
      const Unknown& u = unknowns_[static_cast<std::size_t>(t.var)];
      IntMat lift = kron(IntMat(t.right.transpose()), t.left);
      for (Index i = 0; i < block; ++i)
        for (Index j = 0; j < lift.cols(); ++j)
          big(row_off + i, u.offset + j) += lift(i, j);
    }
    IntVec vb = vectorize(e.rhs);
    for (Index i = 0; i < block; ++i) rhs(row_off + i) = vb(i);
    row_off += block;
  }
  auto x = solve_linear(big, rhs);
  if (!x) return std::nullopt;
  std::vector<IntMat> out;
  out.reserve(unknowns_.size());
  for (const Unknown& u : unknowns_) {
    IntVec slice(u.rows * u.cols);
    for (Index i = 0; i < slice.size(); ++i) slice(i) = (*x)(u.offset + i);
    out.push_back(unvectorize(slice, u.rows, u.cols));
  }
  return out;
}

}  // namespace okt
