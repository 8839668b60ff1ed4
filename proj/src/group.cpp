#include <okt/group.hpp>

#include <sstream>

namespace okt {

FGAbelianGroup::FGAbelianGroup() : FGAbelianGroup(IntMat(0, 0)) {}

FGAbelianGroup::FGAbelianGroup(const IntMat& presentation)
    : gens_(presentation.cols()), pres_(presentation), rel_(presentation.transpose()) {
  normalize();
}

void FGAbelianGroup::normalize() {
  auto snf = smith_normal_form<Int>(rel_);
  std::vector<Index> kept;
  for (Index i = 0; i < snf.rank; ++i)
    if (snf.s(i, i) >= Int(2)) {
      kept.push_back(i);
      torsion_.push_back(snf.s(i, i));
      moduli_.push_back(snf.s(i, i));
    }
  for (Index i = snf.rank; i < gens_; ++i) {
    kept.push_back(i);
    moduli_.push_back(Int(0));
  }
  free_rank_ = gens_ - snf.rank;
  const Index m = static_cast<Index>(kept.size());
  to_can_ = IntMat(m, gens_);
  from_can_ = IntMat(gens_, m);
  for (Index k = 0; k < m; ++k) {
    to_can_.row(k) = snf.u_inv.row(kept[static_cast<std::size_t>(k)]);
    from_can_.col(k) = snf.u.col(kept[static_cast<std::size_t>(k)]);
  }
}

FGAbelianGroup FGAbelianGroup::free_group(Index rank) {
  return FGAbelianGroup(IntMat::Zero(0, rank));
}

FGAbelianGroup FGAbelianGroup::cyclic(const Int& order) {
  IntMat p(1, 1);
  p(0, 0) = abs(order);
  return FGAbelianGroup(p);
}

FGAbelianGroup FGAbelianGroup::from_invariants(const std::vector<Int>& torsion,
                                               Index free_rank) {
  const Index t = static_cast<Index>(torsion.size());
  IntMat p = IntMat::Zero(t, t + free_rank);
  for (Index i = 0; i < t; ++i) p(i, i) = abs(torsion[static_cast<std::size_t>(i)]);
  return FGAbelianGroup(p);
}

FGAbelianGroup FGAbelianGroup::direct_sum(const FGAbelianGroup& a, const FGAbelianGroup& b) {
  IntMat p = IntMat::Zero(a.pres_.rows() + b.pres_.rows(), a.gens_ + b.gens_);
  for (Index i = 0; i < a.pres_.rows(); ++i)
    for (Index j = 0; j < a.gens_; ++j) p(i, j) = a.pres_(i, j);
  for (Index i = 0; i < b.pres_.rows(); ++i)
    for (Index j = 0; j < b.gens_; ++j) p(a.pres_.rows() + i, a.gens_ + j) = b.pres_(i, j);
  return FGAbelianGroup(p);
}

Int FGAbelianGroup::order() const {
  if (free_rank_ > 0) return Int(0);
  Int n(1);
  for (const Int& d : torsion_) n *= d;
  return n;
}

bool FGAbelianGroup::same_invariants(const FGAbelianGroup& other) const {
  if (free_rank_ != other.free_rank_) return false;
  if (torsion_.size() != other.torsion_.size()) return false;
  for (std::size_t i = 0; i < torsion_.size(); ++i)
    if (torsion_[i] != other.torsion_[i]) return false;
  return true;
}

FGAbelianGroup FGAbelianGroup::normal_form_group() const {
  return from_invariants(torsion_, free_rank_);
}

IntVec FGAbelianGroup::canonical_coordinates(const IntVec& x) const {
  if (x.size() != gens_) throw ShapeError("canonical_coordinates: wrong element length");
  IntVec w = to_can_ * x;
  for (Index k = 0; k < w.size(); ++k)
    if (!moduli_[static_cast<std::size_t>(k)].is_zero())
      w(k) = floor_mod(w(k), moduli_[static_cast<std::size_t>(k)]);
  return w;
}

IntVec FGAbelianGroup::element_from_canonical(const IntVec& w) const {
  if (w.size() != invariant_count())
    throw ShapeError("element_from_canonical: wrong coordinate length");
  return from_can_ * w;
}

bool FGAbelianGroup::element_is_zero(const IntVec& x) const {
  IntVec w = canonical_coordinates(x);
  for (Index k = 0; k < w.size(); ++k)
    if (!w(k).is_zero()) return false;
  return true;
}

bool FGAbelianGroup::elements_equal(const IntVec& x, const IntVec& y) const {
  return element_is_zero(IntVec(x - y));
}

IntVec FGAbelianGroup::reduce(const IntVec& x) const {
  return element_from_canonical(canonical_coordinates(x));
}

Int FGAbelianGroup::element_order(const IntVec& x) const {
  IntVec w = canonical_coordinates(x);
  Int ord(1);
  for (Index k = 0; k < w.size(); ++k) {
    const Int& m = moduli_[static_cast<std::size_t>(k)];
    if (m.is_zero()) {
      if (!w(k).is_zero()) return Int(0);  // infinite order
    } else if (!w(k).is_zero()) {
      ord = lcm(ord, divexact(m, gcd(m, w(k))));
    }
  }
  return ord;
}

std::string FGAbelianGroup::describe() const {
  if (is_trivial()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const Int& d : torsion_) {
    if (!first) os << " + ";
    os << "Z/" << d.to_string();
    first = false;
  }
  if (free_rank_ > 0) {
    if (!first) os << " + ";
    os << "Z";
    if (free_rank_ > 1) os << "^" << free_rank_;
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// GroupHom
// ---------------------------------------------------------------------------

GroupHom::GroupHom(FGAbelianGroup source, FGAbelianGroup target, IntMat matrix)
    : source_(std::move(source)), target_(std::move(target)), matrix_(std::move(matrix)) {
  if (matrix_.rows() != target_.generator_count() ||
      matrix_.cols() != source_.generator_count())
    throw ShapeError("GroupHom: matrix shape does not match generator counts");
  IntMat mapped = matrix_ * source_.relation_lattice();
  if (!solve_linear_mat(target_.relation_lattice(), mapped).has_value())
    throw ValidationError("GroupHom: source relations do not map into target relations");
}

GroupHom GroupHom::identity(const FGAbelianGroup& g) {
  return GroupHom(g, g, IntMat::Identity(g.generator_count(), g.generator_count()));
}

GroupHom GroupHom::zero(const FGAbelianGroup& source, const FGAbelianGroup& target) {
  return GroupHom(source, target,
                  IntMat::Zero(target.generator_count(), source.generator_count()));
}

IntVec GroupHom::apply(const IntVec& x) const {
  if (x.size() != source_.generator_count()) throw ShapeError("GroupHom::apply: wrong length");
  return matrix_ * x;
}

GroupHom GroupHom::compose(const GroupHom& inner) const {
  if (inner.target_.generator_count() != source_.generator_count())
    throw ShapeError("GroupHom::compose: middle groups do not match");
  return GroupHom(inner.source_, target_, IntMat(matrix_ * inner.matrix_));
}

GroupHom GroupHom::negate() const { return GroupHom(source_, target_, IntMat(-matrix_)); }

GroupHom GroupHom::add(const GroupHom& other) const {
  if (other.matrix_.rows() != matrix_.rows() || other.matrix_.cols() != matrix_.cols())
    throw ShapeError("GroupHom::add: shape mismatch");
  return GroupHom(source_, target_, IntMat(matrix_ + other.matrix_));
}

GroupHom GroupHom::sub(const GroupHom& other) const { return add(other.negate()); }

GroupHom GroupHom::scale(const Int& c) const {
  return GroupHom(source_, target_, IntMat(matrix_ * c));
}

bool GroupHom::equals(const GroupHom& other) const {
  if (other.matrix_.rows() != matrix_.rows() || other.matrix_.cols() != matrix_.cols())
    return false;
  IntMat diff = matrix_ - other.matrix_;
  return solve_linear_mat(target_.relation_lattice(), diff).has_value();
}

bool GroupHom::is_zero_hom() const {
  return solve_linear_mat(target_.relation_lattice(), matrix_).has_value();
}

IntMat GroupHom::kernel_lattice() const {
  const Index ng = source_.generator_count();
  const IntMat& rh = target_.relation_lattice();
  IntMat b(target_.generator_count(), ng + rh.cols());
  for (Index j = 0; j < ng; ++j) b.col(j) = matrix_.col(j);
  for (Index j = 0; j < rh.cols(); ++j) b.col(ng + j) = -rh.col(j);
  IntMat kb = kernel_basis(b);
  IntMat out(ng, kb.cols());
  for (Index j = 0; j < kb.cols(); ++j)
    for (Index i = 0; i < ng; ++i) out(i, j) = kb(i, j);
  return out;
}

IntMat GroupHom::image_lattice() const {
  const IntMat& rh = target_.relation_lattice();
  IntMat out(target_.generator_count(), matrix_.cols() + rh.cols());
  for (Index j = 0; j < matrix_.cols(); ++j) out.col(j) = matrix_.col(j);
  for (Index j = 0; j < rh.cols(); ++j) out.col(matrix_.cols() + j) = rh.col(j);
  return out;
}

bool GroupHom::is_injective() const {
  return solve_linear_mat(source_.relation_lattice(), kernel_lattice()).has_value();
}

bool GroupHom::is_surjective() const {
  // Cokernel ℤ^tgt / (im F + relations) must vanish.
  IntMat img = image_lattice();
  return FGAbelianGroup(IntMat(img.transpose())).is_trivial();
}

bool GroupHom::is_isomorphism() const { return is_injective() && is_surjective(); }

bool same_lattice(const IntMat& a, const IntMat& b) {
  if (a.rows() != b.rows()) throw ShapeError("same_lattice: ambient dimensions differ");
  return solve_linear_mat(a, b).has_value() && solve_linear_mat(b, a).has_value();
}

// ---------------------------------------------------------------------------
// Hom and Ext groups
// ---------------------------------------------------------------------------

namespace {

IntMat diag_presentation(const std::vector<Int>& orders) {
  const Index n = static_cast<Index>(orders.size());
  IntMat p = IntMat::Zero(n, n);
  for (Index i = 0; i < n; ++i) p(i, i) = orders[static_cast<std::size_t>(i)];
  return p;
}

}  // namespace

HomGroup hom_group(const FGAbelianGroup& g, const FGAbelianGroup& h) {
  HomGroup out;
  out.source = g;
  out.target = h;
  const auto& gm = g.coordinate_moduli();
  const auto& hm = h.coordinate_moduli();
  std::vector<IntMat> can_mats;
  for (Index i = 0; i < g.invariant_count(); ++i) {
    for (Index j = 0; j < h.invariant_count(); ++j) {
      const Int& a = gm[static_cast<std::size_t>(i)];
      const Int& b = hm[static_cast<std::size_t>(j)];
      Int order, mult;
      if (!a.is_zero() && !b.is_zero()) {
        Int gg = gcd(a, b);
        if (gg == Int(1)) continue;  // only the zero hom
        order = gg;
        mult = divexact(b, gg);
      } else if (!a.is_zero() && b.is_zero()) {
        continue;  // torsion cannot map to a free coordinate
      } else if (a.is_zero() && !b.is_zero()) {
        order = b;
        mult = Int(1);
      } else {
        order = Int(0);
        mult = Int(1);
      }
      IntMat m = IntMat::Zero(h.invariant_count(), g.invariant_count());
      m(j, i) = mult;
      can_mats.push_back(m);
      out.orders.push_back(order);
    }
  }
  out.group = FGAbelianGroup(diag_presentation(out.orders));
  for (const IntMat& m : can_mats)
    out.basis.emplace_back(
        g, h, IntMat(h.from_canonical_matrix() * m * g.to_canonical_matrix()));
  return out;
}

GroupHom HomGroup::from_coordinates(const IntVec& c) const {
  if (c.size() != static_cast<Index>(basis.size()))
    throw ShapeError("HomGroup::from_coordinates: wrong coordinate length");
  IntMat m = IntMat::Zero(target.generator_count(), source.generator_count());
  for (Index k = 0; k < c.size(); ++k)
    m += c(k) * basis[static_cast<std::size_t>(k)].matrix();
  return GroupHom(source, target, m);
}

IntVec HomGroup::coordinates_of(const GroupHom& f) const {
  if (f.source().generator_count() != source.generator_count() ||
      f.target().generator_count() != target.generator_count())
    throw ShapeError("HomGroup::coordinates_of: hom does not match this hom group");
  IntMat can = target.to_canonical_matrix() * f.matrix() * source.from_canonical_matrix();
  const auto& gm = source.coordinate_moduli();
  const auto& hm = target.coordinate_moduli();
  IntVec c(static_cast<Index>(basis.size()));
  Index k = 0;
  for (Index i = 0; i < source.invariant_count(); ++i) {
    for (Index j = 0; j < target.invariant_count(); ++j) {
      const Int& a = gm[static_cast<std::size_t>(i)];
      const Int& b = hm[static_cast<std::size_t>(j)];
      if (!a.is_zero() && !b.is_zero()) {
        Int gg = gcd(a, b);
        if (gg == Int(1)) continue;
        Int mult = divexact(b, gg);
        if (!divides(mult, can(j, i)))
          throw ValidationError("HomGroup::coordinates_of: hom is not well defined");
        c(k++) = floor_mod(divexact(can(j, i), mult), gg);
      } else if (!a.is_zero() && b.is_zero()) {
        if (!can(j, i).is_zero())
          throw ValidationError("HomGroup::coordinates_of: torsion maps into free part");
      } else if (a.is_zero() && !b.is_zero()) {
        c(k++) = floor_mod(can(j, i), b);
      } else {
        c(k++) = can(j, i);
      }
    }
  }
  return c;
}

ExtGroup ext_group(const FGAbelianGroup& source, const FGAbelianGroup& target) {
  ExtGroup out;
  out.source = source;
  out.target = target;
  std::vector<Int> orders;
  const auto& st = source.torsion();
  const auto& tt = target.torsion();
  for (std::size_t i = 0; i < st.size(); ++i) {
    for (std::size_t j = 0; j < tt.size(); ++j) {
      Int gg = gcd(st[i], tt[j]);
      if (gg == Int(1)) continue;
      out.generators.push_back(
          {static_cast<Index>(i), false, static_cast<Index>(j), gg});
      orders.push_back(gg);
    }
    for (Index j = 0; j < target.free_rank(); ++j) {
      out.generators.push_back({static_cast<Index>(i), true, j, st[i]});
      orders.push_back(st[i]);
    }
  }
  out.group = FGAbelianGroup(diag_presentation(orders));
  return out;
}

}  // namespace okt
