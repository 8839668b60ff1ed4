#include <okt/orderext.hpp>

namespace okt {

namespace {

IntMat hstack(const IntMat& a, const IntMat& b) {
  if (a.rows() != b.rows()) throw ShapeError("hstack: row mismatch");
  IntMat m(a.rows(), a.cols() + b.cols());
  for (Index j = 0; j < a.cols(); ++j) m.col(j) = a.col(j);
  for (Index j = 0; j < b.cols(); ++j) m.col(a.cols() + j) = b.col(j);
  return m;
}

RatMat hstack_rat(const RatMat& a, const RatMat& b) {
  if (a.rows() != b.rows()) throw ShapeError("hstack_rat: row mismatch");
  RatMat m(a.rows(), a.cols() + b.cols());
  for (Index j = 0; j < a.cols(); ++j) m.col(j) = a.col(j);
  for (Index j = 0; j < b.cols(); ++j) m.col(a.cols() + j) = b.col(j);
  return m;
}

IntMat vstack(const IntMat& a, const IntMat& b) {
  if (a.cols() != b.cols()) throw ShapeError("vstack: column mismatch");
  IntMat m(a.rows() + b.rows(), a.cols());
  for (Index i = 0; i < a.rows(); ++i) m.row(i) = a.row(i);
  for (Index i = 0; i < b.rows(); ++i) m.row(a.rows() + i) = b.row(i);
  return m;
}

IntMat top_rows(const IntMat& m, Index n) {
  IntMat out(n, m.cols());
  for (Index i = 0; i < n; ++i) out.row(i) = m.row(i);
  return out;
}

/// Lattice of coordinates v with basis·v inside span(target): the relation
/// lattice of span(basis)/span(target) expressed in basis coordinates.
IntMat coordinate_relations(const IntMat& basis, const IntMat& target) {
  IntMat stacked = hstack(basis, IntMat(-target));
  IntMat kb = kernel_basis(stacked);
  return top_rows(IntMat(kb), basis.cols());
}

bool same_system(const InductiveSystem& a, const InductiveSystem& b) {
  if (a.stage_count() != b.stage_count()) return false;
  if (!is_zero(IntMat(a.unit(0) - b.unit(0)))) return false;
  for (Index n = 0; n < a.map_count(); ++n) {
    if (a.map0(n).rows() != b.map0(n).rows() || a.map0(n).cols() != b.map0(n).cols())
      return false;
    if (!is_zero(IntMat(a.map0(n) - b.map0(n)))) return false;
    if (!is_zero(IntMat(a.map1(n) - b.map1(n)))) return false;
  }
  return true;
}

bool same_group_data(const FGAbelianGroup& a, const FGAbelianGroup& b) {
  if (a.generator_count() != b.generator_count()) return false;
  return same_lattice(a.relation_lattice(), b.relation_lattice());
}

}  // namespace

// ---------------------------------------------------------------------------
// ExtensionPresentation
// ---------------------------------------------------------------------------

ExtensionPresentation::ExtensionPresentation(FGAbelianGroup g0_, FGAbelianGroup e_,
                                             FGAbelianGroup g1_, GroupHom iota_,
                                             GroupHom q_)
    : g0(std::move(g0_)),
      e(std::move(e_)),
      g1(std::move(g1_)),
      // rebuild on the stored groups so well-definedness is re-validated here
      iota(g0, e, iota_.matrix()),
      q(e, g1, q_.matrix()) {
  if (!iota.is_injective())
    throw ValidationError("ExtensionPresentation: iota is not injective");
  if (!q.is_surjective())
    throw ValidationError("ExtensionPresentation: q is not surjective");
  if (!same_lattice(iota.image_lattice(), q.kernel_lattice()))
    throw ValidationError("ExtensionPresentation: image(iota) != kernel(q)");
}

ExtensionPresentation ExtensionPresentation::make_split(const FGAbelianGroup& g0,
                                                        const FGAbelianGroup& g1) {
  const Index n0 = g0.generator_count(), n1 = g1.generator_count();
  const IntMat& p0 = g0.presentation();
  const IntMat& p1 = g1.presentation();
  IntMat pres = IntMat::Zero(p0.rows() + p1.rows(), n0 + n1);
  for (Index i = 0; i < p0.rows(); ++i)
    for (Index j = 0; j < n0; ++j) pres(i, j) = p0(i, j);
  for (Index i = 0; i < p1.rows(); ++i)
    for (Index j = 0; j < n1; ++j) pres(p0.rows() + i, n0 + j) = p1(i, j);
  FGAbelianGroup e(pres);
  IntMat im = IntMat::Zero(n0 + n1, n0);
  for (Index i = 0; i < n0; ++i) im(i, i) = Int(1);
  IntMat qm = IntMat::Zero(n1, n0 + n1);
  for (Index i = 0; i < n1; ++i) qm(i, n0 + i) = Int(1);
  return ExtensionPresentation(g0, e, g1, GroupHom(g0, e, im), GroupHom(e, g1, qm));
}

SplitResult extension_splits(const ExtensionPresentation& p) {
  const Index ne = p.e.generator_count(), n1 = p.g1.generator_count();
  const IntMat& re = p.e.relation_lattice();
  const IntMat& r1 = p.g1.relation_lattice();
  MatrixEquationSystem sys;
  int s = sys.add_unknown(ne, n1);
  int w_rel = sys.add_unknown(re.cols(), r1.cols());
  int w_q = sys.add_unknown(r1.cols(), n1);
  // q·S - r1·Wq = I
  sys.add_equation({{p.q.matrix(), s, IntMat::Identity(n1, n1)},
                    {IntMat(-r1), w_q, IntMat::Identity(n1, n1)}},
                   IntMat::Identity(n1, n1));
  // S·r1 - re·Wrel = 0  (well-definedness of the section)
  sys.add_equation({{IntMat::Identity(ne, ne), s, r1},
                    {IntMat(-re), w_rel, IntMat::Identity(r1.cols(), r1.cols())}},
                   IntMat::Zero(ne, r1.cols()));
  auto sol = sys.solve();
  SplitResult out;
  if (!sol) return out;
  out.splits = true;
  GroupHom section(p.g1, p.e, (*sol)[0]);
  if (!p.q.compose(section).equals(GroupHom::identity(p.g1)))
    throw Error("extension_splits: internal check failed");
  out.section = section;
  return out;
}

namespace {

/// Core of the Baer sum: pullback over q = q', quotient by the antidiagonal
/// copy of g0.  Returns the new presentation plus the basis P expressing new
/// generators inside ℤ^{ne_x + ne_y}.
struct BaerCore {
  ExtensionPresentation pres;
  IntMat p;  // (ne_x + ne_y) x new_gens
};

BaerCore baer_core(const ExtensionPresentation& x, const ExtensionPresentation& y) {
  if (!same_group_data(x.g1, y.g1))
    throw ValidationError("baer_sum: quotient groups differ");
  if (!same_group_data(x.g0, y.g0))
    throw ValidationError("baer_sum: kernel groups differ");
  const Index nex = x.e.generator_count(), ney = y.e.generator_count();
  const Index n0 = x.g0.generator_count();
  const IntMat& r1 = x.g1.relation_lattice();

  // S = { (a,b) : q(a) = q'(b) in g1 } as a sublattice of ℤ^{nex+ney}
  IntMat big = hstack(hstack(x.q.matrix(), IntMat(-y.q.matrix())), IntMat(-r1));
  IntMat kb = kernel_basis(big);
  IntMat p = top_rows(kb, nex + ney);

  // relations: e-relations on both legs plus the antidiagonal (iota c, -iota' c)
  IntMat rel_both = IntMat::Zero(nex + ney, x.e.relation_lattice().cols() +
                                                y.e.relation_lattice().cols() + n0);
  {
    const IntMat& rex = x.e.relation_lattice();
    const IntMat& rey = y.e.relation_lattice();
    for (Index j = 0; j < rex.cols(); ++j)
      for (Index i = 0; i < nex; ++i) rel_both(i, j) = rex(i, j);
    for (Index j = 0; j < rey.cols(); ++j)
      for (Index i = 0; i < ney; ++i) rel_both(nex + i, rex.cols() + j) = rey(i, j);
    for (Index c = 0; c < n0; ++c) {
      for (Index i = 0; i < nex; ++i)
        rel_both(i, rex.cols() + rey.cols() + c) = x.iota.matrix()(i, c);
      for (Index i = 0; i < ney; ++i)
        rel_both(nex + i, rex.cols() + rey.cols() + c) = -y.iota.matrix()(i, c);
    }
  }
  FGAbelianGroup e_sum(IntMat(coordinate_relations(p, rel_both).transpose()));

  // iota'' c = class of (iota c, 0); its P-coordinates exist and are unique
  IntMat tgt = vstack(x.iota.matrix(), IntMat::Zero(ney, n0));
  auto im = solve_linear_mat(p, tgt);
  if (!im) throw Error("baer_sum: inclusion does not land in the pullback lattice");
  IntMat qm = x.q.matrix() * top_rows(p, nex);

  ExtensionPresentation pres(x.g0, e_sum, x.g1, GroupHom(x.g0, e_sum, *im),
                             GroupHom(e_sum, x.g1, qm));
  return BaerCore{std::move(pres), std::move(p)};
}

}  // namespace

ExtensionPresentation baer_sum_presentation(const ExtensionPresentation& x,
                                            const ExtensionPresentation& y) {
  return baer_core(x, y).pres;
}

EquivalenceResult extensions_equivalent(const ExtensionPresentation& x,
                                        const ExtensionPresentation& y) {
  EquivalenceResult out;
  if (!same_group_data(x.g1, y.g1) || !same_group_data(x.g0, y.g0)) return out;
  const Index nex = x.e.generator_count(), ney = y.e.generator_count();
  const Index n0 = x.g0.generator_count();
  const IntMat& rex = x.e.relation_lattice();
  const IntMat& rey = y.e.relation_lattice();
  const IntMat& r1 = x.g1.relation_lattice();
  MatrixEquationSystem sys;
  int phi = sys.add_unknown(ney, nex);
  int w1 = sys.add_unknown(rey.cols(), n0);
  int w2 = sys.add_unknown(r1.cols(), nex);
  int w3 = sys.add_unknown(rey.cols(), rex.cols());
  // phi·iota_x - rey·W1 = iota_y
  sys.add_equation({{IntMat::Identity(ney, ney), phi, x.iota.matrix()},
                    {IntMat(-rey), w1, IntMat::Identity(n0, n0)}},
                   y.iota.matrix());
  // q_y·phi - r1·W2 = q_x
  sys.add_equation({{y.q.matrix(), phi, IntMat::Identity(nex, nex)},
                    {IntMat(-r1), w2, IntMat::Identity(nex, nex)}},
                   x.q.matrix());
  // phi·rex - rey·W3 = 0  (well-definedness)
  sys.add_equation({{IntMat::Identity(ney, ney), phi, rex},
                    {IntMat(-rey), w3, IntMat::Identity(rex.cols(), rex.cols())}},
                   IntMat::Zero(ney, rex.cols()));
  auto sol = sys.solve();
  if (!sol) return out;
  GroupHom cert(x.e, y.e, (*sol)[0]);
  if (!cert.is_isomorphism())
    throw Error("extensions_equivalent: five-lemma certificate failed");
  out.equivalent = true;
  out.phi = cert;
  return out;
}

ExtensionPresentation make_ext_representative(const ExtGroup& eg, std::size_t gen_index,
                                              const Int& c) {
  if (gen_index >= eg.generators.size())
    throw ShapeError("make_ext_representative: generator index out of range");
  const auto& gen = eg.generators[gen_index];
  const FGAbelianGroup& sub = eg.target;    // G0 side
  const FGAbelianGroup& quot = eg.source;   // G1 side
  const Index m0 = sub.invariant_count();
  const Index m1 = quot.invariant_count();
  const auto& sub_mod = sub.coordinate_moduli();
  const auto& quot_mod = quot.coordinate_moduli();

  // generators of e: canonical gens of sub (0..m0-1) then of quot (m0..m0+m1-1)
  std::vector<IntVec> rel_rows;
  for (Index k = 0; k < m0; ++k) {
    if (sub_mod[static_cast<std::size_t>(k)].is_zero()) continue;
    IntVec r = IntVec::Zero(m0 + m1);
    r(k) = sub_mod[static_cast<std::size_t>(k)];
    rel_rows.push_back(r);
  }
  const Index twist_target =
      gen.target_is_free ? static_cast<Index>(sub.torsion().size()) + gen.target_invariant
                         : gen.target_invariant;
  for (Index k = 0; k < m1; ++k) {
    if (quot_mod[static_cast<std::size_t>(k)].is_zero()) continue;
    IntVec r = IntVec::Zero(m0 + m1);
    r(m0 + k) = quot_mod[static_cast<std::size_t>(k)];
    if (k == gen.source_torsion) r(twist_target) = -c;
    rel_rows.push_back(r);
  }
  IntMat pres(static_cast<Index>(rel_rows.size()), m0 + m1);
  for (Index i = 0; i < pres.rows(); ++i)
    pres.row(i) = rel_rows[static_cast<std::size_t>(i)].transpose();
  FGAbelianGroup e(pres);

  IntMat inc = IntMat::Zero(m0 + m1, m0);
  for (Index i = 0; i < m0; ++i) inc(i, i) = Int(1);
  IntMat im = inc * sub.to_canonical_matrix();
  IntMat qm = IntMat::Zero(quot.generator_count(), m0 + m1);
  for (Index k = 0; k < m1; ++k) qm.col(m0 + k) = quot.from_canonical_matrix().col(k);
  return ExtensionPresentation(sub, e, quot, GroupHom(sub, e, im), GroupHom(e, quot, qm));
}

// ---------------------------------------------------------------------------
// Ambient and OrderExtension
// ---------------------------------------------------------------------------

Ambient::Ambient(InductiveSystem system, Index class_stage, Index eval_stage)
    : system_(std::move(system)), class_stage_(class_stage), eval_stage_(eval_stage) {
  if (class_stage < 0 || eval_stage < class_stage || eval_stage >= system_.stage_count())
    throw ShapeError("Ambient: stages out of range");
  IntMat chi = system_.compose0(class_stage_, eval_stage_);
  dmat_ = RatMat(chi.rows(), chi.cols());
  for (Index i = 0; i < chi.rows(); ++i)
    for (Index j = 0; j < chi.cols(); ++j)
      dmat_(i, j) = Rat(chi(i, j), system_.unit_entry(eval_stage_, i));
  ker_d_ = kernel_basis(chi);
}

bool Ambient::same_ambient(const Ambient& other) const {
  return class_stage_ == other.class_stage_ && eval_stage_ == other.eval_stage_ &&
         same_system(system_, other.system_);
}

OrderExtension::OrderExtension(Ambient ambient, ExtensionPresentation ext, RatMat rmap)
    : ambient_(std::move(ambient)), ext_(std::move(ext)), rmap_(std::move(rmap)) {
  if (ext_.g0.generator_count() != ambient_.g0_rank() || !ext_.g0.torsion().empty() ||
      ext_.g0.free_rank() != ambient_.g0_rank())
    throw ValidationError("OrderExtension: g0 must be the free ambient lattice");
  if (rmap_.rows() != ambient_.aff_dim() || rmap_.cols() != ext_.e.generator_count())
    throw ShapeError("OrderExtension: rmap shape mismatch");
  if (!is_zero(RatMat(rmap_ * to_rational(ext_.e.relation_lattice()))))
    throw ValidationError("OrderExtension: rotation does not kill the e relations");
  if (!is_zero(RatMat(rmap_ * to_rational(ext_.iota.matrix()) - ambient_.d_matrix())))
    throw ValidationError("OrderExtension: R∘iota differs from D");
}

RatVec OrderExtension::rotation_of(const IntVec& x) const {
  if (x.size() != ext_.e.generator_count())
    throw ShapeError("OrderExtension::rotation_of: wrong length");
  return rmap_ * to_rational(IntMat(x));
}

OrderExtension make_trivial(const Ambient& amb, const FGAbelianGroup& g1) {
  ExtensionPresentation pres = ExtensionPresentation::make_split(amb.g0(), g1);
  RatMat rmap = hstack_rat(amb.d_matrix(),
                           RatMat::Zero(amb.aff_dim(), g1.generator_count()));
  return OrderExtension(amb, pres, rmap);
}

OrderExtension make_split_with_rotation(const Ambient& amb, const FGAbelianGroup& g1,
                                        const RatMat& phi) {
  if (phi.rows() != amb.aff_dim() || phi.cols() != g1.generator_count())
    throw ShapeError("make_split_with_rotation: phi shape mismatch");
  ExtensionPresentation pres = ExtensionPresentation::make_split(amb.g0(), g1);
  RatMat rmap = hstack_rat(amb.d_matrix(), phi);
  return OrderExtension(amb, pres, rmap);
}

OrderExtension baer_sum(const OrderExtension& x, const OrderExtension& y) {
  if (!x.ambient().same_ambient(y.ambient()))
    throw ValidationError("baer_sum: ambients differ");
  BaerCore core = baer_core(x.ext(), y.ext());
  RatMat rboth = hstack_rat(x.rmap(), y.rmap());
  RatMat rsum = rboth * to_rational(core.p);
  return OrderExtension(x.ambient(), core.pres, rsum);
}

OrderExtension oext_inverse(const OrderExtension& x) {
  const ExtensionPresentation& p = x.ext();
  ExtensionPresentation flipped(p.g0, p.e, p.g1, p.iota.negate(), p.q);
  return OrderExtension(x.ambient(), flipped, RatMat(-x.rmap()));
}

IsoResult oext_is_isomorphic(const OrderExtension& x, const OrderExtension& y) {
  if (!x.ambient().same_ambient(y.ambient()))
    throw ValidationError("oext_is_isomorphic: ambients differ");
  IsoResult out;
  if (!same_group_data(x.ext().g1, y.ext().g1)) return out;
  const Index nex = x.ext().e.generator_count(), ney = y.ext().e.generator_count();
  const Index n0 = x.ext().g0.generator_count();
  const IntMat& rex = x.ext().e.relation_lattice();
  const IntMat& rey = y.ext().e.relation_lattice();
  const IntMat& r1 = x.ext().g1.relation_lattice();

  Int den = lcm(common_denominator(x.rmap()), common_denominator(y.rmap()));
  IntMat rx = cleared(x.rmap(), den);
  IntMat ry = cleared(y.rmap(), den);

  MatrixEquationSystem sys;
  int phi = sys.add_unknown(ney, nex);
  int w1 = sys.add_unknown(rey.cols(), n0);
  int w2 = sys.add_unknown(r1.cols(), nex);
  int w3 = sys.add_unknown(rey.cols(), rex.cols());
  sys.add_equation({{IntMat::Identity(ney, ney), phi, x.ext().iota.matrix()},
                    {IntMat(-rey), w1, IntMat::Identity(n0, n0)}},
                   y.ext().iota.matrix());
  sys.add_equation({{y.ext().q.matrix(), phi, IntMat::Identity(nex, nex)},
                    {IntMat(-r1), w2, IntMat::Identity(nex, nex)}},
                   x.ext().q.matrix());
  sys.add_equation({{IntMat::Identity(ney, ney), phi, rex},
                    {IntMat(-rey), w3, IntMat::Identity(rex.cols(), rex.cols())}},
                   IntMat::Zero(ney, rex.cols()));
  // R = R'∘phi, cleared of denominators
  sys.add_equation({{ry, phi, IntMat::Identity(nex, nex)}}, rx);
  auto sol = sys.solve();
  if (!sol) return out;
  GroupHom cert(x.ext().e, y.ext().e, (*sol)[0]);
  if (!cert.is_isomorphism())
    throw Error("oext_is_isomorphic: five-lemma certificate failed");
  out.isomorphic = true;
  out.phi = cert;
  return out;
}

bool ranges_match(const OrderExtension& x) {
  Int den = lcm(common_denominator(x.rmap()), common_denominator(x.ambient().d_matrix()));
  IntMat r = cleared(x.rmap(), den);
  IntMat d = cleared(x.ambient().d_matrix(), den);
  return same_lattice(r, d);
}

ExtensionPresentation kernel_sequence(const OrderExtension& x) {
  if (!ranges_match(x)) throw RangeMismatch("kernel_sequence: Range R != Range D");
  Int den = common_denominator(x.rmap());
  IntMat rc = cleared(x.rmap(), den);
  IntMat kr = kernel_basis(rc);  // saturated: contains every integer kernel vector
  FGAbelianGroup ker_r(
      IntMat(coordinate_relations(kr, x.ext().e.relation_lattice()).transpose()));
  const IntMat& kd = x.ambient().ker_d_basis();
  FGAbelianGroup ker_d = FGAbelianGroup::free_group(kd.cols());
  auto inc = solve_linear_mat(kr, IntMat(x.ext().iota.matrix() * kd));
  if (!inc) throw Error("kernel_sequence: iota does not carry ker D into ker R");
  IntMat qm = x.ext().q.matrix() * kr;
  return ExtensionPresentation(ker_d, ker_r, x.ext().g1, GroupHom(ker_d, ker_r, *inc),
                               GroupHom(ker_r, x.ext().g1, qm));
}

TrivialityReport oext_is_trivial(const OrderExtension& x) {
  TrivialityReport rep;
  SplitResult a = extension_splits(x.ext());
  rep.underlying_splits = a.splits;
  rep.section = a.section;
  rep.range_matches = ranges_match(x);
  if (rep.range_matches) {
    ExtensionPresentation ks = kernel_sequence(x);
    SplitResult c = extension_splits(ks);
    rep.kernel_splits = c.splits;
    rep.kernel_section = c.section;
  }
  rep.trivial = rep.underlying_splits && rep.range_matches &&
                rep.kernel_splits.has_value() && *rep.kernel_splits;
  return rep;
}

OrderExtension reevaluate(const OrderExtension& x, Index new_eval_stage) {
  const Ambient& amb = x.ambient();
  if (new_eval_stage < amb.eval_stage())
    throw ShapeError("reevaluate: new evaluation stage must be at least the current one");
  const InductiveSystem& sys = amb.system();
  const Index t = amb.eval_stage();
  IntMat chi = sys.compose0(t, new_eval_stage);
  RatMat w(chi.rows(), chi.cols());
  for (Index i = 0; i < chi.rows(); ++i)
    for (Index j = 0; j < chi.cols(); ++j)
      w(i, j) = Rat(chi(i, j) * sys.unit_entry(t, j), sys.unit_entry(new_eval_stage, i));
  Ambient amb2(sys, amb.class_stage(), new_eval_stage);
  return OrderExtension(amb2, x.ext(), RatMat(w * x.rmap()));
}

}  // namespace okt
