#pragma once

// Finitely generated abelian groups presented by integer relation matrices,
// homomorphisms between them, and the Hom/Ext group constructions.

#include <okt/snf.hpp>

#include <string>
#include <vector>

namespace okt {

/// Group ℤ^g / L where g is the generator count and L is the lattice spanned
/// by the presentation's relation rows.  Elements are integer vectors of
/// length g, two vectors naming the same element when they differ by L.
class FGAbelianGroup {
 public:
  /// Trivial group (no generators).
  FGAbelianGroup();

  /// presentation: each ROW is one relation among the COLUMN generators,
  /// i.e. the group is ℤ^cols / image(presentationᵀ).
  explicit FGAbelianGroup(const IntMat& presentation);

  static FGAbelianGroup free_group(Index rank);
  /// Cyclic of the given order; order 0 means ℤ.
  static FGAbelianGroup cyclic(const Int& order);
  static FGAbelianGroup from_invariants(const std::vector<Int>& torsion, Index free_rank);
  static FGAbelianGroup direct_sum(const FGAbelianGroup& a, const FGAbelianGroup& b);

  Index generator_count() const { return gens_; }
  const IntMat& presentation() const { return pres_; }
  /// Columns span the relation lattice in ℤ^gens (the transpose view).
  const IntMat& relation_lattice() const { return rel_; }

  /// Invariant factors, each >= 2, in divisibility order.
  const std::vector<Int>& torsion() const { return torsion_; }
  Index free_rank() const { return free_rank_; }
  /// Number of canonical coordinates (torsion count + free rank).
  Index invariant_count() const { return static_cast<Index>(torsion_.size()) + free_rank_; }

  bool is_trivial() const { return torsion_.empty() && free_rank_ == 0; }
  bool is_finite() const { return free_rank_ == 0; }
  /// Group order; 0 when infinite.
  Int order() const;
  /// Isomorphism test by comparing normal forms.
  bool same_invariants(const FGAbelianGroup& other) const;
  /// Group presented directly by its normal form (diagonal relations).
  FGAbelianGroup normal_form_group() const;

  /// Canonical coordinates of an element: torsion entries reduced into
  /// [0, d_i), then free entries.  Equal elements get equal coordinates.
  IntVec canonical_coordinates(const IntVec& x) const;
  /// A generator-coordinate representative with the given canonical
  /// coordinates; inverse of canonical_coordinates up to the relations.
  IntVec element_from_canonical(const IntVec& w) const;
  /// Modulus of each canonical coordinate (d_i for torsion, 0 for free).
  const std::vector<Int>& coordinate_moduli() const { return moduli_; }
  /// invariant_count x gens matrix computing raw canonical coordinates.
  const IntMat& to_canonical_matrix() const { return to_can_; }
  /// gens x invariant_count section of to_canonical_matrix.
  const IntMat& from_canonical_matrix() const { return from_can_; }

  bool element_is_zero(const IntVec& x) const;
  bool elements_equal(const IntVec& x, const IntVec& y) const;
  /// Canonical representative of the class of x.
  IntVec reduce(const IntVec& x) const;
  /// Order of the class of x; 0 when infinite.
  Int element_order(const IntVec& x) const;

  /// Human-readable normal form, e.g. "Z/2 + Z/6 + Z^2" or "0".
  std::string describe() const;

 private:
  void normalize();

  Index gens_ = 0;
  IntMat pres_;  // rows are relations
  IntMat rel_;   // = pres_ᵀ, columns span the relation lattice
  std::vector<Int> torsion_;
  Index free_rank_ = 0;
  std::vector<Int> moduli_;  // per canonical coordinate
  IntMat to_can_;            // invariant_count x gens
  IntMat from_can_;          // gens x invariant_count
};

/// Homomorphism between presented groups, stored as an integer matrix on the
/// chosen generators (target-gens x source-gens).  Construction checks that
/// source relations land in the target's relation lattice.
class GroupHom {
 public:
  GroupHom(FGAbelianGroup source, FGAbelianGroup target, IntMat matrix);

  static GroupHom identity(const FGAbelianGroup& g);
  static GroupHom zero(const FGAbelianGroup& source, const FGAbelianGroup& target);

  const FGAbelianGroup& source() const { return source_; }
  const FGAbelianGroup& target() const { return target_; }
  const IntMat& matrix() const { return matrix_; }

  IntVec apply(const IntVec& x) const;
  /// this ∘ inner (inner runs first).
  GroupHom compose(const GroupHom& inner) const;
  GroupHom negate() const;
  GroupHom add(const GroupHom& other) const;
  GroupHom sub(const GroupHom& other) const;
  GroupHom scale(const Int& c) const;

  /// Same map on the same presentations (matrices differ by relations).
  bool equals(const GroupHom& other) const;
  bool is_zero_hom() const;
  bool is_injective() const;
  bool is_surjective() const;
  bool is_isomorphism() const;

  /// Columns span { x in ℤ^src-gens : F x lies in the target's relation
  /// lattice }; contains the source relations, and the hom is injective
  /// exactly when this lattice equals the source relation lattice.
  IntMat kernel_lattice() const;
  /// Columns span image(F) + target relations inside ℤ^tgt-gens.
  IntMat image_lattice() const;

 private:
  FGAbelianGroup source_, target_;
  IntMat matrix_;
};

/// Do two column families span the same sublattice of ℤ^n?
bool same_lattice(const IntMat& a, const IntMat& b);

/// Hom(G, H) with an explicit generating family of homomorphisms, one per
/// presentation generator of `group`.
struct HomGroup {
  FGAbelianGroup group;  // presented with one generator per basis hom
  FGAbelianGroup source, target;
  std::vector<GroupHom> basis;
  /// Moduli of the basis generators (0 for infinite order), aligned with
  /// `basis` and with the presentation of `group`.
  std::vector<Int> orders;

  GroupHom from_coordinates(const IntVec& c) const;
  /// Coordinates of f in the basis, torsion entries reduced.
  IntVec coordinates_of(const GroupHom& f) const;
};

HomGroup hom_group(const FGAbelianGroup& g, const FGAbelianGroup& h);

/// Ext(source, target) together with the bookkeeping needed to hand each
/// generator a representative extension (built in the extension module).
struct ExtGroup {
  struct Generator {
    Index source_torsion;  // index into source.torsion()
    bool target_is_free;
    Index target_invariant;  // torsion index, or free index when target_is_free
    Int order;               // order of this generator in the Ext group
  };

  FGAbelianGroup group;  // presented with one generator per entry of `generators`
  FGAbelianGroup source, target;
  std::vector<Generator> generators;
};

ExtGroup ext_group(const FGAbelianGroup& source, const FGAbelianGroup& target);

}  // namespace okt
