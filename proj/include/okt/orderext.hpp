#pragma once

// Short exact sequences of f.g. abelian groups, and order extensions: an
// extension of G1 by G0 carrying rotation data R with R∘ι = D for the
// dimension map D of an ambient inductive system.  Implements the class
// arithmetic (sum, inverse), isomorphism and triviality decisions, and the
// kernel sequence 0 -> ker D -> ker R -> G1 -> 0.

#include <okt/dimgrp.hpp>
#include <okt/group.hpp>

#include <optional>

namespace okt {

/// 0 -> g0 --iota--> e --q--> g1 -> 0 with exactness validated on
/// construction (iota injective, q surjective, image iota = kernel q).
struct ExtensionPresentation {
  FGAbelianGroup g0, e, g1;
  GroupHom iota, q;

  ExtensionPresentation(FGAbelianGroup g0_, FGAbelianGroup e_, FGAbelianGroup g1_,
                        GroupHom iota_, GroupHom q_);

  /// Split presentation on e = g0 ⊕ g1.
  static ExtensionPresentation make_split(const FGAbelianGroup& g0,
                                          const FGAbelianGroup& g1);
};

struct SplitResult {
  bool splits = false;
  /// Section s: g1 -> e with q∘s = id, present when splits.
  std::optional<GroupHom> section;
};

/// Decide integrally whether q admits a section.  The search is a single
/// integer linear solve over section + slack unknowns, so it is total.
SplitResult extension_splits(const ExtensionPresentation& p);

/// Baer sum of two extensions of g1 by g0 (no rotation data).
ExtensionPresentation baer_sum_presentation(const ExtensionPresentation& x,
                                            const ExtensionPresentation& y);

/// Equivalence of extensions: an isomorphism e -> e' commuting with the
/// identity on both ends.  Total decision; certificate on success.
struct EquivalenceResult {
  bool equivalent = false;
  std::optional<GroupHom> phi;
};
EquivalenceResult extensions_equivalent(const ExtensionPresentation& x,
                                        const ExtensionPresentation& y);

/// Representative extension for c times the k-th generator of an Ext group:
/// gens of e are the canonical generators of target then source, with the
/// generator's source relation twisted by -c into the target coordinate.
ExtensionPresentation make_ext_representative(const ExtGroup& eg, std::size_t gen_index,
                                              const Int& c = Int(1));

/// Shared context for order extensions: G0 is the free lattice at
/// class_stage, and the dimension map D takes values at the extreme traces
/// of eval_stage.
class Ambient {
 public:
  Ambient(InductiveSystem system, Index class_stage, Index eval_stage);

  const InductiveSystem& system() const { return system_; }
  Index class_stage() const { return class_stage_; }
  Index eval_stage() const { return eval_stage_; }
  Index g0_rank() const { return system_.rank(class_stage_); }
  Index aff_dim() const { return system_.rank(eval_stage_); }

  FGAbelianGroup g0() const { return FGAbelianGroup::free_group(g0_rank()); }
  /// D as an aff_dim x g0_rank rational matrix: row j is scaled by 1/[T,j].
  const RatMat& d_matrix() const { return dmat_; }
  /// Columns span ker D inside ℤ^{g0_rank} (a saturated lattice).
  const IntMat& ker_d_basis() const { return ker_d_; }

  bool same_ambient(const Ambient& other) const;

 private:
  InductiveSystem system_;
  Index class_stage_, eval_stage_;
  RatMat dmat_;
  IntMat ker_d_;
};

/// Extension with rotation data: rmap columns are the R-values of the e
/// generators at the ambient's evaluation stage.  Validated: rmap kills the
/// relations of e exactly, and rmap ∘ iota = D.
class OrderExtension {
 public:
  OrderExtension(Ambient ambient, ExtensionPresentation ext, RatMat rmap);

  const Ambient& ambient() const { return ambient_; }
  const ExtensionPresentation& ext() const { return ext_; }
  const RatMat& rmap() const { return rmap_; }

  /// R-value of an element of e.
  RatVec rotation_of(const IntVec& x) const;

 private:
  Ambient ambient_;
  ExtensionPresentation ext_;
  RatMat rmap_;
};

/// (G0 ⊕ g1, R(a, b) = D(a)): the identity class.
OrderExtension make_trivial(const Ambient& amb, const FGAbelianGroup& g1);

/// Split extension with R(a, b) = D(a) + phi(b); phi is aff_dim x g1-gens
/// and must kill the g1 relations.
OrderExtension make_split_with_rotation(const Ambient& amb, const FGAbelianGroup& g1,
                                        const RatMat& phi);

/// Pullback-over-quotient sum with R''[(x, y)] = R(x) + R'(y).
OrderExtension baer_sum(const OrderExtension& x, const OrderExtension& y);

/// Same e and q, with iota and R negated.
OrderExtension oext_inverse(const OrderExtension& x);

struct IsoResult {
  bool isomorphic = false;
  /// Certificate phi: e -> e' with phi∘iota = iota', q'∘phi = q, R = R'∘phi.
  std::optional<GroupHom> phi;
};

/// Total one-shot integer decision (no bounded search, no Undecided): the
/// commuting constraints form one linear system over ℤ, and any solution is
/// automatically an isomorphism by the five lemma.
IsoResult oext_is_isomorphic(const OrderExtension& x, const OrderExtension& y);

/// 0 -> ker D -> ker R -> G1 -> 0 (throws RangeMismatch unless
/// Range R = Range D, checked exactly on generators).
ExtensionPresentation kernel_sequence(const OrderExtension& x);

/// Does Range R equal Range D (as subgroups of the rational value space)?
bool ranges_match(const OrderExtension& x);

struct TrivialityReport {
  bool underlying_splits = false;      // (a)
  bool range_matches = false;          // (b)
  std::optional<bool> kernel_splits;   // (c); empty when (b) fails
  bool trivial = false;                // conjunction
  std::optional<GroupHom> section;        // witness for (a)
  std::optional<GroupHom> kernel_section; // witness for (c)
};

/// Evaluate the three-part triviality criterion.
TrivialityReport oext_is_trivial(const OrderExtension& x);

/// The same class with D and R pushed to a deeper evaluation stage.
OrderExtension reevaluate(const OrderExtension& x, Index new_eval_stage);

}  // namespace okt
