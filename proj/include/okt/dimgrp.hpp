#pragma once

// Inductive systems of integer lattices with positive connecting maps: the
// K-group model for approximately circle-shaped algebras.  Carries stage
// units, traces, the dimension map D into affine functions on traces, and a
// search that approximates affine targets from within Range D.

#include <okt/group.hpp>

#include <optional>
#include <vector>

namespace okt {

/// Lattice element at a fixed stage.  The parity (K0 vs K1) is not stored;
/// operations take it as an argument.
struct StageVector {
  Index stage = 0;
  IntVec coords;
};

/// Rational function on the extreme traces of a fixed stage.
struct AffElement {
  Index stage = 0;
  RatVec values;
};

/// Stages ℤ^{k_0} -> ℤ^{k_1} -> ... with strictly positive parity-0 maps,
/// arbitrary parity-1 maps of the same shapes, and a strictly positive unit
/// vector propagated by unit_{n+1} = map0_n · unit_n.
class InductiveSystem {
 public:
  InductiveSystem(std::vector<IntMat> maps0, std::vector<IntMat> maps1, IntVec unit0);

  Index stage_count() const { return static_cast<Index>(units_.size()); }
  Index map_count() const { return static_cast<Index>(maps0_.size()); }
  Index rank(Index stage) const;
  const IntMat& map0(Index n) const;
  const IntMat& map1(Index n) const;
  const std::vector<IntMat>& maps0() const { return maps0_; }
  const std::vector<IntMat>& maps1() const { return maps1_; }

  /// Product map0(to-1) ··· map0(from); identity when from == to.
  IntMat compose0(Index from, Index to) const;
  IntMat compose1(Index from, Index to) const;

  /// Unit vector [n,·] at a stage (all entries >= 1).
  const IntVec& unit(Index stage) const;
  Int unit_entry(Index stage, Index i) const;
  /// ℓ_n = max_j [n,j].
  Int max_unit(Index stage) const;

  /// Same maps cycled end-to-start `copies` times (needs rank(last) == rank(0)).
  InductiveSystem repeated(Index copies) const;

 private:
  std::vector<IntMat> maps0_, maps1_;
  std::vector<IntVec> units_;
};

/// Apply the parity maps from x.stage up to target_stage, exactly.
StageVector push_forward(const StageVector& x, const InductiveSystem& sys,
                         Index target_stage, int parity);

/// Precompose with the trace restriction: values at stage m+1 extreme traces
/// are the convex combinations with weights map0(i,j)·[m,j]/[m+1,i].
AffElement push_forward(const AffElement& a, const InductiveSystem& sys, Index target_stage);

/// Finite-stage trace: nonnegative weights with sum_j w_j·[m,j] = 1.  The
/// trace of a K0 class x at this stage is sum_j w_j·x_j.
class TraceFunctional {
 public:
  TraceFunctional(const InductiveSystem& sys, Index stage, RatVec weights);

  Index stage() const { return stage_; }
  const RatVec& weights() const { return weights_; }

  /// Trace of the K0 class x (pushed to this trace's stage first).
  Rat evaluate_class(const InductiveSystem& sys, const StageVector& x) const;
  /// Value of an affine-function element under this trace.
  Rat evaluate_aff(const InductiveSystem& sys, const AffElement& a) const;

 private:
  Index stage_;
  RatVec weights_;
};

/// The j-th extreme trace at a stage (weight 1/[m,j] on block j).
TraceFunctional make_extreme_trace(const InductiveSystem& sys, Index stage, Index j);

/// D(a) as values at the eval_stage extreme traces: coordinate j is
/// (pushed a)_j / [eval_stage, j].
AffElement dimension_map(const StageVector& a, const InductiveSystem& sys, Index eval_stage);

/// Search stages s = start, start+1, ..., start + search_depth (capped by the
/// system depth) for a K0 class xi with |target - D(xi)| < bound
/// coordinatewise at stage s; per coordinate the optimal candidate is the
/// nearest lattice point target_j·[s,j] rounded.  Meeting the bound at stage
/// s certifies it at all deeper stages because pushforward takes convex
/// combinations.  Returns nullopt when every searched stage misses.
std::optional<StageVector> approx_in_range_D(const AffElement& target,
                                             const InductiveSystem& sys,
                                             const AffElement& bound,
                                             Index search_depth);

/// Telescope a system (composing consecutive maps) until every output step n
/// satisfies map0(i,j) >= 2^{n+1} · max(|map1(i,j)|, 1); produces `depth`
/// output maps.  Throws ValidationError when the seed is too shallow or its
/// parity-1 growth keeps pace with parity 0 forever.
InductiveSystem make_admissible_system(const InductiveSystem& seed, Index depth);

/// Does the growth condition above hold for every step of the system?
bool is_admissible(const InductiveSystem& sys);

}  // namespace okt
