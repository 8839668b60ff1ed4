#pragma once

// Stage cocycles and cochains over an inductive system: the gluing data for
// truncated inverse-limit extensions, the coboundary solver
// psi_n = h_n - h_{n+1}∘map1_n, and the assembly of a glued truncation into
// an order extension with zero rotation on the section generators.

#include <okt/orderext.hpp>

#include <optional>
#include <vector>

namespace okt {

/// Stage-indexed integer maps h_n.  For the primary chain, h[n] maps the
/// stage-n lattice into class-stage K0 coordinates with values in ker D; for
/// the mirror chain, values are eval-stage K1 coordinates (unconstrained).
struct CochainSequence {
  Ambient ambient;
  std::vector<IntMat> h;

  CochainSequence(Ambient amb, std::vector<IntMat> h_);
};

/// Values of the gluing maps on the scaled stage classes [z_nj] = [n,j]·e_j.
/// psi0[n] is g0_rank x rank(n): column j is the ker-D value on [z_nj]
/// (validated to satisfy D·col = 0 exactly).  The induced map on the basis
/// e_j exists iff [n,j] divides the column — that divisibility is exactly
/// what the solver and the assembly probe, so it is not required here.
///
/// psi1[n] is the mirror parity, aff_dim x rank(n): K1-side values on the
/// unscaled K0 basis classes.  The mirror is the symmetric analogue of the
/// primary chain with the parities swapped; it carries no kernel constraint
/// and no scaling.
struct CocycleSequence {
  Ambient ambient;
  std::vector<IntMat> psi0;
  std::vector<IntMat> psi1;  // may be empty (mirror side unused)

  CocycleSequence(Ambient amb, std::vector<IntMat> psi0_,
                  std::vector<IntMat> psi1_ = {});
};

/// The coboundary of a known cochain, on scaled classes:
/// psi0[n] = (h[n] - h[n+1]·map1(n)) · diag([n,j]).  h needs depth+1 entries
/// to produce depth cocycle stages.
CocycleSequence cocycle_from_cochain(const CochainSequence& h);

/// Semidecision result: found() carries a cochain verifying the defining
/// identity exactly; otherwise (fail_stage, fail_index) locates the
/// divisibility obstruction [n,j] ∤ psi-column.  Not-found is relative to
/// the requested depth only — no claim about deeper truncations.
struct SolveCocycleResult {
  std::optional<CochainSequence> h;
  Index fail_stage = -1;
  Index fail_index = -1;

  bool found() const { return h.has_value(); }
};

/// Back-substitution with h_depth = 0: h_n = h_{n+1}·map1(n) + psi0[n]/[n,j]
/// column-wise, n = depth-1, ..., 0.  The triangular shape makes the
/// divisibility checks exhaustive: no other choice of h_depth can repair a
/// failure, so not-found is definitive at this depth.  The returned cochain
/// re-verifies psi0[n] = (h_n - h_{n+1}·map1(n))·diag([n,j]) exactly.
SolveCocycleResult solve_cocycle(const CocycleSequence& psi, Index depth);

/// Mirror-parity solve: psi1[n] = h_n - h_{n+1}·map0(n) on unscaled classes.
/// Without the [n,j] scaling the back-substitution is unconditional, so every
/// mirror sequence solves at every available depth.
CochainSequence solve_cocycle_mirror(const CocycleSequence& psi, Index depth);

/// Glue the stage-wise split extensions 0 -> Z^{g0} -> Z^{g0} ⊕ Z^{k_n} ->
/// Z^{k_n} -> 0 along psi_n(a, b) = (a + psi0_n(b), map1_n(b)) and truncate
/// at `depth` stages (depth >= 2).  Generators of e are the g0 basis followed
/// by the stage section generators; each gluing relation
/// [n,j]·(a_nj - map1-image) = psi-column is stored primitively (divided by
/// its content).  For class-consistent data this is the exact truncation and
/// the result is split; a divisibility obstruction leaves torsion binding the
/// sections to the sub — the recorded nontriviality.  g1 is coker(iota); the
/// rotation is D on the sub and zero on every section generator, so the
/// glued ker-D extension is recovered as kernel_sequence() of the result.
OrderExtension assemble_stage_extension(const CocycleSequence& psi, Index depth);

}  // namespace okt
