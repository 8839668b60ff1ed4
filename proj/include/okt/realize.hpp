#pragma once

// Realizing an approximate hom K1 -> Aff by integer stage maps h_n: the
// greedy stage-by-stage construction, the coboundary defects psi_n with their
// verified bounds, the telescoping identity relating the psi partial sums to
// the approximation defect, and the lattice-membership classifier for
// rotation values in Z + theta*Z.

#include <okt/cocycle.hpp>

#include <vector>

namespace okt {

/// Approximate hom from the K1 limit into the trace functions, sampled per
/// stage: values[n] is rank(n) x rank(n), column j holding the values of the
/// image of the stage-n basis class e_j at the stage-n extreme traces,
/// correct to `precision` per coordinate.  Consistency across stages: pushing
/// column j of values[n] forward one stage agrees with
/// values[n+1]·map1(n)·e_j within 2·precision, both being approximations of
/// the same limit function.
struct PhiSpec {
  InductiveSystem system;
  std::vector<RatMat> values;
  Rat precision;

  PhiSpec(InductiveSystem sys, std::vector<RatMat> values_, Rat precision_);
};

/// The zero hom at every stage (exact, precision 0).
PhiSpec make_phi_zero(const InductiveSystem& sys);

/// phi = D∘g for the chain map generated by g_0 at stage 0: the succeeding
/// g_{n+1} solve g_{n+1}·map1(n) = map0(n)·g_n exactly (ValidationError when
/// no integer solution exists).  Exact, precision 0.
PhiSpec make_phi_from_hom(const InductiveSystem& sys, const IntMat& g0);

/// phi constant on the stage-0 basis classes: the class of e_j goes to the
/// constant function theta0(j).  Requires the parity-1 compositions to be
/// injective so deeper basis classes resolve (rationally) in the stage-0
/// basis.  Exact, precision 0.
PhiSpec make_phi_theta(const InductiveSystem& sys, const RatVec& theta0);

/// Rank-2 system with `steps` maps sized so the stage-(n+1) rounding in
/// realize_phi always meets its bound: map0(n) = [[c, c+1], [c+1, c]] with
/// c = 2^{n+2}·max(l_n^2, 1) where l_n is the largest unit entry, and map1(n)
/// alternating unimodular matrices with entries in {-1, 0, 1}.
InductiveSystem make_default_system(Index steps);

/// Per-stage minimum slacks of the certificate inequalities, exact rationals.
/// approx_slack[n]: over the stage-n basis, the approximation bound minus the
/// achieved defect minus the declared precision (so a positive value bounds
/// the true defect strictly).  psi_slack[n]: 2^{1-n}·l_n^{-1}·(map0 product
/// from n to n+2)(i,j) minus |psi_n(i,j)|, minimized over entries.
/// growth_slack[n]: map0(n)(i,j) - 2^{n+1}·max(|map1(n)(i,j)|, 1) minimized.
struct BoundsReport {
  std::vector<Rat> approx_slack;
  std::vector<Rat> psi_slack;
  std::vector<Int> growth_slack;

  Rat min_slack() const;
  bool all_positive() const;
};

/// Stage maps h_n: Z^{k_n} -> Z^{k_{n+1}} realizing phi through D, their
/// coboundary defects psi[n] = h[n+1]·map1(n) - map0(n+1)·h[n] (a stage-n to
/// stage-(n+2) map), and the verified slack report.  When phi = D∘g exactly,
/// the pushed defects land in ker D and the scaled chain solves as a
/// kernel-valued cocycle; for approximate phi only the bounds hold, which is
/// why psi is raw stage maps rather than the kernel-valued container.
struct RealizationCertificate {
  CochainSequence h;
  std::vector<IntMat> psi;
  BoundsReport bounds_report;
};

/// Build h_0, ..., h_{depth-1} greedily: column j of h_n is the
/// approx_in_range_D rounding at stage n+1 of the pushed phi value, required
/// to sit within 2^{-n}·l_n^{-1}·D(stage-n basis class) coordinatewise.  All
/// report slacks are re-verified positive before returning.  Throws
/// DepthExhausted with the failing stage and the best achieved slack when a
/// bound cannot be met.  Requires the growth condition (is_admissible) and
/// depth <= stage_count - 2.
RealizationCertificate realize_phi(const PhiSpec& phi, Index depth);

/// Both sides of the partial telescoping identity from `stage` through the
/// last psi index K, as values at the deepest-stage extreme traces, one
/// column per stage-`stage` basis class:
///   lhs.col(j) = sum_k D(map0-product·psi_k·map1-product·e_j),
///   rhs.col(j) = pushed phi value - D(map0-product·h_stage·e_j).
/// For an uncorrupted certificate the sum telescopes exactly and the gap is a
/// single approximation defect, bounded by 2^{-(K+1)} plus the accumulated
/// precision 2·(K+2-stage)·precision.
struct TelescopeReport {
  RatMat lhs, rhs;
  Rat gap;    // max |lhs - rhs| entry
  Rat bound;  // geometric tail plus precision allowance
  bool within_bound;
};

TelescopeReport telescoping_check(const RealizationCertificate& cert,
                                  const PhiSpec& phi, Index stage);

/// The subgroup Z + theta*Z of the reals, with theta carried as an exact
/// rational surrogate of an irrational.  surrogate_error bounds the distance
/// to the intended irrational; construction requires
/// surrogate_error < 1/(100·qmax^2), the precision a qmax-deep convergent
/// decision consumes.
struct RotationAlgebraModel {
  Rat theta;
  Rat surrogate_error;
  Rat tol;
  long long qmax;

  RotationAlgebraModel(Rat theta_, Rat surrogate_error_, Rat tol_, long long qmax_);
};

/// Golden-ratio conjugate (sqrt(5)-1)/2 as the Fibonacci quotient
/// 14930352/24157817, off by less than 1e-15.
RotationAlgebraModel make_golden_model(long long qmax, const Rat& tol);

/// Closest point of {a + b·theta : |b| <= qmax} to r, as exact data:
/// residue = r - a - b·theta.
struct LatticeApproach {
  Int a;
  Int b;
  Rat residue;
};

/// Exact minimiser of |r - b·theta - a| over integers a and |b| <= qmax.
/// Splits the coefficient range into blocks sized by a best-approximation
/// denominator of theta; the sorted in-block offsets (the three-gap structure
/// of the orbit) turn each block into one binary search, so the whole range is
/// enumerated in O(sqrt(qmax)) exact rational comparisons.
LatticeApproach nearest_lattice_point(const RotationAlgebraModel& model, const Rat& r);

enum class LatticeVerdict { Trivial, NonTrivial, Undecided };

/// Verdict plus the per-component nearest approaches.  Trivial when both
/// residues are within tol; NonTrivial when some residue is at least 2·tol
/// away (clearly outside); Undecided inside the band, where the surrogate's
/// own error could flip the answer.
struct ClassifyResult {
  LatticeVerdict verdict;
  LatticeApproach first;
  LatticeApproach second;

  /// Residue pair: the witness representative for NonTrivial verdicts.
  RatVec representative() const;
};

ClassifyResult classify_rotation_algebra(const RotationAlgebraModel& model,
                                         const Rat& r1, const Rat& r2);

/// Exactness report for Hom(G1, ker D) -> Hom(G1, G0) -> Hom(G1, Aff) with
/// G0 free and D rational of shape aff_dim x rank(G0).  Every generator of
/// the middle kernel receives an explicit preimage witness in ker-D
/// coordinates; rank counting alone certifies nothing here.  The quotient
/// Hom(G1, Aff) / D∘Hom(G1, G0) is reported through aff_rank (torsion of G1
/// dies in the divisible target) and the modulus columns vec(D·F) over the
/// Hom(G1, G0) generators F.
struct KerQReport {
  bool first_map_injective;
  bool middle_exact;
  std::vector<IntMat> kernel_generators;  // homs G1 -> G0 spanning ker(D∘-)
  std::vector<IntMat> witnesses;          // ker-D coordinates, one per kernel generator
  Index aff_rank;                         // dim Hom(G1, Aff) = aff_dim · free_rank(G1)
  RatMat modulus;                         // columns vec(D·F_t) over the hom basis
};

KerQReport ker_q_resolution(const FGAbelianGroup& g0, const FGAbelianGroup& g1,
                            const RatMat& d);

}  // namespace okt
