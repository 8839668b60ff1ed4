#pragma once

// Sampled unitaries: Bott elements of almost-commuting pairs, winding
// block pairs, rotation numbers of unitary paths, and the rotation-free
// conjugation paths used to normalize path classes.

#include <okt/core.hpp>

#include <optional>
#include <random>
#include <vector>

namespace okt {

/// Matrix validated to be unitary within `tol` in operator norm.
struct UnitarySample {
  CMat u;

  explicit UnitarySample(CMat m, double tol = 1e-10);
  Index dim() const { return u.rows(); }
};

UnitarySample make_unitary(const CMat& m, double tol = 1e-10);

/// Circle-sampled family z(t_k), t_k = k/grid, k = 0..grid.  When `closed`,
/// the last frame must equal the first exactly as sampled data.
struct UnitaryLoop {
  Index grid = 0;
  std::vector<UnitarySample> frames;
  bool closed = false;

  UnitaryLoop(Index grid_, std::vector<UnitarySample> frames_, bool closed_);
};

/// Endpoint record; `twist` u0 asserts end = u0 · start · u0*.
struct PathBoundary {
  CMat start, end;
  std::optional<CMat> twist;
};

/// Time-sampled path u(t_k), t_k = k/time_grid, with a continuity bound on
/// adjacent frames (Frobenius) and the boundary record re-verified.
struct UnitaryPath {
  Index time_grid = 0;
  std::vector<UnitarySample> frames;
  PathBoundary boundary;

  UnitaryPath(Index time_grid_, std::vector<UnitarySample> frames_,
              std::optional<CMat> twist = std::nullopt, double step_tol = 1.0);
};

/// Block datum for the winding pair: size M >= 2, winding N with |N| <= M,
/// corner exponent L = ±1.
struct WindingBlock {
  Index m = 2;
  long long n = 0;
  int l = 1;

  WindingBlock(Index m_, long long n_, int l_);
};

struct BottResult {
  double raw = 0.0;
  long long rounded = 0;
  double residual = 0.0;   // |raw - rounded|
  double min_gap = 0.0;    // min |lambda + 1| over the commutator spectrum
};

inline constexpr double kDefaultBottGap = 0.1;
inline constexpr Index kDefaultCircleGrid = 2048;
inline constexpr Index kDefaultTimeGrid = 4096;

/// (1/2π)·Σ arg λ over the spectrum of v·u·v*·u* with principal arguments.
/// Throws SpectrumNearMinusOne when some |λ + 1| < gap.
BottResult bott(const UnitarySample& u, const UnitarySample& v,
                double gap = kDefaultBottGap);

/// w = ⊕ diag(1, ω_s, ..., ω_s^{M_s-1}) with ω_s = e^{-2πi N_s/M_s}, and the
/// loop z(t) = ⊕ (cyclic shift with corner e^{2πi L_s t}).  Satisfies
/// w z(t) w* = ω_s z(t) blockwise at every sample, hence bott(w, z(t)) = Σ N_s.
struct WindingPair {
  UnitarySample w;
  UnitaryLoop z;
};
WindingPair make_winding_pair(const std::vector<WindingBlock>& blocks,
                              Index grid = kDefaultCircleGrid);

struct NormCheck {
  double lhs = 0.0;  // max_t ‖w z(t) w* − z(t)‖ (operator norm)
  double rhs = 0.0;  // 2π·max_s |N_s|/M_s + grid cushion 2π/grid
  bool pass = false;
};
NormCheck winding_norm_check(const std::vector<WindingBlock>& blocks,
                             Index grid = kDefaultCircleGrid);

struct RotationResult {
  double value = 0.0;
  double max_step_norm = 0.0;  // largest ‖frame_{k+1} − frame_k‖_F seen
  double min_gap = 0.0;        // smallest |λ + 1| over all step spectra
};

/// Discrete total winding: Σ_k (1/2πi)·Tr(Log(frame_{k+1}·frame_k*)) divided
/// by trace_dim (0 = frame dimension).  Log is the principal unitary log via
/// eigenphases; throws StepTooLarge when a step eigenvalue comes within
/// `gap` of −1.
RotationResult rotation_number(const UnitaryPath& path, Index trace_dim = 0,
                               double gap = kDefaultBottGap);

/// Frame-wise product (equal grids and dims).
UnitaryPath path_product(const UnitaryPath& p, const UnitaryPath& q);
/// Frame-wise adjoint: negates the rotation number.
UnitaryPath path_adjoint(const UnitaryPath& p);

/// 2-amplified sandwich t ↦ R_t(1⊕W)R_t^{-1}(u⊕1)R_t(1⊕W*)R_t^{-1} with R_t
/// the blockwise rotation by πt/2: runs from u⊕1 to (WuW*)⊕1 with rotation
/// number 0 by construction.
UnitaryPath conjugation_sandwich(const UnitarySample& u, const UnitarySample& w,
                                 Index grid = kDefaultTimeGrid);

/// Sandwich for Ad u_n(z) concatenated with t ↦ (e^{2πith}⊕1)·(Ad u_n(z)⊕1):
/// rotation number Tr(h)/trace_dim; with the natural trace of the unamplified
/// algebra (trace_dim = dim) this is the normalized trace of h.
UnitaryPath zeta_path(const UnitarySample& u_n, const UnitarySample& z,
                      const CMat& h, Index grid = kDefaultTimeGrid);

struct BottScan {
  std::vector<long long> values;
  bool constant = false;
};

/// Rounded Bott element per pair; SpectrumNearMinusOne carries the offending
/// sample index.
BottScan bott_homotopy_scan(
    const std::vector<std::pair<UnitarySample, UnitarySample>>& pairs,
    double gap = kDefaultBottGap);

/// Haar-ish random unitary (QR of a complex Gaussian with phase fix).
UnitarySample random_unitary(Index n, std::mt19937_64& rng);
/// Rank-r orthogonal projection in random position.
CMat random_projection(Index n, Index r, std::mt19937_64& rng);

}  // namespace okt
