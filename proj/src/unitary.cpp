#include <okt/unitary.hpp>

#include <Eigen/Eigenvalues>

#include <cmath>
#include <complex>
#include <cstdlib>
#include <limits>
#include <numbers>
#include <utility>

namespace okt {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

using Complex = std::complex<double>;

double unitarity_defect(const CMat& m) {
  CMat e = m * m.adjoint();
  e.diagonal().array() -= Complex(1.0, 0.0);
  return e.norm();
}

/// Operator norm via the top eigenvalue of A*A.
double operator_norm(const CMat& a) {
  Eigen::SelfAdjointEigenSolver<CMat> es(a.adjoint() * a,
                                         Eigen::EigenvaluesOnly);
  double top = es.eigenvalues().maxCoeff();
  return top <= 0.0 ? 0.0 : std::sqrt(top);
}

/// Principal eigenphase data of a unitary matrix: sum of args and the
/// minimum distance of the spectrum from -1.
struct PhaseSum {
  double sum = 0.0;
  double min_gap = std::numeric_limits<double>::infinity();
};

PhaseSum principal_phases(const CMat& t) {
  Eigen::ComplexEigenSolver<CMat> es(t, false);
  if (es.info() != Eigen::Success)
    throw Error("eigensolver failed on a unitary matrix");
  PhaseSum out;
  for (Index i = 0; i < t.rows(); ++i) {
    Complex lambda = es.eigenvalues()(i);
    double mod = std::abs(lambda);
    if (mod > 0.0) lambda /= mod;
    out.min_gap = std::min(out.min_gap, std::abs(lambda + Complex(1.0, 0.0)));
    out.sum += std::arg(lambda);
  }
  return out;
}

BottResult bott_at(const UnitarySample& u, const UnitarySample& v, double gap,
                   std::size_t sample_index) {
  if (u.dim() != v.dim()) throw ShapeError("bott: dimension mismatch");
  CMat t = v.u * u.u * v.u.adjoint() * u.u.adjoint();
  PhaseSum ph = principal_phases(t);
  if (ph.min_gap < gap) throw SpectrumNearMinusOne(ph.min_gap, sample_index);
  BottResult out;
  out.raw = ph.sum / kTwoPi;
  out.rounded = std::llround(out.raw);
  out.residual = std::abs(out.raw - static_cast<double>(out.rounded));
  out.min_gap = ph.min_gap;
  return out;
}

CMat amplify(const CMat& top, const CMat& bottom) {
  Index n = top.rows();
  CMat out = CMat::Zero(2 * n, 2 * n);
  out.topLeftCorner(n, n) = top;
  out.bottomRightCorner(n, n) = bottom;
  return out;
}

/// Blockwise rotation R_t = [[c, -s], [s, c]] ⊗ I_n with c = cos(pi t / 2).
CMat block_rotation(Index n, double t) {
  double c = std::cos(0.5 * std::numbers::pi * t);
  double s = std::sin(0.5 * std::numbers::pi * t);
  CMat out = CMat::Zero(2 * n, 2 * n);
  out.topLeftCorner(n, n) = Complex(c, 0.0) * CMat::Identity(n, n);
  out.topRightCorner(n, n) = Complex(-s, 0.0) * CMat::Identity(n, n);
  out.bottomLeftCorner(n, n) = Complex(s, 0.0) * CMat::Identity(n, n);
  out.bottomRightCorner(n, n) = Complex(c, 0.0) * CMat::Identity(n, n);
  return out;
}

CMat sandwich_frame(const CMat& u_amp, const CMat& w_amp, const CMat& w_amp_adj,
                    Index n, double t) {
  CMat r = block_rotation(n, t);
  CMat r_inv = r.transpose();  // real rotation
  return r * w_amp * r_inv * u_amp * r * w_amp_adj * r_inv;
}

}  // namespace

UnitarySample::UnitarySample(CMat m, double tol) : u(std::move(m)) {
  if (u.rows() != u.cols()) throw ShapeError("unitary sample must be square");
  if (u.rows() == 0) throw ShapeError("unitary sample must be nonempty");
  double defect = unitarity_defect(u);
  if (!(defect <= tol))
    throw ValidationError("matrix is not unitary within tolerance (defect " +
                          std::to_string(defect) + ")");
}

UnitarySample make_unitary(const CMat& m, double tol) {
  return UnitarySample(m, tol);
}

UnitaryLoop::UnitaryLoop(Index grid_, std::vector<UnitarySample> frames_,
                         bool closed_)
    : grid(grid_), frames(std::move(frames_)), closed(closed_) {
  if (grid < 1) throw ShapeError("loop grid must be positive");
  if (static_cast<Index>(frames.size()) != grid + 1)
    throw ShapeError("loop must carry grid + 1 frames");
  for (const UnitarySample& f : frames)
    if (f.dim() != frames.front().dim())
      throw ShapeError("loop frames must share a dimension");
  if (closed && (frames.back().u - frames.front().u).norm() > 1e-12)
    throw ValidationError("closed loop does not return to its first frame");
}

UnitaryPath::UnitaryPath(Index time_grid_, std::vector<UnitarySample> frames_,
                         std::optional<CMat> twist, double step_tol)
    : time_grid(time_grid_), frames(std::move(frames_)) {
  if (time_grid < 1) throw ShapeError("path grid must be positive");
  if (static_cast<Index>(frames.size()) != time_grid + 1)
    throw ShapeError("path must carry time_grid + 1 frames");
  Index n = frames.front().dim();
  for (const UnitarySample& f : frames)
    if (f.dim() != n) throw ShapeError("path frames must share a dimension");
  for (std::size_t k = 0; k + 1 < frames.size(); ++k) {
    double step = (frames[k + 1].u - frames[k].u).norm();
    if (!(step <= step_tol))
      throw ValidationError("path discontinuity at step " + std::to_string(k) +
                            " (|Δ| = " + std::to_string(step) + ")");
  }
  boundary.start = frames.front().u;
  boundary.end = frames.back().u;
  if (twist) {
    if (twist->rows() != n || twist->cols() != n)
      throw ShapeError("twist dimension mismatch");
    UnitarySample w(*twist);  // must itself be unitary
    double defect = (boundary.end - w.u * boundary.start * w.u.adjoint()).norm();
    if (!(defect <= 1e-8))
      throw ValidationError("twist does not map start to end (defect " +
                            std::to_string(defect) + ")");
    boundary.twist = *twist;
  }
}

WindingBlock::WindingBlock(Index m_, long long n_, int l_) : m(m_), n(n_), l(l_) {
  if (m < 2) throw ValidationError("winding block size must be >= 2");
  if (std::llabs(n) > static_cast<long long>(m))
    throw ValidationError("winding count exceeds the block size");
  if (l != 1 && l != -1) throw ValidationError("corner exponent must be ±1");
}

BottResult bott(const UnitarySample& u, const UnitarySample& v, double gap) {
  return bott_at(u, v, gap, 0);
}

WindingPair make_winding_pair(const std::vector<WindingBlock>& blocks,
                              Index grid) {
  if (blocks.empty()) throw ValidationError("winding pair needs blocks");
  if (grid < 1) throw ShapeError("winding grid must be positive");
  Index dim = 0;
  for (const WindingBlock& b : blocks) dim += b.m;

  CMat w = CMat::Zero(dim, dim);
  Index at = 0;
  for (const WindingBlock& b : blocks) {
    double phase = -kTwoPi * static_cast<double>(b.n) / static_cast<double>(b.m);
    for (Index j = 0; j < b.m; ++j)
      w(at + j, at + j) = std::polar(1.0, phase * static_cast<double>(j));
    at += b.m;
  }

  std::vector<UnitarySample> frames;
  frames.reserve(static_cast<std::size_t>(grid) + 1);
  for (Index k = 0; k < grid; ++k) {
    double t = static_cast<double>(k) / static_cast<double>(grid);
    CMat z = CMat::Zero(dim, dim);
    at = 0;
    for (const WindingBlock& b : blocks) {
      for (Index j = 0; j + 1 < b.m; ++j) z(at + j + 1, at + j) = 1.0;
      z(at, at + b.m - 1) = std::polar(1.0, kTwoPi * b.l * t);
      at += b.m;
    }
    frames.emplace_back(std::move(z));
  }
  frames.push_back(frames.front());  // exact closure at t = 1

  return WindingPair{UnitarySample(std::move(w)),
                     UnitaryLoop(grid, std::move(frames), true)};
}

NormCheck winding_norm_check(const std::vector<WindingBlock>& blocks,
                             Index grid) {
  WindingPair pair = make_winding_pair(blocks, grid);
  NormCheck out;
  for (Index k = 0; k <= grid; ++k) {
    const CMat& z = pair.z.frames[static_cast<std::size_t>(k)].u;
    // w and z share the block structure, and the operator norm of a
    // block-diagonal matrix is the max of the block norms.
    Index off = 0;
    for (const WindingBlock& b : blocks) {
      const CMat zb = z.block(off, off, b.m, b.m);
      const CMat wb = pair.w.u.block(off, off, b.m, b.m);
      const CMat diff = wb * zb * wb.adjoint() - zb;
      out.lhs = std::max(out.lhs, operator_norm(diff));
      off += b.m;
    }
  }
  double worst = 0.0;
  for (const WindingBlock& b : blocks)
    worst = std::max(worst, static_cast<double>(std::llabs(b.n)) /
                                static_cast<double>(b.m));
  out.rhs = kTwoPi * worst + kTwoPi / static_cast<double>(grid);
  out.pass = out.lhs <= out.rhs;
  return out;
}

RotationResult rotation_number(const UnitaryPath& path, Index trace_dim,
                               double gap) {
  Index n = path.frames.front().dim();
  double divisor = static_cast<double>(trace_dim == 0 ? n : trace_dim);
  if (divisor <= 0.0) throw ShapeError("trace dimension must be positive");
  RotationResult out;
  out.min_gap = std::numeric_limits<double>::infinity();
  double total = 0.0;
  for (std::size_t k = 0; k + 1 < path.frames.size(); ++k) {
    CMat s = path.frames[k + 1].u * path.frames[k].u.adjoint();
    out.max_step_norm =
        std::max(out.max_step_norm, (path.frames[k + 1].u - path.frames[k].u).norm());
    PhaseSum ph = principal_phases(s);
    if (ph.min_gap < gap) {
      CMat dev = s;
      dev.diagonal().array() -= Complex(1.0, 0.0);
      throw StepTooLarge(k, dev.norm());
    }
    out.min_gap = std::min(out.min_gap, ph.min_gap);
    total += ph.sum;
  }
  out.value = total / (kTwoPi * divisor);
  return out;
}

UnitaryPath path_product(const UnitaryPath& p, const UnitaryPath& q) {
  if (p.time_grid != q.time_grid) throw ShapeError("path grids differ");
  if (p.frames.front().dim() != q.frames.front().dim())
    throw ShapeError("path dimensions differ");
  std::vector<UnitarySample> frames;
  frames.reserve(p.frames.size());
  for (std::size_t k = 0; k < p.frames.size(); ++k)
    frames.emplace_back(p.frames[k].u * q.frames[k].u);
  return UnitaryPath(p.time_grid, std::move(frames), std::nullopt,
                     std::numeric_limits<double>::infinity());
}

UnitaryPath path_adjoint(const UnitaryPath& p) {
  std::vector<UnitarySample> frames;
  frames.reserve(p.frames.size());
  for (const UnitarySample& f : p.frames) frames.emplace_back(f.u.adjoint());
  return UnitaryPath(p.time_grid, std::move(frames), p.boundary.twist,
                     std::numeric_limits<double>::infinity());
}

UnitaryPath conjugation_sandwich(const UnitarySample& u, const UnitarySample& w,
                                 Index grid) {
  if (u.dim() != w.dim()) throw ShapeError("sandwich arguments must share a dimension");
  Index n = u.dim();
  CMat u_amp = amplify(u.u, CMat::Identity(n, n));
  CMat w_amp = amplify(CMat::Identity(n, n), w.u);
  CMat w_amp_adj = w_amp.adjoint();
  std::vector<UnitarySample> frames;
  frames.reserve(static_cast<std::size_t>(grid) + 1);
  for (Index k = 0; k <= grid; ++k) {
    double t = static_cast<double>(k) / static_cast<double>(grid);
    frames.emplace_back(sandwich_frame(u_amp, w_amp, w_amp_adj, n, t));
  }
  return UnitaryPath(grid, std::move(frames));
}

UnitaryPath zeta_path(const UnitarySample& u_n, const UnitarySample& z,
                      const CMat& h, Index grid) {
  Index n = u_n.dim();
  if (z.dim() != n || h.rows() != n || h.cols() != n)
    throw ShapeError("zeta arguments must share a dimension");
  if ((h - h.adjoint()).norm() > 1e-10)
    throw ValidationError("zeta generator h must be self-adjoint");
  if (grid < 2) throw ShapeError("zeta grid too small");

  Index g1 = grid / 2;
  Index g2 = grid - g1;
  UnitaryPath first = conjugation_sandwich(z, u_n, g1);

  Eigen::SelfAdjointEigenSolver<CMat> es(h);
  if (es.info() != Eigen::Success) throw Error("eigensolver failed on h");
  CMat q = es.eigenvectors();
  Eigen::VectorXd lam = es.eigenvalues();

  CMat tail_base = amplify(u_n.u * z.u * u_n.u.adjoint(), CMat::Identity(n, n));
  std::vector<UnitarySample> frames = first.frames;
  for (Index k = 1; k <= g2; ++k) {
    double t = static_cast<double>(k) / static_cast<double>(g2);
    CVec phases(n);
    for (Index i = 0; i < n; ++i) phases(i) = std::polar(1.0, kTwoPi * t * lam(i));
    CMat exp_h = q * phases.asDiagonal() * q.adjoint();
    frames.emplace_back(amplify(exp_h, CMat::Identity(n, n)) * tail_base);
  }
  return UnitaryPath(g1 + g2, std::move(frames));
}

BottScan bott_homotopy_scan(
    const std::vector<std::pair<UnitarySample, UnitarySample>>& pairs,
    double gap) {
  BottScan out;
  out.values.reserve(pairs.size());
  for (std::size_t k = 0; k < pairs.size(); ++k)
    out.values.push_back(bott_at(pairs[k].first, pairs[k].second, gap, k).rounded);
  out.constant = true;
  for (long long v : out.values)
    if (v != out.values.front()) out.constant = false;
  return out;
}

UnitarySample random_unitary(Index n, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  CMat a(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) a(i, j) = Complex(normal(rng), normal(rng));
  Eigen::HouseholderQR<CMat> qr(a);
  CMat qmat = qr.householderQ() * CMat::Identity(n, n);
  CMat r = qr.matrixQR().template triangularView<Eigen::Upper>();
  for (Index j = 0; j < n; ++j) {
    Complex d = r(j, j);
    double mod = std::abs(d);
    if (mod > 0.0) qmat.col(j) *= d / mod;
  }
  return UnitarySample(std::move(qmat));
}

CMat random_projection(Index n, Index r, std::mt19937_64& rng) {
  if (r < 0 || r > n) throw ShapeError("projection rank out of range");
  UnitarySample u = random_unitary(n, rng);
  CMat d = CMat::Zero(n, n);
  for (Index i = 0; i < r; ++i) d(i, i) = 1.0;
  return u.u * d * u.u.adjoint();
}

}  // namespace okt
