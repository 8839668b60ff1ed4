#include <doctest.h>

#include <okt/unitary.hpp>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

using namespace okt;

namespace {

constexpr double kTau = 2.0 * std::numbers::pi;
using Complex = std::complex<double>;

CMat amplify(const CMat& top, const CMat& bottom) {
  Index n = top.rows();
  CMat out = CMat::Zero(2 * n, 2 * n);
  out.topLeftCorner(n, n) = top;
  out.bottomRightCorner(n, n) = bottom;
  return out;
}

/// u(t) = e^{2πit}p + (1 - p) sampled on `grid` steps
UnitaryPath projection_loop(const CMat& p, Index grid) {
  Index n = p.rows();
  std::vector<UnitarySample> frames;
  for (Index k = 0; k <= grid; ++k) {
    double t = static_cast<double>(k) / static_cast<double>(grid);
    Complex phase = std::polar(1.0, kTau * t);
    frames.emplace_back(phase * p + (CMat::Identity(n, n) - p));
  }
  return UnitaryPath(grid, std::move(frames));
}

}  // namespace

TEST_CASE("unitary sample validation") {
  CMat good = CMat::Identity(3, 3);
  CHECK(UnitarySample(good).dim() == 3);
  CMat bad = 2.0 * CMat::Identity(3, 3);
  CHECK_THROWS_AS(make_unitary(bad), ValidationError);
  CHECK_THROWS_AS(make_unitary(CMat::Zero(2, 3)), ShapeError);
}

TEST_CASE("bott element of commuting and winding pairs") {
  std::mt19937_64 rng(11);
  // commuting diagonal pair
  CMat a = CMat::Zero(4, 4), b = CMat::Zero(4, 4);
  std::uniform_real_distribution<double> angle(0.0, kTau);
  for (Index i = 0; i < 4; ++i) {
    a(i, i) = std::polar(1.0, angle(rng));
    b(i, i) = std::polar(1.0, angle(rng));
  }
  BottResult comm = bott(UnitarySample(a), UnitarySample(b));
  CHECK(std::abs(comm.raw) < 1e-12);
  CHECK(comm.rounded == 0);

  // single winding block: value 1 at every circle sample
  WindingPair wp = make_winding_pair({WindingBlock(8, 1, 1)}, 64);
  for (Index k = 0; k <= 64; k += 8) {
    BottResult r = bott(wp.w, wp.z.frames[static_cast<std::size_t>(k)]);
    CHECK(r.rounded == 1);
    CHECK(r.residual < 1e-10);
  }

  // zero winding
  WindingPair wp0 = make_winding_pair({WindingBlock(8, 0, 1)}, 16);
  CHECK(bott(wp0.w, wp0.z.frames[3]).rounded == 0);

  // block additivity: {M:16,N:2} ⊕ {M:16,N:1,L:-1} -> 3
  WindingPair wp3 =
      make_winding_pair({WindingBlock(16, 2, 1), WindingBlock(16, 1, -1)}, 16);
  BottResult r3 = bott(wp3.w, wp3.z.frames[5]);
  CHECK(r3.rounded == 3);
  CHECK(r3.residual < 1e-10);
}

TEST_CASE("bott antisymmetry and adjoint rules") {
  WindingPair wp = make_winding_pair({WindingBlock(12, 2, 1)}, 16);
  const UnitarySample& w = wp.w;
  const UnitarySample& z = wp.z.frames[7];
  BottResult fwd = bott(w, z);
  CHECK(fwd.rounded == 2);
  CHECK(bott(z, w).rounded == -2);
  CHECK(std::abs(bott(z, w).raw + fwd.raw) < 1e-12);
  UnitarySample w_adj(w.u.adjoint());
  CHECK(bott(w_adj, z).rounded == -2);
}

TEST_CASE("bott additivity in the second argument") {
  WindingPair wp = make_winding_pair({WindingBlock(8, 1, 1)}, 32);
  const UnitarySample& w = wp.w;
  UnitarySample z1 = wp.z.frames[3];
  UnitarySample z2 = wp.z.frames[11];
  UnitarySample prod(z1.u * z2.u);
  long long lhs = bott(w, prod).rounded;
  CHECK(lhs == bott(w, z1).rounded + bott(w, z2).rounded);
  CHECK(lhs == 2);
}

TEST_CASE("bott rejects spectrum at -1") {
  CMat swap = CMat::Zero(2, 2);
  swap(0, 1) = 1.0;
  swap(1, 0) = 1.0;
  CMat sign = CMat::Identity(2, 2);
  sign(1, 1) = -1.0;
  CHECK_THROWS_AS(bott(UnitarySample(swap), UnitarySample(sign)),
                  SpectrumNearMinusOne);
}

TEST_CASE("winding pair structure and exact conjugation identity") {
  WindingPair wp = make_winding_pair({WindingBlock(5, 1, 1), WindingBlock(3, 0, -1)}, 32);
  CHECK(wp.w.dim() == 8);
  CHECK(wp.z.closed);
  CHECK((wp.z.frames.back().u - wp.z.frames.front().u).norm() == 0.0);
  // w z w* = omega z blockwise
  const CMat& z = wp.z.frames[9].u;
  CMat conj = wp.w.u * z * wp.w.u.adjoint();
  Complex omega = std::polar(1.0, -kTau / 5.0);
  CHECK((conj.topLeftCorner(5, 5) - omega * z.topLeftCorner(5, 5)).norm() < 1e-12);
  CHECK((conj.bottomRightCorner(3, 3) - z.bottomRightCorner(3, 3)).norm() < 1e-12);

  CHECK_THROWS_AS(make_winding_pair({}), ValidationError);
  CHECK_THROWS_AS(WindingBlock(1, 0, 1), ValidationError);
  CHECK_THROWS_AS(WindingBlock(4, 9, 1), ValidationError);
  CHECK_THROWS_AS(WindingBlock(4, 1, 2), ValidationError);
}

TEST_CASE("winding norm check matches the conjugation defect") {
  NormCheck zero = winding_norm_check({WindingBlock(8, 0, 1)}, 64);
  CHECK(zero.lhs == 0.0);
  CHECK(zero.pass);

  NormCheck n8 = winding_norm_check({WindingBlock(8, 1, 1)}, 64);
  CHECK(n8.pass);
  CHECK(std::abs(n8.lhs - 2.0 * std::sin(std::numbers::pi / 8.0)) < 1e-9);
  CHECK(n8.lhs <= kTau / 8.0 + kTau / 64.0);

  NormCheck n64 = winding_norm_check({WindingBlock(64, 1, 1)}, 64);
  CHECK(n64.pass);
  CHECK(n64.lhs <= kTau / 64.0 + kTau / 64.0);
}

TEST_CASE("rotation number of a projection loop is the projection trace") {
  std::mt19937_64 rng(23);
  CMat p = random_projection(5, 2, rng);
  UnitaryPath path = projection_loop(p, 512);
  RotationResult r = rotation_number(path);
  CHECK(std::abs(r.value - 2.0 / 5.0) < 1e-9);

  // with the unnormalized trace convention (trace_dim = 1): the raw winding
  RotationResult raw = rotation_number(path, 1);
  CHECK(std::abs(raw.value - 2.0) < 1e-9);
}

TEST_CASE("rotation number basics") {
  std::mt19937_64 rng(29);
  UnitarySample u0 = random_unitary(4, rng);
  std::vector<UnitarySample> constant(65, u0);
  RotationResult c = rotation_number(UnitaryPath(64, constant));
  CHECK(std::abs(c.value) < 1e-12);

  // exponential path with traceless generator: zero net rotation
  CMat hgen = CMat::Zero(2, 2);
  hgen(0, 0) = 0.3;
  hgen(1, 1) = -0.3;
  std::vector<UnitarySample> frames;
  for (Index k = 0; k <= 128; ++k) {
    double t = static_cast<double>(k) / 128.0;
    CMat f = CMat::Zero(2, 2);
    f(0, 0) = std::polar(1.0, kTau * t * 0.3);
    f(1, 1) = std::polar(1.0, -kTau * t * 0.3);
    frames.emplace_back(f);
    (void)hgen;
  }
  RotationResult tr = rotation_number(UnitaryPath(128, frames));
  CHECK(std::abs(tr.value) < 1e-12);
}

TEST_CASE("closed loop near a fixed unitary has rotation zero") {
  std::mt19937_64 rng(31);
  UnitarySample u0 = random_unitary(3, rng);
  CMat h = CMat::Zero(3, 3);
  h(0, 1) = Complex(0.2, 0.1);
  h(1, 0) = std::conj(h(0, 1));
  h(2, 2) = 0.15;
  Eigen::SelfAdjointEigenSolver<CMat> es(h);
  std::vector<UnitarySample> frames;
  for (Index k = 0; k <= 256; ++k) {
    double t = static_cast<double>(k) / 256.0;
    double amp = 0.25 * std::sin(kTau * t);
    CVec ph(3);
    for (Index i = 0; i < 3; ++i)
      ph(i) = std::polar(1.0, amp * es.eigenvalues()(i));
    CMat e = es.eigenvectors() * ph.asDiagonal() * es.eigenvectors().adjoint();
    frames.emplace_back(e * u0.u);
  }
  RotationResult r = rotation_number(UnitaryPath(256, frames));
  CHECK(std::abs(r.value) < 1e-12);
}

TEST_CASE("rotation additivity under products and adjoints") {
  std::mt19937_64 rng(37);
  CMat p = random_projection(4, 1, rng);
  CMat q = random_projection(4, 3, rng);
  UnitaryPath pp = projection_loop(p, 256);
  UnitaryPath qq = projection_loop(q, 256);
  double rp = rotation_number(pp).value;
  double rq = rotation_number(qq).value;
  double rprod = rotation_number(path_product(pp, qq)).value;
  CHECK(std::abs(rprod - rp - rq) < 1e-9);
  CHECK(std::abs(rotation_number(path_adjoint(pp)).value + rp) < 1e-12);
  // inverse cancellation
  CHECK(std::abs(rotation_number(path_product(pp, path_adjoint(pp))).value) < 1e-12);
}

TEST_CASE("too-large steps are rejected with the step index") {
  std::vector<UnitarySample> frames;
  frames.emplace_back(CMat::Identity(2, 2));
  frames.emplace_back(CMat::Identity(2, 2));
  frames.emplace_back(CMat(-CMat::Identity(2, 2)));
  UnitaryPath jump(2, frames, std::nullopt, 10.0);
  try {
    rotation_number(jump);
    FAIL("expected StepTooLarge");
  } catch (const StepTooLarge& e) {
    CHECK(e.step_index == 1);
  }
  // the default continuity tolerance rejects the same data at construction
  CHECK_THROWS_AS(UnitaryPath(2, frames), ValidationError);
}

TEST_CASE("conjugation sandwich endpoints and zero rotation") {
  std::mt19937_64 rng(41);
  UnitarySample u = random_unitary(3, rng);
  UnitarySample w = random_unitary(3, rng);
  UnitaryPath path = conjugation_sandwich(u, w, 4096);
  CHECK((path.boundary.start - amplify(u.u, CMat::Identity(3, 3))).norm() < 1e-12);
  CMat expected_end = amplify(w.u * u.u * w.u.adjoint(), CMat::Identity(3, 3));
  CHECK((path.boundary.end - expected_end).norm() < 1e-10);
  RotationResult r = rotation_number(path);
  CHECK(std::abs(r.value) <= 1e-6);

  // W = I: constant path
  UnitaryPath still = conjugation_sandwich(u, UnitarySample(CMat::Identity(3, 3)), 64);
  CHECK(std::abs(rotation_number(still).value) < 1e-12);
}

TEST_CASE("sandwich re-enters a twisted path") {
  std::mt19937_64 rng(43);
  UnitarySample u = random_unitary(2, rng);
  UnitarySample w = random_unitary(2, rng);
  UnitaryPath path = conjugation_sandwich(u, w, 256);
  // end = (W⊕1)·start·(W⊕1)*: the twist record validates
  CMat twist = amplify(w.u, CMat::Identity(2, 2));
  std::vector<UnitarySample> frames = path.frames;
  UnitaryPath twisted(path.time_grid, frames, twist);
  REQUIRE(twisted.boundary.twist.has_value());
  CHECK((*twisted.boundary.twist - twist).norm() == 0.0);
  // a wrong twist is rejected
  CMat wrong = amplify(u.u, CMat::Identity(2, 2));
  if ((path.boundary.end - wrong * path.boundary.start * wrong.adjoint()).norm() > 1e-6)
    CHECK_THROWS_AS(UnitaryPath(path.time_grid, frames, wrong), ValidationError);
}

TEST_CASE("zeta path rotation equals the normalized trace of h") {
  std::mt19937_64 rng(47);
  UnitarySample un = random_unitary(3, rng);
  WindingPair wp = make_winding_pair({WindingBlock(3, 1, 1)}, 16);
  const UnitarySample& z = wp.z.frames[4];

  // h = 0: pure sandwich, rotation 0
  UnitaryPath zp0 = zeta_path(un, z, CMat::Zero(3, 3), 512);
  CHECK(std::abs(rotation_number(zp0, 3).value) <= 1e-6);

  // small diagonal h: rotation = Tr(h)/3 against the unamplified trace
  CMat h = CMat::Zero(3, 3);
  h(0, 0) = 0.05 / kTau;
  h(1, 1) = -0.02 / kTau;
  h(2, 2) = 0.04 / kTau;
  double expect = (0.05 - 0.02 + 0.04) / (kTau * 3.0);
  UnitaryPath zp = zeta_path(un, z, h, 512);
  CHECK(std::abs(rotation_number(zp, 3).value - expect) < 1e-6);

  // trivial sandwich: u_n = I, z = I
  UnitarySample eye(CMat::Identity(3, 3));
  UnitaryPath zpt = zeta_path(eye, eye, h, 128);
  CHECK(std::abs(rotation_number(zpt, 3).value - expect) < 1e-9);

  CMat skew = CMat::Zero(3, 3);
  skew(0, 1) = 1.0;
  CHECK_THROWS_AS(zeta_path(un, z, skew, 64), ValidationError);
}

TEST_CASE("bott homotopy scans") {
  WindingPair wp = make_winding_pair({WindingBlock(8, 1, 1)}, 32);
  std::vector<std::pair<UnitarySample, UnitarySample>> pairs;
  for (int k = 0; k < 6; ++k) pairs.emplace_back(wp.w, wp.z.frames[5]);
  BottScan stat = bott_homotopy_scan(pairs);
  CHECK(stat.constant);
  CHECK(stat.values.front() == 1);

  // phase rotation leaves the commutator invariant
  pairs.clear();
  for (int k = 0; k < 8; ++k) {
    Complex phase = std::polar(1.0, 0.3 * k);
    pairs.emplace_back(wp.w, UnitarySample(phase * wp.z.frames[5].u));
  }
  BottScan rot = bott_homotopy_scan(pairs);
  CHECK(rot.constant);
  CHECK(rot.values.back() == 1);

  // gap crossing reports the offending index
  CMat swap = CMat::Zero(2, 2);
  swap(0, 1) = 1.0;
  swap(1, 0) = 1.0;
  CMat sign = CMat::Identity(2, 2);
  sign(1, 1) = -1.0;
  std::vector<std::pair<UnitarySample, UnitarySample>> crossing;
  crossing.emplace_back(UnitarySample(CMat::Identity(2, 2)),
                        UnitarySample(CMat::Identity(2, 2)));
  crossing.emplace_back(UnitarySample(swap), UnitarySample(sign));
  try {
    bott_homotopy_scan(crossing);
    FAIL("expected SpectrumNearMinusOne");
  } catch (const SpectrumNearMinusOne& e) {
    CHECK(e.sample_index == 1);
  }
}

TEST_CASE("grid refinement stability") {
  std::mt19937_64 rng(53);
  UnitarySample u = random_unitary(2, rng);
  UnitarySample w = random_unitary(2, rng);
  double coarse = rotation_number(conjugation_sandwich(u, w, 512)).value;
  double fine = rotation_number(conjugation_sandwich(u, w, 1024)).value;
  CHECK(std::abs(coarse - fine) < 1e-6);
}
