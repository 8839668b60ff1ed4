#include <okt/realize.hpp>

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

namespace okt {

namespace {

IntVec basis_vec(Index n, Index j) {
  IntVec e = IntVec::Zero(n);
  e(j) = Int(1);
  return e;
}

// One rational solution of a x = b, or nullopt when none exists.
std::optional<RatVec> rat_solve(const IntMat& a, const RatVec& b) {
  auto d = smith_normal_form(a);  // a = u s v
  RatVec c = to_rational(d.u_inv) * b;
  RatVec y = RatVec::Zero(a.cols());
  const Index n = std::min(a.rows(), a.cols());
  for (Index i = 0; i < n; ++i) {
    if (d.s(i, i).is_zero()) {
      if (!c(i).is_zero()) return std::nullopt;
    } else {
      y(i) = c(i) / Rat(d.s(i, i));
    }
  }
  for (Index i = n; i < a.rows(); ++i)
    if (!c(i).is_zero()) return std::nullopt;
  return RatVec(to_rational(d.v_inv) * y);
}

}  // namespace

PhiSpec::PhiSpec(InductiveSystem sys, std::vector<RatMat> values_, Rat precision_)
    : system(std::move(sys)), values(std::move(values_)), precision(std::move(precision_)) {
  if (precision < Rat(0)) throw ValidationError("PhiSpec: precision must be nonnegative");
  if (static_cast<Index>(values.size()) != system.stage_count())
    throw ShapeError("PhiSpec: need one value matrix per stage");
  for (Index n = 0; n < system.stage_count(); ++n)
    if (values[n].rows() != system.rank(n) || values[n].cols() != system.rank(n))
      throw ShapeError("PhiSpec: stage " + std::to_string(n) +
                       " values must be rank x rank");
  // Two approximations of the same limit function may differ by twice the
  // declared per-stage error.
  const Rat allow = Rat(2) * precision;
  for (Index n = 0; n + 1 < system.stage_count(); ++n) {
    RatMat next = values[n + 1] * to_rational(system.map1(n));
    for (Index j = 0; j < system.rank(n); ++j) {
      AffElement pushed =
          push_forward(AffElement{n, RatVec(values[n].col(j))}, system, n + 1);
      for (Index i = 0; i < system.rank(n + 1); ++i)
        if (abs(pushed.values(i) - next(i, j)) > allow)
          throw ValidationError("PhiSpec: stage " + std::to_string(n) +
                                " values do not push to stage " +
                                std::to_string(n + 1) + " within precision");
    }
  }
}

PhiSpec make_phi_zero(const InductiveSystem& sys) {
  std::vector<RatMat> vals(sys.stage_count());
  for (Index n = 0; n < sys.stage_count(); ++n)
    vals[n] = RatMat::Zero(sys.rank(n), sys.rank(n));
  return PhiSpec(sys, std::move(vals), Rat(0));
}

PhiSpec make_phi_from_hom(const InductiveSystem& sys, const IntMat& g0) {
  if (g0.rows() != sys.rank(0) || g0.cols() != sys.rank(0))
    throw ShapeError("make_phi_from_hom: g0 must be rank(0) x rank(0)");
  std::vector<IntMat> g{g0};
  for (Index n = 0; n + 1 < sys.stage_count(); ++n) {
    // g_{n+1} · map1(n) = map0(n) · g_n, solved through the transpose
    IntMat rhs = (sys.map0(n) * g.back()).transpose();
    auto sol = solve_linear_mat(sys.map1(n).transpose(), rhs);
    if (!sol)
      throw ValidationError("make_phi_from_hom: no integer chain extension at stage " +
                            std::to_string(n));
    g.push_back(sol->transpose());
  }
  std::vector<RatMat> vals(sys.stage_count());
  for (Index n = 0; n < sys.stage_count(); ++n) {
    vals[n] = RatMat(sys.rank(n), sys.rank(n));
    for (Index i = 0; i < sys.rank(n); ++i)
      for (Index j = 0; j < sys.rank(n); ++j)
        vals[n](i, j) = Rat(g[n](i, j), sys.unit_entry(n, i));
  }
  return PhiSpec(sys, std::move(vals), Rat(0));
}

PhiSpec make_phi_theta(const InductiveSystem& sys, const RatVec& theta0) {
  if (theta0.size() != sys.rank(0))
    throw ShapeError("make_phi_theta: one constant per stage-0 basis class");
  std::vector<RatMat> vals(sys.stage_count());
  for (Index n = 0; n < sys.stage_count(); ++n) {
    IntMat comp = sys.compose1(0, n);
    if (comp.rows() != comp.cols() || kernel_basis(comp).cols() != 0)
      throw ValidationError("make_phi_theta: parity-1 maps must be invertible over Z");
    // row vector t with t = theta0^T · comp^{-1}
    auto t = rat_solve(comp.transpose(), theta0);
    if (!t)
      throw ValidationError("make_phi_theta: stage " + std::to_string(n) +
                            " basis does not resolve in the stage-0 basis");
    vals[n] = RatMat(sys.rank(n), sys.rank(n));
    for (Index j = 0; j < sys.rank(n); ++j)
      for (Index i = 0; i < sys.rank(n); ++i) vals[n](i, j) = (*t)(j);
  }
  return PhiSpec(sys, std::move(vals), Rat(0));
}

InductiveSystem make_default_system(Index steps) {
  if (steps < 1) throw ShapeError("make_default_system: need at least one step");
  IntVec unit(2);
  unit << Int(1), Int(1);
  std::vector<IntMat> m0, m1;
  IntVec u = unit;
  for (Index n = 0; n < steps; ++n) {
    Int l = u(0) > u(1) ? u(0) : u(1);
    Int l2 = l * l;
    if (l2 < Int(1)) l2 = Int(1);
    Int c = pow2(static_cast<unsigned long>(n + 2)) * l2;
    IntMat a(2, 2);
    a << c, c + Int(1), c + Int(1), c;
    IntMat b(2, 2);
    if (n % 2 == 0)
      b << Int(1), Int(1), Int(0), Int(1);
    else
      b << Int(1), Int(0), Int(-1), Int(1);
    m0.push_back(a);
    m1.push_back(b);
    u = IntVec(a * u);
  }
  return InductiveSystem(std::move(m0), std::move(m1), unit);
}

Rat BoundsReport::min_slack() const {
  bool first = true;
  Rat best;
  auto take = [&](const Rat& s) {
    if (first || s < best) {
      best = s;
      first = false;
    }
  };
  for (const Rat& s : approx_slack) take(s);
  for (const Rat& s : psi_slack) take(s);
  for (const Int& s : growth_slack) take(Rat(s));
  if (first) throw Error("BoundsReport: empty report has no slack");
  return best;
}

bool BoundsReport::all_positive() const {
  for (const Rat& s : approx_slack)
    if (!(s > Rat(0))) return false;
  for (const Rat& s : psi_slack)
    if (!(s > Rat(0))) return false;
  for (const Int& s : growth_slack)
    if (!(s > Int(0))) return false;
  return true;
}

RealizationCertificate realize_phi(const PhiSpec& phi, Index depth) {
  const InductiveSystem& sys = phi.system;
  const Index top = sys.stage_count() - 1;
  if (!is_admissible(sys))
    throw ValidationError("realize_phi: system does not satisfy the growth condition");
  if (depth < 1 || depth > top - 1)
    throw ShapeError("realize_phi: depth must lie in [1, stages - 2]");

  std::vector<IntMat> h;
  std::vector<Rat> approx_slack;
  for (Index n = 0; n < depth; ++n) {
    const Index kn = sys.rank(n), kn1 = sys.rank(n + 1);
    const Rat coef(Int(1), pow2(static_cast<unsigned long>(n)) * sys.max_unit(n));
    IntMat hn(kn1, kn);
    for (Index j = 0; j < kn; ++j) {
      AffElement target =
          push_forward(AffElement{n, RatVec(phi.values[n].col(j))}, sys, n + 1);
      AffElement dn = dimension_map(StageVector{n, basis_vec(kn, j)}, sys, n + 1);
      AffElement bound{n + 1, RatVec(dn.values.size())};
      for (Index i = 0; i < dn.values.size(); ++i)
        bound.values(i) = coef * dn.values(i);
      auto xi = approx_in_range_D(target, sys, bound, 0);
      if (!xi) {
        // best the stage-(n+1) rounding could achieve, for the error report
        Rat worst;
        bool first = true;
        for (Index i = 0; i < kn1; ++i) {
          const Int den = sys.unit_entry(n + 1, i);
          Int cand = (target.values(i) * Rat(den)).round_nearest();
          Rat slack = bound.values(i) - abs(target.values(i) - Rat(cand, den));
          if (first || slack < worst) {
            worst = slack;
            first = false;
          }
        }
        worst -= phi.precision;
        throw DepthExhausted(static_cast<int>(n), worst.to_double());
      }
      hn.col(j) = xi->coords;
    }
    // certify at the deepest stage, debiting the declared precision so a
    // positive slack bounds the true defect strictly
    Rat stage_slack;
    bool have = false;
    for (Index j = 0; j < kn; ++j) {
      AffElement t_top =
          push_forward(AffElement{n, RatVec(phi.values[n].col(j))}, sys, top);
      AffElement d_top = dimension_map(StageVector{n + 1, IntVec(hn.col(j))}, sys, top);
      AffElement b_top = dimension_map(StageVector{n, basis_vec(kn, j)}, sys, top);
      for (Index i = 0; i < sys.rank(top); ++i) {
        Rat s = coef * b_top.values(i) - abs(t_top.values(i) - d_top.values(i)) -
                phi.precision;
        if (!have || s < stage_slack) {
          stage_slack = s;
          have = true;
        }
      }
    }
    if (!(stage_slack > Rat(0)))
      throw DepthExhausted(static_cast<int>(n), stage_slack.to_double());
    approx_slack.push_back(stage_slack);
    h.push_back(std::move(hn));
  }

  std::vector<IntMat> psi;
  std::vector<Rat> psi_slack;
  for (Index n = 0; n + 1 < depth; ++n) {
    IntMat p = h[n + 1] * sys.map1(n) - sys.map0(n + 1) * h[n];
    IntMat grow = sys.compose0(n, n + 2);
    const Rat coef(Int(2), pow2(static_cast<unsigned long>(n)) * sys.max_unit(n));
    Rat slack;
    bool first = true;
    for (Index i = 0; i < p.rows(); ++i)
      for (Index j = 0; j < p.cols(); ++j) {
        Rat s = coef * Rat(grow(i, j)) - Rat(abs(p(i, j)));
        if (first || s < slack) {
          slack = s;
          first = false;
        }
      }
    if (!(slack > Rat(0)))
      throw DepthExhausted(static_cast<int>(n), slack.to_double());
    psi_slack.push_back(slack);
    psi.push_back(std::move(p));
  }

  std::vector<Int> growth_slack;
  for (Index n = 0; n < sys.map_count(); ++n) {
    const IntMat& m0 = sys.map0(n);
    const IntMat& m1 = sys.map1(n);
    const Int thr = pow2(static_cast<unsigned long>(n + 1));
    Int worst;
    bool first = true;
    for (Index i = 0; i < m0.rows(); ++i)
      for (Index j = 0; j < m0.cols(); ++j) {
        Int need = abs(m1(i, j));
        if (need < Int(1)) need = Int(1);
        Int s = m0(i, j) - thr * need;
        if (first || s < worst) {
          worst = s;
          first = false;
        }
      }
    growth_slack.push_back(worst);
  }

  Ambient amb(sys, 0, top);
  BoundsReport report{std::move(approx_slack), std::move(psi_slack),
                      std::move(growth_slack)};
  return RealizationCertificate{CochainSequence(amb, std::move(h)), std::move(psi),
                                std::move(report)};
}

TelescopeReport telescoping_check(const RealizationCertificate& cert,
                                  const PhiSpec& phi, Index stage) {
  const Ambient& amb = cert.h.ambient;
  const InductiveSystem& sys = amb.system();
  const Index depth = static_cast<Index>(cert.h.h.size());
  if (stage < 0 || stage >= depth)
    throw ShapeError("telescoping_check: stage must lie in [0, depth)");
  if (static_cast<Index>(phi.values.size()) != sys.stage_count() ||
      phi.values[stage].rows() != sys.rank(stage))
    throw ShapeError("telescoping_check: phi does not match the certificate's system");

  const Index top = amb.eval_stage();
  const Index ks = sys.rank(stage), kt = sys.rank(top);
  RatMat lhs = RatMat::Zero(kt, ks), rhs = RatMat::Zero(kt, ks);

  const Index last_psi = static_cast<Index>(cert.psi.size()) - 1;
  for (Index k = stage; k <= last_psi; ++k) {
    IntMat term = sys.compose0(k + 2, top) * cert.psi[k] * sys.compose1(stage, k);
    for (Index i = 0; i < kt; ++i)
      for (Index j = 0; j < ks; ++j) lhs(i, j) += Rat(term(i, j), sys.unit_entry(top, i));
  }
  for (Index j = 0; j < ks; ++j) {
    AffElement t_top =
        push_forward(AffElement{stage, RatVec(phi.values[stage].col(j))}, sys, top);
    AffElement d_top =
        dimension_map(StageVector{stage + 1, IntVec(cert.h.h[stage].col(j))}, sys, top);
    for (Index i = 0; i < kt; ++i) rhs(i, j) = t_top.values(i) - d_top.values(i);
  }

  Rat gap(0);
  for (Index i = 0; i < kt; ++i)
    for (Index j = 0; j < ks; ++j) {
      Rat d = abs(lhs(i, j) - rhs(i, j));
      if (d > gap) gap = d;
    }

  // Tail bound: the uncancelled term is a single stage-(depth-1) defect; the
  // declared precision enters once per stage, amplified by the parity-1
  // column mass it rides through.
  Rat bound(Int(1), pow2(static_cast<unsigned long>(depth - 1)));
  for (Index n = stage; n < depth; ++n) {
    IntMat c1 = sys.compose1(stage, n);
    Int mass(0);
    for (Index j = 0; j < c1.cols(); ++j) {
      Int s(0);
      for (Index i = 0; i < c1.rows(); ++i) s += abs(c1(i, j));
      if (s > mass) mass = s;
    }
    if (mass < Int(1)) mass = Int(1);
    bound += Rat(2) * phi.precision * Rat(mass);
  }

  return TelescopeReport{std::move(lhs), std::move(rhs), gap, bound, gap <= bound};
}

RotationAlgebraModel::RotationAlgebraModel(Rat theta_, Rat surrogate_error_, Rat tol_,
                                           long long qmax_)
    : theta(std::move(theta_)),
      surrogate_error(std::move(surrogate_error_)),
      tol(std::move(tol_)),
      qmax(qmax_) {
  if (!(theta > Rat(0)) || !(theta < Rat(1)))
    throw ValidationError("RotationAlgebraModel: theta must lie in (0, 1)");
  if (qmax < 1) throw ValidationError("RotationAlgebraModel: qmax must be positive");
  if (surrogate_error < Rat(0))
    throw ValidationError("RotationAlgebraModel: negative surrogate error");
  const Rat need(Int(1), Int(100) * Int(qmax) * Int(qmax));
  if (!(surrogate_error < need))
    throw ValidationError("RotationAlgebraModel: theta surrogate too coarse for qmax");
  if (!(tol > Rat(0))) throw ValidationError("RotationAlgebraModel: tol must be positive");
}

RotationAlgebraModel make_golden_model(long long qmax, const Rat& tol) {
  // (sqrt(5)-1)/2 as a deep Fibonacci quotient; the true distance is ~7.7e-16
  return RotationAlgebraModel(Rat(Int(14930352), Int(24157817)),
                              Rat(Int(1), Int(std::string("1000000000000000"))), tol,
                              qmax);
}

LatticeApproach nearest_lattice_point(const RotationAlgebraModel& model, const Rat& r) {
  // Denominators of the best rational approximations of theta, by the Euclidean
  // recursion on numerator/denominator; they size the search blocks below.
  std::vector<long long> qs;
  {
    long long q_prev = 0, q_cur = 1;
    qs.push_back(q_cur);
    Int u = model.theta.denominator(), v = model.theta.numerator();
    while (v > Int(0)) {
      Int d = floor_div(u, v);
      Int q_new = d * Int(q_cur) + Int(q_prev);
      if (q_new > Int(model.qmax)) break;
      q_prev = q_cur;
      q_cur = q_new.to_ll();
      qs.push_back(q_cur);
      Int rem = u - d * v;
      u = v;
      v = rem;
    }
  }

  const long long total = 2 * model.qmax + 1;  // coefficients b in [-qmax, qmax]

  // Block width: prefer the approximation denominator balancing block count
  // against block width; fall back to ceil(sqrt(total)) when theta has no
  // denominator near that scale.
  long long side = std::max<long long>(1, static_cast<long long>(std::sqrt(double(total))));
  while (side * side < total) ++side;
  while (side > 1 && (side - 1) * (side - 1) >= total) --side;
  long long m = side;
  const long long plain_cost = side + (total + side - 1) / side;
  long long conv_cost = -1;
  for (long long q : qs) {
    const long long cost = q + (total + q - 1) / q;
    if (conv_cost < 0 || cost < conv_cost) {
      conv_cost = cost;
      m = q;
    }
  }
  if (conv_cost < 0 || conv_cost > 4 * plain_cost) m = side;

  auto fractional = [](const Rat& x) { return x - Rat(x.floor()); };

  // Offsets {v·theta mod 1 : 0 <= v < m} in sorted order.  When m is an
  // approximation denominator these points carve the circle into gaps of at
  // most three distinct lengths, so each block reduces to one binary search
  // for the cyclic neighbours of its target.
  std::vector<std::pair<Rat, long long>> table;
  table.reserve(static_cast<size_t>(m));
  {
    Rat acc(0);
    for (long long v = 0; v < m; ++v) {
      table.emplace_back(acc, v);
      acc = fractional(acc + model.theta);
    }
  }
  std::sort(table.begin(), table.end(),
            [](const auto& lhs, const auto& rhs) { return lhs.first < rhs.first; });

  long long best_b = 0;
  Rat best_d;
  bool have = false;
  auto consider = [&](const Rat& wrapped, long long b) {
    Rat ad = abs(wrapped);
    Rat d = Rat(1) - ad;  // circle distance: min(|w|, 1 - |w|)
    if (ad < d) d = ad;
    if (!have || d < best_d) {
      have = true;
      best_d = d;
      best_b = b;
    }
  };

  // Every b in [-qmax, qmax] is visited exactly once as -qmax + u·m + v.
  const long long full_blocks = total / m;
  Rat g = fractional(r + Rat(Int(model.qmax)) * model.theta);
  const Rat step = fractional(Rat(Int(m)) * model.theta);
  for (long long u = 0; u < full_blocks; ++u) {
    auto it = std::lower_bound(
        table.begin(), table.end(), g,
        [](const std::pair<Rat, long long>& entry, const Rat& key) { return entry.first < key; });
    const size_t hi = (it == table.end()) ? 0 : static_cast<size_t>(it - table.begin());
    const size_t lo = (hi == 0) ? table.size() - 1 : hi - 1;
    for (size_t idx : {lo, hi}) {
      consider(g - table[idx].first, -model.qmax + u * m + table[idx].second);
    }
    g = fractional(g - step);
  }
  for (long long idx = full_blocks * m; idx < total; ++idx) {  // trailing partial block
    consider(g, -model.qmax + idx);
    g = fractional(g - model.theta);
  }

  Rat shifted = r - Rat(Int(best_b)) * model.theta;
  Int a = shifted.round_nearest();
  return LatticeApproach{a, Int(best_b), shifted - Rat(a)};
}

RatVec ClassifyResult::representative() const {
  RatVec rep(2);
  rep(0) = first.residue;
  rep(1) = second.residue;
  return rep;
}

ClassifyResult classify_rotation_algebra(const RotationAlgebraModel& model,
                                         const Rat& r1, const Rat& r2) {
  LatticeApproach a1 = nearest_lattice_point(model, r1);
  LatticeApproach a2 = nearest_lattice_point(model, r2);
  const Rat d1 = abs(a1.residue), d2 = abs(a2.residue);
  const Rat two_tol = Rat(2) * model.tol;
  LatticeVerdict v;
  if (d1 >= two_tol || d2 >= two_tol)
    v = LatticeVerdict::NonTrivial;  // one component is clearly outside
  else if (d1 <= model.tol && d2 <= model.tol)
    v = LatticeVerdict::Trivial;
  else
    v = LatticeVerdict::Undecided;  // inside the band the surrogate could flip it
  return ClassifyResult{v, std::move(a1), std::move(a2)};
}

KerQReport ker_q_resolution(const FGAbelianGroup& g0, const FGAbelianGroup& g1,
                            const RatMat& d) {
  if (!g0.torsion().empty())
    throw ValidationError("ker_q_resolution: G0 must be free (a K0 lattice model)");
  if (d.cols() != g0.generator_count())
    throw ShapeError("ker_q_resolution: D needs one column per G0 generator");
  const Index adim = d.rows();

  IntMat dz = cleared(d, common_denominator(d));
  IntMat K = kernel_basis(dz);

  HomGroup H = hom_group(g1, g0);
  const Index nhom = static_cast<Index>(H.basis.size());
  const Index g1g = g1.generator_count();

  // values of D∘F over the hom basis, flattened column-major
  RatMat w(adim * g1g, nhom);
  for (Index t = 0; t < nhom; ++t) {
    RatMat df = d * to_rational(H.basis[t].matrix());
    for (Index j = 0; j < g1g; ++j)
      for (Index i = 0; i < adim; ++i) w(j * adim + i, t) = df(i, j);
  }

  std::vector<IntMat> kernel_gens, witnesses;
  bool middle = true;
  IntMat killers =
      nhom == 0 ? IntMat(0, 0) : kernel_basis(cleared(w, common_denominator(w)));
  for (Index c = 0; c < killers.cols(); ++c) {
    IntMat f = IntMat::Zero(g0.generator_count(), g1g);
    for (Index t = 0; t < nhom; ++t) f += killers(t, c) * H.basis[t].matrix();
    kernel_gens.push_back(f);
    auto wit = solve_linear_mat(K, f);
    if (wit) {
      witnesses.push_back(*wit);
    } else {
      middle = false;
      witnesses.push_back(IntMat(K.cols(), 0));
    }
  }

  // Injectivity of composing with the kernel inclusion
  bool injective = true;
  if (K.cols() > 0) {
    HomGroup hk = hom_group(g1, FGAbelianGroup::free_group(K.cols()));
    const Index nk = static_cast<Index>(hk.basis.size());
    IntMat wi(g0.generator_count() * g1g, nk);
    for (Index t = 0; t < nk; ++t) wi.col(t) = vectorize(IntMat(K * hk.basis[t].matrix()));
    injective = kernel_basis(wi).cols() == 0;
  }

  return KerQReport{injective,
                    middle,
                    std::move(kernel_gens),
                    std::move(witnesses),
                    adim * g1.free_rank(),
                    std::move(w)};
}

}  // namespace okt
