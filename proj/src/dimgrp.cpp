#include <okt/dimgrp.hpp>

namespace okt {

InductiveSystem::InductiveSystem(std::vector<IntMat> maps0, std::vector<IntMat> maps1,
                                 IntVec unit0)
    : maps0_(std::move(maps0)), maps1_(std::move(maps1)) {
  if (maps0_.size() != maps1_.size())
    throw ShapeError("InductiveSystem: maps0 and maps1 lengths differ");
  if (unit0.size() == 0) throw ShapeError("InductiveSystem: empty unit");
  for (Index i = 0; i < unit0.size(); ++i)
    if (unit0(i) < Int(1)) throw ValidationError("InductiveSystem: unit entries must be >= 1");
  Index k = unit0.size();
  for (std::size_t n = 0; n < maps0_.size(); ++n) {
    const IntMat& m0 = maps0_[n];
    const IntMat& m1 = maps1_[n];
    if (m0.cols() != k)
      throw ShapeError("InductiveSystem: map0 column count breaks the stage chain");
    if (m1.rows() != m0.rows() || m1.cols() != m0.cols())
      throw ShapeError("InductiveSystem: map1 shape differs from map0");
    for (Index i = 0; i < m0.rows(); ++i)
      for (Index j = 0; j < m0.cols(); ++j)
        if (m0(i, j) < Int(1))
          throw ValidationError("InductiveSystem: map0 entries must be >= 1");
    k = m0.rows();
  }
  units_.push_back(unit0);
  for (const IntMat& m0 : maps0_) units_.push_back(IntVec(m0 * units_.back()));
}

Index InductiveSystem::rank(Index stage) const { return unit(stage).size(); }

const IntMat& InductiveSystem::map0(Index n) const {
  if (n < 0 || n >= map_count()) throw ShapeError("InductiveSystem: map index out of range");
  return maps0_[static_cast<std::size_t>(n)];
}

const IntMat& InductiveSystem::map1(Index n) const {
  if (n < 0 || n >= map_count()) throw ShapeError("InductiveSystem: map index out of range");
  return maps1_[static_cast<std::size_t>(n)];
}

IntMat InductiveSystem::compose0(Index from, Index to) const {
  if (from < 0 || to < from || to >= stage_count())
    throw ShapeError("InductiveSystem: compose0 stage range invalid");
  IntMat acc = IntMat::Identity(rank(from), rank(from));
  for (Index n = from; n < to; ++n) acc = map0(n) * acc;
  return acc;
}

IntMat InductiveSystem::compose1(Index from, Index to) const {
  if (from < 0 || to < from || to >= stage_count())
    throw ShapeError("InductiveSystem: compose1 stage range invalid");
  IntMat acc = IntMat::Identity(rank(from), rank(from));
  for (Index n = from; n < to; ++n) acc = map1(n) * acc;
  return acc;
}

const IntVec& InductiveSystem::unit(Index stage) const {
  if (stage < 0 || stage >= stage_count())
    throw ShapeError("InductiveSystem: stage out of range");
  return units_[static_cast<std::size_t>(stage)];
}

Int InductiveSystem::unit_entry(Index stage, Index i) const {
  const IntVec& u = unit(stage);
  if (i < 0 || i >= u.size()) throw ShapeError("InductiveSystem: unit index out of range");
  return u(i);
}

Int InductiveSystem::max_unit(Index stage) const {
  const IntVec& u = unit(stage);
  Int m = u(0);
  for (Index i = 1; i < u.size(); ++i)
    if (u(i) > m) m = u(i);
  return m;
}

InductiveSystem InductiveSystem::repeated(Index copies) const {
  if (rank(stage_count() - 1) != rank(0))
    throw ShapeError("InductiveSystem::repeated: chain ends have different ranks");
  std::vector<IntMat> m0, m1;
  for (Index c = 0; c < copies; ++c) {
    m0.insert(m0.end(), maps0_.begin(), maps0_.end());
    m1.insert(m1.end(), maps1_.begin(), maps1_.end());
  }
  return InductiveSystem(std::move(m0), std::move(m1), units_.front());
}

StageVector push_forward(const StageVector& x, const InductiveSystem& sys,
                         Index target_stage, int parity) {
  if (parity != 0 && parity != 1) throw ValidationError("push_forward: parity must be 0 or 1");
  if (target_stage < x.stage || target_stage >= sys.stage_count())
    throw ShapeError("push_forward: target stage out of range");
  if (x.coords.size() != sys.rank(x.stage))
    throw ShapeError("push_forward: coordinate length mismatch");
  IntMat m = parity == 0 ? sys.compose0(x.stage, target_stage)
                         : sys.compose1(x.stage, target_stage);
  return StageVector{target_stage, IntVec(m * x.coords)};
}

AffElement push_forward(const AffElement& a, const InductiveSystem& sys, Index target_stage) {
  if (target_stage < a.stage || target_stage >= sys.stage_count())
    throw ShapeError("push_forward: target stage out of range");
  if (a.values.size() != sys.rank(a.stage))
    throw ShapeError("push_forward: value length mismatch");
  RatVec vals = a.values;
  for (Index n = a.stage; n < target_stage; ++n) {
    const IntMat& m0 = sys.map0(n);
    RatVec next(m0.rows());
    for (Index i = 0; i < m0.rows(); ++i) {
      Rat acc(0);
      for (Index j = 0; j < m0.cols(); ++j)
        acc += Rat(m0(i, j) * sys.unit_entry(n, j)) * vals(j);
      next(i) = acc / Rat(sys.unit_entry(n + 1, i));
    }
    vals = next;
  }
  return AffElement{target_stage, vals};
}

TraceFunctional::TraceFunctional(const InductiveSystem& sys, Index stage, RatVec weights)
    : stage_(stage), weights_(std::move(weights)) {
  if (stage < 0 || stage >= sys.stage_count())
    throw ShapeError("TraceFunctional: stage out of range");
  if (weights_.size() != sys.rank(stage))
    throw ShapeError("TraceFunctional: weight length mismatch");
  Rat total(0);
  for (Index j = 0; j < weights_.size(); ++j) {
    if (weights_(j) < Rat(0)) throw ValidationError("TraceFunctional: negative weight");
    total += weights_(j) * Rat(sys.unit_entry(stage, j));
  }
  if (!(total == Rat(1)))
    throw ValidationError("TraceFunctional: weights do not normalize the unit to 1");
}

Rat TraceFunctional::evaluate_class(const InductiveSystem& sys, const StageVector& x) const {
  StageVector pushed = push_forward(x, sys, stage_, 0);
  Rat acc(0);
  for (Index j = 0; j < weights_.size(); ++j) acc += weights_(j) * Rat(pushed.coords(j));
  return acc;
}

Rat TraceFunctional::evaluate_aff(const InductiveSystem& sys, const AffElement& a) const {
  AffElement pushed = push_forward(a, sys, stage_);
  Rat acc(0);
  for (Index j = 0; j < weights_.size(); ++j)
    acc += weights_(j) * Rat(sys.unit_entry(stage_, j)) * pushed.values(j);
  return acc;
}

TraceFunctional make_extreme_trace(const InductiveSystem& sys, Index stage, Index j) {
  if (j < 0 || j >= sys.rank(stage))
    throw ShapeError("make_extreme_trace: block index out of range");
  RatVec w = RatVec::Zero(sys.rank(stage));
  w(j) = Rat(Int(1), sys.unit_entry(stage, j));
  return TraceFunctional(sys, stage, w);
}

AffElement dimension_map(const StageVector& a, const InductiveSystem& sys, Index eval_stage) {
  StageVector pushed = push_forward(a, sys, eval_stage, 0);
  RatVec vals(pushed.coords.size());
  for (Index j = 0; j < vals.size(); ++j)
    vals(j) = Rat(pushed.coords(j), sys.unit_entry(eval_stage, j));
  return AffElement{eval_stage, vals};
}

std::optional<StageVector> approx_in_range_D(const AffElement& target,
                                             const InductiveSystem& sys,
                                             const AffElement& bound,
                                             Index search_depth) {
  for (Index j = 0; j < bound.values.size(); ++j)
    if (!(bound.values(j) > Rat(0)))
      throw ValidationError("approx_in_range_D: bound must be strictly positive");
  Index start = std::max(target.stage, bound.stage);
  Index last = std::min(start + search_depth, sys.stage_count() - 1);
  for (Index s = start; s <= last; ++s) {
    AffElement t = push_forward(target, sys, s);
    AffElement b = push_forward(bound, sys, s);
    IntVec xi(sys.rank(s));
    bool ok = true;
    for (Index j = 0; j < xi.size(); ++j) {
      const Int den = sys.unit_entry(s, j);
      // nearest lattice point of target_j·[s,j]; per-coordinate this is the
      // best possible stage-s candidate
      xi(j) = (t.values(j) * Rat(den)).round_nearest();
      Rat err = abs(t.values(j) - Rat(xi(j), den));
      if (!(err < b.values(j))) {
        ok = false;
        break;
      }
    }
    if (ok) return StageVector{s, xi};
  }
  return std::nullopt;
}

bool is_admissible(const InductiveSystem& sys) {
  for (Index n = 0; n < sys.map_count(); ++n) {
    const IntMat& m0 = sys.map0(n);
    const IntMat& m1 = sys.map1(n);
    Int thresh = pow2(static_cast<unsigned long>(n + 1));
    for (Index i = 0; i < m0.rows(); ++i)
      for (Index j = 0; j < m0.cols(); ++j) {
        Int need = abs(m1(i, j));
        if (need < Int(1)) need = Int(1);
        if (m0(i, j) < thresh * need) return false;
      }
  }
  return true;
}

InductiveSystem make_admissible_system(const InductiveSystem& seed, Index depth) {
  std::vector<IntMat> out0, out1;
  Index cur = 0;
  for (Index n = 0; n < depth; ++n) {
    Int thresh = pow2(static_cast<unsigned long>(n + 1));
    bool placed = false;
    for (Index end = cur + 1; end < seed.stage_count(); ++end) {
      IntMat b0 = seed.compose0(cur, end);
      IntMat b1 = seed.compose1(cur, end);
      bool ok = true;
      for (Index i = 0; i < b0.rows() && ok; ++i)
        for (Index j = 0; j < b0.cols() && ok; ++j) {
          if (b0(i, j) < Int(1))
            throw ValidationError(
                "make_admissible_system: composed map has a nonpositive entry");
          Int need = abs(b1(i, j));
          if (need < Int(1)) need = Int(1);
          if (b0(i, j) < thresh * need) ok = false;
        }
      if (ok) {
        out0.push_back(b0);
        out1.push_back(b1);
        cur = end;
        placed = true;
        break;
      }
    }
    if (!placed)
      throw ValidationError(
          "make_admissible_system: seed depth exhausted before the growth "
          "condition was met; provide a deeper or faster-growing seed");
  }
  return InductiveSystem(std::move(out0), std::move(out1), seed.unit(0));
}

}  // namespace okt
