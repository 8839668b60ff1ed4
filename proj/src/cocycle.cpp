#include <okt/cocycle.hpp>

#include <utility>

namespace okt {

namespace {

void check_chain_shapes(const Ambient& amb, const std::vector<IntMat>& mats,
                        Index rows_expected, const char* what) {
  const InductiveSystem& sys = amb.system();
  if (static_cast<Index>(mats.size()) > sys.stage_count())
    throw ShapeError(std::string(what) + ": more entries than system stages");
  for (Index n = 0; n < static_cast<Index>(mats.size()); ++n) {
    if (mats[n].rows() != rows_expected || mats[n].cols() != sys.rank(n))
      throw ShapeError(std::string(what) + ": entry " + std::to_string(n) +
                       " has wrong shape");
  }
}

}  // namespace

CochainSequence::CochainSequence(Ambient amb, std::vector<IntMat> h_)
    : ambient(std::move(amb)), h(std::move(h_)) {
  const InductiveSystem& sys = ambient.system();
  if (static_cast<Index>(h.size()) > sys.stage_count())
    throw ShapeError("cochain: more entries than system stages");
  for (Index n = 0; n < static_cast<Index>(h.size()); ++n)
    if (h[n].cols() != sys.rank(n))
      throw ShapeError("cochain: entry " + std::to_string(n) +
                       " column count does not match the stage rank");
}

CocycleSequence::CocycleSequence(Ambient amb, std::vector<IntMat> psi0_,
                                 std::vector<IntMat> psi1_)
    : ambient(std::move(amb)), psi0(std::move(psi0_)), psi1(std::move(psi1_)) {
  check_chain_shapes(ambient, psi0, ambient.g0_rank(), "cocycle psi0");
  check_chain_shapes(ambient, psi1, ambient.aff_dim(), "cocycle psi1");
  if (static_cast<Index>(psi0.size()) > ambient.system().map_count())
    throw ShapeError("cocycle psi0: more entries than connecting maps");
  // every psi0 value must be a ker-D class
  for (std::size_t n = 0; n < psi0.size(); ++n) {
    RatMat img = ambient.d_matrix() * to_rational(psi0[n]);
    for (Index i = 0; i < img.rows(); ++i)
      for (Index j = 0; j < img.cols(); ++j)
        if (!img(i, j).is_zero())
          throw ValidationError("cocycle psi0: column " + std::to_string(j) +
                                " at stage " + std::to_string(n) +
                                " is not in ker D");
  }
}

CocycleSequence cocycle_from_cochain(const CochainSequence& hc) {
  const Ambient& amb = hc.ambient;
  const InductiveSystem& sys = amb.system();
  if (hc.h.size() < 2) throw ShapeError("cochain too short to form a coboundary");
  for (const IntMat& m : hc.h)
    if (m.rows() != amb.g0_rank())
      throw ShapeError("primary cochain values must live in class-stage K0 coordinates");
  std::vector<IntMat> psi0;
  for (std::size_t n = 0; n + 1 < hc.h.size(); ++n) {
    IntMat diff = hc.h[n] - hc.h[n + 1] * sys.map1(static_cast<Index>(n));
    for (Index j = 0; j < diff.cols(); ++j)
      diff.col(j) *= sys.unit_entry(static_cast<Index>(n), j);
    psi0.push_back(std::move(diff));
  }
  return CocycleSequence(amb, std::move(psi0));
}

SolveCocycleResult solve_cocycle(const CocycleSequence& psi, Index depth) {
  const Ambient& amb = psi.ambient;
  const InductiveSystem& sys = amb.system();
  if (depth < 1 || depth > static_cast<Index>(psi.psi0.size()))
    throw ShapeError("solve_cocycle: depth exceeds the available cocycle stages");
  if (depth + 1 > sys.stage_count())
    throw ShapeError("solve_cocycle: depth exceeds the available system stages");

  std::vector<IntMat> h(static_cast<std::size_t>(depth) + 1);
  h[static_cast<std::size_t>(depth)] = IntMat::Zero(amb.g0_rank(), sys.rank(depth));
  for (Index n = depth - 1; n >= 0; --n) {
    IntMat carried = h[static_cast<std::size_t>(n) + 1] * sys.map1(n);
    IntMat hn = carried;
    for (Index j = 0; j < sys.rank(n); ++j) {
      Int scale = sys.unit_entry(n, j);
      for (Index i = 0; i < amb.g0_rank(); ++i) {
        const Int& v = psi.psi0[static_cast<std::size_t>(n)](i, j);
        if (!divides(scale, v)) {
          SolveCocycleResult miss;
          miss.fail_stage = n;
          miss.fail_index = j;
          return miss;
        }
        hn(i, j) += divexact(v, scale);
      }
    }
    h[static_cast<std::size_t>(n)] = std::move(hn);
  }

  // re-verify the defining identity on scaled classes, exactly
  for (Index n = 0; n < depth; ++n) {
    IntMat diff = h[static_cast<std::size_t>(n)] -
                  h[static_cast<std::size_t>(n) + 1] * sys.map1(n);
    for (Index j = 0; j < diff.cols(); ++j) {
      diff.col(j) *= sys.unit_entry(n, j);
      for (Index i = 0; i < diff.rows(); ++i)
        if (diff(i, j) != psi.psi0[static_cast<std::size_t>(n)](i, j))
          throw Error("solve_cocycle: internal identity re-verification failed");
    }
  }

  SolveCocycleResult out;
  out.h = CochainSequence(amb, std::move(h));
  return out;
}

CochainSequence solve_cocycle_mirror(const CocycleSequence& psi, Index depth) {
  const Ambient& amb = psi.ambient;
  const InductiveSystem& sys = amb.system();
  if (depth < 1 || depth > static_cast<Index>(psi.psi1.size()))
    throw ShapeError("solve_cocycle_mirror: depth exceeds the mirror stages");
  if (depth + 1 > sys.stage_count())
    throw ShapeError("solve_cocycle_mirror: depth exceeds the system stages");
  std::vector<IntMat> h(static_cast<std::size_t>(depth) + 1);
  h[static_cast<std::size_t>(depth)] = IntMat::Zero(amb.aff_dim(), sys.rank(depth));
  for (Index n = depth - 1; n >= 0; --n)
    h[static_cast<std::size_t>(n)] =
        psi.psi1[static_cast<std::size_t>(n)] +
        h[static_cast<std::size_t>(n) + 1] * sys.map0(n);
  return CochainSequence(amb, std::move(h));
}

OrderExtension assemble_stage_extension(const CocycleSequence& psi, Index depth) {
  const Ambient& amb = psi.ambient;
  const InductiveSystem& sys = amb.system();
  if (depth < 2) throw ShapeError("assemble_stage_extension: depth must be >= 2");
  if (depth > sys.stage_count())
    throw ShapeError("assemble_stage_extension: depth exceeds the system stages");
  if (depth - 1 > static_cast<Index>(psi.psi0.size()))
    throw ShapeError("assemble_stage_extension: not enough cocycle stages");

  const Index g0 = amb.g0_rank();
  std::vector<Index> offset(static_cast<std::size_t>(depth));
  Index sections = 0;
  for (Index n = 0; n < depth; ++n) {
    offset[static_cast<std::size_t>(n)] = g0 + sections;
    sections += sys.rank(n);
  }
  const Index gens = g0 + sections;

  Index rel_count = 0;
  for (Index n = 0; n + 1 < depth; ++n) rel_count += sys.rank(n);
  IntMat rel = IntMat::Zero(rel_count, gens);
  Index row = 0;
  for (Index n = 0; n + 1 < depth; ++n) {
    const IntMat& step = sys.map1(n);
    for (Index j = 0; j < sys.rank(n); ++j, ++row) {
      Int scale = sys.unit_entry(n, j);
      for (Index i = 0; i < g0; ++i)
        rel(row, i) = -psi.psi0[static_cast<std::size_t>(n)](i, j);
      rel(row, offset[static_cast<std::size_t>(n)] + j) = scale;
      for (Index i = 0; i < sys.rank(n + 1); ++i)
        rel(row, offset[static_cast<std::size_t>(n) + 1] + i) -= scale * step(i, j);
      // store the relation primitively: for consistent data this recovers the
      // unscaled class relation, otherwise the residue is the obstruction
      Int content(0);
      for (Index c = 0; c < gens; ++c) content = gcd(content, rel(row, c));
      if (content > Int(1))
        for (Index c = 0; c < gens; ++c) rel(row, c) = divexact(rel(row, c), content);
    }
  }

  FGAbelianGroup g0_group = FGAbelianGroup::free_group(g0);
  FGAbelianGroup e(rel);
  IntMat iota_m = IntMat::Zero(gens, g0);
  iota_m.topLeftCorner(g0, g0) = IntMat::Identity(g0, g0);
  IntMat g1_rel = rel.rightCols(sections);
  FGAbelianGroup g1(g1_rel);
  IntMat q_m = IntMat::Zero(sections, gens);
  q_m.rightCols(sections) = IntMat::Identity(sections, sections);

  ExtensionPresentation pres(g0_group, e, g1, GroupHom(g0_group, e, iota_m),
                             GroupHom(e, g1, q_m));
  RatMat rmap = RatMat::Zero(amb.aff_dim(), gens);
  rmap.leftCols(g0) = amb.d_matrix();
  return OrderExtension(amb, pres, rmap);
}

}  // namespace okt
