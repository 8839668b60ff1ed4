#include <okt/cli.hpp>

#include <okt/cocycle.hpp>
#include <okt/snf.hpp>

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <thread>

namespace okt {

namespace {

// --- input bytes and digest -----------------------------------------------

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open input file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

constexpr std::uint64_t kFnvOffset = 14695981039346656037ull;
constexpr std::uint64_t kFnvPrime = 1099511628211ull;

std::uint64_t fnv1a(std::uint64_t h, const std::string& bytes) {
  for (unsigned char c : bytes) {
    h ^= c;
    h *= kFnvPrime;
  }
  return h;
}

std::string digest_string(std::uint64_t h) {
  static const char* hex = "0123456789abcdef";
  std::string s = "fnv1a:";
  for (int shift = 60; shift >= 0; shift -= 4) s += hex[(h >> shift) & 0xf];
  return s;
}

// --- parameter access ------------------------------------------------------

long long parse_count_text(const std::string& name, const std::string& text) {
  auto fail = [&]() -> long long {
    throw ValidationError("parameter '" + name + "': expected a nonnegative integer, got '" +
                          text + "'");
  };
  const auto caret = text.find('^');
  Int value(0);
  if (caret != std::string::npos) {
    const std::string base_s = text.substr(0, caret);
    const std::string exp_s = text.substr(caret + 1);
    if (base_s.empty() || exp_s.empty()) return fail();
    if (base_s.find_first_not_of("0123456789") != std::string::npos) return fail();
    if (exp_s.find_first_not_of("0123456789") != std::string::npos) return fail();
    if (exp_s.size() > 2) return fail();
    const Int base(base_s);
    long long exp = Int(exp_s).to_ll();
    value = Int(1);
    for (long long i = 0; i < exp; ++i) {
      value = value * base;
      if (value > Int("1000000000000000000")) return fail();
    }
  } else {
    Rat r(0);
    try {
      r = parse_rational_text(text);
    } catch (const Error&) {
      return fail();
    }
    if (!r.is_integer()) return fail();
    value = r.numerator();
  }
  if (value.sign() < 0 || !value.fits_ll()) return fail();
  return value.to_ll();
}

/// Flag values for one verb; rejects keys the verb does not understand.
class Params {
 public:
  Params(const std::map<std::string, std::string>& kv,
         std::initializer_list<const char*> allowed)
      : kv_(kv) {
    for (const auto& [key, value] : kv_) {
      (void)value;
      if (key == "seed") continue;  // accepted everywhere, reserved
      if (std::find_if(allowed.begin(), allowed.end(),
                       [&](const char* a) { return key == a; }) == allowed.end())
        throw ValidationError("unknown parameter '" + key + "'");
    }
  }

  bool has(const std::string& name) const { return kv_.count(name) != 0; }

  std::string require(const std::string& name) const {
    auto it = kv_.find(name);
    if (it == kv_.end()) throw ValidationError("missing required parameter '" + name + "'");
    return it->second;
  }

  std::string str(const std::string& name, const std::string& fallback) const {
    auto it = kv_.find(name);
    return it == kv_.end() ? fallback : it->second;
  }

  long long count(const std::string& name, long long fallback) const {
    auto it = kv_.find(name);
    if (it == kv_.end()) return fallback;
    return parse_count_text(name, it->second);
  }

  Rat rat(const std::string& name, const char* fallback_text) const {
    const std::string text = str(name, fallback_text);
    try {
      return parse_rational_text(text);
    } catch (const Error&) {
      throw ValidationError("parameter '" + name + "': malformed rational '" + text + "'");
    }
  }

  double real(const std::string& name, double fallback) const {
    auto it = kv_.find(name);
    if (it == kv_.end()) return fallback;
    return rat(name, "").to_double();
  }

 private:
  const std::map<std::string, std::string>& kv_;
};

// --- verb dispatch ---------------------------------------------------------

struct VerbOutcome {
  Json result = Json::object();
  Json diagnostics = Json::object();
  int exit_code = 0;
};

void need_inputs(const JobSpec& job, std::size_t n) {
  if (job.inputs.size() != n)
    throw ValidationError("verb '" + job.verb + "' expects " + std::to_string(n) +
                          " input file(s), got " + std::to_string(job.inputs.size()));
}

Json orders_json(const std::vector<Int>& orders) {
  Json a = Json::array();
  for (const Int& o : orders) a.push_back(int_to_json(o));
  return a;
}

Json optional_hom_matrix(const std::optional<GroupHom>& h) {
  if (!h) return nullptr;
  return write_int_matrix(h->matrix());
}

VerbOutcome verb_snf(const JobSpec& job, const std::vector<Json>& docs) {
  need_inputs(job, 1);
  Params p(job.params, {});
  const IntMat a = read_int_matrix(docs[0]);
  const SmithDecomposition<Int> dec = smith_normal_form(a);
  VerbOutcome o;
  o.result["u"] = write_int_matrix(dec.u);
  o.result["s"] = write_int_matrix(dec.s);
  o.result["v"] = write_int_matrix(dec.v);
  o.result["u_inv"] = write_int_matrix(dec.u_inv);
  o.result["v_inv"] = write_int_matrix(dec.v_inv);
  o.diagnostics["rank"] = static_cast<long long>(dec.rank);
  o.diagnostics["invariant_factors"] = orders_json(dec.diag);
  return o;
}

VerbOutcome verb_ext(const JobSpec& job, const std::vector<Json>& docs) {
  need_inputs(job, 2);
  Params p(job.params, {});
  const FGAbelianGroup source = read_group(docs[0]);
  const FGAbelianGroup target = read_group(docs[1]);
  const ExtGroup eg = ext_group(source, target);
  VerbOutcome o;
  o.result["group"] = write_group(eg.group);
  o.result["description"] = eg.group.describe();
  Json orders = Json::array();
  for (const auto& g : eg.generators) orders.push_back(int_to_json(g.order));
  o.diagnostics["generator_count"] = static_cast<long long>(eg.generators.size());
  o.diagnostics["generator_orders"] = orders;
  return o;
}

VerbOutcome verb_hom(const JobSpec& job, const std::vector<Json>& docs) {
  need_inputs(job, 2);
  Params p(job.params, {});
  const FGAbelianGroup source = read_group(docs[0]);
  const FGAbelianGroup target = read_group(docs[1]);
  const HomGroup hg = hom_group(source, target);
  VerbOutcome o;
  o.result["group"] = write_group(hg.group);
  o.result["description"] = hg.group.describe();
  Json basis = Json::array();
  for (const GroupHom& f : hg.basis) basis.push_back(write_int_matrix(f.matrix()));
  o.result["basis"] = basis;
  o.diagnostics["generator_orders"] = orders_json(hg.orders);
  return o;
}

VerbOutcome verb_oext_sum(const JobSpec& job, const std::vector<Json>& docs) {
  need_inputs(job, 2);
  Params p(job.params, {});
  const OrderExtension x = read_order_extension(docs[0]);
  const OrderExtension y = read_order_extension(docs[1]);
  const OrderExtension sum = baer_sum(x, y);
  VerbOutcome o;
  o.result["sum"] = write_order_extension(sum);
  o.diagnostics["e"] = sum.ext().e.describe();
  o.diagnostics["g1"] = sum.ext().g1.describe();
  return o;
}

VerbOutcome verb_oext_inverse(const JobSpec& job, const std::vector<Json>& docs) {
  need_inputs(job, 1);
  Params p(job.params, {});
  const OrderExtension x = read_order_extension(docs[0]);
  const OrderExtension inv = oext_inverse(x);
  VerbOutcome o;
  o.result["inverse"] = write_order_extension(inv);
  o.diagnostics["e"] = inv.ext().e.describe();
  return o;
}

VerbOutcome verb_oext_trivial(const JobSpec& job, const std::vector<Json>& docs) {
  need_inputs(job, 1);
  Params p(job.params, {});
  const OrderExtension x = read_order_extension(docs[0]);
  const TrivialityReport rep = oext_is_trivial(x);
  VerbOutcome o;
  o.result["trivial"] = rep.trivial;
  o.result["underlying_splits"] = rep.underlying_splits;
  o.result["range_matches"] = rep.range_matches;
  o.result["kernel_splits"] = rep.kernel_splits ? Json(*rep.kernel_splits) : Json(nullptr);
  o.result["section"] = optional_hom_matrix(rep.section);
  o.result["kernel_section"] = optional_hom_matrix(rep.kernel_section);
  o.diagnostics["e"] = x.ext().e.describe();
  o.diagnostics["g1"] = x.ext().g1.describe();
  return o;
}

VerbOutcome verb_oext_iso(const JobSpec& job, const std::vector<Json>& docs) {
  need_inputs(job, 2);
  Params p(job.params, {});
  const OrderExtension x = read_order_extension(docs[0]);
  const OrderExtension y = read_order_extension(docs[1]);
  const IsoResult res = oext_is_isomorphic(x, y);
  VerbOutcome o;
  o.result["isomorphic"] = res.isomorphic;
  o.result["certificate"] = optional_hom_matrix(res.phi);
  o.diagnostics["e"] = x.ext().e.describe();
  o.diagnostics["e_other"] = y.ext().e.describe();
  return o;
}

VerbOutcome verb_solve_cocycle(const JobSpec& job, const std::vector<Json>& docs) {
  need_inputs(job, 1);
  Params p(job.params, {"depth"});
  const long long depth = parse_count_text("depth", p.require("depth"));
  const CocycleSequence psi = read_cocycle(docs[0]);
  const SolveCocycleResult res = solve_cocycle(psi, static_cast<Index>(depth));
  VerbOutcome o;
  o.result["found"] = res.found();
  if (res.found()) {
    o.result["cochain"] = write_cochain(*res.h);
  } else {
    o.result["fail_stage"] = static_cast<long long>(res.fail_stage);
    o.result["fail_index"] = static_cast<long long>(res.fail_index);
    o.exit_code = 2;
  }
  o.diagnostics["depth"] = depth;
  return o;
}

VerbOutcome verb_assemble(const JobSpec& job, const std::vector<Json>& docs) {
  need_inputs(job, 1);
  Params p(job.params, {"depth"});
  const long long depth = parse_count_text("depth", p.require("depth"));
  const CocycleSequence psi = read_cocycle(docs[0]);
  const OrderExtension ext = assemble_stage_extension(psi, static_cast<Index>(depth));
  VerbOutcome o;
  o.result["extension"] = write_order_extension(ext);
  o.diagnostics["e"] = ext.ext().e.describe();
  o.diagnostics["depth"] = depth;
  return o;
}

VerbOutcome verb_bott(const JobSpec& job, const std::vector<Json>& docs) {
  need_inputs(job, 1);
  Params p(job.params, {"grid", "gap"});
  const long long grid = p.count("grid", kDefaultCircleGrid);
  const double gap = p.real("gap", kDefaultBottGap);
  const std::vector<WindingBlock> blocks = read_winding_blocks(docs[0]);
  const WindingPair pair = make_winding_pair(blocks, static_cast<Index>(grid));
  long long expected = 0;
  for (const WindingBlock& b : blocks) expected += b.n;
  bool constant = true;
  double max_residual = 0.0;
  double min_gap = 4.0;
  long long rounded = 0;
  for (std::size_t k = 0; k < pair.z.frames.size(); ++k) {
    const BottResult br = bott(pair.w, pair.z.frames[k], gap);
    if (k == 0) rounded = br.rounded;
    constant = constant && (br.rounded == rounded);
    max_residual = std::max(max_residual, br.residual);
    min_gap = std::min(min_gap, br.min_gap);
  }
  VerbOutcome o;
  o.result["rounded"] = rounded;
  o.result["expected"] = expected;
  o.result["matches"] = (constant && rounded == expected);
  o.diagnostics["samples"] = static_cast<long long>(pair.z.frames.size());
  o.diagnostics["constant"] = constant;
  o.diagnostics["max_residual"] = max_residual;
  o.diagnostics["min_gap"] = min_gap;
  return o;
}

VerbOutcome verb_rotation(const JobSpec& job, const std::vector<Json>& docs) {
  need_inputs(job, 1);
  Params p(job.params, {"gap"});
  const double gap = p.real("gap", kDefaultBottGap);
  const UnitaryPath path = read_unitary_path(docs[0]);
  const RotationResult res = rotation_number(path, 0, gap);
  VerbOutcome o;
  o.result["value"] = res.value;
  o.diagnostics["max_step_norm"] = res.max_step_norm;
  o.diagnostics["min_gap"] = res.min_gap;
  o.diagnostics["frames"] = static_cast<long long>(path.frames.size());
  return o;
}

VerbOutcome verb_winding_pair(const JobSpec& job, const std::vector<Json>& docs) {
  need_inputs(job, 1);
  Params p(job.params, {"grid"});
  const long long grid = p.count("grid", kDefaultCircleGrid);
  const std::vector<WindingBlock> blocks = read_winding_blocks(docs[0]);
  const WindingPair pair = make_winding_pair(blocks, static_cast<Index>(grid));
  const NormCheck check = winding_norm_check(blocks, static_cast<Index>(grid));
  VerbOutcome o;
  o.result["w"] = write_complex_matrix(pair.w.u);
  o.result["check"] = Json{{"lhs", check.lhs}, {"rhs", check.rhs}, {"pass", check.pass}};
  o.diagnostics["dim"] = static_cast<long long>(pair.w.dim());
  o.diagnostics["grid"] = grid;
  o.diagnostics["frames"] = static_cast<long long>(pair.z.frames.size());
  return o;
}

VerbOutcome verb_realize(const JobSpec& job, const std::vector<Json>& docs) {
  need_inputs(job, 1);
  Params p(job.params, {"depth"});
  const long long depth = parse_count_text("depth", p.require("depth"));
  const PhiSpec phi = read_phi(docs[0]);
  const RealizationCertificate cert = realize_phi(phi, static_cast<Index>(depth));
  const TelescopeReport tel = telescoping_check(cert, phi, 0);
  VerbOutcome o;
  o.result["cochain"] = write_cochain(cert.h);
  Json psis = Json::array();
  for (const IntMat& m : cert.psi) psis.push_back(write_int_matrix(m));
  o.result["psi"] = psis;
  Json bounds = Json::object();
  Json approx = Json::array(), pslack = Json::array(), growth = Json::array();
  for (const Rat& r : cert.bounds_report.approx_slack) approx.push_back(rat_to_json(r));
  for (const Rat& r : cert.bounds_report.psi_slack) pslack.push_back(rat_to_json(r));
  for (const Int& g : cert.bounds_report.growth_slack) growth.push_back(int_to_json(g));
  bounds["approx_slack"] = approx;
  bounds["psi_slack"] = pslack;
  bounds["growth_slack"] = growth;
  o.result["bounds"] = bounds;
  o.diagnostics["min_slack"] = rat_to_json(cert.bounds_report.min_slack());
  o.diagnostics["all_positive"] = cert.bounds_report.all_positive();
  o.diagnostics["telescope"] = Json{{"gap", rat_to_json(tel.gap)},
                                    {"bound", rat_to_json(tel.bound)},
                                    {"within_bound", tel.within_bound}};
  o.diagnostics["depth"] = depth;
  return o;
}

Json approach_json(const LatticeApproach& a) {
  return Json{{"a", int_to_json(a.a)},
              {"b", int_to_json(a.b)},
              {"residue", rat_to_json(a.residue)}};
}

VerbOutcome verb_classify(const JobSpec& job, const std::vector<Json>& docs) {
  need_inputs(job, 0);
  (void)docs;
  Params p(job.params, {"theta", "phi", "qmax", "tol"});
  const long long qmax = p.count("qmax", 1000000);
  const Rat tol = p.rat("tol", "1/1000000000");
  const std::string theta_text = p.str("theta", "golden");
  const std::string phi_text = p.require("phi");
  const auto comma = phi_text.find(',');
  if (comma == std::string::npos)
    throw ValidationError("parameter 'phi': expected 'r1,r2', got '" + phi_text + "'");
  Rat r1(0), r2(0);
  try {
    r1 = parse_rational_text(phi_text.substr(0, comma));
    r2 = parse_rational_text(phi_text.substr(comma + 1));
  } catch (const Error&) {
    throw ValidationError("parameter 'phi': malformed rational in '" + phi_text + "'");
  }
  const RotationAlgebraModel model =
      theta_text == "golden"
          ? make_golden_model(qmax, tol)
          : RotationAlgebraModel(parse_rational_text(theta_text), Rat(0), tol, qmax);
  const ClassifyResult res = classify_rotation_algebra(model, r1, r2);
  VerbOutcome o;
  switch (res.verdict) {
    case LatticeVerdict::Trivial:
      o.result["verdict"] = "trivial";
      break;
    case LatticeVerdict::NonTrivial:
      o.result["verdict"] = "nontrivial";
      break;
    case LatticeVerdict::Undecided:
      o.result["verdict"] = "undecided";
      o.exit_code = 2;
      break;
  }
  o.result["first"] = approach_json(res.first);
  o.result["second"] = approach_json(res.second);
  if (res.verdict == LatticeVerdict::NonTrivial) {
    const RatVec rep = res.representative();
    o.result["representative"] = Json::array({rat_to_json(rep(0)), rat_to_json(rep(1))});
  } else {
    o.result["representative"] = nullptr;
  }
  o.diagnostics["theta"] = rat_to_json(model.theta);
  o.diagnostics["surrogate_error"] = rat_to_json(model.surrogate_error);
  o.diagnostics["qmax"] = qmax;
  o.diagnostics["tol"] = rat_to_json(model.tol);
  o.diagnostics["first_residue_abs"] = rat_to_json(abs(res.first.residue));
  o.diagnostics["second_residue_abs"] = rat_to_json(abs(res.second.residue));
  return o;
}

VerbOutcome verb_sweep(const JobSpec& job, const std::vector<Json>& docs) {
  need_inputs(job, 1);
  Params p(job.params, {});
  const std::vector<JobSpec> jobs = read_sweep(docs[0]);
  const std::vector<ReportRecord> records = run_sweep(jobs);
  // Child reports destined for files are written here, in job order.
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    if (jobs[i].output.empty()) continue;
    std::ofstream out(jobs[i].output, std::ios::binary);
    if (!out) throw ParseError("cannot open output file '" + jobs[i].output + "'");
    out << dump_json(records[i].report);
  }
  long long ok = 0, undecided = 0, errors = 0;
  Json children = Json::array();
  for (const ReportRecord& r : records) {
    children.push_back(r.report);
    if (r.exit_code == 0) ++ok;
    else if (r.exit_code == 2) ++undecided;
    else ++errors;
  }
  VerbOutcome o;
  o.result["records"] = children;
  o.diagnostics["summary"] = Json{{"jobs", static_cast<long long>(records.size())},
                                  {"ok", ok},
                                  {"undecided", undecided},
                                  {"error", errors}};
  o.exit_code = errors > 0 ? 1 : (undecided > 0 ? 2 : 0);
  return o;
}

using VerbFn = VerbOutcome (*)(const JobSpec&, const std::vector<Json>&);

const std::map<std::string, VerbFn>& verb_table() {
  static const std::map<std::string, VerbFn> table = {
      {"snf", verb_snf},
      {"ext", verb_ext},
      {"hom", verb_hom},
      {"oext-sum", verb_oext_sum},
      {"oext-inverse", verb_oext_inverse},
      {"oext-trivial", verb_oext_trivial},
      {"oext-iso", verb_oext_iso},
      {"solve-cocycle", verb_solve_cocycle},
      {"assemble", verb_assemble},
      {"bott", verb_bott},
      {"rotation", verb_rotation},
      {"winding-pair", verb_winding_pair},
      {"realize", verb_realize},
      {"classify-rotation-algebra", verb_classify},
      {"sweep", verb_sweep},
  };
  return table;
}

}  // namespace

ReportRecord run_job(const JobSpec& job) {
  const auto t0 = std::chrono::steady_clock::now();
  Json report = Json::object();
  report["format"] = kFormatTag;
  report["kind"] = "report";
  report["verb"] = job.verb;

  std::uint64_t digest = kFnvOffset;
  Json result = Json::object(), diagnostics = Json::object();
  int code = 0;
  try {
    const auto& table = verb_table();
    auto it = table.find(job.verb);
    if (it == table.end()) throw ValidationError("unknown verb '" + job.verb + "'");
    // Every input is read and parsed before any computation starts.
    std::vector<Json> docs;
    docs.reserve(job.inputs.size());
    for (const std::string& path : job.inputs) {
      const std::string bytes = slurp(path);
      digest = fnv1a(digest, bytes);
      docs.push_back(parse_json_text(bytes, path));
    }
    VerbOutcome out = it->second(job, docs);
    result = std::move(out.result);
    diagnostics = std::move(out.diagnostics);
    code = out.exit_code;
  } catch (const std::exception& e) {
    result = Json::object();
    result["error"] = std::string(e.what());
    diagnostics = Json::object();
    code = 1;
  }

  report["inputs_digest"] = digest_string(digest);
  Json params = Json::object();
  for (const auto& [key, value] : job.params) params[key] = value;
  report["params"] = params;
  report["result"] = result;
  report["diagnostics"] = diagnostics;

  const auto t1 = std::chrono::steady_clock::now();
  ReportRecord rec;
  rec.report = std::move(report);
  rec.exit_code = code;
  rec.wall_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
  return rec;
}

std::vector<ReportRecord> run_sweep(const std::vector<JobSpec>& jobs) {
  std::vector<ReportRecord> records(jobs.size());
  if (jobs.empty()) return records;
  const std::size_t workers =
      std::min<std::size_t>(jobs.size(),
                            std::max(1u, std::thread::hardware_concurrency()));
  std::atomic<std::size_t> next{0};
  auto work = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= jobs.size()) return;
      records[i] = run_job(jobs[i]);
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
    for (std::thread& t : pool) t.join();
  }
  return records;
}

std::vector<JobSpec> read_sweep(const Json& doc) {
  const std::string kind = document_kind(doc);
  if (kind != "sweep")
    throw ParseError("$.kind: expected 'sweep', got '" + kind + "'");
  for (const auto& [key, value] : doc.items()) {
    (void)value;
    if (key != "format" && key != "kind" && key != "jobs")
      throw ParseError("$: unknown field '" + key + "'");
  }
  if (!doc.contains("jobs")) throw ParseError("$: missing field 'jobs'");
  const Json& jobs = doc["jobs"];
  if (!jobs.is_array()) throw ParseError("$.jobs: expected an array");
  std::vector<JobSpec> out;
  out.reserve(jobs.size());
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    const std::string at = "$.jobs[" + std::to_string(i) + "]";
    const Json& j = jobs[i];
    if (!j.is_object()) throw ParseError(at + ": expected an object");
    for (const auto& [key, value] : j.items()) {
      (void)value;
      if (key != "verb" && key != "inputs" && key != "params" && key != "output")
        throw ParseError(at + ": unknown field '" + key + "'");
    }
    JobSpec spec;
    if (!j.contains("verb") || !j["verb"].is_string())
      throw ParseError(at + ".verb: expected a string");
    spec.verb = j["verb"].get<std::string>();
    if (spec.verb == "sweep")
      throw ParseError(at + ".verb: nested sweep is not supported");
    if (j.contains("inputs")) {
      const Json& ins = j["inputs"];
      if (!ins.is_array()) throw ParseError(at + ".inputs: expected an array");
      for (std::size_t k = 0; k < ins.size(); ++k) {
        if (!ins[k].is_string())
          throw ParseError(at + ".inputs[" + std::to_string(k) + "]: expected a string");
        spec.inputs.push_back(ins[k].get<std::string>());
      }
    }
    if (j.contains("params")) {
      const Json& ps = j["params"];
      if (!ps.is_object()) throw ParseError(at + ".params: expected an object");
      for (const auto& [key, value] : ps.items()) {
        if (value.is_string()) {
          spec.params[key] = value.get<std::string>();
        } else if (value.is_number_integer()) {
          spec.params[key] = std::to_string(value.get<long long>());
        } else {
          throw ParseError(at + ".params." + key + ": expected a string or integer");
        }
      }
    }
    if (j.contains("output")) {
      if (!j["output"].is_string()) throw ParseError(at + ".output: expected a string");
      spec.output = j["output"].get<std::string>();
    }
    out.push_back(std::move(spec));
  }
  return out;
}

namespace {

void emit(const ReportRecord& rec, const JobSpec& job, std::ostream& out, std::ostream& err) {
  const std::string text = dump_json(rec.report);
  if (job.output.empty()) {
    out << text;
  } else {
    std::ofstream file(job.output, std::ios::binary);
    if (!file) {
      err << "error: cannot open output file '" << job.output << "'\n";
      return;
    }
    file << text;
  }
  if (rec.exit_code == 1 && rec.report["result"].contains("error"))
    err << "error: " << rec.report["result"]["error"].get<std::string>() << "\n";
  err << "# " << job.verb << " exit=" << rec.exit_code << " wall_ms="
      << std::fixed << std::setprecision(1) << rec.wall_ms << "\n";
}

}  // namespace

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{
      "Exact K-theory toolkit: Smith forms, Hom/Ext groups, order extensions "
      "with rotation data, cocycle solving, Bott and rotation numbers, "
      "realization certificates, and the rotation-algebra classifier.\n"
      "Reports are byte-identical across runs for identical inputs and "
      "parameters.  Exit codes: 0 decided/ok, 1 error, 2 undecided."};
  app.require_subcommand(1);

  std::vector<std::string> inputs;
  std::string output, depth, tol, grid, gap, qmax, seed, theta, phi;

  struct VerbSpec {
    const char* name;
    const char* help;
    int inputs;
    const char* input_help;
    std::vector<const char*> flags;
  };
  const std::vector<VerbSpec> verbs = {
      {"snf", "Smith normal form of an integer matrix", 1, "matrix document", {}},
      {"ext", "Ext group of two finitely generated abelian groups", 2,
       "source and target group documents", {}},
      {"hom", "Hom group of two finitely generated abelian groups", 2,
       "source and target group documents", {}},
      {"oext-sum", "Baer sum of two order extensions", 2, "order-extension documents", {}},
      {"oext-inverse", "Inverse class of an order extension", 1,
       "order-extension document", {}},
      {"oext-trivial", "Three-part triviality test with section certificates", 1,
       "order-extension document", {}},
      {"oext-iso", "Decide isomorphism of two order extensions", 2,
       "order-extension documents", {}},
      {"solve-cocycle", "Search for a trivializing cochain at the given depth", 1,
       "cocycle-sequence document", {"depth"}},
      {"assemble", "Assemble the order extension of a cocycle sequence", 1,
       "cocycle-sequence document", {"depth"}},
      {"bott", "Bott element of the winding pair over the whole loop", 1,
       "winding-blocks document", {"grid", "gap"}},
      {"rotation", "Rotation number of a sampled unitary path", 1,
       "unitary-path document", {"gap"}},
      {"winding-pair", "Construct the winding pair and run its norm check", 1,
       "winding-blocks document", {"grid"}},
      {"realize", "Realize a trace functional by a certified cochain", 1,
       "phi-spec document", {"depth"}},
      {"classify-rotation-algebra",
       "Classify a K1 class of the rotation algebra via lattice search", 0, "",
       {"theta", "phi", "qmax", "tol"}},
      {"sweep", "Run a batch of jobs from a sweep document", 1, "sweep document", {}},
  };

  const std::map<std::string, std::pair<std::string*, const char*>> flag_vars = {
      {"depth", {&depth, "truncation depth (stages)"}},
      {"tol", {&tol, "decision tolerance, exact rational like 1e-9"}},
      {"grid", {&grid, "circle sample count (accepts 10^k)"}},
      {"gap", {&gap, "spectral gap guard around -1"}},
      {"qmax", {&qmax, "lattice coefficient bound (accepts 10^k)"}},
      {"theta", {&theta, "'golden' or an exact rational in (0,1)"}},
      {"phi", {&phi, "class to test, as 'r1,r2' exact rationals"}},
  };

  for (const VerbSpec& v : verbs) {
    CLI::App* sub = app.add_subcommand(v.name, v.help);
    if (v.inputs > 0)
      sub->add_option("inputs", inputs, v.input_help)->expected(v.inputs);
    for (const char* f : v.flags) {
      const auto& [var, help] = flag_vars.at(f);
      sub->add_option(std::string("--") + f, *var, help);
    }
    sub->add_option("--output", output, "write the report here instead of stdout");
    sub->add_option("--seed", seed, "seed for randomized fixtures (reserved)");
  }
  app.get_subcommand("classify-rotation-algebra")->alias("classify");

  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  argv.push_back("okt");
  for (const std::string& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e, out, err);
    return rc == 0 ? 0 : 1;
  }

  CLI::App* sub = app.get_subcommands().front();
  JobSpec job;
  job.verb = sub->get_name();
  job.inputs = inputs;
  job.output = output;
  for (const auto& [name, entry] : flag_vars) {
    if (sub->get_option_no_throw(std::string("--") + name) &&
        sub->count(std::string("--") + name) > 0)
      job.params[name] = *entry.first;
  }
  if (sub->count("--seed") > 0) job.params["seed"] = seed;

  const ReportRecord rec = run_job(job);
  emit(rec, job, out, err);
  return rec.exit_code;
}

}  // namespace okt
