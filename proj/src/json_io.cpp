#include <okt/json_io.hpp>

#include <cctype>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <utility>

namespace okt {

namespace {

// Cursor into a parsed document carrying the JSON path for error messages.
struct Cur {
  const Json* j;
  std::string path;

  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(path + ": " + msg); }

  Cur field(const char* name) const {
    if (!j->is_object()) fail("expected an object");
    auto it = j->find(name);
    if (it == j->end()) fail(std::string("missing field '") + name + "'");
    return Cur{&*it, path + "." + name};
  }

  bool has(const char* name) const { return j->is_object() && j->contains(name); }

  /// Strictness: every present key must be in the allowed list.
  void allow_only(std::initializer_list<const char*> names) const {
    if (!j->is_object()) fail("expected an object");
    for (auto it = j->begin(); it != j->end(); ++it) {
      bool known = false;
      for (const char* n : names)
        if (it.key() == n) {
          known = true;
          break;
        }
      if (!known) fail("unknown field '" + it.key() + "'");
    }
  }

  Index size() const {
    if (!j->is_array()) fail("expected an array");
    return static_cast<Index>(j->size());
  }

  Cur item(Index i) const {
    return Cur{&(*j)[static_cast<std::size_t>(i)], path + "[" + std::to_string(i) + "]"};
  }

  std::string get_string() const {
    if (!j->is_string()) fail("expected a string");
    return j->get<std::string>();
  }

  long long get_ll() const {
    if (j->is_number_integer()) return j->get<long long>();
    if (j->is_number_unsigned()) {
      auto u = j->get<unsigned long long>();
      if (u > 0x7fffffffffffffffULL) fail("integer out of range");
      return static_cast<long long>(u);
    }
    fail("expected an integer");
  }

  Index get_index() const {
    long long v = get_ll();
    if (v < 0) fail("expected a nonnegative integer");
    return static_cast<Index>(v);
  }

  double get_double() const {
    if (!j->is_number()) fail("expected a number");
    return j->get<double>();
  }

  Int get_int() const {
    if (j->is_number_integer() || j->is_number_unsigned()) return Int(get_ll());
    if (j->is_string()) {
      try {
        return Int(j->get<std::string>());
      } catch (const std::exception&) {
        fail("malformed integer literal '" + j->get<std::string>() + "'");
      }
    }
    fail("expected an integer (number or decimal string)");
  }

  Rat get_rat() const {
    if (j->is_number_integer() || j->is_number_unsigned()) return Rat(Int(get_ll()));
    if (j->is_string()) {
      try {
        return parse_rational_text(j->get<std::string>());
      } catch (const std::exception& e) {
        fail(e.what());
      }
    }
    if (j->is_number_float())
      fail("rationals must be strings (e.g. \"3/7\" or \"1e-9\"), not floats");
    fail("expected a rational (integer or string)");
  }
};

Cur root(const Json& doc) { return Cur{&doc, "$"}; }

/// Validate the envelope and return the root cursor.
Cur open_document(const Json& doc, const char* kind) {
  Cur c = root(doc);
  if (!doc.is_object()) c.fail("expected a document object");
  Cur f = c.field("format");
  if (f.get_string() != kFormatTag)
    f.fail("unsupported format '" + f.get_string() + "' (expected " + kFormatTag + ")");
  Cur k = c.field("kind");
  if (k.get_string() != kind)
    k.fail("expected kind '" + std::string(kind) + "', found '" + k.get_string() + "'");
  return c;
}

Json envelope(const char* kind) {
  Json doc = Json::object();
  doc["format"] = kFormatTag;
  doc["kind"] = kind;
  return doc;
}

// Rethrow constructor-level validation failures as ParseError at `path`.
template <typename F>
auto checked(const std::string& path, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    throw ParseError(path + ": " + e.what());
  }
}

// Each payload type has a fields-only core (shared by document readers, whose
// envelope already carries format/kind) and a strict nested-position wrapper.

// --- integer matrices -----------------------------------------------------

Json int_matrix_payload(const IntMat& m) {
  Json p = Json::object();
  p["rows"] = m.rows();
  p["cols"] = m.cols();
  Json entries = Json::array();
  for (Index i = 0; i < m.rows(); ++i)
    for (Index jx = 0; jx < m.cols(); ++jx) entries.push_back(int_to_json(m(i, jx)));
  p["entries"] = std::move(entries);
  return p;
}

IntMat int_matrix_fields(const Cur& c) {
  Index rows = c.field("rows").get_index();
  Index cols = c.field("cols").get_index();
  Cur entries = c.field("entries");
  if (entries.size() != rows * cols) entries.fail("expected rows*cols entries");
  IntMat m(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index jx = 0; jx < cols; ++jx) m(i, jx) = entries.item(i * cols + jx).get_int();
  return m;
}

IntMat int_matrix_from(const Cur& c) {
  c.allow_only({"rows", "cols", "entries"});
  return int_matrix_fields(c);
}

// --- rational matrices ----------------------------------------------------

Json rat_matrix_payload(const RatMat& m) {
  Json p = Json::object();
  p["rows"] = m.rows();
  p["cols"] = m.cols();
  Json entries = Json::array();
  for (Index i = 0; i < m.rows(); ++i)
    for (Index jx = 0; jx < m.cols(); ++jx) entries.push_back(rat_to_json(m(i, jx)));
  p["entries"] = std::move(entries);
  return p;
}

RatMat rat_matrix_fields(const Cur& c) {
  Index rows = c.field("rows").get_index();
  Index cols = c.field("cols").get_index();
  Cur entries = c.field("entries");
  if (entries.size() != rows * cols) entries.fail("expected rows*cols entries");
  RatMat m(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index jx = 0; jx < cols; ++jx) m(i, jx) = entries.item(i * cols + jx).get_rat();
  return m;
}

RatMat rat_matrix_from(const Cur& c) {
  c.allow_only({"rows", "cols", "entries"});
  return rat_matrix_fields(c);
}

// --- complex matrices -----------------------------------------------------

Json complex_matrix_payload(const CMat& m) {
  Json p = Json::object();
  p["rows"] = m.rows();
  p["cols"] = m.cols();
  Json entries = Json::array();
  for (Index i = 0; i < m.rows(); ++i)
    for (Index jx = 0; jx < m.cols(); ++jx)
      entries.push_back(Json::array({m(i, jx).real(), m(i, jx).imag()}));
  p["entries"] = std::move(entries);
  return p;
}

CMat complex_matrix_fields(const Cur& c) {
  Index rows = c.field("rows").get_index();
  Index cols = c.field("cols").get_index();
  Cur entries = c.field("entries");
  if (entries.size() != rows * cols) entries.fail("expected rows*cols entries");
  CMat m(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index jx = 0; jx < cols; ++jx) {
      Cur pair = entries.item(i * cols + jx);
      if (pair.size() != 2) pair.fail("expected an [re, im] pair");
      m(i, jx) = {pair.item(0).get_double(), pair.item(1).get_double()};
    }
  return m;
}

CMat complex_matrix_from(const Cur& c) {
  c.allow_only({"rows", "cols", "entries"});
  return complex_matrix_fields(c);
}

// --- groups ---------------------------------------------------------------

Json group_payload(const FGAbelianGroup& g) {
  Json p = Json::object();
  p["presentation"] = int_matrix_payload(g.presentation());
  return p;
}

FGAbelianGroup group_fields(const Cur& c) {
  IntMat pres = int_matrix_from(c.field("presentation"));
  return checked(c.path, [&] { return FGAbelianGroup(pres); });
}

FGAbelianGroup group_from(const Cur& c) {
  c.allow_only({"presentation"});
  return group_fields(c);
}

// --- inductive systems ----------------------------------------------------

Json system_payload(const InductiveSystem& sys) {
  Json p = Json::object();
  Json stages = Json::array();
  for (Index n = 0; n < sys.stage_count(); ++n) stages.push_back(sys.rank(n));
  p["stages"] = std::move(stages);
  Json m0 = Json::array(), m1 = Json::array();
  for (Index n = 0; n < sys.map_count(); ++n) {
    m0.push_back(int_matrix_payload(sys.map0(n)));
    m1.push_back(int_matrix_payload(sys.map1(n)));
  }
  p["maps0"] = std::move(m0);
  p["maps1"] = std::move(m1);
  Json unit = Json::array();
  for (Index n = 0; n < sys.stage_count(); ++n) {
    Json u = Json::array();
    for (Index i = 0; i < sys.rank(n); ++i) u.push_back(int_to_json(sys.unit_entry(n, i)));
    unit.push_back(std::move(u));
  }
  p["unit"] = std::move(unit);
  return p;
}

InductiveSystem system_fields(const Cur& c) {
  Cur stages = c.field("stages");
  Cur m0 = c.field("maps0");
  Cur m1 = c.field("maps1");
  Cur unit = c.field("unit");
  std::vector<IntMat> maps0, maps1;
  for (Index n = 0; n < m0.size(); ++n) maps0.push_back(int_matrix_from(m0.item(n)));
  for (Index n = 0; n < m1.size(); ++n) maps1.push_back(int_matrix_from(m1.item(n)));
  if (unit.size() < 1) unit.fail("expected at least the stage-0 unit vector");
  Cur u0 = unit.item(0);
  IntVec unit0(u0.size());
  for (Index i = 0; i < u0.size(); ++i) unit0(i) = u0.item(i).get_int();
  InductiveSystem sys =
      checked(c.path, [&] { return InductiveSystem(std::move(maps0), std::move(maps1), unit0); });
  if (stages.size() != sys.stage_count()) stages.fail("stage count disagrees with maps0");
  for (Index n = 0; n < stages.size(); ++n)
    if (stages.item(n).get_index() != sys.rank(n))
      stages.item(n).fail("stage rank disagrees with the map shapes");
  if (unit.size() != sys.stage_count()) unit.fail("expected one unit vector per stage");
  for (Index n = 0; n < unit.size(); ++n) {
    Cur un = unit.item(n);
    if (un.size() != sys.rank(n)) un.fail("unit vector length disagrees with the stage rank");
    for (Index i = 0; i < un.size(); ++i)
      if (un.item(i).get_int() != sys.unit_entry(n, i))
        un.item(i).fail("unit sequence is not the maps0-propagation of stage 0");
  }
  return sys;
}

InductiveSystem system_from(const Cur& c) {
  c.allow_only({"stages", "maps0", "maps1", "unit"});
  return system_fields(c);
}

// --- ambients -------------------------------------------------------------

Json ambient_payload(const Ambient& amb) {
  Json p = Json::object();
  p["system"] = system_payload(amb.system());
  p["class_stage"] = amb.class_stage();
  p["eval_stage"] = amb.eval_stage();
  return p;
}

Ambient ambient_from(const Cur& c) {
  c.allow_only({"system", "class_stage", "eval_stage"});
  InductiveSystem sys = system_from(c.field("system"));
  Index cls = c.field("class_stage").get_index();
  Index ev = c.field("eval_stage").get_index();
  return checked(c.path, [&] { return Ambient(std::move(sys), cls, ev); });
}

// --- extensions -----------------------------------------------------------

Json extension_payload(const ExtensionPresentation& p) {
  Json out = Json::object();
  out["g0"] = group_payload(p.g0);
  out["e"] = group_payload(p.e);
  out["g1"] = group_payload(p.g1);
  out["iota"] = int_matrix_payload(p.iota.matrix());
  out["q"] = int_matrix_payload(p.q.matrix());
  return out;
}

ExtensionPresentation extension_fields(const Cur& c) {
  FGAbelianGroup g0 = group_from(c.field("g0"));
  FGAbelianGroup e = group_from(c.field("e"));
  FGAbelianGroup g1 = group_from(c.field("g1"));
  IntMat iota = int_matrix_from(c.field("iota"));
  IntMat q = int_matrix_from(c.field("q"));
  return checked(c.path, [&] {
    return ExtensionPresentation(g0, e, g1, GroupHom(g0, e, iota), GroupHom(e, g1, q));
  });
}

ExtensionPresentation extension_from(const Cur& c) {
  c.allow_only({"g0", "e", "g1", "iota", "q"});
  return extension_fields(c);
}

// --- order extensions -----------------------------------------------------

Json order_extension_payload(const OrderExtension& x) {
  Json p = Json::object();
  p["ambient"] = ambient_payload(x.ambient());
  p["ext"] = extension_payload(x.ext());
  p["rmap"] = rat_matrix_payload(x.rmap());
  return p;
}

OrderExtension order_extension_fields(const Cur& c) {
  Ambient amb = ambient_from(c.field("ambient"));
  ExtensionPresentation ext = extension_from(c.field("ext"));
  RatMat rmap = rat_matrix_from(c.field("rmap"));
  return checked(c.path,
                 [&] { return OrderExtension(std::move(amb), std::move(ext), std::move(rmap)); });
}

// --- matrix lists ---------------------------------------------------------

std::vector<IntMat> matrix_list_from(const Cur& c) {
  std::vector<IntMat> out;
  for (Index n = 0; n < c.size(); ++n) out.push_back(int_matrix_from(c.item(n)));
  return out;
}

Json matrix_list_payload(const std::vector<IntMat>& ms) {
  Json arr = Json::array();
  for (const IntMat& m : ms) arr.push_back(int_matrix_payload(m));
  return arr;
}

Int parse_int_literal(const std::string& s) {
  std::size_t pos = 0;
  if (pos < s.size() && (s[pos] == '+' || s[pos] == '-')) ++pos;
  if (pos == s.size()) throw ParseError("malformed integer literal '" + s + "'");
  for (std::size_t k = pos; k < s.size(); ++k)
    if (!std::isdigit(static_cast<unsigned char>(s[k])))
      throw ParseError("malformed integer literal '" + s + "'");
  return s[0] == '+' ? Int(s.substr(1)) : Int(s);
}

}  // namespace

// --- text and files -------------------------------------------------------

Json parse_json_text(const std::string& text, const std::string& source_name) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    // e.what() carries "... at line L, column C: ..." — keep it verbatim.
    throw ParseError(source_name + ": " + e.what());
  }
}

Json load_json_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path + ": cannot open file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_json_text(buf.str(), path);
}

std::string dump_json(const Json& doc) { return doc.dump(2) + "\n"; }

std::string document_kind(const Json& doc) {
  Cur c = root(doc);
  if (!doc.is_object()) c.fail("expected a document object");
  Cur f = c.field("format");
  if (f.get_string() != kFormatTag)
    f.fail("unsupported format '" + f.get_string() + "' (expected " + kFormatTag + ")");
  return c.field("kind").get_string();
}

// --- scalar helpers -------------------------------------------------------

Json int_to_json(const Int& x) {
  if (x.fits_ll()) return Json(x.to_ll());
  return Json(x.to_string());
}

Json rat_to_json(const Rat& x) { return Json(x.to_string()); }

Rat parse_rational_text(const std::string& text) {
  const auto bad = [&]() -> Rat {
    throw ParseError("malformed rational literal '" + text + "'");
  };
  if (text.empty()) return bad();
  if (auto slash = text.find('/'); slash != std::string::npos) {
    try {
      Int num = parse_int_literal(text.substr(0, slash));
      Int den = parse_int_literal(text.substr(slash + 1));
      return Rat(num, den);  // throws on zero denominator
    } catch (const ParseError&) {
      return bad();
    } catch (const Error&) {
      return bad();
    }
  }
  // Decimal / scientific: [sign] digits [. digits] [e [sign] digits]
  std::size_t pos = 0;
  bool neg = false;
  if (text[pos] == '+' || text[pos] == '-') neg = text[pos++] == '-';
  std::string digits;
  long long frac_len = 0, exponent = 0;
  while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos])))
    digits.push_back(text[pos++]);
  if (pos < text.size() && text[pos] == '.') {
    ++pos;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
      digits.push_back(text[pos++]);
      ++frac_len;
    }
  }
  if (digits.empty()) return bad();
  if (pos < text.size() && (text[pos] == 'e' || text[pos] == 'E')) {
    ++pos;
    bool eneg = false;
    if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) eneg = text[pos++] == '-';
    std::string edig;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos])))
      edig.push_back(text[pos++]);
    if (edig.empty() || edig.size() > 6) return bad();
    exponent = std::stoll(edig);
    if (eneg) exponent = -exponent;
  }
  if (pos != text.size()) return bad();
  Int mant(digits);
  if (neg) mant = -mant;
  long long shift = exponent - frac_len;
  Int scale(1);
  for (long long k = 0; k < (shift < 0 ? -shift : shift); ++k) scale *= Int(10);
  return shift >= 0 ? Rat(mant * scale) : Rat(mant, scale);
}

// --- document writers -----------------------------------------------------

Json write_int_matrix(const IntMat& m) {
  Json doc = envelope("matrix");
  doc.update(int_matrix_payload(m));
  return doc;
}

Json write_rat_matrix(const RatMat& m) {
  Json doc = envelope("rational-matrix");
  doc.update(rat_matrix_payload(m));
  return doc;
}

Json write_complex_matrix(const CMat& m) {
  Json doc = envelope("complex-matrix");
  doc.update(complex_matrix_payload(m));
  return doc;
}

Json write_group(const FGAbelianGroup& g) {
  Json doc = envelope("group");
  doc.update(group_payload(g));
  return doc;
}

Json write_system(const InductiveSystem& sys) {
  Json doc = envelope("inductive-system");
  doc.update(system_payload(sys));
  return doc;
}

Json write_extension(const ExtensionPresentation& p) {
  Json doc = envelope("extension");
  doc.update(extension_payload(p));
  return doc;
}

Json write_order_extension(const OrderExtension& x) {
  Json doc = envelope("order-extension");
  doc.update(order_extension_payload(x));
  return doc;
}

Json write_cocycle(const CocycleSequence& psi) {
  Json doc = envelope("cocycle-sequence");
  doc["ambient"] = ambient_payload(psi.ambient);
  doc["psi0"] = matrix_list_payload(psi.psi0);
  doc["psi1"] = matrix_list_payload(psi.psi1);
  return doc;
}

Json write_cochain(const CochainSequence& h) {
  Json doc = envelope("cochain-sequence");
  doc["ambient"] = ambient_payload(h.ambient);
  doc["h"] = matrix_list_payload(h.h);
  return doc;
}

Json write_phi(const PhiSpec& phi) {
  Json doc = envelope("phi-spec");
  doc["system"] = system_payload(phi.system);
  Json vals = Json::array();
  for (const RatMat& v : phi.values) vals.push_back(rat_matrix_payload(v));
  doc["values"] = std::move(vals);
  doc["precision"] = rat_to_json(phi.precision);
  return doc;
}

Json write_winding_blocks(const std::vector<WindingBlock>& blocks) {
  Json doc = envelope("winding-blocks");
  Json arr = Json::array();
  for (const WindingBlock& b : blocks) {
    Json jb = Json::object();
    jb["M"] = b.m;
    jb["N"] = b.n;
    jb["L"] = b.l;
    arr.push_back(std::move(jb));
  }
  doc["blocks"] = std::move(arr);
  return doc;
}

Json write_unitary_path(const UnitaryPath& p) {
  Json doc = envelope("unitary-path");
  doc["time_grid"] = p.time_grid;
  Json frames = Json::array();
  for (const UnitarySample& f : p.frames) frames.push_back(complex_matrix_payload(f.u));
  doc["frames"] = std::move(frames);
  if (p.boundary.twist.has_value()) doc["twist"] = complex_matrix_payload(*p.boundary.twist);
  return doc;
}

// --- document readers -----------------------------------------------------

IntMat read_int_matrix(const Json& doc) {
  Cur c = open_document(doc, "matrix");
  c.allow_only({"format", "kind", "rows", "cols", "entries"});
  return int_matrix_fields(c);
}

RatMat read_rat_matrix(const Json& doc) {
  Cur c = open_document(doc, "rational-matrix");
  c.allow_only({"format", "kind", "rows", "cols", "entries"});
  return rat_matrix_fields(c);
}

CMat read_complex_matrix(const Json& doc) {
  Cur c = open_document(doc, "complex-matrix");
  c.allow_only({"format", "kind", "rows", "cols", "entries"});
  return complex_matrix_fields(c);
}

FGAbelianGroup read_group(const Json& doc) {
  Cur c = open_document(doc, "group");
  c.allow_only({"format", "kind", "presentation"});
  return group_fields(c);
}

InductiveSystem read_system(const Json& doc) {
  Cur c = open_document(doc, "inductive-system");
  c.allow_only({"format", "kind", "stages", "maps0", "maps1", "unit"});
  return system_fields(c);
}

ExtensionPresentation read_extension(const Json& doc) {
  Cur c = open_document(doc, "extension");
  c.allow_only({"format", "kind", "g0", "e", "g1", "iota", "q"});
  return extension_fields(c);
}

OrderExtension read_order_extension(const Json& doc) {
  Cur c = open_document(doc, "order-extension");
  c.allow_only({"format", "kind", "ambient", "ext", "rmap"});
  return order_extension_fields(c);
}

CocycleSequence read_cocycle(const Json& doc) {
  Cur c = open_document(doc, "cocycle-sequence");
  c.allow_only({"format", "kind", "ambient", "psi0", "psi1"});
  Ambient amb = ambient_from(c.field("ambient"));
  std::vector<IntMat> psi0 = matrix_list_from(c.field("psi0"));
  std::vector<IntMat> psi1;
  if (c.has("psi1")) psi1 = matrix_list_from(c.field("psi1"));
  return checked(c.path, [&] {
    return CocycleSequence(std::move(amb), std::move(psi0), std::move(psi1));
  });
}

CochainSequence read_cochain(const Json& doc) {
  Cur c = open_document(doc, "cochain-sequence");
  c.allow_only({"format", "kind", "ambient", "h"});
  Ambient amb = ambient_from(c.field("ambient"));
  std::vector<IntMat> h = matrix_list_from(c.field("h"));
  return checked(c.path, [&] { return CochainSequence(std::move(amb), std::move(h)); });
}

PhiSpec read_phi(const Json& doc) {
  Cur c = open_document(doc, "phi-spec");
  c.allow_only({"format", "kind", "system", "values", "precision"});
  InductiveSystem sys = system_from(c.field("system"));
  Cur vals = c.field("values");
  std::vector<RatMat> values;
  for (Index n = 0; n < vals.size(); ++n) values.push_back(rat_matrix_from(vals.item(n)));
  Rat precision = c.field("precision").get_rat();
  return checked(c.path, [&] {
    return PhiSpec(std::move(sys), std::move(values), std::move(precision));
  });
}

std::vector<WindingBlock> read_winding_blocks(const Json& doc) {
  Cur c = open_document(doc, "winding-blocks");
  c.allow_only({"format", "kind", "blocks"});
  Cur arr = c.field("blocks");
  std::vector<WindingBlock> blocks;
  for (Index i = 0; i < arr.size(); ++i) {
    Cur b = arr.item(i);
    b.allow_only({"M", "N", "L"});
    Index m = b.field("M").get_index();
    long long n = b.field("N").get_ll();
    long long l = b.field("L").get_ll();
    if (l != 1 && l != -1) b.field("L").fail("corner exponent must be +1 or -1");
    blocks.push_back(checked(b.path, [&] { return WindingBlock(m, n, static_cast<int>(l)); }));
  }
  return blocks;
}

UnitaryPath read_unitary_path(const Json& doc) {
  Cur c = open_document(doc, "unitary-path");
  c.allow_only({"format", "kind", "time_grid", "frames", "twist"});
  Index grid = c.field("time_grid").get_index();
  Cur fr = c.field("frames");
  std::vector<UnitarySample> frames;
  for (Index k = 0; k < fr.size(); ++k) {
    CMat m = complex_matrix_from(fr.item(k));
    frames.push_back(checked(fr.item(k).path, [&] { return UnitarySample(std::move(m)); }));
  }
  std::optional<CMat> twist;
  if (c.has("twist")) twist = complex_matrix_from(c.field("twist"));
  return checked(c.path, [&] {
    return UnitaryPath(grid, std::move(frames), std::move(twist));
  });
}

}  // namespace okt
