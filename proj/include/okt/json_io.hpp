#pragma once

// JSON serialization for every document the command-line tools exchange.
//
// All documents share one versioned envelope: {"format": "okt/1", "kind": ...}
// followed by the payload fields of that kind.  Readers are strict — missing
// fields, unknown fields, wrong kinds and malformed scalars all raise
// ParseError with the JSON path of the offending value.  The canonical schema
// lives in schemas/okt-schema-v1.json.
//
// Scalar conventions: integers are JSON numbers when they fit in 64 bits and
// decimal strings beyond that; rationals are canonical "p/q" strings (readers
// additionally accept plain integers, decimals like "0.25" and scientific
// notation like "1e-9"); complex entries are [re, im] pairs of doubles.

#include <okt/realize.hpp>
#include <okt/unitary.hpp>

#include <json.hpp>

#include <string>
#include <vector>

namespace okt {

using Json = nlohmann::ordered_json;

inline constexpr const char* kFormatTag = "okt/1";

// --- text and files -------------------------------------------------------

/// Parse JSON text; ParseError messages carry `source_name` and the parser's
/// line/column position.
Json parse_json_text(const std::string& text, const std::string& source_name);

/// Read and parse a file (ParseError on I/O failure as well).
Json load_json_file(const std::string& path);

/// Canonical dump: 2-space indent, stable field order, trailing newline.
std::string dump_json(const Json& doc);

/// Kind of a document after validating the format tag.
std::string document_kind(const Json& doc);

// --- scalar helpers -------------------------------------------------------

/// JSON number when the value fits in 64 bits, else a decimal string.
Json int_to_json(const Int& x);

/// Canonical "p/q" (or "p") string.
Json rat_to_json(const Rat& x);

/// Accepts "p/q", integer, decimal ("0.25") and scientific ("1e-9", "2.5e-3")
/// forms; ParseError otherwise.
Rat parse_rational_text(const std::string& text);

// --- document writers -----------------------------------------------------

Json write_int_matrix(const IntMat& m);
Json write_rat_matrix(const RatMat& m);
Json write_complex_matrix(const CMat& m);
Json write_group(const FGAbelianGroup& g);
Json write_system(const InductiveSystem& sys);
Json write_extension(const ExtensionPresentation& p);
Json write_order_extension(const OrderExtension& x);
Json write_cocycle(const CocycleSequence& psi);
Json write_cochain(const CochainSequence& h);
Json write_phi(const PhiSpec& phi);
Json write_winding_blocks(const std::vector<WindingBlock>& blocks);
Json write_unitary_path(const UnitaryPath& p);

// --- document readers -----------------------------------------------------
// Each validates the envelope (format + kind), rejects unknown fields, and
// funnels constructor-level validation failures into ParseError with the
// document path.

IntMat read_int_matrix(const Json& doc);
RatMat read_rat_matrix(const Json& doc);
CMat read_complex_matrix(const Json& doc);
FGAbelianGroup read_group(const Json& doc);
InductiveSystem read_system(const Json& doc);
ExtensionPresentation read_extension(const Json& doc);
OrderExtension read_order_extension(const Json& doc);
CocycleSequence read_cocycle(const Json& doc);
CochainSequence read_cochain(const Json& doc);
PhiSpec read_phi(const Json& doc);
std::vector<WindingBlock> read_winding_blocks(const Json& doc);
UnitaryPath read_unitary_path(const Json& doc);

}  // namespace okt
