#pragma once

#include <json.hpp>

#include "flk/homspace.hpp"
#include "flk/model.hpp"
#include "flk/tori.hpp"

namespace flk {

// JSON views of the result types.  Shapes are stable: reports embed the
// matrices and witnesses needed to re-verify a run offline, and lattice or
// module payloads use the model-file format so they can be fed back in.
nlohmann::json to_json(const FinAbGroup& g);
nlohmann::json to_json(const Subgroup& h);
nlohmann::json to_json(const Fingerprint& f);
nlohmann::json to_json(const ClassCheck& c);
nlohmann::json to_json(const Verdict3& v);
nlohmann::json to_json(const Resolution& r);
nlohmann::json to_json(const REquivReport& r);
nlohmann::json to_json(const QuotientInvariants& q);
nlohmann::json to_json(const QuasiResolutionReport& q);
nlohmann::json to_json(const CoflasqueTower& t);
nlohmann::json to_json(const RCount& c);

// Canonical serialization: sorted keys, two-space indent, big integers as
// decimal strings, trailing newline.  Byte-identical for equal reports.
std::string emit_json(const nlohmann::json& report);

// Indented key/value rendering of the same tree.  Objects shaped like
// serialized FinAbGroups collapse to names such as "Z/2".
std::string emit_text(const nlohmann::json& report);

}  // namespace flk
