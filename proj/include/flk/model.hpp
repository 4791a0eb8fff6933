#pragma once

#include <map>
#include <string>

#include <json.hpp>

#include "flk/lattice.hpp"

namespace flk {

// A named equivariant map between model objects.
struct ModelMap {
    std::string source;
    std::string target;
    GMap map;
};

// Fully validated content of a model file.  Names are unique across the
// three sections.
struct ModelFile {
    GroupPtr group;
    std::map<std::string, GLattice> lattices;
    std::map<std::string, GModule> modules;
    std::map<std::string, ModelMap> maps;
};

// Model files are JSON:
//   {"group": {"degree": d, "generators": [[images], ...]},
//    "lattices": {name: {"rank": n, "action": {"g0": [[..]], ...},
//                        "orbits": [{"stabilizer": [elts],
//                                    "basis_indices": [cols]}]?}},
//    "modules": {name: {"free_cover_rank": m, "relations": [[..], ...],
//                       "action": {"g0": [[..]], ...}}},
//    "maps": {name: {"source": name, "target": name, "matrix": [[..]]}}}
// Action matrices are keyed by generator index and closed to the whole
// group; "orbits", when present, is validated and attached as the
// PermutationStructure certificate.  Matrix entries are JSON integers, or
// decimal strings when they exceed 2^53 - 1.
ModelFile parse_model_text(const std::string& text);
ModelFile parse_model(const std::string& path);

// Canonical re-serialization: sorted keys, normalized integers; satisfies
// parse_model_text(emit_model(m)) == m.
std::string emit_model(const ModelFile& m);

// shared JSON helpers for exact integers and matrices
nlohmann::json json_int(const Int& v);
Int int_from_json(const nlohmann::json& j, const std::string& where);
nlohmann::json json_matrix(const Mat& m);
Mat matrix_from_json(const nlohmann::json& j, const std::string& where);

// Model objects in the file format above, reused by reports so every emitted
// lattice can be fed back in.
nlohmann::json orbits_to_json(const PermutationStructure& ps);
nlohmann::json lattice_to_json(const GLattice& l);
nlohmann::json module_to_json(const GModule& m);

}  // namespace flk
