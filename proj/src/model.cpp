#include "flk/model.hpp"

#include <cctype>
#include <climits>
#include <fstream>
#include <set>
#include <sstream>
#include <utility>

#include "flk/errors.hpp"

namespace flk {

using nlohmann::json;

namespace {

// Locations are JSON-pointer style paths like /lattices/J/action/g1.

std::string quote(const std::string& s) { return "\"" + s + "\""; }

const json& need(const json& obj, const char* key, const std::string& where) {
    auto it = obj.find(key);
    if (it == obj.end()) throw ValidationError(where + ": missing " + quote(key));
    return *it;
}

void require_object(const json& j, const std::string& where) {
    if (!j.is_object()) throw ValidationError(where + ": expected an object");
}

void require_array(const json& j, const std::string& where) {
    if (!j.is_array()) throw ValidationError(where + ": expected an array");
}

void check_keys(const json& obj, std::initializer_list<const char*> allowed,
                const std::string& where) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool known = false;
        for (const char* k : allowed) known = known || it.key() == k;
        if (!known) throw ValidationError(where + ": unknown key " + quote(it.key()));
    }
}

// rethrows any library error as a ValidationError carrying the location
template <class F>
auto located(const std::string& where, F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const Error& e) {
        throw ValidationError(where + ": " + std::string(e.what()));
    }
}

int small_int(const json& j, const std::string& where) {
    Int v = int_from_json(j, where);
    if (v < INT_MIN || v > INT_MAX) throw ValidationError(where + ": value out of range");
    return v.convert_to<int>();
}

int nonneg_int(const json& j, const std::string& where) {
    int v = small_int(j, where);
    if (v < 0) throw ValidationError(where + ": expected a nonnegative integer");
    return v;
}

std::vector<int> int_list(const json& j, int lo, int hi, const std::string& where) {
    require_array(j, where);
    std::vector<int> out;
    out.reserve(j.size());
    for (size_t i = 0; i < j.size(); ++i) {
        int v = small_int(j[i], where + "/" + std::to_string(i));
        if (v < lo || v >= hi)
            throw ValidationError(where + "/" + std::to_string(i) + ": index out of range");
        out.push_back(v);
    }
    return out;
}

// "g3" -> 3; -1 when the key is not of that form
int generator_key_index(const std::string& key) {
    if (key.size() < 2 || key[0] != 'g') return -1;
    if (key.size() > 2 && key[1] == '0') return -1;  // no leading zeros
    int v = 0;
    for (size_t i = 1; i < key.size(); ++i) {
        if (!std::isdigit(static_cast<unsigned char>(key[i]))) return -1;
        if (v > (INT_MAX - 9) / 10) return -1;
        v = v * 10 + (key[i] - '0');
    }
    return v;
}

// One square matrix per group generator, keyed g0 .. g{k-1}.
std::vector<Mat> parse_action(const json& j, size_t gen_count, int rank,
                              const std::string& where) {
    require_object(j, where);
    std::vector<Mat> out(gen_count);
    std::vector<bool> seen(gen_count, false);
    for (auto it = j.begin(); it != j.end(); ++it) {
        int idx = generator_key_index(it.key());
        if (idx < 0 || idx >= static_cast<int>(gen_count)) {
            if (gen_count == 0)
                throw ValidationError(where + "/" + it.key() +
                                      ": the group has no generators; expected an empty object");
            throw ValidationError(where + "/" + it.key() + ": expected keys \"g0\" .. \"g" +
                                  std::to_string(gen_count - 1) + "\"");
        }
        Mat m = matrix_from_json(*it, where + "/" + it.key());
        if (m.rows == 0) m.cols = rank;  // an empty array cannot carry the column count
        if (m.rows != rank || m.cols != rank)
            throw ValidationError(where + "/" + it.key() + ": expected a " +
                                  std::to_string(rank) + "x" + std::to_string(rank) + " matrix");
        out[idx] = std::move(m);
        seen[idx] = true;
    }
    for (size_t i = 0; i < gen_count; ++i)
        if (!seen[i]) throw ValidationError(where + ": missing \"g" + std::to_string(i) + "\"");
    return out;
}

GroupPtr parse_group(const json& j, const std::string& where) {
    require_object(j, where);
    check_keys(j, {"degree", "generators"}, where);
    int degree = nonneg_int(need(j, "degree", where), where + "/degree");
    if (degree < 1) throw ValidationError(where + "/degree: expected a positive integer");
    const json& gj = need(j, "generators", where);
    require_array(gj, where + "/generators");
    std::vector<Permutation> gens;
    for (size_t i = 0; i < gj.size(); ++i) {
        std::string gw = where + "/generators/" + std::to_string(i);
        gens.push_back(Permutation{int_list(gj[i], 0, degree, gw)});
    }
    return located(where, [&] { return FiniteGroup::close_generators(degree, gens); });
}

PermutationStructure parse_orbits(const json& j, const GroupPtr& g, const std::string& where) {
    require_array(j, where);
    PermutationStructure ps;
    for (size_t i = 0; i < j.size(); ++i) {
        std::string ow = where + "/" + std::to_string(i);
        require_object(j[i], ow);
        check_keys(j[i], {"stabilizer", "basis_indices"}, ow);
        std::vector<int> members =
            int_list(need(j[i], "stabilizer", ow), 0, g->order(), ow + "/stabilizer");
        PermutationOrbit orb;
        orb.stabilizer =
            located(ow + "/stabilizer", [&] { return subgroup_from_members(*g, members); });
        orb.basis_indices =
            int_list(need(j[i], "basis_indices", ow), 0, INT_MAX, ow + "/basis_indices");
        ps.orbits.push_back(std::move(orb));
    }
    return ps;
}

GLattice parse_lattice(const json& j, const GroupPtr& g, const std::string& where) {
    require_object(j, where);
    check_keys(j, {"rank", "action", "orbits"}, where);
    int rank = nonneg_int(need(j, "rank", where), where + "/rank");
    std::vector<Mat> gens =
        parse_action(need(j, "action", where), g->generator_indices().size(), rank,
                     where + "/action");
    GLattice lat =
        located(where + "/action", [&] { return validate_lattice(g, rank, gens); });
    if (auto it = j.find("orbits"); it != j.end()) {
        PermutationStructure ps = parse_orbits(*it, g, where + "/orbits");
        if (!permutation_structure_matches(lat, ps))
            throw ValidationError(where +
                                  "/orbits: orbits do not describe the action on this basis");
        lat.permutation_structure = std::move(ps);
    }
    return lat;
}

GModule parse_module(const json& j, const GroupPtr& g, const std::string& where) {
    require_object(j, where);
    check_keys(j, {"free_cover_rank", "relations", "action"}, where);
    int m = nonneg_int(need(j, "free_cover_rank", where), where + "/free_cover_rank");
    const json& rj = need(j, "relations", where);
    require_array(rj, where + "/relations");
    // each entry is one relation vector of length free_cover_rank; they
    // become the columns of the relation matrix
    Mat relations(m, static_cast<int>(rj.size()));
    for (size_t c = 0; c < rj.size(); ++c) {
        std::string rw = where + "/relations/" + std::to_string(c);
        require_array(rj[c], rw);
        if (static_cast<int>(rj[c].size()) != m)
            throw ValidationError(rw + ": expected a vector of length " + std::to_string(m));
        for (int i = 0; i < m; ++i)
            relations(i, static_cast<int>(c)) =
                int_from_json(rj[c][i], rw + "/" + std::to_string(i));
    }
    std::vector<Mat> gens =
        parse_action(need(j, "action", where), g->generator_indices().size(), m,
                     where + "/action");
    return located(where, [&] { return validate_module(g, m, relations, gens); });
}

struct NamedModules {
    const std::map<std::string, GLattice>& lattices;
    const std::map<std::string, GModule>& modules;

    // every model object viewed as a module; nullopt when the name is unknown
    std::optional<GModule> find(const std::string& name) const {
        if (auto it = lattices.find(name); it != lattices.end()) return to_module(it->second);
        if (auto it = modules.find(name); it != modules.end()) return it->second;
        return std::nullopt;
    }
};

ModelMap parse_map(const json& j, const NamedModules& named, const std::string& where) {
    require_object(j, where);
    check_keys(j, {"source", "target", "matrix"}, where);
    ModelMap out;
    const json& sj = need(j, "source", where);
    if (!sj.is_string()) throw ValidationError(where + "/source: expected an object name");
    out.source = sj.get<std::string>();
    const json& tj = need(j, "target", where);
    if (!tj.is_string()) throw ValidationError(where + "/target: expected an object name");
    out.target = tj.get<std::string>();
    std::optional<GModule> src = named.find(out.source);
    if (!src)
        throw ValidationError(where + "/source: no lattice or module named " +
                              quote(out.source));
    std::optional<GModule> tgt = named.find(out.target);
    if (!tgt)
        throw ValidationError(where + "/target: no lattice or module named " +
                              quote(out.target));
    Mat m = matrix_from_json(need(j, "matrix", where), where + "/matrix");
    if (m.rows == 0) m.cols = src->free_cover_rank;
    out.map = located(where, [&] {
        return make_gmap(std::move(*src), std::move(*tgt), std::move(m));
    });
    return out;
}

json json_columns(const Mat& m) {
    json out = json::array();
    for (int c = 0; c < m.cols; ++c) {
        json col = json::array();
        for (int i = 0; i < m.rows; ++i) col.push_back(json_int(m(i, c)));
        out.push_back(std::move(col));
    }
    return out;
}

json emit_action(const GroupPtr& g, const std::vector<Mat>& action) {
    json out = json::object();
    const std::vector<int>& gi = g->generator_indices();
    for (size_t i = 0; i < gi.size(); ++i)
        out["g" + std::to_string(i)] = json_matrix(action[gi[i]]);
    return out;
}

}  // namespace

json orbits_to_json(const PermutationStructure& ps) {
    json orbits = json::array();
    for (const PermutationOrbit& o : ps.orbits) {
        json oj;
        oj["stabilizer"] = o.stabilizer.members;
        oj["basis_indices"] = o.basis_indices;
        orbits.push_back(std::move(oj));
    }
    return orbits;
}

json lattice_to_json(const GLattice& l) {
    json j;
    j["rank"] = l.rank;
    j["action"] = emit_action(l.group, l.action);
    if (l.permutation_structure) j["orbits"] = orbits_to_json(*l.permutation_structure);
    return j;
}

json module_to_json(const GModule& m) {
    json j;
    j["free_cover_rank"] = m.free_cover_rank;
    j["relations"] = json_columns(m.relations);
    j["action"] = emit_action(m.group, m.action);
    return j;
}

Int int_from_json(const json& j, const std::string& where) {
    if (j.is_number_unsigned()) return Int(j.get<std::uint64_t>());
    if (j.is_number_integer()) return Int(j.get<std::int64_t>());
    if (j.is_string()) {
        const std::string s = j.get<std::string>();
        size_t start = (!s.empty() && s[0] == '-') ? 1 : 0;
        bool ok = start < s.size();
        for (size_t i = start; ok && i < s.size(); ++i)
            ok = std::isdigit(static_cast<unsigned char>(s[i])) != 0;
        if (!ok)
            throw ValidationError(where + ": not a decimal integer: " + quote(s));
        return Int(s);
    }
    throw ValidationError(where + ": expected an integer (or a decimal string)");
}

json json_int(const Int& v) {
    // doubles hold integers exactly up to 2^53 - 1; larger values go out as
    // decimal strings so no JSON reader can round them
    static const Int kMaxExact = (Int(1) << 53) - 1;
    if (v >= -kMaxExact && v <= kMaxExact) return json(v.convert_to<std::int64_t>());
    return json(to_string(v));
}

Mat matrix_from_json(const json& j, const std::string& where) {
    require_array(j, where);
    int rows = static_cast<int>(j.size());
    if (rows == 0) return Mat(0, 0);
    require_array(j[0], where + "/0");
    int cols = static_cast<int>(j[0].size());
    Mat m(rows, cols);
    for (int i = 0; i < rows; ++i) {
        std::string rw = where + "/" + std::to_string(i);
        require_array(j[i], rw);
        if (static_cast<int>(j[i].size()) != cols)
            throw ValidationError(rw + ": rows have different lengths");
        for (int c = 0; c < cols; ++c)
            m(i, c) = int_from_json(j[i][c], rw + "/" + std::to_string(c));
    }
    return m;
}

json json_matrix(const Mat& m) {
    json out = json::array();
    for (int i = 0; i < m.rows; ++i) {
        json row = json::array();
        for (int c = 0; c < m.cols; ++c) row.push_back(json_int(m(i, c)));
        out.push_back(std::move(row));
    }
    return out;
}

ModelFile parse_model_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(e.what());
    }
    require_object(j, "/");
    check_keys(j, {"group", "lattices", "modules", "maps"}, "/");

    ModelFile m;
    m.group = parse_group(need(j, "group", "/"), "/group");

    std::set<std::string> names;
    auto claim = [&](const std::string& name, const std::string& where) {
        if (name.empty()) throw ValidationError(where + ": empty name");
        if (!names.insert(name).second)
            throw ValidationError(where + ": name " + quote(name) + " already used");
    };

    if (auto it = j.find("lattices"); it != j.end()) {
        require_object(*it, "/lattices");
        for (auto lit = it->begin(); lit != it->end(); ++lit) {
            std::string where = "/lattices/" + lit.key();
            claim(lit.key(), where);
            m.lattices.emplace(lit.key(), parse_lattice(*lit, m.group, where));
        }
    }
    if (auto it = j.find("modules"); it != j.end()) {
        require_object(*it, "/modules");
        for (auto mit = it->begin(); mit != it->end(); ++mit) {
            std::string where = "/modules/" + mit.key();
            claim(mit.key(), where);
            m.modules.emplace(mit.key(), parse_module(*mit, m.group, where));
        }
    }
    if (auto it = j.find("maps"); it != j.end()) {
        require_object(*it, "/maps");
        NamedModules named{m.lattices, m.modules};
        for (auto fit = it->begin(); fit != it->end(); ++fit) {
            std::string where = "/maps/" + fit.key();
            claim(fit.key(), where);
            m.maps.emplace(fit.key(), parse_map(*fit, named, where));
        }
    }
    return m;
}

ModelFile parse_model(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw UsageError("cannot open model file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_model_text(buf.str());
}

std::string emit_model(const ModelFile& m) {
    json j;
    j["group"]["degree"] = m.group->degree();
    json gens = json::array();
    for (int gi : m.group->generator_indices()) gens.push_back(m.group->element(gi).images);
    j["group"]["generators"] = std::move(gens);

    for (const auto& [name, lat] : m.lattices) j["lattices"][name] = lattice_to_json(lat);
    for (const auto& [name, mod] : m.modules) j["modules"][name] = module_to_json(mod);
    for (const auto& [name, mm] : m.maps) {
        json fj;
        fj["source"] = mm.source;
        fj["target"] = mm.target;
        fj["matrix"] = json_matrix(mm.map.matrix);
        j["maps"][name] = std::move(fj);
    }
    return j.dump(2) + "\n";
}

}  // namespace flk
