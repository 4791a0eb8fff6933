#include "flk/report.hpp"

#include <sstream>

namespace flk {

using nlohmann::json;

namespace {

const char* kind_text(ResolutionKind k) {
    switch (k) {
        case ResolutionKind::coflasque: return "coflasque";
        case ResolutionKind::flasque: return "flasque";
        default: return "permutation_embedding";
    }
}

json subgroup_list(const std::vector<Subgroup>& hs) {
    json out = json::array();
    for (const Subgroup& h : hs) out.push_back(to_json(h));
    return out;
}

}  // namespace

json to_json(const FinAbGroup& g) {
    json j;
    j["free_rank"] = g.free_rank;
    json factors = json::array();
    for (const Int& d : g.invariant_factors) factors.push_back(json_int(d));
    j["invariant_factors"] = std::move(factors);
    return j;
}

json to_json(const Subgroup& h) { return json(h.members); }

json to_json(const Fingerprint& f) {
    json out = json::array();
    for (const auto& [h, value] : f) {
        json e;
        e["subgroup"] = to_json(h);
        e["h1"] = to_json(value);
        out.push_back(std::move(e));
    }
    return out;
}

json to_json(const ClassCheck& c) {
    json j;
    j["holds"] = c.holds;
    if (c.witness) {
        j["witness"]["subgroup"] = to_json(c.witness->subgroup);
        j["witness"]["value"] = to_json(c.witness->value);
    }
    return j;
}

json to_json(const Verdict3& v) {
    json j;
    j["value"] = verdict_text(v.value);
    j["bound_used"] = v.bound_used;
    if (!v.note.empty()) j["note"] = v.note;
    if (v.permuted_basis) j["orbits"] = orbits_to_json(*v.permuted_basis);
    if (v.basis_matrix) j["basis_matrix"] = json_matrix(*v.basis_matrix);
    if (v.stable) {
        json s;
        s["added"] = subgroup_list(v.stable->added);
        s["target"] = subgroup_list(v.stable->target);
        s["intertwiner"] = json_matrix(v.stable->intertwiner);
        j["stable_witness"] = std::move(s);
    }
    return j;
}

json to_json(const Resolution& r) {
    json j;
    j["kind"] = kind_text(r.kind);
    j["sub"] = lattice_to_json(r.sub);
    j["mid"] = lattice_to_json(r.mid);
    j["quot"] = module_to_json(r.quot);
    j["inject"] = json_matrix(r.inject.matrix);
    j["project"] = json_matrix(r.project.matrix);
    json c;
    c["exactness"] = r.certificates.exactness;
    c["sub_class"] = verdict_text(r.certificates.sub_class);
    c["mid_class"] = verdict_text(r.certificates.mid_class);
    c["quot_class"] = verdict_text(r.certificates.quot_class);
    c["all_green"] = r.certificates.all_green();
    if (!r.certificates.detail.empty()) c["detail"] = r.certificates.detail;
    j["certificates"] = std::move(c);
    return j;
}

json to_json(const REquivReport& r) {
    json j;
    j["flasque_part"] = lattice_to_json(r.flasque_part);
    j["count_group"] = to_json(r.count_group);
    j["count"] = r.count_group.text();
    j["count_order"] = json_int(r.count_group.torsion_order());
    j["fingerprint"] = to_json(r.fingerprint);
    return j;
}

json to_json(const QuotientInvariants& q) {
    json j;
    j["u"] = lattice_to_json(q.u_x);
    j["u_basis"] = json_matrix(q.u_basis);
    j["pic"] = to_json(q.pic_group);
    j["pic_module"] = module_to_json(q.pic_x);
    return j;
}

json to_json(const QuasiResolutionReport& q) {
    json j;
    j["resolution"] = to_json(q.resolution);
    j["s0"] = lattice_to_json(q.s0);
    j["e0"] = lattice_to_json(q.e0);
    j["u_y0"] = lattice_to_json(q.u_y0);
    j["u_basis"] = json_matrix(q.u_basis);
    j["u_inject"] = json_matrix(q.u_inject.matrix);
    j["u_project"] = json_matrix(q.u_project.matrix);
    j["pic_y0"] = module_to_json(q.pic_y0);
    json c;
    c["resolution_exact"] = q.certificates.resolution_exact;
    c["row_exact"] = q.certificates.row_exact;
    c["pic_trivial"] = q.certificates.pic_trivial;
    c["u_class"] = to_json(q.certificates.u_class);
    if (!q.certificates.detail.empty()) c["detail"] = q.certificates.detail;
    j["certificates"] = std::move(c);
    return j;
}

json to_json(const CoflasqueTower& t) {
    json j;
    j["q0"] = lattice_to_json(t.q0);
    j["p0"] = lattice_to_json(t.p0);
    j["e0"] = lattice_to_json(t.e0);
    j["s0"] = lattice_to_json(t.s0);
    j["f0"] = lattice_to_json(t.f0);
    json maps;
    maps["q0_to_p0"] = json_matrix(t.q0_to_p0.matrix);
    maps["p0_to_mhat"] = json_matrix(t.p0_to_mhat.matrix);
    maps["q0_to_e0"] = json_matrix(t.q0_to_e0.matrix);
    maps["e0_to_s0"] = json_matrix(t.e0_to_s0.matrix);
    maps["e0_to_f0"] = json_matrix(t.e0_to_f0.matrix);
    maps["f0_to_mhat"] = json_matrix(t.f0_to_mhat.matrix);
    maps["p0_to_f0"] = json_matrix(t.p0_to_f0.matrix);
    maps["f0_to_s0"] = json_matrix(t.f0_to_s0.matrix);
    j["maps"] = std::move(maps);
    json c;
    c["columns_exact"] = t.certificates.columns_exact;
    c["rows_exact"] = t.certificates.rows_exact;
    c["fingerprint_matches"] = t.certificates.fingerprint_matches;
    c["q0_class"] = verdict_text(t.certificates.q0_class);
    c["s0_class"] = verdict_text(t.certificates.s0_class);
    c["all_green"] = t.certificates.all_green();
    if (!t.certificates.detail.empty()) c["detail"] = t.certificates.detail;
    j["certificates"] = std::move(c);
    j["s0_fingerprint"] = to_json(similarity_fingerprint(t.s0));
    return j;
}

json to_json(const RCount& c) {
    json j;
    j["h1_factor"] = to_json(c.h1_factor);
    j["h1_order"] = json_int(c.h1_factor.torsion_order());
    j["total_lower_bound"] = json_int(c.total_lower_bound);
    return j;
}

std::string emit_json(const json& report) { return report.dump(2) + "\n"; }

namespace {

// {"free_rank": r, "invariant_factors": [...]} and nothing else
bool is_finab_shape(const json& j) {
    return j.is_object() && j.size() == 2 && j.contains("free_rank") &&
           j.contains("invariant_factors") && j["free_rank"].is_number_integer() &&
           j["invariant_factors"].is_array();
}

std::string finab_text(const json& j) {
    FinAbGroup g;
    g.free_rank = j["free_rank"].get<int>();
    for (const auto& d : j["invariant_factors"])
        g.invariant_factors.push_back(int_from_json(d, ""));
    return g.text();
}

bool is_scalar(const json& j) { return !j.is_object() && !j.is_array(); }

std::string scalar_text(const json& j) {
    if (j.is_string()) return j.get<std::string>();
    return j.dump();
}

// arrays of numbers print on one line; arrays of such arrays print as
// matrix rows
bool is_flat_array(const json& j) {
    if (!j.is_array()) return false;
    for (const auto& e : j)
        if (!is_scalar(e)) return false;
    return true;
}

std::string flat_array_text(const json& j) {
    std::string s = "[";
    for (size_t i = 0; i < j.size(); ++i) {
        if (i) s += " ";
        s += scalar_text(j[i]);
    }
    return s + "]";
}

void render(const json& j, int depth, std::ostringstream& out) {
    std::string pad(static_cast<size_t>(depth) * 2, ' ');
    if (j.is_object()) {
        for (auto it = j.begin(); it != j.end(); ++it) {
            const json& v = *it;
            if (is_finab_shape(v)) {
                out << pad << it.key() << ": " << finab_text(v) << "\n";
            } else if (is_scalar(v)) {
                out << pad << it.key() << ": " << scalar_text(v) << "\n";
            } else if (is_flat_array(v)) {
                out << pad << it.key() << ": " << flat_array_text(v) << "\n";
            } else {
                out << pad << it.key() << ":\n";
                render(v, depth + 1, out);
            }
        }
    } else if (j.is_array()) {
        if (j.empty()) out << pad << "(empty)\n";
        for (const auto& e : j) {
            if (is_finab_shape(e)) {
                out << pad << finab_text(e) << "\n";
            } else if (is_scalar(e)) {
                out << pad << scalar_text(e) << "\n";
            } else if (is_flat_array(e)) {
                out << pad << flat_array_text(e) << "\n";
            } else {
                out << pad << "-\n";
                render(e, depth + 1, out);
            }
        }
    } else {
        out << pad << scalar_text(j) << "\n";
    }
}

}  // namespace

std::string emit_text(const json& report) {
    std::ostringstream out;
    render(report, 0, out);
    return out.str();
}

}  // namespace flk
