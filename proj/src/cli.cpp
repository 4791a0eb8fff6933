#include "flk/cli.hpp"

#include <cctype>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "flk/cohomology.hpp"
#include "flk/homspace.hpp"
#include "flk/model.hpp"
#include "flk/report.hpp"
#include "flk/resolutions.hpp"
#include "flk/tori.hpp"
#include "flk/version.hpp"

namespace flk {
namespace {

using nlohmann::json;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw UsageError("cannot open model file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::string fnv1a64_hex(const std::string& bytes) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "fnv1a64:%016llx", static_cast<unsigned long long>(h));
    return buf;
}

// Shared state across option parsing and the subcommand callbacks; the model
// file is read and validated at most once.
struct Session {
    std::string model_path;
    std::string format = "json";
    std::uint64_t seed = 0;
    bool timing = false;

    std::optional<ModelFile> model;
    std::string digest;
    json results;
    int exit_code = 0;

    const ModelFile& load() {
        if (!model) {
            if (model_path.empty()) throw UsageError("--model is required for this command");
            std::string bytes = read_file(model_path);
            digest = fnv1a64_hex(bytes);
            model = parse_model_text(bytes);
        }
        return *model;
    }

    bool is_lattice(const std::string& name) { return load().lattices.count(name) != 0; }

    // named object as a lattice; modules must be torsion-free
    GLattice lattice(const std::string& name) {
        const ModelFile& m = load();
        if (auto it = m.lattices.find(name); it != m.lattices.end()) return it->second;
        if (auto it = m.modules.find(name); it != m.modules.end())
            return lattice_from_module(it->second);
        throw UsageError("no lattice or module named \"" + name + "\"");
    }

    GModule module(const std::string& name) {
        const ModelFile& m = load();
        if (auto it = m.lattices.find(name); it != m.lattices.end()) return to_module(it->second);
        if (auto it = m.modules.find(name); it != m.modules.end()) return it->second;
        throw UsageError("no lattice or module named \"" + name + "\"");
    }

    const ModelMap& map(const std::string& name) {
        const ModelFile& m = load();
        auto it = m.maps.find(name);
        if (it == m.maps.end()) throw UsageError("no map named \"" + name + "\"");
        return it->second;
    }
};

std::vector<std::pair<int, Subgroup>> pick_subgroups(const FiniteGroup& g,
                                                     const std::string& sel) {
    std::vector<Subgroup> all = all_subgroups(g);
    std::vector<std::pair<int, Subgroup>> out;
    if (sel == "all") {
        for (size_t i = 0; i < all.size(); ++i) out.emplace_back(static_cast<int>(i), all[i]);
        return out;
    }
    size_t pos = 0;
    int idx = -1;
    try {
        idx = std::stoi(sel, &pos);
    } catch (const std::exception&) {
        pos = 0;
    }
    if (pos != sel.size() || idx < 0)
        throw UsageError("--subgroup takes \"all\" or a subgroup index");
    if (idx >= static_cast<int>(all.size()))
        throw UsageError("subgroup index " + sel + " out of range: the group has " +
                         std::to_string(all.size()) + " subgroups");
    out.emplace_back(idx, all[idx]);
    return out;
}

Int parse_positive(const std::string& s, const char* flag) {
    bool ok = !s.empty();
    for (char c : s) ok = ok && std::isdigit(static_cast<unsigned char>(c)) != 0;
    if (!ok) throw UsageError(std::string(flag) + " takes a positive integer");
    Int v(s);
    if (v < 1) throw UsageError(std::string(flag) + " takes a positive integer");
    return v;
}

HomSpaceSpec spec_from_map(Session& s, const std::string& map_name) {
    const ModelMap& mm = s.map(map_name);
    if (!s.is_lattice(mm.source))
        throw ValidationError("restriction source \"" + mm.source +
                              "\" must be a lattice with orbits");
    GLattice ghat = s.load().lattices.at(mm.source);
    GModule mhat = s.module(mm.target);
    return make_homspace_spec(std::move(ghat), std::move(mhat), mm.map.matrix);
}

json run_selftest(bool& all_ok) {
    struct Check {
        std::string name;
        bool ok;
        std::string note;
    };
    std::vector<Check> checks;
    auto add = [&](const std::string& name, bool ok, const std::string& note = "") {
        checks.push_back({name, ok, note});
    };

    auto c2 = FiniteGroup::close_generators(2, {Permutation{{1, 0}}});
    auto c3 = FiniteGroup::close_generators(3, {Permutation{{1, 2, 0}}});
    auto v4 =
        FiniteGroup::close_generators(4, {Permutation{{1, 0, 3, 2}}, Permutation{{2, 3, 0, 1}}});
    auto s3 =
        FiniteGroup::close_generators(3, {Permutation{{1, 0, 2}}, Permutation{{1, 2, 0}}});

    for (const GroupPtr& g : {c2, c3, v4, s3}) {
        std::string tag = " (group order " + std::to_string(g->order()) + ")";
        GLattice n1 = norm_one_lattice(g);
        Resolution fr = flasque_resolution(n1);
        add("flasque resolution certifies on the norm-one lattice" + tag,
            fr.certificates.all_green(), fr.certificates.detail);
        bool dual_ok = true;
        for (const Subgroup& h : all_subgroups(*g))
            dual_ok = dual_ok && tate_cohomology(dual(n1), h, 1).torsion_order() ==
                                     tate_cohomology(n1, h, -1).torsion_order();
        add("degree -1 matches degree 1 of the dual" + tag, dual_ok);
    }

    add("quadratic norm-one count is trivial",
        r_equivalence_local(make_torus_spec(norm_one_lattice(c2))).count_group.is_trivial());
    add("biquadratic norm-one count is Z/2",
        r_equivalence_local(make_torus_spec(norm_one_lattice(v4))).count_group ==
            FinAbGroup{0, {Int(2)}});

    std::vector<Subgroup> s3_subs = all_subgroups(*s3);
    GLattice coset = permutation_lattice(s3, s3_subs[1]);
    add("coset lattices classify as flasque and coflasque",
        is_flasque(coset).holds && is_coflasque(coset).holds);

    GModule mu2 = validate_module(c2, 1, Mat{{2}}, {Mat{{1}}});
    Mat aug(1, 2);
    aug(0, 0) = aug(0, 1) = 1;
    HomSpaceSpec spec = make_homspace_spec(regular_lattice(c2), mu2, aug);
    QuasiResolutionReport rep = second_construction(spec);
    add("quasi-resolution certifies on the quadratic model",
        rep.certificates.resolution_exact && rep.certificates.row_exact &&
            rep.certificates.pic_trivial && rep.certificates.u_class.value != Verdict::no,
        rep.certificates.detail);

    CoflasqueTower tower = coflasque_tower(norm_one_lattice(c2));
    add("tower certifies on the sign lattice", tower.certificates.all_green(),
        tower.certificates.detail);

    json out;
    json list = json::array();
    all_ok = true;
    for (const Check& c : checks) {
        json e;
        e["name"] = c.name;
        e["ok"] = c.ok;
        if (!c.note.empty()) e["note"] = c.note;
        list.push_back(std::move(e));
        all_ok = all_ok && c.ok;
    }
    out["checks"] = std::move(list);
    out["all_ok"] = all_ok;
    return out;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Session s;
    CLI::App app{"integral lattice invariants over finite groups", "flasquekit"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(kToolName) + " " + kToolVersion);
    app.add_option("--model", s.model_path, "model file (JSON)");
    app.add_option("--seed", s.seed, "seed for randomized search orders");
    app.add_option("--format", s.format, "output format")
        ->check(CLI::IsMember({"json", "text"}));
    app.add_flag("--timing", s.timing, "include wall time in the report");

    std::string coh_module, coh_subgroup = "all";
    int coh_degree = 0;
    auto* coh = app.add_subcommand("cohomology",
                                   "Tate cohomology of a lattice or module over subgroups");
    coh->fallthrough();
    coh->add_option("--module", coh_module, "lattice or module name")->required();
    coh->add_option("--degree", coh_degree, "degree between -3 and 3")
        ->required()
        ->check(CLI::Range(-3, 3));
    coh->add_option("--subgroup", coh_subgroup, "\"all\" or a subgroup index");
    coh->callback([&] {
        const ModelFile& m = s.load();
        const GLattice* lat = nullptr;
        const GModule* mod = nullptr;
        if (auto it = m.lattices.find(coh_module); it != m.lattices.end()) lat = &it->second;
        else if (auto it2 = m.modules.find(coh_module); it2 != m.modules.end())
            mod = &it2->second;
        else
            throw UsageError("no lattice or module named \"" + coh_module + "\"");
        json values = json::array();
        for (const auto& [idx, h] : pick_subgroups(*m.group, coh_subgroup)) {
            FinAbGroup v = lat ? tate_cohomology(*lat, h, coh_degree)
                               : tate_cohomology(*mod, h, coh_degree);
            json e;
            e["index"] = idx;
            e["subgroup"] = to_json(h);
            e["value"] = to_json(v);
            values.push_back(std::move(e));
        }
        s.results["module"] = coh_module;
        s.results["degree"] = coh_degree;
        s.results["values"] = std::move(values);
    });

    std::string cls_module;
    int cls_budget = 2, cls_norm = 2;
    auto* cls = app.add_subcommand("classify",
                                   "flasque/coflasque/permutation verdicts for a lattice");
    cls->fallthrough();
    cls->add_option("--module", cls_module, "lattice or torsion-free module name")->required();
    cls->add_option("--rank-budget", cls_budget, "extra rank allowed in the stable search");
    cls->add_option("--norm-bound", cls_norm, "coordinate bound for the basis search");
    cls->callback([&] {
        GLattice l = s.lattice(cls_module);
        s.results["module"] = cls_module;
        s.results["flasque"] = to_json(is_flasque(l));
        s.results["coflasque"] = to_json(is_coflasque(l));
        s.results["permutation"] = to_json(is_permutation_bounded(l, cls_norm, s.seed));
        s.results["stably_permutation"] =
            to_json(is_stably_permutation_bounded(l, cls_budget, cls_norm, s.seed));
        s.results["fingerprint"] = to_json(similarity_fingerprint(l));
    });

    std::string res_kind, res_module;
    auto* res = app.add_subcommand(
        "resolve", "flasque or coflasque resolution, or permutation embedding");
    res->fallthrough();
    res->add_option("--kind", res_kind, "flasque, coflasque, or embed")
        ->required()
        ->check(CLI::IsMember({"flasque", "coflasque", "embed"}));
    res->add_option("--module", res_module, "lattice or module name")->required();
    res->callback([&] {
        ResolutionOptions opts{s.seed, true};
        Resolution r;
        if (res_kind == "embed") {
            r = permutation_embedding(s.lattice(res_module), opts);
        } else if (s.is_lattice(res_module)) {
            GLattice l = s.lattice(res_module);
            r = res_kind == "flasque" ? flasque_resolution(l, opts)
                                      : coflasque_resolution(l, opts);
        } else {
            GModule mod = s.module(res_module);
            r = res_kind == "flasque" ? flasque_resolution(mod, opts)
                                      : coflasque_resolution(mod, opts);
        }
        s.results = to_json(r);
        s.results["module"] = res_module;
        if (res_kind == "flasque")
            s.results["fingerprint"] = to_json(similarity_fingerprint(r.mid));
        if (res_kind == "embed")
            s.results["fingerprint"] =
                to_json(similarity_fingerprint(lattice_from_module(r.quot)));
    });

    auto* torus =
        app.add_subcommand("torus", "norm-one construction and R-equivalence counts");
    torus->fallthrough();
    torus->require_subcommand(1);
    std::string tor_chars;
    auto* requiv =
        torus->add_subcommand("requiv", "local R-equivalence count from the flasque part");
    requiv->fallthrough();
    requiv->add_option("--characters", tor_chars, "character lattice name")->required();
    requiv->callback([&] {
        TorusSpec t = make_torus_spec(s.lattice(tor_chars));
        s.results = to_json(r_equivalence_local(t, ResolutionOptions{s.seed, true}));
        s.results["characters"] = tor_chars;
    });
    auto* normone = torus->add_subcommand(
        "norm-one", "emit the norm-one character lattice of the model's group");
    normone->fallthrough();
    normone->callback([&] {
        const ModelFile& m = s.load();
        ModelFile emitted;
        emitted.group = m.group;
        emitted.lattices.emplace("norm_one", norm_one_lattice(m.group));
        s.results["model"] = json::parse(emit_model(emitted));
    });

    auto* hs = app.add_subcommand("homspace", "homogeneous-space character computations");
    hs->fallthrough();
    hs->require_subcommand(1);
    std::string hs_restriction, hs_module, hs_gclasses = "1";
    int hs_norm = 2;
    auto* inv = hs->add_subcommand("invariants", "U(X) and Pic of the quotient");
    inv->fallthrough();
    inv->add_option("--restriction", hs_restriction, "restriction map name")->required();
    inv->callback([&] {
        s.results = to_json(quotient_invariants(spec_from_map(s, hs_restriction)));
        s.results["restriction"] = hs_restriction;
    });
    auto* con = hs->add_subcommand("construct", "flasque quasi-resolution of the space");
    con->fallthrough();
    con->add_option("--restriction", hs_restriction, "restriction map name")->required();
    con->add_option("--norm-bound", hs_norm, "coordinate bound for the basis search");
    con->callback([&] {
        ConstructionOptions opts{s.seed, hs_norm};
        s.results = to_json(second_construction(spec_from_map(s, hs_restriction), opts));
        s.results["restriction"] = hs_restriction;
    });
    auto* tow =
        hs->add_subcommand("tower", "coflasque resolution tower over the stabilizer torus");
    tow->fallthrough();
    tow->add_option("--module", hs_module, "torsion-free character lattice name")->required();
    tow->callback([&] {
        CoflasqueTower t = coflasque_tower(s.module(hs_module), ResolutionOptions{s.seed, true});
        s.results = to_json(t);
        s.results["module"] = hs_module;
    });
    auto* cnt = hs->add_subcommand("count", "lower bound for the R-equivalence class count");
    cnt->fallthrough();
    cnt->add_option("--restriction", hs_restriction, "restriction map name")->required();
    cnt->add_option("--g-classes", hs_gclasses, "ambient class count factor, at least 1");
    cnt->add_option("--norm-bound", hs_norm, "coordinate bound for the basis search");
    cnt->callback([&] {
        Int g_classes = parse_positive(hs_gclasses, "--g-classes");
        ConstructionOptions opts{s.seed, hs_norm};
        s.results = to_json(homspace_r_count(spec_from_map(s, hs_restriction), g_classes, opts));
        s.results["restriction"] = hs_restriction;
        s.results["g_classes"] = json_int(g_classes);
    });

    auto* st = app.add_subcommand("selftest", "run the bundled invariant checks");
    st->fallthrough();
    st->callback([&] {
        bool all_ok = true;
        s.results = run_selftest(all_ok);
        s.exit_code = all_ok ? 0 : 3;
    });

    auto t0 = std::chrono::steady_clock::now();
    try {
        app.parse(std::vector<std::string>(args.rbegin(), args.rend()));
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e, out, err);
        return rc == 0 ? 0 : 64;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        switch (e.kind()) {
            case ErrorKind::validation: return 2;
            case ErrorKind::construction: return 3;
            case ErrorKind::usage: return 64;
        }
        return 64;
    }

    json report;
    std::ostringstream echo;
    for (size_t i = 0; i < args.size(); ++i) echo << (i ? " " : "") << args[i];
    report["command"] = echo.str();
    report["version"] = std::string(kToolName) + " " + kToolVersion;
    report["seed"] = json_int(Int(s.seed));
    if (!s.digest.empty()) report["input_digest"] = s.digest;
    report["results"] = std::move(s.results);
    if (s.timing) {
        auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                      std::chrono::steady_clock::now() - t0)
                      .count();
        report["wall_ms"] = static_cast<std::int64_t>(ms);
    }
    out << (s.format == "text" ? emit_text(report) : emit_json(report));
    return s.exit_code;
}

}  // namespace flk
