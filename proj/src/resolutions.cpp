#include "flk/resolutions.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include "flk/errors.hpp"

namespace flk {

std::string verdict_text(Verdict v) {
    switch (v) {
        case Verdict::yes: return "yes";
        case Verdict::no: return "no";
        default: return "unknown";
    }
}

bool is_short_exact(const GMap& inject, const GMap& project, std::string* why) {
    auto fail = [why](const char* msg) {
        if (why) *why = msg;
        return false;
    };
    if (inject.source.relations.cols != 0 || inject.target.relations.cols != 0)
        throw TorsionInput("is_short_exact needs torsion-free sub and mid terms");
    if (inject.target.free_cover_rank != project.source.free_cover_rank)
        return fail("middle terms of the two maps have different ranks");
    const Mat& b = inject.matrix;
    const Mat& m = project.matrix;
    const Mat& rel = project.target.relations;
    if (rank_of(b) != inject.source.free_cover_rank) return fail("injection has a kernel");
    if (!abelian_quotient(project.target.free_cover_rank, hstack(rel, m)).is_trivial())
        return fail("projection is not surjective");
    Mat comp = mul(m, b);
    for (int j = 0; j < comp.cols; ++j) {
        Mat col = columns(comp, j, 1);
        if (!col.is_zero() && !in_column_span(rel, col))
            return fail("composite of injection and projection is nonzero");
    }
    Mat ker = kernel_columns(hstack(m, rel));
    Mat ker_mid = column_span_basis(rows_of(ker, 0, project.source.free_cover_rank));
    if (!same_column_span(ker_mid, b))
        return fail("image of the injection differs from the kernel of the projection");
    return true;
}

namespace {

std::string subgroup_text(const Subgroup& h) {
    std::ostringstream os;
    os << "{";
    for (size_t i = 0; i < h.members.size(); ++i) os << (i ? "," : "") << h.members[i];
    os << "}";
    return os.str();
}

// One permutation summand Z[G/stab] of the cover, together with the vector its
// identity coset maps to.  vec lives in the free cover of the target module
// and is fixed by stab modulo the relations, which makes gH |-> g.vec well
// defined.
struct Summand {
    Subgroup stab;
    CosetAction cosets;
    Mat vec;
};

int coset_rep(const CosetAction& ca, int c) { return ca.cosets[c][0]; }

// images of the h-orbit sums of the summand's cosets, one column per orbit;
// these span the h-fixed part of the summand's image
Mat orbit_sum_columns(const GModule& n, const Summand& s, const Subgroup& h) {
    const int k = static_cast<int>(s.cosets.cosets.size());
    std::vector<int> comp(k, -1);
    int components = 0;
    for (int c = 0; c < k; ++c) {
        if (comp[c] >= 0) continue;
        std::vector<int> queue{c};
        comp[c] = components;
        while (!queue.empty()) {
            int cur = queue.back();
            queue.pop_back();
            for (int m : h.members) {
                int next = s.cosets.action[m].images[cur];
                if (comp[next] < 0) {
                    comp[next] = components;
                    queue.push_back(next);
                }
            }
        }
        ++components;
    }
    Mat cols(n.free_cover_rank, components);
    for (int c = 0; c < k; ++c) {
        Mat img = mul(n.act(coset_rep(s.cosets, c)), s.vec);
        for (int i = 0; i < img.rows; ++i) cols(i, comp[c]) += img(i, 0);
    }
    return cols;
}

GLattice assemble_permutation(GroupPtr gp, const std::vector<Summand>& summands) {
    const FiniteGroup& g = *gp;
    int rank = 0;
    for (const Summand& s : summands) rank += static_cast<int>(s.cosets.cosets.size());
    std::vector<Mat> action(g.order(), Mat(rank, rank));
    PermutationStructure ps;
    int off = 0;
    for (const Summand& s : summands) {
        const int k = static_cast<int>(s.cosets.cosets.size());
        for (int e = 0; e < g.order(); ++e)
            for (int c = 0; c < k; ++c) action[e](off + s.cosets.action[e].images[c], off + c) = 1;
        PermutationOrbit orbit{s.stab, {}};
        orbit.basis_indices.resize(k);
        std::iota(orbit.basis_indices.begin(), orbit.basis_indices.end(), off);
        ps.orbits.push_back(std::move(orbit));
        off += k;
    }
    GLattice p{std::move(gp), rank, std::move(action), std::move(ps)};
    return p;
}

Mat cover_map_matrix(const GModule& n, const std::vector<Summand>& summands, int rank) {
    Mat phi(n.free_cover_rank, rank);
    int off = 0;
    for (const Summand& s : summands) {
        const int k = static_cast<int>(s.cosets.cosets.size());
        for (int c = 0; c < k; ++c) {
            Mat img = mul(n.act(coset_rep(s.cosets, c)), s.vec);
            for (int i = 0; i < img.rows; ++i) phi(i, off + c) = img(i, 0);
        }
        off += k;
    }
    return phi;
}

// subgroups from largest to smallest, with ties broken by the seed
std::vector<Subgroup> cover_order(const FiniteGroup& g, std::mt19937_64& rng) {
    std::vector<Subgroup> subs = all_subgroups(g);
    std::reverse(subs.begin(), subs.end());
    size_t tier = 0;
    while (tier < subs.size()) {
        size_t end = tier + 1;
        while (end < subs.size() && subs[end].order() == subs[tier].order()) ++end;
        std::shuffle(subs.begin() + tier, subs.begin() + end, rng);
        tier = end;
    }
    return subs;
}

// The fixed points of the mid lattice surject onto the fixed points of the
// quotient module at h.  Computed from the finished resolution, not from the
// construction's bookkeeping, so it doubles as an independent check.
bool fixed_points_surjective(const GLattice& p, const Mat& phi, const GModule& n,
                             const Subgroup& h) {
    Mat image = mul(phi, fixed_sublattice(p, h));
    Mat span = column_span_basis(hstack(n.relations, image));
    Mat target = fixed_cover_lattice(n, h);
    for (int j = 0; j < target.cols; ++j)
        if (!in_column_span(span, columns(target, j, 1))) return false;
    return true;
}

// exactness of 0 -> sub -> mid -> quot -> 0 checked from the matrices alone
bool sequence_exact(const Resolution& r, std::string* why) {
    return is_short_exact(r.inject, r.project, why);
}

void certify_kind(Resolution& r, bool full_sweeps) {
    std::string why;
    r.certificates.exactness = sequence_exact(r, &why);
    if (!r.certificates.exactness) {
        r.certificates.detail = why;
        return;
    }
    auto record = [&r](Verdict& slot, bool ok, const std::string& fail) {
        slot = ok ? Verdict::yes : Verdict::no;
        if (!ok && r.certificates.detail.empty()) r.certificates.detail = fail;
    };
    switch (r.kind) {
        case ResolutionKind::coflasque: {
            bool mid_ok = r.mid.permutation_structure &&
                          permutation_structure_matches(r.mid, *r.mid.permutation_structure);
            record(r.certificates.mid_class, mid_ok, "mid lattice is not permutation");
            r.certificates.quot_class = Verdict::yes;
            if (!full_sweeps) break;
            ClassCheck cf = is_coflasque(r.sub);
            bool surj = true;
            for (const Subgroup& h : all_subgroups(*r.mid.group))
                if (!fixed_points_surjective(r.mid, r.project.matrix, r.quot, h)) {
                    surj = false;
                    break;
                }
            // Two routes to the same statement: H^1(H, sub) = 0 for all H, and
            // surjectivity of mid^H -> quot^H.  They must agree.
            bool agree = (cf.holds == surj);
            std::string fail = !agree
                ? std::string("fixed-point surjectivity and H^1 vanishing disagree")
                : "kernel is not coflasque at " +
                      (cf.witness ? subgroup_text(cf.witness->subgroup) : std::string());
            record(r.certificates.sub_class, cf.holds && surj, fail);
            break;
        }
        case ResolutionKind::flasque: {
            bool sub_ok = r.sub.permutation_structure &&
                          permutation_structure_matches(r.sub, *r.sub.permutation_structure);
            record(r.certificates.sub_class, sub_ok, "sub lattice is not permutation");
            r.certificates.quot_class = Verdict::yes;
            if (!full_sweeps) break;
            ClassCheck fl = is_flasque(r.mid);
            record(r.certificates.mid_class, fl.holds,
                   "mid lattice is not flasque at " +
                       (fl.witness ? subgroup_text(fl.witness->subgroup) : std::string()));
            break;
        }
        case ResolutionKind::permutation_embedding: {
            bool mid_ok = r.mid.permutation_structure &&
                          permutation_structure_matches(r.mid, *r.mid.permutation_structure);
            record(r.certificates.mid_class, mid_ok, "mid lattice is not permutation");
            r.certificates.sub_class = Verdict::yes;
            if (!full_sweeps) break;
            ClassCheck fl = is_flasque(lattice_from_module(r.quot));
            record(r.certificates.quot_class, fl.holds,
                   "quotient lattice is not flasque at " +
                       (fl.witness ? subgroup_text(fl.witness->subgroup) : std::string()));
            break;
        }
    }
}

}  // namespace

Resolution coflasque_resolution(const GModule& n, const ResolutionOptions& opts) {
    const FiniteGroup& g = *n.group;
    std::mt19937_64 rng(opts.seed);

    // Greedy cover: walk subgroups from largest to smallest and adjoin a
    // summand Z[G/H] for each H-fixed vector not already reached by the
    // H-fixed points of the cover built so far.  Adding Z[G/H] with vector v
    // reaches v through its identity coset, so every pass terminates with the
    // fixed points at H covered, and later (smaller) subgroups only add more.
    std::vector<Summand> chosen;
    for (const Subgroup& h : cover_order(g, rng)) {
        Mat fix = fixed_cover_lattice(n, h);
        if (fix.cols == 0) continue;
        std::vector<int> order(fix.cols);
        std::iota(order.begin(), order.end(), 0);
        std::shuffle(order.begin(), order.end(), rng);
        Mat span = n.relations;
        for (const Summand& s : chosen) span = hstack(span, orbit_sum_columns(n, s, h));
        span = column_span_basis(span);
        for (int idx : order) {
            Mat v = columns(fix, idx, 1);
            if (in_column_span(span, v)) continue;
            Summand s{h, coset_action(g, h), v};
            span = column_span_basis(hstack(span, orbit_sum_columns(n, s, h)));
            chosen.push_back(std::move(s));
        }
    }

    GLattice p = assemble_permutation(n.group, chosen);
    Mat phi = cover_map_matrix(n, chosen, p.rank);
    GMap project = make_gmap(p, n, phi);
    LatticeKernelResult kr = kernel_lattice_of_map(project);

    Resolution r{ResolutionKind::coflasque,
                 std::move(kr.kernel),
                 std::move(p),
                 n,
                 GMap{},
                 std::move(project),
                 {}};
    r.inject = make_gmap(r.sub, r.mid, kr.basis);
    certify_kind(r, opts.certify);
    return r;
}

Resolution coflasque_resolution(const GLattice& n, const ResolutionOptions& opts) {
    return coflasque_resolution(to_module(n), opts);
}

Resolution permutation_embedding(const GLattice& l, const ResolutionOptions& opts) {
    // Dualize a coflasque resolution 0 -> C -> P -> dual(L) -> 0.  All three
    // terms are free, so transposing the maps gives an exact sequence
    // 0 -> L -> dual(P) -> dual(C) -> 0 with permutation mid and flasque
    // quotient.
    ResolutionOptions inner{opts.seed, false};
    Resolution cr = coflasque_resolution(dual(l), inner);

    Resolution r{ResolutionKind::permutation_embedding,
                 l,
                 dual(cr.mid),
                 to_module(dual(cr.sub)),
                 GMap{},
                 GMap{},
                 {}};
    r.inject = make_gmap(r.sub, r.mid, transpose(cr.project.matrix));
    r.project = make_gmap(to_module(r.mid), r.quot, transpose(cr.inject.matrix));
    certify_kind(r, opts.certify);
    return r;
}

Resolution flasque_resolution(const GModule& n, const ResolutionOptions& opts) {
    ResolutionOptions inner{opts.seed, false};
    Resolution cr = coflasque_resolution(n, inner);
    Resolution pe = permutation_embedding(cr.sub, inner);

    // Glue the two covers of C = cr.sub along the antidiagonal copy of C in
    // Q (+) Q2.  The quotient E receives Q2 through the second block and maps
    // onto N through the first, giving 0 -> Q2 -> E -> N -> 0 with E flasque.
    const GLattice& q = cr.mid;
    const GLattice& q2 = pe.mid;
    Mat delta = vstack(cr.inject.matrix, neg(pe.inject.matrix));
    QuotientResult e = quotient_lattice(direct_sum(q, q2), delta);

    Mat embed_q2 = mul(e.projection, vstack(Mat(q.rank, q2.rank), Mat::identity(q2.rank)));
    Mat onto_n = mul(cr.project.matrix, rows_of(e.lift, 0, q.rank));

    Resolution r{ResolutionKind::flasque, q2, std::move(e.lattice), n, GMap{}, GMap{}, {}};
    r.inject = make_gmap(r.sub, r.mid, std::move(embed_q2));
    r.project = make_gmap(r.mid, r.quot, std::move(onto_n));
    certify_kind(r, opts.certify);
    return r;
}

Resolution flasque_resolution(const GLattice& n, const ResolutionOptions& opts) {
    return flasque_resolution(to_module(n), opts);
}

Fingerprint similarity_fingerprint(const GLattice& l) {
    Fingerprint out;
    for (const Subgroup& h : all_subgroups(*l.group))
        out.emplace_back(h, tate_cohomology(l, h, 1));
    return out;
}

bool fingerprint_is_zero(const Fingerprint& f) {
    return std::all_of(f.begin(), f.end(), [](const auto& e) { return e.second.is_trivial(); });
}

std::string fingerprint_text(const Fingerprint& f) {
    std::ostringstream os;
    bool first = true;
    for (const auto& [h, value] : f) {
        if (value.is_trivial()) continue;
        os << (first ? "" : ", ") << subgroup_text(h) << ": " << value.text();
        first = false;
    }
    return first ? "0" : os.str();
}

namespace {

std::vector<Subgroup> conjugacy_class_reps(const FiniteGroup& g, const std::vector<Subgroup>& subs) {
    std::set<std::uint64_t> seen;
    std::vector<Subgroup> reps;
    for (const Subgroup& h : subs) {
        if (seen.count(h.mask)) continue;
        reps.push_back(h);
        for (int e = 0; e < g.order(); ++e) {
            std::uint64_t conj = 0;
            for (int m : h.members) conj |= std::uint64_t{1} << g.mul(g.mul(e, m), g.inv(e));
            seen.insert(conj);
        }
    }
    return reps;
}

int orbit_count(const CosetAction& ca, const Subgroup& h) {
    const int k = static_cast<int>(ca.cosets.size());
    std::vector<char> hit(k, 0);
    int orbits = 0;
    for (int c = 0; c < k; ++c) {
        if (hit[c]) continue;
        ++orbits;
        std::vector<int> queue{c};
        hit[c] = 1;
        while (!queue.empty()) {
            int cur = queue.back();
            queue.pop_back();
            for (int m : h.members) {
                int next = ca.action[m].images[cur];
                if (!hit[next]) {
                    hit[next] = 1;
                    queue.push_back(next);
                }
            }
        }
    }
    return orbits;
}

// Whether some multiset of coset lattices Z[G/K] reproduces the given fixed
// ranks.  orbits[i][k] counts orbits of rep i on G/rep_k; the row of the
// trivial subgroup fixes the total rank, so the search is finite.
bool rank_profile_feasible(const std::vector<std::vector<std::int64_t>>& orbits,
                           const std::vector<std::int64_t>& fixrank) {
    const int classes = static_cast<int>(orbits[0].size());
    const int rows = static_cast<int>(orbits.size());
    std::vector<std::int64_t> residual = fixrank;
    // place large summands first
    std::vector<int> order(classes);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&orbits](int a, int b) { return orbits[0][a] > orbits[0][b]; });
    std::function<bool(int)> place = [&](int pos) -> bool {
        if (std::all_of(residual.begin(), residual.end(), [](std::int64_t v) { return v == 0; }))
            return true;
        if (pos == classes) return false;
        int k = order[pos];
        std::int64_t most = residual[0];
        for (int i = 0; i < rows; ++i)
            if (orbits[i][k] > 0) most = std::min(most, residual[i] / orbits[i][k]);
        for (std::int64_t count = most; count >= 0; --count) {
            for (int i = 0; i < rows; ++i) residual[i] -= count * orbits[i][k];
            if (place(pos + 1)) return true;
            for (int i = 0; i < rows; ++i) residual[i] += count * orbits[i][k];
        }
        return false;
    };
    return place(0);
}

struct OrbitCandidate {
    Subgroup stab;
    std::vector<Mat> vectors;  // one per coset, in coset_action order
};

std::int64_t encode_vector(const Mat& v, int norm_bound) {
    // mixed-radix key; only valid when every entry fits the box
    std::int64_t key = 0;
    const std::int64_t radix = 2 * norm_bound + 1;
    for (int i = 0; i < v.rows; ++i) {
        Int e = v(i, 0);
        if (e > norm_bound || e < -norm_bound) return -1;
        key = key * radix + static_cast<std::int64_t>(e) + norm_bound;
    }
    return key;
}

// orbit of v under the action, as columns indexed by the cosets of its
// stabilizer so the action permutes them exactly like the coset action
OrbitCandidate orbit_of(const GLattice& l, const Mat& v) {
    const FiniteGroup& g = *l.group;
    std::vector<int> stab_members;
    for (int e = 0; e < g.order(); ++e)
        if (mul(l.act(e), v) == v) stab_members.push_back(e);
    OrbitCandidate oc;
    oc.stab = subgroup_from_members(g, stab_members);
    CosetAction ca = coset_action(g, oc.stab);
    oc.vectors.reserve(ca.cosets.size());
    for (const auto& coset : ca.cosets) oc.vectors.push_back(mul(l.act(coset[0]), v));
    return oc;
}

constexpr std::int64_t kBoxCap = 1 << 21;
constexpr std::int64_t kNodeCap = 200000;

// depth-first assembly of orbits into a basis
struct AssemblySearch {
    const GLattice& l;
    const std::vector<OrbitCandidate>& orbits;
    std::int64_t nodes = 0;
    std::vector<int> chosen;
    bool capped = false;

    bool extend(const Mat& cols, int from) {
        if (cols.cols == l.rank) return is_unimodular(cols);
        if (++nodes > kNodeCap) {
            capped = true;
            return false;
        }
        for (size_t i = from; i < orbits.size(); ++i) {
            const auto& oc = orbits[i];
            int size = static_cast<int>(oc.vectors.size());
            if (cols.cols + size > l.rank) continue;
            Mat next = cols;
            for (const Mat& v : oc.vectors) next = hstack(next, v);
            if (rank_of(next) != next.cols) continue;
            // a subset of a unimodular basis always spans a saturated sublattice
            if (next.cols < l.rank) {
                std::vector<Int> inv = invariant_factors(next);
                if (std::any_of(inv.begin(), inv.end(), [](const Int& d) { return d != 1; }))
                    continue;
            }
            chosen.push_back(static_cast<int>(i));
            if (extend(next, static_cast<int>(i) + 1)) return true;
            chosen.pop_back();
            if (capped) return false;
        }
        return false;
    }
};

}  // namespace

Verdict3 is_permutation_bounded(const GLattice& l, int norm_bound, std::uint64_t seed) {
    Verdict3 out;
    out.bound_used = norm_bound;
    const FiniteGroup& g = *l.group;

    if (l.rank == 0) {
        out.value = Verdict::yes;
        out.permuted_basis = PermutationStructure{};
        out.basis_matrix = Mat(0, 0);
        return out;
    }
    if (l.permutation_structure && permutation_structure_matches(l, *l.permutation_structure)) {
        out.value = Verdict::yes;
        out.permuted_basis = *l.permutation_structure;
        out.basis_matrix = Mat::identity(l.rank);
        return out;
    }

    // cohomological obstructions: permutation lattices are flasque and
    // coflasque for every subgroup
    if (ClassCheck fl = is_flasque(l); !fl) {
        out.value = Verdict::no;
        out.note = "H^1 of the dual is " + fl.witness->value.text() + " at subgroup " +
                   subgroup_text(fl.witness->subgroup);
        return out;
    }
    if (ClassCheck cf = is_coflasque(l); !cf) {
        out.value = Verdict::no;
        out.note = "H^1 is " + cf.witness->value.text() + " at subgroup " +
                   subgroup_text(cf.witness->subgroup);
        return out;
    }

    // fixed-rank profile obstruction
    std::vector<Subgroup> subs = all_subgroups(g);
    std::vector<Subgroup> reps = conjugacy_class_reps(g, subs);
    std::vector<CosetAction> rep_cosets;
    rep_cosets.reserve(reps.size());
    for (const Subgroup& k : reps) rep_cosets.push_back(coset_action(g, k));
    std::vector<std::vector<std::int64_t>> orbits(reps.size(),
                                                  std::vector<std::int64_t>(reps.size()));
    std::vector<std::int64_t> fixrank(reps.size());
    for (size_t i = 0; i < reps.size(); ++i) {
        fixrank[i] = fixed_sublattice(l, reps[i]).cols;
        for (size_t k = 0; k < reps.size(); ++k) orbits[i][k] = orbit_count(rep_cosets[k], reps[i]);
    }
    if (!rank_profile_feasible(orbits, fixrank)) {
        out.value = Verdict::no;
        out.note = "fixed-point ranks match no sum of coset lattices";
        return out;
    }

    // bounded search: orbits of all seed vectors inside the coordinate box
    std::int64_t box = 1;
    for (int i = 0; i < l.rank && box <= kBoxCap; ++i) box *= 2 * norm_bound + 1;
    if (box > kBoxCap) {
        out.note = "coordinate box exceeds the enumeration cap";
        return out;
    }
    std::set<std::int64_t> seen;
    std::vector<OrbitCandidate> candidates;
    Mat v(l.rank, 1);
    for (int i = 0; i < l.rank; ++i) v(i, 0) = -norm_bound;
    auto advance = [&]() {
        for (int i = l.rank - 1; i >= 0; --i) {
            if (v(i, 0) < norm_bound) {
                v(i, 0) += 1;
                return true;
            }
            v(i, 0) = -norm_bound;
        }
        return false;
    };
    do {
        if (v.is_zero()) continue;
        std::int64_t key = encode_vector(v, norm_bound);
        if (seen.count(key)) continue;
        OrbitCandidate oc = orbit_of(l, v);
        for (const Mat& w : oc.vectors) {
            std::int64_t wk = encode_vector(w, norm_bound);
            if (wk >= 0) seen.insert(wk);
        }
        if (static_cast<int>(oc.vectors.size()) <= l.rank) candidates.push_back(std::move(oc));
    } while (advance());

    std::sort(candidates.begin(), candidates.end(), [](const auto& a, const auto& b) {
        return a.vectors.size() < b.vectors.size();
    });
    std::mt19937_64 rng(seed);
    size_t tier = 0;
    while (tier < candidates.size()) {
        size_t end = tier + 1;
        while (end < candidates.size() &&
               candidates[end].vectors.size() == candidates[tier].vectors.size())
            ++end;
        std::shuffle(candidates.begin() + tier, candidates.begin() + end, rng);
        tier = end;
    }

    AssemblySearch search{l, candidates, 0, {}, false};
    if (search.extend(Mat(l.rank, 0), 0)) {
        Mat basis(l.rank, 0);
        PermutationStructure ps;
        int off = 0;
        for (int idx : search.chosen) {
            const OrbitCandidate& oc = candidates[idx];
            PermutationOrbit orbit{oc.stab, {}};
            for (const Mat& w : oc.vectors) {
                basis = hstack(basis, w);
                orbit.basis_indices.push_back(off++);
            }
            ps.orbits.push_back(std::move(orbit));
        }
        // certify on the conjugated action before claiming yes
        std::optional<Mat> binv = solve_columns(basis, Mat::identity(l.rank));
        if (binv) {
            GLattice conj{l.group, l.rank, {}, std::nullopt};
            conj.action.reserve(g.order());
            for (int e = 0; e < g.order(); ++e) conj.action.push_back(mul(*binv, mul(l.act(e), basis)));
            if (permutation_structure_matches(conj, ps)) {
                out.value = Verdict::yes;
                out.permuted_basis = std::move(ps);
                out.basis_matrix = std::move(basis);
                return out;
            }
        }
        out.note = "assembled basis failed certification";
        return out;
    }
    out.note = search.capped ? "assembly search hit the node cap"
                             : "no permuted basis within the coordinate box";
    return out;
}

namespace {

// all multisets of class indices whose coset ranks sum to at most (or exactly)
// `budget`
void enumerate_multisets(const std::vector<int>& ranks, int budget, bool exact, int from,
                         std::vector<int>& cur, std::vector<std::vector<int>>& out) {
    if (!exact || budget == 0) out.push_back(cur);
    for (size_t i = from; i < ranks.size(); ++i) {
        if (ranks[i] > budget) continue;
        cur.push_back(static_cast<int>(i));
        enumerate_multisets(ranks, budget - ranks[i], exact, static_cast<int>(i), cur, out);
        cur.pop_back();
    }
}

GLattice sum_of_cosets(GroupPtr gp, const std::vector<Subgroup>& reps,
                       const std::vector<int>& multiset) {
    GLattice acc = trivial_lattice(gp, 0);
    for (int k : multiset) acc = direct_sum(acc, permutation_lattice(gp, reps[k]));
    return acc;
}

// Z-basis of { X : X a(g) = b(g) X for all g }, using generators only
std::vector<Mat> intertwiner_basis(const GLattice& a, const GLattice& b) {
    const FiniteGroup& g = *a.group;
    const int n = a.rank;
    std::vector<int> gens = subgroup_generators(g, full_subgroup(g));
    Mat sys(static_cast<int>(gens.size()) * n * n, n * n);
    int block = 0;
    for (int s : gens) {
        const Mat& as = a.act(s);
        const Mat& bs = b.act(s);
        // row (i, j) of X a(s) - b(s) X, unknowns X(p, q) flattened as p*n+q
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                for (int q = 0; q < n; ++q) sys(block + i * n + j, i * n + q) += as(q, j);
                for (int p = 0; p < n; ++p) sys(block + i * n + j, p * n + j) -= bs(i, p);
            }
        block += n * n;
    }
    Mat ker = kernel_columns(sys);
    std::vector<Mat> basis;
    basis.reserve(ker.cols);
    for (int c = 0; c < ker.cols; ++c) {
        Mat x(n, n);
        for (int p = 0; p < n; ++p)
            for (int q = 0; q < n; ++q) x(p, q) = ker(p * n + q, c);
        basis.push_back(std::move(x));
    }
    return basis;
}

std::optional<Mat> unimodular_combination(const std::vector<Mat>& basis, int coeff_bound,
                                          std::mt19937_64& rng) {
    if (basis.empty()) return std::nullopt;
    const int d = static_cast<int>(basis.size());
    const int n = basis[0].rows;
    auto build = [&](const std::vector<std::int64_t>& c) {
        Mat x(n, n);
        for (int i = 0; i < d; ++i) {
            if (c[i] == 0) continue;
            for (int p = 0; p < n; ++p)
                for (int q = 0; q < n; ++q) x(p, q) += Int(c[i]) * basis[i](p, q);
        }
        return x;
    };
    std::int64_t box = 1;
    for (int i = 0; i < d && box <= kBoxCap; ++i) box *= 2 * coeff_bound + 1;
    if (box <= kBoxCap) {
        std::vector<std::int64_t> c(d, -coeff_bound);
        while (true) {
            Mat x = build(c);
            if (is_unimodular(x)) return x;
            int i = d - 1;
            while (i >= 0 && c[i] == coeff_bound) c[i--] = -coeff_bound;
            if (i < 0) break;
            ++c[i];
        }
        return std::nullopt;
    }
    std::uniform_int_distribution<std::int64_t> dist(-coeff_bound, coeff_bound);
    for (int trial = 0; trial < 4000; ++trial) {
        std::vector<std::int64_t> c(d);
        for (auto& v : c) v = dist(rng);
        Mat x = build(c);
        if (is_unimodular(x)) return x;
    }
    return std::nullopt;
}

}  // namespace

Verdict3 is_stably_permutation_bounded(const GLattice& l, int rank_budget, int norm_bound,
                                       std::uint64_t seed) {
    Verdict3 out;
    out.bound_used = rank_budget;
    const FiniteGroup& g = *l.group;

    // obstructions that survive adding permutation summands
    if (ClassCheck fl = is_flasque(l); !fl) {
        out.value = Verdict::no;
        out.note = "H^1 of the dual is " + fl.witness->value.text() + " at subgroup " +
                   subgroup_text(fl.witness->subgroup);
        return out;
    }
    if (ClassCheck cf = is_coflasque(l); !cf) {
        out.value = Verdict::no;
        out.note = "H^1 is " + cf.witness->value.text() + " at subgroup " +
                   subgroup_text(cf.witness->subgroup);
        return out;
    }

    std::vector<Subgroup> reps = conjugacy_class_reps(g, all_subgroups(g));
    std::vector<CosetAction> rep_cosets;
    std::vector<int> ranks;
    for (const Subgroup& k : reps) {
        rep_cosets.push_back(coset_action(g, k));
        ranks.push_back(static_cast<int>(rep_cosets.back().cosets.size()));
    }

    Verdict3 direct = is_permutation_bounded(l, norm_bound, seed);
    if (direct.value == Verdict::yes) {
        out.value = Verdict::yes;
        StableWitness w;
        for (const PermutationOrbit& o : direct.permuted_basis->orbits) w.target.push_back(o.stabilizer);
        w.intertwiner = l.rank == 0 ? Mat(0, 0) : *solve_columns(*direct.basis_matrix, Mat::identity(l.rank));
        out.stable = std::move(w);
        return out;
    }

    auto profile_of = [&](const GLattice& x) {
        std::vector<int> p;
        p.reserve(reps.size());
        for (const Subgroup& h : reps) p.push_back(fixed_sublattice(x, h).cols);
        return p;
    };
    auto coset_profile = [&](const std::vector<int>& multiset) {
        std::vector<int> p(reps.size(), 0);
        for (int k : multiset)
            for (size_t i = 0; i < reps.size(); ++i) p[i] += orbit_count(rep_cosets[k], reps[i]);
        return p;
    };

    std::vector<std::vector<int>> added;
    {
        std::vector<int> cur;
        enumerate_multisets(ranks, rank_budget, false, 0, cur, added);
    }
    std::sort(added.begin(), added.end(), [&ranks](const auto& a, const auto& b) {
        int ra = 0, rb = 0;
        for (int k : a) ra += ranks[k];
        for (int k : b) rb += ranks[k];
        return ra < rb;
    });

    std::mt19937_64 rng(seed + 1);
    bool truncated = false;
    for (const std::vector<int>& p1 : added) {
        GLattice left = l;
        for (int k : p1) left = direct_sum(left, permutation_lattice(l.group, reps[k]));
        if (left.rank > l.rank + rank_budget) continue;
        std::vector<int> want = profile_of(left);
        std::vector<std::vector<int>> targets;
        {
            std::vector<int> cur;
            enumerate_multisets(ranks, left.rank, true, 0, cur, targets);
        }
        for (const std::vector<int>& p2 : targets) {
            if (coset_profile(p2) != want) continue;
            GLattice right = sum_of_cosets(l.group, reps, p2);
            std::vector<Mat> hom = intertwiner_basis(left, right);
            std::optional<Mat> x = unimodular_combination(hom, norm_bound, rng);
            if (!x) {
                truncated = true;
                continue;
            }
            out.value = Verdict::yes;
            StableWitness w;
            for (int k : p1) w.added.push_back(reps[k]);
            for (int k : p2) w.target.push_back(reps[k]);
            w.intertwiner = std::move(*x);
            out.stable = std::move(w);
            return out;
        }
    }
    out.note = truncated ? "profile-compatible targets found but no unimodular intertwiner"
                         : "no target multiset within the rank budget";
    return out;
}

}  // namespace flk
