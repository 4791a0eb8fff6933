#include "flk/homspace.hpp"

#include <utility>

#include "flk/errors.hpp"
#include "flk/zforms.hpp"

namespace flk {

HomSpaceSpec make_homspace_spec(GLattice ghat, GModule mhat, Mat restriction) {
    if (!ghat.group || ghat.group != mhat.group)
        throw ValidationError("ghat and mhat must share one group");
    if (!ghat.permutation_structure)
        throw ValidationError("ghat needs a permutation structure certificate");
    if (!permutation_structure_matches(ghat, *ghat.permutation_structure))
        throw ValidationError("ghat permutation structure does not match its action");
    HomSpaceSpec spec;
    spec.group = ghat.group;
    spec.restriction = make_gmap(ghat, mhat, std::move(restriction));
    spec.ghat = std::move(ghat);
    spec.mhat = std::move(mhat);
    return spec;
}

QuotientInvariants quotient_invariants(const HomSpaceSpec& spec) {
    QuotientInvariants inv;
    LatticeKernelResult kr = kernel_lattice_of_map(spec.restriction);
    inv.u_x = std::move(kr.kernel);
    inv.u_basis = std::move(kr.basis);
    inv.pic_x = cokernel_of_map(spec.restriction);
    inv.pic_group = abelian_quotient(inv.pic_x.free_cover_rank, inv.pic_x.relations);
    return inv;
}

QuasiResolutionReport second_construction(const HomSpaceSpec& spec,
                                          const ConstructionOptions& opts) {
    QuasiResolutionReport rep;
    rep.resolution = flasque_resolution(spec.mhat, ResolutionOptions{opts.seed, true});
    rep.certificates.resolution_exact = rep.resolution.certificates.exactness;
    if (!rep.resolution.certificates.all_green())
        throw ConstructionFailure("flasque resolution of the character module failed: " +
                                  rep.resolution.certificates.detail);
    rep.e0 = rep.resolution.sub;
    rep.s0 = rep.resolution.mid;

    // U(Y_0) is the kernel of (x, y) -> restriction(x) - project(y) on
    // G^ (+) S_0^; its cokernel is Pic(Y_0bar).
    Mat combined_matrix = hstack(spec.restriction.matrix, neg(rep.resolution.project.matrix));
    GLattice sum = direct_sum(spec.ghat, rep.s0);
    GMap combined = make_gmap(sum, spec.mhat, std::move(combined_matrix));
    LatticeKernelResult kr = kernel_lattice_of_map(combined);
    rep.u_y0 = std::move(kr.kernel);
    rep.u_basis = std::move(kr.basis);
    rep.pic_y0 = cokernel_of_map(combined);
    rep.certificates.pic_trivial =
        abelian_quotient(rep.pic_y0.free_cover_rank, rep.pic_y0.relations).is_trivial();

    // E_0^ sits inside U(Y_0) as (0, inject); the row projects onto G^.
    Mat e_cols = vstack(Mat(spec.ghat.rank, rep.e0.rank), rep.resolution.inject.matrix);
    std::optional<Mat> e_in_u = solve_columns(rep.u_basis, e_cols);
    if (!e_in_u)
        throw ConstructionFailure("resolution kernel does not land in U(Y_0)");
    rep.u_inject = make_gmap(rep.e0, rep.u_y0, std::move(*e_in_u));
    rep.u_project = make_gmap(rep.u_y0, spec.ghat, rows_of(rep.u_basis, 0, spec.ghat.rank));

    std::string why;
    rep.certificates.row_exact = is_short_exact(rep.u_inject, rep.u_project, &why);
    if (!rep.certificates.row_exact) {
        rep.certificates.detail = why;
        throw ConstructionFailure("diagram row 0 -> E_0 -> U(Y_0) -> G^ -> 0 failed: " + why);
    }
    if (!rep.certificates.pic_trivial) {
        rep.certificates.detail = "Pic(Y_0) is nonzero";
        throw ConstructionFailure("Pic(Y_0) is nonzero: " +
                                  abelian_quotient(rep.pic_y0.free_cover_rank,
                                                   rep.pic_y0.relations).text());
    }
    rep.certificates.u_class = is_permutation_bounded(rep.u_y0, opts.norm_bound, opts.seed);
    if (rep.certificates.u_class.value == Verdict::no)
        throw ConstructionFailure("U(Y_0) certified non-permutation: " +
                                  rep.certificates.u_class.note);
    return rep;
}

CoflasqueTower coflasque_tower(const GLattice& mhat_tor, const ResolutionOptions& opts) {
    CoflasqueTower t;
    Resolution cr = coflasque_resolution(mhat_tor, opts);
    Resolution pe = permutation_embedding(cr.sub, opts);
    t.q0 = cr.sub;
    t.p0 = cr.mid;
    t.e0 = pe.mid;
    t.s0 = lattice_from_module(pe.quot);
    t.q0_to_p0 = cr.inject;
    t.p0_to_mhat = cr.project;
    t.q0_to_e0 = pe.inject;
    t.e0_to_s0 = pe.project;

    // F_0^ glues P_0^ and E_0^ along the antidiagonal copy of Q_0^; the two
    // summand embeddings and the two induced quotient maps form the rows.
    const int p = t.p0.rank, e = t.e0.rank;
    Mat delta = vstack(cr.inject.matrix, neg(pe.inject.matrix));
    QuotientResult f = quotient_lattice(direct_sum(t.p0, t.e0), delta);
    t.f0 = f.lattice;
    Mat embed_e = mul(f.projection, vstack(Mat(p, e), Mat::identity(e)));
    Mat embed_p = mul(f.projection, vstack(Mat::identity(p), Mat(e, p)));
    Mat onto_mhat = mul(cr.project.matrix, rows_of(f.lift, 0, p));
    Mat onto_s = mul(pe.project.matrix, rows_of(f.lift, p, e));
    t.e0_to_f0 = make_gmap(t.e0, t.f0, std::move(embed_e));
    t.f0_to_mhat = make_gmap(t.f0, mhat_tor, std::move(onto_mhat));
    t.p0_to_f0 = make_gmap(t.p0, t.f0, std::move(embed_p));
    t.f0_to_s0 = make_gmap(t.f0, t.s0, std::move(onto_s));

    auto& c = t.certificates;
    c.columns_exact = cr.certificates.exactness && pe.certificates.exactness;
    c.q0_class = cr.certificates.sub_class;
    c.s0_class = pe.certificates.quot_class;
    std::string why;
    c.rows_exact = is_short_exact(t.e0_to_f0, t.f0_to_mhat, &why) &&
                   is_short_exact(t.p0_to_f0, t.f0_to_s0, &why);
    if (!c.rows_exact) c.detail = why;
    Fingerprint left = similarity_fingerprint(t.f0);
    Fingerprint right = similarity_fingerprint(direct_sum(t.p0, t.s0));
    c.fingerprint_matches = left.size() == right.size();
    for (size_t i = 0; c.fingerprint_matches && i < left.size(); ++i)
        c.fingerprint_matches = left[i].second == right[i].second;
    if (!c.fingerprint_matches && c.detail.empty())
        c.detail = "fingerprint of F_0 differs from P_0 (+) S_0";
    return t;
}

CoflasqueTower coflasque_tower(const GModule& mhat_tor, const ResolutionOptions& opts) {
    return coflasque_tower(lattice_from_module(mhat_tor), opts);
}

RCount homspace_r_count(const HomSpaceSpec& spec, const Int& g_classes,
                        const ConstructionOptions& opts) {
    if (g_classes < 1) throw ValidationError("g_classes must be a positive integer");
    QuasiResolutionReport rep = second_construction(spec, opts);
    RCount out;
    out.h1_factor = tate_cohomology(dual(rep.s0), full_subgroup(*spec.group), -1);
    out.total_lower_bound = out.h1_factor.torsion_order() * g_classes;
    return out;
}

}  // namespace flk
