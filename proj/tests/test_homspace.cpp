#include <doctest.h>

#include "flk/homspace.hpp"

#include "flk/tori.hpp"
#include "flk/zforms.hpp"
#include "corpus.hpp"

using namespace flk;

namespace {

const FinAbGroup z2{0, {Int(2)}};

// characters of mu_n as a trivial module: Z/n
GModule mu_chars(const GroupPtr& g, int n) {
    std::vector<Mat> gens(g->generator_indices().size(), Mat{{1}});
    return validate_module(g, 1, Mat{{n}}, gens);
}

GModule zero_module(const GroupPtr& g) {
    std::vector<Mat> gens(g->generator_indices().size(), Mat(0, 0));
    return validate_module(g, 0, Mat(0, 0), gens);
}

// augmentation of the regular characters: every basis vector to 1
Mat aug_row(const GroupPtr& g) {
    Mat r(1, g->order());
    for (int j = 0; j < r.cols; ++j) r(0, j) = 1;
    return r;
}

// the regular characters together with the projection onto the norm-one
// quotient, as a homogeneous-space spec
HomSpaceSpec norm_one_model(const GroupPtr& g) {
    GLattice reg = regular_lattice(g);
    Mat norm(reg.rank, 1);
    for (int i = 0; i < reg.rank; ++i) norm(i, 0) = 1;
    QuotientResult q = quotient_lattice(reg, norm);
    return make_homspace_spec(reg, to_module(q.lattice), q.projection);
}

bool trivial_action(const GLattice& l) {
    for (const Mat& m : l.action)
        if (m != Mat::identity(l.rank)) return false;
    return true;
}

}  // namespace

TEST_CASE("quotient invariants of the SL2 quotient model") {
    // Gbar semisimple simply connected: no characters, stabilizer mu_2
    HomSpaceSpec spec =
        make_homspace_spec(trivial_lattice(corpus::c2(), 0), mu_chars(corpus::c2(), 2),
                           Mat(1, 0));
    QuotientInvariants inv = quotient_invariants(spec);
    CHECK(inv.u_x.rank == 0);
    CHECK(inv.pic_group == z2);
}

TEST_CASE("quotient invariants of the Gm quotient model") {
    HomSpaceSpec spec = make_homspace_spec(trivial_lattice(corpus::c2(), 1),
                                           mu_chars(corpus::c2(), 2), Mat{{1}});
    QuotientInvariants inv = quotient_invariants(spec);
    CHECK(inv.u_x.rank == 1);
    CHECK(trivial_action(inv.u_x));
    CHECK(inv.u_basis == Mat{{2}});
    CHECK(inv.pic_group.is_trivial());
}

TEST_CASE("quotient invariants with no stabilizer characters") {
    GLattice reg = regular_lattice(corpus::c2());
    HomSpaceSpec spec = make_homspace_spec(reg, zero_module(corpus::c2()), Mat(0, 2));
    QuotientInvariants inv = quotient_invariants(spec);
    CHECK(inv.u_x.rank == 2);
    CHECK(inv.pic_group.is_trivial());
    CHECK(same_action(inv.u_x, reg));
}

TEST_CASE("quotient invariant identities across models") {
    std::vector<HomSpaceSpec> specs;
    specs.push_back(norm_one_model(corpus::v4()));
    specs.push_back(norm_one_model(corpus::s3()));
    specs.push_back(make_homspace_spec(trivial_lattice(corpus::c2(), 1),
                                       mu_chars(corpus::c2(), 2), Mat{{1}}));
    for (const HomSpaceSpec& spec : specs) {
        QuotientInvariants inv = quotient_invariants(spec);
        Mat augmented = hstack(spec.restriction.matrix, spec.mhat.relations);
        int image_rank = rank_of(augmented) - rank_of(spec.mhat.relations);
        CHECK(inv.u_x.rank + image_rank == spec.ghat.rank);
        // invariant factors agree with the presentation matrix of the cokernel
        std::vector<Int> nonunit;
        for (const Int& d : invariant_factors(augmented))
            if (d != 1) nonunit.push_back(d);
        CHECK(inv.pic_group.invariant_factors == nonunit);
    }
}

TEST_CASE("spec validation rejects bad input") {
    GLattice bare = regular_lattice(corpus::c2());
    bare.permutation_structure.reset();
    CHECK_THROWS_AS(make_homspace_spec(bare, mu_chars(corpus::c2(), 2), Mat{{1, 1}}),
                    ValidationError);
    CHECK_THROWS_AS(make_homspace_spec(regular_lattice(corpus::c2()),
                                       mu_chars(corpus::c3(), 2), Mat{{1, 1}}),
                    ValidationError);
    // non-equivariant restriction: sends only one basis vector to the generator
    GLattice sign = validate_lattice(corpus::c2(), 1, {Mat{{-1}}});
    CHECK_THROWS_AS(make_homspace_spec(regular_lattice(corpus::c2()),
                                       to_module(sign), Mat{{1, 0}}),
                    ValidationError);
}

TEST_CASE("second construction on the rank-one quotient model") {
    HomSpaceSpec spec = make_homspace_spec(regular_lattice(corpus::c2()),
                                           mu_chars(corpus::c2(), 2), Mat{{1, 1}});
    QuasiResolutionReport rep = second_construction(spec);
    CHECK(rep.certificates.resolution_exact);
    CHECK(rep.certificates.row_exact);
    CHECK(rep.certificates.pic_trivial);
    CHECK(rep.s0.rank == 1);
    CHECK(trivial_action(rep.s0));
    CHECK(rep.e0.rank == 1);
    CHECK(trivial_action(rep.e0));
    CHECK(rep.u_y0.rank == 3);
    CHECK(rep.certificates.u_class.value == Verdict::yes);
}

TEST_CASE("second construction with nothing to resolve") {
    GLattice reg = regular_lattice(corpus::c2());
    HomSpaceSpec spec = make_homspace_spec(reg, zero_module(corpus::c2()), Mat(0, 2));
    QuasiResolutionReport rep = second_construction(spec);
    CHECK(rep.s0.rank == 0);
    CHECK(rep.u_y0.rank == reg.rank);
    CHECK(same_action(rep.u_y0, reg));
    CHECK(rep.certificates.u_class.value == Verdict::yes);
}

TEST_CASE("second construction over the trivial group splits") {
    GroupPtr one = FiniteGroup::close_generators(1, {});
    HomSpaceSpec spec = make_homspace_spec(regular_lattice(one), mu_chars(one, 3), Mat{{1}});
    QuasiResolutionReport rep = second_construction(spec);
    CHECK(rep.certificates.pic_trivial);
    CHECK(rep.certificates.row_exact);
    CHECK(rep.certificates.u_class.value == Verdict::yes);
}

TEST_CASE("U(Y_0) is flasque and coflasque on a model family") {
    for (const GroupPtr& g : {corpus::c2(), corpus::c3(), corpus::v4(), corpus::s3()}) {
        const int order = g->order();
        CAPTURE(order);
        HomSpaceSpec spec = norm_one_model(g);
        QuasiResolutionReport rep = second_construction(spec);
        CHECK(rep.certificates.row_exact);
        CHECK(rep.certificates.pic_trivial);
        CHECK(rep.certificates.u_class.value != Verdict::no);
        CHECK(bool(is_flasque(rep.u_y0)));
        CHECK(bool(is_coflasque(rep.u_y0)));

        HomSpaceSpec aug = make_homspace_spec(regular_lattice(g),
                                              mu_chars(g, g->order()), aug_row(g));
        QuasiResolutionReport rep2 = second_construction(aug);
        CHECK(rep2.certificates.u_class.value != Verdict::no);
        CHECK(bool(is_flasque(rep2.u_y0)));
        CHECK(bool(is_coflasque(rep2.u_y0)));
    }
}

TEST_CASE("coflasque tower of the trivial lattice") {
    CoflasqueTower t = coflasque_tower(trivial_lattice(corpus::c2()));
    CHECK(t.certificates.all_green());
    CHECK(t.s0.rank == 0);
    CHECK(t.q0.rank == 0);
    CHECK(fingerprint_is_zero(similarity_fingerprint(t.f0)));
}

TEST_CASE("coflasque tower of the sign lattice") {
    GLattice sign = validate_lattice(corpus::c2(), 1, {Mat{{-1}}});
    CoflasqueTower t = coflasque_tower(sign);
    CHECK(t.certificates.all_green());
    CHECK(t.q0.rank == 1);
    CHECK(trivial_action(t.q0));
    CHECK(t.p0.rank == 2);
    REQUIRE(t.p0.permutation_structure);
    CHECK(t.p0.permutation_structure->orbits.size() == 1);
    CHECK(t.s0.rank == 0);
    CHECK(t.f0.rank == 2);
}

TEST_CASE("coflasque tower of the biquadratic norm-one lattice") {
    GLattice j = norm_one_lattice(corpus::v4());
    CoflasqueTower t = coflasque_tower(j);
    CHECK(t.certificates.all_green());
    // the flasque part of the coflasque kernel is stably trivial, so its
    // invariants vanish; the Z/2 of the norm-one torus lives in rho(J)
    // itself (see the tori suite), not in the tower
    CHECK(fingerprint_is_zero(similarity_fingerprint(t.s0)));
    CHECK(tate_cohomology(dual(t.s0), full_subgroup(*corpus::v4()), -1).is_trivial());
    REQUIRE(t.e0.permutation_structure);
    REQUIRE(t.p0.permutation_structure);

    // re-runs keep every reported invariant
    for (std::uint64_t seed : {3, 11}) {
        CoflasqueTower u = coflasque_tower(j, ResolutionOptions{seed, true});
        CHECK(u.certificates.all_green());
        CHECK(fingerprint_text(similarity_fingerprint(u.s0)) ==
              fingerprint_text(similarity_fingerprint(t.s0)));
    }
}

TEST_CASE("coflasque tower rejects torsion input") {
    CHECK_THROWS_AS(coflasque_tower(mu_chars(corpus::c2(), 2)), TorsionInput);
}

TEST_CASE("homspace count: split case and multiplicativity") {
    GroupPtr one = FiniteGroup::close_generators(1, {});
    HomSpaceSpec split = make_homspace_spec(regular_lattice(one), mu_chars(one, 4), Mat{{1}});
    CHECK(homspace_r_count(split, 1).total_lower_bound == 1);

    HomSpaceSpec c2 = make_homspace_spec(regular_lattice(corpus::c2()),
                                         mu_chars(corpus::c2(), 2), Mat{{1, 1}});
    RCount base = homspace_r_count(c2, 1);
    CHECK(base.h1_factor.is_trivial());
    CHECK(base.total_lower_bound == 1);
    CHECK(homspace_r_count(c2, 3).total_lower_bound == 3);
    CHECK_THROWS_AS(homspace_r_count(c2, 0), ValidationError);
}

TEST_CASE("homspace count of the biquadratic model") {
    HomSpaceSpec spec = norm_one_model(corpus::v4());
    RCount count = homspace_r_count(spec, 1);
    // the resolved flasque middle of M^ is stably permutation here (the
    // regular cover of the norm-one quotient has a trivial kernel class), so
    // the homogeneous-space factor is trivial; the classical Z/2 of the
    // biquadratic norm-one torus is r_equivalence_local's, not this one
    CHECK(count.h1_factor.is_trivial());
    CHECK(count.total_lower_bound == 1);
    CHECK(r_equivalence_local(make_torus_spec(norm_one_lattice(corpus::v4())))
              .count_group == z2);
    CHECK(homspace_r_count(spec, 5).total_lower_bound == 5);
}
