#pragma once

#include <optional>
#include <string>
#include <vector>

#include "flk/group.hpp"
#include "flk/matrix.hpp"
#include "flk/zforms.hpp"

namespace flk {

// Finitely generated abelian group: Z^free_rank + sum Z/d_i with
// d_1 | d_2 | ... and every d_i >= 2.
struct FinAbGroup {
    int free_rank = 0;
    std::vector<Int> invariant_factors;

    bool is_trivial() const { return free_rank == 0 && invariant_factors.empty(); }
    // order of the torsion part; meaningful as a group order when free_rank = 0
    Int torsion_order() const {
        Int n(1);
        for (const Int& d : invariant_factors) n *= d;
        return n;
    }
    std::string text() const;
    friend bool operator==(const FinAbGroup& a, const FinAbGroup& b) = default;
};

// Z^n modulo the column span of `relations`.
FinAbGroup abelian_quotient(int n, const Mat& relations);

// Certificate that a lattice basis is permuted by the action: a partition of
// the basis into coset orbits.  basis_indices[c] is the basis position of
// coset c of the stabilizer (cosets ordered as in coset_action).
struct PermutationOrbit {
    Subgroup stabilizer;
    std::vector<int> basis_indices;
};

struct PermutationStructure {
    std::vector<PermutationOrbit> orbits;
};

// Free Z-module of finite rank with a group acting by unimodular integer
// matrices, one per group element (index 0 is the identity).
struct GLattice {
    GroupPtr group;
    int rank = 0;
    std::vector<Mat> action;
    std::optional<PermutationStructure> permutation_structure;

    const Mat& act(int element) const { return action[element]; }
};

// Presented module Z^m / R with the action given on the free cover Z^m and
// R (the column span of `relations`) action-stable.  `relations` is kept in
// canonical column Hermite form, so equal presentations compare equal.
struct GModule {
    GroupPtr group;
    int free_cover_rank = 0;
    Mat relations;  // free_cover_rank x k
    std::vector<Mat> action;

    const Mat& act(int element) const { return action[element]; }
    bool is_free() const { return relations.cols == 0; }
};

// Equivariant homomorphism, as a matrix between free covers.
struct GMap {
    GModule source;
    GModule target;
    Mat matrix;  // target.free_cover_rank x source.free_cover_rank
};

// --- validation / construction -------------------------------------------

// Builds a lattice from one matrix per input generator of the group.
// Throws NotUnimodular if some generator matrix has determinant != +-1 and
// NotARepresentation if the matrices do not satisfy the group's relations.
GLattice validate_lattice(GroupPtr group, int rank, const std::vector<Mat>& generator_matrices);
GLattice validate_lattice(GroupPtr group, const std::vector<Mat>& generator_matrices);

GModule validate_module(GroupPtr group, int free_cover_rank, const Mat& relations,
                        const std::vector<Mat>& generator_matrices);

// Re-checks rho(g)rho(h) = rho(gh) over every pair of elements.
bool action_table_consistent(const GLattice& l);
bool action_table_consistent(const GModule& m);

bool permutation_structure_matches(const GLattice& l, const PermutationStructure& ps);

GModule to_module(const GLattice& l);
// Free quotient view of a torsion-free module; throws TorsionInput otherwise.
GLattice lattice_from_module(const GModule& m);

GLattice trivial_lattice(GroupPtr group, int rank = 1);
GLattice permutation_lattice(GroupPtr group, const Subgroup& stabilizer);
GLattice regular_lattice(GroupPtr group);

GLattice direct_sum(const GLattice& a, const GLattice& b);
GModule direct_sum(const GModule& a, const GModule& b);

// Contragredient action g |-> transpose of rho(g^{-1}).
GLattice dual(const GLattice& l);

// --- maps and exactness helpers ------------------------------------------

// Verifies shape, equivariance over the full element table, and that source
// relations land in target relations.
GMap make_gmap(GModule source, GModule target, Mat matrix);
GMap make_gmap(const GLattice& source, const GLattice& target, Mat matrix);
GMap make_gmap(const GLattice& source, const GModule& target, Mat matrix);

struct KernelResult {
    GModule kernel;
    GMap inclusion;  // kernel -> source
};
KernelResult kernel_of_map(const GMap& f);
// Convenience for lattice sources, where the kernel is itself a lattice.
struct LatticeKernelResult {
    GLattice kernel;
    Mat basis;  // columns in source coordinates
};
LatticeKernelResult kernel_lattice_of_map(const GMap& f);

GModule cokernel_of_map(const GMap& f);

// Z-basis of { v : rho(h) v = v for all h in H }.
Mat fixed_sublattice(const GLattice& l, const Subgroup& h);
// Basis of the preimage lattice { x : (rho(h) - 1) x in R for all h in H };
// the H-fixed points of the module are this lattice modulo R.
Mat fixed_cover_lattice(const GModule& m, const Subgroup& h);

// sum of rho(h) over h in H
Mat norm_endomorphism(const GLattice& l, const Subgroup& h);
Mat norm_endomorphism(const GModule& m, const Subgroup& h);

// Sublattice spanned by `basis` (must be action-stable) with its induced
// action; second member expresses the inclusion.
struct SublatticeResult {
    GLattice lattice;
    Mat basis;
};
SublatticeResult sublattice_with_action(const GLattice& ambient, const Mat& basis);

// Quotient of the ambient lattice by a saturated action-stable sublattice.
struct QuotientResult {
    GLattice lattice;
    Mat projection;  // quotient coords of ambient basis vectors
    Mat lift;        // a section: projection * lift = identity
};
QuotientResult quotient_lattice(const GLattice& ambient, const Mat& sub_basis);

// cokernel of the inclusion span(sub_basis) -> Z^ambient_rank as an
// ordinary abelian group (no action involved)
FinAbGroup ambient_quotient_structure(int ambient_rank, const Mat& sub_basis);

bool same_action(const GLattice& a, const GLattice& b);

}  // namespace flk
