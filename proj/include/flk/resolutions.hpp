#pragma once

#include <string>
#include <utility>
#include <vector>

#include "flk/cohomology.hpp"

namespace flk {

enum class ResolutionKind { coflasque, flasque, permutation_embedding };

enum class Verdict { yes, no, unknown };

std::string verdict_text(Verdict v);

// A certified short exact sequence 0 -> sub -> mid -> quot -> 0.  sub and mid
// are always torsion-free; quot may carry torsion (resolving a module).
// Which class each slot must belong to depends on the kind:
//   coflasque:             sub coflasque, mid permutation
//   flasque:               sub permutation, mid flasque
//   permutation_embedding: mid permutation, quot flasque
// The unconstrained slots certify as yes vacuously.
struct Resolution {
    ResolutionKind kind;
    GLattice sub, mid;
    GModule quot;
    GMap inject;   // sub -> mid
    GMap project;  // mid -> quot

    struct Certificates {
        bool exactness = false;
        Verdict sub_class = Verdict::unknown;
        Verdict mid_class = Verdict::unknown;
        Verdict quot_class = Verdict::unknown;
        std::string detail;  // first failure, empty when all green
        bool all_green() const {
            return exactness && sub_class == Verdict::yes && mid_class == Verdict::yes &&
                   quot_class == Verdict::yes;
        }
    } certificates;
};

struct ResolutionOptions {
    std::uint64_t seed = 0;  // ordering seed for the cover construction
    bool certify = true;     // class membership sweeps (exactness is always checked)
};

// Checks that 0 -> source(inject) -> mid -> target(project) -> 0 is exact:
// inject has no kernel, project is surjective, and image(inject) equals
// kernel(project).  The sub and mid terms must be torsion-free; the quotient
// may carry relations.  On failure the reason lands in *why when given.
bool is_short_exact(const GMap& inject, const GMap& project, std::string* why = nullptr);

// 0 -> C -> P -> N -> 0 with P a permutation lattice mapping onto the fixed
// points of every subgroup and C coflasque.
Resolution coflasque_resolution(const GModule& n, const ResolutionOptions& opts = {});
Resolution coflasque_resolution(const GLattice& n, const ResolutionOptions& opts = {});

// 0 -> L -> Q -> F -> 0 with Q a permutation lattice and F flasque; the dual
// of a coflasque resolution of the dual of L.
Resolution permutation_embedding(const GLattice& l, const ResolutionOptions& opts = {});

// 0 -> P -> E -> N -> 0 with P a permutation lattice and E flasque, glued
// from a coflasque resolution of N and a permutation embedding of its kernel.
Resolution flasque_resolution(const GModule& n, const ResolutionOptions& opts = {});
Resolution flasque_resolution(const GLattice& n, const ResolutionOptions& opts = {});

// H^1(H, L) for every subgroup H, in the all_subgroups order.  Equal for the
// flasque parts of any two flasque resolutions of the same module.
using Fingerprint = std::vector<std::pair<Subgroup, FinAbGroup>>;
Fingerprint similarity_fingerprint(const GLattice& l);
bool fingerprint_is_zero(const Fingerprint& f);
std::string fingerprint_text(const Fingerprint& f);

// witness for "L (+) added is isomorphic to target", both permutation sums
struct StableWitness {
    std::vector<Subgroup> added;
    std::vector<Subgroup> target;
    Mat intertwiner;  // unimodular, rows target, columns L (+) added
};

struct Verdict3 {
    Verdict value = Verdict::unknown;
    int bound_used = 0;
    std::string note;  // obstruction on no, search limits on unknown
    std::optional<PermutationStructure> permuted_basis;  // yes certificate
    std::optional<Mat> basis_matrix;  // columns are the permuted basis vectors
    std::optional<StableWitness> stable;  // yes certificate of the stable test
};

// Bounded search for a Z-basis permuted by the action: assembles orbits of
// vectors with coordinates bounded by norm_bound.  Yes and no are certified;
// unknown reports the bound that was exhausted.
Verdict3 is_permutation_bounded(const GLattice& l, int norm_bound = 2,
                                std::uint64_t seed = 0);

// Bounded search for permutation lattices P1, P2 with L (+) P1 isomorphic to
// P2, adding at most rank_budget to each side.
Verdict3 is_stably_permutation_bounded(const GLattice& l, int rank_budget, int norm_bound,
                                       std::uint64_t seed = 0);

}  // namespace flk
