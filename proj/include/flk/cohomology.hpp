#pragma once

#include "flk/lattice.hpp"

// Tate cohomology of subgroups acting on lattices and presented modules.
//
// Degrees -1, 0, 1 are computed directly: Hhat^0 as fixed points modulo the
// norm image, Hhat^-1 as the norm kernel modulo the augmentation submodule,
// and H^1 by solving the cocycle equations.  Degrees of larger magnitude are
// reached by dimension shifting through Z[G] (x) L, which has trivial
// cohomology for every subgroup because Z[G] is free over each Z[H].

namespace flk {

struct CohomologyOptions {
    // largest |degree| served; degrees beyond +-1 cost one shift each
    int shift_bound = 3;
};

FinAbGroup tate_cohomology(const GLattice& l, const Subgroup& h, int n,
                           const CohomologyOptions& opts = {});

// Torsion modules are served in degrees 0 and 1 only; a module whose quotient
// happens to be torsion-free is converted and handled as a lattice.
FinAbGroup tate_cohomology(const GModule& m, const Subgroup& h, int n,
                           const CohomologyOptions& opts = {});

// ordinary fixed points H^0(H, -): free rank plus torsion, no norm quotient
FinAbGroup ordinary_h0(const GLattice& l, const Subgroup& h);
FinAbGroup ordinary_h0(const GModule& m, const Subgroup& h);

struct ClassWitness {
    Subgroup subgroup;
    FinAbGroup value;  // the nonvanishing cohomology group
};

struct ClassCheck {
    bool holds = false;
    std::optional<ClassWitness> witness;  // present exactly when holds is false
    explicit operator bool() const { return holds; }
};

// flasque: H^1(H, dual(L)) = 0 for every subgroup H
ClassCheck is_flasque(const GLattice& l);
// coflasque: H^1(H, L) = 0 for every subgroup H
ClassCheck is_coflasque(const GLattice& l);

// The dimension-shift building blocks, exposed so tests can recompute shifted
// degrees from scratch.
GLattice induced_lattice(const GLattice& l);  // Z[G] (x) L, translation action
GLattice shift_up(const GLattice& l);         // cokernel of m |-> sum_g g (x) g^-1 m
GLattice shift_down(const GLattice& l);       // kernel of g (x) m |-> g.m

}  // namespace flk
