#pragma once

#include "flk/resolutions.hpp"

namespace flk {

// A torus presented by its character lattice over the splitting group.
struct TorusSpec {
    GroupPtr group;
    GLattice characters;
};

TorusSpec make_torus_spec(GLattice characters);

// Character lattice of the norm-one torus of G: the quotient of the regular
// lattice by the norm vector sum_g e_g.  Rank |G| - 1; for C2 this is the
// sign lattice.
GLattice norm_one_lattice(const GroupPtr& g);

// 0 -> T^ -> E^ -> S^ -> 0 with E^ permutation and S^ flasque: the character
// side of a flasque resolution 1 -> S -> E -> T -> 1 of the torus.
Resolution torus_flasque_resolution(const TorusSpec& t, const ResolutionOptions& opts = {});

struct REquivReport {
    GLattice flasque_part;    // S^
    FinAbGroup count_group;   // Hhat^-1(G, dual S^)
    Fingerprint fingerprint;  // H^1(H, S^) over all subgroups
};

// R-equivalence invariant of T in its local form: for k p-adic with the given
// splitting group, T(k)/R = H^1(k, S) has the order of count_group.  The
// fingerprint is reported for other arithmetic uses.
REquivReport r_equivalence_local(const TorusSpec& t, const ResolutionOptions& opts = {});

}  // namespace flk
