#include "flk/tori.hpp"

#include "flk/errors.hpp"

namespace flk {

TorusSpec make_torus_spec(GLattice characters) {
    if (!characters.group) throw ValidationError("character lattice has no group");
    TorusSpec t;
    t.group = characters.group;
    t.characters = std::move(characters);
    return t;
}

GLattice norm_one_lattice(const GroupPtr& g) {
    GLattice reg = regular_lattice(g);
    Mat norm(reg.rank, 1);
    for (int i = 0; i < reg.rank; ++i) norm(i, 0) = 1;
    return quotient_lattice(reg, norm).lattice;
}

Resolution torus_flasque_resolution(const TorusSpec& t, const ResolutionOptions& opts) {
    return permutation_embedding(t.characters, opts);
}

REquivReport r_equivalence_local(const TorusSpec& t, const ResolutionOptions& opts) {
    Resolution res = torus_flasque_resolution(t, opts);
    REquivReport rep;
    rep.flasque_part = lattice_from_module(res.quot);
    rep.count_group = tate_cohomology(dual(rep.flasque_part), full_subgroup(*t.group), -1);
    rep.fingerprint = similarity_fingerprint(rep.flasque_part);
    return rep;
}

}  // namespace flk
