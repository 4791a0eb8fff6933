#include "flk/lattice.hpp"

#include <algorithm>

namespace flk {

std::string FinAbGroup::text() const {
    if (is_trivial()) return "0";
    std::string s;
    if (free_rank == 1) s = "Z";
    else if (free_rank > 1) s = "Z^" + std::to_string(free_rank);
    for (const Int& d : invariant_factors) {
        if (!s.empty()) s += " + ";
        s += "Z/" + d.str();
    }
    return s;
}

FinAbGroup abelian_quotient(int n, const Mat& relations) {
    FinAbGroup out;
    if (n == 0) return out;
    SmithResult s = smith(relations, false);
    for (const Int& d : s.diag)
        if (!d.is_zero() && d != 1) out.invariant_factors.push_back(d);
    out.free_rank = n - s.rank;
    return out;
}

namespace {

// Per-element matrices from per-generator matrices, walking the group's
// multiplication in breadth-first order.  Checks rho(s)rho(g) = rho(sg) for
// every generator s and element g, which forces the homomorphism property
// everywhere.  For a quotient module the group law only needs to hold modulo
// the relation columns, and unimodularity is not required (multiplication by
// 2 on Z/5 is a perfectly good action).
std::vector<Mat> close_action(const FiniteGroup& g, int rank,
                              const std::vector<Mat>& generator_matrices,
                              const Mat& relations, bool require_unimodular) {
    const std::vector<int>& gen_elems = g.generator_indices();
    if (generator_matrices.size() != gen_elems.size())
        throw ValidationError("expected one action matrix per group generator");
    for (const Mat& m : generator_matrices) {
        if (m.rows != rank || m.cols != rank)
            throw ValidationError("action matrix has wrong shape");
        if (require_unimodular && !is_unimodular(m))
            throw NotUnimodular("action matrix has determinant != +-1");
    }
    auto congruent = [&](const Mat& x, const Mat& y) {
        Mat diff = sub(x, y);
        if (diff.is_zero()) return true;
        return relations.cols != 0 && in_column_span(relations, diff);
    };
    std::vector<Mat> action(g.order());
    std::vector<bool> have(g.order(), false);
    action[0] = Mat::identity(rank);
    have[0] = true;
    for (size_t i = 0; i < gen_elems.size(); ++i) {
        int e = gen_elems[i];
        if (have[e]) {
            if (!congruent(action[e], generator_matrices[i]))
                throw NotARepresentation("conflicting matrices for one group element");
        } else {
            action[e] = generator_matrices[i];
            have[e] = true;
        }
    }
    // breadth-first fill
    bool grew = true;
    while (grew) {
        grew = false;
        for (size_t i = 0; i < gen_elems.size(); ++i) {
            int s = gen_elems[i];
            for (int e = 0; e < g.order(); ++e) {
                if (!have[e]) continue;
                int p = g.mul(s, e);
                if (have[p]) continue;
                action[p] = mul(action[s], action[e]);
                have[p] = true;
                grew = true;
            }
        }
    }
    for (int e = 0; e < g.order(); ++e)
        if (!have[e])
            throw NotARepresentation("generators do not reach every group element");
    for (size_t i = 0; i < gen_elems.size(); ++i) {
        int s = gen_elems[i];
        for (int e = 0; e < g.order(); ++e)
            if (!congruent(mul(action[s], action[e]), action[g.mul(s, e)]))
                throw NotARepresentation("matrices do not satisfy the group's relations");
    }
    return action;
}

bool stable_under(const Mat& relations, const std::vector<Mat>& action) {
    if (relations.cols == 0) return true;
    for (const Mat& a : action)
        if (!in_column_span(relations, mul(a, relations))) return false;
    return true;
}

}  // namespace

GLattice validate_lattice(GroupPtr group, int rank, const std::vector<Mat>& generator_matrices) {
    if (rank < 0) throw ValidationError("rank must be nonnegative");
    GLattice l;
    l.group = group;
    l.rank = rank;
    l.action = close_action(*group, rank, generator_matrices, Mat(rank, 0), true);
    return l;
}

GLattice validate_lattice(GroupPtr group, const std::vector<Mat>& generator_matrices) {
    if (generator_matrices.empty())
        throw ValidationError("cannot infer rank without generator matrices");
    return validate_lattice(group, generator_matrices.front().rows, generator_matrices);
}

GModule validate_module(GroupPtr group, int free_cover_rank, const Mat& relations,
                        const std::vector<Mat>& generator_matrices) {
    if (relations.rows != free_cover_rank && relations.cols != 0)
        throw ValidationError("relations have wrong row count");
    GModule m;
    m.group = group;
    m.free_cover_rank = free_cover_rank;
    m.action = close_action(*group, free_cover_rank, generator_matrices, relations, false);
    if (!stable_under(relations, m.action))
        throw ValidationError("relations are not stable under the action");
    m.relations = column_span_basis(relations);
    return m;
}

bool action_table_consistent(const GLattice& l) {
    const FiniteGroup& g = *l.group;
    for (int a = 0; a < g.order(); ++a)
        for (int b = 0; b < g.order(); ++b)
            if (!(mul(l.action[a], l.action[b]) == l.action[g.mul(a, b)])) return false;
    return true;
}

bool action_table_consistent(const GModule& m) {
    const FiniteGroup& g = *m.group;
    for (int a = 0; a < g.order(); ++a)
        for (int b = 0; b < g.order(); ++b) {
            Mat diff = sub(mul(m.action[a], m.action[b]), m.action[g.mul(a, b)]);
            if (!diff.is_zero() && !in_column_span(m.relations, diff)) return false;
        }
    return true;
}

bool permutation_structure_matches(const GLattice& l, const PermutationStructure& ps) {
    std::vector<bool> used(l.rank, false);
    for (const PermutationOrbit& o : ps.orbits) {
        CosetAction ca = coset_action(*l.group, o.stabilizer);
        if (o.basis_indices.size() != ca.cosets.size()) return false;
        for (int b : o.basis_indices) {
            if (b < 0 || b >= l.rank || used[b]) return false;
            used[b] = true;
        }
        for (int e = 0; e < l.group->order(); ++e) {
            const Permutation& p = ca.action[e];
            for (size_t c = 0; c < ca.cosets.size(); ++c) {
                // column basis_indices[c] of rho(e) must be the unit vector
                // at basis_indices[p(c)]
                int src = o.basis_indices[c];
                int dst = o.basis_indices[p.images[c]];
                for (int i = 0; i < l.rank; ++i) {
                    const Int& v = l.action[e](i, src);
                    if (i == dst ? v != 1 : !v.is_zero()) return false;
                }
            }
        }
    }
    return std::all_of(used.begin(), used.end(), [](bool b) { return b; });
}

GModule to_module(const GLattice& l) {
    GModule m;
    m.group = l.group;
    m.free_cover_rank = l.rank;
    m.relations = Mat(l.rank, 0);
    m.action = l.action;
    return m;
}

GLattice lattice_from_module(const GModule& m) {
    if (m.relations.cols == 0) {
        GLattice l;
        l.group = m.group;
        l.rank = m.free_cover_rank;
        l.action = m.action;
        return l;
    }
    FinAbGroup q = abelian_quotient(m.free_cover_rank, m.relations);
    if (!q.invariant_factors.empty())
        throw TorsionInput("module has torsion " + q.text());
    // saturated relations: quotient by them with an induced action
    GLattice ambient{m.group, m.free_cover_rank, m.action, std::nullopt};
    return quotient_lattice(ambient, m.relations).lattice;
}

GLattice trivial_lattice(GroupPtr group, int rank) {
    GLattice l;
    l.group = group;
    l.rank = rank;
    l.action.assign(group->order(), Mat::identity(rank));
    PermutationStructure ps;
    for (int i = 0; i < rank; ++i)
        ps.orbits.push_back(PermutationOrbit{full_subgroup(*group), {i}});
    l.permutation_structure = std::move(ps);
    return l;
}

GLattice permutation_lattice(GroupPtr group, const Subgroup& stabilizer) {
    CosetAction ca = coset_action(*group, stabilizer);
    int n = static_cast<int>(ca.cosets.size());
    GLattice l;
    l.group = group;
    l.rank = n;
    l.action.reserve(group->order());
    for (int e = 0; e < group->order(); ++e) {
        Mat m(n, n);
        for (int c = 0; c < n; ++c) m(ca.action[e].images[c], c) = 1;
        l.action.push_back(std::move(m));
    }
    PermutationOrbit orbit;
    orbit.stabilizer = stabilizer;
    orbit.basis_indices.resize(n);
    for (int c = 0; c < n; ++c) orbit.basis_indices[c] = c;
    l.permutation_structure = PermutationStructure{{orbit}};
    return l;
}

GLattice regular_lattice(GroupPtr group) {
    return permutation_lattice(group, trivial_subgroup(*group));
}

GLattice direct_sum(const GLattice& a, const GLattice& b) {
    if (a.group != b.group) throw GroupMismatch("direct_sum over different groups");
    GLattice l;
    l.group = a.group;
    l.rank = a.rank + b.rank;
    l.action.reserve(a.action.size());
    for (size_t e = 0; e < a.action.size(); ++e)
        l.action.push_back(block_diag(a.action[e], b.action[e]));
    if (a.permutation_structure && b.permutation_structure) {
        PermutationStructure ps = *a.permutation_structure;
        for (PermutationOrbit o : b.permutation_structure->orbits) {
            for (int& idx : o.basis_indices) idx += a.rank;
            ps.orbits.push_back(std::move(o));
        }
        l.permutation_structure = std::move(ps);
    }
    return l;
}

GModule direct_sum(const GModule& a, const GModule& b) {
    if (a.group != b.group) throw GroupMismatch("direct_sum over different groups");
    GModule m;
    m.group = a.group;
    m.free_cover_rank = a.free_cover_rank + b.free_cover_rank;
    for (size_t e = 0; e < a.action.size(); ++e)
        m.action.push_back(block_diag(a.action[e], b.action[e]));
    Mat rel(m.free_cover_rank, a.relations.cols + b.relations.cols);
    for (int j = 0; j < a.relations.cols; ++j)
        for (int i = 0; i < a.free_cover_rank; ++i) rel(i, j) = a.relations(i, j);
    for (int j = 0; j < b.relations.cols; ++j)
        for (int i = 0; i < b.free_cover_rank; ++i)
            rel(a.free_cover_rank + i, a.relations.cols + j) = b.relations(i, j);
    m.relations = column_span_basis(rel);
    return m;
}

GLattice dual(const GLattice& l) {
    GLattice d;
    d.group = l.group;
    d.rank = l.rank;
    d.action.reserve(l.action.size());
    for (int e = 0; e < l.group->order(); ++e)
        d.action.push_back(transpose(l.action[l.group->inv(e)]));
    // permutation matrices satisfy transpose(rho(g^{-1})) = rho(g), so a
    // permutation certificate transfers unchanged
    d.permutation_structure = l.permutation_structure;
    return d;
}

GMap make_gmap(GModule source, GModule target, Mat matrix) {
    if (source.group != target.group) throw GroupMismatch("map endpoints over different groups");
    if (matrix.rows != target.free_cover_rank || matrix.cols != source.free_cover_rank)
        throw ValidationError("map matrix has wrong shape");
    if (source.relations.cols != 0 &&
        !in_column_span(target.relations, mul(matrix, source.relations)))
        throw ValidationError("map does not kill the source relations");
    for (int e = 0; e < source.group->order(); ++e) {
        Mat diff = sub(mul(matrix, source.action[e]), mul(target.action[e], matrix));
        if (!diff.is_zero() && !in_column_span(target.relations, diff))
            throw ValidationError("map is not equivariant");
    }
    return GMap{std::move(source), std::move(target), std::move(matrix)};
}

GMap make_gmap(const GLattice& source, const GLattice& target, Mat matrix) {
    return make_gmap(to_module(source), to_module(target), std::move(matrix));
}

GMap make_gmap(const GLattice& source, const GModule& target, Mat matrix) {
    return make_gmap(to_module(source), target, std::move(matrix));
}

KernelResult kernel_of_map(const GMap& f) {
    // preimage lattice of the target relations
    Mat big = hstack(f.matrix, f.target.relations);
    Mat ker = kernel_columns(big);
    Mat basis = column_span_basis(rows_of(ker, 0, f.source.free_cover_rank));
    int n = basis.cols;
    GModule k;
    k.group = f.source.group;
    k.free_cover_rank = n;
    auto rel = solve_columns(basis, f.source.relations);
    if (!rel) throw ConstructionFailure("source relations escape the kernel (internal)");
    k.relations = column_span_basis(*rel);
    for (int e = 0; e < f.source.group->order(); ++e) {
        auto a = solve_columns(basis, mul(f.source.action[e], basis));
        if (!a) throw ConstructionFailure("kernel is not action-stable (internal)");
        k.action.push_back(std::move(*a));
    }
    GMap inclusion = make_gmap(k, f.source, basis);
    return KernelResult{std::move(k), std::move(inclusion)};
}

LatticeKernelResult kernel_lattice_of_map(const GMap& f) {
    if (f.source.relations.cols != 0)
        throw TorsionInput("kernel lattice requires a free source");
    KernelResult kr = kernel_of_map(f);
    GLattice l;
    l.group = kr.kernel.group;
    l.rank = kr.kernel.free_cover_rank;
    l.action = kr.kernel.action;
    return LatticeKernelResult{std::move(l), kr.inclusion.matrix};
}

GModule cokernel_of_map(const GMap& f) {
    GModule c = f.target;
    c.relations = column_span_basis(hstack(f.target.relations, f.matrix));
    return c;
}

Mat fixed_sublattice(const GLattice& l, const Subgroup& h) {
    std::vector<int> gens = subgroup_generators(*l.group, h);
    Mat basis = Mat::identity(l.rank);
    for (int s : gens) {
        Mat d = sub(mul(l.action[s], basis), basis);
        // restrict to vectors of the current basis killed by rho(s) - 1
        basis = mul(basis, kernel_columns(d));
    }
    return column_span_basis(basis);
}

Mat fixed_cover_lattice(const GModule& m, const Subgroup& h) {
    std::vector<int> gens = subgroup_generators(*m.group, h);
    if (gens.empty()) return Mat::identity(m.free_cover_rank);
    // stack the conditions (rho(s) - 1) x in R over the generators
    Mat stacked(0, m.free_cover_rank);
    Mat relcols(0, 0);
    for (size_t i = 0; i < gens.size(); ++i) {
        Mat d = sub(m.action[gens[i]], Mat::identity(m.free_cover_rank));
        if (i == 0) {
            stacked = d;
        } else {
            stacked = vstack(stacked, d);
        }
    }
    int rows = stacked.rows;
    Mat rel(rows, static_cast<int>(gens.size()) * m.relations.cols);
    for (size_t i = 0; i < gens.size(); ++i)
        for (int j = 0; j < m.relations.cols; ++j)
            for (int r = 0; r < m.free_cover_rank; ++r)
                rel(static_cast<int>(i) * m.free_cover_rank + r,
                    static_cast<int>(i) * m.relations.cols + j) = m.relations(r, j);
    Mat big = hstack(stacked, rel);
    Mat ker = kernel_columns(big);
    return column_span_basis(rows_of(ker, 0, m.free_cover_rank));
}

Mat norm_endomorphism(const GLattice& l, const Subgroup& h) {
    Mat n(l.rank, l.rank);
    for (int e : h.members) n = add(n, l.action[e]);
    return n;
}

Mat norm_endomorphism(const GModule& m, const Subgroup& h) {
    Mat n(m.free_cover_rank, m.free_cover_rank);
    for (int e : h.members) n = add(n, m.action[e]);
    return n;
}

SublatticeResult sublattice_with_action(const GLattice& ambient, const Mat& basis) {
    GLattice l;
    l.group = ambient.group;
    l.rank = basis.cols;
    for (int e = 0; e < ambient.group->order(); ++e) {
        auto a = solve_columns(basis, mul(ambient.action[e], basis));
        if (!a) throw ConstructionFailure("sublattice is not action-stable");
        l.action.push_back(std::move(*a));
    }
    return SublatticeResult{std::move(l), basis};
}

QuotientResult quotient_lattice(const GLattice& ambient, const Mat& sub_basis) {
    if (!stable_under(sub_basis, ambient.action))
        throw ConstructionFailure("quotient by a sublattice that is not action-stable");
    SmithResult s = smith(sub_basis, true);
    for (int t = 0; t < s.rank; ++t)
        if (s.diag[t] != 1)
            throw TorsionInput("quotient by a non-saturated sublattice has torsion");
    int q = ambient.rank - s.rank;
    QuotientResult out;
    out.projection = rows_of(s.l, s.rank, q);
    out.lift = columns(s.linv, s.rank, q);
    GLattice l;
    l.group = ambient.group;
    l.rank = q;
    for (int e = 0; e < ambient.group->order(); ++e)
        l.action.push_back(mul(out.projection, mul(ambient.action[e], out.lift)));
    out.lattice = std::move(l);
    return out;
}

FinAbGroup ambient_quotient_structure(int ambient_rank, const Mat& sub_basis) {
    return abelian_quotient(ambient_rank, sub_basis);
}

bool same_action(const GLattice& a, const GLattice& b) {
    if (a.group != b.group || a.rank != b.rank) return false;
    for (size_t e = 0; e < a.action.size(); ++e)
        if (!(a.action[e] == b.action[e])) return false;
    return true;
}

}  // namespace flk
