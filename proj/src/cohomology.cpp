#include "flk/cohomology.hpp"

#include <cstdlib>

namespace flk {

namespace {

void check_subgroup(const FiniteGroup& g, const Subgroup& h) {
    for (int e : h.members)
        if (e < 0 || e >= g.order())
            throw NotASubgroup("subgroup member out of range");
}

// One-cocycles f: H -> Z^r/R are pinned down by their values on a generating
// set of H: every value f(h) is A_h x for the stacked generator values
// x in Z^{t r}, with A built along breadth-first words.  Imposing
// f(su) = f(s) + s f(u) for every generator s and every u in H then forces
// the cocycle identity for all pairs (induction on the word length of the
// left factor).  R empty means plain lattice coefficients.
FinAbGroup h1_of(const FiniteGroup& g, const Subgroup& h,
                 const std::vector<Mat>& action, const Mat& relations) {
    std::vector<int> gens = subgroup_generators(g, h);
    if (gens.empty()) return FinAbGroup{};
    const int r = action[0].rows;
    if (r == 0) return FinAbGroup{};
    const int t = static_cast<int>(gens.size());
    const int tr = t * r;

    auto unit_block = [&](int i) {
        Mat e(r, tr);
        for (int j = 0; j < r; ++j) e(j, i * r + j) = 1;
        return e;
    };

    std::vector<Mat> a(g.order());
    std::vector<bool> have(g.order(), false);
    a[0] = Mat(r, tr);
    have[0] = true;
    std::vector<int> queue{0};
    for (size_t head = 0; head < queue.size(); ++head) {
        int u = queue[head];
        for (int i = 0; i < t; ++i) {
            int p = g.mul(gens[i], u);
            if (have[p]) continue;
            a[p] = add(unit_block(i), mul(action[gens[i]], a[u]));
            have[p] = true;
            queue.push_back(p);
        }
    }

    // intersect the per-constraint kernels incrementally
    Mat k = Mat::identity(tr);
    for (int i = 0; i < t && k.cols > 0; ++i) {
        for (int u : h.members) {
            if (k.cols == 0) break;
            int p = g.mul(gens[i], u);
            Mat c = sub(a[p], add(a[gens[i]], mul(action[gens[i]], a[u])));
            if (c.is_zero()) continue;
            Mat ck = mul(c, k);
            if (ck.is_zero()) continue;
            if (relations.cols == 0) {
                k = mul(k, kernel_columns(ck));
            } else {
                Mat ker = kernel_columns(hstack(ck, relations));
                k = mul(k, column_span_basis(rows_of(ker, 0, k.cols)));
            }
        }
    }
    if (k.cols == 0) return FinAbGroup{};

    // coboundaries (rho(s) - 1)m, and for modules the relation shifts of the
    // lifted generator values
    Mat bound(tr, r + t * relations.cols);
    for (int i = 0; i < t; ++i) {
        const Mat& rho = action[gens[i]];
        for (int row = 0; row < r; ++row)
            for (int col = 0; col < r; ++col) {
                Int v = rho(row, col);
                if (row == col) v -= 1;
                bound(i * r + row, col) = std::move(v);
            }
        for (int col = 0; col < relations.cols; ++col)
            for (int row = 0; row < r; ++row)
                bound(i * r + row, r + i * relations.cols + col) = relations(row, col);
    }
    auto y = solve_columns(k, bound);
    if (!y) throw ConstructionFailure("coboundary escaped the cocycle lattice (internal)");
    return abelian_quotient(k.cols, *y);
}

FinAbGroup tate_h0_lattice(const GLattice& l, const Subgroup& h) {
    Mat fixed = fixed_sublattice(l, h);
    if (fixed.cols == 0) return FinAbGroup{};
    auto y = solve_columns(fixed, norm_endomorphism(l, h));
    if (!y) throw ConstructionFailure("norm image escaped the fixed lattice (internal)");
    FinAbGroup q = abelian_quotient(fixed.cols, *y);
    if (q.free_rank != 0)
        throw ConstructionFailure("norm image rank deficit (internal)");
    return q;
}

FinAbGroup tate_h0_module(const GModule& m, const Subgroup& h) {
    Mat fixed = fixed_cover_lattice(m, h);
    if (fixed.cols == 0) return FinAbGroup{};
    Mat denom = hstack(norm_endomorphism(m, h), m.relations);
    auto y = solve_columns(fixed, denom);
    if (!y) throw ConstructionFailure("norm image escaped the fixed cover (internal)");
    FinAbGroup q = abelian_quotient(fixed.cols, *y);
    if (q.free_rank != 0)
        throw ConstructionFailure("norm image rank deficit (internal)");
    return q;
}

FinAbGroup tate_hm1_lattice(const GLattice& l, const Subgroup& h) {
    Mat nk = kernel_columns(norm_endomorphism(l, h));
    if (nk.cols == 0) return FinAbGroup{};
    std::vector<int> gens = subgroup_generators(*l.group, h);
    Mat aug(l.rank, static_cast<int>(gens.size()) * l.rank);
    for (size_t i = 0; i < gens.size(); ++i) {
        const Mat& rho = l.action[gens[i]];
        for (int row = 0; row < l.rank; ++row)
            for (int col = 0; col < l.rank; ++col) {
                Int v = rho(row, col);
                if (row == col) v -= 1;
                aug(row, static_cast<int>(i) * l.rank + col) = std::move(v);
            }
    }
    auto y = solve_columns(nk, aug);
    if (!y) throw ConstructionFailure("augmentation escaped the norm kernel (internal)");
    FinAbGroup q = abelian_quotient(nk.cols, *y);
    if (q.free_rank != 0)
        throw ConstructionFailure("augmentation rank deficit in the norm kernel (internal)");
    return q;
}

}  // namespace

FinAbGroup tate_cohomology(const GLattice& l, const Subgroup& h, int n,
                           const CohomologyOptions& opts) {
    check_subgroup(*l.group, h);
    if (std::abs(n) > opts.shift_bound)
        throw ShiftBoundExceeded("degree " + std::to_string(n) +
                                 " beyond shift bound " + std::to_string(opts.shift_bound));
    switch (n) {
        case 1: return h1_of(*l.group, h, l.action, Mat(l.rank, 0));
        case 0: return tate_h0_lattice(l, h);
        case -1: return tate_hm1_lattice(l, h);
        default:
            if (n > 1) return tate_cohomology(shift_up(l), h, n - 1, opts);
            return tate_cohomology(shift_down(l), h, n + 1, opts);
    }
}

FinAbGroup tate_cohomology(const GModule& m, const Subgroup& h, int n,
                           const CohomologyOptions& opts) {
    check_subgroup(*m.group, h);
    if (m.is_free() || abelian_quotient(m.free_cover_rank, m.relations).invariant_factors.empty())
        return tate_cohomology(lattice_from_module(m), h, n, opts);
    if (n == 1) return h1_of(*m.group, h, m.action, m.relations);
    if (n == 0) return tate_h0_module(m, h);
    throw TorsionUnsupportedDegree("degree " + std::to_string(n) +
                                   " is not available for torsion modules");
}

FinAbGroup ordinary_h0(const GLattice& l, const Subgroup& h) {
    check_subgroup(*l.group, h);
    FinAbGroup out;
    out.free_rank = fixed_sublattice(l, h).cols;
    return out;
}

FinAbGroup ordinary_h0(const GModule& m, const Subgroup& h) {
    check_subgroup(*m.group, h);
    Mat fixed = fixed_cover_lattice(m, h);
    if (fixed.cols == 0) return FinAbGroup{};
    auto y = solve_columns(fixed, m.relations);
    if (!y) throw ConstructionFailure("relations escaped the fixed cover (internal)");
    return abelian_quotient(fixed.cols, *y);
}

ClassCheck is_flasque(const GLattice& l) {
    GLattice d = dual(l);
    ClassCheck out;
    for (const Subgroup& h : all_subgroups(*l.group)) {
        FinAbGroup c = tate_cohomology(d, h, 1);
        if (!c.is_trivial()) {
            out.witness = ClassWitness{h, std::move(c)};
            return out;
        }
    }
    out.holds = true;
    return out;
}

ClassCheck is_coflasque(const GLattice& l) {
    ClassCheck out;
    for (const Subgroup& h : all_subgroups(*l.group)) {
        FinAbGroup c = tate_cohomology(l, h, 1);
        if (!c.is_trivial()) {
            out.witness = ClassWitness{h, std::move(c)};
            return out;
        }
    }
    out.holds = true;
    return out;
}

GLattice induced_lattice(const GLattice& l) {
    const FiniteGroup& g = *l.group;
    const int n = g.order(), r = l.rank;
    GLattice out;
    out.group = l.group;
    out.rank = n * r;
    out.action.reserve(n);
    // basis e_x (x) b_j at index x*r + j; e acts by translating the block,
    // e_x (x) b_j |-> e_{ex} (x) b_j, so this is r free copies of Z[G]
    for (int e = 0; e < n; ++e) {
        Mat m(n * r, n * r);
        for (int x = 0; x < n; ++x) {
            int y = g.mul(e, x);
            for (int j = 0; j < r; ++j) m(y * r + j, x * r + j) = 1;
        }
        out.action.push_back(std::move(m));
    }
    PermutationStructure ps;
    for (int j = 0; j < r; ++j) {
        PermutationOrbit orbit;
        orbit.stabilizer = trivial_subgroup(g);
        for (int x = 0; x < n; ++x) orbit.basis_indices.push_back(x * r + j);
        ps.orbits.push_back(std::move(orbit));
    }
    out.permutation_structure = std::move(ps);
    return out;
}

GLattice shift_up(const GLattice& l) {
    const FiniteGroup& g = *l.group;
    const int n = g.order(), r = l.rank;
    Mat embed(n * r, r);
    for (int x = 0; x < n; ++x) {
        const Mat& rho = l.action[g.inv(x)];
        for (int i = 0; i < r; ++i)
            for (int j = 0; j < r; ++j) embed(x * r + i, j) = rho(i, j);
    }
    return quotient_lattice(induced_lattice(l), embed).lattice;
}

GLattice shift_down(const GLattice& l) {
    const FiniteGroup& g = *l.group;
    const int n = g.order(), r = l.rank;
    // e_x (x) b_j |-> x.b_j, the equivariant evaluation
    Mat proj(r, n * r);
    for (int x = 0; x < n; ++x) {
        const Mat& rho = l.action[x];
        for (int i = 0; i < r; ++i)
            for (int j = 0; j < r; ++j) proj(i, x * r + j) = rho(i, j);
    }
    GMap down = make_gmap(induced_lattice(l), l, proj);
    return kernel_lattice_of_map(down).kernel;
}

}  // namespace flk
