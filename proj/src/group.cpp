#include "flk/group.hpp"

#include <algorithm>
#include <cstdlib>
#include <map>
#include <set>

namespace flk {

Permutation Permutation::identity(int degree) {
    Permutation p;
    p.images.resize(degree);
    for (int i = 0; i < degree; ++i) p.images[i] = i;
    return p;
}

bool Permutation::is_identity() const {
    for (int i = 0; i < degree(); ++i)
        if (images[i] != i) return false;
    return true;
}

Permutation Permutation::inverse() const {
    Permutation p;
    p.images.resize(degree());
    for (int i = 0; i < degree(); ++i) p.images[images[i]] = i;
    return p;
}

Permutation operator*(const Permutation& a, const Permutation& b) {
    Permutation p;
    p.images.resize(a.degree());
    for (int i = 0; i < a.degree(); ++i) p.images[i] = a.images[b.images[i]];
    return p;
}

void validate_permutation(const Permutation& p, int degree) {
    if (p.degree() != degree)
        throw NotAPermutation("image list has length " + std::to_string(p.degree()) +
                              ", expected " + std::to_string(degree));
    std::vector<bool> seen(degree, false);
    for (int x : p.images) {
        if (x < 0 || x >= degree)
            throw NotAPermutation("image " + std::to_string(x) + " out of range");
        if (seen[x]) throw NotAPermutation("image " + std::to_string(x) + " repeated");
        seen[x] = true;
    }
}

namespace {

int group_order_cap(int requested) {
    int cap = 64;
    if (requested > 0) {
        cap = requested;
    } else if (const char* env = std::getenv("FLASQUEKIT_MAX_GROUP_ORDER")) {
        char* end = nullptr;
        long v = std::strtol(env, &end, 10);
        if (end && *end == '\0' && v > 0) cap = static_cast<int>(v);
    }
    return cap;
}

}  // namespace

GroupPtr FiniteGroup::close_generators(int degree, const std::vector<Permutation>& gens,
                                       int max_order) {
    if (degree < 1) throw ValidationError("degree must be a positive integer");
    for (const Permutation& p : gens) validate_permutation(p, degree);

    const int cap = group_order_cap(max_order);
    auto g = std::make_shared<FiniteGroup>();
    g->degree_ = degree;

    std::map<std::vector<int>, int> index;
    auto push = [&](const Permutation& p) -> int {
        auto it = index.find(p.images);
        if (it != index.end()) return it->second;
        int id = static_cast<int>(g->elements_.size());
        if (id >= cap || id >= 64)
            throw GroupTooLarge("closure exceeds the order cap of " +
                                std::to_string(std::min(cap, 64)));
        g->elements_.push_back(p);
        index.emplace(p.images, id);
        return id;
    };

    push(Permutation::identity(degree));
    std::vector<Permutation> unique_gens;
    for (const Permutation& p : gens) {
        size_t before = g->elements_.size();
        int id = push(p);
        if (g->elements_.size() > before) unique_gens.push_back(p);
        g->gen_indices_.push_back(id);
    }
    // breadth-first closure: left-multiply known elements by the generators
    for (size_t i = 0; i < g->elements_.size(); ++i) {
        for (const Permutation& s : unique_gens) {
            push(s * g->elements_[i]);
        }
    }

    int n = g->order();
    g->mult_.assign(n, std::vector<int>(n, -1));
    g->inv_.assign(n, -1);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            Permutation p = g->elements_[a] * g->elements_[b];
            auto it = index.find(p.images);
            if (it == index.end())
                throw ValidationError("closure is not multiplicatively closed (internal)");
            g->mult_[a][b] = it->second;
            if (it->second == 0) g->inv_[a] = b;
        }
    for (int a = 0; a < n; ++a)
        if (g->inv_[a] < 0) throw ValidationError("element without inverse (internal)");
    return g;
}

int FiniteGroup::element_index(const Permutation& p) const {
    for (int i = 0; i < order(); ++i)
        if (elements_[i] == p) return i;
    return -1;
}

std::uint64_t close_mask(const FiniteGroup& g, std::uint64_t m) {
    std::vector<int> elems;
    for (int i = 0; i < g.order(); ++i)
        if ((m >> i) & 1) elems.push_back(i);
    for (size_t i = 0; i < elems.size(); ++i)
        for (size_t j = 0; j < elems.size(); ++j) {
            int p = g.mul(elems[i], elems[j]);
            if (!((m >> p) & 1)) {
                m |= std::uint64_t(1) << p;
                elems.push_back(p);
            }
        }
    return m;
}

namespace {

Subgroup subgroup_from_mask(std::uint64_t m) {
    Subgroup h;
    h.mask = m;
    for (int i = 0; i < 64; ++i)
        if ((m >> i) & 1) h.members.push_back(i);
    return h;
}

}  // namespace

std::vector<Subgroup> all_subgroups(const FiniteGroup& g) {
    std::set<std::uint64_t> seen;
    std::vector<std::uint64_t> list;
    auto add = [&](std::uint64_t m) {
        if (seen.insert(m).second) list.push_back(m);
    };
    add(std::uint64_t(1));  // trivial subgroup {identity}
    for (int e = 0; e < g.order(); ++e) {
        std::uint64_t m = 1;
        int x = e;
        while (!((m >> x) & 1)) {
            m |= std::uint64_t(1) << x;
            x = g.mul(x, e);
        }
        add(m);
    }
    // close the set under pairwise joins
    for (size_t i = 0; i < list.size(); ++i)
        for (size_t j = 0; j < i; ++j) {
            std::uint64_t join = list[i] | list[j];
            if (seen.count(join)) continue;
            add(close_mask(g, join));
        }
    std::vector<Subgroup> out;
    out.reserve(list.size());
    for (std::uint64_t m : seen) out.push_back(subgroup_from_mask(m));
    std::sort(out.begin(), out.end(), [](const Subgroup& a, const Subgroup& b) {
        if (a.order() != b.order()) return a.order() < b.order();
        return a.members < b.members;
    });
    return out;
}

Subgroup trivial_subgroup(const FiniteGroup&) { return subgroup_from_mask(1); }

Subgroup full_subgroup(const FiniteGroup& g) {
    std::uint64_t m = g.order() == 64 ? ~std::uint64_t(0)
                                      : (std::uint64_t(1) << g.order()) - 1;
    return subgroup_from_mask(m);
}

Subgroup subgroup_from_members(const FiniteGroup& g, const std::vector<int>& members) {
    std::uint64_t m = 0;
    for (int e : members) {
        if (e < 0 || e >= g.order())
            throw NotASubgroup("member index " + std::to_string(e) + " out of range");
        m |= std::uint64_t(1) << e;
    }
    if (!(m & 1)) throw NotASubgroup("identity missing");
    if (close_mask(g, m) != m) throw NotASubgroup("member list is not closed under products");
    return subgroup_from_mask(m);
}

std::vector<int> subgroup_generators(const FiniteGroup& g, const Subgroup& h) {
    std::vector<int> gens;
    std::uint64_t closed = 1;
    for (int e : h.members) {
        if ((closed >> e) & 1) continue;
        gens.push_back(e);
        closed = close_mask(g, closed | (std::uint64_t(1) << e));
    }
    return gens;
}

CosetAction coset_action(const FiniteGroup& g, const Subgroup& h) {
    if (close_mask(g, h.mask) != h.mask || !(h.mask & 1))
        throw NotASubgroup("coset_action requires a subgroup");
    int n = g.order();
    std::vector<int> coset_of(n, -1);
    CosetAction out;
    for (int x = 0; x < n; ++x) {
        if (coset_of[x] >= 0) continue;
        std::vector<int> coset;
        for (int e : h.members) coset.push_back(g.mul(x, e));
        std::sort(coset.begin(), coset.end());
        int id = static_cast<int>(out.cosets.size());
        for (int y : coset) coset_of[y] = id;
        out.cosets.push_back(std::move(coset));
    }
    out.action.reserve(n);
    for (int e = 0; e < n; ++e) {
        Permutation p;
        p.images.resize(out.cosets.size());
        for (size_t c = 0; c < out.cosets.size(); ++c)
            p.images[c] = coset_of[g.mul(e, out.cosets[c][0])];
        out.action.push_back(std::move(p));
    }
    return out;
}

bool is_subgroup_of(const Subgroup& inner, const Subgroup& outer) {
    return (inner.mask & ~outer.mask) == 0;
}

}  // namespace flk
