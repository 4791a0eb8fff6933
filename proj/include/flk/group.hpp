#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "flk/errors.hpp"

namespace flk {

// Permutation of {0, ..., degree-1}, stored as its image list.
struct Permutation {
    std::vector<int> images;

    int degree() const { return static_cast<int>(images.size()); }
    static Permutation identity(int degree);
    bool is_identity() const;
    Permutation inverse() const;
    // (a*b)(x) = a(b(x))
    friend Permutation operator*(const Permutation& a, const Permutation& b);
    friend bool operator==(const Permutation& a, const Permutation& b) = default;
};

// throws NotAPermutation unless p is a bijection on {0, ..., degree-1}
void validate_permutation(const Permutation& p, int degree);

// Subgroup of a FiniteGroup, as sorted element indices plus a 64-bit member
// mask (group orders are capped at 64).
struct Subgroup {
    std::vector<int> members;
    std::uint64_t mask = 0;

    int order() const { return static_cast<int>(members.size()); }
    bool contains(int e) const { return (mask >> e) & 1; }
    friend bool operator==(const Subgroup& a, const Subgroup& b) { return a.mask == b.mask; }
};

class FiniteGroup {
public:
    // Closure of the generators under composition.  Element 0 is the
    // identity; the rest follow in breadth-first discovery order, so the
    // numbering is deterministic.  max_order = 0 means "use the
    // FLASQUEKIT_MAX_GROUP_ORDER environment variable, default 64".
    static std::shared_ptr<const FiniteGroup> close_generators(int degree,
                                                               const std::vector<Permutation>& gens,
                                                               int max_order = 0);

    int degree() const { return degree_; }
    int order() const { return static_cast<int>(elements_.size()); }
    const Permutation& element(int i) const { return elements_[i]; }
    const std::vector<Permutation>& elements() const { return elements_; }
    // element index of each input generator, in input order (may repeat)
    const std::vector<int>& generator_indices() const { return gen_indices_; }

    int mul(int a, int b) const { return mult_[a][b]; }
    int inv(int a) const { return inv_[a]; }
    int identity() const { return 0; }

    int element_index(const Permutation& p) const;  // -1 when absent

private:
    int degree_ = 0;
    std::vector<Permutation> elements_;
    std::vector<std::vector<int>> mult_;
    std::vector<int> inv_;
    std::vector<int> gen_indices_;
};

using GroupPtr = std::shared_ptr<const FiniteGroup>;

// smallest subgroup mask containing the given element mask
std::uint64_t close_mask(const FiniteGroup& g, std::uint64_t m);

// All subgroups, by exhaustive closure of cyclic subgroups under pairwise
// joins.  Sorted by (order, lexicographic member list).
std::vector<Subgroup> all_subgroups(const FiniteGroup& g);

Subgroup trivial_subgroup(const FiniteGroup& g);
Subgroup full_subgroup(const FiniteGroup& g);

// throws NotASubgroup unless the members form a subgroup
Subgroup subgroup_from_members(const FiniteGroup& g, const std::vector<int>& members);

// Small generating set of h, found greedily over its member list.
std::vector<int> subgroup_generators(const FiniteGroup& g, const Subgroup& h);

// Left multiplication action on the left cosets g*H.  Cosets are ordered by
// their smallest member, each coset listed sorted.
struct CosetAction {
    std::vector<std::vector<int>> cosets;
    std::vector<Permutation> action;  // one permutation of coset indices per group element
};

CosetAction coset_action(const FiniteGroup& g, const Subgroup& h);

bool is_subgroup_of(const Subgroup& inner, const Subgroup& outer);

}  // namespace flk
