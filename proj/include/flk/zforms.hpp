#pragma once

#include <optional>
#include <vector>

#include "flk/matrix.hpp"

namespace flk {

// Column-style Hermite normal form:  a * u = h  with u unimodular, h in
// lower staircase form.  Column j of h has its pivot (positive) in row
// pivot_rows[j]; entries above each pivot vanish and entries at earlier
// pivot rows are reduced into [0, pivot).  Columns from `rank` on are zero.
struct HermiteResult {
    Mat h;
    Mat u;
    std::vector<int> pivot_rows;
    int rank = 0;
};

HermiteResult hermite_columns(const Mat& a);

// Canonical basis of the column span: Hermite form with zero columns
// dropped.  Equal spans give equal matrices.
Mat column_span_basis(const Mat& a);

// Saturated basis of { x : a x = 0 }, canonicalized.
Mat kernel_columns(const Mat& a);

int rank_of(const Mat& a);

// Smith normal form:  l * a * r = diag(d), with d_1 | d_2 | ... >= 0.
// linv and rinv are the inverses of l and r (maintained during reduction,
// not recomputed).
struct SmithResult {
    std::vector<Int> diag;  // length min(rows, cols)
    Mat l, linv, r, rinv;
    int rank = 0;
};

SmithResult smith(const Mat& a, bool with_transforms = true);

// Nonunit diagonal of the Smith form (the invariant factor list of the
// cokernel's torsion part).
std::vector<Int> invariant_factors(const Mat& a);

// Integer solution x of a x = b for every column of b, if one exists.
std::optional<Mat> solve_columns(const Mat& a, const Mat& b);

inline bool in_column_span(const Mat& a, const Mat& b) {
    return solve_columns(a, b).has_value();
}

bool same_column_span(const Mat& a, const Mat& b);

// Basis of the saturation: the largest sublattice of the ambient space with
// the same rational span as the columns of a.
Mat saturate_columns(const Mat& a);

// Exact determinant (Bareiss fraction-free elimination).
Int determinant(const Mat& a);

bool is_unimodular(const Mat& a);

}  // namespace flk
