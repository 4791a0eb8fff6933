#include "flk/zforms.hpp"

#include <algorithm>

namespace flk {
namespace {

template <class T>
struct HnfScratch {
    Matrix<T> h, u;
    std::vector<int> pivot_rows;
    int rank = 0;
};

template <class T>
void negate_col(Matrix<T>& m, int j) {
    for (int i = 0; i < m.rows; ++i) m(i, j) = -m(i, j);
}

template <class T>
void swap_cols(Matrix<T>& m, int j, int k) {
    for (int i = 0; i < m.rows; ++i) std::swap(m(i, j), m(i, k));
}

// col_j -= q * col_k
template <class T>
void axpy_col(Matrix<T>& m, int j, int k, const T& q) {
    if (flk::is_zero(q)) return;
    for (int i = 0; i < m.rows; ++i) m(i, j) -= q * m(i, k);
}

template <class T>
HnfScratch<T> hnf_columns_t(const Matrix<T>& a) {
    HnfScratch<T> s;
    s.h = a;
    s.u = Matrix<T>::identity(a.cols);
    int r = 0;
    for (int i = 0; i < a.rows && r < a.cols; ++i) {
        // Euclidean elimination across columns r.. on row i
        for (;;) {
            int best = -1;
            for (int j = r; j < s.h.cols; ++j) {
                if (flk::is_zero(s.h(i, j))) continue;
                if (best < 0 || abs_less(s.h(i, j), s.h(i, best))) best = j;
            }
            if (best < 0) break;  // no pivot in this row
            if (best != r) {
                swap_cols(s.h, best, r);
                swap_cols(s.u, best, r);
            }
            bool clean = true;
            for (int j = r + 1; j < s.h.cols; ++j) {
                if (flk::is_zero(s.h(i, j))) continue;
                T q = balanced_quotient(s.h(i, j), s.h(i, r));
                axpy_col(s.h, j, r, q);
                axpy_col(s.u, j, r, q);
                if (!flk::is_zero(s.h(i, j))) clean = false;
            }
            if (clean) break;
        }
        if (flk::is_zero(s.h(i, r))) continue;
        if (is_neg(s.h(i, r))) {
            negate_col(s.h, r);
            negate_col(s.u, r);
        }
        // reduce earlier columns at the pivot row into [0, pivot)
        for (int j = 0; j < r; ++j) {
            T q = floor_quotient(s.h(i, j), s.h(i, r));
            axpy_col(s.h, j, r, q);
            axpy_col(s.u, j, r, q);
        }
        s.pivot_rows.push_back(i);
        ++r;
    }
    s.rank = r;
    return s;
}

HermiteResult hermite_from(const HnfScratch<Int>& s) {
    return HermiteResult{s.h, s.u, s.pivot_rows, s.rank};
}

HermiteResult hermite_from(const HnfScratch<i64>& s) {
    return HermiteResult{to_big(s.h), to_big(s.u), s.pivot_rows, s.rank};
}

// --- Smith form -----------------------------------------------------------

template <class T>
struct SmithScratch {
    Matrix<T> d, l, linv, r, rinv;
    bool with_transforms;

    void row_swap(int i, int j) {
        for (int c = 0; c < d.cols; ++c) std::swap(d(i, c), d(j, c));
        if (!with_transforms) return;
        for (int c = 0; c < l.cols; ++c) std::swap(l(i, c), l(j, c));
        for (int rr = 0; rr < linv.rows; ++rr) std::swap(linv(rr, i), linv(rr, j));
    }
    void col_swap(int i, int j) {
        for (int rr = 0; rr < d.rows; ++rr) std::swap(d(rr, i), d(rr, j));
        if (!with_transforms) return;
        for (int rr = 0; rr < r.rows; ++rr) std::swap(r(rr, i), r(rr, j));
        for (int c = 0; c < rinv.cols; ++c) std::swap(rinv(i, c), rinv(j, c));
    }
    // row_i -= q * row_j
    void row_axpy(int i, int j, const T& q) {
        if (flk::is_zero(q)) return;
        for (int c = 0; c < d.cols; ++c) d(i, c) -= q * d(j, c);
        if (!with_transforms) return;
        for (int c = 0; c < l.cols; ++c) l(i, c) -= q * l(j, c);
        for (int rr = 0; rr < linv.rows; ++rr) linv(rr, j) += q * linv(rr, i);
    }
    // col_i -= q * col_j
    void col_axpy(int i, int j, const T& q) {
        if (flk::is_zero(q)) return;
        for (int rr = 0; rr < d.rows; ++rr) d(rr, i) -= q * d(rr, j);
        if (!with_transforms) return;
        for (int rr = 0; rr < r.rows; ++rr) r(rr, i) -= q * r(rr, j);
        for (int c = 0; c < rinv.cols; ++c) rinv(j, c) += q * rinv(i, c);
    }
    void row_negate(int i) {
        for (int c = 0; c < d.cols; ++c) d(i, c) = -d(i, c);
        if (!with_transforms) return;
        for (int c = 0; c < l.cols; ++c) l(i, c) = -l(i, c);
        for (int rr = 0; rr < linv.rows; ++rr) linv(rr, i) = -linv(rr, i);
    }
};

template <class T>
SmithScratch<T> smith_t(const Matrix<T>& a, bool with_transforms) {
    SmithScratch<T> s{a,
                      Matrix<T>::identity(a.rows),
                      Matrix<T>::identity(a.rows),
                      Matrix<T>::identity(a.cols),
                      Matrix<T>::identity(a.cols),
                      with_transforms};
    int n = std::min(a.rows, a.cols);
    for (int t = 0; t < n; ++t) {
        // find the smallest nonzero entry in the remaining block
        int pi = -1, pj = -1;
        for (int i = t; i < s.d.rows; ++i)
            for (int j = t; j < s.d.cols; ++j) {
                if (flk::is_zero(s.d(i, j))) continue;
                if (pi < 0 || abs_less(s.d(i, j), s.d(pi, pj))) {
                    pi = i;
                    pj = j;
                }
            }
        if (pi < 0) break;
        s.row_swap(t, pi);
        s.col_swap(t, pj);
        for (;;) {
            bool again = false;
            for (int i = t + 1; i < s.d.rows; ++i) {
                T q = balanced_quotient(s.d(i, t), s.d(t, t));
                s.row_axpy(i, t, q);
                if (!flk::is_zero(s.d(i, t))) again = true;
            }
            for (int j = t + 1; j < s.d.cols; ++j) {
                T q = balanced_quotient(s.d(t, j), s.d(t, t));
                s.col_axpy(j, t, q);
                if (!flk::is_zero(s.d(t, j))) again = true;
            }
            if (!again) break;
            // a smaller remainder appeared off the pivot; bring it in
            int bi = t, bj = t;
            for (int i = t; i < s.d.rows; ++i)
                for (int j = t; j < s.d.cols; ++j) {
                    if (flk::is_zero(s.d(i, j))) continue;
                    if (abs_less(s.d(i, j), s.d(bi, bj))) {
                        bi = i;
                        bj = j;
                    }
                }
            s.row_swap(t, bi);
            s.col_swap(t, bj);
        }
        if (is_neg(s.d(t, t))) s.row_negate(t);
    }
    // enforce the divisibility chain d_t | d_{t+1}
    for (;;) {
        bool fixed = true;
        for (int t = 0; t + 1 < n; ++t) {
            if (flk::is_zero(s.d(t + 1, t + 1)) || flk::is_zero(s.d(t, t))) continue;
            if (flk::is_zero(s.d(t + 1, t + 1) % s.d(t, t))) continue;
            fixed = false;
            // fold d_{t+1} into column t and re-reduce the 2x2 block
            s.col_axpy(t, t + 1, T(-1));  // col_t += col_{t+1}
            for (;;) {
                T q = balanced_quotient(s.d(t + 1, t), s.d(t, t));
                s.row_axpy(t + 1, t, q);
                if (flk::is_zero(s.d(t + 1, t))) break;
                s.row_swap(t, t + 1);
            }
            // gcd(a,b) divides the leftover entry, so this clears it exactly
            T q2 = balanced_quotient(s.d(t, t + 1), s.d(t, t));
            s.col_axpy(t + 1, t, q2);
            if (is_neg(s.d(t, t))) s.row_negate(t);
            if (is_neg(s.d(t + 1, t + 1))) s.row_negate(t + 1);
        }
        if (fixed) break;
    }
    return s;
}

SmithResult smith_from(SmithScratch<Int>&& s) {
    SmithResult out;
    int n = std::min(s.d.rows, s.d.cols);
    out.diag.reserve(n);
    for (int t = 0; t < n; ++t) {
        out.diag.push_back(s.d(t, t));
        if (!s.d(t, t).is_zero()) out.rank = t + 1;
    }
    out.l = std::move(s.l);
    out.linv = std::move(s.linv);
    out.r = std::move(s.r);
    out.rinv = std::move(s.rinv);
    return out;
}

SmithResult smith_from(SmithScratch<i64>&& s) {
    SmithResult out;
    int n = std::min(s.d.rows, s.d.cols);
    out.diag.reserve(n);
    for (int t = 0; t < n; ++t) {
        out.diag.push_back(Int(s.d(t, t).v));
        if (s.d(t, t).v != 0) out.rank = t + 1;
    }
    out.l = to_big(s.l);
    out.linv = to_big(s.linv);
    out.r = to_big(s.r);
    out.rinv = to_big(s.rinv);
    return out;
}

}  // namespace

HermiteResult hermite_columns(const Mat& a) {
    if (auto small = to_small(a)) {
        try {
            return hermite_from(hnf_columns_t(*small));
        } catch (const overflow_signal&) {
        }
    }
    return hermite_from(hnf_columns_t(a));
}

Mat column_span_basis(const Mat& a) {
    HermiteResult hr = hermite_columns(a);
    return columns(hr.h, 0, hr.rank);
}

Mat kernel_columns(const Mat& a) {
    HermiteResult hr = hermite_columns(a);
    Mat basis = columns(hr.u, hr.rank, a.cols - hr.rank);
    // canonicalize
    return column_span_basis(basis);
}

int rank_of(const Mat& a) { return hermite_columns(a).rank; }

SmithResult smith(const Mat& a, bool with_transforms) {
    if (auto small = to_small(a)) {
        try {
            return smith_from(smith_t(*small, with_transforms));
        } catch (const overflow_signal&) {
        }
    }
    return smith_from(smith_t(a, with_transforms));
}

std::vector<Int> invariant_factors(const Mat& a) {
    SmithResult s = smith(a, false);
    std::vector<Int> out;
    for (const Int& d : s.diag)
        if (!d.is_zero() && d != 1) out.push_back(d);
    return out;
}

std::optional<Mat> solve_columns(const Mat& a, const Mat& b) {
    if (a.rows != b.rows) return std::nullopt;
    HermiteResult hr = hermite_columns(a);
    Mat y(a.cols, b.cols);
    Mat residual = b;
    for (int c = 0; c < b.cols; ++c) {
        for (int j = 0; j < hr.rank; ++j) {
            int p = hr.pivot_rows[j];
            const Int& piv = hr.h(p, j);
            Int t = residual(p, c) / piv;
            if (residual(p, c) != t * piv) return std::nullopt;
            if (!t.is_zero()) {
                for (int i = 0; i < a.rows; ++i) residual(i, c) -= t * hr.h(i, j);
                y(j, c) = t;
            }
        }
        for (int i = 0; i < a.rows; ++i)
            if (!residual(i, c).is_zero()) return std::nullopt;
    }
    return mul(hr.u, y);
}

bool same_column_span(const Mat& a, const Mat& b) {
    return column_span_basis(a) == column_span_basis(b);
}

Mat saturate_columns(const Mat& a) {
    SmithResult s = smith(a, true);
    // a = linv * d * rinv, so the rational span is spanned over Z by the
    // first `rank` columns of linv.
    return column_span_basis(columns(s.linv, 0, s.rank));
}

Int determinant(const Mat& a) {
    assert(a.rows == a.cols);
    int n = a.rows;
    if (n == 0) return Int(1);
    Mat m = a;
    Int sign(1), prev(1);
    for (int k = 0; k < n - 1; ++k) {
        if (m(k, k).is_zero()) {
            int swap_row = -1;
            for (int i = k + 1; i < n; ++i)
                if (!m(i, k).is_zero()) {
                    swap_row = i;
                    break;
                }
            if (swap_row < 0) return Int(0);
            for (int j = 0; j < n; ++j) std::swap(m(k, j), m(swap_row, j));
            sign = -sign;
        }
        for (int i = k + 1; i < n; ++i)
            for (int j = k + 1; j < n; ++j)
                m(i, j) = (m(i, j) * m(k, k) - m(i, k) * m(k, j)) / prev;
        prev = m(k, k);
    }
    return sign * m(n - 1, n - 1);
}

bool is_unimodular(const Mat& a) {
    if (a.rows != a.cols) return false;
    Int d = determinant(a);
    return d == 1 || d == -1;
}

}  // namespace flk
