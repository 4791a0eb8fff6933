#pragma once

#include <cassert>
#include <initializer_list>
#include <optional>
#include <vector>

#include "flk/numeric.hpp"

namespace flk {

// Dense row-major integer matrix.  Vectors are columns throughout the
// library; a lattice of column vectors is spanned by the columns of its
// basis matrix.
template <class T>
struct Matrix {
    int rows = 0;
    int cols = 0;
    std::vector<T> a;

    Matrix() = default;
    Matrix(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c) {}
    Matrix(std::initializer_list<std::initializer_list<T>> init) {
        rows = static_cast<int>(init.size());
        cols = rows ? static_cast<int>(init.begin()->size()) : 0;
        a.reserve(static_cast<size_t>(rows) * cols);
        for (const auto& row : init) {
            assert(static_cast<int>(row.size()) == cols);
            for (const auto& x : row) a.push_back(x);
        }
    }

    T& operator()(int i, int j) { return a[static_cast<size_t>(i) * cols + j]; }
    const T& operator()(int i, int j) const { return a[static_cast<size_t>(i) * cols + j]; }

    static Matrix identity(int n) {
        Matrix m(n, n);
        for (int i = 0; i < n; ++i) m(i, i) = T(1);
        return m;
    }

    bool is_zero() const {
        for (const auto& x : a)
            if (!flk::is_zero(x)) return false;
        return true;
    }

    friend bool operator==(const Matrix& x, const Matrix& y) {
        return x.rows == y.rows && x.cols == y.cols && x.a == y.a;
    }
};

using Mat = Matrix<Int>;
using Mat64 = Matrix<i64>;

template <class T>
Matrix<T> mul_generic(const Matrix<T>& x, const Matrix<T>& y) {
    assert(x.cols == y.rows);
    Matrix<T> r(x.rows, y.cols);
    for (int i = 0; i < x.rows; ++i)
        for (int k = 0; k < x.cols; ++k) {
            const T& xv = x(i, k);
            if (flk::is_zero(xv)) continue;
            for (int j = 0; j < y.cols; ++j) {
                const T& yv = y(k, j);
                if (!flk::is_zero(yv)) r(i, j) += xv * yv;
            }
        }
    return r;
}

template <class T>
Matrix<T> add(const Matrix<T>& x, const Matrix<T>& y) {
    assert(x.rows == y.rows && x.cols == y.cols);
    Matrix<T> r(x.rows, x.cols);
    for (size_t i = 0; i < x.a.size(); ++i) r.a[i] = x.a[i] + y.a[i];
    return r;
}

template <class T>
Matrix<T> sub(const Matrix<T>& x, const Matrix<T>& y) {
    assert(x.rows == y.rows && x.cols == y.cols);
    Matrix<T> r(x.rows, x.cols);
    for (size_t i = 0; i < x.a.size(); ++i) r.a[i] = x.a[i] - y.a[i];
    return r;
}

template <class T>
Matrix<T> neg(const Matrix<T>& x) {
    Matrix<T> r(x.rows, x.cols);
    for (size_t i = 0; i < x.a.size(); ++i) r.a[i] = -x.a[i];
    return r;
}

template <class T>
Matrix<T> transpose(const Matrix<T>& x) {
    Matrix<T> r(x.cols, x.rows);
    for (int i = 0; i < x.rows; ++i)
        for (int j = 0; j < x.cols; ++j) r(j, i) = x(i, j);
    return r;
}

// columns of x followed by columns of y
template <class T>
Matrix<T> hstack(const Matrix<T>& x, const Matrix<T>& y) {
    assert(x.rows == y.rows);
    Matrix<T> r(x.rows, x.cols + y.cols);
    for (int i = 0; i < x.rows; ++i) {
        for (int j = 0; j < x.cols; ++j) r(i, j) = x(i, j);
        for (int j = 0; j < y.cols; ++j) r(i, x.cols + j) = y(i, j);
    }
    return r;
}

template <class T>
Matrix<T> vstack(const Matrix<T>& x, const Matrix<T>& y) {
    assert(x.cols == y.cols);
    Matrix<T> r(x.rows + y.rows, x.cols);
    for (int i = 0; i < x.rows; ++i)
        for (int j = 0; j < x.cols; ++j) r(i, j) = x(i, j);
    for (int i = 0; i < y.rows; ++i)
        for (int j = 0; j < x.cols; ++j) r(x.rows + i, j) = y(i, j);
    return r;
}

template <class T>
Matrix<T> block_diag(const Matrix<T>& x, const Matrix<T>& y) {
    Matrix<T> r(x.rows + y.rows, x.cols + y.cols);
    for (int i = 0; i < x.rows; ++i)
        for (int j = 0; j < x.cols; ++j) r(i, j) = x(i, j);
    for (int i = 0; i < y.rows; ++i)
        for (int j = 0; j < y.cols; ++j) r(x.rows + i, x.cols + j) = y(i, j);
    return r;
}

template <class T>
Matrix<T> columns(const Matrix<T>& x, int first, int count) {
    assert(first >= 0 && first + count <= x.cols);
    Matrix<T> r(x.rows, count);
    for (int i = 0; i < x.rows; ++i)
        for (int j = 0; j < count; ++j) r(i, j) = x(i, first + j);
    return r;
}

template <class T>
Matrix<T> rows_of(const Matrix<T>& x, int first, int count) {
    assert(first >= 0 && first + count <= x.rows);
    Matrix<T> r(count, x.cols);
    for (int i = 0; i < count; ++i)
        for (int j = 0; j < x.cols; ++j) r(i, j) = x(first + i, j);
    return r;
}

inline std::optional<Mat64> to_small(const Mat& x) {
    Mat64 r(x.rows, x.cols);
    for (size_t i = 0; i < x.a.size(); ++i) {
        if (!fits_i64(x.a[i])) return std::nullopt;
        r.a[i] = i64(x.a[i].convert_to<std::int64_t>());
    }
    return r;
}

inline Mat to_big(const Mat64& x) {
    Mat r(x.rows, x.cols);
    for (size_t i = 0; i < x.a.size(); ++i) r.a[i] = Int(x.a[i].v);
    return r;
}

// Multiplication with the int64 fast path.
inline Mat mul(const Mat& x, const Mat& y) {
    auto xs = to_small(x);
    auto ys = to_small(y);
    if (xs && ys) {
        try {
            return to_big(mul_generic(*xs, *ys));
        } catch (const overflow_signal&) {
        }
    }
    return mul_generic(x, y);
}

}  // namespace flk
