#ifndef MUNN_MATRIX_HPP
#define MUNN_MATRIX_HPP

#include <optional>
#include <vector>

#include "munn/scalar.hpp"

namespace munn {

struct Equivalence;

// Dense exact matrix over GF(p), Q, or H(Q). Indices are 0-based here;
// the Munn layer exposes 1-based unit coordinates. Supported envelope is
// 64x64. All elimination uses left row operations only (row scale by the
// pivot's left inverse, row add with left coefficient), which stays valid
// over the noncommutative quaternions; column operations multiply on the
// right. Row rank equals column rank over division rings, so row_rank is
// the rank.
class Matrix {
public:
    Matrix(const ScalarDomain& d, int rows, int cols);

    static Matrix zero(const ScalarDomain& d, int rows, int cols) {
        return Matrix(d, rows, cols);
    }
    static Matrix identity(const ScalarDomain& d, int n);
    // E_r pattern: 1 at (t,t) for t < r, else 0.
    static Matrix e_r(const ScalarDomain& d, int rows, int cols, int r);

    const ScalarDomain& domain() const { return dom_; }
    int rows() const { return rows_; }
    int cols() const { return cols_; }

    const Scalar& at(int i, int j) const;
    void set(int i, int j, const Scalar& v);

    Matrix operator+(const Matrix& o) const;
    Matrix operator-(const Matrix& o) const;
    Matrix operator-() const;
    Matrix operator*(const Matrix& o) const;
    bool operator==(const Matrix& o) const;
    bool operator!=(const Matrix& o) const { return !(*this == o); }

    bool is_zero() const;

    // Left scalar action c*M; right action M*c matters over H(Q).
    Matrix scale_left(const Scalar& c) const;
    Matrix scale_right(const Scalar& c) const;

    // Entrywise conjugate of the transpose; plain transpose over fields.
    Matrix conj_transpose() const;

    Scalar trace() const;

    int row_rank() const;

    // Two-sided inverse, nullopt when singular (shape errors throw).
    std::optional<Matrix> invert() const;

    // V * this * W == E_r with V rows x rows, W cols x cols, both invertible.
    // Deterministic pivoting: leftmost column with a nonzero entry on or
    // below the working row, lowest row index first.
    Equivalence equivalence_normalize() const;

    // Particular solution X of this * X = B (left-coefficient system), or
    // nullopt when inconsistent. Free variables are set to zero.
    std::optional<Matrix> solve(const Matrix& B) const;

    // Basis of the right-module {x : this * x = 0}, one column per basis
    // vector (cols x nullity).
    Matrix kernel() const;

    // Copy a block of src into this at (i0, j0).
    void paste(const Matrix& src, int i0, int j0);
    Matrix block(int i0, int j0, int nrows, int ncols) const;

private:
    void check_same_shape(const Matrix& o) const;
    ScalarDomain dom_;
    int rows_, cols_;
    std::vector<Scalar> e_;
};

struct Equivalence {
    Matrix V, W;
    int r;
};

} // namespace munn

#endif
