#include "munn/matrix.hpp"

namespace munn {

Matrix::Matrix(const ScalarDomain& d, int rows, int cols)
    : dom_(d), rows_(rows), cols_(cols) {
    if (rows < 0 || cols < 0 || (long long)rows * cols > (1 << 24))
        fail(errc::shape_mismatch, "bad matrix shape");
    e_.assign((std::size_t)rows * cols, Scalar::zero(d));
}

Matrix Matrix::identity(const ScalarDomain& d, int n) {
    Matrix m(d, n, n);
    for (int i = 0; i < n; ++i) m.set(i, i, Scalar::one(d));
    return m;
}

Matrix Matrix::e_r(const ScalarDomain& d, int rows, int cols, int r) {
    if (r < 0 || r > rows || r > cols) fail(errc::shape_mismatch, "bad E_r rank");
    Matrix m(d, rows, cols);
    for (int t = 0; t < r; ++t) m.set(t, t, Scalar::one(d));
    return m;
}

const Scalar& Matrix::at(int i, int j) const {
    if (i < 0 || i >= rows_ || j < 0 || j >= cols_)
        fail(errc::index_out_of_range, "matrix index out of range");
    return e_[(std::size_t)i * cols_ + j];
}

void Matrix::set(int i, int j, const Scalar& v) {
    if (i < 0 || i >= rows_ || j < 0 || j >= cols_)
        fail(errc::index_out_of_range, "matrix index out of range");
    if (v.domain() != dom_) fail(errc::domain_mismatch, "entry domain differs");
    e_[(std::size_t)i * cols_ + j] = v;
}

void Matrix::check_same_shape(const Matrix& o) const {
    if (dom_ != o.dom_) fail(errc::domain_mismatch, "matrix domains differ");
    if (rows_ != o.rows_ || cols_ != o.cols_)
        fail(errc::shape_mismatch, "matrix shapes differ");
}

Matrix Matrix::operator+(const Matrix& o) const {
    check_same_shape(o);
    Matrix r(dom_, rows_, cols_);
    for (std::size_t t = 0; t < e_.size(); ++t) r.e_[t] = e_[t] + o.e_[t];
    return r;
}

Matrix Matrix::operator-(const Matrix& o) const {
    check_same_shape(o);
    Matrix r(dom_, rows_, cols_);
    for (std::size_t t = 0; t < e_.size(); ++t) r.e_[t] = e_[t] - o.e_[t];
    return r;
}

Matrix Matrix::operator-() const {
    Matrix r(dom_, rows_, cols_);
    for (std::size_t t = 0; t < e_.size(); ++t) r.e_[t] = -e_[t];
    return r;
}

Matrix Matrix::operator*(const Matrix& o) const {
    if (dom_ != o.dom_) fail(errc::domain_mismatch, "matrix domains differ");
    if (cols_ != o.rows_) fail(errc::shape_mismatch, "inner dimensions differ");
    Matrix r(dom_, rows_, o.cols_);
    for (int i = 0; i < rows_; ++i)
        for (int k = 0; k < cols_; ++k) {
            const Scalar& a = at(i, k);
            if (a.is_zero()) continue;
            for (int j = 0; j < o.cols_; ++j) {
                const Scalar& b = o.at(k, j);
                if (b.is_zero()) continue;
                r.set(i, j, r.at(i, j) + a * b);
            }
        }
    return r;
}

bool Matrix::operator==(const Matrix& o) const {
    if (dom_ != o.dom_ || rows_ != o.rows_ || cols_ != o.cols_) return false;
    for (std::size_t t = 0; t < e_.size(); ++t)
        if (e_[t] != o.e_[t]) return false;
    return true;
}

bool Matrix::is_zero() const {
    for (const auto& x : e_)
        if (!x.is_zero()) return false;
    return true;
}

Matrix Matrix::scale_left(const Scalar& c) const {
    if (c.domain() != dom_) fail(errc::domain_mismatch, "scalar domain differs");
    Matrix r(dom_, rows_, cols_);
    for (std::size_t t = 0; t < e_.size(); ++t) r.e_[t] = c * e_[t];
    return r;
}

Matrix Matrix::scale_right(const Scalar& c) const {
    if (c.domain() != dom_) fail(errc::domain_mismatch, "scalar domain differs");
    Matrix r(dom_, rows_, cols_);
    for (std::size_t t = 0; t < e_.size(); ++t) r.e_[t] = e_[t] * c;
    return r;
}

Matrix Matrix::conj_transpose() const {
    Matrix r(dom_, cols_, rows_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) r.set(j, i, at(i, j).conj());
    return r;
}

Scalar Matrix::trace() const {
    if (rows_ != cols_) fail(errc::shape_mismatch, "trace of non-square matrix");
    Scalar t = Scalar::zero(dom_);
    for (int i = 0; i < rows_; ++i) t = t + at(i, i);
    return t;
}

namespace {

// Reduced row echelon form by left row operations, mirrored onto aug when
// present. Returns the pivot columns in order.
std::vector<int> rref(Matrix& A, Matrix* aug) {
    std::vector<int> pivots;
    int r = 0;
    for (int c = 0; c < A.cols() && r < A.rows(); ++c) {
        int piv = -1;
        for (int i = r; i < A.rows(); ++i)
            if (!A.at(i, c).is_zero()) { piv = i; break; }
        if (piv < 0) continue;
        if (piv != r) {
            for (int j = 0; j < A.cols(); ++j) {
                Scalar tmp = A.at(r, j);
                A.set(r, j, A.at(piv, j));
                A.set(piv, j, tmp);
            }
            if (aug)
                for (int j = 0; j < aug->cols(); ++j) {
                    Scalar tmp = aug->at(r, j);
                    aug->set(r, j, aug->at(piv, j));
                    aug->set(piv, j, tmp);
                }
        }
        Scalar inv = A.at(r, c).inverse();
        for (int j = 0; j < A.cols(); ++j) A.set(r, j, inv * A.at(r, j));
        if (aug)
            for (int j = 0; j < aug->cols(); ++j) aug->set(r, j, inv * aug->at(r, j));
        for (int i = 0; i < A.rows(); ++i) {
            if (i == r) continue;
            Scalar f = A.at(i, c);
            if (f.is_zero()) continue;
            for (int j = 0; j < A.cols(); ++j)
                A.set(i, j, A.at(i, j) - f * A.at(r, j));
            if (aug)
                for (int j = 0; j < aug->cols(); ++j)
                    aug->set(i, j, aug->at(i, j) - f * aug->at(r, j));
        }
        pivots.push_back(c);
        ++r;
    }
    return pivots;
}

} // namespace

int Matrix::row_rank() const {
    Matrix A = *this;
    return (int)rref(A, nullptr).size();
}

std::optional<Matrix> Matrix::invert() const {
    if (rows_ != cols_) fail(errc::shape_mismatch, "inverse of non-square matrix");
    Matrix A = *this;
    Matrix aug = identity(dom_, rows_);
    auto pivots = rref(A, &aug);
    if ((int)pivots.size() != rows_) return std::nullopt;
    // Full pivot set on a square matrix means A reduced to I and aug holds a
    // left inverse, which is two-sided over a division ring.
    return aug;
}

Equivalence Matrix::equivalence_normalize() const {
    Matrix A = *this;
    Matrix V = identity(dom_, rows_);
    Matrix W = identity(dom_, cols_);
    int r = 0;
    while (r < rows_ && r < cols_) {
        int pr = -1, pc = -1;
        for (int c = r; c < cols_ && pc < 0; ++c)
            for (int i = r; i < rows_; ++i)
                if (!A.at(i, c).is_zero()) { pr = i; pc = c; break; }
        if (pc < 0) break;
        if (pr != r) {
            for (int j = 0; j < cols_; ++j) {
                Scalar tmp = A.at(r, j); A.set(r, j, A.at(pr, j)); A.set(pr, j, tmp);
            }
            for (int j = 0; j < rows_; ++j) {
                Scalar tmp = V.at(r, j); V.set(r, j, V.at(pr, j)); V.set(pr, j, tmp);
            }
        }
        Scalar inv = A.at(r, pc).inverse();
        for (int j = 0; j < cols_; ++j) A.set(r, j, inv * A.at(r, j));
        for (int j = 0; j < rows_; ++j) V.set(r, j, inv * V.at(r, j));
        for (int i = 0; i < rows_; ++i) {
            if (i == r) continue;
            Scalar f = A.at(i, pc);
            if (f.is_zero()) continue;
            for (int j = 0; j < cols_; ++j) A.set(i, j, A.at(i, j) - f * A.at(r, j));
            for (int j = 0; j < rows_; ++j) V.set(i, j, V.at(i, j) - f * V.at(r, j));
        }
        if (pc != r) {
            for (int i = 0; i < rows_; ++i) {
                Scalar tmp = A.at(i, r); A.set(i, r, A.at(i, pc)); A.set(i, pc, tmp);
            }
            for (int i = 0; i < cols_; ++i) {
                Scalar tmp = W.at(i, r); W.set(i, r, W.at(i, pc)); W.set(i, pc, tmp);
            }
        }
        for (int j = r + 1; j < cols_; ++j) {
            Scalar x = A.at(r, j);
            if (x.is_zero()) continue;
            for (int i = 0; i < rows_; ++i)
                A.set(i, j, A.at(i, j) - A.at(i, r) * x);
            for (int i = 0; i < cols_; ++i)
                W.set(i, j, W.at(i, j) - W.at(i, r) * x);
        }
        ++r;
    }
    return Equivalence{V, W, r};
}

std::optional<Matrix> Matrix::solve(const Matrix& B) const {
    if (dom_ != B.dom_) fail(errc::domain_mismatch, "matrix domains differ");
    if (rows_ != B.rows_) fail(errc::shape_mismatch, "solve shapes differ");
    Matrix A = *this;
    Matrix aug = B;
    auto pivots = rref(A, &aug);
    for (int i = (int)pivots.size(); i < rows_; ++i)
        for (int j = 0; j < aug.cols(); ++j)
            if (!aug.at(i, j).is_zero()) return std::nullopt;
    Matrix X(dom_, cols_, B.cols_);
    for (int t = 0; t < (int)pivots.size(); ++t)
        for (int j = 0; j < aug.cols(); ++j) X.set(pivots[t], j, aug.at(t, j));
    return X;
}

Matrix Matrix::kernel() const {
    Matrix A = *this;
    auto pivots = rref(A, nullptr);
    std::vector<bool> is_pivot(cols_, false);
    for (int c : pivots) is_pivot[c] = true;
    int nullity = cols_ - (int)pivots.size();
    Matrix K(dom_, cols_, nullity);
    int b = 0;
    for (int f = 0; f < cols_; ++f) {
        if (is_pivot[f]) continue;
        K.set(f, b, Scalar::one(dom_));
        for (int t = 0; t < (int)pivots.size(); ++t)
            K.set(pivots[t], b, -A.at(t, f));
        ++b;
    }
    return K;
}

void Matrix::paste(const Matrix& src, int i0, int j0) {
    if (src.dom_ != dom_) fail(errc::domain_mismatch, "matrix domains differ");
    if (i0 < 0 || j0 < 0 || i0 + src.rows_ > rows_ || j0 + src.cols_ > cols_)
        fail(errc::shape_mismatch, "paste block out of range");
    for (int i = 0; i < src.rows_; ++i)
        for (int j = 0; j < src.cols_; ++j) set(i0 + i, j0 + j, src.at(i, j));
}

Matrix Matrix::block(int i0, int j0, int nrows, int ncols) const {
    if (i0 < 0 || j0 < 0 || i0 + nrows > rows_ || j0 + ncols > cols_)
        fail(errc::shape_mismatch, "block out of range");
    Matrix r(dom_, nrows, ncols);
    for (int i = 0; i < nrows; ++i)
        for (int j = 0; j < ncols; ++j) r.set(i, j, at(i0 + i, j0 + j));
    return r;
}

} // namespace munn
