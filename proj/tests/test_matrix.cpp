#include "doctest.h"

#include "munn/matrix.hpp"
#include "munn/rng.hpp"

#include "helpers.hpp"

#include <algorithm>

using namespace munn;
using testutil::thrown_code;

namespace {

Matrix from_ints(const ScalarDomain& d, int rows, int cols,
                 std::initializer_list<long> vals) {
    Matrix m(d, rows, cols);
    auto it = vals.begin();
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j)
            m.set(i, j, Scalar::from_int(d, *it++));
    return m;
}

} // namespace

TEST_CASE("construction and basic arithmetic") {
    ScalarDomain d = ScalarDomain::gf(5);
    Matrix m = from_ints(d, 2, 2, {1, 2, 3, 4});
    CHECK(Matrix::identity(d, 2) * m == m);
    CHECK(m * Matrix::identity(d, 2) == m);
    CHECK(m + Matrix::zero(d, 2, 2) == m);
    CHECK(m - m == Matrix::zero(d, 2, 2));
    CHECK((-m) + m == Matrix::zero(d, 2, 2));
    CHECK(m.at(1, 0).residue() == 3);

    ScalarDomain q = ScalarDomain::rationals();
    Matrix swap2 = from_ints(q, 2, 2, {0, 1, 1, 0});
    Matrix a = from_ints(q, 2, 2, {1, 2, 3, 4});
    CHECK(swap2 * a == from_ints(q, 2, 2, {3, 4, 1, 2}));

    ScalarDomain h = ScalarDomain::quaternions();
    Matrix mi(h, 1, 1), mj(h, 1, 1);
    mi.set(0, 0, Scalar::parse(h, "i"));
    mj.set(0, 0, Scalar::parse(h, "j"));
    CHECK((mi * mj).at(0, 0) == Scalar::parse(h, "k"));
    CHECK((mj * mi).at(0, 0) == Scalar::parse(h, "-k"));

    CHECK(thrown_code([&] { from_ints(d, 2, 2, {1, 0, 0, 1}) * Matrix::zero(d, 3, 2); }) ==
          errc::shape_mismatch);
    CHECK(thrown_code([&] { m + Matrix::zero(q, 2, 2); }) == errc::domain_mismatch);
    CHECK(thrown_code([&] { Matrix::zero(d, 2, 3).trace(); }) == errc::shape_mismatch);
    CHECK(thrown_code([&] { m.at(2, 0); }) == errc::index_out_of_range);
}

TEST_CASE("rank oracle values") {
    ScalarDomain d = ScalarDomain::gf(5);
    CHECK(Matrix::e_r(d, 3, 3, 2).row_rank() == 2);
    CHECK(Matrix::zero(d, 3, 4).row_rank() == 0);
    CHECK(Matrix::identity(d, 4).row_rank() == 4);

    ScalarDomain q = ScalarDomain::rationals();
    CHECK(from_ints(q, 2, 2, {1, 2, 2, 4}).row_rank() == 1);

    ScalarDomain h = ScalarDomain::quaternions();
    Matrix mh(h, 2, 2);
    mh.set(0, 0, Scalar::parse(h, "i"));
    mh.set(0, 1, Scalar::parse(h, "j"));
    mh.set(1, 0, Scalar::parse(h, "j"));
    mh.set(1, 1, Scalar::parse(h, "-i"));
    // row2 = k * row1 over the left row space, so the rank is 1.
    CHECK(mh.row_rank() == 1);
}

TEST_CASE("inversion oracle values") {
    ScalarDomain d = ScalarDomain::gf(5);
    auto inv = Matrix::identity(d, 3).invert();
    REQUIRE(inv.has_value());
    CHECK(*inv == Matrix::identity(d, 3));

    Matrix u = from_ints(d, 2, 2, {1, 1, 0, 1});
    auto uinv = u.invert();
    REQUIRE(uinv.has_value());
    CHECK(*uinv == from_ints(d, 2, 2, {1, 4, 0, 1}));
    CHECK(u * *uinv == Matrix::identity(d, 2));

    ScalarDomain q = ScalarDomain::rationals();
    CHECK(!from_ints(q, 2, 2, {1, 2, 2, 4}).invert().has_value());
}

TEST_CASE("equivalence normalization oracle values") {
    ScalarDomain d = ScalarDomain::gf(5);

    Matrix p1 = Matrix::e_r(d, 3, 3, 2);
    auto eq1 = p1.equivalence_normalize();
    CHECK(eq1.r == 2);
    CHECK(eq1.V * p1 * eq1.W == Matrix::e_r(d, 3, 3, 2));

    Matrix p2 = from_ints(d, 2, 2, {0, 1, 1, 0});
    auto eq2 = p2.equivalence_normalize();
    CHECK(eq2.r == 2);
    CHECK(eq2.V * p2 * eq2.W == Matrix::e_r(d, 2, 2, 2));

    ScalarDomain q = ScalarDomain::rationals();
    Matrix p3 = from_ints(q, 2, 2, {1, 2, 2, 4});
    auto eq3 = p3.equivalence_normalize();
    CHECK(eq3.r == 1);
    CHECK(eq3.V * p3 * eq3.W == Matrix::e_r(q, 2, 2, 1));

    Matrix p4 = Matrix::e_r(d, 3, 2, 2); // non-square
    auto eq4 = p4.equivalence_normalize();
    CHECK(eq4.r == 2);
    CHECK(eq4.V.rows() == 3);
    CHECK(eq4.W.rows() == 2);
    CHECK(eq4.V * p4 * eq4.W == Matrix::e_r(d, 3, 2, 2));
}

TEST_CASE("equivalence normalization random property") {
    Rng rng(101);
    for (const ScalarDomain& d :
         {ScalarDomain::gf(5), ScalarDomain::gf(7), ScalarDomain::rationals()}) {
        for (int t = 0; t < 60; ++t) {
            int rows = (int)rng.range(1, 6), cols = (int)rng.range(1, 6);
            Matrix p = rng.matrix(d, rows, cols, 4);
            auto eq = p.equivalence_normalize();
            CHECK(eq.r == p.row_rank());
            CHECK(eq.V * p * eq.W == Matrix::e_r(d, rows, cols, eq.r));
            REQUIRE(eq.V.invert().has_value());
            REQUIRE(eq.W.invert().has_value());
        }
    }
}

TEST_CASE("rank behaves under products and invertible transforms") {
    Rng rng(211);
    for (const ScalarDomain& d : {ScalarDomain::gf(5), ScalarDomain::rationals()}) {
        for (int t = 0; t < 60; ++t) {
            int m = (int)rng.range(1, 4), n = (int)rng.range(1, 4),
                k = (int)rng.range(1, 4);
            Matrix a = rng.matrix(d, m, n, 3), b = rng.matrix(d, n, k, 3);
            CHECK((a * b).row_rank() <= std::min(a.row_rank(), b.row_rank()));
            Matrix u = rng.invertible_matrix(d, m), v = rng.invertible_matrix(d, n);
            CHECK((u * a * v).row_rank() == a.row_rank());
        }
    }
}

TEST_CASE("solve and kernel") {
    ScalarDomain q = ScalarDomain::rationals();
    Matrix a = from_ints(q, 2, 2, {1, 2, 2, 4});

    Matrix b1 = from_ints(q, 2, 1, {1, 2});
    auto x1 = a.solve(b1);
    REQUIRE(x1.has_value());
    CHECK(a * *x1 == b1);
    CHECK(*x1 == from_ints(q, 2, 1, {1, 0})); // free variable pinned to zero

    Matrix b2 = from_ints(q, 2, 1, {1, 3});
    CHECK(!a.solve(b2).has_value());

    Matrix k = a.kernel();
    CHECK(k.cols() == 1);
    CHECK((a * k).is_zero());

    // Random consistency: A * solve(A, A*x) == A*x, and A * kernel(A) == 0.
    Rng rng(307);
    for (const ScalarDomain& d : {ScalarDomain::gf(7), ScalarDomain::rationals()}) {
        for (int t = 0; t < 50; ++t) {
            int m = (int)rng.range(1, 5), n = (int)rng.range(1, 5);
            Matrix mat = rng.matrix(d, m, n, 3);
            Matrix x = rng.matrix(d, n, 1, 3);
            Matrix rhs = mat * x;
            auto sol = mat.solve(rhs);
            REQUIRE(sol.has_value());
            CHECK(mat * *sol == rhs);
            Matrix ker = mat.kernel();
            CHECK(ker.cols() == mat.cols() - mat.row_rank());
            if (ker.cols() > 0) CHECK((mat * ker).is_zero());
        }
    }
}

TEST_CASE("conjugate transpose is an anti-homomorphism") {
    ScalarDomain h = ScalarDomain::quaternions();
    Rng rng(401);
    for (int t = 0; t < 50; ++t) {
        Matrix a = rng.matrix(h, 2, 3, 3), b = rng.matrix(h, 3, 2, 3);
        CHECK((a * b).conj_transpose() == b.conj_transpose() * a.conj_transpose());
        CHECK(a.conj_transpose().conj_transpose() == a);
    }
    ScalarDomain q = ScalarDomain::rationals();
    Matrix m(q, 2, 3);
    m.set(0, 1, Scalar::from_int(q, 3));
    CHECK(m.conj_transpose().at(1, 0) == Scalar::from_int(q, 3));
    CHECK(m.conj_transpose().rows() == 3);
}

TEST_CASE("trace and scaling") {
    ScalarDomain d = ScalarDomain::gf(7);
    Matrix m = from_ints(d, 2, 2, {1, 2, 3, 4});
    CHECK(m.trace() == Scalar::from_int(d, 5));
    Scalar c = Scalar::from_int(d, 3);
    CHECK(m.scale_left(c) == from_ints(d, 2, 2, {3, 6, 2, 5}));
    CHECK(m.scale_left(c) == m.scale_right(c)); // commutative domain

    ScalarDomain h = ScalarDomain::quaternions();
    Matrix mj(h, 1, 1);
    mj.set(0, 0, Scalar::parse(h, "j"));
    Scalar i = Scalar::parse(h, "i");
    CHECK(mj.scale_left(i).at(0, 0) == Scalar::parse(h, "k"));
    CHECK(mj.scale_right(i).at(0, 0) == Scalar::parse(h, "-k"));
}
