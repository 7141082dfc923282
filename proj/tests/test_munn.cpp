#include "doctest.h"

#include "munn/context.hpp"
#include "munn/rng.hpp"

#include "helpers.hpp"

using namespace munn;
using testutil::canon;
using testutil::thrown_code;

TEST_CASE("context construction") {
    ScalarDomain d5 = ScalarDomain::gf(5);
    ContextPtr c1 = make_context(d5, 2, 2, Matrix::identity(d5, 2));
    CHECK(c1->r() == 2);
    CHECK(c1->is_canonical());

    ScalarDomain q = ScalarDomain::rationals();
    Matrix p(q, 3, 2);
    p.set(0, 0, Scalar::one(q));
    p.set(1, 1, Scalar::one(q));
    ContextPtr c2 = make_context(q, 2, 3, p);
    CHECK(c2->r() == 2);
    CHECK(c2->m() == 2);
    CHECK(c2->n() == 3);

    ScalarDomain d7 = ScalarDomain::gf(7);
    ContextPtr c3 = make_context(d7, 3, 3, Matrix::zero(d7, 3, 3));
    CHECK(c3->r() == 0);

    CHECK(thrown_code([&] { make_context(d5, 1, 2, Matrix::zero(d5, 2, 1)); }) ==
          errc::context_too_small);
    CHECK(thrown_code([&] { make_context(d5, 2, 65, Matrix::zero(d5, 65, 2)); }) ==
          errc::context_too_small);
    CHECK(thrown_code([&] { make_context(d5, 2, 3, Matrix::zero(d5, 2, 3)); }) ==
          errc::shape_mismatch);

    // Canonicalization data is consistent on a non-canonical context.
    Matrix pswap(d5, 2, 2);
    pswap.set(0, 1, Scalar::one(d5));
    pswap.set(1, 0, Scalar::one(d5));
    ContextPtr c4 = make_context(d5, 2, 2, pswap);
    CHECK(!c4->is_canonical());
    CHECK(c4->V() * c4->P() * c4->W() == Matrix::e_r(d5, 2, 2, c4->r()));
    CHECK(c4->canonical()->is_canonical());
    CHECK(c1->canonical() == c1);
}

TEST_CASE("unit elements") {
    ContextPtr c = canon(ScalarDomain::gf(5), 2, 3, 2);
    MunnElement u = unit_element(c, 3, 1, 2);
    CHECK(u.mat().at(0, 1).residue() == 3);
    CHECK(ordinary_rank(u) == 1);
    CHECK(unit_element(c, 0, 2, 2).is_zero());
    CHECK(thrown_code([&] { unit_element(c, 1, 0, 1); }) == errc::index_out_of_range);
    CHECK(thrown_code([&] { unit_element(c, 1, 3, 1); }) == errc::index_out_of_range);
    CHECK(thrown_code([&] { unit_element(c, 1, 1, 4); }) == errc::index_out_of_range);
}

TEST_CASE("sandwich unit law over random P") {
    Rng rng(17);
    for (const ScalarDomain& d :
         {ScalarDomain::gf(5), ScalarDomain::gf(7), ScalarDomain::rationals()}) {
        for (int t = 0; t < 40; ++t) {
            int m = (int)rng.range(2, 4), n = (int)rng.range(2, 4);
            Matrix p = rng.matrix(d, n, m, 3);
            ContextPtr c = make_context(d, m, n, p);
            int i = (int)rng.range(1, m), s = (int)rng.range(1, n);
            int j = (int)rng.range(1, m), t2 = (int)rng.range(1, n);
            Scalar g = rng.scalar(d, 4), h = rng.scalar(d, 4);
            MunnElement lhs =
                sandwich_product(unit_element(c, g, i, s), unit_element(c, h, j, t2));
            Scalar coeff = g * p.at(s - 1, j - 1) * h;
            CHECK(lhs == unit_element(c, coeff, i, t2));
        }
    }
}

TEST_CASE("canonical sandwich pattern") {
    // With P = E_r, (1,i,s) * (1,j,t) is (1,i,t) when s = j <= r, else 0.
    ContextPtr c = canon(ScalarDomain::gf(7), 3, 3, 2);
    for (int i = 1; i <= 3; ++i)
        for (int s = 1; s <= 3; ++s)
            for (int j = 1; j <= 3; ++j)
                for (int t = 1; t <= 3; ++t) {
                    MunnElement prod = sandwich_product(unit_element(c, 1, i, s),
                                                        unit_element(c, 1, j, t));
                    if (s == j && s <= 2)
                        CHECK(prod == unit_element(c, 1, i, t));
                    else
                        CHECK(prod.is_zero());
                }
}

TEST_CASE("products: algebra identities") {
    Rng rng(29);
    for (const ScalarDomain& d : {ScalarDomain::gf(5), ScalarDomain::rationals(),
                                  ScalarDomain::quaternions()}) {
        ContextPtr c = canon(d, 3, 3, 2);
        for (int t = 0; t < 50; ++t) {
            MunnElement a = rng.element(c, 3), b = rng.element(c, 3),
                        e = rng.element(c, 3);
            // Associativity of the sandwich product.
            CHECK(sandwich_product(sandwich_product(a, b), e) ==
                  sandwich_product(a, sandwich_product(b, e)));
            // Bilinearity.
            CHECK(sandwich_product(a + b, e) ==
                  sandwich_product(a, e) + sandwich_product(b, e));
            CHECK(sandwich_product(a, b + e) ==
                  sandwich_product(a, b) + sandwich_product(a, e));
            // Bracket and circle identities.
            CHECK(commutator(a, a).is_zero());
            CHECK(commutator(a, b) + commutator(b, a) == zero_element(c));
            CHECK(jordan_product(a, b) == jordan_product(b, a));
            CHECK(jordan_product(a, b) ==
                  sandwich_product(a, b) + sandwich_product(b, a));
            CHECK(sandwich_product(a, zero_element(c)).is_zero());
        }
    }
}

TEST_CASE("bracket oracle value") {
    ContextPtr c = canon(ScalarDomain::gf(5), 2, 2, 2);
    MunnElement x = unit_element(c, 1, 1, 2), y = unit_element(c, 1, 2, 1);
    CHECK(commutator(x, y) == unit_element(c, 1, 1, 1) - unit_element(c, 1, 2, 2));
}

TEST_CASE("transport is an isomorphism") {
    Rng rng(43);
    ScalarDomain d5 = ScalarDomain::gf(5);
    Matrix pswap(d5, 2, 2);
    pswap.set(0, 1, Scalar::one(d5));
    pswap.set(1, 0, Scalar::one(d5));

    std::vector<ContextPtr> ctxs;
    ctxs.push_back(make_context(d5, 2, 2, pswap));
    for (const ScalarDomain& d : {ScalarDomain::gf(7), ScalarDomain::rationals()}) {
        Matrix p = rng.matrix(d, 3, 3, 3);
        ctxs.push_back(make_context(d, 3, 3, p));
    }

    for (const ContextPtr& c : ctxs) {
        for (int t = 0; t < 200; ++t) {
            MunnElement a = rng.element(c, 3), b = rng.element(c, 3);
            MunnElement fa = transport_to_canonical(a), fb = transport_to_canonical(b);
            CHECK(transport_to_canonical(sandwich_product(a, b)) ==
                  sandwich_product(fa, fb));
            CHECK(transport_to_canonical(a + b) == fa + fb);
            CHECK(transport_from_canonical(fa, c) == a);
            CHECK(ordinary_rank(fa) == ordinary_rank(a));
        }
    }

    // Identity transport on an already canonical context.
    ContextPtr cc = canon(d5, 2, 2, 2);
    MunnElement a = rng.element(cc);
    CHECK(transport_to_canonical(a) == a);
}

TEST_CASE("bracket trace vanishes against P over commutative domains") {
    Rng rng(59);
    for (const ScalarDomain& d : {ScalarDomain::gf(7), ScalarDomain::rationals()}) {
        Matrix p = rng.matrix(d, 3, 2, 3);
        ContextPtr c = make_context(d, 2, 3, p);
        for (int t = 0; t < 50; ++t) {
            MunnElement a = rng.element(c, 3), b = rng.element(c, 3);
            CHECK((p * commutator(a, b).mat()).trace().is_zero());
        }
    }
}

TEST_CASE("witness evaluation") {
    ContextPtr c = canon(ScalarDomain::gf(5), 2, 2, 2);

    Witness empty;
    empty.kind = witness_kind::comm_product_sum;
    empty.ctx = c;
    EvalReport r0 = evaluate_witness(empty);
    CHECK(r0.value.is_zero());
    CHECK(r0.idempotency_failures.empty());

    // [(1,1,2),(1,2,1)] * [(1,1,1),(1,1,2)+(1,2,1)] = (1,1,2)+(1,2,1).
    MunnElement x = unit_element(c, 1, 1, 2), y = unit_element(c, 1, 2, 1);
    MunnElement z = unit_element(c, 1, 1, 1), w = x + y;
    Witness one;
    one.kind = witness_kind::comm_product_sum;
    one.ctx = c;
    one.comm_terms.push_back(CommTerm{1, x, y, z, w});
    CHECK(evaluate_witness(one).value == x + y);

    Witness flipped = one;
    flipped.comm_terms[0].sign = -1;
    CHECK(evaluate_witness(flipped).value == -(x + y));
    CHECK(evaluate_witness(flipped).value != x + y);

    // Word witness with a coefficient.
    Witness word;
    word.kind = witness_kind::idempotent_word_sum;
    word.ctx = c;
    word.word_terms.push_back(
        WordTerm{1, Scalar::from_int(ScalarDomain::gf(5), 3),
                 {unit_element(c, 1, 1, 1)}});
    EvalReport rw = evaluate_witness(word);
    CHECK(rw.value == unit_element(c, 3, 1, 1));
    CHECK(rw.idempotency_failures.empty());

    // Non-idempotent letters are reported, not silently accepted.
    Witness bad_letter = word;
    bad_letter.word_terms[0].letters = {unit_element(c, 3, 1, 1)};
    bad_letter.word_terms[0].coeff.reset();
    CHECK(!evaluate_witness(bad_letter).idempotency_failures.empty());
}

TEST_CASE("witness validation errors") {
    ContextPtr c = canon(ScalarDomain::gf(5), 2, 2, 2);
    ContextPtr other = canon(ScalarDomain::gf(5), 3, 3, 2);
    MunnElement u = unit_element(c, 1, 1, 1);

    Witness w;
    w.kind = witness_kind::comm_product_sum;
    w.ctx = c;
    w.comm_terms.push_back(CommTerm{2, u, u, u, u});
    CHECK(thrown_code([&] { evaluate_witness(w); }) == errc::witness_malformed);

    Witness w2;
    w2.kind = witness_kind::idempotent_word_sum;
    w2.ctx = c;
    w2.word_terms.push_back(WordTerm{1, std::nullopt, {}});
    CHECK(thrown_code([&] { evaluate_witness(w2); }) == errc::witness_malformed);

    Witness w3;
    w3.kind = witness_kind::comm_product_sum;
    w3.ctx = c;
    w3.word_terms.push_back(WordTerm{1, std::nullopt, {u}});
    CHECK(thrown_code([&] { evaluate_witness(w3); }) == errc::witness_malformed);

    Witness w4;
    w4.kind = witness_kind::comm_product_sum;
    w4.ctx = c;
    MunnElement foreign = unit_element(other, 1, 1, 1);
    w4.comm_terms.push_back(CommTerm{1, foreign, foreign, foreign, foreign});
    CHECK(thrown_code([&] { evaluate_witness(w4); }) == errc::context_mismatch);
}

TEST_CASE("witness transport") {
    ScalarDomain d = ScalarDomain::gf(7);
    Matrix p(d, 2, 2);
    p.set(0, 1, Scalar::from_int(d, 3));
    p.set(1, 0, Scalar::one(d));
    ContextPtr c = make_context(d, 2, 2, p);
    Rng rng(71);

    Witness w;
    w.kind = witness_kind::comm_product_sum;
    w.ctx = c;
    for (int t = 0; t < 3; ++t)
        w.comm_terms.push_back(CommTerm{t % 2 == 0 ? 1 : -1, rng.element(c, 3),
                                        rng.element(c, 3), rng.element(c, 3),
                                        rng.element(c, 3)});
    MunnElement val = evaluate_witness(w).value;

    Witness wc = transport_witness(w, true, c->canonical());
    CHECK(evaluate_witness(wc).value == transport_to_canonical(val));
    Witness back = transport_witness(wc, false, c);
    CHECK(evaluate_witness(back).value == val);

    // A non-central word coefficient cannot ride through a nontrivial change
    // of basis.
    ScalarDomain h = ScalarDomain::quaternions();
    Matrix ph(h, 2, 2);
    ph.set(0, 1, Scalar::one(h));
    ph.set(1, 0, Scalar::one(h));
    ContextPtr ch = make_context(h, 2, 2, ph);
    Witness ww;
    ww.kind = witness_kind::idempotent_word_sum;
    ww.ctx = ch;
    ww.word_terms.push_back(
        WordTerm{1, Scalar::parse(h, "i"), {unit_element(ch, 1, 1, 2)}});
    CHECK(thrown_code([&] { transport_witness(ww, true, ch->canonical()); }) ==
          errc::scalar_transport_unsupported);
}

TEST_CASE("duality reverses products") {
    Rng rng(83);
    ScalarDomain h = ScalarDomain::quaternions();
    Matrix p = rng.matrix(h, 3, 2, 2);
    ContextPtr c = make_context(h, 2, 3, p);
    ContextPtr dc = dual_context(c);
    CHECK(dc->m() == 3);
    CHECK(dc->n() == 2);
    for (int t = 0; t < 50; ++t) {
        MunnElement a = rng.element(c, 3), b = rng.element(c, 3);
        MunnElement da = dual_element(dc, a), db = dual_element(dc, b);
        CHECK(dual_element(dc, sandwich_product(a, b)) == sandwich_product(db, da));
        CHECK(dual_element(dc, a + b) == da + db);
    }
}
