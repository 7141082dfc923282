#include "munn/commutator.hpp"

#include <algorithm>
#include <cstdlib>
#include <string>

#include "munn/rng.hpp"

namespace munn {

int xi_lower_bound(const MunnElement& A) {
    int r = A.context()->r();
    if (r < 1) fail(errc::rank_too_low, "xi bounds need sandwich rank >= 1");
    int rank = ordinary_rank(A);
    return (rank + r - 1) / r;
}

namespace {

int algebra_lower_bound(const ContextPtr& ctx) {
    int mn = std::min(ctx->m(), ctx->n());
    return (mn + ctx->r() - 1) / ctx->r();
}

// Witness skeleton in the canonical context of A, transported back to A's
// own context on finish.
Witness comm_witness(const ContextPtr& canonical_ctx) {
    Witness w;
    w.kind = witness_kind::comm_product_sum;
    w.ctx = canonical_ctx;
    return w;
}

Witness finish(Witness w, const MunnElement& A) {
    if (A.context()->is_canonical()) return w;
    return transport_witness(w, false, A.context());
}

// Maps a term of the dual algebra back through the conjugate-transpose
// anti-isomorphism: ([X,Y] *' [Z,W])^* = [W^*, Z^*] * [Y^*, X^*].
CommTerm undual_term(const ContextPtr& ctx, const CommTerm& t) {
    auto back = [&](const MunnElement& e) {
        return MunnElement(ctx, e.mat().conj_transpose());
    };
    return CommTerm{t.sign, back(t.W), back(t.Z), back(t.Y), back(t.X)};
}

} // namespace

Witness decompose_comm_squares(const MunnElement& A) {
    const auto& ctx = A.context();
    if (ctx->r() < 2) fail(errc::rank_too_low, "cell route needs sandwich rank >= 2");
    ContextPtr c = ctx->canonical();
    MunnElement Ac = transport_to_canonical(A);
    Scalar one = Scalar::one(c->domain());

    Witness w = comm_witness(c);
    for (int i = 1; i <= c->m(); ++i)
        for (int j = 1; j <= c->n(); ++j) {
            if ((i == 1 && j == 2) || (i == 2 && j == 1)) continue;
            Scalar a = Ac.mat().at(i - 1, j - 1);
            if (a.is_zero()) continue;
            if (i != 1 && j != 1) {
                w.comm_terms.push_back(CommTerm{+1, unit_element(c, a, i, 1),
                                                unit_element(c, 1, 1, 1),
                                                unit_element(c, 1, 1, 1),
                                                unit_element(c, 1, 1, j)});
            } else {
                // Cells in row 1 or column 1 away from (1,2)/(2,1) route
                // through the second diagonal index.
                w.comm_terms.push_back(CommTerm{+1, unit_element(c, a, i, 2),
                                                unit_element(c, 1, 2, 2),
                                                unit_element(c, 1, 2, 2),
                                                unit_element(c, 1, 2, j)});
            }
        }
    // Residual cells (1,2) and (2,1) in one product:
    // [(1,1,2),(1,2,1)] * [(1,1,1), (b,1,2)+(c,2,1)] = (b,1,2)+(c,2,1).
    Scalar b = Ac.mat().at(0, 1), cc = Ac.mat().at(1, 0);
    if (!b.is_zero() || !cc.is_zero()) {
        MunnElement W = unit_element(c, b, 1, 2) + unit_element(c, cc, 2, 1);
        w.comm_terms.push_back(CommTerm{+1, unit_element(c, 1, 1, 2),
                                        unit_element(c, 1, 2, 1),
                                        unit_element(c, one, 1, 1), W});
    }
    return finish(std::move(w), A);
}

std::vector<ScalarCommTerm> baxter_decompose_scalar(const Scalar& x) {
    const ScalarDomain& d = x.domain();
    if (d.commutative())
        fail(errc::commutative_unsupported,
             "scalar commutator squares need a noncommutative domain");
    const quat_parts& p = x.quat();
    auto q = [&](const mpq_class& a, const mpq_class& b, const mpq_class& c,
                 const mpq_class& e) {
        return Scalar::from_quat(d, quat_parts{a, b, c, e});
    };
    mpq_class z(0);
    Scalar qi = q(z, 1, z, z), qj = q(z, z, 1, z), qk = q(z, z, z, 1);
    std::vector<ScalarCommTerm> out;
    // [i,j][i,j] = -4, [i,j][i,k] = 4i, [i,j][j,k] = 4j, [i,k][j,k] = 4k;
    // each basis coordinate is recovered with a central rational coefficient
    // folded into the first argument.
    if (p[0] != 0) out.push_back({q(z, -p[0] / 4, z, z), qj, qi, qj});
    if (p[1] != 0) out.push_back({q(z, p[1] / 4, z, z), qj, qi, qk});
    if (p[2] != 0) out.push_back({q(z, p[2] / 4, z, z), qj, qj, qk});
    if (p[3] != 0) out.push_back({q(z, p[3] / 4, z, z), qk, qj, qk});
    return out;
}

Witness decompose_r1(const MunnElement& A) {
    const auto& ctx = A.context();
    if (ctx->domain().commutative())
        fail(errc::commutative_unsupported,
             "rank-1 sandwich over a field admits no commutator-square witness");
    if (ctx->r() != 1) fail(errc::rank_too_low, "this engine needs sandwich rank exactly 1");
    ContextPtr c = ctx->canonical();
    MunnElement Ac = transport_to_canonical(A);
    const ScalarDomain& d = c->domain();
    mpq_class z(0);
    Scalar qi = Scalar::from_quat(d, quat_parts{z, 1, z, z});
    Scalar qj = Scalar::from_quat(d, quat_parts{z, z, 1, z});
    Scalar twok = qi * qj - qj * qi;
    Scalar inv2k = twok.inverse();
    Scalar one = Scalar::one(d);

    Witness w = comm_witness(c);
    for (int i = 1; i <= c->m(); ++i)
        for (int j = 1; j <= c->n(); ++j) {
            Scalar x = Ac.mat().at(i - 1, j - 1);
            if (x.is_zero()) continue;
            if (i == 1 && j == 1) {
                for (const auto& t : baxter_decompose_scalar(x))
                    w.comm_terms.push_back(CommTerm{+1, unit_element(c, t.a, 1, 1),
                                                    unit_element(c, t.b, 1, 1),
                                                    unit_element(c, t.c, 1, 1),
                                                    unit_element(c, t.d, 1, 1)});
            } else if (i == 1) {
                w.comm_terms.push_back(CommTerm{+1, unit_element(c, qi, 1, 1),
                                                unit_element(c, qj, 1, 1),
                                                unit_element(c, one, 1, 1),
                                                unit_element(c, inv2k * x, 1, j)});
            } else if (j == 1) {
                w.comm_terms.push_back(CommTerm{+1, unit_element(c, x * inv2k, i, 1),
                                                unit_element(c, one, 1, 1),
                                                unit_element(c, qi, 1, 1),
                                                unit_element(c, qj, 1, 1)});
            } else {
                w.comm_terms.push_back(CommTerm{+1, unit_element(c, x, i, 1),
                                                unit_element(c, one, 1, 1),
                                                unit_element(c, one, 1, 1),
                                                unit_element(c, one, 1, j)});
            }
        }
    return finish(std::move(w), A);
}

R1Refutation refute_r1_field(const ContextPtr& ctx) {
    if (!ctx->domain().commutative())
        fail(errc::noncommutative_unsupported,
             "the rank-1 obstruction argument needs a commutative domain");
    if (ctx->r() != 1) fail(errc::rank_too_low, "refutation applies to sandwich rank exactly 1");
    ContextPtr c = ctx->canonical();
    long pairs = 0;
    bool ok = true;
    for (int i = 1; i <= c->m(); ++i)
        for (int s = 1; s <= c->n(); ++s)
            for (int j = 1; j <= c->m(); ++j)
                for (int t = 1; t <= c->n(); ++t) {
                    MunnElement u = unit_element(c, 1, i, s);
                    MunnElement v = unit_element(c, 1, j, t);
                    if (!commutator(u, v).mat().at(0, 0).is_zero()) ok = false;
                    ++pairs;
                }
    return R1Refutation{c, pairs, ok, unit_element(c, 1, 1, 1)};
}

namespace {

// Core of the full-rank two-product construction: terms covering an element
// supported on rows 1..rb of a canonical context, 2 <= rb <= r.
std::vector<CommTerm> xi2_rows(const ContextPtr& c, const Matrix& A, int rb) {
    const ScalarDomain& d = c->domain();
    Scalar one = Scalar::one(d);
    std::vector<CommTerm> terms;
    auto elem = [&](const Matrix& m) { return MunnElement(c, m); };
    auto zero_mat = [&] { return Matrix::zero(d, c->m(), c->n()); };

    if (rb == 2) {
        // First product covers (1, j>=2) and (2,1).
        Matrix W1 = zero_mat();
        for (int j = 2; j <= c->n(); ++j) W1.set(0, j - 1, A.at(0, j - 1));
        W1.set(1, 0, A.at(1, 0));
        if (!W1.is_zero())
            terms.push_back(CommTerm{+1, unit_element(c, 1, 1, 2), unit_element(c, 1, 2, 1),
                                     unit_element(c, 1, 1, 1), elem(W1)});
        // Second product covers (1,1) and (2, j>=2) through the row swap.
        Matrix V2 = zero_mat();
        V2.set(0, 1, one);
        V2.set(1, 0, -one);
        Matrix W2 = zero_mat();
        for (int j = 2; j <= c->n(); ++j) W2.set(0, j - 1, A.at(1, j - 1));
        W2.set(1, 0, -A.at(0, 0));
        if (!W2.is_zero())
            terms.push_back(CommTerm{+1, unit_element(c, 1, 1, 1), elem(V2),
                                     unit_element(c, 1, 1, 1), elem(W2)});
        return terms;
    }

    // rb >= 3: nilpotent shifts x (down) and y (up) along the first rb
    // indices.
    Matrix xm = zero_mat(), ym = zero_mat();
    for (int j = 1; j <= rb - 1; ++j) {
        xm.set(j, j - 1, one);
        ym.set(j - 1, j, one);
    }
    MunnElement x = elem(xm), y = elem(ym);
    int p = 2 - (rb % 2);

    // Rows 1..rb-p with alternating signs +,-,+,... and the matching
    // alternating-diagonal commutator [Dx, Dy].
    {
        Matrix a = zero_mat();
        bool nz = false;
        for (int i = 1; i <= rb - p; ++i) {
            bool neg = (i % 2 == 0);
            for (int j = 1; j <= c->n(); ++j) {
                const Scalar& v = A.at(i - 1, j - 1);
                if (v.is_zero()) continue;
                a.set(i - 1, j - 1, neg ? -v : v);
                nz = true;
            }
        }
        if (nz) {
            MunnElement ae = elem(a);
            MunnElement cacc = ae, t = ae;
            for (int k = 2; k <= rb; ++k) {
                t = sandwich_product(x, sandwich_product(t, y));
                cacc = cacc + t;
            }
            Matrix Dx = zero_mat(), Dy = zero_mat();
            for (int j = 1; 2 * j <= rb - p; ++j) {
                Dx.set(2 * j - 2, 2 * j - 1, one);
                Dy.set(2 * j - 1, 2 * j - 2, one);
            }
            terms.push_back(CommTerm{+1, elem(Dx), elem(Dy), y, sandwich_product(x, cacc)});
        }
    }

    // Rows rb-p+1..rb via the mirrored shifts and a shifted alternating
    // diagonal starting at row p+1.
    {
        auto sig = [&](int i) { // sign carried by the shifted diagonal at row i
            return (rb % 2 == 1) ? (i % 2 == 0) : (i % 2 == 1);
        };
        Matrix a = zero_mat();
        bool nz = false;
        for (int i = rb - p + 1; i <= rb; ++i) {
            bool pos = sig(i);
            for (int j = 1; j <= c->n(); ++j) {
                const Scalar& v = A.at(i - 1, j - 1);
                if (v.is_zero()) continue;
                a.set(i - 1, j - 1, pos ? v : -v);
                nz = true;
            }
        }
        if (nz) {
            MunnElement ae = elem(a);
            MunnElement cacc = ae, t = ae;
            for (int k = 2; k <= rb; ++k) {
                t = sandwich_product(y, sandwich_product(t, x));
                cacc = cacc + t;
            }
            Matrix Dx = zero_mat(), Dy = zero_mat();
            if (rb % 2 == 1) {
                for (int j = 1; 2 * j + 1 <= rb; ++j) {
                    Dx.set(2 * j - 1, 2 * j, one);
                    Dy.set(2 * j, 2 * j - 1, one);
                }
            } else {
                for (int j = 1; 2 * j + 2 <= rb; ++j) {
                    Dx.set(2 * j, 2 * j + 1, one);
                    Dy.set(2 * j + 1, 2 * j, one);
                }
            }
            terms.push_back(CommTerm{+1, elem(Dx), elem(Dy), x, sandwich_product(y, cacc)});
        }
    }
    return terms;
}

} // namespace

XiReport decompose_xi2(const MunnElement& A) {
    const auto& ctx = A.context();
    int mn = std::min(ctx->m(), ctx->n());
    if (ctx->r() != mn)
        fail(errc::rank_too_low, "two-product engine needs full sandwich rank r = min(m,n)");
    ContextPtr c = ctx->canonical();
    MunnElement Ac = transport_to_canonical(A);

    Witness w = comm_witness(c);
    if (c->m() <= c->n()) {
        w.comm_terms = xi2_rows(c, Ac.mat(), c->m());
    } else {
        ContextPtr cd = dual_context(c);
        MunnElement Ad = dual_element(cd, Ac);
        for (const auto& t : xi2_rows(cd, Ad.mat(), cd->m()))
            w.comm_terms.push_back(undual_term(c, t));
    }
    Witness out = finish(std::move(w), A);
    return XiReport{xi_lower_bound(A), algebra_lower_bound(ctx), (int)out.term_count(),
                    std::move(out)};
}

XiReport decompose_xi_blocks(const MunnElement& A) {
    const auto& ctx = A.context();
    int mn = std::min(ctx->m(), ctx->n());
    if (ctx->r() < 2 || ctx->r() >= mn)
        fail(errc::rank_too_low, "banded engine needs 2 <= r < min(m,n)");
    ContextPtr c = ctx->canonical();
    MunnElement Ac = transport_to_canonical(A);

    // Work with rows as the short side; otherwise run on the dual and map
    // every term back.
    bool dualized = c->m() > c->n();
    ContextPtr work = dualized ? dual_context(c) : c;
    Matrix Am = dualized ? dual_element(work, Ac).mat() : Ac.mat();

    const ScalarDomain& d = work->domain();
    Scalar one = Scalar::one(d);
    int m = work->m(), n = work->n(), r = work->r();
    int q = (m + r - 1) / r;
    auto zero_mat = [&] { return Matrix::zero(d, m, n); };

    std::vector<CommTerm> terms;

    // Band of rows 1..r, all columns: at most two products.
    {
        Matrix Ab = zero_mat();
        bool nz = false;
        for (int i = 0; i < r; ++i)
            for (int j = 0; j < n; ++j) {
                const Scalar& v = Am.at(i, j);
                if (v.is_zero()) continue;
                Ab.set(i, j, v);
                nz = true;
            }
        if (nz) {
            auto sub = xi2_rows(work, Ab, r);
            terms.insert(terms.end(), sub.begin(), sub.end());
        }
    }

    // Full shifted bands B_k (rows kr+1..(k+1)r, columns > r), one product
    // each: [S_k, Q] * [Q, Y_k] with the band content lifted to rows 1..r.
    Matrix Qm = zero_mat();
    for (int i = 1; i <= r; ++i) Qm.set(i - 1, i - 1, one);
    MunnElement Q(work, Qm);
    for (int k = 1; k <= q - 2; ++k) {
        Matrix Yk = zero_mat();
        bool nz = false;
        for (int i = 1; i <= r; ++i)
            for (int j = r + 1; j <= n; ++j) {
                const Scalar& v = Am.at(k * r + i - 1, j - 1);
                if (v.is_zero()) continue;
                Yk.set(i - 1, j - 1, v);
                nz = true;
            }
        if (!nz) continue;
        Matrix Sk = zero_mat();
        for (int i = 1; i <= r; ++i) Sk.set(k * r + i - 1, i - 1, one);
        terms.push_back(CommTerm{+1, MunnElement(work, Sk), Q, Q, MunnElement(work, Yk)});
    }

    // Last (possibly partial) shifted band, same shape with width m - (q-1)r.
    {
        int g = q - 1, mc = m - g * r;
        Matrix Yc = zero_mat();
        bool nz = false;
        for (int i = 1; i <= mc; ++i)
            for (int j = r + 1; j <= n; ++j) {
                const Scalar& v = Am.at(g * r + i - 1, j - 1);
                if (v.is_zero()) continue;
                Yc.set(i - 1, j - 1, v);
                nz = true;
            }
        if (nz) {
            Matrix Sc = zero_mat(), Qc = zero_mat();
            for (int i = 1; i <= mc; ++i) {
                Sc.set(g * r + i - 1, i - 1, one);
                Qc.set(i - 1, i - 1, one);
            }
            terms.push_back(CommTerm{+1, MunnElement(work, Sc), MunnElement(work, Qc),
                                     MunnElement(work, Qc), MunnElement(work, Yc)});
        }
    }

    // Low-left block (rows > r, columns <= r): at most two products through
    // the conjugate-transpose dual, where it becomes a row band.
    {
        Matrix Db = zero_mat();
        bool nz = false;
        for (int i = r; i < m; ++i)
            for (int j = 0; j < r; ++j) {
                const Scalar& v = Am.at(i, j);
                if (v.is_zero()) continue;
                Db.set(i, j, v);
                nz = true;
            }
        if (nz) {
            ContextPtr wd = dual_context(work);
            MunnElement Dd = dual_element(wd, MunnElement(work, Db));
            for (const auto& t : xi2_rows(wd, Dd.mat(), r))
                terms.push_back(undual_term(work, t));
        }
    }

    Witness w = comm_witness(c);
    if (dualized) {
        for (const auto& t : terms) w.comm_terms.push_back(undual_term(c, t));
    } else {
        w.comm_terms = std::move(terms);
    }
    Witness out = finish(std::move(w), A);
    return XiReport{xi_lower_bound(A), algebra_lower_bound(ctx), (int)out.term_count(),
                    std::move(out)};
}

namespace {

// Similarity S with S T S^-1 of zero diagonal, by elementary conjugations
// processed top-down (zeroing (i,i) only ever perturbs later diagonal
// entries). Returns S, S^-1 and the conjugated matrix; nullopt when stuck
// (a nonzero scalar trailing block, possible only when char divides its
// size). With allow_last_residue the last diagonal entry is left as is:
// over the quaternions the real part of the diagonal sum is the only
// similarity invariant in play, so only that residue is unavoidable.
struct ZeroDiag {
    Matrix S, Sinv, Z;
};
std::optional<ZeroDiag> zero_diagonalize(const Matrix& T, bool allow_last_residue = false) {
    int s = T.rows();
    const ScalarDomain& d = T.domain();
    Matrix A = T;
    Matrix S = Matrix::identity(d, s);
    auto conj_elem = [&](int i, int j, const Scalar& t) {
        // A <- (I - t E_ij) A (I + t E_ij), S <- (I - t E_ij) S.
        Matrix L = Matrix::identity(d, s);
        L.set(i, j, -t);
        Matrix Linv = Matrix::identity(d, s);
        Linv.set(i, j, t);
        A = L * A * Linv;
        S = L * S;
    };
    auto swap_conj = [&](int i, int a) {
        Matrix P = Matrix::identity(d, s);
        Scalar one = Scalar::one(d), zero = Scalar::zero(d);
        P.set(i, i, zero); P.set(a, a, zero);
        P.set(i, a, one); P.set(a, i, one);
        A = P * A * P;
        S = P * S;
    };
    auto unit_conj = [&](int a, const Scalar& q) {
        // A <- Q A Q^-1 with Q = diag(.., q, ..); moves a non-real
        // quaternion diagonal entry off its value.
        Matrix Q = Matrix::identity(d, s);
        Q.set(a, a, q);
        Matrix Qinv = Matrix::identity(d, s);
        Qinv.set(a, a, q.inverse());
        A = Q * A * Qinv;
        S = Q * S;
    };
    int limit = allow_last_residue ? s - 1 : s;
    for (int i = 0; i < limit; ++i) {
        for (int tries = 0; tries < 8 && !A.at(i, i).is_zero(); ++tries) {
            int jr = -1, jc = -1;
            for (int j = i + 1; j < s; ++j) {
                if (jr < 0 && !A.at(j, i).is_zero()) jr = j;
                if (jc < 0 && !A.at(i, j).is_zero()) jc = j;
            }
            if (jr >= 0) {
                conj_elem(i, jr, A.at(i, i) * A.at(jr, i).inverse());
            } else if (jc >= 0) {
                // Conjugating by I + t E_{jc,i} adds A(i,jc)*t to (i,i).
                Scalar t = -(A.at(i, jc).inverse() * A.at(i, i));
                Matrix L = Matrix::identity(d, s);
                L.set(jc, i, -t);
                Matrix Linv = Matrix::identity(d, s);
                Linv.set(jc, i, t);
                A = L * A * Linv;
                S = L * S;
            } else {
                // Row and column i are clean beyond the diagonal: mix with a
                // later index to create a partner.
                int pick = -1;
                for (int a = i + 1; a < s && pick < 0; ++a)
                    if (A.at(a, a) != A.at(i, i)) pick = a;
                if (pick >= 0) {
                    conj_elem(i, pick, Scalar::one(d));
                    continue;
                }
                for (int a = i + 1; a < s && pick < 0; ++a)
                    for (int b = i + 1; b < s; ++b)
                        if (a != b && !A.at(a, b).is_zero()) { pick = a; break; }
                if (pick < 0) {
                    // Trailing block is a nonzero scalar. A non-real
                    // quaternion scalar is not central, so a basis-unit
                    // conjugation splits the diagonal and unblocks.
                    if (d.kind() == domain_kind::rational_quaternions && i + 1 < s) {
                        const quat_parts& c = A.at(i, i).quat();
                        if (c[1] != 0 || c[2] != 0 || c[3] != 0) {
                            quat_parts up{mpq_class(0), mpq_class(0), mpq_class(0),
                                          mpq_class(0)};
                            if (c[2] != 0 || c[3] != 0)
                                up[1] = 1;
                            else
                                up[2] = 1;
                            unit_conj(i + 1, Scalar::from_quat(d, up));
                            continue;
                        }
                    }
                    return std::nullopt;
                }
                swap_conj(i, pick);
            }
        }
        if (!A.at(i, i).is_zero()) return std::nullopt;
    }
    auto sinv = S.invert();
    if (!sinv) return std::nullopt;
    return ZeroDiag{S, *sinv, A};
}

// (B, C) with [B, C] = T, built from a zero-diagonal similarity and a
// distinct diagonal; the left factor is diag(1..s) (invertible) when asked,
// else diag(0..s-1). Fails when the diagonal values collide in GF(p).
std::optional<std::pair<Matrix, Matrix>> realize_commutator(const Matrix& T,
                                                            bool invertible_left) {
    int s = T.rows();
    const ScalarDomain& d = T.domain();
    if (T.is_zero()) {
        Matrix B = invertible_left ? Matrix::identity(d, s) : Matrix::zero(d, s, s);
        return std::make_pair(B, Matrix::zero(d, s, s));
    }
    auto zd = zero_diagonalize(T);
    if (!zd) return std::nullopt;
    std::vector<Scalar> b;
    for (int i = 0; i < s; ++i)
        b.push_back(Scalar::from_int(d, invertible_left ? i + 1 : i));
    for (int i = 0; i < s; ++i) {
        if (invertible_left && b[i].is_zero()) return std::nullopt;
        for (int j = i + 1; j < s; ++j)
            if (b[i] == b[j]) return std::nullopt;
    }
    Matrix B0 = Matrix::zero(d, s, s), C0 = Matrix::zero(d, s, s);
    for (int i = 0; i < s; ++i) B0.set(i, i, b[i]);
    for (int i = 0; i < s; ++i)
        for (int j = 0; j < s; ++j) {
            if (i == j) continue;
            const Scalar& z = zd->Z.at(i, j);
            if (z.is_zero()) continue;
            C0.set(i, j, (b[i] - b[j]).inverse() * z);
        }
    Matrix B = zd->Sinv * B0 * zd->S;
    Matrix C = zd->Sinv * C0 * zd->S;
    if (B * C - C * B != T) return std::nullopt;
    return std::make_pair(B, C);
}

// [D, E] = N with D invertible; N must not be a nonzero scalar.
std::optional<std::pair<Matrix, Matrix>> realize_with_invertible(const Matrix& N) {
    if (N.is_zero()) {
        const ScalarDomain& d = N.domain();
        return std::make_pair(Matrix::identity(d, N.rows()),
                              Matrix::zero(d, N.rows(), N.cols()));
    }
    return realize_commutator(N, true);
}

// x with a x - x b = c over the quaternions; needs a, b with different
// characteristic polynomials (distinct real parts suffice). Applying
// y -> a y - y conj(b) to a x - x b collapses, since b + conj(b) and
// b conj(b) are central, to (a^2 - 2 Re(b) a + |b|^2) x.
Scalar sylvester_entry(const Scalar& a, const Scalar& b, const Scalar& c) {
    const ScalarDomain& d = a.domain();
    auto real = [&](const mpq_class& x) {
        return Scalar::from_quat(d,
                                 quat_parts{x, mpq_class(0), mpq_class(0), mpq_class(0)});
    };
    Scalar q = a * a - real(2 * b.quat()[0]) * a + real(b.norm());
    return q.inverse() * (a * c - c * b.conj());
}

// Nonzero pure quaternion orthogonal to the pure w: the doubled cross
// product of w against a basis unit off w's line.
Scalar pure_orthogonal(const Scalar& w) {
    const ScalarDomain& d = w.domain();
    const quat_parts& p = w.quat();
    quat_parts up{mpq_class(0), mpq_class(0), mpq_class(0), mpq_class(0)};
    if (p[2] != 0 || p[3] != 0)
        up[1] = 1;
    else
        up[2] = 1;
    Scalar e = Scalar::from_quat(d, up);
    return w * e - e * w;
}

// x with u x - x u = w for orthogonal pure u, w: x = -u w / (2 |u|^2),
// using u^2 = -|u|^2 and w u = -u w.
Scalar pure_comm_solution(const Scalar& u, const Scalar& w) {
    const ScalarDomain& d = u.domain();
    mpq_class sc = mpq_class(-1) / (2 * u.norm());
    return Scalar::from_quat(
               d, quat_parts{sc, mpq_class(0), mpq_class(0), mpq_class(0)}) *
           (u * w);
}

// Quaternion [D, E] = T with invertible D on request. The similarity pushes
// the diagonal onto the last entry; the residue there is pure whenever the
// diagonal sum of T has zero real part (that real part is the similarity
// invariant), and adding an orthogonal pure component to the matching entry
// of D absorbs it. Distinct rational real parts across the diagonal of D
// keep every entry equation solvable.
std::optional<std::pair<Matrix, Matrix>> realize_commutator_quat(const Matrix& T,
                                                                 bool invertible_left) {
    int s = T.rows();
    const ScalarDomain& d = T.domain();
    if (T.is_zero()) {
        Matrix D = invertible_left ? Matrix::identity(d, s) : Matrix::zero(d, s, s);
        return std::make_pair(D, Matrix::zero(d, s, s));
    }
    auto zd = zero_diagonalize(T, true);
    if (!zd) return std::nullopt;
    Scalar w = zd->Z.at(s - 1, s - 1);
    if (w.quat()[0] != 0) return std::nullopt;
    std::vector<Scalar> dv;
    for (int i = 0; i < s; ++i)
        dv.push_back(Scalar::from_int(d, invertible_left ? i + 1 : i));
    Matrix E0 = Matrix::zero(d, s, s);
    if (!w.is_zero()) {
        Scalar u = pure_orthogonal(w);
        dv[(std::size_t)(s - 1)] = dv[(std::size_t)(s - 1)] + u;
        E0.set(s - 1, s - 1, pure_comm_solution(u, w));
    }
    Matrix D0 = Matrix::zero(d, s, s);
    for (int i = 0; i < s; ++i) D0.set(i, i, dv[(std::size_t)i]);
    for (int i = 0; i < s; ++i)
        for (int j = 0; j < s; ++j) {
            if (i == j) continue;
            const Scalar& z = zd->Z.at(i, j);
            if (z.is_zero()) continue;
            E0.set(i, j, sylvester_entry(dv[(std::size_t)i], dv[(std::size_t)j], z));
        }
    Matrix D = zd->Sinv * D0 * zd->S;
    Matrix E = zd->Sinv * E0 * zd->S;
    if (D * E - E * D != T) return std::nullopt;
    return std::make_pair(D, E);
}

std::optional<InnerFactorization> complete_from_k(const Matrix& K, const Matrix& M) {
    auto kinv = K.invert();
    if (!kinv) return std::nullopt;
    auto bc = realize_commutator(K, false);
    if (!bc) return std::nullopt;
    Matrix N = *kinv * M;
    auto de = realize_with_invertible(N);
    if (!de) return std::nullopt;
    const auto& [B, C] = *bc;
    const auto& [D, E] = *de;
    // Exact verification before reporting success.
    Matrix KK = B * C - C * B;
    if (!KK.invert() || !D.invert()) return std::nullopt;
    if (KK * (D * E - E * D) != M) return std::nullopt;
    return InnerFactorization{B, C, D, E};
}

// Quaternion Sylvester step: solve D E - E D = N for E by viewing each
// quaternion entry as four rational unknowns.
std::optional<Matrix> solve_sylvester_quat(const Matrix& D, const Matrix& N) {
    int s = D.rows();
    const ScalarDomain& dh = D.domain();
    ScalarDomain dq = ScalarDomain::rationals();
    int nv = 4 * s * s;
    Matrix Asys = Matrix::zero(dq, nv, nv);
    Matrix rhs = Matrix::zero(dq, nv, 1);
    auto basis = [&](int t) {
        quat_parts p{mpq_class(0), mpq_class(0), mpq_class(0), mpq_class(0)};
        p[(std::size_t)t] = 1;
        return Scalar::from_quat(dh, p);
    };
    auto add_block = [&](int eq_base, int var_base, const Scalar& coeff, bool left, int sgn) {
        for (int t = 0; t < 4; ++t) {
            Scalar prod = left ? coeff * basis(t) : basis(t) * coeff;
            const quat_parts& p = prod.quat();
            for (int u = 0; u < 4; ++u) {
                if (p[(std::size_t)u] == 0) continue;
                mpq_class cur = Asys.at(eq_base + u, var_base + t).rational();
                Asys.set(eq_base + u, var_base + t,
                         Scalar::from_rational(dq, cur + (sgn > 0 ? p[(std::size_t)u]
                                                                  : -p[(std::size_t)u])));
            }
        }
    };
    for (int i = 0; i < s; ++i)
        for (int j = 0; j < s; ++j) {
            int eb = (i * s + j) * 4;
            for (int k = 0; k < s; ++k) {
                if (!D.at(i, k).is_zero()) add_block(eb, (k * s + j) * 4, D.at(i, k), true, +1);
                if (!D.at(k, j).is_zero()) add_block(eb, (i * s + k) * 4, D.at(k, j), false, -1);
            }
            const quat_parts& p = N.at(i, j).quat();
            for (int u = 0; u < 4; ++u)
                rhs.set(eb + u, 0, Scalar::from_rational(dq, p[(std::size_t)u]));
        }
    auto sol = Asys.solve(rhs);
    if (!sol) return std::nullopt;
    Matrix E = Matrix::zero(dh, s, s);
    for (int i = 0; i < s; ++i)
        for (int j = 0; j < s; ++j) {
            int vb = (i * s + j) * 4;
            quat_parts p{sol->at(vb, 0).rational(), sol->at(vb + 1, 0).rational(),
                         sol->at(vb + 2, 0).rational(), sol->at(vb + 3, 0).rational()};
            E.set(i, j, Scalar::from_quat(dh, p));
        }
    return E;
}

} // namespace

SearchResult search_inner_factorization(const Matrix& M, std::uint64_t seed, long budget) {
    if (M.rows() != M.cols() || M.rows() < 2)
        fail(errc::shape_mismatch, "inner factorization needs a square matrix, size >= 2");
    if (M.is_zero()) return SearchResult{search_status::zero_input, std::nullopt, 0};
    const ScalarDomain& d = M.domain();
    int s = M.rows();
    long attempts = 0;

    if (d.is_field() && s == 2) {
        // Any factorization has K = [B,C] traceless invertible with
        // tr(K M) = 0 (Cayley-Hamilton turns tr(K^-1 M) = 0 into a linear
        // condition), so enumerating that solution space is exhaustive.
        Matrix cond = Matrix::zero(d, 2, 4);
        // Variables (k00, k01, k10, k11); tr K = 0 and tr(K M) = 0.
        cond.set(0, 0, Scalar::one(d));
        cond.set(0, 3, Scalar::one(d));
        for (int i = 0; i < 2; ++i)
            for (int a = 0; a < 2; ++a) cond.set(1, i * 2 + a, M.at(a, i));
        Matrix base = cond.kernel();
        int dim = base.cols();
        auto try_combo = [&](const std::vector<Scalar>& coef) -> std::optional<InnerFactorization> {
            Matrix K = Matrix::zero(d, 2, 2);
            for (int b = 0; b < dim; ++b) {
                if (coef[(std::size_t)b].is_zero()) continue;
                for (int v = 0; v < 4; ++v)
                    K.set(v / 2, v % 2,
                          K.at(v / 2, v % 2) + coef[(std::size_t)b] * base.at(v, b));
            }
            if (K.is_zero()) return std::nullopt;
            return complete_from_k(K, M);
        };
        if (d.kind() == domain_kind::prime_field) {
            // Lexicographic sweep of the whole coefficient space.
            for (std::uint64_t idx = 1;; ++idx) {
                if (attempts >= budget)
                    return SearchResult{search_status::budget_exhausted, std::nullopt, attempts};
                std::uint64_t rem = idx;
                std::vector<Scalar> coef;
                for (int b = 0; b < dim; ++b) {
                    coef.push_back(Scalar::from_int(d, (long)(rem % d.p())));
                    rem /= d.p();
                }
                if (rem != 0)
                    return SearchResult{search_status::budget_exhausted, std::nullopt, attempts};
                ++attempts;
                if (auto f = try_combo(coef))
                    return SearchResult{search_status::found, f, attempts};
            }
        } else {
            // Integer coefficient shells of growing radius.
            for (long R = 1;; ++R) {
                std::vector<long> c((std::size_t)dim, -R);
                for (;;) {
                    long mx = 0;
                    for (long v : c) mx = std::max(mx, std::abs(v));
                    if (mx == R) {
                        if (attempts >= budget)
                            return SearchResult{search_status::budget_exhausted, std::nullopt,
                                                attempts};
                        ++attempts;
                        std::vector<Scalar> coef;
                        for (long v : c) coef.push_back(Scalar::from_int(d, v));
                        if (auto f = try_combo(coef))
                            return SearchResult{search_status::found, f, attempts};
                    }
                    int pos = 0;
                    while (pos < dim && c[(std::size_t)pos] == R) c[(std::size_t)pos++] = -R;
                    if (pos == dim) break;
                    ++c[(std::size_t)pos];
                }
            }
        }
    }

    Rng rng(seed);
    if (d.is_field()) {
        // s >= 3: search a zero-diagonal invertible K with tr(K^-1 M) = 0.
        bool rational = d.kind() == domain_kind::rationals;
        while (attempts < budget) {
            ++attempts;
            Matrix K0 = Matrix::zero(d, s, s);
            for (int i = 0; i < s; ++i)
                for (int j = 0; j < s; ++j)
                    if (i != j) K0.set(i, j, rational ? rng.int_scalar(d, -3, 3)
                                                      : rng.scalar(d));
            auto k0inv = K0.invert();
            if (!k0inv) continue;
            Matrix K = K0;
            Scalar tau = (*k0inv * M).trace();
            if (!tau.is_zero()) {
                if (!rational) continue;
                // Rank-one line K0 + t u v^T with disjoint supports keeps the
                // diagonal zero and makes the trace condition affine in t.
                Matrix u = Matrix::zero(d, s, 1), v = Matrix::zero(d, 1, s);
                int half = s / 2;
                for (int i = 0; i < half; ++i)
                    u.set(i, 0, Scalar::from_int(d, rng.range(1, 3) * (rng.coin() ? 1 : -1)));
                for (int i = half; i < s; ++i)
                    v.set(0, i, Scalar::from_int(d, rng.range(1, 3) * (rng.coin() ? 1 : -1)));
                Scalar alpha = (v * *k0inv * u).at(0, 0);
                Scalar beta = (v * *k0inv * M * *k0inv * u).at(0, 0);
                Scalar denom = beta - tau * alpha;
                if (denom.is_zero()) continue;
                Scalar t = tau * denom.inverse();
                K = K0 + (u * v).scale_left(t);
                auto kinv = K.invert();
                if (!kinv) continue;
                if (!(*kinv * M).trace().is_zero()) continue;
            }
            if (auto f = complete_from_k(K, M))
                return SearchResult{search_status::found, f, attempts};
        }
        return SearchResult{search_status::budget_exhausted, std::nullopt, attempts};
    }

    // Quaternions: constructive. K is the cyclic shift with one entry tuned
    // so the diagonal sum of K^-1 M has zero real part; K is then an
    // invertible zero-diagonal commutator, and the cofactor is a commutator
    // with invertible left factor via the pure-residue construction.
    if (attempts < budget) {
        ++attempts;
        Matrix K = Matrix::zero(d, s, s);
        for (int i = 0; i < s; ++i) K.set(i, (i + 1) % s, Scalar::one(d));
        Matrix N = *K.invert() * M;
        mpq_class sigma(0);
        for (int i = 0; i < s; ++i) sigma += N.at(i, i).quat()[0];
        if (sigma != 0) {
            int pos = -1;
            for (int i = 0; i < s && pos < 0; ++i)
                if (N.at(i, i).quat()[0] != 0) pos = i;
            Scalar nd = N.at(pos, pos);
            mpq_class rho = nd.quat()[0] - sigma;
            quat_parts lead{rho / nd.norm(), mpq_class(0), mpq_class(0), mpq_class(0)};
            if (rho == 0) {
                lead[0] = 0;
                lead[1] = 1;
            }
            // Re(ginv nd) = rho, so scaling column pos of K by its inverse
            // moves the diagonal sum's real part to zero.
            Scalar ginv = Scalar::from_quat(d, lead) * nd.conj();
            K.set((pos + s - 1) % s, pos, ginv.inverse());
            N = *K.invert() * M;
        }
        auto bc = realize_commutator(K, false);
        auto de = realize_commutator_quat(N, true);
        if (bc && de) {
            const auto& [B, C] = *bc;
            const auto& [D, E] = *de;
            Matrix KK = B * C - C * B;
            if (KK.invert() && D.invert() && KK * (D * E - E * D) == M)
                return SearchResult{search_status::found,
                                    InnerFactorization{B, C, D, E}, attempts};
        }
    }

    // Fallback: seeded sampling with an exact Sylvester completion.
    while (attempts < budget) {
        ++attempts;
        Matrix B = rng.matrix(d, s, s, 2), C = rng.matrix(d, s, s, 2);
        Matrix K = B * C - C * B;
        auto kinv = K.invert();
        if (!kinv) continue;
        Matrix N = *kinv * M;
        Matrix D = rng.invertible_matrix(d, s, 2);
        auto E = solve_sylvester_quat(D, N);
        if (!E) continue;
        if (K * (D * *E - *E * D) != M) continue;
        return SearchResult{search_status::found, InnerFactorization{B, C, D, *E}, attempts};
    }
    return SearchResult{search_status::budget_exhausted, std::nullopt, attempts};
}

namespace {

// Single-product construction in a canonical full-rank context with
// m <= n: A = (A11 | A12) lifts through A11 = [B,C][D,E] with
// F = D^-1 [B,C]^-1 A12 appended to E.
std::vector<CommTerm> xi1_rows(const ContextPtr& c, const Matrix& Am,
                               std::uint64_t seed, long budget) {
    const ScalarDomain& d = c->domain();
    int m = c->m(), n = c->n();
    Matrix A11 = Am.block(0, 0, m, m);

    Matrix B(d, m, m), C(d, m, m), D(d, m, m), E(d, m, m);
    if (A11.is_zero()) {
        // Fixed cyclic-shift commutator for the left factor; [D, E] = 0.
        Matrix K = Matrix::zero(d, m, m);
        for (int i = 0; i < m; ++i) K.set(i, (i + 1) % m, Scalar::one(d));
        auto bc = realize_commutator(K, false);
        if (!bc)
            fail(errc::search_budget_exhausted,
                 "no inner factorization found (degenerate corner)");
        B = bc->first;
        C = bc->second;
        D = Matrix::identity(d, m);
        E = Matrix::zero(d, m, m);
    } else {
        SearchResult sr = search_inner_factorization(A11, seed, budget);
        if (sr.status != search_status::found)
            fail(errc::search_budget_exhausted,
                 "no inner factorization found within budget (" +
                     std::to_string(sr.attempts) + " attempts)");
        B = sr.fact->B;
        C = sr.fact->C;
        D = sr.fact->D;
        E = sr.fact->E;
    }
    Matrix K = B * C - C * B;
    Matrix Eh = Matrix::zero(d, m, n);
    Eh.paste(E, 0, 0);
    if (n > m) {
        Matrix A12 = Am.block(0, m, m, n - m);
        Matrix F = *D.invert() * *K.invert() * A12;
        Eh.paste(F, 0, m);
    }
    auto embed = [&](const Matrix& X) {
        Matrix h = Matrix::zero(d, m, n);
        h.paste(X, 0, 0);
        return MunnElement(c, h);
    };
    return {CommTerm{+1, embed(B), embed(C), embed(D), MunnElement(c, Eh)}};
}

} // namespace

XiReport decompose_xi1(const MunnElement& A, std::uint64_t seed, long budget) {
    const auto& ctx = A.context();
    int mn = std::min(ctx->m(), ctx->n());
    if (ctx->r() != mn)
        fail(errc::rank_too_low, "single-product engine needs full sandwich rank");
    if (mn != 2 && ctx->domain().kind() == domain_kind::prime_field)
        fail(errc::context_too_small,
             "single-product engine over GF(p) is supported for min(m,n) = 2 only");
    ContextPtr c = ctx->canonical();
    MunnElement Ac = transport_to_canonical(A);

    Witness w = comm_witness(c);
    if (!Ac.is_zero()) {
        if (c->m() <= c->n()) {
            w.comm_terms = xi1_rows(c, Ac.mat(), seed, budget);
        } else {
            ContextPtr cd = dual_context(c);
            MunnElement Ad = dual_element(cd, Ac);
            for (const auto& t : xi1_rows(cd, Ad.mat(), seed, budget))
                w.comm_terms.push_back(undual_term(c, t));
        }
    }
    Witness out = finish(std::move(w), A);
    return XiReport{xi_lower_bound(A), algebra_lower_bound(ctx), (int)out.term_count(),
                    std::move(out)};
}

XiReport xi_bounds(const MunnElement& A) {
    const auto& ctx = A.context();
    int r = ctx->r(), mn = std::min(ctx->m(), ctx->n());
    if (r < 1) fail(errc::rank_too_low, "xi bounds need sandwich rank >= 1");
    if (r == mn) return decompose_xi2(A);
    if (r >= 2) return decompose_xi_blocks(A);
    if (ctx->domain().commutative())
        fail(errc::commutative_unsupported,
             "rank-1 sandwich over a field admits no commutator-square witness; "
             "see the refute-r1 certificate");
    Witness w = decompose_r1(A);
    return XiReport{xi_lower_bound(A), algebra_lower_bound(ctx), (int)w.term_count(),
                    std::move(w)};
}

} // namespace munn
