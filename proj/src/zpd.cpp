#include "munn/zpd.hpp"

#include <algorithm>
#include <climits>
#include <functional>
#include <string>
#include <utility>

#include "munn/rng.hpp"

namespace munn {

const char* product_kind_name(product_kind k) {
    return k == product_kind::associative ? "associative" : "jordan";
}

const char* zpd_verdict_name(zpd_verdict v) {
    return v == zpd_verdict::certified ? "CERTIFIED" : "INCONCLUSIVE";
}

namespace {

void require_field(const ScalarDomain& d, const char* what) {
    if (!d.is_field())
        fail(errc::noncommutative_unsupported,
             std::string(what) + " is restricted to field domains");
}

void require_char_not_23(const ScalarDomain& d, const char* what) {
    if (d.characteristic() == 2)
        fail(errc::char_2_unsupported, std::string(what) + " needs characteristic not 2");
    if (d.characteristic() == 3)
        fail(errc::char_3_unsupported, std::string(what) + " needs characteristic not 3");
}

// Functional-space guard: the solver works in (mn)^2 unknowns.
void require_small(const ContextPtr& c, const char* what) {
    if (c->m() * c->n() > 36)
        fail(errc::enumeration_guard,
             std::string(what) + " supports m*n <= 36 (functional space grows as (mn)^2)");
}

int cell_of(const ContextPtr& c, int i, int q) { return (i - 1) * c->n() + (q - 1); }

MunnElement unit_of_cell(const ContextPtr& c, int cell) {
    return unit_element(c, 1, cell / c->n() + 1, cell % c->n() + 1);
}

MunnElement product_of(product_kind kind, const MunnElement& X, const MunnElement& Y) {
    return kind == product_kind::jordan ? jordan_product(X, Y) : sandwich_product(X, Y);
}

std::vector<Scalar> vec_of(const MunnElement& X) {
    const ContextPtr& c = X.context();
    std::vector<Scalar> v;
    v.reserve((std::size_t)(c->m() * c->n()));
    for (int i = 0; i < c->m(); ++i)
        for (int j = 0; j < c->n(); ++j) v.push_back(X.mat().at(i, j));
    return v;
}

// Constraint row of the pair (X, Y): the coefficient of lam[a][b] is
// X_a * Y_b.
std::vector<Scalar> pair_row(const ContextPtr& c, const MunnElement& X, const MunnElement& Y) {
    int N = c->m() * c->n();
    std::vector<Scalar> xa = vec_of(X), yb = vec_of(Y);
    std::vector<Scalar> row((std::size_t)N * N, Scalar::zero(c->domain()));
    for (int a = 0; a < N; ++a) {
        if (xa[(std::size_t)a].is_zero()) continue;
        for (int b = 0; b < N; ++b) {
            if (yb[(std::size_t)b].is_zero()) continue;
            row[(std::size_t)(a * N + b)] = xa[(std::size_t)a] * yb[(std::size_t)b];
        }
    }
    return row;
}

// Incremental exact rank over a field. GF rows are kept with unit pivots;
// rational rows are kept as primitive integer vectors and eliminated by
// integer cross-multiplication, so no denominators accumulate.
struct RowBasis {
    ScalarDomain d;
    int width;
    bool rational;
    std::vector<std::vector<Scalar>> rows;
    std::vector<int> pivots;

    RowBasis(const ScalarDomain& dom, int w)
        : d(dom), width(w), rational(dom.kind() == domain_kind::rationals) {}

    int rank() const { return (int)rows.size(); }

    void make_primitive(std::vector<Scalar>& r) const {
        mpz_class den_lcm(1), num_gcd(0);
        for (const Scalar& s : r) {
            if (s.is_zero()) continue;
            mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(),
                    s.rational().get_den().get_mpz_t());
        }
        if (den_lcm != 1)
            for (Scalar& s : r)
                s = Scalar::from_rational(d, s.rational() * den_lcm);
        for (const Scalar& s : r) {
            if (s.is_zero()) continue;
            mpz_gcd(num_gcd.get_mpz_t(), num_gcd.get_mpz_t(),
                    s.rational().get_num().get_mpz_t());
        }
        if (num_gcd > 1)
            for (Scalar& s : r)
                s = Scalar::from_rational(d, s.rational() / mpq_class(num_gcd));
        for (const Scalar& s : r) {
            if (s.is_zero()) continue;
            if (s.rational() < 0)
                for (Scalar& t : r) t = -t;
            break;
        }
    }

    bool add(std::vector<Scalar> r) {
        if ((int)r.size() != width) fail(errc::shape_mismatch, "constraint row width");
        if (rational) make_primitive(r);
        for (std::size_t k = 0; k < rows.size(); ++k) {
            int p = pivots[k];
            Scalar f = r[(std::size_t)p];
            if (f.is_zero()) continue;
            if (!rational) {
                for (int j = 0; j < width; ++j)
                    r[(std::size_t)j] = r[(std::size_t)j] - f * rows[k][(std::size_t)j];
            } else {
                Scalar a = rows[k][(std::size_t)p];
                for (int j = 0; j < width; ++j)
                    r[(std::size_t)j] = a * r[(std::size_t)j] - f * rows[k][(std::size_t)j];
                make_primitive(r);
            }
        }
        int jp = -1;
        for (int j = 0; j < width && jp < 0; ++j)
            if (!r[(std::size_t)j].is_zero()) jp = j;
        if (jp < 0) return false;
        if (!rational) {
            Scalar inv = r[(std::size_t)jp].inverse();
            for (int j = 0; j < width; ++j) r[(std::size_t)j] = inv * r[(std::size_t)j];
        }
        // Keep stored rows clear at the new pivot so one elimination pass
        // stays complete.
        for (std::size_t k = 0; k < rows.size(); ++k) {
            Scalar f = rows[k][(std::size_t)jp];
            if (f.is_zero()) continue;
            if (!rational) {
                for (int j = 0; j < width; ++j)
                    rows[k][(std::size_t)j] =
                        rows[k][(std::size_t)j] - f * r[(std::size_t)j];
            } else {
                Scalar a = r[(std::size_t)jp];
                for (int j = 0; j < width; ++j)
                    rows[k][(std::size_t)j] =
                        a * rows[k][(std::size_t)j] - f * r[(std::size_t)j];
                make_primitive(rows[k]);
            }
        }
        rows.push_back(std::move(r));
        pivots.push_back(jp);
        return true;
    }
};

// sink(row, X, Y) consumes one constraint row; X/Y are null for derived
// combination rows. Returning false stops the stream.
using RowSink =
    std::function<bool(std::vector<Scalar>, const MunnElement*, const MunnElement*)>;

bool emit_pair(const ContextPtr& c, product_kind kind, const MunnElement& X,
               const MunnElement& Y, const RowSink& sink) {
    if (!product_of(kind, X, Y).is_zero())
        fail(errc::idempotency_failure, "structured zero-product family failed verification");
    return sink(pair_row(c, X, Y), &X, &Y);
}

std::vector<Scalar> row_minus(const ContextPtr& c, std::vector<Scalar> a,
                              const std::vector<Scalar>& b) {
    (void)c;
    for (std::size_t j = 0; j < a.size(); ++j) a[j] = a[j] - b[j];
    return a;
}

void stream_structured(const ContextPtr& c, product_kind kind, const RowSink& sink) {
    int m = c->m(), n = c->n(), r = c->r();
    auto u = [&](int i, int j) { return unit_element(c, 1, i, j); };
    auto delta = [&](int j, int p) { return j == p && j <= r; };
    bool jordan = kind == product_kind::jordan;

    // (a) annihilating unit pairs.
    for (int i = 1; i <= m; ++i)
        for (int j = 1; j <= n; ++j)
            for (int p = 1; p <= m; ++p)
                for (int q = 1; q <= n; ++q) {
                    if (delta(j, p)) continue;
                    if (jordan && delta(q, i)) continue;
                    if (!emit_pair(c, kind, u(i, j), u(p, q), sink)) return;
                }

    // (b) row-by-column families: C supported on row i with coordinates
    // e1 + ek, D on column q with e1 - ek, so the truncated inner product
    // vanishes.
    for (int i = 1; i <= m; ++i)
        for (int q = 1; q <= n; ++q) {
            if (jordan && delta(q, i)) continue;
            for (int k = 2; k <= r; ++k) {
                MunnElement C = u(i, 1) + u(i, k);
                MunnElement D = u(1, q) + (-u(k, q));
                if (!emit_pair(c, kind, C, D, sink)) return;
            }
        }

    if (!jordan) return;

    // (b') the transposed families: C on column j, D on row p.
    for (int j = 1; j <= n; ++j)
        for (int p = 1; p <= m; ++p) {
            if (delta(j, p)) continue;
            for (int k = 2; k <= r; ++k) {
                MunnElement C = u(1, j) + u(k, j);
                MunnElement D = u(p, 1) + (-u(p, k));
                if (!emit_pair(c, kind, C, D, sink)) return;
            }
        }

    // (c) mixed three-term families. The two-term pairs stand alone; each
    // three-term pair is followed by the difference row against its
    // two-term companion, which is the clean five-term linear relation.
    for (int i = 1; i <= r; ++i)
        for (int k = 1; k <= r; ++k) {
            if (i == k) continue;
            MunnElement Ep = u(k, i) + u(i, k);
            MunnElement Fp = (-u(k, i)) + u(i, k);
            if (!emit_pair(c, kind, Ep, Fp, sink)) return;
            std::vector<Scalar> rp = pair_row(c, Ep, Fp);
            for (int j = r + 1; j <= n; ++j) {
                MunnElement E = u(k, i) + u(i, k) + u(k, j);
                MunnElement F = (-u(k, i)) + u(i, k) + (-u(k, j));
                if (!emit_pair(c, kind, E, F, sink)) return;
                if (!sink(row_minus(c, pair_row(c, E, F), rp), nullptr, nullptr)) return;
            }
        }
    for (int i = 1; i <= m; ++i)
        for (int j = 1; j <= n; ++j)
            for (int k = 1; k <= r; ++k) {
                if (i == k || j == k) continue;
                MunnElement G = u(i, k) + (-u(k, j));
                MunnElement H = u(i, k) + u(k, j);
                if (!emit_pair(c, kind, G, H, sink)) return;
            }
    // Mirror of the first family for rows beyond r.
    for (int j = 1; j <= r; ++j)
        for (int k = 1; k <= r; ++k) {
            if (j == k) continue;
            MunnElement Ep = u(k, j) + u(j, k);
            MunnElement Fp = (-u(k, j)) + u(j, k);
            std::vector<Scalar> rp = pair_row(c, Ep, Fp);
            for (int i = r + 1; i <= m; ++i) {
                MunnElement E = u(k, j) + u(j, k) + u(i, k);
                MunnElement F = (-u(k, j)) + u(j, k) + u(i, k);
                if (!emit_pair(c, kind, E, F, sink)) return;
                if (!sink(row_minus(c, pair_row(c, E, F), rp), nullptr, nullptr)) return;
            }
        }

    // (d) annihilator probes: for deterministic short elements X, a basis
    // of {Y : X o Y = 0} gives every row with X on the left. Units first,
    // then two-term sums and differences.
    int N = m * n;
    auto probe = [&](const MunnElement& X) -> bool {
        Matrix L = Matrix::zero(c->domain(), N, N);
        for (int b = 0; b < N; ++b) {
            std::vector<Scalar> col = vec_of(product_of(kind, X, unit_of_cell(c, b)));
            for (int a = 0; a < N; ++a) L.set(a, b, col[(std::size_t)a]);
        }
        Matrix K = L.kernel();
        for (int b = 0; b < K.cols(); ++b) {
            Matrix Ym = Matrix::zero(c->domain(), m, n);
            for (int a = 0; a < N; ++a) Ym.set(a / n, a % n, K.at(a, b));
            if (!emit_pair(c, kind, X, MunnElement(c, Ym), sink)) return false;
        }
        return true;
    };
    for (int a = 0; a < N; ++a)
        if (!probe(unit_of_cell(c, a))) return;
    for (int a = 0; a < N; ++a)
        for (int b = a + 1; b < N; ++b) {
            if (!probe(unit_of_cell(c, a) + unit_of_cell(c, b))) return;
            if (!probe(unit_of_cell(c, a) + (-unit_of_cell(c, b)))) return;
        }
}

// Random probe with its annihilator basis, for the sampled strategy.
long sampled_pairs(const ContextPtr& c, product_kind kind, Rng& rng, long want,
                   const RowSink& sink) {
    int m = c->m(), n = c->n(), N = m * n;
    long probe_cap = want > (LONG_MAX - 16) / 4 ? LONG_MAX : 4 * want + 16;
    long emitted = 0;
    for (long probes = 0; emitted < want && probes < probe_cap; ++probes) {
        MunnElement X = rng.element(c, 2);
        if (X.is_zero()) continue;
        Matrix L = Matrix::zero(c->domain(), N, N);
        for (int b = 0; b < N; ++b) {
            std::vector<Scalar> col = vec_of(product_of(kind, X, unit_of_cell(c, b)));
            for (int a = 0; a < N; ++a) L.set(a, b, col[(std::size_t)a]);
        }
        Matrix K = L.kernel();
        for (int b = 0; b < K.cols() && emitted < want; ++b) {
            Matrix Ym = Matrix::zero(c->domain(), m, n);
            for (int a = 0; a < N; ++a) Ym.set(a / n, a % n, K.at(a, b));
            ++emitted;
            if (!emit_pair(c, kind, X, MunnElement(c, Ym), sink)) return emitted;
        }
    }
    return emitted;
}

} // namespace

Scalar BilinearFunctional::eval(const MunnElement& X, const MunnElement& Y) const {
    MunnElement Xc = transport_to_canonical(X), Yc = transport_to_canonical(Y);
    if (!Xc.context()->same_algebra(*ctx))
        fail(errc::context_mismatch, "functional evaluated on a different algebra");
    std::vector<Scalar> xa = vec_of(Xc), yb = vec_of(Yc);
    Scalar acc = Scalar::zero(ctx->domain());
    int N = ctx->m() * ctx->n();
    for (int a = 0; a < N; ++a) {
        if (xa[(std::size_t)a].is_zero()) continue;
        for (int b = 0; b < N; ++b) {
            if (yb[(std::size_t)b].is_zero()) continue;
            acc = acc + xa[(std::size_t)a] * lam.at(a, b) * yb[(std::size_t)b];
        }
    }
    return acc;
}

Scalar LinearFunctional::eval(const MunnElement& X) const {
    MunnElement Xc = transport_to_canonical(X);
    if (!Xc.context()->same_algebra(*ctx))
        fail(errc::context_mismatch, "functional evaluated on a different algebra");
    Scalar acc = Scalar::zero(ctx->domain());
    for (int i = 0; i < ctx->m(); ++i)
        for (int j = 0; j < ctx->n(); ++j)
            acc = acc + tau.at(i, j) * Xc.mat().at(i, j);
    return acc;
}

std::vector<Matrix> scalar_lemma_oracle(const ScalarDomain& d, int n) {
    if (d.kind() != domain_kind::prime_field)
        fail(errc::domain_mismatch, "the scalar lemma oracle enumerates over GF(p)");
    require_char_not_23(d, "the scalar lemma oracle");
    if (n < 1) fail(errc::index_out_of_range, "the scalar lemma oracle needs n >= 1");
    double pairs = 1.0;
    for (int t = 0; t < 2 * n; ++t) pairs *= (double)d.p();
    if (pairs > 1e7)
        fail(errc::enumeration_guard, "p^(2n) exceeds the enumeration guard of 10^7");

    std::uint64_t p = d.p();
    std::uint64_t pn = 1;
    for (int t = 0; t < n; ++t) pn *= p;

    RowBasis basis(d, n * n);
    std::vector<std::uint64_t> a((std::size_t)n), b((std::size_t)n);
    for (std::uint64_t ia = 1; ia < pn; ++ia) {
        std::uint64_t rem = ia;
        for (int t = 0; t < n; ++t) {
            a[(std::size_t)t] = rem % p;
            rem /= p;
        }
        for (std::uint64_t ib = 1; ib < pn; ++ib) {
            rem = ib;
            std::uint64_t dot = 0;
            for (int t = 0; t < n; ++t) {
                b[(std::size_t)t] = rem % p;
                rem /= p;
                dot = (dot + a[(std::size_t)t] * b[(std::size_t)t]) % p;
            }
            if (dot != 0) continue;
            std::vector<Scalar> row;
            row.reserve((std::size_t)(n * n));
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    row.push_back(Scalar::from_int(d, (long)(a[(std::size_t)i] *
                                                             b[(std::size_t)j] % p)));
            basis.add(std::move(row));
        }
    }

    // Solution space of the collected constraints, enumerated entirely.
    Matrix sys = Matrix::zero(d, basis.rank(), n * n);
    for (int k = 0; k < basis.rank(); ++k)
        for (int j = 0; j < n * n; ++j) sys.set(k, j, basis.rows[(std::size_t)k][(std::size_t)j]);
    Matrix ker = sys.kernel();
    int dim = ker.cols();
    double countd = 1.0;
    for (int t = 0; t < dim; ++t) countd *= (double)p;
    if (countd > 1e7)
        fail(errc::enumeration_guard, "passing-matrix family exceeds the enumeration guard");

    std::uint64_t total = 1;
    for (int t = 0; t < dim; ++t) total *= p;
    std::vector<Matrix> out;
    out.reserve((std::size_t)total);
    for (std::uint64_t idx = 0; idx < total; ++idx) {
        std::uint64_t rem = idx;
        Matrix C = Matrix::zero(d, n, n);
        for (int t = 0; t < dim; ++t) {
            long digit = (long)(rem % p);
            rem /= p;
            if (digit == 0) continue;
            Scalar sc = Scalar::from_int(d, digit);
            for (int e = 0; e < n * n; ++e)
                C.set(e / n, e % n, C.at(e / n, e % n) + sc * ker.at(e, t));
        }
        out.push_back(std::move(C));
    }
    return out;
}

int multiplication_image_dim(const ContextPtr& ctx, product_kind kind) {
    require_field(ctx->domain(), "multiplication_image_dim");
    ContextPtr c = ctx->canonical();
    int N = c->m() * c->n();
    RowBasis basis(c->domain(), N);
    for (int a = 0; a < N && basis.rank() < N; ++a)
        for (int b = 0; b < N && basis.rank() < N; ++b) {
            MunnElement prod = product_of(kind, unit_of_cell(c, a), unit_of_cell(c, b));
            if (prod.is_zero()) continue;
            basis.add(vec_of(prod));
        }
    return basis.rank();
}

std::vector<ZeroPair> generate_zero_product_pairs(const ContextPtr& ctx, product_kind kind,
                                                  bool sampled, std::uint64_t seed,
                                                  long count) {
    require_field(ctx->domain(), "zero-product pair generation");
    ContextPtr c = ctx->canonical();
    std::vector<ZeroPair> out;
    if (count <= 0) return out;
    RowSink sink = [&](std::vector<Scalar>, const MunnElement* X, const MunnElement* Y) {
        if (X && Y) out.push_back(ZeroPair{*X, *Y});
        return (long)out.size() < count;
    };
    if (sampled) {
        Rng rng(seed);
        sampled_pairs(c, kind, rng, count, sink);
    } else {
        stream_structured(c, kind, sink);
    }
    return out;
}

Matrix structured_constraint_rows(const ContextPtr& ctx, product_kind kind) {
    require_field(ctx->domain(), "structured constraint rows");
    ContextPtr c = ctx->canonical();
    require_small(c, "structured constraint rows");
    int N = c->m() * c->n();
    std::vector<std::vector<Scalar>> rows;
    stream_structured(c, kind, [&](std::vector<Scalar> row, const MunnElement*,
                                   const MunnElement*) {
        rows.push_back(std::move(row));
        return true;
    });
    Matrix out = Matrix::zero(c->domain(), (int)rows.size(), N * N);
    for (std::size_t k = 0; k < rows.size(); ++k)
        for (int j = 0; j < N * N; ++j) out.set((int)k, j, rows[k][(std::size_t)j]);
    return out;
}

ZpdCertificate check_zpd(const ContextPtr& ctx, product_kind kind, std::uint64_t seed,
                         long max_constraints) {
    require_field(ctx->domain(), "check_zpd");
    require_char_not_23(ctx->domain(), "check_zpd");
    ContextPtr c = ctx->canonical();
    require_small(c, "check_zpd");

    int N = c->m() * c->n();
    int U = N * N;
    int target = multiplication_image_dim(c, kind);
    long cap = max_constraints <= 0 ? LONG_MAX : max_constraints;

    RowBasis basis(c->domain(), U);
    long used = 0;
    auto certified = [&] { return U - basis.rank() == target; };

    RowSink sink = [&](std::vector<Scalar> row, const MunnElement*, const MunnElement*) {
        ++used;
        basis.add(std::move(row));
        return used < cap && !certified();
    };
    stream_structured(c, kind, sink);
    if (!certified() && used < cap) {
        // An explicit cap bounds the sampling stage directly; with no cap the
        // sampler still stops after a fixed budget so the verdict stays finite.
        long sample_budget = cap == LONG_MAX ? 4096 : cap - used;
        Rng rng(seed);
        sampled_pairs(c, kind, rng, sample_budget, sink);
    }
    return ZpdCertificate{kind, used, U - basis.rank(), target,
                          certified() ? zpd_verdict::certified : zpd_verdict::inconclusive};
}

std::optional<LinearFunctional> factor_functional(const ContextPtr& ctx,
                                                  const BilinearFunctional& phi,
                                                  product_kind kind) {
    require_field(ctx->domain(), "factor_functional");
    ContextPtr c = ctx->canonical();
    require_small(c, "factor_functional");
    if (!phi.ctx->same_algebra(*c))
        fail(errc::context_mismatch, "functional belongs to a different algebra");
    int N = c->m() * c->n();

    // Precondition: phi kills every structured zero-product row.
    bool clean = true;
    stream_structured(c, kind, [&](std::vector<Scalar> row, const MunnElement*,
                                   const MunnElement*) {
        Scalar acc = Scalar::zero(c->domain());
        for (int a = 0; a < N && clean; ++a)
            for (int b = 0; b < N; ++b) {
                const Scalar& coef = row[(std::size_t)(a * N + b)];
                if (coef.is_zero()) continue;
                acc = acc + coef * phi.lam.at(a, b);
            }
        clean = acc.is_zero();
        return clean;
    });
    if (!clean)
        fail(errc::not_certified,
             "functional does not vanish on a structured zero-product pair");

    // tau on the full unit-pair grid: tau(u_a prod u_b) = lam[a][b].
    Matrix A = Matrix::zero(c->domain(), N * N, N);
    Matrix rhs = Matrix::zero(c->domain(), N * N, 1);
    for (int a = 0; a < N; ++a)
        for (int b = 0; b < N; ++b) {
            std::vector<Scalar> pv =
                vec_of(product_of(kind, unit_of_cell(c, a), unit_of_cell(c, b)));
            for (int t = 0; t < N; ++t) A.set(a * N + b, t, pv[(std::size_t)t]);
            rhs.set(a * N + b, 0, phi.lam.at(a, b));
        }
    auto sol = A.solve(rhs);
    if (!sol) return std::nullopt;
    Matrix tau = Matrix::zero(c->domain(), c->m(), c->n());
    for (int t = 0; t < N; ++t) tau.set(t / c->n(), t % c->n(), sol->at(t, 0));
    return LinearFunctional{c, tau};
}

BilinearFunctional compose_functional(const LinearFunctional& tau, product_kind kind) {
    const ContextPtr& c = tau.ctx;
    int N = c->m() * c->n();
    Matrix lam = Matrix::zero(c->domain(), N, N);
    for (int a = 0; a < N; ++a)
        for (int b = 0; b < N; ++b)
            lam.set(a, b, tau.eval(product_of(kind, unit_of_cell(c, a), unit_of_cell(c, b))));
    return BilinearFunctional{c, lam};
}

} // namespace munn
