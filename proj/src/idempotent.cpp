#include "munn/idempotent.hpp"

namespace munn {

namespace {

void need_canonical(const ContextPtr& ctx) {
    if (!ctx->is_canonical())
        fail(errc::context_mismatch, "idempotent catalog needs a canonical context");
}

MunnElement checked(MunnElement e, const char* family) {
    if (sandwich_product(e, e) != e)
        fail(errc::idempotency_failure, std::string(family) + " candidate is not idempotent");
    return e;
}

Scalar half(const ScalarDomain& d) {
    if (d.characteristic() == 2)
        fail(errc::char_2_unsupported, "1/2 does not exist in characteristic 2");
    return Scalar::from_int(d, 2).inverse();
}

} // namespace

MunnElement idem_diag(const ContextPtr& ctx, int s) {
    need_canonical(ctx);
    if (s < 1 || s > ctx->r()) fail(errc::index_out_of_range, "diag needs 1 <= s <= r");
    return checked(unit_element(ctx, 1, s, s), "diag");
}

MunnElement idem_right(const ContextPtr& ctx, int s, int t, const Scalar& h) {
    need_canonical(ctx);
    if (s < 1 || s > ctx->r()) fail(errc::index_out_of_range, "right needs 1 <= s <= r");
    if (t < 1 || t > ctx->n() || t == s) fail(errc::index_out_of_range, "right needs t != s, t <= n");
    return checked(unit_element(ctx, Scalar::one(ctx->domain()), s, s) +
                       unit_element(ctx, h, s, t),
                   "right");
}

MunnElement idem_left(const ContextPtr& ctx, int s, int t, const Scalar& h) {
    need_canonical(ctx);
    if (s < 1 || s > ctx->r()) fail(errc::index_out_of_range, "left needs 1 <= s <= r");
    if (t < 1 || t > ctx->m() || t == s) fail(errc::index_out_of_range, "left needs t != s, t <= m");
    return checked(unit_element(ctx, Scalar::one(ctx->domain()), s, s) +
                       unit_element(ctx, h, t, s),
                   "left");
}

MunnElement idem_square(const ContextPtr& ctx, int s, int t, const Scalar& h) {
    need_canonical(ctx);
    if (s < 1 || s > ctx->r() || t < 1 || t > ctx->r() || s == t)
        fail(errc::index_out_of_range, "square needs distinct s, t <= r");
    Scalar one = Scalar::one(ctx->domain());
    return checked(unit_element(ctx, h, s, s) + unit_element(ctx, h, t, s) +
                       unit_element(ctx, one - h, s, t) + unit_element(ctx, one - h, t, t),
                   "square");
}

MunnElement idem_corner(const ContextPtr& ctx, int s, const Scalar& h) {
    need_canonical(ctx);
    if (ctx->r() < 1) fail(errc::rank_too_low, "corner needs r >= 1");
    if (s < 2 || s > ctx->m()) fail(errc::index_out_of_range, "corner needs 2 <= s <= m");
    return checked(unit_element(ctx, 1, 1, 1) + unit_element(ctx, h, s, 1), "corner");
}

std::vector<MunnElement> standard_idempotents(const ContextPtr& ctx,
                                              const std::vector<IdempotentSpec>& specs) {
    std::vector<MunnElement> out;
    out.reserve(specs.size());
    for (const auto& sp : specs) {
        Scalar h = sp.h ? *sp.h : Scalar::one(ctx->domain());
        if (sp.family == "diag") out.push_back(idem_diag(ctx, sp.s));
        else if (sp.family == "right") out.push_back(idem_right(ctx, sp.s, sp.t, h));
        else if (sp.family == "left") out.push_back(idem_left(ctx, sp.s, sp.t, h));
        else if (sp.family == "square") out.push_back(idem_square(ctx, sp.s, sp.t, h));
        else if (sp.family == "corner") out.push_back(idem_corner(ctx, sp.s, h));
        else fail(errc::schema_error, "unknown idempotent family '" + sp.family + "'");
    }
    return out;
}

namespace {

// Appends sign * [letters...] to w.
void word(Witness& w, int sign, std::vector<MunnElement> letters) {
    w.word_terms.push_back(WordTerm{sign, std::nullopt, std::move(letters)});
}

void word_scaled(Witness& w, int sign, const Scalar& coeff, std::vector<MunnElement> letters) {
    w.word_terms.push_back(WordTerm{sign, coeff, std::move(letters)});
}

// (a - b) * (c - d) expanded into four sign words of length 2.
void cross(Witness& w, const MunnElement& a, const MunnElement& b,
           const MunnElement& c, const MunnElement& d) {
    word(w, +1, {a, c});
    word(w, -1, {a, d});
    word(w, -1, {b, c});
    word(w, +1, {b, d});
}

Witness finish(Witness w, const MunnElement& A) {
    if (A.context()->is_canonical()) {
        // Engine already worked in the input's own context.
        return w;
    }
    return transport_witness(w, false, A.context());
}

struct CellLoop {
    ContextPtr ctxc;
    MunnElement Ac;
    CellLoop(const MunnElement& A)
        : ctxc(A.context()->canonical()), Ac(transport_to_canonical(A)) {}
};

} // namespace

Witness decompose_algebra_idempotents(const MunnElement& A) {
    const auto& ctx = A.context();
    if (ctx->r() < 1) fail(errc::rank_too_low, "algebra span needs r >= 1");
    CellLoop cl(A);
    const auto& c = cl.ctxc;
    const ScalarDomain& dom = c->domain();
    Scalar one = Scalar::one(dom);
    int r = c->r();

    Witness w;
    w.kind = witness_kind::idempotent_word_sum;
    w.ctx = c;
    MunnElement d1 = idem_diag(c, 1);

    for (int s = 1; s <= c->m(); ++s)
        for (int t = 1; t <= c->n(); ++t) {
            Scalar h = cl.Ac.mat().at(s - 1, t - 1);
            if (h.is_zero()) continue;
            if (s == t && s <= r && h == one) {
                word(w, +1, {idem_diag(c, s)});
            } else if (s == 1 && t == 1) {
                if (r >= 2) {
                    // (h,1,1) = (h,1,2) * (1,2,1) with both factors split as
                    // differences of idempotents.
                    cross(w, idem_right(c, 1, 2, h), d1, idem_corner(c, 2, one), d1);
                } else if (h == one) {
                    word(w, +1, {d1});
                } else {
                    word_scaled(w, +1, h, {d1});
                }
            } else if (s == 1) {
                word(w, +1, {idem_right(c, 1, t, h)});
                word(w, -1, {d1});
            } else if (t == 1) {
                word(w, +1, {idem_corner(c, s, h)});
                word(w, -1, {d1});
            } else {
                // (h,s,t) = (h,s,1) * (1,1,t), each factor a difference of
                // idempotents.
                cross(w, idem_corner(c, s, h), d1, idem_right(c, 1, t, one), d1);
            }
        }
    return finish(std::move(w), A);
}

Witness decompose_ring_idempotents(const MunnElement& A) {
    const auto& ctx = A.context();
    if (ctx->r() < 2) fail(errc::rank_too_low, "ring span needs r >= 2");
    CellLoop cl(A);
    const auto& c = cl.ctxc;
    const ScalarDomain& dom = c->domain();
    Scalar one = Scalar::one(dom);
    int r = c->r();

    Witness w;
    w.kind = witness_kind::idempotent_word_sum;
    w.ctx = c;

    for (int s = 1; s <= c->m(); ++s)
        for (int t = 1; t <= c->n(); ++t) {
            Scalar h = cl.Ac.mat().at(s - 1, t - 1);
            if (h.is_zero()) continue;
            if (s == t && s <= r) {
                if (h == one) {
                    word(w, +1, {idem_diag(c, s)});
                } else {
                    // (h,s,s) = (h,s,u) * (1,u,s) through a second diagonal
                    // index u <= r.
                    int u = s == 1 ? 2 : 1;
                    cross(w, idem_right(c, s, u, h), idem_diag(c, s),
                          idem_right(c, u, s, one), idem_diag(c, u));
                }
            } else if (s <= r) {
                word(w, +1, {idem_right(c, s, t, h)});
                word(w, -1, {idem_diag(c, s)});
            } else if (t <= r) {
                word(w, +1, {idem_left(c, t, s, h)});
                word(w, -1, {idem_diag(c, t)});
            } else {
                // s > r and t > r: route through the (1,1) corner.
                cross(w, idem_corner(c, s, h), idem_diag(c, 1),
                      idem_right(c, 1, t, one), idem_diag(c, 1));
            }
        }
    return finish(std::move(w), A);
}

Witness decompose_jordan_idempotents(const MunnElement& A) {
    const auto& ctx = A.context();
    if (ctx->r() < 2) fail(errc::rank_too_low, "jordan span needs r >= 2");
    if (ctx->domain().characteristic() == 2)
        fail(errc::char_2_unsupported, "jordan span needs characteristic != 2");
    CellLoop cl(A);
    const auto& c = cl.ctxc;
    const ScalarDomain& dom = c->domain();
    Scalar one = Scalar::one(dom);
    Scalar h2 = half(dom);
    Scalar h4 = h2 * h2;
    int r = c->r();

    Witness w;
    w.kind = witness_kind::jordan_idempotent_span;
    w.ctx = c;
    auto span = [&](int sign, MunnElement e, MunnElement f) {
        w.jordan_terms.push_back(JordanTerm{sign, std::move(e), std::move(f)});
    };

    for (int s = 1; s <= c->m(); ++s)
        for (int t = 1; t <= c->n(); ++t) {
            Scalar h = cl.Ac.mat().at(s - 1, t - 1);
            if (h.is_zero()) continue;
            if (s == t && s <= r) {
                // Five-term diagonal identity through a second index u <= r:
                // square(s,u,h/2) o diag(s) - left(s,u,h/4) o left(s,u,h/4)
                //   + diag o diag - right(s,u,1/2 - h/4) o (same) + diag o diag.
                int u = s == 1 ? 2 : 1;
                MunnElement ds = idem_diag(c, s);
                MunnElement lf = idem_left(c, s, u, h4 * h);
                MunnElement rt = idem_right(c, s, u, h2 - h4 * h);
                span(+1, idem_square(c, s, u, h2 * h), ds);
                span(-1, lf, lf);
                span(+1, ds, ds);
                span(-1, rt, rt);
                span(+1, ds, ds);
            } else if (s <= r) {
                MunnElement ds = idem_diag(c, s);
                span(+1, idem_right(c, s, t, h), ds);
                span(-1, ds, ds);
            } else if (t <= r) {
                MunnElement dt = idem_diag(c, t);
                span(+1, idem_left(c, t, s, h), dt);
                span(-1, dt, dt);
            } else {
                // Corner cell: (h,s,t) = e o F - e o d - d o F + d o d with
                // e = (1,1,1)+(h,s,1), F = (1,1,1)+(1,1,t), d = (1,1,1).
                MunnElement e = idem_corner(c, s, h);
                MunnElement F = idem_right(c, 1, t, one);
                MunnElement d = idem_diag(c, 1);
                span(+1, e, F);
                span(-1, e, d);
                span(-1, d, F);
                span(+1, d, d);
            }
        }
    return finish(std::move(w), A);
}

} // namespace munn
