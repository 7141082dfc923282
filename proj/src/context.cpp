#include "munn/context.hpp"

namespace munn {

ContextPtr make_context(const ScalarDomain& d, int m, int n, const Matrix& P) {
    if (m < 2 || n < 2 || m > 64 || n > 64)
        fail(errc::context_too_small, "context needs 2 <= m, n <= 64");
    if (P.domain() != d) fail(errc::domain_mismatch, "sandwich matrix domain differs");
    if (P.rows() != n || P.cols() != m)
        fail(errc::shape_mismatch, "sandwich matrix must be n x m");

    auto ctx = std::shared_ptr<MunnContext>(new MunnContext(d, m, n, P));
    auto eq = P.equivalence_normalize();
    ctx->r_ = eq.r;
    ctx->V_ = eq.V;
    ctx->W_ = eq.W;
    auto vi = eq.V.invert(), wi = eq.W.invert();
    if (!vi || !wi) fail(errc::singular_matrix, "normalization transform not invertible");
    ctx->Vinv_ = *vi;
    ctx->Winv_ = *wi;
    ctx->canonical_ = (P == Matrix::e_r(d, n, m, eq.r));
    if (!ctx->canonical_)
        ctx->canon_ = make_canonical_context(d, m, n, eq.r);
    ctx->self_ = ctx;
    return ctx;
}

ContextPtr make_canonical_context(const ScalarDomain& d, int m, int n, int r) {
    if (r < 0 || r > std::min(m, n)) fail(errc::shape_mismatch, "bad canonical rank");
    return make_context(d, m, n, Matrix::e_r(d, n, m, r));
}

std::string MunnContext::describe() const {
    return "M(" + dom_.describe() + ", " + std::to_string(m_) + "x" +
           std::to_string(n_) + ", r=" + std::to_string(r_) + ")";
}

MunnElement::MunnElement(ContextPtr ctx, Matrix mat)
    : ctx_(std::move(ctx)), mat_(std::move(mat)) {
    if (!ctx_) fail(errc::context_mismatch, "element needs a context");
    if (mat_.domain() != ctx_->domain())
        fail(errc::domain_mismatch, "element domain differs from context");
    if (mat_.rows() != ctx_->m() || mat_.cols() != ctx_->n())
        fail(errc::shape_mismatch, "element must be m x n");
}

namespace {
void check_same_ctx(const MunnElement& a, const MunnElement& b) {
    if (!a.context()->same_algebra(*b.context()))
        fail(errc::context_mismatch, "elements from different contexts");
}
} // namespace

MunnElement MunnElement::operator+(const MunnElement& o) const {
    check_same_ctx(*this, o);
    return MunnElement(ctx_, mat_ + o.mat_);
}
MunnElement MunnElement::operator-(const MunnElement& o) const {
    check_same_ctx(*this, o);
    return MunnElement(ctx_, mat_ - o.mat_);
}
MunnElement MunnElement::operator-() const { return MunnElement(ctx_, -mat_); }

bool MunnElement::operator==(const MunnElement& o) const {
    return ctx_->same_algebra(*o.ctx_) && mat_ == o.mat_;
}

MunnElement MunnElement::scale_left(const Scalar& c) const {
    return MunnElement(ctx_, mat_.scale_left(c));
}

MunnElement zero_element(const ContextPtr& ctx) {
    return MunnElement(ctx, Matrix::zero(ctx->domain(), ctx->m(), ctx->n()));
}

MunnElement unit_element(const ContextPtr& ctx, const Scalar& g, int i, int s) {
    if (g.domain() != ctx->domain()) fail(errc::domain_mismatch, "unit entry domain differs");
    if (i < 1 || i > ctx->m() || s < 1 || s > ctx->n())
        fail(errc::index_out_of_range, "unit element position out of range");
    Matrix m = Matrix::zero(ctx->domain(), ctx->m(), ctx->n());
    m.set(i - 1, s - 1, g);
    return MunnElement(ctx, m);
}

MunnElement unit_element(const ContextPtr& ctx, long g, int i, int s) {
    return unit_element(ctx, Scalar::from_int(ctx->domain(), g), i, s);
}

MunnElement sandwich_product(const MunnElement& A, const MunnElement& B) {
    check_same_ctx(A, B);
    return MunnElement(A.context(), A.mat() * A.context()->P() * B.mat());
}

MunnElement commutator(const MunnElement& A, const MunnElement& B) {
    return sandwich_product(A, B) - sandwich_product(B, A);
}

MunnElement jordan_product(const MunnElement& A, const MunnElement& B) {
    return sandwich_product(A, B) + sandwich_product(B, A);
}

int ordinary_rank(const MunnElement& A) { return A.mat().row_rank(); }

MunnElement transport_to_canonical(const MunnElement& A) {
    const auto& ctx = A.context();
    if (ctx->is_canonical()) return MunnElement(ctx->canonical(), A.mat());
    return MunnElement(ctx->canonical(), ctx->Winv() * A.mat() * ctx->Vinv());
}

MunnElement transport_from_canonical(const MunnElement& B, const ContextPtr& target) {
    if (!B.context()->same_algebra(*target->canonical()))
        fail(errc::context_mismatch,
             "element is not in the canonical form of the target context");
    if (target->is_canonical()) return MunnElement(target, B.mat());
    return MunnElement(target, target->W() * B.mat() * target->V());
}

ContextPtr dual_context(const ContextPtr& ctx) {
    return make_context(ctx->domain(), ctx->n(), ctx->m(), ctx->P().conj_transpose());
}

MunnElement dual_element(const ContextPtr& dual_ctx, const MunnElement& A) {
    return MunnElement(dual_ctx, A.mat().conj_transpose());
}

const char* witness_kind_name(witness_kind k) {
    switch (k) {
    case witness_kind::comm_product_sum: return "comm_product_sum";
    case witness_kind::idempotent_word_sum: return "idempotent_word_sum";
    case witness_kind::jordan_idempotent_span: return "jordan_idempotent_span";
    }
    return "?";
}

std::size_t Witness::term_count() const {
    switch (kind) {
    case witness_kind::comm_product_sum: return comm_terms.size();
    case witness_kind::idempotent_word_sum: return word_terms.size();
    case witness_kind::jordan_idempotent_span: return jordan_terms.size();
    }
    return 0;
}

namespace {

void check_sign(int sign) {
    if (sign != 1 && sign != -1)
        fail(errc::witness_malformed, "term sign must be +1 or -1");
}

void check_in_ctx(const Witness& w, const MunnElement& e) {
    if (!e.context()->same_algebra(*w.ctx))
        fail(errc::context_mismatch, "witness term element from a different context");
}

bool is_idempotent(const MunnElement& e) {
    return sandwich_product(e, e) == e;
}

} // namespace

EvalReport evaluate_witness(const Witness& w) {
    if (!w.ctx) fail(errc::witness_malformed, "witness has no context");
    MunnElement acc = zero_element(w.ctx);
    std::vector<std::string> failures;

    switch (w.kind) {
    case witness_kind::comm_product_sum: {
        if (!w.word_terms.empty() || !w.jordan_terms.empty())
            fail(errc::witness_malformed, "mixed term kinds in witness");
        for (const auto& t : w.comm_terms) {
            check_sign(t.sign);
            for (const auto* e : {&t.X, &t.Y, &t.Z, &t.W}) check_in_ctx(w, *e);
            MunnElement val = sandwich_product(commutator(t.X, t.Y), commutator(t.Z, t.W));
            acc = t.sign > 0 ? acc + val : acc - val;
        }
        break;
    }
    case witness_kind::idempotent_word_sum: {
        if (!w.comm_terms.empty() || !w.jordan_terms.empty())
            fail(errc::witness_malformed, "mixed term kinds in witness");
        std::size_t tno = 0;
        for (const auto& t : w.word_terms) {
            ++tno;
            check_sign(t.sign);
            if (t.letters.empty())
                fail(errc::witness_malformed, "word term with no letters");
            if (t.coeff && t.coeff->domain() != w.ctx->domain())
                fail(errc::domain_mismatch, "word coefficient domain differs");
            std::size_t lno = 0;
            for (const auto& e : t.letters) {
                ++lno;
                check_in_ctx(w, e);
                if (!is_idempotent(e))
                    failures.push_back("term " + std::to_string(tno) + " letter " +
                                       std::to_string(lno) + " fails e*e = e");
            }
            MunnElement val = t.letters[0];
            for (std::size_t i = 1; i < t.letters.size(); ++i)
                val = sandwich_product(val, t.letters[i]);
            if (t.coeff) val = val.scale_left(*t.coeff);
            acc = t.sign > 0 ? acc + val : acc - val;
        }
        break;
    }
    case witness_kind::jordan_idempotent_span: {
        if (!w.comm_terms.empty() || !w.word_terms.empty())
            fail(errc::witness_malformed, "mixed term kinds in witness");
        std::size_t tno = 0;
        for (const auto& t : w.jordan_terms) {
            ++tno;
            check_sign(t.sign);
            check_in_ctx(w, t.e);
            check_in_ctx(w, t.f);
            if (!is_idempotent(t.e))
                failures.push_back("term " + std::to_string(tno) + " e fails e*e = e");
            if (!is_idempotent(t.f))
                failures.push_back("term " + std::to_string(tno) + " f fails f*f = f");
            MunnElement val = jordan_product(t.e, t.f);
            acc = t.sign > 0 ? acc + val : acc - val;
        }
        break;
    }
    }
    return EvalReport{acc, failures};
}

Witness transport_witness(const Witness& w, bool to_canonical, const ContextPtr& target) {
    if (!w.ctx) fail(errc::witness_malformed, "witness has no context");
    ContextPtr dst;
    if (to_canonical) {
        dst = w.ctx->canonical();
        if (target && !target->same_algebra(*dst))
            fail(errc::context_mismatch, "target is not the canonical context");
    } else {
        if (!target) fail(errc::context_mismatch, "transport needs a target context");
        if (!w.ctx->same_algebra(*target->canonical()))
            fail(errc::context_mismatch,
                 "witness is not in the canonical form of the target context");
        dst = target;
    }
    bool identity_map = w.ctx->same_algebra(*dst);

    auto move_elem = [&](const MunnElement& e) {
        return to_canonical ? transport_to_canonical(e)
                            : transport_from_canonical(e, dst);
    };

    Witness out;
    out.kind = w.kind;
    out.ctx = dst;
    for (const auto& t : w.comm_terms)
        out.comm_terms.push_back(
            CommTerm{t.sign, move_elem(t.X), move_elem(t.Y), move_elem(t.Z), move_elem(t.W)});
    for (const auto& t : w.word_terms) {
        if (t.coeff && !identity_map && !w.ctx->domain().commutative()) {
            const auto& q = t.coeff->quat();
            bool central = q[1] == 0 && q[2] == 0 && q[3] == 0;
            if (!central)
                fail(errc::scalar_transport_unsupported,
                     "non-central scalar coefficient cannot cross a nontrivial transport");
        }
        WordTerm nt;
        nt.sign = t.sign;
        nt.coeff = t.coeff;
        for (const auto& l : t.letters) nt.letters.push_back(move_elem(l));
        out.word_terms.push_back(std::move(nt));
    }
    for (const auto& t : w.jordan_terms)
        out.jordan_terms.push_back(JordanTerm{t.sign, move_elem(t.e), move_elem(t.f)});
    return out;
}

} // namespace munn
