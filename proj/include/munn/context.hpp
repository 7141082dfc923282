#ifndef MUNN_CONTEXT_HPP
#define MUNN_CONTEXT_HPP

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "munn/matrix.hpp"

namespace munn {

class MunnContext;
using ContextPtr = std::shared_ptr<const MunnContext>;

// Munn algebra M(D, m, n, P): m x n matrices over D with sandwich product
// A * P * B, P a fixed n x m matrix. A context is immutable after
// construction and safe to share across threads. The canonicalization
// V P W = E_r (V n x n, W m x m, both invertible) is computed eagerly, and
// Phi(A) = W^-1 A V^-1 is an isomorphism onto M(D, m, n, E_r).
class MunnContext {
public:
    const ScalarDomain& domain() const { return dom_; }
    int m() const { return m_; }
    int n() const { return n_; }
    const Matrix& P() const { return P_; }
    int r() const { return r_; }
    bool is_canonical() const { return canonical_; }

    const Matrix& V() const { return V_; }
    const Matrix& W() const { return W_; }
    const Matrix& Vinv() const { return Vinv_; }
    const Matrix& Winv() const { return Winv_; }

    // The context with the same (D, m, n) and P = E_r; this context itself
    // when already canonical.
    ContextPtr canonical() const { return canon_ ? canon_ : self_.lock(); }

    bool same_algebra(const MunnContext& o) const {
        return dom_ == o.dom_ && m_ == o.m_ && n_ == o.n_ && P_ == o.P_;
    }

    std::string describe() const;

    friend ContextPtr make_context(const ScalarDomain&, int, int, const Matrix&);

private:
    MunnContext(const ScalarDomain& d, int m, int n, const Matrix& P)
        : dom_(d), m_(m), n_(n), P_(P),
          V_(d, 0, 0), W_(d, 0, 0), Vinv_(d, 0, 0), Winv_(d, 0, 0) {}

    ScalarDomain dom_;
    int m_, n_;
    Matrix P_;
    int r_ = 0;
    bool canonical_ = false;
    Matrix V_, W_, Vinv_, Winv_;
    ContextPtr canon_;
    std::weak_ptr<const MunnContext> self_;
};

// Validates shapes (P must be n x m, 2 <= m, n <= 64) and precomputes the
// canonicalization.
ContextPtr make_context(const ScalarDomain& d, int m, int n, const Matrix& P);
ContextPtr make_canonical_context(const ScalarDomain& d, int m, int n, int r);

// Element of a Munn algebra: its m x n matrix plus the owning context.
class MunnElement {
public:
    MunnElement(ContextPtr ctx, Matrix mat);

    const ContextPtr& context() const { return ctx_; }
    const Matrix& mat() const { return mat_; }

    MunnElement operator+(const MunnElement& o) const;
    MunnElement operator-(const MunnElement& o) const;
    MunnElement operator-() const;
    bool operator==(const MunnElement& o) const;
    bool operator!=(const MunnElement& o) const { return !(*this == o); }
    bool is_zero() const { return mat_.is_zero(); }

    MunnElement scale_left(const Scalar& c) const;

private:
    ContextPtr ctx_;
    Matrix mat_;
};

MunnElement zero_element(const ContextPtr& ctx);
// Unit element (g, i, s): entry g at row i, column s, 1-based.
MunnElement unit_element(const ContextPtr& ctx, const Scalar& g, int i, int s);
MunnElement unit_element(const ContextPtr& ctx, long g, int i, int s);

// A * P * B.
MunnElement sandwich_product(const MunnElement& A, const MunnElement& B);
// A*B - B*A under the sandwich product.
MunnElement commutator(const MunnElement& A, const MunnElement& B);
// A*B + B*A under the sandwich product.
MunnElement jordan_product(const MunnElement& A, const MunnElement& B);

// Rank of the element's plain matrix (no sandwich).
int ordinary_rank(const MunnElement& A);

// Phi and Phi^-1 along the stored (V, W) of the element's context.
MunnElement transport_to_canonical(const MunnElement& A);
MunnElement transport_from_canonical(const MunnElement& B, const ContextPtr& target);

// Conjugate-transpose duality: M(D, m, n, P) -> M(D, n, m, P*) is an
// anti-isomorphism, (X * Y)^* = Y^* * X^*. Plain transpose over fields.
ContextPtr dual_context(const ContextPtr& ctx);
MunnElement dual_element(const ContextPtr& dual_ctx, const MunnElement& A);

enum class witness_kind { comm_product_sum, idempotent_word_sum, jordan_idempotent_span };

const char* witness_kind_name(witness_kind k);

// One summand [X,Y] * [Z,W].
struct CommTerm {
    int sign;
    MunnElement X, Y, Z, W;
};

// One summand sign * coeff * (e_1 * e_2 * ... * e_k); the letters must be
// idempotent, the coefficient is optional.
struct WordTerm {
    int sign;
    std::optional<Scalar> coeff;
    std::vector<MunnElement> letters;
};

// One summand sign * (e o f) with e, f idempotent.
struct JordanTerm {
    int sign;
    MunnElement e, f;
};

struct Witness {
    witness_kind kind;
    ContextPtr ctx;
    std::vector<CommTerm> comm_terms;
    std::vector<WordTerm> word_terms;
    std::vector<JordanTerm> jordan_terms;

    std::size_t term_count() const;
};

struct EvalReport {
    MunnElement value;
    // Human-readable description of each claimed idempotent that fails
    // e * e == e; empty means all verified.
    std::vector<std::string> idempotency_failures;
};

// Exact evaluation. Malformed structure (bad signs, empty word, foreign
// contexts) throws; idempotency failures are reported, not thrown.
EvalReport evaluate_witness(const Witness& w);

// Maps every element of the witness through Phi (to_canonical = true) or
// Phi^-1. Scalar coefficients survive only when they commute with the
// transport matrices: commutative domain, central coefficient, or identity
// (V, W); otherwise fails with scalar_transport_unsupported.
Witness transport_witness(const Witness& w, bool to_canonical, const ContextPtr& target);

} // namespace munn

#endif
