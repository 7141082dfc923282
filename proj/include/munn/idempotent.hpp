#ifndef MUNN_IDEMPOTENT_HPP
#define MUNN_IDEMPOTENT_HPP

#include "munn/context.hpp"

namespace munn {

// Idempotent catalog for a canonical context (P = E_r). Every constructor
// checks e * e == e before returning, so a successful return is a verified
// idempotent. Indices are 1-based.

// (1, s, s), s <= r.
MunnElement idem_diag(const ContextPtr& ctx, int s);
// (1, s, s) + (h, s, t): row idempotent, s <= r, t != s, t <= n.
MunnElement idem_right(const ContextPtr& ctx, int s, int t, const Scalar& h);
// (1, s, s) + (h, t, s): column idempotent, s <= r, t != s, t <= m.
MunnElement idem_left(const ContextPtr& ctx, int s, int t, const Scalar& h);
// (h, s, s) + (h, t, s) + (1-h, s, t) + (1-h, t, t), s != t, both <= r.
MunnElement idem_square(const ContextPtr& ctx, int s, int t, const Scalar& h);
// (1, 1, 1) + (h, s, 1), 2 <= s <= m.
MunnElement idem_corner(const ContextPtr& ctx, int s, const Scalar& h);

struct IdempotentSpec {
    std::string family; // "diag" | "right" | "left" | "square" | "corner"
    int s = 0;
    int t = 0;
    std::optional<Scalar> h;
};

std::vector<MunnElement> standard_idempotents(const ContextPtr& ctx,
                                              const std::vector<IdempotentSpec>& specs);

// Constructive span witnesses. Each engine canonicalizes, builds the witness
// cell by cell, and transports it back to the input's context. The returned
// witness recombines exactly to A.

// Scalar coefficients allowed, words of length <= 2, at most 4 terms per
// nonzero cell. Needs r >= 1. A coefficient is emitted only for the (1,1)
// cell when r = 1; everything else folds the entry into an idempotent
// parameter.
Witness decompose_algebra_idempotents(const MunnElement& A);

// Signs only (ring span), words of length <= 2, at most 4 terms per nonzero
// cell. Needs r >= 2.
Witness decompose_ring_idempotents(const MunnElement& A);

// Jordan span: terms +/- (e o f) with e, f verified idempotents, at most 5
// terms per nonzero cell. Needs r >= 2 and characteristic != 2.
Witness decompose_jordan_idempotents(const MunnElement& A);

} // namespace munn

#endif
