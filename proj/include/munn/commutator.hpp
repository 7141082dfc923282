#ifndef MUNN_COMMUTATOR_HPP
#define MUNN_COMMUTATOR_HPP

#include <cstdint>

#include "munn/context.hpp"

namespace munn {

// ceil(rank(A)/r). Every sandwich product factors through P, so a single
// [X,Y]*[Z,W] has rank at most r and a T-term witness forces
// rank(A) <= T*r. Needs r >= 1.
int xi_lower_bound(const MunnElement& A);

struct XiReport {
    // Per-element lower bound ceil(rank(A)/r).
    int lower;
    // Context-level bound ceil(min(m,n)/r), attained at full-rank elements.
    int algebra_lower;
    // Term count of the emitted witness.
    int upper;
    Witness witness;
};

// Cell-by-cell witness, one product per nonzero cell with the (1,2)/(2,1)
// residual cells merged into a single product. Needs r >= 2.
Witness decompose_comm_squares(const MunnElement& A);

// Scalar-level commutator-square decomposition over H(Q):
// x = sum of [a,b]*[c,d] over the quaternion basis, at most 4 terms.
struct ScalarCommTerm {
    Scalar a, b, c, d;
};
std::vector<ScalarCommTerm> baxter_decompose_scalar(const Scalar& x);

// Sandwich rank 1 over H(Q): per-cell witness routed through the (1,1)
// corner, with the corner cell handled by the scalar decomposition above.
// Refuses commutative domains.
Witness decompose_r1(const MunnElement& A);

// Over a field with sandwich rank 1 the (1,1) coordinate kills every
// commutator, so no witness can exist for elements with a nonzero (1,1)
// canonical coordinate. The certificate exhausts all unit basis pairs.
struct R1Refutation {
    ContextPtr ctx; // canonical context the check ran in
    long pairs_checked;
    bool annihilates;            // (1,1) of [u,v] vanished for every pair
    MunnElement nonzero_witness; // (1,1,1), on which the coordinate is 1
};
R1Refutation refute_r1_field(const ContextPtr& ctx);

// Full sandwich rank r = min(m,n): witness with at most 2 products.
XiReport decompose_xi2(const MunnElement& A);

// Intermediate rank 2 <= r < min(m,n): banded witness with at most
// ceil(max(m,n)... precisely ceil(min-side/r) + 3 products.
XiReport decompose_xi_blocks(const MunnElement& A);

// Inner factorization search: M = [B,C] * [D,E] with [B,C] and D
// invertible, plain s x s matrix products. Deterministic in (seed, budget).
// Never claims impossibility: a miss is reported as budget exhaustion.
struct InnerFactorization {
    Matrix B, C, D, E;
};
enum class search_status { found, zero_input, budget_exhausted };
struct SearchResult {
    search_status status;
    std::optional<InnerFactorization> fact;
    long attempts;
};
SearchResult search_inner_factorization(const Matrix& M, std::uint64_t seed, long budget);

// Single-product witness via the search oracle. Needs r = min(m,n) and
// either min(m,n) = 2 or a domain with infinite center (Q, H(Q)).
// A = 0 short-circuits to an empty witness. Budget exhaustion throws the
// soft errc::search_budget_exhausted.
XiReport decompose_xi1(const MunnElement& A, std::uint64_t seed, long budget);

// Dispatcher used by the xi-bounds verb: xi2 when r = min(m,n), banded
// engine when 2 <= r < min(m,n), quaternion rank-1 engine when r = 1.
XiReport xi_bounds(const MunnElement& A);

} // namespace munn

#endif
