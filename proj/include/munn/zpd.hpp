#ifndef MUNN_ZPD_HPP
#define MUNN_ZPD_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "munn/context.hpp"

namespace munn {

enum class product_kind { associative, jordan };
const char* product_kind_name(product_kind k);

// Bilinear functional on a Munn algebra over a field, stored through its
// values on canonical unit pairs: lam(cell(i,j), cell(p,q)) = phi of the
// units (1,i,j) and (1,p,q), with cell(i,q) = (i-1)*n + (q-1). Evaluation
// of arbitrary arguments goes through the canonical transport.
struct BilinearFunctional {
    ContextPtr ctx; // canonical
    Matrix lam;     // (mn) x (mn)
    Scalar eval(const MunnElement& X, const MunnElement& Y) const;
};

// Linear functional through its values on canonical units: tau(i,q) grid.
struct LinearFunctional {
    ContextPtr ctx; // canonical
    Matrix tau;     // m x n
    Scalar eval(const MunnElement& X) const;
};

enum class zpd_verdict { certified, inconclusive };
const char* zpd_verdict_name(zpd_verdict v);

struct ZpdCertificate {
    product_kind kind;
    long constraints_used;
    int solution_dim;
    int target_dim;
    zpd_verdict verdict;
};

// Exhaustive check of the scalar orthogonality lemma over GF(p), p not 2
// or 3: returns every C with a^T C b = 0 whenever a^T b = 0 (expected:
// exactly the p scalar matrices). Guard: p^(2n) <= 10^7.
std::vector<Matrix> scalar_lemma_oracle(const ScalarDomain& d, int n);

// Dimension of span{u*v} (resp. span{u o v}) over all basis pairs.
int multiplication_image_dim(const ContextPtr& ctx, product_kind kind);

struct ZeroPair {
    MunnElement X, Y;
};

// Pairs with X*Y = 0 (resp. X o Y = 0), each verified before emission.
// Structured pairs come in a fixed deterministic order: annihilating unit
// pairs, row-by-column families built from orthogonal vectors, then (for
// the Jordan product) the three-term mixed families and annihilator-basis
// probes. Sampled pairs draw a random element and solve for its right
// annihilator. May return fewer than count.
std::vector<ZeroPair> generate_zero_product_pairs(const ContextPtr& ctx, product_kind kind,
                                                  bool sampled, std::uint64_t seed,
                                                  long count);

// All structured constraint rows in emission order, one row per pair, in
// the (mn)^2 unknowns lam indexed by cellX*(mn)+cellY. For the Jordan
// kind this also appends, directly after the corresponding pair rows, the
// difference rows that tie the mixed families together as literal linear
// relations.
Matrix structured_constraint_rows(const ContextPtr& ctx, product_kind kind);

// Certify by exact rank: feed constraint rows (structured first, then
// seeded samples) and compare the solution dimension against the image
// dimension of the product. CERTIFIED is sound; INCONCLUSIVE only means
// the generated constraints did not close the gap. max_constraints <= 0
// means no cap.
ZpdCertificate check_zpd(const ContextPtr& ctx, product_kind kind, std::uint64_t seed,
                         long max_constraints);

// Exact factorization phi = tau o product, solved on the full unit-pair
// grid. Precondition (checked): phi vanishes on the structured pairs.
// nullopt when the grid system is inconsistent.
std::optional<LinearFunctional> factor_functional(const ContextPtr& ctx,
                                                  const BilinearFunctional& phi,
                                                  product_kind kind);

// tau composed with the product, tabulated on unit pairs.
BilinearFunctional compose_functional(const LinearFunctional& tau, product_kind kind);

} // namespace munn

#endif
