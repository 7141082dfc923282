#ifndef MUNN_TEST_HELPERS_HPP
#define MUNN_TEST_HELPERS_HPP

#include <stdexcept>
#include <utility>

#include "munn/context.hpp"
#include "munn/rng.hpp"

namespace testutil {

// Runs f expecting a munn::error; returns its code, fails the test (by
// throwing) if nothing was thrown.
template <class F>
munn::errc thrown_code(F&& f) {
    try {
        std::forward<F>(f)();
    } catch (const munn::error& e) {
        return e.code();
    }
    throw std::runtime_error("expected a munn::error, none was thrown");
}

inline bool recombines(const munn::Witness& w, const munn::MunnElement& A) {
    return munn::evaluate_witness(w).value == A;
}

inline munn::ContextPtr canon(const munn::ScalarDomain& d, int m, int n, int r) {
    return munn::make_canonical_context(d, m, n, r);
}

inline int ceil_div(int a, int b) { return (a + b - 1) / b; }

} // namespace testutil

#endif
