#ifndef MUNN_RNG_HPP
#define MUNN_RNG_HPP

#include <cstdint>
#include <random>

#include "munn/context.hpp"

namespace munn {

// Deterministic seeded generator. Draws use explicit modulo reduction, not
// std distributions, so a fixed seed gives the same stream on every
// platform and standard library.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : g_(seed) {}

    std::uint64_t next() { return g_(); }

    std::uint64_t below(std::uint64_t n) { return n == 0 ? 0 : next() % n; }

    long range(long lo, long hi) { // inclusive
        return lo + (long)below((std::uint64_t)(hi - lo + 1));
    }

    bool coin() { return (next() & 1) != 0; }

    // GF: uniform residue. Q: numerator in [-height, height], denominator in
    // [1, height]. H(Q): four such components.
    Scalar scalar(const ScalarDomain& d, long height = 5) {
        switch (d.kind()) {
        case domain_kind::prime_field:
            return Scalar::from_int(d, (long)below(d.p()));
        case domain_kind::rationals:
            return Scalar::from_rational(d, rat(height));
        case domain_kind::rational_quaternions:
            return Scalar::from_quat(d, quat_parts{rat(height), rat(height),
                                                   rat(height), rat(height)});
        }
        return Scalar::zero(d);
    }

    Scalar nonzero_scalar(const ScalarDomain& d, long height = 5) {
        for (;;) {
            Scalar s = scalar(d, height);
            if (!s.is_zero()) return s;
        }
    }

    // Integer-valued scalar (used where small integral entries are wanted).
    Scalar int_scalar(const ScalarDomain& d, long lo, long hi) {
        return Scalar::from_int(d, range(lo, hi));
    }

    Matrix matrix(const ScalarDomain& d, int rows, int cols, long height = 5) {
        Matrix m(d, rows, cols);
        for (int i = 0; i < rows; ++i)
            for (int j = 0; j < cols; ++j) m.set(i, j, scalar(d, height));
        return m;
    }

    Matrix int_matrix(const ScalarDomain& d, int rows, int cols, long lo, long hi) {
        Matrix m(d, rows, cols);
        for (int i = 0; i < rows; ++i)
            for (int j = 0; j < cols; ++j) m.set(i, j, int_scalar(d, lo, hi));
        return m;
    }

    // Retries until invertible; the density of singular draws is small for
    // every supported domain, so this terminates fast in practice.
    Matrix invertible_matrix(const ScalarDomain& d, int nn, long height = 5) {
        for (;;) {
            Matrix m = matrix(d, nn, nn, height);
            if (m.invert()) return m;
        }
    }

    MunnElement element(const ContextPtr& ctx, long height = 5) {
        return MunnElement(ctx, matrix(ctx->domain(), ctx->m(), ctx->n(), height));
    }

private:
    mpq_class rat(long height) {
        long num = range(-height, height);
        long den = range(1, height);
        mpq_class q(num, den);
        q.canonicalize();
        return q;
    }

    std::mt19937_64 g_;
};

} // namespace munn

#endif
