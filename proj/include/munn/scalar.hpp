#ifndef MUNN_SCALAR_HPP
#define MUNN_SCALAR_HPP

#include <array>
#include <cstdint>
#include <string>
#include <variant>

#include <gmpxx.h>

#include "munn/error.hpp"

namespace munn {

enum class domain_kind { prime_field, rationals, rational_quaternions };

// Coefficient domain for a Munn algebra: GF(p), Q, or the rational
// quaternions H(Q). Value type, cheap to copy.
class ScalarDomain {
public:
    static ScalarDomain gf(std::uint64_t p);
    static ScalarDomain rationals();
    static ScalarDomain quaternions();

    domain_kind kind() const { return kind_; }
    std::uint64_t p() const { return p_; }
    // 0 for Q and H(Q).
    std::uint64_t characteristic() const {
        return kind_ == domain_kind::prime_field ? p_ : 0;
    }
    bool commutative() const { return kind_ != domain_kind::rational_quaternions; }
    bool is_field() const { return kind_ != domain_kind::rational_quaternions; }

    bool operator==(const ScalarDomain& o) const {
        return kind_ == o.kind_ && p_ == o.p_;
    }
    bool operator!=(const ScalarDomain& o) const { return !(*this == o); }

    std::string describe() const;

private:
    ScalarDomain(domain_kind k, std::uint64_t p) : kind_(k), p_(p) {}
    domain_kind kind_;
    std::uint64_t p_; // prime modulus, prime_field only
};

// Quaternion a + bi + cj + dk with rational components.
using quat_parts = std::array<mpq_class, 4>;

// Exact scalar in one of the three domains. Equality is structural on the
// canonical representation (least residue / reduced fraction / reduced
// component fractions), so operator== is exact value equality.
class Scalar {
public:
    static Scalar zero(const ScalarDomain& d);
    static Scalar one(const ScalarDomain& d);
    static Scalar from_int(const ScalarDomain& d, long v);
    static Scalar from_rational(const ScalarDomain& d, const mpq_class& q);
    static Scalar from_quat(const ScalarDomain& d, quat_parts q);

    // Literal grammar: GF(p) decimal integer (any residue, reduced mod p);
    // Q "[-]num[/den]"; H(Q) sum of terms "[coeff][i|j|k]" joined by +/-.
    static Scalar parse(const ScalarDomain& d, const std::string& text);
    std::string to_string() const;

    const ScalarDomain& domain() const { return dom_; }

    bool is_zero() const;
    bool is_one() const;

    Scalar operator+(const Scalar& o) const;
    Scalar operator-(const Scalar& o) const;
    Scalar operator*(const Scalar& o) const;
    Scalar operator-() const;
    bool operator==(const Scalar& o) const;
    bool operator!=(const Scalar& o) const { return !(*this == o); }

    // Multiplicative inverse; fails with errc::singular_matrix-adjacent
    // division error on zero.
    Scalar inverse() const;

    // Quaternion conjugate; identity on commutative domains.
    Scalar conj() const;

    // Reduced norm as a rational: a^2+b^2+c^2+d^2 for quaternions, x^2 for
    // rationals. Not defined for GF(p).
    mpq_class norm() const;

    // Component access. GF residue for prime_field only; rational value for
    // rationals only; parts for quaternions only.
    std::uint64_t residue() const;
    const mpq_class& rational() const;
    const quat_parts& quat() const;

private:
    Scalar(const ScalarDomain& d) : dom_(d) {}
    void check_same(const Scalar& o) const;

    ScalarDomain dom_ = ScalarDomain::rationals();
    std::variant<std::uint64_t, mpq_class, quat_parts> v_;
};

} // namespace munn

#endif
