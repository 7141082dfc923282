#include "munn/scalar.hpp"

#include <cctype>

namespace munn {

const char* errc_name(errc c) {
    switch (c) {
    case errc::parse_error: return "PARSE_ERROR";
    case errc::schema_error: return "SCHEMA_ERROR";
    case errc::domain_mismatch: return "DOMAIN_MISMATCH";
    case errc::shape_mismatch: return "SHAPE_MISMATCH";
    case errc::context_mismatch: return "CONTEXT_MISMATCH";
    case errc::index_out_of_range: return "INDEX_OUT_OF_RANGE";
    case errc::singular_matrix: return "SINGULAR_MATRIX";
    case errc::rank_too_low: return "RANK_TOO_LOW";
    case errc::context_too_small: return "CONTEXT_TOO_SMALL";
    case errc::char_2_unsupported: return "CHAR_2_UNSUPPORTED";
    case errc::char_3_unsupported: return "CHAR_3_UNSUPPORTED";
    case errc::commutative_unsupported: return "COMMUTATIVE_UNSUPPORTED";
    case errc::noncommutative_unsupported: return "NONCOMMUTATIVE_UNSUPPORTED";
    case errc::scalar_transport_unsupported: return "SCALAR_TRANSPORT_UNSUPPORTED";
    case errc::witness_malformed: return "WITNESS_MALFORMED";
    case errc::idempotency_failure: return "IDEMPOTENCY_FAILURE";
    case errc::enumeration_guard: return "ENUMERATION_GUARD";
    case errc::search_budget_exhausted: return "SEARCH_BUDGET_EXHAUSTED";
    case errc::not_certified: return "NOT_CERTIFIED";
    }
    return "UNKNOWN";
}

int errc_exit_class(errc c) {
    switch (c) {
    case errc::parse_error:
    case errc::schema_error:
        return 1;
    case errc::search_budget_exhausted:
    case errc::not_certified:
        return 3;
    default:
        return 2;
    }
}

namespace {

bool is_prime_u64(std::uint64_t p) {
    if (p < 2) return false;
    for (std::uint64_t d = 2; d * d <= p; ++d)
        if (p % d == 0) return false;
    return true;
}

std::uint64_t mod_mul(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
    // p < 2^31 so the product fits in 64 bits.
    return (a * b) % p;
}

std::uint64_t mod_inv(std::uint64_t a, std::uint64_t p) {
    // Extended Euclid on (a, p), p prime, a != 0.
    long long t = 0, nt = 1;
    long long r = (long long)p, nr = (long long)a;
    while (nr != 0) {
        long long q = r / nr;
        long long tmp = t - q * nt; t = nt; nt = tmp;
        tmp = r - q * nr; r = nr; nr = tmp;
    }
    if (t < 0) t += (long long)p;
    return (std::uint64_t)t;
}

mpq_class parse_rat(const std::string& s) {
    // [-]digits[/digits], denominator positive and nonzero.
    if (s.empty()) fail(errc::parse_error, "empty rational literal");
    std::size_t i = 0;
    if (s[0] == '-') i = 1;
    std::size_t num_start = i;
    while (i < s.size() && std::isdigit((unsigned char)s[i])) ++i;
    if (i == num_start) fail(errc::parse_error, "bad rational literal '" + s + "'");
    std::string num = s.substr(0, i);
    std::string den = "1";
    if (i < s.size()) {
        if (s[i] != '/') fail(errc::parse_error, "bad rational literal '" + s + "'");
        ++i;
        std::size_t den_start = i;
        while (i < s.size() && std::isdigit((unsigned char)s[i])) ++i;
        if (i == den_start || i != s.size())
            fail(errc::parse_error, "bad rational literal '" + s + "'");
        den = s.substr(den_start);
    }
    mpz_class n(num), d(den);
    if (d == 0) fail(errc::parse_error, "zero denominator in '" + s + "'");
    mpq_class q(n, d);
    q.canonicalize();
    return q;
}

std::string rat_str(const mpq_class& q) { return q.get_str(); }

} // namespace

ScalarDomain ScalarDomain::gf(std::uint64_t p) {
    if (p >= (1ull << 31)) fail(errc::schema_error, "prime modulus must be < 2^31");
    if (!is_prime_u64(p)) fail(errc::schema_error, "modulus " + std::to_string(p) + " is not prime");
    return ScalarDomain(domain_kind::prime_field, p);
}
ScalarDomain ScalarDomain::rationals() {
    return ScalarDomain(domain_kind::rationals, 0);
}
ScalarDomain ScalarDomain::quaternions() {
    return ScalarDomain(domain_kind::rational_quaternions, 0);
}

std::string ScalarDomain::describe() const {
    switch (kind_) {
    case domain_kind::prime_field: return "GF(" + std::to_string(p_) + ")";
    case domain_kind::rationals: return "Q";
    case domain_kind::rational_quaternions: return "H(Q)";
    }
    return "?";
}

Scalar Scalar::zero(const ScalarDomain& d) { return from_int(d, 0); }
Scalar Scalar::one(const ScalarDomain& d) { return from_int(d, 1); }

Scalar Scalar::from_int(const ScalarDomain& d, long v) {
    Scalar s(d);
    switch (d.kind()) {
    case domain_kind::prime_field: {
        long long m = (long long)(v % (long long)d.p());
        if (m < 0) m += (long long)d.p();
        s.v_ = (std::uint64_t)m;
        break;
    }
    case domain_kind::rationals:
        s.v_ = mpq_class(v);
        break;
    case domain_kind::rational_quaternions:
        s.v_ = quat_parts{mpq_class(v), mpq_class(0), mpq_class(0), mpq_class(0)};
        break;
    }
    return s;
}

Scalar Scalar::from_rational(const ScalarDomain& d, const mpq_class& q) {
    Scalar s(d);
    switch (d.kind()) {
    case domain_kind::prime_field:
        fail(errc::domain_mismatch, "rational value in GF(p) domain");
    case domain_kind::rationals:
        s.v_ = q;
        break;
    case domain_kind::rational_quaternions:
        s.v_ = quat_parts{q, mpq_class(0), mpq_class(0), mpq_class(0)};
        break;
    }
    return s;
}

Scalar Scalar::from_quat(const ScalarDomain& d, quat_parts q) {
    if (d.kind() != domain_kind::rational_quaternions)
        fail(errc::domain_mismatch, "quaternion value in commutative domain");
    Scalar s(d);
    s.v_ = std::move(q);
    return s;
}

void Scalar::check_same(const Scalar& o) const {
    if (dom_ != o.dom_) fail(errc::domain_mismatch, "scalar domains differ");
}

bool Scalar::is_zero() const {
    switch (dom_.kind()) {
    case domain_kind::prime_field: return std::get<std::uint64_t>(v_) == 0;
    case domain_kind::rationals: return std::get<mpq_class>(v_) == 0;
    case domain_kind::rational_quaternions: {
        const auto& q = std::get<quat_parts>(v_);
        return q[0] == 0 && q[1] == 0 && q[2] == 0 && q[3] == 0;
    }
    }
    return false;
}

bool Scalar::is_one() const { return *this == one(dom_); }

Scalar Scalar::operator+(const Scalar& o) const {
    check_same(o);
    Scalar r(dom_);
    switch (dom_.kind()) {
    case domain_kind::prime_field: {
        std::uint64_t a = std::get<std::uint64_t>(v_), b = std::get<std::uint64_t>(o.v_);
        r.v_ = (a + b) % dom_.p();
        break;
    }
    case domain_kind::rationals:
        r.v_ = mpq_class(std::get<mpq_class>(v_) + std::get<mpq_class>(o.v_));
        break;
    case domain_kind::rational_quaternions: {
        const auto& a = std::get<quat_parts>(v_);
        const auto& b = std::get<quat_parts>(o.v_);
        r.v_ = quat_parts{a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3]};
        break;
    }
    }
    return r;
}

Scalar Scalar::operator-() const {
    Scalar r(dom_);
    switch (dom_.kind()) {
    case domain_kind::prime_field: {
        std::uint64_t a = std::get<std::uint64_t>(v_);
        r.v_ = a == 0 ? 0 : dom_.p() - a;
        break;
    }
    case domain_kind::rationals:
        r.v_ = mpq_class(-std::get<mpq_class>(v_));
        break;
    case domain_kind::rational_quaternions: {
        const auto& a = std::get<quat_parts>(v_);
        r.v_ = quat_parts{-a[0], -a[1], -a[2], -a[3]};
        break;
    }
    }
    return r;
}

Scalar Scalar::operator-(const Scalar& o) const { return *this + (-o); }

Scalar Scalar::operator*(const Scalar& o) const {
    check_same(o);
    Scalar r(dom_);
    switch (dom_.kind()) {
    case domain_kind::prime_field:
        r.v_ = mod_mul(std::get<std::uint64_t>(v_), std::get<std::uint64_t>(o.v_), dom_.p());
        break;
    case domain_kind::rationals:
        r.v_ = mpq_class(std::get<mpq_class>(v_) * std::get<mpq_class>(o.v_));
        break;
    case domain_kind::rational_quaternions: {
        const auto& a = std::get<quat_parts>(v_);
        const auto& b = std::get<quat_parts>(o.v_);
        // (a0 + a1 i + a2 j + a3 k)(b0 + b1 i + b2 j + b3 k), ij = k.
        r.v_ = quat_parts{
            a[0] * b[0] - a[1] * b[1] - a[2] * b[2] - a[3] * b[3],
            a[0] * b[1] + a[1] * b[0] + a[2] * b[3] - a[3] * b[2],
            a[0] * b[2] - a[1] * b[3] + a[2] * b[0] + a[3] * b[1],
            a[0] * b[3] + a[1] * b[2] - a[2] * b[1] + a[3] * b[0]};
        break;
    }
    }
    return r;
}

bool Scalar::operator==(const Scalar& o) const {
    if (dom_ != o.dom_) return false;
    switch (dom_.kind()) {
    case domain_kind::prime_field:
        return std::get<std::uint64_t>(v_) == std::get<std::uint64_t>(o.v_);
    case domain_kind::rationals:
        return std::get<mpq_class>(v_) == std::get<mpq_class>(o.v_);
    case domain_kind::rational_quaternions: {
        const auto& a = std::get<quat_parts>(v_);
        const auto& b = std::get<quat_parts>(o.v_);
        return a[0] == b[0] && a[1] == b[1] && a[2] == b[2] && a[3] == b[3];
    }
    }
    return false;
}

Scalar Scalar::inverse() const {
    if (is_zero()) fail(errc::singular_matrix, "inverse of zero scalar");
    Scalar r(dom_);
    switch (dom_.kind()) {
    case domain_kind::prime_field:
        r.v_ = mod_inv(std::get<std::uint64_t>(v_), dom_.p());
        break;
    case domain_kind::rationals:
        r.v_ = mpq_class(1 / std::get<mpq_class>(v_));
        break;
    case domain_kind::rational_quaternions: {
        const auto& a = std::get<quat_parts>(v_);
        mpq_class n = a[0] * a[0] + a[1] * a[1] + a[2] * a[2] + a[3] * a[3];
        r.v_ = quat_parts{a[0] / n, -a[1] / n, -a[2] / n, -a[3] / n};
        break;
    }
    }
    return r;
}

Scalar Scalar::conj() const {
    if (dom_.kind() != domain_kind::rational_quaternions) return *this;
    const auto& a = std::get<quat_parts>(v_);
    Scalar r(dom_);
    r.v_ = quat_parts{a[0], -a[1], -a[2], -a[3]};
    return r;
}

mpq_class Scalar::norm() const {
    switch (dom_.kind()) {
    case domain_kind::prime_field:
        fail(errc::domain_mismatch, "norm over GF(p) not defined here");
    case domain_kind::rationals: {
        const auto& x = std::get<mpq_class>(v_);
        return x * x;
    }
    case domain_kind::rational_quaternions: {
        const auto& a = std::get<quat_parts>(v_);
        return a[0] * a[0] + a[1] * a[1] + a[2] * a[2] + a[3] * a[3];
    }
    }
    return mpq_class(0);
}

std::uint64_t Scalar::residue() const {
    if (dom_.kind() != domain_kind::prime_field)
        fail(errc::domain_mismatch, "residue() on non prime-field scalar");
    return std::get<std::uint64_t>(v_);
}
const mpq_class& Scalar::rational() const {
    if (dom_.kind() != domain_kind::rationals)
        fail(errc::domain_mismatch, "rational() on non rational scalar");
    return std::get<mpq_class>(v_);
}
const quat_parts& Scalar::quat() const {
    if (dom_.kind() != domain_kind::rational_quaternions)
        fail(errc::domain_mismatch, "quat() on non quaternion scalar");
    return std::get<quat_parts>(v_);
}

Scalar Scalar::parse(const ScalarDomain& d, const std::string& text) {
    if (text.empty()) fail(errc::parse_error, "empty scalar literal");
    switch (d.kind()) {
    case domain_kind::prime_field: {
        std::size_t i = text[0] == '-' ? 1 : 0;
        if (i == text.size()) fail(errc::parse_error, "bad GF literal '" + text + "'");
        for (std::size_t k = i; k < text.size(); ++k)
            if (!std::isdigit((unsigned char)text[k]))
                fail(errc::parse_error, "bad GF literal '" + text + "'");
        // Arbitrary-size residues allowed; reduce mod p.
        mpz_class z(text);
        mpz_class m = z % mpz_class((unsigned long)d.p());
        if (m < 0) m += mpz_class((unsigned long)d.p());
        Scalar s(d);
        s.v_ = (std::uint64_t)m.get_ui();
        return s;
    }
    case domain_kind::rationals: {
        Scalar s(d);
        s.v_ = parse_rat(text);
        return s;
    }
    case domain_kind::rational_quaternions: {
        quat_parts parts{mpq_class(0), mpq_class(0), mpq_class(0), mpq_class(0)};
        std::size_t i = 0;
        bool first = true;
        while (i < text.size()) {
            int sign = 1;
            if (text[i] == '+' || text[i] == '-') {
                sign = text[i] == '-' ? -1 : 1;
                ++i;
            } else if (!first) {
                fail(errc::parse_error, "bad quaternion literal '" + text + "'");
            }
            std::size_t start = i;
            while (i < text.size() && text[i] != '+' && text[i] != '-') ++i;
            std::string term = text.substr(start, i - start);
            if (term.empty()) fail(errc::parse_error, "bad quaternion literal '" + text + "'");
            int unit = 0;
            char last = term.back();
            if (last == 'i') unit = 1;
            else if (last == 'j') unit = 2;
            else if (last == 'k') unit = 3;
            if (unit != 0) term.pop_back();
            mpq_class coeff = term.empty() ? mpq_class(1) : parse_rat(term);
            if (sign < 0) coeff = -coeff;
            parts[unit] += coeff;
            first = false;
        }
        Scalar s(d);
        s.v_ = std::move(parts);
        return s;
    }
    }
    fail(errc::parse_error, "unreachable");
}

std::string Scalar::to_string() const {
    switch (dom_.kind()) {
    case domain_kind::prime_field:
        return std::to_string(std::get<std::uint64_t>(v_));
    case domain_kind::rationals:
        return rat_str(std::get<mpq_class>(v_));
    case domain_kind::rational_quaternions: {
        const auto& a = std::get<quat_parts>(v_);
        static const char* units[4] = {"", "i", "j", "k"};
        std::string out;
        for (int t = 0; t < 4; ++t) {
            if (a[t] == 0) continue;
            std::string c = rat_str(a[t]);
            if (!out.empty() && c[0] != '-') out += "+";
            out += c;
            out += units[t];
        }
        if (out.empty()) out = "0";
        return out;
    }
    }
    return "?";
}

} // namespace munn
