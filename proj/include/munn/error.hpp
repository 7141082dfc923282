#ifndef MUNN_ERROR_HPP
#define MUNN_ERROR_HPP

#include <stdexcept>
#include <string>

namespace munn {

// Stable machine-readable error codes. The CLI maps these to exit status:
// parse/schema problems exit 1, precondition violations exit 2, soft
// failures (search budget, refused certification) exit 3.
enum class errc {
    parse_error,
    schema_error,
    domain_mismatch,
    shape_mismatch,
    context_mismatch,
    index_out_of_range,
    singular_matrix,
    rank_too_low,
    context_too_small,
    char_2_unsupported,
    char_3_unsupported,
    commutative_unsupported,
    noncommutative_unsupported,
    scalar_transport_unsupported,
    witness_malformed,
    idempotency_failure,
    enumeration_guard,
    search_budget_exhausted,
    not_certified,
};

const char* errc_name(errc c);

// Exit class for the CLI: 1 = input, 2 = precondition, 3 = soft.
int errc_exit_class(errc c);

class error : public std::runtime_error {
public:
    error(errc code, const std::string& detail)
        : std::runtime_error(std::string(errc_name(code)) + ": " + detail),
          code_(code), detail_(detail) {}

    errc code() const { return code_; }
    const std::string& detail() const { return detail_; }

private:
    errc code_;
    std::string detail_;
};

[[noreturn]] inline void fail(errc code, const std::string& detail) {
    throw error(code, detail);
}

} // namespace munn

#endif
