#include "munn/json_io.hpp"

namespace munn {

namespace {

const json& need(const json& j, const char* key) {
    if (!j.is_object()) fail(errc::schema_error, "expected a JSON object");
    auto it = j.find(key);
    if (it == j.end())
        fail(errc::schema_error, std::string("missing required key \"") + key + "\"");
    return *it;
}

long need_long(const json& j, const char* key) {
    const json& v = need(j, key);
    if (!v.is_number_integer())
        fail(errc::schema_error, std::string("key \"") + key + "\" must be an integer");
    return v.get<long>();
}

std::string need_string(const json& j, const char* key) {
    const json& v = need(j, key);
    if (!v.is_string())
        fail(errc::schema_error, std::string("key \"") + key + "\" must be a string");
    return v.get<std::string>();
}

Scalar scalar_from_json(const ScalarDomain& d, const json& v) {
    if (v.is_string()) return Scalar::parse(d, v.get<std::string>());
    if (v.is_number_integer()) return Scalar::from_int(d, v.get<long>());
    fail(errc::schema_error, "matrix entries must be literal strings or integers");
}

// Shared by matrix (explicit dims) and element (dims from the context).
Matrix entries_from_json(const ScalarDomain& d, const json& v, int rows, int cols) {
    if (!v.is_array() || (int)v.size() != rows)
        fail(errc::schema_error, "\"entries\" must be an array of " +
                                     std::to_string(rows) + " rows");
    Matrix M(d, rows, cols);
    for (int i = 0; i < rows; ++i) {
        const json& row = v[(std::size_t)i];
        if (!row.is_array() || (int)row.size() != cols)
            fail(errc::schema_error, "row " + std::to_string(i) + " must hold " +
                                         std::to_string(cols) + " entries");
        for (int j = 0; j < cols; ++j)
            M.set(i, j, scalar_from_json(d, row[(std::size_t)j]));
    }
    return M;
}

json entries_to_json(const Matrix& M) {
    json rows = json::array();
    for (int i = 0; i < M.rows(); ++i) {
        json row = json::array();
        for (int j = 0; j < M.cols(); ++j) row.push_back(M.at(i, j).to_string());
        rows.push_back(std::move(row));
    }
    return rows;
}

} // namespace

json domain_to_json(const ScalarDomain& d) {
    switch (d.kind()) {
    case domain_kind::prime_field: return json{{"kind", "gf"}, {"p", d.p()}};
    case domain_kind::rationals: return json{{"kind", "rationals"}};
    case domain_kind::rational_quaternions: return json{{"kind", "quaternions"}};
    }
    fail(errc::schema_error, "unknown domain kind");
}

ScalarDomain domain_from_json(const json& j) {
    std::string kind = need_string(j, "kind");
    if (kind == "gf") return ScalarDomain::gf((std::uint64_t)need_long(j, "p"));
    if (kind == "rationals") return ScalarDomain::rationals();
    if (kind == "quaternions") return ScalarDomain::quaternions();
    fail(errc::schema_error, "domain kind must be \"gf\", \"rationals\" or \"quaternions\"");
}

json matrix_to_json(const Matrix& M) {
    return json{{"rows", M.rows()}, {"cols", M.cols()}, {"entries", entries_to_json(M)}};
}

Matrix matrix_from_json(const ScalarDomain& d, const json& j) {
    long rows = need_long(j, "rows"), cols = need_long(j, "cols");
    if (rows < 0 || cols < 0 || rows > 4096 || cols > 4096)
        fail(errc::schema_error, "matrix dimensions out of range");
    return entries_from_json(d, need(j, "entries"), (int)rows, (int)cols);
}

json element_to_json(const MunnElement& A) {
    return json{{"entries", entries_to_json(A.mat())}};
}

MunnElement element_from_json(const ContextPtr& ctx, const json& j) {
    return MunnElement(ctx, entries_from_json(ctx->domain(), need(j, "entries"),
                                              ctx->m(), ctx->n()));
}

json context_to_json(const ContextPtr& c) {
    return json{{"domain", domain_to_json(c->domain())},
                {"m", c->m()},
                {"n", c->n()},
                {"P", matrix_to_json(c->P())}};
}

ContextPtr context_from_json(const json& j) {
    ScalarDomain d = domain_from_json(need(j, "domain"));
    long m = need_long(j, "m"), n = need_long(j, "n");
    if (m < 0 || n < 0 || m > 4096 || n > 4096)
        fail(errc::schema_error, "algebra dimensions out of range");
    Matrix P = matrix_from_json(d, need(j, "P"));
    return make_context(d, (int)m, (int)n, P);
}

json witness_to_json(const Witness& w) {
    json terms = json::array();
    switch (w.kind) {
    case witness_kind::comm_product_sum:
        for (const CommTerm& t : w.comm_terms)
            terms.push_back(json{{"sign", t.sign},
                                 {"X", element_to_json(t.X)},
                                 {"Y", element_to_json(t.Y)},
                                 {"Z", element_to_json(t.Z)},
                                 {"W", element_to_json(t.W)}});
        break;
    case witness_kind::idempotent_word_sum:
        for (const WordTerm& t : w.word_terms) {
            json letters = json::array();
            for (const MunnElement& e : t.letters) letters.push_back(element_to_json(e));
            json jt{{"sign", t.sign}, {"letters", std::move(letters)}};
            if (t.coeff) jt["coeff"] = t.coeff->to_string();
            terms.push_back(std::move(jt));
        }
        break;
    case witness_kind::jordan_idempotent_span:
        for (const JordanTerm& t : w.jordan_terms)
            terms.push_back(json{{"sign", t.sign},
                                 {"e", element_to_json(t.e)},
                                 {"f", element_to_json(t.f)}});
        break;
    }
    return json{{"kind", witness_kind_name(w.kind)}, {"terms", std::move(terms)}};
}

Witness witness_from_json(const ContextPtr& ctx, const json& j) {
    std::string kind = need_string(j, "kind");
    const json& terms = need(j, "terms");
    if (!terms.is_array()) fail(errc::schema_error, "\"terms\" must be an array");

    Witness w;
    w.ctx = ctx;
    if (kind == witness_kind_name(witness_kind::comm_product_sum)) {
        w.kind = witness_kind::comm_product_sum;
        for (const json& t : terms)
            w.comm_terms.push_back(CommTerm{(int)need_long(t, "sign"),
                                            element_from_json(ctx, need(t, "X")),
                                            element_from_json(ctx, need(t, "Y")),
                                            element_from_json(ctx, need(t, "Z")),
                                            element_from_json(ctx, need(t, "W"))});
    } else if (kind == witness_kind_name(witness_kind::idempotent_word_sum)) {
        w.kind = witness_kind::idempotent_word_sum;
        for (const json& t : terms) {
            WordTerm wt;
            wt.sign = (int)need_long(t, "sign");
            const json& letters = need(t, "letters");
            if (!letters.is_array())
                fail(errc::schema_error, "\"letters\" must be an array");
            for (const json& e : letters)
                wt.letters.push_back(element_from_json(ctx, e));
            if (t.contains("coeff") && !t["coeff"].is_null())
                wt.coeff = scalar_from_json(ctx->domain(), t["coeff"]);
            w.word_terms.push_back(std::move(wt));
        }
    } else if (kind == witness_kind_name(witness_kind::jordan_idempotent_span)) {
        w.kind = witness_kind::jordan_idempotent_span;
        for (const json& t : terms)
            w.jordan_terms.push_back(JordanTerm{(int)need_long(t, "sign"),
                                                element_from_json(ctx, need(t, "e")),
                                                element_from_json(ctx, need(t, "f"))});
    } else {
        fail(errc::schema_error, "unknown witness kind \"" + kind + "\"");
    }
    return w;
}

json xi_report_to_json(const XiReport& rep) {
    return json{{"lower", rep.lower},
                {"algebra_lower", rep.algebra_lower},
                {"upper", rep.upper},
                {"witness", witness_to_json(rep.witness)}};
}

json certificate_to_json(const ZpdCertificate& cert) {
    return json{{"kind", product_kind_name(cert.kind)},
                {"constraints_used", cert.constraints_used},
                {"solution_dim", cert.solution_dim},
                {"target_dim", cert.target_dim},
                {"verdict", zpd_verdict_name(cert.verdict)}};
}

json error_to_json(const error& e) {
    return json{{"error", json{{"code", errc_name(e.code())}, {"detail", e.detail()}}}};
}

std::string dump_json(const json& j) { return j.dump(2) + "\n"; }

} // namespace munn
