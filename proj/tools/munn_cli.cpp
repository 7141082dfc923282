// Batch front end: JSON in, JSON out, deterministic for a fixed seed.
// Exit codes: 0 success, 1 malformed input, 2 precondition violation,
// 3 soft failure (budget exhausted, or INCONCLUSIVE under
// --require-certified).

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"

#include "munn/commutator.hpp"
#include "munn/idempotent.hpp"
#include "munn/json_io.hpp"
#include "munn/zpd.hpp"

namespace {

using munn::json;

std::string read_input(const std::string& path) {
    if (path.empty()) {
        std::ostringstream buf;
        buf << std::cin.rdbuf();
        return buf.str();
    }
    std::ifstream f(path, std::ios::binary);
    if (!f) munn::fail(munn::errc::parse_error, "cannot open input file " + path);
    std::ostringstream buf;
    buf << f.rdbuf();
    return buf.str();
}

json parse_input(const std::string& path) {
    std::string text = read_input(path);
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded()) munn::fail(munn::errc::parse_error, "input is not valid JSON");
    return j;
}

void write_output(const std::string& path, const json& j) {
    std::string text = munn::dump_json(j);
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) munn::fail(munn::errc::parse_error, "cannot open output file " + path);
    f << text;
}

const json& need_key(const json& j, const char* key) {
    if (!j.is_object() || !j.contains(key))
        munn::fail(munn::errc::schema_error,
                   std::string("missing required key \"") + key + "\"");
    return j.at(key);
}

// Documents produced by decompose carry context + element so they can be
// piped straight into verify.
struct ElementDoc {
    munn::ContextPtr ctx;
    munn::MunnElement elem;
};

ElementDoc element_doc(const json& j) {
    munn::ContextPtr ctx = munn::context_from_json(need_key(j, "context"));
    munn::MunnElement elem = munn::element_from_json(ctx, need_key(j, "element"));
    return ElementDoc{ctx, elem};
}

int ceil_div(int a, int b) { return (a + b - 1) / b; }

json run_decompose(const json& in, const std::string& mode, std::uint64_t seed,
                   long budget) {
    if (mode == "refute-r1") {
        munn::ContextPtr ctx = munn::context_from_json(need_key(in, "context"));
        munn::R1Refutation rep = munn::refute_r1_field(ctx);
        return json{{"context", munn::context_to_json(ctx)},
                    {"annihilates", rep.annihilates},
                    {"pairs_checked", rep.pairs_checked},
                    {"nonzero_witness", munn::element_to_json(rep.nonzero_witness)}};
    }

    ElementDoc doc = element_doc(in);
    json out{{"context", munn::context_to_json(doc.ctx)},
             {"element", munn::element_to_json(doc.elem)}};

    if (mode == "idempotent-algebra") {
        out["witness"] = munn::witness_to_json(munn::decompose_algebra_idempotents(doc.elem));
    } else if (mode == "idempotent-ring") {
        out["witness"] = munn::witness_to_json(munn::decompose_ring_idempotents(doc.elem));
    } else if (mode == "jordan-idempotent") {
        out["witness"] = munn::witness_to_json(munn::decompose_jordan_idempotents(doc.elem));
    } else if (mode == "comm-squares") {
        out["witness"] = munn::witness_to_json(munn::decompose_comm_squares(doc.elem));
    } else if (mode == "r1-quaternion") {
        out["witness"] = munn::witness_to_json(munn::decompose_r1(doc.elem));
    } else if (mode == "xi2" || mode == "xi-blocks" || mode == "xi1") {
        munn::XiReport rep = mode == "xi2" ? munn::decompose_xi2(doc.elem)
                             : mode == "xi-blocks"
                                 ? munn::decompose_xi_blocks(doc.elem)
                                 : munn::decompose_xi1(doc.elem, seed, budget);
        json rj = munn::xi_report_to_json(rep);
        for (auto it = rj.begin(); it != rj.end(); ++it) out[it.key()] = it.value();
    } else {
        munn::fail(munn::errc::schema_error, "unknown decompose mode \"" + mode + "\"");
    }
    return out;
}

json run_verify(const json& in) {
    ElementDoc doc = element_doc(in);
    munn::Witness w = munn::witness_from_json(doc.ctx, need_key(in, "witness"));
    long terms = (long)w.term_count();

    json out{{"term_count", terms}};
    bool bound_ok = true;
    if (w.kind == munn::witness_kind::comm_product_sum) {
        // Each product has rank at most r, so fewer than ceil(rank/r) terms
        // cannot sum to the claimed element.
        int rank = munn::ordinary_rank(doc.elem);
        int r = doc.ctx->r();
        bound_ok = rank == 0 || (r >= 1 && terms >= ceil_div(rank, r));
    }
    out["rank_lower_bound_consistent"] = bound_ok;
    if (!bound_ok) {
        out["recombines"] = false;
        out["idempotency_failures"] = json::array();
        return out;
    }

    munn::EvalReport rep = munn::evaluate_witness(w);
    bool ok = rep.value == doc.elem;
    out["recombines"] = ok;
    out["idempotency_failures"] = rep.idempotency_failures;
    if (!ok) out["difference"] = munn::element_to_json(doc.elem - rep.value);
    return out;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact Munn algebra toolkit"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string input_path, output_path, mode;
    std::string bracket_kind = "comm", zpd_kind = "assoc";
    std::uint64_t seed = 0;
    long budget = 100000, max_constraints = 0, flag_p = 0, flag_n = 0;
    bool require_certified = false;

    app.add_option("--input", input_path, "input JSON file (default: stdin)");
    app.add_option("--output", output_path, "output JSON file (default: stdout)");

    CLI::App* canonicalize =
        app.add_subcommand("canonicalize", "normalize the sandwich matrix");
    CLI::App* mul = app.add_subcommand("mul", "sandwich product of two elements");
    CLI::App* bracket =
        app.add_subcommand("bracket", "commutator (default) or jordan product");
    bracket->add_option("--kind", bracket_kind, "comm or jordan");
    CLI::App* decompose = app.add_subcommand("decompose", "run a decomposition engine");
    decompose->add_option("--mode", mode, "engine name")->required();
    decompose->add_option("--seed", seed, "search seed");
    decompose->add_option("--budget", budget, "search attempt budget");
    CLI::App* verify = app.add_subcommand("verify", "check a witness document");
    CLI::App* check_zpd =
        app.add_subcommand("check-zpd", "zero-product determination certificate");
    check_zpd->add_option("--kind", zpd_kind, "assoc or jordan");
    check_zpd->add_option("--seed", seed, "sampling seed");
    check_zpd->add_option("--max-constraints", max_constraints,
                          "constraint cap (0 = none)");
    check_zpd->add_flag("--require-certified", require_certified,
                        "exit 3 unless the verdict is CERTIFIED");
    CLI::App* scalar_lemma =
        app.add_subcommand("scalar-lemma", "enumerate matrices passing the "
                                           "orthogonality lemma over GF(p)");
    scalar_lemma->add_option("--p", flag_p, "prime modulus")->required();
    scalar_lemma->add_option("--n", flag_n, "vector dimension")->required();
    CLI::App* xi_bounds_cmd =
        app.add_subcommand("xi-bounds", "commutator-square length bounds");

    CLI11_PARSE(app, argc, argv);

    try {
        json out;
        if (canonicalize->parsed()) {
            munn::ContextPtr ctx = munn::context_from_json(parse_input(input_path));
            munn::Matrix er =
                munn::Matrix::e_r(ctx->domain(), ctx->n(), ctx->m(), ctx->r());
            bool check = ctx->V() * ctx->P() * ctx->W() == er;
            out = json{{"V", munn::matrix_to_json(ctx->V())},
                       {"W", munn::matrix_to_json(ctx->W())},
                       {"r", ctx->r()},
                       {"VPW_equals_Er", check}};
        } else if (mul->parsed() || bracket->parsed()) {
            json in = parse_input(input_path);
            munn::ContextPtr ctx = munn::context_from_json(need_key(in, "context"));
            munn::MunnElement a = munn::element_from_json(ctx, need_key(in, "a"));
            munn::MunnElement b = munn::element_from_json(ctx, need_key(in, "b"));
            if (bracket->parsed() && bracket_kind != "comm" && bracket_kind != "jordan")
                munn::fail(munn::errc::schema_error, "bracket kind must be comm or jordan");
            munn::MunnElement res = mul->parsed() ? munn::sandwich_product(a, b)
                                    : bracket_kind == "jordan"
                                        ? munn::jordan_product(a, b)
                                        : munn::commutator(a, b);
            out = json{{"context", munn::context_to_json(ctx)},
                       {"element", munn::element_to_json(res)}};
        } else if (decompose->parsed()) {
            out = run_decompose(parse_input(input_path), mode, seed, budget);
        } else if (verify->parsed()) {
            out = run_verify(parse_input(input_path));
        } else if (check_zpd->parsed()) {
            munn::product_kind pk;
            if (zpd_kind == "assoc") {
                pk = munn::product_kind::associative;
            } else if (zpd_kind == "jordan") {
                pk = munn::product_kind::jordan;
            } else {
                munn::fail(munn::errc::schema_error,
                           "check-zpd kind must be assoc or jordan");
            }
            munn::ContextPtr ctx = munn::context_from_json(parse_input(input_path));
            munn::ZpdCertificate cert =
                munn::check_zpd(ctx, pk, seed, max_constraints);
            write_output(output_path, munn::certificate_to_json(cert));
            return require_certified && cert.verdict != munn::zpd_verdict::certified
                       ? 3
                       : 0;
        } else if (scalar_lemma->parsed()) {
            std::vector<munn::Matrix> mats = munn::scalar_lemma_oracle(
                munn::ScalarDomain::gf((std::uint64_t)flag_p), (int)flag_n);
            json arr = json::array();
            for (const munn::Matrix& M : mats) arr.push_back(munn::matrix_to_json(M));
            out = json{{"count", (long)mats.size()}, {"matrices", std::move(arr)}};
        } else if (xi_bounds_cmd->parsed()) {
            ElementDoc doc = element_doc(parse_input(input_path));
            json rj = munn::xi_report_to_json(munn::xi_bounds(doc.elem));
            out = json{{"context", munn::context_to_json(doc.ctx)},
                       {"element", munn::element_to_json(doc.elem)}};
            for (auto it = rj.begin(); it != rj.end(); ++it) out[it.key()] = it.value();
        }
        write_output(output_path, out);
        return 0;
    } catch (const munn::error& e) {
        // Error reports go to stdout regardless of --output so a broken
        // output path cannot mask the diagnostic.
        std::cout << munn::dump_json(munn::error_to_json(e));
        return munn::errc_exit_class(e.code());
    } catch (const json::exception& e) {
        munn::error err(munn::errc::schema_error, e.what());
        std::cout << munn::dump_json(munn::error_to_json(err));
        return 1;
    }
}
