#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "vlat/canonical.hpp"
#include "vlat/classify_odd.hpp"
#include "vlat/errors.hpp"
#include "vlat/io.hpp"
#include "vlat/jordan.hpp"
#include "vlat/oracle.hpp"
#include "vlat/rank2.hpp"

using namespace vlat;

namespace {

struct Globals {
    std::string ring;
    std::string precision;
    bool json_out = false;
};

struct Outcome {
    json result;
    std::optional<json> witness;
    std::optional<std::string> obstruction;
    std::string text;
};

json read_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DomainError("cannot open " + path);
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw DomainError(path + ": " + e.what());
    }
}

json ring_override(const Globals& g, json ring) {
    if (!g.ring.empty()) {
        auto colon = g.ring.find(':');
        std::string kind = g.ring.substr(0, colon);
        ring = json{{"kind", kind}};
        if (colon != std::string::npos) {
            long p = std::stol(g.ring.substr(colon + 1));
            ring[kind == "laurent2" ? "q" : "p"] = p;
        }
    }
    if (!g.precision.empty()) {
        auto comma = g.precision.find(',');
        if (comma == std::string::npos)
            ring["precision"] = std::stol(g.precision);
        else
            ring["precision"] = {std::stol(g.precision.substr(0, comma)), std::stol(g.precision.substr(comma + 1))};
    }
    return ring;
}

GramLattice load(const Globals& g, const std::string& path) {
    json j = read_json(path);
    if (!j.is_object() || !j.contains("gram")) throw DomainError(path + ": expected {\"ring\": ..., \"gram\": ...}");
    j["ring"] = ring_override(g, j.value("ring", json::object()));
    try {
        return lattice_from_json(j);
    } catch (const json::exception& e) {
        throw DomainError(path + ": " + e.what());
    }
}

std::string kind_name(ArfInvariant::Kind k) {
    switch (k) {
        case ArfInvariant::Kind::vanishing: return "vanishing";
        case ArfInvariant::Kind::odd: return "odd";
        case ArfInvariant::Kind::even: return "even";
        case ArfInvariant::Kind::exact: return "exact";
    }
    return "?";
}

json blocks_json(const JordanDecomposition& jd) {
    json out = json::array();
    for (const JordanBlock& b : jd.blocks)
        out.push_back({{"scale_valuation", value_to_json(b.scale_valuation)},
                       {"rank", b.rank()},
                       {"pieces", b.pieces},
                       {"unimodular_gram", matrix_to_json(b.unimodular_gram.gram())},
                       {"transition", matrix_to_json(b.transition)}});
    return out;
}

json invariants_json(const JordanInvariants& inv) {
    json out = json::array();
    for (const BlockInvariants& b : inv) {
        json e{{"scale_valuation", value_to_json(b.scale_valuation)},
               {"rank", b.rank},
               {"diagonalizable", b.diagonalizable},
               {"gap", b.gap.is_top() ? json("inf") : value_to_json(b.gap)}};
        if (b.small_norms) {
            e["norm_level"] = b.norm_level;
            json ns = json::array();
            for (const auto& x : *b.small_norms) ns.push_back(elem_to_json(x));
            e["small_norms"] = ns;
        }
        out.push_back(e);
    }
    return out;
}

Outcome cmd_jordan(const GramLattice& M) {
    JordanDecomposition jd = jordan_decompose(M);
    JordanInvariants inv = jordan_invariants(M);
    Outcome o;
    o.result = {{"blocks", blocks_json(jd)}, {"invariants", invariants_json(inv)}};
    for (size_t k = 0; k < jd.blocks.size(); ++k) {
        const JordanBlock& b = jd.blocks[k];
        o.text += "block " + std::to_string(k) + ": valuation " + b.scale_valuation.to_string() + ", rank " +
                  std::to_string(b.rank()) + (inv[k].diagonalizable ? ", diagonalizable" : ", not diagonalizable") +
                  ", gap " + (inv[k].gap.is_top() ? std::string("inf") : inv[k].gap.to_string()) + "\n";
        o.text += "  unimodular part " + b.unimodular_gram.to_string() + "\n";
    }
    return o;
}

Outcome cmd_symbol(const GramLattice& M) {
    Symbol s = symbol(M);
    Outcome o;
    o.text = symbol_to_string(s, M.ring());
    json entries = json::array();
    for (const auto& e : s.entries)
        entries.push_back({{"scale_valuation", value_to_json(e.scale_valuation)}, {"rank", e.rank}, {"sign", e.sign}});
    o.result = {{"symbol", o.text}, {"entries", entries}};
    return o;
}

// The rank 2 unimodular form of a uni-valued rank 2 lattice, after dividing by sigma.
Rank2Form rank2_of(const GramLattice& M) {
    if (M.rank() != 2) throw DomainError("rank 2 lattice expected");
    ValGroupElem v = lattice_valuation(M);
    return normalize_rank2(rescale(M, RingElem::sigma(M.ring(), v).inverse()));
}

Outcome cmd_arf(const GramLattice& M) {
    if (M.ring().v2().is_zero())
        throw UnsupportedRegime("Arf invariants are defined in residue characteristic 2 only");
    Rank2Form F = rank2_of(M);
    MaximalNorm mx = maximal_norm_search(F);
    const RingConfig& R = M.ring();
    const RingElem& beta = mx.form.beta;
    if (!beta.is_zero() && beta.valuation() < R.v2())
        throw UnsupportedRegime("v(beta) = " + beta.valuation().to_string() + " < v(2) = " + R.v2().to_string() +
                                ": the Arf theory here needs v(beta) >= v(2)");
    ArfInvariant a = generalized_arf(mx.form);
    MinimalNormClass mn = minimal_norm_class(mx.form);
    Outcome o;
    o.result = {{"form", F.to_string()},
                {"maximal_form", mx.form.to_string()},
                {"isotropic", mx.isotropic},
                {"arf", a.to_string()},
                {"kind", kind_name(a.kind)},
                {"minimal_norm", elem_to_json(mn.alpha)}};
    if (!a.valuation.is_top()) o.result["arf_valuation"] = value_to_json(a.valuation);
    if (a.fine_class) o.result["fine_class"] = elem_to_json(*a.fine_class);
    if (mn.tau) o.result["minimal_norm_tau"] = elem_to_json(*mn.tau);
    o.text = "form " + F.to_string() + "\nmaximal " + mx.form.to_string() + (mx.isotropic ? " (isotropic)" : "") +
             "\narf " + a.to_string();
    if (a.fine_class) o.text += "\nfine class " + a.fine_class->to_string();
    o.text += "\nminimal norm class " + mn.alpha.to_string();
    if (mn.tau) o.text += " (tau " + mn.tau->to_string() + ")";
    return o;
}

// Exhaustive search modulo I_k with k past the lifting threshold, then exact lifting.
OracleResult search_and_lift(const GramLattice& M, const GramLattice& N) {
    const RingConfig& R = M.ring();
    if (!R.discrete()) return {};
    ValGroupElem last = jordan_decompose(N).last_valuation();
    int64_t k = last[0] + 2 * R.v2()[0] + 1;
    try {
        return oracle_isometric_mod(M, N, k);
    } catch (const DomainError&) {
        return {};
    }
}

struct Decision {
    bool isomorphic = false;
    std::string method;
    std::optional<std::string> obstruction;
    std::optional<Matrix> witness;
};

Decision decide(const GramLattice& M, const GramLattice& N) {
    if (!(M.ring() == N.ring())) throw ConfigError("lattices live over different rings");
    Decision d;
    if (M.rank() != N.rank()) {
        d.method = "rank";
        d.obstruction = "ranks differ (" + std::to_string(M.rank()) + " vs " + std::to_string(N.rank()) + ")";
        return d;
    }
    const RingConfig& R = M.ring();
    if (R.v2().is_zero()) {
        d.method = "symbol";
        Symbol a = symbol(M), b = symbol(N);
        d.isomorphic = a == b;
        if (!d.isomorphic)
            d.obstruction = "symbols differ: " + symbol_to_string(a, R) + " vs " + symbol_to_string(b, R);
    } else {
        JordanInvariants ia = jordan_invariants(M), ib = jordan_invariants(N);
        bool decided = false;
        if (M.rank() == 2 && ia.size() == 1 && ib.size() == 1) {
            Rank2Form F = rank2_of(M), G = rank2_of(N);
            try {
                d.isomorphic = isomorphic_rank2(F, G);
                d.method = "rank 2 invariants";
                decided = true;
                if (!d.isomorphic) {
                    ArfInvariant a = generalized_arf(maximal_norm_search(F).form);
                    ArfInvariant b = generalized_arf(maximal_norm_search(G).form);
                    if (!same_generalized_arf(a, b))
                        d.obstruction = "Arf mismatch (" + kind_name(a.kind) + " vs " + kind_name(b.kind) + ")";
                    else if (!same_fine_arf(a, b))
                        d.obstruction = "fine Arf mismatch (" + a.to_string() + " vs " + b.to_string() + ")";
                    else
                        d.obstruction = "minimal norm classes differ";
                }
            } catch (const UnsupportedRegime&) {
            }
        }
        if (!decided && !(ia == ib)) {
            d.method = "jordan invariants";
            d.obstruction = "Jordan invariants differ";
            return d;
        }
        if (!decided) {
            OracleResult r = search_and_lift(M, N);
            if (r.status == OracleResult::Status::no) {
                d.method = "exhaustive search";
                d.obstruction = "not isometric modulo the lifting level";
                return d;
            }
            if (r.status != OracleResult::Status::yes || !r.certified)
                throw UnsupportedRegime(
                    "residue characteristic 2: decided for rank 2 uni-valued lattices or by exhaustive search, "
                    "and the search space is too large here");
            d.isomorphic = true;
            d.method = "exhaustive search + lifting";
            d.witness = r.certified;
            return d;
        }
    }
    if (d.isomorphic) {
        OracleResult r = search_and_lift(M, N);
        if (r.certified) d.witness = r.certified;
    }
    return d;
}

Outcome cmd_isom(const GramLattice& M, const GramLattice& N) {
    Decision d = decide(M, N);
    Outcome o;
    o.result = {{"isomorphic", d.isomorphic}, {"method", d.method}};
    if (d.witness) o.witness = matrix_to_json(*d.witness);
    o.obstruction = d.obstruction;
    o.text = d.isomorphic ? "isomorphic" : "not isomorphic";
    if (d.obstruction) o.text += ": " + *d.obstruction;
    if (d.witness) o.text += "\nwitness " + d.witness->to_string();
    return o;
}

Outcome cmd_canon(const GramLattice& M) {
    CanonicalForm F = canonicalize(M);
    Outcome o;
    json steps = json::array();
    o.text = "start " + present(M).to_string() + "\n";
    for (const CanonicalStep& s : F.transcript) {
        steps.push_back({{"transform", s.transform},
                         {"presentation", s.after.to_string()},
                         {"basis", matrix_to_json(s.after.basis)}});
        o.text += s.transform + " -> " + s.after.to_string() + "\n";
    }
    o.text += "canonical " + F.result.to_string();
    o.result = {{"presentation", F.result.to_string()},
                {"gram", matrix_to_json(F.result.gram.gram())},
                {"basis", matrix_to_json(F.result.basis)},
                {"transcript", steps}};
    return o;
}

Outcome cmd_verify(const GramLattice& M, const GramLattice& N, int64_t k) {
    OracleResult r = oracle_isometric_mod(M, N, k);
    const char* status = r.status == OracleResult::Status::yes ? "yes" : r.status == OracleResult::Status::no ? "no" : "unknown";
    Outcome o;
    o.result = {{"oracle", status}, {"k", k}, {"nodes", r.nodes}};
    o.text = std::string("oracle modulo I_") + std::to_string(k - 1) + ": " + status;
    if (r.witness) o.witness = matrix_to_json(*r.witness);
    try {
        Decision d = decide(M, N);
        // A "no" from the oracle refutes isomorphism; a "yes" refutes non-isomorphism only past the lifting level.
        int64_t lift_level = jordan_decompose(N).last_valuation()[0] + 2 * M.ring().v2()[0];
        bool consistent = d.isomorphic ? r.status != OracleResult::Status::no
                                       : !(r.status == OracleResult::Status::yes && M.ring().discrete() && k > lift_level);
        o.result["decision"] = d.isomorphic;
        o.result["consistent"] = consistent;
        o.text += std::string("\ndecision: ") + (d.isomorphic ? "isomorphic" : "not isomorphic") +
                  (consistent ? " (consistent)" : " (INCONSISTENT)");
        if (!consistent) o.obstruction = "decision and oracle disagree";
    } catch (const UnsupportedRegime& e) {
        o.result["decision"] = nullptr;
        o.text += std::string("\ndecision: unsupported (") + e.what() + ")";
    }
    return o;
}

int emit(const Globals& g, const std::string& command, const Outcome& o, const RingConfig& R) {
    if (g.json_out) {
        json j{{"command", command}, {"result", o.result}, {"precision_used", value_to_json(R.precision)}};
        if (o.witness) j["witness"] = *o.witness;
        if (o.obstruction) j["obstruction"] = *o.obstruction;
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << o.text << "\n";
    }
    return 0;
}

int fail(const Globals& g, const std::string& command, int code, const std::string& msg) {
    if (g.json_out) {
        std::cout << json{{"command", command}, {"error", msg}, {"exit_code", code}}.dump(2) << "\n";
    }
    std::cerr << "vlat " << command << ": " << msg << "\n";
    return code;
}

std::string doubled_precision(const std::string& files_ring_hint, const GramLattice* M) {
    if (!M) return files_ring_hint;
    const RingConfig& R = M->ring();
    if (R.discrete()) return std::to_string(2 * R.precision[0]);
    return std::to_string(2 * R.precision[0]) + "," + std::to_string(2 * R.precision[1]);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Lattices over valuation rings: Jordan decompositions, invariants, isometries"};
    app.require_subcommand(1);
    Globals g;
    app.add_option("--ring", g.ring, "Override the ring: padic:P, two_adic, ramified2, laurent2:Q");
    app.add_option("--precision", g.precision, "Override the precision cap: N, or NT,NU for laurent2");
    app.add_flag("--json", g.json_out, "Machine-readable output");
    app.fallthrough();

    std::string a, b;
    int64_t k = 4;
    auto* jordan = app.add_subcommand("jordan", "Jordan decomposition and its invariants");
    jordan->add_option("file", a)->required();
    auto* sym = app.add_subcommand("symbol", "Symbol (odd residue characteristic)");
    sym->add_option("file", a)->required();
    auto* arf = app.add_subcommand("arf", "Rank 2 invariants in residue characteristic 2");
    arf->add_option("file", a)->required();
    auto* isom = app.add_subcommand("isom", "Decide isomorphism, with a witness or an obstruction");
    isom->add_option("fileA", a)->required();
    isom->add_option("fileB", b)->required();
    auto* canon = app.add_subcommand("canon", "Canonical presentation with the transcript of transforms");
    canon->add_option("file", a)->required();
    auto* verify = app.add_subcommand("verify", "Cross-check with exhaustive search modulo I_{k-1}");
    verify->add_option("fileA", a)->required();
    verify->add_option("fileB", b)->required();
    verify->add_option("--k", k, "Quotient level")->default_val(4);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    std::string command = app.get_subcommands().front()->get_name();
    std::optional<GramLattice> M, N;
    try {
        M = load(g, a);
        if (!b.empty()) N = load(g, b);
        Outcome o;
        if (command == "jordan") o = cmd_jordan(*M);
        else if (command == "symbol") o = cmd_symbol(*M);
        else if (command == "arf") o = cmd_arf(*M);
        else if (command == "isom") o = cmd_isom(*M, *N);
        else if (command == "canon") o = cmd_canon(*M);
        else o = cmd_verify(*M, *N, k);
        return emit(g, command, o, M->ring());
    } catch (const UnsupportedRegime& e) {
        return fail(g, command, 2, std::string("unsupported regime: ") + e.what());
    } catch (const IndeterminateValuation& e) {
        return fail(g, command, 3,
                    std::string("precision exhausted: ") + e.what() + "; retry with --precision " +
                        doubled_precision("a larger cap", M ? &*M : nullptr));
    } catch (const std::exception& e) {
        return fail(g, command, 1, e.what());
    }
}
