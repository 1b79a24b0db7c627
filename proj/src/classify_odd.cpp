#include "vlat/classify_odd.hpp"

#include "vlat/errors.hpp"
#include "vlat/hensel.hpp"

namespace vlat {

namespace {

void require_odd(const RingConfig& R) {
    if (R.residue_char() == 2) throw DomainError("symbols need odd residue characteristic; use the rank-2 invariants");
}

std::string sigma_name(const RingConfig& R, const ValGroupElem& v) {
    if (!R.discrete()) {
        if (v.is_zero()) return "1";
        return "t^" + std::to_string(v[0]) + "*u^" + std::to_string(v[1]);
    }
    if (v[0] < 0) return std::to_string(R.p) + "^" + std::to_string(v[0]);
    mpz_class s;
    mpz_ui_pow_ui(s.get_mpz_t(), R.p, static_cast<unsigned long>(v[0]));
    return s.get_str();
}

}  // namespace

int component_sign(const JordanBlock& B) {
    require_odd(B.unimodular_gram.ring());
    return is_residual_square(B.unimodular_gram.det()) ? 1 : -1;
}

Symbol symbol(const GramLattice& M) {
    require_odd(M.ring());
    Symbol s;
    for (const auto& b : jordan_decompose(M).blocks) s.entries.push_back({b.scale_valuation, b.rank(), component_sign(b)});
    return s;
}

bool isomorphic_odd(const GramLattice& M, const GramLattice& N) {
    if (!(M.ring() == N.ring())) throw ConfigError("lattices over different rings");
    return symbol(M) == symbol(N);
}

std::string symbol_to_string(const Symbol& s, const RingConfig& R) {
    std::string out;
    for (const auto& e : s.entries) {
        if (!out.empty()) out += " ";
        std::string base = sigma_name(R, e.scale_valuation);
        if (!R.discrete() && !e.scale_valuation.is_zero()) base = "(" + base + ")";
        out += base + "^{" + (e.sign > 0 ? "+" : "-") + std::to_string(e.rank) + "}";
    }
    return out;
}

}  // namespace vlat
