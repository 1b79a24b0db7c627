#pragma once

#include <string>
#include <vector>

#include "vlat/jordan.hpp"

namespace vlat {

struct SymbolEntry {
    ValGroupElem scale_valuation;
    size_t rank = 0;
    int sign = 1;
    bool operator==(const SymbolEntry&) const = default;
};

struct Symbol {
    std::vector<SymbolEntry> entries;
    bool operator==(const Symbol&) const = default;
};

// Quadratic character of the block determinant. Odd residue characteristic only.
int component_sign(const JordanBlock& B);
Symbol symbol(const GramLattice& M);
bool isomorphic_odd(const GramLattice& M, const GramLattice& N);

// Product notation, e.g. "1^{-2} 3^{+1} 9^{+1}".
std::string symbol_to_string(const Symbol& s, const RingConfig& ring);

}  // namespace vlat
