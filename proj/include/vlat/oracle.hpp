#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <vector>

#include "vlat/lattice.hpp"

namespace vlat {

// The finite ring R / I_k: Z/p^k, Z_2[pi]/pi^k, or F_q[u]/u^k (laurent2, t^0 part).
// Elements are dense indices with precomputed tables.
class FiniteQuotient {
public:
    using Idx = uint32_t;

    FiniteQuotient(const RingConfig& ring, int64_t k);

    const RingConfig& ring() const { return ring_; }
    int64_t level() const { return k_; }
    Idx size() const { return m_; }
    Idx add(Idx a, Idx b) const { return add_[a * m_ + b]; }
    Idx mul(Idx a, Idx b) const { return mul_[a * m_ + b]; }
    Idx neg(Idx a) const { return neg_[a]; }
    // Valuation in pi-steps (u-steps for laurent2); k for zero.
    int64_t val(Idx a) const { return val_[a]; }
    uint32_t residue(Idx a) const { return res_[a]; }
    bool is_unit(Idx a) const { return val_[a] == 0; }
    // Representatives of R / I_e inside the quotient, e <= k.
    const std::vector<Idx>& reps(int64_t e) const { return reps_[static_cast<size_t>(e)]; }

    Idx from_elem(const RingElem& x) const;
    RingElem to_elem(Idx a) const;

private:
    RingConfig ring_;
    int64_t k_;
    Idx m_ = 0;
    std::vector<Idx> add_, mul_, neg_;
    std::vector<int64_t> val_;
    std::vector<uint32_t> res_;
    std::vector<std::vector<Idx>> reps_;
};

struct OracleResult {
    enum class Status { yes, no, unknown };
    Status status = Status::unknown;
    // T with T^t G_M T = G_N modulo I_k (columns: N's basis in M's coordinates).
    std::optional<Matrix> witness;
    // Exact isometry obtained by lifting the witness when k is large enough.
    std::optional<Matrix> certified;
    uint64_t nodes = 0;
};

// Isometry invariants of M / I_k M: determinant and representation counts.
class OracleLattice {
public:
    OracleLattice(const GramLattice& M, int64_t k);

    const FiniteQuotient& quotient() const { return *q_; }
    const GramLattice& lattice() const { return M_; }
    size_t rank() const { return n_; }
    // (norm, primitive) -> number of vectors of (R/I_k)^n.
    const std::map<std::pair<FiniteQuotient::Idx, bool>, uint64_t>& fingerprint() const { return fp_; }
    FiniteQuotient::Idx det() const { return det_; }
    FiniteQuotient::Idx gram(size_t i, size_t j) const { return g_[i * n_ + j]; }
    // Coordinate i only matters modulo I_{e_i}.
    int64_t coord_level(size_t i) const { return e_[i]; }
    uint64_t vector_count() const { return count_; }

private:
    friend class OracleSearch;
    GramLattice M_;
    std::shared_ptr<FiniteQuotient> q_;
    size_t n_;
    std::vector<FiniteQuotient::Idx> g_;
    std::vector<int64_t> e_;
    FiniteQuotient::Idx det_ = 0;
    uint64_t count_ = 1;
    int64_t weight_log_ = 0;
    std::map<std::pair<FiniteQuotient::Idx, bool>, uint64_t> fp_;
};

// Largest number of vectors enumerated per column in exhaustive mode.
inline constexpr uint64_t kOracleVectorLimit = uint64_t(1) << 24;

OracleResult oracle_isometric_mod(const GramLattice& M, const GramLattice& N, int64_t k);
OracleResult oracle_isometric_mod(const OracleLattice& M, const OracleLattice& N);
// Random column sampling; yes(witness) or unknown.
OracleResult oracle_isometric_random(const GramLattice& M, const GramLattice& N, int64_t k, uint64_t trials,
                                     uint64_t seed = 1);
// Invariant check only: false means certainly not isometric mod I_k.
bool oracle_invariants_match(const OracleLattice& M, const OracleLattice& N);

// Norms of primitive vectors modulo I_k, as canonical representatives.
std::vector<RingElem> oracle_norm_set(const GramLattice& M, int64_t k);

}  // namespace vlat
