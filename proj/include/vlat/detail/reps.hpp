#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <limits>
#include <vector>

// Backend storage. Not part of the stable interface.
namespace vlat::detail {

inline constexpr int64_t kInf = std::numeric_limits<int64_t>::max() / 4;
inline constexpr int64_t kNegInf = -kInf;

// Discrete backends: x = pi^val * (a + b*pi) + O(pi^abs), the unit part reduced
// modulo pi^(abs - val). b is always zero for padic/two_adic. When known_zero is
// set, only abs is meaningful. exact_zero has abs = kInf.
struct DvrValue {
    bool known_zero = true;
    int64_t val = 0;
    int64_t abs = kInf;
    mpz_class a, b;
};

// Polynomial over F_q, low degree first, no trailing zeros.
using Poly = std::vector<uint32_t>;

// Element of F_q((u)).
//   exact:  u^e * num / den with num(0) != 0, den(0) = 1, gcd 1; empty num = 0.
//   series: u^e * (num[0] + num[1] u + ...) + O(u^cap); num[0] != 0 unless num is
//           empty, in which case the coefficient is zero to precision u^cap.
struct UCoef {
    bool exact = true;
    int64_t e = 0;
    Poly num;
    Poly den{1};
    int64_t cap = kInf;
};

// Element of F_q((u))((t)): sum over i of t^(tlow + i) * c[i] + O(t^tcap).
struct LaurentValue {
    int64_t tlow = 0;
    std::vector<UCoef> c;
    int64_t tcap = kInf;
};

}  // namespace vlat::detail
