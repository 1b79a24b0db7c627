#include "vlat/io.hpp"

#include <fstream>

#include "dvr.hpp"
#include "laurent.hpp"
#include "vlat/errors.hpp"

namespace vlat {

namespace {

detail::DvrCtx dctx(const RingConfig& r) {
    return detail::DvrCtx{r.kind == RingKind::ramified2, r.kind == RingKind::padic ? r.p : 2u, r.precision[0]};
}

detail::LaurentCtx lctx(const RingConfig& r) { return detail::LaurentCtx{r.p, r.precision[0], r.precision[1]}; }

mpz_class big_from_json(const json& j) {
    mpz_class z;
    if (j.is_number_integer()) return mpz_class(std::to_string(j.get<long long>()));
    if (!j.is_string()) throw DomainError("expected an integer or decimal string, got " + j.dump());
    if (z.set_str(j.get<std::string>(), 10) != 0) throw DomainError("bad decimal string " + j.dump());
    return z;
}

int64_t int_from_json(const json& j) {
    if (j.is_number_integer()) return j.get<int64_t>();
    if (j.is_string()) return std::stoll(j.get<std::string>());
    throw DomainError("expected an integer, got " + j.dump());
}

// {"j": d} -> polynomial shifted by its least exponent.
std::pair<int64_t, detail::Poly> poly_from_map(const json& m, uint32_t q) {
    if (!m.is_object()) throw DomainError("expected a map from u-exponent to digit, got " + m.dump());
    std::map<int64_t, uint32_t> terms;
    for (auto& [k, v] : m.items()) {
        int64_t d = int_from_json(v) % q;
        if (d < 0) d += q;
        terms[std::stoll(k)] = static_cast<uint32_t>(d);
    }
    if (terms.empty()) return {0, {}};
    int64_t lo = terms.begin()->first;
    detail::Poly p(static_cast<size_t>(terms.rbegin()->first - lo + 1), 0);
    for (auto [k, d] : terms) p[static_cast<size_t>(k - lo)] = d;
    return {lo, p};
}

json poly_to_map(int64_t e, const detail::Poly& p) {
    json m = json::object();
    for (size_t i = 0; i < p.size(); ++i)
        if (p[i]) m[std::to_string(e + static_cast<int64_t>(i))] = p[i];
    return m;
}

RingElem laurent_from_json(const RingConfig& R, const json& j) {
    auto c = lctx(R);
    const json* terms = &j;
    int64_t tcap = detail::kInf;
    if (j.contains("terms")) {
        terms = &j.at("terms");
        if (j.contains("tcap")) tcap = int_from_json(j.at("tcap"));
    }
    if (!terms->is_object()) throw DomainError("laurent2 element must be a map, got " + j.dump());
    std::map<int64_t, detail::UCoef> coeffs;
    for (auto& [k, v] : terms->items()) {
        int64_t i = std::stoll(k);
        detail::UCoef u;
        if (v.contains("num")) {
            auto [en, num] = poly_from_map(v.at("num"), c.q);
            auto [ed, den] = poly_from_map(v.at("den"), c.q);
            u = detail::uc_exact(c, en - ed, num, den);
        } else if (v.contains("series")) {
            auto [e, digits] = poly_from_map(v.at("series"), c.q);
            int64_t cap = int_from_json(v.at("cap"));
            u = detail::uc_to_series_public(c, detail::uc_exact(c, e, digits, {1}), cap);
        } else {
            auto [e, digits] = poly_from_map(v, c.q);
            u = detail::uc_exact(c, e, digits, {1});
        }
        coeffs[i] = u;
    }
    if (coeffs.empty()) {
        if (tcap >= detail::kInf) return RingElem::zero(R);
        return RingElem::from_laurent(R, detail::lv_from_coeffs(c, tcap, {}, tcap));
    }
    int64_t lo = coeffs.begin()->first, hi = coeffs.rbegin()->first;
    std::vector<detail::UCoef> v(static_cast<size_t>(hi - lo + 1));
    for (auto& [i, u] : coeffs) v[static_cast<size_t>(i - lo)] = u;
    return RingElem::from_laurent(R, detail::lv_from_coeffs(c, lo, std::move(v), tcap));
}

json laurent_to_json(const RingElem& x) {
    const auto& lv = *x.laurent();
    bool plain = lv.tcap >= detail::kInf;
    json terms = json::object();
    for (size_t k = 0; k < lv.c.size(); ++k) {
        const auto& u = lv.c[k];
        std::string key = std::to_string(lv.tlow + static_cast<int64_t>(k));
        if (u.exact && u.num.empty()) continue;
        if (u.exact && u.den.size() == 1) {
            terms[key] = poly_to_map(u.e, u.num);
        } else if (u.exact) {
            plain = false;
            terms[key] = json{{"num", poly_to_map(u.e, u.num)}, {"den", poly_to_map(0, u.den)}};
        } else {
            plain = false;
            terms[key] = json{{"series", poly_to_map(u.e, u.num)}, {"cap", u.cap}};
        }
    }
    if (plain) return terms;
    json out{{"terms", terms}};
    if (lv.tcap < detail::kInf) out["tcap"] = lv.tcap;
    return out;
}

}  // namespace

RingConfig ring_from_json(const json& j) {
    std::string kind = j.at("kind").get<std::string>();
    auto prec = [&](int64_t dflt) { return j.contains("precision") ? int_from_json(j.at("precision")) : dflt; };
    if (kind == "padic") return RingConfig::padic(static_cast<uint32_t>(int_from_json(j.at("p"))), prec(24));
    if (kind == "two_adic") return RingConfig::two_adic(prec(48));
    if (kind == "ramified2") return RingConfig::ramified2(prec(64));
    if (kind == "laurent2") {
        int64_t nt = 6, nu = 16;
        if (j.contains("precision")) {
            const json& p = j.at("precision");
            if (!p.is_array() || p.size() != 2) throw DomainError("laurent2 precision must be [N_t, N_u]");
            nt = int_from_json(p[0]);
            nu = int_from_json(p[1]);
        }
        uint32_t q = static_cast<uint32_t>(int_from_json(j.contains("q") ? j.at("q") : j.at("p")));
        return RingConfig::laurent2(q, nt, nu);
    }
    throw DomainError("unknown ring kind '" + kind + "'");
}

json ring_to_json(const RingConfig& r) {
    switch (r.kind) {
        case RingKind::padic: return {{"kind", "padic"}, {"p", r.p}, {"precision", r.precision[0]}};
        case RingKind::two_adic: return {{"kind", "two_adic"}, {"precision", r.precision[0]}};
        case RingKind::ramified2: return {{"kind", "ramified2"}, {"precision", r.precision[0]}};
        case RingKind::laurent2:
            return {{"kind", "laurent2"}, {"q", r.p}, {"precision", {r.precision[0], r.precision[1]}}};
    }
    return {};
}

RingElem elem_from_json(const RingConfig& R, const json& j) {
    if (!R.discrete()) return laurent_from_json(R, j);
    json v = j;
    int64_t known_to = R.precision[0];
    int64_t shift = 0;
    bool wrapped = j.is_object();
    if (wrapped) {
        v = j.at("value");
        if (j.contains("known_to")) known_to = int_from_json(j.at("known_to"));
        if (j.contains("shift")) shift = int_from_json(j.at("shift"));
    }
    mpz_class a, b;
    if (R.kind == RingKind::ramified2) {
        if (v.is_array()) {
            if (v.size() != 2) throw DomainError("ramified2 element must be [a, b]");
            a = big_from_json(v[0]);
            b = big_from_json(v[1]);
        } else {
            a = big_from_json(v);
        }
    } else {
        if (v.is_array()) throw DomainError("pair entries need the ramified2 backend");
        a = big_from_json(v);
    }
    if (!wrapped) {
        if (a == 0 && b == 0) return RingElem::zero(R);
        return R.kind == RingKind::ramified2 ? RingElem::ramified(R, a, b) : RingElem::from_int(R, a);
    }
    return RingElem::from_dvr(R, detail::dvr_make(dctx(R), shift, a, b, known_to));
}

json elem_to_json(const RingElem& x) {
    const RingConfig& R = x.ring();
    if (!R.discrete()) return laurent_to_json(x);
    const auto& d = *x.dvr();
    if (d.known_zero && d.abs >= detail::kInf) return "0";
    auto render = [&](const mpz_class& a, const mpz_class& b) -> json {
        if (R.kind == RingKind::ramified2) return json::array({a.get_str(), b.get_str()});
        return a.get_str();
    };
    if (d.known_zero) return json{{"value", render(0, 0)}, {"known_to", d.abs}};
    if (d.val < 0) return json{{"value", render(d.a, d.b)}, {"shift", d.val}, {"known_to", d.abs}};
    mpz_class a, b;
    detail::dvr_digits(dctx(R), d, a, b);
    if (d.abs >= R.precision[0]) return render(a, b);
    return json{{"value", render(a, b)}, {"known_to", d.abs}};
}

json matrix_to_json(const Matrix& m) {
    json rows = json::array();
    for (size_t i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (size_t j = 0; j < m.cols(); ++j) row.push_back(elem_to_json(m(i, j)));
        rows.push_back(row);
    }
    return rows;
}

Matrix matrix_from_json(const RingConfig& R, const json& j) {
    if (!j.is_array()) throw DomainError("matrix must be a list of rows");
    std::vector<Vec> rows;
    for (const auto& row : j) {
        if (!row.is_array()) throw DomainError("matrix row must be a list");
        Vec v;
        for (const auto& e : row) v.push_back(elem_from_json(R, e));
        rows.push_back(std::move(v));
    }
    if (rows.empty()) return Matrix(R, 0, 0);
    return Matrix::from_rows(R, rows);
}

GramLattice lattice_from_json(const json& j) {
    RingConfig R = ring_from_json(j.at("ring"));
    return GramLattice(matrix_from_json(R, j.at("gram")));
}

json lattice_to_json(const GramLattice& M) {
    return {{"ring", ring_to_json(M.ring())}, {"gram", matrix_to_json(M.gram())}};
}

GramLattice load_lattice(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DomainError("cannot open " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw DomainError(path + ": " + e.what());
    }
    return lattice_from_json(j);
}

json value_to_json(const ValGroupElem& v) {
    if (v.is_top()) return "inf";
    if (v.rank() == 1) return v[0];
    return json::array({v[0], v[1]});
}

}  // namespace vlat
