#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "matspace.hpp"

namespace spreadec {

// Normalized codeword identifier: length-l vector over F_{q^k}, not all
// zero, first nonzero coordinate equal to one. Mirrors the convention that
// the first nonzero block of a codeword matrix is the identity.
struct Gamma {
    std::vector<uint64_t> coords;  // level-2 codes

    uint32_t first_nonzero() const {
        for (uint32_t j = 0; j < coords.size(); ++j) {
            if (coords[j] != 0) return j;
        }
        throw std::invalid_argument("gamma is all zero");
    }

    bool is_normalized() const {
        for (uint64_t c : coords) {
            if (c != 0) return c == 1;
        }
        return false;
    }

    friend bool operator==(const Gamma& a, const Gamma& b) { return a.coords == b.coords; }
    friend bool operator!=(const Gamma& a, const Gamma& b) { return !(a == b); }
    friend bool operator<(const Gamma& a, const Gamma& b) { return a.coords < b.coords; }
};

struct Codeword {
    Gamma gamma;
    Subspace space;
};

// Code parameters: the tower, the dimensions k, l, n = k*l over F_q, and the
// companion matrix P of the alpha modulus (ord(P) = q^k - 1, checked).
struct SpreadParams {
    std::shared_ptr<const FieldTower> tower;
    uint32_t k = 0;
    uint32_t l = 0;
    uint32_t n = 0;
    MatrixFq companion;

    uint32_t q() const { return tower->q(); }
    uint64_t code_cardinality() const {
        return (tower->size(kLevelQn) - 1) / (tower->size(kLevelQk) - 1);
    }
    uint32_t min_distance() const { return 2 * k; }
    uint32_t correction_capability() const { return k - 1; }
};

inline SpreadParams make_spread_params(uint32_t q, uint32_t k, uint32_t l,
                                       std::optional<std::vector<uint64_t>> alpha_modulus = std::nullopt,
                                       std::optional<std::vector<uint64_t>> beta_modulus = std::nullopt) {
    auto [p, bd] = detail::split_prime_power(q);
    auto tower = std::make_shared<const FieldTower>(p, bd, k, l, std::move(alpha_modulus), std::move(beta_modulus));
    MatrixFq cm = companion_matrix(*tower, tower->modulus(kLevelQk));
    const uint64_t want = tower->size(kLevelQk) - 1;
    if (matrix_order(cm, want) != want) throw std::logic_error("companion matrix order is not q^k - 1");
    return SpreadParams{std::move(tower), k, l, k * l, std::move(cm)};
}

// phi_k: F_q^k -> F_{q^k}, (u_1,...,u_k) -> sum u_{i+1} alpha^i. In the
// tower representation this is exactly coefficient packing.
inline FieldElement phi_k(const FieldTower& tower, std::span<const uint64_t> v) {
    return tower.element(kLevelQk, tower.pack(kLevelQk, v));
}

inline std::vector<uint64_t> phi_k_inv(const FieldTower& tower, const FieldElement& a) {
    if (a.level != kLevelQk) throw std::invalid_argument("phi_k_inv expects an element of F_{q^k}");
    return tower.unpack(kLevelQk, a.code);
}

// phi: F_q^n -> F_{q^n}, e_i -> alpha^((i-1) mod k) beta^(floor((i-1)/k)).
inline FieldElement phi(const FieldTower& tower, std::span<const uint64_t> v) {
    const uint32_t k = tower.degree(kLevelQk);
    const uint32_t l = tower.degree(kLevelQn);
    if (v.size() != static_cast<size_t>(k) * l) throw std::invalid_argument("vector length is not k*l");
    std::vector<uint64_t> blocks(l);
    for (uint32_t j = 0; j < l; ++j) blocks[j] = tower.pack(kLevelQk, v.subspan(static_cast<size_t>(j) * k, k));
    return tower.element(kLevelQn, tower.pack(kLevelQn, blocks));
}

inline std::vector<uint64_t> phi_inv(const FieldTower& tower, const FieldElement& a) {
    if (a.level != kLevelQn) throw std::invalid_argument("phi_inv expects an element of F_{q^n}");
    const uint32_t k = tower.degree(kLevelQk);
    auto blocks = tower.unpack(kLevelQn, a.code);
    std::vector<uint64_t> v;
    v.reserve(static_cast<size_t>(k) * blocks.size());
    for (uint64_t b : blocks) {
        auto coeffs = tower.unpack(kLevelQk, b);
        v.insert(v.end(), coeffs.begin(), coeffs.end());
    }
    return v;
}

struct GammaOpCount {
    uint64_t inversions = 0;
    uint64_t multiplications = 0;
};

// Identifier of the unique codeword containing v: split v into l blocks of
// length k, divide every block by the first nonzero one. One inversion and
// at most l multiplications in F_{q^k}; no discrete logarithm.
inline Gamma gamma_of_vector(const FieldTower& tower, std::span<const uint64_t> v, GammaOpCount* ops = nullptr) {
    const uint32_t k = tower.degree(kLevelQk);
    const uint32_t l = tower.degree(kLevelQn);
    if (v.size() != static_cast<size_t>(k) * l) throw std::invalid_argument("vector length is not k*l");
    std::vector<uint64_t> blocks(l);
    uint32_t s = l;
    for (uint32_t j = 0; j < l; ++j) {
        blocks[j] = tower.pack(kLevelQk, v.subspan(static_cast<size_t>(j) * k, k));
        if (s == l && blocks[j] != 0) s = j;
    }
    if (s == l) throw std::invalid_argument("gamma of the zero vector is undefined");
    const uint64_t a = tower.inv(kLevelQk, blocks[s]);
    if (ops) ops->inversions += 1;
    Gamma g;
    g.coords.assign(l, 0);
    g.coords[s] = 1;
    for (uint32_t j = s + 1; j < l; ++j) {
        if (blocks[j] == 0) continue;
        g.coords[j] = tower.mul(kLevelQk, blocks[j], a);
        if (ops) ops->multiplications += 1;
    }
    return g;
}

// Row i of the codeword matrix is phi_inv(alpha^(i-1) * sum_j gamma_j beta^j);
// with the first nonzero block the identity, the stack is already in RREF.
inline Codeword encode(const SpreadParams& params, const Gamma& g) {
    const FieldTower& t = *params.tower;
    if (g.coords.size() != params.l) throw std::invalid_argument("gamma length is not l");
    if (!g.is_normalized()) throw std::invalid_argument("gamma is not normalized");
    const uint64_t x = t.pack(kLevelQn, g.coords);
    const uint64_t alpha_embedded = t.generator(kLevelQk);  // level-3 code of alpha is the same integer
    MatrixFq rows(t, params.k, params.n);
    uint64_t y = x;
    for (uint32_t i = 0; i < params.k; ++i) {
        rows.set_row(i, phi_inv(t, t.element(kLevelQn, y)));
        if (i + 1 < params.k) y = t.mul(kLevelQn, y, alpha_embedded);
    }
    return Codeword{g, Subspace::row_space(rows)};
}

// All (q^n - 1)/(q^k - 1) codewords, in lexicographic gamma order (the
// normalized representatives of the projective points of PG(l-1, q^k)).
template <class Fn>
inline void for_each_codeword(const SpreadParams& params, uint64_t cap, Fn&& fn) {
    if (params.code_cardinality() > cap) {
        throw std::runtime_error("code cardinality " + std::to_string(params.code_cardinality()) +
                                 " exceeds cap " + std::to_string(cap));
    }
    const uint64_t field = params.tower->size(kLevelQk);
    const uint32_t l = params.l;
    std::vector<uint64_t> coords(l, 0);
    // Lexicographically, identifiers with more leading zeros come first.
    for (uint32_t s = l; s-- > 0;) {
        std::fill(coords.begin(), coords.end(), 0);
        coords[s] = 1;
        const uint32_t free = l - s - 1;
        unsigned __int128 combos = 1;
        for (uint32_t i = 0; i < free; ++i) combos *= field;
        for (unsigned __int128 w = 0; w < combos; ++w) {
            unsigned __int128 tmp = w;
            for (uint32_t i = free; i-- > 0;) {  // earlier coordinates most significant
                coords[s + 1 + i] = static_cast<uint64_t>(tmp % field);
                tmp /= field;
            }
            fn(encode(params, Gamma{coords}));
        }
    }
}

inline std::vector<Codeword> enumerate_codewords(const SpreadParams& params, uint64_t cap = kDefaultEnumCap) {
    std::vector<Codeword> out;
    for_each_codeword(params, cap, [&](Codeword w) { out.push_back(std::move(w)); });
    return out;
}

// --- text format ---
//
// l coordinates separated by ';', each a comma-separated tuple of the k
// F_q coefficients (each rendered like a matrix entry), e.g. "1,0,0;1,1,0".

inline std::string format_gamma(const FieldTower& tower, const Gamma& g) {
    std::string out;
    for (size_t j = 0; j < g.coords.size(); ++j) {
        if (j) out += ';';
        auto coeffs = tower.unpack(kLevelQk, g.coords[j]);
        for (size_t i = 0; i < coeffs.size(); ++i) {
            if (i) out += ',';
            out += format_entry(tower, coeffs[i]);
        }
    }
    return out;
}

inline Gamma parse_gamma(const FieldTower& tower, const std::string& text) {
    const uint32_t k = tower.degree(kLevelQk);
    const uint32_t l = tower.degree(kLevelQn);
    std::vector<uint64_t> coords;
    size_t start = 0;
    while (start <= text.size()) {
        size_t end = text.find(';', start);
        if (end == std::string::npos) end = text.size();
        std::string coord = text.substr(start, end - start);
        std::vector<uint64_t> coeffs;
        size_t cs = 0;
        while (cs <= coord.size()) {
            size_t ce = coord.find(',', cs);
            if (ce == std::string::npos) ce = coord.size();
            auto entry = parse_row(tower, coord.substr(cs, ce - cs));
            if (entry.size() != 1) throw std::invalid_argument("bad gamma coefficient '" + coord + "'");
            coeffs.push_back(entry[0]);
            cs = ce + 1;
            if (ce == coord.size()) break;
        }
        if (coeffs.size() != k) throw std::invalid_argument("gamma coordinate needs exactly k coefficients");
        coords.push_back(tower.pack(kLevelQk, coeffs));
        start = end + 1;
        if (end == text.size()) break;
    }
    if (coords.size() != l) throw std::invalid_argument("gamma needs exactly l coordinates");
    Gamma g{std::move(coords)};
    if (!g.is_normalized()) throw std::invalid_argument("gamma is not normalized");
    return g;
}

}  // namespace spreadec
