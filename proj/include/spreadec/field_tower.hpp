#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace spreadec {

// Tower levels: 0 = F_p, 1 = F_q, 2 = F_{q^k}, 3 = F_{q^n}.
inline constexpr int kLevelP = 0;
inline constexpr int kLevelQ = 1;
inline constexpr int kLevelQk = 2;
inline constexpr int kLevelQn = 3;

namespace detail {

inline uint64_t mulmod_u64(uint64_t a, uint64_t b, uint64_t m) {
    return static_cast<uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

inline uint64_t powmod_u64(uint64_t a, uint64_t e, uint64_t m) {
    uint64_t r = 1 % m;
    a %= m;
    while (e) {
        if (e & 1) r = mulmod_u64(r, a, m);
        a = mulmod_u64(a, a, m);
        e >>= 1;
    }
    return r;
}

inline bool is_prime_u64(uint64_t n) {
    if (n < 2) return false;
    for (uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (n % p == 0) return n == p;
    }
    uint64_t d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    // Deterministic Miller-Rabin base set for the full 64-bit range.
    for (uint64_t a : {2ull, 325ull, 9375ull, 28178ull, 450775ull, 9780504ull, 1795265022ull}) {
        uint64_t x = powmod_u64(a % n, d, n);
        if (x == 0 || x == 1 || x == n - 1) continue;
        bool witness = true;
        for (int i = 1; i < s; ++i) {
            x = mulmod_u64(x, x, n);
            if (x == n - 1) {
                witness = false;
                break;
            }
        }
        if (witness) return false;
    }
    return true;
}

inline uint64_t pollard_rho(uint64_t n) {
    if ((n & 1) == 0) return 2;
    uint64_t seed = 1;
    while (true) {
        uint64_t x = seed, y = seed, c = seed, d = 1;
        ++seed;
        auto step = [&](uint64_t v) { return (mulmod_u64(v, v, n) + c) % n; };
        while (d == 1) {
            x = step(x);
            y = step(step(y));
            uint64_t diff = x > y ? x - y : y - x;
            if (diff == 0) break;
            d = std::gcd(diff, n);
        }
        if (d != 1 && d != n) return d;
    }
}

inline void factor_into(uint64_t n, std::vector<uint64_t>& primes) {
    if (n < 2) return;
    if (is_prime_u64(n)) {
        primes.push_back(n);
        return;
    }
    uint64_t d = pollard_rho(n);
    factor_into(d, primes);
    factor_into(n / d, primes);
}

// Distinct prime factors, sorted.
inline std::vector<uint64_t> prime_factors_u64(uint64_t n) {
    std::vector<uint64_t> primes;
    for (uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull}) {
        if (n % p == 0) {
            primes.push_back(p);
            while (n % p == 0) n /= p;
        }
    }
    factor_into(n, primes);
    std::sort(primes.begin(), primes.end());
    primes.erase(std::unique(primes.begin(), primes.end()), primes.end());
    return primes;
}

// q = p^m for prime p; returns (p, m) or throws.
inline std::pair<uint32_t, uint32_t> split_prime_power(uint64_t q) {
    if (q < 2) throw std::invalid_argument("field size must be at least 2");
    auto primes = prime_factors_u64(q);
    if (primes.size() != 1) throw std::invalid_argument("field size " + std::to_string(q) + " is not a prime power");
    uint64_t p = primes[0];
    uint32_t m = 0;
    uint64_t v = q;
    while (v > 1) {
        if (v % p) throw std::invalid_argument("field size is not a prime power");
        v /= p;
        ++m;
    }
    return {static_cast<uint32_t>(p), m};
}

}  // namespace detail

// One monic modulus per extension step, coefficients as codes of that step's
// base level, constant term first.
struct TowerSpec {
    uint32_t p = 2;
    uint32_t base_degree = 1;
    uint32_t k = 1;
    uint32_t l = 1;
    std::array<std::vector<uint64_t>, 3> moduli;
};

class FieldTower;

// Value handle for one field element: the tower level it lives in and the
// packed code of its coefficient vector over the level below.
struct FieldElement {
    const FieldTower* tower = nullptr;
    int level = 0;
    uint64_t code = 0;

    FieldElement operator+(const FieldElement& o) const;
    FieldElement operator-(const FieldElement& o) const;
    FieldElement operator*(const FieldElement& o) const;
    FieldElement operator-() const;
    FieldElement inverse() const;
    FieldElement pow(uint64_t e) const;
    bool is_zero() const { return code == 0; }
    std::vector<FieldElement> coeffs() const;

    friend bool operator==(const FieldElement& a, const FieldElement& b) {
        return a.tower == b.tower && a.level == b.level && a.code == b.code;
    }
    friend bool operator!=(const FieldElement& a, const FieldElement& b) { return !(a == b); }
};

// Exact arithmetic in the tower F_p < F_q < F_{q^k} < F_{q^n}. Every modulus
// in the chain is monic, irreducible and primitive. Elements are identified
// by integer codes: the code of (c_0,...,c_{d-1}) over a base of size S is
// sum c_i S^i, so 0 and 1 are the canonical zero and one at every level.
// Immutable after construction; all operations are const and thread-safe.
class FieldTower {
  public:
    static constexpr uint64_t kTableLimit = 1024;

    FieldTower(uint32_t p, uint32_t base_degree, uint32_t k, uint32_t l,
               std::optional<std::vector<uint64_t>> alpha_modulus = std::nullopt,
               std::optional<std::vector<uint64_t>> beta_modulus = std::nullopt) {
        if (!detail::is_prime_u64(p)) throw std::invalid_argument("characteristic " + std::to_string(p) + " is not prime");
        if (base_degree < 1 || k < 1 || l < 1) throw std::invalid_argument("extension degrees must be positive");
        levels_.resize(4);
        levels_[0].size = p;
        levels_[0].degree = 1;
        init_tables(0);
        push_level(1, base_degree, std::nullopt);
        push_level(2, k, std::move(alpha_modulus));
        push_level(3, l, std::move(beta_modulus));
    }

    FieldTower(const FieldTower&) = delete;
    FieldTower& operator=(const FieldTower&) = delete;

    uint32_t p() const { return static_cast<uint32_t>(levels_[0].size); }
    uint64_t size(int level) const { return levels_.at(level).size; }
    uint32_t q() const { return static_cast<uint32_t>(levels_[1].size); }
    uint32_t degree(int level) const { return levels_.at(level).degree; }
    const std::vector<uint64_t>& modulus(int level) const {
        if (level < 1 || level > 3) throw std::invalid_argument("no modulus at level " + std::to_string(level));
        return levels_[level].modulus;
    }

    TowerSpec spec() const {
        TowerSpec s;
        s.p = p();
        s.base_degree = degree(1);
        s.k = degree(2);
        s.l = degree(3);
        for (int lv = 1; lv <= 3; ++lv) s.moduli[lv - 1] = levels_[lv].modulus;
        return s;
    }

    // --- code-level arithmetic ---

    uint64_t add(int level, uint64_t a, uint64_t b) const {
        check(level, a, b);
        const Level& lv = levels_[level];
        if (lv.tabled) return lv.add_table[a * lv.size + b];
        return add_generic(level, a, b);
    }

    uint64_t sub(int level, uint64_t a, uint64_t b) const { return add(level, a, neg(level, b)); }

    uint64_t neg(int level, uint64_t a) const {
        check(level, a, 0);
        const Level& lv = levels_[level];
        if (lv.tabled) return lv.neg_table[a];
        return neg_generic(level, a);
    }

    uint64_t mul(int level, uint64_t a, uint64_t b) const {
        check(level, a, b);
        const Level& lv = levels_[level];
        if (lv.tabled) return lv.mul_table[a * lv.size + b];
        return mul_generic(level, a, b);
    }

    uint64_t inv(int level, uint64_t a) const {
        check(level, a, 0);
        if (a == 0) throw std::invalid_argument("inverse of zero");
        const Level& lv = levels_[level];
        if (lv.tabled) return lv.inv_table[a];
        return pow(level, a, lv.size - 2);
    }

    uint64_t pow(int level, uint64_t a, uint64_t e) const {
        check(level, a, 0);
        uint64_t r = 1, base = a;
        while (e) {
            if (e & 1) r = mul(level, r, base);
            e >>= 1;
            if (e) base = mul(level, base, base);
        }
        return r;
    }

    // Smallest e >= 1 with a^e = 1; divides |field| - 1.
    uint64_t element_order(int level, uint64_t a) const {
        check(level, a, 0);
        if (a == 0) throw std::invalid_argument("order of zero is undefined");
        uint64_t n = levels_[level].size - 1;
        uint64_t order = n;
        for (uint64_t r : detail::prime_factors_u64(n)) {
            while (order % r == 0 && pow(level, a, order / r) == 1) order /= r;
        }
        return order;
    }

    // Coefficient vector over the level below <-> packed code.
    std::vector<uint64_t> unpack(int level, uint64_t code) const {
        check(level, code, 0);
        if (level == 0) return {code};
        const uint64_t base = levels_[level - 1].size;
        std::vector<uint64_t> digits(levels_[level].degree);
        for (auto& d : digits) {
            d = code % base;
            code /= base;
        }
        return digits;
    }

    uint64_t pack(int level, std::span<const uint64_t> digits) const {
        if (level == 0) {
            if (digits.size() != 1 || digits[0] >= levels_[0].size) throw std::invalid_argument("bad prime field coefficients");
            return digits[0];
        }
        if (digits.size() != levels_[level].degree) throw std::invalid_argument("coefficient count does not match extension degree");
        const uint64_t base = levels_[level - 1].size;
        uint64_t code = 0;
        for (size_t i = digits.size(); i-- > 0;) {
            if (digits[i] >= base) throw std::invalid_argument("coefficient exceeds base field size");
            code = code * base + digits[i];
        }
        return code;
    }

    // Root of the level's modulus: x itself for degree >= 2, -c for x + c.
    uint64_t generator(int level) const {
        if (level < 1 || level > 3) throw std::invalid_argument("no generator at level " + std::to_string(level));
        const Level& lv = levels_[level];
        if (lv.degree >= 2) return levels_[level - 1].size;  // digits (0,1,0,...)
        uint64_t c = lv.modulus[0];
        return neg_generic_at(level - 1, c);
    }

    FieldElement element(int level, uint64_t code) const {
        check(level, code, 0);
        return FieldElement{this, level, code};
    }
    FieldElement zero(int level) const { return element(level, 0); }
    FieldElement one(int level) const { return element(level, 1); }
    FieldElement alpha() const { return element(kLevelQk, generator(kLevelQk)); }
    FieldElement beta() const { return element(kLevelQn, generator(kLevelQn)); }

    // Smallest monic primitive polynomial of the given degree over the given
    // level, by ascending integer value of the coefficient tuple (constant
    // term least significant). Deterministic.
    std::vector<uint64_t> find_primitive_poly(int base_level, uint32_t deg) const {
        if (deg < 1) throw std::invalid_argument("degree must be positive");
        const uint64_t base_size = levels_.at(base_level).size;
        const uint64_t ext_size = checked_pow(base_size, deg);
        const auto primes = detail::prime_factors_u64(ext_size - 1);
        uint64_t count = ext_size;  // number of monic candidates
        for (uint64_t v = 0; v < count; ++v) {
            std::vector<uint64_t> poly(deg + 1);
            uint64_t tmp = v;
            for (uint32_t i = 0; i < deg; ++i) {
                poly[i] = tmp % base_size;
                tmp /= base_size;
            }
            poly[deg] = 1;
            if (poly[0] == 0) continue;  // divisible by x
            if (deg >= 2) {
                // x^d + c is never primitive: its root's order divides
                // d*(base size - 1) < base size^d - 1.
                bool binomial = true;
                for (uint32_t i = 1; i < deg && binomial; ++i) binomial = poly[i] == 0;
                if (binomial) continue;
            }
            if (!poly_is_irreducible(base_level, poly)) continue;
            if (poly_is_primitive(base_level, poly, primes)) return poly;
        }
        throw std::logic_error("no primitive polynomial found");  // unreachable
    }

    bool poly_is_irreducible(int level, const std::vector<uint64_t>& poly) const {
        const uint32_t deg = poly_degree(poly);
        if (deg == 0) return false;
        if (deg == 1) return true;
        if (deg <= 3) return !poly_has_root(level, poly);
        // Trial division by every lower-degree monic irreducible.
        for (uint32_t m = 1; m <= deg / 2; ++m) {
            const uint64_t base_size = levels_[level].size;
            uint64_t cnt = checked_pow(base_size, m);
            for (uint64_t v = 0; v < cnt; ++v) {
                std::vector<uint64_t> g(m + 1);
                uint64_t tmp = v;
                for (uint32_t i = 0; i < m; ++i) {
                    g[i] = tmp % base_size;
                    tmp /= base_size;
                }
                g[m] = 1;
                if (!poly_is_irreducible(level, g)) continue;
                if (poly_rem_is_zero(level, poly, g)) return false;
            }
        }
        return true;
    }

    // The root generates the full multiplicative group of the extension.
    bool poly_is_primitive(int level, const std::vector<uint64_t>& poly,
                           const std::vector<uint64_t>& n_minus_one_primes) const {
        const uint32_t deg = poly_degree(poly);
        const uint64_t n = checked_pow(levels_[level].size, deg) - 1;
        std::vector<uint64_t> x = {0, 1};
        if (deg == 1) x = {neg_generic_at(level, poly[0])};
        if (poly_eval_is_zero_constant(x)) return false;
        for (uint64_t r : n_minus_one_primes) {
            if (poly_powmod_is_one(level, x, n / r, poly)) return false;
        }
        return poly_powmod_is_one(level, x, n, poly);
    }

  private:
    struct Level {
        uint64_t size = 0;
        uint32_t degree = 1;
        std::vector<uint64_t> modulus;    // monic, length degree+1
        std::vector<uint64_t> reduction;  // -modulus[j] for j < degree
        bool tabled = false;
        std::vector<uint16_t> add_table, mul_table;
        std::vector<uint16_t> neg_table, inv_table;
    };

    std::vector<Level> levels_;

    void check(int level, uint64_t a, uint64_t b) const {
        if (level < 0 || level >= static_cast<int>(levels_.size())) throw std::invalid_argument("bad tower level");
        if (a >= levels_[level].size || b >= levels_[level].size) throw std::invalid_argument("element code out of range for level");
    }

    static uint64_t checked_pow(uint64_t base, uint32_t exp) {
        unsigned __int128 v = 1;
        for (uint32_t i = 0; i < exp; ++i) {
            v *= base;
            if (v > (static_cast<unsigned __int128>(1) << 63)) throw std::invalid_argument("tower field larger than 2^63 elements");
        }
        return static_cast<uint64_t>(v);
    }

    void push_level(int level, uint32_t deg, std::optional<std::vector<uint64_t>> override_modulus) {
        Level& lv = levels_[level];
        lv.degree = deg;
        lv.size = checked_pow(levels_[level - 1].size, deg);
        std::vector<uint64_t> mod;
        if (override_modulus) {
            mod = std::move(*override_modulus);
            validate_modulus(level - 1, mod, deg);
        } else {
            mod = find_primitive_poly(level - 1, deg);
        }
        lv.modulus = std::move(mod);
        lv.reduction.resize(deg);
        for (uint32_t j = 0; j < deg; ++j) lv.reduction[j] = neg_generic_at(level - 1, lv.modulus[j]);
        // Levels 0..2 carry the hot arithmetic (matrices over F_q, the
        // decoder over F_{q^k}); level 3 is only touched by the vector-space
        // isomorphisms, so it stays on the generic path.
        if (level <= 2) init_tables(level);
    }

    void validate_modulus(int base_level, const std::vector<uint64_t>& mod, uint32_t deg) const {
        if (mod.size() != deg + 1) throw std::invalid_argument("modulus degree mismatch");
        if (mod.back() != 1) throw std::invalid_argument("modulus must be monic");
        for (uint64_t c : mod) {
            if (c >= levels_[base_level].size) throw std::invalid_argument("modulus coefficient out of range");
        }
        if (!poly_is_irreducible(base_level, mod)) throw std::invalid_argument("modulus is not irreducible");
        const uint64_t n = checked_pow(levels_[base_level].size, deg);
        if (!poly_is_primitive(base_level, mod, detail::prime_factors_u64(n - 1))) {
            throw std::invalid_argument("modulus is not primitive");
        }
    }

    void init_tables(int level) {
        Level& lv = levels_[level];
        if (lv.size > kTableLimit) return;
        const size_t s = static_cast<size_t>(lv.size);
        lv.add_table.resize(s * s);
        lv.mul_table.resize(s * s);
        lv.neg_table.resize(s);
        lv.inv_table.assign(s, 0);
        for (size_t a = 0; a < s; ++a) {
            lv.neg_table[a] = static_cast<uint16_t>(neg_generic(level, a));
            for (size_t b = 0; b < s; ++b) {
                lv.add_table[a * s + b] = static_cast<uint16_t>(add_generic(level, a, b));
                uint64_t prod = mul_generic(level, a, b);
                lv.mul_table[a * s + b] = static_cast<uint16_t>(prod);
                if (prod == 1) lv.inv_table[a] = static_cast<uint16_t>(b);
            }
        }
        lv.tabled = true;
    }

    // --- generic (table-free) arithmetic ---

    uint64_t add_generic(int level, uint64_t a, uint64_t b) const {
        if (level == 0) return (a + b) % levels_[0].size;
        const Level& lv = levels_[level];
        const uint64_t base = levels_[level - 1].size;
        uint64_t out = 0, mult = 1;
        for (uint32_t i = 0; i < lv.degree; ++i) {
            out += add_generic(level - 1, a % base, b % base) * mult;
            a /= base;
            b /= base;
            mult *= base;
        }
        return out;
    }

    uint64_t neg_generic(int level, uint64_t a) const {
        if (level == 0) {
            uint64_t p = levels_[0].size;
            return (p - a % p) % p;
        }
        const Level& lv = levels_[level];
        const uint64_t base = levels_[level - 1].size;
        uint64_t out = 0, mult = 1;
        for (uint32_t i = 0; i < lv.degree; ++i) {
            out += neg_generic(level - 1, a % base) * mult;
            a /= base;
            mult *= base;
        }
        return out;
    }

    // neg with table use when available (helper for generator()/reduction).
    uint64_t neg_generic_at(int level, uint64_t a) const {
        const Level& lv = levels_[level];
        if (lv.tabled) return lv.neg_table[a];
        return neg_generic(level, a);
    }

    uint64_t mul_generic(int level, uint64_t a, uint64_t b) const {
        if (level == 0) return a * b % levels_[0].size;
        const Level& lv = levels_[level];
        const int lower = level - 1;
        const uint32_t d = lv.degree;
        auto da = unpack_fast(level, a);
        auto db = unpack_fast(level, b);
        std::vector<uint64_t> prod(2 * d - 1, 0);
        for (uint32_t i = 0; i < d; ++i) {
            if (da[i] == 0) continue;
            for (uint32_t j = 0; j < d; ++j) {
                if (db[j] == 0) continue;
                prod[i + j] = low_add(lower, prod[i + j], low_mul(lower, da[i], db[j]));
            }
        }
        for (uint32_t i = 2 * d - 2; i >= d && i < 2 * d; --i) {
            uint64_t c = prod[i];
            if (c == 0) continue;
            prod[i] = 0;
            for (uint32_t j = 0; j < d; ++j) {
                prod[i - d + j] = low_add(lower, prod[i - d + j], low_mul(lower, c, lv.reduction[j]));
            }
        }
        prod.resize(d);
        const uint64_t base = levels_[lower].size;
        uint64_t code = 0;
        for (size_t i = d; i-- > 0;) code = code * base + prod[i];
        return code;
    }

    std::vector<uint64_t> unpack_fast(int level, uint64_t code) const {
        const uint64_t base = levels_[level - 1].size;
        std::vector<uint64_t> digits(levels_[level].degree);
        for (auto& dd : digits) {
            dd = code % base;
            code /= base;
        }
        return digits;
    }

    uint64_t low_add(int level, uint64_t a, uint64_t b) const {
        const Level& lv = levels_[level];
        if (lv.tabled) return lv.add_table[a * lv.size + b];
        return add_generic(level, a, b);
    }

    uint64_t low_mul(int level, uint64_t a, uint64_t b) const {
        const Level& lv = levels_[level];
        if (lv.tabled) return lv.mul_table[a * lv.size + b];
        return mul_generic(level, a, b);
    }

    // --- polynomial helpers over one level (coefficients are codes) ---

    static uint32_t poly_degree(const std::vector<uint64_t>& poly) {
        size_t d = poly.size();
        while (d > 0 && poly[d - 1] == 0) --d;
        return d == 0 ? 0 : static_cast<uint32_t>(d - 1);
    }

    static bool poly_eval_is_zero_constant(const std::vector<uint64_t>& poly) {
        for (uint64_t c : poly) {
            if (c != 0) return false;
        }
        return true;
    }

    bool poly_has_root(int level, const std::vector<uint64_t>& poly) const {
        const uint64_t s = levels_[level].size;
        if (s <= 4096) {
            for (uint64_t x = 0; x < s; ++x) {
                uint64_t acc = 0;
                for (size_t i = poly.size(); i-- > 0;) acc = low_add(level, low_mul(level, acc, x), poly[i]);
                if (acc == 0) return true;
            }
            return false;
        }
        // Large base field: x^s - x splits into all linear factors, so a root
        // exists exactly when gcd(x^s - x, f) is nonconstant.
        std::vector<uint64_t> xs = poly_powmod(level, {0, 1}, s, poly);
        if (xs.size() < 2) xs.resize(2, 0);
        xs[1] = low_add(level, xs[1], neg_generic_at(level, 1));  // x^s - x mod f
        return poly_gcd_degree(level, xs, poly) >= 1;
    }

    // Degree of gcd(a, b) over the level (euclidean algorithm).
    uint32_t poly_gcd_degree(int level, std::vector<uint64_t> a, std::vector<uint64_t> b) const {
        auto is_zero = [](const std::vector<uint64_t>& p) {
            for (uint64_t c : p) {
                if (c != 0) return false;
            }
            return true;
        };
        while (!is_zero(b)) {
            // a mod b with b scaled monic
            const uint32_t db = poly_degree(b);
            const uint64_t lead_inv = inv(level, b[db]);
            std::vector<uint64_t> monic(b.begin(), b.begin() + db + 1);
            for (auto& c : monic) c = low_mul(level, c, lead_inv);
            while (true) {
                uint32_t da = poly_degree(a);
                if (da < db || is_zero(a)) break;
                const uint64_t c = a[da];
                a[da] = 0;
                const uint64_t nc = neg_generic_at(level, c);
                for (uint32_t j = 0; j < db; ++j) {
                    a[da - db + j] = low_add(level, a[da - db + j], low_mul(level, nc, monic[j]));
                }
            }
            std::swap(a, b);
        }
        return poly_degree(a);
    }

    // Remainder of a modulo monic g is zero?
    bool poly_rem_is_zero(int level, std::vector<uint64_t> a, const std::vector<uint64_t>& g) const {
        const uint32_t dg = poly_degree(g);
        while (true) {
            uint32_t da = poly_degree(a);
            if (da < dg || (da == 0 && a[0] == 0)) break;
            uint64_t c = a[da];
            a[da] = 0;
            for (uint32_t j = 0; j < dg; ++j) {
                a[da - dg + j] = low_add(level, a[da - dg + j], low_mul(level, neg_generic_at(level, c), g[j]));
            }
        }
        for (uint64_t c : a) {
            if (c != 0) return false;
        }
        return true;
    }

    std::vector<uint64_t> poly_mulmod(int level, const std::vector<uint64_t>& a, const std::vector<uint64_t>& b,
                                      const std::vector<uint64_t>& mod) const {
        const uint32_t dm = poly_degree(mod);
        std::vector<uint64_t> prod(a.size() + b.size(), 0);
        for (size_t i = 0; i < a.size(); ++i) {
            if (a[i] == 0) continue;
            for (size_t j = 0; j < b.size(); ++j) {
                if (b[j] == 0) continue;
                prod[i + j] = low_add(level, prod[i + j], low_mul(level, a[i], b[j]));
            }
        }
        for (size_t i = prod.size(); i-- > dm;) {
            uint64_t c = prod[i];
            if (c == 0) continue;
            prod[i] = 0;
            uint64_t nc = neg_generic_at(level, c);
            for (uint32_t j = 0; j < dm; ++j) {
                prod[i - dm + j] = low_add(level, prod[i - dm + j], low_mul(level, nc, mod[j]));
            }
        }
        prod.resize(std::max<uint32_t>(dm, 1));
        return prod;
    }

    std::vector<uint64_t> poly_powmod(int level, std::vector<uint64_t> base, uint64_t e,
                                      const std::vector<uint64_t>& mod) const {
        std::vector<uint64_t> r = {1};
        r.resize(std::max<size_t>(1, poly_degree(mod)), 0);
        while (e) {
            if (e & 1) r = poly_mulmod(level, r, base, mod);
            e >>= 1;
            if (e) base = poly_mulmod(level, base, base, mod);
        }
        return r;
    }

    bool poly_powmod_is_one(int level, std::vector<uint64_t> base, uint64_t e, const std::vector<uint64_t>& mod) const {
        std::vector<uint64_t> r = poly_powmod(level, std::move(base), e, mod);
        if (r.empty() || r[0] != 1) return false;
        for (size_t i = 1; i < r.size(); ++i) {
            if (r[i] != 0) return false;
        }
        return true;
    }
};

inline FieldElement FieldElement::operator+(const FieldElement& o) const {
    if (tower != o.tower || level != o.level) throw std::invalid_argument("field elements live at different levels");
    return {tower, level, tower->add(level, code, o.code)};
}
inline FieldElement FieldElement::operator-(const FieldElement& o) const {
    if (tower != o.tower || level != o.level) throw std::invalid_argument("field elements live at different levels");
    return {tower, level, tower->sub(level, code, o.code)};
}
inline FieldElement FieldElement::operator*(const FieldElement& o) const {
    if (tower != o.tower || level != o.level) throw std::invalid_argument("field elements live at different levels");
    return {tower, level, tower->mul(level, code, o.code)};
}
inline FieldElement FieldElement::operator-() const { return {tower, level, tower->neg(level, code)}; }
inline FieldElement FieldElement::inverse() const { return {tower, level, tower->inv(level, code)}; }
inline FieldElement FieldElement::pow(uint64_t e) const { return {tower, level, tower->pow(level, code, e)}; }
inline std::vector<FieldElement> FieldElement::coeffs() const {
    auto digits = tower->unpack(level, code);
    std::vector<FieldElement> out;
    out.reserve(digits.size());
    for (uint64_t d : digits) out.push_back({tower, level > 0 ? level - 1 : 0, d});
    return out;
}

}  // namespace spreadec
