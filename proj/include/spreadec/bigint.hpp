#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace spreadec {

// Unsigned arbitrary-precision integer, little-endian base-2^32 limbs.
// Scope is exact combinatorics at code-table scale (a couple hundred bits);
// division is bitwise long division, which is plenty fast there.
class BigUint {
  public:
    BigUint() = default;
    BigUint(uint64_t v) {
        if (v) {
            limbs_.push_back(static_cast<uint32_t>(v));
            if (v >> 32) limbs_.push_back(static_cast<uint32_t>(v >> 32));
        }
    }

    bool is_zero() const { return limbs_.empty(); }

    size_t bit_length() const {
        if (limbs_.empty()) return 0;
        uint32_t top = limbs_.back();
        size_t bits = (limbs_.size() - 1) * 32;
        while (top) {
            ++bits;
            top >>= 1;
        }
        return bits;
    }

    bool bit(size_t i) const {
        size_t limb = i / 32;
        if (limb >= limbs_.size()) return false;
        return (limbs_[limb] >> (i % 32)) & 1u;
    }

    static int compare(const BigUint& a, const BigUint& b) {
        if (a.limbs_.size() != b.limbs_.size()) return a.limbs_.size() < b.limbs_.size() ? -1 : 1;
        for (size_t i = a.limbs_.size(); i-- > 0;) {
            if (a.limbs_[i] != b.limbs_[i]) return a.limbs_[i] < b.limbs_[i] ? -1 : 1;
        }
        return 0;
    }

    friend bool operator==(const BigUint& a, const BigUint& b) { return compare(a, b) == 0; }
    friend bool operator!=(const BigUint& a, const BigUint& b) { return compare(a, b) != 0; }
    friend bool operator<(const BigUint& a, const BigUint& b) { return compare(a, b) < 0; }
    friend bool operator<=(const BigUint& a, const BigUint& b) { return compare(a, b) <= 0; }
    friend bool operator>(const BigUint& a, const BigUint& b) { return compare(a, b) > 0; }
    friend bool operator>=(const BigUint& a, const BigUint& b) { return compare(a, b) >= 0; }

    friend BigUint operator+(const BigUint& a, const BigUint& b) {
        BigUint r;
        const size_t n = std::max(a.limbs_.size(), b.limbs_.size());
        r.limbs_.reserve(n + 1);
        uint64_t carry = 0;
        for (size_t i = 0; i < n; ++i) {
            uint64_t s = carry;
            if (i < a.limbs_.size()) s += a.limbs_[i];
            if (i < b.limbs_.size()) s += b.limbs_[i];
            r.limbs_.push_back(static_cast<uint32_t>(s));
            carry = s >> 32;
        }
        if (carry) r.limbs_.push_back(static_cast<uint32_t>(carry));
        return r;
    }

    // Requires a >= b.
    friend BigUint operator-(const BigUint& a, const BigUint& b) {
        if (a < b) throw std::invalid_argument("BigUint subtraction underflow");
        BigUint r;
        r.limbs_.reserve(a.limbs_.size());
        int64_t borrow = 0;
        for (size_t i = 0; i < a.limbs_.size(); ++i) {
            int64_t s = static_cast<int64_t>(a.limbs_[i]) - borrow - (i < b.limbs_.size() ? b.limbs_[i] : 0);
            borrow = 0;
            if (s < 0) {
                s += int64_t(1) << 32;
                borrow = 1;
            }
            r.limbs_.push_back(static_cast<uint32_t>(s));
        }
        r.trim();
        return r;
    }

    friend BigUint operator*(const BigUint& a, const BigUint& b) {
        if (a.is_zero() || b.is_zero()) return BigUint();
        BigUint r;
        r.limbs_.assign(a.limbs_.size() + b.limbs_.size(), 0);
        for (size_t i = 0; i < a.limbs_.size(); ++i) {
            uint64_t carry = 0;
            for (size_t j = 0; j < b.limbs_.size(); ++j) {
                uint64_t cur = r.limbs_[i + j] + static_cast<uint64_t>(a.limbs_[i]) * b.limbs_[j] + carry;
                r.limbs_[i + j] = static_cast<uint32_t>(cur);
                carry = cur >> 32;
            }
            r.limbs_[i + b.limbs_.size()] += static_cast<uint32_t>(carry);
        }
        r.trim();
        return r;
    }

    struct DivMod;
    static DivMod divmod(const BigUint& a, const BigUint& b);

    friend BigUint operator/(const BigUint& a, const BigUint& b);
    friend BigUint operator%(const BigUint& a, const BigUint& b);

    static BigUint gcd(BigUint a, BigUint b);

    static BigUint pow(BigUint base, uint64_t exp) {
        BigUint r(1);
        while (exp) {
            if (exp & 1) r = r * base;
            exp >>= 1;
            if (exp) base = base * base;
        }
        return r;
    }

    // Exact conversion only for values < 2^64.
    uint64_t to_u64() const {
        if (limbs_.size() > 2) throw std::overflow_error("BigUint does not fit in 64 bits");
        uint64_t v = 0;
        if (limbs_.size() > 1) v = static_cast<uint64_t>(limbs_[1]) << 32;
        if (!limbs_.empty()) v |= limbs_[0];
        return v;
    }

    long double to_long_double() const {
        long double v = 0;
        for (size_t i = limbs_.size(); i-- > 0;) v = v * 4294967296.0L + limbs_[i];
        return v;
    }

    std::string to_string() const {
        if (is_zero()) return "0";
        std::string out;
        BigUint cur = *this;
        while (!cur.is_zero()) {
            uint32_t rem = cur.divmod_small_inplace(1000000000u);
            std::string chunk = std::to_string(rem);
            if (cur.is_zero()) {
                out = chunk + out;
            } else {
                out = std::string(9 - chunk.size(), '0') + chunk + out;
            }
        }
        return out;
    }

  private:
    std::vector<uint32_t> limbs_;

    void trim() {
        while (!limbs_.empty() && limbs_.back() == 0) limbs_.pop_back();
    }

    void shl1() {
        uint32_t carry = 0;
        for (auto& limb : limbs_) {
            uint32_t next = limb >> 31;
            limb = (limb << 1) | carry;
            carry = next;
        }
        if (carry) limbs_.push_back(carry);
    }

    void set_bit(size_t i) {
        size_t limb = i / 32;
        if (limb >= limbs_.size()) limbs_.resize(limb + 1, 0);
        limbs_[limb] |= uint32_t(1) << (i % 32);
    }

    uint32_t divmod_small_inplace(uint32_t d) {
        uint64_t rem = 0;
        for (size_t i = limbs_.size(); i-- > 0;) {
            uint64_t cur = (rem << 32) | limbs_[i];
            limbs_[i] = static_cast<uint32_t>(cur / d);
            rem = cur % d;
        }
        trim();
        return static_cast<uint32_t>(rem);
    }
};

struct BigUint::DivMod {
    BigUint quotient;
    BigUint remainder;
};

inline BigUint::DivMod BigUint::divmod(const BigUint& a, const BigUint& b) {
    if (b.is_zero()) throw std::invalid_argument("BigUint division by zero");
    DivMod out;
    if (a < b) {
        out.remainder = a;
        return out;
    }
    out.quotient.limbs_.assign(a.limbs_.size(), 0);
    BigUint rem;
    for (size_t i = a.bit_length(); i-- > 0;) {
        rem.shl1();
        if (a.bit(i)) rem.set_bit(0);
        if (rem >= b) {
            rem = rem - b;
            out.quotient.set_bit(i);
        }
    }
    out.quotient.trim();
    out.remainder = std::move(rem);
    return out;
}

inline BigUint operator/(const BigUint& a, const BigUint& b) { return BigUint::divmod(a, b).quotient; }
inline BigUint operator%(const BigUint& a, const BigUint& b) { return BigUint::divmod(a, b).remainder; }

inline BigUint BigUint::gcd(BigUint a, BigUint b) {
    while (!b.is_zero()) {
        BigUint r = a % b;
        a = std::move(b);
        b = std::move(r);
    }
    return a;
}

// Signed wrapper.
class BigInt {
  public:
    BigInt() = default;
    BigInt(int64_t v) : sign_(v == 0 ? 0 : (v < 0 ? -1 : 1)), mag_(v < 0 ? uint64_t(-(v + 1)) + 1 : uint64_t(v)) {}
    BigInt(BigUint mag, int sign = 1) : sign_(mag.is_zero() ? 0 : sign), mag_(std::move(mag)) {}

    bool is_zero() const { return sign_ == 0; }
    int sign() const { return sign_; }
    const BigUint& magnitude() const { return mag_; }

    friend BigInt operator-(const BigInt& a) { return BigInt(a.mag_, -a.sign_); }

    friend BigInt operator+(const BigInt& a, const BigInt& b) {
        if (a.sign_ == 0) return b;
        if (b.sign_ == 0) return a;
        if (a.sign_ == b.sign_) return BigInt(a.mag_ + b.mag_, a.sign_);
        int c = BigUint::compare(a.mag_, b.mag_);
        if (c == 0) return BigInt();
        return c > 0 ? BigInt(a.mag_ - b.mag_, a.sign_) : BigInt(b.mag_ - a.mag_, b.sign_);
    }

    friend BigInt operator-(const BigInt& a, const BigInt& b) { return a + (-b); }

    friend BigInt operator*(const BigInt& a, const BigInt& b) {
        if (a.sign_ == 0 || b.sign_ == 0) return BigInt();
        return BigInt(a.mag_ * b.mag_, a.sign_ * b.sign_);
    }

    // Exact division; throws if the division leaves a remainder.
    static BigInt div_exact(const BigInt& a, const BigInt& b) {
        if (b.sign_ == 0) throw std::invalid_argument("BigInt division by zero");
        if (a.sign_ == 0) return BigInt();
        auto dm = BigUint::divmod(a.mag_, b.mag_);
        if (!dm.remainder.is_zero()) throw std::logic_error("BigInt::div_exact remainder is nonzero");
        return BigInt(std::move(dm.quotient), a.sign_ * b.sign_);
    }

    friend bool operator==(const BigInt& a, const BigInt& b) {
        return a.sign_ == b.sign_ && a.mag_ == b.mag_;
    }
    friend bool operator!=(const BigInt& a, const BigInt& b) { return !(a == b); }
    friend bool operator<(const BigInt& a, const BigInt& b) {
        if (a.sign_ != b.sign_) return a.sign_ < b.sign_;
        int c = BigUint::compare(a.mag_, b.mag_);
        return a.sign_ >= 0 ? c < 0 : c > 0;
    }

    std::string to_string() const { return sign_ < 0 ? "-" + mag_.to_string() : mag_.to_string(); }

    long double to_long_double() const { return sign_ * mag_.to_long_double(); }

  private:
    int sign_ = 0;
    BigUint mag_;
};

// Exact rational, always reduced, denominator > 0.
class Rational {
  public:
    Rational() : num_(0), den_(1) {}
    Rational(BigInt num, BigInt den) : num_(std::move(num)), den_(std::move(den)) { normalize(); }
    Rational(int64_t num, int64_t den = 1) : num_(num), den_(den) { normalize(); }

    const BigInt& num() const { return num_; }
    const BigInt& den() const { return den_; }
    bool is_zero() const { return num_.is_zero(); }

    friend Rational operator+(const Rational& a, const Rational& b) {
        return Rational(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
    }
    friend Rational operator-(const Rational& a, const Rational& b) {
        return Rational(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
    }
    friend Rational operator*(const Rational& a, const Rational& b) {
        return Rational(a.num_ * b.num_, a.den_ * b.den_);
    }
    friend Rational operator/(const Rational& a, const Rational& b) {
        if (b.is_zero()) throw std::invalid_argument("Rational division by zero");
        return Rational(a.num_ * b.den_, a.den_ * b.num_);
    }

    friend bool operator==(const Rational& a, const Rational& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
    friend bool operator<(const Rational& a, const Rational& b) {
        return a.num_ * b.den_ < b.num_ * a.den_;
    }
    friend bool operator>(const Rational& a, const Rational& b) { return b < a; }

    std::string to_string() const {
        if (den_ == BigInt(1)) return num_.to_string();
        return num_.to_string() + "/" + den_.to_string();
    }

    double to_double() const {
        return static_cast<double>(num_.to_long_double() / den_.to_long_double());
    }

  private:
    BigInt num_;
    BigInt den_;

    void normalize() {
        if (den_.is_zero()) throw std::invalid_argument("Rational with zero denominator");
        if (den_.sign() < 0) {
            num_ = -num_;
            den_ = -den_;
        }
        if (num_.is_zero()) {
            den_ = BigInt(1);
            return;
        }
        BigUint g = BigUint::gcd(num_.magnitude(), den_.magnitude());
        if (!(g == BigUint(1))) {
            BigInt gi(g);
            num_ = BigInt::div_exact(num_, gi);
            den_ = BigInt::div_exact(den_, gi);
        }
    }
};

}  // namespace spreadec
