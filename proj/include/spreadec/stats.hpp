#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <string>
#include <thread>
#include <vector>

#include "bigint.hpp"
#include "channel.hpp"

namespace spreadec {

inline BigUint big_pow_u64(uint64_t base, uint64_t exp) { return BigUint::pow(BigUint(base), exp); }

inline BigUint binomial_big(uint64_t n, uint64_t k) {
    if (k > n) return BigUint(0);
    if (k > n - k) k = n - k;
    BigUint num(1), den(1);
    for (uint64_t i = 0; i < k; ++i) {
        num = num * BigUint(n - i);
        den = den * BigUint(i + 1);
    }
    auto dm = BigUint::divmod(num, den);
    return dm.quotient;
}

inline BigUint gl_cardinality(uint64_t q, uint32_t k) {
    BigUint out(1);
    const BigUint qk = big_pow_u64(q, k);
    for (uint32_t i = 0; i < k; ++i) out = out * (qk - big_pow_u64(q, i));
    return out;
}

// Number of invertible k x k matrices whose last column has exactly z zero
// entries: (q-1)^(k-z) C(k,z) prod_{i=1}^{k-1} (q^k - q^i).
inline BigUint gl_zero_column_count(uint64_t q, uint32_t k, uint32_t z) {
    if (z >= k) throw std::invalid_argument("the last column of an invertible matrix cannot be all zero");
    BigUint out = big_pow_u64(q - 1, k - z) * binomial_big(k, z);
    const BigUint qk = big_pow_u64(q, k);
    for (uint32_t i = 1; i < k; ++i) out = out * (qk - big_pow_u64(q, i));
    return out;
}

// With one inserted error, the probability that exactly z of the k' received
// basis vectors are error-free: (q-1)^(k'-z) / (q^k' - 1) * C(k',z).
inline Rational prob_z_error_free(uint64_t q, uint32_t k_prime, uint32_t z) {
    if (z >= k_prime) throw std::invalid_argument("at least one received vector must be erroneous");
    BigInt num(big_pow_u64(q - 1, k_prime - z) * binomial_big(k_prime, z));
    BigInt den(big_pow_u64(q, k_prime) - BigUint(1));
    return Rational(num, den);
}

// Expected number of error-free received basis vectors:
// k' (q^(k'-1) - 1) / (q^k' - 1). Cross-checked against the term-by-term sum.
inline Rational expected_error_free(uint64_t q, uint32_t k_prime) {
    if (k_prime < 1) throw std::invalid_argument("k' must be at least 1");
    BigInt num(BigUint(k_prime) * (big_pow_u64(q, k_prime - 1) - BigUint(1)));
    BigInt den(big_pow_u64(q, k_prime) - BigUint(1));
    Rational closed(num, den);
    Rational sum(0);
    for (uint32_t z = 0; z < k_prime; ++z) sum = sum + Rational(z) * prob_z_error_free(q, k_prime, z);
    if (sum != closed) throw std::logic_error("closed form disagrees with the expectation sum");
    return closed;
}

// Probability that a decodable one-error, one-erasure reception lets the
// decoder finish in round one:
// 1 - (q-1)^k' (q^u - 1) / ((q-1)^u (q^k' - 1)) with u = ceil((k'+1)/2).
inline Rational prob_first_round(uint64_t q, uint32_t k_prime) {
    if (k_prime < 2) throw std::invalid_argument("first-round probability needs k' >= 2");
    const uint32_t u = decode_threshold(k_prime);
    Rational frac(BigInt(big_pow_u64(q - 1, k_prime) * (big_pow_u64(q, u) - BigUint(1))),
                  BigInt(big_pow_u64(q - 1, u) * (big_pow_u64(q, k_prime) - BigUint(1))));
    return Rational(1) - frac;
}

// Tail of the error-free distribution: probability that at least m of the
// k' received basis vectors are error-free. This is the exact probability of
// the channel event behind the first-round analysis (the census over GL_{k'}
// confirms it); the printed closed form above differs from it for k' >= 3.
inline Rational prob_error_free_at_least(uint64_t q, uint32_t k_prime, uint32_t m) {
    Rational out(0);
    for (uint32_t z = m; z < k_prime; ++z) out = out + prob_z_error_free(q, k_prime, z);
    return out;
}

// Smallest k' in [2, 40] whose first-round probability exceeds one half;
// checks the claim that k' = 2q - 1 already suffices for q in {2,3,4,5}.
inline uint32_t threshold_claim_check(uint64_t q) {
    if (q < 2) throw std::invalid_argument("q must be at least 2");
    const Rational half(1, 2);
    if (q <= 5 && prob_first_round(q, static_cast<uint32_t>(2 * q - 1)) < half) {
        throw std::logic_error("first-round probability at k' = 2q - 1 is not above one half");
    }
    for (uint32_t k_prime = 2; k_prime <= 40; ++k_prime) {
        if (half < prob_first_round(q, k_prime)) return k_prime;
    }
    throw std::logic_error("no k' below 41 exceeds one half");
}

// Exhaustive census of GL_k(F_q) by zero count of the last column; the
// independent oracle for the closed form above.
inline std::vector<uint64_t> gl_zero_column_census(const FieldTower& tower, uint32_t k, uint64_t cap = kDefaultEnumCap) {
    const uint64_t q = tower.q();
    unsigned __int128 total = 1;
    for (uint32_t i = 0; i < k * k; ++i) {
        total *= q;
        if (total > cap) throw std::runtime_error("matrix enumeration exceeds cap");
    }
    std::vector<uint64_t> counts(k + 1, 0);
    MatrixFq m(tower, k, k);
    const uint64_t entries = static_cast<uint64_t>(k) * k;
    std::vector<uint64_t> digits(entries, 0);
    for (unsigned __int128 it = 0; it < total; ++it) {
        for (uint64_t e = 0; e < entries; ++e) m.at(static_cast<uint32_t>(e / k), static_cast<uint32_t>(e % k)) = digits[e];
        if (rref(m).rank == k) {
            uint32_t z = 0;
            for (uint32_t i = 0; i < k; ++i) {
                if (m.at(i, k - 1) == 0) ++z;
            }
            ++counts[z];
        }
        for (uint64_t e = 0; e < entries; ++e) {
            if (++digits[e] < q) break;
            digits[e] = 0;
        }
    }
    return counts;
}

// --- Monte Carlo over the operator channel, one erasure and one error ---

namespace detail {

// Deterministic sharding: trial t always uses the stream split(t) of the
// master seed, so totals do not depend on the worker count.
template <class PerTrial, class Accum>
inline void run_sharded(uint64_t trials, const Rng& master, unsigned jobs, PerTrial per_trial, Accum& accum) {
    if (jobs <= 1) {
        for (uint64_t t = 0; t < trials; ++t) {
            Rng rng = master.split(t);
            per_trial(rng, accum);
        }
        return;
    }
    std::vector<Accum> parts(jobs, accum);
    std::vector<std::thread> workers;
    workers.reserve(jobs);
    for (unsigned w = 0; w < jobs; ++w) {
        workers.emplace_back([&, w] {
            for (uint64_t t = w; t < trials; t += jobs) {
                Rng rng = master.split(t);
                per_trial(rng, parts[w]);
            }
        });
    }
    for (auto& th : workers) th.join();
    for (const auto& part : parts) accum.merge(part);
}

}  // namespace detail

inline Gamma random_gamma(const SpreadParams& params, Rng& rng) {
    const FieldTower& t = *params.tower;
    const uint64_t field = t.size(kLevelQk);
    std::vector<uint64_t> coords(params.l);
    while (true) {
        bool nonzero = false;
        for (auto& c : coords) {
            c = rng.below(field);
            nonzero = nonzero || c != 0;
        }
        if (!nonzero) continue;
        uint32_t s = 0;
        while (coords[s] == 0) ++s;
        const uint64_t inv = t.inv(kLevelQk, coords[s]);
        for (uint32_t j = s; j < params.l; ++j) coords[j] = t.mul(kLevelQk, coords[j], inv);
        return Gamma{coords};
    }
}

struct ErrorFreeHistogram {
    std::vector<uint64_t> z_count;
    uint64_t trials = 0;

    void merge(const ErrorFreeHistogram& o) {
        trials += o.trials;
        for (size_t i = 0; i < z_count.size(); ++i) z_count[i] += o.z_count[i];
    }

    double mean() const {
        double acc = 0;
        for (size_t z = 0; z < z_count.size(); ++z) acc += static_cast<double>(z) * z_count[z];
        return acc / static_cast<double>(trials);
    }

    double freq_at_least(uint32_t m) const {
        uint64_t acc = 0;
        for (size_t z = m; z < z_count.size(); ++z) acc += z_count[z];
        return static_cast<double>(acc) / static_cast<double>(trials);
    }

    double freq_of(uint32_t z) const { return static_cast<double>(z_count[z]) / static_cast<double>(trials); }
};

// Histogram of the error-free count z over `trials` transmissions with one
// erasure and one error (so dim(received) = k).
inline ErrorFreeHistogram mc_error_free(const SpreadParams& params, uint64_t trials, const Rng& master,
                                        unsigned jobs = 1) {
    if (trials < 1) throw std::invalid_argument("need at least one trial");
    ErrorFreeHistogram hist;
    hist.z_count.assign(params.k + 1, 0);
    auto per_trial = [&params](Rng& rng, ErrorFreeHistogram& h) {
        Codeword w = encode(params, random_gamma(params, rng));
        TransmitResult res = transmit(params, w, ChannelConfig{1, 1}, rng);
        ++h.z_count[count_error_free_rows(res.truth, w)];
        ++h.trials;
    };
    detail::run_sharded(trials, master, jobs, per_trial, hist);
    return hist;
}

struct FirstRoundMc {
    uint64_t trials = 0;
    uint64_t truth_hits = 0;           // >= ceil((k'+1)/2) received rows error-free
    uint64_t decoder_round1_hits = 0;  // decode_improved finished in round one

    void merge(const FirstRoundMc& o) {
        trials += o.trials;
        truth_hits += o.truth_hits;
        decoder_round1_hits += o.decoder_round1_hits;
    }

    double truth_freq() const { return static_cast<double>(truth_hits) / static_cast<double>(trials); }
    double decoder_round1_freq() const { return static_cast<double>(decoder_round1_hits) / static_cast<double>(trials); }
};

// One erasure, one error, so k' = k. Measures the channel event the closed
// form describes (enough error-free received rows) from the truth record,
// and separately the decoder's own round-one rate.
inline FirstRoundMc monte_carlo_first_round(const SpreadParams& params, uint64_t trials, const Rng& master,
                                            bool run_decoder = true, unsigned jobs = 1) {
    if (trials < 1) throw std::invalid_argument("need at least one trial");
    const uint32_t threshold = decode_threshold(params.k);
    FirstRoundMc mc;
    auto per_trial = [&params, threshold, run_decoder](Rng& rng, FirstRoundMc& acc) {
        Codeword w = encode(params, random_gamma(params, rng));
        TransmitResult res = transmit(params, w, ChannelConfig{1, 1}, rng);
        if (count_error_free_rows(res.truth, w) >= threshold) ++acc.truth_hits;
        if (run_decoder) {
            DecodeReport rep = decode_improved(params, res.received);
            if (rep.decodable() && rep.rounds_used == 1) ++acc.decoder_round1_hits;
        }
        ++acc.trials;
    };
    detail::run_sharded(trials, master, jobs, per_trial, mc);
    return mc;
}

// --- CSV output ---
//
// One row per (q, k'): table, q, kprime, closed_form_num, closed_form_den,
// closed_form_float, and with Monte Carlo enabled also mc_freq, trials,
// sigma, pass.

struct TableRow {
    std::string table;  // "thm10" or "cor12"
    uint64_t q = 0;
    uint32_t k_prime = 0;
    Rational closed_form;
    bool with_mc = false;
    double mc_value = 0;
    uint64_t trials = 0;
    double sigma = 0;
    bool pass = false;
};

inline std::string csv_header(bool with_mc) {
    std::string out = "table,q,kprime,closed_form_num,closed_form_den,closed_form_float";
    if (with_mc) out += ",mc_freq,trials,sigma,pass";
    out += "\n";
    return out;
}

inline std::string csv_row(const TableRow& row) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.10g", row.closed_form.to_double());
    std::string out = row.table + "," + std::to_string(row.q) + "," + std::to_string(row.k_prime) + "," +
                      row.closed_form.num().to_string() + "," + row.closed_form.den().to_string() + "," + buf;
    if (row.with_mc) {
        std::snprintf(buf, sizeof(buf), "%.6f", row.mc_value);
        out += std::string(",") + buf;
        out += "," + std::to_string(row.trials);
        std::snprintf(buf, sizeof(buf), "%.6g", row.sigma);
        out += std::string(",") + buf;
        out += row.pass ? ",1" : ",0";
    }
    out += "\n";
    return out;
}

// Exact standard deviation of the error-free count under the closed-form
// distribution; used to put a 3-sigma band around the Monte Carlo mean.
inline double exact_sd_error_free(uint64_t q, uint32_t k_prime) {
    Rational mean = expected_error_free(q, k_prime);
    Rational second(0);
    for (uint32_t z = 0; z < k_prime; ++z) {
        second = second + Rational(static_cast<int64_t>(z) * z) * prob_z_error_free(q, k_prime, z);
    }
    Rational var = second - mean * mean;
    return std::sqrt(var.to_double());
}

inline double binomial_sigma(double p, uint64_t trials) {
    return std::sqrt(p * (1.0 - p) / static_cast<double>(trials));
}

}  // namespace spreadec
