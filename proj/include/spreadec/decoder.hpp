#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "spread_code.hpp"

namespace spreadec {

inline uint32_t decode_threshold(uint32_t k_prime) { return k_prime / 2 + 1; }  // ceil((k'+1)/2)

// Per-gamma tally of linearly independent supporters. Rows are kept in
// echelon form with pivot one, so a new voter counts only if it raises the
// rank.
class IndependentVotes {
  public:
    explicit IndependentVotes(const FieldTower& tower) : tower_(&tower) {}

    uint32_t rank() const { return static_cast<uint32_t>(rows_.size()); }

    bool add(std::span<const uint64_t> v) {
        const FieldTower& t = *tower_;
        std::vector<uint64_t> w(v.begin(), v.end());
        for (size_t i = 0; i < rows_.size(); ++i) {
            const uint64_t f = w[pivots_[i]];
            if (f == 0) continue;
            const uint64_t nf = t.neg(kLevelQ, f);
            for (size_t j = pivots_[i]; j < w.size(); ++j) {
                w[j] = t.add(kLevelQ, w[j], t.mul(kLevelQ, nf, rows_[i][j]));
            }
        }
        size_t pivot = w.size();
        for (size_t j = 0; j < w.size(); ++j) {
            if (w[j] != 0) {
                pivot = j;
                break;
            }
        }
        if (pivot == w.size()) return false;
        const uint64_t scale = t.inv(kLevelQ, w[pivot]);
        if (scale != 1) {
            for (size_t j = pivot; j < w.size(); ++j) w[j] = t.mul(kLevelQ, w[j], scale);
        }
        rows_.push_back(std::move(w));
        pivots_.push_back(pivot);
        return true;
    }

  private:
    const FieldTower* tower_;
    std::vector<std::vector<uint64_t>> rows_;
    std::vector<size_t> pivots_;
};

struct DecodeReport {
    std::optional<Codeword> codeword;          // empty means not decodable
    uint32_t rounds_used = 0;                  // largest combination support size examined
    uint64_t combinations_tested = 0;          // number of gamma evaluations
    std::vector<std::pair<Gamma, uint32_t>> gamma_votes;
    bool beyond_guarantee = false;             // f_max raised past (k'-1)/2

    bool decodable() const { return codeword.has_value(); }
};

// Flat key-value block (outcome, gamma, rounds_used, combinations_tested).
inline std::string report_to_text(const FieldTower& tower, const DecodeReport& r) {
    std::string out;
    out += "outcome=";
    out += r.decodable() ? "codeword" : "not_decodable";
    out += '\n';
    if (r.decodable()) out += "gamma=" + format_gamma(tower, r.codeword->gamma) + "\n";
    out += "rounds_used=" + std::to_string(r.rounds_used) + "\n";
    out += "combinations_tested=" + std::to_string(r.combinations_tested) + "\n";
    return out;
}

namespace detail {

struct VoteState {
    std::map<Gamma, IndependentVotes> votes;
    const FieldTower* tower;
    uint32_t best = 0;

    explicit VoteState(const FieldTower& t) : tower(&t) {}

    // Returns the tally of gamma after the vote (only rank-raising votes count).
    uint32_t vote(const Gamma& g, std::span<const uint64_t> v) {
        auto it = votes.find(g);
        if (it == votes.end()) it = votes.emplace(g, IndependentVotes(*tower)).first;
        if (it->second.add(v)) best = std::max(best, it->second.rank());
        return it->second.rank();
    }

    std::vector<std::pair<Gamma, uint32_t>> tallies() const {
        std::vector<std::pair<Gamma, uint32_t>> out;
        out.reserve(votes.size());
        for (const auto& [g, acc] : votes) out.emplace_back(g, acc.rank());
        return out;
    }

    // The unique gamma that reached the threshold. Two reaching it would put
    // two codewords within correction distance of one received space.
    Gamma winner(uint32_t threshold) const {
        const Gamma* found = nullptr;
        for (const auto& [g, acc] : votes) {
            if (acc.rank() >= threshold) {
                if (found) throw std::logic_error("two identifiers reached the decoding threshold");
                found = &g;
            }
        }
        if (!found) throw std::logic_error("no identifier reached the decoding threshold");
        return *found;
    }
};

}  // namespace detail

// Basic minimum-distance decoder: walk every nonzero element of the received
// space, tally identifiers, and decode if the best-supported identifier has
// at least ceil((k'+1)/2) linearly independent supporters.
inline DecodeReport decode_basic(const SpreadParams& params, const Subspace& r, uint64_t cap = kDefaultEnumCap) {
    if (r.dim() < 1) throw std::invalid_argument("received space must have dimension at least 1");
    if (r.ambient_dim() != params.n) throw std::invalid_argument("received space has wrong ambient dimension");
    const FieldTower& t = *params.tower;
    const uint32_t k_prime = r.dim();
    const uint32_t threshold = decode_threshold(k_prime);

    DecodeReport report;
    detail::VoteState state(t);
    for_each_nonzero_vector(r, cap, [&](std::span<const uint64_t> v) {
        state.vote(gamma_of_vector(t, v), v);
        ++report.combinations_tested;
    });
    report.rounds_used = k_prime;
    report.gamma_votes = state.tallies();
    if (state.best >= threshold) report.codeword = encode(params, state.winner(threshold));
    return report;
}

struct PartitionFilter {
    uint32_t j_prime = 0;
    std::vector<uint32_t> kept;       // indices into the RREF basis
    std::vector<uint32_t> discarded;  // provably erroneous basis vectors
    bool feasible = true;             // some block met the size condition
};

// Partition the RREF basis rows by the index of their first nonzero k-block;
// rows before the first block of size >= ceil((k'-1)/2) cannot meet the sent
// codeword and are dropped.
inline PartitionFilter partition_filter(const SpreadParams& params, const Subspace& r) {
    const uint32_t k_prime = r.dim();
    const uint32_t need = k_prime / 2;  // ceil((k'-1)/2)
    std::vector<uint32_t> first_block(k_prime);
    std::vector<uint32_t> block_count(params.l, 0);
    for (uint32_t i = 0; i < k_prime; ++i) {
        auto row = r.basis().row(i);
        uint32_t fb = params.l;
        for (uint32_t j = 0; j < params.l && fb == params.l; ++j) {
            for (uint32_t c = 0; c < params.k; ++c) {
                if (row[static_cast<size_t>(j) * params.k + c] != 0) {
                    fb = j;
                    break;
                }
            }
        }
        first_block[i] = fb;
        ++block_count[fb];
    }
    PartitionFilter out;
    uint32_t jp = params.l;
    for (uint32_t j = 0; j < params.l; ++j) {
        if (block_count[j] >= need) {
            jp = j;
            break;
        }
    }
    if (jp == params.l) {
        out.feasible = false;
        return out;
    }
    out.j_prime = jp;
    for (uint32_t i = 0; i < k_prime; ++i) {
        (first_block[i] >= jp ? out.kept : out.discarded).push_back(i);
    }
    return out;
}

// Improved decoder: RREF basis, partition filter, then normalized linear
// combinations of z = 1, 2, ..., f_max+1 of the kept basis vectors in
// increasing z. Combinations whose support all voted one same gamma in round
// one are skipped (they cannot raise any rank). Round one always completes
// (its gammas feed the skip rule); later rounds stop the moment some
// identifier reaches the threshold.
inline DecodeReport decode_improved(const SpreadParams& params, const Subspace& r,
                                    std::optional<uint32_t> f_max_override = std::nullopt) {
    if (r.dim() < 1) throw std::invalid_argument("received space must have dimension at least 1");
    if (r.ambient_dim() != params.n) throw std::invalid_argument("received space has wrong ambient dimension");
    const FieldTower& t = *params.tower;
    const uint32_t k_prime = r.dim();
    const uint32_t threshold = decode_threshold(k_prime);
    const uint32_t f_guaranteed = (k_prime - 1) / 2;
    const uint32_t f_max = f_max_override.value_or(f_guaranteed);

    DecodeReport report;
    report.beyond_guarantee = f_max > f_guaranteed;

    PartitionFilter filter = partition_filter(params, r);
    if (!filter.feasible) return report;  // size condition is necessary for decodability

    const auto& kept = filter.kept;
    const uint32_t m = static_cast<uint32_t>(kept.size());
    const uint64_t q = t.q();
    detail::VoteState state(t);

    // Round 1: the kept basis vectors themselves.
    std::vector<Gamma> base_gamma;
    base_gamma.reserve(m);
    for (uint32_t i = 0; i < m; ++i) {
        auto row = r.basis().row(kept[i]);
        Gamma g = gamma_of_vector(t, row);
        ++report.combinations_tested;
        state.vote(g, row);
        base_gamma.push_back(std::move(g));
    }
    report.rounds_used = 1;
    if (state.best >= threshold) {
        report.codeword = encode(params, state.winner(threshold));
        report.gamma_votes = state.tallies();
        return report;
    }

    // Rounds z >= 2: normalized combinations (coefficient of the smallest
    // support index fixed to one, the rest nonzero).
    std::vector<uint64_t> combo(r.ambient_dim());
    const uint32_t max_z = std::min(f_max + 1, m);
    for (uint32_t z = 2; z <= max_z; ++z) {
        report.rounds_used = z;
        std::vector<uint32_t> support(z);
        for (uint32_t i = 0; i < z; ++i) support[i] = i;
        while (true) {
            bool all_same = true;
            for (uint32_t i = 1; i < z && all_same; ++i) all_same = base_gamma[support[i]] == base_gamma[support[0]];
            if (!all_same) {
                std::vector<uint64_t> coeff(z, 1);
                while (true) {
                    std::fill(combo.begin(), combo.end(), 0);
                    for (uint32_t i = 0; i < z; ++i) {
                        auto row = r.basis().row(kept[support[i]]);
                        for (size_t j = 0; j < combo.size(); ++j) {
                            combo[j] = t.add(kLevelQ, combo[j], t.mul(kLevelQ, coeff[i], row[j]));
                        }
                    }
                    Gamma g = gamma_of_vector(t, combo);
                    ++report.combinations_tested;
                    if (state.vote(g, combo) >= threshold) {
                        report.codeword = encode(params, state.winner(threshold));
                        report.gamma_votes = state.tallies();
                        return report;
                    }
                    // next coefficient tuple: positions 1..z-1 run over 1..q-1
                    uint32_t pos = z;
                    while (pos-- > 1) {
                        if (++coeff[pos] < q) break;
                        coeff[pos] = 1;
                    }
                    if (pos == 0) break;
                }
            }
            // next support subset, lexicographic
            uint32_t i = z;
            while (i-- > 0) {
                if (support[i] + (z - i) < m) {
                    ++support[i];
                    for (uint32_t h = i + 1; h < z; ++h) support[h] = support[h - 1] + 1;
                    break;
                }
            }
            if (i == UINT32_MAX) break;
        }
    }
    report.gamma_votes = state.tallies();
    return report;
}

struct OracleResult {
    std::optional<Codeword> codeword;
    uint32_t distance = 0;  // distance to the returned codeword
};

// Exhaustive minimum-distance reference: compare the received space against
// every codeword and decode only within the correction capability t = k-1.
inline OracleResult oracle_decode(const SpreadParams& params, const Subspace& r, uint64_t cap = kDefaultEnumCap) {
    if (r.ambient_dim() != params.n) throw std::invalid_argument("received space has wrong ambient dimension");
    const uint32_t t_cap = params.correction_capability();
    OracleResult out;
    uint32_t hits = 0;
    for_each_codeword(params, cap, [&](Codeword w) {
        const uint32_t d = subspace_distance(r, w.space);
        if (d <= t_cap) {
            if (++hits > 1) throw std::logic_error("two codewords within correction distance of one space");
            out.codeword = std::move(w);
            out.distance = d;
        }
    });
    return out;
}

// r_i - mu_i * mu_h^{-1} * r_h: the combination that cancels a shared error.
inline std::vector<uint64_t> cancellation_combine(const FieldTower& tower, std::span<const uint64_t> r_i,
                                                  std::span<const uint64_t> r_h, uint64_t mu_i, uint64_t mu_h) {
    if (mu_h == 0) throw std::invalid_argument("mu_h must be nonzero");
    if (r_i.size() != r_h.size()) throw std::invalid_argument("vector length mismatch");
    const uint64_t c = tower.neg(kLevelQ, tower.mul(kLevelQ, mu_i, tower.inv(kLevelQ, mu_h)));
    std::vector<uint64_t> out(r_i.begin(), r_i.end());
    for (size_t j = 0; j < out.size(); ++j) {
        out[j] = tower.add(kLevelQ, out[j], tower.mul(kLevelQ, c, r_h[j]));
    }
    return out;
}

}  // namespace spreadec
