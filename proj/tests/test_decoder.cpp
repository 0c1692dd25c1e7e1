#include "doctest.h"

#include <algorithm>

#include "oracles.hpp"
#include "spreadec/channel.hpp"
#include "spreadec/decoder.hpp"

using namespace spreadec;

namespace {

// Normalized combination bound of the instrumentation contract:
// sum_{z=1}^{zmax} C(k', z) (q-1)^(z-1).
uint64_t combination_bound(uint32_t k_prime, uint64_t q, uint32_t zmax) {
    uint64_t total = 0;
    for (uint32_t z = 1; z <= zmax; ++z) {
        uint64_t binom = 1;
        for (uint32_t i = 0; i < z; ++i) binom = binom * (k_prime - i) / (i + 1);
        uint64_t pw = 1;
        for (uint32_t i = 1; i < z; ++i) pw *= q - 1;
        total += binom * pw;
    }
    return total;
}

}  // namespace

TEST_CASE("both decoders resolve the worked one-dimensional reception") {
    SpreadParams p = make_spread_params(2, 3, 2);
    const FieldTower& t = *p.tower;
    Subspace r = Subspace::row_space(parse_matrix(t, "110|101"));

    for (bool basic : {true, false}) {
        DecodeReport rep = basic ? decode_basic(p, r) : decode_improved(p, r);
        REQUIRE(rep.decodable());
        CHECK(format_gamma(t, rep.codeword->gamma) == "1,0,0;1,1,0");
        CHECK(format_matrix(rep.codeword->space.basis(), 3) == "100|110\n010|011\n001|111\n");
    }
}

TEST_CASE("a codeword's own space decodes to itself") {
    SpreadParams p = make_spread_params(2, 3, 2);
    Codeword w = encode(p, parse_gamma(*p.tower, "1,0,0;1,1,0"));

    DecodeReport basic = decode_basic(p, w.space);
    REQUIRE(basic.decodable());
    CHECK(basic.codeword->space == w.space);
    REQUIRE(basic.gamma_votes.size() == 1);  // all vectors agree
    CHECK(basic.gamma_votes[0].second == p.k);
    CHECK(basic.combinations_tested == 7);  // 2^3 - 1 vectors examined
    CHECK(basic.rounds_used == 3);

    DecodeReport imp = decode_improved(p, w.space);
    REQUIRE(imp.decodable());
    CHECK(imp.codeword->space == w.space);
    CHECK(imp.rounds_used == 1);
    CHECK(imp.combinations_tested == p.k);  // round one completes
    REQUIRE(imp.gamma_votes.size() == 1);
    CHECK(imp.gamma_votes[0].second == p.k);
}

TEST_CASE("oracle decoder distances") {
    SpreadParams p = make_spread_params(2, 3, 2);
    const FieldTower& t = *p.tower;
    Codeword w = encode(p, parse_gamma(t, "1,0,0;1,1,0"));

    OracleResult self = oracle_decode(p, w.space);
    REQUIRE(self.codeword.has_value());
    CHECK(self.codeword->space == w.space);
    CHECK(self.distance == 0);

    OracleResult one_dim = oracle_decode(p, Subspace::row_space(parse_matrix(t, "110|101")));
    REQUIRE(one_dim.codeword.has_value());
    CHECK(one_dim.codeword->space == w.space);
    CHECK(one_dim.distance == 2);  // k + k' - 2 dim(intersection) = 3 + 1 - 2
}

TEST_CASE("decoders agree with the oracle across channel draws") {
    for (auto [q, k, l] : {std::tuple<uint32_t, uint32_t, uint32_t>{2, 3, 2}, {3, 2, 2}, {4, 2, 2}, {2, 2, 3}}) {
        SpreadParams p = make_spread_params(q, k, l);
        auto words = enumerate_codewords(p);
        Rng rng(1000 + q);
        const uint32_t t_cap = p.correction_capability();
        for (uint32_t rho = 0; rho <= t_cap; ++rho) {
            for (uint32_t e = 0; rho + e <= t_cap; ++e) {
                for (int trial = 0; trial < 500; ++trial) {
                    const Codeword& sent = words[rng.below(words.size())];
                    TransmitResult res = transmit(p, sent, ChannelConfig{rho, e}, rng);
                    OracleResult want = oracle_decode(p, res.received);
                    REQUIRE(want.codeword.has_value());
                    CHECK(want.codeword->space == sent.space);

                    DecodeReport imp = decode_improved(p, res.received);
                    REQUIRE(imp.decodable());
                    CHECK(imp.codeword->space == sent.space);

                    DecodeReport bas = decode_basic(p, res.received);
                    REQUIRE(bas.decodable());
                    CHECK(bas.codeword->space == sent.space);

                    if (res.received.dim() >= 2) {
                        CHECK(imp.combinations_tested <= bas.combinations_tested);
                    }
                    CHECK(imp.combinations_tested <=
                          combination_bound(res.received.dim(), q, (res.received.dim() - 1) / 2 + 1));
                    if (e == 0) {
                        CHECK(imp.rounds_used == 1);
                        CHECK(imp.combinations_tested == res.received.dim());
                    }
                }
            }
        }
    }
}

TEST_CASE("error cancellation combinations") {
    SpreadParams p = make_spread_params(2, 3, 2);
    const FieldTower& t = *p.tower;

    // over F_2 with mu_i = mu_h = 1 the combination is plain addition
    std::vector<uint64_t> r1{1, 0, 0, 1, 1, 0}, r2{0, 1, 0, 0, 1, 1};
    std::vector<uint64_t> sum(6);
    for (int j = 0; j < 6; ++j) sum[j] = t.add(kLevelQ, r1[j], r2[j]);
    CHECK(cancellation_combine(t, r1, r2, 1, 1) == sum);

    // mu_i = 0 leaves r_i untouched
    CHECK(cancellation_combine(t, r1, r2, 0, 1) == r1);

    CHECK_THROWS_AS(cancellation_combine(t, r1, r2, 1, 0), std::invalid_argument);

    // constructed instance: both receptions carry the same error vector, so
    // the combination lands back in the codeword
    SpreadParams p3 = make_spread_params(3, 2, 2);
    const FieldTower& t3 = *p3.tower;
    Codeword w = enumerate_codewords(p3)[2];
    Rng rng(77);
    for (int i = 0; i < 100; ++i) {
        std::vector<uint64_t> e(p3.n);
        do {
            for (auto& x : e) x = rng.below(3);
        } while (w.space.contains(e));
        auto u1 = w.space.basis().row(0), u2 = w.space.basis().row(1);
        const uint64_t mu1 = 1 + rng.below(2), mu2 = 1 + rng.below(2);
        std::vector<uint64_t> v1(p3.n), v2(p3.n);
        for (uint32_t j = 0; j < p3.n; ++j) {
            v1[j] = t3.add(kLevelQ, u1[j], t3.mul(kLevelQ, mu1, e[j]));
            v2[j] = t3.add(kLevelQ, u2[j], t3.mul(kLevelQ, mu2, e[j]));
        }
        CHECK(w.space.contains(cancellation_combine(t3, v1, v2, mu1, mu2)));
    }
}

TEST_CASE("clean combinations exist in the quantity the cancellation argument promises") {
    // R = U' + E with dim E = f: among normalized combinations of at most
    // f+1 received basis vectors there are >= k'-f independent members of U.
    for (auto [q, k, l, f] : {std::tuple<uint32_t, uint32_t, uint32_t, uint32_t>{2, 3, 2, 1},
                              {2, 3, 2, 2},
                              {3, 2, 2, 1}}) {
        SpreadParams p = make_spread_params(q, k, l);
        auto words = enumerate_codewords(p);
        Rng rng(31 * q + f);
        for (int trial = 0; trial < 100; ++trial) {
            const Codeword& sent = words[rng.below(words.size())];
            const uint32_t rho = rng.below(2) ? 1 : 0;
            if (p.k - rho == 0) continue;
            TransmitResult res = transmit(p, sent, ChannelConfig{rho, f}, rng);
            const uint32_t k_prime = res.received.dim();
            IndependentVotes clean(*p.tower);
            const auto& basis = res.received.basis();
            std::vector<uint32_t> support;
            // all supports of size 1..f+1 with all-nonzero normalized coefficients
            std::function<void(uint32_t, uint32_t)> rec = [&](uint32_t start, uint32_t left) {
                if (!support.empty()) {
                    std::vector<uint64_t> coeff(support.size(), 1);
                    while (true) {
                        std::vector<uint64_t> v(p.n, 0);
                        for (size_t i = 0; i < support.size(); ++i) {
                            for (uint32_t j = 0; j < p.n; ++j) {
                                v[j] = p.tower->add(kLevelQ, v[j],
                                                    p.tower->mul(kLevelQ, coeff[i], basis.at(support[i], j)));
                            }
                        }
                        if (sent.space.contains(v)) clean.add(v);
                        size_t pos = support.size();
                        while (pos-- > 1) {
                            if (++coeff[pos] < q) break;
                            coeff[pos] = 1;
                        }
                        if (pos == 0 || (pos == SIZE_MAX)) break;
                    }
                }
                if (left == 0) return;
                for (uint32_t i = start; i < k_prime; ++i) {
                    support.push_back(i);
                    rec(i + 1, left - 1);
                    support.pop_back();
                }
            };
            rec(0, f + 1);
            CHECK(clean.rank() >= k_prime - f);
        }
    }
}

TEST_CASE("partition filter keeps the intersection and discards only errors") {
    SpreadParams p = make_spread_params(2, 4, 2);
    auto words = enumerate_codewords(p);
    Rng rng(404);
    for (int trial = 0; trial < 300; ++trial) {
        const Codeword& sent = words[rng.below(words.size())];
        const uint32_t rho = rng.below(2) ? 1 : 0;
        const uint32_t e = rho == 1 ? 1 : rng.below(2);
        TransmitResult res = transmit(p, sent, ChannelConfig{rho, e}, rng);
        PartitionFilter f = partition_filter(p, res.received);
        REQUIRE(f.feasible);
        // the filter must keep all of U n R and discard only rows outside U
        MatrixFq kept(*p.tower, static_cast<uint32_t>(f.kept.size()), p.n);
        for (uint32_t i = 0; i < kept.rows(); ++i) kept.set_row(i, res.received.basis().row(f.kept[i]));
        Subspace kept_span = Subspace::row_space(kept);
        Subspace inter = oracle::intersection_space(res.received, sent.space);
        for_each_nonzero_vector(inter, kDefaultEnumCap, [&](std::span<const uint64_t> v) {
            CHECK(kept_span.contains(v));
        });
        for (uint32_t idx : f.discarded) {
            CHECK_FALSE(sent.space.contains(res.received.basis().row(idx)));
        }
    }
}

TEST_CASE("same-gamma combinations stay in the vote's span") {
    // a combination of two vectors voting one gamma is zero or votes it too
    SpreadParams p = make_spread_params(3, 2, 2);
    const FieldTower& t = *p.tower;
    Rng rng(555);
    auto words = enumerate_codewords(p);
    for (int i = 0; i < 300; ++i) {
        const Codeword& w = words[rng.below(words.size())];
        auto vecs = enumerate_vectors(w.space);
        const auto& a = vecs[rng.below(vecs.size())];
        const auto& b = vecs[rng.below(vecs.size())];
        const uint64_t ca = rng.below(3), cb = rng.below(3);
        std::vector<uint64_t> comb(p.n);
        bool zero = true;
        for (uint32_t j = 0; j < p.n; ++j) {
            comb[j] = t.add(kLevelQ, t.mul(kLevelQ, ca, a[j]), t.mul(kLevelQ, cb, b[j]));
            zero = zero && comb[j] == 0;
        }
        if (!zero) CHECK(gamma_of_vector(t, comb) == w.gamma);
    }
}

TEST_CASE("ties below threshold are not decodable") {
    SpreadParams p = make_spread_params(2, 3, 2);
    auto words = enumerate_codewords(p);
    // two vectors from two different codewords: votes 1 and 1, threshold 2
    MatrixFq m(*p.tower, 2, 6);
    m.set_row(0, words[1].space.basis().row(0));
    m.set_row(1, words[2].space.basis().row(0));
    Subspace r = Subspace::row_space(m);
    REQUIRE(r.dim() == 2);
    DecodeReport bas = decode_basic(p, r);
    DecodeReport imp = decode_improved(p, r);
    CHECK_FALSE(bas.decodable());
    CHECK_FALSE(imp.decodable());
    CHECK_FALSE(oracle_decode(p, r).codeword.has_value());
}

TEST_CASE("a reception with only scattered lead blocks is rejected by the filter") {
    // four RREF rows with four distinct first-block indices: every block
    // class has size 1 < ceil((k'-1)/2) = 2, so the filter's size condition
    // already rules out decodability
    SpreadParams p = make_spread_params(2, 2, 4);
    MatrixFq m(*p.tower, 4, 8);
    m.at(0, 0) = 1;
    m.at(1, 2) = 1;
    m.at(2, 4) = 1;
    m.at(3, 6) = 1;
    Subspace r = Subspace::row_space(m);
    REQUIRE(r.dim() == 4);
    PartitionFilter f = partition_filter(p, r);
    CHECK_FALSE(f.feasible);
    DecodeReport rep = decode_improved(p, r);
    CHECK_FALSE(rep.decodable());
    CHECK(rep.combinations_tested == 0);
    // the exhaustive routes agree that nothing is within reach
    CHECK_FALSE(decode_basic(p, r).decodable());
    CHECK_FALSE(oracle_decode(p, r).codeword.has_value());
}

TEST_CASE("decoder input validation") {
    SpreadParams p = make_spread_params(2, 3, 2);
    Subspace empty = Subspace::zero(*p.tower, p.n);
    CHECK_THROWS_AS(decode_basic(p, empty), std::invalid_argument);
    CHECK_THROWS_AS(decode_improved(p, empty), std::invalid_argument);
    Subspace wrong = Subspace::row_space(MatrixFq::identity(*p.tower, 4));
    CHECK_THROWS_AS(decode_basic(p, wrong), std::invalid_argument);

    // enumeration cap: a 3-dimensional space over F_2 has 7 vectors
    Codeword w = encode(p, parse_gamma(*p.tower, "1,0,0;0,0,0"));
    CHECK_THROWS_AS(decode_basic(p, w.space, 4), std::runtime_error);
}

TEST_CASE("f_max override is honored and flagged") {
    SpreadParams p = make_spread_params(2, 3, 2);
    auto words = enumerate_codewords(p);
    Rng rng(9);
    TransmitResult res = transmit(p, words[3], ChannelConfig{1, 1}, rng);
    DecodeReport deep = decode_improved(p, res.received, 2);  // past the (k'-1)/2 = 1 guarantee
    CHECK(deep.beyond_guarantee);
    DecodeReport normal = decode_improved(p, res.received);
    CHECK_FALSE(normal.beyond_guarantee);
    // with f_max = 0 only round one runs and a clean reception still decodes
    TransmitResult clean = transmit(p, words[3], ChannelConfig{1, 0}, rng);
    DecodeReport shallow = decode_improved(p, clean.received, 0);
    CHECK(shallow.decodable());
    CHECK(shallow.rounds_used == 1);
}

TEST_CASE("report serialization") {
    SpreadParams p = make_spread_params(2, 3, 2);
    Subspace r = Subspace::row_space(parse_matrix(*p.tower, "110|101"));
    DecodeReport rep = decode_improved(p, r);
    CHECK(report_to_text(*p.tower, rep) ==
          "outcome=codeword\ngamma=1,0,0;1,1,0\nrounds_used=1\ncombinations_tested=1\n");
}
