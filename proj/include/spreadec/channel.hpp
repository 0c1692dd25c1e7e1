#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "decoder.hpp"

namespace spreadec {

struct ChannelConfig {
    uint32_t erasures = 0;  // dimension lost from the codeword
    uint32_t errors = 0;    // dimension of the inserted error space
};

// Truth record of one transmission, kept for test oracles and statistics.
struct TransmitTruth {
    Subspace surviving;       // k - erasures dimensional subspace of the codeword
    Subspace error_space;     // meets the codeword trivially
    MatrixFq transfer;        // uniform element of GL_{k'}
    MatrixFq received_rows;   // transfer * [basis(surviving); basis(error_space)]
};

struct TransmitResult {
    Subspace received;
    TransmitTruth truth;
};

// Operator-channel transmission R = A [U_bar; E]: drop `erasures` dimensions
// of the codeword uniformly, insert a uniform error space meeting the
// codeword trivially, then mix with a uniform invertible transfer matrix.
inline TransmitResult transmit(const SpreadParams& params, const Codeword& w, const ChannelConfig& cfg, Rng& rng) {
    const FieldTower& t = *params.tower;
    const uint32_t k = params.k;
    if (cfg.erasures > k) throw std::invalid_argument("more erasures than codeword dimensions");
    const uint32_t survive = k - cfg.erasures;
    const uint32_t k_prime = survive + cfg.errors;
    if (k_prime < 1) throw std::invalid_argument("channel would deliver an empty space");
    if (cfg.errors > params.n - k) throw std::invalid_argument("error space cannot meet the codeword trivially");

    Subspace surviving = Subspace::zero(t, params.n);
    if (survive > 0) {
        MatrixFq coeff = random_full_rank(t, survive, k, rng);
        surviving = Subspace::row_space(coeff * w.space.basis());
    }

    Subspace error_space = Subspace::zero(t, params.n);
    if (cfg.errors > 0) {
        while (true) {
            MatrixFq e = random_full_rank(t, cfg.errors, params.n, rng);
            Subspace cand = Subspace::row_space(e);
            if (intersection_dim(cand, w.space) == 0) {
                error_space = std::move(cand);
                break;
            }
        }
    }

    MatrixFq stacked = surviving.basis().stacked_on(error_space.basis());
    MatrixFq transfer = random_gl(t, k_prime, rng);
    MatrixFq received_rows = transfer * stacked;
    Subspace received = Subspace::row_space(received_rows);
    if (received.dim() != k_prime) throw std::logic_error("received space lost rank");
    return TransmitResult{std::move(received),
                          TransmitTruth{std::move(surviving), std::move(error_space), std::move(transfer),
                                        std::move(received_rows)}};
}

struct DimStats {
    uint32_t k_prime = 0;
    uint32_t errors_effective = 0;
    uint32_t erasures_effective = 0;
};

inline DimStats dim_stats(const SpreadParams& params, const TransmitTruth& truth) {
    DimStats s;
    s.errors_effective = truth.error_space.dim();
    s.erasures_effective = params.k - truth.surviving.dim();
    s.k_prime = s.errors_effective + params.k - s.erasures_effective;
    return s;
}

// Number of received matrix rows untouched by the error, i.e. rows lying in
// the sent codeword.
inline uint32_t count_error_free_rows(const TransmitTruth& truth, const Codeword& sent) {
    uint32_t z = 0;
    for (uint32_t i = 0; i < truth.received_rows.rows(); ++i) {
        if (sent.space.contains(truth.received_rows.row(i))) ++z;
    }
    return z;
}

// --- simulation log line ---
//
// One instance per line: seed, erasures, errors, then the received matrix
// and the truth matrices in the usual text format with rows joined by ';'.

inline std::string matrix_to_field(const MatrixFq& m) {
    if (m.rows() == 0) return "0x" + std::to_string(m.cols());  // row-less matrices keep their width
    std::string rows = format_matrix(m);
    std::string out;
    for (char c : rows) out += (c == '\n') ? ';' : c;
    if (!out.empty() && out.back() == ';') out.pop_back();
    return out;
}

inline MatrixFq matrix_from_field(const FieldTower& tower, const std::string& field) {
    if (field.rfind("0x", 0) == 0) return MatrixFq(tower, 0, static_cast<uint32_t>(std::stoul(field.substr(2))));
    std::string text = field;
    for (char& c : text) {
        if (c == ';') c = '\n';
    }
    return parse_matrix(tower, text);
}

struct InstanceLog {
    uint64_t seed = 0;
    ChannelConfig cfg;
    MatrixFq received;
    MatrixFq surviving;
    MatrixFq error_space;
    MatrixFq transfer;
};

inline std::string format_instance_line(uint64_t seed, const ChannelConfig& cfg, const TransmitResult& res) {
    std::string out = std::to_string(seed) + "," + std::to_string(cfg.erasures) + "," + std::to_string(cfg.errors);
    out += "," + matrix_to_field(res.received.basis());
    out += "," + matrix_to_field(res.truth.surviving.basis());
    out += "," + matrix_to_field(res.truth.error_space.basis());
    out += "," + matrix_to_field(res.truth.transfer);
    return out;
}

inline InstanceLog parse_instance_line(const FieldTower& tower, const std::string& line) {
    std::vector<std::string> fields;
    size_t start = 0;
    while (start <= line.size()) {
        size_t end = line.find(',', start);
        if (end == std::string::npos) end = line.size();
        fields.push_back(line.substr(start, end - start));
        start = end + 1;
        if (end == line.size()) break;
    }
    if (fields.size() != 7) throw std::invalid_argument("instance line needs 7 fields");
    InstanceLog log{std::stoull(fields[0]),
                    ChannelConfig{static_cast<uint32_t>(std::stoul(fields[1])), static_cast<uint32_t>(std::stoul(fields[2]))},
                    matrix_from_field(tower, fields[3]),
                    matrix_from_field(tower, fields[4]),
                    matrix_from_field(tower, fields[5]),
                    matrix_from_field(tower, fields[6])};
    return log;
}

}  // namespace spreadec
