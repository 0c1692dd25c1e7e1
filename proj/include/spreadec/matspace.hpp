#pragma once

#include <cctype>
#include <cstdint>
#include <functional>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "field_tower.hpp"
#include "rng.hpp"

namespace spreadec {

// Refusal bound for anything that walks a whole vector space or code.
inline constexpr uint64_t kDefaultEnumCap = uint64_t(1) << 20;

// Dense matrix over F_q (tower level 1), row-major codes.
class MatrixFq {
  public:
    MatrixFq(const FieldTower& tower, uint32_t rows, uint32_t cols)
        : tower_(&tower), rows_(rows), cols_(cols), entries_(static_cast<size_t>(rows) * cols, 0) {}

    static MatrixFq identity(const FieldTower& tower, uint32_t n) {
        MatrixFq m(tower, n, n);
        for (uint32_t i = 0; i < n; ++i) m.at(i, i) = 1;
        return m;
    }

    const FieldTower& tower() const { return *tower_; }
    uint32_t rows() const { return rows_; }
    uint32_t cols() const { return cols_; }

    uint64_t& at(uint32_t r, uint32_t c) { return entries_[static_cast<size_t>(r) * cols_ + c]; }
    uint64_t at(uint32_t r, uint32_t c) const { return entries_[static_cast<size_t>(r) * cols_ + c]; }
    FieldElement elem(uint32_t r, uint32_t c) const { return tower_->element(kLevelQ, at(r, c)); }

    std::span<const uint64_t> row(uint32_t r) const { return {entries_.data() + static_cast<size_t>(r) * cols_, cols_}; }
    std::span<uint64_t> row(uint32_t r) { return {entries_.data() + static_cast<size_t>(r) * cols_, cols_}; }

    void set_row(uint32_t r, std::span<const uint64_t> v) {
        if (v.size() != cols_) throw std::invalid_argument("row length mismatch");
        std::copy(v.begin(), v.end(), entries_.begin() + static_cast<size_t>(r) * cols_);
    }

    friend bool operator==(const MatrixFq& a, const MatrixFq& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.tower_->q() == b.tower_->q() && a.entries_ == b.entries_;
    }
    friend bool operator!=(const MatrixFq& a, const MatrixFq& b) { return !(a == b); }

    friend MatrixFq operator*(const MatrixFq& a, const MatrixFq& b) {
        if (a.cols_ != b.rows_) throw std::invalid_argument("matrix product dimension mismatch");
        const FieldTower& t = *a.tower_;
        MatrixFq out(t, a.rows_, b.cols_);
        for (uint32_t i = 0; i < a.rows_; ++i) {
            for (uint32_t h = 0; h < a.cols_; ++h) {
                const uint64_t aih = a.at(i, h);
                if (aih == 0) continue;
                for (uint32_t j = 0; j < b.cols_; ++j) {
                    const uint64_t bhj = b.at(h, j);
                    if (bhj == 0) continue;
                    out.at(i, j) = t.add(kLevelQ, out.at(i, j), t.mul(kLevelQ, aih, bhj));
                }
            }
        }
        return out;
    }

    MatrixFq stacked_on(const MatrixFq& below) const {
        if (cols_ != below.cols_) throw std::invalid_argument("stack width mismatch");
        MatrixFq out(*tower_, rows_ + below.rows_, cols_);
        out.entries_ = entries_;
        out.entries_.insert(out.entries_.end(), below.entries_.begin(), below.entries_.end());
        return out;
    }

  private:
    const FieldTower* tower_;
    uint32_t rows_, cols_;
    std::vector<uint64_t> entries_;
};

struct RrefResult {
    MatrixFq matrix;
    uint32_t rank;
};

// Reduced row echelon form; row space preserved.
inline RrefResult rref(const MatrixFq& m) {
    const FieldTower& t = m.tower();
    MatrixFq a = m;
    uint32_t r = 0;
    for (uint32_t col = 0; col < a.cols() && r < a.rows(); ++col) {
        uint32_t piv = r;
        while (piv < a.rows() && a.at(piv, col) == 0) ++piv;
        if (piv == a.rows()) continue;
        if (piv != r) {
            for (uint32_t j = 0; j < a.cols(); ++j) std::swap(a.at(piv, j), a.at(r, j));
        }
        const uint64_t scale = t.inv(kLevelQ, a.at(r, col));
        if (scale != 1) {
            for (uint32_t j = col; j < a.cols(); ++j) a.at(r, j) = t.mul(kLevelQ, a.at(r, j), scale);
        }
        for (uint32_t i = 0; i < a.rows(); ++i) {
            if (i == r) continue;
            const uint64_t f = a.at(i, col);
            if (f == 0) continue;
            const uint64_t nf = t.neg(kLevelQ, f);
            for (uint32_t j = col; j < a.cols(); ++j) {
                a.at(i, j) = t.add(kLevelQ, a.at(i, j), t.mul(kLevelQ, nf, a.at(r, j)));
            }
        }
        ++r;
    }
    return {std::move(a), r};
}

// Companion matrix of a monic polynomial over F_q: superdiagonal of ones,
// last row the negated coefficient vector.
inline MatrixFq companion_matrix(const FieldTower& tower, const std::vector<uint64_t>& poly) {
    if (poly.size() < 2) throw std::invalid_argument("companion matrix needs degree >= 1");
    if (poly.back() != 1) throw std::invalid_argument("companion matrix needs a monic polynomial");
    const uint32_t k = static_cast<uint32_t>(poly.size() - 1);
    MatrixFq m(tower, k, k);
    for (uint32_t i = 0; i + 1 < k; ++i) m.at(i, i + 1) = 1;
    for (uint32_t j = 0; j < k; ++j) m.at(k - 1, j) = tower.neg(kLevelQ, poly[j]);
    return m;
}

// Smallest e >= 1 with m^e = I; throws if m is singular or e exceeds cap.
inline uint64_t matrix_order(const MatrixFq& m, uint64_t cap) {
    if (m.rows() != m.cols()) throw std::invalid_argument("matrix order needs a square matrix");
    if (rref(m).rank != m.rows()) throw std::invalid_argument("matrix order of a singular matrix");
    const MatrixFq id = MatrixFq::identity(m.tower(), m.rows());
    MatrixFq acc = m;
    uint64_t e = 1;
    while (acc != id) {
        if (++e > cap) throw std::runtime_error("matrix order exceeds cap " + std::to_string(cap));
        acc = acc * m;
    }
    return e;
}

// A point of the Grassmannian: RREF basis with no zero rows is the unique
// canonical representative, so equality is entry-wise comparison.
class Subspace {
  public:
    static Subspace row_space(const MatrixFq& m) {
        RrefResult r = rref(m);
        MatrixFq basis(m.tower(), r.rank, m.cols());
        for (uint32_t i = 0; i < r.rank; ++i) basis.set_row(i, r.matrix.row(i));
        return Subspace(std::move(basis));
    }

    static Subspace zero(const FieldTower& tower, uint32_t ambient) {
        return Subspace(MatrixFq(tower, 0, ambient));
    }

    uint32_t ambient_dim() const { return basis_.cols(); }
    uint32_t dim() const { return basis_.rows(); }
    const MatrixFq& basis() const { return basis_; }
    const FieldTower& tower() const { return basis_.tower(); }

    bool contains(std::span<const uint64_t> v) const {
        if (v.size() != ambient_dim()) throw std::invalid_argument("vector length does not match ambient dimension");
        const FieldTower& t = tower();
        std::vector<uint64_t> w(v.begin(), v.end());
        for (uint32_t i = 0; i < dim(); ++i) {
            const uint32_t pc = pivot_col(i);
            const uint64_t f = w[pc];
            if (f == 0) continue;
            const uint64_t nf = t.neg(kLevelQ, f);
            auto r = basis_.row(i);
            for (uint32_t j = pc; j < ambient_dim(); ++j) w[j] = t.add(kLevelQ, w[j], t.mul(kLevelQ, nf, r[j]));
        }
        for (uint64_t x : w) {
            if (x != 0) return false;
        }
        return true;
    }

    friend bool operator==(const Subspace& a, const Subspace& b) { return a.basis_ == b.basis_; }
    friend bool operator!=(const Subspace& a, const Subspace& b) { return !(a == b); }
    friend bool operator<(const Subspace& a, const Subspace& b) {
        if (a.dim() != b.dim()) return a.dim() < b.dim();
        for (uint32_t i = 0; i < a.dim(); ++i) {
            for (uint32_t j = 0; j < a.ambient_dim(); ++j) {
                if (a.basis_.at(i, j) != b.basis_.at(i, j)) return a.basis_.at(i, j) < b.basis_.at(i, j);
            }
        }
        return false;
    }

  private:
    explicit Subspace(MatrixFq basis) : basis_(std::move(basis)) {}
    MatrixFq basis_;

    uint32_t pivot_col(uint32_t row) const {
        for (uint32_t j = 0; j < ambient_dim(); ++j) {
            if (basis_.at(row, j) != 0) return j;
        }
        throw std::logic_error("zero row in subspace basis");
    }
};

inline Subspace sum_space(const Subspace& u, const Subspace& v) {
    if (u.ambient_dim() != v.ambient_dim()) throw std::invalid_argument("ambient dimension mismatch");
    return Subspace::row_space(u.basis().stacked_on(v.basis()));
}

inline uint32_t intersection_dim(const Subspace& u, const Subspace& v) {
    return u.dim() + v.dim() - sum_space(u, v).dim();
}

// d_S(U,V) = dim(U+V) - dim(U n V).
inline uint32_t subspace_distance(const Subspace& u, const Subspace& v) {
    if (u.ambient_dim() != v.ambient_dim()) throw std::invalid_argument("ambient dimension mismatch");
    return 2 * sum_space(u, v).dim() - u.dim() - v.dim();
}

inline MatrixFq random_matrix(const FieldTower& tower, uint32_t rows, uint32_t cols, Rng& rng) {
    MatrixFq m(tower, rows, cols);
    const uint64_t q = tower.q();
    for (uint32_t i = 0; i < rows; ++i) {
        for (uint32_t j = 0; j < cols; ++j) m.at(i, j) = rng.below(q);
    }
    return m;
}

// Uniform over full-rank rows x cols matrices, by rejection.
inline MatrixFq random_full_rank(const FieldTower& tower, uint32_t rows, uint32_t cols, Rng& rng) {
    if (rows > cols) throw std::invalid_argument("cannot have rank beyond column count");
    while (true) {
        MatrixFq m = random_matrix(tower, rows, cols, rng);
        if (rref(m).rank == rows) return m;
    }
}

// Uniform over GL_dim(F_q). Acceptance probability is prod(1 - q^-i) > 0.28.
inline MatrixFq random_gl(const FieldTower& tower, uint32_t dim, Rng& rng) {
    if (dim < 1) throw std::invalid_argument("GL dimension must be positive");
    return random_full_rank(tower, dim, dim, rng);
}

// Visits every nonzero vector of the subspace exactly once (q^dim - 1 of
// them). The walk steps an odometer over the F_p coordinates of the F_q
// coefficients, so each step adds one prescaled basis row and stays O(n)
// per vector even when q is a prime power.
template <class Fn>
inline void for_each_nonzero_vector(const Subspace& s, uint64_t cap, Fn&& fn) {
    const FieldTower& t = s.tower();
    const uint64_t q = t.q();
    const uint32_t dim = s.dim();
    unsigned __int128 total = 1;
    for (uint32_t i = 0; i < dim; ++i) {
        total *= q;
        if (total > cap) {
            throw std::runtime_error("enumeration of " + std::to_string(dim) + " dimensions over q=" +
                                     std::to_string(q) + " exceeds cap " + std::to_string(cap));
        }
    }
    const uint64_t p = t.p();
    const uint32_t bd = t.degree(kLevelQ);
    // scaled[d * bd + m] = (basis element of F_q over F_p with code p^m) * row d
    std::vector<std::vector<uint64_t>> scaled(static_cast<size_t>(dim) * bd);
    uint64_t unit = 1;
    for (uint32_t m = 0; m < bd; ++m) {
        for (uint32_t d = 0; d < dim; ++d) {
            auto r = s.basis().row(d);
            auto& row = scaled[static_cast<size_t>(d) * bd + m];
            row.resize(r.size());
            for (size_t j = 0; j < r.size(); ++j) row[j] = t.mul(kLevelQ, unit, r[j]);
        }
        unit *= p;
    }
    std::vector<uint64_t> digits(static_cast<size_t>(dim) * bd, 0);
    std::vector<uint64_t> cur(s.ambient_dim(), 0);
    const uint64_t count = static_cast<uint64_t>(total) - 1;
    for (uint64_t step = 0; step < count; ++step) {
        for (size_t pos = 0;; ++pos) {
            const auto& row = scaled[pos];
            for (size_t j = 0; j < cur.size(); ++j) cur[j] = t.add(kLevelQ, cur[j], row[j]);
            if (++digits[pos] < p) break;
            digits[pos] = 0;
        }
        fn(std::span<const uint64_t>(cur));
    }
}

inline std::vector<std::vector<uint64_t>> enumerate_vectors(const Subspace& s, uint64_t cap = kDefaultEnumCap) {
    std::vector<std::vector<uint64_t>> out;
    for_each_nonzero_vector(s, cap, [&](std::span<const uint64_t> v) { out.emplace_back(v.begin(), v.end()); });
    return out;
}

// --- text format ---
//
// One row per line. An entry is the group of its F_p coefficients, constant
// term first: a single digit when F_q is a prime field, digits joined by '.'
// otherwise. '|' and blanks are ignored on read, so block-separated input
// parses directly.

inline std::string format_entry(const FieldTower& tower, uint64_t code) {
    if (tower.p() > 9) throw std::invalid_argument("text format supports characteristic at most 9");
    const uint32_t bd = tower.degree(kLevelQ);
    if (bd == 1) return std::string(1, static_cast<char>('0' + code));
    auto digits = tower.unpack(kLevelQ, code);
    std::string out;
    for (uint32_t i = 0; i < bd; ++i) {
        if (i) out += '.';
        out += static_cast<char>('0' + digits[i]);
    }
    return out;
}

inline std::string format_matrix(const MatrixFq& m, uint32_t block = 0) {
    std::string out;
    for (uint32_t i = 0; i < m.rows(); ++i) {
        for (uint32_t j = 0; j < m.cols(); ++j) {
            if (block && j && j % block == 0) out += '|';
            out += format_entry(m.tower(), m.at(i, j));
        }
        out += '\n';
    }
    return out;
}

inline std::vector<uint64_t> parse_row(const FieldTower& tower, const std::string& line) {
    if (tower.p() > 9) throw std::invalid_argument("text format supports characteristic at most 9");
    const uint32_t bd = tower.degree(kLevelQ);
    std::string cleaned;
    for (char c : line) {
        if (c == '|' || std::isspace(static_cast<unsigned char>(c))) continue;
        cleaned += c;
    }
    std::vector<uint64_t> row;
    size_t pos = 0;
    const size_t stride = bd == 1 ? 1 : 2 * bd - 1;
    while (pos < cleaned.size()) {
        if (pos + stride > cleaned.size()) throw std::invalid_argument("truncated matrix entry in '" + line + "'");
        std::vector<uint64_t> digits(bd);
        for (uint32_t i = 0; i < bd; ++i) {
            const char c = cleaned[pos + (bd == 1 ? 0 : 2 * i)];
            if (c < '0' || c >= static_cast<char>('0' + tower.p())) {
                throw std::invalid_argument(std::string("bad coefficient digit '") + c + "'");
            }
            if (bd > 1 && i + 1 < bd && cleaned[pos + 2 * i + 1] != '.') {
                throw std::invalid_argument("expected '.' between coefficient digits");
            }
            digits[i] = static_cast<uint64_t>(c - '0');
        }
        row.push_back(bd == 1 ? digits[0] : tower.pack(kLevelQ, digits));
        pos += stride;
    }
    return row;
}

inline MatrixFq parse_matrix(const FieldTower& tower, const std::string& text) {
    std::vector<std::vector<uint64_t>> rows;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        bool blank = true;
        for (char c : line) {
            if (!std::isspace(static_cast<unsigned char>(c))) blank = false;
        }
        if (blank) continue;
        rows.push_back(parse_row(tower, line));
        if (rows.back().size() != rows.front().size()) throw std::invalid_argument("matrix rows have unequal lengths");
    }
    if (rows.empty()) throw std::invalid_argument("empty matrix text");
    MatrixFq m(tower, static_cast<uint32_t>(rows.size()), static_cast<uint32_t>(rows.front().size()));
    for (uint32_t i = 0; i < m.rows(); ++i) m.set_row(i, rows[i]);
    return m;
}

}  // namespace spreadec
