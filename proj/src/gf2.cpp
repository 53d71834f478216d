// Copyright 2026 The vbscale Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "vbscale/gf2.hpp"

#include <algorithm>
#include <bit>
#include <sstream>
#include <stdexcept>

namespace vbscale {

namespace {

std::size_t words_for(std::size_t cols) { return (cols + 63) / 64; }

// Gaussian elimination to reduced row echelon form, in place.
// Returns the pivot column of each of the first `rank` rows.
std::vector<std::size_t> eliminate(GF2Matrix &m) {
    std::vector<std::size_t> pivots;
    std::size_t next = 0;
    for (std::size_t c = 0; c < m.cols() && next < m.rows(); ++c) {
        std::size_t pivot = next;
        while (pivot < m.rows() && !m.get(pivot, c)) {
            ++pivot;
        }
        if (pivot == m.rows()) {
            continue;
        }
        m.swap_rows(pivot, next);
        for (std::size_t r = 0; r < m.rows(); ++r) {
            if (r != next && m.get(r, c)) {
                m.xor_row_into(r, next);
            }
        }
        pivots.push_back(c);
        ++next;
    }
    return pivots;
}

}  // namespace

std::string to_string(const BitString &bits) {
    std::string out;
    out.reserve(bits.size());
    for (auto b : bits) {
        out.push_back(b ? '1' : '0');
    }
    return out;
}

BitString bits_from_string(std::string_view text) {
    BitString out;
    out.reserve(text.size());
    for (char ch : text) {
        if (ch == '0' || ch == '1') {
            out.push_back(static_cast<std::uint8_t>(ch - '0'));
        } else {
            throw std::invalid_argument("bit string contains a character other than 0/1");
        }
    }
    return out;
}

GF2Matrix::GF2Matrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), words_(words_for(cols)), data_(rows * words_for(cols), 0) {}

GF2Matrix GF2Matrix::identity(std::size_t n) {
    GF2Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        m.set(i, i, true);
    }
    return m;
}

GF2Matrix GF2Matrix::from_rows(const std::vector<std::string> &rows, std::size_t cols) {
    std::vector<BitString> bits;
    bits.reserve(rows.size());
    for (const auto &r : rows) {
        bits.push_back(bits_from_string(r));
    }
    return from_rows(bits, cols);
}

GF2Matrix GF2Matrix::from_rows(const std::vector<BitString> &rows, std::size_t cols) {
    GF2Matrix m(0, cols);
    for (const auto &r : rows) {
        m.append_row(r);
    }
    return m;
}

void GF2Matrix::set(std::size_t r, std::size_t c, bool value) {
    auto &w = data_[r * words_ + (c >> 6)];
    const std::uint64_t mask = std::uint64_t{1} << (c & 63);
    w = value ? (w | mask) : (w & ~mask);
}

void GF2Matrix::xor_row_into(std::size_t dst, std::size_t src) {
    std::uint64_t *d = data_.data() + dst * words_;
    const std::uint64_t *s = data_.data() + src * words_;
    for (std::size_t k = 0; k < words_; ++k) {
        d[k] ^= s[k];
    }
}

void GF2Matrix::swap_rows(std::size_t a, std::size_t b) {
    if (a == b) {
        return;
    }
    std::swap_ranges(data_.begin() + static_cast<std::ptrdiff_t>(a * words_),
                     data_.begin() + static_cast<std::ptrdiff_t>((a + 1) * words_),
                     data_.begin() + static_cast<std::ptrdiff_t>(b * words_));
}

bool GF2Matrix::row_is_zero(std::size_t r) const {
    auto w = row_words(r);
    return std::all_of(w.begin(), w.end(), [](std::uint64_t x) { return x == 0; });
}

std::size_t GF2Matrix::row_weight(std::size_t r) const {
    std::size_t total = 0;
    for (auto x : row_words(r)) {
        total += static_cast<std::size_t>(std::popcount(x));
    }
    return total;
}

BitString GF2Matrix::row(std::size_t r) const {
    BitString out(cols_);
    for (std::size_t c = 0; c < cols_; ++c) {
        out[c] = get(r, c);
    }
    return out;
}

void GF2Matrix::append_row(const BitString &bits) {
    if (bits.size() != cols_) {
        throw std::invalid_argument("row length does not match column count");
    }
    data_.resize(data_.size() + words_, 0);
    ++rows_;
    for (std::size_t c = 0; c < cols_; ++c) {
        if (bits[c]) {
            set(rows_ - 1, c, true);
        }
    }
}

GF2Matrix GF2Matrix::transposed() const {
    GF2Matrix t(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r) {
        for (std::size_t c = 0; c < cols_; ++c) {
            if (get(r, c)) {
                t.set(c, r, true);
            }
        }
    }
    return t;
}

std::size_t rank(const GF2Matrix &m) {
    GF2Matrix work = m;
    return eliminate(work).size();
}

GF2Matrix column_restrict(const GF2Matrix &m, std::span<const std::size_t> idx) {
    std::vector<bool> seen(m.cols(), false);
    for (auto c : idx) {
        if (c >= m.cols()) {
            throw std::out_of_range("column index out of range");
        }
        if (seen[c]) {
            throw std::invalid_argument("duplicate column index");
        }
        seen[c] = true;
    }
    GF2Matrix out(m.rows(), idx.size());
    for (std::size_t r = 0; r < m.rows(); ++r) {
        for (std::size_t k = 0; k < idx.size(); ++k) {
            if (m.get(r, idx[k])) {
                out.set(r, k, true);
            }
        }
    }
    return out;
}

std::optional<AffineSolution> solve(const GF2Matrix &m, const BitString &s) {
    if (s.size() != m.rows()) {
        throw std::invalid_argument("syndrome length must equal row count");
    }
    // Augment with the right-hand side as an extra column.
    const std::size_t n = m.cols();
    GF2Matrix aug(m.rows(), n + 1);
    for (std::size_t r = 0; r < m.rows(); ++r) {
        for (std::size_t c = 0; c < n; ++c) {
            if (m.get(r, c)) {
                aug.set(r, c, true);
            }
        }
        if (s[r]) {
            aug.set(r, n, true);
        }
    }
    auto pivots = eliminate(aug);
    if (!pivots.empty() && pivots.back() == n) {
        return std::nullopt;
    }

    AffineSolution sol;
    sol.rank = pivots.size();
    sol.particular.assign(n, 0);
    std::vector<bool> is_pivot(n, false);
    for (std::size_t r = 0; r < pivots.size(); ++r) {
        is_pivot[pivots[r]] = true;
        sol.particular[pivots[r]] = aug.get(r, n);
    }
    for (std::size_t free = 0; free < n; ++free) {
        if (is_pivot[free]) {
            continue;
        }
        BitString v(n, 0);
        v[free] = 1;
        for (std::size_t r = 0; r < pivots.size(); ++r) {
            if (aug.get(r, free)) {
                v[pivots[r]] = 1;
            }
        }
        sol.kernel.push_back(std::move(v));
    }
    return sol;
}

BitString multiply(const GF2Matrix &m, const BitString &x) {
    if (x.size() != m.cols()) {
        throw std::invalid_argument("vector length must equal column count");
    }
    BitString out(m.rows(), 0);
    for (std::size_t r = 0; r < m.rows(); ++r) {
        std::uint8_t acc = 0;
        for (std::size_t c = 0; c < m.cols(); ++c) {
            acc ^= static_cast<std::uint8_t>(m.get(r, c) & x[c]);
        }
        out[r] = acc;
    }
    return out;
}

GF2Matrix row_basis(const GF2Matrix &m) {
    GF2Matrix work = m;
    const auto r = eliminate(work).size();
    GF2Matrix out(0, m.cols());
    for (std::size_t i = 0; i < r; ++i) {
        out.append_row(work.row(i));
    }
    return out;
}

GF2Matrix parse_matrix(std::string_view text) {
    std::istringstream in{std::string(text)};
    long long rows = -1;
    long long cols = -1;
    if (!(in >> rows >> cols) || rows < 0 || cols < 0) {
        throw std::invalid_argument("matrix header must be 'rows cols'");
    }
    GF2Matrix m(0, static_cast<std::size_t>(cols));
    for (long long r = 0; r < rows; ++r) {
        std::string line;
        if (!(in >> line)) {
            throw std::invalid_argument("matrix has fewer rows than declared");
        }
        if (line.size() != static_cast<std::size_t>(cols)) {
            throw std::invalid_argument("matrix row length does not match header");
        }
        m.append_row(bits_from_string(line));
    }
    return m;
}

std::string format_matrix(const GF2Matrix &m) {
    std::ostringstream out;
    out << m.rows() << ' ' << m.cols() << '\n';
    for (std::size_t r = 0; r < m.rows(); ++r) {
        out << to_string(m.row(r)) << '\n';
    }
    return out.str();
}

}  // namespace vbscale
