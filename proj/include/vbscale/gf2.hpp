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

#ifndef VBSCALE_GF2_HPP
#define VBSCALE_GF2_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace vbscale {

/// Unpacked bit string, one 0/1 entry per position.
using BitString = std::vector<std::uint8_t>;

std::string to_string(const BitString &bits);
BitString bits_from_string(std::string_view text);

/// Dense binary matrix over F2 with rows packed into 64-bit words.
///
/// Bits past `cols` in the last word of every row are kept zero so that
/// word-level comparisons and popcounts see only real columns.
class GF2Matrix {
   public:
    GF2Matrix() = default;
    GF2Matrix(std::size_t rows, std::size_t cols);

    static GF2Matrix identity(std::size_t n);
    static GF2Matrix from_rows(const std::vector<std::string> &rows, std::size_t cols);
    static GF2Matrix from_rows(const std::vector<BitString> &rows, std::size_t cols);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t words_per_row() const { return words_; }

    bool get(std::size_t r, std::size_t c) const {
        return (data_[r * words_ + (c >> 6)] >> (c & 63)) & 1u;
    }
    void set(std::size_t r, std::size_t c, bool value);
    void flip(std::size_t r, std::size_t c) { data_[r * words_ + (c >> 6)] ^= std::uint64_t{1} << (c & 63); }

    std::span<std::uint64_t> row_words(std::size_t r) { return {data_.data() + r * words_, words_}; }
    std::span<const std::uint64_t> row_words(std::size_t r) const { return {data_.data() + r * words_, words_}; }

    /// row[dst] ^= row[src]
    void xor_row_into(std::size_t dst, std::size_t src);
    void swap_rows(std::size_t a, std::size_t b);
    bool row_is_zero(std::size_t r) const;
    std::size_t row_weight(std::size_t r) const;
    BitString row(std::size_t r) const;
    void append_row(const BitString &bits);

    GF2Matrix transposed() const;

    bool operator==(const GF2Matrix &other) const = default;

   private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::size_t words_ = 0;
    std::vector<std::uint64_t> data_;
};

/// F2 row rank. Works on a private copy.
std::size_t rank(const GF2Matrix &m);

/// Submatrix with the selected columns, in the order given.
/// Throws std::out_of_range on a bad index, std::invalid_argument on duplicates.
GF2Matrix column_restrict(const GF2Matrix &m, std::span<const std::size_t> idx);

/// Affine solution set {x : Mx = s} as particular solution plus kernel basis.
struct AffineSolution {
    BitString particular;
    std::vector<BitString> kernel;  // basis of ker(M), one vector per free column
    std::size_t rank = 0;
};

/// Solves Mx = s over F2. Returns nullopt when the system is inconsistent.
/// Pivots on the first nonzero column using the lowest available row, so the
/// kernel basis is reproducible.
std::optional<AffineSolution> solve(const GF2Matrix &m, const BitString &s);

/// M x over F2.
BitString multiply(const GF2Matrix &m, const BitString &x);

/// Reduced row echelon form with zero rows dropped; a canonical basis of the row space.
GF2Matrix row_basis(const GF2Matrix &m);

/// Text format: "rows cols" on the first line, then one 0/1 string per row.
GF2Matrix parse_matrix(std::string_view text);
std::string format_matrix(const GF2Matrix &m);

}  // namespace vbscale

#endif  // VBSCALE_GF2_HPP
