#ifndef PFIBER_CELLULAR_STRING_HPP
#define PFIBER_CELLULAR_STRING_HPP

#include <compare>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace pfiber {

/// Word over {0, 1, X}. Construction checks the alphabet only; use
/// validate_string / parse_string for the cellular-string clauses.
class CellularString {
public:
    CellularString() = default;
    explicit CellularString(std::string word);

    const std::string& word() const noexcept { return word_; }
    std::size_t size() const noexcept { return word_.size(); }
    char operator[](std::size_t i) const { return word_[i]; }

    /// Number of X symbols.
    std::size_t dimension() const noexcept;

    friend auto operator<=>(const CellularString&, const CellularString&) = default;

private:
    std::string word_;
};

struct Block {
    char symbol;
    std::size_t offset;
    std::size_t length;

    friend bool operator==(const Block&, const Block&) = default;
};

/// Maximal runs of equal symbols, left to right. No validation.
std::vector<Block> run_length_blocks(std::string_view word);

struct StringViolation {
    std::string clause; ///< "alphabet", "ii", "iii" or "iv"
    std::string message;
};

/// Checks the cellular-string clauses. With `m` unset, clause (iv) only
/// requires the bit blocks to read 0,1,0,...,0.
std::optional<StringViolation> check_string(std::string_view word, std::optional<std::size_t> m = {});

/// Throws InvalidString on the first violated clause.
void validate_string(const CellularString& s, std::optional<std::size_t> m = {});

CellularString parse_string(std::string_view word, std::optional<std::size_t> m = {});

/// Number of 0-blocks of a valid string.
std::size_t zero_block_count(const CellularString& s);

/// Canonical representation of a valid string; throws InvalidString otherwise.
std::vector<Block> canonical_blocks(const CellularString& s);

/// a <= b iff b agrees with a wherever b carries a bit.
/// Throws InvalidPair on a length mismatch.
bool string_leq(const CellularString& a, const CellularString& b);

/// Largest valid string below both, if any lower bound exists.
std::optional<CellularString> greatest_lower_bound(const CellularString& a, const CellularString& b);

/// Smallest valid string above both, if any upper bound exists.
std::optional<CellularString> least_upper_bound(const CellularString& a, const CellularString& b);

/// Str(N, M) with elements in lexicographic order ('0' < '1' < 'X') and the
/// covering relation (one bit replaced by X).
class StringPoset {
public:
    StringPoset(std::size_t n, std::size_t m, std::vector<CellularString> elements);

    std::size_t n() const noexcept { return n_; }
    std::size_t m() const noexcept { return m_; }
    /// K = 2M - 1.
    std::size_t critical_count() const noexcept { return 2 * m_ - 1; }
    /// L = N - K, the dimension of every maximal element.
    std::size_t top_dimension() const noexcept { return n_ - critical_count(); }

    std::size_t size() const noexcept { return elements_.size(); }
    const std::vector<CellularString>& elements() const noexcept { return elements_; }
    const CellularString& operator[](std::size_t i) const { return elements_[i]; }

    std::optional<std::size_t> index_of(const CellularString& s) const;
    bool contains(const CellularString& s) const { return index_of(s).has_value(); }

    /// Indices of elements covering element i.
    const std::vector<std::size_t>& covers_above(std::size_t i) const { return up_[i]; }
    /// Indices of elements covered by element i.
    const std::vector<std::size_t>& covers_below(std::size_t i) const { return down_[i]; }
    /// (lower, upper) covering pairs in lexicographic order of indices.
    std::vector<std::pair<std::size_t, std::size_t>> covering_pairs() const;

    std::vector<std::size_t> maximal_elements() const;
    /// Indices of all s' <= s (including s), ascending.
    std::vector<std::size_t> down_set(std::size_t i) const;

private:
    std::size_t n_;
    std::size_t m_;
    std::vector<CellularString> elements_;
    std::unordered_map<std::string, std::size_t> index_;
    std::vector<std::vector<std::size_t>> up_;
    std::vector<std::vector<std::size_t>> down_;
};

/// All strings of Str(N, M). Throws Infeasible when N < 2M - 1 or M == 0.
StringPoset enumerate_strings(std::size_t n, std::size_t m);

} // namespace pfiber

#endif
