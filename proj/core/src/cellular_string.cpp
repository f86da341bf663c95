#include "pfiber/cellular_string.hpp"

#include "pfiber/errors.hpp"

#include <algorithm>
#include <functional>

namespace pfiber {

CellularString::CellularString(std::string word) : word_(std::move(word))
{
    for (char c : word_)
        if (c != '0' && c != '1' && c != 'X')
            throw InvalidString(word_, "alphabet", "symbols must be 0, 1 or X");
}

std::size_t CellularString::dimension() const noexcept
{
    return static_cast<std::size_t>(std::count(word_.begin(), word_.end(), 'X'));
}

std::vector<Block> run_length_blocks(std::string_view word)
{
    std::vector<Block> blocks;
    for (std::size_t i = 0; i < word.size(); ++i) {
        if (!blocks.empty() && blocks.back().symbol == word[i])
            ++blocks.back().length;
        else
            blocks.push_back({word[i], i, 1});
    }
    return blocks;
}

std::optional<StringViolation> check_string(std::string_view word, std::optional<std::size_t> m)
{
    if (word.empty())
        return StringViolation{"alphabet", "string is empty"};
    for (char c : word)
        if (c != '0' && c != '1' && c != 'X')
            return StringViolation{"alphabet", "symbols must be 0, 1 or X"};

    const auto blocks = run_length_blocks(word);
    if (blocks.front().symbol == '1')
        return StringViolation{"ii", "first block must consist of 0 or X"};
    if (blocks.back().symbol == '1')
        return StringViolation{"ii", "last block must consist of 0 or X"};
    for (std::size_t j = 1; j + 1 < blocks.size(); ++j)
        if (blocks[j].symbol == 'X' && blocks[j - 1].symbol == blocks[j + 1].symbol)
            return StringViolation{"iii", "X-block at offset " + std::to_string(blocks[j].offset) +
                                              " separates equal bits"};

    std::string bits;
    for (const auto& b : blocks)
        if (b.symbol != 'X')
            bits.push_back(b.symbol);
    for (std::size_t k = 0; k < bits.size(); ++k)
        if (bits[k] != (k % 2 == 0 ? '0' : '1'))
            return StringViolation{"iv", "bit blocks must alternate 0,1,...,0"};
    if (bits.empty() || bits.back() != '0')
        return StringViolation{"iv", "bit blocks must alternate 0,1,...,0"};
    const std::size_t zeros = (bits.size() + 1) / 2;
    if (m && zeros != *m)
        return StringViolation{"iv", "expected " + std::to_string(*m) + " 0-blocks, found " +
                                         std::to_string(zeros)};
    return std::nullopt;
}

void validate_string(const CellularString& s, std::optional<std::size_t> m)
{
    if (auto v = check_string(s.word(), m))
        throw InvalidString(s.word(), v->clause, v->message);
}

CellularString parse_string(std::string_view word, std::optional<std::size_t> m)
{
    if (auto v = check_string(word, m))
        throw InvalidString(std::string(word), v->clause, v->message);
    return CellularString(std::string(word));
}

std::size_t zero_block_count(const CellularString& s)
{
    std::size_t zeros = 0;
    for (const auto& b : run_length_blocks(s.word()))
        zeros += b.symbol == '0';
    return zeros;
}

std::vector<Block> canonical_blocks(const CellularString& s)
{
    validate_string(s);
    return run_length_blocks(s.word());
}

bool string_leq(const CellularString& a, const CellularString& b)
{
    if (a.size() != b.size())
        throw InvalidPair("strings '" + a.word() + "' and '" + b.word() + "' differ in length");
    for (std::size_t i = 0; i < a.size(); ++i)
        if (b[i] != 'X' && a[i] != b[i])
            return false;
    return true;
}

namespace {

constexpr unsigned kAllow0 = 1, kAllow1 = 2, kAllowX = 4;

// Recognizer for 010 cellular strings with K bit blocks: optional head X-run,
// bit blocks 0,1,...,0 separated by optional X-gaps, optional tail X-run.
struct Automaton {
    enum class Phase { Start, Head, Bit, Gap, Tail };
    struct State {
        Phase phase;
        std::size_t k; // 1-based index of the current or last bit block
    };

    std::size_t critical;

    static char bit_of(std::size_t k) { return k % 2 == 1 ? '0' : '1'; }

    std::optional<State> step(State s, char c) const
    {
        switch (s.phase) {
        case Phase::Start:
        case Phase::Head:
            if (c == 'X')
                return State{Phase::Head, 0};
            if (c == '0')
                return State{Phase::Bit, 1};
            return std::nullopt;
        case Phase::Bit:
            if (c == bit_of(s.k))
                return s;
            if (c == 'X')
                return s.k < critical ? State{Phase::Gap, s.k} : State{Phase::Tail, s.k};
            if (s.k < critical && c == bit_of(s.k + 1))
                return State{Phase::Bit, s.k + 1};
            return std::nullopt;
        case Phase::Gap:
            if (c == 'X')
                return s;
            if (c == bit_of(s.k + 1))
                return State{Phase::Bit, s.k + 1};
            return std::nullopt;
        case Phase::Tail:
            if (c == 'X')
                return s;
            return std::nullopt;
        }
        return std::nullopt;
    }

    std::size_t symbols_needed(State s) const
    {
        switch (s.phase) {
        case Phase::Start:
        case Phase::Head:
            return critical;
        case Phase::Bit:
        case Phase::Gap:
            return critical - s.k;
        case Phase::Tail:
            return 0;
        }
        return 0;
    }

    bool accepting(State s) const
    {
        return (s.phase == Phase::Bit && s.k == critical) || s.phase == Phase::Tail;
    }
};

// Valid strings of Str(N, M) whose i-th symbol lies in allowed[i], in
// lexicographic order.
std::vector<CellularString> enumerate_matching(const std::vector<unsigned>& allowed, std::size_t m)
{
    const Automaton fsm{2 * m - 1};
    const std::size_t n = allowed.size();
    std::vector<CellularString> out;
    std::string word(n, '?');

    std::function<void(std::size_t, Automaton::State)> dfs = [&](std::size_t i, Automaton::State s) {
        if (i == n) {
            if (fsm.accepting(s))
                out.emplace_back(word);
            return;
        }
        if (fsm.symbols_needed(s) > n - i)
            return;
        for (char c : {'0', '1', 'X'}) {
            const unsigned bit = c == '0' ? kAllow0 : c == '1' ? kAllow1 : kAllowX;
            if (!(allowed[i] & bit))
                continue;
            if (auto next = fsm.step(s, c)) {
                word[i] = c;
                dfs(i + 1, *next);
            }
        }
    };
    dfs(0, Automaton::State{Automaton::Phase::Start, 0});
    return out;
}

unsigned mask_of(char c)
{
    return c == '0' ? kAllow0 : c == '1' ? kAllow1 : kAllowX;
}

std::size_t common_m(const CellularString& a, const CellularString& b)
{
    if (a.size() != b.size())
        throw InvalidPair("strings '" + a.word() + "' and '" + b.word() + "' differ in length");
    validate_string(a);
    validate_string(b);
    const std::size_t m = zero_block_count(a);
    if (zero_block_count(b) != m)
        throw InvalidPair("strings '" + a.word() + "' and '" + b.word() + "' belong to different posets");
    return m;
}

} // namespace

std::optional<CellularString> greatest_lower_bound(const CellularString& a, const CellularString& b)
{
    const std::size_t m = common_m(a, b);
    std::string merged(a.size(), 'X');
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 'X')
            merged[i] = b[i];
        else if (b[i] == 'X' || b[i] == a[i])
            merged[i] = a[i];
        else
            return std::nullopt; // conflicting bits: no lower bound at all
    }
    // Every lower bound lies below the bit-merge, so a valid merge is the glb.
    if (!check_string(merged, m))
        return CellularString(merged);

    std::vector<unsigned> allowed(merged.size());
    for (std::size_t i = 0; i < merged.size(); ++i)
        allowed[i] = merged[i] == 'X' ? (kAllow0 | kAllow1 | kAllowX) : mask_of(merged[i]);
    const auto lower = enumerate_matching(allowed, m);
    for (const auto& c : lower)
        if (std::all_of(lower.begin(), lower.end(), [&](const CellularString& d) { return string_leq(d, c); }))
            return c;
    return std::nullopt;
}

std::optional<CellularString> least_upper_bound(const CellularString& a, const CellularString& b)
{
    const std::size_t m = common_m(a, b);
    std::string merged(a.size(), 'X');
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] != 'X' && a[i] == b[i])
            merged[i] = a[i];
    if (!check_string(merged, m))
        return CellularString(merged);

    std::vector<unsigned> allowed(merged.size());
    for (std::size_t i = 0; i < merged.size(); ++i)
        allowed[i] = merged[i] == 'X' ? kAllowX : (mask_of(merged[i]) | kAllowX);
    const auto upper = enumerate_matching(allowed, m);
    for (const auto& c : upper)
        if (std::all_of(upper.begin(), upper.end(), [&](const CellularString& d) { return string_leq(c, d); }))
            return c;
    return std::nullopt;
}

StringPoset::StringPoset(std::size_t n, std::size_t m, std::vector<CellularString> elements)
    : n_(n), m_(m), elements_(std::move(elements)), up_(elements_.size()), down_(elements_.size())
{
    index_.reserve(elements_.size());
    for (std::size_t i = 0; i < elements_.size(); ++i)
        index_.emplace(elements_[i].word(), i);

    for (std::size_t i = 0; i < elements_.size(); ++i) {
        std::string w = elements_[i].word();
        for (std::size_t p = 0; p < w.size(); ++p) {
            if (w[p] == 'X')
                continue;
            const char saved = w[p];
            w[p] = 'X';
            if (auto it = index_.find(w); it != index_.end()) {
                up_[i].push_back(it->second);
                down_[it->second].push_back(i);
            }
            w[p] = saved;
        }
    }
    for (auto& v : up_)
        std::sort(v.begin(), v.end());
    for (auto& v : down_)
        std::sort(v.begin(), v.end());
}

std::optional<std::size_t> StringPoset::index_of(const CellularString& s) const
{
    if (auto it = index_.find(s.word()); it != index_.end())
        return it->second;
    return std::nullopt;
}

std::vector<std::pair<std::size_t, std::size_t>> StringPoset::covering_pairs() const
{
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t i = 0; i < up_.size(); ++i)
        for (std::size_t j : up_[i])
            pairs.emplace_back(i, j);
    return pairs;
}

std::vector<std::size_t> StringPoset::maximal_elements() const
{
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < elements_.size(); ++i)
        if (up_[i].empty())
            out.push_back(i);
    return out;
}

std::vector<std::size_t> StringPoset::down_set(std::size_t i) const
{
    std::vector<bool> seen(elements_.size(), false);
    std::vector<std::size_t> stack{i};
    seen[i] = true;
    while (!stack.empty()) {
        const std::size_t u = stack.back();
        stack.pop_back();
        for (std::size_t v : down_[u])
            if (!seen[v]) {
                seen[v] = true;
                stack.push_back(v);
            }
    }
    std::vector<std::size_t> out;
    for (std::size_t k = 0; k < seen.size(); ++k)
        if (seen[k])
            out.push_back(k);
    return out;
}

StringPoset enumerate_strings(std::size_t n, std::size_t m)
{
    if (m == 0 || n < 2 * m - 1)
        throw Infeasible("Str(" + std::to_string(n) + ", " + std::to_string(m) + ") requires N >= 2M - 1 >= 1");
    std::vector<unsigned> any(n, kAllow0 | kAllow1 | kAllowX);
    return StringPoset(n, m, enumerate_matching(any, m));
}

} // namespace pfiber
