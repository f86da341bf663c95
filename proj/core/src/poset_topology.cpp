#include "pfiber/poset_topology.hpp"

#include "pfiber/errors.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <sstream>

namespace pfiber {
namespace {

// Strict up-sets of every element as bit rows, built from covering
// relations in order of decreasing dimension.
std::vector<std::vector<bool>> strict_up_sets(const StringPoset& poset)
{
    const std::size_t n = poset.size();
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i)
        order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return poset[a].dimension() > poset[b].dimension(); });

    std::vector<std::vector<bool>> up(n, std::vector<bool>(n, false));
    for (std::size_t i : order)
        for (std::size_t j : poset.covers_above(i)) {
            up[i][j] = true;
            for (std::size_t k = 0; k < n; ++k)
                if (up[j][k])
                    up[i][k] = true;
        }
    return up;
}

std::string apply_f1(std::string w)
{
    const auto first_x = w.find('X');
    if (first_x != std::string::npos) {
        bool alternating = true;
        for (std::size_t i = 0; i + 1 < first_x; ++i)
            alternating = alternating && w[i] != w[i + 1];
        if (alternating) {
            if (first_x > 0)
                std::swap(w[first_x - 1], w[first_x]);
            return w;
        }
    }
    if (w.size() >= 2 && w[0] == '0' && w[1] == '0') {
        w[0] = 'X';
        return w;
    }
    // First repeated bit pair "b b" preceded by a different bit "a": a b b -> a a b.
    for (std::size_t r = 2; r < w.size(); ++r) {
        if (w[r] != 'X' && w[r] == w[r - 1]) {
            w[r - 1] = w[r - 2];
            return w;
        }
    }
    return w; // zero-dimensional top string: nothing to move
}

std::string chain_description(const std::string& a, const std::string& b)
{
    return a + " <= " + b;
}

} // namespace

SimplicialComplex order_complex(const StringPoset& poset, std::span<const std::size_t> subset)
{
    const auto up = strict_up_sets(poset);
    const std::size_t n = subset.size();
    // Strict order restricted to the subset, in vertex numbering.
    std::vector<std::vector<std::uint32_t>> above(n);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
            if (up[subset[a]][subset[b]])
                above[a].push_back(static_cast<std::uint32_t>(b));

    SimplicialComplex complex(n);
    Simplex chain;
    std::function<void(std::uint32_t)> extend = [&](std::uint32_t v) {
        chain.push_back(v);
        complex.add(chain);
        for (std::uint32_t w : above[v])
            extend(w);
        chain.pop_back();
    };
    for (std::size_t v = 0; v < n; ++v)
        extend(static_cast<std::uint32_t>(v));
    return complex;
}

SimplicialComplex order_complex(const StringPoset& poset, const std::optional<CellularString>& restrict_to)
{
    std::vector<std::size_t> subset;
    if (restrict_to) {
        const auto idx = poset.index_of(*restrict_to);
        if (!idx)
            throw InvalidPair("string '" + restrict_to->word() + "' is not an element of the poset");
        subset = poset.down_set(*idx);
    } else {
        subset.resize(poset.size());
        for (std::size_t i = 0; i < subset.size(); ++i)
            subset[i] = i;
    }
    return order_complex(poset, subset);
}

CellularString F_map(const CellularString& s, std::size_t level)
{
    validate_string(s);
    if (level == 0)
        throw DomainError("F_map level starts at 1");
    const std::size_t prefix = level - 1;
    if (prefix >= s.size() || s.word().find_first_not_of('X') < prefix)
        throw DomainError("F_" + std::to_string(level) + " needs a string starting with " + std::to_string(prefix) +
                          " X symbols, got '" + s.word() + "'");
    const std::string& w = s.word();
    return CellularString(w.substr(0, prefix) + apply_f1(w.substr(prefix)));
}

std::size_t filtration_index(const CellularString& s)
{
    validate_string(s);
    const std::size_t k_count = 2 * zero_block_count(s) - 1;
    // With N == K the poset is the single string 0101...0, which is its own tail.
    if (s.size() == k_count)
        return 0;
    std::string w = s.word();
    for (std::size_t i = 0; i <= k_count; ++i) {
        if (w[0] == 'X')
            return i;
        w = apply_f1(w);
    }
    throw StructuralFailure("F_1 did not reach strings starting with X within K steps from '" + s.word() + "'");
}

HomotopyWitness homotopy_witness(const CellularString& s)
{
    const CellularString image = F_map(s, 1);
    if (string_leq(s, image))
        return {s, WitnessShape::Comparable};
    if (string_leq(image, s))
        return {image, WitnessShape::Comparable};
    if (auto glb = greatest_lower_bound(s, image))
        return {*glb, WitnessShape::GreatestLowerBound};
    if (auto lub = least_upper_bound(s, image))
        return {*lub, WitnessShape::LeastUpperBound};
    throw StructuralFailure("no order witness between '" + s.word() + "' and F_1 = '" + image.word() + "'");
}

ContractibilityReport contractibility_report(std::size_t n, std::size_t m, bool check_filtration)
{
    const auto poset = enumerate_strings(n, m);
    ContractibilityReport r;
    r.n = n;
    r.m = m;
    r.poset_size = poset.size();

    const auto complex = order_complex(poset);
    r.simplex_counts = complex.counts();
    r.homology = gf2_homology(complex);
    if (!r.homology.acyclic())
        r.failures.push_back("order complex has nonzero reduced homology");
    if (r.homology.euler != 1)
        r.failures.push_back("Euler characteristic is " + std::to_string(r.homology.euler));
    if (!r.homology.boundary_squares_to_zero || !r.homology.euler_consistent)
        r.failures.push_back("chain complex sanity check failed");

    const std::size_t k_count = poset.critical_count();
    std::vector<std::optional<std::size_t>> image(poset.size());
    r.morphism_ok = true;
    for (std::size_t i = 0; i < poset.size(); ++i) {
        image[i] = poset.index_of(F_map(poset[i]));
        if (!image[i]) {
            r.morphism_ok = false;
            r.failures.push_back("F_1(" + poset[i].word() + ") leaves the poset");
        }
    }
    const auto up = strict_up_sets(poset);
    for (std::size_t i = 0; i < poset.size() && r.morphism_ok; ++i)
        for (std::size_t j = 0; j < poset.size(); ++j) {
            if (!up[i][j])
                continue;
            const auto& fi = poset[*image[i]];
            const auto& fj = poset[*image[j]];
            if (!string_leq(fi, fj)) {
                r.morphism_ok = false;
                r.failures.push_back("F_1 not monotone on " + chain_description(poset[i].word(), poset[j].word()));
            }
        }

    // Tail sub-poset: strings starting with X, or everything when L == 0.
    const bool degenerate = poset.top_dimension() == 0;
    auto in_tail = [&](const CellularString& s) { return degenerate || s[0] == 'X'; };
    r.fixes_tail_ok = true;
    r.lands_in_tail_ok = true;
    r.witnesses_ok = true;
    for (std::size_t i = 0; i < poset.size(); ++i) {
        const auto& s = poset[i];
        if (in_tail(s) && F_map(s) != s) {
            r.fixes_tail_ok = false;
            r.failures.push_back("F_1 moves " + s.word());
        }
        CellularString t = s;
        for (std::size_t step = 0; step < k_count; ++step)
            t = F_map(t);
        if (!in_tail(t)) {
            r.lands_in_tail_ok = false;
            r.failures.push_back("F_1^K(" + s.word() + ") = " + t.word() + " does not start with X");
        }
        try {
            (void)homotopy_witness(s);
        } catch (const StructuralFailure& e) {
            r.witnesses_ok = false;
            r.failures.emplace_back(e.what());
        }
    }

    r.filtration_ok = true;
    if (check_filtration && r.lands_in_tail_ok) {
        std::vector<std::size_t> level(poset.size());
        for (std::size_t i = 0; i < poset.size(); ++i)
            level[i] = filtration_index(poset[i]);
        for (std::size_t lvl = 0; lvl <= k_count; ++lvl) {
            std::vector<std::size_t> subset;
            for (std::size_t i = 0; i < poset.size(); ++i)
                if (level[i] <= lvl)
                    subset.push_back(i);
            if (subset.empty())
                continue;
            const auto h = gf2_homology(order_complex(poset, subset));
            if (!h.acyclic()) {
                r.filtration_ok = false;
                r.failures.push_back("filtration level " + std::to_string(lvl) + " is not acyclic");
            }
        }
    }
    return r;
}

ProductDecomposition product_decomposition_check(const CellularString& s)
{
    validate_string(s);
    const std::size_t m = zero_block_count(s);
    const auto poset = enumerate_strings(s.size(), m);
    const auto idx = poset.index_of(s);
    if (!idx)
        throw StructuralFailure("valid string '" + s.word() + "' missing from its poset");

    struct Factor {
        std::size_t offset, length;
        bool interior;
        char left, right; // neighbouring bits, '\0' at the boundary
    };
    std::vector<Factor> factors;
    const auto runs = run_length_blocks(s.word());
    for (std::size_t j = 0; j < runs.size(); ++j) {
        if (runs[j].symbol != 'X')
            continue;
        const bool head = j == 0, tail = j + 1 == runs.size();
        factors.push_back({runs[j].offset, runs[j].length, !head && !tail, head ? '\0' : runs[j - 1].symbol,
                           tail ? '\0' : runs[j + 1].symbol});
    }

    ProductDecomposition out;
    std::size_t expected = 1;
    for (const auto& f : factors) {
        const std::size_t size = f.interior ? (f.length + 1) * (f.length + 2) / 2 : f.length + 1;
        out.factor_sizes.push_back(size);
        expected *= size;
    }

    // Coordinates: interior block -> interval [i, j] read from a^p X^q b^r
    // (i = p + 1, j = p + q + 1); boundary block -> number of X kept.
    using Coord = std::vector<std::pair<std::size_t, std::size_t>>;
    auto coordinates = [&](const CellularString& t) -> std::optional<Coord> {
        Coord c;
        for (const auto& f : factors) {
            const std::string seg = t.word().substr(f.offset, f.length);
            std::size_t p = 0, r = 0;
            if (f.left)
                while (p < seg.size() && seg[p] == f.left)
                    ++p;
            if (f.right)
                while (r < seg.size() - p && seg[seg.size() - 1 - r] == f.right)
                    ++r;
            const std::size_t q = seg.size() - p - r;
            if (seg.substr(p, q) != std::string(q, 'X'))
                return std::nullopt;
            if (f.interior)
                c.emplace_back(p + 1, p + q + 1);
            else
                c.emplace_back(q, 0);
        }
        return c;
    };
    auto coord_leq = [&](const Coord& a, const Coord& b) {
        for (std::size_t k = 0; k < factors.size(); ++k) {
            if (factors[k].interior) {
                if (!(b[k].first <= a[k].first && a[k].second <= b[k].second))
                    return false;
            } else if (a[k].first > b[k].first) {
                return false;
            }
        }
        return true;
    };

    const auto down = poset.down_set(*idx);
    out.down_set_size = down.size();
    std::map<Coord, std::size_t> seen;
    std::vector<Coord> coords;
    for (std::size_t i : down) {
        auto c = coordinates(poset[i]);
        if (!c || !seen.emplace(*c, i).second)
            return out;
        coords.push_back(std::move(*c));
    }
    if (down.size() != expected)
        return out;
    for (std::size_t a = 0; a < down.size(); ++a)
        for (std::size_t b = 0; b < down.size(); ++b)
            if (string_leq(poset[down[a]], poset[down[b]]) != coord_leq(coords[a], coords[b]))
                return out;
    out.holds = true;
    return out;
}

std::string poset_to_dot(const StringPoset& poset)
{
    std::ostringstream os;
    os << "digraph Str_" << poset.n() << '_' << poset.m() << " {\n";
    os << "  rankdir=BT;\n";
    os << "  node [shape=box, fontname=\"monospace\"];\n";
    std::map<std::size_t, std::vector<std::size_t>> ranks;
    for (std::size_t i = 0; i < poset.size(); ++i)
        ranks[poset[i].dimension()].push_back(i);
    for (const auto& [dim, members] : ranks) {
        os << "  { rank=same; // dimension " << dim << "\n";
        for (std::size_t i : members)
            os << "    \"" << poset[i].word() << "\";\n";
        os << "  }\n";
    }
    for (const auto& [lo, hi] : poset.covering_pairs())
        os << "  \"" << poset[lo].word() << "\" -> \"" << poset[hi].word() << "\";\n";
    os << "}\n";
    return os.str();
}

} // namespace pfiber
