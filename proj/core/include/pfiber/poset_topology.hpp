#ifndef PFIBER_POSET_TOPOLOGY_HPP
#define PFIBER_POSET_TOPOLOGY_HPP

#include "pfiber/cellular_string.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace pfiber {

using Simplex = std::vector<std::uint32_t>;

struct SimplexHash {
    std::size_t operator()(const Simplex& s) const noexcept;
};

/// Finite abstract simplicial complex; simplices are sorted vertex sets,
/// grouped by dimension.
class SimplicialComplex {
public:
    explicit SimplicialComplex(std::size_t vertex_count = 0);

    /// Adds `facet` and all of its faces.
    void add_closed(Simplex facet);
    /// Adds a single simplex; the caller keeps the complex face-closed.
    void add(Simplex simplex);

    std::size_t vertex_count() const noexcept { return vertex_count_; }
    /// -1 for the empty complex.
    int dimension() const noexcept { return static_cast<int>(by_dim_.size()) - 1; }
    const std::vector<Simplex>& simplices(std::size_t dim) const { return by_dim_.at(dim); }
    std::size_t count(std::size_t dim) const { return dim < by_dim_.size() ? by_dim_[dim].size() : 0; }
    std::vector<std::size_t> counts() const;

    std::optional<std::size_t> index_of(const Simplex& s) const;
    bool contains(const Simplex& s) const { return index_of(s).has_value(); }

    /// Every face of every simplex present.
    bool is_closed() const;
    /// Alternating sum of simplex counts.
    long long euler_characteristic() const;

private:
    std::size_t vertex_count_;
    std::vector<std::vector<Simplex>> by_dim_;
    std::vector<std::unordered_map<Simplex, std::size_t, SimplexHash>> index_;
};

struct BettiReport {
    std::vector<std::size_t> betti; ///< by dimension
    long long euler = 0;            ///< alternating simplex-count sum
    bool reduced = false;           ///< betti[0] is reduced (one less for a nonempty complex)
    bool euler_consistent = false;  ///< euler equals the alternating Betti sum (adjusted for reduction)
    bool boundary_squares_to_zero = false;

    /// All reduced Betti numbers vanish.
    bool acyclic() const noexcept;
};

/// GF(2) Betti numbers via boundary-matrix column reduction.
BettiReport gf2_homology(const SimplicialComplex& complex, bool reduced = true);

/// Order complex of the sub-poset on `subset` (indices into `poset`); vertex
/// v of the result is poset element subset[v]. k-simplices are strict chains
/// of k + 1 elements.
SimplicialComplex order_complex(const StringPoset& poset, std::span<const std::size_t> subset);

/// Order complex of the whole poset, or of the down-set {s' <= s} when
/// `restrict_to` is given.
SimplicialComplex order_complex(const StringPoset& poset, const std::optional<CellularString>& restrict_to = {});

/// F_level of the contraction machinery. F_1 transposes the leftmost X with
/// the preceding bit when no repeated bit precedes it, turns a leading 00 into
/// X0, and otherwise rewrites the first repeat a b b into a a b. F_l keeps the
/// X-prefix of length l - 1 and applies F_1 to the rest.
/// Throws DomainError if s does not start with level - 1 X symbols.
CellularString F_map(const CellularString& s, std::size_t level = 1);

/// Least i with F_1^i(s) starting with X. Throws StructuralFailure if that
/// does not happen within K steps.
std::size_t filtration_index(const CellularString& s);

enum class WitnessShape { Comparable, GreatestLowerBound, LeastUpperBound };

struct HomotopyWitness {
    CellularString witness;
    WitnessShape shape;
};

/// A string related to both s and F_1(s): their glb when it exists
/// (Comparable if one lies below the other), their lub otherwise.
HomotopyWitness homotopy_witness(const CellularString& s);

struct ContractibilityReport {
    std::size_t n = 0;
    std::size_t m = 0;
    std::size_t poset_size = 0;
    std::vector<std::size_t> simplex_counts;
    BettiReport homology;
    bool morphism_ok = false;       ///< s' <= s implies F_1(s') <= F_1(s), and F_1 stays in Str
    bool fixes_tail_ok = false;     ///< F_1 is the identity on strings starting with X
    bool lands_in_tail_ok = false;  ///< F_1^K(s) starts with X for every s
    bool witnesses_ok = false;      ///< homotopy_witness succeeds everywhere
    bool filtration_ok = false;     ///< each filtration level has acyclic order complex
    std::vector<std::string> failures;

    bool contractible() const noexcept { return homology.acyclic() && homology.euler == 1; }
    bool passed() const noexcept
    {
        return contractible() && morphism_ok && fixes_tail_ok && lands_in_tail_ok && witnesses_ok && filtration_ok;
    }
};

/// Homology of B(Str(N, M)) plus the F_1 audits. With `check_filtration`
/// also computes the homology of every filtration level.
ContractibilityReport contractibility_report(std::size_t n, std::size_t m, bool check_filtration = true);

struct ProductDecomposition {
    bool holds = false;
    std::size_t down_set_size = 0;
    std::vector<std::size_t> factor_sizes; ///< one per X-block, left to right
};

/// Checks that {s' <= s} is isomorphic to the product over X-blocks of
/// interval posets I_n (interior blocks) and chains of n + 1 elements
/// (boundary blocks).
ProductDecomposition product_decomposition_check(const CellularString& s);

/// Graphviz description: nodes are strings ranked by dimension, edges are
/// covering relations pointing upward.
std::string poset_to_dot(const StringPoset& poset);

} // namespace pfiber

#endif
