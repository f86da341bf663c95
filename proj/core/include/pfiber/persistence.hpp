#ifndef PFIBER_PERSISTENCE_HPP
#define PFIBER_PERSISTENCE_HPP

#include <compare>
#include <cstddef>
#include <span>
#include <vector>

namespace pfiber {

using SampleVector = std::vector<double>;

/// A real number or the distinguished value INFINITE (larger than every real).
///
/// Used for death values, bottleneck distances and unbounded margins. INFINITE
/// is a tag, never a floating-point sentinel, so serialization is exact.
class ExtendedReal {
public:
    constexpr ExtendedReal() = default;
    constexpr ExtendedReal(double v) : value_(v) {} // NOLINT(google-explicit-constructor)

    static constexpr ExtendedReal infinite()
    {
        ExtendedReal r;
        r.infinite_ = true;
        return r;
    }

    constexpr bool is_infinite() const noexcept { return infinite_; }
    constexpr bool is_finite() const noexcept { return !infinite_; }

    /// Finite value; precondition is_finite().
    constexpr double value() const noexcept { return value_; }

    /// Finite value or +inf, for arithmetic that tolerates IEEE infinity.
    double as_double() const noexcept;

    friend constexpr bool operator==(const ExtendedReal& a, const ExtendedReal& b) noexcept
    {
        if (a.infinite_ || b.infinite_)
            return a.infinite_ == b.infinite_;
        return a.value_ == b.value_;
    }

    friend constexpr std::partial_ordering operator<=>(const ExtendedReal& a,
                                                       const ExtendedReal& b) noexcept
    {
        if (a.infinite_ && b.infinite_)
            return std::partial_ordering::equivalent;
        if (a.infinite_)
            return std::partial_ordering::greater;
        if (b.infinite_)
            return std::partial_ordering::less;
        return a.value_ <=> b.value_;
    }

private:
    double value_ = 0.0;
    bool infinite_ = false;
};

struct PersistencePoint {
    double birth = 0.0;
    ExtendedReal death;

    /// death - birth, INFINITE for essential classes.
    ExtendedReal persistence() const noexcept;

    friend bool operator==(const PersistencePoint&, const PersistencePoint&) = default;
};

/// Lexicographic (birth, death) with INFINITE last.
bool canonical_less(const PersistencePoint& a, const PersistencePoint& b) noexcept;

/// Multiset of persistence points kept in canonical order.
class PersistenceDiagram {
public:
    PersistenceDiagram() = default;
    explicit PersistenceDiagram(std::vector<PersistencePoint> points);

    const std::vector<PersistencePoint>& points() const noexcept { return points_; }
    std::size_t size() const noexcept { return points_.size(); }
    bool empty() const noexcept { return points_.empty(); }
    std::size_t infinite_count() const noexcept;

    auto begin() const noexcept { return points_.begin(); }
    auto end() const noexcept { return points_.end(); }
    const PersistencePoint& operator[](std::size_t i) const { return points_[i]; }

    friend bool operator==(const PersistenceDiagram&, const PersistenceDiagram&) = default;

private:
    std::vector<PersistencePoint> points_;
};

enum class Parity { Pattern010, Pattern101 };

struct CriticalValueSequence {
    std::vector<double> values;
    Parity parity = Parity::Pattern010;

    std::size_t size() const noexcept { return values.size(); }
    /// Number of minima (010) or maxima (101): (K + 1) / 2.
    std::size_t point_count() const noexcept { return (values.size() + 1) / 2; }

    friend bool operator==(const CriticalValueSequence&, const CriticalValueSequence&) = default;
};

/// True when K is odd and the values strictly alternate in the declared pattern.
bool is_alternating(const CriticalValueSequence& cv) noexcept;

/// Throws InvalidInput unless `z` is nonempty with finite entries.
void validate_sample(std::span<const double> z);

/// True when all coordinates are pairwise distinct.
bool is_typical(std::span<const double> z);

/// H0 diagram of the sublevel-set filtration of the path complex at `z`.
///
/// Vertices enter in (value, index) order and each edge enters with its later
/// endpoint. At a merge the root with the larger (birth, birth index) dies.
/// Pairs with zero persistence (possible only with ties) are dropped.
PersistenceDiagram sublevel_diagram(std::span<const double> z);

/// sublevel_diagram(-z) with every point reflected back through negation.
PersistenceDiagram superlevel_diagram(std::span<const double> z);

/// Ordered local extrema of a typical vector, boundary maxima excluded.
/// Throws TieError naming the first pair of equal coordinates.
CriticalValueSequence critical_value_sequence(std::span<const double> z);

/// Same as critical_value_sequence but tolerant of ties: runs of equal
/// consecutive coordinates collapse into a single extremum candidate.
CriticalValueSequence collapsed_critical_values(std::span<const double> z);

struct ConsistencyReport {
    std::size_t point_count = 0;    ///< M
    std::size_t extremum_count = 0; ///< K
    bool count_relation = false;    ///< K == 2M - 1
    bool minima_match_births = false;
    bool maxima_match_deaths = false;

    bool passed() const noexcept { return count_relation && minima_match_births && maxima_match_deaths; }
};

/// Checks that a typical vector's extrema are exactly the births and finite
/// deaths of its diagram, and that K = 2M - 1.
ConsistencyReport extrema_pairing_check(std::span<const double> z);

/// Bottleneck distance between two diagrams.
///
/// Finite points may be matched to each other (sup-norm cost) or to the
/// diagonal (half persistence); infinite points only to infinite points
/// (cost |birth difference|). Returns INFINITE when the infinite counts differ.
ExtendedReal bottleneck_distance(const PersistenceDiagram& p, const PersistenceDiagram& q);

} // namespace pfiber

#endif
