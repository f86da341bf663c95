#ifndef PFIBER_FIBER_HPP
#define PFIBER_FIBER_HPP

#include "pfiber/cellular_string.hpp"
#include "pfiber/persistence.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace pfiber {

/// Absolute tolerance for classifying an external coordinate as equal to a
/// critical value.
inline constexpr double kLocateTolerance = 1e-9;

/// Extra room above the critical-value range when unbounded rays are cut off.
inline constexpr double kDefaultSlack = 1.0;

enum class ConstraintKind { Fixed, Chain, RayHead, RayTail };
enum class Direction { Ascending, Descending };

/// Constraint on one block of coordinates of T(s).
///
/// Critical indices are 0-based into the critical value sequence.
///  - Fixed:   every coordinate equals cv[from].
///  - Chain:   cv[from] <= x_1 <= ... <= x_n <= cv[to] (ascending) or the
///             mirror image (descending); to == from + 1.
///  - RayHead: inf >= x_1 >= ... >= x_n >= cv[0].
///  - RayTail: cv[K-1] <= x_1 <= ... <= x_n <= inf.
struct BlockConstraint {
    ConstraintKind kind = ConstraintKind::Fixed;
    std::size_t offset = 0;
    std::size_t length = 0;
    std::size_t from = 0;
    std::size_t to = 0;
    Direction direction = Direction::Ascending;

    friend bool operator==(const BlockConstraint&, const BlockConstraint&) = default;
};

/// Block constraints of T(s) over a 010 critical value sequence of length
/// 2M - 1. Throws InvalidPair on a parity or length mismatch.
std::vector<BlockConstraint> polytope_of(const CellularString& s, const CriticalValueSequence& cv);

/// Upper end used in place of infinity for rays: (max cv - min cv) + slack.
double default_cap(const CriticalValueSequence& cv, double slack = kDefaultSlack);

/// Membership of z in T(s), optionally truncated so rays end at
/// cv_end + cap. Inequalities are relaxed by `tol`.
bool polytope_contains(std::span<const BlockConstraint> blocks, const CriticalValueSequence& cv,
                       std::span<const double> z, double tol = 0.0, std::optional<double> cap = {});

/// Conjunction of constraints x_u - x_v <= w over coordinates 1..N plus a
/// reference coordinate 0 fixed at zero. Closure by all-pairs shortest paths
/// decides emptiness and entailment exactly (up to `tol`).
class DifferenceSystem {
public:
    explicit DifferenceSystem(std::size_t dimension);

    std::size_t dimension() const noexcept { return dim_; }

    /// x_u - x_v <= w, with index 0 the zero reference and i + 1 coordinate i.
    void add(std::size_t u, std::size_t v, double w);
    void add_lower(std::size_t coord, double value) { add(0, coord + 1, -value); }
    void add_upper(std::size_t coord, double value) { add(coord + 1, 0, value); }
    /// x_a <= x_b.
    void add_order(std::size_t a, std::size_t b) { add(a + 1, b + 1, 0.0); }

    bool is_empty(double tol = 1e-9) const;
    /// Every point satisfying *this satisfies `other`.
    bool subset_of(const DifferenceSystem& other, double tol = 1e-9) const;
    DifferenceSystem intersect(const DifferenceSystem& other) const;

private:
    struct Constraint {
        std::size_t u, v;
        double w;
    };
    std::vector<std::vector<double>> closure() const;

    std::size_t dim_;
    std::vector<Constraint> constraints_;
};

/// T(s) truncated at `cap` as a difference system.
DifferenceSystem polytope_system(std::span<const BlockConstraint> blocks, const CriticalValueSequence& cv,
                                 double cap);

/// One component C of a fiber: the union of T(s) over Str(N, M) for a fixed
/// critical value sequence, with the maximal polytopes precomputed.
class ComponentGeometry {
public:
    ComponentGeometry(CriticalValueSequence cv, std::size_t n, double slack = kDefaultSlack);

    const CriticalValueSequence& critical_values() const noexcept { return cv_; }
    const StringPoset& poset() const noexcept { return poset_; }
    std::size_t n() const noexcept { return poset_.n(); }
    /// Ray truncation used by sampling and the bounded geometric tests.
    double cap() const noexcept { return cap_; }

    std::vector<BlockConstraint> polytope(const CellularString& s) const { return polytope_of(s, cv_); }
    DifferenceSystem truncated_system(const CellularString& s) const;

    bool contains(std::span<const double> z, double tol = kLocateTolerance) const;
    double distance(std::span<const double> z) const;
    std::vector<SampleVector> sample(std::size_t count, std::uint64_t seed) const;

private:
    CriticalValueSequence cv_;
    StringPoset poset_;
    double cap_;
    std::vector<std::vector<BlockConstraint>> maximal_polytopes_;
};

/// Minimal string s of Str(N, M) with z in T(s), or nothing when z lies in
/// no polytope of this component.
std::optional<CellularString> locate_string(std::span<const double> z, const CriticalValueSequence& cv,
                                            double tol = kLocateTolerance);

struct FiberMembership {
    bool member = false;
    std::optional<CriticalValueSequence> component;
};

/// Whether dgm(z) == P, and if so the component label of z.
FiberMembership fiber_membership(std::span<const double> z, const PersistenceDiagram& p);

/// 2^(M-1) * prod over finite bars of the number of other bars containing it.
std::uint64_t chiral_merge_tree_count(const PersistenceDiagram& p);

struct ComponentEnumeration {
    PersistenceDiagram diagram;
    std::vector<CriticalValueSequence> components; ///< lexicographic by values
    std::uint64_t formula_count = 0;
    std::size_t enumerated_count = 0;
    bool formula_agrees = false;
};

/// Every 010 sequence whose elder-rule diagram is P. Points are treated as
/// distinguishable, so repeated values may produce repeated labels.
/// Throws InvalidDiagram unless P has exactly one infinite point.
ComponentEnumeration enumerate_components(const PersistenceDiagram& p);

/// `count` points of the component labelled by cv, drawn by picking a maximal
/// string uniformly and then each block uniformly (sorted for chains and
/// rays, rays capped at cv_end + cap). Deterministic for a fixed seed.
std::vector<SampleVector> sample_component(const CriticalValueSequence& cv, std::size_t n, std::size_t count,
                                           double cap, std::uint64_t seed);

/// Chebyshev distance from z to the block-constrained set (rays untruncated).
double sup_distance_to_polytope(std::span<const double> z, std::span<const BlockConstraint> blocks,
                                const CriticalValueSequence& cv);

/// Chebyshev distance from z to the component C labelled by cv.
double sup_distance_to_component(std::span<const double> z, const CriticalValueSequence& cv);

struct NonconvexityWitness {
    SampleVector v;
    SampleVector w;
    SampleVector midpoint;
    PersistenceDiagram fiber_diagram;
    PersistenceDiagram midpoint_diagram;
    double distance = 0.0; ///< bottleneck(dgm(midpoint), fiber_diagram)
};

/// Random search over pairs of one component for the midpoint whose diagram
/// is farthest from the fiber diagram. Returns nothing if every midpoint
/// stays in the fiber.
std::optional<NonconvexityWitness> nonconvexity_search(const CriticalValueSequence& cv, std::size_t n,
                                                       std::size_t trials, std::uint64_t seed);

} // namespace pfiber

#endif
