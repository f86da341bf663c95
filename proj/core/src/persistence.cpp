#include "pfiber/persistence.hpp"

#include "pfiber/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <string>

namespace pfiber {

double ExtendedReal::as_double() const noexcept
{
    return infinite_ ? std::numeric_limits<double>::infinity() : value_;
}

ExtendedReal PersistencePoint::persistence() const noexcept
{
    if (death.is_infinite())
        return ExtendedReal::infinite();
    return death.value() - birth;
}

bool canonical_less(const PersistencePoint& a, const PersistencePoint& b) noexcept
{
    if (a.birth != b.birth)
        return a.birth < b.birth;
    return a.death < b.death;
}

PersistenceDiagram::PersistenceDiagram(std::vector<PersistencePoint> points)
    : points_(std::move(points))
{
    std::sort(points_.begin(), points_.end(), canonical_less);
}

std::size_t PersistenceDiagram::infinite_count() const noexcept
{
    return static_cast<std::size_t>(std::count_if(
        points_.begin(), points_.end(), [](const PersistencePoint& p) { return p.death.is_infinite(); }));
}

bool is_alternating(const CriticalValueSequence& cv) noexcept
{
    const auto& v = cv.values;
    if (v.size() % 2 == 0)
        return false;
    const bool starts_low = cv.parity == Parity::Pattern010;
    for (std::size_t i = 0; i + 1 < v.size(); ++i) {
        const bool rising = (i % 2 == 0) == starts_low;
        if (rising ? !(v[i] < v[i + 1]) : !(v[i] > v[i + 1]))
            return false;
    }
    return true;
}

void validate_sample(std::span<const double> z)
{
    if (z.empty())
        throw InvalidInput("sample vector is empty");
    for (std::size_t i = 0; i < z.size(); ++i)
        if (!std::isfinite(z[i]))
            throw InvalidInput("coordinate " + std::to_string(i) + " is not finite");
}

namespace {

std::vector<std::size_t> sorted_order(std::span<const double> z)
{
    std::vector<std::size_t> order(z.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return z[a] != z[b] ? z[a] < z[b] : a < b;
    });
    return order;
}

std::optional<std::pair<std::size_t, std::size_t>> first_tie(std::span<const double> z)
{
    const auto order = sorted_order(z);
    std::optional<std::pair<std::size_t, std::size_t>> best;
    for (std::size_t k = 0; k + 1 < order.size(); ++k) {
        // Within an equal-value run the sort keeps indices ascending, so the
        // run head paired with its successor is that run's smallest pair.
        if (z[order[k]] != z[order[k + 1]])
            continue;
        if (k > 0 && z[order[k - 1]] == z[order[k]])
            continue;
        const std::pair<std::size_t, std::size_t> pair{order[k], order[k + 1]};
        if (!best || pair < *best)
            best = pair;
    }
    return best;
}

class ElderUnionFind {
public:
    explicit ElderUnionFind(std::size_t n) : parent_(n), birth_index_(n) {}

    void make(std::size_t i)
    {
        parent_[i] = i;
        birth_index_[i] = i;
    }

    std::size_t find(std::size_t i)
    {
        while (parent_[i] != i) {
            parent_[i] = parent_[parent_[i]];
            i = parent_[i];
        }
        return i;
    }

    std::size_t birth_index(std::size_t root) const { return birth_index_[root]; }

    void attach(std::size_t young_root, std::size_t elder_root) { parent_[young_root] = elder_root; }

private:
    std::vector<std::size_t> parent_;
    std::vector<std::size_t> birth_index_;
};

enum class ExtremumKind { Minimum, Maximum };

struct Extremum {
    double value;
    ExtremumKind kind;
};

// Local extrema of a sequence with no two equal neighbours, boundary maxima
// excluded. A one-element sequence is a single minimum.
std::vector<Extremum> extrema_of(std::span<const double> c)
{
    std::vector<Extremum> out;
    const std::size_t n = c.size();
    if (n == 1) {
        out.push_back({c[0], ExtremumKind::Minimum});
        return out;
    }
    if (c[0] < c[1])
        out.push_back({c[0], ExtremumKind::Minimum});
    for (std::size_t i = 1; i + 1 < n; ++i) {
        if (c[i - 1] > c[i] && c[i] < c[i + 1])
            out.push_back({c[i], ExtremumKind::Minimum});
        else if (c[i - 1] < c[i] && c[i] > c[i + 1])
            out.push_back({c[i], ExtremumKind::Maximum});
    }
    if (c[n - 1] < c[n - 2])
        out.push_back({c[n - 1], ExtremumKind::Minimum});
    return out;
}

std::vector<double> collapse_plateaus(std::span<const double> z)
{
    std::vector<double> c;
    c.reserve(z.size());
    for (double v : z)
        if (c.empty() || c.back() != v)
            c.push_back(v);
    return c;
}

CriticalValueSequence to_sequence(const std::vector<Extremum>& ex)
{
    CriticalValueSequence cv;
    cv.values.reserve(ex.size());
    for (const auto& e : ex)
        cv.values.push_back(e.value);
    return cv;
}

} // namespace

bool is_typical(std::span<const double> z)
{
    return !first_tie(z).has_value();
}

PersistenceDiagram sublevel_diagram(std::span<const double> z)
{
    validate_sample(z);
    const std::size_t n = z.size();
    const auto order = sorted_order(z);
    // Rank in the processing order decides elder-ness among equal births.
    std::vector<std::size_t> rank(n);
    for (std::size_t k = 0; k < n; ++k)
        rank[order[k]] = k;

    ElderUnionFind uf(n);
    std::vector<bool> active(n, false);
    std::vector<PersistencePoint> points;

    for (std::size_t i : order) {
        uf.make(i);
        active[i] = true;
        const double level = z[i];
        for (std::size_t nb : {i - 1, i + 1}) {
            if (nb >= n || !active[nb]) // i - 1 wraps for i == 0
                continue;
            const std::size_t a = uf.find(i);
            const std::size_t b = uf.find(nb);
            if (a == b)
                continue;
            const bool a_elder = rank[uf.birth_index(a)] < rank[uf.birth_index(b)];
            const std::size_t elder = a_elder ? a : b;
            const std::size_t young = a_elder ? b : a;
            const double birth = z[uf.birth_index(young)];
            if (birth < level)
                points.push_back({birth, level});
            uf.attach(young, elder);
        }
    }
    points.push_back({z[order.front()], ExtendedReal::infinite()});
    return PersistenceDiagram(std::move(points));
}

PersistenceDiagram superlevel_diagram(std::span<const double> z)
{
    validate_sample(z);
    std::vector<double> negated(z.begin(), z.end());
    for (double& v : negated)
        v = -v;
    const auto low = sublevel_diagram(negated);
    std::vector<PersistencePoint> points;
    points.reserve(low.size());
    for (const auto& p : low) {
        const ExtendedReal death = p.death.is_infinite() ? ExtendedReal::infinite() : ExtendedReal(-p.death.value());
        points.push_back({-p.birth, death});
    }
    return PersistenceDiagram(std::move(points));
}

CriticalValueSequence critical_value_sequence(std::span<const double> z)
{
    validate_sample(z);
    if (const auto tie = first_tie(z))
        throw TieError(tie->first, tie->second);
    return to_sequence(extrema_of(z));
}

CriticalValueSequence collapsed_critical_values(std::span<const double> z)
{
    validate_sample(z);
    const auto c = collapse_plateaus(z);
    return to_sequence(extrema_of(c));
}

ConsistencyReport extrema_pairing_check(std::span<const double> z)
{
    validate_sample(z);
    if (const auto tie = first_tie(z))
        throw TieError(tie->first, tie->second);

    const auto dgm = sublevel_diagram(z);
    const auto ex = extrema_of(z);

    std::vector<double> minima, maxima, births, deaths;
    for (const auto& e : ex)
        (e.kind == ExtremumKind::Minimum ? minima : maxima).push_back(e.value);
    for (const auto& p : dgm) {
        births.push_back(p.birth);
        if (p.death.is_finite())
            deaths.push_back(p.death.value());
    }
    std::sort(minima.begin(), minima.end());
    std::sort(maxima.begin(), maxima.end());
    std::sort(births.begin(), births.end());
    std::sort(deaths.begin(), deaths.end());

    ConsistencyReport r;
    r.point_count = dgm.size();
    r.extremum_count = ex.size();
    r.count_relation = r.extremum_count == 2 * r.point_count - 1;
    r.minima_match_births = minima == births;
    r.maxima_match_deaths = maxima == deaths;
    return r;
}

} // namespace pfiber
