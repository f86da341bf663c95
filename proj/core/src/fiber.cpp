#include "pfiber/fiber.hpp"

#include "pfiber/errors.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <random>

namespace pfiber {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_010(const CriticalValueSequence& cv)
{
    if (cv.parity != Parity::Pattern010 || !is_alternating(cv))
        throw InvalidPair("critical value sequence is not a 010 sequence of odd length");
}

// A block read as a monotone run between two bounds:
// ascending  start <= x_1 <= ... <= x_n <= end
// descending start >= x_1 >= ... >= x_n >= end
struct ChainView {
    double start;
    double end;
    bool ascending;
};

ChainView chain_view(const BlockConstraint& b, const CriticalValueSequence& cv, std::optional<double> cap)
{
    const auto& v = cv.values;
    switch (b.kind) {
    case ConstraintKind::Fixed:
        return {v[b.from], v[b.from], true};
    case ConstraintKind::Chain:
        return {v[b.from], v[b.to], b.direction == Direction::Ascending};
    case ConstraintKind::RayHead:
        return {cap ? v.front() + *cap : kInf, v.front(), false};
    case ConstraintKind::RayTail:
        return {v.back(), cap ? v.back() + *cap : kInf, true};
    }
    return {0, 0, true};
}

// Exact Chebyshev distance from y to {lo <= x_1 <= ... <= x_n <= hi}: the
// midpoint of running prefix max and suffix min is an optimal isotonic fit,
// and clamping it into [lo, hi] keeps it optimal for the bounded problem.
double monotone_box_distance(std::span<const double> y, double lo, double hi)
{
    const std::size_t n = y.size();
    std::vector<double> suffix_min(n);
    double run = kInf;
    for (std::size_t i = n; i-- > 0;) {
        run = std::min(run, y[i]);
        suffix_min[i] = run;
    }
    double prefix_max = -kInf;
    double err = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        prefix_max = std::max(prefix_max, y[i]);
        const double fit = std::clamp((prefix_max + suffix_min[i]) / 2, lo, hi);
        err = std::max(err, std::abs(fit - y[i]));
    }
    return err;
}

std::size_t checked_m(const CriticalValueSequence& cv, std::size_t n)
{
    require_010(cv);
    if (n < cv.size())
        throw Infeasible("N = " + std::to_string(n) + " is shorter than the critical value sequence (K = " +
                         std::to_string(cv.size()) + ")");
    return cv.point_count();
}

} // namespace

std::vector<BlockConstraint> polytope_of(const CellularString& s, const CriticalValueSequence& cv)
{
    require_010(cv);
    validate_string(s);
    if (zero_block_count(s) != cv.point_count())
        throw InvalidPair("string '" + s.word() + "' has " + std::to_string(zero_block_count(s)) +
                          " 0-blocks but the critical value sequence has " + std::to_string(cv.point_count()) +
                          " minima");

    const auto runs = run_length_blocks(s.word());
    std::vector<BlockConstraint> out;
    out.reserve(runs.size());
    std::optional<std::size_t> last_bit; // 0-based index of the last bit block
    for (std::size_t j = 0; j < runs.size(); ++j) {
        const auto& r = runs[j];
        BlockConstraint c;
        c.offset = r.offset;
        c.length = r.length;
        if (r.symbol != 'X') {
            last_bit = last_bit ? *last_bit + 1 : 0;
            c.kind = ConstraintKind::Fixed;
            c.from = c.to = *last_bit;
        } else if (!last_bit) {
            c.kind = ConstraintKind::RayHead;
            c.direction = Direction::Descending;
        } else if (j + 1 == runs.size()) {
            c.kind = ConstraintKind::RayTail;
            c.from = c.to = cv.size() - 1;
        } else {
            c.kind = ConstraintKind::Chain;
            c.from = *last_bit;
            c.to = *last_bit + 1;
            // Even 0-based index means the block sits after a minimum.
            c.direction = *last_bit % 2 == 0 ? Direction::Ascending : Direction::Descending;
        }
        out.push_back(c);
    }
    return out;
}

double default_cap(const CriticalValueSequence& cv, double slack)
{
    const auto [lo, hi] = std::minmax_element(cv.values.begin(), cv.values.end());
    return (*hi - *lo) + slack;
}

bool polytope_contains(std::span<const BlockConstraint> blocks, const CriticalValueSequence& cv,
                       std::span<const double> z, double tol, std::optional<double> cap)
{
    std::size_t covered = 0;
    for (const auto& b : blocks)
        covered += b.length;
    if (covered != z.size())
        return false;
    for (const auto& b : blocks) {
        const auto view = chain_view(b, cv, cap);
        const auto seg = z.subspan(b.offset, b.length);
        if (view.ascending) {
            if (seg.front() < view.start - tol || seg.back() > view.end + tol)
                return false;
            for (std::size_t i = 0; i + 1 < seg.size(); ++i)
                if (seg[i] > seg[i + 1] + tol)
                    return false;
        } else {
            if (seg.front() > view.start + tol || seg.back() < view.end - tol)
                return false;
            for (std::size_t i = 0; i + 1 < seg.size(); ++i)
                if (seg[i] < seg[i + 1] - tol)
                    return false;
        }
    }
    return true;
}

DifferenceSystem::DifferenceSystem(std::size_t dimension) : dim_(dimension) {}

void DifferenceSystem::add(std::size_t u, std::size_t v, double w)
{
    constraints_.push_back({u, v, w});
}

std::vector<std::vector<double>> DifferenceSystem::closure() const
{
    const std::size_t n = dim_ + 1;
    // dist[v][u] bounds x_u - x_v from above.
    std::vector<std::vector<double>> dist(n, std::vector<double>(n, kInf));
    for (std::size_t i = 0; i < n; ++i)
        dist[i][i] = 0.0;
    for (const auto& c : constraints_)
        dist[c.v][c.u] = std::min(dist[c.v][c.u], c.w);
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i) {
            if (dist[i][k] == kInf)
                continue;
            for (std::size_t j = 0; j < n; ++j)
                if (dist[i][k] + dist[k][j] < dist[i][j])
                    dist[i][j] = dist[i][k] + dist[k][j];
        }
    return dist;
}

bool DifferenceSystem::is_empty(double tol) const
{
    const auto dist = closure();
    for (std::size_t i = 0; i < dist.size(); ++i)
        if (dist[i][i] < -tol)
            return true;
    return false;
}

bool DifferenceSystem::subset_of(const DifferenceSystem& other, double tol) const
{
    if (other.dim_ != dim_)
        throw InvalidPair("difference systems of different dimension");
    const auto dist = closure();
    for (std::size_t i = 0; i < dist.size(); ++i)
        if (dist[i][i] < -tol)
            return true;
    for (const auto& c : other.constraints_)
        if (dist[c.v][c.u] > c.w + tol)
            return false;
    return true;
}

DifferenceSystem DifferenceSystem::intersect(const DifferenceSystem& other) const
{
    if (other.dim_ != dim_)
        throw InvalidPair("difference systems of different dimension");
    DifferenceSystem out(dim_);
    out.constraints_ = constraints_;
    out.constraints_.insert(out.constraints_.end(), other.constraints_.begin(), other.constraints_.end());
    return out;
}

DifferenceSystem polytope_system(std::span<const BlockConstraint> blocks, const CriticalValueSequence& cv,
                                 double cap)
{
    std::size_t n = 0;
    for (const auto& b : blocks)
        n += b.length;
    DifferenceSystem sys(n);
    for (const auto& b : blocks) {
        const auto view = chain_view(b, cv, cap);
        const std::size_t first = b.offset, last = b.offset + b.length - 1;
        if (view.ascending) {
            sys.add_lower(first, view.start);
            sys.add_upper(last, view.end);
            for (std::size_t i = first; i < last; ++i)
                sys.add_order(i, i + 1);
        } else {
            sys.add_upper(first, view.start);
            sys.add_lower(last, view.end);
            for (std::size_t i = first; i < last; ++i)
                sys.add_order(i + 1, i);
        }
    }
    return sys;
}

std::optional<CellularString> locate_string(std::span<const double> z, const CriticalValueSequence& cv,
                                            double tol)
{
    require_010(cv);
    const std::size_t n = z.size();
    const std::size_t k_count = cv.size();
    if (n < k_count || n == 0)
        return std::nullopt;
    const auto& c = cv.values;

    // States: 0 = head X-run, k in [1, K] = k-th bit block, K + k = X-gap
    // after bit block k (k < K), 2K = tail X-run.
    const std::size_t head = 0, tail = 2 * k_count, states = 2 * k_count + 1;
    auto is_bit = [&](std::size_t s) { return s >= 1 && s <= k_count; };
    auto is_gap = [&](std::size_t s) { return s > k_count && s < tail; };
    auto near = [&](double v, double target) { return std::abs(v - target) <= tol; };

    // Whether coordinate i may carry state s given the previous state.
    // prev == states encodes "no previous coordinate".
    auto allowed = [&](std::size_t prev, std::size_t s, std::size_t i) -> bool {
        const double v = z[i];
        const bool first = prev == states;
        if (s == head) {
            if (!(first || prev == head) || v < c[0] - tol)
                return false;
            return first || v <= z[i - 1] + tol;
        }
        if (is_bit(s)) {
            if (!near(v, c[s - 1]))
                return false;
            if (s == 1)
                return first || prev == head || prev == 1;
            return prev == s || prev == s - 1 || prev == k_count + (s - 1);
        }
        if (is_gap(s)) {
            const std::size_t k = s - k_count;
            if (!(prev == k || prev == s))
                return false;
            const bool ascending = k % 2 == 1;
            const double lo = ascending ? c[k - 1] : c[k];
            const double hi = ascending ? c[k] : c[k - 1];
            if (v < lo - tol || v > hi + tol)
                return false;
            if (prev == s)
                return ascending ? v >= z[i - 1] - tol : v <= z[i - 1] + tol;
            return true;
        }
        // tail
        if (!(prev == k_count || prev == tail) || v < c.back() - tol)
            return false;
        return prev != tail || v >= z[i - 1] - tol;
    };

    constexpr int kUnreached = -1;
    std::vector<std::vector<int>> score(n, std::vector<int>(states, kUnreached));
    std::vector<std::vector<std::size_t>> from(n, std::vector<std::size_t>(states, states));
    for (std::size_t s = 0; s < states; ++s)
        if (allowed(states, s, 0))
            score[0][s] = is_bit(s) ? 1 : 0;
    for (std::size_t i = 1; i < n; ++i)
        for (std::size_t p = 0; p < states; ++p) {
            if (score[i - 1][p] == kUnreached)
                continue;
            for (std::size_t s = 0; s < states; ++s) {
                if (!allowed(p, s, i))
                    continue;
                const int cand = score[i - 1][p] + (is_bit(s) ? 1 : 0);
                if (cand > score[i][s]) {
                    score[i][s] = cand;
                    from[i][s] = p;
                }
            }
        }

    std::size_t best = states;
    for (std::size_t s : {k_count, tail})
        if (score[n - 1][s] != kUnreached && (best == states || score[n - 1][s] > score[n - 1][best]))
            best = s;
    if (best == states)
        return std::nullopt;

    std::string word(n, 'X');
    for (std::size_t i = n; i-- > 0;) {
        if (is_bit(best))
            word[i] = best % 2 == 1 ? '0' : '1';
        best = from[i][best];
    }
    return CellularString(word);
}

FiberMembership fiber_membership(std::span<const double> z, const PersistenceDiagram& p)
{
    FiberMembership out;
    if (sublevel_diagram(z) == p) {
        out.member = true;
        out.component = collapsed_critical_values(z);
    }
    return out;
}

std::uint64_t chiral_merge_tree_count(const PersistenceDiagram& p)
{
    if (p.empty())
        return 0;
    std::uint64_t count = std::uint64_t{1} << (p.size() - 1);
    for (std::size_t j = 0; j < p.size(); ++j) {
        if (p[j].death.is_infinite())
            continue;
        std::uint64_t containing = 0;
        for (std::size_t i = 0; i < p.size(); ++i)
            if (i != j && p[i].birth <= p[j].birth && p[i].death >= p[j].death)
                ++containing;
        count *= containing;
    }
    return count;
}

ComponentEnumeration enumerate_components(const PersistenceDiagram& p)
{
    if (p.infinite_count() != 1)
        throw InvalidDiagram("diagram must contain exactly one point with infinite death");

    std::vector<double> births, deaths;
    for (const auto& x : p) {
        births.push_back(x.birth);
        if (x.death.is_finite())
            deaths.push_back(x.death.value());
    }
    const std::size_t k_count = 2 * births.size() - 1;

    ComponentEnumeration out;
    out.diagram = p;
    std::vector<double> seq(k_count);
    std::vector<bool> used_birth(births.size(), false), used_death(deaths.size(), false);

    std::function<void(std::size_t)> fill = [&](std::size_t pos) {
        if (pos == k_count) {
            if (sublevel_diagram(seq) == p)
                out.components.push_back({seq, Parity::Pattern010});
            return;
        }
        const bool minimum = pos % 2 == 0;
        auto& pool = minimum ? births : deaths;
        auto& used = minimum ? used_birth : used_death;
        for (std::size_t i = 0; i < pool.size(); ++i) {
            if (used[i])
                continue;
            const double v = pool[i];
            if (pos > 0 && (minimum ? !(v < seq[pos - 1]) : !(v > seq[pos - 1])))
                continue;
            used[i] = true;
            seq[pos] = v;
            fill(pos + 1);
            used[i] = false;
        }
    };
    fill(0);

    std::stable_sort(out.components.begin(), out.components.end(),
                     [](const CriticalValueSequence& a, const CriticalValueSequence& b) { return a.values < b.values; });
    out.enumerated_count = out.components.size();
    out.formula_count = chiral_merge_tree_count(p);
    out.formula_agrees = out.formula_count == out.enumerated_count;
    return out;
}

ComponentGeometry::ComponentGeometry(CriticalValueSequence cv, std::size_t n, double slack)
    : cv_(std::move(cv)), poset_(enumerate_strings(n, checked_m(cv_, n))), cap_(default_cap(cv_, slack))
{
    for (std::size_t idx : poset_.maximal_elements())
        maximal_polytopes_.push_back(polytope_of(poset_[idx], cv_));
}

DifferenceSystem ComponentGeometry::truncated_system(const CellularString& s) const
{
    return polytope_system(polytope_of(s, cv_), cv_, cap_);
}

bool ComponentGeometry::contains(std::span<const double> z, double tol) const
{
    if (z.size() != n())
        return false;
    return std::any_of(maximal_polytopes_.begin(), maximal_polytopes_.end(),
                       [&](const auto& blocks) { return polytope_contains(blocks, cv_, z, tol); });
}

double ComponentGeometry::distance(std::span<const double> z) const
{
    if (z.size() != n())
        throw InvalidInput("vector length " + std::to_string(z.size()) + " does not match N = " + std::to_string(n()));
    double best = kInf;
    for (const auto& blocks : maximal_polytopes_)
        best = std::min(best, sup_distance_to_polytope(z, blocks, cv_));
    return best;
}

std::vector<SampleVector> ComponentGeometry::sample(std::size_t count, std::uint64_t seed) const
{
    return sample_component(cv_, n(), count, cap_, seed);
}

std::vector<SampleVector> sample_component(const CriticalValueSequence& cv, std::size_t n, std::size_t count,
                                           double cap, std::uint64_t seed)
{
    if (!(cap > 0) || !std::isfinite(cap))
        throw InvalidInput("cap must be a positive finite number");
    const std::size_t m = checked_m(cv, n);
    const auto poset = enumerate_strings(n, m);
    const auto maximal = poset.maximal_elements();

    std::vector<std::vector<BlockConstraint>> polytopes;
    polytopes.reserve(maximal.size());
    for (std::size_t idx : maximal)
        polytopes.push_back(polytope_of(poset[idx], cv));

    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, polytopes.size() - 1);
    std::vector<SampleVector> out;
    out.reserve(count);
    for (std::size_t t = 0; t < count; ++t) {
        const auto& blocks = polytopes[pick(rng)];
        SampleVector z(n);
        for (const auto& b : blocks) {
            const auto view = chain_view(b, cv, cap);
            auto first = z.begin() + static_cast<std::ptrdiff_t>(b.offset);
            auto last = first + static_cast<std::ptrdiff_t>(b.length);
            if (b.kind == ConstraintKind::Fixed) {
                std::fill(first, last, view.start);
                continue;
            }
            std::uniform_real_distribution<double> u(std::min(view.start, view.end), std::max(view.start, view.end));
            for (auto it = first; it != last; ++it)
                *it = u(rng);
            if (view.ascending)
                std::sort(first, last);
            else
                std::sort(first, last, std::greater<>());
        }
        out.push_back(std::move(z));
    }
    return out;
}

double sup_distance_to_polytope(std::span<const double> z, std::span<const BlockConstraint> blocks,
                                const CriticalValueSequence& cv)
{
    double dist = 0.0;
    std::vector<double> y;
    for (const auto& b : blocks) {
        const auto view = chain_view(b, cv, std::nullopt);
        const auto seg = z.subspan(b.offset, b.length);
        if (b.kind == ConstraintKind::Fixed) {
            for (double v : seg)
                dist = std::max(dist, std::abs(v - view.start));
            continue;
        }
        y.assign(seg.begin(), seg.end());
        double lo = view.start, hi = view.end;
        if (!view.ascending) {
            for (double& v : y)
                v = -v;
            lo = -view.start;
            hi = -view.end;
        }
        dist = std::max(dist, monotone_box_distance(y, lo, hi));
    }
    return dist;
}

double sup_distance_to_component(std::span<const double> z, const CriticalValueSequence& cv)
{
    validate_sample(z);
    return ComponentGeometry(cv, z.size()).distance(z);
}

std::optional<NonconvexityWitness> nonconvexity_search(const CriticalValueSequence& cv, std::size_t n,
                                                       std::size_t trials, std::uint64_t seed)
{
    const auto fiber = sublevel_diagram(cv.values);
    const auto samples = sample_component(cv, n, 2 * trials, default_cap(cv), seed);
    std::optional<NonconvexityWitness> best;
    for (std::size_t t = 0; t < trials; ++t) {
        const auto& v = samples[2 * t];
        const auto& w = samples[2 * t + 1];
        SampleVector mid(n);
        for (std::size_t i = 0; i < n; ++i)
            mid[i] = (v[i] + w[i]) / 2;
        auto dgm = sublevel_diagram(mid);
        const auto d = bottleneck_distance(dgm, fiber);
        const double dist = d.as_double();
        if (dist > 0 && (!best || dist > best->distance))
            best = NonconvexityWitness{v, w, mid, fiber, std::move(dgm), dist};
    }
    return best;
}

} // namespace pfiber
