#include "oracles.hpp"

#include "pfiber/cellular_string.hpp"
#include "pfiber/fiber.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <set>
#include <utility>

namespace oracle {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Run {
    char symbol;
    std::size_t offset;
    std::size_t length;
};

std::vector<Run> runs_of(const std::string& w)
{
    std::vector<Run> out;
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (!out.empty() && out.back().symbol == w[i])
            ++out.back().length;
        else
            out.push_back({w[i], i, 1});
    }
    return out;
}

// x_u - x_v <= w with node 0 fixed at zero and coordinate i at node i + 1.
struct Edge {
    std::size_t u, v;
    double w;
};

std::vector<Edge> polytope_edges(const std::string& w, const std::vector<double>& cv, std::optional<double> cap)
{
    std::vector<Edge> e;
    auto lower = [&](std::size_t i, double c) { e.push_back({0, i + 1, -c}); };
    auto upper = [&](std::size_t i, double c) { e.push_back({i + 1, 0, c}); };
    auto le = [&](std::size_t a, std::size_t b) { e.push_back({a + 1, b + 1, 0.0}); };

    const auto runs = runs_of(w);
    std::size_t bits_seen = 0;
    for (std::size_t r = 0; r < runs.size(); ++r) {
        const auto& run = runs[r];
        const std::size_t a = run.offset, b = run.offset + run.length - 1;
        if (run.symbol != 'X') {
            for (std::size_t i = a; i <= b; ++i) {
                lower(i, cv[bits_seen]);
                upper(i, cv[bits_seen]);
            }
            ++bits_seen;
            continue;
        }
        if (bits_seen == 0) {
            for (std::size_t i = a; i < b; ++i)
                le(i + 1, i);
            lower(b, cv.front());
            if (cap)
                upper(a, cv.front() + *cap);
        } else if (r + 1 == runs.size()) {
            for (std::size_t i = a; i < b; ++i)
                le(i, i + 1);
            lower(a, cv.back());
            if (cap)
                upper(b, cv.back() + *cap);
        } else {
            const double from = cv[bits_seen - 1], to = cv[bits_seen];
            if (from < to) {
                for (std::size_t i = a; i < b; ++i)
                    le(i, i + 1);
                lower(a, from);
                upper(b, to);
            } else {
                for (std::size_t i = a; i < b; ++i)
                    le(i + 1, i);
                upper(a, from);
                lower(b, to);
            }
        }
    }
    return e;
}

bool feasible(std::size_t nodes, const std::vector<Edge>& edges)
{
    std::vector<double> dist(nodes, 0.0);
    for (std::size_t round = 0; round <= nodes; ++round) {
        bool changed = false;
        for (const auto& e : edges)
            if (dist[e.v] + e.w < dist[e.u] - 1e-15) {
                dist[e.u] = dist[e.v] + e.w;
                changed = true;
            }
        if (!changed)
            return true;
    }
    return false;
}

double l1(const pfiber::PersistencePoint& a, const pfiber::PersistencePoint& b)
{
    double s = std::abs(a.birth - b.birth);
    if (a.death.is_finite())
        s += std::abs(a.death.value() - b.death.value());
    return s;
}

} // namespace

PersistenceDiagram interval_sweep_diagram(const std::vector<double>& z)
{
    const std::size_t n = z.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return z[a] < z[b] || (z[a] == z[b] && a < b); });
    std::vector<std::size_t> rank(n);
    for (std::size_t r = 0; r < n; ++r)
        rank[order[r]] = r;

    // owner[i] = index of the vertex that gave birth to i's component.
    std::vector<long> owner(n, -1);
    std::vector<pfiber::PersistencePoint> points;
    for (std::size_t idx : order) {
        const long left = idx > 0 ? owner[idx - 1] : -1;
        const long right = idx + 1 < n ? owner[idx + 1] : -1;
        if (left < 0 && right < 0) {
            owner[idx] = static_cast<long>(idx);
            continue;
        }
        if (left < 0 || right < 0 || left == right) {
            owner[idx] = left < 0 ? right : left;
            continue;
        }
        const long elder = rank[static_cast<std::size_t>(left)] < rank[static_cast<std::size_t>(right)] ? left : right;
        const long younger = elder == left ? right : left;
        if (z[static_cast<std::size_t>(younger)] != z[idx])
            points.push_back({z[static_cast<std::size_t>(younger)], z[idx]});
        for (auto& o : owner)
            if (o == younger)
                o = elder;
        owner[idx] = elder;
    }
    if (n > 0)
        points.push_back({z[order.front()], ExtendedReal::infinite()});
    return PersistenceDiagram(std::move(points));
}

std::vector<double> local_minima(const std::vector<double>& z)
{
    std::vector<double> out;
    for (std::size_t i = 0; i < z.size(); ++i) {
        const bool l = i == 0 || z[i] < z[i - 1];
        const bool r = i + 1 == z.size() || z[i] < z[i + 1];
        if (l && r)
            out.push_back(z[i]);
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<double> interior_local_maxima(const std::vector<double>& z)
{
    std::vector<double> out;
    for (std::size_t i = 1; i + 1 < z.size(); ++i)
        if (z[i] > z[i - 1] && z[i] > z[i + 1])
            out.push_back(z[i]);
    std::sort(out.begin(), out.end());
    return out;
}

ExtendedReal exhaustive_bottleneck(const PersistenceDiagram& p, const PersistenceDiagram& q)
{
    std::vector<double> pi, qi;
    std::vector<std::pair<double, double>> pf, qf;
    for (const auto& x : p) {
        if (x.death.is_infinite())
            pi.push_back(x.birth);
        else
            pf.emplace_back(x.birth, x.death.value());
    }
    for (const auto& x : q) {
        if (x.death.is_infinite())
            qi.push_back(x.birth);
        else
            qf.emplace_back(x.birth, x.death.value());
    }
    if (pi.size() != qi.size())
        return ExtendedReal::infinite();

    double inf_cost = kInf;
    std::vector<std::size_t> perm(qi.size());
    std::iota(perm.begin(), perm.end(), 0);
    do {
        double c = 0.0;
        for (std::size_t i = 0; i < pi.size(); ++i)
            c = std::max(c, std::abs(pi[i] - qi[perm[i]]));
        inf_cost = std::min(inf_cost, c);
    } while (std::next_permutation(perm.begin(), perm.end()));

    // Left slots: pf then |qf| diagonal copies. Right slots: qf then |pf|.
    const std::size_t a = pf.size(), b = qf.size(), total = a + b;
    auto cost = [&](std::size_t l, std::size_t r) {
        const bool ld = l >= a, rd = r >= b;
        if (ld && rd)
            return 0.0;
        if (ld)
            return (qf[r].second - qf[r].first) / 2;
        if (rd)
            return (pf[l].second - pf[l].first) / 2;
        return std::max(std::abs(pf[l].first - qf[r].first), std::abs(pf[l].second - qf[r].second));
    };
    double fin_cost = total == 0 ? 0.0 : kInf;
    std::vector<std::size_t> right(total);
    std::iota(right.begin(), right.end(), 0);
    if (total > 0)
        do {
            double c = 0.0;
            for (std::size_t l = 0; l < total; ++l)
                c = std::max(c, cost(l, right[l]));
            fin_cost = std::min(fin_cost, c);
        } while (std::next_permutation(right.begin(), right.end()));
    return std::max(inf_cost, fin_cost);
}

bool is_cellular(const std::string& w, std::size_t m)
{
    if (w.empty())
        return false;
    for (char c : w)
        if (c != '0' && c != '1' && c != 'X')
            return false;
    const auto runs = runs_of(w);
    if (runs.front().symbol == '1' || runs.back().symbol == '1')
        return false;
    for (std::size_t r = 1; r + 1 < runs.size(); ++r)
        if (runs[r].symbol == 'X' && runs[r - 1].symbol == runs[r + 1].symbol)
            return false;
    std::string bits;
    for (const auto& run : runs)
        if (run.symbol != 'X')
            bits += run.symbol;
    if (std::count(bits.begin(), bits.end(), '0') != static_cast<long>(m))
        return false;
    if (bits.size() != 2 * m - 1)
        return false;
    for (std::size_t i = 0; i < bits.size(); ++i)
        if (bits[i] != (i % 2 == 0 ? '0' : '1'))
            return false;
    return true;
}

std::vector<std::string> brute_force_strings(std::size_t n, std::size_t m)
{
    static constexpr char kSymbols[] = {'0', '1', 'X'};
    std::vector<std::string> out;
    std::size_t total = 1;
    for (std::size_t i = 0; i < n; ++i)
        total *= 3;
    std::string w(n, '0');
    for (std::size_t code = 0; code < total; ++code) {
        std::size_t c = code;
        for (std::size_t i = n; i-- > 0;) {
            w[i] = kSymbols[c % 3];
            c /= 3;
        }
        if (is_cellular(w, m))
            out.push_back(w);
    }
    return out;
}

bool word_leq(const std::string& a, const std::string& b)
{
    if (a.size() != b.size())
        return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (b[i] != 'X' && b[i] != a[i])
            return false;
    return true;
}

bool in_truncated_polytope(const std::string& w, const std::vector<double>& cv, double cap,
                           const std::vector<double>& z, double tol)
{
    if (z.size() != w.size())
        return false;
    for (const auto& e : polytope_edges(w, cv, cap)) {
        const double xu = e.u == 0 ? 0.0 : z[e.u - 1];
        const double xv = e.v == 0 ? 0.0 : z[e.v - 1];
        if (xu - xv > e.w + tol)
            return false;
    }
    return true;
}

double bisection_distance(const std::string& w, const std::vector<double>& cv, const std::vector<double>& z,
                          double precision)
{
    const auto base = polytope_edges(w, cv, std::nullopt);
    auto ok = [&](double r) {
        auto edges = base;
        for (std::size_t i = 0; i < z.size(); ++i) {
            edges.push_back({i + 1, 0, z[i] + r});
            edges.push_back({0, i + 1, -(z[i] - r)});
        }
        return feasible(z.size() + 1, edges);
    };
    double scale = 1.0;
    for (double x : z)
        scale = std::max(scale, std::abs(x));
    for (double x : cv)
        scale = std::max(scale, std::abs(x));
    double lo = 0.0, hi = 4 * scale;
    if (ok(0.0))
        return 0.0;
    while (hi - lo > precision) {
        const double mid = (lo + hi) / 2;
        (ok(mid) ? hi : lo) = mid;
    }
    return hi;
}

std::vector<std::vector<double>> interleaving_components(const PersistenceDiagram& p)
{
    std::vector<double> births, deaths;
    for (const auto& x : p) {
        births.push_back(x.birth);
        if (x.death.is_finite())
            deaths.push_back(x.death.value());
    }
    std::sort(births.begin(), births.end());
    std::sort(deaths.begin(), deaths.end());
    std::set<std::vector<double>> found;
    do {
        auto d = deaths;
        do {
            std::vector<double> seq;
            for (std::size_t i = 0; i < births.size(); ++i) {
                seq.push_back(births[i]);
                if (i < d.size())
                    seq.push_back(d[i]);
            }
            bool alternating = true;
            for (std::size_t i = 1; i + 1 < seq.size(); i += 2)
                alternating = alternating && seq[i] > seq[i - 1] && seq[i] > seq[i + 1];
            if (alternating && interval_sweep_diagram(seq) == p)
                found.insert(seq);
        } while (std::next_permutation(d.begin(), d.end()));
    } while (std::next_permutation(births.begin(), births.end()));
    return {found.begin(), found.end()};
}

bool assignment_np_membership(const PersistenceDiagram& d, const PersistenceDiagram& p, double mu)
{
    double bmin = kInf, bmax = -kInf;
    for (const auto& x : p) {
        bmin = std::min(bmin, x.birth);
        bmax = std::max(bmax, x.birth);
    }
    auto in_box = [&](const pfiber::PersistencePoint& x, std::size_t m) {
        return x.death.is_infinite() == p[m].death.is_infinite() && l1(x, p[m]) <= mu;
    };
    auto in_strip = [&](const pfiber::PersistencePoint& x) {
        if (x.death.is_infinite())
            return false;
        const double pers = x.death.value() - x.birth;
        return x.birth >= bmin - mu && x.birth <= bmax + mu && pers >= 0 && pers <= mu;
    };

    std::vector<long> chosen(p.size(), -1);
    std::vector<bool> used(d.size(), false);
    auto check = [&]() {
        for (std::size_t m = 0; m < p.size(); ++m)
            for (std::size_t i = 0; i < d.size(); ++i)
                if (static_cast<long>(i) != chosen[m] && in_box(d[i], m))
                    return false;
        for (std::size_t i = 0; i < d.size(); ++i)
            if (!used[i] && !in_strip(d[i]))
                return false;
        return true;
    };
    auto search = [&](auto&& self, std::size_t m) -> bool {
        if (m == p.size())
            return check();
        for (std::size_t i = 0; i < d.size(); ++i) {
            if (used[i] || !in_box(d[i], m))
                continue;
            used[i] = true;
            chosen[m] = static_cast<long>(i);
            if (self(self, m + 1))
                return true;
            used[i] = false;
        }
        return false;
    };
    return search(search, 0);
}

std::vector<double> staircase_cv(std::size_t m)
{
    std::vector<double> cv;
    for (std::size_t i = 0; i < m; ++i) {
        cv.push_back(static_cast<double>(i));
        if (i + 1 < m)
            cv.push_back(static_cast<double>(m + i));
    }
    return cv;
}

InclusionAudit polytope_inclusion_audit(std::size_t n, std::size_t m)
{
    const auto cv_values = staircase_cv(m);
    const pfiber::CriticalValueSequence cv{cv_values, pfiber::Parity::Pattern010};
    const double cap = (*std::max_element(cv_values.begin(), cv_values.end()) -
                        *std::min_element(cv_values.begin(), cv_values.end())) +
                       1.0;

    std::set<double> grid_set(cv_values.begin(), cv_values.end());
    grid_set.insert(cv_values.front() + cap);
    grid_set.insert(cv_values.back() + cap);
    const std::vector<double> grid(grid_set.begin(), grid_set.end());
    std::size_t total = 1;
    for (std::size_t i = 0; i < n; ++i)
        total *= grid.size();

    const auto poset = pfiber::enumerate_strings(n, m);
    std::vector<std::vector<bool>> inside(poset.size(), std::vector<bool>(total));
    std::vector<double> z(n);
    for (std::size_t code = 0; code < total; ++code) {
        std::size_t c = code;
        for (std::size_t i = 0; i < n; ++i) {
            z[i] = grid[c % grid.size()];
            c /= grid.size();
        }
        for (std::size_t s = 0; s < poset.size(); ++s)
            inside[s][code] = in_truncated_polytope(poset[s].word(), cv_values, cap, z);
    }

    std::vector<pfiber::DifferenceSystem> systems;
    for (const auto& s : poset.elements())
        systems.push_back(pfiber::polytope_system(pfiber::polytope_of(s, cv), cv, cap));

    InclusionAudit audit;
    audit.grid_points = total;
    for (std::size_t a = 0; a < poset.size(); ++a)
        for (std::size_t b = 0; b < poset.size(); ++b) {
            ++audit.pairs;
            const bool leq = pfiber::string_leq(poset[a], poset[b]);
            bool grid_subset = true;
            for (std::size_t k = 0; k < total && grid_subset; ++k)
                grid_subset = !inside[a][k] || inside[b][k];
            if (leq != grid_subset || leq != systems[a].subset_of(systems[b]))
                ++audit.order_violations;

            const auto meet = pfiber::greatest_lower_bound(poset[a], poset[b]);
            const auto both = systems[a].intersect(systems[b]);
            bool ok = true;
            if (meet) {
                const std::size_t g = *poset.index_of(*meet);
                for (std::size_t k = 0; k < total && ok; ++k)
                    ok = inside[g][k] == (inside[a][k] && inside[b][k]);
                ok = ok && systems[g].subset_of(both) && both.subset_of(systems[g]);
            } else {
                for (std::size_t k = 0; k < total && ok; ++k)
                    ok = !(inside[a][k] && inside[b][k]);
                ok = ok && both.is_empty();
            }
            if (!ok)
                ++audit.meet_violations;
        }
    return audit;
}

std::vector<double> typical_vector(std::mt19937_64& rng, std::size_t n, double lo, double hi)
{
    std::uniform_real_distribution<double> u(lo, hi);
    std::set<double> seen;
    std::vector<double> out;
    while (out.size() < n) {
        const double x = u(rng);
        if (seen.insert(x).second)
            out.push_back(x);
    }
    return out;
}

PersistenceDiagram random_diagram(std::mt19937_64& rng, std::size_t finite, std::size_t infinite)
{
    std::uniform_real_distribution<double> b(0.0, 10.0);
    std::uniform_real_distribution<double> pers(0.01, 5.0);
    std::vector<pfiber::PersistencePoint> pts;
    for (std::size_t i = 0; i < finite; ++i) {
        const double x = b(rng);
        pts.push_back({x, x + pers(rng)});
    }
    for (std::size_t i = 0; i < infinite; ++i)
        pts.push_back({b(rng), ExtendedReal::infinite()});
    return PersistenceDiagram(std::move(pts));
}

} // namespace oracle
