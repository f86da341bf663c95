// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include "pfiber/cellular_string.hpp"
#include "pfiber/dynamics.hpp"
#include "pfiber/fiber.hpp"
#include "pfiber/persistence.hpp"
#include "pfiber/poset_topology.hpp"

#include "oracles.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

using namespace pfiber;

namespace {

const ExtendedReal kInfinite = ExtendedReal::infinite();

struct Verdict {
    bool pass = false;
    std::string detail;
};

PersistenceDiagram q_diagram()
{
    return PersistenceDiagram({{1, kInfinite}, {2, 3.5}, {3, 4.5}});
}

const SampleVector kZHat{3, 4.5, 1, 3.5, 2};

CriticalValueSequence cv010(std::vector<double> v)
{
    return {std::move(v), Parity::Pattern010};
}

double sup_norm(std::span<const double> a, std::span<const double> b)
{
    double m = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
        m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

template <class... Args>
std::string cat(const Args&... args)
{
    std::ostringstream s;
    (s << ... << args);
    return s.str();
}

std::vector<std::string> words(const StringPoset& p)
{
    std::vector<std::string> out;
    for (const auto& s : p.elements())
        out.push_back(s.word());
    return out;
}

Verdict worked_example()
{
    const SampleVector z{1.5, -0.9, 1.1, 2.1, 1.4};
    const auto cv = critical_value_sequence(z);
    const auto d = sublevel_diagram(z);
    const bool ok = cv.values == std::vector<double>{-0.9, 2.1, 1.4} && cv.parity == Parity::Pattern010 &&
                    d == PersistenceDiagram({{-0.9, kInfinite}, {1.4, 2.1}});
    return {ok, "cv=(-0.9,2.1,1.4), dgm={(-0.9,inf),(1.4,2.1)}"};
}

Verdict string_poset_five_two()
{
    const std::set<std::string> expected{
        "00010", "00100", "0010X", "00110", "001X0", "00X10", "01000", "0100X", "010XX", "01100",
        "0110X", "01110", "011X0", "01X00", "01X0X", "01XX0", "0X100", "0X10X", "0X110", "0X1X0",
        "0XX10", "X0010", "X0100", "X010X", "X0110", "X01X0", "X0X10", "XX010"};
    const auto p = enumerate_strings(5, 2);
    const auto w = words(p);
    const std::set<std::string> got(w.begin(), w.end());
    std::size_t maximal = 0, top = 0, zero = 0;
    for (std::size_t i : p.maximal_elements())
        maximal += p[i].dimension() == 2;
    for (const auto& s : p.elements()) {
        top += s.dimension() == 2;
        zero += s.dimension() == 0;
    }
    const bool ok = w.size() == 28 && got == expected && maximal == 10 && p.maximal_elements().size() == 10 &&
                    top == 10 && zero == 6;
    return {ok, cat(w.size(), " strings, ", maximal, " maximal, ", zero, " zero-dimensional")};
}

Verdict extrema_sweep()
{
    std::mt19937_64 rng(2024);
    std::uniform_int_distribution<std::size_t> len(2, 12);
    std::size_t failures = 0;
    for (int trial = 0; trial < 10000; ++trial) {
        const auto z = oracle::typical_vector(rng, len(rng));
        const auto d = sublevel_diagram(z);
        const auto cv = critical_value_sequence(z);
        std::vector<double> births, deaths;
        for (const auto& x : d) {
            births.push_back(x.birth);
            if (!x.death.is_infinite())
                deaths.push_back(x.death.value());
        }
        std::sort(births.begin(), births.end());
        std::sort(deaths.begin(), deaths.end());
        auto minima = oracle::local_minima(z);
        auto maxima = oracle::interior_local_maxima(z);
        std::sort(minima.begin(), minima.end());
        std::sort(maxima.begin(), maxima.end());
        const bool ok = cv.size() == 2 * d.size() - 1 && births == minima && deaths == maxima &&
                        d == oracle::interval_sweep_diagram(z) && extrema_pairing_check(z).passed();
        failures += !ok;
    }
    return {failures == 0, cat("10000 vectors, N in [2,12], ", failures, " failures")};
}

// Euler characteristic of the order complex from chain counts:
// g(v) = 1 - sum_{u < v} g(u), chi = sum_v g(v).
long long chain_euler(const std::vector<std::string>& w)
{
    std::vector<std::size_t> order(w.size());
    for (std::size_t i = 0; i < w.size(); ++i)
        order[i] = i;
    auto dim = [&](std::size_t i) { return std::count(w[i].begin(), w[i].end(), 'X'); };
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return dim(a) < dim(b); });
    std::vector<long long> g(w.size(), 0);
    long long chi = 0;
    for (std::size_t i = 0; i < order.size(); ++i) {
        long long below = 0;
        for (std::size_t j = 0; j < i; ++j)
            if (oracle::word_leq(w[order[j]], w[order[i]]) && w[order[j]] != w[order[i]])
                below += g[order[j]];
        g[order[i]] = 1 - below;
        chi += g[order[i]];
    }
    return chi;
}

Verdict order_complex_acyclic()
{
    std::size_t cases = 0, failures = 0;
    for (std::size_t n = 1; n <= 8; ++n)
        for (std::size_t m = 1; 2 * m - 1 <= n; ++m) {
            ++cases;
            const auto p = enumerate_strings(n, m);
            const auto h = gf2_homology(order_complex(p));
            const bool zero = std::all_of(h.betti.begin(), h.betti.end(), [](std::size_t b) { return b == 0; });
            if (!zero || h.euler != 1 || chain_euler(oracle::brute_force_strings(n, m)) != 1)
                ++failures;
        }
    return {failures == 0, cat(cases, " posets with N <= 8, ", failures, " not acyclic or chi != 1")};
}

Verdict polytope_inclusion()
{
    std::size_t pairs = 0, order = 0, meet = 0;
    for (std::size_t n = 1; n <= 6; ++n)
        for (std::size_t m = 1; 2 * m - 1 <= n; ++m) {
            const auto a = oracle::polytope_inclusion_audit(n, m);
            pairs += a.pairs;
            order += a.order_violations;
            meet += a.meet_violations;
        }
    return {order == 0 && meet == 0,
            cat(pairs, " ordered pairs, ", order, " order violations, ", meet, " meet violations")};
}

Verdict contraction_machinery()
{
    std::size_t strings = 0, failures = 0;
    for (std::size_t n = 1; n <= 8; ++n)
        for (std::size_t m = 1; 2 * m - 1 <= n; ++m) {
            const auto p = enumerate_strings(n, m);
            const auto w = words(p);
            std::vector<CellularString> f;
            for (const auto& s : p.elements())
                f.push_back(F_map(s));
            for (std::size_t a = 0; a < p.size(); ++a) {
                ++strings;
                // with L = 0 the single string is its own tail
                const bool degenerate = n == p.critical_count();
                auto in_tail = [&](const std::string& s) { return degenerate || s[0] == 'X'; };
                bool ok = oracle::is_cellular(f[a].word(), m);
                if (in_tail(w[a]))
                    ok = ok && f[a].word() == w[a];
                for (std::size_t b = 0; b < p.size() && ok; ++b)
                    if (oracle::word_leq(w[a], w[b]))
                        ok = oracle::word_leq(f[a].word(), f[b].word());
                auto t = p[a];
                for (std::size_t k = 0; k < p.critical_count(); ++k)
                    t = F_map(t);
                ok = ok && in_tail(t.word());
                const auto h = homotopy_witness(p[a]);
                const auto& x = h.witness.word();
                const bool related = oracle::word_leq(w[a], f[a].word()) || oracle::word_leq(f[a].word(), w[a]) ||
                                     (oracle::word_leq(x, w[a]) && oracle::word_leq(x, f[a].word())) ||
                                     (oracle::word_leq(w[a], x) && oracle::word_leq(f[a].word(), x));
                ok = ok && oracle::is_cellular(x, m) && related;
                failures += !ok;
            }
        }
    return {failures == 0, cat(strings, " strings with N <= 8, ", failures, " failures")};
}

Verdict fiber_roundtrip()
{
    const auto q = q_diagram();
    const auto comps = enumerate_components(q).components;
    std::size_t total = 0, bad = 0;
    double worst = 0;
    for (std::size_t n : {5u, 7u})
        for (std::size_t i = 0; i < comps.size(); ++i)
            for (const auto& z : sample_component(comps[i], n, 1000, default_cap(comps[i]), 100 * n + i)) {
                ++total;
                const double b = bottleneck_distance(sublevel_diagram(z), q).value();
                worst = std::max(worst, b);
                bad += !(sublevel_diagram(z) == q) || b > 1e-12;
            }
    return {comps.size() == 4 && total == 8000 && bad == 0,
            cat(total, " samples over ", comps.size(), " components, ", bad, " off the fiber, max bottleneck ", worst)};
}

Verdict component_count()
{
    const auto e = enumerate_components(q_diagram());
    std::vector<std::vector<double>> got;
    for (const auto& cv : e.components)
        got.push_back(cv.values);
    std::sort(got.begin(), got.end());
    const bool has_zhat = std::find(got.begin(), got.end(), kZHat) != got.end();
    const bool ok = got.size() == 4 && has_zhat && got == oracle::interleaving_components(q_diagram()) &&
                    e.formula_count == 4 && e.formula_agrees;
    return {ok, cat(got.size(), " labels, formula ", e.formula_count, has_zhat ? ", contains (3,4.5,1,3.5,2)" : "")};
}

Verdict nonconvexity()
{
    const auto w = nonconvexity_search(cv010({3, 4.5, 1, 3.5, 2}), 7, 400, 1);
    if (!w)
        return {false, "no witness found"};
    SampleVector mid(w->v.size());
    for (std::size_t i = 0; i < mid.size(); ++i)
        mid[i] = (w->v[i] + w->w[i]) / 2;
    const double d = bottleneck_distance(sublevel_diagram(mid), q_diagram()).value();
    const bool ok = sublevel_diagram(w->v) == q_diagram() && sublevel_diagram(w->w) == q_diagram() && d > 0.1;
    return {ok, cat("midpoint diagram at bottleneck distance ", d)};
}

Verdict stability()
{
    std::mt19937_64 rng(77);
    std::uniform_int_distribution<std::size_t> len(1, 12);
    std::uniform_real_distribution<double> scale(0.0, 2.0);
    std::size_t violations = 0;
    for (int trial = 0; trial < 10000; ++trial) {
        const auto z = oracle::typical_vector(rng, len(rng));
        const double s = scale(rng);
        std::normal_distribution<double> noise(0.0, s);
        auto w = z;
        for (auto& x : w)
            x += noise(rng);
        violations += bottleneck_distance(sublevel_diagram(z), sublevel_diagram(w)).value() > sup_norm(z, w) + 1e-12;
    }
    std::uniform_int_distribution<std::size_t> fin(0, 3), inf(0, 2);
    std::size_t mismatches = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t k = inf(rng);
        const auto p = oracle::random_diagram(rng, fin(rng), k);
        const auto q = oracle::random_diagram(rng, fin(rng), trial % 10 == 0 ? inf(rng) : k);
        mismatches += !(bottleneck_distance(p, q) == oracle::exhaustive_bottleneck(p, q));
    }
    return {violations == 0 && mismatches == 0,
            cat("10000 pairs, ", violations, " stability violations; 1000 diagram pairs, ", mismatches,
                " mismatches with exhaustive matching")};
}

Verdict margin()
{
    const auto m = sparsity_margin(q_diagram());
    return {m.is_sparse && m.mu_max == ExtendedReal(0.25), cat("mu_max = ", m.mu_max.value())};
}

Verdict fixed_point_demo()
{
    const auto field = VectorField::linear(kZHat);
    const double mu = 0.25;
    const auto spec = make_neighborhood(q_diagram(), mu);
    // radius mu/2 keeps each diagram point within L1 distance mu
    const auto seeds = seeds_in_ball(kZHat, mu / 2, 100, 4);
    const auto r = invariance_monitor(field, q_diagram(), mu, seeds, 1e-3, 50.0);
    bool seeds_ok = r.seeds.size() == 100 && r.started_count() == 100 && r.all_invariant();
    for (const auto& s : r.seeds)
        seeds_ok = seeds_ok && !s.error && s.proof_chain_consistent;

    const auto fp = fixed_point_search(field, seeds.front(), 1e-10);
    const bool fp_ok = fp.point && sup_norm(*fp.point, kZHat) < 1e-6 &&
                       np_membership(sublevel_diagram(*fp.point), spec) &&
                       fiber_membership(kZHat, q_diagram()).member;

    const PersistenceDiagram origin({{0, kInfinite}});
    const SampleVector z0{0, 2.5, 3};
    const auto obs = integrate(VectorField::periodic3(), z0, 1e-3, 4 * std::numbers::pi);
    double displacement = 0;
    bool constant = true;
    for (std::size_t i = 0; i < obs.states.size(); ++i) {
        constant = constant && obs.diagrams[i] == origin;
        displacement = std::max(displacement, sup_norm(obs.states[i], z0));
    }
    const auto pr = invariance_monitor(VectorField::periodic3(), origin, 1.0, {z0}, 1e-3, 20.0);
    const bool periodic_ok = constant && displacement > 0.5 && pr.all_invariant() &&
                             pr.seeds.front().max_displacement > 0.5;

    return {seeds_ok && fp_ok && periodic_ok,
            cat(r.started_count(), "/100 seeds started in N_Q, invariant=", r.all_invariant(), "; fixed point error ",
                fp.point ? sup_norm(*fp.point, kZHat) : -1.0, "; periodic orbit displacement ", displacement,
                " with constant diagram=", constant)};
}

Verdict integrator_order()
{
    using LD = long double;
    const SampleVector target{3, 4.5, 1, 3.5, 2};
    const std::vector<LD> z0{0, 1, -2, 7, 4};
    auto error_at = [&](LD dt) {
        const auto steps = static_cast<std::size_t>(std::llround(1.0L / dt));
        const auto z = integrate_final<LD>(VectorField::linear(target), z0, dt, steps);
        LD e = 0;
        for (std::size_t i = 0; i < z.size(); ++i)
            e = std::max(e, std::abs(z[i] - (target[i] + std::exp(-1.0L) * (z0[i] - target[i]))));
        return e;
    };
    const LD e1 = error_at(0.1L), e2 = error_at(0.01L), e3 = error_at(0.001L);
    const double o1 = static_cast<double>(std::log10(e1 / e2));
    const double o2 = static_cast<double>(std::log10(e2 / e3));
    return {o1 >= 3.8 && o2 >= 3.8, cat("observed orders ", o1, ", ", o2)};
}

} // namespace

int main()
{
    const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria{
        {"worked example", worked_example},
        {"string poset Str(5,2)", string_poset_five_two},
        {"extrema sweep", extrema_sweep},
        {"order complex acyclic", order_complex_acyclic},
        {"polytope inclusion", polytope_inclusion},
        {"contraction machinery", contraction_machinery},
        {"fiber roundtrip", fiber_roundtrip},
        {"component count", component_count},
        {"nonconvexity", nonconvexity},
        {"stability", stability},
        {"sparsity margin", margin},
        {"fixed point demo", fixed_point_demo},
        {"integrator order", integrator_order},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto start = std::chrono::steady_clock::now();
        Verdict v;
        try {
            v = criteria[i].second();
        } catch (const std::exception& e) {
            v = {false, cat("exception: ", e.what())};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::cout << (v.pass ? "PASS" : "FAIL") << " " << (i + 1) << " " << criteria[i].first << ": " << v.detail
                  << " (" << secs << "s)" << std::endl;
        failed += !v.pass;
    }
    return failed == 0 ? 0 : 1;
}
