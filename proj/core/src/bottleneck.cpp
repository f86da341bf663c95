#include "pfiber/persistence.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

namespace pfiber {
namespace {

struct Edge {
    std::size_t left;
    std::size_t right;
    double cost;
};

// Hopcroft-Karp over a fixed edge subset; true when a perfect matching exists.
class BipartiteMatcher {
public:
    BipartiteMatcher(std::size_t n, const std::vector<Edge>& edges, double threshold)
        : n_(n), adj_(n), match_left_(n, kNone), match_right_(n, kNone), dist_(n)
    {
        for (const auto& e : edges)
            if (e.cost <= threshold)
                adj_[e.left].push_back(e.right);
    }

    bool perfect()
    {
        std::size_t matched = 0;
        while (bfs())
            for (std::size_t u = 0; u < n_; ++u)
                if (match_left_[u] == kNone && dfs(u))
                    ++matched;
        return matched == n_;
    }

private:
    static constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

    bool bfs()
    {
        std::queue<std::size_t> q;
        bool found = false;
        for (std::size_t u = 0; u < n_; ++u) {
            if (match_left_[u] == kNone) {
                dist_[u] = 0;
                q.push(u);
            } else {
                dist_[u] = kNone;
            }
        }
        while (!q.empty()) {
            const std::size_t u = q.front();
            q.pop();
            for (std::size_t v : adj_[u]) {
                const std::size_t w = match_right_[v];
                if (w == kNone)
                    found = true;
                else if (dist_[w] == kNone) {
                    dist_[w] = dist_[u] + 1;
                    q.push(w);
                }
            }
        }
        return found;
    }

    bool dfs(std::size_t u)
    {
        for (std::size_t v : adj_[u]) {
            const std::size_t w = match_right_[v];
            if (w == kNone || (dist_[w] == dist_[u] + 1 && dfs(w))) {
                match_left_[u] = v;
                match_right_[v] = u;
                return true;
            }
        }
        dist_[u] = kNone;
        return false;
    }

    std::size_t n_;
    std::vector<std::vector<std::size_t>> adj_;
    std::vector<std::size_t> match_left_;
    std::vector<std::size_t> match_right_;
    std::vector<std::size_t> dist_;
};

} // namespace

ExtendedReal bottleneck_distance(const PersistenceDiagram& p, const PersistenceDiagram& q)
{
    std::vector<PersistencePoint> pf, qf, pi, qi;
    for (const auto& x : p)
        (x.death.is_infinite() ? pi : pf).push_back(x);
    for (const auto& x : q)
        (x.death.is_infinite() ? qi : qf).push_back(x);
    if (pi.size() != qi.size())
        return ExtendedReal::infinite();

    const std::size_t a = pf.size(), b = qf.size(), c = pi.size();
    const std::size_t n = a + b + c;
    if (n == 0)
        return 0.0;

    // Left: pf | diagonal copies of qf | pi.  Right: qf | diagonal copies of pf | qi.
    std::vector<Edge> edges;
    edges.reserve(a * b + a + b + a * b + c * c);
    for (std::size_t i = 0; i < a; ++i) {
        for (std::size_t j = 0; j < b; ++j) {
            const double cost = std::max(std::abs(pf[i].birth - qf[j].birth),
                                         std::abs(pf[i].death.value() - qf[j].death.value()));
            edges.push_back({i, j, cost});
        }
        edges.push_back({i, b + i, (pf[i].death.value() - pf[i].birth) / 2});
    }
    for (std::size_t j = 0; j < b; ++j) {
        edges.push_back({a + j, j, (qf[j].death.value() - qf[j].birth) / 2});
        for (std::size_t i = 0; i < a; ++i)
            edges.push_back({a + j, b + i, 0.0});
    }
    for (std::size_t k = 0; k < c; ++k)
        for (std::size_t l = 0; l < c; ++l)
            edges.push_back({a + b + k, a + b + l, std::abs(pi[k].birth - qi[l].birth)});

    std::vector<double> candidates;
    candidates.reserve(edges.size() + 1);
    candidates.push_back(0.0);
    for (const auto& e : edges)
        candidates.push_back(e.cost);
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

    std::size_t lo = 0, hi = candidates.size() - 1;
    while (lo < hi) {
        const std::size_t mid = lo + (hi - lo) / 2;
        if (BipartiteMatcher(n, edges, candidates[mid]).perfect())
            hi = mid;
        else
            lo = mid + 1;
    }
    return candidates[lo];
}

} // namespace pfiber
