#include "pfiber/poset_topology.hpp"

#include "pfiber/errors.hpp"

#include <algorithm>

namespace pfiber {

std::size_t SimplexHash::operator()(const Simplex& s) const noexcept
{
    std::size_t h = 0xcbf29ce484222325ULL;
    for (auto v : s) {
        h ^= v;
        h *= 0x100000001b3ULL;
    }
    return h;
}

SimplicialComplex::SimplicialComplex(std::size_t vertex_count) : vertex_count_(vertex_count) {}

void SimplicialComplex::add(Simplex simplex)
{
    if (simplex.empty())
        throw InvalidInput("simplices need at least one vertex");
    std::sort(simplex.begin(), simplex.end());
    if (std::adjacent_find(simplex.begin(), simplex.end()) != simplex.end())
        throw InvalidInput("simplex repeats a vertex");
    if (simplex.back() >= vertex_count_)
        throw InvalidInput("simplex vertex out of range");
    const std::size_t dim = simplex.size() - 1;
    if (by_dim_.size() <= dim) {
        by_dim_.resize(dim + 1);
        index_.resize(dim + 1);
    }
    if (index_[dim].contains(simplex))
        return;
    index_[dim].emplace(simplex, by_dim_[dim].size());
    by_dim_[dim].push_back(std::move(simplex));
}

void SimplicialComplex::add_closed(Simplex facet)
{
    std::sort(facet.begin(), facet.end());
    const std::size_t k = facet.size();
    if (k == 0 || k > 24)
        throw InvalidInput("facet size out of range");
    for (std::uint32_t mask = 1; mask < (1u << k); ++mask) {
        Simplex face;
        for (std::size_t i = 0; i < k; ++i)
            if (mask & (1u << i))
                face.push_back(facet[i]);
        add(std::move(face));
    }
}

std::vector<std::size_t> SimplicialComplex::counts() const
{
    std::vector<std::size_t> out;
    for (const auto& v : by_dim_)
        out.push_back(v.size());
    return out;
}

std::optional<std::size_t> SimplicialComplex::index_of(const Simplex& s) const
{
    if (s.empty() || s.size() > index_.size())
        return std::nullopt;
    const auto& map = index_[s.size() - 1];
    if (auto it = map.find(s); it != map.end())
        return it->second;
    return std::nullopt;
}

bool SimplicialComplex::is_closed() const
{
    for (std::size_t d = 1; d < by_dim_.size(); ++d)
        for (const auto& s : by_dim_[d])
            for (std::size_t drop = 0; drop < s.size(); ++drop) {
                Simplex face;
                for (std::size_t i = 0; i < s.size(); ++i)
                    if (i != drop)
                        face.push_back(s[i]);
                if (!contains(face))
                    return false;
            }
    return true;
}

long long SimplicialComplex::euler_characteristic() const
{
    long long chi = 0;
    for (std::size_t d = 0; d < by_dim_.size(); ++d)
        chi += (d % 2 == 0 ? 1 : -1) * static_cast<long long>(by_dim_[d].size());
    return chi;
}

bool BettiReport::acyclic() const noexcept
{
    if (!reduced)
        return false;
    return std::all_of(betti.begin(), betti.end(), [](std::size_t b) { return b == 0; });
}

namespace {

using Column = std::vector<std::uint32_t>;

// Face indices of the d-simplices, as sorted columns of the boundary matrix.
std::vector<Column> boundary_columns(const SimplicialComplex& k, std::size_t d)
{
    std::vector<Column> cols;
    cols.reserve(k.count(d));
    for (const auto& s : k.simplices(d)) {
        Column col;
        col.reserve(s.size());
        for (std::size_t drop = 0; drop < s.size(); ++drop) {
            Simplex face;
            face.reserve(s.size() - 1);
            for (std::size_t i = 0; i < s.size(); ++i)
                if (i != drop)
                    face.push_back(s[i]);
            auto idx = k.index_of(face);
            if (!idx)
                throw StructuralFailure("complex is not closed under faces");
            col.push_back(static_cast<std::uint32_t>(*idx));
        }
        std::sort(col.begin(), col.end());
        cols.push_back(std::move(col));
    }
    return cols;
}

void add_mod2(Column& target, const Column& source, Column& scratch)
{
    scratch.clear();
    std::set_symmetric_difference(target.begin(), target.end(), source.begin(), source.end(),
                                  std::back_inserter(scratch));
    target.swap(scratch);
}

bool boundary_of_boundary_vanishes(const std::vector<Column>& upper, const std::vector<Column>& lower)
{
    Column acc, scratch;
    for (const auto& col : upper) {
        acc.clear();
        for (auto f : col)
            add_mod2(acc, lower[f], scratch);
        if (!acc.empty())
            return false;
    }
    return true;
}

} // namespace

BettiReport gf2_homology(const SimplicialComplex& complex, bool reduced)
{
    BettiReport report;
    report.reduced = reduced;
    report.euler = complex.euler_characteristic();
    report.boundary_squares_to_zero = true;

    const int top = complex.dimension();
    if (top < 0) {
        report.euler_consistent = report.euler == 0;
        return report;
    }
    const auto dims = static_cast<std::size_t>(top) + 1;

    std::vector<std::vector<Column>> boundary(dims);
    for (std::size_t d = 1; d < dims; ++d)
        boundary[d] = boundary_columns(complex, d);
    for (std::size_t d = 2; d < dims; ++d)
        report.boundary_squares_to_zero =
            report.boundary_squares_to_zero && boundary_of_boundary_vanishes(boundary[d], boundary[d - 1]);

    // rank[d] = rank of the boundary map on d-chains. Reduce from the top
    // down; a d-simplex that is the pivot of a reduced (d+1)-column is
    // already known to reduce to zero and is skipped.
    std::vector<std::size_t> rank(dims + 1, 0);
    std::vector<std::vector<bool>> cleared(dims);
    for (std::size_t d = 0; d < dims; ++d)
        cleared[d].assign(complex.count(d), false);

    Column scratch;
    for (std::size_t d = dims - 1; d >= 1; --d) {
        std::vector<std::int64_t> pivot_owner(complex.count(d - 1), -1);
        std::vector<Column> reduced_cols;
        for (std::size_t j = 0; j < boundary[d].size(); ++j) {
            if (cleared[d][j])
                continue;
            Column col = std::move(boundary[d][j]);
            while (!col.empty()) {
                const auto low = col.back();
                if (pivot_owner[low] < 0) {
                    pivot_owner[low] = static_cast<std::int64_t>(reduced_cols.size());
                    cleared[d - 1][low] = true;
                    reduced_cols.push_back(std::move(col));
                    ++rank[d];
                    break;
                }
                add_mod2(col, reduced_cols[static_cast<std::size_t>(pivot_owner[low])], scratch);
            }
        }
    }

    report.betti.resize(dims);
    long long alternating = 0;
    for (std::size_t d = 0; d < dims; ++d) {
        report.betti[d] = complex.count(d) - rank[d] - rank[d + 1];
        alternating += (d % 2 == 0 ? 1 : -1) * static_cast<long long>(report.betti[d]);
    }
    if (reduced && !report.betti.empty())
        report.betti[0] -= 1;
    report.euler_consistent = alternating == report.euler;
    return report;
}

} // namespace pfiber
