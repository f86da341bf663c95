#include "pfiber/dynamics.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <thread>

namespace pfiber {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double sup_diff(const PersistencePoint& a, const PersistencePoint& b)
{
    const double db = std::abs(a.birth - b.birth);
    if (a.death.is_infinite() != b.death.is_infinite())
        return kInf;
    if (a.death.is_infinite())
        return db;
    return std::max(db, std::abs(a.death.value() - b.death.value()));
}

double sup_norm(std::span<const double> v)
{
    double m = 0.0;
    for (double x : v)
        m = std::max(m, std::abs(x));
    return m;
}

bool all_finite(std::span<const double> v)
{
    return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

} // namespace

SparsityMargin sparsity_margin(const PersistenceDiagram& p, double default_mu)
{
    SparsityMargin out;
    double gap = kInf;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (p[i].death.is_finite())
            gap = std::min(gap, p[i].death.value() - p[i].birth);
        for (std::size_t j = i + 1; j < p.size(); ++j)
            gap = std::min(gap, sup_diff(p[i], p[j]));
    }
    out.is_sparse = true;
    for (std::size_t i = 0; i + 1 < p.size(); ++i)
        if (p[i] == p[i + 1])
            out.is_sparse = false;
    if (!out.is_sparse) {
        out.mu_max = ExtendedReal(0.0);
        out.mu = 0.0;
        return out;
    }
    if (std::isinf(gap)) {
        out.mu_max = ExtendedReal::infinite();
        out.mu = default_mu;
    } else {
        out.mu_max = ExtendedReal(gap / 4);
        out.mu = gap / 4;
    }
    return out;
}

NeighborhoodSpec make_neighborhood(const PersistenceDiagram& p, double mu)
{
    if (!(mu > 0) || !std::isfinite(mu))
        throw InvalidInput("mu must be a positive finite number");
    if (p.empty())
        throw InvalidDiagram("N_P needs a nonempty diagram");
    NeighborhoodSpec spec;
    spec.diagram = p;
    spec.mu = mu;
    double hi = -kInf;
    for (const auto& pt : p)
        hi = std::max(hi, pt.birth);
    spec.strip_birth_lo = p[0].birth - mu;
    spec.strip_birth_hi = hi + mu;
    return spec;
}

bool NeighborhoodSpec::in_box(const PersistencePoint& x, std::size_t m) const
{
    const auto& c = diagram[m];
    if (x.death.is_infinite() != c.death.is_infinite())
        return false;
    double l1 = std::abs(x.birth - c.birth);
    if (c.death.is_finite())
        l1 += std::abs(x.death.value() - c.death.value());
    return l1 <= mu;
}

bool NeighborhoodSpec::in_strip(const PersistencePoint& x) const
{
    if (x.death.is_infinite())
        return false;
    const double pers = x.death.value() - x.birth;
    return x.birth >= strip_birth_lo && x.birth <= strip_birth_hi && pers >= 0 && pers <= mu;
}

bool margin_sound(const NeighborhoodSpec& spec)
{
    const auto& p = spec.diagram;
    const double mu = spec.mu;
    for (std::size_t i = 0; i < p.size(); ++i) {
        for (std::size_t j = i + 1; j < p.size(); ++j) {
            if (p[i].death.is_infinite() != p[j].death.is_infinite())
                continue;
            double l1 = std::abs(p[i].birth - p[j].birth);
            if (p[i].death.is_finite())
                l1 += std::abs(p[i].death.value() - p[j].death.value());
            if (l1 <= 2 * mu)
                return false;
        }
        // Persistence varies by at most mu over a box; strip bars have at most mu.
        if (p[i].death.is_finite() && p[i].death.value() - p[i].birth - mu <= mu)
            return false;
    }
    return true;
}

bool np_membership(const PersistenceDiagram& d, const NeighborhoodSpec& spec)
{
    std::vector<bool> claimed(d.size(), false);
    for (std::size_t m = 0; m < spec.diagram.size(); ++m) {
        std::size_t hits = 0;
        for (std::size_t i = 0; i < d.size(); ++i)
            if (spec.in_box(d[i], m)) {
                ++hits;
                claimed[i] = true;
            }
        if (hits != 1)
            return false;
    }
    for (std::size_t i = 0; i < d.size(); ++i)
        if (!claimed[i] && !spec.in_strip(d[i]))
            return false;
    return true;
}

VectorField VectorField::linear(std::vector<double> target)
{
    if (target.empty())
        throw InvalidInput("linear field needs a nonempty target");
    validate_sample(target);
    VectorField f(Kind::Linear, target.size());
    f.target_ = std::move(target);
    return f;
}

VectorField VectorField::periodic3()
{
    return VectorField(Kind::Periodic3, 3);
}

VectorField VectorField::polynomial(std::vector<std::vector<Monomial>> terms)
{
    if (terms.empty())
        throw InvalidInput("polynomial field needs at least one coordinate");
    const std::size_t n = terms.size();
    for (const auto& row : terms)
        for (const auto& mono : row) {
            if (mono.exponents.size() != n)
                throw InvalidInput("monomial exponent list must have one entry per coordinate");
            if (!std::isfinite(mono.coeff))
                throw InvalidInput("monomial coefficient is not finite");
        }
    VectorField f(Kind::Polynomial, n);
    f.terms_ = std::move(terms);
    return f;
}

std::vector<double> VectorField::operator()(std::span<const double> z) const
{
    if (z.size() != dim_)
        throw InvalidInput("state has " + std::to_string(z.size()) + " coordinates, field has " +
                           std::to_string(dim_));
    std::vector<double> out(dim_);
    evaluate<double>(z, out);
    return out;
}

bool operator==(const VectorField& a, const VectorField& b)
{
    if (a.kind_ != b.kind_ || a.dim_ != b.dim_ || a.target_ != b.target_ || a.terms_.size() != b.terms_.size())
        return false;
    for (std::size_t i = 0; i < a.terms_.size(); ++i) {
        if (a.terms_[i].size() != b.terms_[i].size())
            return false;
        for (std::size_t j = 0; j < a.terms_[i].size(); ++j)
            if (a.terms_[i][j].coeff != b.terms_[i][j].coeff ||
                a.terms_[i][j].exponents != b.terms_[i][j].exponents)
                return false;
    }
    return true;
}

std::size_t step_count(double dt, double horizon)
{
    if (!(dt > 0) || !std::isfinite(dt))
        throw InvalidInput("dt must be a positive finite number");
    if (!(horizon >= dt) || !std::isfinite(horizon))
        throw InvalidInput("horizon must be finite and at least dt");
    return static_cast<std::size_t>(std::llround(horizon / dt));
}

void integrate_visit(const VectorField& field, const SampleVector& z0, double dt, double horizon,
                     const std::function<bool(double, std::span<const double>)>& visit)
{
    if (z0.size() != field.dimension())
        throw InvalidInput("initial state has " + std::to_string(z0.size()) + " coordinates, field has " +
                           std::to_string(field.dimension()));
    validate_sample(z0);
    const std::size_t steps = step_count(dt, horizon);
    std::vector<double> z = z0;
    if (!visit(0.0, z))
        return;
    for (std::size_t s = 1; s <= steps; ++s) {
        rk4_step<double>(field, z, dt);
        if (!all_finite(z))
            throw DivergenceError(static_cast<double>(s - 1) * dt);
        if (!visit(static_cast<double>(s) * dt, z))
            return;
    }
}

TrajectoryObservation integrate(const VectorField& field, const SampleVector& z0, double dt, double horizon,
                                const ObservationTarget& target)
{
    if (target.component && target.component->n() != field.dimension())
        throw InvalidInput("component dimension does not match the field");
    TrajectoryObservation obs;
    obs.dt = dt;
    integrate_visit(field, z0, dt, horizon, [&](double t, std::span<const double> z) {
        obs.times.push_back(t);
        obs.states.emplace_back(z.begin(), z.end());
        obs.diagrams.push_back(sublevel_diagram(z));
        if (target.neighborhood)
            obs.in_np.push_back(np_membership(obs.diagrams.back(), *target.neighborhood));
        if (target.component)
            obs.distances.push_back(target.component->distance(z));
        return true;
    });
    return obs;
}

bool InvarianceReport::all_invariant() const noexcept
{
    return std::all_of(seeds.begin(), seeds.end(),
                       [](const SeedOutcome& s) { return !s.started_in_np || (s.invariant && !s.error); });
}

std::size_t InvarianceReport::started_count() const noexcept
{
    return static_cast<std::size_t>(
        std::count_if(seeds.begin(), seeds.end(), [](const SeedOutcome& s) { return s.started_in_np; }));
}

namespace {

SeedOutcome monitor_seed(const VectorField& field, const NeighborhoodSpec& spec,
                         const std::vector<ComponentGeometry>& components, const SampleVector& seed,
                         std::size_t index, double dt, double horizon)
{
    SeedOutcome out;
    out.seed_index = index;
    try {
        if (seed.size() != field.dimension())
            throw InvalidInput("seed dimension does not match the field");
        validate_sample(seed);
        out.started_in_np = np_membership(sublevel_diagram(seed), spec);
        const ComponentGeometry* nearest = nullptr;
        double best = kInf;
        for (std::size_t c = 0; c < components.size(); ++c) {
            const double d = components[c].distance(seed);
            if (d < best) {
                best = d;
                nearest = &components[c];
                out.component = c;
            }
        }
        out.initial_distance = nearest ? best : 0.0;
        out.max_distance = out.initial_distance;
        if (!out.started_in_np)
            return out;

        out.invariant = true;
        integrate_visit(field, seed, dt, horizon, [&](double t, std::span<const double> z) {
            for (std::size_t i = 0; i < z.size(); ++i)
                out.max_displacement = std::max(out.max_displacement, std::abs(z[i] - seed[i]));
            if (nearest) {
                const double d = nearest->distance(z);
                out.max_distance = std::max(out.max_distance, d);
                if (d > spec.mu && !out.ball_exit_time)
                    out.ball_exit_time = t;
            }
            if (out.invariant) {
                auto dgm = sublevel_diagram(z);
                if (!np_membership(dgm, spec)) {
                    out.invariant = false;
                    out.exit_time = t;
                    out.exit_diagram = std::move(dgm);
                }
            }
            return true;
        });
        if (out.ball_exit_time)
            out.proof_chain_consistent = out.exit_time && *out.exit_time <= *out.ball_exit_time;
    } catch (const DivergenceError& e) {
        out.invariant = false;
        out.error = e.what();
    } catch (const Error& e) {
        out.invariant = false;
        out.error = e.what();
    }
    return out;
}

} // namespace

InvarianceReport invariance_monitor(const VectorField& field, const PersistenceDiagram& p, double mu,
                                    const std::vector<SampleVector>& seeds, double dt, double horizon)
{
    const auto margin = sparsity_margin(p);
    if (!margin.is_sparse)
        throw InvalidInput("diagram is not sparse");
    if (!(mu > 0) || (margin.mu_max.is_finite() && mu > margin.mu_max.value()))
        throw InvalidInput("mu must lie in (0, mu_max]");
    step_count(dt, horizon);

    InvarianceReport report;
    report.mu = mu;
    report.dt = dt;
    report.horizon = horizon;
    const auto spec = make_neighborhood(p, mu);

    std::vector<ComponentGeometry> geometry;
    if (p.infinite_count() == 1 && field.dimension() >= 2 * p.size() - 1) {
        report.components = enumerate_components(p).components;
        for (const auto& cv : report.components)
            geometry.emplace_back(cv, field.dimension());
    }

    report.seeds.resize(seeds.size());
    const std::size_t workers =
        std::max<std::size_t>(1, std::min<std::size_t>(std::thread::hardware_concurrency(), seeds.size()));
    auto work = [&](std::size_t w) {
        for (std::size_t i = w; i < seeds.size(); i += workers)
            report.seeds[i] = monitor_seed(field, spec, geometry, seeds[i], i, dt, horizon);
    };
    if (workers == 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < workers; ++w)
            pool.emplace_back(work, w);
        for (auto& t : pool)
            t.join();
    }
    return report;
}

namespace {

Eigen::MatrixXd fd_jacobian(const VectorField& field, const std::vector<double>& z)
{
    const std::size_t n = z.size();
    Eigen::MatrixXd jac(n, n);
    std::vector<double> zp = z, zm = z;
    for (std::size_t j = 0; j < n; ++j) {
        const double h = 1e-6 * std::max(1.0, std::abs(z[j]));
        zp[j] = z[j] + h;
        zm[j] = z[j] - h;
        const auto fp = field(zp);
        const auto fm = field(zm);
        for (std::size_t i = 0; i < n; ++i)
            jac(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = (fp[i] - fm[i]) / (2 * h);
        zp[j] = zm[j] = z[j];
    }
    return jac;
}

} // namespace

FixedPointResult fixed_point_search(const VectorField& field, const SampleVector& start, double tol,
                                    const FixedPointOptions& options)
{
    if (!(tol > 0))
        throw InvalidInput("tol must be positive");
    if (start.size() != field.dimension())
        throw InvalidInput("start dimension does not match the field");
    validate_sample(start);

    FixedPointResult result;
    std::vector<double> z = start;
    double horizon = options.initial_horizon;
    for (std::size_t attempt = 0; attempt < options.attempts; ++attempt, horizon *= 2) {
        const std::size_t steps = step_count(options.dt, horizon);
        z = integrate_final<double>(field, z, options.dt, steps);
        if (!all_finite(z))
            throw DivergenceError(result.integration_time);
        result.integration_time += static_cast<double>(steps) * options.dt;

        for (std::size_t it = 0; it < options.newton_iterations; ++it) {
            const auto f = field(z);
            const double res = sup_norm(f);
            result.residual = res;
            if (res < tol) {
                result.point = z;
                return result;
            }
            const Eigen::FullPivLU<Eigen::MatrixXd> lu(fd_jacobian(field, z));
            if (!lu.isInvertible()) {
                ++result.singular_jacobians;
                break;
            }
            const Eigen::VectorXd rhs = Eigen::Map<const Eigen::VectorXd>(f.data(), static_cast<Eigen::Index>(f.size()));
            const Eigen::VectorXd step = -lu.solve(rhs);
            ++result.newton_steps;

            double lambda = 1.0;
            std::vector<double> trial(z.size());
            for (;;) {
                for (std::size_t i = 0; i < z.size(); ++i)
                    trial[i] = z[i] + lambda * step(static_cast<Eigen::Index>(i));
                if (all_finite(trial) && sup_norm(field(trial)) < res)
                    break;
                lambda /= 2;
                if (lambda < 1e-6)
                    break;
            }
            if (lambda < 1e-6)
                break;
            z = trial;
        }
    }
    result.residual = sup_norm(field(z));
    if (result.residual < tol)
        result.point = z;
    return result;
}

std::vector<SampleVector> seeds_in_ball(const SampleVector& center, double radius, std::size_t count,
                                        std::uint64_t seed)
{
    if (!(radius >= 0) || !std::isfinite(radius))
        throw InvalidInput("radius must be finite and nonnegative");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-radius, radius);
    std::vector<SampleVector> out(count, center);
    for (auto& z : out)
        for (auto& x : z)
            x += u(rng);
    return out;
}

} // namespace pfiber
