#ifndef PFIBER_DYNAMICS_HPP
#define PFIBER_DYNAMICS_HPP

#include "pfiber/errors.hpp"
#include "pfiber/fiber.hpp"
#include "pfiber/persistence.hpp"

#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace pfiber {

/// mu used when the margin is unbounded.
inline constexpr double kDefaultMu = 1.0;

struct SparsityMargin {
    bool is_sparse = false;
    ExtendedReal mu_max; ///< infinite when no constraint applies
    double mu = 0.0;
};

/// A quarter of the smaller of the minimum pairwise sup-distance between
/// points and the minimum persistence.
SparsityMargin sparsity_margin(const PersistenceDiagram& p, double default_mu = kDefaultMu);

/// The neighborhood N_P: closed L1 balls of radius mu around each point of P
/// and a strip of short bars near the diagonal.
struct NeighborhoodSpec {
    PersistenceDiagram diagram;
    double mu = 0.0;
    double strip_birth_lo = 0.0;
    double strip_birth_hi = 0.0;

    bool in_box(const PersistencePoint& x, std::size_t m) const;
    bool in_strip(const PersistencePoint& x) const;
};

/// Throws InvalidInput unless mu > 0 and P is nonempty.
NeighborhoodSpec make_neighborhood(const PersistenceDiagram& p, double mu);

/// The boxes are pairwise disjoint and miss the strip, checked on the
/// bounding intervals of each set.
bool margin_sound(const NeighborhoodSpec& spec);

/// Exactly one point of D in each box, every other point in the strip.
bool np_membership(const PersistenceDiagram& d, const NeighborhoodSpec& spec);

struct Monomial {
    double coeff = 0.0;
    std::vector<unsigned> exponents; ///< one per coordinate
};

/// Autonomous vector field on R^N.
///  - Linear(target):  z' = -(z - target)
///  - Periodic3:       z1' = -z1, and (z2, z3) circles the center (2, 3) on a
///                     stable limit cycle of radius 0.5
///  - Polynomial:      one sum of monomials per coordinate
class VectorField {
public:
    enum class Kind { Linear, Periodic3, Polynomial };

    static VectorField linear(std::vector<double> target);
    static VectorField periodic3();
    static VectorField polynomial(std::vector<std::vector<Monomial>> terms);

    Kind kind() const noexcept { return kind_; }
    std::size_t dimension() const noexcept { return dim_; }
    const std::vector<double>& target() const noexcept { return target_; }
    const std::vector<std::vector<Monomial>>& terms() const noexcept { return terms_; }

    template <class T>
    void evaluate(std::span<const T> z, std::span<T> out) const;

    std::vector<double> operator()(std::span<const double> z) const;

    friend bool operator==(const VectorField& a, const VectorField& b);

private:
    VectorField(Kind kind, std::size_t dim) : kind_(kind), dim_(dim) {}

    Kind kind_;
    std::size_t dim_;
    std::vector<double> target_;
    std::vector<std::vector<Monomial>> terms_;
};

inline constexpr double kPeriodicRadius = 0.5;

template <class T>
void VectorField::evaluate(std::span<const T> z, std::span<T> out) const
{
    switch (kind_) {
    case Kind::Linear:
        for (std::size_t i = 0; i < dim_; ++i)
            out[i] = -(z[i] - static_cast<T>(target_[i]));
        return;
    case Kind::Periodic3: {
        const T u = z[1] - T(2);
        const T v = z[2] - T(3);
        const T radial = T(kPeriodicRadius * kPeriodicRadius) - (u * u + v * v);
        out[0] = -z[0];
        out[1] = -v + u * radial;
        out[2] = u + v * radial;
        return;
    }
    case Kind::Polynomial:
        for (std::size_t i = 0; i < dim_; ++i) {
            T acc = T(0);
            for (const auto& mono : terms_[i]) {
                T term = static_cast<T>(mono.coeff);
                for (std::size_t j = 0; j < dim_; ++j)
                    for (unsigned e = 0; e < mono.exponents[j]; ++e)
                        term *= z[j];
                acc += term;
            }
            out[i] = acc;
        }
        return;
    }
}

/// One classical RK4 step of size dt, in place.
template <class T>
void rk4_step(const VectorField& field, std::vector<T>& z, T dt)
{
    const std::size_t n = z.size();
    std::vector<T> k1(n), k2(n), k3(n), k4(n), tmp(n);
    field.evaluate<T>(z, k1);
    for (std::size_t i = 0; i < n; ++i)
        tmp[i] = z[i] + dt / 2 * k1[i];
    field.evaluate<T>(tmp, k2);
    for (std::size_t i = 0; i < n; ++i)
        tmp[i] = z[i] + dt / 2 * k2[i];
    field.evaluate<T>(tmp, k3);
    for (std::size_t i = 0; i < n; ++i)
        tmp[i] = z[i] + dt * k3[i];
    field.evaluate<T>(tmp, k4);
    for (std::size_t i = 0; i < n; ++i)
        z[i] += dt / 6 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
}

/// Number of fixed steps covering [0, horizon]. Throws InvalidInput unless
/// dt > 0 and horizon >= dt.
std::size_t step_count(double dt, double horizon);

/// Final state after integrating with fixed-step RK4 in precision T.
template <class T>
std::vector<T> integrate_final(const VectorField& field, std::vector<T> z, T dt, std::size_t steps)
{
    for (std::size_t s = 0; s < steps; ++s)
        rk4_step<T>(field, z, dt);
    return z;
}

/// What a trajectory is compared against at each sample.
struct ObservationTarget {
    std::optional<NeighborhoodSpec> neighborhood;
    std::optional<ComponentGeometry> component;
};

struct TrajectoryObservation {
    double dt = 0.0;
    std::vector<double> times;
    std::vector<SampleVector> states;
    std::vector<PersistenceDiagram> diagrams;
    std::vector<bool> in_np;        ///< empty without a neighborhood
    std::vector<double> distances;  ///< empty without a component
};

/// Samples at every step, starting with t = 0. Throws DivergenceError when
/// a state stops being finite.
TrajectoryObservation integrate(const VectorField& field, const SampleVector& z0, double dt, double horizon,
                                const ObservationTarget& target = {});

/// Streams (t, state) at every step; stops early when `visit` returns false.
void integrate_visit(const VectorField& field, const SampleVector& z0, double dt, double horizon,
                     const std::function<bool(double, std::span<const double>)>& visit);

struct SeedOutcome {
    std::size_t seed_index = 0;
    bool started_in_np = false;
    bool invariant = false;
    std::optional<double> exit_time;
    std::optional<PersistenceDiagram> exit_diagram;
    /// Component (index into InvarianceReport::components) nearest the seed.
    std::optional<std::size_t> component;
    double initial_distance = 0.0;
    double max_distance = 0.0;
    std::optional<double> ball_exit_time; ///< first time the distance exceeds mu
    /// Leaving the mu-ball around the component never happens before
    /// leaving N_P.
    bool proof_chain_consistent = true;
    double max_displacement = 0.0; ///< sup-norm distance from the seed
    std::optional<std::string> error;
};

struct InvarianceReport {
    double mu = 0.0;
    double dt = 0.0;
    double horizon = 0.0;
    std::vector<CriticalValueSequence> components;
    std::vector<SeedOutcome> seeds;
    std::string certification = "hypotheses checked at sample resolution";

    /// Every seed that started in N_P stayed there.
    bool all_invariant() const noexcept;
    std::size_t started_count() const noexcept;
};

/// Throws InvalidInput unless P is sparse and 0 < mu <= mu_max.
/// Seeds run in parallel; results are ordered by seed index.
InvarianceReport invariance_monitor(const VectorField& field, const PersistenceDiagram& p, double mu,
                                    const std::vector<SampleVector>& seeds, double dt, double horizon);

struct FixedPointOptions {
    double dt = 1e-2;
    double initial_horizon = 10.0;
    std::size_t attempts = 4; ///< horizon doubles after each failed attempt
    std::size_t newton_iterations = 50;
};

struct FixedPointResult {
    std::optional<SampleVector> point;
    double residual = 0.0; ///< sup norm of the field at the last iterate
    std::size_t newton_steps = 0;
    double integration_time = 0.0;
    std::size_t singular_jacobians = 0;
};

/// Integrates from `start`, then refines with damped Newton using a central
/// finite-difference Jacobian. Throws InvalidInput unless tol > 0.
FixedPointResult fixed_point_search(const VectorField& field, const SampleVector& start, double tol,
                                    const FixedPointOptions& options = {});

/// `count` points drawn uniformly from the sup-norm ball of `radius` around
/// `center`.
std::vector<SampleVector> seeds_in_ball(const SampleVector& center, double radius, std::size_t count,
                                        std::uint64_t seed);

} // namespace pfiber

#endif
