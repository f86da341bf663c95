#include "cli.hpp"

#include "pfiber/cellular_string.hpp"
#include "pfiber/dynamics.hpp"
#include "pfiber/errors.hpp"
#include "pfiber/fiber.hpp"
#include "pfiber/io.hpp"
#include "pfiber/persistence.hpp"
#include "pfiber/poset_topology.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <functional>
#include <optional>
#include <ostream>

namespace pfiber::cli {

namespace {

using Json = nlohmann::json;

// Values collected from the command line; unset options stay empty.
struct Options {
    std::string vector;
    std::vector<std::string> diagrams;
    std::string cv;
    std::string field;
    std::string out;
    std::size_t n = 0;
    std::size_t m = 0;
    std::size_t count = 10;
    std::uint64_t seed = 0;
    std::optional<double> mu;
    std::optional<double> cap;
    std::optional<double> radius;
    double dt = 1e-2;
    double horizon = 10.0;
    double tol = 1e-9;
    bool superlevel = false;
};

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

Json parse_json(const std::string& text)
{
    return Json::parse(text);
}

const std::string& only_diagram(const Options& o)
{
    if (o.diagrams.size() != 1)
        throw UsageError("expected exactly one --diagram");
    return o.diagrams.front();
}

SampleVector need_vector(const Options& o)
{
    if (o.vector.empty())
        throw UsageError("--vector is required");
    return parse_vector(o.vector);
}

CriticalValueSequence need_cv(const Options& o)
{
    if (o.cv.empty())
        throw UsageError("--cv is required");
    CriticalValueSequence cv{parse_vector(o.cv), Parity::Pattern010};
    if (!is_alternating(cv))
        throw InvalidInput("--cv must alternate min,max,...,min");
    return cv;
}

VectorField need_field(const Options& o)
{
    if (o.field.empty())
        throw UsageError("--field is required");
    return load_field(o.field);
}

void need_poset_size(const Options& o)
{
    if (o.n == 0 || o.m == 0)
        throw UsageError("--n and --m are required");
}

double mu_for(const Options& o, const PersistenceDiagram& p)
{
    return o.mu ? *o.mu : sparsity_margin(p).mu;
}

Json samples_json(const std::vector<SampleVector>& samples)
{
    Json arr = Json::array();
    for (const auto& s : samples)
        arr.push_back(s);
    return arr;
}

// Each handler returns the payload and an exit code.
struct Outcome {
    std::string payload;
    int code = kExitOk;
};

Outcome cmd_dgm(const Options& o)
{
    const auto z = need_vector(o);
    return {diagram_to_json(o.superlevel ? superlevel_diagram(z) : sublevel_diagram(z))};
}

Outcome cmd_cv(const Options& o)
{
    return {cv_to_json(critical_value_sequence(need_vector(o)))};
}

Outcome cmd_bottleneck(const Options& o)
{
    if (o.diagrams.size() != 2)
        throw UsageError("bottleneck takes --diagram twice");
    const auto d = bottleneck_distance(load_diagram(o.diagrams[0]), load_diagram(o.diagrams[1]));
    Json out;
    out["distance"] = d.is_infinite() ? Json("inf") : Json(d.value());
    return {out.dump()};
}

Outcome cmd_fiber_enumerate(const Options& o)
{
    return {components_to_json(enumerate_components(load_diagram(only_diagram(o))))};
}

Outcome cmd_fiber_contains(const Options& o)
{
    const auto z = need_vector(o);
    const auto membership = fiber_membership(z, load_diagram(only_diagram(o)));
    Json out;
    out["member"] = membership.member;
    out["component"] = nullptr;
    out["string"] = nullptr;
    if (membership.component) {
        out["component"] = parse_json(cv_to_json(*membership.component));
        if (is_typical(z))
            if (const auto s = locate_string(z, *membership.component))
                out["string"] = s->word();
    }
    return {out.dump()};
}

Outcome cmd_fiber_sample(const Options& o)
{
    std::vector<CriticalValueSequence> labels;
    std::optional<PersistenceDiagram> p;
    if (!o.cv.empty()) {
        labels.push_back(need_cv(o));
    } else {
        p = load_diagram(only_diagram(o));
        labels = enumerate_components(*p).components;
    }
    Json out;
    out["seed"] = o.seed;
    out["components"] = Json::array();
    bool all_in_fiber = true;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        const auto& cv = labels[i];
        const std::size_t n = o.n ? o.n : cv.size();
        const double cap = o.cap ? *o.cap : default_cap(cv);
        const auto samples = sample_component(cv, n, o.count, cap, o.seed + i);
        if (p)
            for (const auto& s : samples)
                all_in_fiber = all_in_fiber && sublevel_diagram(s) == *p;
        Json c;
        c["cv"] = parse_json(cv_to_json(cv));
        c["n"] = n;
        c["samples"] = samples_json(samples);
        out["components"].push_back(std::move(c));
    }
    if (p)
        out["all_in_fiber"] = all_in_fiber;
    return {out.dump()};
}

Outcome cmd_fiber_distance(const Options& o)
{
    const auto z = need_vector(o);
    const auto cv = need_cv(o);
    Json out;
    out["distance"] = sup_distance_to_component(z, cv);
    const auto s = locate_string(z, cv);
    out["string"] = s ? Json(s->word()) : Json(nullptr);
    return {out.dump()};
}

Outcome cmd_poset_list(const Options& o)
{
    need_poset_size(o);
    return {strings_to_json(o.n, o.m, enumerate_strings(o.n, o.m).elements())};
}

Outcome cmd_poset_dot(const Options& o)
{
    need_poset_size(o);
    return {poset_to_dot(enumerate_strings(o.n, o.m))};
}

Outcome cmd_poset_homology(const Options& o)
{
    need_poset_size(o);
    return {betti_to_json(gf2_homology(order_complex(enumerate_strings(o.n, o.m))))};
}

Outcome cmd_poset_verify(const Options& o)
{
    need_poset_size(o);
    const auto r = contractibility_report(o.n, o.m);
    return {contractibility_to_json(r), r.passed() ? kExitOk : kExitDomain};
}

Outcome cmd_dyn_run(const Options& o)
{
    const auto field = need_field(o);
    const auto z0 = need_vector(o);
    ObservationTarget target;
    if (!o.diagrams.empty()) {
        const auto p = load_diagram(only_diagram(o));
        target.neighborhood = make_neighborhood(p, mu_for(o, p));
    }
    if (!o.cv.empty())
        target.component.emplace(need_cv(o), z0.size());
    return {trajectory_to_csv(integrate(field, z0, o.dt, o.horizon, target))};
}

Outcome cmd_dyn_monitor(const Options& o)
{
    const auto field = need_field(o);
    const auto p = load_diagram(only_diagram(o));
    const double mu = mu_for(o, p);
    const auto center = need_vector(o);
    const auto seeds = seeds_in_ball(center, o.radius ? *o.radius : mu, o.count, o.seed);
    const auto r = invariance_monitor(field, p, mu, seeds, o.dt, o.horizon);
    return {invariance_report_to_json(r)};
}

Outcome cmd_dyn_fixpoint(const Options& o)
{
    const auto field = need_field(o);
    FixedPointOptions options;
    options.dt = o.dt;
    options.initial_horizon = o.horizon;
    const auto r = fixed_point_search(field, need_vector(o), o.tol, options);
    if (o.diagrams.empty() || !r.point)
        return {fixed_point_to_json(r)};
    // also report where the fixed point's diagram sits
    auto out = parse_json(fixed_point_to_json(r));
    const auto p = load_diagram(only_diagram(o));
    const auto d = sublevel_diagram(*r.point);
    out["diagram"] = parse_json(diagram_to_json(d));
    out["in_NP"] = np_membership(d, make_neighborhood(p, mu_for(o, p)));
    return {out.dump()};
}

Outcome cmd_dyn_sparsity(const Options& o)
{
    const auto p = load_diagram(only_diagram(o));
    return {sparsity_to_json(o.mu ? sparsity_margin(p, *o.mu) : sparsity_margin(p))};
}

Outcome cmd_plot_diagram(const Options& o)
{
    const auto p = load_diagram(only_diagram(o));
    std::optional<NeighborhoodSpec> spec;
    if (o.mu)
        spec = make_neighborhood(p, *o.mu);
    return {diagram_svg(p, spec)};
}

void add_vector(CLI::App* app, Options& o, const char* help = "comma-separated reals")
{
    app->add_option("--vector", o.vector, help);
}

void add_diagram(CLI::App* app, Options& o)
{
    app->add_option("--diagram", o.diagrams, "diagram JSON file");
}

void add_poset_size(CLI::App* app, Options& o)
{
    app->add_option("--n", o.n, "string length")->check(CLI::PositiveNumber);
    app->add_option("--m", o.m, "number of 0-blocks")->check(CLI::PositiveNumber);
}

void add_time(CLI::App* app, Options& o)
{
    app->add_option("--dt", o.dt, "step size")->capture_default_str();
    app->add_option("--horizon", o.horizon, "integration horizon")->capture_default_str();
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    Options o;
    CLI::App app{"Fibers of the persistence map on the path complex", "pfiber"};
    app.require_subcommand(1);
    app.fallthrough();
    app.add_option("--out", o.out, "write the payload to this file");
    app.add_option("--seed", o.seed, "random seed")->capture_default_str();

    std::function<Outcome(const Options&)> handler;
    auto bind = [&](CLI::App* sub, Outcome (*fn)(const Options&)) {
        sub->callback([&handler, fn] { handler = fn; });
    };

    auto* dgm = app.add_subcommand("dgm", "persistence diagram of a vector");
    add_vector(dgm, o);
    dgm->add_flag("--superlevel", o.superlevel, "superlevel filtration");
    bind(dgm, cmd_dgm);

    auto* cv = app.add_subcommand("cv", "critical value sequence of a typical vector");
    add_vector(cv, o);
    bind(cv, cmd_cv);

    auto* bn = app.add_subcommand("bottleneck", "bottleneck distance between two diagrams");
    add_diagram(bn, o);
    bind(bn, cmd_bottleneck);

    auto* fiber = app.add_subcommand("fiber", "components of a fiber");
    fiber->require_subcommand(1);
    auto* enumerate = fiber->add_subcommand("enumerate", "list component labels");
    add_diagram(enumerate, o);
    bind(enumerate, cmd_fiber_enumerate);
    auto* contains = fiber->add_subcommand("contains", "fiber membership of a vector");
    add_vector(contains, o);
    add_diagram(contains, o);
    bind(contains, cmd_fiber_contains);
    auto* sample = fiber->add_subcommand("sample", "random points of a component");
    sample->add_option("--cv", o.cv, "component label");
    add_diagram(sample, o);
    sample->add_option("--n", o.n, "vector length (default: label length)");
    sample->add_option("--count", o.count, "samples per component")->capture_default_str();
    sample->add_option("--cap", o.cap, "ray truncation height");
    bind(sample, cmd_fiber_sample);
    auto* distance = fiber->add_subcommand("distance", "sup-norm distance to a component");
    add_vector(distance, o);
    distance->add_option("--cv", o.cv, "component label");
    bind(distance, cmd_fiber_distance);

    auto* poset = app.add_subcommand("poset", "cellular string posets");
    poset->require_subcommand(1);
    auto* list = poset->add_subcommand("list", "all strings of Str(n, m)");
    add_poset_size(list, o);
    bind(list, cmd_poset_list);
    auto* dot = poset->add_subcommand("export-dot", "Hasse diagram in DOT");
    add_poset_size(dot, o);
    bind(dot, cmd_poset_dot);
    auto* homology = poset->add_subcommand("homology", "reduced GF(2) Betti numbers of the order complex");
    add_poset_size(homology, o);
    bind(homology, cmd_poset_homology);
    auto* verify = poset->add_subcommand("verify", "contractibility audit");
    add_poset_size(verify, o);
    bind(verify, cmd_poset_verify);

    auto* dyn = app.add_subcommand("dyn", "trajectories observed through the persistence map");
    dyn->require_subcommand(1);
    auto* drun = dyn->add_subcommand("run", "integrate and emit CSV");
    drun->add_option("--field", o.field, "field JSON file");
    add_vector(drun, o, "initial state");
    add_diagram(drun, o);
    drun->add_option("--mu", o.mu, "neighborhood radius");
    drun->add_option("--cv", o.cv, "component for the distance column");
    add_time(drun, o);
    bind(drun, cmd_dyn_run);
    auto* monitor = dyn->add_subcommand("monitor", "invariance of N_P from seeds around a center");
    monitor->add_option("--field", o.field, "field JSON file");
    add_vector(monitor, o, "seed ball center");
    add_diagram(monitor, o);
    monitor->add_option("--mu", o.mu, "neighborhood radius (default: sparsity margin)");
    monitor->add_option("--radius", o.radius, "seed ball radius (default: mu)");
    monitor->add_option("--count", o.count, "number of seeds")->capture_default_str();
    add_time(monitor, o);
    bind(monitor, cmd_dyn_monitor);
    auto* fix = dyn->add_subcommand("fixpoint", "search for a zero of the field");
    fix->add_option("--field", o.field, "field JSON file");
    add_vector(fix, o, "start");
    add_diagram(fix, o);
    fix->add_option("--mu", o.mu, "neighborhood radius");
    fix->add_option("--tol", o.tol, "residual tolerance")->capture_default_str();
    add_time(fix, o);
    bind(fix, cmd_dyn_fixpoint);
    auto* sparsity = dyn->add_subcommand("sparsity", "sparsity margin of a diagram");
    add_diagram(sparsity, o);
    sparsity->add_option("--mu", o.mu, "mu used when the margin is unbounded");
    bind(sparsity, cmd_dyn_sparsity);

    auto* plot = app.add_subcommand("plot", "SVG output");
    plot->require_subcommand(1);
    auto* pdiagram = plot->add_subcommand("diagram", "diagram with diagonal and optional N_P");
    add_diagram(pdiagram, o);
    pdiagram->add_option("--mu", o.mu, "draw N_P with this radius");
    bind(pdiagram, cmd_plot_diagram);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n" << app.help();
        return kExitUsage;
    }
    if (!handler) {
        err << app.help();
        return kExitUsage;
    }

    try {
        auto result = handler(o);
        if (!result.payload.empty() && result.payload.back() != '\n')
            result.payload.push_back('\n');
        if (o.out.empty())
            out << result.payload;
        else
            write_text_file(o.out, result.payload);
        return result.code;
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const ParseError& e) {
        err << "error: " << e.what();
        if (e.position())
            err << " (position " << *e.position() << ")";
        err << "\n";
        return kExitDomain;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitDomain;
    }
}

} // namespace pfiber::cli
