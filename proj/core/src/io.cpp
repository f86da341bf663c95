#include "pfiber/io.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace pfiber {
namespace {

using Json = nlohmann::ordered_json;

Json parse_json(std::string_view text)
{
    try {
        return Json::parse(text.begin(), text.end());
    } catch (const Json::parse_error& e) {
        throw ParseError(std::string("malformed JSON at byte ") + std::to_string(e.byte) + ": " + e.what(), e.byte);
    }
}

[[noreturn]] void fail(const std::string& where, const std::string& what)
{
    throw ParseError(where + ": " + what);
}

double finite_number(const Json& j, const std::string& where)
{
    if (!j.is_number())
        fail(where, "expected a number");
    const double x = j.get<double>();
    if (!std::isfinite(x))
        fail(where, "number is not finite");
    return x;
}

std::vector<double> number_array(const Json& j, const std::string& where)
{
    if (!j.is_array())
        fail(where, "expected an array of numbers");
    std::vector<double> out;
    out.reserve(j.size());
    for (std::size_t i = 0; i < j.size(); ++i)
        out.push_back(finite_number(j[i], where + "[" + std::to_string(i) + "]"));
    return out;
}

const Json& member(const Json& obj, const char* key, const std::string& where)
{
    if (!obj.is_object())
        fail(where, "expected an object");
    auto it = obj.find(key);
    if (it == obj.end())
        fail(where, std::string("missing key '") + key + "'");
    return *it;
}

Json diagram_json(const PersistenceDiagram& d)
{
    Json points = Json::array();
    for (const auto& p : d) {
        Json pt;
        pt["b"] = p.birth;
        if (p.death.is_infinite())
            pt["d"] = "inf";
        else
            pt["d"] = p.death.value();
        points.push_back(std::move(pt));
    }
    Json out;
    out["points"] = std::move(points);
    return out;
}

PersistenceDiagram diagram_of(const Json& j)
{
    const auto& points = member(j, "points", "diagram");
    if (!points.is_array())
        fail("points", "expected an array");
    std::vector<PersistencePoint> out;
    for (std::size_t i = 0; i < points.size(); ++i) {
        const std::string where = "points[" + std::to_string(i) + "]";
        PersistencePoint p;
        p.birth = finite_number(member(points[i], "b", where), where + ".b");
        const auto& d = member(points[i], "d", where);
        if (d.is_string()) {
            if (d.get<std::string>() != "inf")
                fail(where + ".d", "the only accepted string is \"inf\"");
            p.death = ExtendedReal::infinite();
        } else {
            const double death = finite_number(d, where + ".d");
            if (death < p.birth)
                fail(where, "death " + format_double(death) + " is below birth " + format_double(p.birth));
            p.death = death;
        }
        out.push_back(p);
    }
    return PersistenceDiagram(std::move(out));
}

const char* parity_name(Parity p)
{
    return p == Parity::Pattern010 ? "010" : "101";
}

Json cv_json(const CriticalValueSequence& cv)
{
    Json out;
    out["parity"] = parity_name(cv.parity);
    out["values"] = cv.values;
    return out;
}

CriticalValueSequence cv_of(const Json& j, const std::string& where)
{
    CriticalValueSequence cv;
    const auto& parity = member(j, "parity", where);
    if (parity == "010")
        cv.parity = Parity::Pattern010;
    else if (parity == "101")
        cv.parity = Parity::Pattern101;
    else
        fail(where + ".parity", "expected \"010\" or \"101\"");
    cv.values = number_array(member(j, "values", where), where + ".values");
    return cv;
}

Json betti_json(const BettiReport& r)
{
    Json out;
    out["betti"] = r.betti;
    out["reduced"] = r.reduced;
    out["euler"] = r.euler;
    out["euler_consistent"] = r.euler_consistent;
    out["boundary_squares_to_zero"] = r.boundary_squares_to_zero;
    out["acyclic"] = r.acyclic();
    return out;
}

Json extended_json(const ExtendedReal& x)
{
    if (x.is_infinite())
        return "inf";
    return x.value();
}

template <class T>
Json optional_json(const std::optional<T>& x)
{
    if (!x)
        return nullptr;
    return *x;
}

} // namespace

std::string format_double(double x)
{
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
    if (ec != std::errc())
        throw InvalidInput("cannot format number");
    return std::string(buf, ptr);
}

SampleVector parse_vector(std::string_view text)
{
    SampleVector out;
    std::size_t pos = 0;
    while (true) {
        const std::size_t comma = text.find(',', pos);
        auto item = text.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos);
        while (!item.empty() && item.front() == ' ')
            item.remove_prefix(1);
        while (!item.empty() && item.back() == ' ')
            item.remove_suffix(1);
        if (!item.empty() && item.front() == '+')
            item.remove_prefix(1);
        double x = 0.0;
        auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), x);
        if (item.empty() || ec != std::errc() || ptr != item.data() + item.size())
            throw ParseError("cannot read a number at position " + std::to_string(pos) + " of the vector", pos);
        out.push_back(x);
        if (comma == std::string_view::npos)
            break;
        pos = comma + 1;
    }
    validate_sample(out);
    return out;
}

std::string read_text_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw InvalidInput("cannot open '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw InvalidInput("cannot write '" + path.string() + "'");
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
}

std::string diagram_to_json(const PersistenceDiagram& d)
{
    return diagram_json(d).dump();
}

PersistenceDiagram diagram_from_json(std::string_view text)
{
    return diagram_of(parse_json(text));
}

PersistenceDiagram load_diagram(const std::filesystem::path& path)
{
    try {
        return diagram_from_json(read_text_file(path));
    } catch (const ParseError& e) {
        throw ParseError(path.string() + ": " + e.what(), e.position());
    }
}

std::string strings_to_json(std::size_t n, std::size_t m, const std::vector<CellularString>& strings)
{
    Json out;
    out["n"] = n;
    out["m"] = m;
    Json list = Json::array();
    for (const auto& s : strings)
        list.push_back(s.word());
    out["count"] = strings.size();
    out["strings"] = std::move(list);
    return out.dump();
}

std::vector<CellularString> strings_from_json(std::string_view text)
{
    const auto j = parse_json(text);
    const auto& list = member(j, "strings", "document");
    if (!list.is_array())
        fail("strings", "expected an array");
    std::optional<std::size_t> m;
    if (auto it = j.find("m"); it != j.end() && it->is_number_unsigned())
        m = it->get<std::size_t>();
    std::vector<CellularString> out;
    for (std::size_t i = 0; i < list.size(); ++i) {
        if (!list[i].is_string())
            fail("strings[" + std::to_string(i) + "]", "expected a string");
        out.push_back(parse_string(list[i].get<std::string>(), m));
    }
    return out;
}

std::string cv_to_json(const CriticalValueSequence& cv)
{
    return cv_json(cv).dump();
}

std::string cv_list_to_json(const std::vector<CriticalValueSequence>& list)
{
    Json out = Json::array();
    for (const auto& cv : list)
        out.push_back(cv_json(cv));
    return out.dump();
}

std::vector<CriticalValueSequence> cv_list_from_json(std::string_view text)
{
    const auto j = parse_json(text);
    if (!j.is_array())
        fail("document", "expected an array");
    std::vector<CriticalValueSequence> out;
    for (std::size_t i = 0; i < j.size(); ++i)
        out.push_back(cv_of(j[i], "[" + std::to_string(i) + "]"));
    return out;
}

std::string components_to_json(const ComponentEnumeration& e)
{
    Json out;
    out["diagram"] = diagram_json(e.diagram);
    out["formula_count"] = e.formula_count;
    out["enumerated_count"] = e.enumerated_count;
    out["formula_agrees"] = e.formula_agrees;
    Json list = Json::array();
    for (const auto& cv : e.components) {
        Json c;
        c["cv"] = cv.values;
        c["parity"] = parity_name(cv.parity);
        list.push_back(std::move(c));
    }
    out["components"] = std::move(list);
    return out.dump();
}

std::string field_to_json(const VectorField& f)
{
    Json out;
    switch (f.kind()) {
    case VectorField::Kind::Linear:
        out["kind"] = "linear";
        out["target"] = f.target();
        break;
    case VectorField::Kind::Periodic3:
        out["kind"] = "periodic3";
        break;
    case VectorField::Kind::Polynomial: {
        out["kind"] = "poly";
        Json coeffs = Json::array();
        for (const auto& row : f.terms()) {
            Json terms = Json::array();
            for (const auto& mono : row) {
                Json t;
                t["c"] = mono.coeff;
                t["e"] = mono.exponents;
                terms.push_back(std::move(t));
            }
            coeffs.push_back(std::move(terms));
        }
        out["coeffs"] = std::move(coeffs);
        break;
    }
    }
    return out.dump();
}

VectorField field_from_json(std::string_view text)
{
    const auto j = parse_json(text);
    const auto& kind = member(j, "kind", "field");
    if (kind == "linear")
        return VectorField::linear(number_array(member(j, "target", "field"), "target"));
    if (kind == "periodic3")
        return VectorField::periodic3();
    if (kind != "poly")
        fail("field.kind", "expected \"linear\", \"periodic3\" or \"poly\"");

    const auto& coeffs = member(j, "coeffs", "field");
    if (!coeffs.is_array())
        fail("coeffs", "expected an array per coordinate");
    std::vector<std::vector<Monomial>> terms;
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
        const std::string row_where = "coeffs[" + std::to_string(i) + "]";
        if (!coeffs[i].is_array())
            fail(row_where, "expected an array of monomials");
        std::vector<Monomial> row;
        for (std::size_t k = 0; k < coeffs[i].size(); ++k) {
            const std::string where = row_where + "[" + std::to_string(k) + "]";
            Monomial mono;
            mono.coeff = finite_number(member(coeffs[i][k], "c", where), where + ".c");
            const auto& e = member(coeffs[i][k], "e", where);
            if (!e.is_array())
                fail(where + ".e", "expected an array of exponents");
            for (const auto& x : e) {
                if (!x.is_number_unsigned())
                    fail(where + ".e", "exponents must be nonnegative integers");
                mono.exponents.push_back(x.get<unsigned>());
            }
            row.push_back(std::move(mono));
        }
        terms.push_back(std::move(row));
    }
    return VectorField::polynomial(std::move(terms));
}

VectorField load_field(const std::filesystem::path& path)
{
    return field_from_json(read_text_file(path));
}

std::string trajectory_to_csv(const TrajectoryObservation& obs)
{
    std::string out = "t";
    const std::size_t n = obs.states.empty() ? 0 : obs.states.front().size();
    for (std::size_t i = 1; i <= n; ++i)
        out += ",z" + std::to_string(i);
    out += ",in_NP,dist\n";
    for (std::size_t k = 0; k < obs.times.size(); ++k) {
        out += format_double(obs.times[k]);
        for (double x : obs.states[k]) {
            out += ',';
            out += format_double(x);
        }
        out += ',';
        if (k < obs.in_np.size())
            out += obs.in_np[k] ? '1' : '0';
        out += ',';
        if (k < obs.distances.size())
            out += format_double(obs.distances[k]);
        out += '\n';
    }
    return out;
}

std::string invariance_report_to_json(const InvarianceReport& r)
{
    Json out;
    out["certification"] = r.certification;
    out["mu"] = r.mu;
    out["dt"] = r.dt;
    out["horizon"] = r.horizon;
    out["all_invariant"] = r.all_invariant();
    out["seed_count"] = r.seeds.size();
    out["started_in_np"] = r.started_count();
    Json comps = Json::array();
    for (const auto& cv : r.components)
        comps.push_back(cv_json(cv));
    out["components"] = std::move(comps);
    Json seeds = Json::array();
    for (const auto& s : r.seeds) {
        Json j;
        j["seed"] = s.seed_index;
        j["started_in_np"] = s.started_in_np;
        j["invariant"] = s.invariant;
        j["exit_time"] = optional_json(s.exit_time);
        j["exit_diagram"] = s.exit_diagram ? diagram_json(*s.exit_diagram) : Json(nullptr);
        j["component"] = optional_json(s.component);
        j["initial_distance"] = s.initial_distance;
        j["max_distance"] = s.max_distance;
        j["ball_exit_time"] = optional_json(s.ball_exit_time);
        j["proof_chain_consistent"] = s.proof_chain_consistent;
        j["max_displacement"] = s.max_displacement;
        j["error"] = optional_json(s.error);
        seeds.push_back(std::move(j));
    }
    out["seeds"] = std::move(seeds);
    return out.dump();
}

std::string fixed_point_to_json(const FixedPointResult& r)
{
    Json out;
    out["found"] = r.point.has_value();
    out["point"] = optional_json(r.point);
    out["residual"] = r.residual;
    out["newton_steps"] = r.newton_steps;
    out["integration_time"] = r.integration_time;
    out["singular_jacobians"] = r.singular_jacobians;
    return out.dump();
}

std::string betti_to_json(const BettiReport& r)
{
    return betti_json(r).dump();
}

std::string contractibility_to_json(const ContractibilityReport& r)
{
    Json out;
    out["n"] = r.n;
    out["m"] = r.m;
    out["poset_size"] = r.poset_size;
    out["simplex_counts"] = r.simplex_counts;
    out["homology"] = betti_json(r.homology);
    out["contractible"] = r.contractible();
    out["morphism_ok"] = r.morphism_ok;
    out["fixes_tail_ok"] = r.fixes_tail_ok;
    out["lands_in_tail_ok"] = r.lands_in_tail_ok;
    out["witnesses_ok"] = r.witnesses_ok;
    out["filtration_ok"] = r.filtration_ok;
    out["failures"] = r.failures;
    out["passed"] = r.passed();
    return out.dump();
}

std::string sparsity_to_json(const SparsityMargin& m)
{
    Json out;
    out["is_sparse"] = m.is_sparse;
    out["mu_max"] = extended_json(m.mu_max);
    out["mu"] = m.mu;
    return out.dump();
}

std::string diagram_svg(const PersistenceDiagram& d, const std::optional<NeighborhoodSpec>& neighborhood)
{
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (const auto& p : d) {
        lo = std::min(lo, p.birth);
        hi = std::max(hi, p.birth);
        if (p.death.is_finite())
            hi = std::max(hi, p.death.value());
    }
    if (d.empty()) {
        lo = 0.0;
        hi = 1.0;
    }
    const double pad = neighborhood ? neighborhood->mu : 0.0;
    lo -= pad;
    hi += pad;
    const double span = hi > lo ? hi - lo : 1.0;
    lo -= 0.1 * span;
    hi += 0.1 * span;
    const double range = hi - lo;

    // Plot area 400x400 at (50, 30); one extra band above holds infinite deaths.
    constexpr double kSize = 400.0, kLeft = 50.0, kTop = 30.0, kInfBand = 30.0;
    auto x_of = [&](double v) { return kLeft + (v - lo) / range * kSize; };
    auto y_of = [&](double v) { return kTop + kInfBand + (hi - v) / range * kSize; };
    const double y_inf = kTop + kInfBand / 2;
    auto f = [](double v) { return format_double(std::round(v * 100) / 100); };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"500\" height=\"500\" viewBox=\"0 0 500 500\">\n";
    svg << "  <rect x=\"" << f(kLeft) << "\" y=\"" << f(kTop) << "\" width=\"" << f(kSize) << "\" height=\""
        << f(kSize + kInfBand) << "\" fill=\"none\" stroke=\"#888\"/>\n";
    svg << "  <line x1=\"" << f(x_of(lo)) << "\" y1=\"" << f(y_of(lo)) << "\" x2=\"" << f(x_of(hi)) << "\" y2=\""
        << f(y_of(hi)) << "\" stroke=\"#444\" stroke-dasharray=\"4 3\"/>\n";
    svg << "  <text x=\"" << f(kLeft - 30) << "\" y=\"" << f(y_inf + 4) << "\" font-size=\"12\">inf</text>\n";
    svg << "  <text x=\"" << f(kLeft) << "\" y=\"" << f(kTop + kInfBand + kSize + 18) << "\" font-size=\"12\">"
        << format_double(lo) << "</text>\n";
    svg << "  <text x=\"" << f(kLeft + kSize - 30) << "\" y=\"" << f(kTop + kInfBand + kSize + 18)
        << "\" font-size=\"12\">" << format_double(hi) << "</text>\n";

    if (neighborhood) {
        const double mu = neighborhood->mu;
        for (const auto& c : neighborhood->diagram) {
            if (c.death.is_infinite()) {
                svg << "  <line x1=\"" << f(x_of(c.birth - mu)) << "\" y1=\"" << f(y_inf) << "\" x2=\""
                    << f(x_of(c.birth + mu)) << "\" y2=\"" << f(y_inf)
                    << "\" stroke=\"#3a7\" stroke-width=\"6\" opacity=\"0.4\"/>\n";
                continue;
            }
            const double b = c.birth, dd = c.death.value();
            svg << "  <polygon points=\"" << f(x_of(b - mu)) << ',' << f(y_of(dd)) << ' ' << f(x_of(b)) << ','
                << f(y_of(dd + mu)) << ' ' << f(x_of(b + mu)) << ',' << f(y_of(dd)) << ' ' << f(x_of(b)) << ','
                << f(y_of(dd - mu)) << "\" fill=\"#3a7\" opacity=\"0.3\"/>\n";
        }
        const double s0 = neighborhood->strip_birth_lo, s1 = neighborhood->strip_birth_hi;
        svg << "  <polygon points=\"" << f(x_of(s0)) << ',' << f(y_of(s0)) << ' ' << f(x_of(s1)) << ','
            << f(y_of(s1)) << ' ' << f(x_of(s1)) << ',' << f(y_of(s1 + mu)) << ' ' << f(x_of(s0)) << ','
            << f(y_of(s0 + mu)) << "\" fill=\"#c93\" opacity=\"0.3\"/>\n";
    }

    for (const auto& p : d) {
        const double y = p.death.is_infinite() ? y_inf : y_of(p.death.value());
        svg << "  <circle cx=\"" << f(x_of(p.birth)) << "\" cy=\"" << f(y) << "\" r=\"4\" fill=\"#d33\"/>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

} // namespace pfiber
