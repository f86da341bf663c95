#ifndef PFIBER_IO_HPP
#define PFIBER_IO_HPP

#include "pfiber/cellular_string.hpp"
#include "pfiber/dynamics.hpp"
#include "pfiber/errors.hpp"
#include "pfiber/fiber.hpp"
#include "pfiber/persistence.hpp"
#include "pfiber/poset_topology.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace pfiber {

/// Malformed input text. `position` is a byte offset when known.
class ParseError : public InvalidInput {
public:
    ParseError(const std::string& what, std::optional<std::size_t> position = {})
        : InvalidInput(what), position_(position)
    {
    }
    std::optional<std::size_t> position() const noexcept { return position_; }

private:
    std::optional<std::size_t> position_;
};

/// Shortest decimal text that reads back to the same double.
std::string format_double(double x);

/// Comma-separated list of reals, e.g. "1.5,-0.9,1.1".
SampleVector parse_vector(std::string_view text);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

// Diagrams: {"points":[{"b":1.0,"d":"inf"},{"b":2.0,"d":3.5}]} in canonical order.
std::string diagram_to_json(const PersistenceDiagram& d);
PersistenceDiagram diagram_from_json(std::string_view text);
PersistenceDiagram load_diagram(const std::filesystem::path& path);

// Strings: {"n":5,"m":2,"strings":["0X0X0",...]}.
std::string strings_to_json(std::size_t n, std::size_t m, const std::vector<CellularString>& strings);
std::vector<CellularString> strings_from_json(std::string_view text);

// Critical value sequences: [{"parity":"010","values":[...]},...].
std::string cv_list_to_json(const std::vector<CriticalValueSequence>& list);
std::vector<CriticalValueSequence> cv_list_from_json(std::string_view text);
std::string cv_to_json(const CriticalValueSequence& cv);

std::string components_to_json(const ComponentEnumeration& e);

// Fields: {"kind":"linear","target":[...]}, {"kind":"periodic3"},
// {"kind":"poly","coeffs":[[{"c":1.0,"e":[1,0]},...],...]}.
std::string field_to_json(const VectorField& f);
VectorField field_from_json(std::string_view text);
VectorField load_field(const std::filesystem::path& path);

/// Header t,z1..zN,in_NP,dist; unobserved columns are left empty.
std::string trajectory_to_csv(const TrajectoryObservation& obs);

std::string invariance_report_to_json(const InvarianceReport& r);
std::string fixed_point_to_json(const FixedPointResult& r);
std::string contractibility_to_json(const ContractibilityReport& r);
std::string betti_to_json(const BettiReport& r);
std::string sparsity_to_json(const SparsityMargin& m);

/// Points, the diagonal and, when given, the N_P boxes and strip.
std::string diagram_svg(const PersistenceDiagram& d, const std::optional<NeighborhoodSpec>& neighborhood = {});

} // namespace pfiber

#endif
