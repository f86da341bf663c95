#include "pfiber/io.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <random>

using namespace pfiber;

namespace {

const ExtendedReal kInfinite = ExtendedReal::infinite();

std::filesystem::path temp_file(const std::string& name)
{
    return std::filesystem::temp_directory_path() / ("pfiber_io_" + name);
}

} // namespace

TEST(FormatDouble, ShortestRoundTrip)
{
    EXPECT_EQ(format_double(1.5), "1.5");
    EXPECT_EQ(format_double(-0.9), "-0.9");
    EXPECT_EQ(format_double(3.0), "3");
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(-1e6, 1e6);
    for (int i = 0; i < 1000; ++i) {
        const double x = u(rng);
        ASSERT_EQ(std::stod(format_double(x)), x);
    }
}

TEST(ParseVector, AcceptsAndRejects)
{
    EXPECT_EQ(parse_vector("1.5,-0.9,1.1,2.1,1.4"), (SampleVector{1.5, -0.9, 1.1, 2.1, 1.4}));
    EXPECT_EQ(parse_vector(" 1 , 2 "), (SampleVector{1, 2}));
    EXPECT_THROW(parse_vector(""), InvalidInput);
    EXPECT_THROW(parse_vector("1,,2"), ParseError);
    try {
        parse_vector("1,2,x");
        FAIL();
    } catch (const ParseError& e) {
        ASSERT_TRUE(e.position());
        EXPECT_EQ(*e.position(), 4u);
    }
}

TEST(DiagramJson, FormatAndRoundTrip)
{
    const PersistenceDiagram q({{3, 4.5}, {1, kInfinite}, {2, 3.5}});
    const auto text = diagram_to_json(q);
    EXPECT_EQ(text, R"({"points":[{"b":1.0,"d":"inf"},{"b":2.0,"d":3.5},{"b":3.0,"d":4.5}]})");
    EXPECT_EQ(diagram_from_json(text), q);

    std::mt19937_64 rng(2);
    for (int i = 0; i < 200; ++i) {
        const auto d = oracle::random_diagram(rng, i % 5, i % 3);
        ASSERT_EQ(diagram_from_json(diagram_to_json(d)), d);
    }
}

TEST(DiagramJson, Errors)
{
    EXPECT_EQ(diagram_from_json(R"({"points":[{"b":1,"d":"inf"}]})"), PersistenceDiagram({{1, kInfinite}}));
    EXPECT_THROW(diagram_from_json(R"({"points":[{"b":2,"d":1}]})"), ParseError);
    EXPECT_THROW(diagram_from_json(R"({"points":[{"b":2}]})"), ParseError);
    EXPECT_THROW(diagram_from_json(R"({"pts":[]})"), ParseError);
    try {
        diagram_from_json(R"({"points":[{"b":1,"d":)");
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_TRUE(e.position());
    }
    try {
        diagram_from_json(R"({"points":[{"b":1,"d":"inf"},{"b":5,"d":4}]})");
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_NE(std::string(e.what()).find("points[1]"), std::string::npos);
    }
}

TEST(DiagramJson, FileLoading)
{
    const auto path = temp_file("q.json");
    write_text_file(path, R"({"points":[{"b":1.0,"d":"inf"},{"b":2.0,"d":3.5},{"b":3.0,"d":4.5}]})");
    EXPECT_EQ(load_diagram(path), PersistenceDiagram({{1, kInfinite}, {2, 3.5}, {3, 4.5}}));
    std::filesystem::remove(path);
    EXPECT_THROW(load_diagram(path), InvalidInput);
}

TEST(StringsJson, RoundTrip)
{
    const auto p = enumerate_strings(5, 2);
    const auto text = strings_to_json(5, 2, p.elements());
    EXPECT_NE(text.find(R"("count":28)"), std::string::npos);
    EXPECT_EQ(strings_from_json(text), p.elements());
    EXPECT_THROW(strings_from_json(R"({"n":3,"m":2,"strings":["0X0"]})"), InvalidString);
}

TEST(CvJson, RoundTrip)
{
    const std::vector<CriticalValueSequence> list{{{3, 4.5, 1, 3.5, 2}, Parity::Pattern010},
                                                  {{-0.9, 2.1, 1.4}, Parity::Pattern010},
                                                  {{5}, Parity::Pattern101}};
    EXPECT_EQ(cv_list_from_json(cv_list_to_json(list)), list);
    EXPECT_EQ(cv_to_json(list[1]), R"({"parity":"010","values":[-0.9,2.1,1.4]})");
    EXPECT_THROW(cv_list_from_json(R"([{"parity":"011","values":[1]}])"), ParseError);
}

TEST(FieldJson, RoundTrip)
{
    const auto lin = VectorField::linear({3, 4.5, 1, 3.5, 2});
    EXPECT_EQ(field_to_json(lin), R"({"kind":"linear","target":[3.0,4.5,1.0,3.5,2.0]})");
    EXPECT_EQ(field_from_json(field_to_json(lin)), lin);
    const auto per = VectorField::periodic3();
    EXPECT_EQ(field_from_json(field_to_json(per)), per);
    const auto poly = VectorField::polynomial({{{1.0, {1, 1}}, {-2.5, {0, 2}}}, {{-3.0, {0, 0}}}});
    EXPECT_EQ(field_from_json(field_to_json(poly)), poly);
    EXPECT_THROW(field_from_json(R"({"kind":"spiral"})"), ParseError);
    EXPECT_THROW(field_from_json(R"({"kind":"poly","coeffs":[[{"c":1,"e":[1,0]}]]})"), InvalidInput);
}

TEST(Reports, ShapesAreStable)
{
    const PersistenceDiagram q({{1, kInfinite}, {2, 3.5}, {3, 4.5}});
    const auto comps = components_to_json(enumerate_components(q));
    EXPECT_NE(comps.find(R"("enumerated_count":4)"), std::string::npos);
    EXPECT_NE(comps.find(R"("formula_agrees":true)"), std::string::npos);

    const auto sparse = sparsity_to_json(sparsity_margin(q));
    EXPECT_NE(sparse.find(R"("mu_max":0.25)"), std::string::npos);
    EXPECT_NE(sparsity_to_json(sparsity_margin(PersistenceDiagram({{0, kInfinite}}))).find(R"("mu_max":"inf")"),
              std::string::npos);

    const auto obs = integrate(VectorField::linear({1, 2}), {0, 0}, 0.5, 1.0,
                               ObservationTarget{make_neighborhood(PersistenceDiagram({{1, kInfinite}}), 1.0), {}});
    const auto csv = trajectory_to_csv(obs);
    EXPECT_EQ(csv.substr(0, csv.find('\n')), "t,z1,z2,in_NP,dist");
    EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 4);

    const auto svg = diagram_svg(q, make_neighborhood(q, 0.25));
    EXPECT_EQ(svg.rfind("<svg", 0), 0u);
    EXPECT_NE(svg.find("</svg>"), std::string::npos);
}
