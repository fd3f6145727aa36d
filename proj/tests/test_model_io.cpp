#include <string>

#include "cumlab/errors.hpp"
#include "cumlab/model_io.hpp"
#include "doctest.h"

using namespace cumlab;

namespace {

std::string error_of(const std::string& text, std::size_t cap = kDefaultMaxLattice)
{
    try {
        parse_model(text, cap);
    } catch (const std::exception& e) {
        return e.what();
    }
    return "";
}

bool contains(const std::string& s, const std::string& part)
{
    return s.find(part) != std::string::npos;
}

} // namespace

TEST_CASE("table models")
{
    const auto m = parse_model(R"({
      "components": [{"atoms": [0, 1], "probs": [0.5, 0.5]},
                     {"atoms": [0, 1, 2], "probs": [0.2, 0.3, 0.5]}],
      "function": {"kind": "table", "re": [0, 1, 2, 3, 4, 5], "im": [0, 0, 0, 0, 0, -1]}
    })");
    CHECK(m.kind == "table");
    CHECK(m.space->dim() == 2);
    CHECK(m.space->lattice_size() == 6);
    CHECK(m.f.values()[4] == Complex(4.0, 0.0));
    CHECK(m.f.values()[5] == Complex(5.0, -1.0));

    const auto real = parse_model(R"({"components": [{"atoms": [1, 2], "probs": [0.25, 0.75]}],
                                      "function": {"kind": "table", "re": [3, 7]}})");
    CHECK(real.f.values()[1] == Complex(7.0, 0.0));
}

TEST_CASE("builtin models")
{
    const auto sum = parse_model(R"({"components": [{"atoms": [0, 1], "probs": [0.5, 0.5]},
                                                    {"atoms": [0, 1], "probs": [0.5, 0.5]},
                                                    {"atoms": [0, 1], "probs": [0.5, 0.5]}],
                                     "function": {"kind": "builtin", "name": "sum"}})");
    CHECK(sum.kind == "sum");
    CHECK(sum.f.values().back() == Complex(3.0));

    const std::string three = R"({"atoms": [0, 1], "probs": [0.5, 0.5]})";
    const std::string comps = "[" + three + "," + three + "," + three + "]";
    const auto chain =
        parse_model(R"({"components": )" + comps + R"(, "function": {"kind": "builtin", "name": "product_pairs"}})");
    const auto ring = parse_model(R"({"components": )" + comps +
                                  R"(, "function": {"kind": "builtin", "name": "product_pairs", "params": {"cyclic": true}}})");
    CHECK(chain.f.values().back() == Complex(2.0));
    CHECK(ring.f.values().back() == Complex(3.0));

    const auto tri =
        parse_model(R"({"components": )" + comps + R"(, "function": {"kind": "builtin", "name": "triangle_count"}})");
    CHECK(tri.f.values().back() == Complex(1.0));
    CHECK(tri.f.values().front() == Complex(0.0));
    CHECK(contains(error_of(R"({"components": )" + comps +
                            R"(, "function": {"kind": "builtin", "name": "triangle_count", "params": {"vertices": 4}}})"),
                   "triangle_count"));
    CHECK(contains(error_of(R"({"components": )" + comps + R"(, "function": {"kind": "builtin", "name": "cube"}})"),
                   "unknown builtin"));
}

TEST_CASE("syntax errors carry line and column")
{
    CHECK(line_column("ab\ncd", 0) == std::pair<std::size_t, std::size_t>{1, 1});
    CHECK(line_column("ab\ncd", 4) == std::pair<std::size_t, std::size_t>{2, 2});
    const std::string bad = "{\n  \"components\": [1,,2]\n}";
    const auto msg = error_of(bad);
    CHECK(contains(msg, "line 2"));
    CHECK(contains(msg, "column 20"));
    CHECK_THROWS_AS(parse_model(bad), ValidationError);
}

TEST_CASE("schema errors name the path")
{
    CHECK(contains(error_of(R"({"function": {"kind": "table", "re": [1]}})"), "components"));
    CHECK(contains(error_of(R"({"components": [{"atoms": [0, 1], "probs": [0.5]}],
                                "function": {"kind": "table", "re": [1, 2]}})"),
                   "/components/0"));
    CHECK(contains(error_of(R"({"components": [{"atoms": [0, "x"], "probs": [0.5, 0.5]}],
                                "function": {"kind": "table", "re": [1, 2]}})"),
                   "/components/0/atoms/1"));
    CHECK(contains(error_of(R"({"components": [{"atoms": [0, 1], "probs": [0.5, 0.5]}],
                                "function": {"kind": "table", "re": [1, 2, 3]}})"),
                   "/function/re"));
    CHECK(contains(error_of(R"({"components": [{"atoms": [0, 1], "probs": [0.5, 0.5]}],
                                "function": {"kind": "table", "re": [1, 2], "im": [1]}})"),
                   "/function/im"));
    CHECK(contains(error_of(R"({"components": [{"atoms": [0, 1], "probs": [0.5, 0.5]}],
                                "function": {"kind": "spline"}})"),
                   "/function/kind"));
    CHECK(contains(error_of(R"({"components": [{"atoms": [0, 1], "probs": [0.7, 0.5]}],
                                "function": {"kind": "table", "re": [1, 2]}})"),
                   "1"));
}

TEST_CASE("lattice cap")
{
    const std::string c = R"({"atoms": [0, 1], "probs": [0.5, 0.5]})";
    const std::string doc = R"({"components": [)" + c + "," + c + "," + c +
                            R"(], "function": {"kind": "builtin", "name": "sum"}})";
    CHECK_THROWS_AS(parse_model(doc, 4), CapExceeded);
    CHECK_NOTHROW(parse_model(doc, 8));
}

TEST_CASE("output helpers")
{
    CHECK(format_double(0.1) == "0.10000000000000001");
    CHECK(format_double(70) == "70");
    CHECK_THROWS_AS(load_model("/nonexistent/model.json"), ValidationError);
}
