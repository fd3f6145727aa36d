#include "cumlab/model_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "cumlab/builtins.hpp"
#include "cumlab/errors.hpp"

namespace cumlab {

namespace {

using nlohmann::json;

const json& field(const json& obj, const char* key, const std::string& path)
{
    if (!obj.is_object())
        throw ValidationError("model: " + path + " must be an object");
    auto it = obj.find(key);
    if (it == obj.end())
        throw ValidationError("model: missing field " + path + "/" + key);
    return *it;
}

std::vector<double> numbers(const json& arr, const std::string& path)
{
    if (!arr.is_array())
        throw ValidationError("model: " + path + " must be an array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < arr.size(); ++i) {
        if (!arr[i].is_number())
            throw ValidationError("model: " + path + "/" + std::to_string(i) + " must be a number");
        out.push_back(arr[i].get<double>());
    }
    return out;
}

TabFn builtin_function(const SpacePtr& space, const json& fn)
{
    const auto& name_node = field(fn, "name", "/function");
    if (!name_node.is_string())
        throw ValidationError("model: /function/name must be a string");
    const auto name = name_node.get<std::string>();
    const json params = fn.contains("params") ? fn.at("params") : json::object();
    if (!params.is_object())
        throw ValidationError("model: /function/params must be an object");

    if (name == "sum")
        return sum_function(space);
    if (name == "product_pairs") {
        const bool cyclic = params.value("cyclic", false);
        return adjacent_products(space, cyclic);
    }
    if (name == "triangle_count") {
        int vertices = vertices_for_edges(space->dim());
        if (params.contains("vertices")) {
            if (!params.at("vertices").is_number_integer())
                throw ValidationError("model: /function/params/vertices must be an integer");
            vertices = params.at("vertices").get<int>();
        }
        require(vertices >= 0, "model: triangle_count needs C(v,2) components");
        return triangle_count(space, vertices);
    }
    throw ValidationError("model: unknown builtin '" + name + "' (expected sum, product_pairs or triangle_count)");
}

} // namespace

std::pair<std::size_t, std::size_t> line_column(std::string_view text, std::size_t byte)
{
    std::size_t line = 1;
    std::size_t col = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return {line, col};
}

Model parse_model(std::string_view text, std::size_t max_lattice)
{
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        // e.byte is one past the offending character.
        const auto [line, col] = line_column(text, e.byte > 0 ? e.byte - 1 : 0);
        throw ValidationError("model: JSON syntax error at line " + std::to_string(line) + ", column " +
                              std::to_string(col) + ": " + e.what());
    }

    const auto& comps = field(doc, "components", "");
    if (!comps.is_array() || comps.empty())
        throw ValidationError("model: /components must be a nonempty array");
    std::vector<FiniteComponent> components;
    for (std::size_t j = 0; j < comps.size(); ++j) {
        const std::string path = "/components/" + std::to_string(j);
        FiniteComponent c;
        c.atoms = numbers(field(comps[j], "atoms", path), path + "/atoms");
        c.probs = numbers(field(comps[j], "probs", path), path + "/probs");
        require(c.atoms.size() == c.probs.size(), "model: " + path + " atoms and probs differ in length");
        components.push_back(std::move(c));
    }
    auto space = ProductSpace::make(std::move(components), max_lattice);

    const auto& fn = field(doc, "function", "");
    const auto& kind_node = field(fn, "kind", "/function");
    if (!kind_node.is_string())
        throw ValidationError("model: /function/kind must be a string");
    const auto kind = kind_node.get<std::string>();
    if (kind == "table") {
        const auto re = numbers(field(fn, "re", "/function"), "/function/re");
        std::vector<double> im(re.size(), 0.0);
        if (fn.contains("im"))
            im = numbers(fn.at("im"), "/function/im");
        require(re.size() == space->lattice_size(),
                "model: /function/re has " + std::to_string(re.size()) + " entries, lattice has " +
                    std::to_string(space->lattice_size()));
        require(im.size() == re.size(), "model: /function/im must match /function/re in length");
        Table t(re.size());
        for (std::size_t i = 0; i < re.size(); ++i)
            t[i] = Complex(re[i], im[i]);
        return {space, TabFn(space, std::move(t)), "table"};
    }
    if (kind == "builtin") {
        auto f = builtin_function(space, fn);
        return {space, std::move(f), fn.at("name").get<std::string>()};
    }
    throw ValidationError("model: /function/kind must be \"table\" or \"builtin\"");
}

Model load_model(const std::string& path, std::size_t max_lattice)
{
    std::ifstream in(path);
    if (!in)
        throw ValidationError("cannot open model file " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_model(buf.str(), max_lattice);
}

nlohmann::json decomposition_json(const Decomposition& pi)
{
    json parts = json::array();
    for (const auto& [v, table] : pi.parts()) {
        json re = json::array();
        json im = json::array();
        for (const auto& c : table) {
            re.push_back(c.real());
            im.push_back(c.imag());
        }
        parts.push_back({{"subset", v.elements()}, {"re", re}, {"im", im}});
    }
    return {{"dim", pi.space().dim()}, {"parts", parts}};
}

std::string format_double(double x)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

} // namespace cumlab
