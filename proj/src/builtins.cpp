#include "cumlab/builtins.hpp"

#include "cumlab/errors.hpp"

namespace cumlab {

TabFn sum_function(const SpacePtr& space)
{
    return TabFn::from_atoms(space, [](std::span<const double> x) {
        double s = 0.0;
        for (double v : x)
            s += v;
        return Complex{s};
    });
}

TabFn adjacent_products(const SpacePtr& space, bool cyclic)
{
    return TabFn::from_atoms(space, [cyclic](std::span<const double> x) {
        double s = 0.0;
        for (std::size_t j = 0; j + 1 < x.size(); ++j)
            s += x[j] * x[j + 1];
        if (cyclic && x.size() > 2)
            s += x.back() * x.front();
        return Complex{s};
    });
}

int vertices_for_edges(int n_edges)
{
    for (int v = 2; v * (v - 1) / 2 <= n_edges; ++v)
        if (v * (v - 1) / 2 == n_edges)
            return v;
    return -1;
}

int edge_coordinate(int vertices, int a, int b)
{
    require(0 <= a && a < b && b < vertices, "edge endpoints out of order or range");
    // Pairs (a, *) start after all pairs with a smaller first vertex.
    return a * vertices - a * (a + 1) / 2 + (b - a - 1);
}

TabFn triangle_count(const SpacePtr& space, int vertices)
{
    require(vertices >= 2 && vertices * (vertices - 1) / 2 == space->dim(),
            "triangle_count needs C(v,2) coordinates");
    for (int j = 0; j < space->dim(); ++j)
        require(space->support(j) == 2, "triangle_count needs binary edge indicators");
    return TabFn::from(space, [vertices](const Point& x) {
        int t = 0;
        for (int a = 0; a < vertices; ++a)
            for (int b = a + 1; b < vertices; ++b) {
                if (x[edge_coordinate(vertices, a, b)] != 1)
                    continue;
                for (int c = b + 1; c < vertices; ++c)
                    if (x[edge_coordinate(vertices, a, c)] == 1 && x[edge_coordinate(vertices, b, c)] == 1)
                        ++t;
            }
        return Complex{static_cast<double>(t)};
    });
}

} // namespace cumlab
