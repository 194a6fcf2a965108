#include "bdrd/generators.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "bdrd/errors.hpp"

namespace bdrd {

GeneratorSpec::Family GeneratorSpec::family_from_name(const std::string& name) {
    if (name == "triangles" || name == "disjoint-triangles") return Family::triangles;
    if (name == "matchings") return Family::matchings;
    if (name == "cycle") return Family::cycle;
    if (name == "path") return Family::path;
    if (name == "grid") return Family::grid;
    if (name == "grid-minus-corner") return Family::grid_minus_corner;
    if (name == "random-bounded-degree" || name == "random") return Family::random_bounded_degree;
    throw Error("unknown generator family '" + name + "'");
}

std::string GeneratorSpec::family_name(Family family) {
    switch (family) {
        case Family::triangles: return "triangles";
        case Family::matchings: return "matchings";
        case Family::cycle: return "cycle";
        case Family::path: return "path";
        case Family::grid: return "grid";
        case Family::grid_minus_corner: return "grid-minus-corner";
        case Family::random_bounded_degree: return "random-bounded-degree";
    }
    return "?";
}

Database make_graph_db(ElementId n, const std::vector<std::pair<ElementId, ElementId>>& edges,
                       std::uint32_t degree_bound) {
    std::vector<Tuple> tuples;
    tuples.reserve(edges.size() * 2);
    for (auto [a, b] : edges) {
        if (a == b) throw Error("graph edges must be irreflexive");
        tuples.push_back({a, b});
        tuples.push_back({b, a});
    }
    std::sort(tuples.begin(), tuples.end());
    tuples.erase(std::unique(tuples.begin(), tuples.end()), tuples.end());
    return Database(Schema::graph(), n, degree_bound, {std::move(tuples)});
}

Database make_triangles(std::uint64_t count) {
    std::vector<std::pair<ElementId, ElementId>> edges;
    for (std::uint64_t t = 0; t < count; ++t) {
        ElementId base = static_cast<ElementId>(3 * t);
        edges.push_back({base + 1, base + 2});
        edges.push_back({base + 1, base + 3});
        edges.push_back({base + 2, base + 3});
    }
    return make_graph_db(static_cast<ElementId>(3 * count), edges, 4);
}

Database make_matchings(std::uint64_t count) {
    std::vector<std::pair<ElementId, ElementId>> edges;
    for (std::uint64_t t = 0; t < count; ++t)
        edges.push_back({static_cast<ElementId>(2 * t + 1), static_cast<ElementId>(2 * t + 2)});
    return make_graph_db(static_cast<ElementId>(2 * count), edges, 2);
}

Database make_cycle(std::uint64_t n) {
    if (n < 3) throw Error("a cycle needs at least 3 vertices");
    std::vector<std::pair<ElementId, ElementId>> edges;
    for (std::uint64_t i = 1; i < n; ++i)
        edges.push_back({static_cast<ElementId>(i), static_cast<ElementId>(i + 1)});
    edges.push_back({static_cast<ElementId>(n), 1});
    return make_graph_db(static_cast<ElementId>(n), edges, 4);
}

Database make_path(std::uint64_t n) {
    if (n < 1) throw Error("a path needs at least 1 vertex");
    std::vector<std::pair<ElementId, ElementId>> edges;
    for (std::uint64_t i = 1; i < n; ++i)
        edges.push_back({static_cast<ElementId>(i), static_cast<ElementId>(i + 1)});
    return make_graph_db(static_cast<ElementId>(n), edges, 4);
}

namespace {

std::vector<std::pair<ElementId, ElementId>> grid_edges(std::uint64_t rows, std::uint64_t cols) {
    if (rows < 2 || cols < 2) throw Error("grids need rows, cols >= 2");
    auto id = [cols](std::uint64_t i, std::uint64_t j) {
        return static_cast<ElementId>((i - 1) * cols + j);
    };
    std::vector<std::pair<ElementId, ElementId>> edges;
    for (std::uint64_t i = 1; i <= rows; ++i)
        for (std::uint64_t j = 1; j <= cols; ++j) {
            if (j + 1 <= cols) edges.push_back({id(i, j), id(i, j + 1)});
            if (i + 1 <= rows) edges.push_back({id(i, j), id(i + 1, j)});
        }
    return edges;
}

}  // namespace

Database make_grid(std::uint64_t rows, std::uint64_t cols) {
    return make_graph_db(static_cast<ElementId>(rows * cols), grid_edges(rows, cols), 8);
}

Database make_grid_minus_corner(std::uint64_t rows, std::uint64_t cols) {
    // The removed corner is the last element, so no relabeling is needed.
    const ElementId corner = static_cast<ElementId>(rows * cols);
    std::vector<std::pair<ElementId, ElementId>> edges;
    for (auto [a, b] : grid_edges(rows, cols))
        if (a != corner && b != corner) edges.push_back({a, b});
    return make_graph_db(corner - 1, edges, 8);
}

namespace {

Database make_random_bounded_degree(std::uint64_t n, std::uint32_t degree_bound,
                                    std::uint64_t seed) {
    if (degree_bound < 2) throw Error("random graphs need a tuple degree bound >= 2");
    const std::uint32_t max_graph_degree = degree_bound / 2;
    std::mt19937_64 rng(seed);
    auto draw = [&rng](std::uint64_t span) {
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % span;
        std::uint64_t x;
        do {
            x = rng();
        } while (x >= limit);
        return x % span;
    };

    std::vector<std::uint32_t> degree(n + 1, 0);
    std::set<std::pair<ElementId, ElementId>> edge_set;
    const std::uint64_t attempts = 2 * n * std::max<std::uint64_t>(max_graph_degree, 1);
    for (std::uint64_t t = 0; t < attempts && n >= 2; ++t) {
        ElementId a = static_cast<ElementId>(1 + draw(n));
        ElementId b = static_cast<ElementId>(1 + draw(n));
        if (a == b) continue;
        if (a > b) std::swap(a, b);
        if (degree[a] >= max_graph_degree || degree[b] >= max_graph_degree) continue;
        if (!edge_set.insert({a, b}).second) continue;
        ++degree[a];
        ++degree[b];
    }
    std::vector<std::pair<ElementId, ElementId>> edges(edge_set.begin(), edge_set.end());
    return make_graph_db(static_cast<ElementId>(n), edges, degree_bound);
}

}  // namespace

Database generate(const GeneratorSpec& spec) {
    using Family = GeneratorSpec::Family;
    switch (spec.family) {
        case Family::triangles: return make_triangles(spec.count);
        case Family::matchings: return make_matchings(spec.count);
        case Family::cycle: return make_cycle(spec.n);
        case Family::path: return make_path(spec.n);
        case Family::grid: return make_grid(spec.rows, spec.cols);
        case Family::grid_minus_corner: return make_grid_minus_corner(spec.rows, spec.cols);
        case Family::random_bounded_degree:
            return make_random_bounded_degree(spec.n, spec.degree_bound ? spec.degree_bound : 4,
                                              spec.seed);
    }
    throw Error("unreachable generator family");
}

Database disjoint_union(const Database& a, const Database& b) {
    if (!(a.schema() == b.schema())) throw Error("disjoint_union: schemas differ");
    const ElementId shift = a.domain_size();
    std::vector<std::vector<Tuple>> tuples = a.all_tuples();
    for (std::size_t r = 0; r < tuples.size(); ++r) {
        for (const Tuple& t : b.tuples_of(r)) {
            Tuple shifted;
            shifted.reserve(t.size());
            for (ElementId e : t) shifted.push_back(e + shift);
            tuples[r].push_back(std::move(shifted));
        }
        // Shifted tuples start past a's domain, so the list stays sorted.
    }
    return Database(a.schema_ptr(), a.domain_size() + b.domain_size(),
                    std::max(a.degree_bound(), b.degree_bound()), std::move(tuples));
}

Database add_isolated_element(const Database& db) {
    return Database(db.schema_ptr(), db.domain_size() + 1, db.degree_bound(), db.all_tuples());
}

GeneratorSpec with_target_size(GeneratorSpec spec, std::uint64_t size) {
    using Family = GeneratorSpec::Family;
    switch (spec.family) {
        case Family::triangles: spec.count = std::max<std::uint64_t>(1, size / 3); break;
        case Family::matchings: spec.count = std::max<std::uint64_t>(1, size / 2); break;
        case Family::cycle: spec.n = std::max<std::uint64_t>(3, size); break;
        case Family::path: spec.n = std::max<std::uint64_t>(1, size); break;
        case Family::grid:
        case Family::grid_minus_corner: {
            std::uint64_t rows = std::max<std::uint64_t>(
                2, static_cast<std::uint64_t>(std::sqrt(static_cast<double>(size))));
            spec.rows = rows;
            spec.cols = std::max<std::uint64_t>(2, size / rows);
            break;
        }
        case Family::random_bounded_degree: spec.n = std::max<std::uint64_t>(2, size); break;
    }
    return spec;
}

}  // namespace bdrd
