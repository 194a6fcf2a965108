#pragma once

#include <cstdint>
#include <string>

#include "bdrd/database.hpp"

namespace bdrd {

/// Fixture families. Graph families are encoded over the {E:2} schema with
/// both tuple orientations stored; tuple degree is twice the graph degree.
struct GeneratorSpec {
    enum class Family {
        triangles,             // count disjoint triangles, d = 4
        matchings,             // count disjoint edges, d = 2
        cycle,                 // cycle on n >= 3 vertices, d = 4
        path,                  // path on n >= 1 vertices, d = 4
        grid,                  // rows x cols grid, rows, cols >= 2, d = 8
        grid_minus_corner,     // grid with the last corner vertex removed
        random_bounded_degree  // random graph respecting the tuple bound d
    };

    Family family = Family::triangles;
    std::uint64_t count = 1;   // triangles / matchings
    std::uint64_t n = 0;       // cycle / path / random
    std::uint64_t rows = 2;    // grids
    std::uint64_t cols = 2;
    std::uint32_t degree_bound = 0;  // 0: the family default
    std::uint64_t seed = 0;          // random family only

    static Family family_from_name(const std::string& name);
    static std::string family_name(Family family);
};

/// Deterministic per (spec, seed); outputs always satisfy the declared
/// degree bound and serialize to canonical files.
Database generate(const GeneratorSpec& spec);

/// Shorthand constructors used across tests and the harness.
Database make_triangles(std::uint64_t count);
Database make_matchings(std::uint64_t count);
Database make_cycle(std::uint64_t n);
Database make_path(std::uint64_t n);
Database make_grid(std::uint64_t rows, std::uint64_t cols);
Database make_grid_minus_corner(std::uint64_t rows, std::uint64_t cols);

/// Builds a symmetric irreflexive graph database from undirected edges.
Database make_graph_db(ElementId n, const std::vector<std::pair<ElementId, ElementId>>& edges,
                       std::uint32_t degree_bound);

/// Disjoint union: b's elements are shifted past a's. Degree bound: the max.
Database disjoint_union(const Database& a, const Database& b);

/// The same database on a domain extended by one fresh isolated element.
Database add_isolated_element(const Database& db);

/// Rescales a family to approximately `size` elements (exact for cycles and
/// paths; rounded to the component size for triangles and matchings).
GeneratorSpec with_target_size(GeneratorSpec spec, std::uint64_t size);

}  // namespace bdrd
