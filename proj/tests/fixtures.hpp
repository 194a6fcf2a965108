#pragma once

// Shared fixture construction for the test suites.

#include <vector>

#include "bdrd/database.hpp"
#include "bdrd/generators.hpp"
#include "bdrd/neighborhoods.hpp"
#include "bdrd/schema.hpp"
#include "bdrd/semilinear.hpp"
#include "bdrd/tester.hpp"

namespace bdrd::testfix {

/// One triangle as a symmetric E-db on {1,2,3} with d = 4.
inline Database triangle() { return make_triangles(1); }

/// t disjoint triangles followed by p disjoint 3-vertex paths, d = 4.
inline Database triangles_and_paths(std::uint64_t t, std::uint64_t p) {
    std::vector<std::pair<ElementId, ElementId>> edges;
    ElementId next = 1;
    for (std::uint64_t i = 0; i < t; ++i) {
        edges.push_back({next, next + 1});
        edges.push_back({next, next + 2});
        edges.push_back({next + 1, next + 2});
        next += 3;
    }
    for (std::uint64_t i = 0; i < p; ++i) {
        edges.push_back({next, next + 1});
        edges.push_back({next + 1, next + 2});
        next += 3;
    }
    return make_graph_db(next - 1, edges, 4);
}

/// Every component is a triangle or a 3-vertex path.
inline bool decide_triangles_or_paths(const Database& db) {
    if (db.schema().size() != 1 || db.schema().at(0).arity != 2) return false;
    const auto& tuples = db.tuples_of(0);
    for (const Tuple& t : tuples) {
        if (t[0] == t[1]) return false;
        Tuple rev{t[1], t[0]};
        if (!std::binary_search(tuples.begin(), tuples.end(), rev)) return false;
    }
    std::vector<bool> seen(db.domain_size() + 1, false);
    for (ElementId a = 1; a <= db.domain_size(); ++a) {
        if (seen[a]) continue;
        std::vector<ElementId> comp, stack{a};
        seen[a] = true;
        while (!stack.empty()) {
            ElementId x = stack.back();
            stack.pop_back();
            comp.push_back(x);
            for (ElementId y : db.gaifman_neighbors(x))
                if (!seen[y]) {
                    seen[y] = true;
                    stack.push_back(y);
                }
        }
        if (comp.size() != 3) return false;
        std::size_t deg2 = 0, deg1 = 0;
        for (ElementId x : comp) {
            std::size_t deg = db.gaifman_neighbors(x).size();
            if (deg == 2) ++deg2;
            else if (deg == 1) ++deg1;
            else return false;
        }
        bool is_triangle = deg2 == 3;
        bool is_path = deg2 == 1 && deg1 == 2;
        if (!is_triangle && !is_path) return false;
    }
    return true;
}

/// Registry pinned to [triangle-vertex, path-end, path-midpoint] 1-types.
inline TypeRegistry mixed_registry_r1() {
    TypeRegistry reg;
    Database tri = make_triangles(1);
    reg.intern(canonical_code(ball(tri, 1, 1)));
    Database p3 = make_path(3);
    reg.intern(canonical_code(ball(p3, 1, 1)));  // endpoint
    reg.intern(canonical_code(ball(p3, 2, 1)));  // midpoint
    return reg;
}

/// h_1 of "disjoint unions of triangles and 3-paths" over mixed_registry_r1:
/// { a*(3,0,0) + b*(0,2,1) }.
inline SemilinearSet mixed_semilinear_r1() {
    LinearSet ls;
    ls.base = {Nat(0), Nat(0), Nat(0)};
    ls.periods = {{Nat(3), Nat(0), Nat(0)}, {Nat(0), Nat(2), Nat(1)}};
    return SemilinearSet(3, {ls});
}

/// In-code property for the mixed family (the shipped property files cover
/// the single-family cases; this one exists for the concentration fixtures).
inline PropertySpec mixed_property(Rational lambda = Rational(9, 10)) {
    PropertySpec spec;
    spec.name = "triangles-or-paths";
    spec.schema = Schema::graph();
    spec.exact_decider = decide_triangles_or_paths;
    spec.histograms.emplace(1u, mixed_semilinear_r1());
    spec.registries.emplace(1u, mixed_registry_r1());
    spec.profile = LocalityProfile::constant(1, lambda, "test fixture, calibrated at r=1");
    return spec;
}

/// The disjoint-triangles property built in code (mirrors the shipped file).
inline PropertySpec triangles_property(Rational lambda = Rational(9, 10)) {
    PropertySpec spec;
    spec.name = "disjoint-triangles";
    spec.schema = Schema::graph();
    spec.exact_decider = decide_disjoint_triangles;
    LinearSet ls;
    ls.base = {Nat(0)};
    ls.periods = {{Nat(3)}};
    spec.histograms.emplace(1u, SemilinearSet(1, {ls}));
    TypeRegistry reg;
    Database tri = make_triangles(1);
    reg.intern(canonical_code(ball(tri, 1, 1)));
    spec.registries.emplace(1u, reg);
    spec.profile = LocalityProfile::constant(1, lambda, "test fixture, calibrated at r=1");
    return spec;
}

}  // namespace bdrd::testfix
