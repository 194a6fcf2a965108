#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <sstream>

#include "bdrd/database.hpp"
#include "bdrd/errors.hpp"
#include "bdrd/generators.hpp"
#include "fixtures.hpp"

using namespace bdrd;

namespace {

Database ternary_single_tuple() {
    auto schema = std::make_shared<const Schema>(std::vector<RelationDecl>{{"R", 3}});
    return Database(schema, 1, 4, {{{1, 1, 1}}});
}

Database random_graph(std::uint64_t n, std::uint32_t d, std::uint64_t seed) {
    GeneratorSpec spec;
    spec.family = GeneratorSpec::Family::random_bounded_degree;
    spec.n = n;
    spec.degree_bound = d;
    spec.seed = seed;
    return generate(spec);
}

}  // namespace

TEST_CASE("schema invariants") {
    CHECK_THROWS_AS(Schema({{"E", 2}, {"E", 3}}), Error);
    CHECK_THROWS_AS(Schema({{"E", 0}}), Error);
    Schema s({{"A", 1}, {"B", 2}});
    CHECK(s.index_of("B") == 1);
    CHECK_THROWS_AS(s.index_of("C"), Error);
}

TEST_CASE("degree_of") {
    SUBCASE("empty domain: any element is out of range") {
        Database db = Database::empty(Schema::graph(), 0, 4);
        CHECK_THROWS_AS(db.degree_of(1), Error);
    }
    SUBCASE("triangle as symmetric E-db: four tuples contain element 1") {
        Database tri = testfix::triangle();
        CHECK(tri.degree_of(1) == 4);  // (1,2),(2,1),(1,3),(3,1)
        CHECK(tri.degree_of(2) == 4);
        CHECK(tri.degree_of(3) == 4);
    }
    SUBCASE("a tuple counts once no matter how often the element repeats") {
        Database db = ternary_single_tuple();
        CHECK(db.degree_of(1) == 1);
    }
}

TEST_CASE("database construction validates the invariants") {
    auto graph = Schema::graph();
    CHECK_THROWS_AS(Database(graph, 2, 4, {{{1, 3}}}), Error);          // out of range
    CHECK_THROWS_AS(Database(graph, 2, 4, {{{2, 1}, {1, 2}}}), Error);  // unsorted
    CHECK_THROWS_AS(Database(graph, 2, 4, {{{1, 2}, {1, 2}}}), Error);  // duplicate
    CHECK_THROWS_AS(Database(graph, 2, 4, {{{1, 2}, {2, 1}}, {}}), Error);  // list count
    // Degree bound: element 1 in five tuples with d = 4.
    CHECK_THROWS_AS(Database(graph, 6, 4,
                             {{{1, 2}, {1, 3}, {1, 4}, {1, 5}, {1, 6}}}),
                    Error);
}

TEST_CASE("oracle_query") {
    Database tri = testfix::triangle();  // E sorted: 12 13 21 23 31 32
    OracleHandle oracle(tri);

    SUBCASE("first tuple containing element 1") {
        auto t = oracle.query("E", 1, 1);
        REQUIRE(t.has_value());
        CHECK(*t == Tuple{1, 2});
        CHECK(oracle.query_count() == 1);
    }
    SUBCASE("j beyond the degree bound is a contract violation, not Nothing") {
        CHECK_THROWS_AS(oracle.query("E", 1, 5), ContractViolation);
        CHECK(oracle.query_count() == 0);  // violations do not count as queries
    }
    SUBCASE("element out of range is a contract violation") {
        CHECK_THROWS_AS(oracle.query("E", 4, 1), ContractViolation);
        CHECK_THROWS_AS(oracle.query("E", 0, 1), ContractViolation);
        CHECK_THROWS_AS(oracle.query("Q", 1, 1), Error);
    }
    SUBCASE("tuples containing element 3, in list order") {
        // (1,3) (2,3) (3,1) (3,2): the fourth is (3,2).
        auto t = oracle.query("E", 3, 4);
        REQUIRE(t.has_value());
        CHECK(*t == Tuple{3, 2});
        CHECK_THROWS_AS(oracle.query("E", 3, 5), ContractViolation);  // j > d
    }
    SUBCASE("Nothing for a legal query with no such tuple") {
        Database p2 = make_path(2);  // degree of each element is 2, d = 4
        OracleHandle o2(p2);
        CHECK(o2.query("E", 1, 2).has_value());
        CHECK_FALSE(o2.query("E", 1, 3).has_value());
        CHECK(o2.query_count() == 2);  // Nothing-answers still count
    }
}

TEST_CASE("answer counts match degrees over random databases") {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        Database db = random_graph(25, 6, seed);
        OracleHandle oracle(db);
        for (ElementId a = 1; a <= db.domain_size(); ++a) {
            std::uint32_t answered = 0;
            for (std::uint32_t j = 1; j <= db.degree_bound(); ++j)
                if (oracle.query(0, a, j)) ++answered;
            CHECK(answered == db.degree_of(a));
        }
    }
}

TEST_CASE("gaifman_graph") {
    SUBCASE("one ternary tuple induces a triangle") {
        auto schema = std::make_shared<const Schema>(std::vector<RelationDecl>{{"R", 3}});
        Database db(schema, 3, 4, {{{1, 2, 3}}});
        SimpleGraph g = gaifman_graph(db);
        CHECK(g.adj[1] == std::vector<ElementId>{2, 3});
        CHECK(g.adj[2] == std::vector<ElementId>{1, 3});
        CHECK(g.adj[3] == std::vector<ElementId>{1, 2});
    }
    SUBCASE("unary tuples induce no edges") {
        auto schema = std::make_shared<const Schema>(std::vector<RelationDecl>{{"U", 1}});
        Database db(schema, 3, 4, {{{1}, {2}}});
        SimpleGraph g = gaifman_graph(db);
        for (ElementId a = 1; a <= 3; ++a) CHECK(g.adj[a].empty());
    }
    SUBCASE("two overlapping tuples induce a path") {
        auto schema = Schema::graph();
        Database db(schema, 3, 4, {{{1, 2}, {2, 3}}});
        SimpleGraph g = gaifman_graph(db);
        CHECK(g.adj[1] == std::vector<ElementId>{2});
        CHECK(g.adj[2] == std::vector<ElementId>{1, 3});
        CHECK(g.adj[3] == std::vector<ElementId>{2});
    }
    SUBCASE("degree bound: at most (max arity - 1) * d neighbours") {
        for (std::uint64_t seed = 10; seed < 13; ++seed) {
            Database db = random_graph(30, 6, seed);
            SimpleGraph g = gaifman_graph(db);
            for (ElementId a = 1; a <= db.domain_size(); ++a)
                CHECK(g.adj[a].size() <= (2 - 1) * db.degree_bound());
        }
    }
}

TEST_CASE("induced_subdb") {
    Database tri = testfix::triangle();
    SUBCASE("full domain gives an equal copy") {
        auto sub = induced_subdb(tri, {1, 2, 3});
        CHECK(sub.db == tri);
        CHECK(sub.original == std::vector<ElementId>{1, 2, 3});
    }
    SUBCASE("empty set gives the empty database") {
        auto sub = induced_subdb(tri, {});
        CHECK(sub.db.domain_size() == 0);
        CHECK(sub.db.tuple_count() == 0);
    }
    SUBCASE("M = {1,2} keeps exactly the tuples inside M") {
        auto sub = induced_subdb(tri, {1, 2});
        CHECK(sub.db.tuples_of(0) == std::vector<Tuple>{{1, 2}, {2, 1}});
    }
    SUBCASE("monotone: tuples of D[M'] embed into D[M] when M' is a subset") {
        std::mt19937_64 rng(99);
        for (int trial = 0; trial < 20; ++trial) {
            Database db = random_graph(20, 6, trial);
            std::vector<ElementId> big, small;
            for (ElementId a = 1; a <= db.domain_size(); ++a) {
                if (rng() % 2) big.push_back(a);
            }
            for (ElementId a : big)
                if (rng() % 2) small.push_back(a);
            auto sub_big = induced_subdb(db, big);
            auto sub_small = induced_subdb(db, small);
            // Map small's tuples to original labels; they must appear in big's.
            auto originalize = [](const InducedSubdb& s) {
                std::vector<Tuple> out;
                for (const Tuple& t : s.db.tuples_of(0)) {
                    Tuple o;
                    for (ElementId e : t) o.push_back(s.original[e - 1]);
                    out.push_back(o);
                }
                std::sort(out.begin(), out.end());
                return out;
            };
            auto small_tuples = originalize(sub_small);
            auto big_tuples = originalize(sub_big);
            CHECK(std::includes(big_tuples.begin(), big_tuples.end(), small_tuples.begin(),
                                small_tuples.end()));
        }
    }
}

TEST_CASE("parse and serialize") {
    SUBCASE("round-trip is the identity on canonical files") {
        for (const Database& db :
             {testfix::triangle(), make_cycle(6), make_grid(3, 3), random_graph(20, 6, 3)}) {
            std::string text = serialize_db(db);
            Database parsed = parse_db_string(text);
            CHECK(parsed == db);
            CHECK(serialize_db(parsed) == text);
        }
    }
    SUBCASE("rejects a tuple with an element beyond the domain") {
        std::string text =
            "schema E:2\ndegree_bound 4\ndomain 3\nrel E\n1 4\n";
        CHECK_THROWS_AS(parse_db_string(text), ParseError);
        try {
            parse_db_string(text);
        } catch (const ParseError& e) {
            CHECK(e.line == 5);
        }
    }
    SUBCASE("rejects a degree-bound violation") {
        // Five tuples share element 1 with d = 4.
        std::string text =
            "schema E:2\ndegree_bound 4\ndomain 6\nrel E\n1 2\n1 3\n1 4\n1 5\n1 6\n";
        CHECK_THROWS_AS(parse_db_string(text), ParseError);
    }
    SUBCASE("rejects unsorted tuples with the offending line") {
        std::string text =
            "schema E:2\ndegree_bound 4\ndomain 3\nrel E\n2 1\n1 2\n";
        try {
            parse_db_string(text);
            FAIL("expected a parse error");
        } catch (const ParseError& e) {
            CHECK(e.line == 6);
        }
    }
    SUBCASE("rejects relations out of schema order") {
        std::string text =
            "schema A:1 B:1\ndegree_bound 2\ndomain 1\nrel B\nrel A\n";
        CHECK_THROWS_AS(parse_db_string(text), ParseError);
    }
    SUBCASE("multi-relation round-trip") {
        auto schema =
            std::make_shared<const Schema>(std::vector<RelationDecl>{{"R", 3}, {"S", 1}});
        Database db(schema, 4, 3, {{{1, 2, 3}, {2, 2, 4}}, {{1}, {4}}});
        CHECK(parse_db_string(serialize_db(db)) == db);
    }
}

TEST_CASE("databases are value types") {
    Database a = testfix::triangle();
    Database b = a;  // share nothing mutable
    OracleHandle oa(a), ob(b);
    oa.query("E", 1, 1);
    CHECK(oa.query_count() == 1);
    CHECK(ob.query_count() == 0);  // counters are per handle
    CHECK(a == b);
}
