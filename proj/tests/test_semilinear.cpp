#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <set>

#include "bdrd/errors.hpp"
#include "bdrd/semilinear.hpp"

using namespace bdrd;

namespace {

SemilinearSet multiples_of_three() {
    return SemilinearSet(1, {LinearSet{{Nat(0)}, {{Nat(3)}}}});
}

/// Independent oracle: raw nested coefficient enumeration, no pruning, no
/// sharing with the implementation's search.
std::set<std::vector<Nat>> oracle_members_up_to(const SemilinearSet& set, const Nat& max_norm) {
    std::set<std::vector<Nat>> members;
    for (const LinearSet& ls : set.components()) {
        std::vector<std::vector<Nat>> stack{ls.base};
        for (const auto& period : ls.periods) {
            std::vector<std::vector<Nat>> next;
            for (const auto& partial : stack) {
                std::vector<Nat> current = partial;
                while (l1_norm(current) <= max_norm) {
                    next.push_back(current);
                    for (std::size_t q = 0; q < current.size(); ++q) current[q] += period[q];
                }
            }
            stack = std::move(next);
        }
        for (auto& h : stack)
            if (l1_norm(h) <= max_norm) members.insert(std::move(h));
    }
    return members;
}

struct RandomSet {
    SemilinearSet set;
    std::size_t component;           // a component with at least one period
    std::vector<Nat> sample_coeffs;  // arbitrary witness material
};

RandomSet random_semilinear(std::mt19937_64& rng, std::size_t max_dim = 4, Nat max_entry = 3) {
    std::size_t dim = 1 + rng() % max_dim;
    std::size_t m = 1 + rng() % 3;
    std::vector<LinearSet> components;
    std::size_t with_periods = SIZE_MAX;
    for (std::size_t i = 0; i < m; ++i) {
        LinearSet ls;
        std::uint64_t entry_span = max_entry.convert_to<std::uint64_t>() + 1;
        auto random_vec = [&](bool allow_zero) {
            std::vector<Nat> v(dim);
            Nat norm = 0;
            do {
                norm = 0;
                for (std::size_t q = 0; q < dim; ++q) {
                    v[q] = Nat(rng() % entry_span);
                    norm += v[q];
                }
            } while (!allow_zero && norm == 0);
            // Keep v within the spec's v <= 3 envelope.
            while (norm > max_entry) {
                for (std::size_t q = 0; q < dim; ++q)
                    if (v[q] > 0) {
                        --v[q];
                        --norm;
                        if (norm <= max_entry) break;
                    }
            }
            return v;
        };
        ls.base = random_vec(true);
        std::size_t periods = rng() % 3;  // k_i in {0,1,2}, so k <= 3
        for (std::size_t j = 0; j < periods; ++j) ls.periods.push_back(random_vec(false));
        if (!ls.periods.empty() && with_periods == SIZE_MAX) with_periods = i;
        components.push_back(std::move(ls));
    }
    if (with_periods == SIZE_MAX) {
        components[0].periods.push_back(std::vector<Nat>(dim, Nat(0)));
        components[0].periods[0][rng() % dim] = 1 + rng() % 3;
        with_periods = 0;
    }
    RandomSet rs{SemilinearSet(dim, std::move(components)), with_periods, {}};
    return rs;
}

}  // namespace

TEST_CASE("construction validates invariants") {
    CHECK_THROWS_AS(SemilinearSet(0, {}), DimensionError);
    CHECK_THROWS_AS(SemilinearSet(2, {LinearSet{{Nat(1)}, {}}}), DimensionError);
    // Zero-norm period.
    CHECK_THROWS_AS(SemilinearSet(2, {LinearSet{{Nat(0), Nat(0)}, {{Nat(0), Nat(0)}}}}), Error);
    SemilinearSet ok(2, {LinearSet{{Nat(1), Nat(0)}, {{Nat(0), Nat(2)}}}});
    CHECK(ok.k() == 2);
    CHECK(ok.v() == 2);
}

TEST_CASE("derived scalars k and v") {
    SemilinearSet s(2, {LinearSet{{Nat(1), Nat(2)}, {{Nat(3), Nat(0)}, {Nat(0), Nat(1)}}},
                        LinearSet{{Nat(0), Nat(0)}, {{Nat(1), Nat(1)}}}});
    CHECK(s.k() == 3);  // max period count 2, plus 1
    CHECK(s.v() == 3);  // attained by both the base (1,2) and period (3,0)
    SemilinearSet empty(1, {});
    CHECK(empty.k() == 1);
    CHECK(empty.v() == 0);
}

TEST_CASE("contains") {
    SemilinearSet s = multiples_of_three();
    SUBCASE("worked examples on {3a}") {
        auto w6 = contains(s, {Nat(6)});
        REQUIRE(w6.has_value());
        CHECK(w6->coefficients == std::vector<Nat>{Nat(2)});
        CHECK_FALSE(contains(s, {Nat(7)}).has_value());
    }
    SUBCASE("the base itself is a member with all-zero coefficients") {
        SemilinearSet t(2, {LinearSet{{Nat(2), Nat(1)}, {{Nat(1), Nat(0)}}}});
        auto w = contains(t, {Nat(2), Nat(1)});
        REQUIRE(w.has_value());
        CHECK(w->coefficients == std::vector<Nat>{Nat(0)});
    }
    SUBCASE("dimension mismatch is an error") {
        CHECK_THROWS_AS(contains(s, {Nat(1), Nat(2)}), DimensionError);
    }
    SUBCASE("witness replays to the queried vector") {
        std::mt19937_64 rng(21);
        for (int trial = 0; trial < 100; ++trial) {
            RandomSet rs = random_semilinear(rng);
            // Build a member from random coefficients, then ask for it.
            const LinearSet& ls = rs.set.components()[rs.component];
            std::vector<Nat> h = ls.base;
            for (const auto& p : ls.periods) {
                Nat a(rng() % 5);
                for (std::size_t q = 0; q < h.size(); ++q) h[q] += a * p[q];
            }
            auto w = contains(rs.set, h);
            REQUIRE(w.has_value());
            const LinearSet& wls = rs.set.components()[w->component];
            std::vector<Nat> rebuilt = wls.base;
            REQUIRE(w->coefficients.size() == wls.periods.size());
            for (std::size_t j = 0; j < wls.periods.size(); ++j)
                for (std::size_t q = 0; q < rebuilt.size(); ++q)
                    rebuilt[q] += w->coefficients[j] * wls.periods[j][q];
            REQUIRE(rebuilt == h);
        }
    }
}

TEST_CASE("enumerate_norm_range") {
    SemilinearSet s = multiples_of_three();
    SUBCASE("worked examples") {
        auto members = enumerate_norm_range(s, 5, 10);
        REQUIRE(members.size() == 2);
        CHECK(members[0] == std::vector<Nat>{Nat(6)});
        CHECK(members[1] == std::vector<Nat>{Nat(9)});
        CHECK(enumerate_norm_range(s, 1, 2).empty());
    }
    SUBCASE("agrees with the brute-force oracle on random sets") {
        std::mt19937_64 rng(77);
        for (int trial = 0; trial < 60; ++trial) {
            RandomSet rs = random_semilinear(rng);
            auto expected = oracle_members_up_to(rs.set, 30);
            auto got = enumerate_norm_range(rs.set, 0, 30);
            std::set<std::vector<Nat>> got_set(got.begin(), got.end());
            REQUIRE(got.size() == got_set.size());  // duplicate-free
            REQUIRE(got_set == expected);
        }
    }
    SUBCASE("every enumerated vector satisfies contains") {
        std::mt19937_64 rng(78);
        for (int trial = 0; trial < 20; ++trial) {
            RandomSet rs = random_semilinear(rng);
            for (const auto& h : enumerate_norm_range(rs.set, 0, 25))
                REQUIRE(contains(rs.set, h).has_value());
        }
    }
    SUBCASE("deterministic output order") {
        SemilinearSet s2(1, {LinearSet{{Nat(0)}, {{Nat(2)}}}, LinearSet{{Nat(0)}, {{Nat(3)}}}});
        auto a = enumerate_norm_range(s2, 0, 12);
        auto b = enumerate_norm_range(s2, 0, 12);
        CHECK(a == b);
        // First component's multiples come first in coefficient order.
        CHECK(a.front() == std::vector<Nat>{Nat(0)});
    }
}

TEST_CASE("min_distribution_distance") {
    SUBCASE("zero when the distribution is realized in range") {
        SemilinearSet s = multiples_of_three();
        auto r = min_distribution_distance(s, {Rational(1)}, Rational(5), Rational(10));
        REQUIRE(r.found);
        CHECK(r.distance == Rational(0));
    }
    SUBCASE("one coordinate: every normalised member coincides") {
        SemilinearSet s = multiples_of_three();
        auto r = min_distribution_distance(s, {Rational(1)}, Rational(2), Rational(4));
        REQUIRE(r.found);  // h = (3)
        CHECK(r.distance == Rational(0));
    }
    SUBCASE("two-coordinate worked example: minimum 1/5 at (3,2)") {
        SemilinearSet s(2, {LinearSet{{Nat(0), Nat(0)}, {{Nat(3), Nat(0)}, {Nat(0), Nat(2)}}}});
        auto r = min_distribution_distance(s, {Rational(1, 2), Rational(1, 2)}, Rational(4),
                                           Rational(6));
        REQUIRE(r.found);
        CHECK(r.distance == Rational(1, 5));
        CHECK(r.argmin == std::vector<Nat>{Nat(3), Nat(2)});
    }
    SUBCASE("empty range reports not-found") {
        SemilinearSet s = multiples_of_three();
        auto r = min_distribution_distance(s, {Rational(1)}, Rational(4), Rational(5));
        CHECK_FALSE(r.found);
    }
    SUBCASE("monotone non-increasing as the range widens") {
        std::mt19937_64 rng(31);
        for (int trial = 0; trial < 40; ++trial) {
            RandomSet rs = random_semilinear(rng, 3);
            std::vector<Rational> dv(rs.set.dim());
            Rational left(1);
            for (std::size_t q = 0; q + 1 < dv.size(); ++q) {
                dv[q] = left / Rational(2 + (rng() % 3));
                left -= dv[q];
            }
            dv.back() = left;
            auto narrow = min_distribution_distance(rs.set, dv, Rational(5), Rational(15));
            auto wide = min_distribution_distance(rs.set, dv, Rational(2), Rational(25));
            if (narrow.found) {
                REQUIRE(wide.found);
                REQUIRE(wide.distance <= narrow.distance);
            }
        }
    }
}

TEST_CASE("round_to_target_size") {
    SUBCASE("scaling factor close to 1 reproduces the member") {
        SemilinearSet s = multiples_of_three();  // k = 2, v = 3, kv = 6
        std::vector<Nat> coeffs{Nat(100)};       // h = (300), n = 300
        Rational n0(293);                        // n > n0 + kv = 299
        auto h = round_to_target_size(s, 0, coeffs, n0);
        // round(100 * 293/300) = round(97.67) = 98 -> (294)
        CHECK(h == std::vector<Nat>{Nat(294)});
    }
    SUBCASE("precondition: the member must outweigh n_max") {
        SemilinearSet s = multiples_of_three();
        CHECK_THROWS_AS(round_to_target_size(s, 0, {Nat(1)}, Rational(10)), Error);
    }
    SUBCASE("size and distance claims hold exactly on random instances") {
        std::mt19937_64 rng(101);
        int done = 0;
        while (done < 40) {
            RandomSet rs = random_semilinear(rng);
            const LinearSet& ls = rs.set.components()[rs.component];
            Nat kv = rs.set.k() * rs.set.v();
            Rational c(static_cast<std::uint64_t>(rs.set.dim()));
            // Random f - mu in (0, 1): denominators 5..40.
            Rational f_minus_mu(1, 5 + static_cast<long>(rng() % 36));
            Rational n0 = Rational(kv) * (3 * c * Rational(kv) / f_minus_mu + 1);
            Rational n_min = n0 - Rational(kv);
            Rational n_max = n0 + Rational(kv);

            // Random member with norm comfortably above n_max.
            Nat period_norm_sum = 0;
            for (const auto& p : ls.periods) period_norm_sum += l1_norm(p);
            REQUIRE(period_norm_sum > 0);
            Nat target = rational_ceil(n_max * Rational(2 + static_cast<long>(rng() % 4)));
            std::vector<Nat> coeffs(ls.periods.size(), Nat(0));
            std::vector<Nat> h = ls.base;
            while (l1_norm(h) <= rational_ceil(n_max)) {
                std::size_t j = rng() % ls.periods.size();
                Nat step = 1 + Nat(rng() % 50);
                coeffs[j] += step;
                for (std::size_t q = 0; q < h.size(); ++q) h[q] += step * ls.periods[j][q];
                if (l1_norm(h) > target) break;
            }
            if (Rational(l1_norm(h)) <= n_max) continue;

            Nat n = l1_norm(h);
            auto rounded = round_to_target_size(rs.set, rs.component, coeffs, n0);
            Nat n_prime = l1_norm(rounded);
            REQUIRE(Rational(n_prime) >= n_min);
            REQUIRE(Rational(n_prime) <= n_max);
            Rational dist(0);
            for (std::size_t q = 0; q < h.size(); ++q)
                dist += boost::multiprecision::abs(Rational(h[q], n) -
                                                   Rational(rounded[q], n_prime));
            REQUIRE(dist <= f_minus_mu);
            ++done;
        }
    }
}

TEST_CASE("small_representative") {
    SUBCASE("already-small members are returned unchanged") {
        SemilinearSet s = multiples_of_three();
        std::vector<Nat> h{Nat(9)};
        CHECK(small_representative(s, h, Rational(1, 10)) == h);
    }
    SUBCASE("bound arithmetic: c=2, k=2, v=3, eps=1/10 gives 6*(360+2) = 2172") {
        // kv (3ckv/eps + 2) with kv = 6, c = 2.
        Nat kv(6);
        Rational bound = Rational(kv) * (3 * Rational(2) * Rational(kv) / Rational(1, 10) + 2);
        CHECK(bound == Rational(2172));
    }
    SUBCASE("non-members are rejected") {
        SemilinearSet s = multiples_of_three();
        CHECK_THROWS_AS(small_representative(s, {Nat(7)}, Rational(1, 10)), Error);
    }
    SUBCASE("distance and size bounds hold exactly on random instances") {
        std::mt19937_64 rng(202);
        int done = 0;
        while (done < 15) {
            RandomSet rs = random_semilinear(rng, 3);
            const LinearSet& ls = rs.set.components()[rs.component];
            Rational eps(1, 4 + static_cast<long>(rng() % 8));
            Nat kv = rs.set.k() * rs.set.v();
            Rational c(static_cast<std::uint64_t>(rs.set.dim()));
            Rational bound = Rational(kv) * (3 * c * Rational(kv) / eps + 2);

            std::vector<Nat> h = ls.base;
            Nat target = rational_ceil(bound * 2);
            while (l1_norm(h) <= rational_ceil(bound)) {
                std::size_t j = rng() % ls.periods.size();
                Nat step = 1 + Nat(rng() % 40);
                for (std::size_t q = 0; q < h.size(); ++q) h[q] += step * ls.periods[j][q];
                if (l1_norm(h) > target) break;
            }
            if (l1_norm(h) == 0) continue;

            auto h0 = small_representative(rs.set, h, eps);
            Nat n = l1_norm(h), n0 = l1_norm(h0);
            REQUIRE(Rational(n0) <= bound);
            REQUIRE(contains(rs.set, h0).has_value());
            REQUIRE(n0 > 0);
            Rational dist(0);
            for (std::size_t q = 0; q < h.size(); ++q)
                dist += boost::multiprecision::abs(Rational(h[q], n) - Rational(h0[q], n0));
            REQUIRE(dist <= eps);
            ++done;
        }
    }
}

TEST_CASE("file format") {
    SUBCASE("round-trip") {
        SemilinearSet s(2, {LinearSet{{Nat(1), Nat(0)}, {{Nat(3), Nat(0)}, {Nat(0), Nat(2)}}},
                            LinearSet{{Nat(0), Nat(0)}, {}}});
        std::string text = serialize_semilinear(s, std::string("reg.txt"));
        SemilinearFile parsed = parse_semilinear(text);
        CHECK(parsed.registry_path == std::string("reg.txt"));
        CHECK(serialize_semilinear(parsed.set, parsed.registry_path) == text);
    }
    SUBCASE("rejects a zero-norm period") {
        CHECK_THROWS_AS(parse_semilinear("dim 2\nbase 0 0\nperiod 0 0\n"), ParseError);
    }
    SUBCASE("rejects wrong-width vectors") {
        CHECK_THROWS_AS(parse_semilinear("dim 2\nbase 1 2 3\n"), ParseError);
        CHECK_THROWS_AS(parse_semilinear("dim 2\nbase 1 2\nperiod 3\n"), ParseError);
    }
    SUBCASE("rejects directives out of order") {
        CHECK_THROWS_AS(parse_semilinear("base 1\ndim 1\n"), ParseError);
        CHECK_THROWS_AS(parse_semilinear("dim 1\nperiod 2\n"), ParseError);
    }
}
