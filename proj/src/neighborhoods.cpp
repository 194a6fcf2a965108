#include "bdrd/neighborhoods.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include "bdrd/canonical.hpp"
#include "bdrd/errors.hpp"

namespace bdrd {

namespace {

Ball make_ball(const Database& db, ElementId a, unsigned r, std::vector<ElementId> elements) {
    InducedSubdb sub = induced_subdb(db, elements);
    auto center = static_cast<ElementId>(
        std::lower_bound(sub.original.begin(), sub.original.end(), a) - sub.original.begin() + 1);
    return Ball{std::move(sub.db), std::move(sub.original), center, r};
}

}  // namespace

Ball ball(const Database& db, ElementId a, unsigned r) {
    if (a < 1 || a > db.domain_size()) throw Error("ball centre outside the domain");
    std::vector<ElementId> frontier{a};
    std::set<ElementId> seen{a};
    for (unsigned depth = 0; depth < r && !frontier.empty(); ++depth) {
        std::vector<ElementId> next;
        for (ElementId x : frontier)
            for (ElementId y : db.gaifman_neighbors(x))
                if (seen.insert(y).second) next.push_back(y);
        frontier = std::move(next);
    }
    return make_ball(db, a, r, std::vector<ElementId>(seen.begin(), seen.end()));
}

Ball ball_via_oracle(OracleHandle& oracle, ElementId a, unsigned r) {
    if (a < 1 || a > oracle.domain_size()) throw Error("ball centre outside the domain");
    const std::size_t nrel = oracle.schema().size();
    const std::uint32_t d = oracle.degree_bound();

    std::map<ElementId, unsigned> dist{{a, 0}};
    std::vector<ElementId> queue{a};
    // Tuples incident to each explored element; only those fully inside the
    // ball survive below.
    std::vector<std::set<Tuple>> gathered(nrel);

    for (std::size_t qi = 0; qi < queue.size(); ++qi) {
        ElementId x = queue[qi];
        unsigned dx = dist[x];
        for (std::size_t rel = 0; rel < nrel; ++rel) {
            for (std::uint32_t j = 1; j <= d; ++j) {
                auto t = oracle.query(rel, x, j);
                if (!t) break;  // answers for (rel, x) are contiguous in j
                gathered[rel].insert(*t);
                if (dx < r) {
                    for (ElementId y : *t) {
                        if (dist.emplace(y, dx + 1).second) queue.push_back(y);
                    }
                }
            }
        }
    }

    std::vector<ElementId> members;
    members.reserve(dist.size());
    for (const auto& [e, _] : dist) members.push_back(e);  // std::map: already sorted

    auto relabel = [&](ElementId e) -> ElementId {
        auto it = std::lower_bound(members.begin(), members.end(), e);
        if (it == members.end() || *it != e) return 0;
        return static_cast<ElementId>(it - members.begin() + 1);
    };

    std::vector<std::vector<Tuple>> tuples(nrel);
    for (std::size_t rel = 0; rel < nrel; ++rel) {
        for (const Tuple& t : gathered[rel]) {
            Tuple mapped;
            mapped.reserve(t.size());
            bool inside = true;
            for (ElementId e : t) {
                ElementId m = relabel(e);
                if (m == 0) {
                    inside = false;
                    break;
                }
                mapped.push_back(m);
            }
            if (inside) tuples[rel].push_back(std::move(mapped));
        }
        std::sort(tuples[rel].begin(), tuples[rel].end());
        tuples[rel].erase(std::unique(tuples[rel].begin(), tuples[rel].end()), tuples[rel].end());
    }

    ElementId center = relabel(a);
    Database sub(oracle.schema_ptr(), static_cast<ElementId>(members.size()),
                 oracle.degree_bound(), std::move(tuples));
    return Ball{std::move(sub), std::move(members), center, r};
}

bool rooted_isomorphic(const Ball& b1, const Ball& b2) {
    if (b1.radius != b2.radius) return false;
    if (!(b1.db.schema() == b2.db.schema())) return false;
    const ElementId n = b1.db.domain_size();
    if (n != b2.db.domain_size()) return false;
    if (b1.db.tuple_count() != b2.db.tuple_count()) return false;

    // Degree pruning: candidate images must match degrees per relation.
    auto profile = [](const Database& db, ElementId a) {
        std::vector<std::size_t> p;
        for (std::size_t r = 0; r < db.schema().size(); ++r)
            p.push_back(db.occurrences(r, a).size());
        return p;
    };
    if (profile(b1.db, b1.center) != profile(b2.db, b2.center)) return false;

    std::vector<ElementId> others1, others2;
    for (ElementId a = 1; a <= n; ++a)
        if (a != b1.center) others1.push_back(a);
    for (ElementId a = 1; a <= n; ++a)
        if (a != b2.center) others2.push_back(a);

    std::vector<ElementId> image(n + 1, 0);
    image[b1.center] = b2.center;

    auto tuples_match = [&](const std::vector<ElementId>& map) {
        for (std::size_t r = 0; r < b1.db.schema().size(); ++r) {
            std::vector<Tuple> mapped;
            mapped.reserve(b1.db.tuples_of(r).size());
            for (const Tuple& t : b1.db.tuples_of(r)) {
                Tuple m;
                m.reserve(t.size());
                for (ElementId e : t) m.push_back(map[e]);
                mapped.push_back(std::move(m));
            }
            std::sort(mapped.begin(), mapped.end());
            if (mapped != b2.db.tuples_of(r)) return false;
        }
        return true;
    };

    std::sort(others2.begin(), others2.end());
    do {
        bool ok = true;
        for (std::size_t i = 0; i < others1.size(); ++i) {
            if (profile(b1.db, others1[i]) != profile(b2.db, others2[i])) {
                ok = false;
                break;
            }
            image[others1[i]] = others2[i];
        }
        if (ok && tuples_match(image)) return true;
    } while (std::next_permutation(others2.begin(), others2.end()));
    return false;
}

TypeCode canonical_code(const Ball& b) {
    std::uint64_t cap = 1;
    const std::uint64_t d = b.db.degree_bound();
    for (unsigned i = 0; i <= b.radius; ++i) {
        if (cap > (1ull << 40) / std::max<std::uint64_t>(d, 1)) {
            cap = 1ull << 40;
            break;
        }
        cap *= std::max<std::uint64_t>(d, 1);
    }
    return canonical_code(b, cap);
}

TypeCode canonical_code(const Ball& b, std::uint64_t size_cap) {
    if (b.db.domain_size() > size_cap)
        throw SizeCapError("ball has " + std::to_string(b.db.domain_size()) +
                           " elements, above the cap of " + std::to_string(size_cap));
    return canonical_form(b.db, b.center);
}

std::string type_code_hex(const TypeCode& code) {
    static const char* digits = "0123456789abcdef";
    std::string out;
    out.reserve(code.size() * 2);
    for (unsigned char c : code) {
        out.push_back(digits[c >> 4]);
        out.push_back(digits[c & 0xf]);
    }
    return out;
}

TypeCode type_code_from_hex(const std::string& hex) {
    if (hex.size() % 2 != 0) throw Error("hex type code has odd length");
    auto nibble = [](char c) -> int {
        if (c >= '0' && c <= '9') return c - '0';
        if (c >= 'a' && c <= 'f') return c - 'a' + 10;
        if (c >= 'A' && c <= 'F') return c - 'A' + 10;
        throw Error("invalid hex digit in type code");
    };
    TypeCode out;
    out.reserve(hex.size() / 2);
    for (std::size_t i = 0; i < hex.size(); i += 2)
        out.push_back(static_cast<char>(nibble(hex[i]) * 16 + nibble(hex[i + 1])));
    return out;
}

std::size_t TypeRegistry::intern(const TypeCode& code) {
    auto [it, inserted] = index_.emplace(code, codes_.size());
    if (inserted) codes_.push_back(code);
    return it->second;
}

std::optional<std::size_t> TypeRegistry::lookup(const TypeCode& code) const {
    auto it = index_.find(code);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

std::string TypeRegistry::serialize() const {
    std::string out;
    for (const TypeCode& code : codes_) {
        out += type_code_hex(code);
        out += '\n';
    }
    return out;
}

TypeRegistry TypeRegistry::parse(const std::string& text) {
    TypeRegistry reg;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
        if (line.empty()) continue;
        reg.intern(type_code_from_hex(line));
    }
    return reg;
}

TypeRegistry TypeRegistry::load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open registry file '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse(buf.str());
}

void TypeRegistry::save_file(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw Error("cannot write registry file '" + path + "'");
    out << serialize();
}

HistogramVector histogram(const Database& db, unsigned r, TypeRegistry& registry) {
    HistogramVector counts(registry.size(), 0);
    std::unordered_map<std::string, std::size_t> cache;  // raw ball form -> slot
    for (ElementId a = 1; a <= db.domain_size(); ++a) {
        Ball b = ball(db, a, r);
        std::string raw = raw_form(b.db, b.center);
        auto it = cache.find(raw);
        std::size_t slot;
        if (it != cache.end()) {
            slot = it->second;
        } else {
            slot = registry.intern(canonical_code(b));
            cache.emplace(std::move(raw), slot);
        }
        if (slot >= counts.size()) counts.resize(slot + 1, 0);
        ++counts[slot];
    }
    counts.resize(registry.size(), 0);
    return counts;
}

DistributionVector distribution(const HistogramVector& h) {
    Nat total = 0;
    for (std::uint64_t c : h) total += c;
    if (total == 0) throw Error("cannot normalise the histogram of an empty database");
    DistributionVector dv;
    dv.reserve(h.size());
    for (std::uint64_t c : h) dv.emplace_back(Rational(Nat(c), total));
    return dv;
}

FrequencyEstimate estimate_frequencies(OracleHandle& oracle, unsigned r, std::uint64_t s,
                                       std::uint64_t seed) {
    if (s < 1) throw Error("sample count must be >= 1");
    const std::uint64_t n = oracle.domain_size();
    if (n < 1) throw Error("cannot sample from an empty database");

    std::mt19937_64 rng(seed);
    // Unbiased uniform draw from [1, n] by rejection; avoids distribution
    // objects whose output is not pinned across standard libraries.
    auto draw = [&]() -> ElementId {
        const std::uint64_t span = n;
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % span;
        std::uint64_t x;
        do {
            x = rng();
        } while (x >= limit);
        return static_cast<ElementId>(1 + x % span);
    };

    FrequencyEstimate est;
    est.samples = s;
    std::vector<std::uint64_t> counts;
    std::unordered_map<std::string, std::size_t> cache;
    for (std::uint64_t i = 0; i < s; ++i) {
        ElementId a = draw();
        Ball b = ball_via_oracle(oracle, a, r);
        std::string raw = raw_form(b.db, b.center);
        auto it = cache.find(raw);
        std::size_t slot;
        if (it != cache.end()) {
            slot = it->second;
        } else {
            slot = est.registry.intern(canonical_code(b));
            cache.emplace(std::move(raw), slot);
        }
        if (slot >= counts.size()) counts.resize(slot + 1, 0);
        ++counts[slot];
    }
    counts.resize(est.registry.size(), 0);
    est.freq.reserve(counts.size());
    for (std::uint64_t c : counts) est.freq.emplace_back(Rational(Nat(c), Nat(s)));
    return est;
}

AlignedVectors align(const DistributionVector& v1, const TypeRegistry& r1,
                     const DistributionVector& v2, const TypeRegistry& r2) {
    if (v1.size() != r1.size() || v2.size() != r2.size())
        throw DimensionError("vector length does not match its registry");
    AlignedVectors out;
    for (const TypeCode& code : r1.codes()) out.merged.intern(code);
    for (const TypeCode& code : r2.codes()) out.merged.intern(code);
    out.left.assign(out.merged.size(), Rational(0));
    out.right.assign(out.merged.size(), Rational(0));
    for (std::size_t i = 0; i < v1.size(); ++i) out.left[*out.merged.lookup(r1.code_at(i))] = v1[i];
    for (std::size_t i = 0; i < v2.size(); ++i)
        out.right[*out.merged.lookup(r2.code_at(i))] = v2[i];
    return out;
}

Rational l1_distance(const DistributionVector& a, const DistributionVector& b) {
    if (a.size() != b.size()) throw DimensionError("l1_distance needs equal-length vectors");
    Rational sum(0);
    for (std::size_t i = 0; i < a.size(); ++i) sum += boost::multiprecision::abs(a[i] - b[i]);
    return sum;
}

}  // namespace bdrd
