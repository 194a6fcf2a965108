#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "bdrd/database.hpp"
#include "bdrd/numeric.hpp"

namespace bdrd {

/// An r-neighbourhood: the sub-database induced by all elements at Gaifman
/// distance <= r from the centre, relabeled to [size] preserving order.
struct Ball {
    Database db;
    std::vector<ElementId> original;  // relabeled id i+1 came from original[i]
    ElementId center = 0;             // relabeled id of the centre
    unsigned radius = 0;
};

Ball ball(const Database& db, ElementId a, unsigned r);

/// Same as ball(), but touches the database only through oracle queries.
Ball ball_via_oracle(OracleHandle& oracle, ElementId a, unsigned r);

/// True iff a relation-preserving bijection maps centre to centre.
/// Exhaustive over bijections with degree pruning; test-oracle scale only.
bool rooted_isomorphic(const Ball& b1, const Ball& b2);

/// Canonical byte string identifying the rooted-isomorphism class.
/// Equal codes <=> rooted_isomorphic. Throws SizeCapError when the ball has
/// more than size_cap elements; the default cap is d^(r+1).
using TypeCode = std::string;
TypeCode canonical_code(const Ball& b);
TypeCode canonical_code(const Ball& b, std::uint64_t size_cap);

std::string type_code_hex(const TypeCode& code);
TypeCode type_code_from_hex(const std::string& hex);

/// Ordered list of distinct type codes; indices are assigned in first-seen
/// order and never change afterwards.
class TypeRegistry {
public:
    std::size_t intern(const TypeCode& code);
    std::optional<std::size_t> lookup(const TypeCode& code) const;
    std::size_t size() const { return codes_.size(); }
    const TypeCode& code_at(std::size_t i) const { return codes_.at(i); }
    const std::vector<TypeCode>& codes() const { return codes_; }

    bool operator==(const TypeRegistry& other) const { return codes_ == other.codes_; }

    /// One lowercase-hex code per line.
    std::string serialize() const;
    static TypeRegistry parse(const std::string& text);
    static TypeRegistry load_file(const std::string& path);
    void save_file(const std::string& path) const;

private:
    std::vector<TypeCode> codes_;
    std::unordered_map<TypeCode, std::size_t> index_;
};

using HistogramVector = std::vector<std::uint64_t>;
using DistributionVector = std::vector<Rational>;

/// Counts elements of each r-type, interning unseen types into the registry.
/// The result is indexed by registry positions and sums to the domain size.
HistogramVector histogram(const Database& db, unsigned r, TypeRegistry& registry);

/// h / n, exact. Throws on an empty histogram (n = 0).
DistributionVector distribution(const HistogramVector& h);

struct FrequencyEstimate {
    DistributionVector freq;  // sample counts / s, exact rationals
    TypeRegistry registry;    // built from the sample, first-seen order
    std::uint64_t samples = 0;
};

/// EstimateFrequencies: samples s elements i.i.d. uniform from [n] and
/// explores each r-ball through the oracle only. Deterministic per seed;
/// makes at most s * d * d^(r+1) * |schema| oracle queries.
FrequencyEstimate estimate_frequencies(OracleHandle& oracle, unsigned r, std::uint64_t s,
                                       std::uint64_t seed);

struct AlignedVectors {
    DistributionVector left;
    DistributionVector right;
    TypeRegistry merged;
};

/// Re-expresses two vectors over the union of their registries (left codes
/// first, then unseen right codes), zero-filling. L1 distances are unchanged.
AlignedVectors align(const DistributionVector& v1, const TypeRegistry& r1,
                     const DistributionVector& v2, const TypeRegistry& r2);

Rational l1_distance(const DistributionVector& a, const DistributionVector& b);

}  // namespace bdrd
