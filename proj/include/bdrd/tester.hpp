#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>

#include "bdrd/database.hpp"
#include "bdrd/neighborhoods.hpp"
#include "bdrd/numeric.hpp"
#include "bdrd/semilinear.hpp"

namespace bdrd {

/// Base radius/lambda functions of the locality guarantee. These are opaque
/// configuration: desk-scale profiles are calibrated per property and record
/// their provenance, since no algorithm derives them from the property.
struct LocalityProfile {
    std::function<unsigned(const Rational&)> radius_for;
    std::function<Rational(const Rational&)> lambda_for;  // values in (0, 1]
    std::string provenance;

    static LocalityProfile constant(unsigned r, Rational lambda, std::string provenance);
};

/// paper: lambda = eps * base_lambda(eps/4) / (1 + d^(r+1)), the full
///        worst-case chain. calibrated: the profile's lambda is used as-is,
///        re-verified empirically for the fixture properties.
enum class ParamMode { paper, calibrated };

struct TesterParams {
    Rational epsilon;
    unsigned r = 0;
    Rational lambda;
    Nat c;  // coordinate count of the property's semilinear set at radius r
    Nat k;  // max period count + 1
    Nat v;  // max L1 norm over base and period vectors
    Rational f;      // lambda / 3c
    Rational mu;     // lambda / 6c
    Rational n0;     // k v (3 c k v / (f - mu) + 1)
    Rational n_min;  // n0 - k v
    Rational n_max;  // n0 + k v
    Nat s;           // ceil(c^2 / mu^2 * ln(20 c))
};

struct PropertySpec {
    std::string name;
    SchemaPtr schema;
    std::function<bool(const Database&)> exact_decider;
    std::map<unsigned, SemilinearSet> histograms;   // radius -> histogram set
    std::map<unsigned, TypeRegistry> registries;    // pinned coordinate meaning
    LocalityProfile profile;
};

/// Derives every constant of the tester from (epsilon, d, property). Throws
/// when the profile is inconsistent (lambda outside (0,1] or n_min <= 0).
TesterParams derive_params(const Rational& epsilon, std::uint32_t degree_bound,
                           const PropertySpec& property, ParamMode mode = ParamMode::calibrated);

struct Verdict {
    bool accept = false;
    enum class Branch { full_check, sampled } branch = Branch::full_check;
    std::uint64_t queries = 0;
    std::uint64_t seed = 0;
    std::optional<Rational> l1_min;  // sampled branch: min distance found
    DistributionVector estimate;     // sampled branch: the (possibly injected) vector
    TypeRegistry estimate_registry;
};

/// The step-3 decision alone: accept iff some member histogram with norm in
/// [n_min, n_max] normalises to within f of the estimate (registries are
/// aligned first). Exposed so exact distribution vectors can be injected in
/// place of a sample.
Verdict decide_from_estimate(const DistributionVector& estimate, const TypeRegistry& est_registry,
                             const TesterParams& params, const PropertySpec& property);

/// The constant-query epsilon-tester: full check below n_max, otherwise
/// sample-and-compare. Query count depends only on (epsilon, d, schema,
/// property), never on n.
Verdict epsilon_tester(OracleHandle& oracle, const Rational& epsilon,
                       const PropertySpec& property, std::uint64_t seed,
                       ParamMode mode = ParamMode::calibrated);

/// The trivial tester for "bipartite or odd order": accept outright when
/// n >= 1/(eps*d), otherwise materialise and decide exactly.
Verdict trivial_tester_bip_or_odd(OracleHandle& oracle, const Rational& epsilon);

/// Materialises the database behind an oracle by issuing all n*d*|schema|
/// possible queries (used by the full-check branch).
Database materialize_via_oracle(OracleHandle& oracle);

// Built-in exact deciders (graph properties over the {E:2} schema).
bool decide_disjoint_triangles(const Database& db);
bool decide_matchings(const Database& db);
bool decide_bip_or_odd(const Database& db);
bool decide_grid(const Database& db);

/// name -> decider for property files.
const std::map<std::string, std::function<bool(const Database&)>>& builtin_deciders();

/// Loads a property file; relative semilinear/registry paths resolve against
/// the property file's directory.
PropertySpec load_property_file(const std::string& path);

/// Histogram of db over the property's pinned registry at radius r, or
/// nullopt when db realises a type outside the pinned coordinate space.
std::optional<std::vector<Nat>> property_histogram(const Database& db, const PropertySpec& spec,
                                                   unsigned r);

}  // namespace bdrd
