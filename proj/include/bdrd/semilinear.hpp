#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bdrd/numeric.hpp"

namespace bdrd {

/// { base + a1*periods[0] + ... + ak*periods[k-1] : aj in N }.
/// Every period has L1 norm >= 1 (validated); the base may be zero.
struct LinearSet {
    std::vector<Nat> base;
    std::vector<std::vector<Nat>> periods;
};

/// Finite union of linear sets over a shared coordinate space of dimension
/// dim() >= 1. Components may overlap; the union may be empty.
class SemilinearSet {
public:
    SemilinearSet(std::size_t dim, std::vector<LinearSet> components);

    std::size_t dim() const { return dim_; }
    const std::vector<LinearSet>& components() const { return components_; }
    bool empty() const { return components_.empty(); }

    /// max over components of (period count) + 1; 1 for the empty union.
    Nat k() const;
    /// max L1 norm over all base and period vectors; 0 for the empty union.
    Nat v() const;

private:
    std::size_t dim_;
    std::vector<LinearSet> components_;
};

struct ContainsWitness {
    std::size_t component = 0;
    std::vector<Nat> coefficients;
};

/// Nonnegative-integer coefficient search, bounded because every period has
/// norm >= 1. The witness is the lexicographically least (component index,
/// coefficient tuple) solution.
std::optional<ContainsWitness> contains(const SemilinearSet& set, const std::vector<Nat>& h);

/// All members with n_lo <= |h|_1 <= n_hi, duplicate-free, in the pinned
/// search order (first occurrence wins).
std::vector<std::vector<Nat>> enumerate_norm_range(const SemilinearSet& set, const Nat& n_lo,
                                                   const Nat& n_hi);

struct MinDistributionDistance {
    bool found = false;          // false when no member has norm in range
    Rational distance;           // meaningless unless found
    std::vector<Nat> argmin;     // first member attaining the minimum
};

/// min over members h in the norm range of || dv - h/|h|_1 ||_1, exact.
/// Normalised histograms stand in for dv_r of a realising database, so no
/// database construction is involved.
MinDistributionDistance min_distribution_distance(const SemilinearSet& set,
                                                  const std::vector<Rational>& dv,
                                                  const Rational& n_lo, const Rational& n_hi);

/// Scales a member h = base + sum coeffs[j]*periods[j] of the given component
/// to target size n0 by rounding each coefficient to the nearest integer of
/// coeffs[j]*n0/n (half up). Requires |h|_1 > n0 + k*v.
std::vector<Nat> round_to_target_size(const SemilinearSet& set, std::size_t component,
                                      const std::vector<Nat>& coefficients, const Rational& n0);

/// A member h0 with || h/|h|_1 - h0/|h0|_1 ||_1 <= epsilon and
/// |h0|_1 <= k*v*(3*c*k*v/epsilon + 2). Throws if h is not a member.
std::vector<Nat> small_representative(const SemilinearSet& set, const std::vector<Nat>& h,
                                      const Rational& epsilon);

Nat l1_norm(const std::vector<Nat>& h);

struct SemilinearFile {
    SemilinearSet set;
    std::optional<std::string> registry_path;  // as written in the file
};

SemilinearFile parse_semilinear(const std::string& text);
SemilinearFile load_semilinear_file(const std::string& path);
std::string serialize_semilinear(const SemilinearSet& set,
                                 const std::optional<std::string>& registry_path = std::nullopt);

}  // namespace bdrd
