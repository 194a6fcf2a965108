#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "bdrd/database.hpp"
#include "bdrd/numeric.hpp"

namespace bdrd {

enum class EditKind { insert_element, delete_element, insert_tuple, delete_tuple };
enum class Side { left, right };

/// One modification. Deleting an element implicitly removes every tuple that
/// contains it and still counts as a single modification; the remaining
/// elements are relabeled order-preservingly, and later ops in a witness
/// refer to the relabeled ids.
struct EditOp {
    EditKind kind;
    Side side = Side::left;
    std::size_t rel = 0;     // insert_tuple / delete_tuple
    Tuple tuple;             // insert_tuple / delete_tuple
    ElementId element = 0;   // delete_element
};

/// Applies op to db, ignoring op.side. The declared degree bound is raised
/// when an insertion pushes some element above it.
Database apply_edit(const Database& db, const EditOp& op);

struct DistanceResult {
    enum class Kind { exact, infinite, above_budget };
    Kind kind = Kind::infinite;
    std::uint64_t value = 0;       // valid when kind == exact
    std::vector<EditOp> witness;   // replays to an isomorphic pair; empty if not requested

    bool is_exact() const { return kind == Kind::exact; }
};

/// Caps for the exact searches. Both distance problems contain graph
/// isomorphism; these are desk-scale test oracles, not production paths.
struct SearchLimits {
    ElementId max_combined_size = 10;        // dist_pm: |D1| + |D2| cap
    ElementId max_bijection_size = 8;        // dist_bdrd: n! enumeration cap
    std::optional<std::uint64_t> budget;     // stop early once value must exceed this
    std::uint64_t max_states = 4'000'000;    // dist_pm visited-state cap
};

/// Minimum number of tuple insertions/deletions (on either side) making the
/// two databases isomorphic; infinite when the domain sizes differ.
/// Exhaustive over domain bijections with degree-profile pruning.
DistanceResult dist_bdrd(const Database& d1, const Database& d2, const SearchLimits& limits = {});

/// Minimum number of modifications (tuple insert/delete, element
/// insert/delete) applied to either side until the results are isomorphic.
/// Bidirectional uniform-cost search over canonical forms.
DistanceResult dist_pm(const Database& d1, const Database& d2, const SearchLimits& limits = {});

/// dist_pm(d1, d2) <= eps * d * min(|D1|, |D2|), where d is the larger of the
/// two declared degree bounds. Decided exactly via a budgeted search.
bool close_pm(const Database& d1, const Database& d2, const Rational& eps,
              const SearchLimits& limits = {});

/// dist_bdrd(d1, d2) <= eps * d * n (false when the distance is infinite).
bool close_bdrd(const Database& d1, const Database& d2, const Rational& eps,
                const SearchLimits& limits = {});

struct PropertyDistanceResult {
    bool close = false;
    std::optional<std::uint64_t> distance;  // exact distance to the closest member found
    std::size_t member_index = 0;           // valid when close
};

/// Is d epsilon-close (dist_pm) to some member of the explicit finite list?
PropertyDistanceResult dist_to_property_pm(const Database& db,
                                           const std::vector<Database>& members,
                                           const Rational& eps, const SearchLimits& limits = {});

/// True iff partitioned was formed from db by removing at most eps*n tuples
/// and every Gaifman component of partitioned has at most k elements.
bool partition_check(const Database& db, const Database& partitioned, const Rational& eps,
                     std::uint64_t k);

/// Replays a witness: applies left-side ops to d1 and right-side ops to d2 in
/// order, returning the two results (callers check they are isomorphic).
std::pair<Database, Database> replay_witness(const Database& d1, const Database& d2,
                                             const std::vector<EditOp>& witness);

}  // namespace bdrd
