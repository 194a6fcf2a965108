#include "bdrd/distances.hpp"

#include <algorithm>
#include <deque>
#include <unordered_map>

#include "bdrd/canonical.hpp"
#include "bdrd/errors.hpp"

namespace bdrd {

Database apply_edit(const Database& db, const EditOp& op) {
    switch (op.kind) {
        case EditKind::insert_element:
            return Database(db.schema_ptr(), db.domain_size() + 1, db.degree_bound(),
                            db.all_tuples());
        case EditKind::delete_element: {
            if (op.element < 1 || op.element > db.domain_size())
                throw Error("delete-element: element outside the domain");
            std::vector<ElementId> keep;
            keep.reserve(db.domain_size() - 1);
            for (ElementId a = 1; a <= db.domain_size(); ++a)
                if (a != op.element) keep.push_back(a);
            return induced_subdb(db, keep).db;
        }
        case EditKind::insert_tuple: {
            auto tuples = db.all_tuples();
            auto& list = tuples.at(op.rel);
            if (op.tuple.size() != db.schema().at(op.rel).arity)
                throw Error("insert-tuple: arity mismatch");
            auto it = std::lower_bound(list.begin(), list.end(), op.tuple);
            if (it != list.end() && *it == op.tuple)
                throw Error("insert-tuple: tuple already present");
            list.insert(it, op.tuple);
            // Count the new maximum degree so construction cannot reject.
            std::uint32_t bound = db.degree_bound();
            Database relaxed(db.schema_ptr(), db.domain_size(), UINT32_MAX, std::move(tuples));
            std::uint32_t maxdeg = 0;
            for (ElementId a = 1; a <= relaxed.domain_size(); ++a)
                maxdeg = std::max(maxdeg, relaxed.degree_of(a));
            if (maxdeg <= bound)
                return Database(db.schema_ptr(), db.domain_size(), bound, relaxed.all_tuples());
            return Database(db.schema_ptr(), db.domain_size(), maxdeg, relaxed.all_tuples());
        }
        case EditKind::delete_tuple: {
            auto tuples = db.all_tuples();
            auto& list = tuples.at(op.rel);
            auto it = std::lower_bound(list.begin(), list.end(), op.tuple);
            if (it == list.end() || *it != op.tuple)
                throw Error("delete-tuple: tuple not present");
            list.erase(it);
            return Database(db.schema_ptr(), db.domain_size(), db.degree_bound(),
                            std::move(tuples));
        }
    }
    throw Error("unreachable edit kind");
}

std::pair<Database, Database> replay_witness(const Database& d1, const Database& d2,
                                             const std::vector<EditOp>& witness) {
    Database left = d1;
    Database right = d2;
    for (const EditOp& op : witness) {
        if (op.side == Side::left)
            left = apply_edit(left, op);
        else
            right = apply_edit(right, op);
    }
    return {std::move(left), std::move(right)};
}

namespace {

std::uint64_t symmetric_difference(const Database& d1, const Database& d2,
                                   const std::vector<ElementId>& image,
                                   std::vector<std::vector<Tuple>>* mapped_out = nullptr) {
    std::uint64_t diff = 0;
    for (std::size_t r = 0; r < d1.schema().size(); ++r) {
        std::vector<Tuple> mapped;
        mapped.reserve(d1.tuples_of(r).size());
        for (const Tuple& t : d1.tuples_of(r)) {
            Tuple m;
            m.reserve(t.size());
            for (ElementId e : t) m.push_back(image[e]);
            mapped.push_back(std::move(m));
        }
        std::sort(mapped.begin(), mapped.end());
        const auto& other = d2.tuples_of(r);
        std::size_t i = 0, j = 0;
        while (i < mapped.size() && j < other.size()) {
            if (mapped[i] == other[j]) {
                ++i;
                ++j;
            } else if (mapped[i] < other[j]) {
                ++diff;
                ++i;
            } else {
                ++diff;
                ++j;
            }
        }
        diff += (mapped.size() - i) + (other.size() - j);
        if (mapped_out) mapped_out->push_back(std::move(mapped));
    }
    return diff;
}

}  // namespace

DistanceResult dist_bdrd(const Database& d1, const Database& d2, const SearchLimits& limits) {
    if (!(d1.schema() == d2.schema())) throw Error("dist_bdrd: schemas differ");
    if (d1.domain_size() != d2.domain_size()) return {DistanceResult::Kind::infinite, 0, {}};
    const ElementId n = d1.domain_size();
    if (n > limits.max_bijection_size)
        throw SizeCapError("dist_bdrd: domain size " + std::to_string(n) + " above the cap of " +
                           std::to_string(limits.max_bijection_size));

    // The minimum ranges over every bijection, so no degree pruning here:
    // a profile-mismatched map can still attain the optimum.
    std::vector<ElementId> image(n + 1, 0);
    std::vector<bool> used(n + 1, false);
    std::uint64_t best = UINT64_MAX;
    std::vector<ElementId> best_image(n + 1, 0);

    auto search = [&](auto&& self, ElementId depth) -> void {
        if (depth == n) {
            std::uint64_t diff = symmetric_difference(d1, d2, image);
            if (diff < best) {
                best = diff;
                best_image = image;
            }
            return;
        }
        ElementId a = depth + 1;
        for (ElementId b = 1; b <= n; ++b) {
            if (used[b]) continue;
            used[b] = true;
            image[a] = b;
            self(self, depth + 1);
            used[b] = false;
        }
        image[a] = 0;
    };
    search(search, 0);

    DistanceResult result{DistanceResult::Kind::exact, best, {}};
    std::vector<std::vector<Tuple>> mapped;
    symmetric_difference(d1, d2, best_image, &mapped);
    // Inverse map, to express edits against d1's own labels.
    std::vector<ElementId> inverse(n + 1, 0);
    for (ElementId a = 1; a <= n; ++a) inverse[best_image[a]] = a;
    for (std::size_t r = 0; r < d1.schema().size(); ++r) {
        const auto& target = d2.tuples_of(r);
        for (const Tuple& t : mapped[r]) {
            if (!std::binary_search(target.begin(), target.end(), t)) {
                Tuple original;
                original.reserve(t.size());
                for (ElementId e : t) original.push_back(inverse[e]);
                result.witness.push_back({EditKind::delete_tuple, Side::left, r, original, 0});
            }
        }
        for (const Tuple& t : target) {
            if (!std::binary_search(mapped[r].begin(), mapped[r].end(), t)) {
                Tuple original;
                original.reserve(t.size());
                for (ElementId e : t) original.push_back(inverse[e]);
                result.witness.push_back({EditKind::insert_tuple, Side::left, r, original, 0});
            }
        }
    }
    return result;
}

namespace {

struct SearchNode {
    Database rep;
    std::uint64_t cost = 0;
    std::string parent;  // empty for the root
    EditOp op;
};

using VisitedMap = std::unordered_map<std::string, SearchNode>;

// Deletion moves only. Any optimal modification plan can be rewritten to use
// deletions alone: a tuple or (isolated) element inserted on one side and
// surviving to the meeting database can instead be deleted on the other side
// at the same cost, and insert-then-undo pairs are never optimal. Limiting
// the search to deletions keeps it exact while making the state space a
// finite lattice of shrinking databases.
std::vector<std::pair<EditOp, Database>> deletion_neighbors(const Database& db) {
    std::vector<std::pair<EditOp, Database>> out;
    for (ElementId a = 1; a <= db.domain_size(); ++a) {
        EditOp op{EditKind::delete_element, Side::left, 0, {}, a};
        out.emplace_back(op, apply_edit(db, op));
    }
    for (std::size_t r = 0; r < db.schema().size(); ++r) {
        for (const Tuple& t : db.tuples_of(r)) {
            EditOp op{EditKind::delete_tuple, Side::left, r, t, 0};
            out.emplace_back(op, apply_edit(db, op));
        }
    }
    return out;
}

std::vector<EditOp> path_from_root(const VisitedMap& visited, std::string key, Side side) {
    std::vector<EditOp> ops;
    while (true) {
        const SearchNode& node = visited.at(key);
        if (node.parent.empty()) break;
        EditOp op = node.op;
        op.side = side;
        ops.push_back(op);
        key = node.parent;
    }
    std::reverse(ops.begin(), ops.end());
    return ops;
}

std::vector<EditOp> delete_everything_witness(const Database& d1, const Database& d2) {
    std::vector<EditOp> ops;
    for (ElementId a = d1.domain_size(); a >= 1; --a)
        ops.push_back({EditKind::delete_element, Side::left, 0, {}, a});
    for (ElementId a = d2.domain_size(); a >= 1; --a)
        ops.push_back({EditKind::delete_element, Side::right, 0, {}, a});
    return ops;
}

}  // namespace

DistanceResult dist_pm(const Database& d1, const Database& d2, const SearchLimits& limits) {
    if (!(d1.schema() == d2.schema())) throw Error("dist_pm: schemas differ");
    const std::uint64_t combined = std::uint64_t(d1.domain_size()) + d2.domain_size();
    if (combined > limits.max_combined_size)
        throw SizeCapError("dist_pm: combined domain size " + std::to_string(combined) +
                           " above the cap of " + std::to_string(limits.max_combined_size) +
                           " (raise SearchLimits::max_combined_size explicitly)");

    VisitedMap visited_left, visited_right;
    std::deque<std::string> frontier_left, frontier_right;
    std::string start_left = canonical_form(d1);
    std::string start_right = canonical_form(d2);
    visited_left.emplace(start_left, SearchNode{d1, 0, "", {}});
    visited_right.emplace(start_right, SearchNode{d2, 0, "", {}});
    frontier_left.push_back(start_left);
    frontier_right.push_back(start_right);
    std::uint64_t layer_left = 0, layer_right = 0;

    // Deleting every element on both sides always meets at the empty db.
    std::uint64_t best = combined;
    std::string meet_key;  // empty: the seeded delete-everything witness

    if (start_left == start_right) {
        best = 0;
        meet_key = start_left;
    }

    auto try_meet = [&](const std::string& key, std::uint64_t cost_here,
                        const VisitedMap& other) {
        auto it = other.find(key);
        if (it == other.end()) return;
        std::uint64_t total = cost_here + it->second.cost;
        if (total < best) {
            best = total;
            meet_key = key;
        }
    };

    auto expand_layer = [&](VisitedMap& visited, std::deque<std::string>& frontier,
                            const VisitedMap& other, std::uint64_t& layer) {
        std::deque<std::string> next;
        for (const std::string& key : frontier) {
            const SearchNode node = visited.at(key);  // copy: map may rehash below
            for (auto& [op, child] : deletion_neighbors(node.rep)) {
                std::string child_key = canonical_form(child);
                if (visited.count(child_key)) continue;
                visited.emplace(child_key,
                                SearchNode{std::move(child), node.cost + 1, key, op});
                try_meet(child_key, node.cost + 1, other);
                next.push_back(std::move(child_key));
            }
            if (visited.size() + other.size() > limits.max_states)
                throw SizeCapError("dist_pm: state cap exceeded (" +
                                   std::to_string(limits.max_states) + ")");
        }
        frontier = std::move(next);
        ++layer;
    };

    // A total dL(u) + dR(u) is only counted once both sides settle u, so the
    // search may stop exactly when both next layers already cost >= best.
    while (true) {
        std::uint64_t effective_best =
            limits.budget ? std::min<std::uint64_t>(best, *limits.budget + 1) : best;
        std::uint64_t next_left = frontier_left.empty() ? UINT64_MAX : layer_left + 1;
        std::uint64_t next_right = frontier_right.empty() ? UINT64_MAX : layer_right + 1;
        if (std::min(next_left, next_right) >= effective_best) break;
        bool expand_left =
            next_left < next_right ||
            (next_left == next_right && frontier_left.size() <= frontier_right.size());
        if (expand_left)
            expand_layer(visited_left, frontier_left, visited_right, layer_left);
        else
            expand_layer(visited_right, frontier_right, visited_left, layer_right);
    }

    if (limits.budget && best > *limits.budget)
        return {DistanceResult::Kind::above_budget, 0, {}};

    DistanceResult result{DistanceResult::Kind::exact, best, {}};
    if (meet_key.empty()) {
        result.witness = delete_everything_witness(d1, d2);
    } else {
        result.witness = path_from_root(visited_left, meet_key, Side::left);
        auto right_ops = path_from_root(visited_right, meet_key, Side::right);
        result.witness.insert(result.witness.end(), right_ops.begin(), right_ops.end());
    }
    return result;
}

namespace {

std::uint32_t common_degree_bound(const Database& d1, const Database& d2) {
    return std::max(d1.degree_bound(), d2.degree_bound());
}

}  // namespace

bool close_pm(const Database& d1, const Database& d2, const Rational& eps,
              const SearchLimits& limits) {
    Rational threshold = eps * common_degree_bound(d1, d2) *
                         Rational(std::min(d1.domain_size(), d2.domain_size()));
    if (threshold < 0) return false;
    SearchLimits budgeted = limits;
    Nat floor = rational_floor(threshold);
    budgeted.budget = floor.convert_to<std::uint64_t>();
    DistanceResult r = dist_pm(d1, d2, budgeted);
    return r.kind == DistanceResult::Kind::exact && Rational(r.value) <= threshold;
}

bool close_bdrd(const Database& d1, const Database& d2, const Rational& eps,
                const SearchLimits& limits) {
    DistanceResult r = dist_bdrd(d1, d2, limits);
    if (r.kind != DistanceResult::Kind::exact) return false;
    Rational threshold =
        eps * common_degree_bound(d1, d2) * Rational(d1.domain_size());
    return Rational(r.value) <= threshold;
}

PropertyDistanceResult dist_to_property_pm(const Database& db,
                                           const std::vector<Database>& members,
                                           const Rational& eps, const SearchLimits& limits) {
    PropertyDistanceResult out;
    for (std::size_t i = 0; i < members.size(); ++i) {
        Rational threshold = eps * common_degree_bound(db, members[i]) *
                             Rational(std::min(db.domain_size(), members[i].domain_size()));
        SearchLimits budgeted = limits;
        budgeted.budget = rational_floor(std::max(threshold, Rational(0)))
                              .convert_to<std::uint64_t>();
        DistanceResult r = dist_pm(db, members[i], budgeted);
        if (r.kind == DistanceResult::Kind::exact && Rational(r.value) <= threshold) {
            if (!out.close || r.value < *out.distance) {
                out.close = true;
                out.distance = r.value;
                out.member_index = i;
            }
        }
    }
    return out;
}

bool partition_check(const Database& db, const Database& partitioned, const Rational& eps,
                     std::uint64_t k) {
    if (!(db.schema() == partitioned.schema())) throw Error("partition_check: schemas differ");
    if (db.domain_size() != partitioned.domain_size())
        throw Error("partition_check: domains differ");
    std::uint64_t removed = 0;
    for (std::size_t r = 0; r < db.schema().size(); ++r) {
        const auto& full = db.tuples_of(r);
        const auto& part = partitioned.tuples_of(r);
        if (!std::includes(full.begin(), full.end(), part.begin(), part.end())) return false;
        removed += full.size() - part.size();
    }
    if (Rational(removed) > eps * Rational(db.domain_size())) return false;

    // Component sizes of the partitioned database's Gaifman graph.
    const ElementId n = partitioned.domain_size();
    std::vector<bool> seen(n + 1, false);
    for (ElementId a = 1; a <= n; ++a) {
        if (seen[a]) continue;
        std::uint64_t size = 0;
        std::vector<ElementId> stack{a};
        seen[a] = true;
        while (!stack.empty()) {
            ElementId x = stack.back();
            stack.pop_back();
            ++size;
            for (ElementId y : partitioned.gaifman_neighbors(x)) {
                if (!seen[y]) {
                    seen[y] = true;
                    stack.push_back(y);
                }
            }
        }
        if (size > k) return false;
    }
    return true;
}

}  // namespace bdrd
