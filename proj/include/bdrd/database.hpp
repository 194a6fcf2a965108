#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bdrd/schema.hpp"

namespace bdrd {

using ElementId = std::uint32_t;  // 1-based, domain is [n]
using Tuple = std::vector<ElementId>;

/// An immutable bounded-degree relational database over a fixed schema.
///
/// The domain is exactly [n] with its natural linear order. Tuple lists are
/// kept sorted lexicographically with no duplicates, and every element is
/// contained in at most degree_bound() tuples across all relations. All of
/// this is validated at construction; there is no mutation API.
class Database {
public:
    Database(SchemaPtr schema, ElementId domain_size, std::uint32_t degree_bound,
             std::vector<std::vector<Tuple>> tuples);

    static Database empty(SchemaPtr schema, ElementId domain_size, std::uint32_t degree_bound);

    const Schema& schema() const { return *schema_; }
    const SchemaPtr& schema_ptr() const { return schema_; }
    ElementId domain_size() const { return domain_size_; }
    std::uint32_t degree_bound() const { return degree_bound_; }

    const std::vector<Tuple>& tuples_of(std::size_t rel) const { return tuples_.at(rel); }
    const std::vector<std::vector<Tuple>>& all_tuples() const { return tuples_; }
    std::uint64_t tuple_count() const;

    /// Number of tuples over all relations containing a. Throws if a is not in [n].
    std::uint32_t degree_of(ElementId a) const;

    /// Indices into tuples_of(rel) of the tuples containing a, in list order.
    std::span<const std::uint32_t> occurrences(std::size_t rel, ElementId a) const;

    /// Distinct elements sharing a tuple with a (excluding a), sorted.
    std::vector<ElementId> gaifman_neighbors(ElementId a) const;

    /// Structural equality: same schema contents, n, degree bound, tuples.
    bool operator==(const Database& other) const;

private:
    void check_element(ElementId a) const;
    void build_index();

    SchemaPtr schema_;
    ElementId domain_size_ = 0;
    std::uint32_t degree_bound_ = 0;
    std::vector<std::vector<Tuple>> tuples_;
    // CSR occurrence index per relation: offsets_[rel][a] .. offsets_[rel][a+1]
    // delimit entries_[rel] holding tuple indices containing element a.
    std::vector<std::vector<std::uint32_t>> occ_offsets_;
    std::vector<std::vector<std::uint32_t>> occ_entries_;
    std::vector<std::uint32_t> degrees_;
};

/// Read-only oracle view of a database with a per-handle query counter.
/// (R, i, j) answers the j-th tuple of R containing element i, or nothing.
class OracleHandle {
public:
    explicit OracleHandle(const Database& db) : db_(&db) {}

    ElementId domain_size() const { return db_->domain_size(); }
    std::uint32_t degree_bound() const { return db_->degree_bound(); }
    const Schema& schema() const { return db_->schema(); }
    SchemaPtr schema_ptr() const { return db_->schema_ptr(); }

    /// Throws ContractViolation when i > n, j < 1, or j > degree bound;
    /// a legal query with no j-th tuple returns nullopt. Every legal query
    /// bumps the counter by exactly one.
    std::optional<Tuple> query(std::size_t rel, ElementId i, std::uint32_t j);
    std::optional<Tuple> query(std::string_view rel_name, ElementId i, std::uint32_t j);

    std::uint64_t query_count() const { return queries_; }

private:
    const Database* db_;
    std::uint64_t queries_ = 0;
};

struct SimpleGraph {
    ElementId n = 0;
    std::vector<std::vector<ElementId>> adj;  // 1-based; adj[0] unused
};

/// Gaifman graph: edge {a,b} iff a != b and some tuple contains both.
SimpleGraph gaifman_graph(const Database& db);

struct InducedSubdb {
    Database db;                       // relabeled to [|M|], order preserved
    std::vector<ElementId> original;   // original[i] = source element of i+1
};

/// Sub-database induced by M (sorted set of elements of db): keeps exactly
/// the tuples entirely inside M.
InducedSubdb induced_subdb(const Database& db, const std::vector<ElementId>& M);

Database parse_db(std::istream& in);
Database parse_db_string(const std::string& text);
Database load_db_file(const std::string& path);

/// Canonical text form: relations in schema order, tuples sorted.
/// parse -> serialize is the identity on canonical files.
std::string serialize_db(const Database& db);
void save_db_file(const Database& db, const std::string& path);

}  // namespace bdrd
