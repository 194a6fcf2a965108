#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "bdrd/errors.hpp"

namespace bdrd {

struct RelationDecl {
    std::string name;
    unsigned arity = 0;

    bool operator==(const RelationDecl&) const = default;
};

/// A fixed, ordered list of relation names with arities. The list order
/// defines the lexicographic order of tuples across relations.
class Schema {
public:
    explicit Schema(std::vector<RelationDecl> relations);

    const std::vector<RelationDecl>& relations() const { return relations_; }
    std::size_t size() const { return relations_.size(); }
    const RelationDecl& at(std::size_t i) const { return relations_.at(i); }

    /// Index of a relation name, or throws.
    std::size_t index_of(std::string_view name) const;
    bool has(std::string_view name) const;

    bool operator==(const Schema&) const = default;

    /// The single binary relation "E" used for undirected graphs.
    static std::shared_ptr<const Schema> graph();

private:
    std::vector<RelationDecl> relations_;
};

using SchemaPtr = std::shared_ptr<const Schema>;

}  // namespace bdrd
