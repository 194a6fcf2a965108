#include "bdrd/schema.hpp"

#include <unordered_set>

namespace bdrd {

Schema::Schema(std::vector<RelationDecl> relations) : relations_(std::move(relations)) {
    std::unordered_set<std::string> seen;
    for (const auto& rel : relations_) {
        if (rel.name.empty()) throw Error("relation name must be non-empty");
        if (rel.arity < 1) throw Error("relation '" + rel.name + "' must have arity >= 1");
        if (!seen.insert(rel.name).second)
            throw Error("duplicate relation name '" + rel.name + "'");
    }
}

std::size_t Schema::index_of(std::string_view name) const {
    for (std::size_t i = 0; i < relations_.size(); ++i)
        if (relations_[i].name == name) return i;
    throw Error("unknown relation '" + std::string(name) + "'");
}

bool Schema::has(std::string_view name) const {
    for (const auto& rel : relations_)
        if (rel.name == name) return true;
    return false;
}

std::shared_ptr<const Schema> Schema::graph() {
    static const auto schema =
        std::make_shared<const Schema>(std::vector<RelationDecl>{{"E", 2}});
    return schema;
}

}  // namespace bdrd
