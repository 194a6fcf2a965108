#pragma once

#include <optional>
#include <string>

#include "bdrd/database.hpp"

namespace bdrd {

/// Canonical byte string of a database, optionally with a distinguished root.
///
/// Two databases get equal strings iff they are isomorphic (mapping root to
/// root when one is given). The string is the lexicographically minimal
/// serialization over all relabelings compatible with an iterated-refinement
/// partition; when a root is given it is pinned to label 1.
std::string canonical_form(const Database& db, std::optional<ElementId> root = std::nullopt);

/// Plain serialization of db under its current labeling (same wire format as
/// canonical_form, without the minimization). Useful as an exact cache key.
std::string raw_form(const Database& db, std::optional<ElementId> root = std::nullopt);

}  // namespace bdrd
