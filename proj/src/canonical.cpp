#include "bdrd/canonical.hpp"

#include <algorithm>
#include <cstring>
#include <map>
#include <vector>

namespace bdrd {

namespace {

void append_u32(std::string& out, std::uint32_t v) {
    char buf[4];
    buf[0] = static_cast<char>(v & 0xff);
    buf[1] = static_cast<char>((v >> 8) & 0xff);
    buf[2] = static_cast<char>((v >> 16) & 0xff);
    buf[3] = static_cast<char>((v >> 24) & 0xff);
    out.append(buf, 4);
}

// Serializes db under the labeling new_label[old] (1-based). Root presence is
// part of the format; the root itself always carries label 1 by construction.
std::string serialize_with(const Database& db, const std::vector<ElementId>& new_label,
                           bool rooted) {
    std::string out;
    out.push_back(rooted ? 1 : 0);
    append_u32(out, db.domain_size());
    std::vector<Tuple> mapped;
    for (std::size_t r = 0; r < db.schema().size(); ++r) {
        const auto& list = db.tuples_of(r);
        mapped.clear();
        mapped.reserve(list.size());
        for (const Tuple& t : list) {
            Tuple m;
            m.reserve(t.size());
            for (ElementId e : t) m.push_back(new_label[e]);
            mapped.push_back(std::move(m));
        }
        std::sort(mapped.begin(), mapped.end());
        append_u32(out, static_cast<std::uint32_t>(mapped.size()));
        for (const Tuple& t : mapped)
            for (ElementId e : t) append_u32(out, e);
    }
    return out;
}

// Colour refinement: a vertex signature combines its colour with the colour
// pattern of every tuple containing it (including which positions it fills).
// Signatures are compressed to dense colour ids ordered by signature value,
// so the resulting cell order is isomorphism-invariant.
class Refiner {
public:
    explicit Refiner(const Database& db) : db_(db), n_(db.domain_size()) {}

    // colors is 1-based with values in [0, n). Returns the number of colours.
    std::uint32_t refine(std::vector<std::uint32_t>& colors) const {
        std::uint32_t count = normalize(colors);
        while (count < n_) {
            std::vector<std::pair<std::vector<std::uint32_t>, ElementId>> signatures;
            signatures.reserve(n_);
            for (ElementId a = 1; a <= n_; ++a)
                signatures.emplace_back(signature_of(a, colors), a);
            std::sort(signatures.begin(), signatures.end());
            std::vector<std::uint32_t> next(n_ + 1, 0);
            std::uint32_t color = 0;
            for (std::size_t i = 0; i < signatures.size(); ++i) {
                if (i > 0 && signatures[i].first != signatures[i - 1].first) ++color;
                next[signatures[i].second] = color;
            }
            std::uint32_t next_count = color + 1;
            if (next_count == count) break;
            colors = std::move(next);
            count = next_count;
        }
        return count;
    }

private:
    std::vector<std::uint32_t> signature_of(ElementId a, const std::vector<std::uint32_t>& colors) const {
        std::vector<std::uint32_t> sig;
        sig.push_back(colors[a]);
        std::vector<std::vector<std::uint32_t>> rows;
        for (std::size_t r = 0; r < db_.schema().size(); ++r) {
            for (std::uint32_t ti : db_.occurrences(r, a)) {
                const Tuple& t = db_.tuples_of(r)[ti];
                std::vector<std::uint32_t> row;
                row.reserve(t.size() + 2);
                row.push_back(static_cast<std::uint32_t>(r));
                for (std::size_t p = 0; p < t.size(); ++p)
                    row.push_back(t[p] == a ? 0xffffffffu : colors[t[p]]);
                rows.push_back(std::move(row));
            }
        }
        std::sort(rows.begin(), rows.end());
        for (const auto& row : rows) {
            sig.insert(sig.end(), row.begin(), row.end());
            sig.push_back(0xfffffffeu);  // row separator
        }
        return sig;
    }

    std::uint32_t normalize(std::vector<std::uint32_t>& colors) const {
        std::map<std::uint32_t, std::uint32_t> remap;
        for (ElementId a = 1; a <= n_; ++a) remap.emplace(colors[a], 0);
        std::uint32_t next = 0;
        for (auto& [old_color, new_color] : remap) new_color = next++;
        for (ElementId a = 1; a <= n_; ++a) colors[a] = remap[colors[a]];
        return next;
    }

    const Database& db_;
    ElementId n_;
};

class CanonSearch {
public:
    CanonSearch(const Database& db, std::optional<ElementId> root)
        : db_(db), n_(db.domain_size()), root_(root), refiner_(db) {}

    std::string run() {
        if (n_ == 0) {
            std::vector<ElementId> ident{0};
            return serialize_with(db_, ident, root_.has_value());
        }
        std::vector<std::uint32_t> colors(n_ + 1, 0);
        if (root_) colors[*root_] = 1;  // the root sits alone in the first cell
        if (root_) {
            // Root must come first: give everyone else a higher colour.
            for (ElementId a = 1; a <= n_; ++a) colors[a] = (a == *root_) ? 0 : 1;
        }
        refiner_.refine(colors);
        descend(colors);
        return best_;
    }

private:
    void descend(std::vector<std::uint32_t>& colors) {
        // Find the first non-singleton cell (cells are ordered by colour id).
        std::vector<std::uint32_t> cell_size(n_, 0);
        for (ElementId a = 1; a <= n_; ++a) ++cell_size[colors[a]];
        std::uint32_t target = 0;
        bool discrete = true;
        for (std::uint32_t c = 0; c < n_; ++c) {
            if (cell_size[c] > 1) {
                target = c;
                discrete = false;
                break;
            }
        }
        if (discrete) {
            std::vector<ElementId> label(n_ + 1, 0);
            for (ElementId a = 1; a <= n_; ++a) label[a] = colors[a] + 1;
            std::string code = serialize_with(db_, label, root_.has_value());
            if (best_.empty() || code < best_) best_ = std::move(code);
            return;
        }
        for (ElementId a = 1; a <= n_; ++a) {
            if (colors[a] != target) continue;
            std::vector<std::uint32_t> branched(colors);
            // Individualize a: pull it just in front of its cell.
            for (ElementId b = 1; b <= n_; ++b)
                branched[b] = branched[b] * 2 + ((b == a) ? 0 : 1);
            refiner_.refine(branched);
            descend(branched);
        }
    }

    const Database& db_;
    ElementId n_;
    std::optional<ElementId> root_;
    Refiner refiner_;
    std::string best_;
};

}  // namespace

std::string canonical_form(const Database& db, std::optional<ElementId> root) {
    if (root && (*root < 1 || *root > db.domain_size()))
        throw Error("canonical_form: root outside the domain");
    return CanonSearch(db, root).run();
}

std::string raw_form(const Database& db, std::optional<ElementId> root) {
    std::vector<ElementId> ident(db.domain_size() + 1);
    for (ElementId a = 0; a <= db.domain_size(); ++a) ident[a] = a;
    std::string out = serialize_with(db, ident, root.has_value());
    if (root) append_u32(out, *root);
    return out;
}

}  // namespace bdrd
