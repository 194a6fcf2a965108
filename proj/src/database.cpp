#include "bdrd/database.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <sstream>

#include "bdrd/errors.hpp"

namespace bdrd {

Database::Database(SchemaPtr schema, ElementId domain_size, std::uint32_t degree_bound,
                   std::vector<std::vector<Tuple>> tuples)
    : schema_(std::move(schema)),
      domain_size_(domain_size),
      degree_bound_(degree_bound),
      tuples_(std::move(tuples)) {
    if (!schema_) throw Error("database needs a schema");
    if (tuples_.size() != schema_->size())
        throw Error("tuple lists do not match schema relation count");

    for (std::size_t r = 0; r < tuples_.size(); ++r) {
        const unsigned arity = schema_->at(r).arity;
        const Tuple* prev = nullptr;
        for (const Tuple& t : tuples_[r]) {
            if (t.size() != arity)
                throw Error("tuple of wrong arity in relation '" + schema_->at(r).name + "'");
            for (ElementId e : t)
                if (e < 1 || e > domain_size_)
                    throw Error("tuple element out of domain [1," +
                                std::to_string(domain_size_) + "] in relation '" +
                                schema_->at(r).name + "'");
            if (prev != nullptr && !(*prev < t))
                throw Error("tuples of relation '" + schema_->at(r).name +
                            "' must be sorted with no duplicates");
            prev = &t;
        }
    }
    build_index();
    for (ElementId a = 1; a <= domain_size_; ++a)
        if (degrees_[a] > degree_bound_)
            throw Error("element " + std::to_string(a) + " has degree " +
                        std::to_string(degrees_[a]) + " > bound " +
                        std::to_string(degree_bound_));
}

Database Database::empty(SchemaPtr schema, ElementId domain_size, std::uint32_t degree_bound) {
    std::vector<std::vector<Tuple>> tuples(schema->size());
    return Database(std::move(schema), domain_size, degree_bound, std::move(tuples));
}

void Database::build_index() {
    const std::size_t nrel = tuples_.size();
    degrees_.assign(domain_size_ + 1, 0);
    occ_offsets_.assign(nrel, {});
    occ_entries_.assign(nrel, {});

    std::vector<ElementId> distinct;
    for (std::size_t r = 0; r < nrel; ++r) {
        std::vector<std::uint32_t> counts(domain_size_ + 2, 0);
        for (const Tuple& t : tuples_[r]) {
            distinct.assign(t.begin(), t.end());
            std::sort(distinct.begin(), distinct.end());
            distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
            for (ElementId e : distinct) {
                ++counts[e];
                ++degrees_[e];
            }
        }
        auto& offsets = occ_offsets_[r];
        offsets.assign(domain_size_ + 2, 0);
        for (ElementId a = 1; a <= domain_size_; ++a) offsets[a + 1] = offsets[a] + counts[a];
        occ_entries_[r].resize(offsets[domain_size_ + 1]);
        std::vector<std::uint32_t> cursor(offsets.begin(), offsets.end());
        for (std::uint32_t ti = 0; ti < tuples_[r].size(); ++ti) {
            const Tuple& t = tuples_[r][ti];
            distinct.assign(t.begin(), t.end());
            std::sort(distinct.begin(), distinct.end());
            distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
            for (ElementId e : distinct) occ_entries_[r][cursor[e]++] = ti;
        }
    }
}

std::uint64_t Database::tuple_count() const {
    std::uint64_t total = 0;
    for (const auto& list : tuples_) total += list.size();
    return total;
}

void Database::check_element(ElementId a) const {
    if (a < 1 || a > domain_size_)
        throw Error("element " + std::to_string(a) + " outside domain [1," +
                    std::to_string(domain_size_) + "]");
}

std::uint32_t Database::degree_of(ElementId a) const {
    check_element(a);
    return degrees_[a];
}

std::span<const std::uint32_t> Database::occurrences(std::size_t rel, ElementId a) const {
    check_element(a);
    const auto& offsets = occ_offsets_.at(rel);
    const auto& entries = occ_entries_[rel];
    return {entries.data() + offsets[a], entries.data() + offsets[a + 1]};
}

std::vector<ElementId> Database::gaifman_neighbors(ElementId a) const {
    check_element(a);
    std::vector<ElementId> out;
    for (std::size_t r = 0; r < tuples_.size(); ++r)
        for (std::uint32_t ti : occurrences(r, a))
            for (ElementId e : tuples_[r][ti])
                if (e != a) out.push_back(e);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

bool Database::operator==(const Database& other) const {
    return *schema_ == *other.schema_ && domain_size_ == other.domain_size_ &&
           degree_bound_ == other.degree_bound_ && tuples_ == other.tuples_;
}

std::optional<Tuple> OracleHandle::query(std::size_t rel, ElementId i, std::uint32_t j) {
    if (rel >= db_->schema().size())
        throw ContractViolation("oracle query names relation index " + std::to_string(rel) +
                                " outside the schema");
    if (i < 1 || i > db_->domain_size())
        throw ContractViolation("oracle query element " + std::to_string(i) +
                                " outside [1," + std::to_string(db_->domain_size()) + "]");
    if (j < 1 || j > db_->degree_bound())
        throw ContractViolation("oracle query index j=" + std::to_string(j) +
                                " outside [1," + std::to_string(db_->degree_bound()) + "]");
    ++queries_;
    auto occ = db_->occurrences(rel, i);
    if (j > occ.size()) return std::nullopt;
    return db_->tuples_of(rel)[occ[j - 1]];
}

std::optional<Tuple> OracleHandle::query(std::string_view rel_name, ElementId i, std::uint32_t j) {
    return query(db_->schema().index_of(rel_name), i, j);
}

SimpleGraph gaifman_graph(const Database& db) {
    SimpleGraph g;
    g.n = db.domain_size();
    g.adj.assign(g.n + 1, {});
    for (ElementId a = 1; a <= g.n; ++a) g.adj[a] = db.gaifman_neighbors(a);
    return g;
}

InducedSubdb induced_subdb(const Database& db, const std::vector<ElementId>& M) {
    std::vector<ElementId> members = M;
    std::sort(members.begin(), members.end());
    members.erase(std::unique(members.begin(), members.end()), members.end());
    for (ElementId e : members)
        if (e < 1 || e > db.domain_size())
            throw Error("induced set contains element outside the domain");

    // Order-preserving relabeling M -> [|M|].
    std::vector<ElementId> relabel(db.domain_size() + 1, 0);
    for (std::size_t i = 0; i < members.size(); ++i) relabel[members[i]] = static_cast<ElementId>(i + 1);

    std::vector<std::vector<Tuple>> tuples(db.schema().size());
    for (std::size_t r = 0; r < db.schema().size(); ++r) {
        for (const Tuple& t : db.tuples_of(r)) {
            Tuple mapped;
            mapped.reserve(t.size());
            bool inside = true;
            for (ElementId e : t) {
                if (relabel[e] == 0) {
                    inside = false;
                    break;
                }
                mapped.push_back(relabel[e]);
            }
            if (inside) tuples[r].push_back(std::move(mapped));
        }
        // Order-preserving relabeling keeps lexicographic tuple order.
    }
    Database sub(db.schema_ptr(), static_cast<ElementId>(members.size()), db.degree_bound(),
                 std::move(tuples));
    return {std::move(sub), std::move(members)};
}

namespace {

struct Line {
    std::uint64_t number = 0;
    std::vector<std::string> tokens;
    std::vector<std::uint64_t> columns;
};

std::vector<Line> tokenize(std::istream& in) {
    std::vector<Line> lines;
    std::string raw;
    std::uint64_t number = 0;
    while (std::getline(in, raw)) {
        ++number;
        Line line;
        line.number = number;
        std::size_t i = 0;
        while (i < raw.size()) {
            while (i < raw.size() && (raw[i] == ' ' || raw[i] == '\t' || raw[i] == '\r')) ++i;
            if (i >= raw.size()) break;
            if (raw[i] == '#') break;  // comment to end of line
            std::size_t start = i;
            while (i < raw.size() && raw[i] != ' ' && raw[i] != '\t' && raw[i] != '\r' &&
                   raw[i] != '#')
                ++i;
            line.tokens.push_back(raw.substr(start, i - start));
            line.columns.push_back(start + 1);
        }
        if (!line.tokens.empty()) lines.push_back(std::move(line));
    }
    return lines;
}

std::uint64_t parse_u64(const std::string& tok, const Line& line, std::size_t idx) {
    std::uint64_t v = 0;
    for (char ch : tok) {
        if (ch < '0' || ch > '9')
            throw ParseError("expected a non-negative integer, got '" + tok + "'", line.number,
                             line.columns[idx]);
        if (v > (UINT64_MAX - (ch - '0')) / 10)
            throw ParseError("integer too large: '" + tok + "'", line.number, line.columns[idx]);
        v = v * 10 + static_cast<std::uint64_t>(ch - '0');
    }
    return v;
}

}  // namespace

Database parse_db(std::istream& in) {
    auto lines = tokenize(in);
    std::size_t li = 0;
    auto need = [&](const char* what) -> const Line& {
        if (li >= lines.size())
            throw ParseError(std::string("unexpected end of file, expected ") + what,
                             lines.empty() ? 1 : lines.back().number + 1);
        return lines[li];
    };

    // schema <name:arity ...>
    {
        const Line& line = need("'schema' header");
        if (line.tokens[0] != "schema")
            throw ParseError("expected 'schema' header", line.number, line.columns[0]);
        if (line.tokens.size() < 2)
            throw ParseError("schema needs at least one relation", line.number, line.columns[0]);
    }
    std::vector<RelationDecl> decls;
    {
        const Line& line = lines[li];
        for (std::size_t t = 1; t < line.tokens.size(); ++t) {
            const std::string& tok = line.tokens[t];
            auto colon = tok.find(':');
            if (colon == std::string::npos || colon == 0 || colon + 1 >= tok.size())
                throw ParseError("expected name:arity, got '" + tok + "'", line.number,
                                 line.columns[t]);
            std::uint64_t arity = parse_u64(tok.substr(colon + 1), line, t);
            if (arity < 1)
                throw ParseError("arity must be >= 1 in '" + tok + "'", line.number,
                                 line.columns[t]);
            decls.push_back({tok.substr(0, colon), static_cast<unsigned>(arity)});
        }
        ++li;
    }
    SchemaPtr schema;
    try {
        schema = std::make_shared<const Schema>(std::move(decls));
    } catch (const Error& e) {
        throw ParseError(e.what(), lines[0].number);
    }

    auto expect_kv = [&](const char* key) -> std::uint64_t {
        const Line& line = need(key);
        if (line.tokens[0] != key || line.tokens.size() != 2)
            throw ParseError(std::string("expected '") + key + " <value>'", line.number,
                             line.columns[0]);
        std::uint64_t v = parse_u64(line.tokens[1], line, 1);
        ++li;
        return v;
    };
    std::uint64_t degree_bound = expect_kv("degree_bound");
    std::uint64_t domain = expect_kv("domain");
    if (domain > 0xffffffffULL)
        throw ParseError("domain size too large", lines[li - 1].number);

    std::vector<std::vector<Tuple>> tuples(schema->size());
    for (std::size_t r = 0; r < schema->size(); ++r) {
        const Line& header = need("'rel' section");
        if (header.tokens[0] != "rel" || header.tokens.size() != 2)
            throw ParseError("expected 'rel <name>'", header.number, header.columns[0]);
        if (header.tokens[1] != schema->at(r).name)
            throw ParseError("expected relation '" + schema->at(r).name +
                                 "' here (relations appear in schema order), got '" +
                                 header.tokens[1] + "'",
                             header.number, header.columns[1]);
        ++li;
        const unsigned arity = schema->at(r).arity;
        while (li < lines.size() && lines[li].tokens[0] != "rel") {
            const Line& line = lines[li];
            if (line.tokens.size() != arity)
                throw ParseError("tuple for '" + schema->at(r).name + "' needs " +
                                     std::to_string(arity) + " elements, got " +
                                     std::to_string(line.tokens.size()),
                                 line.number, line.columns[0]);
            Tuple t;
            t.reserve(arity);
            for (std::size_t c = 0; c < arity; ++c) {
                std::uint64_t e = parse_u64(line.tokens[c], line, c);
                if (e < 1 || e > domain)
                    throw ParseError("element " + line.tokens[c] + " outside domain [1," +
                                         std::to_string(domain) + "]",
                                     line.number, line.columns[c]);
                t.push_back(static_cast<ElementId>(e));
            }
            if (!tuples[r].empty() && !(tuples[r].back() < t))
                throw ParseError("tuples must be strictly sorted (lexicographic, no duplicates)",
                                 line.number, line.columns[0]);
            tuples[r].push_back(std::move(t));
            ++li;
        }
    }
    if (li < lines.size())
        throw ParseError("unexpected trailing content '" + lines[li].tokens[0] + "'",
                         lines[li].number, lines[li].columns[0]);

    try {
        return Database(schema, static_cast<ElementId>(domain),
                        static_cast<std::uint32_t>(degree_bound), std::move(tuples));
    } catch (const Error& e) {
        throw ParseError(e.what(), lines.empty() ? 1 : lines.back().number);
    }
}

Database parse_db_string(const std::string& text) {
    std::istringstream in(text);
    return parse_db(in);
}

Database load_db_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open database file '" + path + "'");
    return parse_db(in);
}

std::string serialize_db(const Database& db) {
    std::ostringstream out;
    out << "schema";
    for (const auto& rel : db.schema().relations()) out << ' ' << rel.name << ':' << rel.arity;
    out << '\n';
    out << "degree_bound " << db.degree_bound() << '\n';
    out << "domain " << db.domain_size() << '\n';
    for (std::size_t r = 0; r < db.schema().size(); ++r) {
        out << "rel " << db.schema().at(r).name << '\n';
        for (const Tuple& t : db.tuples_of(r)) {
            for (std::size_t i = 0; i < t.size(); ++i) out << (i ? " " : "") << t[i];
            out << '\n';
        }
    }
    return out.str();
}

void save_db_file(const Database& db, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write database file '" + path + "'");
    out << serialize_db(db);
}

}  // namespace bdrd
