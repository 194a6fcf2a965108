#include "bdrd/semilinear.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "bdrd/errors.hpp"

namespace bdrd {

Nat l1_norm(const std::vector<Nat>& h) {
    Nat sum = 0;
    for (const Nat& x : h) sum += x;
    return sum;
}

SemilinearSet::SemilinearSet(std::size_t dim, std::vector<LinearSet> components)
    : dim_(dim), components_(std::move(components)) {
    if (dim_ < 1) throw DimensionError("coordinate space must have dimension >= 1");
    for (const LinearSet& ls : components_) {
        if (ls.base.size() != dim_)
            throw DimensionError("base vector does not match dimension " + std::to_string(dim_));
        for (const Nat& x : ls.base)
            if (x < 0) throw Error("base vectors live in N^c");
        for (const auto& p : ls.periods) {
            if (p.size() != dim_)
                throw DimensionError("period vector does not match dimension " +
                                     std::to_string(dim_));
            Nat norm = 0;
            for (const Nat& x : p) {
                if (x < 0) throw Error("period vectors live in N^c");
                norm += x;
            }
            if (norm == 0) throw Error("period vectors must have L1 norm >= 1");
        }
    }
}

Nat SemilinearSet::k() const {
    std::size_t max_periods = 0;
    for (const LinearSet& ls : components_) max_periods = std::max(max_periods, ls.periods.size());
    return Nat(max_periods) + 1;
}

Nat SemilinearSet::v() const {
    Nat best = 0;
    for (const LinearSet& ls : components_) {
        best = std::max(best, l1_norm(ls.base));
        for (const auto& p : ls.periods) best = std::max(best, l1_norm(p));
    }
    return best;
}

namespace {

// DFS over coefficients of one component, ascending per coefficient so the
// first hit is lexicographically least. `remaining` holds h - base - partial.
bool coefficient_search(const LinearSet& ls, std::size_t j, std::vector<Nat>& remaining,
                        std::vector<Nat>& coeffs) {
    if (j == ls.periods.size()) {
        for (const Nat& x : remaining)
            if (x != 0) return false;
        return true;
    }
    const auto& period = ls.periods[j];
    // Later periods cannot supply a coordinate they are all zero on, so the
    // current coefficient is forced wherever period is the last contributor.
    Nat hi = -1;
    for (std::size_t q = 0; q < period.size(); ++q) {
        if (period[q] == 0) continue;
        Nat bound = remaining[q] / period[q];
        if (hi < 0 || bound < hi) hi = bound;
    }
    if (hi < 0) hi = 0;  // an all-zero period cannot exist (validated), defensive only
    Nat lo = 0;
    for (std::size_t q = 0; q < period.size(); ++q) {
        bool later_covers = false;
        for (std::size_t jj = j + 1; jj < ls.periods.size() && !later_covers; ++jj)
            later_covers = ls.periods[jj][q] != 0;
        if (later_covers) continue;
        if (period[q] == 0) {
            if (remaining[q] != 0) return false;
            continue;
        }
        // This period is the last contributor to q: coefficient is forced.
        if (remaining[q] % period[q] != 0) return false;
        Nat forced = remaining[q] / period[q];
        if (forced < lo) return false;
        lo = forced;
        hi = std::min(hi, forced);
    }
    for (Nat a = lo; a <= hi; ++a) {
        bool feasible = true;
        for (std::size_t q = 0; q < period.size(); ++q) {
            remaining[q] -= a * period[q];
            if (remaining[q] < 0) feasible = false;
        }
        if (feasible) {
            coeffs.push_back(a);
            if (coefficient_search(ls, j + 1, remaining, coeffs)) return true;
            coeffs.pop_back();
        }
        for (std::size_t q = 0; q < period.size(); ++q) remaining[q] += a * period[q];
        if (!feasible) break;  // larger a only drives coordinates further negative
    }
    return false;
}

}  // namespace

std::optional<ContainsWitness> contains(const SemilinearSet& set, const std::vector<Nat>& h) {
    if (h.size() != set.dim())
        throw DimensionError("membership query vector has dimension " + std::to_string(h.size()) +
                             ", set has " + std::to_string(set.dim()));
    for (const Nat& x : h)
        if (x < 0) throw Error("membership query vectors live in N^c");
    for (std::size_t ci = 0; ci < set.components().size(); ++ci) {
        const LinearSet& ls = set.components()[ci];
        std::vector<Nat> remaining(set.dim());
        bool ok = true;
        for (std::size_t q = 0; q < set.dim(); ++q) {
            remaining[q] = h[q] - ls.base[q];
            if (remaining[q] < 0) ok = false;
        }
        if (!ok) continue;
        std::vector<Nat> coeffs;
        if (coefficient_search(ls, 0, remaining, coeffs)) return ContainsWitness{ci, coeffs};
    }
    return std::nullopt;
}

namespace {

void enumerate_component(const LinearSet& ls, std::size_t j, std::vector<Nat>& current,
                         const Nat& norm, const Nat& n_lo, const Nat& n_hi,
                         std::set<std::vector<Nat>>& seen, std::vector<std::vector<Nat>>& out) {
    if (j == ls.periods.size()) {
        if (norm >= n_lo && norm <= n_hi && seen.insert(current).second) out.push_back(current);
        return;
    }
    const auto& period = ls.periods[j];
    Nat period_norm = l1_norm(period);  // >= 1
    for (Nat a = 0;; ++a) {
        Nat new_norm = norm + a * period_norm;
        if (new_norm > n_hi) break;
        std::vector<Nat> next = current;
        for (std::size_t q = 0; q < next.size(); ++q) next[q] += a * period[q];
        enumerate_component(ls, j + 1, next, new_norm, n_lo, n_hi, seen, out);
    }
}

}  // namespace

std::vector<std::vector<Nat>> enumerate_norm_range(const SemilinearSet& set, const Nat& n_lo,
                                                   const Nat& n_hi) {
    std::vector<std::vector<Nat>> out;
    if (n_lo > n_hi) return out;
    std::set<std::vector<Nat>> seen;
    for (const LinearSet& ls : set.components()) {
        std::vector<Nat> current = ls.base;
        Nat norm = l1_norm(current);
        if (norm > n_hi) continue;
        enumerate_component(ls, 0, current, norm, std::max(Nat(0), n_lo), n_hi, seen, out);
    }
    return out;
}

MinDistributionDistance min_distribution_distance(const SemilinearSet& set,
                                                  const std::vector<Rational>& dv,
                                                  const Rational& n_lo, const Rational& n_hi) {
    if (dv.size() != set.dim())
        throw DimensionError("distribution vector dimension does not match the set");
    Nat lo = rational_ceil(n_lo);
    if (lo < 1) lo = 1;  // the zero vector has no distribution
    Nat hi = rational_floor(n_hi);
    MinDistributionDistance result;
    for (const auto& h : enumerate_norm_range(set, lo, hi)) {
        Nat norm = l1_norm(h);
        Rational dist(0);
        for (std::size_t q = 0; q < dv.size(); ++q)
            dist += boost::multiprecision::abs(dv[q] - Rational(h[q], norm));
        if (!result.found || dist < result.distance) {
            result.found = true;
            result.distance = dist;
            result.argmin = h;
        }
    }
    return result;
}

std::vector<Nat> round_to_target_size(const SemilinearSet& set, std::size_t component,
                                      const std::vector<Nat>& coefficients, const Rational& n0) {
    if (component >= set.components().size()) throw Error("component index out of range");
    const LinearSet& ls = set.components()[component];
    if (coefficients.size() != ls.periods.size())
        throw Error("expected " + std::to_string(ls.periods.size()) + " coefficients, got " +
                    std::to_string(coefficients.size()));
    for (const Nat& a : coefficients)
        if (a < 0) throw Error("coefficients live in N");

    std::vector<Nat> h = ls.base;
    for (std::size_t j = 0; j < coefficients.size(); ++j)
        for (std::size_t q = 0; q < h.size(); ++q) h[q] += coefficients[j] * ls.periods[j][q];
    Nat n = l1_norm(h);
    Rational n_max = n0 + set.k() * set.v();
    if (Rational(n) <= n_max)
        throw Error("round_to_target_size requires |h|_1 > n0 + k*v (" +
                    rational_to_string(Rational(n)) + " <= " + rational_to_string(n_max) + ")");

    std::vector<Nat> out = ls.base;
    for (std::size_t j = 0; j < coefficients.size(); ++j) {
        Nat scaled = round_half_up(Rational(coefficients[j]) * n0 / Rational(n));
        for (std::size_t q = 0; q < out.size(); ++q) out[q] += scaled * ls.periods[j][q];
    }
    return out;
}

std::vector<Nat> small_representative(const SemilinearSet& set, const std::vector<Nat>& h,
                                      const Rational& epsilon) {
    if (epsilon <= 0) throw Error("epsilon must be positive");
    auto witness = contains(set, h);
    if (!witness) throw Error("small_representative: vector is not a member of the set");
    Nat kv = set.k() * set.v();
    Rational c(static_cast<std::uint64_t>(set.dim()));
    Rational bound = Rational(kv) * (3 * c * Rational(kv) / epsilon + 2);
    Nat n = l1_norm(h);
    if (Rational(n) <= bound) return h;
    Rational n0 = Rational(kv) * (3 * c * Rational(kv) / epsilon + 1);
    return round_to_target_size(set, witness->component, witness->coefficients, n0);
}

namespace {

std::vector<Nat> parse_vector(const std::vector<std::string>& tokens, std::size_t from,
                              std::size_t dim, std::uint64_t line_no) {
    if (tokens.size() - from != dim)
        throw ParseError("expected " + std::to_string(dim) + " coordinates, got " +
                             std::to_string(tokens.size() - from),
                         line_no);
    std::vector<Nat> v;
    v.reserve(dim);
    for (std::size_t i = from; i < tokens.size(); ++i) {
        for (char ch : tokens[i])
            if (ch < '0' || ch > '9')
                throw ParseError("coordinate '" + tokens[i] + "' is not a natural number", line_no);
        v.emplace_back(Nat(tokens[i]));
    }
    return v;
}

}  // namespace

SemilinearFile parse_semilinear(const std::string& text) {
    std::istringstream in(text);
    std::string raw;
    std::uint64_t line_no = 0;
    std::optional<std::size_t> dim;
    std::optional<std::string> registry_path;
    std::vector<LinearSet> components;
    bool in_component = false;

    while (std::getline(in, raw)) {
        ++line_no;
        std::istringstream ls(raw);
        std::vector<std::string> tokens;
        std::string tok;
        while (ls >> tok) {
            if (tok[0] == '#') break;
            tokens.push_back(tok);
        }
        if (tokens.empty()) continue;
        const std::string& head = tokens[0];
        if (head == "dim") {
            if (dim) throw ParseError("duplicate 'dim' line", line_no);
            if (tokens.size() != 2) throw ParseError("expected 'dim <c>'", line_no);
            dim = static_cast<std::size_t>(std::stoull(tokens[1]));
            if (*dim < 1) throw ParseError("dimension must be >= 1", line_no);
        } else if (head == "registry") {
            if (tokens.size() != 2) throw ParseError("expected 'registry <file>'", line_no);
            registry_path = tokens[1];
        } else if (head == "base") {
            if (!dim) throw ParseError("'base' before 'dim'", line_no);
            components.push_back(LinearSet{parse_vector(tokens, 1, *dim, line_no), {}});
            in_component = true;
        } else if (head == "period") {
            if (!in_component) throw ParseError("'period' before any 'base'", line_no);
            components.back().periods.push_back(parse_vector(tokens, 1, *dim, line_no));
        } else {
            throw ParseError("unknown directive '" + head + "'", line_no);
        }
    }
    if (!dim) throw ParseError("missing 'dim' line", line_no == 0 ? 1 : line_no);
    try {
        return SemilinearFile{SemilinearSet(*dim, std::move(components)), registry_path};
    } catch (const Error& e) {
        throw ParseError(e.what(), line_no);
    }
}

SemilinearFile load_semilinear_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open semilinear file '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_semilinear(buf.str());
}

std::string serialize_semilinear(const SemilinearSet& set,
                                 const std::optional<std::string>& registry_path) {
    std::ostringstream out;
    out << "dim " << set.dim() << '\n';
    if (registry_path) out << "registry " << *registry_path << '\n';
    for (const LinearSet& ls : set.components()) {
        out << "base";
        for (const Nat& x : ls.base) out << ' ' << x;
        out << '\n';
        for (const auto& p : ls.periods) {
            out << "period";
            for (const Nat& x : p) out << ' ' << x;
            out << '\n';
        }
    }
    return out.str();
}

}  // namespace bdrd
