/**
 * Finite models of the bifiltered complex CFK-infinity of a knot in S^3.
 *
 * A KnotComplex lists generators x with filtration levels (i, j) and a
 * Maslov grading m, and a differential whose entries x -> c U^n y
 * (n >= 0) are read over Z[U, U^{-1}].  The U-translate k of x sits at
 * (i + k, j + k) in grading m + 2k.
 */
#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "hfsurg/numeric.hpp"

namespace hfsurg {

struct Generator
{
    std::string name;
    std::int64_t i = 0;
    std::int64_t j = 0;
    std::optional<std::int64_t> m;

    bool operator==(const Generator&) const = default;
};

struct UTerm
{
    Integer coefficient;
    std::int64_t u_exponent = 0;
    std::string target;

    bool operator==(const UTerm&) const = default;
};

struct SignedName
{
    int sign = 1;
    std::string name;

    bool operator==(const SignedName&) const = default;
};

class KnotError : public std::runtime_error
{
    public:
        using std::runtime_error::runtime_error;
};

struct KnotComplex
{
    std::vector<Generator> generators;
    std::map<std::string, std::vector<UTerm>> differential;
    std::optional<std::map<std::string, SignedName>> flip;

    bool operator==(const KnotComplex&) const = default;

    std::optional<std::size_t> find(const std::string& name) const
    {
        for (std::size_t k = 0; k < generators.size(); ++k)
            if (generators[k].name == name)
                return k;
        return std::nullopt;
    }

    const Generator& generator(const std::string& name) const
    {
        auto k = find(name);
        if (!k)
            throw KnotError("unknown generator '" + name + "'");
        return generators[*k];
    }

    bool graded() const
    {
        return std::all_of(generators.begin(), generators.end(), [](const Generator& g) { return g.m.has_value(); });
    }

    const std::vector<UTerm>& boundary_of(const std::string& name) const
    {
        static const std::vector<UTerm> none;
        auto it = differential.find(name);
        return it == differential.end() ? none : it->second;
    }

    /// Adds c U^n target to the boundary of source, merging like terms.
    void add_term(const std::string& source, const Integer& coefficient, std::int64_t u_exponent,
                  const std::string& target)
    {
        if (coefficient == 0)
            return;
        auto& terms = differential[source];
        for (auto it = terms.begin(); it != terms.end(); ++it) {
            if (it->target == target && it->u_exponent == u_exponent) {
                it->coefficient += coefficient;
                if (it->coefficient == 0)
                    terms.erase(it);
                if (terms.empty())
                    differential.erase(source);
                return;
            }
        }
        terms.push_back({coefficient, u_exponent, target});
        std::sort(terms.begin(), terms.end(), [](const UTerm& a, const UTerm& b) {
            return std::tie(a.target, a.u_exponent) < std::tie(b.target, b.u_exponent);
        });
    }

    std::int64_t grading_spread() const
    {
        std::int64_t lo = 0, hi = 0;
        bool first = true;
        for (const auto& g : generators) {
            if (!g.m)
                continue;
            lo = first ? *g.m : std::min(lo, *g.m);
            hi = first ? *g.m : std::max(hi, *g.m);
            first = false;
        }
        return hi - lo;
    }
};

/// Differential and flip with generator names resolved to indices.
struct IndexedComplex
{
    struct Arrow
    {
        std::size_t source;
        std::size_t target;
        Integer coefficient;
        std::int64_t u_exponent;
    };
    struct FlipEntry
    {
        int sign;
        std::size_t target;
    };

    std::vector<Generator> generators;
    std::vector<std::vector<Arrow>> outgoing;
    std::optional<std::vector<FlipEntry>> flip;
    int flip_sign = 1;   // flip o d == flip_sign * d o flip

    explicit IndexedComplex(const KnotComplex& k)
        : generators(k.generators), outgoing(k.generators.size())
    {
        for (std::size_t x = 0; x < generators.size(); ++x) {
            for (const auto& t : k.boundary_of(generators[x].name)) {
                auto y = k.find(t.target);
                if (!y)
                    throw KnotError("boundary of '" + generators[x].name + "' names unknown generator '" + t.target + "'");
                outgoing[x].push_back({x, *y, t.coefficient, t.u_exponent});
            }
        }
        if (k.flip) {
            std::vector<FlipEntry> entries(generators.size(), FlipEntry{0, 0});
            for (std::size_t x = 0; x < generators.size(); ++x) {
                auto it = k.flip->find(generators[x].name);
                if (it == k.flip->end())
                    throw KnotError("flip is missing an image for '" + generators[x].name + "'");
                auto y = k.find(it->second.name);
                if (!y)
                    throw KnotError("flip names unknown generator '" + it->second.name + "'");
                entries[x] = {it->second.sign, *y};
            }
            flip = std::move(entries);
        }
    }
};

// ---------------------------------------------------------------------------
// Regions

/**
 * A region of the (i, j) plane.  min_i and max_ij are upward closed and are
 * realized as quotient complexes truncated at depth N; box and single are
 * finite and carry the induced subquotient differential.
 */
struct Region
{
    enum class Kind { min_i, max_ij, box, single };

    Kind kind = Kind::min_i;
    std::int64_t a = 0;   // min_i: bound; max_ij: s; box: i_lo; single: i
    std::int64_t b = 0;   // max_ij: bound; box: i_hi; single: j
    std::int64_t c = 0;   // box: j_lo
    std::int64_t d = 0;   // box: j_hi

    /// { i >= bound }
    static Region min_i(std::int64_t bound = 0) { return {Kind::min_i, bound, 0, 0, 0}; }
    /// { max(i, j - s) >= bound }
    static Region max_ij(std::int64_t s, std::int64_t bound = 0) { return {Kind::max_ij, s, bound, 0, 0}; }
    static Region box(std::int64_t i_lo, std::int64_t i_hi, std::int64_t j_lo, std::int64_t j_hi)
    {
        if (i_lo > i_hi || j_lo > j_hi)
            throw std::invalid_argument("empty box region");
        return {Kind::box, i_lo, i_hi, j_lo, j_hi};
    }
    static Region single(std::int64_t i, std::int64_t j) { return {Kind::single, i, j, 0, 0}; }

    bool upward_closed() const { return kind == Kind::min_i || kind == Kind::max_ij; }

    /// For upward-closed regions: how far (i, j) lies inside (>= 0 means inside).
    std::int64_t level(std::int64_t i, std::int64_t j) const
    {
        switch (kind) {
            case Kind::min_i:
                return i - a;
            case Kind::max_ij:
                return std::max(i, j - a) - b;
            default:
                throw std::logic_error("level() is only defined for upward-closed regions");
        }
    }

    bool contains(std::int64_t i, std::int64_t j) const
    {
        switch (kind) {
            case Kind::min_i:
            case Kind::max_ij:
                return level(i, j) >= 0;
            case Kind::box:
                return a <= i && i <= b && c <= j && j <= d;
            case Kind::single:
                return i == a && j == b;
        }
        return false;
    }

    std::string describe() const
    {
        switch (kind) {
            case Kind::min_i:
                return "{i >= " + std::to_string(a) + "}";
            case Kind::max_ij:
                return "{max(i, j - " + std::to_string(a) + ") >= " + std::to_string(b) + "}";
            case Kind::box:
                return "{" + std::to_string(a) + " <= i <= " + std::to_string(b) + ", " + std::to_string(c) +
                       " <= j <= " + std::to_string(d) + "}";
            case Kind::single:
                return "{(" + std::to_string(a) + ", " + std::to_string(b) + ")}";
        }
        return "";
    }
};

// ---------------------------------------------------------------------------
// Validation

struct ValidationReport
{
    std::vector<std::string> violations;

    bool ok() const { return violations.empty(); }
};

namespace detail {

using UPolyVector = std::map<std::pair<std::size_t, std::int64_t>, Integer>;   // (generator, U power) -> coef

inline void accumulate(UPolyVector& v, std::size_t g, std::int64_t n, const Integer& c)
{
    Integer& slot = v[{g, n}];
    slot += c;
    if (slot == 0)
        v.erase({g, n});
}

// Signed flip image of a U-polynomial vector.
inline UPolyVector apply_flip(const UPolyVector& v, const std::vector<IndexedComplex::FlipEntry>& flip)
{
    UPolyVector out;
    for (const auto& [key, c] : v)
        accumulate(out, flip[key.first].target, key.second, c * flip[key.first].sign);
    return out;
}

inline UPolyVector boundary_vector(const IndexedComplex& k, std::size_t x)
{
    UPolyVector out;
    for (const auto& a : k.outgoing[x])
        accumulate(out, a.target, a.u_exponent, a.coefficient);
    return out;
}

}   // namespace detail

/**
 * Checks every KnotComplex axiom; never throws.  Grading conditions are
 * checked only between generators whose gradings are assigned.
 */
inline ValidationReport validate(const KnotComplex& k)
{
    ValidationReport report;
    auto& out = report.violations;

    std::set<std::string> names;
    for (const auto& g : k.generators)
        if (!names.insert(g.name).second)
            out.push_back("duplicate generator name '" + g.name + "'");

    for (const auto& [source, terms] : k.differential) {
        if (!names.count(source))
            out.push_back("boundary given for unknown generator '" + source + "'");
        for (const auto& t : terms) {
            if (!names.count(t.target))
                out.push_back("boundary of " + source + " names unknown generator '" + t.target + "'");
            if (t.coefficient == 0)
                out.push_back("zero coefficient in boundary of " + source);
            if (t.u_exponent < 0)
                out.push_back("negative U exponent in boundary of " + source);
        }
    }
    if (k.flip) {
        for (const auto& [source, image] : *k.flip) {
            if (!names.count(source))
                out.push_back("flip given for unknown generator '" + source + "'");
            if (!names.count(image.name))
                out.push_back("flip of " + source + " names unknown generator '" + image.name + "'");
            if (image.sign != 1 && image.sign != -1)
                out.push_back("flip of " + source + " has a sign other than +1 or -1");
        }
        for (const auto& g : k.generators)
            if (!k.flip->count(g.name))
                out.push_back("flip has no image for generator " + g.name);
    }
    if (!out.empty())
        return report;

    for (const auto& [source, terms] : k.differential) {
        const Generator& x = k.generator(source);
        for (const auto& t : terms) {
            const Generator& y = k.generator(t.target);
            if (y.i - t.u_exponent > x.i || y.j - t.u_exponent > x.j)
                out.push_back("filtration violated by entry " + source + " -> " + t.coefficient.str() + "*U^" +
                              std::to_string(t.u_exponent) + "*" + t.target);
            if (x.m && y.m && *y.m - 2 * t.u_exponent != *x.m - 1)
                out.push_back("grading violated by entry " + source + " -> " + t.target);
        }
    }

    IndexedComplex ik(k);
    const std::size_t n = ik.generators.size();
    std::vector<detail::UPolyVector> boundaries(n);
    for (std::size_t x = 0; x < n; ++x)
        boundaries[x] = detail::boundary_vector(ik, x);
    auto apply_boundary = [&](const detail::UPolyVector& v) {
        detail::UPolyVector out_v;
        for (const auto& [key, c] : v)
            for (const auto& [key2, c2] : boundaries[key.first])
                detail::accumulate(out_v, key2.first, key.second + key2.second, c * c2);
        return out_v;
    };
    for (std::size_t x = 0; x < n; ++x)
        if (!apply_boundary(boundaries[x]).empty())
            out.push_back("d-squared nonzero at " + ik.generators[x].name);

    if (ik.flip) {
        const auto& f = *ik.flip;
        for (std::size_t x = 0; x < n; ++x) {
            const auto& gx = ik.generators[x];
            const auto& gy = ik.generators[f[x].target];
            if (f[f[x].target].target != x || f[f[x].target].sign * f[x].sign != 1)
                out.push_back("flip is not an involution at " + gx.name);
            if (gy.i != gx.j || gy.j != gx.i)
                out.push_back("flip does not exchange filtrations at " + gx.name);
            if (gx.m && gy.m && *gx.m != *gy.m)
                out.push_back("flip does not preserve grading at " + gx.name);
        }
        std::optional<int> global_sign;
        bool chain_map = true;
        for (std::size_t x = 0; x < n && chain_map; ++x) {
            auto lhs = detail::apply_flip(boundaries[x], f);   // flip(d x)
            detail::UPolyVector rhs;                           // d(flip x)
            for (const auto& [key, c] : boundaries[f[x].target])
                detail::accumulate(rhs, key.first, key.second, c * f[x].sign);
            if (lhs == rhs && lhs.empty())
                continue;
            detail::UPolyVector neg;
            for (const auto& [key, c] : rhs)
                neg[key] = -c;
            int sign = lhs == rhs ? 1 : (lhs == neg ? -1 : 0);
            if (sign == 0 || (global_sign && *global_sign != sign)) {
                out.push_back("flip is not a chain map up to sign at " + ik.generators[x].name);
                chain_map = false;
            }
            global_sign = sign;
        }
    }
    return report;
}

/// Throws KnotError listing the violations unless the complex is valid.
inline void require_valid(const KnotComplex& k)
{
    auto report = validate(k);
    if (report.ok())
        return;
    std::string message = "invalid knot complex:";
    for (const auto& v : report.violations)
        message += "\n  " + v;
    throw KnotError(message);
}

/// Sign s with flip o d == s * d o flip (1 when the differential is zero).
inline int flip_commutation_sign(const IndexedComplex& ik)
{
    if (!ik.flip)
        throw KnotError("complex has no flip");
    const auto& f = *ik.flip;
    for (std::size_t x = 0; x < ik.generators.size(); ++x) {
        auto lhs = detail::apply_flip(detail::boundary_vector(ik, x), f);
        if (lhs.empty())
            continue;
        detail::UPolyVector rhs;
        for (const auto& [key, c] : detail::boundary_vector(ik, f[x].target))
            detail::accumulate(rhs, key.first, key.second, c * f[x].sign);
        return lhs == rhs ? 1 : -1;
    }
    return 1;
}

// ---------------------------------------------------------------------------
// Transformations

/// Dual complex: x@(i,j,m) becomes x@(-i,-j,-m) and every arrow is reversed.
inline KnotComplex mirror(const KnotComplex& k)
{
    if (!k.graded())
        throw KnotError("mirror needs a graded complex");
    KnotComplex out;
    for (const auto& g : k.generators)
        out.generators.push_back({g.name, -g.i, -g.j, -*g.m});
    for (const auto& [source, terms] : k.differential)
        for (const auto& t : terms)
            out.add_term(t.target, t.coefficient, t.u_exponent, source);
    out.flip = k.flip;
    return out;
}

/// Gradings shifted by a constant on every generator.
inline KnotComplex shift_gradings(const KnotComplex& k, std::int64_t by)
{
    KnotComplex out = k;
    for (auto& g : out.generators)
        if (g.m)
            *g.m += by;
    return out;
}

/**
 * True iff a bijection of generators, allowed to change the sign of each
 * basis element, carries a onto b preserving filtrations, gradings,
 * differential and flip.
 */
inline bool equivalent_up_to_renaming(const KnotComplex& a, const KnotComplex& b)
{
    if (a.generators.size() != b.generators.size() || a.flip.has_value() != b.flip.has_value())
        return false;
    IndexedComplex ia(a), ib(b);
    const std::size_t n = ia.generators.size();

    // Dense arrow tables keyed by (source, target, power).
    auto table = [](const IndexedComplex& c) {
        std::map<std::tuple<std::size_t, std::size_t, std::int64_t>, Integer> t;
        for (const auto& arrows : c.outgoing)
            for (const auto& ar : arrows)
                t[{ar.source, ar.target, ar.u_exponent}] += ar.coefficient;
        return t;
    };
    const auto ta = table(ia);
    const auto tb = table(ib);
    if (ta.size() != tb.size())
        return false;

    std::vector<std::size_t> image(n, n);
    std::vector<int> sign(n, 1);
    std::vector<char> used(n, 0);

    auto consistent = [&](std::size_t x) {
        // Every a-arrow between assigned generators must appear in b.
        for (const auto& [key, c] : ta) {
            auto [s, t, p] = key;
            if (s != x && t != x)
                continue;
            if (image[s] == n || image[t] == n)
                continue;
            auto it = tb.find({image[s], image[t], p});
            if (it == tb.end() || it->second != c * sign[s] * sign[t])
                return false;
        }
        if (ia.flip) {
            for (std::size_t y = 0; y < n; ++y) {
                if (image[y] == n)
                    continue;
                const auto& fa = (*ia.flip)[y];
                if (image[fa.target] == n)
                    continue;
                const auto& fb = (*ib.flip)[image[y]];
                if (fb.target != image[fa.target] || fb.sign != fa.sign * sign[y] * sign[fa.target])
                    return false;
            }
        }
        return true;
    };

    auto search = [&](auto&& self, std::size_t x) -> bool {
        if (x == n)
            return true;
        const Generator& gx = ia.generators[x];
        for (std::size_t y = 0; y < n; ++y) {
            const Generator& gy = ib.generators[y];
            if (used[y] || gy.i != gx.i || gy.j != gx.j || gy.m != gx.m)
                continue;
            used[y] = 1;
            image[x] = y;
            for (int s : {1, -1}) {
                sign[x] = s;
                if (consistent(x) && self(self, x + 1))
                    return true;
            }
            image[x] = n;
            sign[x] = 1;
            used[y] = 0;
        }
        return false;
    };
    return search(search, 0);
}

}   // namespace hfsurg
