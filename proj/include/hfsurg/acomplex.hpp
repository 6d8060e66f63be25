/**
 * Concrete truncated realizations of C{region}, the complexes A+_s and B+,
 * the maps v_s and h_s between them, and knot-level invariants read off
 * from them (HFK-hat, genus, Alexander polynomial).
 */
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "hfsurg/cfk.hpp"
#include "hfsurg/homology.hpp"

namespace hfsurg {

/// Basis element of a realization: generator index and U-translate k.
struct Cell
{
    std::size_t generator;
    std::int64_t k;
};

struct RealizedRegion
{
    Region region;
    std::int64_t depth = 0;
    GradedComplex complex;
    std::vector<Cell> cells;

    // Per generator: first translate present and the basis id it maps to.
    std::vector<std::int64_t> k_lo;
    std::vector<std::int64_t> k_hi;
    std::vector<std::size_t> first_id;

    std::optional<std::size_t> find(std::size_t generator, std::int64_t k) const
    {
        if (k < k_lo[generator] || k > k_hi[generator])
            return std::nullopt;
        return first_id[generator] + static_cast<std::size_t>(k - k_lo[generator]);
    }

    std::size_t size() const { return cells.size(); }
};

/// Default truncation depth for acomplex-level computations at Alexander level s.
inline std::int64_t default_region_depth(const KnotComplex& k, std::int64_t s = 0)
{
    return 4 * (k.grading_spread() + (s < 0 ? -s : s) + 4);
}

/**
 * Realizes C{region} for a graded complex.  Upward-closed regions keep the
 * translates whose level lies in [0, depth]; the homology is exact up to
 * complex.exact_top.  Finite regions keep every translate inside.
 */
inline RealizedRegion realize(const IndexedComplex& k, const Region& region, std::int64_t depth)
{
    if (depth < 0)
        throw std::invalid_argument("realize: negative truncation depth");
    const std::size_t n = k.generators.size();
    RealizedRegion out;
    out.region = region;
    out.depth = depth;
    out.k_lo.resize(n);
    out.k_hi.resize(n);
    out.first_id.resize(n);

    std::optional<Rational> floor;
    std::size_t next = 0;
    for (std::size_t x = 0; x < n; ++x) {
        const Generator& g = k.generators[x];
        if (!g.m)
            throw KnotError("realize needs gradings (generator " + g.name + " has none)");
        std::int64_t lo = 0, hi = -1;
        if (region.upward_closed()) {
            const std::int64_t base = region.level(g.i, g.j);
            lo = -base;
            hi = depth - base;
            Rational excluded = Rational(*g.m + 2 * (depth + 1 - base));
            if (!floor || excluded < *floor)
                floor = excluded;
        } else {
            std::int64_t i_lo = region.a, i_hi = region.a, j_lo = region.b, j_hi = region.b;
            if (region.kind == Region::Kind::box) {
                i_hi = region.b;
                j_lo = region.c;
                j_hi = region.d;
            }
            lo = std::max(i_lo - g.i, j_lo - g.j);
            hi = std::min(i_hi - g.i, j_hi - g.j);
        }
        out.k_lo[x] = lo;
        out.k_hi[x] = std::max(hi, lo - 1);
        out.first_id[x] = next;
        for (std::int64_t t = lo; t <= hi; ++t) {
            out.cells.push_back({x, t});
            out.complex.degrees.push_back(Rational(*g.m + 2 * t));
            ++next;
        }
    }

    const std::size_t size = out.cells.size();
    out.complex.boundary = SparseMatrix(size, size);
    out.complex.u_action = SparseMatrix(size, size);
    for (std::size_t id = 0; id < size; ++id) {
        const Cell& cell = out.cells[id];
        for (const auto& arrow : k.outgoing[cell.generator]) {
            auto target = out.find(arrow.target, cell.k - arrow.u_exponent);
            if (target)
                out.complex.boundary.add(*target, id, arrow.coefficient);
        }
        if (region.upward_closed()) {
            auto lower = out.find(cell.generator, cell.k - 1);
            if (lower)
                out.complex.u_action.add(*lower, id, Integer(1));
        }
    }
    if (region.upward_closed() && floor)
        out.complex.exact_top = *floor - 2;
    return out;
}

inline RealizedRegion realize(const KnotComplex& k, const Region& region, std::int64_t depth)
{
    return realize(IndexedComplex(k), region, depth);
}

/// A chain map between two realizations, of the stated degree shift.
struct ChainMap
{
    SparseMatrix matrix;
    Rational shift;
};

/// Projection A+_s -> B+ : (x, k) -> (x, k) when i_x + k >= 0.
inline ChainMap map_v(const IndexedComplex& k, const RealizedRegion& a, const RealizedRegion& b)
{
    ChainMap f{SparseMatrix(b.size(), a.size()), Rational(0)};
    for (std::size_t id = 0; id < a.size(); ++id) {
        const Cell& cell = a.cells[id];
        if (k.generators[cell.generator].i + cell.k < 0)
            continue;
        auto target = b.find(cell.generator, cell.k);
        if (!target)
            throw HomologyError("map_v: image leaves the truncated B+");
        f.matrix.add(*target, id, Integer(1));
    }
    return f;
}

/**
 * A+_s -> B+ : project to C{j >= s}, translate by U^s, then flip.  When the
 * flip anticommutes with the differential it is corrected by (-1)^m so the
 * result is an honest chain map.
 */
inline ChainMap map_h(const IndexedComplex& k, std::int64_t s, const RealizedRegion& a, const RealizedRegion& b)
{
    if (!k.flip)
        throw KnotError("map_h needs flip data");
    const int commutation = flip_commutation_sign(k);
    ChainMap f{SparseMatrix(b.size(), a.size()), Rational(-2 * s)};
    for (std::size_t id = 0; id < a.size(); ++id) {
        const Cell& cell = a.cells[id];
        const Generator& g = k.generators[cell.generator];
        if (g.j + cell.k - s < 0)
            continue;
        const auto& image = (*k.flip)[cell.generator];
        auto target = b.find(image.target, cell.k - s);
        if (!target)
            throw HomologyError("map_h: image leaves the truncated B+");
        int sign = image.sign;
        if (commutation < 0 && (*g.m % 2 != 0))
            sign = -sign;
        f.matrix.add(*target, id, Integer(sign));
    }
    return f;
}

/// A+_s and B+ realized together with their homologies.
struct APair
{
    RealizedRegion a;
    RealizedRegion b;
    Homology ha;
    Homology hb;
};

inline APair realize_pair(const IndexedComplex& k, std::int64_t s, std::int64_t depth)
{
    RealizedRegion a = realize(k, Region::max_ij(s), depth);
    RealizedRegion b = realize(k, Region::min_i(), depth);
    Homology ha(a.complex);
    Homology hb(b.complex);
    return APair{std::move(a), std::move(b), std::move(ha), std::move(hb)};
}

inline InducedMap induced_v(const IndexedComplex& k, const APair& pair)
{
    ChainMap f = map_v(k, pair.a, pair.b);
    return induced_map(pair.a.complex, pair.ha, pair.b.complex, pair.hb, f.matrix, f.shift);
}

inline InducedMap induced_h(const IndexedComplex& k, std::int64_t s, const APair& pair)
{
    ChainMap f = map_h(k, s, pair.a, pair.b);
    return induced_map(pair.a.complex, pair.ha, pair.b.complex, pair.hb, f.matrix, f.shift);
}

/// H_*(C{(0, s)}).
inline GradedGroup hfk_hat(const KnotComplex& k, std::int64_t s)
{
    RealizedRegion r = realize(k, Region::single(0, s), 0);
    return graded_homology(r.complex).group();
}

/// max { s : HFK-hat(K, s) != 0 }, searched over the Alexander levels j - i that occur.
inline std::int64_t genus(const KnotComplex& k)
{
    std::set<std::int64_t> levels;
    for (const auto& g : k.generators)
        if (g.j - g.i >= 0)
            levels.insert(g.j - g.i);
    for (auto it = levels.rbegin(); it != levels.rend(); ++it)
        if (!hfk_hat(k, *it).is_zero())
            return *it;
    return 0;
}

struct LaurentPolynomial
{
    std::map<std::int64_t, Integer> coefficients;   // exponent -> nonzero coefficient

    bool operator==(const LaurentPolynomial&) const = default;

    Integer at_one() const
    {
        Integer total = 0;
        for (const auto& [e, c] : coefficients)
            total += c;
        return total;
    }

    /// Second derivative evaluated at t = 1.
    Integer second_derivative_at_one() const
    {
        Integer total = 0;
        for (const auto& [e, c] : coefficients)
            total += c * e * (e - 1);
        return total;
    }

    bool symmetric() const
    {
        for (const auto& [e, c] : coefficients) {
            auto it = coefficients.find(-e);
            if (it == coefficients.end() || it->second != c)
                return false;
        }
        return true;
    }

    std::string str() const
    {
        if (coefficients.empty())
            return "0";
        std::ostringstream out;
        bool first = true;
        for (auto it = coefficients.rbegin(); it != coefficients.rend(); ++it) {
            const auto& [e, c] = *it;
            Integer mag = abs(c);
            if (first)
                out << (c < 0 ? "-" : "");
            else
                out << (c < 0 ? " - " : " + ");
            first = false;
            if (e == 0 || mag != 1)
                out << mag;
            if (e != 0)
                out << "t" << (e == 1 ? "" : "^" + std::to_string(e));
        }
        return out.str();
    }
};

/// Sum over s of the Euler characteristic of HFK-hat(K, s) times t^s.
inline LaurentPolynomial alexander_polynomial(const KnotComplex& k)
{
    std::set<std::int64_t> levels;
    for (const auto& g : k.generators)
        levels.insert(g.j - g.i);
    LaurentPolynomial poly;
    for (auto s : levels) {
        GradedGroup h = hfk_hat(k, s);
        Integer chi = 0;
        for (const auto& [d, g] : h.groups) {
            if (!is_integer(d))
                throw KnotError("HFK-hat has a non-integral grading");
            const bool even = boost::multiprecision::numerator(d) % 2 == 0;
            chi += even ? Integer(g.free_rank) : -Integer(g.free_rank);
        }
        if (chi != 0)
            poly.coefficients[s] = chi;
    }
    if (!poly.symmetric())
        throw KnotError("Alexander polynomial is not symmetric: " + poly.str());
    return poly;
}

/// Free rank of the kernel of v_s on homology, in the exactness window.
inline std::size_t kernel_rank_v(const KnotComplex& k, std::int64_t s, std::optional<std::int64_t> depth = std::nullopt)
{
    IndexedComplex ik(k);
    APair pair = realize_pair(ik, s, depth.value_or(default_region_depth(k, s)));
    auto ta = tower_decompose(pair.ha.group());
    auto tb = tower_decompose(pair.hb.group());
    if (!ta.stabilized || !tb.stabilized)
        throw HomologyError("kernel_rank_v: homology not stabilized at this depth");
    return induced_v(ik, pair).kernel_rank();
}

}   // namespace hfsurg
