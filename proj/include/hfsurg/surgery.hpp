/**
 * HF+ of rational surgeries on knots in S^3 from the truncated mapping cone.
 *
 * For slope p/q > 0 and index i in Z/p the cone has A-summands A+_{t_s},
 * t_s = floor((i + p s) / q), for s in [-sigma, sigma] and copies B^s of B+
 * for s in (-sigma, sigma]; v maps A^s to B^s and h maps A^s to B^{s+1}.
 * Absolute gradings are pinned by running the same cone on the unknot and
 * matching its tower bottom to the lens space correction term.
 */
#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <map>
#include <mutex>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

#include "hfsurg/acomplex.hpp"
#include "hfsurg/builtin.hpp"
#include "hfsurg/cfk.hpp"
#include "hfsurg/homology.hpp"

namespace hfsurg {

class SurgeryError : public std::runtime_error
{
    public:
        using std::runtime_error::runtime_error;
};

class StabilizationError : public SurgeryError
{
    public:
        using SurgeryError::SurgeryError;
};

struct SurgeryDescriptor
{
    std::int64_t p = 1;
    std::int64_t q = 1;
    std::int64_t spin_c = 0;
    std::int64_t sigma = 1;
    std::int64_t depth = 0;
};

/// Throws SurgeryError unless p/q is a usable nonzero slope in lowest terms.
inline void check_slope(std::int64_t p, std::int64_t q)
{
    if (q <= 0)
        throw SurgeryError("slope denominator must be positive");
    if (p == 0)
        throw SurgeryError("slope must be nonzero");
    if (std::gcd(p, q) != 1)
        throw SurgeryError("slope " + std::to_string(p) + "/" + std::to_string(q) + " is not in lowest terms");
}

/// floor((i + p s) / q)
inline std::int64_t cone_index(std::int64_t p, std::int64_t q, std::int64_t i, std::int64_t s)
{
    return floor_div(i + p * s, q);
}

/**
 * Least sigma >= 1 such that every omitted A-summand maps isomorphically:
 * t_s >= g for s > sigma and t_s <= -g for s < -sigma.
 */
inline std::int64_t truncation_sigma(std::int64_t g, std::int64_t p, std::int64_t q, std::int64_t i)
{
    if (p <= 0 || q <= 0)
        throw SurgeryError("truncation_sigma needs p, q > 0");
    std::int64_t sigma = 1;
    while (cone_index(p, q, i, sigma + 1) < g || cone_index(p, q, i, -sigma - 1) > -g)
        ++sigma;
    return sigma;
}

inline std::int64_t truncation_sigma(const KnotComplex& k, std::int64_t p, std::int64_t q, std::int64_t i)
{
    return truncation_sigma(genus(k), p, q, i);
}

/**
 * Correction terms of p/q surgery on the unknot:
 * d(p, q, i) = ((2i + 1 - p - q)^2 - pq) / 4pq - d(q, p mod q, i mod q), d(1, 0, 0) = 0.
 */
inline Rational lens_d_oracle(std::int64_t p, std::int64_t q, std::int64_t i)
{
    if (p <= 0 || q < 0 || i < 0 || i >= p)
        throw std::invalid_argument("lens_d_oracle: need p > 0, q >= 0, 0 <= i < p");
    if (q == 0) {
        if (p != 1)
            throw std::invalid_argument("lens_d_oracle: p and q are not coprime");
        return Rational(0);
    }
    if (std::gcd(p, q) != 1)
        throw std::invalid_argument("lens_d_oracle: p and q are not coprime");
    Integer numerator = Integer(2 * i + 1 - p - q);
    numerator = numerator * numerator - Integer(p) * q;
    return Rational(numerator, Integer(4) * p * q) - lens_d_oracle(q, p % q, i % q);
}

/// Default U-truncation depth for slope p/q.
inline std::int64_t default_cone_depth(const KnotComplex& k, std::int64_t p, std::int64_t q)
{
    const std::int64_t slope_ceiling = (std::abs(p) + q - 1) / q;
    return 4 * (k.grading_spread() + slope_ceiling + 4);
}

struct ConeSummand
{
    bool is_a = true;
    std::int64_t s = 0;
    std::int64_t t = 0;          // A-summands: the A+_t used
    Rational offset;
    std::size_t first = 0;       // first basis id inside the cone
    std::size_t size = 0;
};

struct MappingCone
{
    SurgeryDescriptor descriptor;
    std::vector<ConeSummand> summands;
    GradedComplex complex;
};

namespace detail {

inline void append_block(SparseMatrix& target, const SparseMatrix& block, std::size_t row0, std::size_t col0, int sign)
{
    for (std::size_t c = 0; c < block.cols; ++c)
        for (const auto& [r, v] : block.columns[c])
            target.columns[col0 + c].emplace_back(row0 + r, sign < 0 ? Integer(-v) : v);
}

}   // namespace detail

/**
 * Assembles the truncated cone.  B^0 sits at offset `anchor`; the other
 * offsets are forced by v and h lowering the total degree by one.
 */
inline MappingCone build_mapping_cone(const IndexedComplex& k, const SurgeryDescriptor& desc,
                                      const Rational& anchor = Rational(0))
{
    if (desc.p <= 0)
        throw SurgeryError("build_mapping_cone needs p > 0");
    check_slope(desc.p, desc.q);
    if (desc.sigma < 1)
        throw SurgeryError("truncation width must be at least 1");
    if (!k.flip)
        throw KnotError("surgery needs flip data for the h maps");
    const std::int64_t sigma = desc.sigma;
    const std::int64_t i = mod_floor(desc.spin_c, desc.p);

    std::map<std::int64_t, RealizedRegion> a_regions;
    for (std::int64_t s = -sigma; s <= sigma; ++s) {
        const std::int64_t t = cone_index(desc.p, desc.q, i, s);
        if (!a_regions.count(t))
            a_regions.emplace(t, realize(k, Region::max_ij(t), desc.depth));
    }
    const RealizedRegion b_region = realize(k, Region::min_i(), desc.depth);

    // Offsets: o(A^s) = o(B^s) + 1, o(B^{s+1}) = o(B^s) + 2 t_s.
    std::map<std::int64_t, Rational> b_offset;
    b_offset[0] = anchor;
    for (std::int64_t s = 0; s < sigma; ++s)
        b_offset[s + 1] = b_offset[s] + 2 * cone_index(desc.p, desc.q, i, s);
    for (std::int64_t s = 0; s > -sigma + 1; --s)
        b_offset[s - 1] = b_offset[s] - 2 * cone_index(desc.p, desc.q, i, s - 1);

    MappingCone cone;
    cone.descriptor = desc;
    cone.descriptor.spin_c = i;
    std::size_t next = 0;
    for (std::int64_t s = -sigma; s <= sigma; ++s) {
        ConeSummand a;
        a.is_a = true;
        a.s = s;
        a.t = cone_index(desc.p, desc.q, i, s);
        a.offset = s == -sigma ? Rational(b_offset.at(s + 1) + 1 - 2 * a.t) : Rational(b_offset.at(s) + 1);
        a.first = next;
        a.size = a_regions.at(a.t).size();
        next += a.size;
        cone.summands.push_back(a);
        if (s < sigma) {
            ConeSummand b;
            b.is_a = false;
            b.s = s + 1;
            b.offset = b_offset.at(s + 1);
            b.first = next;
            b.size = b_region.size();
            next += b.size;
            cone.summands.push_back(b);
        }
    }

    GradedComplex& x = cone.complex;
    x.boundary = SparseMatrix(next, next);
    x.u_action = SparseMatrix(next, next);
    x.degrees.resize(next);
    std::map<std::int64_t, const ConeSummand*> b_by_s;
    for (const auto& summand : cone.summands)
        if (!summand.is_a)
            b_by_s[summand.s] = &summand;

    std::optional<Rational> exact_top;
    for (const auto& summand : cone.summands) {
        const RealizedRegion& r = summand.is_a ? a_regions.at(summand.t) : b_region;
        for (std::size_t id = 0; id < r.size(); ++id)
            x.degrees[summand.first + id] = r.complex.degrees[id] + summand.offset;
        detail::append_block(x.boundary, r.complex.boundary, summand.first, summand.first, summand.is_a ? 1 : -1);
        detail::append_block(x.u_action, r.complex.u_action, summand.first, summand.first, 1);
        if (r.complex.exact_top) {
            Rational top = *r.complex.exact_top + summand.offset;
            if (!exact_top || top < *exact_top)
                exact_top = top;
        }
        if (!summand.is_a)
            continue;
        const RealizedRegion& a = r;
        if (auto it = b_by_s.find(summand.s); it != b_by_s.end()) {
            ChainMap v = map_v(k, a, b_region);
            detail::append_block(x.boundary, v.matrix, it->second->first, summand.first, 1);
        }
        if (auto it = b_by_s.find(summand.s + 1); it != b_by_s.end()) {
            ChainMap h = map_h(k, summand.t, a, b_region);
            detail::append_block(x.boundary, h.matrix, it->second->first, summand.first, 1);
        }
    }
    x.exact_top = exact_top;

    for (std::size_t c = 0; c < next; ++c)
        for (const auto& [r, v] : x.boundary.columns[c])
            if (x.degrees[r] != x.degrees[c] - 1)
                throw SurgeryError("cone offsets are inconsistent: a differential component does not drop degree by 1");
    return cone;
}

/// Tower bottom and reduced part of one truncated cone, in cone-relative degrees.
struct ConeHomology
{
    Rational d_relative;
    GradedGroup reduced;
    bool stabilized = false;
};

inline ConeHomology cone_homology(const IndexedComplex& k, const SurgeryDescriptor& desc,
                                  const Rational& anchor = Rational(0))
{
    MappingCone cone = build_mapping_cone(k, desc, anchor);
    Homology h(cone.complex);
    TowerDecomposition t = tower_decompose(h.group());
    return ConeHomology{t.d_bottom, std::move(t.reduced), t.stabilized};
}

namespace detail {

// Unknot tower bottoms, keyed by (p, q, i, sigma, depth).
class CalibrationCache
{
    public:
        static CalibrationCache& instance()
        {
            static CalibrationCache cache;
            return cache;
        }

        Rational unknot_bottom(const SurgeryDescriptor& desc)
        {
            const auto key = std::make_tuple(desc.p, desc.q, desc.spin_c, desc.sigma, desc.depth);
            {
                std::lock_guard<std::mutex> lock(mutex_);
                if (auto it = values_.find(key); it != values_.end())
                    return it->second;
            }
            static const IndexedComplex unknot(builtin("unknot"));
            ConeHomology h = cone_homology(unknot, desc);
            if (!h.reduced.is_zero())
                throw SurgeryError("calibration failed: surgery on the unknot has reduced homology");
            std::lock_guard<std::mutex> lock(mutex_);
            values_.emplace(key, h.d_relative);
            return h.d_relative;
        }

    private:
        std::mutex mutex_;
        std::map<std::tuple<std::int64_t, std::int64_t, std::int64_t, std::int64_t, std::int64_t>, Rational> values_;
};

}   // namespace detail

/// Grading shift taking cone-relative degrees to absolute ones.
inline Rational calibration_shift(const SurgeryDescriptor& desc)
{
    return lens_d_oracle(desc.p, desc.q, desc.spin_c) - detail::CalibrationCache::instance().unknot_bottom(desc);
}

struct SpinCResult
{
    std::int64_t index = 0;
    Rational d;
    std::optional<GradedGroup> reduced;   // absent for orientation-reversed results
    std::size_t even_rank = 0;
    std::size_t odd_rank = 0;
    std::int64_t sigma = 0;
    std::int64_t depth = 0;

    std::size_t reduced_rank() const { return reduced ? reduced->total_free_rank() : 0; }
};

struct HFResult
{
    std::int64_t p = 1;
    std::int64_t q = 1;
    bool orientation_reversed = false;
    std::vector<SpinCResult> spin_c;

    std::size_t total_reduced_rank() const
    {
        std::size_t total = 0;
        for (const auto& r : spin_c)
            total += r.reduced_rank();
        return total;
    }
};

struct SurgeryOptions
{
    std::optional<std::int64_t> depth;   // starting depth; default from default_cone_depth
    std::int64_t sigma_extra = 0;        // added to the minimal truncation width
    int max_doublings = 4;
    Rational anchor_offset = 0;          // shifts the knot's cone only (gauge check)
    std::optional<std::int64_t> only_spin;
    unsigned threads = 0;                // 0: hardware concurrency
};

/// Runs fn(0..n-1) on a small pool of threads; exceptions are rethrown in index order.
template <typename Fn>
void parallel_for(std::size_t n, unsigned threads, Fn fn)
{
    if (threads == 0)
        threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, n));
    std::vector<std::exception_ptr> errors(n);
    if (threads <= 1) {
        for (std::size_t k = 0; k < n; ++k) {
            try {
                fn(k);
            } catch (...) {
                errors[k] = std::current_exception();
            }
        }
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < threads; ++t) {
            pool.emplace_back([&] {
                for (std::size_t k = next++; k < n; k = next++) {
                    try {
                        fn(k);
                    } catch (...) {
                        errors[k] = std::current_exception();
                    }
                }
            });
        }
        for (auto& th : pool)
            th.join();
    }
    for (auto& e : errors)
        if (e)
            std::rethrow_exception(e);
}

namespace detail {

inline SpinCResult finish_spin(std::int64_t i, const ConeHomology& h, const Rational& shift, std::int64_t sigma,
                               std::int64_t depth)
{
    SpinCResult r;
    r.index = i;
    r.d = h.d_relative + shift;
    r.reduced = h.reduced.shifted(shift);
    r.reduced->exact_top.reset();
    r.reduced->u_map.clear();
    for (const auto& [degree, g] : r.reduced->groups) {
        const Rational gap = degree - r.d;
        if (!is_integer(gap))
            throw SurgeryError("reduced class in a degree not congruent to d modulo 1");
        const bool even = boost::multiprecision::numerator(gap) % 2 == 0;
        (even ? r.even_rank : r.odd_rank) += g.free_rank;
    }
    r.sigma = sigma;
    r.depth = depth;
    return r;
}

inline SpinCResult compute_spin(const IndexedComplex& k, std::int64_t g, std::int64_t spread, std::int64_t p,
                                std::int64_t q, std::int64_t i, const SurgeryOptions& options)
{
    SurgeryDescriptor desc;
    desc.p = p;
    desc.q = q;
    desc.spin_c = i;
    desc.sigma = truncation_sigma(g, p, q, i) + options.sigma_extra;
    const std::int64_t slope_ceiling = (p + q - 1) / q;
    desc.depth = options.depth.value_or(4 * (spread + slope_ceiling + 4));

    std::string last_problem;
    for (int attempt = 0; attempt <= options.max_doublings; ++attempt) {
        SurgeryDescriptor twice = desc;
        twice.depth = 2 * desc.depth;
        try {
            ConeHomology at_n = cone_homology(k, desc, options.anchor_offset);
            ConeHomology at_2n = cone_homology(k, twice, options.anchor_offset);
            const Rational shift_n = calibration_shift(desc);
            const Rational shift_2n = calibration_shift(twice);
            SpinCResult r_n = finish_spin(i, at_n, shift_n, desc.sigma, desc.depth);
            SpinCResult r_2n = finish_spin(i, at_2n, shift_2n, twice.sigma, twice.depth);
            if (at_n.stabilized && at_2n.stabilized && r_n.d == r_2n.d && r_n.reduced->groups == r_2n.reduced->groups)
                return r_n;
            last_problem = "results differ between depths " + std::to_string(desc.depth) + " and " +
                           std::to_string(twice.depth);
        } catch (const HomologyError& e) {
            last_problem = e.what();
        }
        desc.depth *= 2;
    }
    throw StabilizationError("spin^c " + std::to_string(i) + " of " + std::to_string(p) + "/" + std::to_string(q) +
                             " did not stabilize: " + last_problem);
}

}   // namespace detail

/**
 * HF+ of p/q surgery, one record per spin^c index in ascending order.  For
 * p < 0 the mirror is computed at -p/q and only d is transported (negated);
 * the records carry no reduced group.
 */
inline HFResult hf_plus(const KnotComplex& knot, std::int64_t p, std::int64_t q, const SurgeryOptions& options = {})
{
    check_slope(p, q);
    if (!knot.graded())
        throw KnotError("surgery needs a graded complex");
    if (p < 0) {
        HFResult mirrored = hf_plus(mirror(knot), -p, q, options);
        mirrored.p = p;
        mirrored.orientation_reversed = true;
        for (auto& r : mirrored.spin_c) {
            r.d = -r.d;
            r.reduced.reset();
            r.even_rank = 0;
            r.odd_rank = 0;
        }
        return mirrored;
    }

    const IndexedComplex k(knot);
    const std::int64_t g = genus(knot);
    const std::int64_t spread = knot.grading_spread();

    std::vector<std::int64_t> indices;
    if (options.only_spin) {
        indices.push_back(mod_floor(*options.only_spin, p));
    } else {
        for (std::int64_t i = 0; i < p; ++i)
            indices.push_back(i);
    }

    HFResult result;
    result.p = p;
    result.q = q;
    result.spin_c.resize(indices.size());
    parallel_for(indices.size(), options.threads, [&](std::size_t n) {
        result.spin_c[n] = detail::compute_spin(k, g, spread, p, q, indices[n], options);
    });
    return result;
}

}   // namespace hfsurg
