/**
 * Surgery diagnostics: the reduced-rank / d-invariant sum, detection of the
 * trefoils and the figure eight knot from a surgery, graded comparison of
 * two surgeries, and the Casson invariant of 1/n surgery.
 */
#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "hfsurg/acomplex.hpp"
#include "hfsurg/builtin.hpp"
#include "hfsurg/surgery.hpp"

namespace hfsurg {

struct Diagnostic
{
    std::int64_t p = 1;
    std::int64_t q = 1;
    std::size_t total_reduced_rank = 0;
    Rational d_deficit;   // sum over i of (d(K, i) - d(O, i)) / 2
    Rational score;       // total_reduced_rank - d_deficit

    bool integral() const { return is_integer(score); }
};

inline Diagnostic diagnostic_from(const HFResult& result)
{
    if (result.orientation_reversed || result.p <= 0)
        throw SurgeryError("the diagnostic needs a positive slope");
    Diagnostic out;
    out.p = result.p;
    out.q = result.q;
    out.total_reduced_rank = result.total_reduced_rank();
    out.d_deficit = 0;
    for (const auto& r : result.spin_c)
        out.d_deficit += (r.d - lens_d_oracle(result.p, result.q, r.index)) / 2;
    out.score = Rational(out.total_reduced_rank) - out.d_deficit;
    return out;
}

inline Diagnostic diagnostic_sum(const KnotComplex& k, std::int64_t p, std::int64_t q, const SurgeryOptions& options = {})
{
    if (p <= 0)
        throw SurgeryError("the diagnostic needs a positive slope");
    return diagnostic_from(hf_plus(k, p, q, options));
}

/// Spin^c conjugation on the cone's index: i -> (q - 1 - i) mod p.
inline std::int64_t conjugate_index(std::int64_t p, std::int64_t q, std::int64_t i)
{
    return mod_floor(q - 1 - i, p);
}

namespace detail {

inline std::string group_key(const GradedGroup& g)
{
    std::ostringstream out;
    for (const auto& [d, grp] : g.groups) {
        out << fraction_string(d) << ":" << grp.free_rank;
        for (const auto& t : grp.torsion)
            out << "/" << t;
        out << ";";
    }
    return out.str();
}

inline std::string spin_key(const SpinCResult& r)
{
    return fraction_string(r.d) + "|" + (r.reduced ? group_key(*r.reduced) : std::string("?"));
}

inline std::vector<std::string> profile(const HFResult& r)
{
    std::vector<std::string> keys;
    for (const auto& s : r.spin_c)
        keys.push_back(spin_key(s));
    std::sort(keys.begin(), keys.end());
    return keys;
}

}   // namespace detail

/// True iff the conjugation on indices preserves every (d, reduced) record.
inline bool conjugation_symmetric(const HFResult& result)
{
    const std::int64_t p = std::abs(result.p);
    if (static_cast<std::int64_t>(result.spin_c.size()) != p)
        throw SurgeryError("conjugation check needs every spin^c index");
    std::map<std::int64_t, const SpinCResult*> by_index;
    for (const auto& r : result.spin_c)
        by_index[r.index] = &r;
    for (const auto& r : result.spin_c) {
        const SpinCResult* partner = by_index.at(conjugate_index(p, result.q, r.index));
        if (detail::spin_key(r) != detail::spin_key(*partner))
            return false;
    }
    return true;
}

struct Comparison
{
    bool isomorphic = false;
    std::string witness;   // empty when isomorphic
};

/**
 * Graded comparison of two surgeries with the same slope: isomorphic iff
 * some bijection of spin^c indices matches d and the graded reduced group.
 * The witness names the first invariant that differs.
 */
inline Comparison compare(const HFResult& a, const HFResult& b)
{
    if (a.p != b.p || a.q != b.q)
        throw SurgeryError("cannot compare surgeries with different slopes");

    auto d_multiset = [](const HFResult& r) {
        std::vector<Rational> ds;
        for (const auto& s : r.spin_c)
            ds.push_back(s.d);
        std::sort(ds.begin(), ds.end());
        return ds;
    };
    auto parity_totals = [](const HFResult& r) {
        std::size_t even = 0, odd = 0;
        for (const auto& s : r.spin_c) {
            even += s.even_rank;
            odd += s.odd_rank;
        }
        return std::make_pair(even, odd);
    };

    const auto da = d_multiset(a);
    const auto db = d_multiset(b);
    if (da != db) {
        for (std::size_t k = 0; k < da.size() && k < db.size(); ++k)
            if (da[k] != db[k])
                return {false, "d-invariants differ: " + fraction_string(da[k]) + " vs " + fraction_string(db[k])};
        return {false, "d-invariants differ"};
    }
    if (a.total_reduced_rank() != b.total_reduced_rank())
        return {false, "reduced rank differs: " + std::to_string(a.total_reduced_rank()) + " vs " +
                           std::to_string(b.total_reduced_rank())};
    const auto pa = parity_totals(a);
    const auto pb = parity_totals(b);
    if (pa != pb)
        return {false, "parity differs: (even " + std::to_string(pa.first) + ", odd " + std::to_string(pa.second) +
                           ") vs (even " + std::to_string(pb.first) + ", odd " + std::to_string(pb.second) + ")"};
    if (detail::profile(a) != detail::profile(b))
        return {false, "graded reduced groups differ"};
    return {true, ""};
}

enum class Verdict { unknot, trefoil_right, trefoil_left, figure_eight, inconsistent, unknown };

inline std::string to_string(Verdict v)
{
    switch (v) {
        case Verdict::unknot:
            return "unknot";
        case Verdict::trefoil_right:
            return "trefoil_right";
        case Verdict::trefoil_left:
            return "trefoil_left";
        case Verdict::figure_eight:
            return "figure_eight";
        case Verdict::inconsistent:
            return "inconsistent";
        case Verdict::unknown:
            return "unknown";
    }
    return "unknown";
}

namespace detail {

inline const HFResult& reference_result(const std::string& name, std::int64_t p, std::int64_t q)
{
    static std::mutex mutex;
    static std::map<std::tuple<std::string, std::int64_t, std::int64_t>, HFResult> cache;
    const auto key = std::make_tuple(name, p, q);
    {
        std::lock_guard<std::mutex> lock(mutex);
        if (auto it = cache.find(key); it != cache.end())
            return it->second;
    }
    HFResult r = hf_plus(builtin(name), p, q);
    std::lock_guard<std::mutex> lock(mutex);
    return cache.emplace(key, std::move(r)).first->second;
}

}   // namespace detail

struct Classification
{
    Verdict verdict = Verdict::unknown;
    Diagnostic diagnostic;
    std::optional<std::size_t> kernel_rank;   // rank of ker v_0, when the score is below 2q
};

/**
 * Runs the detection argument on the invariants of S^3_{p/q}(K): a score
 * below 2q forces v_s to be an isomorphism for s > 0 and q * rank(ker v_0)
 * to equal the score; the complete graded profile is then matched against
 * the unknot, both trefoils and the figure eight.
 */
inline Classification classify_surgery(const KnotComplex& k, std::int64_t p, std::int64_t q,
                                       const SurgeryOptions& options = {})
{
    if (p <= 0)
        throw SurgeryError("classification needs a positive slope");
    Classification out;
    HFResult result = hf_plus(k, p, q, options);
    out.diagnostic = diagnostic_from(result);
    if (!out.diagnostic.integral()) {
        out.verdict = Verdict::inconsistent;
        return out;
    }
    if (out.diagnostic.score < 2 * q) {
        out.kernel_rank = kernel_rank_v(k, 0);
        if (Rational(q * static_cast<std::int64_t>(*out.kernel_rank)) != out.diagnostic.score) {
            out.verdict = Verdict::inconsistent;
            return out;
        }
    }

    const std::vector<std::pair<std::string, Verdict>> references{{"unknot", Verdict::unknot},
                                                                  {"trefoil_right", Verdict::trefoil_right},
                                                                  {"trefoil_left", Verdict::trefoil_left},
                                                                  {"figure_eight", Verdict::figure_eight}};
    std::vector<Verdict> matches;
    for (const auto& [name, verdict] : references)
        if (compare(result, detail::reference_result(name, p, q)).isomorphic)
            matches.push_back(verdict);
    out.verdict = matches.size() == 1 ? matches.front() : Verdict::unknown;
    return out;
}

/// Casson invariant of 1/n surgery: (n / 2) * Delta''(1).
inline Rational casson_surgery(const KnotComplex& k, std::int64_t n)
{
    if (n == 0)
        throw SurgeryError("casson_surgery needs a nonzero n");
    return Rational(Integer(n), Integer(2)) * Rational(alexander_polynomial(k).second_derivative_at_one());
}

}   // namespace hfsurg
