/**
 * Homology of finite graded chain complexes over the integers.
 *
 * A GradedComplex carries a boundary of degree -1 and a chain-level U action
 * of degree -2.  graded_homology() first cancels every unit entry of the
 * boundary (an exact chain homotopy reduction over Z), then runs Smith forms
 * degree by degree on the small residual complex.  The resulting Homology
 * object can classify arbitrary cycles, which is what induced maps and the
 * tower/reduced splitting are built on.
 */
#pragma once

#include <algorithm>
#include <cstddef>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <queue>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "hfsurg/matrix.hpp"
#include "hfsurg/numeric.hpp"

namespace hfsurg {

/// Sparse integer chain: basis index -> nonzero coefficient.
using Chain = std::map<std::size_t, Integer>;

class HomologyError : public std::runtime_error
{
    public:
        using std::runtime_error::runtime_error;
};

struct SparseMatrix
{
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<std::vector<std::pair<std::size_t, Integer>>> columns;

    SparseMatrix() = default;
    SparseMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), columns(c) {}

    void add(std::size_t row, std::size_t col, const Integer& value)
    {
        if (value == 0)
            return;
        auto& column = columns.at(col);
        for (auto it = column.begin(); it != column.end(); ++it) {
            if (it->first == row) {
                it->second += value;
                if (it->second == 0)
                    column.erase(it);
                return;
            }
        }
        column.emplace_back(row, value);
    }

    Chain apply(const Chain& x) const
    {
        Chain out;
        for (const auto& [c, coef] : x) {
            for (const auto& [r, v] : columns.at(c)) {
                Integer& slot = out[r];
                slot += coef * v;
                if (slot == 0)
                    out.erase(r);
            }
        }
        return out;
    }

    Chain column(std::size_t c) const
    {
        Chain out;
        for (const auto& [r, v] : columns.at(c))
            out[r] += v;
        return out;
    }

    std::size_t nonzeros() const
    {
        std::size_t n = 0;
        for (const auto& c : columns)
            n += c.size();
        return n;
    }
};

/// Sparse product a * b.
inline SparseMatrix multiply(const SparseMatrix& a, const SparseMatrix& b)
{
    if (a.cols != b.rows)
        throw std::invalid_argument("SparseMatrix: dimension mismatch in product");
    SparseMatrix out(a.rows, b.cols);
    for (std::size_t c = 0; c < b.cols; ++c) {
        Chain col = a.apply(b.column(c));
        for (const auto& [r, v] : col)
            out.columns[c].emplace_back(r, v);
    }
    return out;
}

inline bool equal_as_maps(const SparseMatrix& a, const SparseMatrix& b)
{
    if (a.rows != b.rows || a.cols != b.cols)
        return false;
    for (std::size_t c = 0; c < a.cols; ++c)
        if (a.column(c) != b.column(c))
            return false;
    return true;
}

/**
 * Finite free chain complex with rational degree labels.
 *
 * exact_top, when set, marks the largest degree in which the homology of
 * this (truncated) complex is known to agree with the untruncated object it
 * models; homology is only computed up to there.
 */
struct GradedComplex
{
    std::vector<Rational> degrees;
    SparseMatrix boundary;
    SparseMatrix u_action;
    std::optional<Rational> exact_top;

    std::size_t size() const { return degrees.size(); }
};

/// Every violated GradedComplex invariant, as a readable message.
inline std::vector<std::string> check_graded_complex(const GradedComplex& complex)
{
    std::vector<std::string> problems;
    const std::size_t n = complex.size();
    if (complex.boundary.rows != n || complex.boundary.cols != n)
        problems.push_back("boundary has the wrong shape");
    if (complex.u_action.rows != n || complex.u_action.cols != n)
        problems.push_back("u_action has the wrong shape");
    if (!problems.empty())
        return problems;

    for (std::size_t c = 0; c < n; ++c) {
        for (const auto& [r, v] : complex.boundary.columns[c])
            if (complex.degrees[r] != complex.degrees[c] - 1) {
                problems.push_back("boundary entry " + std::to_string(c) + " -> " + std::to_string(r) +
                                   " does not lower degree by 1");
            }
        for (const auto& [r, v] : complex.u_action.columns[c])
            if (complex.degrees[r] != complex.degrees[c] - 2) {
                problems.push_back("u_action entry " + std::to_string(c) + " -> " + std::to_string(r) +
                                   " does not lower degree by 2");
            }
    }
    SparseMatrix dd = multiply(complex.boundary, complex.boundary);
    for (std::size_t c = 0; c < n; ++c)
        if (!dd.columns[c].empty())
            problems.push_back("boundary squared is nonzero on basis element " + std::to_string(c));
    SparseMatrix du = multiply(complex.boundary, complex.u_action);
    SparseMatrix ud = multiply(complex.u_action, complex.boundary);
    if (!equal_as_maps(du, ud))
        problems.push_back("u_action does not commute with the boundary");
    return problems;
}

struct DegreeGroup
{
    std::size_t free_rank = 0;
    std::vector<Integer> torsion;   // invariant factors > 1

    bool is_zero() const { return free_rank == 0 && torsion.empty(); }
    bool operator==(const DegreeGroup&) const = default;
};

/**
 * Homology as an abstract graded group: nonzero degrees only, plus the
 * induced U action on free parts (u_map[d] : H_d -> H_{d-2}).
 */
struct GradedGroup
{
    std::map<Rational, DegreeGroup> groups;
    std::map<Rational, IntMatrix> u_map;
    std::optional<Rational> exact_top;

    std::size_t free_rank(const Rational& degree) const
    {
        auto it = groups.find(degree);
        return it == groups.end() ? 0 : it->second.free_rank;
    }

    std::size_t total_free_rank() const
    {
        std::size_t total = 0;
        for (const auto& [d, g] : groups)
            total += g.free_rank;
        return total;
    }

    bool has_torsion() const
    {
        return std::any_of(groups.begin(), groups.end(),
                           [](const auto& kv) { return !kv.second.torsion.empty(); });
    }

    bool is_zero() const { return groups.empty(); }

    /// Same groups degree by degree (the U action is not compared).
    bool same_groups(const GradedGroup& other) const { return groups == other.groups; }

    GradedGroup shifted(const Rational& by) const
    {
        GradedGroup out;
        for (const auto& [d, g] : groups)
            out.groups.emplace(d + by, g);
        for (const auto& [d, m] : u_map)
            out.u_map.emplace(d + by, m);
        if (exact_top)
            out.exact_top = *exact_top + by;
        return out;
    }
};

inline std::string describe(const GradedGroup& group)
{
    if (group.groups.empty())
        return "0";
    std::ostringstream out;
    bool first = true;
    for (const auto& [d, g] : group.groups) {
        if (!first)
            out << " + ";
        first = false;
        const std::string degree = is_integer(d) ? boost::multiprecision::numerator(d).str() : fraction_string(d);
        if (g.free_rank > 0)
            out << "Z" << (g.free_rank > 1 ? "^" + std::to_string(g.free_rank) : "") << "(" << degree << ")";
        for (std::size_t k = 0; k < g.torsion.size(); ++k)
            out << (g.free_rank > 0 || k > 0 ? " + " : "") << "Z/" << g.torsion[k] << "(" << degree << ")";
    }
    return out.str();
}

/**
 * Computed homology of a GradedComplex, retaining enough of the reduction to
 * classify cycles and to lift classes back to the original basis.
 */
class Homology
{
    public:
        explicit Homology(const GradedComplex& complex)
        {
            for (const auto& problem : check_graded_complex(complex))
                throw HomologyError("invalid graded complex: " + problem);
            group_.exact_top = complex.exact_top;
            reduce(complex);
            compute_degrees(complex);
            compute_u_map(complex);
        }

        const GradedGroup& group() const& { return group_; }
        GradedGroup group() && { return std::move(group_); }

        bool computed_in(const Rational& degree) const
        {
            return !group_.exact_top || degree <= *group_.exact_top;
        }

        /**
         * Coordinates of the class of a homogeneous cycle in the free part of
         * H_degree (torsion components are discarded).
         */
        std::vector<Integer> free_coordinates(const Chain& cycle, const Rational& degree) const
        {
            if (!computed_in(degree))
                throw HomologyError("degree " + fraction_string(degree) + " lies above the exactness window");
            Chain reduced = project(cycle);
            auto it = per_degree_.find(degree);
            if (it == per_degree_.end()) {
                if (!reduced.empty())
                    throw HomologyError("chain is not homogeneous of degree " + fraction_string(degree));
                return {};
            }
            const DegreeData& data = it->second;
            std::vector<Integer> x(data.basis.size(), Integer(0));
            for (const auto& [idx, coef] : reduced) {
                auto pos = data.position.find(idx);
                if (pos == data.position.end())
                    throw HomologyError("chain is not homogeneous of degree " + fraction_string(degree));
                x[pos->second] = coef;
            }
            std::vector<Integer> y = data.right_inverse.empty() ? x : data.right_inverse * x;
            for (std::size_t k = 0; k < data.boundary_rank; ++k)
                if (y[k] != 0)
                    throw HomologyError("chain is not a cycle");
            std::vector<Integer> z(y.begin() + static_cast<std::ptrdiff_t>(data.boundary_rank), y.end());
            std::vector<Integer> w = data.image_left.empty() ? z : data.image_left * z;
            return std::vector<Integer>(w.begin() + static_cast<std::ptrdiff_t>(data.image_rank), w.end());
        }

        /// Cycle in the original basis representing the k-th free generator.
        const Chain& representative(const Rational& degree, std::size_t k) const
        {
            return per_degree_.at(degree).free_representatives.at(k);
        }

        std::size_t residual_size() const { return residual_count_; }

    private:
        struct Elimination
        {
            std::size_t x = 0;          // eliminated source
            std::size_t y = 0;          // eliminated target, boundary(x) = unit*y + alpha
            Integer unit;
            std::vector<std::pair<std::size_t, Integer>> alpha;
            std::vector<std::pair<std::size_t, Integer>> hits;   // (z, coefficient of y in boundary(z))
        };

        struct DegreeData
        {
            std::vector<std::size_t> basis;
            std::map<std::size_t, std::size_t> position;
            IntMatrix right_inverse;       // empty means identity
            std::size_t boundary_rank = 0;
            IntMatrix image_left;          // empty means identity
            std::size_t image_rank = 0;
            std::vector<Chain> free_representatives;
        };

        static constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();

        GradedGroup group_;
        std::vector<Elimination> eliminations_;
        std::vector<std::size_t> elimination_of_;
        std::vector<std::vector<std::pair<std::size_t, Integer>>> residual_boundary_;
        std::vector<char> alive_;
        std::map<Rational, DegreeData> per_degree_;
        std::size_t residual_count_ = 0;

        void reduce(const GradedComplex& complex)
        {
            const std::size_t n = complex.size();
            std::vector<char> included(n, 1);
            if (complex.exact_top) {
                const Rational cap = *complex.exact_top + 1;
                for (std::size_t k = 0; k < n; ++k)
                    included[k] = complex.degrees[k] <= cap ? 1 : 0;
            }

            auto& col = residual_boundary_;
            col.assign(n, {});
            std::vector<std::vector<std::size_t>> row(n);
            for (std::size_t c = 0; c < n; ++c) {
                if (!included[c])
                    continue;
                for (const auto& [r, v] : complex.boundary.columns[c]) {
                    col[c].emplace_back(r, v);
                    row[r].push_back(c);
                }
            }
            alive_ = included;
            elimination_of_.assign(n, npos);

            std::vector<std::size_t> stamp(n, 0);
            std::size_t current_stamp = 0;

            auto find_coef = [&](std::size_t z, std::size_t target) -> const Integer* {
                for (const auto& [r, v] : col[z])
                    if (r == target)
                        return &v;
                return nullptr;
            };

            std::vector<std::size_t> worklist;
            for (std::size_t c = n; c-- > 0;)
                if (included[c])
                    worklist.push_back(c);
            std::vector<char> queued(n, 0);
            for (auto c : worklist)
                queued[c] = 1;

            while (!worklist.empty()) {
                std::size_t x = worklist.back();
                worklist.pop_back();
                queued[x] = 0;
                if (!alive_[x])
                    continue;

                std::size_t y = npos;
                std::size_t best_fill = npos;
                Integer unit;
                for (const auto& [r, v] : col[x]) {
                    if (v != 1 && v != -1)
                        continue;
                    std::size_t fill = row[r].size();
                    if (fill < best_fill) {
                        best_fill = fill;
                        y = r;
                        unit = v;
                    }
                }
                if (y == npos)
                    continue;

                Elimination e;
                e.x = x;
                e.y = y;
                e.unit = unit;
                for (const auto& [r, v] : col[x])
                    if (r != y)
                        e.alpha.emplace_back(r, v);

                ++current_stamp;
                for (std::size_t z : row[y]) {
                    if (z == x || !alive_[z] || stamp[z] == current_stamp)
                        continue;
                    stamp[z] = current_stamp;
                    const Integer* beta = find_coef(z, y);
                    if (beta != nullptr)
                        e.hits.emplace_back(z, *beta);
                }

                // boundary'(z) = boundary(z) - beta * unit^{-1} * boundary(x); unit^{-1} == unit.
                for (const auto& [z, beta] : e.hits) {
                    Integer factor = beta * unit;
                    auto& cz = col[z];
                    for (const auto& [r, v] : col[x]) {
                        bool found = false;
                        for (auto it = cz.begin(); it != cz.end(); ++it) {
                            if (it->first == r) {
                                it->second -= factor * v;
                                if (it->second == 0)
                                    cz.erase(it);
                                found = true;
                                break;
                            }
                        }
                        if (!found) {
                            cz.emplace_back(r, -factor * v);
                            row[r].push_back(z);
                        }
                    }
                    if (!queued[z]) {
                        queued[z] = 1;
                        worklist.push_back(z);
                    }
                }

                for (std::size_t w : row[x]) {
                    if (!alive_[w])
                        continue;
                    auto& cw = col[w];
                    cw.erase(std::remove_if(cw.begin(), cw.end(), [&](const auto& entry) { return entry.first == x; }),
                             cw.end());
                }

                alive_[x] = 0;
                alive_[y] = 0;
                elimination_of_[x] = eliminations_.size();
                elimination_of_[y] = eliminations_.size();
                col[x].clear();
                col[y].clear();
                row[x].clear();
                row[y].clear();
                eliminations_.push_back(std::move(e));
            }
        }

        // Image of a chain of the original complex in the residual complex.
        Chain project(const Chain& chain) const
        {
            Chain work = chain;
            using Entry = std::size_t;
            std::priority_queue<Entry, std::vector<Entry>, std::greater<Entry>> pending;
            for (const auto& [idx, coef] : work)
                if (elimination_of_.at(idx) != npos)
                    pending.push(elimination_of_[idx]);
            std::size_t last = npos;
            while (!pending.empty()) {
                std::size_t j = pending.top();
                pending.pop();
                if (j == last)
                    continue;
                last = j;
                const Elimination& e = eliminations_[j];
                work.erase(e.x);
                auto it = work.find(e.y);
                if (it == work.end())
                    continue;
                Integer cy = it->second;
                work.erase(it);
                Integer factor = cy * e.unit;
                for (const auto& [w, a] : e.alpha) {
                    Integer& slot = work[w];
                    slot -= factor * a;
                    if (slot == 0)
                        work.erase(w);
                    else if (elimination_of_[w] != npos)
                        pending.push(elimination_of_[w]);
                }
            }
            return work;
        }

        // Lift of a residual chain to a chain of the original complex.
        Chain lift(const Chain& residual) const
        {
            Chain work = residual;
            for (std::size_t j = eliminations_.size(); j-- > 0;) {
                const Elimination& e = eliminations_[j];
                Integer total = 0;
                for (const auto& [z, beta] : e.hits) {
                    auto it = work.find(z);
                    if (it != work.end())
                        total += it->second * beta;
                }
                if (total != 0)
                    work[e.x] -= e.unit * total;
            }
            return work;
        }

        void compute_degrees(const GradedComplex& complex)
        {
            std::map<Rational, std::vector<std::size_t>> by_degree;
            for (std::size_t k = 0; k < complex.size(); ++k) {
                if (alive_[k]) {
                    by_degree[complex.degrees[k]].push_back(k);
                    ++residual_count_;
                }
            }

            auto dense_boundary = [&](const std::vector<std::size_t>& cols,
                                      const std::vector<std::size_t>& rows) -> IntMatrix {
                IntMatrix m(rows.size(), cols.size());
                std::map<std::size_t, std::size_t> row_pos;
                for (std::size_t r = 0; r < rows.size(); ++r)
                    row_pos[rows[r]] = r;
                for (std::size_t c = 0; c < cols.size(); ++c)
                    for (const auto& [r, v] : residual_boundary_[cols[c]])
                        m(row_pos.at(r), c) += v;
                return m;
            };
            static const std::vector<std::size_t> none;

            for (const auto& [degree, basis] : by_degree) {
                if (!computed_in(degree))
                    continue;
                DegreeData data;
                data.basis = basis;
                for (std::size_t k = 0; k < basis.size(); ++k)
                    data.position[basis[k]] = k;
                const std::size_t n = basis.size();

                auto below = by_degree.find(degree - 1);
                IntMatrix outgoing = dense_boundary(basis, below == by_degree.end() ? none : below->second);
                IntMatrix right = IntMatrix::identity(n);
                if (!outgoing.empty() && !outgoing.is_zero()) {
                    SmithForm snf = smith_normal_form(outgoing);
                    data.boundary_rank = snf.rank;
                    right = std::move(snf.right);
                    data.right_inverse = std::move(snf.right_inverse);
                }
                const std::size_t kernel_dim = n - data.boundary_rank;

                auto above = by_degree.find(degree + 1);
                IntMatrix incoming = dense_boundary(above == by_degree.end() ? none : above->second, basis);
                IntMatrix image_left_inverse = IntMatrix::identity(kernel_dim);
                std::vector<Integer> factors;
                if (!incoming.empty() && !incoming.is_zero()) {
                    IntMatrix in_kernel = data.right_inverse.empty() ? incoming : data.right_inverse * incoming;
                    IntMatrix coords(kernel_dim, incoming.cols());
                    for (std::size_t r = 0; r < n; ++r)
                        for (std::size_t c = 0; c < incoming.cols(); ++c) {
                            if (r < data.boundary_rank) {
                                if (in_kernel(r, c) != 0)
                                    throw HomologyError("boundary image leaves the kernel (boundary squared nonzero)");
                            } else {
                                coords(r - data.boundary_rank, c) = in_kernel(r, c);
                            }
                        }
                    if (!coords.is_zero()) {
                        SmithForm snf = smith_normal_form(coords);
                        data.image_rank = snf.rank;
                        factors = snf.invariant_factors;
                        data.image_left = std::move(snf.left);
                        image_left_inverse = std::move(snf.left_inverse);
                    }
                }

                DegreeGroup g;
                g.free_rank = kernel_dim - data.image_rank;
                for (const auto& f : factors)
                    if (f != 1)
                        g.torsion.push_back(f);

                for (std::size_t k = 0; k < g.free_rank; ++k) {
                    std::size_t col = data.image_rank + k;
                    Chain residual;
                    for (std::size_t r = 0; r < n; ++r) {
                        Integer entry = 0;
                        for (std::size_t t = 0; t < kernel_dim; ++t) {
                            const Integer& l = image_left_inverse(t, col);
                            if (l != 0)
                                entry += right(r, data.boundary_rank + t) * l;
                        }
                        if (entry != 0)
                            residual[basis[r]] = entry;
                    }
                    data.free_representatives.push_back(lift(residual));
                }

                if (!g.is_zero())
                    group_.groups.emplace(degree, g);
                per_degree_.emplace(degree, std::move(data));
            }
        }

        void compute_u_map(const GradedComplex& complex)
        {
            for (const auto& [degree, g] : group_.groups) {
                if (g.free_rank == 0)
                    continue;
                const Rational target = degree - 2;
                const std::size_t target_rank = group_.free_rank(target);
                IntMatrix m(target_rank, g.free_rank);
                if (target_rank > 0) {
                    for (std::size_t k = 0; k < g.free_rank; ++k) {
                        Chain image = complex.u_action.apply(representative(degree, k));
                        auto coords = free_coordinates(image, target);
                        for (std::size_t r = 0; r < target_rank; ++r)
                            m(r, k) = coords[r];
                    }
                }
                group_.u_map.emplace(degree, std::move(m));
            }
        }
};

inline Homology graded_homology(const GradedComplex& complex)
{
    return Homology(complex);
}

/**
 * Induced map on free parts of homology, one integer block per source degree
 * d (block : H_d(source) -> H_{d+shift}(target)).  Only degrees inside both
 * exactness windows are present.
 */
struct InducedMap
{
    Rational shift;
    std::map<Rational, IntMatrix> blocks;

    std::size_t kernel_rank() const
    {
        std::size_t total = 0;
        for (const auto& [d, m] : blocks)
            total += m.cols() - integer_rank(m);
        return total;
    }

    std::map<Rational, std::size_t> kernel_ranks() const
    {
        std::map<Rational, std::size_t> out;
        for (const auto& [d, m] : blocks) {
            std::size_t k = m.cols() - integer_rank(m);
            if (k > 0)
                out[d] = k;
        }
        return out;
    }

    bool surjective() const
    {
        return std::all_of(blocks.begin(), blocks.end(), [](const auto& kv) { return is_surjective(kv.second); });
    }

    bool isomorphism() const
    {
        return std::all_of(blocks.begin(), blocks.end(), [](const auto& kv) { return is_isomorphism(kv.second); });
    }
};

/// Throws HomologyError unless f is a chain map of the stated degree shift.
inline void check_chain_map(const GradedComplex& source, const GradedComplex& target, const SparseMatrix& f,
                            const Rational& shift)
{
    if (f.rows != target.size() || f.cols != source.size())
        throw HomologyError("chain map has the wrong shape");
    for (std::size_t c = 0; c < f.cols; ++c)
        for (const auto& [r, v] : f.columns[c])
            if (target.degrees[r] != source.degrees[c] + shift)
                throw HomologyError("chain map entry does not have the declared degree shift");
    if (!equal_as_maps(multiply(target.boundary, f), multiply(f, source.boundary)))
        throw HomologyError("map does not commute with the boundaries");
}

inline InducedMap induced_map(const GradedComplex& source, const Homology& source_homology,
                              const GradedComplex& target, const Homology& target_homology,
                              const SparseMatrix& f, const Rational& shift)
{
    check_chain_map(source, target, f, shift);
    InducedMap out;
    out.shift = shift;
    std::vector<Rational> degrees;
    for (const auto& [d, g] : source_homology.group().groups)
        degrees.push_back(d);
    for (const auto& [d, g] : target_homology.group().groups)
        degrees.push_back(d - shift);
    std::sort(degrees.begin(), degrees.end());
    degrees.erase(std::unique(degrees.begin(), degrees.end()), degrees.end());

    for (const auto& d : degrees) {
        if (!source_homology.computed_in(d) || !target_homology.computed_in(d + shift))
            continue;
        const std::size_t cols = source_homology.group().free_rank(d);
        const std::size_t rows = target_homology.group().free_rank(d + shift);
        IntMatrix block(rows, cols);
        for (std::size_t k = 0; k < cols; ++k) {
            Chain image = f.apply(source_homology.representative(d, k));
            auto coords = target_homology.free_coordinates(image, d + shift);
            for (std::size_t r = 0; r < rows; ++r)
                block(r, k) = coords[r];
        }
        out.blocks.emplace(d, std::move(block));
    }
    return out;
}

/**
 * Splitting of a tower-bearing group into the tower T+ with bottom d_bottom
 * and the reduced part (the cokernel of the tower inclusion, degree-wise).
 */
struct TowerDecomposition
{
    Rational d_bottom;
    GradedGroup reduced;
    bool stabilized = false;
};

namespace detail {

inline std::pair<Rational, GradedGroup> chase_tower(const GradedGroup& h, const Rational& start)
{
    GradedGroup reduced;
    for (const auto& [d, g] : h.groups)
        if (d < start)
            reduced.groups.emplace(d, g);

    std::vector<Integer> element{Integer(1)};
    Rational degree = start;
    Rational bottom = start;
    while (true) {
        Integer content = 0;
        for (const auto& x : element)
            content = gcd(content, abs(x));
        if (content == 0)
            break;
        bottom = degree;
        if (degree < start) {
            DegreeGroup& g = reduced.groups.at(degree);
            g.free_rank -= 1;
            if (content != 1) {
                g.torsion.push_back(content);
                std::sort(g.torsion.begin(), g.torsion.end());
            }
            if (g.is_zero())
                reduced.groups.erase(degree);
        }
        auto u = h.u_map.find(degree);
        if (u == h.u_map.end() || u->second.rows() == 0)
            break;
        element = u->second * element;
        degree -= 2;
    }
    return {bottom, reduced};
}

}   // namespace detail

/**
 * Reads off the tower bottom by chasing the top class of the exactness
 * window down under U.  The decomposition counts as stabilized when the top
 * four degrees look like a bare tower (Z, 0, Z, 0 with U an isomorphism) and
 * restarting the chase two degrees lower gives the same answer.
 */
inline TowerDecomposition tower_decompose(const GradedGroup& h)
{
    std::optional<Rational> top;
    for (const auto& [d, g] : h.groups)
        if (g.free_rank > 0)
            top = d;
    if (!top)
        throw HomologyError("no tower: homology has no free part");
    if (h.exact_top && *top < *h.exact_top - 1)
        throw HomologyError("no tower: homology vanishes at the top of the exactness window");

    auto group_at = [&](const Rational& d) -> DegreeGroup {
        auto it = h.groups.find(d);
        return it == h.groups.end() ? DegreeGroup{} : it->second;
    };

    const DegreeGroup g0 = group_at(*top);
    const DegreeGroup g2 = group_at(*top - 2);
    if (!g0.torsion.empty() || !g2.torsion.empty() || !group_at(*top + 1).torsion.empty() ||
        !group_at(*top - 1).torsion.empty())
        throw HomologyError("torsion inside the stable tower region");

    bool stable = g0.free_rank == 1 && g2.free_rank == 1 && group_at(*top - 1).is_zero() &&
                  group_at(*top - 3).is_zero();
    if (stable) {
        const IntMatrix& u = h.u_map.at(*top);
        stable = u.rows() == 1 && u.cols() == 1 && abs(u(0, 0)) == 1;
    }

    auto [bottom, reduced] = detail::chase_tower(h, *top);
    TowerDecomposition out;
    out.d_bottom = bottom;
    out.reduced = std::move(reduced);
    out.stabilized = false;
    if (stable) {
        auto [bottom2, reduced2] = detail::chase_tower(h, *top - 2);
        out.stabilized = bottom2 == out.d_bottom && reduced2.groups == out.reduced.groups;
    }
    return out;
}

}   // namespace hfsurg
