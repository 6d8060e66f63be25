/**
 * Maslov grading solver for knot complexes given without (some) gradings.
 */
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <queue>
#include <string>
#include <vector>

#include "hfsurg/acomplex.hpp"
#include "hfsurg/cfk.hpp"
#include "hfsurg/homology.hpp"
#include "hfsurg/matrix.hpp"

namespace hfsurg {

namespace detail {

// Rank of the homology of the U = 1 specialization restricted to a set of
// generators closed under the differential.
inline std::size_t specialized_homology_rank(const IndexedComplex& k, const std::vector<std::size_t>& members)
{
    std::map<std::size_t, std::size_t> position;
    for (std::size_t r = 0; r < members.size(); ++r)
        position[members[r]] = r;
    IntMatrix d(members.size(), members.size());
    for (std::size_t c = 0; c < members.size(); ++c)
        for (const auto& arrow : k.outgoing[members[c]])
            d(position.at(arrow.target), c) += arrow.coefficient;
    return members.size() - 2 * integer_rank(d);
}

}   // namespace detail

/**
 * Assigns Maslov gradings from m_y - 2n = m_x - 1 on every arrow and
 * m_x = m_flip(x).  Given gradings act as anchors.  A connected piece with
 * no anchor is placed so that the tower of H_*(C{i >= 0}) starts in degree
 * 0; this only works for the one piece that carries the tower.
 */
inline KnotComplex grading_solve(const KnotComplex& input)
{
    {
        KnotComplex ungraded = input;
        for (auto& g : ungraded.generators)
            g.m.reset();
        require_valid(ungraded);
    }
    IndexedComplex k(input);
    const std::size_t n = k.generators.size();

    // Edges carry the required difference m_target - m_source.
    std::vector<std::vector<std::pair<std::size_t, std::int64_t>>> edges(n);
    for (std::size_t x = 0; x < n; ++x) {
        for (const auto& a : k.outgoing[x]) {
            const std::int64_t diff = 2 * a.u_exponent - 1;
            edges[x].push_back({a.target, diff});
            edges[a.target].push_back({x, -diff});
        }
        if (k.flip) {
            const std::size_t y = (*k.flip)[x].target;
            edges[x].push_back({y, 0});
            edges[y].push_back({x, 0});
        }
    }

    std::vector<std::optional<std::int64_t>> relative(n);
    std::vector<std::size_t> component(n, n);
    std::vector<std::vector<std::size_t>> members;
    for (std::size_t root = 0; root < n; ++root) {
        if (component[root] != n)
            continue;
        const std::size_t id = members.size();
        members.emplace_back();
        relative[root] = 0;
        component[root] = id;
        std::queue<std::size_t> queue;
        queue.push(root);
        while (!queue.empty()) {
            std::size_t x = queue.front();
            queue.pop();
            members[id].push_back(x);
            for (const auto& [y, diff] : edges[x]) {
                const std::int64_t want = *relative[x] + diff;
                if (component[y] == n) {
                    component[y] = id;
                    relative[y] = want;
                    queue.push(y);
                } else if (*relative[y] != want) {
                    throw KnotError("inconsistent grading constraints at generator " + k.generators[y].name);
                }
            }
        }
    }

    std::vector<std::optional<std::int64_t>> offset(members.size());
    for (std::size_t c = 0; c < members.size(); ++c) {
        for (std::size_t x : members[c]) {
            const auto& given = k.generators[x].m;
            if (!given)
                continue;
            const std::int64_t o = *given - *relative[x];
            if (offset[c] && *offset[c] != o)
                throw KnotError("inconsistent grading constraints at generator " + k.generators[x].name);
            offset[c] = o;
        }
    }

    std::optional<std::size_t> tower_component;
    for (std::size_t c = 0; c < members.size(); ++c) {
        std::vector<std::size_t> sorted = members[c];
        std::sort(sorted.begin(), sorted.end());
        if (detail::specialized_homology_rank(k, sorted) == 0) {
            if (!offset[c])
                throw KnotError("ambiguous relative grading: an acyclic piece containing generator " +
                                k.generators[members[c].front()].name + " has no anchored grading");
            continue;
        }
        if (tower_component)
            throw KnotError("ambiguous relative grading: more than one piece carries homology");
        tower_component = c;
    }
    if (!tower_component)
        throw KnotError("complex has no tower: the U = 1 homology vanishes");

    KnotComplex out = input;
    auto assign = [&](std::size_t c, std::int64_t o) {
        for (std::size_t x : members[c])
            out.generators[x].m = *relative[x] + o;
    };
    for (std::size_t c = 0; c < members.size(); ++c)
        if (offset[c])
            assign(c, *offset[c]);

    // Place the tower piece on its own so the tower bottom sits at 0.
    const std::size_t tc = *tower_component;
    KnotComplex piece;
    std::map<std::size_t, bool> in_piece;
    for (std::size_t x : members[tc])
        in_piece[x] = true;
    for (std::size_t x = 0; x < n; ++x) {
        if (!in_piece.count(x))
            continue;
        Generator g = k.generators[x];
        g.m = *relative[x] + offset[tc].value_or(0);
        piece.generators.push_back(g);
        for (const auto& t : input.boundary_of(g.name))
            piece.add_term(g.name, t.coefficient, t.u_exponent, t.target);
    }
    auto realization = realize(piece, Region::min_i(), default_region_depth(piece));
    auto tower = tower_decompose(graded_homology(realization.complex).group());
    if (!is_integer(tower.d_bottom))
        throw KnotError("tower bottom is not an integer");
    const std::int64_t bottom = static_cast<std::int64_t>(boost::multiprecision::numerator(tower.d_bottom));
    if (offset[tc]) {
        if (bottom != 0)
            throw KnotError("given gradings put the bottom of the H(C{i >= 0}) tower in degree " +
                            std::to_string(bottom) + " instead of 0");
    } else {
        assign(tc, -bottom);
    }
    require_valid(out);
    return out;
}

}   // namespace hfsurg
