// Shared helpers for the test suites: an independent rational rank oracle,
// random complexes, and twist-knot-like CFK models.
#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "hfsurg/hfsurg.hpp"

namespace testsupport {

using hfsurg::Integer;
using hfsurg::Rational;

// Rank over Q by plain Gaussian elimination on a dense copy.
inline std::size_t rational_rank(std::vector<std::vector<Rational>> m)
{
    std::size_t rank = 0;
    const std::size_t rows = m.size();
    const std::size_t cols = rows == 0 ? 0 : m[0].size();
    for (std::size_t c = 0; c < cols && rank < rows; ++c) {
        std::size_t pivot = rank;
        while (pivot < rows && m[pivot][c] == 0)
            ++pivot;
        if (pivot == rows)
            continue;
        std::swap(m[pivot], m[rank]);
        for (std::size_t r = 0; r < rows; ++r) {
            if (r == rank || m[r][c] == 0)
                continue;
            const Rational f = m[r][c] / m[rank][c];
            for (std::size_t k = c; k < cols; ++k)
                m[r][k] -= f * m[rank][k];
        }
        ++rank;
    }
    return rank;
}

// Betti numbers over Q per degree: dim C_d - rank d_d - rank d_{d+1}.
inline std::map<Rational, std::size_t> rational_betti(const hfsurg::GradedComplex& c)
{
    std::map<Rational, std::vector<std::size_t>> by_degree;
    for (std::size_t k = 0; k < c.size(); ++k)
        by_degree[c.degrees[k]].push_back(k);

    auto block_rank = [&](const Rational& from) -> std::size_t {
        auto src = by_degree.find(from);
        auto dst = by_degree.find(from - 1);
        if (src == by_degree.end() || dst == by_degree.end())
            return 0;
        std::map<std::size_t, std::size_t> row_of;
        for (std::size_t r = 0; r < dst->second.size(); ++r)
            row_of[dst->second[r]] = r;
        std::vector<std::vector<Rational>> m(dst->second.size(), std::vector<Rational>(src->second.size()));
        for (std::size_t col = 0; col < src->second.size(); ++col)
            for (const auto& [r, v] : c.boundary.columns[src->second[col]])
                m[row_of.at(r)][col] = Rational(v);
        return rational_rank(std::move(m));
    };

    std::map<Rational, std::size_t> out;
    for (const auto& [d, basis] : by_degree) {
        const std::size_t b = basis.size() - block_rank(d) - block_rank(d + 1);
        if (b > 0)
            out[d] = b;
    }
    return out;
}

// Random complex: a direct sum of points and pairs x -> c*y (c possibly > 1),
// conjugated by random degree-preserving unimodular changes of basis.
inline hfsurg::GradedComplex random_complex(std::mt19937& rng, std::size_t max_size = 12)
{
    std::uniform_int_distribution<int> size_dist(1, static_cast<int>(max_size));
    std::uniform_int_distribution<int> degree_dist(-2, 2);
    std::uniform_int_distribution<int> coin(0, 2);
    std::uniform_int_distribution<int> coeff(1, 3);

    const std::size_t target = static_cast<std::size_t>(size_dist(rng));
    std::vector<Rational> degrees;
    std::vector<std::tuple<std::size_t, std::size_t, int>> pairs;
    while (degrees.size() < target) {
        const int d = degree_dist(rng);
        if (degrees.size() + 2 <= target && coin(rng) != 0) {
            degrees.push_back(Rational(d));
            degrees.push_back(Rational(d - 1));
            pairs.emplace_back(degrees.size() - 2, degrees.size() - 1, coeff(rng));
        } else {
            degrees.push_back(Rational(d));
        }
    }
    const std::size_t n = degrees.size();

    std::vector<std::vector<Integer>> dense(n, std::vector<Integer>(n));
    for (const auto& [x, y, c] : pairs)
        dense[y][x] = c;

    // D -> E D E^{-1} with E = I + f e_{ab}, a != b of equal degree:
    // row a += f row b, then column b -= f column a.
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    std::uniform_int_distribution<int> factor(-2, 2);
    for (int step = 0; step < static_cast<int>(4 * n); ++step) {
        const std::size_t a = pick(rng), b = pick(rng);
        const int f = factor(rng);
        if (a == b || f == 0 || degrees[a] != degrees[b])
            continue;
        for (std::size_t j = 0; j < n; ++j)
            dense[a][j] += f * dense[b][j];
        for (std::size_t i = 0; i < n; ++i)
            dense[i][b] -= f * dense[i][a];
    }

    hfsurg::GradedComplex c;
    c.degrees = degrees;
    c.boundary = hfsurg::SparseMatrix(n, n);
    c.u_action = hfsurg::SparseMatrix(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            c.boundary.add(i, j, dense[i][j]);
    return c;
}

// Unknot generator plus n acyclic boxes: Alexander polynomial -n t + (2n+1) - n t^-1.
inline std::string twist_like_source(int boxes, bool with_trefoil = false)
{
    std::string s;
    if (with_trefoil) {
        s += "gen x -1 0 -2\ngen y 0 0 -1\ngen z 0 -1 -2\nd y = x + z\nflip x = z\nflip y = y\n";
    } else {
        s += "gen e 0 0 0\nflip e = e\n";
    }
    for (int k = 0; k < boxes; ++k) {
        const std::string t = std::to_string(k);
        s += "gen a" + t + " 1 1 2\ngen b" + t + " 0 1 1\ngen c" + t + " 1 0 1\ngen d" + t + " 0 0 0\n";
        s += "d a" + t + " = b" + t + " + c" + t + "\n";
        s += "d b" + t + " = d" + t + "\n";
        s += "d c" + t + " = -d" + t + "\n";
        s += "flip a" + t + " = a" + t + "\nflip b" + t + " = c" + t + "\nflip d" + t + " = -d" + t + "\n";
    }
    return s;
}

// Disjoint union of U-translated copies of built-in complexes, with renamed generators.
inline hfsurg::KnotComplex random_union(std::mt19937& rng)
{
    const auto& names = hfsurg::builtin_names();
    std::uniform_int_distribution<std::size_t> which(0, names.size() - 1);
    std::uniform_int_distribution<int> count(1, 3);
    std::uniform_int_distribution<int> shift(-2, 2);

    hfsurg::KnotComplex out;
    out.flip.emplace();
    const int pieces = count(rng);
    for (int piece = 0; piece < pieces; ++piece) {
        const hfsurg::KnotComplex k = hfsurg::builtin(names[which(rng)]);
        const int t = shift(rng);
        const std::string prefix = "p" + std::to_string(piece) + "_";
        for (auto g : k.generators) {
            g.name = prefix + g.name;
            g.i += t;
            g.j += t;
            *g.m += 2 * t;
            out.generators.push_back(g);
        }
        for (const auto& [src, terms] : k.differential)
            for (const auto& term : terms)
                out.add_term(prefix + src, term.coefficient, term.u_exponent, prefix + term.target);
        for (const auto& [src, image] : *k.flip)
            (*out.flip)[prefix + src] = hfsurg::SignedName{image.sign, prefix + image.name};
    }
    return out;
}

}   // namespace testsupport
