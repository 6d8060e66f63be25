#include <catch_amalgamated.hpp>

#include "hfsurg/hfsurg.hpp"
#include "support.hpp"

using namespace hfsurg;

namespace {

GradedGroup single(std::int64_t degree, std::size_t rank = 1)
{
    GradedGroup g;
    g.groups[Rational(degree)] = DegreeGroup{rank, {}};
    return g;
}

TowerDecomposition a_tower(const KnotComplex& k, std::int64_t s, std::int64_t depth = 0)
{
    const RealizedRegion a = realize(k, Region::max_ij(s), depth > 0 ? depth : default_region_depth(k, s));
    return tower_decompose(graded_homology(a.complex).group());
}

}   // namespace

TEST_CASE("regions", "[acomplex][region]")
{
    const Region b = Region::min_i();
    CHECK(b.contains(0, -5));
    CHECK_FALSE(b.contains(-1, 5));
    CHECK(b.level(3, 0) == 3);

    const Region a = Region::max_ij(1);
    CHECK(a.contains(-3, 1));
    CHECK_FALSE(a.contains(-1, 0));
    CHECK(a.level(-2, 4) == 3);
    CHECK(a.describe() == "{max(i, j - 1) >= 0}");

    const Region box = Region::box(0, 1, -1, 0);
    CHECK(box.contains(1, -1));
    CHECK_FALSE(box.contains(2, 0));
    CHECK_FALSE(box.upward_closed());
    CHECK_THROWS(Region::box(1, 0, 0, 0));
    CHECK_THROWS(box.level(0, 0));
}

TEST_CASE("realizations", "[acomplex][region]")
{
    const KnotComplex unknot = builtin("unknot");
    const RealizedRegion b = realize(unknot, Region::min_i(), 5);
    CHECK(b.size() == 6);
    REQUIRE(b.complex.exact_top.has_value());
    CHECK(*b.complex.exact_top == 10);

    // The figure-eight box read in a finite region keeps the induced differential.
    const KnotComplex fig8 = builtin("figure_eight");
    const RealizedRegion box = realize(fig8, Region::box(0, 1, 0, 1), 0);
    CHECK(box.size() == 8);
    CHECK_FALSE(box.complex.exact_top.has_value());
    CHECK(box.complex.u_action.nonzeros() == 0);

    const RealizedRegion corner = realize(fig8, Region::single(0, 0), 0);
    CHECK(corner.size() == 3);
    CHECK(corner.complex.boundary.nonzeros() == 0);
    CHECK(graded_homology(corner.complex).group().same_groups(single(0, 3)));
}

TEST_CASE("knot Floer homology of the built-ins", "[acomplex][hfk]")
{
    const KnotComplex tr = builtin("trefoil_right");
    CHECK(hfk_hat(tr, 1).same_groups(single(0)));
    CHECK(hfk_hat(tr, 0).same_groups(single(-1)));
    CHECK(hfk_hat(tr, -1).same_groups(single(-2)));
    CHECK(hfk_hat(tr, 2).is_zero());

    const KnotComplex tl = builtin("trefoil_left");
    CHECK(hfk_hat(tl, 1).same_groups(single(2)));
    CHECK(hfk_hat(tl, 0).same_groups(single(1)));
    CHECK(hfk_hat(tl, -1).same_groups(single(0)));

    const KnotComplex fig8 = builtin("figure_eight");
    CHECK(hfk_hat(fig8, 1).same_groups(single(1)));
    CHECK(hfk_hat(fig8, 0).same_groups(single(0, 3)));
    CHECK(hfk_hat(fig8, -1).same_groups(single(-1)));

    const KnotComplex t25 = builtin("torus_2_5");
    for (std::int64_t s = -2; s <= 2; ++s)
        CHECK(hfk_hat(t25, s).same_groups(single(s - 2)));

    CHECK(hfk_hat(builtin("unknot"), 0).same_groups(single(0)));
}

TEST_CASE("genus and Alexander polynomial", "[acomplex][alexander]")
{
    CHECK(genus(builtin("unknot")) == 0);
    CHECK(genus(builtin("trefoil_right")) == 1);
    CHECK(genus(builtin("trefoil_left")) == 1);
    CHECK(genus(builtin("figure_eight")) == 1);
    CHECK(genus(builtin("torus_2_5")) == 2);

    CHECK(alexander_polynomial(builtin("unknot")).str() == "1");
    CHECK(alexander_polynomial(builtin("trefoil_right")).str() == "t - 1 + t^-1");
    CHECK(alexander_polynomial(builtin("trefoil_left")).str() == "t - 1 + t^-1");
    CHECK(alexander_polynomial(builtin("figure_eight")).str() == "-t + 3 - t^-1");
    CHECK(alexander_polynomial(builtin("torus_2_5")).str() == "t^2 - t + 1 - t^-1 + t^-2");

    for (const auto& name : builtin_names())
        CHECK(alexander_polynomial(builtin(name)).at_one() == 1);
    CHECK(alexander_polynomial(builtin("trefoil_right")).second_derivative_at_one() == 2);
    CHECK(alexander_polynomial(builtin("figure_eight")).second_derivative_at_one() == -2);
    CHECK(alexander_polynomial(builtin("torus_2_5")).second_derivative_at_one() == 6);

    for (int n = 0; n <= 3; ++n) {
        const KnotComplex k = parse_text(testsupport::twist_like_source(n));
        const LaurentPolynomial poly = alexander_polynomial(k);
        CHECK(poly.at_one() == 1);
        CHECK(poly.second_derivative_at_one() == -2 * n);
        CHECK(genus(k) == (n == 0 ? 0 : 1));
    }
}

TEST_CASE("homology of B+ is a tower at 0", "[acomplex][tower]")
{
    for (const auto& name : builtin_names()) {
        const KnotComplex k = builtin(name);
        const RealizedRegion b = realize(k, Region::min_i(), default_region_depth(k));
        const TowerDecomposition t = tower_decompose(graded_homology(b.complex).group());
        INFO(name);
        CHECK(t.d_bottom == 0);
        CHECK(t.reduced.is_zero());
        CHECK(t.stabilized);
    }
}

TEST_CASE("A+_s is stable under deeper truncation", "[acomplex][tower]")
{
    for (const auto& name : builtin_names()) {
        const KnotComplex k = builtin(name);
        for (std::int64_t s = -3; s <= 3; ++s) {
            for (std::int64_t depth : {8, 16}) {
                const TowerDecomposition n = a_tower(k, s, depth);
                const TowerDecomposition twice = a_tower(k, s, 2 * depth);
                INFO(name << " s = " << s << " depth " << depth);
                CHECK(n.stabilized);
                CHECK(n.d_bottom == twice.d_bottom);
                CHECK(n.reduced.same_groups(twice.reduced));
            }
        }
    }
}

TEST_CASE("homology of A+_0", "[acomplex][tower]")
{
    const TowerDecomposition tl = a_tower(builtin("trefoil_left"), 0);
    CHECK(tl.d_bottom == 0);
    CHECK(tl.reduced.same_groups(single(0)));

    const TowerDecomposition fig8 = a_tower(builtin("figure_eight"), 0);
    CHECK(fig8.d_bottom == 0);
    CHECK(fig8.reduced.same_groups(single(-1)));

    const TowerDecomposition tr = a_tower(builtin("trefoil_right"), 0);
    CHECK(tr.d_bottom == -2);
    CHECK(tr.reduced.is_zero());

    const TowerDecomposition unknot = a_tower(builtin("unknot"), 0);
    CHECK(unknot.d_bottom == 0);
    CHECK(unknot.reduced.is_zero());
}

TEST_CASE("A+_s and A+_-s agree up to a shift of 2s", "[acomplex][property]")
{
    for (const auto& name : builtin_names()) {
        const KnotComplex k = builtin(name);
        for (std::int64_t s = 1; s <= 3; ++s) {
            const TowerDecomposition plus = a_tower(k, s);
            const TowerDecomposition minus = a_tower(k, -s);
            INFO(name << " s = " << s);
            CHECK(minus.d_bottom == plus.d_bottom - 2 * s);
            CHECK(minus.reduced.same_groups(plus.reduced.shifted(Rational(-2 * s))));
        }
    }
}

TEST_CASE("v and h", "[acomplex][maps]")
{
    for (const auto& name : builtin_names()) {
        const KnotComplex k = builtin(name);
        const IndexedComplex ik(k);
        const std::int64_t g = genus(k);
        for (std::int64_t s = -3; s <= 3; ++s) {
            const APair pair = realize_pair(ik, s, default_region_depth(k, s));
            const InducedMap v = induced_v(ik, pair);
            const InducedMap h = induced_h(ik, s, pair);
            INFO(name << " s = " << s);
            CHECK(v.surjective());
            CHECK(h.surjective());
            CHECK(h.shift == -2 * s);
            if (s >= g)
                CHECK(v.isomorphism());
            if (s <= -g)
                CHECK(h.isomorphism());
        }
    }
}

TEST_CASE("kernel of v_s", "[acomplex][maps]")
{
    CHECK(kernel_rank_v(builtin("unknot"), 0) == 0);
    CHECK(kernel_rank_v(builtin("trefoil_right"), 0) == 1);
    CHECK(kernel_rank_v(builtin("trefoil_left"), 0) == 1);
    CHECK(kernel_rank_v(builtin("figure_eight"), 0) == 1);
    CHECK(kernel_rank_v(builtin("trefoil_right"), 1) == 0);
    CHECK(kernel_rank_v(builtin("torus_2_5"), 1) == 1);
    CHECK(kernel_rank_v(builtin("torus_2_5"), 2) == 0);
    CHECK(kernel_rank_v(builtin("trefoil_right"), -1) == 1);
}

TEST_CASE("short exact sequence at the top Alexander level", "[acomplex][maps]")
{
    for (const auto& name : {"trefoil_right", "trefoil_left", "figure_eight", "torus_2_5"}) {
        const KnotComplex k = builtin(name);
        const std::int64_t g = genus(k);
        const IndexedComplex ik(k);
        const APair pair = realize_pair(ik, g - 1, default_region_depth(k, g - 1));
        const InducedMap v = induced_v(ik, pair);
        INFO(name);
        CHECK(v.surjective());
        CHECK(v.kernel_rank() == hfk_hat(k, g).total_free_rank());
    }
    for (int n = 1; n <= 3; ++n) {
        const KnotComplex k = parse_text(testsupport::twist_like_source(n));
        CHECK(kernel_rank_v(k, 0) == static_cast<std::size_t>(n));
        CHECK(hfk_hat(k, 1).total_free_rank() == static_cast<std::size_t>(n));
    }
}
