#include <random>

#include <catch_amalgamated.hpp>

#include "hfsurg/hfsurg.hpp"
#include "support.hpp"

using namespace hfsurg;

namespace {

bool has_violation(const KnotComplex& k, const std::string& fragment)
{
    for (const auto& v : validate(k).violations)
        if (v.find(fragment) != std::string::npos)
            return true;
    return false;
}

std::size_t parse_error_line(const std::string& text)
{
    try {
        parse_text(text);
    } catch (const ParseError& e) {
        return e.line();
    }
    return 0;
}

}   // namespace

TEST_CASE("built-in complexes are valid", "[cfk]")
{
    for (const auto& name : builtin_names()) {
        const KnotComplex k = builtin(name);
        INFO(name);
        CHECK(validate(k).ok());
        CHECK(k.graded());
        CHECK(k.flip.has_value());
    }
    CHECK_THROWS_AS(builtin("nonesuch"), KnotError);
    CHECK(is_builtin("figure_eight"));
    CHECK_FALSE(is_builtin("figure-eight"));
}

TEST_CASE("solved gradings of the built-ins", "[cfk][grading]")
{
    auto m = [](const std::string& knot, const std::string& gen) { return *builtin(knot).generator(gen).m; };
    CHECK(m("trefoil_right", "a") == -2);
    CHECK(m("trefoil_right", "b") == -1);
    CHECK(m("trefoil_right", "c") == -2);
    CHECK(m("trefoil_left", "a") == 2);
    CHECK(m("trefoil_left", "b") == 1);
    CHECK(m("figure_eight", "a") == 2);
    CHECK(m("figure_eight", "b") == 1);
    CHECK(m("figure_eight", "e") == 0);
    CHECK(m("torus_2_5", "a") == -4);
    CHECK(m("torus_2_5", "b") == -3);
    CHECK(m("torus_2_5", "e") == -4);
}

TEST_CASE("validation messages", "[cfk][validate]")
{
    KnotComplex dd = parse_syntax("gen a 0 0 0\ngen b 0 0 -1\ngen c 0 0 -2\nd a = b\nd b = 2*c\n");
    CHECK(has_violation(dd, "d-squared nonzero at a"));

    KnotComplex filt = parse_syntax("gen a 0 0 0\ngen b 1 0 -1\nd a = b\n");
    CHECK(has_violation(filt, "filtration violated by entry a"));

    KnotComplex grading = parse_syntax("gen a 0 0 0\ngen b 0 0 0\nd a = b\n");
    CHECK(has_violation(grading, "grading violated by entry a -> b"));

    KnotComplex flip = parse_syntax("gen a 0 1 0\ngen b 1 0 0\nflip a = a\nflip b = b\n");
    CHECK(has_violation(flip, "flip does not exchange filtrations at a"));

    KnotComplex missing = parse_syntax("gen a 0 0 0\ngen b 0 0 0\nflip a = a\n");
    CHECK(has_violation(missing, "flip has no image for generator b"));

    CHECK_THROWS_AS(parse_text("gen a 0 0 0\ngen b 0 0 -1\ngen c 0 0 -2\nd a = b\nd b = 2*c\n"), KnotError);
}

TEST_CASE("parse errors carry line numbers", "[cfk][parse]")
{
    CHECK(parse_error_line("gen a 0\n") == 1);
    CHECK(parse_error_line("gen a 0 0 0\ngen a 1 1 2\n") == 2);
    CHECK(parse_error_line("gen a 0 0 0\n\n# comment\nfrob a\n") == 4);
    CHECK(parse_error_line("gen a 0 0 0\nd a = 0\nd a = 0\n") == 3);
    CHECK(parse_error_line("gen a x 0\n") == 1);
}

TEST_CASE("lenient term syntax", "[cfk][parse]")
{
    const KnotComplex k = parse_syntax("gen a 1 1 0\ngen b 0 1 -1\ngen c 1 0 -1\nd a = b − c\n");
    const auto& terms = k.boundary_of("a");
    REQUIRE(terms.size() == 2);
    CHECK(terms[0].target == "b");
    CHECK(terms[0].coefficient == 1);
    CHECK(terms[1].target == "c");
    CHECK(terms[1].coefficient == -1);

    const KnotComplex u = parse_syntax("gen x 0 0 0\ngen y -1 -1 -3\nd x = 3*U^1*y\n");
    REQUIRE(u.boundary_of("x").size() == 1);
    CHECK(u.boundary_of("x")[0].coefficient == 3);
    CHECK(u.boundary_of("x")[0].u_exponent == 1);
}

TEST_CASE("serialization round trip", "[cfk][parse][property]")
{
    for (const auto& name : builtin_names()) {
        const KnotComplex k = builtin(name);
        CHECK(parse_text(serialize_text(k)) == k);
    }
    std::mt19937 rng(17);
    for (int trial = 0; trial < 100; ++trial) {
        const KnotComplex k = testsupport::random_union(rng);
        REQUIRE(validate(k).ok());
        const KnotComplex back = parse_syntax(serialize_text(k));
        CHECK(back == k);
        CHECK(equivalent_up_to_renaming(back, k));
    }
}

TEST_CASE("mirror", "[cfk][mirror]")
{
    for (const auto& name : builtin_names()) {
        const KnotComplex k = builtin(name);
        INFO(name);
        CHECK(mirror(mirror(k)) == k);
        CHECK(validate(mirror(k)).ok());
    }
    CHECK(equivalent_up_to_renaming(mirror(builtin("trefoil_right")), builtin("trefoil_left")));
    // The mirrored figure eight is the original with its box moved down one U-step
    // and its flip signs changed to match the reversed arrows.
    const KnotComplex lowered = parse_text("gen a 0 0 0\ngen b -1 0 -1\ngen c 0 -1 -1\ngen d -1 -1 -2\n"
                                           "gen e 0 0 0\nd a = b + c\nd b = d\nd c = -d\n"
                                           "flip a = -a\nflip b = -c\nflip d = d\nflip e = e\n");
    CHECK(equivalent_up_to_renaming(mirror(builtin("figure_eight")), lowered));
    CHECK(equivalent_up_to_renaming(mirror(builtin("unknot")), builtin("unknot")));
    CHECK_FALSE(equivalent_up_to_renaming(builtin("trefoil_right"), builtin("trefoil_left")));
}

TEST_CASE("flip is a chain map up to a global sign", "[cfk][flip]")
{
    for (const auto& name : builtin_names()) {
        const IndexedComplex ik(builtin(name));
        const int sign = flip_commutation_sign(ik);
        CHECK((sign == 1 || sign == -1));
    }
}

TEST_CASE("grading solver", "[cfk][grading]")
{
    const KnotComplex solved = parse_text("gen a -1 0\ngen b 0 0\ngen c 0 -1\nd b = a + c\nflip a = c\nflip b = b\n");
    CHECK(solved == builtin("trefoil_right"));

    const KnotComplex anchored = parse_text("gen a 0 1 2\ngen b 0 0\ngen c 1 0\nd a = b\nd c = b\nflip a = c\nflip b = b\n");
    CHECK(*anchored.generator("b").m == 1);

    try {
        parse_text("gen a 0 0\ngen b 0 0\n");
        FAIL("expected an ambiguity error");
    } catch (const KnotError& e) {
        CHECK(std::string(e.what()).find("ambiguous relative grading") != std::string::npos);
    }
    try {
        parse_text("gen e 0 0\ngen p 1 1\ngen q 0 1\nd p = q\n");
        FAIL("expected an ambiguity error");
    } catch (const KnotError& e) {
        CHECK(std::string(e.what()).find("ambiguous relative grading") != std::string::npos);
    }
    CHECK_THROWS_AS(parse_text("gen a 0 0 3\n"), KnotError);
}

TEST_CASE("twist-like complexes", "[cfk]")
{
    for (int n = 0; n <= 3; ++n) {
        const KnotComplex k = parse_text(testsupport::twist_like_source(n));
        CHECK(validate(k).ok());
        CHECK(k.generators.size() == static_cast<std::size_t>(1 + 4 * n));
    }
}
