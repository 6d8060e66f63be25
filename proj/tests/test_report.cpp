#include <catch_amalgamated.hpp>

#include "hfsurg/hfsurg.hpp"
#include "hfsurg/report.hpp"

using namespace hfsurg;

TEST_CASE("FNV-1a digests", "[report]")
{
    CHECK(fnv1a_digest("") == "cbf29ce484222325");
    CHECK(fnv1a_digest("a") == "af63dc4c8601ec8c");
}

TEST_CASE("documents round trip through JSON", "[report]")
{
    for (auto [name, p, q] : {std::tuple{"figure_eight", 7, 3}, std::tuple{"torus_2_5", 3, 2},
                              std::tuple{"trefoil_right", -5, 1}}) {
        const OutputDocument doc = make_document(hf_plus(builtin(name), p, q), "builtin", name, "");
        const OutputDocument back = parse_document(emit(doc));
        INFO(name);
        CHECK(back == doc);
    }
}

TEST_CASE("document layout", "[report]")
{
    OutputDocument doc = make_document(hf_plus(builtin("figure_eight"), 7, 3), "file", "k.cfk", "fnv1a64:00");
    doc.seconds = 1.5;
    const nlohmann::json j = to_json(doc);
    CHECK(j.at("tool").at("name") == "hfsurg");
    CHECK(j.at("input").at("digest") == "fnv1a64:00");
    CHECK(j.at("descriptor").at("p") == 7);
    CHECK(j.at("orientation") == "standard");
    REQUIRE(j.at("spin_c").size() == 7);
    CHECK(j.at("spin_c")[1].at("d") == "1/2");
    CHECK(j.at("spin_c")[1].at("hf_red")[0].at("degree") == "-1/2");
    CHECK(j.at("spin_c")[1].at("parity").at("odd") == 1);
    CHECK(j.at("diagnostic").at("score") == "3/1");
    CHECK(j.at("timing").at("depth").get<std::int64_t>() > 0);
    CHECK_FALSE(to_json(doc, false).contains("timing"));

    const nlohmann::json neg = to_json(make_document(hf_plus(builtin("unknot"), -2, 1), "builtin", "unknot", ""));
    CHECK(neg.at("orientation") == "reversed");
    CHECK(neg.at("spin_c")[0].at("hf_red").is_null());
    CHECK(neg.at("diagnostic").is_null());
    CHECK_FALSE(neg.at("input").contains("digest"));
}

TEST_CASE("JSON does not depend on the starting depth", "[report]")
{
    for (auto [name, p, q] : {std::tuple{"figure_eight", 5, 2}, std::tuple{"torus_2_5", 4, 3}}) {
        const KnotComplex k = builtin(name);
        SurgeryOptions shallow;
        shallow.depth = default_cone_depth(k, p, q);
        SurgeryOptions deep;
        deep.depth = 2 * *shallow.depth;
        const auto a = to_json(make_document(hf_plus(k, p, q, shallow), "builtin", name, ""), false);
        const auto b = to_json(make_document(hf_plus(k, p, q, deep), "builtin", name, ""), false);
        INFO(name);
        CHECK(a == b);
    }
}
