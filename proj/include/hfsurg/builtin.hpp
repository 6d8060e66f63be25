/**
 * Built-in knot complexes: unknot, both trefoils, figure eight, T(2,5).
 */
#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "hfsurg/cfk.hpp"
#include "hfsurg/cfk_text.hpp"

namespace hfsurg {

inline const std::vector<std::string>& builtin_names()
{
    static const std::vector<std::string> names{"unknot", "trefoil_right", "trefoil_left", "figure_eight",
                                                "torus_2_5"};
    return names;
}

inline bool is_builtin(std::string_view name)
{
    for (const auto& n : builtin_names())
        if (n == name)
            return true;
    return false;
}

namespace detail {

inline std::string_view builtin_source(std::string_view name)
{
    if (name == "unknot")
        return "gen a 0 0\n"
               "flip a = a\n";
    if (name == "trefoil_right")
        return "gen a -1 0\n"
               "gen b 0 0\n"
               "gen c 0 -1\n"
               "d b = a + c\n"
               "flip a = c\n"
               "flip b = b\n";
    if (name == "trefoil_left")
        return "gen a 0 1\n"
               "gen b 0 0\n"
               "gen c 1 0\n"
               "d a = b\n"
               "d c = b\n"
               "flip a = c\n"
               "flip b = b\n";
    // The box a, b, c, d is acyclic, so its grading relative to e is not
    // forced by the differential; d is pinned to degree 0.
    if (name == "figure_eight")
        return "gen a 1 1\n"
               "gen b 0 1\n"
               "gen c 1 0\n"
               "gen d 0 0 0\n"
               "gen e 0 0\n"
               "d a = b + c\n"
               "d b = d\n"
               "d c = -d\n"
               "flip a = a\n"
               "flip b = c\n"
               "flip d = -d\n"
               "flip e = e\n";
    if (name == "torus_2_5")
        return "gen a -2 0\n"
               "gen b -1 0\n"
               "gen c -1 -1\n"
               "gen d 0 -1\n"
               "gen e 0 -2\n"
               "d b = a + c\n"
               "d d = c + e\n"
               "flip a = e\n"
               "flip b = d\n"
               "flip c = c\n";
    throw KnotError("unknown built-in knot '" + std::string(name) + "'");
}

}   // namespace detail

inline KnotComplex builtin(std::string_view name)
{
    return parse_text(detail::builtin_source(name));
}

}   // namespace hfsurg
