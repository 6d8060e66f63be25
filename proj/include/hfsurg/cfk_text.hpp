/**
 * Line-oriented text format for knot complexes.
 *
 *   gen <name> <i> <j> [<maslov>]
 *   d <name> = <term> (+ <term>)*        term := [-]<int>*U^<n>*<name>
 *   flip <name> = [-]<name>
 *
 * '#' starts a comment.  "1*" and "U^0*" may be omitted from a term, "-"
 * may join terms, and U+2212 is accepted as a minus sign.
 */
#pragma once

#include <cctype>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "hfsurg/cfk.hpp"
#include "hfsurg/grading.hpp"

namespace hfsurg {

class ParseError : public std::runtime_error
{
    public:
        ParseError(std::size_t line, std::size_t column, const std::string& message)
            : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " +
                                 message),
              line_(line),
              column_(column)
        {
        }

        std::size_t line() const { return line_; }
        std::size_t column() const { return column_; }

    private:
        std::size_t line_;
        std::size_t column_;
};

namespace detail {

class LineScanner
{
    public:
        LineScanner(std::string text, std::size_t line) : text_(std::move(text)), line_(line) {}

        [[noreturn]] void fail(const std::string& message) const { throw ParseError(line_, pos_ + 1, message); }

        void skip_space()
        {
            while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t' || text_[pos_] == '\r'))
                ++pos_;
        }

        bool at_end()
        {
            skip_space();
            return pos_ >= text_.size();
        }

        bool accept(char c)
        {
            skip_space();
            if (pos_ < text_.size() && text_[pos_] == c) {
                ++pos_;
                return true;
            }
            return false;
        }

        void expect(char c)
        {
            if (!accept(c))
                fail(std::string("expected '") + c + "'");
        }

        bool accept_minus()
        {
            skip_space();
            if (accept('-'))
                return true;
            static const std::string unicode_minus = "\xE2\x88\x92";
            if (text_.compare(pos_, unicode_minus.size(), unicode_minus) == 0) {
                pos_ += unicode_minus.size();
                return true;
            }
            return false;
        }

        bool peek_digit()
        {
            skip_space();
            return pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]));
        }

        std::string identifier()
        {
            skip_space();
            const std::size_t start = pos_;
            if (pos_ >= text_.size() || !(std::isalpha(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
                fail("expected a generator name");
            while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
                                           text_[pos_] == '_' || text_[pos_] == '\''))
                ++pos_;
            return text_.substr(start, pos_ - start);
        }

        Integer natural()
        {
            skip_space();
            const std::size_t start = pos_;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
                ++pos_;
            if (start == pos_)
                fail("expected a number");
            return Integer(text_.substr(start, pos_ - start));
        }

        std::int64_t integer64()
        {
            skip_space();
            const std::size_t at = pos_;
            bool negative = accept_minus();
            Integer value = natural();
            if (negative)
                value = -value;
            if (value > std::numeric_limits<std::int64_t>::max() / 4 ||
                value < std::numeric_limits<std::int64_t>::min() / 4) {
                pos_ = at;
                fail("integer out of range");
            }
            return static_cast<std::int64_t>(value);
        }

        bool peek_u_power()
        {
            skip_space();
            return pos_ + 1 < text_.size() && text_[pos_] == 'U' && text_[pos_ + 1] == '^';
        }

        std::size_t column() const { return pos_ + 1; }

    private:
        std::string text_;
        std::size_t line_;
        std::size_t pos_ = 0;
};

}   // namespace detail

/// Syntax-only parse: no validation and no grading solve.
inline KnotComplex parse_syntax(std::string_view source)
{
    KnotComplex k;
    std::map<std::string, SignedName> flips;
    std::set<std::string> with_boundary;
    bool has_flip = false;

    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start <= source.size()) {
        std::size_t end = source.find('\n', start);
        if (end == std::string_view::npos)
            end = source.size();
        std::string line(source.substr(start, end - start));
        ++line_no;
        start = end + 1;
        if (auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);

        detail::LineScanner scan(line, line_no);
        if (scan.at_end())
            continue;
        const std::string keyword = scan.identifier();
        if (keyword == "gen") {
            Generator g;
            g.name = scan.identifier();
            if (scan.at_end())
                scan.fail("missing filtration level i");
            g.i = scan.integer64();
            if (scan.at_end())
                scan.fail("missing filtration level j");
            g.j = scan.integer64();
            if (!scan.at_end())
                g.m = scan.integer64();
            if (!scan.at_end())
                scan.fail("unexpected text after generator");
            if (k.find(g.name))
                throw ParseError(line_no, 1, "duplicate generator '" + g.name + "'");
            k.generators.push_back(g);
        } else if (keyword == "d") {
            const std::string name = scan.identifier();
            if (!with_boundary.insert(name).second)
                throw ParseError(line_no, 1, "second boundary line for '" + name + "'");
            scan.expect('=');
            if (scan.peek_digit()) {
                // "d x = 0" is an explicit zero boundary.
                detail::LineScanner probe = scan;
                if (probe.natural() == 0 && probe.at_end())
                    continue;
            }
            bool first = true;
            while (true) {
                bool negative = false;
                if (!first) {
                    if (scan.accept('+'))
                        negative = false;
                    else if (scan.accept_minus())
                        negative = true;
                    else
                        scan.fail("expected '+' or '-' between terms");
                }
                first = false;
                if (scan.accept_minus())
                    negative = !negative;
                Integer coefficient = 1;
                if (scan.peek_digit()) {
                    coefficient = scan.natural();
                    scan.expect('*');
                }
                std::int64_t power = 0;
                if (scan.peek_u_power()) {
                    scan.identifier();   // the 'U'
                    scan.expect('^');
                    power = scan.integer64();
                    if (power < 0)
                        scan.fail("U exponent must be nonnegative");
                    scan.expect('*');
                }
                const std::string target = scan.identifier();
                if (coefficient == 0)
                    scan.fail("zero coefficient");
                k.add_term(name, negative ? -coefficient : coefficient, power, target);
                if (scan.at_end())
                    break;
            }
        } else if (keyword == "flip") {
            has_flip = true;
            const std::string name = scan.identifier();
            scan.expect('=');
            int sign = scan.accept_minus() ? -1 : 1;
            const std::string target = scan.identifier();
            if (!scan.at_end())
                scan.fail("unexpected text after flip image");
            if (flips.count(name))
                throw ParseError(line_no, 1, "second flip line for '" + name + "'");
            flips[name] = {sign, target};
        } else {
            throw ParseError(line_no, 1, "unknown keyword '" + keyword + "'");
        }
    }

    if (has_flip) {
        // A one-sided flip entry determines its partner.
        std::map<std::string, SignedName> completed = flips;
        for (const auto& [name, image] : flips)
            if (!completed.count(image.name))
                completed[image.name] = {image.sign, name};
        k.flip = std::move(completed);
    }
    return k;
}

/**
 * Parses and validates a complex.  Gradings missing from the text are filled
 * in by grading_solve, with any given gradings as anchors; fully graded input
 * must already put the H(C{i >= 0}) tower bottom at 0.
 */
inline KnotComplex parse_text(std::string_view source)
{
    return grading_solve(parse_syntax(source));
}

namespace detail {

inline std::string format_term(const UTerm& t, bool leading)
{
    std::string out;
    Integer mag = abs(t.coefficient);
    if (t.coefficient < 0)
        out += leading ? "-" : "- ";
    else if (!leading)
        out += "+ ";
    if (mag != 1)
        out += mag.str() + "*";
    if (t.u_exponent != 0)
        out += "U^" + std::to_string(t.u_exponent) + "*";
    return out + t.target;
}

}   // namespace detail

inline std::string serialize_text(const KnotComplex& k)
{
    std::ostringstream out;
    for (const auto& g : k.generators) {
        out << "gen " << g.name << " " << g.i << " " << g.j;
        if (g.m)
            out << " " << *g.m;
        out << "\n";
    }
    for (const auto& g : k.generators) {
        const auto& terms = k.boundary_of(g.name);
        if (terms.empty())
            continue;
        out << "d " << g.name << " =";
        for (std::size_t t = 0; t < terms.size(); ++t)
            out << " " << detail::format_term(terms[t], t == 0);
        out << "\n";
    }
    if (k.flip) {
        for (const auto& g : k.generators) {
            auto it = k.flip->find(g.name);
            if (it == k.flip->end())
                continue;
            out << "flip " << g.name << " = " << (it->second.sign < 0 ? "-" : "") << it->second.name << "\n";
        }
    }
    return out.str();
}

}   // namespace hfsurg
