// Command-line front end for the surgery calculator.
//
// Exit status: 0 success, 1 computation error, 2 usage or parse error.

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "hfsurg/hfsurg.hpp"
#include "hfsurg/report.hpp"

namespace {

using namespace hfsurg;

class UsageError : public std::runtime_error
{
    public:
        using std::runtime_error::runtime_error;
};

struct LoadedKnot
{
    KnotComplex complex;
    std::string kind;
    std::string name;
    std::string digest;
};

std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw UsageError("no built-in knot or readable file named '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

LoadedKnot load_knot(const std::string& spec)
{
    if (is_builtin(spec))
        return {builtin(spec), "builtin", spec, ""};
    const std::string text = read_file(spec);
    try {
        return {parse_text(text), "file", spec, "fnv1a64:" + fnv1a_digest(text)};
    } catch (const KnotError& e) {
        throw UsageError(spec + ": " + e.what());
    }
}

struct Slope
{
    std::int64_t p;
    std::int64_t q;
};

Slope parse_slope(const std::string& text)
{
    const auto slash = text.find('/');
    const std::string num = text.substr(0, slash);
    const std::string den = slash == std::string::npos ? "1" : text.substr(slash + 1);
    Integer p, q;
    try {
        if (num.find('/') != std::string::npos || den.find('/') != std::string::npos)
            throw std::invalid_argument(text);
        p = boost::multiprecision::numerator(parse_fraction(num));
        q = boost::multiprecision::numerator(parse_fraction(den));
    } catch (const std::invalid_argument&) {
        throw UsageError("malformed slope '" + text + "' (expected p/q)");
    }
    if (q == 0)
        throw UsageError("slope denominator must be nonzero");
    if (q < 0) {
        p = -p;
        q = -q;
    }
    if (p == 0)
        throw UsageError("slope must be nonzero");
    if (boost::multiprecision::gcd(p, q) != 1)
        throw UsageError("slope must be in lowest terms");
    if (abs(p) > 100000 || q > 100000)
        throw UsageError("slope is too large");
    return {static_cast<std::int64_t>(p), static_cast<std::int64_t>(q)};
}

std::string pretty(const Rational& r)
{
    if (is_integer(r))
        return boost::multiprecision::numerator(r).str();
    return fraction_string(r);
}

std::string pretty_group(const std::vector<ReducedEntry>& entries)
{
    if (entries.empty())
        return "0";
    std::string out;
    for (const auto& e : entries) {
        if (!out.empty())
            out += " + ";
        if (e.rank > 0)
            out += "Z" + (e.rank > 1 ? "^" + std::to_string(e.rank) : std::string()) + "(" + pretty(e.degree) + ")";
        for (std::size_t k = 0; k < e.torsion.size(); ++k)
            out += (e.rank > 0 || k > 0 ? " + " : "") + std::string("Z/") + e.torsion[k].str() + "(" +
                   pretty(e.degree) + ")";
    }
    return out;
}

void print_complex(const KnotComplex& k)
{
    std::cout << serialize_text(k);
}

void print_hfk(const KnotComplex& k)
{
    std::set<std::int64_t> levels;
    for (const auto& g : k.generators)
        levels.insert(g.j - g.i);
    std::cout << std::left << std::setw(8) << "s" << "HFK-hat(K, s)\n";
    for (auto it = levels.rbegin(); it != levels.rend(); ++it)
        std::cout << std::setw(8) << *it << describe(hfk_hat(k, *it)) << "\n";
    std::cout << "genus = " << genus(k) << "\n";
    std::cout << "Alexander polynomial = " << alexander_polynomial(k).str() << "\n";
}

void print_result(const OutputDocument& doc)
{
    std::cout << "S^3_{" << doc.p << "/" << doc.q << "}(" << doc.input_name << ")";
    if (doc.orientation_reversed)
        std::cout << "  [orientation reversed: only d is reported]";
    std::cout << "\n";
    std::cout << std::left << std::setw(8) << "spin^c" << std::setw(12) << "d";
    if (!doc.orientation_reversed)
        std::cout << std::setw(10) << "even/odd" << "HF_red";
    std::cout << "\n";
    for (const auto& r : doc.records) {
        std::cout << std::setw(8) << r.index << std::setw(12) << pretty(r.d);
        if (r.hf_red)
            std::cout << std::setw(10) << (std::to_string(*r.even_rank) + "/" + std::to_string(*r.odd_rank))
                      << pretty_group(*r.hf_red);
        std::cout << "\n";
    }
}

void print_diagnostic(const Diagnostic& d)
{
    std::cout << "slope            " << d.p << "/" << d.q << "\n";
    std::cout << "reduced rank     " << d.total_reduced_rank << "\n";
    std::cout << "d deficit        " << pretty(d.d_deficit) << "\n";
    std::cout << "score = " << pretty(d.score);
    if (d.score == d.q)
        std::cout << " (= q)";
    else if (d.score >= 2 * d.q)
        std::cout << " (>= 2q)";
    else
        std::cout << " (q = " << d.q << ")";
    if (!d.integral())
        std::cout << "  [not an integer]";
    std::cout << "\n";
}

SurgeryOptions surgery_options(int depth)
{
    SurgeryOptions options;
    if (depth > 0) {
        options.depth = depth;
    } else if (const char* env = std::getenv("HFSURG_DEPTH"); env != nullptr && *env != '\0') {
        try {
            options.depth = std::stoll(env);
        } catch (const std::exception&) {
            throw UsageError("HFSURG_DEPTH must be a positive integer");
        }
        if (*options.depth <= 0)
            throw UsageError("HFSURG_DEPTH must be a positive integer");
    }
    return options;
}

int run(int argc, char** argv)
{
    CLI::App app{"Heegaard Floer homology of Dehn surgeries on knots in S^3"};
    app.require_subcommand(1);

    auto* knots = app.add_subcommand("knots", "List the built-in knot complexes");

    std::string knot_a, knot_b, slope_text, spin_text = "all", file;
    bool json = false;
    int depth = 0;

    auto* show = app.add_subcommand("show", "Print a knot complex");
    show->add_option("knot", knot_a, "built-in name or complex file")->required();

    auto* hfk = app.add_subcommand("hfk", "Print HFK-hat, genus and Alexander polynomial");
    hfk->add_option("knot", knot_a, "built-in name or complex file")->required();

    auto* surgery = app.add_subcommand("surgery", "Compute HF+ of p/q surgery");
    surgery->add_option("knot", knot_a, "built-in name or complex file")->required();
    surgery->add_option("slope", slope_text, "surgery slope p/q")->required();
    surgery->add_flag("--json", json, "print a JSON document");
    surgery->add_option("--spin", spin_text, "spin^c index or 'all'");
    surgery->add_option("--depth", depth, "starting U-truncation depth")->check(CLI::PositiveNumber);

    auto* diagnose = app.add_subcommand("diagnose", "Print the rank / d-invariant diagnostic");
    diagnose->add_option("knot", knot_a, "built-in name or complex file")->required();
    diagnose->add_option("slope", slope_text, "surgery slope p/q")->required();
    diagnose->add_option("--depth", depth, "starting U-truncation depth")->check(CLI::PositiveNumber);

    auto* classify = app.add_subcommand("classify", "Decide whether the surgery comes from a trefoil, figure eight or unknot");
    classify->add_option("knot", knot_a, "built-in name or complex file")->required();
    classify->add_option("slope", slope_text, "surgery slope p/q")->required();
    classify->add_option("--depth", depth, "starting U-truncation depth")->check(CLI::PositiveNumber);

    auto* cmp = app.add_subcommand("compare", "Compare the surgeries on two knots");
    cmp->add_option("a", knot_a, "first knot")->required();
    cmp->add_option("b", knot_b, "second knot")->required();
    cmp->add_option("slope", slope_text, "surgery slope p/q")->required();
    cmp->add_option("--depth", depth, "starting U-truncation depth")->check(CLI::PositiveNumber);

    auto* validate_cmd = app.add_subcommand("validate", "Check a complex file against every axiom");
    validate_cmd->add_option("file", file, "complex file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    if (knots->parsed()) {
        for (const auto& name : builtin_names())
            std::cout << name << "\n";
        return 0;
    }
    if (show->parsed()) {
        print_complex(load_knot(knot_a).complex);
        return 0;
    }
    if (hfk->parsed()) {
        print_hfk(load_knot(knot_a).complex);
        return 0;
    }
    if (validate_cmd->parsed()) {
        KnotComplex k = parse_syntax(read_file(file));
        ValidationReport report = validate(k);
        if (report.ok()) {
            try {
                grading_solve(k);
            } catch (const std::exception& e) {
                report.violations.push_back(std::string("grading: ") + e.what());
            }
        }
        if (report.ok()) {
            std::cout << "valid\n";
            return 0;
        }
        for (const auto& v : report.violations)
            std::cout << v << "\n";
        return 1;
    }

    const Slope slope = parse_slope(slope_text);
    SurgeryOptions options = surgery_options(depth);

    if (surgery->parsed()) {
        if (spin_text != "all") {
            try {
                std::size_t used = 0;
                options.only_spin = std::stoll(spin_text, &used);
                if (used != spin_text.size())
                    throw std::invalid_argument(spin_text);
            } catch (const std::exception&) {
                throw UsageError("--spin expects an integer or 'all'");
            }
        }
        LoadedKnot knot = load_knot(knot_a);
        const auto start = std::chrono::steady_clock::now();
        HFResult result = hf_plus(knot.complex, slope.p, slope.q, options);
        OutputDocument doc = make_document(result, knot.kind, knot.name, knot.digest);
        doc.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (json)
            std::cout << emit(doc) << "\n";
        else
            print_result(doc);
        return 0;
    }
    if (slope.p < 0 && (diagnose->parsed() || classify->parsed()))
        throw UsageError("this command needs a positive slope");
    if (diagnose->parsed()) {
        print_diagnostic(diagnostic_sum(load_knot(knot_a).complex, slope.p, slope.q, options));
        return 0;
    }
    if (classify->parsed()) {
        Classification c = classify_surgery(load_knot(knot_a).complex, slope.p, slope.q, options);
        print_diagnostic(c.diagnostic);
        if (c.kernel_rank)
            std::cout << "rank ker v_0     " << *c.kernel_rank << "\n";
        std::cout << "verdict: " << to_string(c.verdict) << "\n";
        return 0;
    }
    if (cmp->parsed()) {
        HFResult a = hf_plus(load_knot(knot_a).complex, slope.p, slope.q, options);
        HFResult b = hf_plus(load_knot(knot_b).complex, slope.p, slope.q, options);
        Comparison c = compare(a, b);
        if (c.isomorphic)
            std::cout << "graded_isomorphic\n";
        else
            std::cout << "distinct: " << c.witness << "\n";
        return 0;
    }
    return 2;
}

}   // namespace

int main(int argc, char** argv)
{
    try {
        return run(argc, argv);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
