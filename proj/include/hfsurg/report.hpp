/**
 * Machine-readable surgery reports.  Every rational is written as an exact
 * "a/b" string, so parsing a report reproduces the values exactly.
 */
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "hfsurg/detect.hpp"
#include "hfsurg/numeric.hpp"
#include "hfsurg/surgery.hpp"

namespace hfsurg {

inline constexpr const char* tool_version = "1.0.0";

/// 64-bit FNV-1a digest of a byte string, as 16 hex digits.
inline std::string fnv1a_digest(std::string_view bytes)
{
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        hash ^= c;
        hash *= 0x100000001b3ULL;
    }
    static const char* hex = "0123456789abcdef";
    std::string out(16, '0');
    for (int k = 15; k >= 0; --k) {
        out[static_cast<std::size_t>(k)] = hex[hash & 0xf];
        hash >>= 4;
    }
    return out;
}

struct ReducedEntry
{
    Rational degree;
    std::size_t rank = 0;
    std::vector<Integer> torsion;

    bool operator==(const ReducedEntry&) const = default;
};

struct SpinRecord
{
    std::int64_t index = 0;
    Rational d;
    std::optional<std::vector<ReducedEntry>> hf_red;
    std::optional<std::size_t> even_rank;
    std::optional<std::size_t> odd_rank;
    std::int64_t sigma = 0;

    bool operator==(const SpinRecord&) const = default;
};

struct DiagnosticBlock
{
    std::size_t total_reduced_rank = 0;
    Rational d_deficit;
    Rational score;

    bool operator==(const DiagnosticBlock&) const = default;
};

struct OutputDocument
{
    std::string version = tool_version;
    std::string input_kind;    // "builtin" or "file"
    std::string input_name;    // built-in name or file path
    std::string input_digest;  // file digest; empty for built-ins
    std::int64_t p = 1;
    std::int64_t q = 1;
    bool orientation_reversed = false;
    std::vector<SpinRecord> records;
    std::optional<DiagnosticBlock> diagnostic;
    std::int64_t depth = 0;    // starting truncation depth of the run
    double seconds = 0;

    bool operator==(const OutputDocument&) const = default;
};

inline OutputDocument make_document(const HFResult& result, const std::string& kind, const std::string& name,
                                    const std::string& digest)
{
    OutputDocument doc;
    doc.input_kind = kind;
    doc.input_name = name;
    doc.input_digest = digest;
    doc.p = result.p;
    doc.q = result.q;
    doc.orientation_reversed = result.orientation_reversed;
    for (const auto& r : result.spin_c) {
        SpinRecord rec;
        rec.index = r.index;
        rec.d = r.d;
        rec.sigma = r.sigma;
        if (r.reduced) {
            std::vector<ReducedEntry> entries;
            for (const auto& [degree, g] : r.reduced->groups)
                entries.push_back({degree, g.free_rank, g.torsion});
            rec.hf_red = std::move(entries);
            rec.even_rank = r.even_rank;
            rec.odd_rank = r.odd_rank;
        }
        doc.records.push_back(std::move(rec));
    }
    if (!result.orientation_reversed && result.spin_c.size() == static_cast<std::size_t>(result.p)) {
        Diagnostic diag = diagnostic_from(result);
        doc.diagnostic = DiagnosticBlock{diag.total_reduced_rank, diag.d_deficit, diag.score};
    }
    if (!result.spin_c.empty())
        doc.depth = result.spin_c.front().depth;
    return doc;
}

inline nlohmann::json to_json(const OutputDocument& doc, bool with_timing = true)
{
    using nlohmann::json;
    json out;
    out["tool"] = {{"name", "hfsurg"}, {"version", doc.version}};
    json input = {{"kind", doc.input_kind}, {"name", doc.input_name}};
    if (!doc.input_digest.empty())
        input["digest"] = doc.input_digest;
    out["input"] = input;
    out["descriptor"] = {{"p", doc.p}, {"q", doc.q}};
    out["orientation"] = doc.orientation_reversed ? "reversed" : "standard";
    json records = json::array();
    for (const auto& r : doc.records) {
        json rec = {{"index", r.index}, {"d", fraction_string(r.d)}, {"sigma", r.sigma}};
        if (r.hf_red) {
            json groups = json::array();
            for (const auto& e : *r.hf_red) {
                json torsion = json::array();
                for (const auto& t : e.torsion)
                    torsion.push_back(t.str());
                groups.push_back({{"degree", fraction_string(e.degree)}, {"rank", e.rank}, {"torsion", torsion}});
            }
            rec["hf_red"] = groups;
            rec["parity"] = {{"even", *r.even_rank}, {"odd", *r.odd_rank}};
        } else {
            rec["hf_red"] = nullptr;
        }
        records.push_back(rec);
    }
    out["spin_c"] = records;
    if (doc.diagnostic) {
        out["diagnostic"] = {{"total_reduced_rank", doc.diagnostic->total_reduced_rank},
                             {"d_deficit", fraction_string(doc.diagnostic->d_deficit)},
                             {"score", fraction_string(doc.diagnostic->score)}};
    } else {
        out["diagnostic"] = nullptr;
    }
    if (with_timing)
        out["timing"] = {{"seconds", doc.seconds}, {"depth", doc.depth}};
    return out;
}

inline OutputDocument document_from_json(const nlohmann::json& j)
{
    OutputDocument doc;
    doc.version = j.at("tool").at("version").get<std::string>();
    doc.input_kind = j.at("input").at("kind").get<std::string>();
    doc.input_name = j.at("input").at("name").get<std::string>();
    if (j.at("input").contains("digest"))
        doc.input_digest = j.at("input").at("digest").get<std::string>();
    doc.p = j.at("descriptor").at("p").get<std::int64_t>();
    doc.q = j.at("descriptor").at("q").get<std::int64_t>();
    doc.orientation_reversed = j.at("orientation").get<std::string>() == "reversed";
    for (const auto& rec : j.at("spin_c")) {
        SpinRecord r;
        r.index = rec.at("index").get<std::int64_t>();
        r.d = parse_fraction(rec.at("d").get<std::string>());
        r.sigma = rec.at("sigma").get<std::int64_t>();
        if (!rec.at("hf_red").is_null()) {
            std::vector<ReducedEntry> entries;
            for (const auto& e : rec.at("hf_red")) {
                ReducedEntry entry;
                entry.degree = parse_fraction(e.at("degree").get<std::string>());
                entry.rank = e.at("rank").get<std::size_t>();
                for (const auto& t : e.at("torsion"))
                    entry.torsion.emplace_back(t.get<std::string>());
                entries.push_back(std::move(entry));
            }
            r.hf_red = std::move(entries);
            r.even_rank = rec.at("parity").at("even").get<std::size_t>();
            r.odd_rank = rec.at("parity").at("odd").get<std::size_t>();
        }
        doc.records.push_back(std::move(r));
    }
    if (!j.at("diagnostic").is_null()) {
        const auto& d = j.at("diagnostic");
        doc.diagnostic = DiagnosticBlock{d.at("total_reduced_rank").get<std::size_t>(),
                                         parse_fraction(d.at("d_deficit").get<std::string>()),
                                         parse_fraction(d.at("score").get<std::string>())};
    }
    if (j.contains("timing")) {
        doc.seconds = j.at("timing").at("seconds").get<double>();
        doc.depth = j.at("timing").at("depth").get<std::int64_t>();
    }
    return doc;
}

inline std::string emit(const OutputDocument& doc) { return to_json(doc).dump(2); }

inline OutputDocument parse_document(const std::string& text)
{
    return document_from_json(nlohmann::json::parse(text));
}

}   // namespace hfsurg
