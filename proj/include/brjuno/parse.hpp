#pragma once

#include <optional>
#include <regex>
#include <stdexcept>
#include <string>

#include "brjuno/exact_real.hpp"

namespace brjuno {

namespace detail {

inline std::string normalize_literal(std::string s) {
    std::string out;
    out.reserve(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        const unsigned char c = static_cast<unsigned char>(s[i]);
        if (c == ' ' || c == '\t') continue;
        // U+2212 minus sign
        if (c == 0xE2 && i + 2 < s.size() && static_cast<unsigned char>(s[i + 1]) == 0x88 &&
            static_cast<unsigned char>(s[i + 2]) == 0x92) {
            out += '-';
            i += 2;
            continue;
        }
        out += s[i];
    }
    return out;
}

}  // namespace detail

/// Parses "p/q", integers, "(a+b*sqrt(d))/c", decimals (exactly, via powers of
/// ten), and the named constants g, G, gamma, Gamma, alphahat(a).
inline std::optional<ExactReal> try_parse_exact(const std::string& raw) {
    const std::string s = detail::normalize_literal(raw);
    if (s == "g") return golden();
    if (s == "G") return golden_inverse();
    if (s == "gamma") return silver();
    if (s == "Gamma") return silver_inverse();

    static const std::regex alphahat_re(R"(^alphahat\((\d+)\)$)");
    static const std::regex rational_re(R"(^([+-]?\d+)(?:/([+-]?\d+))?$)");
    static const std::regex surd_re(
        R"(^\(([+-]?\d+)([+-])(\d+)\*?sqrt\((\d+)\)\)(?:/([+-]?\d+))?$)");
    static const std::regex decimal_re(R"(^([+-]?)(\d*)\.(\d+)$)");

    std::smatch m;
    if (std::regex_match(s, m, alphahat_re)) return lsc_alpha(std::stol(m[1].str()));
    if (std::regex_match(s, m, rational_re)) {
        const BigInt num(m[1].str());
        const BigInt den = m[2].matched ? BigInt(m[2].str()) : BigInt(1);
        if (den == 0) throw std::invalid_argument("literal: zero denominator");
        return ExactReal(num, den);
    }
    if (std::regex_match(s, m, surd_re)) {
        const BigInt a(m[1].str());
        BigInt b(m[3].str());
        if (m[2].str() == "-") b = -b;
        const BigInt d(m[4].str());
        const BigInt c = m[5].matched ? BigInt(m[5].str()) : BigInt(1);
        return ExactReal::surd(a, b, c, d);
    }
    if (std::regex_match(s, m, decimal_re)) {
        const std::string ipart = m[2].matched ? m[2].str() : std::string("0");
        const std::string fpart = m[3].str();
        BigInt scale(1);
        for (std::size_t i = 0; i < fpart.size(); ++i) scale *= 10;
        BigInt num = BigInt(ipart.empty() ? "0" : ipart) * scale + BigInt(fpart);
        if (m[1].str() == "-") num = -num;
        return ExactReal(num, scale);
    }
    return std::nullopt;
}

inline ExactReal parse_exact_literal(const std::string& s) {
    auto v = try_parse_exact(s);
    if (!v) throw std::invalid_argument("unparsable exact literal: " + s);
    return *v;
}

/// A point on the line: surd/rational/named literals stay exact, plain
/// decimals route to the float path (the double closest to the decimal).
struct PointLiteral {
    std::optional<ExactReal> exact;
    double value = 0;

    bool is_exact() const { return exact.has_value(); }
};

inline PointLiteral parse_point_literal(const std::string& raw) {
    const std::string s = detail::normalize_literal(raw);
    static const std::regex decimal_re(R"(^([+-]?)(\d*)\.(\d+)([eE][+-]?\d+)?$)");
    std::smatch m;
    if (std::regex_match(s, m, decimal_re)) {
        PointLiteral p;
        p.value = std::stod(s);
        return p;
    }
    PointLiteral p;
    p.exact = parse_exact_literal(s);
    p.value = to_real<double>(*p.exact);
    return p;
}

}  // namespace brjuno
