#pragma once

#include "bigint.hpp"
#include "curve_core.hpp"
#include "fp_analysis.hpp"
#include "modarith.hpp"
#include "psp.hpp"
#include "stats.hpp"

#include <json.hpp>

#include <cctype>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace ellpsp::io {

using nlohmann::json;

// Integers render as JSON numbers while they fit in int64, as decimal
// strings beyond that — consumers never face silently rounded values.
inline json int_json(const Int& v) {
    if (v >= std::numeric_limits<std::int64_t>::min() &&
        v <= std::numeric_limits<std::int64_t>::max())
        return v.convert_to<std::int64_t>();
    return v.str();
}

inline json ratio_json(const Ratio& r) {
    return json{{"num", int_json(boost::multiprecision::numerator(r))},
                {"den", int_json(boost::multiprecision::denominator(r))},
                {"approx", r.convert_to<double>()}};
}

inline std::string point_str(const ProjPoint& P) {
    return P.x.str() + ":" + P.y.str() + ":" + P.z.str() + " mod " + P.n.str();
}

inline json point_json(const ProjPoint& P) {
    return json{{"x", int_json(P.x)}, {"y", int_json(P.y)}, {"z", int_json(P.z)},
                {"n", int_json(P.n)}};
}

inline json curve_json(const Curve& E) {
    json j{{"A", int_json(E.A)}, {"B", int_json(E.B)}};
    j["d"] = E.cm_disc ? int_json(*E.cm_disc) : json(nullptr);
    return j;
}

inline json verdict_json(const std::string& test, const Curve& E, const Factorization& N,
                         const std::optional<ProjPoint>& P, const Verdict& v) {
    json j;
    j["test"] = test;
    j["N"] = int_json(N.n);
    j["curve"] = curve_json(E);
    j["point"] = P ? point_json(*P) : json(nullptr);
    j["passed"] = v.passed;
    j["reason"] = to_string(v.reason);
    j["s"] = v.s;
    j["t"] = int_json(v.t);
    if (v.hit_r) j["hit_r"] = *v.hit_r;
    if (v.bad_prime) j["bad_prime"] = int_json(*v.bad_prime);
    json trace = json::array();
    for (const TraceStep& step : v.trace)
        trace.push_back(json{{"r", step.r},
                             {"point", point_json(step.point)},
                             {"class", to_string(step.cls)}});
    j["trace"] = trace;
    return j;
}

// RFC-4180 quoting: fields containing separators, quotes, or line breaks
// are wrapped in double quotes with inner quotes doubled.
inline std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += "\"";
    return out;
}

inline std::string csv_row(const std::vector<std::string>& fields) {
    std::string out;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out += ",";
        out += csv_escape(fields[i]);
    }
    out += "\r\n";
    return out;
}

inline std::string verdict_csv_header() {
    return csv_row({"test", "N", "A", "B", "d", "point", "passed", "reason", "s", "t", "hit_r",
                    "trace"});
}

inline std::string verdict_csv(const std::string& test, const Curve& E, const Factorization& N,
                               const std::optional<ProjPoint>& P, const Verdict& v) {
    std::string trace;
    for (const TraceStep& step : v.trace) {
        if (!trace.empty()) trace += "; ";
        trace += "r=" + std::to_string(step.r) + " (" + step.point.x.str() + ":" +
                 step.point.y.str() + ":" + step.point.z.str() + ") " + to_string(step.cls);
    }
    return csv_row({test, N.n.str(), E.A.str(), E.B.str(),
                    E.cm_disc ? E.cm_disc->str() : std::string(), P ? point_str(*P) : std::string(),
                    v.passed ? "true" : "false", to_string(v.reason), std::to_string(v.s),
                    v.t.str(), v.hit_r ? std::to_string(*v.hit_r) : std::string(), trace});
}

inline json census_json(const CensusRecord& rec) {
    json j;
    j["p"] = rec.p;
    j["no_roots"] = rec.no_roots;
    j["one_root"] = rec.one_root;
    j["three_roots"] = rec.three_roots;
    j["singular"] = rec.singular;
    j["total"] = rec.total();
    j["no_roots_fraction"] = ratio_json(rec.no_roots_fraction());
    j["one_root_fraction"] = ratio_json(rec.one_root_fraction());
    j["three_roots_fraction"] = ratio_json(rec.three_roots_fraction());
    return j;
}

inline std::string census_csv_header() {
    return csv_row({"p", "no_roots", "one_root", "three_roots", "singular"});
}

inline std::string census_csv(const CensusRecord& rec) {
    return csv_row({std::to_string(rec.p), std::to_string(rec.no_roots),
                    std::to_string(rec.one_root), std::to_string(rec.three_roots),
                    std::to_string(rec.singular)});
}

inline json experiment_json(const ExperimentRecord& rec) {
    json j;
    j["seed"] = rec.seed;
    j["n"] = int_json(rec.n);
    j["p"] = int_json(rec.p);
    j["q"] = int_json(rec.q);
    j["samples"] = rec.sample_size;
    j["hits"] = rec.hits;
    j["observed"] = ratio_json(rec.observed);
    j["bound"] = ratio_json(rec.bound);
    j["mode"] = rec.mode == PointSet::AllPoints ? "all-points" : "snz-only";
    j["within_three_sigma"] = within_three_sigma(rec);
    return j;
}

inline json max_report_json(const MaxReport& rep) {
    json j;
    j["pass"] = rep.pass;
    j["cap"] = ratio_json(rep.cap);
    j["max_value"] = ratio_json(rep.max_value);
    j["pairs_checked"] = rep.pairs_checked;
    json att = json::array();
    for (const GridPoint& g : rep.attainers)
        att.push_back(json{{"s1", g.s1},
                           {"r1", g.r1},
                           {"q1", int_json(g.q1)},
                           {"s2", g.s2},
                           {"r2", g.r2},
                           {"q2", int_json(g.q2)},
                           {"value", ratio_json(g.value)}});
    j["attainers"] = att;
    if (rep.violation)
        j["violation"] = json{{"s1", rep.violation->s1}, {"r1", rep.violation->r1},
                              {"q1", int_json(rep.violation->q1)}, {"s2", rep.violation->s2},
                              {"r2", rep.violation->r2}, {"q2", int_json(rep.violation->q2)},
                              {"value", ratio_json(rep.violation->value)}};
    return j;
}

// ---- parsing -------------------------------------------------------------

inline Int parse_int(const std::string& s) {
    std::size_t i = 0;
    if (i < s.size() && (s[i] == '-' || s[i] == '+')) ++i;
    if (i == s.size())
        throw std::invalid_argument("parse_int: '" + s + "' is not an integer");
    for (; i < s.size(); ++i)
        if (!std::isdigit(static_cast<unsigned char>(s[i])))
            throw std::invalid_argument("parse_int: '" + s + "' is not an integer");
    // cpp_int's string constructor rejects an explicit leading plus.
    return Int(s[0] == '+' ? s.substr(1) : s);
}

inline std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    for (;;) {
        std::size_t pos = s.find(sep, start);
        if (pos == std::string::npos) {
            parts.push_back(s.substr(start));
            return parts;
        }
        parts.push_back(s.substr(start, pos - start));
        start = pos + 1;
    }
}

// "A,B" -> curve; the CM discriminant is attached by the caller.
inline Curve parse_curve(const std::string& s, std::optional<Int> d = std::nullopt) {
    std::vector<std::string> parts = split(s, ',');
    if (parts.size() != 2)
        throw std::invalid_argument("parse_curve: expected 'A,B', got '" + s + "'");
    return Curve{parse_int(parts[0]), parse_int(parts[1]), std::move(d)};
}

// Modulus as "N" (factored here by trial division) or "N=p1^e1*p2^e2*..."
// (validated against the stated N).
inline Factorization parse_modulus(const std::string& s) {
    std::size_t eq = s.find('=');
    if (eq == std::string::npos) return Factorization::of(parse_int(s));
    Int n = parse_int(s.substr(0, eq));
    std::vector<std::pair<Int, unsigned>> factors;
    for (const std::string& term : split(s.substr(eq + 1), '*')) {
        std::size_t caret = term.find('^');
        Int p = parse_int(caret == std::string::npos ? term : term.substr(0, caret));
        unsigned e = 1;
        if (caret != std::string::npos) {
            Int ee = parse_int(term.substr(caret + 1));
            if (ee < 1 || ee > 64) throw std::invalid_argument("parse_modulus: bad exponent");
            e = ee.convert_to<unsigned>();
        }
        factors.emplace_back(std::move(p), e);
    }
    Factorization f = Factorization::from_factors(std::move(factors));
    if (f.n != n)
        throw std::invalid_argument("parse_modulus: stated factorization multiplies to " +
                                    f.n.str() + ", not " + n.str());
    return f;
}

// "x,y" (affine) or "x:y:z" (projective), validated against curve and
// modulus by the caller via make_point.
struct PointSpec {
    Int x, y, z;
};

inline PointSpec parse_point(const std::string& s) {
    if (s.find(':') != std::string::npos) {
        std::vector<std::string> parts = split(s, ':');
        if (parts.size() != 3)
            throw std::invalid_argument("parse_point: expected 'x:y:z', got '" + s + "'");
        return {parse_int(parts[0]), parse_int(parts[1]), parse_int(parts[2])};
    }
    std::vector<std::string> parts = split(s, ',');
    if (parts.size() != 2)
        throw std::invalid_argument("parse_point: expected 'x,y' or 'x:y:z', got '" + s + "'");
    return {parse_int(parts[0]), parse_int(parts[1]), 1};
}

}  // namespace ellpsp::io
