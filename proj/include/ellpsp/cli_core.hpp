#pragma once

#include "io.hpp"

#include <CLI11.hpp>

#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace ellpsp::cli {

// Everything a run needs, assembled from the command line before any
// arithmetic happens. String-typed fields hold the raw spellings; parsing
// into exact types is the first thing each command handler does, so a
// malformed value is a clean configuration error (exit 2), never a crash.
struct RunConfig {
    std::string command;
    std::string flavor = "g";
    std::string curve;         // "A,B"
    std::string d;             // CM discriminant; empty = not supplied
    std::string modulus;       // "N" or "N=p1^e1*p2^e2"
    std::string point;         // "x,y" or "x:y:z"; empty = not supplied
    bool all_points = false;
    bool snz_only = false;
    bool check_torsion = false;
    std::string format = "json";
    std::string range_min = "9";
    std::string range_max;
    u64 census_p = 0;
    std::string h_spec;        // "s,r"
    std::string h_prime_spec;  // "s,r,t,w"
    bool bound_check = false;
    bool snz = false;
    u64 samples = 10000;
    u64 seed = 0;
    bool seed_given = false;
    std::string theorem;
    unsigned grid = 8;
    unsigned tw = 9;
};

namespace detail {

inline Flavor parse_flavor(const std::string& s) {
    if (s == "g") return Flavor::G;
    if (s == "strong-g") return Flavor::StrongG;
    if (s == "s") return Flavor::S;
    if (s == "strong-s") return Flavor::StrongS;
    throw std::invalid_argument("unknown flavor '" + s + "'");
}

inline std::optional<Int> parse_d(const RunConfig& cfg) {
    if (cfg.d.empty()) return std::nullopt;
    Int d = io::parse_int(cfg.d);
    if (d < 1) throw std::invalid_argument("--d must be positive");
    return d;
}

inline std::vector<Int> parse_csv_ints(const std::string& s, std::size_t want,
                                       const char* what) {
    std::vector<std::string> parts = io::split(s, ',');
    if (parts.size() != want)
        throw std::invalid_argument(std::string(what) + ": expected " + std::to_string(want) +
                                    " comma-separated integers, got '" + s + "'");
    std::vector<Int> out;
    for (const std::string& part : parts) out.push_back(io::parse_int(part));
    return out;
}

inline int cmd_test(const RunConfig& cfg, std::ostream& out) {
    Flavor flavor = parse_flavor(cfg.flavor);
    Curve E = io::parse_curve(cfg.curve, parse_d(cfg));
    Factorization N = io::parse_modulus(cfg.modulus);
    int selections = int(!cfg.point.empty()) + int(cfg.all_points) + int(cfg.snz_only);
    if (selections != 1)
        throw std::invalid_argument(
            "choose exactly one of --point, --all-points, --snz-only");
    if (is_g_flavor(flavor) && !E.cm_disc)
        throw std::invalid_argument("flavor '" + cfg.flavor + "' requires --d");

    const std::string test_name = to_string(flavor);
    if (!cfg.point.empty()) {
        io::PointSpec spec = io::parse_point(cfg.point);
        if (cfg.check_torsion) {
            if (spec.z != 1)
                throw std::invalid_argument("--check-torsion needs an affine --point x,y");
            if (!is_nontorsion_rational(E, Ratio(spec.x), Ratio(spec.y)))
                throw std::invalid_argument("--check-torsion: point is rational torsion");
        }
        ProjPoint P = make_point(E, N, spec.x, spec.y, spec.z);
        Verdict v = point_test(E, N, P, flavor);
        if (cfg.format == "csv") {
            out << io::verdict_csv_header() << io::verdict_csv(test_name, E, N, P, v);
        } else {
            out << io::verdict_json(test_name, E, N, P, v).dump(2) << "\n";
        }
        return 0;
    }

    PointSet mode = cfg.snz_only ? PointSet::StronglyNonZeroOnly : PointSet::AllPoints;
    CarmichaelResult res = carmichael_test(E, N, flavor, mode);
    const char* mode_name = cfg.snz_only ? "snz-only" : "all-points";
    if (cfg.format == "csv") {
        out << io::csv_row({"test", "N", "A", "B", "d", "mode", "value", "gate_failure",
                            "witness", "points_checked"})
            << io::csv_row({"carmichael-" + test_name, N.n.str(), E.A.str(), E.B.str(),
                            E.cm_disc ? E.cm_disc->str() : std::string(), mode_name,
                            res.value ? "true" : "false",
                            res.gate_failure ? to_string(*res.gate_failure) : std::string(),
                            res.witness ? io::point_str(*res.witness) : std::string(),
                            std::to_string(res.points_checked)});
    } else {
        io::json j;
        j["test"] = "carmichael-" + test_name;
        j["N"] = io::int_json(N.n);
        j["curve"] = io::curve_json(E);
        j["mode"] = mode_name;
        j["value"] = res.value;
        j["gate_failure"] = res.gate_failure ? io::json(to_string(*res.gate_failure))
                                             : io::json(nullptr);
        j["witness"] = res.witness ? io::point_json(*res.witness) : io::json(nullptr);
        j["points_checked"] = res.points_checked;
        out << j.dump(2) << "\n";
    }
    return 0;
}

inline int cmd_search(const RunConfig& cfg, std::ostream& out) {
    Flavor flavor = parse_flavor(cfg.flavor);
    Curve E = io::parse_curve(cfg.curve, parse_d(cfg));
    if (is_g_flavor(flavor) && !E.cm_disc)
        throw std::invalid_argument("flavor '" + cfg.flavor + "' requires --d");
    if (cfg.point.empty()) throw std::invalid_argument("search requires --point x,y");
    io::PointSpec spec = io::parse_point(cfg.point);
    if (spec.z != 1) throw std::invalid_argument("search point must be affine x,y");
    if (spec.y * spec.y != spec.x * spec.x * spec.x + E.A * spec.x + E.B)
        throw std::invalid_argument("search point does not satisfy the curve equation over Z");
    Int lo = io::parse_int(cfg.range_min);
    Int hi = io::parse_int(cfg.range_max);
    if (lo < 9) lo = 9;
    if (hi < lo) throw std::invalid_argument("search range is empty");

    struct Hit {
        Int n;
        Verdict v;
    };
    std::vector<Hit> hits;
    for (Int n = lo % 2 == 0 ? lo + 1 : lo; n <= hi; n += 2) {
        if (is_probable_prime(n)) continue;
        Factorization N = Factorization::of(n);
        ProjPoint P = make_point(E, N, spec.x, spec.y, 1);
        Verdict v = point_test(E, N, P, flavor);
        if (v.passed) hits.push_back({n, std::move(v)});
    }

    if (cfg.format == "csv") {
        out << io::csv_row({"N", "reason", "s", "t"});
        for (const Hit& h : hits)
            out << io::csv_row(
                {h.n.str(), to_string(h.v.reason), std::to_string(h.v.s), h.v.t.str()});
    } else {
        io::json j;
        j["search"] = to_string(flavor);
        j["curve"] = io::curve_json(E);
        j["point"] = cfg.point;
        j["min"] = io::int_json(lo);
        j["max"] = io::int_json(hi);
        io::json arr = io::json::array();
        for (const Hit& h : hits)
            arr.push_back(io::json{{"N", io::int_json(h.n)},
                                   {"reason", to_string(h.v.reason)},
                                   {"s", h.v.s},
                                   {"t", io::int_json(h.v.t)}});
        j["hits"] = arr;
        j["count"] = hits.size();
        out << j.dump(2) << "\n";
    }
    return 0;
}

inline int cmd_census(const RunConfig& cfg, std::ostream& out) {
    CensusRecord rec = curve_census(cfg.census_p);
    if (cfg.format == "csv")
        out << io::census_csv_header() << io::census_csv(rec);
    else
        out << io::census_json(rec).dump(2) << "\n";
    return 0;
}

inline int cmd_stats(const RunConfig& cfg, std::ostream& out) {
    int selections = int(!cfg.h_spec.empty()) + int(!cfg.h_prime_spec.empty()) +
                     int(cfg.bound_check);
    if (selections != 1)
        throw std::invalid_argument("choose exactly one of --h, --h-prime, --bound-check");

    auto emit_vector = [&](const char* name, const HVector& v, const io::json& params) {
        if (cfg.format == "csv") {
            out << io::csv_row({"x", "num", "den"});
            for (std::size_t x = 0; x < v.size(); ++x)
                out << io::csv_row({std::to_string(x),
                                    boost::multiprecision::numerator(v[x]).str(),
                                    boost::multiprecision::denominator(v[x]).str()});
        } else {
            io::json j;
            j["statistic"] = name;
            j["params"] = params;
            io::json arr = io::json::array();
            for (std::size_t x = 0; x < v.size(); ++x) arr.push_back(io::ratio_json(v[x]));
            j["entries"] = arr;
            out << j.dump(2) << "\n";
        }
    };

    if (!cfg.h_spec.empty()) {
        std::vector<Int> sr = parse_csv_ints(cfg.h_spec, 2, "--h");
        if (sr[0] < 0 || sr[1] < 0 || sr[1] > 64) throw std::invalid_argument("--h: bad s,r");
        HVector v = h_vector(sr[0].convert_to<unsigned>(), sr[1].convert_to<unsigned>());
        emit_vector("h", v, io::json{{"s", io::int_json(sr[0])}, {"r", io::int_json(sr[1])}});
        return 0;
    }
    if (!cfg.h_prime_spec.empty()) {
        std::vector<Int> srtw = parse_csv_ints(cfg.h_prime_spec, 4, "--h-prime");
        if (srtw[0] < 0 || srtw[1] < 0 || srtw[1] > 64)
            throw std::invalid_argument("--h-prime: bad s,r");
        HVector v = h_prime_vector(srtw[0].convert_to<unsigned>(),
                                   srtw[1].convert_to<unsigned>(), srtw[2], srtw[3]);
        emit_vector("h-prime", v,
                    io::json{{"s", io::int_json(srtw[0])},
                             {"r", io::int_json(srtw[1])},
                             {"t", io::int_json(srtw[2])},
                             {"w", io::int_json(srtw[3])}});
        return 0;
    }

    // --bound-check
    if (!cfg.seed_given)
        throw std::invalid_argument("--bound-check requires an explicit --seed");
    if (cfg.modulus.empty()) throw std::invalid_argument("--bound-check requires --n");
    Factorization N = io::parse_modulus(cfg.modulus);
    if (N.distinct_primes() != 2 || !N.is_squarefree())
        throw std::invalid_argument("--bound-check needs N = p*q with distinct odd primes");
    PointSet mode = cfg.snz ? PointSet::StronglyNonZeroOnly : PointSet::AllPoints;
    ExperimentRecord rec = random_curve_bound_check(N, N.factors[0].first, N.factors[1].first,
                                                    cfg.samples, cfg.seed, mode);
    if (cfg.format == "csv") {
        out << io::csv_row({"seed", "n", "p", "q", "samples", "hits", "observed_num",
                            "observed_den", "bound_num", "bound_den", "mode",
                            "within_three_sigma"})
            << io::csv_row(
                   {std::to_string(rec.seed), rec.n.str(), rec.p.str(), rec.q.str(),
                    std::to_string(rec.sample_size), std::to_string(rec.hits),
                    boost::multiprecision::numerator(rec.observed).str(),
                    boost::multiprecision::denominator(rec.observed).str(),
                    boost::multiprecision::numerator(rec.bound).str(),
                    boost::multiprecision::denominator(rec.bound).str(),
                    rec.mode == PointSet::AllPoints ? "all-points" : "snz-only",
                    within_three_sigma(rec) ? "true" : "false"});
    } else {
        // one JSONL line per experiment record
        out << io::experiment_json(rec).dump() << "\n";
    }
    return 0;
}

inline int cmd_verify(const RunConfig& cfg, std::ostream& out) {
    MaxReport rep;
    if (cfg.theorem == "max-h") {
        rep = verify_max_h(cfg.grid);
    } else if (cfg.theorem == "max-h-prime") {
        rep = verify_max_h_prime(cfg.grid, cfg.tw);
    } else {
        throw std::invalid_argument("--theorem must be max-h or max-h-prime");
    }
    if (cfg.format == "csv") {
        out << io::csv_row({"theorem", "grid", "tw", "pass", "max_num", "max_den", "cap_num",
                            "cap_den", "pairs_checked"})
            << io::csv_row({cfg.theorem, std::to_string(cfg.grid),
                            cfg.theorem == "max-h-prime" ? std::to_string(cfg.tw) : std::string(),
                            rep.pass ? "true" : "false",
                            boost::multiprecision::numerator(rep.max_value).str(),
                            boost::multiprecision::denominator(rep.max_value).str(),
                            boost::multiprecision::numerator(rep.cap).str(),
                            boost::multiprecision::denominator(rep.cap).str(),
                            std::to_string(rep.pairs_checked)});
    } else {
        io::json j = io::max_report_json(rep);
        j["theorem"] = cfg.theorem;
        j["grid"] = cfg.grid;
        if (cfg.theorem == "max-h-prime") j["tw"] = cfg.tw;
        out << j.dump(2) << "\n";
    }
    return 0;
}

}  // namespace detail

// In-process entry point: parse args (without the program name), run the
// requested command, write results to `out` and diagnostics to `err`.
// Returns the process exit code: 0 for a completed run (whatever the
// mathematical verdicts), 2 for configuration errors, 3 when an enumeration
// cap is exceeded.
inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    RunConfig cfg;
    CLI::App app{"elliptic curve arithmetic over Z/N, pseudoprime tests, and exact "
                 "point statistics"};
    app.require_subcommand(1);

    CLI::App* test = app.add_subcommand("test", "run one pseudoprime test or a whole-group "
                                                "sweep");
    test->add_option("--flavor", cfg.flavor, "g | strong-g | s | strong-s")->required();
    test->add_option("--curve", cfg.curve, "curve coefficients A,B")->required();
    test->add_option("--d", cfg.d, "CM discriminant d (required for g flavors)");
    test->add_option("--n", cfg.modulus, "modulus N, optionally N=p1^e1*p2^e2")->required();
    test->add_option("--point", cfg.point, "point as x,y or x:y:z");
    test->add_flag("--all-points", cfg.all_points, "sweep every point of E(Z/N)");
    test->add_flag("--snz-only", cfg.snz_only, "sweep the strongly non-zero points");
    test->add_flag("--check-torsion", cfg.check_torsion,
                   "reject a --point that is rational torsion");
    test->add_option("--format", cfg.format, "json | csv");

    CLI::App* search = app.add_subcommand("search", "scan odd composites for pseudoprimes");
    search->add_option("--flavor", cfg.flavor, "g | strong-g | s | strong-s");
    search->add_option("--curve", cfg.curve, "curve coefficients A,B")->required();
    search->add_option("--d", cfg.d, "CM discriminant d");
    search->add_option("--point", cfg.point, "integer point x,y on the curve over Q")
        ->required();
    search->add_option("--min", cfg.range_min, "lower end of the scan (default 9)");
    search->add_option("--max", cfg.range_max, "upper end of the scan")->required();
    search->add_option("--format", cfg.format, "json | csv");

    CLI::App* census = app.add_subcommand("census", "root-count census of all cubics mod p");
    census->add_option("--p", cfg.census_p, "odd prime in [5, 199]")->required();
    census->add_option("--format", cfg.format, "json | csv");

    CLI::App* stats = app.add_subcommand("stats", "valuation distributions and Monte Carlo "
                                                  "cap checks");
    // Long-only help on this subcommand so the short form cannot shadow --h.
    stats->set_help_flag("--help", "print this help message and exit");
    stats->add_option("--h", cfg.h_spec, "plain vector for s,r");
    stats->add_option("--h-prime", cfg.h_prime_spec, "non-identity vector for s,r,t,w");
    stats->add_flag("--bound-check", cfg.bound_check, "Monte Carlo shared-valuation check");
    stats->add_option("--n", cfg.modulus, "modulus N = p*q for --bound-check");
    stats->add_option("--samples", cfg.samples, "Monte Carlo sample count (default 10000)");
    CLI::Option* seed_opt = stats->add_option("--seed", cfg.seed, "PRNG seed (required for "
                                                                  "randomized runs)");
    stats->add_flag("--snz", cfg.snz, "restrict to strongly non-zero points");
    stats->add_option("--format", cfg.format, "json | csv");

    CLI::App* verify = app.add_subcommand("verify", "exhaustive grid checks of the caps");
    verify->add_option("--theorem", cfg.theorem, "max-h | max-h-prime")->required();
    verify->add_option("--grid", cfg.grid, "bound on s and r (default 8)");
    verify->add_option("--tw", cfg.tw, "bound on the odd part (default 9)");
    verify->add_option("--format", cfg.format, "json | csv");

    std::vector<std::string> storage;
    storage.push_back("ellpsp");
    storage.insert(storage.end(), args.begin(), args.end());
    std::vector<const char*> argv;
    argv.reserve(storage.size());
    for (const std::string& s : storage) argv.push_back(s.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    cfg.seed_given = seed_opt->count() > 0;
    if (cfg.format != "json" && cfg.format != "csv") {
        err << "error: --format must be json or csv\n";
        return 2;
    }

    try {
        if (app.got_subcommand(test)) return detail::cmd_test(cfg, out);
        if (app.got_subcommand(search)) return detail::cmd_search(cfg, out);
        if (app.got_subcommand(census)) return detail::cmd_census(cfg, out);
        if (app.got_subcommand(stats)) return detail::cmd_stats(cfg, out);
        if (app.got_subcommand(verify)) return detail::cmd_verify(cfg, out);
        err << "error: no command selected\n";
        return 2;
    } catch (const CapExceeded& e) {
        err << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::domain_error& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
}

}  // namespace ellpsp::cli
