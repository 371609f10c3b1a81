#pragma once

#include "bigint.hpp"
#include "curve_core.hpp"
#include "modarith.hpp"

#include <algorithm>
#include <vector>

namespace ellpsp {

// #E(F_p) for an odd prime p at which E has good reduction.
inline Int count_points(const Curve& E, const Int& p) {
    if (p < 3 || p % 2 == 0 || !is_probable_prime(p))
        throw std::invalid_argument("count_points: p must be an odd prime");
    if (!good_reduction(E, p))
        throw std::invalid_argument("count_points: curve is singular mod " + p.str());
    return detail::count_points_u64(to_u64(mod_reduce(E.A, p)), to_u64(mod_reduce(E.B, p)),
                                    to_u64(p));
}

inline bool is_anomalous(const Curve& E, const Int& p) { return count_points(E, p) == p; }

// Invariants (s, r, t, w) of a curve group written as
//
//     Z/(2^s t)  +  Z/(2^r w),   s <= r,  t | w,  t and w odd,
//
// the canonical shape for a finite abelian group of rank at most two with
// the 2-parts pulled out. Computed for E(F_p), or for E(Z/p^n): in both
// cases the group has rank at most two (away from p the structure matches
// E(F_p); the p-part is an extension of the cyclic p-part of E(F_p) by a
// cyclic group), so exponent and cofactor determine it.
struct GroupStructure {
    unsigned s = 0, r = 0;
    Int t = 1, w = 1;

    Int order() const { return (int_pow(2, s) * t) * (int_pow(2, r) * w); }
    Int exponent() const { return int_pow(2, r) * w; }
    bool is_cyclic() const { return s == 0 && t == 1; }

    friend bool operator==(const GroupStructure&, const GroupStructure&) = default;
};

inline GroupStructure group_structure(const Curve& E, const Int& p, unsigned n = 1) {
    Factorization F = Factorization::from_factors({{p, n}});
    std::vector<ProjPoint> pts = enumerate_points(E, p, n);
    Int exponent = 1;
    for (const ProjPoint& P : pts)
        exponent = boost::multiprecision::lcm(exponent, point_order(E, F, P));
    Int order = Int(pts.size());
    if (order % exponent != 0)
        throw std::logic_error("group_structure: exponent does not divide the order");
    Int cofactor = order / exponent;
    GroupStructure g;
    g.r = nu2(exponent);
    g.s = nu2(cofactor);
    g.w = exponent >> g.r;
    g.t = cofactor >> g.s;
    if (g.s > g.r || g.w % g.t != 0)
        throw std::logic_error("group_structure: not a rank-two invariant pair");
    return g;
}

// Root count of x^3 + Ax + B over F_p, for nonsingular (A, B) only — a
// repeated root is exactly the singular case, so the trichotomy below is
// total: the cubic has zero, one, or three simple roots, matching a curve
// group with trivial 2-torsion, one point of order two, or full 2-torsion.
enum class RootCount { NoRoots, OneRoot, ThreeRoots };

inline const char* to_string(RootCount c) {
    switch (c) {
        case RootCount::NoRoots: return "no-roots";
        case RootCount::OneRoot: return "one-root";
        case RootCount::ThreeRoots: return "three-roots";
    }
    return "?";
}

inline RootCount cubic_roots(const Int& A, const Int& B, const Int& p) {
    if (p < 3 || p % 2 == 0 || !is_probable_prime(p))
        throw std::invalid_argument("cubic_roots: p must be an odd prime");
    Curve E{A, B};
    if (!good_reduction(E, p))
        throw std::invalid_argument("cubic_roots: cubic has a repeated root mod " + p.str());
    u64 pu = to_u64(p);
    u64 a = to_u64(mod_reduce(A, p));
    u64 b = to_u64(mod_reduce(B, p));
    unsigned roots = 0;
    for (u64 x = 0; x < pu; ++x)
        if ((mulmod(mulmod(x, x, pu), x, pu) + mulmod(a, x, pu) + b) % pu == 0) ++roots;
    switch (roots) {
        case 0: return RootCount::NoRoots;
        case 1: return RootCount::OneRoot;
        case 3: return RootCount::ThreeRoots;
        default: throw std::logic_error("cubic_roots: impossible simple-root count");
    }
}

// Census of ALL plane cubics y^2 = x^3 + a x^2 + b x + c over F_p (the full
// (a, b, c) space, not just short Weierstrass form), split by the number of
// roots of the cubic and by singularity. For each (a, b) the roots sweep x
// as c varies, so one pass over (a, b, x) histograms the root counts of all
// p^3 cubics in O(p^2 (p + log)) time.
struct CensusRecord {
    u64 p = 0;
    u64 no_roots = 0, one_root = 0, three_roots = 0, singular = 0;

    u64 total() const { return no_roots + one_root + three_roots + singular; }
    Ratio no_roots_fraction() const { return Ratio(no_roots, total() - singular); }
    Ratio one_root_fraction() const { return Ratio(one_root, total() - singular); }
    Ratio three_roots_fraction() const { return Ratio(three_roots, total() - singular); }
};

inline CensusRecord curve_census(u64 p) {
    if (p < 5 || p > 199 || !is_probable_prime(Int(p)))
        throw std::invalid_argument("curve_census: p must be an odd prime in [5, 199]");
    CensusRecord rec;
    rec.p = p;
    std::vector<u64> hits(p);
    for (u64 a = 0; a < p; ++a) {
        for (u64 b = 0; b < p; ++b) {
            // c values at which x^3 + a x^2 + b x + c acquires each root x
            std::fill(hits.begin(), hits.end(), 0);
            for (u64 x = 0; x < p; ++x) {
                u64 v = (mulmod(mulmod(x, x, p), x, p) + mulmod(a, mulmod(x, x, p), p) +
                         mulmod(b, x, p)) %
                        p;
                ++hits[(p - v) % p];
            }
            // Discriminant of the depressed form is unneeded: k roots at a
            // given c means k counted WITH multiplicity across x, so k = 2
            // marks a repeated root (singular), k = 3 three simple roots,
            // and k = 1 either one simple root (nonsingular) or a triple
            // root; the discriminant separates those two.
            u64 u = (mulmod(18, mulmod(a, b, p), p) + 4 * p * p -
                     mulmod(4, mulmod(a, mulmod(a, a, p), p), p)) %
                    p;
            u64 v2 = (mulmod(mulmod(a, a, p), mulmod(b, b, p), p) + 4 * p * p -
                      mulmod(4, mulmod(b, mulmod(b, b, p), p), p)) %
                     p;
            for (u64 c = 0; c < p; ++c) {
                u64 k = hits[c];
                if (k == 0) {
                    ++rec.no_roots;
                } else if (k == 3) {
                    ++rec.three_roots;
                } else if (k == 2) {
                    ++rec.singular;
                } else {
                    // disc = 18abc - 4a^3c + a^2b^2 - 4b^3 - 27c^2
                    //      = u*c + v2 - 27 c^2  (computed mod p)
                    u64 disc = (mulmod(u, c, p) + v2 + 27 * p * p -
                                mulmod(27, mulmod(c, c, p), p)) %
                               p;
                    if (disc == 0)
                        ++rec.singular;
                    else
                        ++rec.one_root;
                }
            }
        }
    }
    return rec;
}

}  // namespace ellpsp
