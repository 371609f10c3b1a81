#pragma once

#include "bigint.hpp"
#include "detail/addition_laws.hpp"
#include "modarith.hpp"

#include <optional>
#include <tuple>
#include <utility>
#include <vector>

namespace ellpsp {

// Short Weierstrass curve y^2 = x^3 + A x + B considered over varying odd
// moduli. cm_disc, when present, is a positive integer d such that the curve
// has complex multiplication by an order in Q(sqrt(-d)); it is caller-supplied
// data (see cm_table() for built-in pairs) and is required by the tests that
// exploit supersingularity.
struct Curve {
    Int A, B;
    std::optional<Int> cm_disc;

    Curve(Int a, Int b, std::optional<Int> d = std::nullopt)
        : A(std::move(a)), B(std::move(b)), cm_disc(std::move(d)) {}

    // 4A^3 + 27B^2; the discriminant is -16 times this, and for odd moduli
    // the two generate the same gcd conditions.
    Int disc_inner() const { return 4 * A * A * A + 27 * B * B; }
    Int discriminant() const { return -16 * disc_inner(); }

    friend bool operator==(const Curve& lhs, const Curve& rhs) {
        return lhs.A == rhs.A && lhs.B == rhs.B && lhs.cm_disc == rhs.cm_disc;
    }
};

// The curve is nonsingular over every prime dividing n.
inline bool good_reduction(const Curve& E, const Int& n) {
    return boost::multiprecision::gcd(E.disc_inner(), n) == 1;
}

// Projective point (x : y : z) mod n in the canonical scaling (per prime
// component: z = 1 when z is a unit, else y = 1). Two points are equal
// exactly when their canonical coordinates and modulus agree, so the
// defaulted comparison below is genuine point equality provided points are
// built through make_point / the group operations.
struct ProjPoint {
    Int x, y, z;
    Int n;

    friend bool operator==(const ProjPoint&, const ProjPoint&) = default;
    friend bool operator<(const ProjPoint& lhs, const ProjPoint& rhs) {
        return std::tie(lhs.n, lhs.x, lhs.y, lhs.z) < std::tie(rhs.n, rhs.x, rhs.y, rhs.z);
    }
};

// Trichotomy for points over a composite modulus. A point is zero when its
// z-coordinate vanishes mod n (it is the identity in every component),
// strongly non-zero when z is a unit (non-identity in every component), and
// in between when z shares a nontrivial factor with n.
enum class PointClass { Zero, NonZeroNotStrong, StronglyNonZero };

inline PointClass classify(const ProjPoint& P) {
    Int g = boost::multiprecision::gcd(P.z, P.n);
    if (g == P.n) return PointClass::Zero;
    if (g == 1) return PointClass::StronglyNonZero;
    return PointClass::NonZeroNotStrong;
}

inline const char* to_string(PointClass c) {
    switch (c) {
        case PointClass::Zero: return "zero";
        case PointClass::NonZeroNotStrong: return "nonzero-not-strong";
        case PointClass::StronglyNonZero: return "strongly-nonzero";
    }
    return "?";
}

inline ProjPoint identity_point(const Int& n) { return {0, 1, 0, n}; }

// The group identity element. Canonical coordinates make this a plain
// coordinate check. Distinct from is_zero_class below: over Z/p^e with
// e >= 2 there are points (p^k u : 1 : 0) at infinity that are NOT the
// identity element.
inline bool is_identity(const ProjPoint& P) { return P.x == 0 && P.z == 0; }

// Whether z vanishes identically mod n, i.e. the point reduces to the
// point at infinity in every residue component. This is the "equals O"
// notion the pseudoprime tests use: over Q it corresponds to n dividing
// the denominator of the affine coordinates, which is the classical test
// condition, and over a prime modulus it coincides with is_identity.
inline bool is_zero_class(const ProjPoint& P) { return classify(P) == PointClass::Zero; }

namespace detail {

inline int legendre_u64(u64 a, u64 p) {
    a %= p;
    if (a == 0) return 0;
    return powmod(a, (p - 1) / 2, p) == 1 ? 1 : -1;
}

// Tonelli-Shanks square root mod an odd prime; requires a to be 0 or a
// quadratic residue.
inline u64 sqrt_mod_u64(u64 a, u64 p) {
    a %= p;
    if (a == 0) return 0;
    if (p % 4 == 3) return powmod(a, (p + 1) / 4, p);
    u64 q = p - 1;
    unsigned s = 0;
    while ((q & 1) == 0) {
        q >>= 1;
        ++s;
    }
    u64 nonresidue = 2;
    while (legendre_u64(nonresidue, p) != -1) ++nonresidue;
    u64 c = powmod(nonresidue, q, p);
    u64 x = powmod(a, (q + 1) / 2, p);
    u64 t = powmod(a, q, p);
    unsigned m = s;
    while (t != 1) {
        u64 t2 = t;
        unsigned i = 0;
        while (t2 != 1) {
            t2 = mulmod(t2, t2, p);
            ++i;
        }
        u64 b = c;
        for (unsigned j = 0; j + i + 1 < m; ++j) b = mulmod(b, b, p);
        x = mulmod(x, b, p);
        c = mulmod(b, b, p);
        t = mulmod(t, c, p);
        m = i;
    }
    return x;
}

// Number of projective points of y^2 = x^3 + a x + b over F_p: one per
// x with f(x) = 0, two per x with f(x) a residue, plus the point at
// infinity. Deliberately indifferent to singularity so that trace
// computations at bad primes can reuse it.
inline u64 count_points_u64(u64 a, u64 b, u64 p) {
    u64 count = 1;
    for (u64 x = 0; x < p; ++x) {
        u64 fx = (mulmod(mulmod(x, x, p), x, p) + mulmod(a % p, x, p) + b % p) % p;
        count += static_cast<u64>(1 + legendre_u64(fx, p));
    }
    return count;
}

// Canonical scaling of a nonvanishing triple mod p^e: divide by z when z is
// a unit, otherwise by y (on a curve point with p | z, x is forced into (p)
// and y to a unit, so this always applies).
inline Triple canonical_component(Int x, Int y, Int z, const Int& p, const Int& pe) {
    x = mod_reduce(std::move(x), pe);
    y = mod_reduce(std::move(y), pe);
    z = mod_reduce(std::move(z), pe);
    if (z % p != 0) {
        Int inv = invert_unit(z, pe);
        return {mod_reduce(x * inv, pe), mod_reduce(y * inv, pe), 1};
    }
    if (x % p != 0 || y % p == 0)
        throw std::invalid_argument("canonical_component: triple does not describe a curve point");
    Int inv = invert_unit(y, pe);
    return {mod_reduce(x * inv, pe), 1, mod_reduce(z * inv, pe)};
}

}  // namespace detail

// Canonicalize raw projective coordinates against a factored modulus.
inline ProjPoint canonical_point(const Factorization& N, const Int& x, const Int& y, const Int& z) {
    std::vector<std::pair<Int, Int>> cx, cy, cz;
    for (const auto& [p, e] : N.factors) {
        Int pe = int_pow(p, e);
        detail::Triple t = detail::canonical_component(x, y, z, p, pe);
        cx.emplace_back(std::move(t.x), pe);
        cy.emplace_back(std::move(t.y), pe);
        cz.emplace_back(std::move(t.z), pe);
    }
    return {crt_combine(cx), crt_combine(cy), crt_combine(cz), N.n};
}

// Projective curve membership: the homogeneous equation holds mod n and the
// triple is primitive (does not vanish modulo any prime dividing n).
inline bool on_curve(const Curve& E, const ProjPoint& P) {
    using boost::multiprecision::gcd;
    const Int& n = P.n;
    if (n < 2) return false;
    Int lhs = P.y * P.y % n * P.z - (P.x * P.x * P.x + E.A * P.x % n * (P.z * P.z % n) +
                                     E.B * (P.z * P.z % n * P.z));
    if (mod_reduce(std::move(lhs), n) != 0) return false;
    return gcd(gcd(gcd(P.x, P.y), P.z), n) == 1;
}

// Validated constructor: canonicalizes and insists the point lies on E.
inline ProjPoint make_point(const Curve& E, const Factorization& N, const Int& x, const Int& y,
                            const Int& z) {
    ProjPoint P = canonical_point(N, x, y, z);
    if (!on_curve(E, P)) throw std::invalid_argument("make_point: point is not on the curve");
    return P;
}

inline ProjPoint make_affine(const Curve& E, const Factorization& N, const Int& x, const Int& y) {
    return make_point(E, N, x, y, 1);
}

inline ProjPoint neg(const Factorization& N, const ProjPoint& P) {
    return canonical_point(N, P.x, -P.y, P.z);
}

namespace detail {

// Group law core, assuming valid canonical inputs. Both complete addition
// laws are evaluated once mod n; per prime component the symmetric law is
// used whenever its output survives mod p, otherwise the antisymmetric one
// must (their exceptional loci are disjoint). The component results are
// canonicalized and recombined, which is exactly the componentwise group
// structure transported through the Chinese remainder theorem.
inline ProjPoint add_unchecked(const Curve& E, const Factorization& N, const ProjPoint& P,
                               const ProjPoint& Q) {
    if (is_identity(P)) return Q;
    if (is_identity(Q)) return P;
    const Int& n = N.n;
    Triple sym = addition_law_sym(P.x, P.y, P.z, Q.x, Q.y, Q.z, E.A, E.B, n);
    Triple anti = addition_law_antisym(P.x, P.y, P.z, Q.x, Q.y, Q.z, E.A, E.B, n);
    std::vector<std::pair<Int, Int>> cx, cy, cz;
    for (const auto& [p, e] : N.factors) {
        Int pe = int_pow(p, e);
        const Triple* pick = &sym;
        if (sym.x % p == 0 && sym.y % p == 0 && sym.z % p == 0) {
            pick = &anti;
            if (anti.x % p == 0 && anti.y % p == 0 && anti.z % p == 0)
                throw std::logic_error("add: both addition laws vanished on a component");
        }
        Triple t = canonical_component(pick->x, pick->y, pick->z, p, pe);
        cx.emplace_back(std::move(t.x), pe);
        cy.emplace_back(std::move(t.y), pe);
        cz.emplace_back(std::move(t.z), pe);
    }
    return {crt_combine(cx), crt_combine(cy), crt_combine(cz), n};
}

inline void require_point(const Curve& E, const Factorization& N, const ProjPoint& P,
                          const char* who) {
    if (P.n != N.n) throw std::invalid_argument(std::string(who) + ": modulus mismatch");
    if (!on_curve(E, P)) throw std::invalid_argument(std::string(who) + ": point not on curve");
}

}  // namespace detail

// Total group operation on E over Z/n for odd factored n. Defined for every
// pair of points; over a prime this is the usual chord-tangent sum.
inline ProjPoint add(const Curve& E, const Factorization& N, const ProjPoint& P,
                     const ProjPoint& Q) {
    detail::require_point(E, N, P, "add");
    detail::require_point(E, N, Q, "add");
    return detail::add_unchecked(E, N, P, Q);
}

// k*P for any integer k (negative k negates first).
inline ProjPoint scalar_mul(const Curve& E, const Factorization& N, Int k, ProjPoint P) {
    detail::require_point(E, N, P, "scalar_mul");
    if (k < 0) {
        k = -k;
        P = neg(N, P);
    }
    ProjPoint acc = identity_point(N.n);
    while (k > 0) {
        if ((k & 1) != 0) acc = detail::add_unchecked(E, N, acc, P);
        k >>= 1;
        if (k > 0) P = detail::add_unchecked(E, N, P, P);
    }
    return acc;
}

// Reduction along Z/n -> Z/m for m | n (the componentwise reduction maps).
inline ProjPoint reduce_point(const ProjPoint& P, const Factorization& target) {
    if (P.n % target.n != 0)
        throw std::invalid_argument("reduce_point: target modulus must divide the source modulus");
    return canonical_point(target, P.x, P.y, P.z);
}

inline ProjPoint reduce_prime_power(const ProjPoint& P, const Int& p, unsigned m) {
    return reduce_point(P, Factorization::from_factors({{p, m}}));
}

// All p preimages of Q in E(Z/p^n) under reduction from p^n to p^{n-1}.
// One preimage is produced by a Hensel/Newton step (in y when 2y is a unit,
// in x when y lies in (p) — nonsingularity makes f'(x) a unit there — and by
// a contracting fixed-point iteration on the z-coordinate for points in the
// kernel of reduction to F_p, identity included). The rest differ by the
// kernel of the one-step reduction, which consists of the points
// (p^{n-1} u : 1 : 0).
inline std::vector<ProjPoint> lift_points(const Curve& E, const Int& p, unsigned n,
                                          const ProjPoint& Q) {
    if (n < 2) throw std::invalid_argument("lift_points: need n >= 2");
    if (p < 3 || p % 2 == 0 || !is_probable_prime(p))
        throw std::invalid_argument("lift_points: p must be an odd prime");
    Factorization below = Factorization::from_factors({{p, n - 1}});
    Factorization above = Factorization::from_factors({{p, n}});
    detail::require_point(E, below, Q, "lift_points");
    const Int pn = above.n;

    ProjPoint base = identity_point(pn);
    if (Q.z % p == 0) {
        // Kernel-of-reduction shape (t : 1 : w) with t, w in (p): w solves
        // w = t^3 + A t w^2 + B w^3, a p-adic contraction, so iterate it.
        Int t = Q.x;
        Int w = Q.z;
        for (int it = 0; it < 4; ++it)
            w = mod_reduce(t * t * t + E.A * t * w % pn * w + E.B * w * w % pn * w, pn);
        base = ProjPoint{t, 1, w, pn};
    } else {
        Int x = Q.x, y = Q.y;
        auto f = [&](const Int& v) { return mod_reduce(v * v * v + E.A * v + E.B, pn); };
        if (y % p != 0) {
            // Newton in y on y^2 - f(x): one step doubles the precision.
            for (int it = 0; it < 2; ++it) {
                Int inv = invert_unit(2 * y, pn);
                y = mod_reduce(y - (y * y - f(x)) * inv, pn);
            }
        } else {
            // y in (p) forces f(x) in (p); f'(x) is then a unit because the
            // reduction mod p is nonsingular.
            for (int it = 0; it < 2; ++it) {
                Int inv = invert_unit(3 * x * x + E.A, pn);
                x = mod_reduce(x - (f(x) - y * y) * inv, pn);
            }
        }
        base = ProjPoint{x, y, 1, pn};
    }
    detail::require_point(E, above, base, "lift_points: base lift");

    std::vector<ProjPoint> lifts;
    lifts.reserve(to_u64(p));
    Int step = int_pow(p, n - 1);
    for (Int u = 0; u < p; ++u) {
        ProjPoint k{step * u % pn, 1, 0, pn};
        lifts.push_back(detail::add_unchecked(E, above, base, k));
    }
    return lifts;
}

// The full point set of E(Z/p^n): the fiber over F_p is enumerated by
// square roots, higher levels by lifting. Order is deterministic. Throws
// CapExceeded when the group is larger than enum_cap().
inline std::vector<ProjPoint> enumerate_points(const Curve& E, const Int& p, unsigned n) {
    if (p < 3 || p % 2 == 0 || !is_probable_prime(p))
        throw std::invalid_argument("enumerate_points: p must be an odd prime");
    if (n < 1) throw std::invalid_argument("enumerate_points: need n >= 1");
    if (!good_reduction(E, p))
        throw std::invalid_argument("enumerate_points: curve is singular mod p");
    u64 pu = to_u64(p);
    u64 np = detail::count_points_u64(to_u64(mod_reduce(E.A, p)), to_u64(mod_reduce(E.B, p)), pu);
    Int total = int_pow(p, n - 1) * np;
    if (total > enum_cap())
        throw CapExceeded("enumerate_points: group of size " + total.str() +
                          " exceeds the enumeration cap");

    std::vector<ProjPoint> level;
    level.reserve(np);
    level.push_back(identity_point(p));
    u64 a = to_u64(mod_reduce(E.A, p));
    u64 b = to_u64(mod_reduce(E.B, p));
    for (u64 x = 0; x < pu; ++x) {
        u64 fx = (mulmod(mulmod(x, x, pu), x, pu) + mulmod(a, x, pu) + b) % pu;
        int chi = detail::legendre_u64(fx, pu);
        if (chi == 0) {
            level.push_back(ProjPoint{Int(x), 0, 1, p});
        } else if (chi == 1) {
            u64 y = detail::sqrt_mod_u64(fx, pu);
            u64 y2 = pu - y;
            if (y2 < y) std::swap(y, y2);
            level.push_back(ProjPoint{Int(x), Int(y), 1, p});
            level.push_back(ProjPoint{Int(x), Int(y2), 1, p});
        }
    }
    for (unsigned m = 2; m <= n; ++m) {
        std::vector<ProjPoint> next;
        next.reserve(level.size() * pu);
        for (const ProjPoint& Q : level) {
            std::vector<ProjPoint> lifts = lift_points(E, p, m, Q);
            next.insert(next.end(), lifts.begin(), lifts.end());
        }
        level = std::move(next);
    }
    return level;
}

// The full point set of E(Z/n) as the product of its component groups,
// recombined coordinatewise. Deterministic odometer order over components.
inline std::vector<ProjPoint> enumerate_points(const Curve& E, const Factorization& N) {
    Int total = 1;
    std::vector<std::vector<ProjPoint>> comps;
    for (const auto& [p, e] : N.factors) {
        comps.push_back(enumerate_points(E, p, e));
        total *= comps.back().size();
        if (total > enum_cap())
            throw CapExceeded("enumerate_points: product group exceeds the enumeration cap");
    }
    std::vector<ProjPoint> out;
    out.reserve(to_u64(total));
    std::vector<std::size_t> idx(comps.size(), 0);
    for (;;) {
        std::vector<std::pair<Int, Int>> cx, cy, cz;
        for (std::size_t i = 0; i < comps.size(); ++i) {
            const ProjPoint& c = comps[i][idx[i]];
            cx.emplace_back(c.x, c.n);
            cy.emplace_back(c.y, c.n);
            cz.emplace_back(c.z, c.n);
        }
        out.push_back(ProjPoint{crt_combine(cx), crt_combine(cy), crt_combine(cz), N.n});
        std::size_t i = 0;
        while (i < comps.size() && ++idx[i] == comps[i].size()) idx[i++] = 0;
        if (i == comps.size()) break;
    }
    return out;
}

// Order of the group E(Z/n) (componentwise p^{e-1} * #E(F_p)).
inline Int curve_group_order(const Curve& E, const Factorization& N) {
    Int total = 1;
    for (const auto& [p, e] : N.factors) {
        if (!good_reduction(E, p))
            throw std::invalid_argument("curve_group_order: curve is singular mod " + p.str());
        u64 np = detail::count_points_u64(to_u64(mod_reduce(E.A, p)), to_u64(mod_reduce(E.B, p)),
                                          to_u64(p));
        total *= int_pow(p, e - 1) * np;
    }
    return total;
}

// Exact order of P in E(Z/n): componentwise descent from the component group
// order through its prime factorization, then the lcm.
inline Int point_order(const Curve& E, const Factorization& N, const ProjPoint& P) {
    detail::require_point(E, N, P, "point_order");
    Int result = 1;
    for (const auto& [p, e] : N.factors) {
        Factorization comp = Factorization::from_factors({{p, e}});
        ProjPoint Pc = reduce_point(P, comp);
        Int group = curve_group_order(E, comp);
        Factorization gf = Factorization::of(group, /*permit_even=*/true);
        Int o = group;
        for (const auto& [ell, unused] : gf.factors) {
            (void)unused;
            while (o % ell == 0 && is_identity(scalar_mul(E, comp, o / ell, Pc))) o /= ell;
        }
        if (!is_identity(scalar_mul(E, comp, o, Pc)))
            throw std::logic_error("point_order: descent failed to kill the point");
        result = boost::multiprecision::lcm(result, o);
    }
    return result;
}

// Whether a point of E(Z/p^n) that is NOT strongly non-zero lies in the
// image of the strongly non-zero locus under the group operations, i.e.
// whether some multiple of a strongly non-zero point lands on Q. For
// non-anomalous reductions, and for anomalous ones with cyclic p-part, every
// such Q arises this way; in the remaining split case E(Z/p^n) is
// Z/p + Z/p^{n-1} and exactly the non-generators of the kernel summand are
// reachable, i.e. the points killed by p^{n-2}.
inline bool snz_reachable(const Curve& E, const Int& p, unsigned n, const ProjPoint& Q) {
    Factorization F = Factorization::from_factors({{p, n}});
    detail::require_point(E, F, Q, "snz_reachable");
    if (classify(Q) == PointClass::StronglyNonZero)
        throw std::invalid_argument("snz_reachable: point is already strongly non-zero");
    u64 pu = to_u64(p);
    u64 np = detail::count_points_u64(to_u64(mod_reduce(E.A, p)), to_u64(mod_reduce(E.B, p)), pu);
    if (np != pu) return true;  // non-anomalous
    std::vector<ProjPoint> pts = enumerate_points(E, p, n);
    u64 p_torsion = 0;
    for (const ProjPoint& P : pts)
        if (is_identity(scalar_mul(E, F, p, P))) ++p_torsion;
    if (p_torsion == pu) return true;  // anomalous but cyclic
    if (p_torsion != pu * pu || n < 2)
        throw std::logic_error("snz_reachable: unexpected p-torsion structure");
    return is_identity(scalar_mul(E, F, int_pow(p, n - 2), Q));
}

// A strongly non-zero point P whose order is divisible by ord(Q) in every
// component; consequently any multiple relation k*P = 0 forces k*Q = 0.
// Q itself is returned componentwise wherever it is already strongly
// non-zero. Components with no strongly non-zero points at all (possible
// only for tiny component groups) are reported as domain errors.
inline ProjPoint snz_dominator(const Curve& E, const Factorization& N, const ProjPoint& Q) {
    detail::require_point(E, N, Q, "snz_dominator");
    std::vector<std::pair<Int, Int>> cx, cy, cz;
    for (const auto& [p, e] : N.factors) {
        Factorization comp = Factorization::from_factors({{p, e}});
        ProjPoint Qc = reduce_point(Q, comp);
        std::optional<ProjPoint> pick;
        if (classify(Qc) == PointClass::StronglyNonZero) {
            pick = Qc;
        } else {
            Int oq = point_order(E, comp, Qc);
            bool any_snz = false;
            for (const ProjPoint& T : enumerate_points(E, p, e)) {
                if (classify(T) != PointClass::StronglyNonZero) continue;
                any_snz = true;
                if (point_order(E, comp, T) % oq == 0) {
                    pick = T;
                    break;
                }
            }
            if (!pick) {
                if (!any_snz)
                    throw std::domain_error(
                        "snz_dominator: component mod " + comp.n.str() +
                        " has no strongly non-zero points");
                throw std::logic_error("snz_dominator: no dominating point found");
            }
        }
        cx.emplace_back(pick->x, comp.n);
        cy.emplace_back(pick->y, comp.n);
        cz.emplace_back(pick->z, comp.n);
    }
    return {crt_combine(cx), crt_combine(cy), crt_combine(cz), N.n};
}

// Chord-tangent addition on affine representatives over an UNFACTORED odd
// modulus. Each step either produces the sum or surfaces a proper factor of
// n through a failed inversion — the engine behind elliptic-curve
// certificate checking, where n's factorization is precisely what is not
// known.
struct AffineAttempt {
    enum class Kind { Sum, FactorFound };
    Kind kind;
    ProjPoint sum;  // valid when kind == Sum
    Int factor;     // proper factor of n when kind == FactorFound

    static AffineAttempt of_sum(ProjPoint P) { return {Kind::Sum, std::move(P), 0}; }
    static AffineAttempt of_factor(const Int& n, Int g) {
        return {Kind::FactorFound, identity_point(n), std::move(g)};
    }
    bool found_factor() const { return kind == Kind::FactorFound; }
};

namespace detail {

inline void require_affine_or_identity(const Curve& E, const Int& n, const ProjPoint& P,
                                       const char* who) {
    if (P.n != n) throw std::invalid_argument(std::string(who) + ": modulus mismatch");
    if (P.z == 0) {
        if (P.x != 0 || P.y != 1)
            throw std::invalid_argument(std::string(who) + ": malformed identity");
        return;
    }
    if (P.z != 1) throw std::invalid_argument(std::string(who) + ": point must be affine");
    if (P.x < 0 || P.x >= n || P.y < 0 || P.y >= n)
        throw std::invalid_argument(std::string(who) + ": coordinates must be reduced residues");
    if (mod_reduce(P.y * P.y - (P.x * P.x * P.x + E.A * P.x + E.B), n) != 0)
        throw std::invalid_argument(std::string(who) + ": point not on curve");
}

}  // namespace detail

inline AffineAttempt add_affine_attempt(const Curve& E, const Int& n, const ProjPoint& P,
                                        const ProjPoint& Q) {
    if (n < 3 || n % 2 == 0)
        throw std::invalid_argument("add_affine_attempt: modulus must be odd and >= 3");
    detail::require_affine_or_identity(E, n, P, "add_affine_attempt");
    detail::require_affine_or_identity(E, n, Q, "add_affine_attempt");
    if (P.z == 0) return AffineAttempt::of_sum(Q);
    if (Q.z == 0) return AffineAttempt::of_sum(P);

    auto finish = [&](const Int& lambda, const Int& xsum) {
        Int x3 = mod_reduce(lambda * lambda - xsum, n);
        Int y3 = mod_reduce(lambda * (P.x - x3) - P.y, n);
        return AffineAttempt::of_sum(ProjPoint{std::move(x3), std::move(y3), 1, n});
    };

    if (P.x != Q.x) {
        ModInverse inv = inverse_or_factor(Q.x - P.x, n);
        if (inv.kind == ModInverse::Kind::FactorFound)
            return AffineAttempt::of_factor(n, inv.value);
        if (inv.kind == ModInverse::Kind::ZeroDivisorTotal)
            throw std::logic_error("add_affine_attempt: distinct residues with vanishing difference");
        return finish(mod_reduce((Q.y - P.y) * inv.value, n), P.x + Q.x);
    }

    // Equal x-coordinates: either the pair sums to the identity, the
    // y-coordinate sum betrays a factor, or this is a genuine doubling
    // (y1 + y2 a unit forces y1 = y2 because their squares agree).
    Int ysum = mod_reduce(P.y + Q.y, n);
    if (ysum == 0) return AffineAttempt::of_sum(identity_point(n));
    ModInverse inv = inverse_or_factor(ysum, n);
    if (inv.kind == ModInverse::Kind::FactorFound) return AffineAttempt::of_factor(n, inv.value);
    if (inv.kind == ModInverse::Kind::ZeroDivisorTotal)
        throw std::logic_error("add_affine_attempt: nonzero residue with total gcd");
    if (P.y != Q.y)
        throw std::logic_error("add_affine_attempt: equal x with unit y-sum but unequal y");
    return finish(mod_reduce((3 * P.x * P.x + E.A) * inv.value, n), 2 * P.x);
}

// Double-and-add ladder over add_affine_attempt; propagates a found factor.
inline AffineAttempt scalar_mul_affine(const Curve& E, const Int& n, Int k, ProjPoint P) {
    if (k < 0) throw std::invalid_argument("scalar_mul_affine: multiplier must be non-negative");
    detail::require_affine_or_identity(E, n, P, "scalar_mul_affine");
    ProjPoint acc = identity_point(n);
    while (k > 0) {
        if ((k & 1) != 0) {
            AffineAttempt step = add_affine_attempt(E, n, acc, P);
            if (step.found_factor()) return step;
            acc = std::move(step.sum);
        }
        k >>= 1;
        if (k > 0) {
            AffineAttempt dbl = add_affine_attempt(E, n, P, P);
            if (dbl.found_factor()) return dbl;
            P = std::move(dbl.sum);
        }
    }
    return AffineAttempt::of_sum(std::move(acc));
}

}  // namespace ellpsp
