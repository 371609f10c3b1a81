// Build and check a Goldwasser-Kilian style primality certificate for a
// small prime, entirely with the total group law and the factor-reporting
// affine ladder.
//
// A certificate for N is a curve E, a point P on E mod N, and a factored
// integer M with M * P = O, (M/l) * P affine for every prime l | M, and M
// large enough that no composite N could support such a point. The checker
// never assumes N is prime: every affine step either produces a sum or a
// nontrivial factor of N, and a factor refutes the certificate.

#include <ellpsp/psp.hpp>

#include <iostream>

using namespace ellpsp;

int main() {
    const Int n = 1009;  // the prime we want certified
    Factorization N = Factorization::of(n);

    // Hunt for a curve whose group order has a prime factor comfortably
    // above the size bound, and a point whose order is exactly that prime.
    for (Int a = 1; a < n; ++a) {
        Curve E{a, Int(3), std::nullopt};
        if (!good_reduction(E, n)) continue;

        Int m = curve_group_order(E, N);
        Factorization mf = Factorization::of(m, /*permit_even=*/true);
        Int q = mf.factors.back().first;  // largest prime factor
        if (!gk_size_bound_ok(q, n)) continue;

        // Project a point onto the q-primary part to get order exactly q.
        ProjPoint R = identity_point(n);
        for (Int x = 0; x < n && is_identity(R); ++x) {
            Int rhs = mod_reduce(x * x * x + E.A * x + E.B, n);
            if (rhs == 0 || jacobi(rhs, n) != 1) continue;
            u64 y = detail::sqrt_mod_u64(to_u64(rhs), to_u64(n));
            R = scalar_mul(E, N, m / q, make_point(E, N, x, Int(y), 1));
        }
        if (is_identity(R)) continue;

        Factorization qf = Factorization::from_factors({{q, 1}}, /*permit_even=*/true);
        std::cout << "candidate: y^2 = x^3 + " << a << "x + 3 mod " << n << "\n";
        std::cout << "  group order " << m << ", certified prime factor M = " << q << "\n";
        std::cout << "  witness point (" << R.x << ", " << R.y << ")\n";

        bool ok = gk_certificate_check(E, n, q, R, qf);
        std::cout << "  certificate check: " << (ok ? "ACCEPTED" : "REJECTED") << "\n\n";

        // A tampered certificate must be rejected: M = 7 is far below the
        // size bound, so it proves nothing even though 7 * (q/7) * P would
        // not even be the identity.
        bool tampered = gk_certificate_check(E, n, Int(7), R,
                                             Factorization::from_factors({{Int(7), 1}}));
        std::cout << "  tampered certificate (M = 7): "
                  << (tampered ? "ACCEPTED" : "REJECTED") << "\n";
        return ok && !tampered ? 0 : 1;
    }

    std::cout << "no certifying curve found in the family y^2 = x^3 + ax + 3\n";
    return 1;
}
