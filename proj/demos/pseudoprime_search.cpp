// Scan a range of odd composites for elliptic pseudoprimes on a fixed
// CM curve with a point of infinite order, then show the full doubling
// trace for the first composite that clears the entry conditions.
//
// The curve y^2 = x^3 - 25x has complex multiplication by Z[i] (d = 1)
// and the rational point (-4, 6) generates an infinite cyclic subgroup,
// so the same point can be reduced modulo every candidate N.

#include <ellpsp/psp.hpp>

#include <iostream>

using namespace ellpsp;

int main() {
    const Curve E{Int(-25), Int(0), Int(1)};
    const Int px = -4, py = 6;
    const Int lo = 9, hi = 20000;

    std::cout << "curve y^2 = x^3 - 25x, CM discriminant d = 1, point ("
              << px << ", " << py << ")\n";
    std::cout << "scanning odd composites in [" << lo << ", " << hi << "]\n\n";

    unsigned gated = 0;
    bool trace_shown = false;
    std::vector<Int> weak_hits, strong_hits;

    for (Int n = lo; n <= hi; n += 2) {
        if (is_probable_prime(n)) continue;
        Factorization N = Factorization::of(n);

        Verdict gate_probe = gpsp_test(E, N, make_point(E, N, px, py, 1));
        if (is_gate_reason(gate_probe.reason)) continue;
        ++gated;

        if (gate_probe.passed) weak_hits.push_back(n);
        Verdict strong = strong_gpsp_test(E, N, make_point(E, N, px, py, 1));
        if (strong.passed) strong_hits.push_back(n);

        if (!trace_shown) {
            trace_shown = true;
            std::cout << "first composite reaching the kernel: N = " << n << " = ";
            for (std::size_t i = 0; i < N.factors.size(); ++i) {
                if (i) std::cout << " * ";
                std::cout << N.factors[i].first;
                if (N.factors[i].second > 1) std::cout << "^" << N.factors[i].second;
            }
            std::cout << "\n  target N+1 = 2^" << strong.s << " * " << strong.t << "\n";
            for (const TraceStep& step : strong.trace) {
                std::cout << "  2^" << step.r << " * t * P = (" << step.point.x << " : "
                          << step.point.y << " : " << step.point.z << ")  ["
                          << to_string(step.cls) << "]\n";
            }
            std::cout << "  verdict: " << (strong.passed ? "passes" : "fails") << " ("
                      << to_string(strong.reason) << ")\n\n";
        }
    }

    std::cout << gated << " composites cleared the gates\n";
    std::cout << "pseudoprimes (target kills the point): ";
    if (weak_hits.empty()) std::cout << "none";
    for (const Int& n : weak_hits) std::cout << n << " ";
    std::cout << "\nstrong pseudoprimes (clean doubling chain): ";
    if (strong_hits.empty()) std::cout << "none";
    for (const Int& n : strong_hits) std::cout << n << " ";
    std::cout << "\n";
    return 0;
}
