#pragma once

#include <stdexcept>

namespace fieldcsp {

// Deterministic primality check by trial division; intended for desk-scale
// moduli, not cryptographic sizes.
inline bool is_prime(long long p) {
    if (p < 2) return false;
    if (p < 4) return true;
    if (p % 2 == 0) return false;
    for (long long d = 3; d * d <= p; d += 2) {
        if (p % d == 0) return false;
    }
    return true;
}

// Reduce v into the canonical range [0, p).
inline int mod_reduce(long long v, int p) {
    long long r = v % p;
    if (r < 0) r += p;
    return static_cast<int>(r);
}

// A prime modulus, validated at construction.
struct FieldPrime {
    int p;

    explicit FieldPrime(int prime) : p(prime) {
        if (!is_prime(p)) throw std::invalid_argument("modulus is not prime");
    }
};

} // namespace fieldcsp
