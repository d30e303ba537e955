#pragma once

#include <cstdint>
#include <stdexcept>

namespace upslope {

// Arithmetic on residues modulo p^k, stored in uint64. The context guarantees
// p^prec fits; products go through unsigned __int128.

inline std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % m);
}

inline std::uint64_t addmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    std::uint64_t s = a + b;
    if (s < a || s >= m) s -= m;
    return s;
}

inline std::uint64_t submod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return a >= b ? a - b : m - (b - a);
}

inline std::uint64_t powmod(std::uint64_t a, std::uint64_t n, std::uint64_t m) {
    std::uint64_t r = 1 % m;
    a %= m;
    while (n) {
        if (n & 1) r = mulmod(r, a, m);
        a = mulmod(a, a, m);
        n >>= 1;
    }
    return r;
}

// Inverse of a unit modulo m (extended Euclid). Throws if gcd(a, m) != 1.
inline std::uint64_t invmod(std::uint64_t a, std::uint64_t m) {
    __int128 t = 0, newt = 1;
    __int128 r = m, newr = a % m;
    while (newr != 0) {
        __int128 q = r / newr;
        __int128 tmp = t - q * newt; t = newt; newt = tmp;
        tmp = r - q * newr; r = newr; newr = tmp;
    }
    if (r != 1) throw std::domain_error("invmod: not a unit");
    if (t < 0) t += m;
    return static_cast<std::uint64_t>(t);
}

// v_p of a residue class a (!= 0) for prime p.
inline int val_p_u64(std::uint64_t a, std::uint64_t p) {
    int v = 0;
    while (a % p == 0) { a /= p; ++v; }
    return v;
}

}  // namespace upslope
