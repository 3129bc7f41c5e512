#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace anfsat {
namespace gf2 {

/// Polynomials over GF(2) packed into bits: bit i = coefficient of x^i.

inline int poly_degree(std::uint64_t p) {
    int d = -1;
    while (p) { ++d; p >>= 1; }
    return d;
}

inline std::uint64_t poly_mod(std::uint64_t a, std::uint64_t b) {
    const int db = poly_degree(b);
    for (int da = poly_degree(a); da >= db; da = poly_degree(a))
        a ^= b << (da - db);
    return a;
}

inline std::uint64_t poly_gcd(std::uint64_t a, std::uint64_t b) {
    while (b) {
        a = poly_mod(a, b);
        std::uint64_t t = a; a = b; b = t;
    }
    return a;
}

/// (a * b) mod f for reduced operands; deg f <= 32.
inline std::uint64_t poly_mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t f) {
    std::uint64_t r = 0;
    while (b) {
        if (b & 1) r ^= a;
        a <<= 1;
        b >>= 1;
    }
    return poly_mod(r, f);
}

/// Rabin test: f irreducible over GF(2) iff x^(2^n) = x (mod f) and, for each
/// prime p dividing n, gcd(x^(2^(n/p)) + x, f) = 1.
inline bool is_irreducible(std::uint64_t f) {
    const int n = poly_degree(f);
    if (n <= 0) return false;
    if (n == 1) return true;
    std::uint64_t h = 2; // the polynomial x
    for (int i = 0; i < n; ++i) h = poly_mulmod(h, h, f);
    if (h != 2) return false;
    for (int p = 2; p <= n; ++p) {
        if (n % p != 0) continue;
        bool prime = true;
        for (int q = 2; q * q <= p; ++q)
            if (p % q == 0) { prime = false; break; }
        if (!prime) continue;
        std::uint64_t g = 2;
        for (int i = 0; i < n / p; ++i) g = poly_mulmod(g, g, f);
        if (poly_gcd(g ^ 2ULL, f) != 1) return false;
    }
    return true;
}

} // namespace gf2

/// Lowest-weight irreducible reduction polynomials for degrees 2..32
/// (trinomial when one exists, else pentanomial; least exponents among ties).
inline constexpr std::uint64_t kReductionPoly[31] = {
    0x7ULL,         // 2:  x^2+x+1
    0xBULL,         // 3:  x^3+x+1
    0x13ULL,        // 4:  x^4+x+1
    0x25ULL,        // 5:  x^5+x^2+1
    0x43ULL,        // 6:  x^6+x+1
    0x83ULL,        // 7:  x^7+x+1
    0x11BULL,       // 8:  x^8+x^4+x^3+x+1
    0x203ULL,       // 9:  x^9+x+1
    0x409ULL,       // 10: x^10+x^3+1
    0x805ULL,       // 11: x^11+x^2+1
    0x1009ULL,      // 12: x^12+x^3+1
    0x201BULL,      // 13: x^13+x^4+x^3+x+1
    0x4021ULL,      // 14: x^14+x^5+1
    0x8003ULL,      // 15: x^15+x+1
    0x1002BULL,     // 16: x^16+x^5+x^3+x+1
    0x20009ULL,     // 17: x^17+x^3+1
    0x40009ULL,     // 18: x^18+x^3+1
    0x80027ULL,     // 19: x^19+x^5+x^2+x+1
    0x100009ULL,    // 20: x^20+x^3+1
    0x200005ULL,    // 21: x^21+x^2+1
    0x400003ULL,    // 22: x^22+x+1
    0x800021ULL,    // 23: x^23+x^5+1
    0x100001BULL,   // 24: x^24+x^4+x^3+x+1
    0x2000009ULL,   // 25: x^25+x^3+1
    0x400001BULL,   // 26: x^26+x^4+x^3+x+1
    0x8000027ULL,   // 27: x^27+x^5+x^2+x+1
    0x10000003ULL,  // 28: x^28+x+1
    0x20000005ULL,  // 29: x^29+x^2+1
    0x40000003ULL,  // 30: x^30+x+1
    0x80000009ULL,  // 31: x^31+x^3+1
    0x10000008DULL, // 32: x^32+x^7+x^3+x^2+1
};

/// Arithmetic in GF(2^n), 2 <= n <= 32, elements packed in the low n bits of
/// a 64-bit word. The reduction polynomial is re-checked for irreducibility
/// every time a context is built.
class BinaryFieldContext {
public:
    explicit BinaryFieldContext(unsigned n) : n_(n) {
        if (n < 2 || n > 32)
            throw std::invalid_argument("field degree must be in [2, 32], got " + std::to_string(n));
        modulus_ = kReductionPoly[n - 2];
        if (gf2::poly_degree(modulus_) != static_cast<int>(n) || !gf2::is_irreducible(modulus_))
            throw std::logic_error("reduction polynomial table entry failed verification");
        mask_ = (n == 64) ? ~0ULL : ((1ULL << n) - 1);
    }

    unsigned degree() const { return n_; }
    std::uint64_t modulus() const { return modulus_; }
    std::uint64_t order() const { return 1ULL << n_; }
    std::uint64_t mask() const { return mask_; }

    static std::uint64_t add(std::uint64_t a, std::uint64_t b) { return a ^ b; }

    std::uint64_t mul(std::uint64_t a, std::uint64_t b) const {
        std::uint64_t r = 0;
        while (b) {
            if (b & 1) r ^= a;
            a <<= 1;
            b >>= 1;
        }
        return gf2::poly_mod(r, modulus_);
    }

    std::uint64_t sq(std::uint64_t a) const { return mul(a, a); }

    std::uint64_t pow(std::uint64_t a, std::uint64_t e) const {
        std::uint64_t r = 1;
        a = gf2::poly_mod(a, modulus_);
        while (e) {
            if (e & 1) r = mul(r, a);
            a = mul(a, a);
            e >>= 1;
        }
        return r;
    }

    std::uint64_t inv(std::uint64_t a) const {
        if (a == 0) throw std::invalid_argument("zero has no inverse");
        return pow(a, order() - 2);
    }

private:
    unsigned n_;
    std::uint64_t modulus_ = 0;
    std::uint64_t mask_ = 0;
};

} // namespace anfsat
