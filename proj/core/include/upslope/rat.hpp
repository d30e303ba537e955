#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

namespace upslope {

// Exact rational with small numerator/denominator, used for valuations and
// polygon coordinates. Denominators in this project divide the ramification
// degree e, numerators stay desk-sized, so int64 never overflows here; the
// arithmetic still cross-multiplies in 128 bits to be safe.
struct Rat {
    std::int64_t num = 0;
    std::int64_t den = 1;

    Rat() = default;
    Rat(std::int64_t n) : num(n), den(1) {}
    Rat(std::int64_t n, std::int64_t d) : num(n), den(d) { normalize(); }

    void normalize() {
        if (den == 0) throw std::invalid_argument("Rat: zero denominator");
        if (den < 0) { num = -num; den = -den; }
        std::int64_t g = std::gcd(num < 0 ? -num : num, den);
        if (g > 1) { num /= g; den /= g; }
        if (num == 0) den = 1;
    }

    friend Rat operator+(const Rat& a, const Rat& b) {
        __int128 n = static_cast<__int128>(a.num) * b.den + static_cast<__int128>(b.num) * a.den;
        __int128 d = static_cast<__int128>(a.den) * b.den;
        __int128 g = gcd128(n < 0 ? -n : n, d);
        return make_checked(n / g, d / g);
    }
    friend Rat operator-(const Rat& a, const Rat& b) { return a + Rat(-b.num, b.den); }
    friend Rat operator-(const Rat& a) { return Rat(-a.num, a.den); }
    friend Rat operator*(const Rat& a, const Rat& b) {
        __int128 n = static_cast<__int128>(a.num) * b.num;
        __int128 d = static_cast<__int128>(a.den) * b.den;
        __int128 g = gcd128(n < 0 ? -n : n, d);
        return make_checked(n / g, d / g);
    }
    friend Rat operator/(const Rat& a, const Rat& b) {
        if (b.num == 0) throw std::invalid_argument("Rat: division by zero");
        return a * Rat(b.den, b.num);
    }

    friend bool operator==(const Rat& a, const Rat& b) { return a.num == b.num && a.den == b.den; }
    friend bool operator!=(const Rat& a, const Rat& b) { return !(a == b); }
    friend bool operator<(const Rat& a, const Rat& b) {
        return static_cast<__int128>(a.num) * b.den < static_cast<__int128>(b.num) * a.den;
    }
    friend bool operator>(const Rat& a, const Rat& b) { return b < a; }
    friend bool operator<=(const Rat& a, const Rat& b) { return !(b < a); }
    friend bool operator>=(const Rat& a, const Rat& b) { return !(a < b); }

    std::int64_t floor() const {
        std::int64_t q = num / den;
        if (num % den != 0 && num < 0) --q;
        return q;
    }
    std::int64_t ceil() const { return -(Rat(-num, den).floor()); }
    bool is_integer() const { return den == 1; }

    std::string str() const {
        if (den == 1) return std::to_string(num);
        return std::to_string(num) + "/" + std::to_string(den);
    }

  private:
    static __int128 gcd128(__int128 a, __int128 b) {
        while (b != 0) { __int128 t = a % b; a = b; b = t; }
        return a == 0 ? 1 : a;
    }
    static Rat make_checked(__int128 n, __int128 d) {
        if (d < 0) { n = -n; d = -d; }
        if (n > INT64_MAX || n < INT64_MIN || d > INT64_MAX)
            throw std::overflow_error("Rat: overflow");
        Rat r;
        r.num = static_cast<std::int64_t>(n);
        r.den = static_cast<std::int64_t>(d);
        if (r.num == 0) r.den = 1;
        return r;
    }
};

}  // namespace upslope
