#pragma once

#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>

namespace motivic {

using Int = long long;

namespace ratdetail {

inline long long narrow(__int128 v) {
    if (v > INT64_MAX || v < INT64_MIN) throw std::overflow_error("rational arithmetic overflow");
    return static_cast<long long>(v);
}

inline __int128 gcd128(__int128 a, __int128 b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b) {
        __int128 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

} // namespace ratdetail

/// Exact rational over 64-bit integers with 128-bit intermediates.  All
/// quantities in this toolkit are desk-scale; overflow throws rather than
/// wrapping.
class Rat {
public:
    Rat() = default;
    Rat(int v) : n_(v) {}
    Rat(long v) : n_(v) {}
    Rat(long long v) : n_(v) {}
    Rat(unsigned v) : n_(v) {}
    Rat(long long p, long long q) {
        if (q == 0) throw std::invalid_argument("Rat: zero denominator");
        __int128 pp = p, qq = q;
        if (qq < 0) { pp = -pp; qq = -qq; }
        __int128 g = ratdetail::gcd128(pp, qq);
        if (g > 1) { pp /= g; qq /= g; }
        n_ = ratdetail::narrow(pp);
        d_ = ratdetail::narrow(qq);
    }

    long long num() const { return n_; }
    long long den() const { return d_; }

    friend Rat operator+(const Rat& a, const Rat& b) {
        return make(static_cast<__int128>(a.n_) * b.d_ + static_cast<__int128>(b.n_) * a.d_,
                    static_cast<__int128>(a.d_) * b.d_);
    }
    friend Rat operator-(const Rat& a, const Rat& b) {
        return make(static_cast<__int128>(a.n_) * b.d_ - static_cast<__int128>(b.n_) * a.d_,
                    static_cast<__int128>(a.d_) * b.d_);
    }
    friend Rat operator*(const Rat& a, const Rat& b) {
        return make(static_cast<__int128>(a.n_) * b.n_, static_cast<__int128>(a.d_) * b.d_);
    }
    friend Rat operator/(const Rat& a, const Rat& b) {
        if (b.n_ == 0) throw std::invalid_argument("Rat: division by zero");
        return make(static_cast<__int128>(a.n_) * b.d_, static_cast<__int128>(a.d_) * b.n_);
    }
    Rat operator-() const {
        Rat r = *this;
        r.n_ = -r.n_;
        return r;
    }
    Rat& operator+=(const Rat& o) { return *this = *this + o; }
    Rat& operator-=(const Rat& o) { return *this = *this - o; }
    Rat& operator*=(const Rat& o) { return *this = *this * o; }
    Rat& operator/=(const Rat& o) { return *this = *this / o; }

    friend bool operator==(const Rat& a, const Rat& b) { return a.n_ == b.n_ && a.d_ == b.d_; }
    friend bool operator!=(const Rat& a, const Rat& b) { return !(a == b); }
    friend bool operator<(const Rat& a, const Rat& b) {
        return static_cast<__int128>(a.n_) * b.d_ < static_cast<__int128>(b.n_) * a.d_;
    }
    friend bool operator>(const Rat& a, const Rat& b) { return b < a; }
    friend bool operator<=(const Rat& a, const Rat& b) { return !(b < a); }
    friend bool operator>=(const Rat& a, const Rat& b) { return !(a < b); }

    friend std::ostream& operator<<(std::ostream& os, const Rat& r) {
        os << r.n_;
        if (r.d_ != 1) os << "/" << r.d_;
        return os;
    }

private:
    static Rat make(__int128 p, __int128 q) {
        if (q < 0) { p = -p; q = -q; }
        __int128 g = ratdetail::gcd128(p, q);
        if (g > 1) { p /= g; q /= g; }
        Rat r;
        r.n_ = ratdetail::narrow(p);
        r.d_ = ratdetail::narrow(q);
        return r;
    }
    long long n_ = 0;
    long long d_ = 1;
};

inline Int rat_num(const Rat& r) { return r.num(); }
inline Int rat_den(const Rat& r) { return r.den(); }

inline Int rat_floor(const Rat& r) {
    Int p = r.num(), q = r.den();
    Int d = p / q;
    if (p % q != 0 && p < 0) d -= 1;
    return d;
}

inline Int rat_ceil(const Rat& r) { return -rat_floor(-r); }

inline bool rat_is_int(const Rat& r) { return r.den() == 1; }

inline Int igcd(Int a, Int b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b != 0) {
        Int t = a % b;
        a = b;
        b = t;
    }
    return a;
}

inline Int ilcm(const Int& a, const Int& b) {
    if (a == 0 || b == 0) return 0;
    Int g = igcd(a, b);
    Int r = ratdetail::narrow(static_cast<__int128>(a / g) * b);
    return r < 0 ? -r : r;
}

inline int rat_sign(const Rat& r) {
    if (r.num() > 0) return 1;
    if (r.num() < 0) return -1;
    return 0;
}

inline std::string rat_str(const Rat& r) {
    std::string s = std::to_string(r.num());
    if (r.den() != 1) s += "/" + std::to_string(r.den());
    return s;
}

// parses "p", "-p/q" etc.; throws on malformed input
inline Rat parse_rat(const std::string& s) {
    try {
        auto pos = s.find('/');
        if (pos == std::string::npos) return Rat(std::stoll(s));
        long long p = std::stoll(s.substr(0, pos));
        long long q = std::stoll(s.substr(pos + 1));
        return Rat(p, q);
    } catch (const std::exception&) {
        throw std::invalid_argument("bad rational literal: " + s);
    }
}

inline long long to_ll(const Int& v) { return v; }

} // namespace motivic
