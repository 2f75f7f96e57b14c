#pragma once

#include "rational.hpp"

#include <algorithm>
#include <compare>
#include <ostream>
#include <utility>
#include <vector>

namespace motivic {

/// The base ordered abelian group A, identified with Z^k under the
/// lexicographic order on its divisible hull Q^k.  `divisible` switches the
/// whole toolkit into the mode where A itself is treated as divisible.
struct BaseGroup {
    int rank = 1;
    bool divisible = false;

    BaseGroup() = default;
    explicit BaseGroup(int k, bool div = false) : rank(k), divisible(div) {
        if (k < 1) throw std::invalid_argument("BaseGroup rank must be >= 1");
    }
    bool operator==(const BaseGroup& o) const { return rank == o.rank && divisible == o.divisible; }
};

/// An element of Q (x) A: a k-vector of exact rationals.
using GammaScalar = std::vector<Rat>;

enum class Ordering { Less = -1, Equal = 0, Greater = 1 };

inline GammaScalar gs_zero(int k) { return GammaScalar(static_cast<size_t>(k), Rat(0)); }

inline GammaScalar gs_unit(int k, int i) {
    GammaScalar v = gs_zero(k);
    v[static_cast<size_t>(i)] = 1;
    return v;
}

inline bool gs_is_zero(const GammaScalar& a) {
    return std::all_of(a.begin(), a.end(), [](const Rat& r) { return r == 0; });
}

inline int lex_sign(const GammaScalar& a) {
    for (const Rat& r : a)
        if (r != 0) return r > 0 ? 1 : -1;
    return 0;
}

inline void check_rank(const GammaScalar& a, const GammaScalar& b) {
    if (a.size() != b.size()) throw std::invalid_argument("GammaScalar rank mismatch");
}

inline Ordering compare(const GammaScalar& a, const GammaScalar& b) {
    check_rank(a, b);
    for (size_t i = 0; i < a.size(); ++i) {
        if (a[i] < b[i]) return Ordering::Less;
        if (a[i] > b[i]) return Ordering::Greater;
    }
    return Ordering::Equal;
}

inline GammaScalar gs_add(const GammaScalar& a, const GammaScalar& b) {
    check_rank(a, b);
    GammaScalar r(a);
    for (size_t i = 0; i < a.size(); ++i) r[i] += b[i];
    return r;
}

inline GammaScalar gs_sub(const GammaScalar& a, const GammaScalar& b) {
    check_rank(a, b);
    GammaScalar r(a);
    for (size_t i = 0; i < a.size(); ++i) r[i] -= b[i];
    return r;
}

inline GammaScalar gs_neg(const GammaScalar& a) {
    GammaScalar r(a);
    for (auto& x : r) x = -x;
    return r;
}

inline GammaScalar gs_scale(const Rat& c, const GammaScalar& a) {
    GammaScalar r(a);
    for (auto& x : r) x *= c;
    return r;
}

/// Splits a = f + z with f in [0,1)^k componentwise and z in A = Z^k.
inline std::pair<GammaScalar, GammaScalar> frac_int_split(const GammaScalar& a) {
    GammaScalar f(a), z(a);
    for (size_t i = 0; i < a.size(); ++i) {
        Int fl = rat_floor(a[i]);
        z[i] = Rat(fl);
        f[i] = a[i] - Rat(fl);
    }
    return {f, z};
}

/// Order-preserving assignment of rational values to the generators of A.
struct Specialization {
    std::vector<Rat> values; // value of gamma_i

    static Specialization identity(int k) {
        Specialization s;
        s.values.resize(static_cast<size_t>(k));
        // gamma_1 > gamma_2 > ... > 0 lexicographically; mirror that with a
        // steeply decreasing integer assignment.
        Rat v = 1;
        for (int i = k - 1; i >= 0; --i) {
            s.values[static_cast<size_t>(i)] = v;
            v *= 64;
        }
        return s;
    }

    Rat apply(const GammaScalar& a) const {
        if (a.size() != values.size()) throw std::invalid_argument("specialization rank mismatch");
        Rat r = 0;
        for (size_t i = 0; i < a.size(); ++i) r += a[i] * values[i];
        return r;
    }

    bool all_integer() const {
        return std::all_of(values.begin(), values.end(), [](const Rat& v) { return rat_is_int(v); });
    }

    /// True iff the lex order of every pair in `scalars` is preserved.
    bool order_consistent(const std::vector<GammaScalar>& scalars) const {
        for (const auto& s : scalars) {
            int ls = lex_sign(s);
            int vs = rat_sign(apply(s));
            if (ls != vs) return false;
        }
        for (size_t i = 0; i < scalars.size(); ++i)
            for (size_t j = i + 1; j < scalars.size(); ++j) {
                int ls = lex_sign(gs_sub(scalars[i], scalars[j]));
                int vs = rat_sign(apply(scalars[i]) - apply(scalars[j]));
                if (ls != vs) return false;
            }
        return true;
    }
};

inline std::string gs_str(const GammaScalar& a) {
    std::string s = "[";
    for (size_t i = 0; i < a.size(); ++i) {
        if (i) s += ",";
        s += rat_str(a[i]);
    }
    return s + "]";
}

} // namespace motivic
