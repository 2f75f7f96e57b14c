#pragma once

#include "rational.hpp"

#include <map>
#include <vector>

namespace motivic {

/// Sparse polynomial with rational (Laurent/Puiseux) exponent vectors over Q.
/// Variables are positional; callers attach meaning and names.
class SymPoly {
public:
    using Exp = std::vector<Rat>;

    SymPoly() = default;
    explicit SymPoly(int nv) : nv_(nv) {}

    static SymPoly constant(int nv, const Rat& c) {
        SymPoly p(nv);
        if (c != 0) p.t_[Exp(static_cast<size_t>(nv), Rat(0))] = c;
        return p;
    }
    static SymPoly zero(int nv) { return SymPoly(nv); }
    static SymPoly one(int nv) { return constant(nv, 1); }
    static SymPoly var(int nv, int i, const Rat& exp = Rat(1), const Rat& coeff = Rat(1)) {
        SymPoly p(nv);
        Exp e(static_cast<size_t>(nv), Rat(0));
        e[static_cast<size_t>(i)] = exp;
        if (coeff != 0) p.t_[e] = coeff;
        return p;
    }
    static SymPoly monomial(int nv, Exp e, const Rat& coeff) {
        SymPoly p(nv);
        if (coeff != 0) p.t_[std::move(e)] = coeff;
        return p;
    }

    int nvars() const { return nv_; }
    bool is_zero() const { return t_.empty(); }
    const std::map<Exp, Rat>& terms() const { return t_; }
    size_t size() const { return t_.size(); }

    bool is_constant() const {
        if (t_.empty()) return true;
        if (t_.size() != 1) return false;
        for (const Rat& e : t_.begin()->first)
            if (e != 0) return false;
        return true;
    }
    Rat constant_value() const {
        if (t_.empty()) return 0;
        return t_.begin()->second;
    }
    bool is_monomial() const { return t_.size() == 1; }

    void add_term(const Exp& e, const Rat& c) {
        if (c == 0) return;
        auto it = t_.find(e);
        if (it == t_.end()) {
            t_[e] = c;
        } else {
            it->second += c;
            if (it->second == 0) t_.erase(it);
        }
    }

    SymPoly operator+(const SymPoly& o) const {
        check(o);
        SymPoly r = *this;
        for (const auto& [e, c] : o.t_) r.add_term(e, c);
        return r;
    }
    SymPoly operator-() const {
        SymPoly r = *this;
        for (auto& [e, c] : r.t_) c = -c;
        return r;
    }
    SymPoly operator-(const SymPoly& o) const { return *this + (-o); }
    SymPoly operator*(const SymPoly& o) const {
        check(o);
        SymPoly r(nv_);
        for (const auto& [e1, c1] : t_)
            for (const auto& [e2, c2] : o.t_) {
                Exp e(e1);
                for (size_t i = 0; i < e.size(); ++i) e[i] += e2[i];
                r.add_term(e, c1 * c2);
            }
        return r;
    }
    SymPoly operator*(const Rat& c) const {
        SymPoly r(nv_);
        if (c == 0) return r;
        r.t_ = t_;
        for (auto& [e, v] : r.t_) v *= c;
        return r;
    }
    SymPoly pow(int n) const {
        if (n < 0) throw std::invalid_argument("SymPoly::pow: negative exponent");
        SymPoly r = one(nv_), b = *this;
        while (n) {
            if (n & 1) r = r * b;
            b = b * b;
            n >>= 1;
        }
        return r;
    }

    bool operator==(const SymPoly& o) const { return nv_ == o.nv_ && t_ == o.t_; }
    bool operator<(const SymPoly& o) const { return std::tie(nv_, t_) < std::tie(o.nv_, o.t_); }

    /// Substitutes variable i by a rational value; the exponents of i must be
    /// integers.
    SymPoly subst(int i, const Rat& value) const {
        SymPoly r(nv_);
        for (const auto& [e, c] : t_) {
            const Rat& ex = e[static_cast<size_t>(i)];
            if (!rat_is_int(ex)) throw std::invalid_argument("SymPoly::subst needs integer exponent");
            Int n = rat_num(ex);
            Rat f = c;
            Rat base = value;
            Int k = n < 0 ? -n : n;
            Rat p = 1;
            for (Int j = 0; j < k; ++j) p *= base;
            if (n < 0) {
                if (p == 0) throw std::invalid_argument("SymPoly::subst: division by zero");
                f /= p;
            } else {
                f *= p;
            }
            Exp e2(e);
            e2[static_cast<size_t>(i)] = 0;
            r.add_term(e2, f);
        }
        return r;
    }

    /// Substitutes variable i by another polynomial (integer exponents >= 0).
    SymPoly subst_poly(int i, const SymPoly& value) const {
        SymPoly r(nv_);
        for (const auto& [e, c] : t_) {
            const Rat& ex = e[static_cast<size_t>(i)];
            if (!rat_is_int(ex) || ex < 0) throw std::invalid_argument("SymPoly::subst_poly needs exponent in N");
            Exp e2(e);
            e2[static_cast<size_t>(i)] = 0;
            SymPoly term = monomial(nv_, e2, c) * value.pow(static_cast<int>(rat_num(ex)));
            r = r + term;
        }
        return r;
    }

    /// Scales the exponents of variable i by s (variable substitution
    /// v -> v^s at the exponent level).
    SymPoly scale_exponents(int i, const Rat& s) const {
        SymPoly r(nv_);
        for (const auto& [e, c] : t_) {
            Exp e2(e);
            e2[static_cast<size_t>(i)] *= s;
            r.add_term(e2, c);
        }
        return r;
    }

    Rat min_exponent(int i) const {
        Rat m = 0;
        bool first = true;
        for (const auto& [e, c] : t_) {
            (void)c;
            if (first || e[static_cast<size_t>(i)] < m) m = e[static_cast<size_t>(i)];
            first = false;
        }
        return m;
    }
    Rat max_exponent(int i) const {
        Rat m = 0;
        bool first = true;
        for (const auto& [e, c] : t_) {
            (void)c;
            if (first || e[static_cast<size_t>(i)] > m) m = e[static_cast<size_t>(i)];
            first = false;
        }
        return m;
    }
    bool depends_on(int i) const {
        for (const auto& [e, c] : t_) {
            (void)c;
            if (e[static_cast<size_t>(i)] != 0) return true;
        }
        return false;
    }

    /// Coefficient of v_i^k as a polynomial with the i-th exponent zeroed.
    SymPoly coeff_of(int i, const Rat& k) const {
        SymPoly r(nv_);
        for (const auto& [e, c] : t_)
            if (e[static_cast<size_t>(i)] == k) {
                Exp e2(e);
                e2[static_cast<size_t>(i)] = 0;
                r.add_term(e2, c);
            }
        return r;
    }

    const std::pair<const Exp, Rat>& leading() const {
        if (t_.empty()) throw std::logic_error("leading term of zero polynomial");
        return *t_.rbegin();
    }

    std::string str(const std::vector<std::string>& names) const {
        if (t_.empty()) return "0";
        std::string out;
        bool first = true;
        for (auto it = t_.rbegin(); it != t_.rend(); ++it) {
            const auto& [e, c] = *it;
            Rat cc = c;
            if (!first) out += cc > 0 ? " + " : " - ";
            else if (cc < 0) out += "-";
            if (cc < 0) cc = -cc;
            std::string mono;
            for (size_t i = 0; i < e.size(); ++i) {
                if (e[i] == 0) continue;
                if (!mono.empty()) mono += "*";
                mono += names[i];
                if (e[i] != 1) mono += "^" + rat_str(e[i]);
            }
            if (mono.empty()) out += rat_str(cc);
            else if (cc == 1) out += mono;
            else out += rat_str(cc) + "*" + mono;
            first = false;
        }
        return out;
    }

private:
    void check(const SymPoly& o) const {
        if (nv_ != o.nv_) throw std::invalid_argument("SymPoly arity mismatch");
    }
    int nv_ = 0;
    std::map<Exp, Rat> t_;
};

namespace polydetail {

inline Rat rat_content(const SymPoly& p) {
    Int num = 0, den = 1;
    for (const auto& [e, c] : p.terms()) {
        (void)e;
        num = igcd(num, rat_num(c));
        den = ilcm(den, rat_den(c));
    }
    if (num == 0) return 0;
    return Rat(num, den);
}

// exact division, assuming b | a; throws if the division is not exact
inline SymPoly divide_exact(const SymPoly& a, const SymPoly& b) {
    if (b.is_zero()) throw std::invalid_argument("division by zero polynomial");
    if (a.is_zero()) return SymPoly::zero(a.nvars());
    if (b.is_monomial()) {
        const auto& [be, bc] = *b.terms().begin();
        SymPoly r(a.nvars());
        for (const auto& [e, c] : a.terms()) {
            SymPoly::Exp e2(e);
            for (size_t i = 0; i < e2.size(); ++i) e2[i] -= be[i];
            r.add_term(e2, c / bc);
        }
        return r;
    }
    int pivot = -1;
    for (int i = 0; i < b.nvars(); ++i)
        if (b.depends_on(i)) { pivot = i; break; }
    // long division in the pivot variable; exponents must be integers here
    SymPoly rem = a, quot = SymPoly::zero(a.nvars());
    Rat bd = b.max_exponent(pivot);
    SymPoly blead = b.coeff_of(pivot, bd);
    int guard = 0;
    while (!rem.is_zero()) {
        Rat rd = rem.max_exponent(pivot);
        if (rd < bd) throw std::logic_error("divide_exact: not divisible");
        SymPoly rlead = rem.coeff_of(pivot, rd);
        SymPoly t = divide_exact(rlead, blead);
        SymPoly shift = SymPoly::var(a.nvars(), pivot, rd - bd);
        SymPoly piece = t * shift;
        quot = quot + piece;
        rem = rem - piece * b;
        if (++guard > 10000) throw std::logic_error("divide_exact: runaway");
    }
    return quot;
}

inline SymPoly gcd(SymPoly a, SymPoly b);

// content and primitive part w.r.t. pivot variable
inline SymPoly poly_content(const SymPoly& p, int pivot) {
    SymPoly g = SymPoly::zero(p.nvars());
    // collect coefficients of each pivot power
    std::map<Rat, SymPoly> coeffs;
    for (const auto& [e, c] : p.terms()) {
        Rat k = e[static_cast<size_t>(pivot)];
        auto it = coeffs.find(k);
        if (it == coeffs.end()) it = coeffs.emplace(k, SymPoly::zero(p.nvars())).first;
        SymPoly::Exp e2(e);
        e2[static_cast<size_t>(pivot)] = 0;
        it->second.add_term(e2, c);
    }
    for (auto& [k, q] : coeffs) {
        (void)k;
        g = gcd(g, q);
        if (g.is_constant() && !g.is_zero()) break;
    }
    return g;
}

/// Recursive multivariate gcd (primitive Euclid), unique up to sign; the
/// result is normalized with positive leading rational content.
inline SymPoly gcd(SymPoly a, SymPoly b) {
    if (a.is_zero()) std::swap(a, b);
    if (b.is_zero()) {
        if (a.is_zero()) return a;
        Rat c = rat_content(a);
        if (a.leading().second < 0) c = -c;
        return divide_exact(a, SymPoly::constant(a.nvars(), c)); // primitive, positive lead
    }
    if (a.is_constant() || b.is_constant()) return SymPoly::one(a.nvars());
    int pivot = -1;
    for (int i = 0; i < a.nvars(); ++i)
        if (a.depends_on(i) && b.depends_on(i)) { pivot = i; break; }
    if (pivot < 0) return SymPoly::one(a.nvars());
    auto primitive = [](SymPoly p) {
        if (p.is_zero()) return p;
        Rat c = rat_content(p);
        if (p.leading().second < 0) c = -c;
        return divide_exact(p, SymPoly::constant(p.nvars(), c));
    };
    SymPoly ca = poly_content(a, pivot), cb = poly_content(b, pivot);
    SymPoly pa = primitive(divide_exact(a, ca)), pb = primitive(divide_exact(b, cb));
    // primitive Euclid on the pivot variable with pseudo-remainders
    while (!pb.is_zero() && pb.depends_on(pivot)) {
        Rat da = pa.max_exponent(pivot), db = pb.max_exponent(pivot);
        if (da < db) { std::swap(pa, pb); continue; }
        SymPoly blead = pb.coeff_of(pivot, db);
        // pseudo-divide pa by pb
        SymPoly rem = pa;
        int guard = 0;
        while (!rem.is_zero() && rem.max_exponent(pivot) >= db) {
            Rat rd = rem.max_exponent(pivot);
            SymPoly rlead = rem.coeff_of(pivot, rd);
            rem = primitive(rem * blead - pb * rlead * SymPoly::var(a.nvars(), pivot, rd - db));
            if (++guard > 10000) throw std::logic_error("gcd: runaway pseudo-division");
        }
        pa = pb;
        pb = rem;
        if (!pb.is_zero()) {
            SymPoly c = poly_content(pb, pivot);
            pb = primitive(divide_exact(pb, c));
        }
    }
    SymPoly g = pb.is_zero() ? pa : SymPoly::one(a.nvars());
    g = g * gcd(ca, cb);
    Rat c = rat_content(g);
    if (!g.is_zero() && g.leading().second < 0) c = -c;
    if (c != 0 && c != 1) g = divide_exact(g, SymPoly::constant(g.nvars(), c));
    return g;
}

} // namespace polydetail

/// Fraction of SymPoly with light canonical normalization: Laurent shifts
/// removed, gcd cancelled, denominator's leading coefficient set to 1.
class PolyFrac {
public:
    PolyFrac() = default;
    explicit PolyFrac(SymPoly n) : num_(std::move(n)), den_(SymPoly::one(num_.nvars())) {}
    PolyFrac(SymPoly n, SymPoly d) : num_(std::move(n)), den_(std::move(d)) { normalize(); }

    static PolyFrac constant(int nv, const Rat& c) { return PolyFrac(SymPoly::constant(nv, c)); }

    const SymPoly& num() const { return num_; }
    const SymPoly& den() const { return den_; }
    bool is_zero() const { return num_.is_zero(); }
    int nvars() const { return num_.nvars(); }

    PolyFrac operator+(const PolyFrac& o) const {
        return PolyFrac(num_ * o.den_ + o.num_ * den_, den_ * o.den_);
    }
    PolyFrac operator-(const PolyFrac& o) const {
        return PolyFrac(num_ * o.den_ - o.num_ * den_, den_ * o.den_);
    }
    PolyFrac operator-() const {
        PolyFrac r = *this;
        r.num_ = -r.num_;
        return r;
    }
    PolyFrac operator*(const PolyFrac& o) const { return PolyFrac(num_ * o.num_, den_ * o.den_); }
    PolyFrac operator/(const PolyFrac& o) const {
        if (o.is_zero()) throw std::invalid_argument("PolyFrac division by zero");
        return PolyFrac(num_ * o.den_, den_ * o.num_);
    }
    PolyFrac pow(int n) const {
        if (n >= 0) return PolyFrac(num_.pow(n), den_.pow(n));
        return PolyFrac(den_.pow(-n), num_.pow(-n));
    }

    bool operator==(const PolyFrac& o) const { return (num_ * o.den_) == (o.num_ * den_); }
    bool operator!=(const PolyFrac& o) const { return !(*this == o); }
    bool operator<(const PolyFrac& o) const { return std::tie(num_, den_) < std::tie(o.num_, o.den_); }

    std::string str(const std::vector<std::string>& names) const {
        if (den_ == SymPoly::one(num_.nvars())) return num_.str(names);
        std::string n = num_.str(names), d = den_.str(names);
        return "(" + n + ")/(" + d + ")";
    }

private:
    void normalize() {
        if (den_.is_zero()) throw std::invalid_argument("PolyFrac: zero denominator");
        if (num_.is_zero()) {
            den_ = SymPoly::one(num_.nvars());
            return;
        }
        int nv = num_.nvars();
        // clear Laurent/Puiseux shifts: make all exponents nonnegative integers
        std::vector<Rat> scale(static_cast<size_t>(nv), Rat(1));
        for (int i = 0; i < nv; ++i) {
            Rat shift = std::min(num_.min_exponent(i), den_.min_exponent(i));
            if (shift != 0) {
                SymPoly m = SymPoly::var(nv, i, -shift);
                num_ = num_ * m;
                den_ = den_ * m;
            }
            Int L = 1;
            for (const auto& [e, c] : num_.terms()) { (void)c; L = ilcm(L, rat_den(e[static_cast<size_t>(i)])); }
            for (const auto& [e, c] : den_.terms()) { (void)c; L = ilcm(L, rat_den(e[static_cast<size_t>(i)])); }
            if (L != 1) {
                num_ = num_.scale_exponents(i, Rat(L));
                den_ = den_.scale_exponents(i, Rat(L));
                scale[static_cast<size_t>(i)] = Rat(1, L);
            }
        }
        // cancellation is best-effort; equality tests cross-multiply, so an
        // uncancelled fraction is still correct
        try {
            SymPoly g = polydetail::gcd(num_, den_);
            if (!g.is_constant()) {
                num_ = polydetail::divide_exact(num_, g);
                den_ = polydetail::divide_exact(den_, g);
            }
        } catch (const std::overflow_error&) {
        }
        for (int i = 0; i < nv; ++i)
            if (scale[static_cast<size_t>(i)] != 1) {
                num_ = num_.scale_exponents(i, scale[static_cast<size_t>(i)]);
                den_ = den_.scale_exponents(i, scale[static_cast<size_t>(i)]);
            }
        Rat lead = den_.leading().second;
        if (lead != 1) {
            SymPoly c = SymPoly::constant(nv, lead);
            num_ = polydetail::divide_exact(num_, c);
            den_ = polydetail::divide_exact(den_, c);
        }
    }

    SymPoly num_{0}, den_{0};
};

} // namespace motivic
