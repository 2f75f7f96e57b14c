#pragma once

#include "gring.hpp"
#include "polytope.hpp"

#include <optional>
#include <vector>

namespace motivic {

/// A symbolic function of one extra variable: an element of the ring over the
/// coordinate stack extended by one innermost parameter.
using FnTerm = GRing;

/// One piece of a fibering partition: a definable point or an open interval
/// together with the fiber class valid there.
struct Piece {
    bool is_point = false;
    AffForm point;   // when is_point
    AffForm lo, hi;  // open interval otherwise
    FnTerm value;    // over dims+1 for intervals, over dims for points
};

namespace engine {

struct PGuard {
    Ctx& ctx;
    explicit PGuard(Ctx& c, const AffForm& lo, const std::optional<AffForm>& hi) : ctx(c) {
        ctx.push_param(lo, hi);
    }
    ~PGuard() { ctx.pop_param(); }
};

/// Working monomial of the integrator: coeff * constant * module * product of
/// variable-dependent interval factors, over dims+1 coordinates.
struct Item {
    Rat coeff = 1;
    GRing constant;               // over dims (outer)
    ZModule module;               // over dims+1
    std::vector<AffForm> factors; // over dims+1, each depending on the last coordinate
};

inline AffForm restrict_form(const AffForm& f) {
    AffForm g = f;
    g.c.pop_back();
    return g;
}

inline AffForm subst_last(const AffForm& f, const AffForm& value) {
    int d = f.dims() - 1;
    return f.subst(d, value, d);
}

/// Split of a module over dims+1 into the standard divisibility data for the
/// active (last) coordinate and the constant part (Lemma "standard term").
struct ActiveSplit {
    bool depends = false;
    Int m = 1;        // denominator of the standard term
    AffForm shift;    // b* over dims: the standard term is e((t + b*)/m)
    ZModule constant; // over dims
};

inline ActiveSplit split_active(const ZModule& M) {
    int d = M.dim();
    std::vector<std::vector<Rat>> perm;
    for (const auto& r : M.rational_basis()) {
        std::vector<Rat> p;
        p.push_back(r[static_cast<size_t>(d - 1)]);
        for (int j = 0; j + 1 < d; ++j) p.push_back(r[static_cast<size_t>(j)]);
        perm.push_back(std::move(p));
    }
    ZModule P = ZModule::from_generators(d, perm);
    auto basis = P.rational_basis();
    ActiveSplit out;
    // row 0 is the unique basis row with nonzero active coordinate
    Rat a0 = basis[0][0];
    Rat minv = Rat(1) / a0;
    if (!rat_is_int(minv) || minv < 1) throw std::logic_error("split_active: bad projection");
    out.m = rat_num(minv);
    out.depends = out.m != 1;
    out.shift = AffForm(d - 1);
    for (int j = 0; j + 1 < d; ++j) out.shift.c[static_cast<size_t>(j)] = basis[0][static_cast<size_t>(j + 1)] * Rat(out.m);
    std::vector<std::vector<Rat>> cgens;
    for (size_t i = 1; i < basis.size(); ++i)
        cgens.emplace_back(basis[i].begin() + 1, basis[i].end());
    out.constant = ZModule::from_generators(d - 1, cgens);
    return out;
}

class Integrator {
public:
    Integrator(Ctx& ctx, bool graded) : ctx_(ctx), graded_(graded) {}

    /// Class of the set swept over the half-open range [u, v) by the item's
    /// fibers.  u, v are forms over the current (outer) coordinates.
    /// Linearity lets the coefficient and the constant part factor out of the
    /// whole computation, which makes the core cacheable.
    GRing halfopen(const AffForm& u, const AffForm& v, const Item& item, int depth) {
        Item core;
        core.module = item.module;
        core.factors = item.factors;
        core.constant = GRing::one(ctx_.dims());
        CacheKey key{u.c, v.c, item.module, item.factors};
        auto hit = cache_.find(key);
        GRing val(0);
        if (hit != cache_.end()) {
            val = hit->second;
        } else {
            val = halfopen_core(u, v, core, depth);
            cache_.emplace(std::move(key), val);
        }
        return val * item.constant * item.coeff;
    }

    GRing halfopen_core(const AffForm& u, const AffForm& v, const Item& item, int depth) {
        if (++depth > 900) throw std::logic_error("integrator recursion runaway");
        const int d = ctx_.dims();
        int sd = ctx_.sign(v - u);
        if (sd == 0) return GRing::zero(ctx_.dims());
        if (sd < 0) throw std::logic_error("integrator: inverted range");
        int su = ctx_.sign(u);
        if (su < 0) {
            int sv = ctx_.sign(v);
            if (sv > 0) {
                AffForm zero(ctx_.dims());
                return halfopen(u, zero, item, depth) + halfopen(zero, v, item, depth);
            }
            // fully nonpositive range: reflect the fiber variable
            Item r = reflect(item);
            return halfopen(-v, -u, r, depth) - slice(r, -v) + slice(r, -u);
        }

        // eliminate the divisibility module via the standard-term substitution
        auto split = split_active(item.module);
        Item it = item;
        it.module = ZModule::trivial(d + 1);
        {
            GMono cm;
            cm.epart = split.constant;
            it.constant = it.constant * GRing::from_mono(d, cm, 1);
        }
        if (split.depends) {
            Rat m(split.m);
            AffForm b = split.shift;
            // t = m s - b; bounds and factor arguments transform accordingly
            AffForm u2 = (u + b) * (Rat(1) / m);
            AffForm v2 = (v + b) * (Rat(1) / m);
            for (auto& f : it.factors) {
                Rat w = f.c[static_cast<size_t>(d)];
                AffForm nf = f;
                nf.c[static_cast<size_t>(d)] = w * m;
                AffForm shift_full = (b * w).extended(d + 1);
                nf = nf - shift_full;
                f = nf;
            }
            return halfopen(u2, v2, it, depth);
        }

        // analyze factors on the open box (u, v)
        int fix = -1, fix_kind = 0; // 1: zero factor, 2: flip
        std::optional<AffForm> peel_rest;
        int peel_index = -1, peel_rest_sign = 0;
        bool need_split = false;
        AffForm split_root;
        {
            PGuard g(ctx_, u, v);
            try {
                for (size_t i = 0; i < it.factors.size(); ++i) {
                    int s = ctx_.sign(it.factors[i]);
                    if (s == 0) { fix = static_cast<int>(i); fix_kind = 1; break; }
                    if (s < 0) { fix = static_cast<int>(i); fix_kind = 2; break; }
                }
                if (fix < 0) {
                    for (size_t i = 0; i < it.factors.size(); ++i) {
                        const AffForm& f = it.factors[i];
                        Rat w = f.c[static_cast<size_t>(d)];
                        if (w < 0) { peel_index = static_cast<int>(i); peel_rest_sign = 9; break; }
                        AffForm rest = f;
                        rest.c[static_cast<size_t>(d)] -= 1;
                        if (w > 1 || (w == 1 && !restrict_or_zero(rest))) {
                            int s = ctx_.sign(rest);
                            peel_index = static_cast<int>(i);
                            peel_rest = rest;
                            peel_rest_sign = s;
                            break;
                        }
                    }
                }
            } catch (const NeedSplit& ns) {
                if (ns.param != d) throw;
                need_split = true;
                // root of the offending form in the fiber variable
                Rat w = ns.form.c[static_cast<size_t>(ns.param)];
                AffForm rest = ns.form;
                rest.c[static_cast<size_t>(ns.param)] = 0;
                split_root = restrict_form(rest) * (Rat(-1) / w);
            }
        }
        if (need_split)
            return halfopen(u, split_root, it, depth) + halfopen(split_root, v, it, depth);
        if (fix_kind == 1) return GRing::zero(ctx_.dims());
        if (fix_kind == 2) {
            Item f2 = it;
            f2.factors[static_cast<size_t>(fix)] = -f2.factors[static_cast<size_t>(fix)];
            f2.coeff = -f2.coeff;
            return halfopen(u, v, f2, depth);
        }
        if (peel_index >= 0) return peel(u, v, it, peel_index, peel_rest, peel_rest_sign, depth);
        return decompose(u, v, it, depth);
    }

    /// Value of the item's fiber over the single point w, including the class
    /// of the point itself.
    GRing slice(const Item& item, const AffForm& w) {
        if (graded_) return GRing::zero(ctx_.dims());
        GRing out = item.constant * item.coeff;
        out = out * gring_epart(ctx_, {w});
        // substitute into the module
        std::vector<AffForm> gens;
        for (const auto& r : item.module.rational_basis()) {
            AffForm f(ctx_.dims());
            for (int j = 0; j < ctx_.dims(); ++j) f.c[static_cast<size_t>(j)] = r[static_cast<size_t>(j)];
            f = f + w * r[static_cast<size_t>(ctx_.dims())];
            gens.push_back(f);
        }
        out = out * gring_epart(ctx_, gens);
        for (const auto& f : item.factors) out = out * gring_iota(ctx_, subst_last(f, w));
        return out;
    }

private:
    bool restrict_or_zero(const AffForm& f) {
        for (const Rat& x : f.c)
            if (x != 0) return false;
        return true;
    }

    Item reflect(const Item& item) const {
        Item r = item;
        int d = ctx_.dims();
        for (auto& f : r.factors) f.c[static_cast<size_t>(d)] = -f.c[static_cast<size_t>(d)];
        std::vector<std::vector<Rat>> gens;
        for (auto row : item.module.rational_basis()) {
            row[static_cast<size_t>(d)] = -row[static_cast<size_t>(d)];
            gens.push_back(std::move(row));
        }
        r.module = ZModule::from_generators(d + 1, gens);
        return r;
    }

    Item with_factor_replaced(const Item& it, int idx, const std::optional<AffForm>& repl) const {
        Item r = it;
        if (repl) {
            r.factors[static_cast<size_t>(idx)] = *repl;
        } else {
            r.factors.erase(r.factors.begin() + idx);
        }
        return r;
    }

    /// Adds an interval factor, folding variable-free arguments into the
    /// constant.
    void add_iota(Item& it, const AffForm& f) {
        if (f.c[static_cast<size_t>(ctx_.dims())] == 0) {
            it.constant = it.constant * gring_iota(ctx_, restrict_form(f));
        } else {
            it.factors.push_back(f);
        }
    }
    void add_epart(Item& it, const AffForm& f) {
        if (f.c[static_cast<size_t>(ctx_.dims())] == 0) {
            it.constant = it.constant * gring_epart(ctx_, {restrict_form(f)});
        } else {
            std::vector<std::vector<Rat>> rows = it.module.rational_basis();
            rows.push_back(f.c);
            it.module = ZModule::from_generators(ctx_.dims() + 1, rows);
        }
    }

    GRing peel(const AffForm& u, const AffForm& v, const Item& it, int idx,
               const std::optional<AffForm>& rest, int rest_sign, int depth) {
        int d = ctx_.dims();
        const AffForm f = it.factors[static_cast<size_t>(idx)];
        Rat w = f.c[static_cast<size_t>(d)];
        AffForm unit = AffForm::unit(d + 1, d);
        if (rest_sign == 9) {
            // negative slope: iota(f) = iota(f + n t) - n iota(t) on the
            // positivity region
            Int n = rat_ceil(-w);
            Item a = with_factor_replaced(it, idx, std::nullopt);
            add_iota(a, f + unit * Rat(n)); // may fold into the constant
            Item b = with_factor_replaced(it, idx, unit);
            b.coeff = b.coeff * Rat(-n);
            return halfopen(u, v, a, depth) + halfopen(u, v, b, depth);
        }
        // slope >= 1: iota(f) = iota(t) + iota(rest)            (rest >= 0)
        //          or iota(t) + 1 - e(rest) - iota(-rest)       (rest < 0)
        if (rest_sign == 0) {
            return halfopen(u, v, with_factor_replaced(it, idx, unit), depth);
        }
        GRing out = GRing::zero(d);
        {
            Item a = with_factor_replaced(it, idx, unit);
            out = out + halfopen(u, v, a, depth);
        }
        if (rest_sign > 0) {
            Item b = with_factor_replaced(it, idx, std::nullopt);
            add_iota(b, *rest);
            out = out + halfopen(u, v, b, depth);
        } else {
            if (!graded_) {
                Item c = with_factor_replaced(it, idx, std::nullopt);
                out = out + halfopen(u, v, c, depth);
                Item e = with_factor_replaced(it, idx, std::nullopt);
                e.coeff = -e.coeff;
                add_epart(e, -*rest);
                out = out + halfopen(u, v, e, depth);
            }
            Item m = with_factor_replaced(it, idx, std::nullopt);
            m.coeff = -m.coeff;
            add_iota(m, -*rest);
            out = out + halfopen(u, v, m, depth);
        }
        return out;
    }

    /// The argmax decomposition: all factors have slope in (0,1] with the
    /// slope-1 factors being exact unit arguments.
    GRing decompose(const AffForm& u, const AffForm& v, const Item& it, int depth) {
        int d = ctx_.dims();
        const int n = static_cast<int>(it.factors.size());
        GRing iu = gring_iota(ctx_, u), iv = gring_iota(ctx_, v);
        GRing range_half = iv - iu; // class of [u, v)
        if (n == 0) return it.constant * range_half * it.coeff;

        AffForm unit = AffForm::unit(d + 1, d);
        int nu = 1;
        for (const auto& f : it.factors)
            if (f == unit) ++nu;

        // X0: fibers whose thresholds sit at or below u
        GRing open_box = GRing::one(d), closed_box = GRing::one(d);
        for (const auto& f : it.factors) {
            AffForm gu = subst_last(f, u);
            GRing io = gring_iota(ctx_, gu);
            open_box = open_box * io;
            if (!graded_) closed_box = closed_box * (io + gring_epart(ctx_, {gu}));
        }
        GRing total = open_box * range_half * it.constant * it.coeff;
        if (!graded_) {
            GRing range_open = range_half - gring_epart(ctx_, {u});
            total = total + (closed_box - open_box) * range_open * it.constant * it.coeff;
        }

        for (int j = 0; j < n; ++j) {
            const AffForm& fj = it.factors[static_cast<size_t>(j)];
            Rat aj = fj.c[static_cast<size_t>(d)];
            AffForm cj = fj;
            cj.c[static_cast<size_t>(d)] = 0;
            AffForm A = subst_last(fj, u), B = subst_last(fj, v);
            if (ctx_.sign(B - A) == 0) continue;
            bool self_j = fj == unit;
            // m_j(s) = (s - c_j)/a_j as a form in the fresh fiber variable
            AffForm mj = (unit - cj) * (Rat(1) / aj);
            // composed arguments h_k(s) = a_k m_j(s) + c_k
            std::vector<AffForm> comp;
            for (int k = 0; k < n; ++k) {
                const AffForm& fk = it.factors[static_cast<size_t>(k)];
                Rat ak = fk.c[static_cast<size_t>(d)];
                AffForm ck = fk;
                ck.c[static_cast<size_t>(d)] = 0;
                comp.push_back(mj * ak + ck);
            }
            // branches: middle term x choice of iota/e for the bar factors
            int nbar = n - 1 - j;
            for (int middle = 0; middle < 3; ++middle) {
                if (graded_ && middle == 2) continue;
                for (int mask = 0; mask < (1 << nbar); ++mask) {
                    if (graded_ && mask != 0) continue;
                    bool is_self = self_j && middle == 1 && mask == 0;
                    Item br;
                    br.coeff = it.coeff;
                    br.constant = it.constant;
                    br.module = it.module; // trivial here
                    if (middle == 0) {
                        br.constant = br.constant * iv;
                    } else if (middle == 1) {
                        br.coeff = -br.coeff;
                        add_iota(br, mj);
                    } else {
                        br.coeff = -br.coeff;
                        if (!self_j) add_epart(br, mj); // e(s) itself is trivially 1
                    }
                    for (int k = 0; k < n; ++k) {
                        if (k == j) continue;
                        bool use_e = false;
                        if (k > j) {
                            int bit = k - j - 1;
                            use_e = (mask >> bit) & 1;
                        }
                        if (use_e) add_epart(br, comp[static_cast<size_t>(k)]);
                        else add_iota(br, comp[static_cast<size_t>(k)]);
                    }
                    if (is_self) {
                        // the half-open integral reproduces the original item
                        // and is moved to the left; only the open-interval
                        // slice correction remains
                        total = total - slice(br, A);
                        continue;
                    }
                    GRing piece = halfopen(A, B, br, depth) - slice(br, A);
                    total = total + piece;
                }
            }
        }
        return total * (Rat(1) / Rat(nu));
    }

    struct CacheKey {
        std::vector<Rat> u, v;
        ZModule module;
        std::vector<AffForm> factors;
        bool operator<(const CacheKey& o) const {
            return std::tie(u, v, module, factors) < std::tie(o.u, o.v, o.module, o.factors);
        }
    };

    Ctx& ctx_;
    bool graded_;
    std::map<CacheKey, GRing> cache_;
};

inline std::vector<Item> items_of(const Ctx& ctx, const GRing& f) {
    int d = ctx.dims();
    std::vector<Item> out;
    for (const auto& [mono, c] : f.terms()) {
        Item it;
        it.coeff = c;
        it.constant = GRing::one(d);
        it.module = mono.epart;
        for (const auto& a : mono.iotas) {
            if (a.c[static_cast<size_t>(d)] == 0) {
                GMono m;
                m.epart = ZModule::trivial(d);
                AffForm r = a;
                r.c.pop_back();
                m.iotas = {r};
                it.constant = it.constant * GRing::from_mono(d, m, 1);
            } else {
                it.factors.push_back(a);
            }
        }
        out.push_back(std::move(it));
    }
    return out;
}

} // namespace engine

// ---------------------------------------------------------------------------
// Public operations
// ---------------------------------------------------------------------------

/// Exact class of {(t, fiber): lower <= t < upper} for a symbolic function of
/// the innermost variable; with lower > upper the sign convention
/// int_a^b = -int_b^a applies.
inline GRing integrate_fn(Ctx& ctx, const FnTerm& f, const AffForm& lower, const AffForm& upper,
                          bool graded = false) {
    if (f.dims() != ctx.dims() + 1) throw std::invalid_argument("integrate_fn: arity mismatch");
    int s = ctx.sign(upper - lower);
    if (s == 0) return GRing::zero(ctx.dims());
    if (s < 0) return -integrate_fn(ctx, f, upper, lower, graded);
    engine::Integrator I(ctx, graded);
    GRing out = GRing::zero(ctx.dims());
    for (auto& it : engine::items_of(ctx, f)) out = out + I.halfopen(lower, upper, it, 0);
    return out;
}

inline GRing integrate_fn(Ctx& ctx, const FnTerm& f, const GammaScalar& lower, const GammaScalar& upper,
                          bool graded = false) {
    return integrate_fn(ctx, f, AffForm::from_scalar(ctx.dims(), lower),
                        AffForm::from_scalar(ctx.dims(), upper), graded);
}

/// Top-degree variant of integrate_fn (agrees with it modulo lower
/// filtration).
inline GRing graded_integrate(Ctx& ctx, const FnTerm& f, const AffForm& lower, const AffForm& upper) {
    return integrate_fn(ctx, f, lower, upper, true);
}

/// Standard-form extraction for a product of divisibility terms of one
/// variable: constant part times e((t + b)/m).
struct FnStdForm {
    bool depends = false;
    Int m = 1;
    AffForm shift;    // b, over the outer coordinates
    ZModule constant; // constant divisibility part
};

inline FnStdForm normalize_fn(const ZModule& efun) {
    auto s = engine::split_active(efun);
    FnStdForm out;
    out.depends = s.depends;
    out.m = s.m;
    out.shift = s.shift;
    out.constant = s.constant;
    return out;
}

/// C_n(arg) = binomial(iota(arg), n), the exact antiderivative basis.
inline GRing c_poly(const Ctx& ctx, int n, const AffForm& arg) {
    if (n < 0) throw std::invalid_argument("c_poly: n must be nonnegative");
    GRing x = gring_iota(ctx, arg);
    GRing num = GRing::one(ctx.dims());
    for (int i = 0; i < n; ++i) num = num * (x - GRing::scalar(ctx.dims(), i));
    Rat fact = 1;
    for (int i = 2; i <= n; ++i) fact *= i;
    return num * (Rat(1) / fact);
}

inline GRing c_poly(const Ctx& ctx, int n, const GammaScalar& arg) {
    return c_poly(ctx, n, AffForm::from_scalar(ctx.dims(), arg));
}

// ---------------------------------------------------------------------------
// class_of: the main algorithm
// ---------------------------------------------------------------------------

namespace engine {

struct CCons {
    std::vector<Rat> row; // over the remaining cell variables
    Rel rel;
    AffForm rhs; // over the context coordinates
};

inline std::vector<CCons> to_ineq(const std::vector<CCons>& cs) {
    std::vector<CCons> out;
    for (const auto& c : cs) {
        if (c.rel == Rel::EQ) {
            out.push_back({c.row, Rel::LE, c.rhs});
            std::vector<Rat> nr(c.row);
            for (auto& x : nr) x = -x;
            out.push_back({nr, Rel::LE, -c.rhs});
        } else {
            out.push_back(c);
        }
    }
    return out;
}

/// Fourier-Motzkin elimination of cell variable v, keeping every derived
/// constraint for breakpoint discovery.
inline std::vector<CCons> eliminate_var(const std::vector<CCons>& sys, int v) {
    std::vector<CCons> out;
    std::vector<const CCons*> lower, upper;
    for (const auto& q : sys) {
        const Rat& c = q.row[static_cast<size_t>(v)];
        if (c == 0) out.push_back(q);
        else if (c > 0) upper.push_back(&q);
        else lower.push_back(&q);
    }
    for (auto lo : lower)
        for (auto up : upper) {
            Rat a = -lo->row[static_cast<size_t>(v)], b = up->row[static_cast<size_t>(v)];
            CCons q;
            q.row.resize(lo->row.size());
            for (size_t j = 0; j < q.row.size(); ++j) q.row[j] = b * lo->row[j] + a * up->row[j];
            q.row[static_cast<size_t>(v)] = 0;
            q.rhs = lo->rhs * b + up->rhs * a;
            q.rel = (lo->rel == Rel::LT || up->rel == Rel::LT) ? Rel::LT : Rel::LE;
            out.push_back(std::move(q));
        }
    return out;
}

class ClassOf {
public:
    explicit ClassOf(Ctx& ctx) : ctx_(ctx) {}

    GRing cell(std::vector<CCons> cs, int nvars, int depth) {
        if (++depth > 100) throw std::logic_error("class_of recursion runaway");
        // resolve variable-free constraints on the current region
        std::vector<CCons> live;
        for (auto& c : cs) {
            bool zero = std::all_of(c.row.begin(), c.row.end(), [](const Rat& x) { return x == 0; });
            if (!zero) { live.push_back(std::move(c)); continue; }
            int s = ctx_.sign(c.rhs);
            bool ok = c.rel == Rel::LT ? s > 0 : c.rel == Rel::LE ? s >= 0 : s == 0;
            if (!ok) return GRing::zero(ctx_.dims());
        }
        if (nvars == 0) return GRing::one(ctx_.dims());

        // candidate breakpoints of the first variable
        std::vector<AffForm> roots;
        roots.push_back(AffForm(ctx_.dims())); // always split at 0
        {
            std::vector<CCons> sys = to_ineq(live);
            std::vector<CCons> acc = sys;
            std::vector<CCons> cur = sys;
            for (int v = nvars - 1; v >= 1; --v) {
                cur = eliminate_var(cur, v);
                acc.insert(acc.end(), cur.begin(), cur.end());
            }
            for (const auto& q : acc) {
                const Rat& c0 = q.row[0];
                if (c0 == 0) continue;
                bool pure = true;
                for (size_t j = 1; j < q.row.size(); ++j)
                    if (q.row[j] != 0) { pure = false; break; }
                if (!pure) continue;
                roots.push_back(q.rhs * (Rat(1) / c0));
            }
        }

        for (int attempt = 0; attempt < 200; ++attempt) {
            try {
                return sweep(live, nvars, roots, depth);
            } catch (const NeedSplit& ns) {
                // only splits of the parameter pushed by this level's sweep
                // are handled here; outer ones belong to enclosing levels
                if (ns.param != ctx_.dims()) throw;
                Rat w = ns.form.c[static_cast<size_t>(ns.param)];
                // coordinates above ns.param are zero (innermost nonzero one)
                AffForm root(ctx_.dims());
                for (int j = 0; j < ctx_.dims(); ++j)
                    root.c[static_cast<size_t>(j)] = ns.form.c[static_cast<size_t>(j)] * (Rat(-1) / w);
                roots.push_back(root);
            }
        }
        throw std::logic_error("class_of: breakpoint refinement did not converge");
    }

private:
    GRing sweep(const std::vector<CCons>& cs, int nvars, const std::vector<AffForm>& raw_roots,
                int depth) {
        // sort and deduplicate roots by value on the region
        std::vector<AffForm> roots;
        for (const auto& r : raw_roots) {
            bool dup = false;
            for (const auto& s : roots)
                if (ctx_.sign(r - s) == 0) { dup = true; break; }
            if (!dup) roots.push_back(r);
        }
        std::sort(roots.begin(), roots.end(),
                  [&](const AffForm& a, const AffForm& b) { return ctx_.sign(a - b) < 0; });

        GRing total = GRing::zero(ctx_.dims());
        for (size_t i = 0; i < roots.size(); ++i) {
            total = total + point_piece(cs, nvars, roots[i], depth);
            if (i + 1 < roots.size())
                total = total + interval_piece(cs, nvars, roots[i], roots[i + 1], depth, false);
        }
        return total;
    }

    GRing point_piece(const std::vector<CCons>& cs, int nvars, const AffForm& r, int depth) {
        std::vector<CCons> sub;
        for (const auto& c : cs) {
            CCons q;
            q.row.assign(c.row.begin() + 1, c.row.end());
            q.rel = c.rel;
            q.rhs = c.rhs - r * c.row[0];
            sub.push_back(std::move(q));
        }
        GRing fiber = cell(sub, nvars - 1, depth);
        if (fiber.is_zero()) return fiber;
        return gring_epart(ctx_, {r}) * fiber;
    }

    GRing interval_piece(const std::vector<CCons>& cs, int nvars, const AffForm& a, const AffForm& b,
                         int depth, bool reflected) {
        if (ctx_.sign(a) < 0) {
            if (reflected) throw std::logic_error("class_of: reflected interval still negative");
            // 0 is always among the roots, so the interval is fully negative:
            // reflect the fibering variable
            std::vector<CCons> refl = cs;
            for (auto& c : refl) c.row[0] = -c.row[0];
            try {
                return interval_piece(refl, nvars, -b, -a, depth, true);
            } catch (NeedSplit ns) {
                // map split requests on the reflected variable back
                if (ns.param == ctx_.dims() && ns.param < ns.form.dims())
                    ns.form.c[static_cast<size_t>(ns.param)] =
                        -ns.form.c[static_cast<size_t>(ns.param)];
                throw ns;
            }
        }
        int d = ctx_.dims();
        GRing fiber(0);
        {
            PGuard g(ctx_, a, b);
            std::vector<CCons> sub;
            for (const auto& c : cs) {
                CCons q;
                q.row.assign(c.row.begin() + 1, c.row.end());
                q.rel = c.rel;
                q.rhs = c.rhs.extended(d + 1) - AffForm::unit(d + 1, d) * c.row[0];
                sub.push_back(std::move(q));
            }
            fiber = cell(sub, nvars - 1, depth);
        }
        if (fiber.is_zero()) return GRing::zero(d);
        engine::Integrator I(ctx_, false);
        GRing out = GRing::zero(d);
        for (auto& it : engine::items_of(ctx_, fiber))
            out = out + I.halfopen(a, b, it, depth * 8) - I.slice(it, a);
        return out;
    }

    Ctx& ctx_;
};

} // namespace engine

/// The central algorithm: the exact class of a bounded definable set.
inline GRing class_of(const DefinableSet& X) {
    if (!is_bounded(X)) throw std::invalid_argument("class_of: unbounded set");
    Ctx ctx(X.group);
    GRing total = GRing::zero(ctx.dims());
    engine::ClassOf co(ctx);
    for (const auto& c : X.cells) {
        std::vector<engine::CCons> cs;
        for (const auto& q : c.constraints) {
            engine::CCons cc;
            cc.row.assign(q.row.begin(), q.row.end());
            cc.rel = q.rel;
            cc.rhs = AffForm::from_scalar(ctx.dims(), q.rhs);
            cs.push_back(std::move(cc));
        }
        total = total + co.cell(cs, c.ambient, 0);
    }
    return total;
}

} // namespace motivic
