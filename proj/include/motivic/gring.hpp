#pragma once

#include "base_group.hpp"
#include "mvpoly.hpp"
#include "zmodule.hpp"

#include <map>
#include <optional>
#include <set>
#include <vector>

namespace motivic {

/// Affine form over the current coordinate stack: first the k base
/// generators, then the active fibering parameters (innermost last).
struct AffForm {
    std::vector<Rat> c;

    AffForm() = default;
    explicit AffForm(int dims) : c(static_cast<size_t>(dims), Rat(0)) {}

    int dims() const { return static_cast<int>(c.size()); }
    bool is_zero() const {
        return std::all_of(c.begin(), c.end(), [](const Rat& x) { return x == 0; });
    }
    AffForm extended(int dims) const {
        AffForm f(*this);
        f.c.resize(static_cast<size_t>(dims), Rat(0));
        return f;
    }
    AffForm operator+(const AffForm& o) const {
        AffForm f(*this);
        for (size_t i = 0; i < c.size(); ++i) f.c[i] += o.c[i];
        return f;
    }
    AffForm operator-(const AffForm& o) const {
        AffForm f(*this);
        for (size_t i = 0; i < c.size(); ++i) f.c[i] -= o.c[i];
        return f;
    }
    AffForm operator-() const {
        AffForm f(*this);
        for (auto& x : f.c) x = -x;
        return f;
    }
    AffForm operator*(const Rat& s) const {
        AffForm f(*this);
        for (auto& x : f.c) x *= s;
        return f;
    }
    bool operator<(const AffForm& o) const { return c < o.c; }
    bool operator==(const AffForm& o) const { return c == o.c; }

    static AffForm unit(int dims, int i) {
        AffForm f(dims);
        f.c[static_cast<size_t>(i)] = 1;
        return f;
    }
    static AffForm from_scalar(int dims, const GammaScalar& g) {
        AffForm f(dims);
        for (size_t i = 0; i < g.size(); ++i) f.c[i] = g[i];
        return f;
    }
    /// Substitutes coordinate i by a form over fewer (or equal) coordinates.
    AffForm subst(int i, const AffForm& value, int newdims) const {
        AffForm f(newdims);
        for (int j = 0; j < newdims; ++j) f.c[static_cast<size_t>(j)] = c[static_cast<size_t>(j)];
        Rat w = c[static_cast<size_t>(i)];
        for (int j = 0; j < value.dims() && j < newdims; ++j)
            f.c[static_cast<size_t>(j)] += w * value.c[static_cast<size_t>(j)];
        return f;
    }
};

/// Raised when a sign query is not constant on the current parameter box;
/// carries the form so the caller can split at its root.
struct NeedSplit {
    int param;    // coordinate index of the parameter to split
    AffForm form; // the offending form (nonzero coefficient at `param`)
};

/// Stack of fibering parameters over the base group.  Parameters always
/// range over intervals with nonnegative lower bound (pieces in negative
/// position are reflected before a parameter is pushed).
class Ctx {
public:
    explicit Ctx(BaseGroup G) : G_(G) {}

    const BaseGroup& group() const { return G_; }
    bool divisible() const { return G_.divisible; }
    int rank() const { return G_.rank; }
    int nparams() const { return static_cast<int>(params_.size()); }
    int dims() const { return G_.rank + nparams(); }

    /// lo/hi are forms over the pre-push coordinate stack; empty hi = +inf.
    void push_param(const AffForm& lo, const std::optional<AffForm>& hi) {
        Param p;
        p.lo = lo.extended(dims() + 1);
        if (hi) p.hi = hi->extended(dims() + 1);
        params_.push_back(std::move(p));
    }
    void pop_param() { params_.pop_back(); }

    const AffForm& lower(int param_index) const {
        return params_[static_cast<size_t>(param_index - G_.rank)].lo;
    }

    /// Sign of an affine form on the whole parameter box (open intervals).
    /// Returns 0 only for the identically-zero form; throws NeedSplit when
    /// the sign is not constant.
    int sign(const AffForm& f) const {
        // innermost parameter with nonzero coefficient
        int top = std::min(dims(), f.dims());
        for (int i = top - 1; i >= G_.rank; --i) {
            Rat w = f.c[static_cast<size_t>(i)];
            if (w == 0) continue;
            const Param& p = params_[static_cast<size_t>(i - G_.rank)];
            AffForm at_lo = f.subst(i, p.lo, i);
            int s_lo = sign(at_lo);
            if (s_lo == 0) s_lo = rat_sign(w);
            int s_hi;
            if (!p.hi) {
                s_hi = rat_sign(w);
            } else {
                AffForm at_hi = f.subst(i, *p.hi, i);
                s_hi = sign(at_hi);
                if (s_hi == 0) s_hi = -rat_sign(w);
            }
            if (s_lo == s_hi) return s_lo;
            throw NeedSplit{i, f};
        }
        for (int j = 0; j < G_.rank; ++j) {
            const Rat& x = f.c[static_cast<size_t>(j)];
            if (x != 0) return x > 0 ? 1 : -1;
        }
        return 0;
    }

    /// Comparison of forms as values on the region.
    int compare_forms(const AffForm& a, const AffForm& b) const { return sign(a - b); }

private:
    struct Param {
        AffForm lo;
        std::optional<AffForm> hi;
    };
    BaseGroup G_;
    std::vector<Param> params_;
};

/// One monomial of the ring: an e-part (canonical module of divisibility
/// arguments over the coordinate stack) times a multiset of normalized
/// interval-length arguments.
struct GMono {
    ZModule epart;
    std::vector<AffForm> iotas; // kept sorted

    auto tie() const { return std::tie(epart, iotas); }
    bool operator<(const GMono& o) const { return tie() < o.tie(); }
    bool operator==(const GMono& o) const { return tie() == o.tie(); }
};

/// Element of the dimension-free Grothendieck ring over the current
/// coordinate stack; with no active parameters this is K^df_Q of bounded
/// polytopes over the base group.
class GRing {
public:
    GRing() = default;
    explicit GRing(int dims) : dims_(dims) {}

    static GRing zero(int dims) { return GRing(dims); }
    static GRing scalar(int dims, const Rat& c) {
        GRing r(dims);
        if (c != 0) r.t_[GMono{ZModule::trivial(dims), {}}] = c;
        return r;
    }
    static GRing one(int dims) { return scalar(dims, 1); }
    static GRing from_mono(int dims, GMono m, const Rat& c) {
        GRing r(dims);
        if (c != 0) r.t_[std::move(m)] = c;
        return r;
    }

    int dims() const { return dims_; }
    bool is_zero() const { return t_.empty(); }
    const std::map<GMono, Rat>& terms() const { return t_; }

    void add_term(const GMono& m, const Rat& c) {
        if (c == 0) return;
        auto it = t_.find(m);
        if (it == t_.end()) {
            t_[m] = c;
        } else {
            it->second += c;
            if (it->second == 0) t_.erase(it);
        }
    }

    GRing operator+(const GRing& o) const {
        check(o);
        GRing r = *this;
        for (const auto& [m, c] : o.t_) r.add_term(m, c);
        return r;
    }
    GRing operator-() const {
        GRing r = *this;
        for (auto& [m, c] : r.t_) c = -c;
        return r;
    }
    GRing operator-(const GRing& o) const { return *this + (-o); }
    GRing operator*(const GRing& o) const {
        check(o);
        GRing r(dims_);
        for (const auto& [m1, c1] : t_)
            for (const auto& [m2, c2] : o.t_) {
                GMono m;
                m.epart = m1.epart.join(m2.epart);
                m.iotas = m1.iotas;
                m.iotas.insert(m.iotas.end(), m2.iotas.begin(), m2.iotas.end());
                std::sort(m.iotas.begin(), m.iotas.end());
                r.add_term(m, c1 * c2);
            }
        return r;
    }
    GRing operator*(const Rat& c) const {
        GRing r(dims_);
        if (c == 0) return r;
        r.t_ = t_;
        for (auto& [m, v] : r.t_) v *= c;
        return r;
    }

    bool operator==(const GRing& o) const { return dims_ == o.dims_ && t_ == o.t_; }
    bool operator<(const GRing& o) const { return std::tie(dims_, t_) < std::tie(o.dims_, o.t_); }

    /// Number of interval factors of the largest monomial (the filtration
    /// degree F_n of Prop. "generated by e, iota" style results).
    int iota_degree() const {
        int d = 0;
        for (const auto& [m, c] : t_) {
            (void)c;
            d = std::max(d, static_cast<int>(m.iotas.size()));
        }
        return d;
    }

    GRing filtration_part(int n) const {
        GRing r(dims_);
        for (const auto& [m, c] : t_)
            if (static_cast<int>(m.iotas.size()) == n) r.t_[m] = c;
        return r;
    }

    /// True when every monomial is parameter-free (safe to treat as a
    /// constant of the base group).
    bool param_free(int rank) const {
        for (const auto& [m, c] : t_) {
            (void)c;
            for (const auto& a : m.iotas)
                for (int i = rank; i < dims_; ++i)
                    if (a.c[static_cast<size_t>(i)] != 0) return false;
            for (const auto& row : m.epart.rational_basis())
                for (int i = rank; i < dims_; ++i)
                    if (row[static_cast<size_t>(i)] != 0) return false;
        }
        return true;
    }

private:
    void check(const GRing& o) const {
        if (dims_ != o.dims_) throw std::invalid_argument("GRing dimension mismatch");
    }
    int dims_ = 0;
    std::map<GMono, Rat> t_;
};

// ---------------------------------------------------------------------------
// Normalized constructors (the sound rewrite system)
// ---------------------------------------------------------------------------

namespace gdetail {

inline GRing iota_pos(const Ctx& ctx, const AffForm& v, int depth);

inline GRing iota_mono(const Ctx& ctx, const AffForm& arg) {
    GMono m;
    m.epart = ZModule::trivial(ctx.dims());
    m.iotas = {arg};
    return GRing::from_mono(ctx.dims(), std::move(m), 1);
}

inline GRing epart_elem(const Ctx& ctx, const std::vector<AffForm>& gens) {
    if (ctx.divisible()) return GRing::one(ctx.dims());
    std::vector<std::vector<Rat>> g;
    for (const auto& a : gens) g.push_back(a.c);
    GMono m;
    m.epart = ZModule::trivial(ctx.dims()).join(ZModule::from_generators(ctx.dims(), g));
    return GRing::from_mono(ctx.dims(), std::move(m), 1);
}

/// iota of a form that is >= 0 on the region, fully normalized.
inline GRing iota_pos(const Ctx& ctx, const AffForm& v, int depth) {
    if (depth > 400) throw std::logic_error("iota normalization runaway");
    const int dims = ctx.dims();
    const int k = ctx.rank();
    if (v.is_zero()) return GRing::zero(dims);

    if (ctx.divisible()) {
        // fully linear: iota(v) = sum of coefficients times unit lengths
        GRing r = GRing::zero(dims);
        for (int i = 0; i < dims; ++i) {
            const Rat& w = v.c[static_cast<size_t>(i)];
            if (w != 0) r = r + iota_mono(ctx, AffForm::unit(dims, i)) * w;
        }
        return r;
    }

    // negative parameter slopes: iota(v) = iota(v + n t_i) - n iota(t_i)
    for (int i = k; i < dims; ++i) {
        const Rat& w = v.c[static_cast<size_t>(i)];
        if (w < 0) {
            Int n = rat_ceil(-w);
            AffForm u = AffForm::unit(dims, i);
            return iota_pos(ctx, v + u * Rat(n), depth + 1) - iota_mono(ctx, u) * Rat(n);
        }
    }
    // parameter unit peels
    for (int i = k; i < dims; ++i) {
        const Rat& w = v.c[static_cast<size_t>(i)];
        if (w >= 1) {
            AffForm u = AffForm::unit(dims, i);
            AffForm rest = v - u;
            int s = ctx.sign(rest);
            if (s == 0) return iota_mono(ctx, u);
            if (s > 0) return iota_mono(ctx, u) + iota_pos(ctx, rest, depth + 1);
            // iota(u + w) = iota(u) - iota(-w) - e(-w) + 1 on {w < 0 <= u + w}
            return iota_mono(ctx, u) + GRing::one(dims) - epart_elem(ctx, {-rest}) -
                   iota_pos(ctx, -rest, depth + 1);
        }
    }
    // base coordinate peels
    for (int j = 0; j < k; ++j) {
        const Rat& w = v.c[static_cast<size_t>(j)];
        AffForm u = AffForm::unit(dims, j);
        if (w < 0) {
            // iota(v) = iota(v + gamma_j) - iota(gamma_j), always valid for v >= 0
            return iota_pos(ctx, v + u, depth + 1) - iota_mono(ctx, u);
        }
        if (w >= 1) {
            AffForm rest = v - u;
            int s = ctx.sign(rest);
            if (s == 0) return iota_mono(ctx, u);
            if (s > 0) return iota_mono(ctx, u) + iota_pos(ctx, rest, depth + 1);
            return iota_mono(ctx, u) + GRing::one(dims) - epart_elem(ctx, {-rest}) -
                   iota_pos(ctx, -rest, depth + 1);
        }
    }
    // fractional position
    bool has_param = false;
    for (int i = k; i < dims; ++i)
        if (v.c[static_cast<size_t>(i)] != 0) has_param = true;
    if (has_param) return iota_mono(ctx, v);
    // pure base fraction; apply the half-argument relation if applicable
    bool halves = true;
    for (int j = 0; j < k; ++j) {
        const Rat& w = v.c[static_cast<size_t>(j)];
        if (w != 0 && w != Rat(1, 2)) halves = false;
    }
    if (halves) {
        // 2 iota(z/2) = iota(z) + 1 - e(z/2) with z = 2v in A
        GRing r = GRing::zero(dims);
        for (int j = 0; j < k; ++j)
            if (v.c[static_cast<size_t>(j)] != 0)
                r = r + iota_mono(ctx, AffForm::unit(dims, j));
        r = r + GRing::one(dims) - epart_elem(ctx, {v});
        return r * Rat(1, 2);
    }
    return iota_mono(ctx, v);
}

} // namespace gdetail

/// iota(v), fully normalized for the given context (sound rewrites only).
inline GRing gring_iota(const Ctx& ctx, const AffForm& v) {
    int s = ctx.sign(v);
    if (s == 0) return GRing::zero(ctx.dims());
    if (s < 0) return -gdetail::iota_pos(ctx, -v, 0);
    return gdetail::iota_pos(ctx, v, 0);
}

inline GRing gring_iota(const Ctx& ctx, const GammaScalar& a) {
    return gring_iota(ctx, AffForm::from_scalar(ctx.dims(), a));
}

/// e(a_1)...e(a_l) as the canonical subgroup monomial.
inline GRing gring_epart(const Ctx& ctx, const std::vector<AffForm>& gens) {
    return gdetail::epart_elem(ctx, gens);
}

inline GRing gring_epart_scalars(const Ctx& ctx, const std::vector<GammaScalar>& gens) {
    std::vector<AffForm> fs;
    for (const auto& g : gens) fs.push_back(AffForm::from_scalar(ctx.dims(), g));
    return gdetail::epart_elem(ctx, fs);
}

/// rewrite() is the identity on the canonical representation; exposed to
/// document that elements are kept rewritten at all times.
inline GRing rewrite(const GRing& u) { return u; }

// ---------------------------------------------------------------------------
// Homomorphisms (parameter-free level)
// ---------------------------------------------------------------------------

/// count_m: e(a) -> [m spec(a) in Z], iota(a) -> ceil(m spec(a)) (sign-aware).
inline Rat count_hom(const GRing& u, int m, const Specialization& spec) {
    if (m < 1) throw std::invalid_argument("count_hom: m must be positive");
    if (!spec.all_integer())
        throw std::invalid_argument("count_hom: specialization must map A into Z");
    Rat total = 0;
    for (const auto& [mono, c] : u.terms()) {
        Rat val = c;
        bool zero = false;
        for (const auto& row : mono.epart.rational_basis()) {
            Rat s = 0;
            for (size_t j = 0; j < row.size(); ++j) {
                if (j >= spec.values.size()) {
                    if (row[j] != 0) throw std::invalid_argument("count_hom needs a parameter-free element");
                    continue;
                }
                s += row[j] * spec.values[j];
            }
            if (!rat_is_int(s * m)) { zero = true; break; }
        }
        if (zero) continue;
        for (const auto& a : mono.iotas) {
            Rat s = 0;
            for (size_t j = 0; j < a.c.size(); ++j) {
                if (j >= spec.values.size()) {
                    if (a.c[j] != 0) throw std::invalid_argument("count_hom needs a parameter-free element");
                    continue;
                }
                s += a.c[j] * spec.values[j];
            }
            if (s <= 0)
                throw std::invalid_argument("count_hom: specialization not order-consistent");
            val *= Rat(rat_ceil(s * m));
        }
        total += val;
    }
    return total;
}

/// psi: e(a) -> 1, iota(a) -> sum a_i x_i, Q-linearly extended.
inline PolyFrac psi_hom(const GRing& u, int rank) {
    SymPoly p(rank);
    for (const auto& [mono, c] : u.terms()) {
        SymPoly term = SymPoly::constant(rank, c);
        for (const auto& a : mono.iotas) {
            for (size_t i = static_cast<size_t>(rank); i < a.c.size(); ++i)
                if (a.c[i] != 0) throw std::invalid_argument("psi_hom needs a parameter-free element");
            SymPoly lin(rank);
            for (int j = 0; j < rank; ++j) {
                SymPoly::Exp e(static_cast<size_t>(rank), Rat(0));
                e[static_cast<size_t>(j)] = 1;
                lin.add_term(e, a.c[static_cast<size_t>(j)]);
            }
            term = term * lin;
        }
        p = p + term;
    }
    return PolyFrac(p);
}

// ---------------------------------------------------------------------------
// Three-valued comparison
// ---------------------------------------------------------------------------

enum class CompareVerdict { Equal, NotEqual, Unknown };

struct CompareResult {
    CompareVerdict verdict;
    std::string witness; // populated for NotEqual
};

/// Sound comparator: Equal only via coincidence of canonical forms, NotEqual
/// only with a separating homomorphism, otherwise Unknown.
inline CompareResult gring_compare(const GRing& u, const GRing& v, int rank,
                                   const std::vector<Specialization>& specs, int max_m = 12) {
    if (u == v) return {CompareVerdict::Equal, ""};
    GRing d = u - v;
    if (d.is_zero()) return {CompareVerdict::Equal, ""};
    for (const auto& s : specs)
        for (int m = 1; m <= max_m; ++m) {
            Rat c = count_hom(d, m, s);
            if (c != 0) {
                std::string w = "count_" + std::to_string(m) + " differs by " + rat_str(c);
                return {CompareVerdict::NotEqual, w};
            }
        }
    if (!psi_hom(d, rank).is_zero()) return {CompareVerdict::NotEqual, "psi image differs"};
    return {CompareVerdict::Unknown, ""};
}

inline std::vector<Specialization> default_specializations(int rank) {
    std::vector<Specialization> out;
    out.push_back(Specialization::identity(rank));
    if (rank == 1) {
        Specialization s2;
        s2.values = {Rat(2)};
        out.push_back(s2);
        Specialization s3;
        s3.values = {Rat(5)};
        out.push_back(s3);
    } else {
        Specialization s2 = Specialization::identity(rank);
        for (auto& v : s2.values) v *= 3;
        out.push_back(s2);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Unbounded-set Euler characteristics
// ---------------------------------------------------------------------------

enum class EulerVariant { Plus, Minus };

/// Element of the unbounded ring: polynomial in the formal class of the
/// half-infinite ray with bounded-ring coefficients.
struct UnboundedElem {
    int dims = 0;
    std::map<int, GRing> by_ray_power; // ray-class exponent -> coefficient

    static UnboundedElem from(const GRing& g) { return {g.dims(), {{0, g}}}; }
    static UnboundedElem ray(int dims) {
        return {dims, {{1, GRing::one(dims)}}};
    }
    UnboundedElem operator+(const UnboundedElem& o) const {
        UnboundedElem r = *this;
        for (const auto& [p, g] : o.by_ray_power) {
            auto it = r.by_ray_power.find(p);
            if (it == r.by_ray_power.end()) r.by_ray_power[p] = g;
            else {
                it->second = it->second + g;
                if (it->second.is_zero()) r.by_ray_power.erase(it);
            }
        }
        return r;
    }
    UnboundedElem operator*(const UnboundedElem& o) const {
        UnboundedElem r;
        r.dims = dims;
        for (const auto& [p1, g1] : by_ray_power)
            for (const auto& [p2, g2] : o.by_ray_power) {
                GRing prod = g1 * g2;
                if (prod.is_zero()) continue;
                auto it = r.by_ray_power.find(p1 + p2);
                if (it == r.by_ray_power.end()) r.by_ray_power[p1 + p2] = prod;
                else {
                    it->second = it->second + prod;
                    if (it->second.is_zero()) r.by_ray_power.erase(it);
                }
            }
        return r;
    }
};

/// The two Q-characters of the unbounded ring in divisible mode:
/// e -> 1, iota(a) -> 0, and the ray class to a root of its quadratic
/// relation.  Variant Plus takes the root 0 shared by both stated forms of
/// the relation; Minus takes the nontrivial root -1 of the statement's form.
inline Rat euler_unbounded(const UnboundedElem& u, EulerVariant variant, const BaseGroup& G) {
    if (!G.divisible) throw std::invalid_argument("euler_unbounded requires divisible mode");
    Rat ray_value = variant == EulerVariant::Plus ? Rat(0) : Rat(-1);
    Rat total = 0;
    for (const auto& [p, g] : u.by_ray_power) {
        Rat rv = 1;
        for (int i = 0; i < p; ++i) rv *= ray_value;
        for (const auto& [mono, c] : g.terms()) {
            if (!mono.iotas.empty()) continue; // iota(a) -> 0
            total += c * rv;                   // e -> 1
        }
    }
    return total;
}

// ---------------------------------------------------------------------------
// Canonical printing (library text form; the parser lives in expr_text.hpp)
// ---------------------------------------------------------------------------

inline std::string scalar_str_for_rank(const GammaScalar& a, int rank) {
    if (rank == 1) return rat_str(a[0]);
    return gs_str(a);
}

inline std::string gring_str(const GRing& u, int rank) {
    if (u.is_zero()) return "0";
    std::string out;
    bool first = true;
    for (const auto& [mono, c] : u.terms()) {
        Rat cc = c;
        if (!first) out += cc > 0 ? " + " : " - ";
        else if (cc < 0) out += "-";
        if (cc < 0) cc = -cc;
        std::string factors;
        for (const auto& g : mono.epart.fractional_generators()) {
            GammaScalar s(g.begin(), g.begin() + rank);
            if (!factors.empty()) factors += "*";
            factors += "e(" + scalar_str_for_rank(s, rank) + ")";
        }
        for (const auto& a : mono.iotas) {
            GammaScalar s(a.c.begin(), a.c.begin() + rank);
            if (!factors.empty()) factors += "*";
            factors += "i(" + scalar_str_for_rank(s, rank) + ")";
        }
        if (factors.empty()) out += rat_str(cc);
        else if (cc == 1) out += factors;
        else out += rat_str(cc) + "*" + factors;
        first = false;
    }
    return out;
}

} // namespace motivic
