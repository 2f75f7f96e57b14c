#pragma once

#include "base_group.hpp"

#include <numeric>
#include <vector>

namespace motivic {

namespace detail {

/// Row-style Hermite normal form of the lattice spanned by `rows` in Z^d.
/// Input rows must span a full-rank lattice (callers always include a
/// multiple of the standard basis).  Result: upper triangular, positive
/// diagonal, entries above each pivot reduced into [0, pivot).
inline std::vector<std::vector<Int>> hnf(std::vector<std::vector<Int>> rows, int d) {
    size_t r = 0;
    for (int c = 0; c < d && r < rows.size(); ++c) {
        // gcd the column below r into a single pivot row
        size_t piv = rows.size();
        for (size_t i = r; i < rows.size(); ++i)
            if (rows[i][static_cast<size_t>(c)] != 0) { piv = i; break; }
        if (piv == rows.size()) continue;
        std::swap(rows[r], rows[piv]);
        for (size_t i = r + 1; i < rows.size(); ++i) {
            while (rows[i][static_cast<size_t>(c)] != 0) {
                Int a = rows[r][static_cast<size_t>(c)];
                Int b = rows[i][static_cast<size_t>(c)];
                Int q = a / b; // truncated division is fine inside the loop
                for (int j = 0; j < d; ++j) rows[r][static_cast<size_t>(j)] -= q * rows[i][static_cast<size_t>(j)];
                std::swap(rows[r], rows[i]);
            }
        }
        if (rows[r][static_cast<size_t>(c)] < 0)
            for (int j = 0; j < d; ++j) rows[r][static_cast<size_t>(j)] = -rows[r][static_cast<size_t>(j)];
        ++r;
    }
    rows.resize(r);
    // reduce above-pivot entries
    for (size_t i = r; i-- > 0;) {
        int c = 0;
        while (rows[i][static_cast<size_t>(c)] == 0) ++c;
        Int p = rows[i][static_cast<size_t>(c)];
        for (size_t u = 0; u < i; ++u) {
            Int q = rows[u][static_cast<size_t>(c)] / p;
            if (rows[u][static_cast<size_t>(c)] - q * p < 0) q -= 1;
            if (q != 0)
                for (int j = 0; j < d; ++j) rows[u][static_cast<size_t>(j)] -= q * rows[i][static_cast<size_t>(j)];
        }
    }
    return rows;
}

} // namespace detail

/// A finitely generated Z-module M with Z^d <= M <= (1/e)Z^d, stored
/// canonically as (e, HNF basis of e*M).  Two generator sets produce equal
/// objects iff they generate the same module.  With d = rank(A) this is the
/// canonical form of a finite subgroup of (Q/Z)^k; with parameter coordinates
/// prepended it canonicalizes products of divisibility terms of functions.
class ZModule {
public:
    ZModule() = default;

    static ZModule trivial(int d) {
        ZModule m;
        m.dim_ = d;
        m.e_ = 1;
        m.basis_.assign(static_cast<size_t>(d), std::vector<Int>(static_cast<size_t>(d), Int(0)));
        for (int i = 0; i < d; ++i) m.basis_[static_cast<size_t>(i)][static_cast<size_t>(i)] = 1;
        return m;
    }

    static ZModule from_generators(int d, const std::vector<std::vector<Rat>>& gens) {
        Int D = 1;
        for (const auto& g : gens) {
            if (static_cast<int>(g.size()) != d) throw std::invalid_argument("ZModule generator dimension mismatch");
            for (const auto& x : g) D = ilcm(D, rat_den(x));
        }
        if (D == 1) return trivial(d);
        std::vector<std::vector<Int>> rows;
        for (const auto& g : gens) {
            std::vector<Int> r(static_cast<size_t>(d));
            for (int j = 0; j < d; ++j) r[static_cast<size_t>(j)] = rat_num(g[static_cast<size_t>(j)] * Rat(D));
            rows.push_back(std::move(r));
        }
        for (int i = 0; i < d; ++i) {
            std::vector<Int> r(static_cast<size_t>(d), Int(0));
            r[static_cast<size_t>(i)] = D;
            rows.push_back(std::move(r));
        }
        ZModule m;
        m.dim_ = d;
        m.e_ = D;
        m.basis_ = detail::hnf(std::move(rows), d);
        m.reduce_exponent();
        return m;
    }

    ZModule join(const ZModule& o) const {
        if (dim_ != o.dim_) throw std::invalid_argument("ZModule dimension mismatch");
        if (is_trivial()) return o;
        if (o.is_trivial()) return *this;
        if (*this == o) return *this;
        Int E = ilcm(e_, o.e_);
        std::vector<std::vector<Int>> rows;
        auto push_scaled = [&](const ZModule& m) {
            Int s = E / m.e_;
            for (const auto& r : m.basis_) {
                std::vector<Int> v(r);
                for (auto& x : v) x *= s;
                rows.push_back(std::move(v));
            }
        };
        push_scaled(*this);
        push_scaled(o);
        ZModule m;
        m.dim_ = dim_;
        m.e_ = E;
        m.basis_ = detail::hnf(std::move(rows), dim_);
        m.reduce_exponent();
        return m;
    }

    ZModule join_generator(const std::vector<Rat>& g) const {
        return join(from_generators(dim_, {g}));
    }

    bool contains(const std::vector<Rat>& v) const {
        if (static_cast<int>(v.size()) != dim_) throw std::invalid_argument("ZModule dimension mismatch");
        std::vector<Int> w(static_cast<size_t>(dim_));
        for (int j = 0; j < dim_; ++j) {
            Rat x = v[static_cast<size_t>(j)] * Rat(e_);
            if (!rat_is_int(x)) return false;
            w[static_cast<size_t>(j)] = rat_num(x);
        }
        // back-substitution against the upper-triangular basis
        size_t bi = 0;
        for (int c = 0; c < dim_; ++c) {
            const std::vector<Int>* row = nullptr;
            if (bi < basis_.size()) {
                int pc = 0;
                while (basis_[bi][static_cast<size_t>(pc)] == 0) ++pc;
                if (pc == c) row = &basis_[bi];
            }
            if (row) {
                Int p = (*row)[static_cast<size_t>(c)];
                if (w[static_cast<size_t>(c)] % p != 0) return false;
                Int q = w[static_cast<size_t>(c)] / p;
                for (int j = c; j < dim_; ++j) w[static_cast<size_t>(j)] -= q * (*row)[static_cast<size_t>(j)];
                ++bi;
            } else if (w[static_cast<size_t>(c)] != 0) {
                return false;
            }
        }
        return true;
    }

    bool is_trivial() const { return e_ == 1; }
    Int exponent() const { return e_; }
    int dim() const { return dim_; }
    const std::vector<std::vector<Int>>& basis() const { return basis_; }

    /// Basis of M as rational vectors (rows of the HNF divided by e).
    std::vector<std::vector<Rat>> rational_basis() const {
        std::vector<std::vector<Rat>> out;
        for (const auto& r : basis_) {
            std::vector<Rat> v(static_cast<size_t>(dim_));
            for (int j = 0; j < dim_; ++j) v[static_cast<size_t>(j)] = Rat(r[static_cast<size_t>(j)], e_);
            out.push_back(std::move(v));
        }
        return out;
    }

    /// Generators with some non-integral coordinate, i.e. the interesting part
    /// mod Z^d.  Empty iff trivial.
    std::vector<std::vector<Rat>> fractional_generators() const {
        std::vector<std::vector<Rat>> out;
        for (auto& v : rational_basis()) {
            bool frac = false;
            for (auto& x : v)
                if (!rat_is_int(x)) { frac = true; break; }
            if (frac) {
                for (auto& x : v) x -= Rat(rat_floor(x)); // reduce mod Z^d for display
                out.push_back(std::move(v));
            }
        }
        return out;
    }

    /// Order of M / Z^d.
    Int quotient_order() const {
        Int det = 1;
        for (const auto& r : basis_) {
            int c = 0;
            while (r[static_cast<size_t>(c)] == 0) ++c;
            det *= r[static_cast<size_t>(c)];
        }
        // |M/Z^d| = e^d / det(e*M)
        Int num = 1;
        for (int i = 0; i < dim_; ++i) num *= e_;
        return num / det;
    }

    auto tie() const { return std::tie(dim_, e_, basis_); }
    bool operator==(const ZModule& o) const { return tie() == o.tie(); }
    bool operator<(const ZModule& o) const { return tie() < o.tie(); }

private:
    void reduce_exponent() {
        // exponent of M/Z^d = lcm of orders of basis elements r/e
        Int e2 = 1;
        for (const auto& r : basis_) {
            Int g = e_;
            for (const auto& x : r) g = igcd(g, x);
            e2 = ilcm(e2, e_ / g);
        }
        if (e2 == e_) return;
        std::vector<std::vector<Int>> rows;
        for (const auto& r : basis_) {
            std::vector<Int> v(r);
            for (auto& x : v) x = x * e2 / e_;
            rows.push_back(std::move(v));
        }
        for (int i = 0; i < dim_; ++i) {
            std::vector<Int> v(static_cast<size_t>(dim_), Int(0));
            v[static_cast<size_t>(i)] = e2;
            rows.push_back(std::move(v));
        }
        e_ = e2;
        basis_ = detail::hnf(std::move(rows), dim_);
    }

    int dim_ = 0;
    Int e_ = 1;
    std::vector<std::vector<Int>> basis_;
};

/// Canonical form of the finite subgroup of (Q/Z)^k generated by the images
/// of a list of scalars.  Thin wrapper identifying the group case of ZModule.
class FiniteSubgroup {
public:
    FiniteSubgroup() = default;
    explicit FiniteSubgroup(ZModule m) : m_(std::move(m)) {}

    static FiniteSubgroup trivial(int k) { return FiniteSubgroup(ZModule::trivial(k)); }

    static FiniteSubgroup generated_by(int k, const std::vector<GammaScalar>& gens) {
        std::vector<std::vector<Rat>> g(gens.begin(), gens.end());
        return FiniteSubgroup(ZModule::from_generators(k, g));
    }

    FiniteSubgroup join(const FiniteSubgroup& o) const { return FiniteSubgroup(m_.join(o.m_)); }
    bool is_trivial() const { return m_.is_trivial(); }
    Int exponent() const { return m_.exponent(); }
    Int order() const { return m_.quotient_order(); }
    std::vector<GammaScalar> canonical_generators() const {
        std::vector<GammaScalar> out;
        for (auto& v : m_.fractional_generators()) out.push_back(v);
        return out;
    }
    const ZModule& module() const { return m_; }

    bool operator==(const FiniteSubgroup& o) const { return m_ == o.m_; }
    bool operator<(const FiniteSubgroup& o) const { return m_ < o.m_; }

private:
    ZModule m_;
};

inline FiniteSubgroup subgroup_canonical(const BaseGroup& G, const std::vector<GammaScalar>& gens) {
    return FiniteSubgroup::generated_by(G.rank, gens);
}

} // namespace motivic
