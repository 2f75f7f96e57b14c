#include <functional>
#pragma once

#include "base_group.hpp"

#include <array>
#include <optional>
#include <vector>

namespace motivic {

enum class Rel { LT, LE, EQ };

/// row . x  rel  rhs, with integer coefficients and rhs in Q (x) A.
struct Constraint {
    std::vector<Int> row;
    Rel rel = Rel::LE;
    GammaScalar rhs;
};

struct Cell {
    int ambient = 0;
    std::vector<Constraint> constraints;
};

struct DefinableSet {
    BaseGroup group;
    int ambient = 0;
    std::vector<Cell> cells; // pairwise disjoint after normalize()
};

namespace fm {

/// Inequality in normalized form row.x < rhs or row.x <= rhs (rows rational
/// during elimination).
struct Ineq {
    std::vector<Rat> row;
    bool strict = false;
    GammaScalar rhs;
};

inline std::vector<Ineq> to_ineqs(const Cell& c) {
    std::vector<Ineq> out;
    for (const auto& cs : c.constraints) {
        std::vector<Rat> r(cs.row.begin(), cs.row.end());
        switch (cs.rel) {
        case Rel::LT: out.push_back({r, true, cs.rhs}); break;
        case Rel::LE: out.push_back({r, false, cs.rhs}); break;
        case Rel::EQ: {
            out.push_back({r, false, cs.rhs});
            std::vector<Rat> nr(r);
            for (auto& x : nr) x = -x;
            out.push_back({nr, false, gs_neg(cs.rhs)});
            break;
        }
        }
    }
    return out;
}

/// Eliminates variable `v`, keeping the projection of the solution set.
inline std::vector<Ineq> eliminate(const std::vector<Ineq>& sys, int v) {
    std::vector<const Ineq*> lower, upper;
    std::vector<Ineq> out;
    for (const auto& q : sys) {
        const Rat& c = q.row[static_cast<size_t>(v)];
        if (c == 0) out.push_back(q);
        else if (c > 0) upper.push_back(&q);
        else lower.push_back(&q);
    }
    for (const auto* lo : lower)
        for (const auto* up : upper) {
            // lo: -a x_v + r_l . x (<|<=) s_l   (a>0)  =>  x_v >= (r_l.x - s_l)/a
            // up:  b x_v + r_u . x (<|<=) s_u   (b>0)  =>  x_v <= (s_u - r_u.x)/b
            Rat a = -lo->row[static_cast<size_t>(v)], b = up->row[static_cast<size_t>(v)];
            Ineq q;
            q.row.resize(lo->row.size());
            for (size_t j = 0; j < q.row.size(); ++j)
                q.row[j] = b * lo->row[j] + a * up->row[j];
            q.row[static_cast<size_t>(v)] = 0;
            q.rhs = gs_add(gs_scale(b, lo->rhs), gs_scale(a, up->rhs));
            q.strict = lo->strict || up->strict;
            out.push_back(std::move(q));
        }
    return out;
}

inline bool trivially_true(const Ineq& q) {
    for (const auto& c : q.row)
        if (c != 0) return false;
    int s = lex_sign(q.rhs);
    return q.strict ? s > 0 : s >= 0;
}

inline bool trivially_false(const Ineq& q) {
    for (const auto& c : q.row)
        if (c != 0) return false;
    int s = lex_sign(q.rhs);
    return q.strict ? s <= 0 : s < 0;
}

inline bool feasible(std::vector<Ineq> sys, int nvars) {
    for (int v = 0; v < nvars; ++v) {
        std::vector<Ineq> pruned;
        for (auto& q : sys) {
            if (trivially_false(q)) return false;
            if (!trivially_true(q)) pruned.push_back(std::move(q));
        }
        sys = eliminate(pruned, v);
    }
    for (const auto& q : sys)
        if (trivially_false(q)) return false;
    return true;
}

/// Bounds of variable v over the system: eliminates every other variable and
/// reports whether upper/lower bounds exist, plus the tightest constant
/// bounds (in Q (x) A).
struct VarBounds {
    bool has_lower = false, has_upper = false;
    GammaScalar lower, upper; // valid when the flags are set
    bool lower_strict = false, upper_strict = false;
};

inline VarBounds bounds_of(std::vector<Ineq> sys, int nvars, int v) {
    for (int u = 0; u < nvars; ++u)
        if (u != v) sys = eliminate(sys, u);
    VarBounds b;
    for (const auto& q : sys) {
        const Rat& c = q.row[static_cast<size_t>(v)];
        if (c == 0) continue;
        GammaScalar bound = gs_scale(Rat(1) / c, q.rhs);
        if (c > 0) {
            if (!b.has_upper || compare(bound, b.upper) == Ordering::Less ||
                (compare(bound, b.upper) == Ordering::Equal && q.strict)) {
                b.has_upper = true;
                b.upper = bound;
                b.upper_strict = q.strict;
            }
        } else {
            if (!b.has_lower || compare(bound, b.lower) == Ordering::Greater ||
                (compare(bound, b.lower) == Ordering::Equal && q.strict)) {
                b.has_lower = true;
                b.lower = bound;
                b.lower_strict = q.strict;
            }
        }
    }
    return b;
}

} // namespace fm

inline bool cell_empty(const Cell& c) { return !fm::feasible(fm::to_ineqs(c), c.ambient); }

namespace detail {

inline Constraint negate_constraint_lt(const Constraint& c) {
    // complement of row.x < rhs is -row.x <= -rhs
    Constraint n;
    n.row.resize(c.row.size());
    for (size_t i = 0; i < c.row.size(); ++i) n.row[i] = -c.row[i];
    n.rel = Rel::LE;
    n.rhs = gs_neg(c.rhs);
    return n;
}

inline Constraint negate_constraint_le(const Constraint& c) {
    Constraint n;
    n.row.resize(c.row.size());
    for (size_t i = 0; i < c.row.size(); ++i) n.row[i] = -c.row[i];
    n.rel = Rel::LT;
    n.rhs = gs_neg(c.rhs);
    return n;
}

/// D complement pieces: for each constraint of D, the cell where all earlier
/// constraints hold and this one fails.
inline std::vector<Cell> subtract(const Cell& C, const Cell& D) {
    std::vector<Cell> out;
    std::vector<Constraint> prefix;
    for (const auto& d : D.constraints) {
        std::vector<std::vector<Constraint>> negs;
        switch (d.rel) {
        case Rel::LT: negs.push_back({negate_constraint_lt(d)}); break;
        case Rel::LE: negs.push_back({negate_constraint_le(d)}); break;
        case Rel::EQ: {
            Constraint lt{d.row, Rel::LT, d.rhs};
            negs.push_back({lt});
            negs.push_back({negate_constraint_lt(lt)});
            break;
        }
        }
        for (auto& neg : negs) {
            Cell piece = C;
            for (const auto& p : prefix) piece.constraints.push_back(p);
            for (const auto& n : neg) piece.constraints.push_back(n);
            if (!cell_empty(piece)) out.push_back(std::move(piece));
        }
        if (d.rel == Rel::EQ) {
            prefix.push_back(d);
        } else {
            prefix.push_back(d);
        }
    }
    return out;
}

} // namespace detail

/// Disjointification: the returned cells are pairwise disjoint, empty cells
/// removed, union unchanged.
inline DefinableSet normalize(const BaseGroup& G, int ambient, const std::vector<Cell>& raw) {
    DefinableSet X;
    X.group = G;
    X.ambient = ambient;
    for (const auto& c : raw) {
        if (c.ambient != ambient) throw std::invalid_argument("ambient dimension mismatch");
        if (cell_empty(c)) continue;
        std::vector<Cell> pieces{c};
        for (const auto& existing : X.cells) {
            std::vector<Cell> next;
            for (const auto& p : pieces) {
                auto sub = detail::subtract(p, existing);
                next.insert(next.end(), sub.begin(), sub.end());
            }
            pieces.swap(next);
            if (pieces.empty()) break;
        }
        for (auto& p : pieces) X.cells.push_back(std::move(p));
    }
    return X;
}

inline bool is_bounded(const DefinableSet& X) {
    for (const auto& c : X.cells) {
        auto sys = fm::to_ineqs(c);
        for (int v = 0; v < X.ambient; ++v) {
            auto b = fm::bounds_of(sys, X.ambient, v);
            if (!b.has_lower || !b.has_upper) return false;
        }
    }
    return true;
}

/// Affine dimension; -1 for the empty set.
inline int dimension(const DefinableSet& X) {
    int best = -1;
    for (const auto& c : X.cells) {
        if (cell_empty(c)) continue;
        // tight rows: constraints that hold with equality on the whole cell
        std::vector<std::vector<Rat>> tight;
        auto base = fm::to_ineqs(c);
        for (const auto& cs : c.constraints) {
            if (cs.rel == Rel::EQ) {
                tight.emplace_back(cs.row.begin(), cs.row.end());
                continue;
            }
            auto sys = base;
            fm::Ineq rev; // row.x > rhs, i.e. -row.x < -rhs
            rev.row.assign(cs.row.begin(), cs.row.end());
            for (auto& x : rev.row) x = -x;
            rev.strict = true;
            rev.rhs = gs_neg(cs.rhs);
            // tight iff row.x < rhs is infeasible on the cell
            fm::Ineq strict_version;
            strict_version.row.assign(cs.row.begin(), cs.row.end());
            strict_version.strict = true;
            strict_version.rhs = cs.rhs;
            auto test = base;
            test.push_back(strict_version);
            if (!fm::feasible(test, c.ambient)) tight.emplace_back(cs.row.begin(), cs.row.end());
        }
        // rank of tight rows by Gaussian elimination over Q
        int rank = 0;
        std::vector<std::vector<Rat>> rows = tight;
        for (int col = 0; col < c.ambient && rank < static_cast<int>(rows.size()); ++col) {
            int piv = -1;
            for (int i = rank; i < static_cast<int>(rows.size()); ++i)
                if (rows[static_cast<size_t>(i)][static_cast<size_t>(col)] != 0) { piv = i; break; }
            if (piv < 0) continue;
            std::swap(rows[static_cast<size_t>(rank)], rows[static_cast<size_t>(piv)]);
            for (int i = 0; i < static_cast<int>(rows.size()); ++i) {
                if (i == rank) continue;
                Rat f = rows[static_cast<size_t>(i)][static_cast<size_t>(col)] /
                        rows[static_cast<size_t>(rank)][static_cast<size_t>(col)];
                if (f == 0) continue;
                for (int j = 0; j < c.ambient; ++j)
                    rows[static_cast<size_t>(i)][static_cast<size_t>(j)] -=
                        f * rows[static_cast<size_t>(rank)][static_cast<size_t>(j)];
            }
            ++rank;
        }
        best = std::max(best, c.ambient - rank);
    }
    return best;
}

// ---------------------------------------------------------------------------
// Lattice point counting oracle
// ---------------------------------------------------------------------------

namespace detail {

struct IntIneq {
    std::vector<long long> row;
    bool strict;
    long long rhs;
};

inline long long count_rec(const std::vector<std::vector<IntIneq>>& chain,
                           std::vector<long long>& y, int depth, int n) {
    // bounds for y[depth] from chain[depth] (constraints on vars 0..depth)
    bool has_lo = false, has_hi = false;
    long long lo = 0, hi = 0;
    for (const auto& q : chain[static_cast<size_t>(depth)]) {
        long long c = q.row[static_cast<size_t>(depth)];
        long long rest = q.rhs;
        for (int j = 0; j < depth; ++j) rest -= q.row[static_cast<size_t>(j)] * y[static_cast<size_t>(j)];
        if (c == 0) {
            if (q.strict ? rest <= 0 : rest < 0) return 0;
            continue;
        }
        if (c > 0) {
            // y_d <= rest/c (strict: <)
            long long b = rest >= 0 ? rest / c : -((-rest + c - 1) / c);
            if (q.strict && b * c == rest) b -= 1;
            if (!has_hi || b < hi) { has_hi = true; hi = b; }
        } else {
            long long a = -c;
            // y_d >= -rest/a hmm: c y_d <= rest, c=-a: y_d >= -rest/a = ceil
            long long num = -rest;
            long long b = num >= 0 ? (num + a - 1) / a : -((-num) / a);
            if (q.strict && b * a == num) b += 1;
            if (!has_lo || b > lo) { has_lo = true; lo = b; }
        }
    }
    if (!has_lo || !has_hi) throw std::runtime_error("count_lattice: unbounded direction");
    if (lo > hi) return 0;
    if (depth == n - 1) return hi - lo + 1;
    long long total = 0;
    for (long long v = lo; v <= hi; ++v) {
        y[static_cast<size_t>(depth)] = v;
        total += count_rec(chain, y, depth + 1, n);
    }
    return total;
}

} // namespace detail

/// Exact number of points of X ∩ ((1/m)Z)^n after specialization.
inline Int count_lattice(const DefinableSet& X, int m, const Specialization& spec) {
    if (m < 1) throw std::invalid_argument("count_lattice: m must be positive");
    {
        std::vector<GammaScalar> scalars;
        for (const auto& c : X.cells)
            for (const auto& cs : c.constraints) scalars.push_back(cs.rhs);
        if (!spec.order_consistent(scalars))
            throw std::invalid_argument("count_lattice: specialization is not order-consistent");
    }
    if (!is_bounded(X)) throw std::invalid_argument("count_lattice: unbounded set");
    Int total = 0;
    for (const auto& cell : X.cells) {
        int n = cell.ambient;
        if (n == 0) { total += cell_empty(cell) ? 0 : 1; continue; }
        // substitute x = y/m with y integer: row.y rel m*spec(rhs); clear denominators
        std::vector<detail::IntIneq> sys;
        auto push = [&](const std::vector<Int>& row, bool strict, const Rat& rhs, bool negate) {
            Rat r = rhs * m;
            Int den = rat_den(r);
            detail::IntIneq q;
            q.row.resize(static_cast<size_t>(n));
            for (int j = 0; j < n; ++j) {
                Int v = row[static_cast<size_t>(j)] * den;
                q.row[static_cast<size_t>(j)] = to_ll(negate ? -v : v);
            }
            q.strict = strict;
            q.rhs = to_ll(negate ? -rat_num(r) : rat_num(r));
            sys.push_back(std::move(q));
        };
        for (const auto& cs : cell.constraints) {
            Rat r = spec.apply(cs.rhs);
            switch (cs.rel) {
            case Rel::LT: push(cs.row, true, r, false); break;
            case Rel::LE: push(cs.row, false, r, false); break;
            case Rel::EQ:
                push(cs.row, false, r, false);
                push(cs.row, false, r, true);
                break;
            }
        }
        // FM chain: chain[j] = constraints on variables 0..j
        std::vector<std::vector<detail::IntIneq>> chain(static_cast<size_t>(n));
        std::vector<detail::IntIneq> cur = sys;
        for (int j = n - 1; j >= 0; --j) {
            chain[static_cast<size_t>(j)] = cur;
            if (j == 0) break;
            // eliminate variable j
            std::vector<detail::IntIneq> next;
            std::vector<const detail::IntIneq*> lower, upper;
            for (const auto& q : cur) {
                long long c = q.row[static_cast<size_t>(j)];
                if (c == 0) next.push_back(q);
                else if (c > 0) upper.push_back(&q);
                else lower.push_back(&q);
            }
            for (auto lo : lower)
                for (auto up : upper) {
                    long long a = -lo->row[static_cast<size_t>(j)], b = up->row[static_cast<size_t>(j)];
                    detail::IntIneq q;
                    q.row.resize(static_cast<size_t>(n), 0);
                    for (int t = 0; t < j; ++t)
                        q.row[static_cast<size_t>(t)] =
                            b * lo->row[static_cast<size_t>(t)] + a * up->row[static_cast<size_t>(t)];
                    q.rhs = b * lo->rhs + a * up->rhs;
                    q.strict = lo->strict || up->strict;
                    next.push_back(std::move(q));
                }
            cur = std::move(next);
        }
        std::vector<long long> y(static_cast<size_t>(n), 0);
        total += detail::count_rec(chain, y, 0, n);
    }
    return total;
}

// ---------------------------------------------------------------------------
// Exact Euclidean volume oracle (dimensions <= 3)
// ---------------------------------------------------------------------------

namespace detail {

struct QIneq {
    std::vector<Rat> row;
    Rat rhs;
};

inline std::optional<std::vector<Rat>> solve_square(std::vector<std::vector<Rat>> M, std::vector<Rat> b) {
    int n = static_cast<int>(b.size());
    for (int c = 0; c < n; ++c) {
        int piv = -1;
        for (int i = c; i < n; ++i)
            if (M[static_cast<size_t>(i)][static_cast<size_t>(c)] != 0) { piv = i; break; }
        if (piv < 0) return std::nullopt;
        std::swap(M[static_cast<size_t>(c)], M[static_cast<size_t>(piv)]);
        std::swap(b[static_cast<size_t>(c)], b[static_cast<size_t>(piv)]);
        for (int i = 0; i < n; ++i) {
            if (i == c) continue;
            Rat f = M[static_cast<size_t>(i)][static_cast<size_t>(c)] / M[static_cast<size_t>(c)][static_cast<size_t>(c)];
            if (f == 0) continue;
            for (int j = c; j < n; ++j)
                M[static_cast<size_t>(i)][static_cast<size_t>(j)] -= f * M[static_cast<size_t>(c)][static_cast<size_t>(j)];
            b[static_cast<size_t>(i)] -= f * b[static_cast<size_t>(c)];
        }
    }
    std::vector<Rat> x(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) x[static_cast<size_t>(i)] = b[static_cast<size_t>(i)] / M[static_cast<size_t>(i)][static_cast<size_t>(i)];
    return x;
}

inline Rat det3(const std::vector<std::vector<Rat>>& m) {
    size_t n = m.size();
    if (n == 1) return m[0][0];
    if (n == 2) return m[0][0] * m[1][1] - m[0][1] * m[1][0];
    return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
           m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
           m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

// volume of the convex hull of `verts` (dimension n <= 3), given the defining
// closed inequalities for facet identification
inline Rat hull_volume(const std::vector<std::vector<Rat>>& verts, const std::vector<QIneq>& facets, int n);

inline std::vector<std::vector<Rat>> order_polygon(std::vector<std::vector<Rat>> pts) {
    // order 2-D points around their centroid with a rational comparator
    std::vector<Rat> c(2, Rat(0));
    for (auto& p : pts) { c[0] += p[0]; c[1] += p[1]; }
    c[0] /= static_cast<int>(pts.size());
    c[1] /= static_cast<int>(pts.size());
    auto half = [&](const std::vector<Rat>& p) {
        Rat dx = p[0] - c[0], dy = p[1] - c[1];
        return (dy > 0 || (dy == 0 && dx > 0)) ? 0 : 1;
    };
    std::sort(pts.begin(), pts.end(), [&](const std::vector<Rat>& a, const std::vector<Rat>& b) {
        int ha = half(a), hb = half(b);
        if (ha != hb) return ha < hb;
        Rat ax = a[0] - c[0], ay = a[1] - c[1], bx = b[0] - c[0], by = b[1] - c[1];
        Rat cross = ax * by - ay * bx;
        if (cross != 0) return cross > 0;
        return ax * ax + ay * ay < bx * bx + by * by;
    });
    return pts;
}

inline Rat hull_volume(const std::vector<std::vector<Rat>>& verts, const std::vector<QIneq>& facets, int n) {
    if (static_cast<int>(verts.size()) < n + 1) return 0;
    if (n == 1) {
        Rat lo = verts[0][0], hi = verts[0][0];
        for (auto& v : verts) { lo = std::min(lo, v[0]); hi = std::max(hi, v[0]); }
        return hi - lo;
    }
    if (n == 2) {
        auto pts = order_polygon(verts);
        Rat area = 0;
        for (size_t i = 0; i < pts.size(); ++i) {
            const auto& a = pts[i];
            const auto& b = pts[(i + 1) % pts.size()];
            area += a[0] * b[1] - a[1] * b[0];
        }
        if (area < 0) area = -area;
        return area / 2;
    }
    if (n != 3) throw std::runtime_error("euclid_volume supports ambient dimension <= 3");
    const auto& apex = verts[0];
    Rat vol = 0;
    for (const auto& f : facets) {
        // facet plane row.x = rhs; skip if apex lies on it
        Rat av = -f.rhs;
        for (int j = 0; j < 3; ++j) av += f.row[static_cast<size_t>(j)] * apex[static_cast<size_t>(j)];
        if (av == 0) continue;
        std::vector<std::vector<Rat>> fverts;
        for (const auto& v : verts) {
            Rat s = -f.rhs;
            for (int j = 0; j < 3; ++j) s += f.row[static_cast<size_t>(j)] * v[static_cast<size_t>(j)];
            if (s == 0) fverts.push_back(v);
        }
        if (fverts.size() < 3) continue;
        // project out a coordinate with nonzero normal component, triangulate in 2-D,
        // then take cones with the apex in 3-D
        int drop = 0;
        for (int j = 0; j < 3; ++j)
            if (f.row[static_cast<size_t>(j)] != 0) { drop = j; break; }
        std::vector<std::vector<Rat>> proj;
        for (const auto& v : fverts) {
            std::vector<Rat> p;
            for (int j = 0; j < 3; ++j)
                if (j != drop) p.push_back(v[static_cast<size_t>(j)]);
            proj.push_back(std::move(p));
        }
        // order in 2-D and carry the ordering back to 3-D points
        std::vector<size_t> idx(fverts.size());
        for (size_t i = 0; i < idx.size(); ++i) idx[i] = i;
        std::vector<Rat> c(2, Rat(0));
        for (auto& p : proj) { c[0] += p[0]; c[1] += p[1]; }
        c[0] /= static_cast<int>(proj.size());
        c[1] /= static_cast<int>(proj.size());
        auto half = [&](size_t i) {
            Rat dx = proj[i][0] - c[0], dy = proj[i][1] - c[1];
            return (dy > 0 || (dy == 0 && dx > 0)) ? 0 : 1;
        };
        std::sort(idx.begin(), idx.end(), [&](size_t a, size_t b) {
            int ha = half(a), hb = half(b);
            if (ha != hb) return ha < hb;
            Rat ax = proj[a][0] - c[0], ay = proj[a][1] - c[1];
            Rat bx = proj[b][0] - c[0], by = proj[b][1] - c[1];
            Rat cross = ax * by - ay * bx;
            if (cross != 0) return cross > 0;
            return ax * ax + ay * ay < bx * bx + by * by;
        });
        for (size_t i = 1; i + 1 < idx.size(); ++i) {
            std::vector<std::vector<Rat>> M(3, std::vector<Rat>(3));
            for (int j = 0; j < 3; ++j) {
                M[0][static_cast<size_t>(j)] = fverts[idx[0]][static_cast<size_t>(j)] - apex[static_cast<size_t>(j)];
                M[1][static_cast<size_t>(j)] = fverts[idx[i]][static_cast<size_t>(j)] - apex[static_cast<size_t>(j)];
                M[2][static_cast<size_t>(j)] = fverts[idx[i + 1]][static_cast<size_t>(j)] - apex[static_cast<size_t>(j)];
            }
            Rat d = det3(M);
            if (d < 0) d = -d;
            vol += d / 6;
        }
    }
    return vol;
}

} // namespace detail

/// Exact n-dimensional Lebesgue volume of the specialized set (0 when the
/// affine dimension is lower).
inline Rat euclid_volume(const DefinableSet& X, const Specialization& spec) {
    if (!is_bounded(X)) throw std::invalid_argument("euclid_volume: unbounded set");
    Rat total = 0;
    for (const auto& cell : X.cells) {
        int n = cell.ambient;
        if (n == 0 || n > 3) {
            if (n > 3) throw std::runtime_error("euclid_volume supports ambient dimension <= 3");
            continue;
        }
        std::vector<detail::QIneq> closed;
        for (const auto& cs : cell.constraints) {
            detail::QIneq q;
            q.row.assign(cs.row.begin(), cs.row.end());
            q.rhs = spec.apply(cs.rhs);
            closed.push_back(q);
            if (cs.rel == Rel::EQ) {
                detail::QIneq r = q;
                for (auto& x : r.row) x = -x;
                r.rhs = -r.rhs;
                closed.push_back(std::move(r));
            }
        }
        // vertex enumeration: all n-subsets of constraint planes
        std::vector<std::vector<Rat>> verts;
        int m = static_cast<int>(closed.size());
        std::vector<int> sel(static_cast<size_t>(n));
        std::function<void(int, int)> rec = [&](int start, int depth) {
            if (depth == n) {
                std::vector<std::vector<Rat>> M(static_cast<size_t>(n));
                std::vector<Rat> b(static_cast<size_t>(n));
                for (int i = 0; i < n; ++i) {
                    M[static_cast<size_t>(i)] = closed[static_cast<size_t>(sel[static_cast<size_t>(i)])].row;
                    b[static_cast<size_t>(i)] = closed[static_cast<size_t>(sel[static_cast<size_t>(i)])].rhs;
                }
                auto x = detail::solve_square(M, b);
                if (!x) return;
                for (const auto& q : closed) {
                    Rat s = -q.rhs;
                    for (int j = 0; j < n; ++j) s += q.row[static_cast<size_t>(j)] * (*x)[static_cast<size_t>(j)];
                    if (s > 0) return;
                }
                if (std::find(verts.begin(), verts.end(), *x) == verts.end()) verts.push_back(*x);
                return;
            }
            for (int i = start; i < m; ++i) {
                sel[static_cast<size_t>(depth)] = i;
                rec(i + 1, depth + 1);
            }
        };
        rec(0, 0);
        total += detail::hull_volume(verts, closed, n);
    }
    return total;
}

// convenience builders -------------------------------------------------------

inline Constraint make_constraint(std::vector<long long> row, Rel rel, GammaScalar rhs) {
    Constraint c;
    c.row.assign(row.begin(), row.end());
    c.rel = rel;
    c.rhs = std::move(rhs);
    return c;
}

/// Box prod [lo_i, hi_i) as a single cell.
inline Cell box_cell(int n, const std::vector<std::pair<GammaScalar, GammaScalar>>& sides) {
    Cell c;
    c.ambient = n;
    for (int i = 0; i < n; ++i) {
        std::vector<long long> row(static_cast<size_t>(n), 0);
        row[static_cast<size_t>(i)] = -1;
        c.constraints.push_back(make_constraint(row, Rel::LE, gs_neg(sides[static_cast<size_t>(i)].first)));
        row[static_cast<size_t>(i)] = 1;
        c.constraints.push_back(make_constraint(row, Rel::LT, sides[static_cast<size_t>(i)].second));
    }
    return c;
}

} // namespace motivic
