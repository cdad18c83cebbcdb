#include "twistlab/decompose.hpp"

#include <algorithm>
#include <random>

namespace twistlab {

ChainMap EndAlgebra::rep(int i) const { return hom.rep_map(0, i); }

ChainMap EndAlgebra::rep_of(const std::vector<Scalar>& coords) const {
    const FieldSpec F = object.alg->field;
    ChainMap f = ChainMap::zero(object, object, 0);
    for (int i = 0; i < dimension; ++i) {
        if (coords[i].is_zero()) continue;
        ChainMap r = rep(i);
        for (int a = 0; a < object.size(); ++a)
            for (int b = 0; b < object.size(); ++b)
                f.mat[a][b] = add(f.mat[a][b], scale(coords[i], r.mat[a][b]));
    }
    (void)F;
    return f;
}

std::vector<Scalar> EndAlgebra::product(const std::vector<Scalar>& x,
                                        const std::vector<Scalar>& y) const {
    const FieldSpec F = object.alg->field;
    std::vector<Scalar> r(dimension, Scalar::zero(F));
    for (int i = 0; i < dimension; ++i) {
        if (x[i].is_zero()) continue;
        for (int j = 0; j < dimension; ++j) {
            if (y[j].is_zero()) continue;
            const auto& sij = structure[size_t(i) * dimension + j];
            for (int k = 0; k < dimension; ++k) r[k] = r[k] + x[i] * y[j] * sij[k];
        }
    }
    return r;
}

EndAlgebra endomorphism_algebra(const TwistedComplex& m) {
    EndAlgebra A;
    A.object = minimize(m);
    A.hom = hom_complex(A.object, A.object);
    const FieldSpec F = A.object.alg->field;
    int t0 = -A.hom.m_min;
    int dim = (t0 >= 0 && t0 < A.hom.degree_count()) ? int(A.hom.reps[t0].size()) : 0;
    if (A.object.is_zero_object()) dim = 0;
    A.dimension = dim;
    if (dim == 0) return A;
    A.identity = A.hom.homology_coords(ChainMap::identity(A.object));
    A.structure.resize(size_t(dim) * dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) {
            ChainMap comp = A.rep(i).compose_after(A.rep(j));  // b_i after b_j
            A.structure[size_t(i) * dim + j] = A.hom.homology_coords(comp);
        }
    return A;
}

namespace {

using Poly = std::vector<Scalar>;  // coefficients, low degree first

Poly poly_trim(Poly p) {
    while (!p.empty() && p.back().is_zero()) p.pop_back();
    return p;
}

Scalar poly_eval(const Poly& p, const Scalar& x) {
    Scalar r = Scalar::zero(x.field());
    for (size_t i = p.size(); i-- > 0;) r = r * x + p[i];
    return r;
}

Poly poly_mul(const Poly& a, const Poly& b, const FieldSpec& F) {
    if (a.empty() || b.empty()) return {};
    Poly r(a.size() + b.size() - 1, Scalar::zero(F));
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j) r[i + j] = r[i + j] + a[i] * b[j];
    return poly_trim(r);
}

std::pair<Poly, Poly> poly_divmod(const Poly& a, const Poly& b, const FieldSpec& F) {
    Poly r = a, q;
    if (b.empty()) throw std::domain_error("poly_divmod: division by zero");
    if (r.size() >= b.size()) q.assign(r.size() - b.size() + 1, Scalar::zero(F));
    Scalar lead = b.back();
    while (r.size() >= b.size() && !poly_trim(r).empty() && r.size() >= b.size()) {
        r = poly_trim(r);
        if (r.size() < b.size()) break;
        Scalar c = r.back() / lead;
        size_t off = r.size() - b.size();
        q[off] = c;
        for (size_t i = 0; i < b.size(); ++i) r[off + i] = r[off + i] - c * b[i];
        r = poly_trim(r);
        if (r.empty()) break;
    }
    return {poly_trim(q), poly_trim(r)};
}

// extended gcd: g = u*a + v*b
void poly_xgcd(const Poly& a, const Poly& b, const FieldSpec& F, Poly& g, Poly& u, Poly& v) {
    Poly r0 = poly_trim(a), r1 = poly_trim(b);
    Poly s0 = {Scalar::one(F)}, s1 = {};
    Poly t0 = {}, t1 = {Scalar::one(F)};
    while (!r1.empty()) {
        auto [q, r] = poly_divmod(r0, r1, F);
        Poly qs = poly_mul(q, s1, F), qt = poly_mul(q, t1, F);
        Poly ns(std::max(s0.size(), qs.size()), Scalar::zero(F));
        for (size_t i = 0; i < ns.size(); ++i) {
            Scalar x = i < s0.size() ? s0[i] : Scalar::zero(F);
            Scalar y = i < qs.size() ? qs[i] : Scalar::zero(F);
            ns[i] = x - y;
        }
        Poly nt(std::max(t0.size(), qt.size()), Scalar::zero(F));
        for (size_t i = 0; i < nt.size(); ++i) {
            Scalar x = i < t0.size() ? t0[i] : Scalar::zero(F);
            Scalar y = i < qt.size() ? qt[i] : Scalar::zero(F);
            nt[i] = x - y;
        }
        r0 = r1; r1 = poly_trim(r);
        s0 = s1; s1 = poly_trim(ns);
        t0 = t1; t1 = poly_trim(nt);
    }
    g = r0; u = s0; v = t0;
}

// roots of a polynomial that lie in the field itself
std::vector<Scalar> field_roots(const Poly& p, const FieldSpec& F) {
    std::vector<Scalar> roots;
    if (F.kind == FieldKind::PrimeField) {
        for (uint32_t r = 0; r < F.characteristic; ++r) {
            Scalar s = Scalar::of_int(F, r);
            if (poly_eval(p, s).is_zero()) roots.push_back(s);
        }
        return roots;
    }
    // rationals: clear denominators, candidates num | c0, den | lead
    mpz_class lcm = 1;
    std::vector<mpq_class> q;
    for (const auto& c : p) {
        mpq_class v(c.str());
        q.push_back(v);
        lcm = lcm * v.get_den() / gcd(lcm, mpz_class(v.get_den()));
    }
    std::vector<mpz_class> z;
    for (auto& v : q) z.push_back(mpz_class(v * lcm));
    while (!z.empty() && z.front() == 0) {
        roots.push_back(Scalar::zero(F));
        z.erase(z.begin());
    }
    if (!roots.empty()) {
        // deduplicate the zero root
        roots.assign(1, Scalar::zero(F));
    }
    if (z.size() < 2) return roots;
    auto divisors = [](mpz_class n) {
        std::vector<long> ds;
        n = abs(n);
        if (n == 0 || n > 1000000) return ds;
        long ln = n.get_si();
        for (long d = 1; d * d <= ln; ++d)
            if (ln % d == 0) {
                ds.push_back(d);
                if (d != ln / d) ds.push_back(ln / d);
            }
        return ds;
    };
    for (long num : divisors(z.front()))
        for (long den : divisors(z.back()))
            for (int sign : {1, -1}) {
                Scalar cand = Scalar::of_fraction(F, sign * num, den);
                if (poly_eval(p, cand).is_zero()) {
                    bool seen = false;
                    for (const auto& r : roots) seen = seen || r == cand;
                    if (!seen) roots.push_back(cand);
                }
            }
    return roots;
}

}  // namespace

std::optional<std::vector<Scalar>> find_idempotent(const EndAlgebra& A, const Limits& lim) {
    const FieldSpec F = A.object.alg ? A.object.alg->field : FieldSpec::rationals();
    const int n = A.dimension;
    if (n <= 1) return std::nullopt;

    auto is_scalar_of_id = [&](const std::vector<Scalar>& x) {
        // x = c * identity?
        for (int i = 0; i < n; ++i)
            if (!A.identity[i].is_zero()) {
                Scalar c = x[i] / A.identity[i];
                for (int j = 0; j < n; ++j)
                    if (!(x[j] == c * A.identity[j])) return false;
                return true;
            }
        return false;
    };
    auto minimal_poly = [&](const std::vector<Scalar>& x) -> Poly {
        std::vector<std::vector<Scalar>> powers;
        powers.push_back(A.identity);
        std::vector<Scalar> cur = A.identity;
        for (int k = 1; k <= n + 1; ++k) {
            cur = A.product(cur, x);
            powers.push_back(cur);
            // dependence test: solve [powers[0..k-1]] c = powers[k]
            Matrix M(F, n, k);
            for (int j = 0; j < k; ++j)
                for (int i = 0; i < n; ++i) M.at(i, j) = powers[j][i];
            auto sol = solve(M, powers[k]);
            if (sol) {
                Poly p(k + 1, Scalar::zero(F));
                p[k] = Scalar::one(F);
                for (int j = 0; j < k; ++j) p[j] = -(*sol)[j];
                return p;
            }
        }
        throw std::runtime_error("find_idempotent: minimal polynomial not found");
    };
    auto try_split = [&](const std::vector<Scalar>& x) -> std::optional<std::vector<Scalar>> {
        if (is_scalar_of_id(x)) return std::nullopt;
        Poly mu = minimal_poly(x);
        for (const Scalar& lambda : field_roots(mu, F)) {
            // mu = (T-lambda)^a * h with h(lambda) != 0
            Poly lin = {-lambda, Scalar::one(F)};
            Poly h = mu;
            Poly pow = {Scalar::one(F)};
            int a = 0;
            while (true) {
                auto [q, r] = poly_divmod(h, lin, F);
                if (!r.empty()) break;
                h = q;
                pow = poly_mul(pow, lin, F);
                ++a;
            }
            if (a == 0 || h.size() < 2) continue;  // no split at this root
            Poly g, u, v;
            poly_xgcd(pow, h, F, g, u, v);
            if (g.size() != 1) continue;
            Scalar ginv = g[0].inverse();
            // idempotent = (v*h)(x) / g  (projection onto the (T-lambda)-primary part)
            Poly proj = poly_mul(v, h, F);
            std::vector<Scalar> e(n, Scalar::zero(F));
            std::vector<Scalar> xpow = A.identity;
            for (size_t i = 0; i < proj.size(); ++i) {
                for (int j = 0; j < n; ++j) e[j] = e[j] + proj[i] * ginv * xpow[j];
                if (i + 1 < proj.size()) xpow = A.product(xpow, x);
            }
            // check e^2 = e, e not in {0, id}
            if (!(A.product(e, e) == e)) continue;
            bool zero = true, ident = true;
            for (int j = 0; j < n; ++j) {
                if (!e[j].is_zero()) zero = false;
                if (!(e[j] == A.identity[j])) ident = false;
            }
            if (!zero && !ident) return e;
        }
        return std::nullopt;
    };

    std::vector<std::vector<Scalar>> candidates;
    for (int i = 0; i < n; ++i) {
        std::vector<Scalar> b(n, Scalar::zero(F));
        b[i] = Scalar::one(F);
        candidates.push_back(b);
    }
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            std::vector<Scalar> s(n, Scalar::zero(F));
            s[i] = s[j] = Scalar::one(F);
            candidates.push_back(s);
            candidates.push_back(A.product(candidates[i], candidates[j]));
        }
    std::mt19937_64 rng(lim.seed * 0x9e3779b97f4a7c15ULL + 0xabcdULL);
    int random_tries = std::min(64, std::max(8, lim.budget / 16));
    for (int t = 0; t < random_tries; ++t) {
        std::vector<Scalar> x(n, Scalar::zero(F));
        for (int i = 0; i < n; ++i) x[i] = Scalar::of_int(F, (long long)(rng() % 7) - 3);
        candidates.push_back(x);
    }
    for (const auto& x : candidates)
        if (auto e = try_split(x)) return e;
    return std::nullopt;
}

namespace {

/* Matrices over the algebra acting on a fixed complex shape. */
using AlgMat = std::vector<std::vector<AlgElem>>;

AlgMat alg_identity(const TwistedComplex& m) {
    AlgMat r(m.size(), std::vector<AlgElem>(m.size()));
    for (int i = 0; i < m.size(); ++i) r[i][i] = AlgElem::unit_of(*m.alg, m.summands[i].vertex);
    return r;
}

AlgMat alg_mul(const Algebra& A, const AlgMat& a, const AlgMat& b) {
    int n = int(a.size());
    AlgMat r(n, std::vector<AlgElem>(n));
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) {
            if (a[i][k].is_zero()) continue;
            for (int j = 0; j < n; ++j)
                if (!b[k][j].is_zero()) r[i][j] = add(r[i][j], mul(A, a[i][k], b[k][j]));
        }
    return r;
}

AlgMat alg_add(const AlgMat& a, const AlgMat& b, int sign) {
    int n = int(a.size());
    AlgMat r(n, std::vector<AlgElem>(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) r[i][j] = sign > 0 ? add(a[i][j], b[i][j]) : add(a[i][j], neg(b[i][j]));
    return r;
}

bool alg_equal(const AlgMat& a, const AlgMat& b) {
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < a[i].size(); ++j)
            if (!(a[i][j] == b[i][j])) return false;
    return true;
}

bool alg_is_zero(const AlgMat& a) {
    for (const auto& row : a)
        for (const auto& e : row)
            if (!e.is_zero()) return false;
    return true;
}

// inverse of 1 + n with n strictly positive degree entries (nilpotent)
AlgMat alg_invert_unipotent(const TwistedComplex& m, const AlgMat& u) {
    const Algebra& A = *m.alg;
    AlgMat one = alg_identity(m);
    AlgMat n = alg_add(u, one, -1);
    AlgMat inv = one;
    AlgMat pw = n;
    int guard = 0;
    while (!alg_is_zero(pw)) {
        inv = alg_add(inv, pw, (guard % 2 == 0) ? -1 : 1);
        pw = alg_mul(A, pw, n);
        if (++guard > 2 * m.alg->cy_dimension + 8)
            throw std::runtime_error("split: unipotent inverse did not terminate");
    }
    return inv;
}

}  // namespace

static std::optional<std::pair<TwistedComplex, TwistedComplex>> split_once(
    const TwistedComplex& m0, const Limits& lim) {
    TwistedComplex m = minimize(m0);
    if (m.size() <= 1) return std::nullopt;
    EndAlgebra A = endomorphism_algebra(m);
    auto ebar = find_idempotent(A, lim);
    if (!ebar) return std::nullopt;
    const Algebra& Alg = *m.alg;
    const FieldSpec F = Alg.field;

    // lift to a strict idempotent matrix: the defect is null-homotopic on the
    // minimal model, hence nilpotent; the iteration squares it away
    AlgMat e = A.rep_of(*ebar).mat;
    auto step = [&](const AlgMat& x) {
        AlgMat x2 = alg_mul(Alg, x, x);
        if (F.kind == FieldKind::PrimeField && F.characteristic == 2) return x2;
        AlgMat x3 = alg_mul(Alg, x2, x);
        if (F.kind == FieldKind::PrimeField && F.characteristic == 3) return x3;
        AlgMat r(x.size(), std::vector<AlgElem>(x.size()));
        for (size_t i = 0; i < x.size(); ++i)
            for (size_t j = 0; j < x.size(); ++j)
                r[i][j] = add(scale(Scalar::of_int(F, 3), x2[i][j]),
                              scale(Scalar::of_int(F, -2), x3[i][j]));
        return r;
    };
    int iter = 0;
    while (!alg_equal(alg_mul(Alg, e, e), e)) {
        e = step(e);
        if (++iter >= 64) throw std::runtime_error("split: idempotent lifting exceeded 64 steps");
    }

    // scalar part sigma(e) is an exact idempotent scalar matrix; change basis
    // so it becomes a 0/1 diagonal
    const int n = m.size();
    Matrix sigma(F, n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (m.summands[i].vertex != m.summands[j].vertex ||
                m.summands[i].shift != m.summands[j].shift)
                continue;
            for (const auto& [bi, c] : e[i][j].terms())
                if (bi == Alg.idempotent(m.summands[i].vertex)) sigma.at(i, j) = c;
        }
    // columns of U^-1: image basis then kernel basis of sigma (both respect
    // the (vertex,shift) grouping since sigma does)
    std::vector<std::vector<Scalar>> cols;
    int rank1 = 0;
    {
        Matrix st = sigma.transpose();
        RowReduceResult rr = row_reduce(st);  // row space of st = column space of sigma
        rank1 = rr.rank;
        for (int i = 0; i < rr.rank; ++i) {
            std::vector<Scalar> c(n, Scalar::zero(F));
            for (int j = 0; j < n; ++j) c[j] = rr.reduced.at(i, j);
            cols.push_back(c);
        }
        for (auto& k : kernel_basis(sigma)) cols.push_back(k);
    }
    if (int(cols.size()) != n) throw std::runtime_error("split: sigma basis mismatch");
    Matrix Uinv(F, n, n);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) Uinv.at(i, j) = cols[j][i];
    // invert the scalar matrix exactly
    Matrix aug(F, n, 2 * n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) aug.at(i, j) = Uinv.at(i, j);
        aug.at(i, n + i) = Scalar::one(F);
    }
    RowReduceResult rr = row_reduce(aug);
    if (rr.rank != n) throw std::runtime_error("split: basis change not invertible");
    Matrix U(F, n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) U.at(i, j) = rr.reduced.at(i, n + j);

    // the new frame is indexed by the columns of Uinv (image basis of sigma
    // first, then kernel basis); each column lives in a single (vertex,shift)
    // group, so the change of basis is a scalar algebra matrix between frames
    std::vector<Summand> new_summands(n);
    for (int j = 0; j < n; ++j) {
        int lead = -1;
        for (int i = 0; i < n; ++i)
            if (!Uinv.at(i, j).is_zero()) { lead = i; break; }
        if (lead < 0) throw std::runtime_error("split: degenerate change of basis");
        new_summands[j] = m.summands[lead];
    }
    auto to_alg = [&](const Matrix& s, const std::vector<Summand>& rows,
                      const std::vector<Summand>& cols) {
        AlgMat r(n, std::vector<AlgElem>(n));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                if (s.at(i, j).is_zero()) continue;
                if (rows[i].vertex != cols[j].vertex || rows[i].shift != cols[j].shift)
                    throw std::runtime_error("split: scalar change of basis leaves the group");
                r[i][j] = AlgElem::basis(Alg, Alg.idempotent(rows[i].vertex), s.at(i, j));
            }
        return r;
    };
    AlgMat Ua = to_alg(U, new_summands, m.summands);
    AlgMat Uainv = to_alg(Uinv, m.summands, new_summands);
    AlgMat d1 = alg_mul(Alg, Ua, alg_mul(Alg, m.diff, Uainv));
    AlgMat e1 = alg_mul(Alg, Ua, alg_mul(Alg, e, Uainv));

    TwistedComplex base;
    base.alg = m.alg;
    base.summands = new_summands;
    base.diff = d1;
    base.check_valid();
    // D0 = diag(1 x rank1, 0); u = D0 e1 + (1-D0)(1-e1) conjugates e1 to D0
    AlgMat D0(n, std::vector<AlgElem>(n));
    for (int i = 0; i < rank1; ++i) D0[i][i] = AlgElem::unit_of(Alg, new_summands[i].vertex);

    AlgMat one = alg_identity(base);
    AlgMat u = alg_add(alg_mul(Alg, D0, e1), alg_mul(Alg, alg_add(one, D0, -1), alg_add(one, e1, -1)), 1);
    AlgMat uinv = alg_invert_unipotent(base, u);
    AlgMat d2 = alg_mul(Alg, u, alg_mul(Alg, d1, uinv));

    // d2 commutes with D0, i.e. is block diagonal over the 0/1 split
    TwistedComplex left, right;
    left.alg = right.alg = m.alg;
    for (int i = 0; i < rank1; ++i) left.summands.push_back(new_summands[i]);
    for (int i = rank1; i < n; ++i) right.summands.push_back(new_summands[i]);
    left.diff.assign(rank1, std::vector<AlgElem>(rank1));
    right.diff.assign(n - rank1, std::vector<AlgElem>(n - rank1));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (d2[i][j].is_zero()) continue;
            bool li = i < rank1, lj = j < rank1;
            if (li != lj)
                throw std::runtime_error("split: differential is not block diagonal after lifting");
            if (li)
                left.diff[i][j] = d2[i][j];
            else
                right.diff[i - rank1][j - rank1] = d2[i][j];
        }
    left.check_valid();
    right.check_valid();
    if (left.is_zero_object() || right.is_zero_object())
        throw std::runtime_error("split: idempotent produced a trivial split");
    return std::make_pair(left, right);
}

SummandReport split_summands(const TwistedComplex& m, const Limits& lim) {
    SummandReport rep;
    std::vector<TwistedComplex> queue = {minimize(m)};
    std::vector<TwistedComplex> indec;
    int steps = 0;
    while (!queue.empty()) {
        TwistedComplex cur = queue.back();
        queue.pop_back();
        if (cur.is_zero_object()) continue;
        if (++steps > lim.budget) {
            rep.budget_exhausted = true;
            indec.push_back(cur);  // partial split
            continue;
        }
        auto sp = split_once(cur, lim);
        if (!sp) {
            indec.push_back(cur);
        } else {
            queue.push_back(sp->first);
            queue.push_back(sp->second);
        }
    }
    // group by isomorphism, increasing rank (summand count), then by print key
    std::sort(indec.begin(), indec.end(), [](const TwistedComplex& a, const TwistedComplex& b) {
        if (a.size() != b.size()) return a.size() < b.size();
        return a.str() < b.str();
    });
    for (const auto& p : indec) {
        bool merged = false;
        for (auto& known : rep.pieces)
            if (known.piece.size() == p.size() && is_isomorphic(known.piece, p, lim.seed).isomorphic) {
                ++known.multiplicity;
                merged = true;
                break;
            }
        if (!merged) {
            const int d = m.alg->cy_dimension;
            rep.pieces.push_back({p, 1, is_spherical(p, d)});
        }
    }
    rep.orthogonal.assign(rep.pieces.size(), std::vector<bool>(rep.pieces.size(), false));
    for (size_t i = 0; i < rep.pieces.size(); ++i)
        for (size_t j = 0; j < rep.pieces.size(); ++j)
            rep.orthogonal[i][j] = (i == j) ? false
                                            : is_orthogonal(rep.pieces[i].piece, rep.pieces[j].piece);
    std::vector<TwistedComplex> all;
    for (const auto& p : rep.pieces)
        for (int k = 0; k < p.multiplicity; ++k) all.push_back(p.piece);
    rep.verified = is_isomorphic(direct_sum(m.alg, all), m, lim.seed).isomorphic;
    return rep;
}

RecoverResult recover_collection(const TwistedComplex& m, int d, const Limits& lim) {
    RecoverResult res;
    res.split = split_summands(m, lim);
    if (!res.split.verified) {
        res.diagnostic = "split verification failed";
        return res;
    }
    // deduplicate pieces up to isomorphism-and-shift; normalize each class
    // representative so its minimal summand shift is zero
    std::vector<TwistedComplex> reps;
    std::vector<int> mult;
    for (const auto& p : res.split.pieces) {
        int lo = p.piece.summands.front().shift;
        for (const auto& s : p.piece.summands) lo = std::min(lo, s.shift);
        TwistedComplex norm = shift(p.piece, -lo);
        bool merged = false;
        for (size_t i = 0; i < reps.size(); ++i)
            if (equal_up_to_shift(reps[i], norm, lim.seed)) {
                mult[i] += p.multiplicity;
                merged = true;
                break;
            }
        if (!merged) {
            reps.push_back(norm);
            mult.push_back(p.multiplicity);
        }
    }
    for (size_t i = 0; i < reps.size(); ++i) {
        if (!is_spherical(reps[i], d)) {
            res.diagnostic = "piece " + std::to_string(i) + " is not spherical: ext table " +
                             ext_table(reps[i], reps[i]).str();
            res.collection = {reps, d};
            res.multiplicities = mult;
            return res;
        }
    }
    SphericalCollection gamma{reps, d};
    StrongReport strong = is_strongly_spherical(gamma);
    if (!strong.ok) {
        const auto& v = strong.violations.front();
        res.diagnostic = "orthogonality violation (" + std::to_string(v.i) + "," +
                         std::to_string(v.j) + ", shift " + std::to_string(v.shift) + ")";
        res.collection = gamma;
        res.multiplicities = mult;
        return res;
    }
    // the recovered twists must commute in the orthogonal way
    std::vector<std::pair<std::string, TwistedComplex>> gens;
    for (int v = 0; v < m.alg->num_vertices(); ++v)
        gens.push_back({"P(" + m.alg->vertex_names[v] + ")", projective(m.alg, v)});
    for (size_t i = 0; i < reps.size(); ++i)
        for (size_t j = i + 1; j < reps.size(); ++j) {
            CommuteReport c = commute_classify(reps[i], reps[j], gens, lim);
            if (c.kind != CommuteKind::Orthogonal) {
                res.diagnostic = "pieces " + std::to_string(i) + "," + std::to_string(j) +
                                 " do not commute orthogonally";
                res.collection = gamma;
                res.multiplicities = mult;
                return res;
            }
        }
    res.ok = true;
    res.collection = gamma;
    res.multiplicities = mult;
    return res;
}

TwistedComplex scramble(const TwistedComplex& m, uint64_t seed) {
    if (m.is_zero_object()) return m;
    const Algebra& A = *m.alg;
    std::mt19937_64 rng(seed * 0x9e3779b97f4a7c15ULL + 99);
    const int n = m.size();
    // permute summands
    std::vector<int> perm(n);
    for (int i = 0; i < n; ++i) perm[i] = i;
    std::shuffle(perm.begin(), perm.end(), rng);
    TwistedComplex p;
    p.alg = m.alg;
    p.summands.resize(n);
    p.diff.assign(n, std::vector<AlgElem>(n));
    for (int i = 0; i < n; ++i) p.summands[i] = m.summands[perm[i]];
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) p.diff[i][j] = m.diff[perm[i]][perm[j]];
    // conjugate by a random closed automorphism (identity plus a random closed
    // map with unit-scalar diagonal)
    HomComplex H = hom_complex(p, p);
    int t0 = -H.m_min;
    if (t0 < 0 || t0 >= H.degree_count()) return p;
    auto closed = kernel_basis(H.d[t0]);
    const FieldSpec F = A.field;
    for (int attempt = 0; attempt < 16; ++attempt) {
        std::vector<Scalar> coeffs(closed.empty() ? 0 : closed[0].size(), Scalar::zero(F));
        for (const auto& z : closed) {
            long long c = (long long)(rng() % 7) - 3;
            for (size_t i = 0; i < coeffs.size(); ++i)
                coeffs[i] = coeffs[i] + Scalar::of_int(F, c) * z[i];
        }
        if (coeffs.empty()) return p;
        ChainMap f = H.materialize(0, coeffs);
        // invertible scalar part?
        Matrix sb(F, n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                if (p.summands[i].vertex != p.summands[j].vertex ||
                    p.summands[i].shift != p.summands[j].shift)
                    continue;
                for (const auto& [bi, c] : f.mat[i][j].terms())
                    if (bi == A.idempotent(p.summands[i].vertex)) sb.at(i, j) = c;
            }
        if (rank(sb) != n) continue;
        AlgMat phi = f.mat;
        // invert phi = s + higher: phi^-1 = (1 + sinv*(phi-s))^-1 sinv with s scalar
        // cheaper: solve via unipotent trick after scalar normalization
        Matrix aug(F, n, 2 * n);
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) aug.at(i, j) = sb.at(i, j);
            aug.at(i, n + i) = Scalar::one(F);
        }
        RowReduceResult rr = row_reduce(aug);
        Matrix sinv(F, n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) sinv.at(i, j) = rr.reduced.at(i, n + j);
        AlgMat sinva(n, std::vector<AlgElem>(n));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                if (sinv.at(i, j).is_zero()) continue;
                sinva[i][j] = AlgElem::basis(A, A.idempotent(p.summands[i].vertex), sinv.at(i, j));
            }
        AlgMat unip = alg_mul(A, sinva, phi);  // 1 + nilpotent
        TwistedComplex shape = p;
        AlgMat unipinv = alg_invert_unipotent(shape, unip);
        AlgMat phiinv = alg_mul(A, unipinv, sinva);
        TwistedComplex r = p;
        r.diff = alg_mul(A, phi, alg_mul(A, p.diff, phiinv));
        r.check_valid();
        return r;
    }
    return p;
}

}  // namespace twistlab
