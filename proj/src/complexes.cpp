#include "twistlab/complexes.hpp"

#include <algorithm>
#include <random>
#include <sstream>

namespace twistlab {

TwistedComplex TwistedComplex::zero(AlgebraPtr a) {
    TwistedComplex x;
    x.alg = std::move(a);
    return x;
}

TwistedComplex TwistedComplex::make(AlgebraPtr a, std::vector<Summand> summands,
                                    std::vector<std::vector<AlgElem>> diff) {
    TwistedComplex x;
    x.alg = std::move(a);
    x.summands = std::move(summands);
    x.diff = std::move(diff);
    x.check_valid();
    return x;
}

void TwistedComplex::check_valid() const {
    if (!alg) throw std::invalid_argument("TwistedComplex: missing algebra");
    const int n = size();
    if (int(diff.size()) != n) throw std::invalid_argument("TwistedComplex: differential shape");
    for (int j = 0; j < n; ++j) {
        if (int(diff[j].size()) != n) throw std::invalid_argument("TwistedComplex: differential shape");
        for (int k = 0; k < n; ++k) {
            int deg = 1 + summands[j].shift - summands[k].shift;
            if (!is_homogeneous_path(*alg, diff[j][k], summands[j].vertex, summands[k].vertex, deg))
                throw std::invalid_argument("TwistedComplex: entry (" + std::to_string(j) + "," +
                                            std::to_string(k) + ") violates degree/vertex constraint");
        }
    }
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
            AlgElem acc;
            for (int l = 0; l < n; ++l) acc = add(acc, mul(*alg, diff[j][l], diff[l][k]));
            if (!acc.is_zero())
                throw std::invalid_argument("TwistedComplex: differential does not square to zero");
        }
}

std::vector<Summand> TwistedComplex::sorted_summands() const {
    std::vector<Summand> s = summands;
    std::sort(s.begin(), s.end());
    return s;
}

std::string TwistedComplex::str() const {
    if (is_zero_object()) return "0";
    std::ostringstream os;
    for (int i = 0; i < size(); ++i) {
        if (i) os << " (+) ";
        os << "P(" << alg->vertex_names[summands[i].vertex] << ")";
        if (summands[i].shift) os << "[" << summands[i].shift << "]";
    }
    bool first = true;
    for (int j = 0; j < size(); ++j)
        for (int k = 0; k < size(); ++k) {
            if (diff[j][k].is_zero()) continue;
            os << (first ? " with d: " : ", ");
            first = false;
            os << k << "->" << j << ": " << diff[j][k].str(*alg);
        }
    return os.str();
}

bool TwistedComplex::operator==(const TwistedComplex& o) const {
    return alg == o.alg && summands == o.summands && diff == o.diff;
}

TwistedComplex projective(AlgebraPtr a, int vertex) {
    if (vertex < 0 || vertex >= a->num_vertices())
        throw std::invalid_argument("projective: unknown vertex index");
    TwistedComplex x;
    x.alg = std::move(a);
    x.summands = {{vertex, 0}};
    x.diff = {{AlgElem{}}};
    return x;
}

TwistedComplex projective(AlgebraPtr a, const std::string& vertex_name) {
    int v = a->vertex_index(vertex_name);
    if (v < 0) throw std::invalid_argument("projective: unknown vertex " + vertex_name);
    return projective(std::move(a), v);
}

ChainMap ChainMap::zero(const TwistedComplex& src, const TwistedComplex& tgt, int degree) {
    ChainMap f;
    f.src = src;
    f.tgt = tgt;
    f.degree = degree;
    f.mat.assign(tgt.size(), std::vector<AlgElem>(src.size()));
    return f;
}

ChainMap ChainMap::identity(const TwistedComplex& x) {
    ChainMap f = zero(x, x, 0);
    for (int i = 0; i < x.size(); ++i)
        f.mat[i][i] = AlgElem::unit_of(*x.alg, x.summands[i].vertex);
    return f;
}

void ChainMap::check_valid() const {
    if (src.alg != tgt.alg) throw std::invalid_argument("ChainMap: algebra mismatch");
    if (int(mat.size()) != tgt.size()) throw std::invalid_argument("ChainMap: matrix shape");
    for (int j = 0; j < tgt.size(); ++j) {
        if (int(mat[j].size()) != src.size()) throw std::invalid_argument("ChainMap: matrix shape");
        for (int k = 0; k < src.size(); ++k) {
            int deg = degree + tgt.summands[j].shift - src.summands[k].shift;
            if (!is_homogeneous_path(*src.alg, mat[j][k], tgt.summands[j].vertex,
                                     src.summands[k].vertex, deg))
                throw std::invalid_argument("ChainMap: entry (" + std::to_string(j) + "," +
                                            std::to_string(k) + ") violates degree/vertex constraint");
        }
    }
}

ChainMap ChainMap::differential() const {
    const Algebra& A = *src.alg;
    ChainMap r = zero(src, tgt, degree + 1);
    for (int j = 0; j < tgt.size(); ++j)
        for (int k = 0; k < src.size(); ++k) {
            AlgElem acc;
            for (int l = 0; l < tgt.size(); ++l) acc = add(acc, mul(A, tgt.diff[j][l], mat[l][k]));
            for (int l = 0; l < src.size(); ++l) {
                AlgElem t = mul(A, mat[j][l], src.diff[l][k]);
                acc = (degree % 2 == 0) ? add(acc, neg(t)) : add(acc, t);
            }
            r.mat[j][k] = acc;
        }
    return r;
}

bool ChainMap::is_closed() const {
    ChainMap d = differential();
    for (const auto& row : d.mat)
        for (const auto& e : row)
            if (!e.is_zero()) return false;
    return true;
}

ChainMap ChainMap::compose_after(const ChainMap& first) const {
    if (!(first.tgt == src)) throw std::invalid_argument("ChainMap: composition mismatch");
    const Algebra& A = *src.alg;
    ChainMap r = zero(first.src, tgt, degree + first.degree);
    for (int j = 0; j < tgt.size(); ++j)
        for (int k = 0; k < first.src.size(); ++k) {
            AlgElem acc;
            for (int l = 0; l < src.size(); ++l) acc = add(acc, mul(A, mat[j][l], first.mat[l][k]));
            r.mat[j][k] = acc;
        }
    return r;
}

int ExtTable::total() const {
    int t = 0;
    for (const auto& [i, n] : dims) t += n;
    return t;
}

int ExtTable::at(int i) const {
    auto it = dims.find(i);
    return it == dims.end() ? 0 : it->second;
}

std::string ExtTable::str() const {
    if (dims.empty()) return "{}";
    std::string s = "{";
    bool first = true;
    for (const auto& [i, n] : dims) {
        if (!first) s += ", ";
        first = false;
        s += std::to_string(i) + ":" + std::to_string(n);
    }
    return s + "}";
}

int HomComplex::chain_dim(int m) const {
    int t = m - m_min;
    if (t < 0 || t >= degree_count()) return 0;
    return int(bases[t].size());
}

ExtTable HomComplex::table() const {
    ExtTable t;
    for (int i = 0; i < degree_count(); ++i)
        if (homology[i] > 0) t.dims[m_min + i] = homology[i];
    return t;
}

ChainMap HomComplex::materialize(int m, const std::vector<Scalar>& coeffs) const {
    int t = m - m_min;
    if (t < 0 || t >= degree_count()) throw std::invalid_argument("HomComplex: degree out of range");
    if (coeffs.size() != bases[t].size()) throw std::invalid_argument("HomComplex: coefficient count");
    ChainMap f = ChainMap::zero(x, y, m);
    for (size_t i = 0; i < coeffs.size(); ++i) {
        if (coeffs[i].is_zero()) continue;
        const BasisElt& b = bases[t][i];
        f.mat[b.row][b.col] = add(f.mat[b.row][b.col], AlgElem::basis(*x.alg, b.alg_basis, coeffs[i]));
    }
    return f;
}

ChainMap HomComplex::rep_map(int m, int idx) const {
    int t = m - m_min;
    return materialize(m, reps.at(t).at(idx));
}

std::vector<Scalar> HomComplex::homology_coords(const ChainMap& f) const {
    int t = f.degree - m_min;
    if (t < 0 || t >= degree_count()) {
        if (f.is_closed()) return {};
        throw std::invalid_argument("HomComplex: map outside degree window");
    }
    const FieldSpec F = x.alg->field;
    // target vector in the chain basis
    std::vector<Scalar> v(bases[t].size(), Scalar::zero(F));
    for (size_t i = 0; i < bases[t].size(); ++i) {
        const BasisElt& b = bases[t][i];
        for (const auto& [bi, c] : f.mat[b.row][b.col].terms())
            if (bi == b.alg_basis) v[i] = c;
    }
    // columns: homology reps then image of previous differential
    std::vector<std::vector<Scalar>> cols;
    for (const auto& r : reps[t]) cols.push_back(r);
    size_t nreps = cols.size();
    if (t > 0) {
        for (int j = 0; j < d[t - 1].cols(); ++j) {
            std::vector<Scalar> col(bases[t].size(), Scalar::zero(F));
            for (size_t i = 0; i < bases[t].size(); ++i) col[i] = d[t - 1].at(int(i), j);
            cols.push_back(std::move(col));
        }
    }
    Matrix M(F, int(bases[t].size()), int(cols.size()));
    for (size_t j = 0; j < cols.size(); ++j)
        for (size_t i = 0; i < bases[t].size(); ++i) M.at(int(i), int(j)) = cols[j][i];
    auto sol = solve(M, v);
    if (!sol) throw std::runtime_error("HomComplex: map is not closed in this degree");
    return std::vector<Scalar>(sol->begin(), sol->begin() + nreps);
}

HomComplex hom_complex(const TwistedComplex& x, const TwistedComplex& y) {
    if (x.alg != y.alg) throw std::invalid_argument("hom_complex: algebra mismatch");
    const Algebra& A = *x.alg;
    const FieldSpec F = A.field;
    HomComplex H;
    H.x = x;
    H.y = y;
    if (x.is_zero_object() || y.is_zero_object()) return H;

    int topdeg = 0;
    for (const auto& b : A.basis) topdeg = std::max(topdeg, b.deg);
    int lo = 0, hi = 0;
    bool first = true;
    for (const auto& sy : y.summands)
        for (const auto& sx : x.summands) {
            int base = sx.shift - sy.shift;  // admissible degrees: base .. base + topdeg
            if (first) { lo = base; hi = base; first = false; }
            lo = std::min(lo, base);
            hi = std::max(hi, base + topdeg);
        }
    H.m_min = lo;
    int count = hi - lo + 1;
    H.bases.resize(count);
    for (int t = 0; t < count; ++t) {
        int m = lo + t;
        for (int j = 0; j < y.size(); ++j)
            for (int k = 0; k < x.size(); ++k) {
                int deg = m + y.summands[j].shift - x.summands[k].shift;
                for (int b = 0; b < A.dim(); ++b) {
                    const BasisElem& be = A.basis[b];
                    if (be.deg == deg && be.src == y.summands[j].vertex &&
                        be.tgt == x.summands[k].vertex)
                        H.bases[t].push_back({j, k, b});
                }
            }
    }
    // differential matrices between consecutive degrees
    H.d.resize(count);
    for (int t = 0; t < count; ++t) {
        int m = lo + t;
        int next_dim = (t + 1 < count) ? int(H.bases[t + 1].size()) : 0;
        Matrix D(F, next_dim, int(H.bases[t].size()));
        for (size_t c = 0; c < H.bases[t].size(); ++c) {
            std::vector<Scalar> unit(H.bases[t].size(), Scalar::zero(F));
            unit[c] = Scalar::one(F);
            ChainMap f = H.materialize(m, unit);
            ChainMap df = f.differential();
            if (t + 1 < count) {
                for (size_t r = 0; r < H.bases[t + 1].size(); ++r) {
                    const auto& b = H.bases[t + 1][r];
                    for (const auto& [bi, cc] : df.mat[b.row][b.col].terms())
                        if (bi == b.alg_basis) D.at(int(r), int(c)) = cc;
                }
            }
        }
        H.d[t] = std::move(D);
    }
    // homology with representatives: extend a basis of im(d_{t-1}) inside ker(d_t)
    H.homology.assign(count, 0);
    H.reps.resize(count);
    for (int t = 0; t < count; ++t) {
        auto ker = kernel_basis(H.d[t]);
        int dim_t = int(H.bases[t].size());
        Matrix acc(F, dim_t == 0 ? 0 : dim_t, dim_t);  // rows accumulate image + chosen reps
        int acc_rows = 0;
        auto try_add = [&](const std::vector<Scalar>& v) {
            Matrix trial(F, acc_rows + 1, dim_t);
            for (int i = 0; i < acc_rows; ++i)
                for (int j = 0; j < dim_t; ++j) trial.at(i, j) = acc.at(i, j);
            for (int j = 0; j < dim_t; ++j) trial.at(acc_rows, j) = v[j];
            if (rank(trial) == acc_rows + 1) {
                for (int j = 0; j < dim_t; ++j) acc.at(acc_rows, j) = v[j];
                ++acc_rows;
                return true;
            }
            return false;
        };
        if (t > 0) {
            for (int c = 0; c < H.d[t - 1].cols(); ++c) {
                std::vector<Scalar> col(dim_t, Scalar::zero(F));
                for (int i = 0; i < dim_t; ++i) col[i] = H.d[t - 1].at(i, c);
                try_add(col);
            }
        }
        for (const auto& z : ker)
            if (try_add(z)) H.reps[t].push_back(z);
        H.homology[t] = int(H.reps[t].size());
    }
    return H;
}

ExtTable ext_table(const TwistedComplex& x, const TwistedComplex& y) {
    return hom_complex(x, y).table();
}

TwistedComplex shift(const TwistedComplex& x, int n) {
    TwistedComplex r = x;
    for (auto& s : r.summands) s.shift += n;
    if (n % 2 != 0)
        for (auto& row : r.diff)
            for (auto& e : row) e = neg(e);
    return r;
}

TwistedComplex cone(const ChainMap& f) {
    if (f.degree != 0) throw std::invalid_argument("cone: map must have degree 0");
    if (!f.is_closed()) throw std::invalid_argument("cone: map must be closed");
    const int ns = f.src.size(), nt = f.tgt.size();
    TwistedComplex c;
    c.alg = f.src.alg;
    for (const auto& s : f.src.summands) c.summands.push_back({s.vertex, s.shift + 1});
    for (const auto& s : f.tgt.summands) c.summands.push_back(s);
    c.diff.assign(ns + nt, std::vector<AlgElem>(ns + nt));
    for (int j = 0; j < ns; ++j)
        for (int k = 0; k < ns; ++k) c.diff[j][k] = neg(f.src.diff[j][k]);
    for (int j = 0; j < nt; ++j)
        for (int k = 0; k < ns; ++k) c.diff[ns + j][k] = f.mat[j][k];
    for (int j = 0; j < nt; ++j)
        for (int k = 0; k < nt; ++k) c.diff[ns + j][ns + k] = f.tgt.diff[j][k];
    return c;
}

TwistedComplex direct_sum(AlgebraPtr a, const std::vector<TwistedComplex>& xs) {
    TwistedComplex r = TwistedComplex::zero(std::move(a));
    for (const auto& x : xs) {
        if (x.alg != r.alg) throw std::invalid_argument("direct_sum: algebra mismatch");
        int off = r.size();
        r.summands.insert(r.summands.end(), x.summands.begin(), x.summands.end());
        for (auto& row : r.diff) row.resize(r.size());
        r.diff.resize(r.size(), std::vector<AlgElem>(r.size()));
        for (int j = 0; j < x.size(); ++j)
            for (int k = 0; k < x.size(); ++k) r.diff[off + j][off + k] = x.diff[j][k];
    }
    return r;
}

/* One Gaussian elimination step: kill a unit (degree-0) entry of the
 * differential.  diff'[a][b] = diff[a][b] - diff[a][k] u^-1 diff[j][b]. */
static bool eliminate_one(TwistedComplex& x) {
    const Algebra& A = *x.alg;
    const int n = x.size();
    for (int j = 0; j < n; ++j) {
        for (int k = 0; k < n; ++k) {
            const AlgElem& e = x.diff[j][k];
            if (e.is_zero()) continue;
            if (1 + x.summands[j].shift - x.summands[k].shift != 0) continue;
            // degree-0 homogeneous entry: a scalar multiple of an idempotent
            Scalar u = e.terms()[0].second;
            Scalar uinv = u.inverse();
            std::vector<int> keep;
            for (int i = 0; i < n; ++i)
                if (i != j && i != k) keep.push_back(i);
            std::vector<std::vector<AlgElem>> nd(keep.size(), std::vector<AlgElem>(keep.size()));
            for (size_t a = 0; a < keep.size(); ++a)
                for (size_t b = 0; b < keep.size(); ++b) {
                    AlgElem corr = mul(A, x.diff[keep[a]][k], scale(uinv, x.diff[j][keep[b]]));
                    nd[a][b] = add(x.diff[keep[a]][keep[b]], neg(corr));
                }
            std::vector<Summand> nb;
            for (int i : keep) nb.push_back(x.summands[i]);
            x.summands = std::move(nb);
            x.diff = std::move(nd);
            return true;
        }
    }
    return false;
}

TwistedComplex minimize(const TwistedComplex& x) {
    TwistedComplex r = x;
    while (eliminate_one(r)) {}
    return r;
}

static Scalar scalar_part(const Algebra& A, const AlgElem& e, int vertex) {
    for (const auto& [i, c] : e.terms())
        if (i == A.idempotent(vertex)) return c;
    return Scalar::zero(A.field);
}

/* Scalar (degree-0) block of a degree-0 endomorphism-shaped map between
 * complexes with equal summand lists. */
static Matrix degree_zero_block(const ChainMap& f) {
    const Algebra& A = *f.src.alg;
    int n = f.src.size();
    Matrix m(A.field, n, n);
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
            if (f.tgt.summands[j].vertex != f.src.summands[k].vertex ||
                f.tgt.summands[j].shift != f.src.summands[k].shift)
                continue;
            m.at(j, k) = scalar_part(A, f.mat[j][k], f.src.summands[k].vertex);
        }
    return m;
}

IsoResult is_isomorphic(const TwistedComplex& x, const TwistedComplex& y, uint64_t seed) {
    if (x.alg != y.alg) throw std::invalid_argument("is_isomorphic: algebra mismatch");
    TwistedComplex mx = minimize(x);
    TwistedComplex my = minimize(y);
    if (mx.sorted_summands() != my.sorted_summands()) return {false, std::nullopt};
    if (mx.is_zero_object()) return {true, ChainMap::zero(mx, my, 0)};

    HomComplex H = hom_complex(mx, my);
    int t = -H.m_min;
    if (t < 0 || t >= H.degree_count()) return {false, std::nullopt};
    auto closed = kernel_basis(H.d[t]);
    if (closed.empty()) return {false, std::nullopt};
    const FieldSpec F = mx.alg->field;

    auto check = [&](const std::vector<Scalar>& coeffs) -> std::optional<ChainMap> {
        ChainMap f = H.materialize(0, coeffs);
        if (rank(degree_zero_block(f)) != mx.size()) return std::nullopt;
        if (!f.is_closed()) return std::nullopt;  // defensive: combos of kernel vectors are closed
        return f;
    };

    // quick deterministic pass: single basis maps, then their plain sum
    for (const auto& z : closed)
        if (auto w = check(z)) return {true, w};
    {
        std::vector<Scalar> sum(closed[0].size(), Scalar::zero(F));
        for (const auto& z : closed)
            for (size_t i = 0; i < sum.size(); ++i) sum[i] = sum[i] + z[i];
        if (auto w = check(sum)) return {true, w};
    }
    // seeded random combinations; a found witness is verified exactly above
    std::mt19937_64 rng(seed * 0x9e3779b97f4a7c15ULL + 0x2545f4914f6cdd1dULL);
    const int trials = 10;
    for (int trial = 0; trial < trials; ++trial) {
        std::vector<Scalar> coeffs(closed[0].size(), Scalar::zero(F));
        for (const auto& z : closed) {
            long long c = (F.kind == FieldKind::Rationals)
                              ? (long long)(rng() % 131071) - 65535
                              : (long long)(rng() % F.characteristic);
            for (size_t i = 0; i < coeffs.size(); ++i)
                coeffs[i] = coeffs[i] + Scalar::of_int(F, c) * z[i];
        }
        if (auto w = check(coeffs)) return {true, w};
    }
    return {false, std::nullopt};
}

}  // namespace twistlab
