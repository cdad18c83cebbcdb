#include "twistlab/algebra.hpp"

#include <algorithm>
#include <map>

namespace twistlab {

int GraphSpec::vertex_index(const std::string& name) const {
    for (size_t i = 0; i < vertices.size(); ++i)
        if (vertices[i] == name) return int(i);
    return -1;
}

int Algebra::vertex_index(const std::string& name) const {
    for (size_t i = 0; i < vertex_names.size(); ++i)
        if (vertex_names[i] == name) return int(i);
    return -1;
}

int Algebra::basis_index(const std::string& name) const {
    for (size_t i = 0; i < basis.size(); ++i)
        if (basis[i].name == name) return int(i);
    return -1;
}

AlgebraPtr build_zigzag(const GraphSpec& g, const FieldSpec& field, int d) {
    if (g.vertices.empty()) throw std::invalid_argument("build_zigzag: empty graph");
    if (d < 2) throw std::invalid_argument("build_zigzag: cy dimension must be >= 2");
    for (size_t i = 0; i < g.vertices.size(); ++i)
        for (size_t j = i + 1; j < g.vertices.size(); ++j)
            if (g.vertices[i] == g.vertices[j])
                throw std::invalid_argument("build_zigzag: duplicate vertex " + g.vertices[i]);

    auto a = std::make_shared<Algebra>();
    a->field = field;
    a->cy_dimension = d;
    a->vertex_names = g.vertices;

    const int V = a->num_vertices();
    for (int v = 0; v < V; ++v) a->basis.push_back({"e(" + g.vertices[v] + ")", v, v, 0});

    std::vector<bool> isolated(V, true);
    // arrow basis index per oriented pair
    std::map<std::pair<int, int>, int> arrow;
    for (const auto& e : g.edges) {
        if (e.v < 0 || e.v >= V || e.w < 0 || e.w >= V)
            throw std::invalid_argument("build_zigzag: edge references unknown vertex");
        if (e.v == e.w)
            throw std::invalid_argument("build_zigzag: self-loop at " + g.vertices[e.v]);
        if (e.deg_vw < 1 || e.deg_wv < 1 || e.deg_vw + e.deg_wv != d)
            throw std::invalid_argument("build_zigzag: arrow degrees on edge {" + g.vertices[e.v] +
                                        "," + g.vertices[e.w] + "} must be >= 1 and sum to " +
                                        std::to_string(d));
        if (arrow.count({e.v, e.w}) || arrow.count({e.w, e.v}))
            throw std::invalid_argument("build_zigzag: duplicate edge {" + g.vertices[e.v] + "," +
                                        g.vertices[e.w] + "}");
        arrow[{e.v, e.w}] = a->dim();
        a->basis.push_back({"a(" + g.vertices[e.v] + "," + g.vertices[e.w] + ")", e.v, e.w, e.deg_vw});
        arrow[{e.w, e.v}] = a->dim();
        a->basis.push_back({"a(" + g.vertices[e.w] + "," + g.vertices[e.v] + ")", e.w, e.v, e.deg_wv});
        isolated[e.v] = isolated[e.w] = false;
    }
    std::vector<int> loop(V, -1);
    for (int v = 0; v < V; ++v) {
        if (isolated[v]) continue;
        loop[v] = a->dim();
        a->basis.push_back({"l(" + g.vertices[v] + ")", v, v, d});
    }

    const int N = a->dim();
    a->products.assign(N, std::vector<std::vector<std::pair<int, Scalar>>>(N));
    Scalar one = Scalar::one(field);
    for (int i = 0; i < N; ++i) {
        for (int j = 0; j < N; ++j) {
            const BasisElem& x = a->basis[i];
            const BasisElem& y = a->basis[j];
            if (x.tgt != y.src) continue;  // incomposable, product zero
            if (x.deg == 0) { a->products[i][j] = {{j, one}}; continue; }
            if (y.deg == 0) { a->products[i][j] = {{i, one}}; continue; }
            if (x.deg + y.deg > d) continue;  // kills loop*arrow, loop*loop, long paths
            // two arrows: nonzero only when the path returns to its start
            if (x.src == y.tgt) a->products[i][j] = {{loop[x.src], one}};
        }
    }
    return a;
}

std::vector<std::string> validate(const Algebra& a) {
    std::vector<std::string> report;
    const int V = a.num_vertices();
    const int N = a.dim();

    for (int v = 0; v < V; ++v) {
        if (v >= N || a.basis[v].deg != 0 || a.basis[v].src != v || a.basis[v].tgt != v)
            report.push_back("idempotent: basis element " + std::to_string(v) +
                             " is not the degree-0 idempotent of vertex " + std::to_string(v));
    }
    for (int i = V; i < N; ++i)
        if (a.basis[i].deg == 0)
            report.push_back("idempotent: extra degree-0 basis element " + a.basis[i].name);

    auto term_str = [&](int i, int j) { return a.basis[i].name + "*" + a.basis[j].name; };
    for (int i = 0; i < N; ++i) {
        for (int j = 0; j < N; ++j) {
            for (const auto& [k, c] : a.products[i][j]) {
                if (c.is_zero()) continue;
                if (a.basis[k].deg != a.basis[i].deg + a.basis[j].deg)
                    report.push_back("grading: deg(" + term_str(i, j) + ") != deg sum");
                if (a.basis[i].tgt != a.basis[j].src)
                    report.push_back("composability: " + term_str(i, j) +
                                     " is incomposable but nonzero");
                else if (a.basis[k].src != a.basis[i].src || a.basis[k].tgt != a.basis[j].tgt)
                    report.push_back("composability: " + term_str(i, j) + " has wrong endpoints");
            }
        }
    }
    // idempotent axioms: e_i e_j = delta_ij e_i
    for (int i = 0; i < V && i < N; ++i) {
        for (int j = 0; j < V && j < N; ++j) {
            AlgElem p = mul(a, AlgElem::basis(a, i, Scalar::one(a.field)),
                            AlgElem::basis(a, j, Scalar::one(a.field)));
            AlgElem want;
            if (i == j) want = AlgElem::basis(a, i, Scalar::one(a.field));
            if (!(p == want))
                report.push_back("idempotent: e_" + std::to_string(i) + "*e_" + std::to_string(j) +
                                 " incorrect");
        }
    }
    // associativity on all basis triples
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j)
            for (int k = 0; k < N; ++k) {
                AlgElem bi = AlgElem::basis(a, i, Scalar::one(a.field));
                AlgElem bj = AlgElem::basis(a, j, Scalar::one(a.field));
                AlgElem bk = AlgElem::basis(a, k, Scalar::one(a.field));
                AlgElem left = mul(a, mul(a, bi, bj), bk);
                AlgElem right = mul(a, bi, mul(a, bj, bk));
                if (!(left == right)) {
                    report.push_back("associativity: (" + a.basis[i].name + "*" + a.basis[j].name +
                                     ")*" + a.basis[k].name + " != " + a.basis[i].name + "*(" +
                                     a.basis[j].name + "*" + a.basis[k].name + ")");
                }
            }
    return report;
}

AlgElem AlgElem::basis(const Algebra& a, int idx, const Scalar& c) {
    AlgElem x;
    if (idx < 0 || idx >= a.dim()) throw std::invalid_argument("AlgElem: basis index out of range");
    if (!c.is_zero()) x.terms_.push_back({idx, c});
    return x;
}

AlgElem AlgElem::unit_of(const Algebra& a, int vertex) {
    return basis(a, a.idempotent(vertex), Scalar::one(a.field));
}

void AlgElem::add_term(int idx, const Scalar& c) {
    if (c.is_zero()) return;
    auto it = std::lower_bound(terms_.begin(), terms_.end(), idx,
                               [](const auto& t, int i) { return t.first < i; });
    if (it != terms_.end() && it->first == idx) {
        it->second = it->second + c;
        if (it->second.is_zero()) terms_.erase(it);
    } else {
        terms_.insert(it, {idx, c});
    }
}

std::string AlgElem::str(const Algebra& a) const {
    if (terms_.empty()) return "0";
    std::string s;
    for (size_t i = 0; i < terms_.size(); ++i) {
        if (i) s += " + ";
        if (!terms_[i].second.is_one()) s += terms_[i].second.str() + "*";
        s += a.basis[terms_[i].first].name;
    }
    return s;
}

AlgElem add(const AlgElem& x, const AlgElem& y) {
    AlgElem r = x;
    for (const auto& [i, c] : y.terms()) r.add_term(i, c);
    return r;
}

AlgElem neg(const AlgElem& x) {
    AlgElem r;
    for (const auto& [i, c] : x.terms()) r.add_term(i, -c);
    return r;
}

AlgElem scale(const Scalar& c, const AlgElem& x) {
    AlgElem r;
    if (c.is_zero()) return r;
    for (const auto& [i, ci] : x.terms()) r.add_term(i, c * ci);
    return r;
}

AlgElem mul(const Algebra& a, const AlgElem& x, const AlgElem& y) {
    AlgElem r;
    for (const auto& [i, ci] : x.terms())
        for (const auto& [j, cj] : y.terms())
            for (const auto& [k, ck] : a.products[i][j]) r.add_term(k, ci * cj * ck);
    return r;
}

bool is_homogeneous_path(const Algebra& a, const AlgElem& x, int src, int tgt, int deg) {
    for (const auto& [i, c] : x.terms()) {
        (void)c;
        const BasisElem& b = a.basis[i];
        if (b.src != src || b.tgt != tgt || b.deg != deg) return false;
    }
    return true;
}

}  // namespace twistlab
