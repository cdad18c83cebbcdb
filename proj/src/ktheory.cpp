#include "twistlab/ktheory.hpp"

namespace twistlab {

LatticeModel lattice_model(const Algebra& a) {
    LatticeModel m;
    m.labels = a.vertex_names;
    m.cy_dimension = a.cy_dimension;
    const int V = a.num_vertices();
    m.gram.assign(V, std::vector<long long>(V, 0));
    // chi(P_i, P_j) = sum over paths j -> i of (-1)^deg, since Hom(P_i,P_j) = e_j A e_i
    for (const auto& b : a.basis) m.gram[b.tgt][b.src] += (b.deg % 2 == 0) ? 1 : -1;
    return m;
}

KClass class_of(const TwistedComplex& x, const LatticeModel& m) {
    if (x.alg && int(m.labels.size()) != x.alg->num_vertices())
        throw std::invalid_argument("class_of: lattice does not match algebra");
    KClass v(m.labels.size(), 0);
    for (const auto& s : x.summands) v[s.vertex] += (s.shift % 2 == 0) ? 1 : -1;
    return v;
}

long long euler_pairing(const LatticeModel& m, const KClass& u, const KClass& v) {
    if (u.size() != m.labels.size() || v.size() != m.labels.size())
        throw std::invalid_argument("euler_pairing: class length mismatch");
    long long s = 0;
    for (size_t i = 0; i < u.size(); ++i)
        for (size_t j = 0; j < v.size(); ++j) s += u[i] * m.gram[i][j] * v[j];
    return s;
}

KClass reflect(const LatticeModel& m, const KClass& e, const KClass& v) {
    long long chi = euler_pairing(m, e, v);
    KClass r = v;
    for (size_t i = 0; i < r.size(); ++i) r[i] -= chi * e[i];
    return r;
}

bool lattice_commute(const LatticeModel& m, const KClass& e, const KClass& f) {
    const size_t n = m.labels.size();
    for (size_t i = 0; i < n; ++i) {
        KClass b(n, 0);
        b[i] = 1;
        KClass ef = reflect(m, e, reflect(m, f, b));
        KClass fe = reflect(m, f, reflect(m, e, b));
        if (ef != fe) return false;
    }
    return true;
}

}  // namespace twistlab
