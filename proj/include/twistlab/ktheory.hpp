#pragma once

#include "twistlab/complexes.hpp"

namespace twistlab {

/* K-theory shadow: classes are integer vectors over the projectives, the
 * Euler pairing is the gram matrix, and a twist acts as the reflection
 * v -> v - chi(e,v) e. */
struct LatticeModel {
    std::vector<std::string> labels;
    std::vector<std::vector<long long>> gram;  // gram[i][j] = chi(P_i, P_j)
    int cy_dimension = 2;
};

using KClass = std::vector<long long>;

LatticeModel lattice_model(const Algebra& a);

KClass class_of(const TwistedComplex& x, const LatticeModel& m);
long long euler_pairing(const LatticeModel& m, const KClass& u, const KClass& v);
KClass reflect(const LatticeModel& m, const KClass& e, const KClass& v);
bool lattice_commute(const LatticeModel& m, const KClass& e, const KClass& f);

}  // namespace twistlab
