#pragma once

#include "twistlab/complexes.hpp"

namespace twistlab {

struct Limits {
    int max_shift = 16;    // boundedness window for summand shifts
    int budget = 2000;     // peeling / idempotent iteration caps
    uint64_t seed = 0;
};

struct SphericalCollection {
    std::vector<TwistedComplex> members;
    int cy_dimension = 2;
};

/* The canonical evaluation Hom*(e,g) (x) e -> g: one shifted copy of e per
 * homology class of the morphism complex, mapped by a cocycle representative.
 * Closed of degree 0 by construction. */
ChainMap evaluation_map(const TwistedComplex& e, const TwistedComplex& g);

/* Spherical twist T_e(g) = minimize(cone(evaluation)); fixes e-perp pointwise
 * and sends a spherical e to e[1-d]. */
TwistedComplex twist(const TwistedComplex& e, const TwistedComplex& g, const Limits& lim = {});

/* Quasi-inverse: shift(cone(coevaluation g -> Hom*(g,e)^dual (x) e), -1). */
TwistedComplex inverse_twist(const TwistedComplex& e, const TwistedComplex& g,
                             const Limits& lim = {});

struct StrictModeError : std::runtime_error {
    int i, j, shift;
    StrictModeError(int i_, int j_, int shift_, const std::string& msg)
        : std::runtime_error(msg), i(i_), j(j_), shift(shift_) {}
};

/* twist(E_1, twist(E_2, ... twist(E_n, g))).  In strict mode the collection
 * must be strongly spherical; the offending pair and shift are reported. */
TwistedComplex composite_twist(const SphericalCollection& gamma, const TwistedComplex& g,
                               bool strict = true, const Limits& lim = {});

void check_window(const TwistedComplex& x, const Limits& lim);

}  // namespace twistlab
