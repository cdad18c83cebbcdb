#pragma once

#include "twistlab/analysis.hpp"

namespace twistlab {

/* Endomorphisms of the minimal model in the homotopy category: closed
 * degree-0 maps modulo null-homotopic ones, with structure constants. */
struct EndAlgebra {
    TwistedComplex object;  // minimal model
    HomComplex hom;         // hom_complex(object, object)
    int dimension = 0;
    std::vector<Scalar> identity;                       // coords of id
    std::vector<std::vector<Scalar>> structure;         // structure[i*dim+j] = coords of b_i b_j
    ChainMap rep(int i) const;                          // strict representative of basis i
    ChainMap rep_of(const std::vector<Scalar>& coords) const;
    std::vector<Scalar> product(const std::vector<Scalar>& x, const std::vector<Scalar>& y) const;
};

EndAlgebra endomorphism_algebra(const TwistedComplex& m);

/* A nontrivial idempotent (e^2 = e, e not in {0, id}) when one is found:
 * minimal polynomials of candidate elements are split at field roots and the
 * Bezout idempotent is formed; absent when the algebra looks local.  Positive
 * answers are exact; the split itself is re-verified downstream. */
std::optional<std::vector<Scalar>> find_idempotent(const EndAlgebra& a, const Limits& lim = {});

struct SummandPiece {
    TwistedComplex piece;
    int multiplicity = 1;
    bool spherical = false;
};

struct SummandReport {
    std::vector<SummandPiece> pieces;          // indecomposables, increasing rank
    std::vector<std::vector<bool>> orthogonal; // pairwise, over the piece list
    bool verified = false;                     // direct_sum(pieces) ~ input, checked exactly
    bool budget_exhausted = false;
};

SummandReport split_summands(const TwistedComplex& m, const Limits& lim = {});

struct RecoverResult {
    bool ok = false;
    SphericalCollection collection;            // deduplicated up to iso-and-shift
    std::vector<int> multiplicities;
    SummandReport split;
    std::string diagnostic;                    // which clause broke, when !ok
};

/* The recovery pipeline: split into indecomposables, deduplicate up to shift,
 * check sphericality and the strongly spherical pattern, then verify pairwise
 * commutation is the orthogonal kind. */
RecoverResult recover_collection(const TwistedComplex& m, int d, const Limits& lim = {});

/* Seeded closed automorphism conjugation plus summand permutation; yields an
 * isomorphic complex for scrambling decomposition inputs. */
TwistedComplex scramble(const TwistedComplex& m, uint64_t seed);

}  // namespace twistlab
