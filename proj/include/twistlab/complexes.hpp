#pragma once

#include <map>
#include <optional>

#include "twistlab/algebra.hpp"
#include "twistlab/matrix.hpp"

namespace twistlab {

/* (vertex, shift) summand: the projective P_vertex shifted by [shift] in the
 * categorical sense, so Hom(P_v, P_v[d]) is where the loop class lives. */
struct Summand {
    int vertex = 0;
    int shift = 0;
    auto operator<=>(const Summand&) const = default;
};

/* Formal complex of shifted projectives with an algebra-valued differential.
 * diff[j][k] is the component from summand k into summand j; it is a path
 * v_j -> v_k of degree 1 + shift_j - shift_k, and diff*diff = 0 exactly. */
class TwistedComplex {
public:
    AlgebraPtr alg;
    std::vector<Summand> summands;
    std::vector<std::vector<AlgElem>> diff;

    static TwistedComplex zero(AlgebraPtr a);
    static TwistedComplex make(AlgebraPtr a, std::vector<Summand> summands,
                               std::vector<std::vector<AlgElem>> diff);

    int size() const { return int(summands.size()); }
    bool is_zero_object() const { return summands.empty(); }
    void check_valid() const;  // throws on degree/vertex violations or diff^2 != 0

    std::vector<Summand> sorted_summands() const;
    std::string str() const;

    bool operator==(const TwistedComplex& o) const;
};

TwistedComplex projective(AlgebraPtr a, int vertex);
TwistedComplex projective(AlgebraPtr a, const std::string& vertex_name);

/* Degree-m map of twisted complexes; mat[j][k] is a path w_j -> v_k of degree
 * m + tshift_j - sshift_k.  Closedness is tracked separately, not assumed. */
struct ChainMap {
    TwistedComplex src, tgt;
    int degree = 0;
    std::vector<std::vector<AlgElem>> mat;

    static ChainMap zero(const TwistedComplex& src, const TwistedComplex& tgt, int degree);
    static ChainMap identity(const TwistedComplex& x);

    void check_valid() const;
    ChainMap differential() const;  // D(f) = d_tgt f - (-1)^deg f d_src
    bool is_closed() const;
    ChainMap compose_after(const ChainMap& first) const;  // this . first
};

struct ExtTable {
    std::map<int, int> dims;  // nonzero entries only
    int total() const;
    int at(int i) const;
    bool empty_table() const { return dims.empty(); }
    bool operator==(const ExtTable&) const = default;
    std::string str() const;
};

/* The morphism complex Hom*(x,y): per-degree bases of admissible matrices,
 * the differential between consecutive degrees, homology dimensions and
 * chosen cocycle representatives of a homology basis. */
struct HomComplex {
    TwistedComplex x, y;
    struct BasisElt {
        int row = 0, col = 0, alg_basis = 0;
    };
    int m_min = 0;                                  // first degree slot
    std::vector<std::vector<BasisElt>> bases;       // per degree offset
    std::vector<Matrix> d;                          // d[t]: degree (m_min+t) -> next
    std::vector<int> homology;                      // dim H^(m_min+t)
    std::vector<std::vector<std::vector<Scalar>>> reps;  // homology reps, coefficient vectors

    int degree_count() const { return int(bases.size()); }
    int chain_dim(int m) const;
    ExtTable table() const;
    ChainMap materialize(int m, const std::vector<Scalar>& coeffs) const;
    ChainMap rep_map(int m, int idx) const;
    // coordinates of a closed degree-m map in (homology reps | boundaries); the
    // first reps-count entries are the homology coordinates
    std::vector<Scalar> homology_coords(const ChainMap& f) const;
};

HomComplex hom_complex(const TwistedComplex& x, const TwistedComplex& y);
ExtTable ext_table(const TwistedComplex& x, const TwistedComplex& y);

TwistedComplex shift(const TwistedComplex& x, int n);
TwistedComplex cone(const ChainMap& f);  // rejects non-closed or nonzero degree
TwistedComplex direct_sum(AlgebraPtr a, const std::vector<TwistedComplex>& xs);

/* Homotopy-equivalent complex with no degree-0 (idempotent) entries in the
 * differential, by iterated Gaussian elimination of unit entries. */
TwistedComplex minimize(const TwistedComplex& x);

struct IsoResult {
    bool isomorphic = false;
    std::optional<ChainMap> witness;  // closed degree-0 iso between minimal models
};

/* Decides x ~ y via minimal models: equal summand multisets plus a closed
 * degree-0 map invertible modulo positive degree.  The search is randomized
 * with the given seed; positives are re-verified exactly on the witness. */
IsoResult is_isomorphic(const TwistedComplex& x, const TwistedComplex& y, uint64_t seed = 0);

}  // namespace twistlab
