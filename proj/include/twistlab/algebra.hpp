#pragma once

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "twistlab/field.hpp"

namespace twistlab {

/* Basis element of a graded algebra: a "path" from src to tgt of the given
 * internal degree.  Internal degree is identified with homological degree
 * throughout the engine, so degree-d loops realize the d-sphere Ext pattern. */
struct BasisElem {
    std::string name;
    int src = 0;
    int tgt = 0;
    int deg = 0;
};

struct GraphSpec {
    std::vector<std::string> vertices;
    struct Edge {
        int v = 0, w = 0;        // vertex indices, v != w
        int deg_vw = 1;          // degree of the arrow v -> w
        int deg_wv = 1;          // degree of the arrow w -> v
    };
    std::vector<Edge> edges;

    int vertex_index(const std::string& name) const;  // -1 when unknown
};

/* Finite-dimensional graded algebra presented by basis and structure
 * constants.  Convention: paths compose left to right, so a product x*y is
 * nonzero only when tgt(x) == src(y), and Hom(P_v, P_w) = e_w * A * e_v.
 * Indices 0..V-1 are the vertex idempotents. */
struct Algebra {
    FieldSpec field;
    int cy_dimension = 2;
    std::vector<std::string> vertex_names;
    std::vector<BasisElem> basis;
    // products[i][j]: sparse combination, terms (basis index, coefficient)
    std::vector<std::vector<std::vector<std::pair<int, Scalar>>>> products;

    int num_vertices() const { return int(vertex_names.size()); }
    int dim() const { return int(basis.size()); }
    int idempotent(int v) const { return v; }
    int vertex_index(const std::string& name) const;  // -1 when unknown
    int basis_index(const std::string& name) const;   // -1 when unknown
};

using AlgebraPtr = std::shared_ptr<const Algebra>;

/* Zigzag algebra of a graph: idempotents, one arrow per oriented edge with
 * the declared degrees (summing to d on each edge), and a degree-d loop at
 * every non-isolated vertex; all return paths to v are identified with the
 * loop at v, and everything longer dies. */
AlgebraPtr build_zigzag(const GraphSpec& g, const FieldSpec& field, int d);

// Violation report; empty iff the spec is a valid graded algebra.
std::vector<std::string> validate(const Algebra& a);

/* Sparse element of the algebra: sorted (basis index, coefficient) terms. */
class AlgElem {
public:
    AlgElem() = default;

    static AlgElem basis(const Algebra& a, int idx, const Scalar& c);
    static AlgElem unit_of(const Algebra& a, int vertex);  // e_v

    bool is_zero() const { return terms_.empty(); }
    const std::vector<std::pair<int, Scalar>>& terms() const { return terms_; }

    void add_term(int idx, const Scalar& c);  // accumulate, keep sorted/reduced

    std::string str(const Algebra& a) const;

    bool operator==(const AlgElem& o) const { return terms_ == o.terms_; }

private:
    std::vector<std::pair<int, Scalar>> terms_;
};

AlgElem add(const AlgElem& x, const AlgElem& y);
AlgElem neg(const AlgElem& x);
AlgElem scale(const Scalar& c, const AlgElem& x);
AlgElem mul(const Algebra& a, const AlgElem& x, const AlgElem& y);

/* True when every term is a path src -> tgt of the stated degree. */
bool is_homogeneous_path(const Algebra& a, const AlgElem& x, int src, int tgt, int deg);

}  // namespace twistlab
