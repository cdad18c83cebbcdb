#pragma once

#include "twistlab/twists.hpp"

namespace twistlab {

// spherical: ext table of (e,e) is exactly {0:1, d:1}
bool is_spherical(const TwistedComplex& e, int d);

struct Classification {
    bool simple = false;       // dim Hom(e,e) = 1
    bool rigid = false;        // Ext^1(e,e) = 0
    bool exceptional = false;  // simple and Ext^i(e,e) = 0 for 0 < i < d
    bool spherical = false;
};
Classification classify(const TwistedComplex& e, int d);

// completely orthogonal: both ext tables empty
bool is_orthogonal(const TwistedComplex& e, const TwistedComplex& f);

struct StrongViolation {
    int i = 0, j = 0, shift = 0;
};
struct StrongReport {
    bool ok = true;
    std::vector<StrongViolation> violations;
};
StrongReport is_strongly_spherical(const SphericalCollection& gamma);

bool is_strongly_simple(const std::vector<TwistedComplex>& objs);

// d_E(G): total dimension of Hom(E, G[i]) over all i
int d_e(const TwistedComplex& e, const TwistedComplex& g);

struct MembershipReport {
    bool in_thick_subcategory = false;
    int d_e_total = 0;
    std::optional<std::vector<int>> filtration_shifts;
    bool twist_test_passed = false;
};

/* Membership in <e>: decided by the twist criterion T_e(g) ~ g[1-d]; on
 * success a cone-peeling filtration is attempted (see peel_filtration). */
MembershipReport thick_membership(const TwistedComplex& e, const TwistedComplex& g, int d,
                                  const Limits& lim = {});

enum class PeelFailure { None, NonMember, ParityObstruction, NoReducingChoice, BudgetExhausted };

struct PeelResult {
    bool success = false;
    std::vector<int> shifts;  // shifts of the peeled e-factors
    PeelFailure failure = PeelFailure::None;
};

/* Repeatedly cone off a homology class e[i] -> g whose cone drops d_e by
 * exactly 2, minimal |i| first with seeded variation and backtracking.  A
 * successful peel therefore always has length d_e/2. */
PeelResult peel_filtration(const TwistedComplex& e, const TwistedComplex& g,
                           const Limits& lim = {});

enum class CommuteKind { Orthogonal, Equal, NotCommute };

struct CommuteReport {
    CommuteKind kind = CommuteKind::Orthogonal;
    std::optional<int> witness_shift;         // f ~ shift(e, i) when Equal
    std::optional<std::string> witness_name;  // failing generator when NotCommute
};

/* Theorem harness: compare T_e T_f (g) with T_f T_e (g) over the generators.
 * All isomorphic: Equal when f ~ e[i], otherwise Orthogonal (and the theorem
 * says is_orthogonal(e,f) must hold; a violation throws). */
CommuteReport commute_classify(const TwistedComplex& e, const TwistedComplex& f,
                               const std::vector<std::pair<std::string, TwistedComplex>>& generators,
                               const Limits& lim = {});

// f ~ shift(e, i) for some i; returns the witness shift
std::optional<int> equal_up_to_shift(const TwistedComplex& e, const TwistedComplex& f,
                                     uint64_t seed = 0);

}  // namespace twistlab
