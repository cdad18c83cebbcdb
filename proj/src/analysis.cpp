#include "twistlab/analysis.hpp"

#include <algorithm>
#include <random>

namespace twistlab {

bool is_spherical(const TwistedComplex& e, int d) {
    ExtTable t = ext_table(e, e);
    ExtTable want;
    want.dims[0] = 1;
    want.dims[d] = 1;
    return t == want;
}

Classification classify(const TwistedComplex& e, int d) {
    ExtTable t = ext_table(e, e);
    Classification c;
    c.simple = t.at(0) == 1;
    c.rigid = t.at(1) == 0;
    bool middle_vanishes = true;
    for (int i = 1; i < d; ++i)
        if (t.at(i) != 0) middle_vanishes = false;
    c.exceptional = c.simple && middle_vanishes;
    c.spherical = c.simple && middle_vanishes && t.at(d) == 1 && t.total() == 2;
    return c;
}

bool is_orthogonal(const TwistedComplex& e, const TwistedComplex& f) {
    return ext_table(e, f).empty_table() && ext_table(f, e).empty_table();
}

StrongReport is_strongly_spherical(const SphericalCollection& gamma) {
    StrongReport rep;
    const int d = gamma.cy_dimension;
    for (size_t i = 0; i < gamma.members.size(); ++i)
        for (size_t j = 0; j < gamma.members.size(); ++j) {
            ExtTable t = ext_table(gamma.members[i], gamma.members[j]);
            ExtTable want;
            if (i == j) {
                want.dims[0] = 1;
                want.dims[d] = 1;
            }
            if (t == want) continue;
            rep.ok = false;
            int bad = 0;
            for (const auto& [s, n] : t.dims)
                if (n != want.at(s)) { bad = s; break; }
            rep.violations.push_back({int(i), int(j), bad});
        }
    return rep;
}

bool is_strongly_simple(const std::vector<TwistedComplex>& objs) {
    for (size_t i = 0; i < objs.size(); ++i) {
        if (ext_table(objs[i], objs[i]).at(0) != 1) return false;
        for (size_t j = 0; j < objs.size(); ++j) {
            if (i == j) continue;
            if (!ext_table(objs[i], objs[j]).empty_table()) return false;
        }
    }
    return true;
}

int d_e(const TwistedComplex& e, const TwistedComplex& g) { return ext_table(e, g).total(); }

/* Candidate homology classes for one peel step, minimal |shift| first.  Seed 0
 * keeps the representative basis order; other seeds permute within a degree
 * and append random nonzero combinations. */
static std::vector<std::pair<int, std::vector<Scalar>>> peel_candidates(const HomComplex& H,
                                                                        uint64_t seed) {
    std::vector<int> degs;
    for (int t = 0; t < H.degree_count(); ++t)
        if (!H.reps[t].empty()) degs.push_back(H.m_min + t);
    std::sort(degs.begin(), degs.end(),
              [](int a, int b) { return std::abs(a) != std::abs(b) ? std::abs(a) < std::abs(b) : a < b; });
    std::vector<std::pair<int, std::vector<Scalar>>> out;
    std::mt19937_64 rng(seed * 0x9e3779b97f4a7c15ULL + 7);
    const FieldSpec F = H.x.alg->field;
    for (int m : degs) {
        const auto& reps = H.reps[m - H.m_min];
        std::vector<size_t> order(reps.size());
        for (size_t i = 0; i < order.size(); ++i) order[i] = i;
        if (seed != 0) std::shuffle(order.begin(), order.end(), rng);
        for (size_t i : order) out.push_back({m, reps[i]});
        if (seed != 0 && reps.size() > 1) {
            std::vector<Scalar> combo(reps[0].size(), Scalar::zero(F));
            for (const auto& r : reps) {
                long long c = 1 + (long long)(rng() % 97);
                for (size_t i = 0; i < combo.size(); ++i)
                    combo[i] = combo[i] + Scalar::of_int(F, c) * r[i];
            }
            out.push_back({degs.empty() ? 0 : m, combo});
        }
    }
    return out;
}

static PeelResult peel_rec(const TwistedComplex& e, const TwistedComplex& g, const Limits& lim,
                           int& budget, uint64_t seed) {
    if (g.is_zero_object()) return {true, {}, PeelFailure::None};
    int n = d_e(e, g);
    if (n == 0) return {false, {}, PeelFailure::NonMember};
    if (n % 2 != 0) return {false, {}, PeelFailure::ParityObstruction};
    HomComplex H = hom_complex(e, g);
    bool exhausted = false;
    for (const auto& [m, coeffs] : peel_candidates(H, seed)) {
        if (budget <= 0) { exhausted = true; break; }
        --budget;
        ChainMap rep = H.materialize(m, coeffs);
        ChainMap f = ChainMap::zero(shift(e, -m), g, 0);
        f.mat = rep.mat;
        bool in_window = true;
        for (const auto& s : f.src.summands)
            if (std::abs(s.shift + 1) > lim.max_shift) in_window = false;
        if (!in_window) continue;
        TwistedComplex c = minimize(cone(f));
        if (d_e(e, c) != n - 2) continue;  // this choice does not reduce; try another
        PeelResult sub = peel_rec(e, c, lim, budget, seed);
        if (sub.success) {
            sub.shifts.insert(sub.shifts.begin(), -m);
            return sub;
        }
        if (sub.failure == PeelFailure::BudgetExhausted) return sub;
    }
    if (exhausted) return {false, {}, PeelFailure::BudgetExhausted};
    return {false, {}, PeelFailure::NoReducingChoice};
}

PeelResult peel_filtration(const TwistedComplex& e, const TwistedComplex& g, const Limits& lim) {
    const int d = e.alg->cy_dimension;
    if (d <= 1)
        throw std::invalid_argument("peel_filtration: requires cy dimension d >= 2");
    if (!is_spherical(e, d))
        throw std::invalid_argument("peel_filtration: e is not spherical");
    int budget = lim.budget;
    return peel_rec(e, minimize(g), lim, budget, lim.seed);
}

MembershipReport thick_membership(const TwistedComplex& e, const TwistedComplex& g, int d,
                                  const Limits& lim) {
    if (d <= 1)
        throw std::invalid_argument("thick_membership: requires cy dimension d >= 2 "
                                    "(the d_E induction needs d > 1)");
    if (!is_spherical(e, d)) throw std::invalid_argument("thick_membership: e is not spherical");
    MembershipReport rep;
    rep.d_e_total = d_e(e, g);
    TwistedComplex t = twist(e, g, lim);
    rep.twist_test_passed = is_isomorphic(t, shift(g, 1 - d), lim.seed).isomorphic;
    rep.in_thick_subcategory = rep.twist_test_passed;
    if (rep.in_thick_subcategory) {
        PeelResult p = peel_filtration(e, g, lim);
        if (p.success) rep.filtration_shifts = p.shifts;
    }
    return rep;
}

std::optional<int> equal_up_to_shift(const TwistedComplex& e, const TwistedComplex& f,
                                     uint64_t seed) {
    TwistedComplex me = minimize(e);
    TwistedComplex mf = minimize(f);
    if (me.is_zero_object() && mf.is_zero_object()) return 0;
    if (me.is_zero_object() || mf.is_zero_object()) return std::nullopt;
    auto se = me.sorted_summands();
    auto sf = mf.sorted_summands();
    if (se.size() != sf.size()) return std::nullopt;
    int i = sf[0].shift - se[0].shift;  // candidate uniform shift
    for (size_t k = 0; k < se.size(); ++k)
        if (sf[k].vertex != se[k].vertex || sf[k].shift != se[k].shift + i) return std::nullopt;
    if (is_isomorphic(shift(me, i), mf, seed).isomorphic) return i;
    return std::nullopt;
}

CommuteReport commute_classify(const TwistedComplex& e, const TwistedComplex& f,
                               const std::vector<std::pair<std::string, TwistedComplex>>& generators,
                               const Limits& lim) {
    const int d = e.alg->cy_dimension;
    if (!is_spherical(e, d) || !is_spherical(f, d))
        throw std::invalid_argument("commute_classify: both objects must be spherical");
    for (const auto& [name, g] : generators) {
        TwistedComplex ef = twist(e, twist(f, g, lim), lim);
        TwistedComplex fe = twist(f, twist(e, g, lim), lim);
        if (!is_isomorphic(ef, fe, lim.seed).isomorphic) {
            CommuteReport rep;
            rep.kind = CommuteKind::NotCommute;
            rep.witness_name = name;
            return rep;
        }
    }
    if (auto i = equal_up_to_shift(e, f, lim.seed)) {
        CommuteReport rep;
        rep.kind = CommuteKind::Equal;
        rep.witness_shift = *i;
        return rep;
    }
    if (!is_orthogonal(e, f))
        throw std::runtime_error("commute_classify: twists commute on all generators but the pair "
                                 "is neither equal up to shift nor orthogonal");
    CommuteReport rep;
    rep.kind = CommuteKind::Orthogonal;
    return rep;
}

}  // namespace twistlab
