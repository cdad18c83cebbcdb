#include "twistlab/twists.hpp"

#include "twistlab/analysis.hpp"

namespace twistlab {

void check_window(const TwistedComplex& x, const Limits& lim) {
    for (const auto& s : x.summands)
        if (s.shift > lim.max_shift || s.shift < -lim.max_shift)
            throw std::runtime_error("shift window exceeded (|shift| > " +
                                     std::to_string(lim.max_shift) + "); raise --max-shift");
}

ChainMap evaluation_map(const TwistedComplex& e, const TwistedComplex& g) {
    if (e.alg != g.alg) throw std::invalid_argument("evaluation_map: algebra mismatch");
    HomComplex H = hom_complex(e, g);
    std::vector<TwistedComplex> copies;
    std::vector<std::pair<int, int>> classes;  // (degree, rep index)
    for (int t = 0; t < H.degree_count(); ++t)
        for (size_t i = 0; i < H.reps[t].size(); ++i) {
            copies.push_back(shift(e, -(H.m_min + t)));
            classes.push_back({H.m_min + t, int(i)});
        }
    TwistedComplex source = direct_sum(e.alg, copies);
    ChainMap f = ChainMap::zero(source, g, 0);
    for (size_t b = 0; b < classes.size(); ++b) {
        ChainMap rep = H.rep_map(classes[b].first, classes[b].second);
        // a closed degree-m map e -> g has the same entries as the closed
        // degree-0 map e[-m] -> g; block-copy into the b-th copy of e
        int off = int(b) * e.size();
        for (int j = 0; j < g.size(); ++j)
            for (int k = 0; k < e.size(); ++k) f.mat[j][off + k] = rep.mat[j][k];
    }
    return f;
}

TwistedComplex twist(const TwistedComplex& e, const TwistedComplex& g, const Limits& lim) {
    check_window(e, lim);
    check_window(g, lim);
    TwistedComplex r = minimize(cone(evaluation_map(e, g)));
    check_window(r, lim);
    return r;
}

TwistedComplex inverse_twist(const TwistedComplex& e, const TwistedComplex& g, const Limits& lim) {
    if (e.alg != g.alg) throw std::invalid_argument("inverse_twist: algebra mismatch");
    check_window(e, lim);
    check_window(g, lim);
    HomComplex H = hom_complex(g, e);
    std::vector<TwistedComplex> copies;
    std::vector<std::pair<int, int>> classes;
    for (int t = 0; t < H.degree_count(); ++t)
        for (size_t i = 0; i < H.reps[t].size(); ++i) {
            copies.push_back(shift(e, H.m_min + t));
            classes.push_back({H.m_min + t, int(i)});
        }
    TwistedComplex target = direct_sum(g.alg, copies);
    ChainMap f = ChainMap::zero(g, target, 0);
    for (size_t b = 0; b < classes.size(); ++b) {
        ChainMap rep = H.rep_map(classes[b].first, classes[b].second);
        // a closed degree-n map g -> e is verbatim a closed degree-0 map g -> e[n]
        int off = 0;
        for (size_t c = 0; c < b; ++c) off += e.size();
        for (int j = 0; j < e.size(); ++j)
            for (int k = 0; k < g.size(); ++k) f.mat[off + j][k] = rep.mat[j][k];
    }
    TwistedComplex r = minimize(shift(cone(f), -1));
    check_window(r, lim);
    return r;
}

TwistedComplex composite_twist(const SphericalCollection& gamma, const TwistedComplex& g,
                               bool strict, const Limits& lim) {
    if (strict) {
        StrongReport rep = is_strongly_spherical(gamma);
        if (!rep.ok) {
            const auto& v = rep.violations.front();
            throw StrictModeError(v.i, v.j, v.shift,
                                  "composite_twist: collection is not strongly spherical; "
                                  "offending pair (" + std::to_string(v.i) + "," +
                                  std::to_string(v.j) + ") at shift " + std::to_string(v.shift));
        }
    }
    TwistedComplex r = g;
    for (auto it = gamma.members.rbegin(); it != gamma.members.rend(); ++it)
        r = twist(*it, r, lim);
    return r;
}

}  // namespace twistlab
