#include "twistlab/scenario.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "twistlab/ktheory.hpp"

namespace twistlab {

namespace {

struct Line {
    int no = 0;
    std::string text;
};

std::vector<std::string> words(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream in(s);
    std::string w;
    while (in >> w) out.push_back(w);
    return out;
}

std::string strip_comment(const std::string& s) {
    auto p = s.find('#');
    return p == std::string::npos ? s : s.substr(0, p);
}

[[noreturn]] void fail(int line, int col, const std::string& msg) {
    throw ScenarioParseError({line, col, msg});
}

bool is_int(const std::string& s) {
    if (s.empty()) return false;
    size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
    if (i == s.size()) return false;
    for (; i < s.size(); ++i)
        if (!isdigit(static_cast<unsigned char>(s[i]))) return false;
    return true;
}

}  // namespace

Scenario parse_scenario(const std::string& text) {
    Scenario s;
    std::vector<Line> lines;
    {
        std::istringstream in(text);
        std::string l;
        int no = 0;
        while (std::getline(in, l)) lines.push_back({++no, l});
    }
    size_t i = 0;
    bool saw_field = false, saw_cy = false;
    auto next_meaningful = [&]() -> std::optional<size_t> {
        for (size_t j = i; j < lines.size(); ++j)
            if (!words(strip_comment(lines[j].text)).empty()) return j;
        return std::nullopt;
    };
    while (auto jopt = next_meaningful()) {
        size_t j = *jopt;
        i = j + 1;
        std::string raw = strip_comment(lines[j].text);
        auto w = words(raw);
        int no = lines[j].no;
        const std::string& kw = w[0];

        if (kw == "field") {
            if (w.size() == 2 && w[1] == "rationals") s.field = FieldSpec::rationals();
            else if (w.size() == 3 && w[1] == "prime" && is_int(w[2]))
                s.field = FieldSpec::prime(uint32_t(std::stoul(w[2])));
            else fail(no, 1, "field must be 'rationals' or 'prime P'");
            saw_field = true;
        } else if (kw == "cy") {
            if (w.size() != 2 || !is_int(w[1])) fail(no, 1, "cy needs an integer dimension");
            s.cy = std::stoi(w[1]);
            saw_cy = true;
        } else if (kw == "graph") {
            if (w.size() != 2 || w[1] != "{") fail(no, 1, "expected 'graph {'");
            while (true) {
                auto kopt = next_meaningful();
                if (!kopt) fail(no, 1, "unterminated graph block");
                size_t k = *kopt;
                i = k + 1;
                auto gw = words(strip_comment(lines[k].text));
                if (gw[0] == "}") break;
                if (gw[0] == "vertices") {
                    for (size_t t = 1; t < gw.size(); ++t) s.vertices.push_back(gw[t]);
                } else if (gw[0] == "edge") {
                    if (gw.size() != 5 || !is_int(gw[3]) || !is_int(gw[4]))
                        fail(lines[k].no, 1, "edge V W DEG_VW DEG_WV");
                    s.edges.push_back({gw[1], gw[2], std::stoi(gw[3]), std::stoi(gw[4])});
                } else {
                    fail(lines[k].no, 1, "graph block lines are 'vertices ...' or 'edge ...'");
                }
            }
        } else if (kw == "object") {
            // object NAME = KIND ARGS
            if (w.size() < 4 || w[2] != "=") fail(no, 1, "object NAME = kind args...");
            Scenario::ObjectDecl d;
            d.name = w[1];
            d.kind = w[3];
            if (d.kind == "proj") {
                if (w.size() != 5) fail(no, 1, "object NAME = proj VERTEX");
                d.args = {w[4]};
            } else if (d.kind == "shift") {
                if (w.size() != 6 || !is_int(w[5])) fail(no, 1, "object NAME = shift OBJ N");
                d.args = {w[4]};
                d.shift_by = std::stoi(w[5]);
            } else if (d.kind == "sum") {
                for (size_t t = 4; t < w.size(); ++t) d.args.push_back(w[t]);
            } else if (d.kind == "cone" || d.kind == "minimize") {
                if (w.size() != 5) fail(no, 1, "object NAME = " + d.kind + " ARG");
                d.args = {w[4]};
            } else if (d.kind == "twist" || d.kind == "inverse_twist") {
                if (w.size() != 6) fail(no, 1, "object NAME = " + d.kind + " E G");
                d.args = {w[4], w[5]};
            } else {
                fail(no, 1, "unknown object kind '" + d.kind + "'");
            }
            s.objects.push_back(std::move(d));
        } else if (kw == "map") {
            // map NAME : SRC -> TGT { entry ROW COL [COEFF] ELEM V [W] ... }
            if (w.size() < 7 || w[2] != ":" || w[4] != "->")
                fail(no, 1, "map NAME : SRC -> TGT {");
            Scenario::MapDecl d;
            d.name = w[1];
            d.src = w[3];
            d.tgt = w[5];
            if (w[6] != "{") fail(no, 1, "expected '{' to open map block");
            while (true) {
                auto kopt = next_meaningful();
                if (!kopt) fail(no, 1, "unterminated map block");
                size_t k = *kopt;
                i = k + 1;
                auto mw = words(strip_comment(lines[k].text));
                if (mw[0] == "}") break;
                if (mw[0] != "entry" || mw.size() < 5)
                    fail(lines[k].no, 1, "map block lines are 'entry ROW COL [COEFF] ELEM V [W]'");
                Scenario::MapEntry e;
                if (!is_int(mw[1]) || !is_int(mw[2]))
                    fail(lines[k].no, 1, "entry needs integer row and col");
                e.row = std::stoi(mw[1]);
                e.col = std::stoi(mw[2]);
                size_t t = 3;
                if (mw[t] != "e" && mw[t] != "a" && mw[t] != "l") {
                    e.coeff = mw[t];
                    ++t;
                }
                if (t >= mw.size()) fail(lines[k].no, 1, "entry is missing its element");
                e.elem = mw[t++];
                while (t < mw.size()) e.verts.push_back(mw[t++]);
                if (e.elem == "a" ? e.verts.size() != 2 : e.verts.size() != 1)
                    fail(lines[k].no, 1, "entry element takes 1 vertex (e,l) or 2 (a)");
                d.entries.push_back(std::move(e));
            }
            s.maps.push_back(std::move(d));
        } else if (kw == "collection") {
            if (w.size() < 4 || w[2] != "=") fail(no, 1, "collection NAME = OBJ ...");
            Scenario::CollectionDecl d;
            d.name = w[1];
            for (size_t t = 3; t < w.size(); ++t) d.members.push_back(w[t]);
            s.collections.push_back(std::move(d));
        } else if (kw == "expect") {
            // expect KIND ARGS = EXPECTED
            auto eq = std::find(w.begin(), w.end(), "=");
            if (w.size() < 4 || eq == w.end() || eq == w.begin() + 1)
                fail(no, 1, "expect KIND ARGS... = VALUE");
            Scenario::ExpectDecl d;
            d.kind = w[1];
            d.line = no;
            for (auto it = w.begin() + 2; it != eq; ++it) d.args.push_back(*it);
            std::string exp;
            for (auto it = eq + 1; it != w.end(); ++it) exp += *it;
            d.expected = exp;
            s.expects.push_back(std::move(d));
        } else if (kw == "ledger") {
            if (w.size() != 3 || w[2] != "{") fail(no, 1, "ledger NAME {");
            Scenario::LedgerDecl d;
            d.name = w[1];
            while (true) {
                auto kopt = next_meaningful();
                if (!kopt) fail(no, 1, "unterminated ledger block");
                size_t k = *kopt;
                i = k + 1;
                auto lw = words(strip_comment(lines[k].text));
                if (lw[0] == "}") break;
                d.text += lines[k].text + "\n";
            }
            s.ledgers.push_back(std::move(d));
        } else {
            fail(no, 1, "unknown keyword '" + kw + "'");
        }
    }
    if (!s.vertices.empty()) {
        if (!saw_field) fail(1, 1, "missing 'field' declaration");
        if (!saw_cy) fail(1, 1, "missing 'cy' declaration");
    }
    return s;
}

std::string pretty_print(const Scenario& s) {
    std::ostringstream os;
    os << "field " << (s.field.kind == FieldKind::Rationals
                           ? "rationals"
                           : "prime " + std::to_string(s.field.characteristic))
       << "\n";
    os << "cy " << s.cy << "\n";
    if (!s.vertices.empty()) {
        os << "graph {\n  vertices";
        for (const auto& v : s.vertices) os << " " << v;
        os << "\n";
        for (const auto& e : s.edges)
            os << "  edge " << e.v << " " << e.w << " " << e.deg_vw << " " << e.deg_wv << "\n";
        os << "}\n";
    }
    for (const auto& m : s.maps) {
        // maps may be referenced by objects; print them first
        os << "map " << m.name << " : " << m.src << " -> " << m.tgt << " {\n";
        for (const auto& e : m.entries) {
            os << "  entry " << e.row << " " << e.col;
            if (e.coeff != "1") os << " " << e.coeff;
            os << " " << e.elem;
            for (const auto& v : e.verts) os << " " << v;
            os << "\n";
        }
        os << "}\n";
    }
    for (const auto& o : s.objects) {
        os << "object " << o.name << " = " << o.kind;
        for (const auto& a : o.args) os << " " << a;
        if (o.kind == "shift") os << " " << o.shift_by;
        os << "\n";
    }
    for (const auto& c : s.collections) {
        os << "collection " << c.name << " =";
        for (const auto& m : c.members) os << " " << m;
        os << "\n";
    }
    for (const auto& e : s.expects) {
        os << "expect " << e.kind;
        for (const auto& a : e.args) os << " " << a;
        os << " = " << e.expected << "\n";
    }
    for (const auto& l : s.ledgers) {
        os << "ledger " << l.name << " {\n" << l.text << "}\n";
    }
    return os.str();
}

const TwistedComplex& ScenarioRuntime::object(const std::string& name) const {
    auto it = objects.find(name);
    if (it == objects.end()) throw std::invalid_argument("unresolved object name '" + name + "'");
    return it->second;
}

const SphericalCollection& ScenarioRuntime::collection(const std::string& name) const {
    auto it = collections.find(name);
    if (it == collections.end())
        throw std::invalid_argument("unresolved collection name '" + name + "'");
    return it->second;
}

namespace {

Scalar parse_coeff(const FieldSpec& f, const std::string& s) {
    auto slash = s.find('/');
    if (slash == std::string::npos) return Scalar::of_int(f, std::stoll(s));
    return Scalar::of_fraction(f, std::stoll(s.substr(0, slash)), std::stoll(s.substr(slash + 1)));
}

struct Resolver {
    const Scenario& sc;
    const Limits& lim;
    ScenarioRuntime& rt;
    std::set<std::string> in_progress;

    const TwistedComplex& object(const std::string& name) {
        auto it = rt.objects.find(name);
        if (it != rt.objects.end()) return it->second;
        if (in_progress.count(name))
            throw std::invalid_argument("cyclic object definition at '" + name + "'");
        in_progress.insert(name);
        const Scenario::ObjectDecl* d = nullptr;
        for (const auto& o : sc.objects)
            if (o.name == name) d = &o;
        if (!d) throw std::invalid_argument("unresolved object name '" + name + "'");
        TwistedComplex val = TwistedComplex::zero(rt.alg);
        if (d->kind == "proj") {
            val = projective(rt.alg, d->args[0]);
        } else if (d->kind == "shift") {
            val = shift(object(d->args[0]), d->shift_by);
        } else if (d->kind == "sum") {
            std::vector<TwistedComplex> xs;
            for (const auto& a : d->args) xs.push_back(object(a));
            val = direct_sum(rt.alg, xs);
        } else if (d->kind == "minimize") {
            val = minimize(object(d->args[0]));
        } else if (d->kind == "cone") {
            val = cone(chain_map(d->args[0]));
        } else if (d->kind == "twist") {
            val = twist(object(d->args[0]), object(d->args[1]), lim);
        } else if (d->kind == "inverse_twist") {
            val = inverse_twist(object(d->args[0]), object(d->args[1]), lim);
        }
        in_progress.erase(name);
        rt.objects.emplace(name, std::move(val));
        return rt.objects.at(name);
    }

    const ChainMap& chain_map(const std::string& name) {
        auto it = rt.maps.find(name);
        if (it != rt.maps.end()) return it->second;
        const Scenario::MapDecl* d = nullptr;
        for (const auto& m : sc.maps)
            if (m.name == name) d = &m;
        if (!d) throw std::invalid_argument("unresolved map name '" + name + "'");
        ChainMap f = ChainMap::zero(object(d->src), object(d->tgt), 0);
        const Algebra& A = *rt.alg;
        for (const auto& e : d->entries) {
            if (e.row < 0 || e.row >= f.tgt.size() || e.col < 0 || e.col >= f.src.size())
                throw std::invalid_argument("map '" + name + "': entry indices out of range");
            std::string elem_name;
            if (e.elem == "e") elem_name = "e(" + e.verts[0] + ")";
            else if (e.elem == "l") elem_name = "l(" + e.verts[0] + ")";
            else elem_name = "a(" + e.verts[0] + "," + e.verts[1] + ")";
            int idx = A.basis_index(elem_name);
            if (idx < 0)
                throw std::invalid_argument("map '" + name + "': unknown element " + elem_name);
            f.mat[e.row][e.col] =
                add(f.mat[e.row][e.col], AlgElem::basis(A, idx, parse_coeff(A.field, e.coeff)));
        }
        f.check_valid();
        rt.maps.emplace(name, std::move(f));
        return rt.maps.at(name);
    }
};

}  // namespace

ScenarioRuntime realize(const Scenario& s, const Limits& lim) {
    ScenarioRuntime rt;
    if (!s.vertices.empty()) {
        GraphSpec g;
        g.vertices = s.vertices;
        for (const auto& e : s.edges) {
            int v = g.vertex_index(e.v), w = g.vertex_index(e.w);
            if (v < 0 || w < 0)
                throw std::invalid_argument("edge references unknown vertex " +
                                            (v < 0 ? e.v : e.w));
            g.edges.push_back({v, w, e.deg_vw, e.deg_wv});
        }
        rt.alg = build_zigzag(g, s.field, s.cy);
    }
    Resolver r{s, lim, rt, {}};
    for (const auto& o : s.objects) r.object(o.name);
    for (const auto& m : s.maps) r.chain_map(m.name);
    for (const auto& c : s.collections) {
        SphericalCollection col;
        col.cy_dimension = s.cy;
        for (const auto& m : c.members) col.members.push_back(r.object(m));
        rt.collections.emplace(c.name, std::move(col));
    }
    return rt;
}

namespace {

std::string bool_str(bool b) { return b ? "true" : "false"; }

std::string class_str(const KClass& k) {
    std::string s = "(";
    for (size_t i = 0; i < k.size(); ++i) {
        if (i) s += ",";
        s += std::to_string(k[i]);
    }
    return s + ")";
}

std::string normalize(std::string s) {
    s.erase(std::remove_if(s.begin(), s.end(),
                           [](char c) { return isspace(static_cast<unsigned char>(c)); }),
            s.end());
    return s;
}

}  // namespace

std::vector<ExpectOutcome> run_expects(const Scenario& s, const ScenarioRuntime& rt,
                                       const Limits& lim) {
    std::vector<ExpectOutcome> out;
    for (const auto& e : s.expects) {
        ExpectOutcome o;
        o.decl = e;
        std::string actual;
        const int d = s.cy;
        if (e.kind == "spherical") {
            actual = bool_str(is_spherical(rt.object(e.args.at(0)), d));
        } else if (e.kind == "simple" || e.kind == "rigid" || e.kind == "exceptional") {
            Classification c = classify(rt.object(e.args.at(0)), d);
            actual = bool_str(e.kind == "simple" ? c.simple
                                                 : e.kind == "rigid" ? c.rigid : c.exceptional);
        } else if (e.kind == "table") {
            actual = ext_table(rt.object(e.args.at(0)), rt.object(e.args.at(1))).str();
        } else if (e.kind == "d_e") {
            actual = std::to_string(d_e(rt.object(e.args.at(0)), rt.object(e.args.at(1))));
        } else if (e.kind == "iso") {
            actual = bool_str(
                is_isomorphic(rt.object(e.args.at(0)), rt.object(e.args.at(1)), lim.seed)
                    .isomorphic);
        } else if (e.kind == "orthogonal") {
            actual = bool_str(is_orthogonal(rt.object(e.args.at(0)), rt.object(e.args.at(1))));
        } else if (e.kind == "class") {
            LatticeModel m = lattice_model(*rt.alg);
            actual = class_str(class_of(rt.object(e.args.at(0)), m));
        } else if (e.kind == "pairing") {
            LatticeModel m = lattice_model(*rt.alg);
            actual = std::to_string(euler_pairing(m, class_of(rt.object(e.args.at(0)), m),
                                                  class_of(rt.object(e.args.at(1)), m)));
        } else if (e.kind == "member") {
            MembershipReport r =
                thick_membership(rt.object(e.args.at(0)), rt.object(e.args.at(1)), d, lim);
            actual = bool_str(r.in_thick_subcategory);
        } else if (e.kind == "filtration") {
            PeelResult r = peel_filtration(rt.object(e.args.at(0)), rt.object(e.args.at(1)), lim);
            actual = r.success ? std::to_string(r.shifts.size()) : "failure";
        } else if (e.kind == "commute") {
            std::vector<std::pair<std::string, TwistedComplex>> gens;
            for (int v = 0; v < rt.alg->num_vertices(); ++v)
                gens.push_back({rt.alg->vertex_names[v], projective(rt.alg, v)});
            CommuteReport r =
                commute_classify(rt.object(e.args.at(0)), rt.object(e.args.at(1)), gens, lim);
            actual = r.kind == CommuteKind::Orthogonal
                         ? "orthogonal"
                         : r.kind == CommuteKind::Equal ? "equal" : "not_commute";
        } else if (e.kind == "strongly_spherical") {
            actual = bool_str(is_strongly_spherical(rt.collection(e.args.at(0))).ok);
        } else if (e.kind == "strongly_simple") {
            actual = bool_str(is_strongly_simple(rt.collection(e.args.at(0)).members));
        } else if (e.kind == "pieces") {
            SummandReport r = split_summands(rt.object(e.args.at(0)), lim);
            int total = 0;
            for (const auto& p : r.pieces) total += p.multiplicity;
            actual = std::to_string(total);
        } else if (e.kind == "recover") {
            RecoverResult r = recover_collection(rt.object(e.args.at(0)), d, lim);
            actual = r.ok ? "ok" : "violation";
        } else {
            throw std::invalid_argument("unknown expect kind '" + e.kind + "' (line " +
                                        std::to_string(e.line) + ")");
        }
        o.actual = actual;
        o.passed = normalize(actual) == normalize(e.expected);
        out.push_back(std::move(o));
    }
    return out;
}

}  // namespace twistlab
