#include "twistlab/ledger.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace twistlab {

SymExpr SymExpr::of_param(const std::string& p, long long c) {
    SymExpr e;
    if (c != 0) e.coeffs[p] = c;
    return e;
}

SymExpr SymExpr::operator+(const SymExpr& o) const {
    SymExpr r = *this;
    r.constant += o.constant;
    for (const auto& [p, c] : o.coeffs) {
        r.coeffs[p] += c;
        if (r.coeffs[p] == 0) r.coeffs.erase(p);
    }
    return r;
}

SymExpr SymExpr::operator-() const {
    SymExpr r;
    r.constant = -constant;
    for (const auto& [p, c] : coeffs) r.coeffs[p] = -c;
    return r;
}

SymExpr SymExpr::operator-(const SymExpr& o) const { return *this + (-o); }

std::string SlotKey::str() const {
    if (degree == 0) return "hom(" + a + "," + b + ")";
    return "ext" + std::to_string(degree) + "(" + a + "," + b + ")";
}

std::string Interval::str() const { return "";  /* printed via LedgerProblem for param order */ }

namespace {

struct Tok {
    std::string text;
    int col = 0;
};

std::vector<Tok> tokenize(const std::string& line, int lineno) {
    std::vector<Tok> out;
    size_t i = 0;
    while (i < line.size()) {
        char c = line[i];
        if (c == '#') break;
        if (isspace(static_cast<unsigned char>(c))) { ++i; continue; }
        int col = int(i) + 1;
        if (isalnum(static_cast<unsigned char>(c)) || c == '_') {
            size_t j = i;
            while (j < line.size() &&
                   (isalnum(static_cast<unsigned char>(line[j])) || line[j] == '_'))
                ++j;
            out.push_back({line.substr(i, j - i), col});
            i = j;
            continue;
        }
        if (c == '-' && i + 1 < line.size() && line[i + 1] == '>') {
            out.push_back({"->", col});
            i += 2;
            continue;
        }
        if ((c == '>' || c == '<') && i + 1 < line.size() && line[i + 1] == '=') {
            out.push_back({std::string(1, c) + "=", col});
            i += 2;
            continue;
        }
        if (std::string("(),:=<>+-*").find(c) != std::string::npos) {
            out.push_back({std::string(1, c), col});
            ++i;
            continue;
        }
        throw LedgerParseError({lineno, col, std::string("unexpected character '") + c + "'"});
    }
    return out;
}

bool is_integer(const std::string& s) {
    if (s.empty()) return false;
    for (char c : s)
        if (!isdigit(static_cast<unsigned char>(c))) return false;
    return true;
}

struct Cursor {
    const std::vector<Tok>& toks;
    size_t pos = 0;
    int lineno;

    bool done() const { return pos >= toks.size(); }
    const Tok& peek() const {
        if (done()) throw LedgerParseError({lineno, lastcol(), "unexpected end of line"});
        return toks[pos];
    }
    int lastcol() const { return toks.empty() ? 1 : toks.back().col + int(toks.back().text.size()); }
    Tok next() {
        const Tok& t = peek();
        ++pos;
        return t;
    }
    void expect(const std::string& s) {
        Tok t = next();
        if (t.text != s)
            throw LedgerParseError({lineno, t.col, "expected '" + s + "', found '" + t.text + "'"});
    }
    bool accept(const std::string& s) {
        if (!done() && toks[pos].text == s) { ++pos; return true; }
        return false;
    }
};

struct DegreePred {
    char op = '=';        // '=', '<', '>'
    long long value = 0;  // used when param empty
    std::string param;    // nonempty for i<d style bounds
};

}  // namespace

struct LedgerBuilder {
    LedgerProblem p;
    struct Fact {
        std::string a, b;
        DegreePred pred;
        char cmp = '=';  // '=', '<' (<=), '>' (>=)
        SymExpr value;
        std::string text;
        int lineno = 0;
    };
    std::vector<Fact> facts;
    std::vector<std::pair<LedgerProblem::Annotation, std::string>> annotations;

    SymExpr parse_expr(Cursor& c) {
        SymExpr e;
        int sign = 1;
        if (c.accept("-")) sign = -1;
        while (true) {
            Tok t = c.next();
            long long coef = sign;
            std::string param;
            if (is_integer(t.text)) {
                coef = sign * std::stoll(t.text);
                if (c.accept("*")) {
                    Tok pn = c.next();
                    param = pn.text;
                }
            } else {
                param = t.text;
            }
            if (param.empty()) {
                e = e + SymExpr::of_int(coef);
            } else {
                if (std::find(p.params_.begin(), p.params_.end(), param) == p.params_.end())
                    throw LedgerParseError({c.lineno, t.col, "unknown parameter '" + param + "'"});
                e = e + SymExpr::of_param(param, coef);
            }
            if (c.accept("+")) sign = 1;
            else if (c.accept("-")) sign = -1;
            else break;
        }
        return e;
    }

    void parse_slot_head(Cursor& c, std::string& a, std::string& b, DegreePred& pred) {
        Tok head = c.next();
        if (head.text == "hom") {
            pred = {'=', 0, ""};
        } else if (head.text == "ext") {
            pred = {'=', 1, ""};  // refined below when a degree clause is present
        } else if (head.text.rfind("ext", 0) == 0 && is_integer(head.text.substr(3))) {
            pred = {'=', std::stoll(head.text.substr(3)), ""};
        } else {
            throw LedgerParseError({c.lineno, head.col, "expected hom(...) or ext<k>(...)"});
        }
        c.expect("(");
        a = c.next().text;
        c.expect(",");
        b = c.next().text;
        if (head.text == "ext") {
            c.expect(",");
            Tok i = c.next();
            if (i.text != "i")
                throw LedgerParseError({c.lineno, i.col, "expected degree clause i=K, i<K or i>K"});
            Tok op = c.next();
            if (op.text != "=" && op.text != "<" && op.text != ">")
                throw LedgerParseError({c.lineno, op.col, "expected one of = < > after i"});
            Tok v = c.next();
            pred.op = op.text[0];
            if (is_integer(v.text)) {
                pred.value = std::stoll(v.text);
            } else {
                pred.param = v.text;
                if (std::find(p.params_.begin(), p.params_.end(), v.text) == p.params_.end())
                    throw LedgerParseError({c.lineno, v.col, "unknown parameter '" + v.text + "'"});
            }
        }
        c.expect(")");
        for (const std::string& e : {a, b})
            if (e != "0" && std::find(p.entities_.begin(), p.entities_.end(), e) == p.entities_.end())
                throw LedgerParseError({c.lineno, 1, "unknown entity '" + e + "'"});
    }

    SlotKey parse_exact_slot(Cursor& c) {
        std::string a, b;
        DegreePred pred;
        parse_slot_head(c, a, b, pred);
        if (pred.op != '=' || !pred.param.empty())
            throw LedgerParseError({c.lineno, 1, "a concrete degree is required here"});
        return {a, b, int(pred.value)};
    }

    void line(const std::string& raw, int lineno) {
        auto toks = tokenize(raw, lineno);
        if (toks.empty()) return;
        Cursor c{toks, 0, lineno};
        Tok kw = c.next();
        if (kw.text == "params") {
            while (!c.done()) p.params_.push_back(c.next().text);
        } else if (kw.text == "assume") {
            Tok name = c.next();
            if (std::find(p.params_.begin(), p.params_.end(), name.text) == p.params_.end())
                throw LedgerParseError({lineno, name.col, "unknown parameter '" + name.text + "'"});
            Tok op = c.next();
            Tok val = c.next();
            if (!is_integer(val.text))
                throw LedgerParseError({lineno, val.col, "assume bound must be an integer"});
            long long v = std::stoll(val.text);
            if (op.text == ">") p.param_lb_[name.text] = std::max(p.param_lb_[name.text], v + 1);
            else if (op.text == ">=") p.param_lb_[name.text] = std::max(p.param_lb_[name.text], v);
            else throw LedgerParseError({lineno, op.col, "assume supports only > and >="});
        } else if (kw.text == "entity") {
            while (!c.done()) p.entities_.push_back(c.next().text);
        } else if (kw.text == "maxdeg") {
            Tok v = c.next();
            if (!is_integer(v.text))
                throw LedgerParseError({lineno, v.col, "maxdeg needs an integer"});
            p.max_degree_ = int(std::stoll(v.text));
        } else if (kw.text == "ses") {
            LedgerProblem::Les dummy;
            std::string name = c.next().text;
            c.expect(":");
            std::string a = c.next().text;
            c.expect("->");
            std::string b = c.next().text;
            c.expect("->");
            std::string cc = c.next().text;
            for (const std::string& e : {a, b, cc})
                if (e != "0" &&
                    std::find(p.entities_.begin(), p.entities_.end(), e) == p.entities_.end())
                    throw LedgerParseError({lineno, 1, "unknown entity '" + e + "' in ses"});
            ses_decls.push_back({name, a, b, cc});
        } else if (kw.text == "fact") {
            Fact f;
            f.lineno = lineno;
            parse_slot_head(c, f.a, f.b, f.pred);
            Tok op = c.next();
            if (op.text == "=") f.cmp = '=';
            else if (op.text == ">=") f.cmp = '>';
            else if (op.text == "<=") f.cmp = '<';
            else throw LedgerParseError({lineno, op.col, "fact supports =, >= and <="});
            f.value = parse_expr(c);
            f.text = raw.substr(raw.find_first_not_of(" \t"));
            facts.push_back(std::move(f));
        } else if (kw.text == "map") {
            bool wrapped = c.accept("boundary");
            if (wrapped) c.expect("(");
            SlotKey from = parse_exact_slot(c);
            c.expect("->");
            SlotKey to = parse_exact_slot(c);
            if (wrapped) c.expect(")");
            Tok kind = c.next();
            if (kind.text != "injective" && kind.text != "surjective" && kind.text != "zero" &&
                kind.text != "nonzero")
                throw LedgerParseError(
                    {lineno, kind.col, "map annotation must be injective|surjective|zero|nonzero"});
            annotations.push_back({{from, to, kind.text},
                                   raw.substr(raw.find_first_not_of(" \t"))});
        } else if (kw.text == "derive") {
            p.derives_.push_back(parse_exact_slot(c));
        } else {
            throw LedgerParseError({lineno, kw.col, "unknown keyword '" + kw.text + "'"});
        }
    }

    struct SesDecl {
        std::string name, a, b, c;
    };
    std::vector<SesDecl> ses_decls;

    bool pred_matches(const DegreePred& pred, int degree) const {
        long long bound = pred.value;
        if (!pred.param.empty()) {
            auto it = p.param_lb_.find(pred.param);
            long long lb = it == p.param_lb_.end() ? 0 : it->second;
            // i < d is provable exactly when i < lb(d); i > d never provable here
            if (pred.op == '<') return degree < lb;
            return false;
        }
        if (pred.op == '=') return degree == bound;
        if (pred.op == '<') return degree < bound;
        return degree > bound;
    }

    LedgerProblem build() {
        // materialize LES templates: each ses against each entity, both directions
        auto touch = [&](const SlotKey& k) {
            if (!p.slots_.count(k)) {
                Interval v;
                v.lo = SymExpr::of_int(0);
                if (k.a == "0" || k.b == "0") {
                    v.hi = SymExpr::of_int(0);
                } else {
                    v.hi = std::nullopt;
                }
                p.slots_[k] = v;
            }
            return k;
        };
        for (const auto& s : ses_decls) {
            for (const auto& t : p.entities_) {
                // contravariant Hom(-,T): 0 -> (C,T) -> (B,T) -> (A,T) -> ext1(C,T) -> ...
                LedgerProblem::Les into;
                into.name = s.name + ":hom_into(" + t + ")";
                for (int i = 0; i <= p.max_degree_; ++i) {
                    into.slots.push_back(touch({s.c, t, i}));
                    into.slots.push_back(touch({s.b, t, i}));
                    into.slots.push_back(touch({s.a, t, i}));
                }
                p.les_.push_back(std::move(into));
                // covariant Hom(T,-): 0 -> (T,A) -> (T,B) -> (T,C) -> ext1(T,A) -> ...
                LedgerProblem::Les from;
                from.name = s.name + ":hom_from(" + t + ")";
                for (int i = 0; i <= p.max_degree_; ++i) {
                    from.slots.push_back(touch({t, s.a, i}));
                    from.slots.push_back(touch({t, s.b, i}));
                    from.slots.push_back(touch({t, s.c, i}));
                }
                p.les_.push_back(std::move(from));
            }
        }
        // rank variable t is the rank of the arrow entering slot t (t >= 1);
        // rank L is the open-ended arrow leaving the last materialized slot
        for (const auto& les : p.les_)
            for (size_t arrow = 1; arrow <= les.slots.size(); ++arrow) {
                p.rank_index_[{les.name, int(arrow)}] = int(p.ranks_.size());
                Interval v;
                v.lo = SymExpr::of_int(0);
                p.ranks_.push_back(v);
            }
        // apply facts
        for (const auto& f : facts) {
            bool applied = false;
            for (auto& [k, v] : p.slots_) {
                if (k.a != f.a || k.b != f.b) continue;
                if (!pred_matches(f.pred, k.degree)) continue;
                applied = true;
                std::optional<SymExpr> lo, hi;
                if (f.cmp == '=') lo = hi = f.value;
                else if (f.cmp == '>') lo = f.value;
                else hi = f.value;
                if (v.exact() && f.cmp == '=' && !(v.lo == f.value))
                    throw LedgerError("fact contradicts already-exact slot " + k.str() + ": has " +
                                      p.print_expr(v.lo) + ", fact says " + p.print_expr(f.value),
                                      {f.text});
                p.tighten_slot(k, lo, hi, "input fact: " + f.text, {});
            }
            if (!applied && f.pred.op == '=' && f.pred.param.empty()) {
                // standalone slot (not in any template): still record it
                SlotKey k{f.a, f.b, int(f.pred.value)};
                touch(k);
                std::optional<SymExpr> lo, hi;
                if (f.cmp == '=') lo = hi = f.value;
                else if (f.cmp == '>') lo = f.value;
                else hi = f.value;
                p.tighten_slot(k, lo, hi, "input fact: " + f.text, {});
            }
        }
        for (const auto& [a, text] : annotations) {
            bool found = false;
            for (const auto& les : p.les_)
                for (size_t t = 0; t + 1 < les.slots.size(); ++t)
                    if (les.slots[t] == a.from && les.slots[t + 1] == a.to) found = true;
            if (!found)
                throw LedgerError("map annotation does not match any long-exact-sequence arrow: " +
                                  text);
            p.annotations_.push_back(a);
            annotation_texts.push_back(text);
        }
        p.annotation_texts_ = annotation_texts;
        for (const auto& k : p.derives_)
            if (!p.slots_.count(k)) touch(k);
        return std::move(p);
    }
    std::vector<std::string> annotation_texts;
};

LedgerProblem LedgerProblem::parse(const std::string& text) {
    LedgerBuilder b;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        b.line(line, lineno);
    }
    return b.build();
}

std::string LedgerProblem::print_expr(const SymExpr& e) const {
    std::string s;
    auto append = [&](long long c, const std::string& name) {
        if (c == 0) return;
        if (s.empty()) {
            if (c < 0) s += "-";
        } else {
            s += (c < 0) ? " - " : " + ";
        }
        long long a = c < 0 ? -c : c;
        if (name.empty()) s += std::to_string(a);
        else if (a == 1) s += name;
        else s += std::to_string(a) + "*" + name;
    };
    for (const auto& pn : params_) {
        auto it = e.coeffs.find(pn);
        if (it != e.coeffs.end()) append(it->second, pn);
    }
    for (const auto& [pn, c] : e.coeffs)
        if (std::find(params_.begin(), params_.end(), pn) == params_.end()) append(c, pn);
    append(e.constant, "");
    return s.empty() ? "0" : s;
}

std::string LedgerProblem::param_order_str(const SymExpr& e) const { return print_expr(e); }

std::string LedgerProblem::print_interval(const Interval& v) const {
    if (v.exact()) return "= " + print_expr(v.lo);
    return "[" + print_expr(v.lo) + ", " + (v.hi ? print_expr(*v.hi) : "inf") + "]";
}

bool LedgerProblem::provable_nonneg(const SymExpr& e) const {
    long long acc = e.constant;
    for (const auto& [pn, c] : e.coeffs) {
        if (c < 0) return false;
        auto it = param_lb_.find(pn);
        long long lb = it == param_lb_.end() ? 0 : it->second;
        acc += c * lb;
    }
    return acc >= 0;
}

void LedgerProblem::record(const std::string& target, const std::string& rule,
                           const std::vector<std::string>& premises, const std::string& result) {
    steps_by_target_[target].push_back(int(trace_.size()));
    trace_.push_back({target, rule, premises, result});
}

void LedgerProblem::check_feasible(const std::string& target, const Interval& v) {
    if (!v.hi) return;
    SymExpr gap = *v.hi - v.lo;  // must be >= 0; infeasible when lo - hi >= 1
    SymExpr bad = v.lo - *v.hi - SymExpr::of_int(1);
    if (provable_nonneg(bad)) {
        std::vector<std::string> chain;
        auto it = steps_by_target_.find(target);
        if (it != steps_by_target_.end())
            for (int idx : it->second)
                chain.push_back(trace_[idx].rule + "  =>  " + trace_[idx].result);
        throw LedgerError("infeasible: " + target + " has empty interval [" + print_expr(v.lo) +
                              ", " + print_expr(*v.hi) + "]",
                          chain);
    }
    (void)gap;
}

bool LedgerProblem::tighten_slot(const SlotKey& k, const std::optional<SymExpr>& lo,
                                 const std::optional<SymExpr>& hi, const std::string& rule,
                                 const std::vector<std::string>& premises) {
    Interval& v = slots_.at(k);
    bool changed = false;
    if (lo && !(*lo == v.lo) && provable_nonneg(*lo - v.lo)) {
        v.lo = *lo;
        changed = true;
    }
    if (hi) {
        if (!v.hi) {
            if (provable_nonneg(*hi)) {
                v.hi = *hi;
                changed = true;
            }
        } else if (!(*hi == *v.hi) && provable_nonneg(*v.hi - *hi)) {
            v.hi = *hi;
            changed = true;
        }
    }
    if (changed) {
        record(k.str(), rule, premises, print_interval(v));
        check_feasible(k.str(), v);
    }
    return changed;
}

std::string LedgerProblem::rank_name(const std::string& les, int pos) const {
    return "rank(" + les + "#" + std::to_string(pos) + ")";
}

bool LedgerProblem::tighten_rank(int idx, const std::string& name,
                                 const std::optional<SymExpr>& lo, const std::optional<SymExpr>& hi,
                                 const std::string& rule, const std::vector<std::string>& premises) {
    Interval& v = ranks_[idx];
    bool changed = false;
    if (lo && !(*lo == v.lo) && provable_nonneg(*lo - v.lo)) {
        v.lo = *lo;
        changed = true;
    }
    if (hi) {
        if (!v.hi) {
            if (provable_nonneg(*hi)) {
                v.hi = *hi;
                changed = true;
            }
        } else if (!(*hi == *v.hi) && provable_nonneg(*v.hi - *hi)) {
            v.hi = *hi;
            changed = true;
        }
    }
    if (changed) {
        record(name, rule, premises, print_interval(v));
        check_feasible(name, v);
    }
    return changed;
}

void LedgerProblem::propagate() {
    const int max_rounds = int(slots_.size() + ranks_.size()) * 8 + 64;
    for (int round = 0; round < max_rounds; ++round) {
        bool changed = false;
        // annotations: injective/surjective tie a rank to a slot; zero/nonzero bound it
        for (size_t ai = 0; ai < annotations_.size(); ++ai) {
            const auto& a = annotations_[ai];
            const std::string& text = annotation_texts_[ai];
            for (const auto& les : les_)
                for (size_t t = 0; t + 1 < les.slots.size(); ++t) {
                    if (!(les.slots[t] == a.from && les.slots[t + 1] == a.to)) continue;
                    int r = rank_index_.at({les.name, int(t) + 1});
                    std::string rn = rank_name(les.name, int(t) + 1);
                    if (a.kind == "zero") {
                        changed |= tighten_rank(r, rn, SymExpr::of_int(0), SymExpr::of_int(0),
                                                "annotation: " + text, {});
                    } else if (a.kind == "nonzero") {
                        changed |= tighten_rank(r, rn, SymExpr::of_int(1), std::nullopt,
                                                "annotation: " + text, {});
                    } else {
                        const SlotKey& tied = (a.kind == "injective") ? a.from : a.to;
                        const Interval& sv = slots_.at(tied);
                        changed |= tighten_rank(r, rn, sv.lo, sv.hi, "annotation: " + text,
                                                {tied.str()});
                        const Interval& rv = ranks_[r];
                        changed |= tighten_slot(tied, rv.lo, rv.hi,
                                                "annotation (reverse): " + text, {rn});
                    }
                }
        }
        // exactness: dim_t = rank_t + rank_{t+1} with rank_0 = 0 entering slot 0
        for (const auto& les : les_) {
            const int L = int(les.slots.size());
            for (int t = 0; t < L; ++t) {
                Interval rin;
                rin.lo = SymExpr::of_int(0);
                rin.hi = SymExpr::of_int(0);
                std::string rin_name = "0";
                int rin_idx = -1;
                if (t > 0) {
                    rin_idx = rank_index_.at({les.name, t});
                    rin = ranks_[rin_idx];
                    rin_name = rank_name(les.name, t);
                }
                int rout_idx = rank_index_.at({les.name, t + 1});
                Interval rout = ranks_[rout_idx];
                std::string rout_name = rank_name(les.name, t + 1);
                const SlotKey& slot = les.slots[t];
                const Interval dim = slots_.at(slot);
                std::string rule = "exactness[" + les.name + "]: " + slot.str() + " = " + rin_name +
                                   " + " + rout_name;
                // dim <- rin + rout
                {
                    std::optional<SymExpr> lo = rin.lo + rout.lo;
                    std::optional<SymExpr> hi;
                    if (rin.hi && rout.hi) hi = *rin.hi + *rout.hi;
                    changed |= tighten_slot(slot, lo, hi, rule, {rin_name, rout_name});
                }
                // rout <- dim - rin
                {
                    std::optional<SymExpr> lo, hi;
                    if (rin.hi) lo = dim.lo - *rin.hi;
                    if (dim.hi) hi = *dim.hi - rin.lo;
                    if (lo && !provable_nonneg(*lo)) lo = std::nullopt;
                    changed |= tighten_rank(rout_idx, rout_name, lo, hi, rule,
                                            {slot.str(), rin_name});
                }
                // rin <- dim - rout
                if (rin_idx >= 0) {
                    std::optional<SymExpr> lo, hi;
                    if (rout.hi) lo = dim.lo - *rout.hi;
                    if (dim.hi) hi = *dim.hi - rout.lo;
                    if (lo && !provable_nonneg(*lo)) lo = std::nullopt;
                    changed |= tighten_rank(rin_idx, rin_name, lo, hi, rule,
                                            {slot.str(), rout_name});
                }
            }
            // rank bounds: rank_t <= min(dim of both endpoint slots)
            for (int t = 1; t <= L; ++t) {
                int r = rank_index_.at({les.name, t});
                std::string rn = rank_name(les.name, t);
                const Interval& src = slots_.at(les.slots[t - 1]);
                if (src.hi)
                    changed |= tighten_rank(r, rn, std::nullopt, src.hi,
                                            "rank bound: " + rn + " <= " + les.slots[t - 1].str(),
                                            {les.slots[t - 1].str()});
                if (t < L) {
                    const Interval& dst = slots_.at(les.slots[t]);
                    if (dst.hi)
                        changed |= tighten_rank(r, rn, std::nullopt, dst.hi,
                                                "rank bound: " + rn + " <= " + les.slots[t].str(),
                                                {les.slots[t].str()});
                }
            }
        }
        // alternating-sum windows between provably-zero ranks
        for (const auto& les : les_) {
            const int L = int(les.slots.size());
            auto rank_is_zero = [&](int t) {  // rank entering slot t (t==0: virtual zero)
                if (t == 0) return true;
                if (t > L) return false;
                const Interval& v = ranks_[rank_index_.at({les.name, t})];
                return v.exact() && v.lo == SymExpr::of_int(0);
            };
            for (int a = 0; a < L; ++a) {
                if (!rank_is_zero(a)) continue;
                for (int b = a; b < L; ++b) {
                    if (!rank_is_zero(b + 1)) continue;
                    // window slots a..b: sum of (-1)^(t-a) dims = 0, so
                    // dim_s = sum_{t != s} (-1)^(t-s+1) dim_t
                    auto signed_append = [&](std::string& s, const SymExpr& e) {
                        std::string es = print_expr(e);
                        if (es == "0") return;
                        if (!es.empty() && es[0] == '-') s += " - " + print_expr(-e);
                        else s += " + " + es;
                    };
                    for (int solve_at = a; solve_at <= b; ++solve_at) {
                        std::optional<SymExpr> lo = SymExpr::of_int(0), hi = SymExpr::of_int(0);
                        std::vector<std::string> premises;
                        std::string sym_terms;
                        SymExpr folded;
                        bool any_open = false;
                        for (int t = a; t <= b; ++t) {
                            if (t == solve_at) continue;
                            int coef = (t - solve_at) % 2 == 0 ? -1 : 1;
                            const Interval& v = slots_.at(les.slots[t]);
                            premises.push_back(les.slots[t].str());
                            if (v.exact()) {
                                folded = (coef > 0) ? folded + v.lo : folded - v.lo;
                            } else {
                                any_open = true;
                                sym_terms += (coef > 0) ? " + " : " - ";
                                sym_terms += les.slots[t].str();
                            }
                            if (lo) {
                                if (coef > 0) lo = *lo + v.lo;
                                else if (v.hi) lo = *lo - *v.hi;
                                else lo = std::nullopt;
                            }
                            if (hi) {
                                if (coef > 0) {
                                    if (v.hi) hi = *hi + *v.hi;
                                    else hi = std::nullopt;
                                } else {
                                    hi = *hi - v.lo;
                                }
                            }
                        }
                        premises.push_back(rank_name(les.name, a));
                        premises.push_back(rank_name(les.name, b + 1));
                        std::string rhs;
                        if (!sym_terms.empty()) {
                            rhs = (sym_terms[1] == '+') ? sym_terms.substr(3) : sym_terms.substr(1);
                            signed_append(rhs, folded);
                        } else {
                            rhs = print_expr(folded);
                        }
                        std::string rule = "window sum[" + les.name + "]: " +
                                           les.slots[solve_at].str() + " = " + rhs;
                        if (lo && !provable_nonneg(*lo)) lo = std::nullopt;
                        changed |= tighten_slot(les.slots[solve_at], lo, hi, rule, premises);
                        // once every window value is pinned, record the solved identity
                        // with each single slot kept symbolic; these are the exactness
                        // relations the window encodes, kept auditable in the trace
                        if (!any_open && slots_.at(les.slots[solve_at]).exact()) {
                            std::string key = les.name + "/" + std::to_string(a) + "/" +
                                              std::to_string(b) + "/" + std::to_string(solve_at);
                            if (!emitted_windows_.count(key)) {
                                emitted_windows_.insert(key);
                                for (int t = a; t <= b; ++t) {
                                    if (t == solve_at) continue;
                                    int coef = (t - solve_at) % 2 == 0 ? -1 : 1;
                                    SymExpr rest;
                                    for (int u = a; u <= b; ++u) {
                                        if (u == solve_at || u == t) continue;
                                        int cu = (u - solve_at) % 2 == 0 ? -1 : 1;
                                        const Interval& vu = slots_.at(les.slots[u]);
                                        rest = (cu > 0) ? rest + vu.lo : rest - vu.lo;
                                    }
                                    std::string line = les.slots[solve_at].str() + " = " +
                                                       std::string(coef > 0 ? "" : "-") +
                                                       les.slots[t].str();
                                    signed_append(line, rest);
                                    record(les.slots[solve_at].str(), "window identity: " + line,
                                           premises, print_interval(slots_.at(les.slots[solve_at])));
                                }
                            }
                        }
                    }
                    break;  // only the minimal window starting at a
                }
            }
        }
        if (!changed) return;
    }
    throw LedgerError("propagate: no fixed point within the round cap");
}

DeriveReport LedgerProblem::query(const SlotKey& slot) const {
    auto it = slots_.find(slot);
    if (it == slots_.end()) throw LedgerError("query: unknown slot " + slot.str());
    DeriveReport rep;
    rep.slot = slot;
    rep.value = it->second;
    rep.unbounded = !it->second.hi.has_value();
    // transitive closure over premises, reported in chronological order
    std::set<std::string> wanted = {slot.str()};
    std::set<int> included;
    bool grew = true;
    while (grew) {
        grew = false;
        for (size_t i = 0; i < trace_.size(); ++i) {
            if (included.count(int(i))) continue;
            if (!wanted.count(trace_[i].target)) continue;
            included.insert(int(i));
            grew = true;
            for (const auto& pm : trace_[i].premises)
                if (pm != "0") wanted.insert(pm);
        }
    }
    for (int i = 0; i < int(trace_.size()); ++i)
        if (included.count(i)) rep.trace.push_back(trace_[i]);
    return rep;
}

std::vector<DeriveReport> LedgerProblem::derive_reports() const {
    std::vector<DeriveReport> out;
    for (const auto& k : derives_) out.push_back(query(k));
    return out;
}

}  // namespace twistlab
