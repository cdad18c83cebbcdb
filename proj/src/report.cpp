#include "twistlab/report.hpp"

#include <sstream>

namespace twistlab {

Json to_json(const ExtTable& t) {
    Json j = Json::object();
    for (const auto& [i, n] : t.dims) j[std::to_string(i)] = n;
    return j;
}

Json to_json(const TwistedComplex& x) {
    Json j;
    j["summands"] = Json::array();
    for (const auto& s : x.summands) {
        Json e;
        e["vertex"] = x.alg->vertex_names[s.vertex];
        e["shift"] = s.shift;
        j["summands"].push_back(e);
    }
    Json d = Json::array();
    for (int r = 0; r < x.size(); ++r)
        for (int c = 0; c < x.size(); ++c)
            if (!x.diff[r][c].is_zero()) {
                Json e;
                e["to"] = r;
                e["from"] = c;
                e["value"] = x.diff[r][c].str(*x.alg);
                d.push_back(e);
            }
    j["differential"] = d;
    return j;
}

Json to_json(const MembershipReport& r) {
    Json j;
    j["in_thick_subcategory"] = r.in_thick_subcategory;
    j["d_e_total"] = r.d_e_total;
    j["twist_test_passed"] = r.twist_test_passed;
    if (r.filtration_shifts) {
        j["filtration_shifts"] = *r.filtration_shifts;
        j["filtration_length"] = int(r.filtration_shifts->size());
    } else {
        j["filtration_shifts"] = nullptr;
    }
    return j;
}

Json to_json(const CommuteReport& r) {
    Json j;
    j["kind"] = r.kind == CommuteKind::Orthogonal
                    ? "COMMUTE_ORTHOGONAL"
                    : r.kind == CommuteKind::Equal ? "COMMUTE_EQUAL" : "NOT_COMMUTE";
    if (r.witness_shift) j["witness_shift"] = *r.witness_shift;
    if (r.witness_name) j["witness"] = *r.witness_name;
    return j;
}

Json to_json(const Classification& c) {
    Json j;
    j["simple"] = c.simple;
    j["rigid"] = c.rigid;
    j["exceptional"] = c.exceptional;
    j["spherical"] = c.spherical;
    return j;
}

Json to_json(const KClass& k) {
    Json j = Json::array();
    for (long long v : k) j.push_back(v);
    return j;
}

Json expects_json(const std::vector<ExpectOutcome>& outcomes) {
    Json arr = Json::array();
    for (const auto& o : outcomes) {
        Json j;
        std::string head = o.decl.kind;
        for (const auto& a : o.decl.args) head += " " + a;
        j["check"] = head;
        j["expected"] = o.decl.expected;
        j["actual"] = o.actual;
        j["passed"] = o.passed;
        arr.push_back(j);
    }
    return arr;
}

namespace {

void render_text(const Json& j, std::ostream& os, int indent) {
    std::string pad(size_t(indent) * 2, ' ');
    if (j.is_object()) {
        for (auto it = j.begin(); it != j.end(); ++it) {
            if (it.value().is_object() || it.value().is_array()) {
                os << pad << it.key() << ":";
                if (it.value().empty()) {
                    os << (it.value().is_array() ? " []" : " {}") << "\n";
                } else {
                    os << "\n";
                    render_text(it.value(), os, indent + 1);
                }
            } else {
                os << pad << it.key() << ": " << (it.value().is_string()
                                                      ? it.value().get<std::string>()
                                                      : it.value().dump())
                   << "\n";
            }
        }
    } else if (j.is_array()) {
        for (const auto& e : j) {
            if (e.is_object() || e.is_array()) {
                os << pad << "-\n";
                render_text(e, os, indent + 1);
            } else {
                os << pad << "- " << (e.is_string() ? e.get<std::string>() : e.dump()) << "\n";
            }
        }
    } else {
        os << pad << (j.is_string() ? j.get<std::string>() : j.dump()) << "\n";
    }
}

}  // namespace

std::string emit_report(const Json& report, bool machine) {
    if (machine) return report.dump(2) + "\n";
    std::ostringstream os;
    render_text(report, os, 0);
    return os.str();
}

}  // namespace twistlab
