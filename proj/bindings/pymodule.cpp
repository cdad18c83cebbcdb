#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "twistlab/report.hpp"

namespace py = pybind11;
using namespace twistlab;

namespace {

FieldSpec field_from_str(const std::string& s) {
    if (s == "rationals") return FieldSpec::rationals();
    if (s.rfind("prime ", 0) == 0) return FieldSpec::prime(uint32_t(std::stoul(s.substr(6))));
    throw std::invalid_argument("field must be 'rationals' or 'prime P'");
}

std::map<int, int> table_dict(const ExtTable& t) { return {t.dims.begin(), t.dims.end()}; }

}  // namespace

PYBIND11_MODULE(_twistlab, m) {
    m.doc() = "Exact engine for spherical objects and commuting twists over zigzag models";

    py::class_<Limits>(m, "Limits")
        .def(py::init<>())
        .def_readwrite("max_shift", &Limits::max_shift)
        .def_readwrite("budget", &Limits::budget)
        .def_readwrite("seed", &Limits::seed);

    py::class_<TwistedComplex>(m, "TwistedComplex")
        .def("__str__", &TwistedComplex::str)
        .def("__eq__",
             [](const TwistedComplex& a, const TwistedComplex& b) { return a == b; })
        .def_property_readonly("size", &TwistedComplex::size)
        .def_property_readonly(
            "summands",
            [](const TwistedComplex& x) {
                std::vector<std::pair<std::string, int>> out;
                for (const auto& s : x.summands)
                    out.push_back({x.alg->vertex_names[s.vertex], s.shift});
                return out;
            });

    py::class_<SphericalCollection>(m, "SphericalCollection");

    struct AlgebraHandle {
        AlgebraPtr ptr;
    };
    py::class_<AlgebraHandle>(m, "Algebra")
        .def_property_readonly("dimension", [](const AlgebraHandle& a) { return a.ptr->dim(); })
        .def_property_readonly("cy_dimension",
                               [](const AlgebraHandle& a) { return a.ptr->cy_dimension; })
        .def_property_readonly("vertices",
                               [](const AlgebraHandle& a) { return a.ptr->vertex_names; });

    m.def(
        "zigzag",
        [](const std::vector<std::string>& vertices,
           const std::vector<std::tuple<std::string, std::string, int, int>>& edges, int d,
           const std::string& field) {
            GraphSpec g;
            g.vertices = vertices;
            for (const auto& [v, w, dvw, dwv] : edges) {
                int vi = g.vertex_index(v), wi = g.vertex_index(w);
                if (vi < 0 || wi < 0) throw std::invalid_argument("unknown edge vertex");
                g.edges.push_back({vi, wi, dvw, dwv});
            }
            return AlgebraHandle{build_zigzag(g, field_from_str(field), d)};
        },
        py::arg("vertices"), py::arg("edges"), py::arg("d") = 2,
        py::arg("field") = "rationals");

    m.def("projective",
          [](const AlgebraHandle& a, const std::string& v) { return projective(a.ptr, v); });
    m.def("shift", [](const TwistedComplex& x, int n) { return shift(x, n); });
    m.def("direct_sum", [](const AlgebraHandle& a, const std::vector<TwistedComplex>& xs) {
        return direct_sum(a.ptr, xs);
    });
    m.def("minimize", [](const TwistedComplex& x) { return minimize(x); });
    m.def("ext_table",
          [](const TwistedComplex& x, const TwistedComplex& y) { return table_dict(ext_table(x, y)); });
    m.def("is_isomorphic",
          [](const TwistedComplex& x, const TwistedComplex& y, uint64_t seed) {
              return is_isomorphic(x, y, seed).isomorphic;
          },
          py::arg("x"), py::arg("y"), py::arg("seed") = 0);
    m.def("twist",
          [](const TwistedComplex& e, const TwistedComplex& g) { return twist(e, g); });
    m.def("inverse_twist", [](const TwistedComplex& e, const TwistedComplex& g) {
        return inverse_twist(e, g);
    });
    m.def("is_spherical", &is_spherical);
    m.def("classify", [](const TwistedComplex& e, int d) {
        Classification c = classify(e, d);
        py::dict out;
        out["simple"] = c.simple;
        out["rigid"] = c.rigid;
        out["exceptional"] = c.exceptional;
        out["spherical"] = c.spherical;
        return out;
    });
    m.def("is_orthogonal", &is_orthogonal);
    m.def("d_e", &d_e);
    m.def("thick_membership",
          [](const TwistedComplex& e, const TwistedComplex& g, int d) {
              MembershipReport r = thick_membership(e, g, d);
              py::dict out;
              out["in_thick_subcategory"] = r.in_thick_subcategory;
              out["d_e_total"] = r.d_e_total;
              out["twist_test_passed"] = r.twist_test_passed;
              if (r.filtration_shifts) out["filtration_shifts"] = *r.filtration_shifts;
              else out["filtration_shifts"] = py::none();
              return out;
          });
    m.def("commute_classify",
          [](const TwistedComplex& e, const TwistedComplex& f,
             const std::vector<std::pair<std::string, TwistedComplex>>& gens) {
              CommuteReport r = commute_classify(e, f, gens);
              py::dict out;
              out["kind"] = r.kind == CommuteKind::Orthogonal
                                ? "COMMUTE_ORTHOGONAL"
                                : r.kind == CommuteKind::Equal ? "COMMUTE_EQUAL" : "NOT_COMMUTE";
              if (r.witness_shift) out["witness_shift"] = *r.witness_shift;
              if (r.witness_name) out["witness"] = *r.witness_name;
              return out;
          });
    m.def("gram_matrix",
          [](const AlgebraHandle& a) { return lattice_model(*a.ptr).gram; });
    m.def("class_of", [](const TwistedComplex& x) {
        return class_of(x, lattice_model(*x.alg));
    });
    m.def("recover_collection", [](const TwistedComplex& x, int d, uint64_t seed) {
        Limits lim;
        lim.seed = seed;
        RecoverResult r = recover_collection(x, d, lim);
        py::dict out;
        out["ok"] = r.ok;
        out["multiplicities"] = r.multiplicities;
        out["diagnostic"] = r.diagnostic;
        return out;
    }, py::arg("x"), py::arg("d"), py::arg("seed") = 0);
    m.def("run_ledger", [](const std::string& text) {
        LedgerProblem prob = LedgerProblem::parse(text);
        prob.propagate();
        py::dict out;
        for (const auto& rep : prob.derive_reports()) {
            py::dict d;
            d["exact"] = rep.value.exact();
            d["lo"] = prob.param_order_str(rep.value.lo);
            d["hi"] = rep.value.hi ? py::object(py::str(prob.param_order_str(*rep.value.hi)))
                                   : py::object(py::none());
            std::vector<std::string> tr;
            for (const auto& s : rep.trace) tr.push_back(s.rule + "  =>  " + s.result);
            d["trace"] = tr;
            out[py::str(rep.slot.str())] = d;
        }
        return out;
    });
    m.def("run_scenario", [](const std::string& text, uint64_t seed) {
        Scenario sc = parse_scenario(text);
        Limits lim;
        lim.seed = seed;
        ScenarioRuntime rt = realize(sc, lim);
        auto outcomes = run_expects(sc, rt, lim);
        bool ok = true;
        for (const auto& o : outcomes) ok = ok && o.passed;
        return ok;
    }, py::arg("text"), py::arg("seed") = 0);

    m.attr("__version__") = "0.1.0";
}
