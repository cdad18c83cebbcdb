#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <sstream>

#include "twistlab/report.hpp"

using namespace twistlab;

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open file '" + path + "'");
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

struct Common {
    std::string file;
    uint64_t seed = 0;
    bool json = false;
    int max_shift = 16;
    int budget = 2000;

    Limits limits() const { return {max_shift, budget, seed}; }
};

int finish(const Json& report, const Common& c, bool expects_ok) {
    std::cout << emit_report(report, c.json);
    return expects_ok ? 0 : 1;
}

Json base_report(const std::string& command, const Common& c) {
    Json j;
    j["command"] = command;
    j["file"] = c.file;
    j["seed"] = c.seed;
    return j;
}

bool append_expects(Json& report, const Scenario& sc, const ScenarioRuntime& rt, const Common& c) {
    auto outcomes = run_expects(sc, rt, c.limits());
    report["expects"] = expects_json(outcomes);
    bool ok = true;
    for (const auto& o : outcomes) {
        ok = ok && o.passed;
        if (!o.passed) {
            std::string head = o.decl.kind;
            for (const auto& a : o.decl.args) head += " " + a;
            report["failed_expectation"] = head + " (expected " + o.decl.expected + ", got " +
                                           o.actual + ")";
        }
    }
    return ok;
}

std::vector<std::pair<std::string, TwistedComplex>> generator_set(const ScenarioRuntime& rt,
                                                                  const std::string& spec) {
    std::vector<std::pair<std::string, TwistedComplex>> gens;
    if (spec.empty() || spec == "all-proj") {
        for (int v = 0; v < rt.alg->num_vertices(); ++v)
            gens.push_back({"P(" + rt.alg->vertex_names[v] + ")", projective(rt.alg, v)});
        return gens;
    }
    std::istringstream in(spec);
    std::string name;
    while (std::getline(in, name, ','))
        gens.push_back({name, rt.object(name)});
    return gens;
}

Json ledger_report(const std::string& name, LedgerProblem& prob) {
    prob.propagate();
    Json j;
    j["ledger"] = name;
    Json derives = Json::object();
    for (const auto& rep : prob.derive_reports()) {
        Json d;
        if (rep.value.exact()) {
            d["value"] = prob.param_order_str(rep.value.lo);
        } else {
            d["lo"] = prob.param_order_str(rep.value.lo);
            d["hi"] = rep.value.hi ? Json(prob.param_order_str(*rep.value.hi)) : Json(nullptr);
        }
        d["exact"] = rep.value.exact();
        d["unbounded"] = rep.unbounded;
        Json tr = Json::array();
        for (const auto& step : rep.trace) tr.push_back(step.rule + "  =>  " + step.result);
        d["trace"] = tr;
        derives[rep.slot.str()] = d;
    }
    j["derives"] = derives;
    return j;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"twistlab: spherical objects, twists and Ext bookkeeping over zigzag models"};
    app.require_subcommand(1);

    Common c;
    std::string object_name, pair_spec, e_name, g_name, generators_spec;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("file", c.file, "scenario or ledger file")->required();
        sub->add_option("--seed", c.seed, "deterministic seed (default 0)");
        sub->add_flag("--json", c.json, "machine-readable report");
        sub->add_option("--max-shift", c.max_shift, "boundedness window (default 16)");
        sub->add_option("--budget", c.budget, "peeling/idempotent iteration cap");
    };

    CLI::App* validate_cmd = app.add_subcommand("validate", "parse, build and self-check a file");
    add_common(validate_cmd);
    CLI::App* spherical_cmd = app.add_subcommand("check-spherical", "classify an object");
    add_common(spherical_cmd);
    spherical_cmd->add_option("--object", object_name, "object name")->required();
    CLI::App* commute_cmd = app.add_subcommand("commute", "classify a pair of spherical twists");
    add_common(commute_cmd);
    commute_cmd->add_option("--pair", pair_spec, "comma-separated pair A,B")->required();
    commute_cmd->add_option("--generators", generators_spec, "generator list or all-proj");
    CLI::App* member_cmd = app.add_subcommand("member", "thick subcategory membership");
    add_common(member_cmd);
    member_cmd->add_option("--e", e_name, "spherical object")->required();
    member_cmd->add_option("--g", g_name, "candidate object")->required();
    CLI::App* twist_cmd = app.add_subcommand("twist", "apply a spherical twist");
    add_common(twist_cmd);
    twist_cmd->add_option("--e", e_name, "twisting object")->required();
    twist_cmd->add_option("--g", g_name, "twisted object")->required();
    CLI::App* decompose_cmd = app.add_subcommand("decompose", "split into indecomposables");
    add_common(decompose_cmd);
    decompose_cmd->add_option("--object", object_name, "object name")->required();
    CLI::App* ledger_cmd = app.add_subcommand("ledger", "run ledger scenario(s)");
    add_common(ledger_cmd);
    CLI::App* ktheory_cmd = app.add_subcommand("ktheory", "gram matrix, classes, reflections");
    add_common(ktheory_cmd);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n";
        return 2;
    }

    try {
        const Limits lim = c.limits();
        if (ledger_cmd->parsed()) {
            std::string text = read_file(c.file);
            Json report = base_report("ledger", c);
            Json runs = Json::array();
            // a scenario file may embed ledger blocks; otherwise the file is a
            // bare ledger program
            bool is_scenario = false;
            {
                std::istringstream in(text);
                std::string first;
                while (std::getline(in, first)) {
                    std::istringstream ws(first);
                    std::string w;
                    if (ws >> w && w[0] != '#') {
                        is_scenario = !(w == "params" || w == "entity" || w == "assume" ||
                                        w == "ses" || w == "fact" || w == "map" || w == "derive" ||
                                        w == "maxdeg");
                        break;
                    }
                }
            }
            bool ok = true;
            if (is_scenario) {
                Scenario sc = parse_scenario(text);
                ScenarioRuntime rt = realize(sc, lim);
                for (const auto& l : sc.ledgers) {
                    LedgerProblem prob = LedgerProblem::parse(l.text);
                    runs.push_back(ledger_report(l.name, prob));
                }
                report["runs"] = runs;
                ok = append_expects(report, sc, rt, c);
            } else {
                LedgerProblem prob = LedgerProblem::parse(text);
                runs.push_back(ledger_report(c.file, prob));
                report["runs"] = runs;
            }
            return finish(report, c, ok);
        }

        Scenario sc = parse_scenario(read_file(c.file));
        ScenarioRuntime rt = realize(sc, lim);

        if (validate_cmd->parsed()) {
            Json report = base_report("validate", c);
            report["algebra_dimension"] = rt.alg ? rt.alg->dim() : 0;
            if (rt.alg) {
                auto violations = validate(*rt.alg);
                report["violations"] = violations;
            }
            for (const auto& l : sc.ledgers) {
                LedgerProblem prob = LedgerProblem::parse(l.text);
                prob.propagate();
            }
            bool ok = append_expects(report, sc, rt, c);
            return finish(report, c, ok);
        }
        if (spherical_cmd->parsed()) {
            Json report = base_report("check-spherical", c);
            report["object"] = object_name;
            const TwistedComplex& x = rt.object(object_name);
            report["ext_table"] = to_json(ext_table(x, x));
            report["classification"] = to_json(classify(x, sc.cy));
            bool ok = append_expects(report, sc, rt, c);
            return finish(report, c, ok);
        }
        if (commute_cmd->parsed()) {
            auto comma = pair_spec.find(',');
            if (comma == std::string::npos)
                throw std::invalid_argument("--pair wants two comma-separated names");
            std::string a = pair_spec.substr(0, comma), b = pair_spec.substr(comma + 1);
            auto gens = generator_set(rt, generators_spec);
            Json report = base_report("commute", c);
            report["pair"] = Json::array({a, b});
            Json gn = Json::array();
            for (const auto& [n, g] : gens) gn.push_back(n);
            report["generators"] = gn;
            CommuteReport r = commute_classify(rt.object(a), rt.object(b), gens, lim);
            report["result"] = to_json(r);
            bool ok = append_expects(report, sc, rt, c);
            return finish(report, c, ok);
        }
        if (member_cmd->parsed()) {
            Json report = base_report("member", c);
            report["e"] = e_name;
            report["g"] = g_name;
            MembershipReport r = thick_membership(rt.object(e_name), rt.object(g_name), sc.cy, lim);
            report["result"] = to_json(r);
            bool ok = append_expects(report, sc, rt, c);
            return finish(report, c, ok);
        }
        if (twist_cmd->parsed()) {
            Json report = base_report("twist", c);
            report["e"] = e_name;
            report["g"] = g_name;
            TwistedComplex t = twist(rt.object(e_name), rt.object(g_name), lim);
            report["result"] = to_json(t);
            LatticeModel m = lattice_model(*rt.alg);
            report["class"] = to_json(class_of(t, m));
            report["k_consistent"] =
                class_of(t, m) ==
                reflect(m, class_of(rt.object(e_name), m), class_of(rt.object(g_name), m));
            bool ok = append_expects(report, sc, rt, c);
            return finish(report, c, ok);
        }
        if (decompose_cmd->parsed()) {
            Json report = base_report("decompose", c);
            report["object"] = object_name;
            SummandReport r = split_summands(rt.object(object_name), lim);
            Json pieces = Json::array();
            for (const auto& p : r.pieces) {
                Json pj;
                pj["piece"] = to_json(p.piece);
                pj["multiplicity"] = p.multiplicity;
                pj["spherical"] = p.spherical;
                pieces.push_back(pj);
            }
            report["pieces"] = pieces;
            report["verified"] = r.verified;
            RecoverResult rec = recover_collection(rt.object(object_name), sc.cy, lim);
            Json rj;
            rj["ok"] = rec.ok;
            if (!rec.ok) rj["diagnostic"] = rec.diagnostic;
            if (rec.ok) {
                Json ms = Json::array();
                for (int mcount : rec.multiplicities) ms.push_back(mcount);
                rj["multiplicities"] = ms;
                rj["strongly_spherical"] = true;
            }
            report["recover"] = rj;
            bool ok = append_expects(report, sc, rt, c);
            return finish(report, c, ok);
        }
        if (ktheory_cmd->parsed()) {
            Json report = base_report("ktheory", c);
            LatticeModel m = lattice_model(*rt.alg);
            Json gram = Json::array();
            for (const auto& row : m.gram) {
                Json r = Json::array();
                for (long long v : row) r.push_back(v);
                gram.push_back(r);
            }
            report["labels"] = m.labels;
            report["gram"] = gram;
            Json classes = Json::object();
            for (const auto& [name, obj] : rt.objects) classes[name] = to_json(class_of(obj, m));
            report["classes"] = classes;
            // reflection checks on the projective classes
            bool symmetry = true;
            int d = m.cy_dimension;
            for (size_t i = 0; i < m.gram.size(); ++i)
                for (size_t j = 0; j < m.gram.size(); ++j)
                    symmetry = symmetry &&
                               m.gram[i][j] == ((d % 2 == 0) ? m.gram[j][i] : -m.gram[j][i]);
            report["gram_cy_symmetry"] = symmetry;
            bool involution = true;
            for (size_t i = 0; i < m.gram.size() && d % 2 == 0; ++i) {
                KClass e(m.gram.size(), 0);
                e[i] = 1;
                if (euler_pairing(m, e, e) != 2) continue;
                for (size_t j = 0; j < m.gram.size(); ++j) {
                    KClass v(m.gram.size(), 0);
                    v[j] = 1;
                    involution = involution && reflect(m, e, reflect(m, e, v)) == v;
                }
            }
            report["reflections_involutive"] = involution;
            bool ok = append_expects(report, sc, rt, c);
            return finish(report, c, ok);
        }
        return 2;
    } catch (const ScenarioParseError& e) {
        std::cerr << "parse error: " << c.file << ": " << e.what() << "\n";
        return 2;
    } catch (const LedgerParseError& e) {
        std::cerr << "parse error: " << c.file << ": " << e.what() << "\n";
        return 2;
    } catch (const LedgerError& e) {
        std::cerr << "ledger error: " << e.what() << "\n";
        for (const auto& line : e.chain) std::cerr << "  " << line << "\n";
        return 2;
    } catch (const StrictModeError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
