#pragma once

#include <map>

#include "twistlab/decompose.hpp"
#include "twistlab/ledger.hpp"

namespace twistlab {

struct ScenarioParseError : std::runtime_error {
    ParseDiag diag;
    explicit ScenarioParseError(ParseDiag d)
        : std::runtime_error("line " + std::to_string(d.line) + ", col " + std::to_string(d.col) +
                             ": " + d.message),
          diag(std::move(d)) {}
};

/* Parsed scenario file: one algebra context plus named objects, maps,
 * collections, self-checking expectations and embedded ledger programs. */
struct Scenario {
    FieldSpec field = FieldSpec::rationals();
    int cy = 2;
    std::vector<std::string> vertices;
    struct EdgeDecl {
        std::string v, w;
        int deg_vw = 1, deg_wv = 1;
        bool operator==(const EdgeDecl&) const = default;
    };
    std::vector<EdgeDecl> edges;

    struct ObjectDecl {
        std::string name;
        std::string kind;  // proj | shift | sum | cone | twist | inverse_twist | minimize
        std::vector<std::string> args;
        int shift_by = 0;  // for shift
        bool operator==(const ObjectDecl&) const = default;
    };
    struct MapEntry {
        int row = 0, col = 0;
        std::string coeff = "1";  // integer or p/q
        std::string elem;         // e | a | l
        std::vector<std::string> verts;
        bool operator==(const MapEntry&) const = default;
    };
    struct MapDecl {
        std::string name, src, tgt;
        std::vector<MapEntry> entries;
        bool operator==(const MapDecl&) const = default;
    };
    struct CollectionDecl {
        std::string name;
        std::vector<std::string> members;
        bool operator==(const CollectionDecl&) const = default;
    };
    struct ExpectDecl {
        std::string kind;
        std::vector<std::string> args;
        std::string expected;
        int line = 0;
        bool operator==(const ExpectDecl& o) const {
            return kind == o.kind && args == o.args && expected == o.expected;
        }
    };
    struct LedgerDecl {
        std::string name;
        std::string text;
        bool operator==(const LedgerDecl&) const = default;
    };

    std::vector<ObjectDecl> objects;
    std::vector<MapDecl> maps;
    std::vector<CollectionDecl> collections;
    std::vector<ExpectDecl> expects;
    std::vector<LedgerDecl> ledgers;

    bool operator==(const Scenario&) const = default;
};

Scenario parse_scenario(const std::string& text);
std::string pretty_print(const Scenario& s);

/* Resolved scenario: the algebra and every declared value. */
struct ScenarioRuntime {
    AlgebraPtr alg;
    std::map<std::string, TwistedComplex> objects;
    std::map<std::string, ChainMap> maps;
    std::map<std::string, SphericalCollection> collections;

    const TwistedComplex& object(const std::string& name) const;
    const SphericalCollection& collection(const std::string& name) const;
};

ScenarioRuntime realize(const Scenario& s, const Limits& lim = {});

struct ExpectOutcome {
    Scenario::ExpectDecl decl;
    bool passed = false;
    std::string actual;
};

std::vector<ExpectOutcome> run_expects(const Scenario& s, const ScenarioRuntime& rt,
                                       const Limits& lim = {});

}  // namespace twistlab
