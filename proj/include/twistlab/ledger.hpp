#pragma once

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace twistlab {

/* Linear expression with integer coefficients over declared parameters,
 * e.g. r2 + d - 1.  The canonical printing follows declaration order. */
struct SymExpr {
    long long constant = 0;
    std::map<std::string, long long> coeffs;  // param -> coefficient, no zeros

    static SymExpr of_int(long long n) { return {n, {}}; }
    static SymExpr of_param(const std::string& p, long long c = 1);

    SymExpr operator+(const SymExpr& o) const;
    SymExpr operator-(const SymExpr& o) const;
    SymExpr operator-() const;
    bool operator==(const SymExpr& o) const = default;
    bool is_constant() const { return coeffs.empty(); }
};

struct LedgerError : std::runtime_error {
    std::vector<std::string> chain;
    LedgerError(const std::string& msg, std::vector<std::string> chain_ = {})
        : std::runtime_error(msg), chain(std::move(chain_)) {}
};

struct ParseDiag {
    int line = 0, col = 0;
    std::string message;
};

struct LedgerParseError : std::runtime_error {
    ParseDiag diag;
    explicit LedgerParseError(ParseDiag d)
        : std::runtime_error("line " + std::to_string(d.line) + ", col " + std::to_string(d.col) +
                             ": " + d.message),
          diag(std::move(d)) {}
};

/* dim Ext^degree(a, b) slot key; degree 0 prints as hom(a,b). */
struct SlotKey {
    std::string a, b;
    int degree = 0;
    auto operator<=>(const SlotKey&) const = default;
    std::string str() const;
};

struct Interval {
    SymExpr lo;                  // >= 0 always
    std::optional<SymExpr> hi;   // nullopt = unbounded above
    bool exact() const { return hi && *hi == lo; }
    std::string str() const;
};

struct TraceStep {
    std::string target;                 // slot or rank name
    std::string rule;                   // human-readable equation / fact
    std::vector<std::string> premises;  // slot/rank names this step read
    std::string result;                 // interval after the step
};

struct DeriveReport {
    SlotKey slot;
    Interval value;
    std::vector<TraceStep> trace;  // transitive deduction chain, oldest first
    bool unbounded = false;
};

/* A parsed and propagated ledger problem.  Long exact sequence templates for
 * every declared short exact sequence are instantiated against every entity
 * in both functor directions up to max_degree; facts, arrow annotations and
 * exactness then propagate until no interval tightens. */
class LedgerProblem {
public:
    static LedgerProblem parse(const std::string& text);

    void propagate();  // fixed point; throws LedgerError on infeasibility
    DeriveReport query(const SlotKey& slot) const;
    std::vector<DeriveReport> derive_reports() const;  // the derive lines, in file order

    const std::vector<SlotKey>& derives() const { return derives_; }
    std::string param_order_str(const SymExpr& e) const;

    struct Les {
        std::string name;
        std::vector<SlotKey> slots;  // slot 0 receives rank 0 from the left
    };

    // exposed for tests
    const std::map<SlotKey, Interval>& slots() const { return slots_; }
    const std::vector<Les>& sequences() const { return les_; }

private:
    std::vector<std::string> params_;                 // declaration order
    std::map<std::string, long long> param_lb_;       // lower bounds from assume
    std::vector<std::string> entities_;
    int max_degree_ = 4;

    std::vector<Les> les_;
    std::map<SlotKey, Interval> slots_;
    std::vector<Interval> ranks_;                     // flat rank variables
    std::map<std::pair<std::string, int>, int> rank_index_;  // (les name, arrow pos) -> index
    struct Annotation {
        SlotKey from, to;
        std::string kind;  // injective | surjective | zero | nonzero
    };
    std::vector<Annotation> annotations_;
    std::vector<std::string> annotation_texts_;
    std::vector<SlotKey> derives_;
    std::vector<TraceStep> trace_;
    std::map<std::string, std::vector<int>> steps_by_target_;
    std::set<std::string> emitted_windows_;

    friend struct LedgerBuilder;

    bool provable_nonneg(const SymExpr& e) const;
    bool tighten_slot(const SlotKey& k, const std::optional<SymExpr>& lo,
                      const std::optional<SymExpr>& hi, const std::string& rule,
                      const std::vector<std::string>& premises);
    bool tighten_rank(int idx, const std::string& name, const std::optional<SymExpr>& lo,
                      const std::optional<SymExpr>& hi, const std::string& rule,
                      const std::vector<std::string>& premises);
    void record(const std::string& target, const std::string& rule,
                const std::vector<std::string>& premises, const std::string& result);
    void check_feasible(const std::string& target, const Interval& v);
    std::string rank_name(const std::string& les, int pos) const;
    std::string print_expr(const SymExpr& e) const;
    std::string print_interval(const Interval& v) const;
};

}  // namespace twistlab
