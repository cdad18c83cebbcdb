#pragma once

#include <json.hpp>

#include "twistlab/ktheory.hpp"
#include "twistlab/ledger.hpp"
#include "twistlab/scenario.hpp"

namespace twistlab {

using Json = nlohmann::ordered_json;

Json to_json(const ExtTable& t);
Json to_json(const TwistedComplex& x);
Json to_json(const MembershipReport& r);
Json to_json(const CommuteReport& r);
Json to_json(const Classification& c);
Json to_json(const KClass& k);
Json expects_json(const std::vector<ExpectOutcome>& outcomes);

/* machine: canonical JSON, byte-identical for identical inputs + seed;
 * text: indented key/value rendering of the same tree. */
std::string emit_report(const Json& report, bool machine);

}  // namespace twistlab
