// JSON serialization, certificate files and DOT output.

#ifndef TROPLIN_IO_HPP
#define TROPLIN_IO_HPP

#include <string>
#include <vector>

#include "json.hpp"
#include "troplin/chain.hpp"
#include "troplin/independence.hpp"
#include "troplin/mrc.hpp"
#include "troplin/noether.hpp"

namespace troplin {

using json = nlohmann::json;

json q_json(const Q& q);
Q q_parse(const json& j);  // "p/q" or an integer

json graph_to_json(const MetricGraph& g);
GraphPtr graph_from_json(const json& j);

json point_to_json(const GraphPoint& p);
GraphPoint point_from_json(const json& j);

json divisor_to_json(const Divisor& D);
Divisor divisor_from_json(const json& j);

json plf_to_json(const PLFunction& f);
PLFunction plf_from_json(GraphPtr g, const json& j);

json chain_to_json(const ChainParams& p);
ChainParams chain_from_json(const json& j);

json data_to_json(const DivisorData& d);
DivisorData data_from_json(const json& j);

json path_to_json(const LingeringPath& p);
json tableau_to_json(const Tableau& t);
Tableau tableau_from_json(const json& j);

struct Family {
  GraphPtr graph;
  std::vector<PLFunction> funcs;
  std::vector<std::string> labels;
};

json family_to_json(const Family& f);
Family family_from_json(const json& j);

json combination_to_json(const Combination& b);
Combination combination_from_json(const json& j);

json trace_to_json(const DependenceTrace& t);
DependenceTrace trace_from_json(const json& j);

json pairset_to_json(const PairSet& A);
json relation_to_json(const Relation& r);
Relation relation_from_json(const json& j);

json mrc_to_json(const MrcCertificate& c);
MrcCertificate mrc_from_json(const json& j);

json noether_to_json(const MetricGraph& g, const NoetherCertificate& c);
NoetherCertificate noether_from_json(GraphPtr g, const json& j);

json low_degree_to_json(const LowDegreeCertificate& c);

// Certificate files carry a "kind": "dependence", "mrc", "noether" or "low-degree".
json dependence_certificate(const Family& f, const DependenceOutcome& out);
bool verify_certificate(const json& j, std::string* why = nullptr);

std::string chain_dot(const Chain& c, const DivisorData& d);
std::string pairset_dot(const PairSet& A);

}  // namespace troplin

#endif
