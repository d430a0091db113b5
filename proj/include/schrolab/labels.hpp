#pragma once
#include <map>
#include <set>
#include <string>

namespace schrolab {

// Parsed form of the label grammar `name[:key=val{,key=val}]` shared by
// symbol specs, potential specs and mask specs.
struct LabelSpec {
  std::string name;
  std::map<std::string, double> params;
};

LabelSpec parse_label(const std::string& label);

// `who` names the consumer in error messages
void allow_keys(const LabelSpec& spec, const std::set<std::string>& required,
                const std::set<std::string>& optional, const std::string& who);
double require_param(const LabelSpec& spec, const std::string& key);
int require_int(const LabelSpec& spec, const std::string& key);

}  // namespace schrolab
