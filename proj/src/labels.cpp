#include "schrolab/labels.hpp"

#include <cmath>
#include <stdexcept>

namespace schrolab {

namespace {

double parse_number(const std::string& txt, const std::string& key) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(txt, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != txt.size() || txt.empty())
    throw std::invalid_argument("label: bad numeric value '" + txt +
                                "' for key '" + key + "'");
  return v;
}

}  // namespace

LabelSpec parse_label(const std::string& label) {
  LabelSpec spec;
  const std::size_t colon = label.find(':');
  spec.name = label.substr(0, colon);
  if (spec.name.empty())
    throw std::invalid_argument("label: empty name in '" + label + "'");
  if (colon == std::string::npos) return spec;
  const std::string body = label.substr(colon + 1);
  std::size_t pos = 0;
  while (pos <= body.size()) {
    std::size_t comma = body.find(',', pos);
    if (comma == std::string::npos) comma = body.size();
    const std::string item = body.substr(pos, comma - pos);
    const std::size_t eq = item.find('=');
    if (eq == std::string::npos || eq == 0)
      throw std::invalid_argument("label: expected key=val, got '" + item +
                                  "' in '" + label + "'");
    const std::string key = item.substr(0, eq);
    if (spec.params.count(key))
      throw std::invalid_argument("label: duplicate key '" + key + "' in '" +
                                  label + "'");
    spec.params[key] = parse_number(item.substr(eq + 1), key);
    pos = comma + 1;
  }
  return spec;
}

void allow_keys(const LabelSpec& spec, const std::set<std::string>& required,
                const std::set<std::string>& optional, const std::string& who) {
  for (const auto& [key, value] : spec.params) {
    (void)value;
    if (!required.count(key) && !optional.count(key))
      throw std::invalid_argument(who + ": unknown key '" + key + "' for '" +
                                  spec.name + "'");
  }
  for (const auto& key : required)
    if (!spec.params.count(key))
      throw std::invalid_argument(who + ": '" + spec.name +
                                  "' requires key '" + key + "'");
}

double require_param(const LabelSpec& spec, const std::string& key) {
  auto it = spec.params.find(key);
  if (it == spec.params.end())
    throw std::invalid_argument("label: '" + spec.name + "' requires key '" +
                                key + "'");
  return it->second;
}

int require_int(const LabelSpec& spec, const std::string& key) {
  const double v = require_param(spec, key);
  const int i = static_cast<int>(std::llround(v));
  if (static_cast<double>(i) != v)
    throw std::invalid_argument("label: key '" + key + "' of '" + spec.name +
                                "' must be an integer");
  return i;
}

}  // namespace schrolab
