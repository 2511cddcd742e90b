// Machine-checkable verification results and their JSON schema:
//   { element, family, k, dims: {H,E,V,W}, exact, compatible,
//     delta: {dimH, dimE, props: [bool x 8]}, mIndex, notes: [string] }
// parse(emit(report)) == report.

#ifndef DERHAM_REPORT_HPP
#define DERHAM_REPORT_HPP

#include <string>
#include <vector>

#include <json.hpp>

namespace derham {

struct VerifyResult {
  std::string element;
  int family = 1;
  int k = 0;
  std::vector<std::size_t> dims;  // H,(E),(V),W
  bool exact = false;
  bool compatible = false;
  std::size_t delta_dimH = 0, delta_dimE = 0;
  std::vector<bool> delta_props;  // 8 entries
  long m_index = 0;
  std::vector<std::string> notes;
  bool commuting = true;  // not part of the wire schema's pass keys; noted

  bool pass() const {
    bool p = exact && compatible && commuting;
    for (bool b : delta_props) p = p && b;
    return p;
  }

  bool operator==(const VerifyResult& o) const {
    return element == o.element && family == o.family && k == o.k && dims == o.dims &&
           exact == o.exact && compatible == o.compatible && delta_dimH == o.delta_dimH &&
           delta_dimE == o.delta_dimE && delta_props == o.delta_props &&
           m_index == o.m_index && notes == o.notes;
  }
};

inline nlohmann::json emit_report(const VerifyResult& r) {
  nlohmann::json dims;
  // H first, W last; E/V only when the dimension has them
  dims["H"] = r.dims.front();
  dims["W"] = r.dims.back();
  if (r.dims.size() >= 3) dims["E"] = r.dims[1];
  if (r.dims.size() == 4) dims["V"] = r.dims[2];
  nlohmann::json j{{"element", r.element},
                   {"family", r.family},
                   {"k", r.k},
                   {"dims", dims},
                   {"exact", r.exact},
                   {"compatible", r.compatible},
                   {"delta",
                    {{"dimH", r.delta_dimH}, {"dimE", r.delta_dimE}, {"props", r.delta_props}}},
                   {"mIndex", r.m_index},
                   {"notes", r.notes}};
  return j;
}

inline VerifyResult parse_report(const nlohmann::json& j) {
  VerifyResult r;
  r.element = j.at("element").get<std::string>();
  r.family = j.at("family").get<int>();
  r.k = j.at("k").get<int>();
  const auto& dims = j.at("dims");
  r.dims.push_back(dims.at("H").get<std::size_t>());
  if (dims.contains("E")) r.dims.push_back(dims.at("E").get<std::size_t>());
  if (dims.contains("V")) r.dims.push_back(dims.at("V").get<std::size_t>());
  r.dims.push_back(dims.at("W").get<std::size_t>());
  r.exact = j.at("exact").get<bool>();
  r.compatible = j.at("compatible").get<bool>();
  r.delta_dimH = j.at("delta").at("dimH").get<std::size_t>();
  r.delta_dimE = j.at("delta").at("dimE").get<std::size_t>();
  r.delta_props = j.at("delta").at("props").get<std::vector<bool>>();
  r.m_index = j.at("mIndex").get<long>();
  r.notes = j.at("notes").get<std::vector<std::string>>();
  return r;
}

inline std::string render_text(const VerifyResult& r) {
  std::string s = r.element + " family " + std::to_string(r.family) + " k=" + std::to_string(r.k);
  s += ": dims(";
  for (std::size_t i = 0; i < r.dims.size(); ++i)
    s += (i ? "," : "") + std::to_string(r.dims[i]);
  s += ") exact=" + std::string(r.exact ? "yes" : "NO");
  s += " compatible=" + std::string(r.compatible ? "yes" : "NO");
  s += " deltaH=" + std::to_string(r.delta_dimH) + " deltaE=" + std::to_string(r.delta_dimE);
  bool dp = true;
  for (bool b : r.delta_props) dp = dp && b;
  s += " deltaProps=" + std::string(dp ? "yes" : "NO");
  s += " mIndex=" + std::to_string(r.m_index);
  if (!r.commuting) s += " commuting=NO";
  for (const auto& n : r.notes) s += "\n  note: " + n;
  return s;
}

}  // namespace derham

#endif
