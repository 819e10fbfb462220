#include "modrep/report.hpp"

#include <algorithm>
#include <sstream>

#include "json.hpp"

namespace modrep::report {

void Report::assert_that(const std::string& name, const std::string& ref, bool ok, const std::string& witness) {
  checks.push_back({name, ref, ok ? Status::Pass : Status::Fail, witness});
}

void Report::record(const std::string& name, const std::string& ref, bool holds, const std::string& witness) {
  checks.push_back({name, ref, Status::Info, std::string(holds ? "holds" : "does not hold") +
                                                 (witness.empty() ? "" : "; " + witness)});
}

void Report::merge(const Report& other) {
  for (const Check& c : other.checks) checks.push_back(c);
}

bool Report::failed() const {
  return std::any_of(checks.begin(), checks.end(), [](const Check& c) { return c.status == Status::Fail; });
}

int Report::count(Status s) const {
  return static_cast<int>(std::count_if(checks.begin(), checks.end(), [&](const Check& c) { return c.status == s; }));
}

std::string status_name(Status s) {
  switch (s) {
    case Status::Pass: return "pass";
    case Status::Fail: return "fail";
    case Status::Info: return "info";
  }
  return "?";
}

namespace {
nlohmann::ordered_json to_object(const Report& r) {
  nlohmann::ordered_json config = nlohmann::ordered_json::object();
  for (const auto& [k, v] : r.config) config[k] = v;
  nlohmann::ordered_json checks = nlohmann::ordered_json::array();
  for (const Check& c : r.checks)
    checks.push_back({{"name", c.name}, {"paper_ref", c.ref}, {"status", status_name(c.status)}, {"witness", c.witness}});
  return {{"config", config}, {"suite", r.suite}, {"checks", checks}};
}

std::string escape_tsv(const std::string& s) {
  std::string out;
  for (char ch : s) {
    if (ch == '\t') out += "\\t";
    else if (ch == '\n') out += "\\n";
    else out += ch;
  }
  return out;
}
}  // namespace

std::string to_json(const std::vector<Report>& reports) {
  if (reports.size() == 1) return to_object(reports[0]).dump(2) + "\n";
  nlohmann::ordered_json all = nlohmann::ordered_json::array();
  for (const Report& r : reports) all.push_back(to_object(r));
  return all.dump(2) + "\n";
}

std::string to_tsv(const std::vector<Report>& reports) {
  std::ostringstream os;
  os << "config\tsuite\tname\tpaper_ref\tstatus\twitness\n";
  for (const Report& r : reports) {
    std::string config;
    for (const auto& [k, v] : r.config) config += (config.empty() ? "" : ";") + k + "=" + v;
    for (const Check& c : r.checks)
      os << escape_tsv(config) << '\t' << escape_tsv(r.suite) << '\t' << escape_tsv(c.name) << '\t' << escape_tsv(c.ref)
         << '\t' << status_name(c.status) << '\t' << escape_tsv(c.witness) << '\n';
  }
  return os.str();
}

}  // namespace modrep::report
