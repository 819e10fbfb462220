// Check records of the verification suites and their JSON / TSV serialization.
#pragma once

#include <string>
#include <utility>
#include <vector>

namespace modrep::report {

enum class Status { Pass, Fail, Info };

struct Check {
  std::string name;
  std::string ref;  // statement being checked
  Status status = Status::Pass;
  std::string witness;
};

struct Report {
  std::vector<std::pair<std::string, std::string>> config;
  std::string suite;
  std::vector<Check> checks;

  // A failure is a contradiction with the statement.
  void assert_that(const std::string& name, const std::string& ref, bool ok, const std::string& witness = "");
  // Outcome recorded without asserting it.
  void record(const std::string& name, const std::string& ref, bool holds, const std::string& witness = "");
  void merge(const Report& other);
  bool failed() const;
  int count(Status s) const;
};

std::string status_name(Status s);
std::string to_json(const std::vector<Report>& reports);
std::string to_tsv(const std::vector<Report>& reports);

}  // namespace modrep::report
