// Acceptance run: one pass/fail line per criterion; failing checks are listed on stderr.
#include <chrono>
#include <functional>
#include <iomanip>
#include <iostream>

#include "modrep/verify.hpp"

using namespace modrep;
using report::Report;

namespace {

struct Outcome {
  std::vector<Report> reports;
  std::string summary;
};

std::vector<std::pair<int, int>> classified_groups() { return {{2, 2}, {2, 3}, {2, 5}, {3, 2}}; }

const finred::IrreducibleData& steinberg(const std::vector<finred::IrreducibleData>& table, int n) {
  return table[finred::find_by_parameters(table, std::vector<int>(n, 0), 0)];
}

// Every V of GL(2,2) and GL(2,3) on the torus, then GL(3,2) Steinberg on the given Levis.
template <typename F>
void for_contexts(bool both_s, const std::vector<finred::RootSet>& gl3_levis, F&& body) {
  for (int p : {2, 3}) {
    auto table = finred::classify_all(finred::build_gl(2, p), 7);
    for (const auto& d : table) {
      body(hecke::make_context(d, 0, local::default_s(2, 0)), 2);
      if (both_s) body(hecke::make_context(d, 0, verify::shifted_s(2, 0)), 2);
    }
  }
  auto table = finred::classify_all(finred::build_gl(3, 2), 7);
  for (finred::RootSet J : gl3_levis) {
    body(hecke::make_context(steinberg(table, 3), J, local::default_s(3, J)), 3);
    if (both_s) body(hecke::make_context(steinberg(table, 3), J, verify::shifted_s(3, J)), 3);
  }
}

Outcome criterion_1() {
  Outcome o;
  for (int p : {2, 3, 5})
    for (int n_power : {1, 2}) o.reports.push_back(verify::gl2_remark_table(p, n_power));
  o.summary = "p in {2,3,5}, n_power in {1,2}";
  return o;
}

Outcome criterion_2() {
  Outcome o;
  int reps = 0;
  for (auto [n, p] : classified_groups()) {
    o.reports.push_back(verify::verify_classification(finred::build_gl(n, p), 7));
    reps += o.reports.back().count(report::Status::Info);
  }
  o.summary = std::to_string(reps) + " irreducibles over 4 groups";
  return o;
}

Outcome criterion_3() {
  Outcome o;
  for (auto [n, p] : classified_groups()) {
    auto g = finred::build_gl(n, p);
    o.reports.push_back(verify::verify_finite_statements(g, finred::classify_all(g, 7)));
  }
  o.summary = "every V and proper J of 4 groups";
  return o;
}

Outcome criterion_4() {
  Outcome o;
  for_contexts(true, {0, 1, 2}, [&](const hecke::SatakeContext& ctx, int) {
    o.reports.push_back(verify::verify_prop_xi(ctx, 11));
  });
  o.summary = std::to_string(o.reports.size()) + " configurations";
  return o;
}

// Depth 2 throughout except GL(3) on the torus, run at depth 1.
Outcome criterion_5() {
  Outcome o;
  for_contexts(true, {1, 2}, [&](const hecke::SatakeContext& ctx, int) {
    o.reports.push_back(verify::verify_localization(ctx, 2));
  });
  auto table = finred::classify_all(finred::build_gl(3, 2), 7);
  for (const auto& s : {local::default_s(3, 0), verify::shifted_s(3, 0)})
    o.reports.push_back(verify::verify_localization(hecke::make_context(steinberg(table, 3), 0, s), 1));
  o.summary = std::to_string(o.reports.size()) + " configurations";
  return o;
}

// Both choices of s except GL(3) on the torus, run at depth 1 with the default s.
Outcome criterion_6() {
  Outcome o;
  for_contexts(true, {1, 2}, [&](const hecke::SatakeContext& ctx, int) {
    o.reports.push_back(verify::verify_main_stage(ctx, 2));
  });
  auto table = finred::classify_all(finred::build_gl(3, 2), 7);
  o.reports.push_back(verify::verify_main_stage(hecke::make_context(steinberg(table, 3), 0, local::default_s(3, 0)), 1));
  o.summary = std::to_string(o.reports.size()) + " configurations";
  return o;
}

Outcome criterion_7() {
  Outcome o;
  for_contexts(false, {1}, [&](const hecke::SatakeContext& ctx, int) {
    o.reports.push_back(verify::verify_properties(ctx, 23, {}));
  });
  const size_t configs = o.reports.size();
  o.reports.push_back(verify::verify_canonical_invariance(2, 3, 29, 200));
  o.reports.push_back(verify::verify_canonical_invariance(3, 2, 31, 200));
  o.summary = std::to_string(configs) + " configurations, 2 canonical-coset runs";
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    std::string title;
    double limit_seconds;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "GL(2) coset counts", 10, criterion_1},
      {2, "classification", 60, criterion_2},
      {3, "finite-group statements", 300, criterion_3},
      {4, "operator identities", 600, criterion_4},
      {5, "localization", 600, criterion_5},
      {6, "finite comparison stages", 600, criterion_6},
      {7, "property suites", 600, criterion_7},
  };
  int failed = 0;
  for (const Criterion& c : criteria) {
    auto t0 = std::chrono::steady_clock::now();
    Outcome o = c.run();
    const double sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    int checks = 0, fails = 0;
    for (const Report& r : o.reports) {
      checks += r.count(report::Status::Pass) + r.count(report::Status::Fail);
      fails += r.count(report::Status::Fail);
      for (const auto& chk : r.checks) {
        if (chk.status != report::Status::Fail) continue;
        std::string config;
        for (const auto& [k, v] : r.config) config += (config.empty() ? "" : " ") + k + "=" + v;
        std::cerr << "  criterion " << c.id << " fail: [" << config << "] " << r.suite << " / " << chk.name << ": "
                  << chk.witness.substr(0, 300) << "\n";
      }
    }
    const bool in_time = sec < c.limit_seconds;
    const bool ok = fails == 0 && in_time;
    if (!ok) ++failed;
    std::cout << "criterion " << c.id << " (" << c.title << "): " << (ok ? "PASS" : "FAIL") << "  " << checks
              << " checks, " << fails << " failed, " << std::fixed << std::setprecision(1) << sec << " s (limit "
              << c.limit_seconds << " s)" << (in_time ? "" : " over time") << "; " << o.summary << std::endl;
  }
  return failed == 0 ? 0 : 1;
}
