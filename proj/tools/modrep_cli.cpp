// Command-line harness for the verification suites.
#include <atomic>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "modrep/verify.hpp"

using namespace modrep;
using report::Report;

namespace {

struct Options {
  int p = 2;
  int n = 2;
  std::string levi = "all";
  std::string rep = "all";
  std::string s = "both";
  int depth = 1;
  uint64_t seed = 1;
  std::string format = "json";
  int jobs = 1;
  std::string out;
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::vector<int> parse_ints(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    try {
      size_t used = 0;
      out.push_back(std::stoi(item, &used));
      if (used != item.size()) throw UsageError("not an integer: " + item);
    } catch (const std::logic_error&) {
      throw UsageError("not an integer: " + item);
    }
  }
  return out;
}

std::vector<finred::RootSet> parse_levi(const std::string& text, int n) {
  std::vector<finred::RootSet> out;
  if (text == "all") {
    for (finred::RootSet J : finred::all_subsets(n))
      if (J != finred::full_roots(n)) out.push_back(J);
    return out;
  }
  finred::RootSet J = 0;
  if (text != "none" && text != "{}") {
    for (int i : parse_ints(text)) {
      if (i < 1 || i >= n) throw UsageError("simple root index out of range: " + std::to_string(i));
      J |= 1u << (i - 1);
    }
  }
  if (J == finred::full_roots(n)) throw UsageError("the Levi must be proper");
  return {J};
}

std::vector<std::vector<int>> parse_s(const std::string& text, int n, finred::RootSet J) {
  if (text == "both") return {local::default_s(n, J), verify::shifted_s(n, J)};
  if (text == "default") return {local::default_s(n, J)};
  if (text == "shifted") return {verify::shifted_s(n, J)};
  auto s = parse_ints(text);
  if (static_cast<int>(s.size()) != n) throw UsageError("--s needs " + std::to_string(n) + " exponents");
  return {s};
}

// sym:r,det:m is Sym^r tensor det^m with r < p.
std::vector<int> parse_rep(const std::string& text, const std::vector<finred::IrreducibleData>& table, int n,
                           int p) {
  std::vector<int> out;
  if (text == "all") {
    for (size_t i = 0; i < table.size(); ++i) out.push_back(static_cast<int>(i));
    return out;
  }
  const int mod = std::max(1, p - 1);
  auto wrap = [&](int c) { return ((c % mod) + mod) % mod; };
  if (text == "trivial") return {finred::find_by_parameters(table, std::vector<int>(n, 0), finred::full_roots(n))};
  if (text == "steinberg") return {finred::find_by_parameters(table, std::vector<int>(n, 0), 0)};
  if (!text.empty() && std::all_of(text.begin(), text.end(), ::isdigit)) {
    int idx = std::stoi(text);
    if (idx >= static_cast<int>(table.size())) throw UsageError("representation index out of range");
    return {idx};
  }
  int r = 0, m = 0;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto colon = item.find(':');
    if (colon == std::string::npos) throw UsageError("unknown representation selector: " + text);
    std::string name = item.substr(0, colon);
    int value = parse_ints(item.substr(colon + 1)).at(0);
    if (name == "sym") r = value;
    else if (name == "det") m = value;
    else throw UsageError("unknown representation selector: " + text);
  }
  if (r < 0 || r >= p) throw UsageError("sym degree must lie in [0, p)");
  std::vector<int> psi(n, wrap(m));
  psi[0] = wrap(r + m);
  finred::RootSet dv = finred::full_roots(n);
  if (r > 0) dv &= ~1u;
  return {finred::find_by_parameters(table, psi, dv)};
}

std::vector<Report> run_pool(const std::vector<std::function<std::vector<Report>()>>& tasks, int jobs) {
  std::vector<std::vector<Report>> results(tasks.size());
  std::atomic<size_t> next{0};
  auto worker = [&] {
    for (size_t i = next++; i < tasks.size(); i = next++) results[i] = tasks[i]();
  };
  std::vector<std::thread> pool;
  for (int j = 1; j < std::max(1, jobs); ++j) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  std::vector<Report> out;
  for (auto& r : results) out.insert(out.end(), r.begin(), r.end());
  return out;
}

void validate(const Options& o) {
  if (o.p != 2 && o.p != 3 && o.p != 5 && o.p != 7) throw UsageError("p must be a prime at most 7");
  if (o.n < 2 || o.n > 3) throw UsageError("n must be 2 or 3");
  if (o.depth < 0 || o.depth > 4) throw UsageError("depth must lie in [0, 4]");
  if (o.jobs < 1) throw UsageError("jobs must be positive");
  if (o.format != "json" && o.format != "tsv") throw UsageError("format must be json or tsv");
}

using Suite = std::function<std::vector<Report>(const hecke::SatakeContext&, const Options&)>;

std::vector<Report> per_configuration(const Options& o, const Suite& suite) {
  auto group = finred::build_gl(o.n, o.p);
  auto table = finred::classify_all(group, o.seed);
  std::vector<std::function<std::vector<Report>()>> tasks;
  for (int idx : parse_rep(o.rep, table, o.n, o.p))
    for (finred::RootSet J : parse_levi(o.levi, o.n))
      for (const auto& s : parse_s(o.s, o.n, J)) {
        auto ctx = std::make_shared<hecke::SatakeContext>(hecke::make_context(table[idx], J, s));
        tasks.push_back([ctx, &o, suite] { return suite(*ctx, o); });
      }
  return run_pool(tasks, o.jobs);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Verification harness for Hecke operators of GL(n) over F_p((t))"};
  app.require_subcommand(1);
  app.fallthrough();
  Options o;
  app.add_option("--p", o.p, "prime (2, 3, 5 or 7)");
  app.add_option("--n", o.n, "rank (2 or 3)");
  app.add_option("--levi", o.levi, "simple roots of the Levi, e.g. 1 or 1,2; none for the torus; all");
  app.add_option("--rep", o.rep, "all, trivial, steinberg, sym:r,det:m or a table index");
  app.add_option("--s", o.s, "exponents of s, e.g. 1,0; default, shifted or both");
  app.add_option("--depth", o.depth, "depth of the finite stages (n_power for gl2-remark)");
  app.add_option("--seed", o.seed, "random seed");
  app.add_option("--format", o.format, "json or tsv");
  app.add_option("--jobs", o.jobs, "worker threads");
  app.add_option("--out", o.out, "output file (default stdout)");

  auto* classify = app.add_subcommand("classify", "irreducible table with regularity flags");
  auto* finite = app.add_subcommand("finite", "finite-group statements over every V and proper J");
  auto* relations = app.add_subcommand("relations", "operator identities and finite comparison stages");
  auto* satake = app.add_subcommand("satake", "localization and duality of S'");
  auto* properties = app.add_subcommand("properties", "randomized algebraic properties");
  auto* remark = app.add_subcommand("gl2-remark", "coset counts n_s(t) for GL(2)");

  CLI11_PARSE(app, argc, argv);

  std::vector<Report> reports;
  try {
    validate(o);
    if (classify->parsed()) {
      reports.push_back(verify::verify_classification(finred::build_gl(o.n, o.p), o.seed));
    } else if (finite->parsed()) {
      auto group = finred::build_gl(o.n, o.p);
      reports.push_back(verify::verify_finite_statements(group, finred::classify_all(group, o.seed)));
    } else if (relations->parsed()) {
      reports = per_configuration(o, [](const hecke::SatakeContext& ctx, const Options& opt) {
        return std::vector<Report>{verify::verify_prop_xi(ctx, opt.seed), verify::verify_main_stage(ctx, opt.depth)};
      });
    } else if (satake->parsed()) {
      reports = per_configuration(o, [](const hecke::SatakeContext& ctx, const Options& opt) {
        return std::vector<Report>{verify::verify_localization(ctx, opt.depth), verify::verify_duality(ctx, opt.seed)};
      });
    } else if (properties->parsed()) {
      reports = per_configuration(o, [](const hecke::SatakeContext& ctx, const Options& opt) {
        return std::vector<Report>{verify::verify_properties(ctx, opt.seed, {})};
      });
      reports.push_back(verify::verify_canonical_invariance(o.n, o.p, o.seed, 200));
    } else if (remark->parsed()) {
      if (o.n != 2) throw UsageError("gl2-remark needs n = 2");
      if (o.depth < 1 || o.depth > 3) throw UsageError("n_power (--depth) must lie in [1, 3]");
      reports.push_back(verify::gl2_remark_table(o.p, o.depth));
    }
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  const std::string text = o.format == "json" ? report::to_json(reports) : report::to_tsv(reports);
  if (o.out.empty()) {
    std::cout << text;
  } else {
    std::ofstream f(o.out);
    if (!f) {
      std::cerr << "error: cannot write " << o.out << "\n";
      return 2;
    }
    f << text;
  }
  for (const Report& r : reports)
    if (r.failed()) return 1;
  return 0;
}
