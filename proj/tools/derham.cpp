// derham: batch verification, dimension tables and basis export for the
// commuting exact sequence families.
//
//   derham verify --element pyramid --family 2 --k 1 --report json
//   derham table  --element cube --k 0..2
//   derham basis  --element square --family 2 --k 0 --out basis.txt
//
// Exit codes: 0 all verdicts pass, 1 some verdict failed, 2 usage/IO error.
// DERHAM_JOBS caps the number of parallel verification jobs.

#include <atomic>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "derham/export.hpp"
#include "derham/runner.hpp"

namespace {

using namespace derham;

struct Job {
  std::shared_ptr<const ReferenceElement> element;
  int family;
  int k;
};

std::optional<ElementKind> parse_element(const std::string& name) {
  for (ElementKind k : {ElementKind::Interval, ElementKind::Triangle, ElementKind::Square,
                        ElementKind::Polygon, ElementKind::Tet, ElementKind::Cube,
                        ElementKind::Prism, ElementKind::Pyramid})
    if (kind_name(k) == name) return k;
  return std::nullopt;
}

std::vector<int> families_of(ElementKind k) {
  switch (k) {
    case ElementKind::Interval: return {1};
    case ElementKind::Triangle:
    case ElementKind::Polygon:
    case ElementKind::Tet: return {1, 2};
    default: return {1, 2, 3, 4};
  }
}

// `--k 1` or `--k 0..2`
std::pair<int, int> parse_krange(const std::string& s) {
  auto dots = s.find("..");
  if (dots == std::string::npos) {
    int k = std::stoi(s);
    return {k, k};
  }
  return {std::stoi(s.substr(0, dots)), std::stoi(s.substr(dots + 2))};
}

unsigned job_cap() {
  if (const char* env = std::getenv("DERHAM_JOBS")) {
    long n = std::strtol(env, nullptr, 10);
    if (n >= 1) return static_cast<unsigned>(n);
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw ? hw : 1;
}

template <typename F>
void parallel_over(std::size_t n, F&& body) {
  const unsigned threads = std::min<std::size_t>(job_cap(), n);
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t)
    pool.emplace_back([&] {
      for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) body(i);
    });
  for (auto& th : pool) th.join();
}

struct Config {
  std::string element;
  int family = 0;  // 0 = all
  std::string krange = "0..2";
  std::string polygon_file;
  std::string report = "text";
  std::uint64_t seed = 1;
  std::string out;
};

std::vector<Job> collect_jobs(const Config& cfg) {
  std::vector<Job> jobs;
  std::vector<ElementKind> kinds;
  if (cfg.element.empty()) {
    kinds = {ElementKind::Interval, ElementKind::Triangle, ElementKind::Square,
             ElementKind::Tet,      ElementKind::Cube,     ElementKind::Prism,
             ElementKind::Pyramid};
    if (!cfg.polygon_file.empty()) kinds.push_back(ElementKind::Polygon);
  } else {
    auto k = parse_element(cfg.element);
    if (!k) throw std::runtime_error("unknown element: " + cfg.element);
    kinds = {*k};
  }
  auto [klo, khi] = parse_krange(cfg.krange);
  if (klo < 0 || khi < klo) throw std::runtime_error("bad k range: " + cfg.krange);
  for (ElementKind kind : kinds) {
    std::shared_ptr<const ReferenceElement> K;
    if (kind == ElementKind::Polygon) {
      if (cfg.polygon_file.empty())
        throw std::runtime_error("polygon element needs --polygon-vertices");
      K = std::make_shared<const ReferenceElement>(read_polygon_file(cfg.polygon_file));
    } else {
      K = std::make_shared<const ReferenceElement>(make_reference(kind));
    }
    for (int fam : families_of(kind)) {
      if (cfg.family && fam != cfg.family) continue;
      for (int k = klo; k <= khi; ++k) jobs.push_back({K, fam, k});
    }
  }
  if (cfg.family) {
    bool any = false;
    for (const auto& j : jobs) any = any || j.family == cfg.family;
    if (!any) throw std::runtime_error("family not valid for element");
  }
  return jobs;
}

std::ostream& open_out(const Config& cfg, std::ofstream& file) {
  if (cfg.out.empty()) return std::cout;
  file.open(cfg.out);
  if (!file) throw std::runtime_error("cannot open output file " + cfg.out);
  return file;
}

int cmd_verify(const Config& cfg) {
  std::vector<Job> jobs = collect_jobs(cfg);
  std::vector<RunOutcome> outcomes(jobs.size());
  std::vector<std::string> errors(jobs.size());
  parallel_over(jobs.size(), [&](std::size_t i) {
    try {
      SequenceSpec seq = build_sequence(jobs[i].element, jobs[i].family, jobs[i].k);
      RunOptions opt;
      opt.seed = cfg.seed;
      // pyramid commuting systems are kept to low degree by default
      opt.run_commuting =
          !(jobs[i].element->kind == ElementKind::Pyramid && jobs[i].k >= 2);
      outcomes[i] = run_verification(seq, opt);
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  });

  bool all_pass = true;
  std::ofstream file;
  std::ostream& os = open_out(cfg, file);
  nlohmann::json jarr = nlohmann::json::array();
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    if (!errors[i].empty()) {
      all_pass = false;
      if (cfg.report == "json")
        jarr.push_back({{"element", kind_name(jobs[i].element->kind)},
                        {"family", jobs[i].family},
                        {"k", jobs[i].k},
                        {"error", errors[i]}});
      else
        os << kind_name(jobs[i].element->kind) << " family " << jobs[i].family << " k="
           << jobs[i].k << ": ERROR " << errors[i] << "\n";
      continue;
    }
    all_pass = all_pass && outcomes[i].pass();
    if (cfg.report == "json")
      jarr.push_back(emit_report(outcomes[i].result));
    else
      os << render_text(outcomes[i].result) << "\n";
  }
  if (cfg.report == "json") os << jarr.dump(2) << "\n";
  return all_pass ? 0 : 1;
}

int cmd_table(const Config& cfg) {
  std::vector<Job> jobs = collect_jobs(cfg);
  struct Row {
    std::string text;
  };
  std::vector<Row> rows(jobs.size());
  parallel_over(jobs.size(), [&](std::size_t i) {
    std::ostringstream os;
    try {
      SequenceSpec seq = build_sequence(jobs[i].element, jobs[i].family, jobs[i].k);
      os << kind_name(jobs[i].element->kind) << "\t" << jobs[i].family << "\t" << jobs[i].k
         << "\t";
      for (std::size_t s = 0; s < seq.slots.size(); ++s)
        os << (s ? "," : "") << seq.slots[s].dim();
      os << "\t" << seq.delta_H.dim() << "\t" << seq.delta_E.dim() << "\t";
      if (seq.dim == 3)
        os << m_index(seq).def_form;
      else
        os << "-";
    } catch (const std::exception& e) {
      os << kind_name(jobs[i].element->kind) << "\t" << jobs[i].family << "\t" << jobs[i].k
         << "\tERROR: " << e.what();
    }
    rows[i].text = os.str();
  });
  std::ofstream file;
  std::ostream& os = open_out(cfg, file);
  os << "element\tfamily\tk\tdims\tdeltaH\tdeltaE\tmIndex\n";
  for (const auto& r : rows) os << r.text << "\n";
  return 0;
}

int cmd_basis(const Config& cfg) {
  std::vector<Job> jobs = collect_jobs(cfg);
  std::ofstream file;
  std::ostream& os = open_out(cfg, file);
  static const char* slot_names3[] = {"H", "E", "V", "W"};
  static const char* slot_names2[] = {"H", "E", "W"};
  static const char* slot_names1[] = {"H", "W"};
  for (const auto& job : jobs) {
    SequenceSpec seq = build_sequence(job.element, job.family, job.k);
    os << "# " << kind_name(job.element->kind) << " family " << job.family << " k=" << job.k
       << "\n";
    const char** names = seq.dim == 3 ? slot_names3 : seq.dim == 2 ? slot_names2 : slot_names1;
    for (std::size_t s = 0; s < seq.slots.size(); ++s) {
      const FunctionSpace basis = reduced(seq.slots[s]);
      os << "[" << names[s] << "] dim=" << basis.dim() << "\n";
      for (const auto& f : basis.basis()) os << to_grammar(f) << "\n";
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact verification of commuting exact sequences on reference elements"};
  app.require_subcommand(1);

  Config cfg;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--element", cfg.element,
                    "interval|triangle|square|polygon|tet|cube|prism|pyramid");
    sub->add_option("--family", cfg.family, "family index (default: all valid)");
    sub->add_option("--k", cfg.krange, "degree k or range a..b (default 0..2)");
    sub->add_option("--polygon-vertices", cfg.polygon_file,
                    "vertex file for polygon elements (x y per line, rationals p/q)");
    sub->add_option("--report", cfg.report, "text|json")->check(CLI::IsMember({"text", "json"}));
    sub->add_option("--seed", cfg.seed, "seed for randomized commuting inputs");
    sub->add_option("--out", cfg.out, "output path (default stdout)");
  };
  CLI::App* verify = app.add_subcommand("verify", "run the verification pipeline");
  CLI::App* table = app.add_subcommand("table", "print dimension/M-index table");
  CLI::App* basis = app.add_subcommand("basis", "export slot bases");
  add_common(verify);
  add_common(table);
  add_common(basis);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (verify->parsed()) return cmd_verify(cfg);
    if (table->parsed()) return cmd_table(cfg);
    if (basis->parsed()) return cmd_basis(cfg);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
