#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "tp/cli_app.hpp"
#include "tp/errors.hpp"

namespace {

struct Args {
  std::string input;
  std::string output;
  std::string csv_dir;
  bool strict = false;
  int threads = 1;
};

void add_common(CLI::App* sub, Args& a) {
  sub->add_option("-i,--input", a.input, "problem file (JSON)")->required()->check(CLI::ExistingFile);
  sub->add_option("-o,--output", a.output, "report file (JSON); stdout when omitted");
  sub->add_option("--csv-dir", a.csv_dir, "directory for sweep CSV files");
  sub->add_flag("--strict", a.strict, "reject unknown fields instead of warning");
  sub->add_option("--threads", a.threads, "requests evaluated concurrently")->check(CLI::PositiveNumber);
}

int run(const Args& a, const tp::PipelineOptions& base) {
  std::ifstream in(a.input, std::ios::binary);
  std::stringstream buf;
  buf << in.rdbuf();
  tp::PipelineOptions opts = base;
  opts.strict = a.strict;
  opts.threads = a.threads;
  tp::PipelineResult res;
  try {
    res = tp::run_pipeline(buf.str(), opts);
  } catch (const tp::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  if (!a.csv_dir.empty()) {
    try {
      for (auto& p : tp::emit_sweep_csv(res.report, a.csv_dir, &res.warnings)) std::cerr << "wrote " << p << "\n";
    } catch (const tp::Error& e) {
      std::cerr << "error: " << e.what() << "\n";
      return 2;
    }
  }
  for (auto& w : res.warnings) std::cerr << "warning: " << w << "\n";
  std::string text = res.report.dump(2) + "\n";
  if (a.output.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(a.output, std::ios::binary);
    out << text;
    if (!out) {
      std::cerr << "error: cannot write " << a.output << "\n";
      return 2;
    }
  }
  if (res.report.contains("error")) std::cerr << "error: " << res.report["error"]["detail"].get<std::string>() << "\n";
  return res.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Tropical period asymptotics: triangulations, symbolic periods, limit Hodge data, numeric checks"};
  app.require_subcommand(1);
  Args args;
  struct Mode {
    const char* name;
    const char* help;
    tp::PipelineOptions opts;
  };
  std::vector<Mode> modes{
      {"triangulate", "triangulation and dual complex only", {false, 1, {}, false}},
      {"periods", "sphere, torus and leading-term requests", {false, 1, {"sphere", "torus", "leading"}, true}},
      {"hodge", "limit Hodge data requests", {false, 1, {"hodge"}, true}},
      {"verify", "numeric verification sweeps", {false, 1, {"verify"}, true}},
      {"all", "every request", {false, 1, {}, true}},
  };
  std::vector<CLI::App*> subs;
  for (auto& m : modes) {
    auto* sub = app.add_subcommand(m.name, m.help);
    add_common(sub, args);
    subs.push_back(sub);
  }
  CLI11_PARSE(app, argc, argv);
  for (std::size_t i = 0; i < modes.size(); ++i)
    if (subs[i]->parsed()) return run(args, modes[i].opts);
  return 2;
}
