// Command-line front end: verify suites, act with operator expressions and
// solve for Whittaker vectors. Exit status: 0 all checks pass, 1 a check
// failed, 2 configuration or usage error.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "whittaker/harness.hpp"

namespace {

using namespace whittaker;

constexpr int kExitFail = 1;
constexpr int kExitConfig = 2;

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open params file '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& ex) {
    throw ConfigError("params file '" + path + "' is not valid JSON: " + ex.what());
  }
}

void print_report(const Report& r, bool pretty) {
  if (!pretty) {
    std::cout << Json(r).dump(2) << "\n";
    return;
  }
  std::size_t width = 0;
  for (const auto& c : r.checks) width = std::max(width, c.description.size());
  std::cout << "suite " << r.suite << " (seed " << r.seed << ")\n";
  for (const auto& c : r.checks) {
    char time[32];
    std::snprintf(time, sizeof time, "%8.3fs", c.wall_seconds);
    std::cout << (c.pass ? "  pass " : "  FAIL ") << time << "  " << c.description
              << std::string(width - c.description.size() + 2, ' ') << "[" << c.anchor << "]\n";
    if (!c.pass) std::cout << "         residual: " << c.residual.dump() << "\n";
  }
  std::cout << (r.all_pass() ? "all checks pass" : "some checks FAIL") << "\n";
}

void write_out(const std::string& path, const Report& r) {
  if (path.empty()) return;
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write report to '" + path + "'");
  out << Json(r).dump(2) << "\n";
}

RunConfig load(const std::string& params_path, const std::string& box_text,
               std::optional<std::uint64_t> seed) {
  RunConfig cfg = parse_config(read_json_file(params_path));
  for (const auto& w : config_warnings(cfg)) std::cerr << "warning: " << w << "\n";
  if (!box_text.empty()) cfg.box = parse_box(box_text);
  if (seed) cfg.seed = *seed;
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact computations in Whittaker modules over affine sl2"};
  app.require_subcommand(1);

  std::string params, box_text, out_path, suite, expr, target;
  std::uint64_t seed_value = 0;
  bool pretty = false;

  auto* verify = app.add_subcommand("verify", "run a verification suite");
  verify->add_option("--suite", suite, "suite name (see `suites`)")->required();
  verify->add_option("--params", params, "JSON config file")->required();
  verify->add_option("--box", box_text, "truncation box W,L");
  auto* seed_opt = verify->add_option("--seed", seed_value, "PRNG seed");
  verify->add_option("--out", out_path, "write the JSON report here");
  verify->add_flag("--pretty", pretty, "aligned plain text instead of JSON");

  auto* act = app.add_subcommand("act", "apply an operator expression");
  act->add_option("--expr", expr, "product of tokens, rightmost acts first")->required();
  act->add_option("--params", params, "JSON config file")->required();
  act->add_option("--target", target, "JSON basis label (default: the cyclic vector)");
  act->add_flag("--pretty", pretty, "print only the vector");

  auto* kernel = app.add_subcommand("kernel", "Whittaker vectors in the truncation box");
  kernel->add_option("--params", params, "JSON config file")->required();
  kernel->add_option("--box", box_text, "truncation box W,L");
  kernel->add_option("--out", out_path, "write the JSON report here");
  kernel->add_flag("--pretty", pretty, "aligned plain text instead of JSON");

  auto* suites = app.add_subcommand("suites", "list suite names");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (suites->parsed()) {
      for (const auto& s : suite_registry()) std::cout << s.name << "  " << s.summary << "\n";
      return 0;
    }
    if (verify->parsed()) {
      std::optional<std::uint64_t> seed;
      if (seed_opt->count()) seed = seed_value;
      RunConfig cfg = load(params, box_text, seed);
      ModuleHandle handle(cfg);
      Report r = run_suite(handle, suite, cfg.box, cfg.seed);
      write_out(out_path, r);
      print_report(r, pretty);
      return r.all_pass() ? 0 : kExitFail;
    }
    if (act->parsed()) {
      RunConfig cfg = load(params, "", std::nullopt);
      ModuleHandle handle(cfg);
      std::optional<Json> label;
      if (!target.empty()) {
        try {
          label = Json::parse(target);
        } catch (const Json::parse_error& ex) {
          throw ConfigError(std::string("target is not valid JSON: ") + ex.what());
        }
      }
      ActResult res = run_act(handle, expr, label);
      if (pretty) {
        std::cout << res.text << "\n";
      } else {
        std::cout << Json{{"expr", expr}, {"vector", res.vector}, {"text", res.text}}.dump(2)
                  << "\n";
      }
      return 0;
    }
    if (kernel->parsed()) {
      RunConfig cfg = load(params, box_text, std::nullopt);
      ModuleHandle handle(cfg);
      Report r = run_kernel(handle, cfg.box);
      write_out(out_path, r);
      if (pretty) {
        const auto& res = r.checks.front().residual;
        std::cout << "kernel dimension " << res.at("dimension") << "\n";
        for (const auto& v : res.at("basis_text")) std::cout << "  " << v.get<std::string>() << "\n";
      } else {
        std::cout << Json(r).dump(2) << "\n";
      }
      return 0;
    }
  } catch (const ParseError& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return kExitConfig;
  } catch (const UnsupportedToken& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return kExitConfig;
  } catch (const ConfigError& ex) {
    std::cerr << "configuration error: " << ex.what() << "\n";
    return kExitConfig;
  } catch (const std::domain_error& ex) {
    std::cerr << "precondition violated: " << ex.what() << "\n";
    return kExitConfig;
  }
  return kExitConfig;
}
