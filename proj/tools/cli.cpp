#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "dynkin/errors.hpp"
#include "dynkin/fixtures.hpp"
#include "dynkin/io.hpp"
#include "dynkin/scheme.hpp"
#include "dynkin/verify.hpp"

namespace dynkin::cli {

namespace {

struct Source {
  std::string game_path;
  std::string example;
};

void add_source(CLI::App* cmd, Source& src) {
  auto* game = cmd->add_option("--game", src.game_path, "Game document (JSON)");
  auto* example = cmd->add_option("--example", src.example, "Built-in example name");
  game->excludes(example);
  example->excludes(game);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_output(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw std::runtime_error("cannot write " + path);
  file << text;
}

GameSpec load_game(const Source& src) {
  if (src.game_path.empty() == src.example.empty()) {
    throw ValidationError("exactly one of --game or --example is required");
  }
  if (!src.example.empty()) {
    const auto& names = fixtures::example_names();
    if (std::find(names.begin(), names.end(), src.example) == names.end()) {
      throw ValidationError("unknown example \"" + src.example + "\"");
    }
    return fixtures::example_game(src.example);
  }
  return io::parse_game(read_file(src.game_path));
}

Rational parse_epsilon(const std::string& text) {
  try {
    Rational eps = Rational::parse(text);
    if (eps.sign() < 0) throw ValidationError("--epsilon must be non-negative");
    return eps;
  } catch (const std::invalid_argument& e) {
    throw ValidationError(std::string("--epsilon: ") + e.what());
  }
}

std::vector<int> parse_order(const std::string& text) {
  std::vector<int> order;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      std::size_t used = 0;
      order.push_back(std::stoi(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ValidationError("--order: expected comma-separated player numbers, got \"" + text + "\"");
    }
  }
  return order;
}

std::string dump(const io::Json& doc) { return doc.dump(2) + "\n"; }

int solve(const Source& src, const std::string& eps_text, const std::string& order_text, int max_rounds,
          const std::string& trace_path, const std::string& out_path, std::ostream& out, std::ostream& err) {
  const GameSpec spec = load_game(src);
  require_valid(spec, true);
  SchemeConfig config;
  config.epsilon = parse_epsilon(eps_text);
  if (!order_text.empty()) config.order = parse_order(order_text);
  config.max_rounds = max_rounds;
  try {
    config.order = resolve_order(spec, config);
  } catch (const std::invalid_argument& e) {
    throw ValidationError(std::string("--order: ") + e.what());
  }

  EquilibriumProfile eq;
  try {
    eq = run_scheme(spec, config);
  } catch (const NonConvergenceError& e) {
    err << "error: " << e.what() << "\n";
    io::Json partial;
    partial["error"] = e.what();
    partial["trace"] = io::trace_to_json(e.partial_trace());
    write_output(trace_path.empty() ? out_path : trace_path, dump(partial), out);
    return kNonConvergence;
  }
  const io::RunReport report = io::make_report(spec, eq, config.epsilon);
  if (!trace_path.empty()) write_output(trace_path, dump(io::trace_to_json(report.trace)), out);
  write_output(out_path, dump(io::report_to_json(spec, report, false)), out);
  if (!report.certificate.is_eps_nep) {
    err << "certificate failed: some player gains more than epsilon by deviating\n";
    return kNotCertified;
  }
  return kOk;
}

int verify(const Source& src, const std::string& profile_path, const std::string& eps_text, std::ostream& out,
           std::ostream& err) {
  const GameSpec spec = load_game(src);
  const Rational eps = parse_epsilon(eps_text);
  const StrategyProfile profile = io::parse_profile(read_file(profile_path), spec);
  const NepCertificate cert = certify(spec, profile, eps);
  out << dump(io::certificate_to_json(cert));
  if (!cert.is_eps_nep) {
    err << "not an epsilon-equilibrium at epsilon = " << eps.str() << "\n";
    return kNotCertified;
  }
  return kOk;
}

int enumerate(const Source& src, const std::string& eps_text, std::uint64_t cap, bool allow_empty,
              std::ostream& out, std::ostream& err) {
  const GameSpec spec = load_game(src);
  const Rational eps = parse_epsilon(eps_text);
  const auto found = find_all_eps_neps(spec, eps, kDefaultRuleCap, cap);
  io::Json doc;
  doc["epsilon"] = eps.str();
  doc["count"] = found.size();
  io::Json profiles = io::Json::array();
  for (const auto& [profile, cert] : found) {
    io::Json entry = io::profile_to_json(profile);
    entry["certificate"] = io::certificate_to_json(cert);
    profiles.push_back(std::move(entry));
  }
  doc["profiles"] = std::move(profiles);
  out << dump(doc);
  if (found.empty() && !allow_empty) {
    err << "no epsilon-equilibrium found at epsilon = " << eps.str() << "\n";
    return kNotCertified;
  }
  return kOk;
}

int example(const std::string& name, const std::string& out_path, std::ostream& out) {
  const auto& names = fixtures::example_names();
  if (std::find(names.begin(), names.end(), name) == names.end()) {
    throw ValidationError("unknown example \"" + name + "\"");
  }
  write_output(out_path, io::emit_game(fixtures::example_game(name), fixtures::example_description(name)), out);
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact epsilon-Nash equilibria for N-player Dynkin games on scenario trees", "dynkin"};
  app.require_subcommand(1);

  Source solve_src, verify_src, enum_src;
  std::string solve_eps = "0", order, trace_path, solve_out;
  int max_rounds = 0;
  auto* solve_cmd = app.add_subcommand("solve", "Run the circular scheme and certify the capped profile");
  add_source(solve_cmd, solve_src);
  solve_cmd->add_option("--epsilon", solve_eps, "Tolerance as p/q");
  solve_cmd->add_option("--order", order, "Visiting order, e.g. 2,3,1");
  solve_cmd->add_option("--max-rounds", max_rounds, "Round limit (default: the termination bound)")
      ->check(CLI::NonNegativeNumber);
  solve_cmd->add_option("--trace", trace_path, "Write the step trace to this file");
  solve_cmd->add_option("--out", solve_out, "Write the report here instead of stdout");

  std::string verify_eps = "0", profile_path;
  auto* verify_cmd = app.add_subcommand("verify", "Certify a strategy profile");
  add_source(verify_cmd, verify_src);
  verify_cmd->add_option("--profile", profile_path, "Profile document (JSON)")->required();
  verify_cmd->add_option("--epsilon", verify_eps, "Tolerance as p/q");

  std::string enum_eps = "0";
  std::uint64_t cap = kDefaultProfileCap;
  bool allow_empty = false;
  auto* enum_cmd = app.add_subcommand("enumerate", "List every epsilon-equilibrium by exhaustive search");
  add_source(enum_cmd, enum_src);
  enum_cmd->add_option("--epsilon", enum_eps, "Tolerance as p/q");
  enum_cmd->add_option("--cap", cap, "Maximum number of profiles to examine");
  enum_cmd->add_flag("--allow-empty", allow_empty, "Exit 0 even when nothing is found");

  std::string name, example_out;
  auto* example_cmd = app.add_subcommand("example", "Emit a built-in example game document");
  example_cmd->add_option("--name", name, "One of: paper-5-1, paper-5-3, counterexample-a, counterexample-b")
      ->required();
  example_cmd->add_option("--out", example_out, "Write the document here instead of stdout");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kValidation;
  }

  try {
    if (*solve_cmd) return solve(solve_src, solve_eps, order, max_rounds, trace_path, solve_out, out, err);
    if (*verify_cmd) return verify(verify_src, profile_path, verify_eps, out, err);
    if (*enum_cmd) return enumerate(enum_src, enum_eps, cap, allow_empty, out, err);
    if (*example_cmd) return example(name, example_out, out);
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    for (std::size_t k = 1; k < e.details().size(); ++k) err << "  " << e.details()[k] << "\n";
    return kValidation;
  } catch (const CapExceededError& e) {
    err << "error: " << e.what() << "\n";
    return kCapExceeded;
  } catch (const std::logic_error& e) {
    err << "internal error: " << e.what() << "\n";
    return kInternal;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kValidation;
  }
  return kValidation;
}

}  // namespace dynkin::cli
