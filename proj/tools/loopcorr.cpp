// Command-line driver for the ensemble experiments.
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "loopcorr/error.hpp"
#include "loopcorr/harness.hpp"

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw loopcorr::Error(loopcorr::ErrorKind::IoError, "cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Loop-corrected Bethe free energy experiments on LDPC ensembles"};
  app.require_subcommand(1);
  // -h is the channel flag.
  app.set_help_flag("--help", "print help");

  // Flag values stay as text and go through the same setter as the config file.
  std::map<std::string, std::string> flags;
  std::string config_path;
  const std::vector<std::pair<std::string, std::string>> options{
      {"l", "variable degree"},
      {"r", "check degree"},
      {"n", "comma-separated block lengths"},
      {"p", "BSC crossover probability"},
      {"h", "half log-likelihood (instead of p)"},
      {"trials", "trials per block length"},
      {"seed", "master seed"},
      {"kappa", "expansion constant"},
      {"lambda", "expansion size fraction"},
      {"zeta0", "Brydges criterion radius"},
      {"out", "output file (stdout when omitted)"},
      {"format", "json or csv"},
      {"workers", "worker threads"},
  };

  const std::vector<std::pair<std::string, std::string>> commands{
      {"identity", "loop-series identity suite"},
      {"theorem1", "gap between ln Z / n and the Bethe free energy"},
      {"theorem2", "gap after the small-polymer correction"},
      {"bounds", "activity bounds, polymer bounds and the Brydges criterion"},
      {"census", "generalized-loop type census and large-polymer remainder"},
  };
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->set_help_flag("--help", "print help");
    for (const auto& [key, text] : options) {
      sub->add_option_function<std::string>(
          "--" + key, [&flags, key = key](const std::string& v) { flags[key] = v; }, text);
    }
    sub->add_option("--config", config_path, "flat key = value configuration file");
  }

  CLI11_PARSE(app, argc, argv);

  try {
    loopcorr::ExperimentConfig cfg;
    if (!config_path.empty()) cfg = loopcorr::ExperimentConfig::parse(read_file(config_path));
    cfg.command = loopcorr::parse_command(app.get_subcommands().front()->get_name());
    if (flags.count("p")) cfg.h.reset();
    if (flags.count("h")) cfg.p.reset();
    for (const auto& [key, value] : flags) cfg.set(key, value);

    const auto results = loopcorr::run_experiment(cfg);
    if (cfg.out.empty()) {
      std::cout << loopcorr::format_results(results, cfg.format);
    } else {
      loopcorr::write_results(results, cfg.format, cfg.out);
    }
  } catch (const loopcorr::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
