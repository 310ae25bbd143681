#include <iostream>
#include <map>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "torusfold/commands.hpp"
#include "torusfold/config.hpp"

namespace {

struct Flags {
  std::string config;
  std::optional<std::string> seed, eps, draws, cap, cb, out, csv, a, tau, target, poly,
      distribution, mc_samples;
};

void add_flags(CLI::App* app, Flags& f) {
  app->add_option("--config", f.config, "Configuration file (key = value)");
  app->add_option("--seed", f.seed, "Base random seed");
  app->add_option("--eps", f.eps, "Relative error budget for certified norms");
  app->add_option("--draws", f.draws, "Number of random draws");
  app->add_option("--cap", f.cap, "Box enumeration cap");
  app->add_option("--cb", f.cb, "Constant in the slab bound: 2pi or paper")
      ->check(CLI::IsMember({"2pi", "paper"}));
  app->add_option("--out", f.out, "Report / output path");
  app->add_option("--csv", f.csv, "CSV table path (verify)");
  app->add_option("--a", f.a, "Box bounds, e.g. 1,1,2");
  app->add_option("--tau", f.tau, "Folding sequence, e.g. 1,5,40");
  app->add_option("--target", f.target, "Target tail sum for suggest_tau");
  app->add_option("--poly", f.poly, "Polynomial literal file");
  app->add_option("--distribution", f.distribution, "gaussian, unimodular, sparse or single");
  app->add_option("--mc-samples", f.mc_samples, "Monte Carlo cross-check samples (norm)");
}

torusfold::ExperimentConfig build_config(const Flags& f) {
  auto cfg = f.config.empty() ? torusfold::ExperimentConfig{} : torusfold::load_config(f.config);
  const std::map<std::string, const std::optional<std::string>*> overrides = {
      {"seed", &f.seed}, {"eps", &f.eps},   {"draws", &f.draws},         {"cap", &f.cap},
      {"cb", &f.cb},     {"out", &f.out},   {"csv", &f.csv},             {"a", &f.a},
      {"tau", &f.tau},   {"poly", &f.poly}, {"tau_target", &f.target},   {"distribution", &f.distribution},
      {"mc_samples", &f.mc_samples}};
  for (const auto& [key, value] : overrides) {
    if (value->has_value()) torusfold::set_config_value(cfg, key, **value);
  }
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"torusfold: frequency folding and certified L1 norm checks"};
  app.require_subcommand(1);

  using Command = int (*)(const torusfold::ExperimentConfig&, std::ostream&);
  const std::map<std::string, std::pair<std::string, Command>> commands = {
      {"check-seq", {"Admissibility and injectivity of a folding sequence", torusfold::cmd_check_seq}},
      {"fold", {"Fold a box spectrum or a polynomial file", torusfold::cmd_fold}},
      {"norm", {"Certified L1 norm of a polynomial file", torusfold::cmd_norm}},
      {"lemmas", {"Randomised checks of the slab, lifting and modulation estimates", torusfold::cmd_lemmas}},
      {"verify", {"Telescoping-chain verification over random polynomials", torusfold::cmd_verify}},
      {"suggest-tau", {"Suggest an admissible folding sequence", torusfold::cmd_suggest_tau}},
  };

  Flags flags;
  std::map<CLI::App*, Command> dispatch;
  for (const auto& [name, entry] : commands) {
    CLI::App* sub = app.add_subcommand(name, entry.first);
    add_flags(sub, flags);
    dispatch[sub] = entry.second;
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : torusfold::kExitConfig;
  }

  for (const auto& [sub, command] : dispatch) {
    if (sub->parsed()) {
      return torusfold::run_guarded([&] { return command(build_config(flags), std::cout); },
                                    std::cerr);
    }
  }
  return torusfold::kExitConfig;
}
