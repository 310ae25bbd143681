#pragma once

// Subcommand implementations. Each returns a process exit status:
// 0 success, 1 verification failure, 2 configuration error.

#include <functional>
#include <iosfwd>
#include <string>

#include "torusfold/config.hpp"
#include "torusfold/report.hpp"

namespace torusfold {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitConfig = 2;

BoxSpec box_from(const ExperimentConfig& cfg);
/// Explicit tau if given, else suggest_tau(box, tau_target).
FoldingSeq taus_from(const ExperimentConfig& cfg, const BoxSpec& box);
NormOptions norm_options(const ExperimentConfig& cfg);

struct RunResult {
  Json report;
  std::string csv;  // verify only
  bool all_passed = true;
};

RunResult run_verify(const ExperimentConfig& cfg);
RunResult run_lemmas(const ExperimentConfig& cfg);

int cmd_check_seq(const ExperimentConfig& cfg, std::ostream& out);
int cmd_fold(const ExperimentConfig& cfg, std::ostream& out);
int cmd_norm(const ExperimentConfig& cfg, std::ostream& out);
int cmd_lemmas(const ExperimentConfig& cfg, std::ostream& out);
int cmd_verify(const ExperimentConfig& cfg, std::ostream& out);
int cmd_suggest_tau(const ExperimentConfig& cfg, std::ostream& out);

/// Runs body; library errors become a message on err and kExitConfig.
int run_guarded(const std::function<int()>& body, std::ostream& err);

}  // namespace torusfold
