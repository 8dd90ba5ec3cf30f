#pragma once

#include "fraclab/config.hpp"
#include "fraclab/hardy.hpp"
#include "fraclab/measures.hpp"

#include <memory>
#include <optional>
#include <string>

namespace fraclab::experiment {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUnstable = 1;
inline constexpr int kExitConfigInvalid = 2;
inline constexpr int kExitBudget = 3;

/// Resolved experiment inputs: the optional IFS, its working discretization
/// with the density applied, and the dimension parameter alpha.
struct BuiltMeasure {
  std::optional<measures::IFSMeasure> ifs;
  std::shared_ptr<measures::WeightedMeasure> weighted;
  double alpha = 0.0;
};

BuiltMeasure build_measure(const config::ExperimentConfig& cfg);

/// Assembles the verdict setup for the configured theorem, preferring the
/// factorized cylinder transform for constant-density IFS measures.
hardy::HardySetup build_setup(const config::ExperimentConfig& cfg,
                              const BuiltMeasure& built);

/// Runs one subcommand (dimension | geometry | fourier | asymptotics |
/// hardy | verify | all), writes artifacts under cfg.out_dir, and returns
/// the process exit code. All failures are mapped to exit codes here.
int run(const config::ExperimentConfig& cfg, const std::string& command);

}  // namespace fraclab::experiment
