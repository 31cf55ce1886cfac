#pragma once

#include <iosfwd>

#include "config.hpp"

namespace hillspec::cli {

enum ExitCode { kPass = 0, kAssertionFailed = 1, kUsageError = 2 };

// Each command writes its files into cfg.out and returns an exit code.
int cmd_spectrum(const ExperimentConfig& cfg, std::ostream& log);
int cmd_reduce(const ExperimentConfig& cfg, std::ostream& log);
int cmd_flow(const ExperimentConfig& cfg, std::ostream& log);
int cmd_verify(const ExperimentConfig& cfg, std::ostream& log);

// Quotes a CSV field when it holds a comma, quote or line break.
std::string csv_field(const std::string& s);
std::string csv_number(double v);

}  // namespace hillspec::cli
