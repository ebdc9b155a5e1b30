// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "idemrdm/density_matrix.hpp"
#include "idemrdm/report.hpp"

namespace idemrdm::cli {

enum ExitCode : int { kPass = 0, kVerificationFailure = 1, kUsageError = 2 };

struct CommandResult {
  int exit_code = kUsageError;
  std::optional<Report> report;
};

/// Runs one command. `args` excludes the program name. Output goes to `out`,
/// diagnostics to `err`.
CommandResult run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Worker threads: hardware concurrency capped by IDEMRDM_THREADS.
std::size_t worker_count();

/// Serialized form used by `rdm --format json`.
nlohmann::ordered_json density_matrix_to_json(const DensityMatrix& rho);
DensityMatrix density_matrix_from_json(const nlohmann::json& doc);

}  // namespace idemrdm::cli
