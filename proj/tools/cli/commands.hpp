// Copyright The magbloch Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef MAGBLOCH_CLI_COMMANDS_HPP
#define MAGBLOCH_CLI_COMMANDS_HPP

#include <array>
#include <optional>
#include <ostream>
#include <string>
#include <vector>
#include <nlohmann/json.hpp>
#include <magbloch/grid.hpp>

namespace magbloch::cli
{

struct RunRequest
{
  std::string command;  // validate | bands | scan | pencil | crosscheck
  std::string config_path;
  std::optional<std::string> out_dir;
  std::optional<std::array<int, 3>> grid;
  std::optional<GridMode> mode;
};

struct TaskStatus
{
  std::string name;
  bool ok = true;
  std::string message;
};

struct RunManifest
{
  std::string command;
  std::string config_path;
  std::string config_hash;
  std::string started_at, finished_at;
  std::vector<TaskStatus> tasks;
  std::vector<std::string> outputs;

  bool Ok() const;
  nlohmann::json ToJson() const;
};

// Exit codes: 0 success, 1 at least one task failed, 2 rejected input (nothing computed).
int Run(const RunRequest &request, std::ostream &out, std::ostream &err);

}  // namespace magbloch::cli

#endif  // MAGBLOCH_CLI_COMMANDS_HPP
