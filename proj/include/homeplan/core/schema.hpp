#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>

#include "homeplan/core/trajectory.hpp"
#include "homeplan/core/types.hpp"

namespace homeplan {

// On-disk documents are JSON. The canonical form is two-space indented,
// keys sorted, one trailing newline; serialize() always emits it, so
// serialize(parse(x)) == x for canonical input.

Task parse_task_file(std::string_view bytes);
std::string serialize_task(const Task& task);

/// Standalone keypath file: `{ "<task id>": [[{action, target}, ...], ...], ... }`.
std::map<std::string, KeypathSet> parse_keypath_file(std::string_view bytes);
std::string serialize_keypath_file(const std::map<std::string, KeypathSet>& keypaths);

Trajectory parse_trajectory_log(std::string_view bytes);
std::string serialize_trajectory(const Trajectory& trajectory);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view bytes);

/// Every `*.json` task in `dir`. A `keypaths.json` in the same directory
/// supplies keypaths for task files that omit them. Sorted by id.
std::vector<Task> load_task_dir(const std::filesystem::path& dir);

}  // namespace homeplan
