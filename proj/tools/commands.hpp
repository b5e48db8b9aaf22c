#pragma once

#include "ctshift/config.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

namespace ctshift::cli {

struct GlobalFlags {
  std::optional<std::uint64_t> seed;   // --seed shadows [run] seed
  std::optional<std::string> out;      // --out shadows [run] out
  std::optional<int> threads;          // --threads shadows [run] threads
};

int cmd_train(const std::filesystem::path& config_path, const GlobalFlags& flags);
int cmd_quality_map(const std::filesystem::path& config_path, const GlobalFlags& flags);
int cmd_error_sweep(const std::filesystem::path& config_path, const GlobalFlags& flags);
int cmd_landscape(const std::filesystem::path& config_path, const GlobalFlags& flags);

/// Prints the full config schema with defaults.
void print_config_reference();

}  // namespace ctshift::cli
