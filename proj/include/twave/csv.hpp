#pragma once

// Plain-text artifacts: shortest round-trip number formatting, trajectory and
// kernel tables with a one-line metadata header, atomic file replacement.

#include <filesystem>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "twave/integrator.hpp"
#include "twave/kernel.hpp"

namespace twave {

/// Shortest decimal string that parses back to exactly `x`.
std::string format_double(double x);

using Metadata = std::vector<std::pair<std::string, std::string>>;

/// "# key=value key=value ..." line, without the trailing newline.
std::string metadata_line(const Metadata& meta);

Metadata trajectory_metadata(const Trajectory& traj);

/// Metadata line, header xi,phi,psi,dalpha,h,energy_residual, one row per node.
std::string trajectory_csv(const Trajectory& traj);

/// Metadata line, header eta,v,v_prime,v_second, one row per evaluation.
std::string kernel_csv(std::span<const KernelEval> rows, double alpha);

/// Writes to a sibling temporary file and renames it over `path`.
void write_atomic(const std::filesystem::path& path, const std::string& content);

}  // namespace twave
