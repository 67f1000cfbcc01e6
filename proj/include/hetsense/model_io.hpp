#pragma once

#include <filesystem>
#include <string>
#include <variant>

#include "hetsense/dmd.hpp"
#include "hetsense/online.hpp"

namespace hetsense {

inline constexpr const char* kLibraryVersion = "0.1.0";

/// Model and checkpoint container.
///
/// A directory holding `meta.json` plus one matrix file (binary matrix format,
/// see matrix_io.hpp) per array. Complex arrays are split into `<name>_re.bin`
/// and `<name>_im.bin`. meta.json carries "kind" (dmd_model, general_state or
/// longterm_state), "format_version", "library_version", "dt" and, for models,
/// "rank" and "ordering".
///
///   dmd_model       modes, eigenvalues, amplitudes (complex); svd_u, svd_sigma,
///                   svd_w (omitted when empty)
///   general_state   u, sigma, w, y; meta adds "policy" and "time_stride"
///   longterm_state  a, s, last_snapshot; meta adds "gamma"
void save_model(const std::filesystem::path& dir, const DmdModel& m);
DmdModel load_model(const std::filesystem::path& dir);

using OnlineState = std::variant<GeneralOnlineState, LongTermOnlineState>;

void save_state(const std::filesystem::path& dir, const OnlineState& st);
OnlineState load_state(const std::filesystem::path& dir);

/// "dmd_model", "general_state" or "longterm_state".
std::string container_kind(const std::filesystem::path& dir);

}  // namespace hetsense
