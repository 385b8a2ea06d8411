#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "mobo/stream.hpp"

namespace mobo {

struct ReplayMismatch {
  std::string topic;
  std::uint64_t offset = 0;
  std::string detail;
};

struct ReplayReport {
  bool ok = false;
  std::optional<ReplayMismatch> mismatch;
  int replayed_requests = 0;
};

// Re-drives the controller offline from the recorded results of a manifest's
// transcript and verifies that every regenerated request matches the
// recorded one byte-for-byte. Needs no experiment client and no network.
// Throws IntegrityError / ConfigError when the manifest or its files are
// unreadable.
ReplayReport replay_manifest(const std::filesystem::path& manifest_path);

}  // namespace mobo
