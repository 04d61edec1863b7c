#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include <json.hpp>

#include "zeroml/automl.hpp"

namespace zeroml {

inline constexpr int kArtifactFormatVersion = 1;

/// Environment variable holding a Unix timestamp that replaces the artifact's
/// created_at, for byte-reproducible output.
inline constexpr const char* kTestEpochEnv = "ZEROML_TEST_EPOCH";

nlohmann::json report_to_json(const Report& r);
Report report_from_json(const nlohmann::json& j);

nlohmann::json schema_to_json(const FeatureSchema& s);
FeatureSchema schema_from_json(const nlohmann::json& j);

/// UTC ISO-8601 creation time, honouring ZEROML_TEST_EPOCH.
std::string artifact_timestamp();

/// Full artifact document. `created_at` defaults to artifact_timestamp().
nlohmann::json artifact_to_json(const TrainedModel& m, std::optional<std::string> created_at = std::nullopt);
/// Throws FormatError on an unknown format_version or inconsistent content.
TrainedModel artifact_from_json(const nlohmann::json& j);

/// Serialized artifact text (2-space indented JSON, sorted keys, trailing newline).
std::string artifact_text(const TrainedModel& m, std::optional<std::string> created_at = std::nullopt);

/// Throws IoError when the file cannot be written.
void save_artifact(const TrainedModel& m, const std::filesystem::path& path);
/// Throws IoError (unreadable) or FormatError (malformed; carries byte offset).
TrainedModel load_artifact(const std::filesystem::path& path);
TrainedModel parse_artifact(std::string_view text);

}  // namespace zeroml
