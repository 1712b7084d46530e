#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "declearn/lab.hpp"

namespace declearn {

// External formats use 1-indexed variables; the converters here translate.

nlohmann::json model_to_json(const ScoringModel& model);
ScoringModel model_from_json(const nlohmann::json& j);

nlohmann::json space_to_json(const OutputSpace& space);
OutputSpace space_from_json(const nlohmann::json& j);

nlohmann::json decomposition_to_json(const Decomposition& S);
Decomposition decomposition_from_json(const nlohmann::json& j);

nlohmann::json weights_to_json(const WeightVector& w);
WeightVector weights_from_json(const nlohmann::json& j);

nlohmann::json report_to_json(const TrainReport& report);
nlohmann::json metrics_to_json(const Metrics& metrics);
nlohmann::json verdict_to_json(const ExactnessVerdict& verdict);

// JSON-lines: one {"x": [[...]], "y": [...]} object per line.
std::string dataset_to_jsonl(const Dataset& dataset);
Dataset dataset_from_jsonl(const std::string& text);

void write_text_file(const std::filesystem::path& path, const std::string& text);
std::string read_text_file(const std::filesystem::path& path);
nlohmann::json read_json_file(const std::filesystem::path& path);

}  // namespace declearn
