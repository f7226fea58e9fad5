#pragma once

#include "answersum/pipeline.hpp"
#include "json.hpp"

namespace answersum {

nlohmann::json settings_to_json(const PipelineSettings& s);
nlohmann::json summary_to_json_value(const SummaryResult& r);

}  // namespace answersum
