#pragma once

#include <json.hpp>

#include <initializer_list>
#include <string>

#include "ieegdec/classifiers.hpp"
#include "ieegdec/error.hpp"

namespace ieegdec::codec {

nlohmann::json model_to_value(const TrainedModel& model);
TrainedModel model_from_value(const nlohmann::json& value);

nlohmann::json vector_to_value(const Eigen::VectorXd& v);
Eigen::VectorXd vector_from_value(const nlohmann::json& value);

}  // namespace ieegdec::codec

namespace ieegdec::codec {

// Rejects keys outside `allowed`; `code` selects the error raised.
void require_known_keys(const nlohmann::json& object, std::initializer_list<const char*> allowed,
                        const std::string& context, ErrorCode code);

nlohmann::json hyperparameters_to_value(const Hyperparameters& hp);
// Missing keys keep their defaults; unknown keys are rejected with `code`.
Hyperparameters hyperparameters_from_value(const nlohmann::json& value, ErrorCode code);

// Serialise with every floating-point number printed using 17 significant
// digits. Output is deterministic for equal values.
std::string dump_fixed_precision(const nlohmann::json& value, int indent = 2);

}  // namespace ieegdec::codec
