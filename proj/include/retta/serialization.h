// Copyright 2026 The RETTA Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef RETTA_SERIALIZATION_H_
#define RETTA_SERIALIZATION_H_

#include "json.hpp"
#include "retta/classify.h"
#include "retta/corpus.h"
#include "retta/pipeline.h"
#include "retta/registry.h"
#include "retta/rules.h"
#include "retta/topics.h"

// JSON encodings of the records exchanged over the API and kept in the
// project store. FromJson functions throw Error(kValidation) on bad input.
namespace retta::serialization {

using nlohmann::json;

json ContextToJson(const corpus::ContextSpec &spec);
corpus::ContextSpec ContextFromJson(const json &doc);

json RegionToJson(const registry::RegionSpec &region);
registry::RegionSpec RegionFromJson(const json &doc);

json ServiceToJson(const registry::ServiceDescriptor &service);
json SourceToJson(const registry::DataSourceDescriptor &source);
json FieldToJson(const registry::FieldDescriptor &field);

json RequirementToJson(const classify::Requirement &req);
classify::Requirement RequirementFromJson(const json &doc);

json TopicToJson(const topics::TopicSummary &topic);
topics::TopicSummary TopicFromJson(const json &doc);

json RuleToJson(const rules::AssociationRule &rule);
rules::AssociationRule RuleFromJson(const json &doc);

json RunConfigToJson(const pipeline::RunConfig &config);
// Missing keys keep their defaults.
pipeline::RunConfig RunConfigFromJson(const json &doc,
                                      const pipeline::RunConfig &defaults = {});

// Without timings; see TimingsToJson.
json ResultToJson(const pipeline::ElicitationResult &result);
pipeline::ElicitationResult ResultFromJson(const json &doc);
json TimingsToJson(const std::vector<pipeline::StageTiming> &timings);
std::vector<pipeline::StageTiming> TimingsFromJson(const json &doc);

// Project record without its result.
json ProjectToJson(const pipeline::Project &project);
pipeline::Project ProjectFromJson(const json &doc);

}  // namespace retta::serialization

#endif  // RETTA_SERIALIZATION_H_
