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

#include "retta/serialization.h"

#include <set>
#include <string>

#include "retta/error.h"

namespace retta::serialization {
namespace {

using corpus::SourceKind;

[[noreturn]] void Invalid(const std::string &message) {
  throw Error(ErrorCode::kValidation, message);
}

template <typename Fn>
auto Guard(const char *what, Fn &&fn) {
  try {
    return fn();
  } catch (const json::exception &e) {
    Invalid(std::string("bad ") + what + ": " + e.what());
  }
}

Timestamp TimeFromJson(const json &value, const char *field) {
  if (!value.is_string()) Invalid(std::string(field) + " must be an ISO-8601 string");
  auto ts = ParseIso8601(value.get<std::string>());
  if (!ts) Invalid(std::string(field) + " is not an ISO-8601 UTC time");
  return *ts;
}

SourceKind KindFromJson(const json &value) {
  std::string name = value.get<std::string>();
  auto kind = corpus::ParseSourceKind(name);
  if (!kind) Invalid("unknown source kind \"" + name + "\"");
  return *kind;
}

json OptionalSize(const std::optional<std::size_t> &value) {
  return value ? json(*value) : json(nullptr);
}

}  // namespace

json ContextToJson(const corpus::ContextSpec &spec) {
  json doc = json::object();
  doc["keywords"] = spec.keywords;
  doc["hashtags"] = spec.hashtags;
  doc["language"] = spec.language;
  doc["max_documents"] = OptionalSize(spec.max_documents);
  doc["date_range"] = spec.date_range
                          ? json{{"start", FormatIso8601(spec.date_range->start)},
                                 {"end", FormatIso8601(spec.date_range->end)}}
                          : json(nullptr);
  doc["geo_area"] = spec.geo_filter
                        ? json{{"lat", spec.geo_filter->center.latitude},
                               {"lon", spec.geo_filter->center.longitude},
                               {"radius_km", spec.geo_filter->radius_km}}
                        : json(nullptr);
  return doc;
}

corpus::ContextSpec ContextFromJson(const json &doc) {
  return Guard("context", [&] {
    if (!doc.is_object()) Invalid("context must be an object");
    corpus::ContextSpec spec;
    if (doc.contains("keywords") && !doc["keywords"].is_null()) {
      spec.keywords = doc["keywords"].get<std::vector<std::string>>();
    }
    if (doc.contains("hashtags") && !doc["hashtags"].is_null()) {
      spec.hashtags = doc["hashtags"].get<std::vector<std::string>>();
    }
    if (doc.contains("language") && !doc["language"].is_null()) {
      spec.language = doc["language"].get<std::string>();
    }
    if (doc.contains("max_documents") && !doc["max_documents"].is_null()) {
      const json &value = doc["max_documents"];
      if (!value.is_number_integer() || value.get<long long>() < 1) {
        Invalid("max_documents must be a positive integer");
      }
      spec.max_documents = value.get<std::size_t>();
    }
    if (doc.contains("date_range") && !doc["date_range"].is_null()) {
      const json &range = doc["date_range"];
      spec.date_range = corpus::DateRange{TimeFromJson(range.at("start"), "date_range.start"),
                                          TimeFromJson(range.at("end"), "date_range.end")};
    }
    if (doc.contains("geo_area") && !doc["geo_area"].is_null()) {
      const json &area = doc["geo_area"];
      spec.geo_filter = corpus::GeoFilter{
          {area.at("lat").get<double>(), area.at("lon").get<double>()},
          area.at("radius_km").get<double>()};
    }
    corpus::ValidateContext(spec);
    return spec;
  });
}

json RegionToJson(const registry::RegionSpec &region) {
  json sources = json::array();
  for (SourceKind kind : region.declared_available_sources) {
    sources.push_back(corpus::SourceKindName(kind));
  }
  const registry::BoundingBox &box = region.bounding_box;
  return json{{"name", region.name},
              {"bounding_box",
               {{"min_lat", box.min_lat},
                {"min_lon", box.min_lon},
                {"max_lat", box.max_lat},
                {"max_lon", box.max_lon}}},
              {"available_sources", sources}};
}

registry::RegionSpec RegionFromJson(const json &doc) {
  return Guard("region", [&] {
    if (!doc.is_object()) Invalid("region must be an object");
    registry::RegionSpec region;
    region.name = doc.value("name", std::string());
    if (doc.contains("bounding_box")) {
      const json &box = doc["bounding_box"];
      region.bounding_box = {box.at("min_lat").get<double>(), box.at("min_lon").get<double>(),
                             box.at("max_lat").get<double>(), box.at("max_lon").get<double>()};
    }
    for (const json &kind : doc.value("available_sources", json::array())) {
      region.declared_available_sources.insert(KindFromJson(kind));
    }
    registry::ValidateRegion(region);
    return region;
  });
}

json FieldToJson(const registry::FieldDescriptor &field) {
  return json{{"name", field.name},
              {"value_kind", registry::ValueKindName(field.value_kind)},
              {"required", field.required}};
}

json ServiceToJson(const registry::ServiceDescriptor &service) {
  json required = json::array();
  for (SourceKind kind : service.required_source_kinds) {
    required.push_back(corpus::SourceKindName(kind));
  }
  return json{{"id", registry::ServiceIdName(service.id)},
              {"display_name", service.display_name},
              {"required_sources", required},
              {"min_documents", service.min_documents}};
}

json SourceToJson(const registry::DataSourceDescriptor &source) {
  json fields = json::array();
  for (const auto &field : source.context_fields) fields.push_back(FieldToJson(field));
  return json{{"kind", corpus::SourceKindName(source.kind)},
              {"display_name", source.display_name},
              {"available_in_region", source.available_in_region},
              {"context_fields", fields}};
}

json RequirementToJson(const classify::Requirement &req) {
  return json{
      {"id", req.id},
      {"text", req.text},
      {"kind", classify::RequirementKindName(req.kind)},
      {"nfr_category",
       req.nfr_category ? json(classify::CategoryName(*req.nfr_category)) : json(nullptr)},
      {"confidence", req.confidence},
      {"provenance",
       {{"doc_ids", req.provenance.doc_ids},
        {"topic", req.provenance.topic_index ? json(*req.provenance.topic_index)
                                             : json(nullptr)}}},
      {"service", registry::ServiceIdName(req.service_id)},
      {"keywords", req.keywords}};
}

classify::Requirement RequirementFromJson(const json &doc) {
  return Guard("requirement", [&] {
    classify::Requirement req;
    req.id = doc.at("id").get<std::string>();
    req.text = doc.at("text").get<std::string>();
    auto kind = classify::ParseRequirementKind(doc.at("kind").get<std::string>());
    if (!kind) Invalid("unknown requirement kind");
    req.kind = *kind;
    if (!doc.at("nfr_category").is_null()) {
      auto category = classify::ParseCategory(doc["nfr_category"].get<std::string>());
      if (!category) Invalid("unknown NFR category");
      req.nfr_category = *category;
    }
    req.confidence = doc.at("confidence").get<double>();
    const json &provenance = doc.at("provenance");
    req.provenance.doc_ids = provenance.at("doc_ids").get<std::vector<std::string>>();
    if (!provenance.at("topic").is_null()) {
      req.provenance.topic_index = provenance["topic"].get<std::size_t>();
    }
    auto service = registry::ParseServiceId(doc.at("service").get<std::string>());
    if (!service) Invalid("unknown service");
    req.service_id = *service;
    req.keywords = doc.at("keywords").get<std::vector<std::string>>();
    return req;
  });
}

json TopicToJson(const topics::TopicSummary &topic) {
  json terms = json::array();
  for (const auto &[term, weight] : topic.top_terms) terms.push_back({term, weight});
  return json{{"topic_index", topic.topic_index},
              {"top_terms", terms},
              {"representative_doc_ids", topic.representative_doc_ids},
              {"coherence", topic.coherence ? json(*topic.coherence) : json(nullptr)}};
}

topics::TopicSummary TopicFromJson(const json &doc) {
  return Guard("topic", [&] {
    topics::TopicSummary topic;
    topic.topic_index = doc.at("topic_index").get<std::size_t>();
    for (const json &pair : doc.at("top_terms")) {
      topic.top_terms.emplace_back(pair.at(0).get<std::string>(), pair.at(1).get<double>());
    }
    topic.representative_doc_ids =
        doc.at("representative_doc_ids").get<std::vector<std::string>>();
    if (!doc.at("coherence").is_null()) topic.coherence = doc["coherence"].get<double>();
    return topic;
  });
}

json RuleToJson(const rules::AssociationRule &rule) {
  return json{{"antecedent", rule.antecedent},
              {"consequent", rule.consequent},
              {"support", rule.support},
              {"confidence", rule.confidence},
              {"lift", rule.lift}};
}

rules::AssociationRule RuleFromJson(const json &doc) {
  return Guard("rule", [&] {
    return rules::AssociationRule{doc.at("antecedent").get<rules::ItemSet>(),
                                  doc.at("consequent").get<rules::ItemSet>(),
                                  doc.at("support").get<double>(),
                                  doc.at("confidence").get<double>(),
                                  doc.at("lift").get<double>()};
  });
}

json RunConfigToJson(const pipeline::RunConfig &config) {
  return json{
      {"seed", config.seed},
      {"num_topics", config.num_topics},
      {"alpha", config.alpha ? json(*config.alpha) : json(nullptr)},
      {"beta", config.beta},
      {"iterations", config.iterations},
      {"smoothing", config.smoothing},
      {"default_gamma", config.default_gamma},
      {"min_support", config.mining.min_support},
      {"min_confidence", config.mining.min_confidence},
      {"max_itemset_size", config.mining.max_itemset_size},
      {"pooling", config.pooling ? json(topics::PoolingName(*config.pooling)) : json("auto")},
      {"candidates_per_topic", config.candidates_per_topic},
      {"top_terms", config.top_terms},
      {"min_term_frequency", config.min_term_frequency}};
}

pipeline::RunConfig RunConfigFromJson(const json &doc, const pipeline::RunConfig &defaults) {
  return Guard("run config", [&] {
    if (!doc.is_object()) Invalid("run config must be an object");
    static const std::set<std::string> kKeys = {
        "seed", "num_topics", "alpha", "beta", "iterations", "smoothing", "default_gamma",
        "min_support", "min_confidence", "max_itemset_size", "pooling",
        "candidates_per_topic", "top_terms", "min_term_frequency"};
    for (const auto &[key, value] : doc.items()) {
      if (!kKeys.contains(key)) Invalid("unknown run config key \"" + key + "\"");
    }
    pipeline::RunConfig config = defaults;
    auto has = [&](const char *key) { return doc.contains(key) && !doc[key].is_null(); };
    if (has("seed")) config.seed = doc["seed"].get<std::uint64_t>();
    if (has("num_topics")) config.num_topics = doc["num_topics"].get<std::size_t>();
    if (doc.contains("alpha")) {
      config.alpha = doc["alpha"].is_null() ? std::nullopt
                                            : std::optional<double>(doc["alpha"].get<double>());
    }
    if (has("beta")) config.beta = doc["beta"].get<double>();
    if (has("iterations")) config.iterations = doc["iterations"].get<std::size_t>();
    if (has("smoothing")) config.smoothing = doc["smoothing"].get<double>();
    if (has("default_gamma")) config.default_gamma = doc["default_gamma"].get<double>();
    if (has("min_support")) config.mining.min_support = doc["min_support"].get<double>();
    if (has("min_confidence")) {
      config.mining.min_confidence = doc["min_confidence"].get<double>();
    }
    if (has("max_itemset_size")) {
      config.mining.max_itemset_size = doc["max_itemset_size"].get<std::size_t>();
    }
    if (has("pooling")) {
      std::string name = doc["pooling"].get<std::string>();
      if (name == "auto") {
        config.pooling.reset();
      } else {
        auto pooling = topics::ParsePooling(name);
        if (!pooling) Invalid("unknown pooling strategy \"" + name + "\"");
        config.pooling = *pooling;
      }
    }
    if (has("candidates_per_topic")) {
      config.candidates_per_topic = doc["candidates_per_topic"].get<std::size_t>();
    }
    if (has("top_terms")) config.top_terms = doc["top_terms"].get<std::size_t>();
    if (has("min_term_frequency")) {
      config.min_term_frequency = doc["min_term_frequency"].get<std::size_t>();
    }
    if (config.num_topics < 1) Invalid("num_topics must be at least 1");
    if (config.iterations < 1) Invalid("iterations must be at least 1");
    if (config.alpha && !(*config.alpha > 0)) Invalid("alpha must be positive");
    if (!(config.beta > 0)) Invalid("beta must be positive");
    if (!(config.smoothing > 0)) Invalid("smoothing must be positive");
    if (!(config.default_gamma >= 1)) Invalid("default_gamma must be at least 1");
    if (config.top_terms < 1) Invalid("top_terms must be at least 1");
    if (config.min_term_frequency < 1) Invalid("min_term_frequency must be at least 1");
    return config;
  });
}

json ResultToJson(const pipeline::ElicitationResult &result) {
  json doc = json::object();
  doc["requirements"] = json::array();
  for (const auto &req : result.requirements) doc["requirements"].push_back(RequirementToJson(req));
  doc["topics"] = json::array();
  for (const auto &topic : result.topics) doc["topics"].push_back(TopicToJson(topic));
  doc["rules"] = json::array();
  for (const auto &rule : result.rules) doc["rules"].push_back(RuleToJson(rule));
  doc["rejected"] = json::array();
  for (const auto &r : result.rejected) {
    doc["rejected"].push_back({{"doc_id", r.doc_id}, {"reason", r.reason}});
  }
  doc["run_config"] = RunConfigToJson(result.run_config);
  return doc;
}

pipeline::ElicitationResult ResultFromJson(const json &doc) {
  return Guard("result", [&] {
    pipeline::ElicitationResult result;
    for (const json &item : doc.at("requirements")) {
      result.requirements.push_back(RequirementFromJson(item));
    }
    for (const json &item : doc.at("topics")) result.topics.push_back(TopicFromJson(item));
    for (const json &item : doc.at("rules")) result.rules.push_back(RuleFromJson(item));
    for (const json &item : doc.at("rejected")) {
      result.rejected.push_back(
          {item.at("doc_id").get<std::string>(), item.at("reason").get<std::string>()});
    }
    result.run_config = RunConfigFromJson(doc.at("run_config"));
    return result;
  });
}

json TimingsToJson(const std::vector<pipeline::StageTiming> &timings) {
  json doc = json::array();
  for (const auto &t : timings) doc.push_back({{"stage", t.stage}, {"millis", t.millis}});
  return doc;
}

std::vector<pipeline::StageTiming> TimingsFromJson(const json &doc) {
  return Guard("timings", [&] {
    std::vector<pipeline::StageTiming> timings;
    for (const json &item : doc) {
      timings.push_back({item.at("stage").get<std::string>(), item.at("millis").get<double>()});
    }
    return timings;
  });
}

json ProjectToJson(const pipeline::Project &project) {
  json sources = json::array();
  for (SourceKind kind : project.selected_sources) sources.push_back(corpus::SourceKindName(kind));
  json context = json::object();
  for (const auto &[kind, spec] : project.context) {
    context[std::string(corpus::SourceKindName(kind))] = ContextToJson(spec);
  }
  return json{
      {"id", project.id},
      {"region", RegionToJson(project.region)},
      {"state", pipeline::StateName(project.state)},
      {"service_id", project.service_id ? json(registry::ServiceIdName(*project.service_id))
                                        : json(nullptr)},
      {"selected_sources", sources},
      {"context", context},
      {"created_at", FormatIso8601(project.created_at)},
      {"updated_at", FormatIso8601(project.updated_at)},
      {"failure_reason", project.failure_reason ? json(*project.failure_reason) : json(nullptr)}};
}

pipeline::Project ProjectFromJson(const json &doc) {
  return Guard("project", [&] {
    pipeline::Project project;
    project.id = doc.at("id").get<std::string>();
    project.region = RegionFromJson(doc.at("region"));
    auto state = pipeline::ParseState(doc.at("state").get<std::string>());
    if (!state) Invalid("unknown project state");
    project.state = *state;
    if (!doc.at("service_id").is_null()) {
      auto service = registry::ParseServiceId(doc["service_id"].get<std::string>());
      if (!service) Invalid("unknown service");
      project.service_id = *service;
    }
    for (const json &kind : doc.at("selected_sources")) {
      project.selected_sources.push_back(KindFromJson(kind));
    }
    for (const auto &[name, spec] : doc.at("context").items()) {
      auto kind = corpus::ParseSourceKind(name);
      if (!kind) Invalid("unknown source kind \"" + name + "\"");
      project.context[*kind] = ContextFromJson(spec);
    }
    project.created_at = TimeFromJson(doc.at("created_at"), "created_at");
    project.updated_at = TimeFromJson(doc.at("updated_at"), "updated_at");
    if (!doc.at("failure_reason").is_null()) {
      project.failure_reason = doc["failure_reason"].get<std::string>();
    }
    return project;
  });
}

}  // namespace retta::serialization
