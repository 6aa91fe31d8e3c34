#include "dsf/io.hpp"

#include <fstream>
#include <unordered_set>

#include "dsf/error.hpp"

namespace dsf::io {

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write " + path);
  return out;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path);
  return in;
}

template <typename Fn>
void for_each_json_line(const std::string& path, Fn&& fn) {
  auto in = open_in(path);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto where = path + ":" + std::to_string(line_no);
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw DataError(where + ": invalid JSON: " + e.what());
    }
    if (!j.is_object()) throw DataError(where + ": expected a JSON object");
    fn(j, where);
  }
}

std::string string_field(const nlohmann::json& j, const char* key, const std::string& where,
                         bool required) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) {
    if (required) throw DataError(where + ": missing field \"" + key + "\"");
    return {};
  }
  if (!it->is_string()) throw DataError(where + ": field \"" + key + "\" must be a string");
  return it->get<std::string>();
}

}  // namespace

ordered_json to_json(const LabeledExample& e) {
  ordered_json j;
  j["id"] = e.id;
  j["text"] = e.text;
  j["label"] = to_string(e.label);
  j["part"] = to_string(e.part);
  j["topic"] = e.topic;
  j["target_surface"] = e.target_surface;
  j["source_sentence_id"] = e.source_sentence_id;
  j["trigger"] = e.trigger ? ordered_json(*e.trigger) : ordered_json(nullptr);
  return j;
}

LabeledExample example_from_json(const nlohmann::json& j, const std::string& where) {
  LabeledExample e;
  e.id = string_field(j, "id", where, true);
  if (e.id.empty()) throw DataError(where + ": empty example id");
  e.text = string_field(j, "text", where, true);
  const auto label = string_field(j, "label", where, true);
  auto l = parse_label(label);
  if (!l) throw DataError(where + ": unknown label '" + label + "'");
  e.label = *l;
  const auto part = string_field(j, "part", where, false);
  if (part.empty()) {
    e.part = Part::benchmark;
  } else if (auto p = parse_part(part)) {
    e.part = *p;
  } else {
    throw DataError(where + ": unknown part '" + part + "'");
  }
  e.topic = string_field(j, "topic", where, false);
  e.target_surface = string_field(j, "target_surface", where, false);
  e.source_sentence_id = string_field(j, "source_sentence_id", where, false);
  if (auto it = j.find("trigger"); it != j.end() && !it->is_null()) {
    e.trigger = string_field(j, "trigger", where, true);
  }
  return e;
}

void write_example(std::ostream& out, const LabeledExample& e) {
  out << to_json(e).dump(-1, ' ', false, nlohmann::json::error_handler_t::replace) << '\n';
}

void write_examples(const std::string& path, std::span<const LabeledExample> examples) {
  auto out = open_out(path);
  for (const auto& e : examples) write_example(out, e);
  if (!out) throw DataError("write failed: " + path);
}

std::vector<LabeledExample> read_examples(const std::string& path) {
  std::vector<LabeledExample> out;
  for_each_json_line(path, [&](const nlohmann::json& j, const std::string& where) {
    out.push_back(example_from_json(j, where));
  });
  return out;
}

void write_sentence(std::ostream& out, const Sentence& s) {
  ordered_json j;
  j["id"] = s.id;
  j["doc_id"] = s.doc_id;
  j["text"] = s.text;
  j["start"] = s.span.start;
  j["end"] = s.span.end;
  out << j.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace) << '\n';
}

std::vector<Sentence> read_sentences(const std::string& path, const TextConfig& cfg) {
  std::vector<Sentence> out;
  for_each_json_line(path, [&](const nlohmann::json& j, const std::string& where) {
    auto s = make_sentence(string_field(j, "id", where, true), string_field(j, "text", where, true),
                           cfg);
    s.doc_id = string_field(j, "doc_id", where, false);
    if (s.doc_id.empty()) s.doc_id = s.id;
    if (auto it = j.find("start"); it != j.end() && it->is_number_unsigned()) {
      s.span.start = it->get<std::size_t>();
      s.span.end = s.span.start + s.text.size();
    }
    if (auto it = j.find("end"); it != j.end() && it->is_number_unsigned()) {
      s.span.end = it->get<std::size_t>();
    }
    out.push_back(std::move(s));
  });
  return out;
}

ordered_json to_json(const StagePlan& plan) {
  ordered_json j;
  j["description"] = plan.description;
  j["stages"] = ordered_json::array();
  for (const auto& s : plan.stages) {
    ordered_json st;
    st["name"] = s.name;
    st["dataset_path"] = s.dataset_path;
    st["freeze_before"] = s.freeze_before;
    st["size"] = s.size;
    j["stages"].push_back(std::move(st));
  }
  return j;
}

StagePlan plan_from_json(const nlohmann::json& j) {
  StagePlan plan;
  try {
    plan.description = j.at("description").get<std::string>();
    for (const auto& st : j.at("stages")) {
      Stage s;
      s.name = st.at("name").get<std::string>();
      s.dataset_path = st.at("dataset_path").get<std::string>();
      s.freeze_before = st.at("freeze_before").get<bool>();
      if (st.contains("size")) s.size = st.at("size").get<std::size_t>();
      plan.stages.push_back(std::move(s));
    }
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("malformed stage plan: ") + e.what());
  }
  if (plan.stages.empty()) throw DataError("stage plan has no stages");
  if (plan.stages.front().freeze_before) {
    throw DataError("first stage of a plan cannot freeze weights");
  }
  return plan;
}

void write_plan(const std::string& path, const StagePlan& plan) {
  write_text(path, to_json(plan).dump(2));
}

StagePlan read_plan(const std::string& path) {
  auto in = open_in(path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw DataError(path + ": invalid JSON: " + e.what());
  }
  return plan_from_json(j);
}

ordered_json to_json(const MetricsReport& r, const ConfusionCounts& c) {
  ordered_json j;
  j["accuracy"] = r.accuracy;
  j["f1_macro"] = r.f1_macro;
  j["f1_pm_macro"] = r.f1_pm_macro;
  j["f1_pm_micro"] = r.f1_pm_micro;
  j["count"] = c.total();
  ordered_json m = ordered_json::object();
  for (auto g : kLabels) {
    ordered_json row = ordered_json::object();
    for (auto p : kLabels) row[std::string(to_string(p))] = c.at(g, p);
    m[std::string(to_string(g))] = std::move(row);
  }
  j["confusion"] = std::move(m);
  return j;
}

std::unordered_map<std::string, Label> read_predictions(const std::string& path) {
  std::unordered_map<std::string, Label> out;
  for_each_json_line(path, [&](const nlohmann::json& j, const std::string& where) {
    auto id = string_field(j, "id", where, true);
    const auto label = string_field(j, "label", where, true);
    auto l = parse_label(label);
    if (!l) throw DataError(where + ": unknown label '" + label + "'");
    if (!out.emplace(id, *l).second) throw DataError(where + ": duplicate prediction for " + id);
  });
  return out;
}

ConfusionCounts join_and_count(const std::vector<LabeledExample>& gold,
                               const std::unordered_map<std::string, Label>& pred) {
  ConfusionCounts c;
  std::unordered_set<std::string_view> seen;
  for (const auto& g : gold) {
    if (!seen.insert(g.id).second) throw DataError("duplicate gold id " + g.id);
    auto it = pred.find(g.id);
    if (it == pred.end()) throw DataError("no prediction for gold id " + g.id);
    ++c.at(g.label, it->second);
  }
  for (const auto& [id, label] : pred) {
    if (!seen.count(id)) throw DataError("prediction for unknown id " + id);
  }
  return c;
}

void write_text(const std::string& path, const std::string& contents) {
  auto out = open_out(path);
  out << contents;
  if (contents.empty() || contents.back() != '\n') out << '\n';
  if (!out) throw DataError("write failed: " + path);
}

std::size_t count_lines(const std::string& path) {
  auto in = open_in(path);
  std::size_t n = 0;
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") != std::string::npos) ++n;
  }
  return n;
}

}  // namespace dsf::io
