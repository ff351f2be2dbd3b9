#include <fstream>
#include <sstream>

#include "json.hpp"
#include "selfprompt/errors.hpp"
#include "selfprompt/prompt.hpp"

namespace selfprompt {

namespace {

using nlohmann::json;

json index_array(const Index3& idx, int rank) {
  json arr = json::array();
  for (int a = 0; a < rank; ++a) arr.push_back(idx[a]);
  return arr;
}

Index3 parse_index(const json& arr, int rank, const char* what) {
  if (!arr.is_array() || static_cast<int>(arr.size()) != rank) {
    throw FormatError(std::string(what) + " must be an integer array of length " +
                      std::to_string(rank));
  }
  Index3 idx{};
  for (int a = 0; a < rank; ++a) {
    if (!arr[a].is_number_integer()) throw FormatError(std::string(what) + " entries must be integers");
    idx[a] = arr[a].get<std::int64_t>();
  }
  return idx;
}

const json& field(const json& obj, const char* key) {
  if (!obj.is_object() || !obj.contains(key)) {
    throw FormatError(std::string("prompt JSON missing \"") + key + "\"");
  }
  return obj.at(key);
}

}  // namespace

std::string prompts_to_json(const PromptDocument& doc, int indent) {
  const int rank = doc.mode == PromptMode::kSlice ? 2 : 3;
  json prompts = json::array();
  for (const auto& p : doc.prompts) {
    json entry;
    entry["class_id"] = p.class_id;
    entry["slice_index"] = p.slice_index ? json(*p.slice_index) : json(nullptr);
    entry["present"] = p.present;
    entry["box"] = {{"min", index_array(p.box.min, rank)}, {"max", index_array(p.box.max, rank)}};
    entry["point"] = {{"index", index_array(p.point.index, rank)},
                      {"sq_distance_mm2", p.point.sq_distance_mm2}};
    entry["mask_ref"] = p.mask_ref;
    prompts.push_back(std::move(entry));
  }
  json root;
  root["schema"] = kPromptSchema;
  root["mode"] = to_string(doc.mode);
  root["num_classes"] = doc.num_classes;
  root["prompts"] = std::move(prompts);
  return root.dump(indent);
}

PromptDocument prompts_from_json(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw FormatError(std::string("malformed prompt JSON: ") + e.what());
  }
  const auto& schema = field(root, "schema");
  if (!schema.is_string() || schema.get<std::string>() != kPromptSchema) {
    throw FormatError("unsupported prompt schema (expected \"selfprompt/1\")");
  }
  PromptDocument doc;
  const auto& mode = field(root, "mode");
  if (!mode.is_string()) throw FormatError("\"mode\" must be a string");
  doc.mode = parse_prompt_mode(mode.get<std::string>());
  const auto& k = field(root, "num_classes");
  if (!k.is_number_integer() || k.get<int>() < 1) {
    throw FormatError("\"num_classes\" must be a positive integer");
  }
  doc.num_classes = k.get<int>();
  const int rank = doc.mode == PromptMode::kSlice ? 2 : 3;

  const auto& prompts = field(root, "prompts");
  if (!prompts.is_array()) throw FormatError("\"prompts\" must be an array");
  for (const auto& entry : prompts) {
    PromptSet p;
    p.mode = doc.mode;
    const auto& cid = field(entry, "class_id");
    if (!cid.is_number_integer()) throw FormatError("\"class_id\" must be an integer");
    p.class_id = cid.get<int>();
    const auto& si = field(entry, "slice_index");
    if (si.is_null()) {
      p.slice_index = std::nullopt;
    } else if (si.is_number_unsigned()) {
      p.slice_index = si.get<std::size_t>();
    } else {
      throw FormatError("\"slice_index\" must be a non-negative integer or null");
    }
    const auto& present = field(entry, "present");
    if (!present.is_boolean()) throw FormatError("\"present\" must be a boolean");
    p.present = present.get<bool>();
    const auto& box = field(entry, "box");
    p.box.rank = rank;
    p.box.min = parse_index(field(box, "min"), rank, "box.min");
    p.box.max = parse_index(field(box, "max"), rank, "box.max");
    const auto& point = field(entry, "point");
    p.point.rank = rank;
    p.point.index = parse_index(field(point, "index"), rank, "point.index");
    const auto& dist = field(point, "sq_distance_mm2");
    if (!dist.is_number()) throw FormatError("\"sq_distance_mm2\" must be a number");
    p.point.sq_distance_mm2 = dist.get<double>();
    const auto& ref = field(entry, "mask_ref");
    if (!ref.is_string()) throw FormatError("\"mask_ref\" must be a string");
    p.mask_ref = ref.get<std::string>();
    doc.prompts.push_back(std::move(p));
  }
  return doc;
}

void write_prompts(const PromptDocument& doc, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << prompts_to_json(doc) << '\n';
  if (!out) throw IoError("write to '" + path.string() + "' failed");
}

PromptDocument read_prompts(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return prompts_from_json(buffer.str());
}

}  // namespace selfprompt
