#include "intentbench/corpus.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <unordered_set>

#include <json.hpp>

#include "intentbench/error.hpp"

namespace intentbench::corpus {

namespace {

using nlohmann::json;

std::string located(std::string_view source, std::size_t line, std::string_view what) {
  return std::string(source) + ":" + std::to_string(line) + ": " + std::string(what);
}

std::vector<std::string> string_list(const json& object, std::string_view key,
                                     std::string_view source, std::size_t line) {
  std::vector<std::string> out;
  auto it = object.find(key);
  if (it == object.end() || it->is_null()) return out;
  if (!it->is_array()) {
    throw Error(ErrorKind::Parse, located(source, line, std::string(key) + " must be an array"));
  }
  for (const auto& item : *it) {
    if (!item.is_string()) {
      throw Error(ErrorKind::Parse,
                  located(source, line, std::string(key) + " entries must be strings"));
    }
    out.push_back(item.get<std::string>());
  }
  return out;
}

bool blank(std::string_view line) {
  return std::all_of(line.begin(), line.end(),
                     [](unsigned char c) { return c == ' ' || c == '\t' || c == '\r'; });
}

json parse_line(const std::string& text, std::string_view source, std::size_t line) {
  try {
    json value = json::parse(text);
    if (!value.is_object()) {
      throw Error(ErrorKind::Parse, located(source, line, "expected a JSON object"));
    }
    return value;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Parse, located(source, line, e.what()));
  }
}

Turn parse_turn(const json& raw, std::size_t index, std::string_view source, std::size_t line) {
  if (!raw.is_object()) {
    throw Error(ErrorKind::Parse, located(source, line, "turn must be an object"));
  }
  Turn turn;
  turn.index = index;

  auto role = raw.find("speaker_role");
  if (role == raw.end() || !role->is_string()) {
    throw Error(ErrorKind::Parse, located(source, line, "turn missing speaker_role"));
  }
  const auto& role_name = role->get_ref<const std::string&>();
  if (role_name == "Agent") {
    turn.speaker_role = SpeakerRole::Agent;
  } else if (role_name == "Customer") {
    turn.speaker_role = SpeakerRole::Customer;
  } else {
    throw Error(ErrorKind::Parse, located(source, line, "unknown speaker_role '" + role_name + "'"));
  }

  auto utterance = raw.find("utterance");
  if (utterance == raw.end() || !utterance->is_string()) {
    throw Error(ErrorKind::Parse, located(source, line, "turn missing utterance"));
  }
  turn.utterance = utterance->get<std::string>();

  // DSTC11 releases spell the key "dialogue_acts".
  turn.dialog_acts = raw.contains("dialog_acts") ? string_list(raw, "dialog_acts", source, line)
                                                 : string_list(raw, "dialogue_acts", source, line);
  turn.intents = string_list(raw, "intents", source, line);
  return turn;
}

}  // namespace

std::string make_utterance_id(std::string_view dialogue_id, std::size_t turn_index) {
  std::string id(dialogue_id);
  id += '#';
  id += std::to_string(turn_index);
  return id;
}

std::pair<std::string, std::size_t> split_utterance_id(std::string_view utterance_id) {
  const auto hash = utterance_id.rfind('#');
  if (hash == std::string_view::npos || hash + 1 == utterance_id.size()) {
    throw Error(ErrorKind::Validation, "malformed utterance id '" + std::string(utterance_id) + "'");
  }
  std::size_t index = 0;
  const auto digits = utterance_id.substr(hash + 1);
  auto [end, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), index);
  if (ec != std::errc() || end != digits.data() + digits.size()) {
    throw Error(ErrorKind::Validation, "malformed utterance id '" + std::string(utterance_id) + "'");
  }
  return {std::string(utterance_id.substr(0, hash)), index};
}

std::vector<Dialogue> parse_transcripts(std::istream& in, std::string_view source) {
  std::vector<Dialogue> dialogues;
  std::unordered_set<std::string> seen;
  std::string text;
  std::size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    if (blank(text)) continue;
    const json record = parse_line(text, source, line);

    Dialogue dialogue;
    auto id = record.find("dialogue_id");
    if (id == record.end() || !id->is_string()) {
      throw Error(ErrorKind::Parse, located(source, line, "missing dialogue_id"));
    }
    dialogue.dialogue_id = id->get<std::string>();

    auto turns = record.find("turns");
    if (turns == record.end() || !turns->is_array()) {
      throw Error(ErrorKind::Parse, located(source, line, "missing turns array"));
    }
    if (turns->empty()) {
      throw Error(ErrorKind::Validation,
                  located(source, line, "dialogue '" + dialogue.dialogue_id + "' has no turns"));
    }
    dialogue.turns.reserve(turns->size());
    for (std::size_t i = 0; i < turns->size(); ++i) {
      dialogue.turns.push_back(parse_turn((*turns)[i], i, source, line));
    }

    if (!seen.insert(dialogue.dialogue_id).second) {
      throw Error(ErrorKind::Validation,
                  located(source, line, "duplicate dialogue_id '" + dialogue.dialogue_id + "'"));
    }
    dialogues.push_back(std::move(dialogue));
  }
  return dialogues;
}

std::vector<Dialogue> load_transcripts(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot read transcripts " + path.string());
  return parse_transcripts(in, path.string());
}

PredictedActs parse_predicted_acts(std::istream& in, std::string_view source) {
  PredictedActs acts;
  std::string text;
  std::size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    if (blank(text)) continue;
    const json record = parse_line(text, source, line);
    auto id = record.find("utterance_id");
    if (id == record.end() || !id->is_string()) {
      throw Error(ErrorKind::Parse, located(source, line, "missing utterance_id"));
    }
    auto key = id->get<std::string>();
    auto list = string_list(record, "dialog_acts", source, line);
    if (!acts.emplace(key, std::move(list)).second) {
      throw Error(ErrorKind::Validation, located(source, line, "duplicate utterance_id '" + key + "'"));
    }
  }
  return acts;
}

PredictedActs load_predicted_acts(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot read predicted acts " + path.string());
  return parse_predicted_acts(in, path.string());
}

std::vector<UtteranceRecord> select_intent_turns(std::span<const Dialogue> dialogues,
                                                 const ActSource& source,
                                                 const PredictedActs* predicted_acts) {
  if (source.act_name.empty()) throw Error(ErrorKind::Argument, "act name must be non-empty");

  static const std::vector<std::string> no_acts;
  std::vector<UtteranceRecord> records;
  for (const auto& dialogue : dialogues) {
    for (const auto& turn : dialogue.turns) {
      if (turn.speaker_role != SpeakerRole::Customer) continue;

      auto id = make_utterance_id(dialogue.dialogue_id, turn.index);
      const std::vector<std::string>* acts = &turn.dialog_acts;
      if (source.mode == ActMode::PredictedActs) {
        acts = &no_acts;
        if (predicted_acts != nullptr) {
          if (auto it = predicted_acts->find(id); it != predicted_acts->end()) acts = &it->second;
        }
      }
      if (std::find(acts->begin(), acts->end(), source.act_name) == acts->end()) continue;

      UtteranceRecord record;
      record.utterance_id = std::move(id);
      record.dialogue_id = dialogue.dialogue_id;
      record.turn_index = turn.index;
      record.text = turn.utterance;
      if (!turn.intents.empty()) record.reference_intent = turn.intents.front();
      records.push_back(std::move(record));
    }
  }
  return records;
}

std::vector<std::string> reference_labels(std::span<const UtteranceRecord> records) {
  std::vector<std::string> labels;
  labels.reserve(records.size());
  for (const auto& record : records) {
    if (!record.reference_intent) {
      throw Error(ErrorKind::Validation, "utterance " + record.utterance_id + " has no reference intent");
    }
    labels.push_back(*record.reference_intent);
  }
  return labels;
}

}  // namespace intentbench::corpus
