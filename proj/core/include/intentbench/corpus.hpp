#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace intentbench::corpus {

enum class SpeakerRole { Agent, Customer };

struct Turn {
  std::size_t index = 0;
  SpeakerRole speaker_role = SpeakerRole::Customer;
  std::string utterance;
  std::vector<std::string> dialog_acts;
  std::vector<std::string> intents;
};

struct Dialogue {
  std::string dialogue_id;
  std::vector<Turn> turns;
};

/// One clustering unit: a customer turn selected for intent clustering.
struct UtteranceRecord {
  std::string utterance_id;
  std::string dialogue_id;
  std::size_t turn_index = 0;
  std::string text;
  std::optional<std::string> reference_intent;
};

enum class ActMode { GoldActs, PredictedActs };

struct ActSource {
  ActMode mode = ActMode::GoldActs;
  std::string act_name = "InformIntent";
};

/// Predicted dialog acts keyed by utterance id.
using PredictedActs = std::unordered_map<std::string, std::vector<std::string>>;

/// "<dialogue_id>#<turn_index>"
std::string make_utterance_id(std::string_view dialogue_id, std::size_t turn_index);

/// Inverse of make_utterance_id; splits on the last '#'.
std::pair<std::string, std::size_t> split_utterance_id(std::string_view utterance_id);

std::vector<Dialogue> load_transcripts(const std::filesystem::path& path);
/// `source` names the stream in error messages.
std::vector<Dialogue> parse_transcripts(std::istream& in, std::string_view source);

PredictedActs load_predicted_acts(const std::filesystem::path& path);
PredictedActs parse_predicted_acts(std::istream& in, std::string_view source);

/// Customer turns whose act list (gold or predicted per `source.mode`)
/// contains `source.act_name`, in corpus order. Missing predictions count as
/// no act.
std::vector<UtteranceRecord> select_intent_turns(std::span<const Dialogue> dialogues,
                                                 const ActSource& source,
                                                 const PredictedActs* predicted_acts = nullptr);

std::vector<std::string> reference_labels(std::span<const UtteranceRecord> records);

}  // namespace intentbench::corpus
