#include <doctest.h>

#include <sstream>

#include "intentbench/corpus.hpp"
#include "error_kind.hpp"
#include "intentbench/error.hpp"

using namespace intentbench;
using namespace intentbench::corpus;

namespace {

const char* kTwoDialogues =
    R"({"dialogue_id": "d1", "turns": [)"
    R"({"speaker_role": "Agent", "utterance": "hello", "dialog_acts": ["InformIntent"], "intents": []},)"
    R"({"speaker_role": "Customer", "utterance": "I want a quote", "dialog_acts": ["InformIntent"], "intents": ["GetQuote", "Other"]},)"
    R"({"speaker_role": "Customer", "utterance": "thanks"}]})"
    "\n"
    R"({"dialogue_id": "d2", "turns": [{"speaker_role": "Customer", "utterance": "file a claim", "dialog_acts": ["InformIntent"], "intents": ["FileClaim"]}]})"
    "\n";

std::vector<Dialogue> parse(const std::string& text) {
  std::istringstream in(text);
  return parse_transcripts(in, "fixture");
}


}  // namespace

TEST_CASE("two-line fixture parses with turn counts 3 and 1") {
  const auto dialogues = parse(kTwoDialogues);
  REQUIRE(dialogues.size() == 2);
  CHECK(dialogues[0].dialogue_id == "d1");
  CHECK(dialogues[0].turns.size() == 3);
  CHECK(dialogues[1].turns.size() == 1);
  // Missing acts/intents become empty lists; indices run from 0.
  CHECK(dialogues[0].turns[2].dialog_acts.empty());
  CHECK(dialogues[0].turns[2].intents.empty());
  for (std::size_t i = 0; i < dialogues[0].turns.size(); ++i) CHECK(dialogues[0].turns[i].index == i);
}

TEST_CASE("empty transcript file gives no dialogues") {
  CHECK(parse("").empty());
  CHECK(parse("\n  \n").empty());
}

TEST_CASE("transcript errors carry kind and line number") {
  SUBCASE("malformed json") {
    try {
      parse(std::string(kTwoDialogues) + "{not json\n");
      FAIL("should throw");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::Parse);
      CHECK(std::string(e.what()).find("fixture:3") != std::string::npos);
    }
  }
  SUBCASE("duplicate dialogue id") {
    CHECK(kind_of([] { parse(std::string(kTwoDialogues) + R"({"dialogue_id": "d1", "turns": [{"speaker_role": "Agent", "utterance": "x"}]})"); }) ==
          ErrorKind::Validation);
  }
  SUBCASE("unknown role") {
    CHECK(kind_of([] { parse(R"({"dialogue_id": "x", "turns": [{"speaker_role": "Bot", "utterance": "x"}]})"); }) ==
          ErrorKind::Parse);
  }
  SUBCASE("empty turns") {
    CHECK(kind_of([] { parse(R"({"dialogue_id": "x", "turns": []})"); }) == ErrorKind::Validation);
  }
  SUBCASE("unreadable path") {
    CHECK(kind_of([] { load_transcripts("/nonexistent/transcripts.jsonl"); }) == ErrorKind::Io);
  }
}

TEST_CASE("gold-act selection keeps customer intent turns only") {
  const auto dialogues = parse(kTwoDialogues);
  const auto records = select_intent_turns(dialogues, ActSource{});
  REQUIRE(records.size() == 2);
  CHECK(records[0].utterance_id == "d1#1");
  CHECK(records[0].reference_intent == "GetQuote");  // first of two labels
  CHECK(records[1].utterance_id == "d2#0");
  CHECK(records[1].reference_intent == "FileClaim");

  SUBCASE("idempotent and order preserving") {
    const auto again = select_intent_turns(dialogues, ActSource{});
    REQUIRE(again.size() == records.size());
    for (std::size_t i = 0; i < records.size(); ++i) CHECK(again[i].utterance_id == records[i].utterance_id);
  }
  SUBCASE("ids map back to customer turns of the corpus") {
    for (const auto& r : records) {
      const auto [dialogue, turn] = split_utterance_id(r.utterance_id);
      const auto it = std::find_if(dialogues.begin(), dialogues.end(),
                                   [&](const Dialogue& d) { return d.dialogue_id == dialogue; });
      REQUIRE(it != dialogues.end());
      REQUIRE(turn < it->turns.size());
      CHECK(it->turns[turn].speaker_role == SpeakerRole::Customer);
    }
  }
}

TEST_CASE("predicted-act selection uses the sidecar, missing entries mean no act") {
  const auto dialogues = parse(kTwoDialogues);
  std::istringstream sidecar(
      R"({"utterance_id": "d1#0", "dialog_acts": ["InformIntent"]})" "\n"
      R"({"utterance_id": "d1#2", "dialog_acts": ["InformIntent"]})" "\n");
  const auto predicted = parse_predicted_acts(sidecar, "acts");
  const auto records = select_intent_turns(dialogues, {ActMode::PredictedActs, "InformIntent"}, &predicted);
  REQUIRE(records.size() == 1);  // agent turn d1#0 never selected, d2#0 has no prediction
  CHECK(records[0].utterance_id == "d1#2");
  CHECK_FALSE(records[0].reference_intent.has_value());
}

TEST_CASE("reference labels project records and reject gaps") {
  CHECK(reference_labels(std::vector<UtteranceRecord>{}).empty());
  std::vector<UtteranceRecord> records(3);
  records[0].reference_intent = "a";
  records[1].reference_intent = "a";
  records[2].reference_intent = "b";
  CHECK(reference_labels(records) == std::vector<std::string>{"a", "a", "b"});
  records[1].reference_intent.reset();
  records[1].utterance_id = "d#4";
  try {
    reference_labels(records);
    FAIL("should throw");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Validation);
    CHECK(std::string(e.what()).find("d#4") != std::string::npos);
  }
}

TEST_CASE("utterance ids round trip, dialogue ids may contain '#'") {
  CHECK(make_utterance_id("a#b", 7) == "a#b#7");
  CHECK(split_utterance_id("a#b#7") == std::pair<std::string, std::size_t>{"a#b", 7});
  CHECK(kind_of([] { split_utterance_id("nohash"); }) == ErrorKind::Validation);
  CHECK(kind_of([] { split_utterance_id("x#1a"); }) == ErrorKind::Validation);
}

TEST_CASE("committed three-intent fixture") {
  const auto dialogues = load_transcripts(INTENTBENCH_FIXTURE_DIR "/corpus_3intents.jsonl");
  CHECK(dialogues.size() == 60);
  const auto records = select_intent_turns(dialogues, ActSource{});
  CHECK(records.size() == 60);
  const auto labels = reference_labels(records);
  CHECK(std::count(labels.begin(), labels.end(), "GetQuote") == 20);
  CHECK(std::count(labels.begin(), labels.end(), "FileClaim") == 20);
  CHECK(std::count(labels.begin(), labels.end(), "CheckBill") == 20);
}
