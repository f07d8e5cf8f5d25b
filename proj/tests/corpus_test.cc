// Copyright 2026 The vecevent Authors.
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

#include <filesystem>

#include <gtest/gtest.h>

#include "vecevent/corpus.h"
#include "vecevent/error.h"

#ifndef VECEVENT_FIXTURES
#error "VECEVENT_FIXTURES must point at tests/fixtures"
#endif

namespace vecevent::corpus {
namespace {

std::vector<std::string> Texts(const std::vector<Token> &tokens) {
  std::vector<std::string> out;
  for (const auto &t : tokens) out.push_back(t.text);
  return out;
}

ErrorKind KindOf(const std::function<void()> &fn) {
  try {
    fn();
  } catch (const Error &e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorKind::kData;
}

const std::string kGerE =
    "We now report that the purified product of gerE (GerE) is a "
    "DNA-binding protein that adheres to the promoters for cotB and cotC.";

TEST(TokenizeTest, SplitsPunctuationAndKeepsInnerJoiners) {
  EXPECT_EQ(Texts(Tokenize("the promoters for cotB and cotC.")),
            (std::vector<std::string>{"the", "promoters", "for", "cotB", "and",
                                      "cotC", "."}));
  EXPECT_EQ(Texts(Tokenize("both sigma(F) and sigma(G).")),
            (std::vector<std::string>{"both", "sigma(F)", "and", "sigma(G)",
                                      "."}));
  EXPECT_EQ(Texts(Tokenize("of gerE (GerE) is a DNA-binding protein")),
            (std::vector<std::string>{"of", "gerE", "(", "GerE", ")", "is",
                                      "a", "DNA-binding", "protein"}));
  EXPECT_EQ(Texts(Tokenize("spo0A, B.subtilis; x_y")),
            (std::vector<std::string>{"spo0A", ",", "B.subtilis", ";", "x_y"}));
}

TEST(TokenizeTest, WhitespaceOffsets) {
  const auto tokens = Tokenize("The expression of rsfA");
  ASSERT_EQ(tokens.size(), 4u);
  const std::vector<std::pair<std::size_t, std::size_t>> want{
      {0, 3}, {4, 14}, {15, 17}, {18, 22}};
  for (std::size_t i = 0; i < 4; ++i) {
    EXPECT_EQ(tokens[i].span.begin, want[i].first);
    EXPECT_EQ(tokens[i].span.end, want[i].second);
  }
  EXPECT_TRUE(Tokenize("").empty());
}

TEST(TokenizeTest, OffsetsPointIntoText) {
  const std::string text = "  Listeria  monocytogenes (strain EGD-e).";
  for (const Token &t : Tokenize(text)) {
    EXPECT_EQ(text.substr(t.span.begin, t.span.length()), t.text);
  }
  const auto tokens = Tokenize(text);
  for (std::size_t i = 0; i < tokens.size(); ++i) EXPECT_EQ(tokens[i].index, i);
}

TEST(TokenizeTest, NonAsciiCountsAsLetters) {
  EXPECT_EQ(Texts(Tokenize("Listéria grows.")),
            (std::vector<std::string>{"Listéria", "grows", "."}));
}

TEST(SplitSentencesTest, SplitsAtTerminatorsAndNewlines) {
  const std::string text = "First one. Second 2 here! 3 more?\nTitle line\nLast";
  const auto spans = SplitSentences(text);
  std::vector<std::string> got;
  for (const Span &s : spans) got.push_back(text.substr(s.begin, s.length()));
  EXPECT_EQ(got, (std::vector<std::string>{"First one.", "Second 2 here!",
                                           "3 more?", "Title line", "Last"}));
}

TEST(SplitSentencesTest, NoSplitBeforeLowercaseOrInsideGuard) {
  const std::string text = "Cells of E. coli grew. Cells of E. Coli grew.";
  EXPECT_EQ(SplitSentences(text).size(), 3u);
  const std::size_t g = text.rfind("E. Coli");
  EXPECT_EQ(SplitSentences(text, {{g, g + 7}}).size(), 2u);
}

TEST(CodepointOffsetsTest, MapsMultibyteCharacters) {
  const auto cp = CodepointOffsets("aé b");
  EXPECT_EQ(cp, (std::vector<std::size_t>{0, 1, 3, 4, 5}));
}

TEST(ParseStandoffTest, GerESentenceAlignsEntities) {
  const TaskSchema schema = TaskSchema::Builtin("bgi2011");
  const std::string a1 =
      "T1\tProtein 23 47\tpurified product of gerE\n"
      "T2\tProtein 49 53\tGerE\n"
      "T4\tPromoter 100 109\tpromoters\n"
      "T5\tGene 114 118\tcotB\n";
  const std::string a2 = "R1\tPromoterOf Promoter:T4 Gene:T5\n";
  auto doc = ParseStandoff("gere", kGerE, a1, a2, schema);
  ASSERT_EQ(doc.document.sentences.size(), 1u);
  const auto &s = doc.document.sentences[0];
  const Entity *t1 = doc.FindEntity("T1");
  ASSERT_NE(t1, nullptr);
  EXPECT_EQ(s.tokens[t1->first_token].text, "purified");
  EXPECT_EQ(s.tokens[t1->last_token].text, "gerE");
  EXPECT_EQ(s.tokens[doc.FindEntity("T5")->last_token].text, "cotB");
  EXPECT_EQ(doc.FindEntity("T4")->arguments, std::set<std::string>{"Promoter"});
  EXPECT_EQ(doc.FindEntity("T5")->arguments, std::set<std::string>{"Gene"});
  EXPECT_TRUE(doc.FindEntity("T1")->arguments.empty());
  ASSERT_EQ(doc.events.size(), 1u);
  EXPECT_EQ(doc.events[0], (Event{"R1", "PromoterOf", "T4", "T5", false}));
  EXPECT_EQ(s.entities.size(), 4u);
}

TEST(ParseStandoffTest, CodepointOffsetsAndDiscontinuousSpans) {
  const TaskSchema schema = TaskSchema::Builtin("bb2016");
  const std::string text = "Bactéria in raw and pasteurized milk.";
  const std::string a1 =
      "T1\tBacteria 0 8\tBactéria\n"
      "T2\tHabitat 12 15;32 36\traw milk\n";
  const std::string a2 = "R1\tLives_In Bacteria:T1 Location:T2\n";
  auto doc = ParseStandoff("d", text, a1, a2, schema);
  const Entity *t2 = doc.FindEntity("T2");
  EXPECT_EQ(text.substr(t2->span.begin, t2->span.length()),
            "raw and pasteurized milk");
  EXPECT_EQ(doc.document.sentences[0].tokens[t2->last_token].text, "milk");
}

TEST(ParseStandoffTest, SkipsNotesAndUnknownEventTypes) {
  const TaskSchema schema = TaskSchema::Builtin("bb2016");
  const std::string text = "Listeria in cheese.";
  const std::string a1 =
      "T1\tBacteria 0 8\tListeria\nT2\tHabitat 12 18\tcheese\n"
      "N1\tOntoBiotope Annotation:T2 Referent:OBT:1\tcheese\n"
      "#1\tAnnotatorNotes T1\tnote\n";
  const std::string a2 =
      "R1\tExhibits Bacteria:T1 Property:T2\n"
      "R2\tLives_In Bacteria:T1 Location:T2\n";
  auto doc = ParseStandoff("d", text, a1, a2, schema);
  EXPECT_EQ(doc.events.size(), 1u);
  EXPECT_EQ(doc.report.skipped_events, 1u);
}

TEST(ParseStandoffTest, IgnoredTypesDropEntitiesAndTheirEvents) {
  TaskSchema schema = TaskSchema::Builtin("bb2016");
  const std::string text = "Listeria\nListeria in cheese.";
  const std::string a1 =
      "T1\tTitle 0 8\tListeria\nT2\tBacteria 9 17\tListeria\n"
      "T3\tHabitat 21 27\tcheese\n";
  const std::string a2 =
      "R1\tLives_In Bacteria:T2 Location:T1\n"
      "R2\tLives_In Bacteria:T2 Location:T3\n";
  auto doc = ParseStandoff("d", text, a1, a2, schema);
  EXPECT_EQ(doc.entities.size(), 2u);
  EXPECT_EQ(doc.report.ignored_entities, 1u);
  EXPECT_EQ(doc.report.skipped_events, 1u);
  EXPECT_EQ(doc.events.size(), 1u);
}

TEST(ParseStandoffTest, ErrorKinds) {
  const TaskSchema schema = TaskSchema::Builtin("bb2016");
  const std::string text = "Listeria in cheese.";
  const std::string ok = "T1\tBacteria 0 8\tListeria\nT2\tHabitat 12 18\tcheese\n";
  auto parse = [&](const std::string &a1, const std::string &a2) {
    return [=, &schema] { ParseStandoff("d", text, a1, a2, schema); };
  };
  EXPECT_EQ(KindOf(parse(ok, "R1\tLives_In Bacteria:T1 Location:T9\n")),
            ErrorKind::kIntegrity);
  EXPECT_EQ(KindOf(parse(ok, "R1\tLives_In Location:T2 Where:T1\n")),
            ErrorKind::kSchema);
  EXPECT_EQ(KindOf(parse(ok, "R1\tLives_In Bacteria:T1\n")), ErrorKind::kParse);
  EXPECT_EQ(KindOf(parse("T1\tBacteria 0 8\tListerio\n", "")),
            ErrorKind::kAlignment);
  EXPECT_EQ(KindOf(parse("T1\tBacteria 0 80\tListeria\n", "")),
            ErrorKind::kAlignment);
  EXPECT_EQ(KindOf(parse("T1\tBacteria x 8\tListeria\n", "")),
            ErrorKind::kParse);
  EXPECT_EQ(KindOf(parse(ok + "Q1\twhat\n", "")), ErrorKind::kParse);
  EXPECT_EQ(KindOf(parse(ok + "T1\tBacteria 0 8\tListeria\n", "")),
            ErrorKind::kParse);
}

TEST(ParseStandoffTest, DanglingReferenceNamesEntity) {
  const TaskSchema schema = TaskSchema::Builtin("bb2016");
  try {
    ParseStandoff("d", "Listeria in cheese.",
                  "T2\tHabitat 12 18\tcheese\n",
                  "R1\tLives_In Bacteria:T9 Location:T2\n", schema);
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(e.kind(), ErrorKind::kIntegrity);
    EXPECT_NE(std::string(e.what()).find("T9"), std::string::npos);
  }
  auto doc = ParseStandoff("d", "Listeria in cheese.",
                           "T1\tBacteria 0 8\tListeria\n", "", schema);
  EXPECT_EQ(doc.entities.size(), 1u);
  EXPECT_TRUE(doc.events.empty());
}

TEST(ParseStandoffTest, SelfLinkIsIntegrityError) {
  TaskSchema schema = TaskSchema::Parse("task t\nevent Rel A B\n");
  const std::string text = "Listeria in cheese.";
  try {
    ParseStandoff("d", text, "T1\tX 0 8\tListeria\n",
                  "R1\tRel A:T1 B:T1\n", schema, "d.a1", "d.a2");
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(e.kind(), ErrorKind::kIntegrity);
    EXPECT_EQ(e.file(), "d.a2");
    EXPECT_EQ(e.line(), 1u);
  }
}

TEST(ParseStandoffTest, CrossSentenceEventsAreFlagged) {
  const TaskSchema schema = TaskSchema::Builtin("bb2016");
  const std::string text = "Listeria grows. It lives in cheese.";
  auto doc = ParseStandoff(
      "d", text, "T1\tBacteria 0 8\tListeria\nT2\tHabitat 28 34\tcheese\n",
      "R1\tLives_In Bacteria:T1 Location:T2\n", schema);
  ASSERT_EQ(doc.events.size(), 1u);
  EXPECT_TRUE(doc.events[0].cross_sentence);
  EXPECT_EQ(doc.report.cross_sentence_events, 1u);
}

TEST(ParseStandoffTest, EventTypeWithTriggerSuffix) {
  const TaskSchema schema = TaskSchema::Builtin("bb2016");
  auto doc = ParseStandoff(
      "d", "Listeria in cheese.",
      "T1\tBacteria 0 8\tListeria\nT2\tHabitat 12 18\tcheese\n",
      "E1\tLives_In:T9 Bacteria:T1 Location:T2\n", schema);
  EXPECT_EQ(doc.events.size(), 1u);
}

TEST(WriteStandoffTest, EmitsRelationLines) {
  const TaskSchema schema = TaskSchema::Builtin("bgi2011");
  std::vector<Event> events{{"", "ActionTarget", "T1", "T2", false},
                            {"", "Interaction", "T3", "T2", false}};
  EXPECT_EQ(WriteStandoff(events, schema),
            "R1\tActionTarget Action:T1 Target:T2\n"
            "R2\tInteraction Agent:T3 Target:T2\n");
  EXPECT_EQ(WriteStandoff({}, schema), "");
  std::vector<Event> bad{{"", "Nope", "T1", "T2", false}};
  EXPECT_THROW(WriteStandoff(bad, schema), Error);
}

TEST(LoadCorpusTest, FixturesLoadWithExpectedCounts) {
  const std::string root = VECEVENT_FIXTURES;
  auto bgi = LoadCorpus({root + "/bgi2011"}, TaskSchema::Builtin("bgi2011"));
  EXPECT_EQ(bgi.documents.size(), 3u);
  for (const auto &doc : bgi.documents) {
    if (doc.document.id != "PMID-8051003-S4") continue;
    EXPECT_EQ(doc.entities.size(), 6u);
    EXPECT_EQ(doc.events.size(), 4u);
  }
  auto stats = CorpusStatistics(bgi);
  EXPECT_EQ(stats["events"], 14);
  auto bb = LoadCorpus({root + "/bb2016"}, TaskSchema::Builtin("bb2016"), 2);
  auto bstats = CorpusStatistics(bb);
  EXPECT_EQ(bstats["events"], 7);
  EXPECT_EQ(bstats["ignored_entities"], 4);
  EXPECT_EQ(bstats["event_types"][0]["event_type"], "Lives_In");
  EXPECT_EQ(bstats["event_types"][0]["arguments"], "Bacteria->Location");
  EXPECT_EQ(bstats["event_types"][0]["count"], 7);
}

TEST(LoadCorpusTest, EmptyOrMissingDirectoryIsAnError) {
  const auto dir = std::filesystem::temp_directory_path() / "vecevent_empty";
  std::filesystem::create_directories(dir);
  EXPECT_THROW(LoadCorpus({dir.string()}, TaskSchema::Builtin("bb2016")),
               Error);
  EXPECT_THROW(LoadCorpus({"/nonexistent/dir"}, TaskSchema::Builtin("bb2016")),
               Error);
}

TEST(SchemaTest, BuiltinsAndTextRoundTrip) {
  const auto bgi = TaskSchema::Builtin("bgi2011");
  EXPECT_EQ(bgi.events().size(), 9u);
  EXPECT_EQ(bgi.ArgumentTypes().size(), 11u);
  const auto bb = TaskSchema::Builtin("bb2016");
  EXPECT_EQ(bb.ArgumentTypes(), (std::vector<std::string>{"Bacteria", "Location"}));
  EXPECT_TRUE(bb.IsIgnored("Title"));
  const auto again = TaskSchema::Parse(bb.ToText());
  EXPECT_EQ(again.ToText(), bb.ToText());
  EXPECT_TRUE(bb.RoleAccepts("Location", "Geographical"));
  EXPECT_FALSE(bb.RoleAccepts("Location", "Bacteria"));
  EXPECT_THROW(TaskSchema::Parse("task x\n"), Error);
  EXPECT_THROW(TaskSchema::Parse("event A b\n"), Error);
  EXPECT_THROW(TaskSchema::Builtin("genia"), Error);
}

}  // namespace
}  // namespace vecevent::corpus
