#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <random>
#include <regex>

#include "support.hpp"
#include "tissuenet/dsl.hpp"

using namespace tissuenet;
using tissuenet::testing::read_text;
using tissuenet::testing::source_path;

namespace {

namespace fs = std::filesystem;

std::vector<fs::path> fixtures(const std::string& dir) {
  std::vector<fs::path> out;
  for (const auto& entry : fs::directory_iterator(source_path("tests/fixtures/" + dir))) {
    if (entry.path().extension() == ".model") out.push_back(entry.path());
  }
  std::sort(out.begin(), out.end());
  return out;
}

const char* kWorkedExample = R"(model "fig6"
grid tri cutoff 2
identifiers 16
component A 0..1 ; component B 0..1 ; component C 0..1
sigma sC = max_round of C
sigma sA = max_round of A
rule A := 1 - C
rule B := max(0, A - sC)
rule C := B
die when A == 0 and sA == 0
migrate when A + B > 0
divide when sA - A > 0
init 0 at (0,0) A=1 B=0 C=0
init 1 at (1,0) A=1 B=0 C=0
init 2 at (3,0) A=1 B=0 C=0
)";

// Position of the character a diagnostic points at, or npos if it lies outside.
std::size_t offset_of(const std::string& text, SourcePos pos) {
  int line = 1;
  std::size_t k = 0;
  while (line < pos.line && k < text.size()) {
    if (text[k++] == '\n') ++line;
  }
  if (line != pos.line || pos.column < 1) return std::string::npos;
  std::size_t at = k + static_cast<std::size_t>(pos.column - 1);
  std::size_t eol = text.find('\n', k);
  if (at >= text.size() || (eol != std::string::npos && at > eol)) return std::string::npos;
  return at;
}

}  // namespace

TEST(Dsl, WorkedExampleParses) {
  auto r = parse_model(kWorkedExample);
  ASSERT_TRUE(r.ok());
  const auto& doc = *r.document;
  EXPECT_EQ(doc.name, "fig6");
  EXPECT_EQ(doc.components.size(), 3u);
  EXPECT_EQ(doc.sigmas.size(), 2u);
  EXPECT_EQ(doc.transforms.size(), 3u);
  EXPECT_EQ(doc.rules.size(), 3u);
  EXPECT_EQ(doc.inits.size(), 3u);
  ASSERT_TRUE(doc.backend);
  EXPECT_EQ(doc.backend->kind, BackendKind::grid_tri);
  EXPECT_EQ(doc.backend->cutoff, 2u);
  EXPECT_EQ(doc.identifiers, 16);
  EXPECT_EQ(doc.sigmas[0].source, "C");
  EXPECT_EQ(doc.transforms[1].kind, TransformKind::migrate);
  EXPECT_FALSE(doc.transforms[2].per_location);
}

TEST(Dsl, WorkedExampleValidatesToThePlacement) {
  auto r = load_model(kWorkedExample);
  ASSERT_TRUE(r.ok());
  const auto& iface = std::get<GbfInterface>(r.model->initial.spatial);
  std::vector<std::pair<ModuleId, GbfCoord>> expected{
      {module_id(0), {0, 0}}, {module_id(1), {1, 0}}, {module_id(2), {3, 0}}};
  EXPECT_EQ(iface.theta(), expected);
  EXPECT_EQ(r.model->spec.universe, 16u);
  EXPECT_EQ(r.model->initial.levels.at(module_id(1)), (NetState{1, 0, 0}));
}

TEST(Dsl, EmptyInputNeedsAHeader) {
  for (const char* text : {"", "\n\n", "# only a comment\n"}) {
    auto r = parse_model(text);
    EXPECT_FALSE(r.ok());
    ASSERT_EQ(r.diagnostics.size(), 1u);
    EXPECT_EQ(r.diagnostics[0].message, "missing model header");
  }
}

TEST(Dsl, UndeclaredComponentGivesOneDiagnostic) {
  auto r = parse_model("model \"x\"\ngrid square\ncomponent A 0..1\nrule A := D\ninit 0 at (0,0)\n");
  ASSERT_EQ(r.diagnostics.size(), 1u);
  EXPECT_EQ(r.diagnostics[0].pos.line, 4);
  EXPECT_EQ(r.diagnostics[0].pos.column, 11);
  EXPECT_NE(r.diagnostics[0].message.find("'D'"), std::string::npos);
}

TEST(Dsl, ValidFixturesLoadAndReachAPrintFixpoint) {
  auto files = fixtures("valid");
  ASSERT_GE(files.size(), 5u);
  for (const auto& path : files) {
    auto text = read_text(path.string());
    auto loaded = load_model(text);
    for (const auto& d : loaded.diagnostics) ADD_FAILURE() << format_diagnostic(d, path.string());
    ASSERT_TRUE(loaded.ok()) << path;

    auto first = parse_model(text);
    auto printed = print_model(*first.document);
    auto second = parse_model(printed);
    ASSERT_TRUE(second.ok()) << printed;
    EXPECT_EQ(*second.document, *first.document) << path;
    EXPECT_EQ(print_model(*second.document), printed);
    auto reloaded = load_model(printed);
    ASSERT_TRUE(reloaded.ok());
    EXPECT_EQ(reloaded.model->initial, loaded.model->initial);
  }
}

TEST(Dsl, InvalidFixturesReportTheExpectedDiagnostic) {
  const std::regex expect_line(R"(^# expect: (\d+):(\d+) ?(.*)$)");
  auto files = fixtures("invalid");
  ASSERT_GE(files.size(), 20u);
  for (const auto& path : files) {
    auto text = read_text(path.string());
    auto r = load_model(text);
    EXPECT_FALSE(r.ok()) << path;
    ASSERT_FALSE(r.diagnostics.empty()) << path;

    std::smatch m;
    std::string first_line = text.substr(0, text.find('\n'));
    int line = 1;
    int column = 1;
    std::string needle = "missing model header";
    if (std::regex_match(first_line, m, expect_line)) {
      line = std::stoi(m[1]);
      column = std::stoi(m[2]);
      needle = m[3];
    }
    bool found = std::any_of(r.diagnostics.begin(), r.diagnostics.end(), [&](const Diagnostic& d) {
      return d.pos.line == line && d.pos.column == column &&
             d.message.find(needle) != std::string::npos;
    });
    std::string all;
    for (const auto& d : r.diagnostics) all += format_diagnostic(d, path.filename().string()) + "\n";
    EXPECT_TRUE(found) << path.filename() << " expected " << line << ":" << column << " '"
                       << needle << "', got:\n"
                       << all;
  }
}

TEST(Dsl, DiagnosticsPointInsideTheText) {
  for (const auto& path : fixtures("invalid")) {
    auto text = read_text(path.string());
    if (text.empty()) continue;
    for (const auto& d : load_model(text).diagnostics) {
      EXPECT_NE(offset_of(text, d.pos), std::string::npos)
          << format_diagnostic(d, path.filename().string());
    }
  }
}

TEST(Dsl, ParsingIsTotalOnMutatedInput) {
  // Random byte edits of valid models never throw and keep positions in range.
  std::mt19937 rng(1234);
  const std::string alphabet = "model grid bdg ()[]{}.,;:=<>!&|@-+*#\"\n 0123456789AbZ_";
  for (const auto& path : fixtures("valid")) {
    const auto original = read_text(path.string());
    for (int trial = 0; trial < 150; ++trial) {
      std::string text = original;
      int edits = std::uniform_int_distribution<int>(1, 6)(rng);
      for (int e = 0; e < edits && !text.empty(); ++e) {
        std::size_t at = std::uniform_int_distribution<std::size_t>(0, text.size() - 1)(rng);
        char c = alphabet[std::uniform_int_distribution<std::size_t>(0, alphabet.size() - 1)(rng)];
        switch (std::uniform_int_distribution<int>(0, 2)(rng)) {
          case 0: text[at] = c; break;
          case 1: text.insert(text.begin() + static_cast<long>(at), c); break;
          default: text.erase(at, 1);
        }
      }
      ValidateResult r;
      ASSERT_NO_THROW(r = load_model(text)) << text;
      for (const auto& d : r.diagnostics) {
        if (text.find_first_not_of(" \t\r\n") == std::string::npos) continue;
        EXPECT_NE(offset_of(text, d.pos), std::string::npos) << d.message << "\n" << text;
      }
      if (r.ok()) {
        auto again = parse_model(print_model(*parse_model(text).document));
        EXPECT_TRUE(again.ok()) << text;
      }
    }
  }
}

TEST(Dsl, PrintedDocumentsAreStable) {
  auto doc = *parse_model(kWorkedExample).document;
  auto printed = print_model(doc);
  EXPECT_NE(printed.find("rule B := max(0, A - sC)\n"), std::string::npos);
  EXPECT_NE(printed.find("die when A == 0 and sA == 0\n"), std::string::npos);
  EXPECT_NE(printed.find("init 2 at (3,0) A=1 B=0 C=0\n"), std::string::npos);
}

TEST(Dsl, BdgClauseOptions) {
  auto r = parse_model("model \"b\"\nbdg degree 4 forbid-disconnect cutoff 3\n");
  ASSERT_TRUE(r.document);
  const auto& b = *r.document->backend;
  EXPECT_EQ(b.kind, BackendKind::bdg);
  EXPECT_EQ(b.degree, 4u);
  EXPECT_EQ(b.cutoff, 3u);
  EXPECT_TRUE(b.strict);
  EXPECT_TRUE(b.forbid_disconnect);
}

TEST(Dsl, KeywordsAreLowercase) {
  auto r = parse_model("MODEL \"x\"\n");
  EXPECT_FALSE(r.ok());
}

TEST(Dsl, ValidateBuildsGraphState) {
  auto r = load_model(read_text(source_path("models/healing_ring.model")));
  ASSERT_TRUE(r.ok());
  const auto& g = std::get<BdgGraph>(r.model->initial.spatial);
  EXPECT_EQ(g.size(), 8u);
  EXPECT_EQ(g.edge_count(), 8u);
  EXPECT_EQ(g.bound(), 2u);
  EXPECT_EQ(r.model->initial.levels.at(module_id(0)), (NetState{1, 0, 1}));
  EXPECT_EQ(r.model->initial.levels.at(module_id(3)), (NetState{1, 0, 0}));
}

TEST(Dsl, FormatDiagnostic) {
  EXPECT_EQ(format_diagnostic({{3, 7}, "boom"}, "a.model"), "a.model:3:7: error: boom");
}
