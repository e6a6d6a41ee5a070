#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "forge/errors.hpp"
#include "forge/ingest.hpp"
#include "test_util.hpp"

using namespace forge;
namespace fs = std::filesystem;

namespace {

ingest::IngestResult from_xml(const std::string& xml, Split split = Split::train,
                              bool underscores = true) {
    std::istringstream in(xml);
    return ingest::read_webnlg_xml(in, split, underscores);
}

}  // namespace

TEST_CASE("one record per tripleset and lex combination") {
    auto result = from_xml(R"(<benchmark><entries>
        <entry category="Country" eid="Id1">
          <modifiedtripleset><mtriple>Italy | capital | Rome</mtriple></modifiedtripleset>
          <lex comment="good" lid="Id1">Rome is the capital of Italy .</lex>
        </entry>
      </entries></benchmark>)");
    CHECK(result.skipped == 0);
    REQUIRE(result.records.size() == 1);
    const auto& rec = result.records[0];
    CHECK(rec.tripleset.size() == 1);
    CHECK(rec.tripleset.triples[0] == Triple("Italy", "capital", "Rome"));
    CHECK(rec.verbalization.text == "Rome is the capital of Italy .");
    CHECK(rec.category == "Country");
    CHECK(rec.split == Split::train);
}

TEST_CASE("an entry without lexicalizations is skipped and counted") {
    auto result = from_xml(R"(<benchmark><entries>
        <entry category="Food" eid="Id2">
          <modifiedtripleset><mtriple>Bionico | course | Dessert</mtriple></modifiedtripleset>
        </entry>
      </entries></benchmark>)");
    CHECK(result.records.empty());
    CHECK(result.skipped == 1);
}

TEST_CASE("two mtriples and two lexes give the cross product") {
    auto result = from_xml(R"(<benchmark><entries>
        <entry category="Food" eid="Id3">
          <modifiedtripleset>
            <mtriple>Bionico | course | Dessert</mtriple>
            <mtriple>Bionico | ingredient | Raisin</mtriple>
          </modifiedtripleset>
          <lex lid="Id1">Bionico is a dessert which contains raisins .</lex>
          <lex lid="Id2">Raisins are found in the dessert Bionico .</lex>
        </entry>
      </entries></benchmark>)");
    CHECK(result.skipped == 0);
    REQUIRE(result.records.size() == 2);
    for (const auto& rec : result.records) CHECK(rec.tripleset.size() == 2);
    CHECK(result.records[0].verbalization.index == 0);
    CHECK(result.records[1].verbalization.index == 1);
    CHECK(result.records[0].tripleset == result.records[1].tripleset);
}

TEST_CASE("malformed xml reports a line number") {
    std::istringstream in("<benchmark>\n<entries>\n<entry>oops\n");
    CHECK_THROWS_WITH_AS(ingest::read_webnlg_xml(in), doctest::Contains("line"),
                         DataError);
}

TEST_CASE("a bad mtriple skips every record of the entry") {
    auto result = from_xml(R"(<benchmark><entries>
        <entry category="X" eid="Id4">
          <modifiedtripleset><mtriple>only one | separator</mtriple></modifiedtripleset>
          <lex>First text .</lex>
          <lex>Second text .</lex>
        </entry>
        <entry category="Y" eid="Id5">
          <modifiedtripleset><mtriple>A | B | C | D</mtriple></modifiedtripleset>
          <lex>Too many separators .</lex>
        </entry>
      </entries></benchmark>)");
    CHECK(result.records.empty());
    CHECK(result.skipped == 3);  // two lost records plus one
}

TEST_CASE("underscores become spaces unless disabled") {
    std::string xml = R"(<benchmark><entries>
        <entry category="Astronaut" eid="Id6">
          <modifiedtripleset><mtriple>Alan_Bean | birthPlace | Wheeler,_Texas</mtriple></modifiedtripleset>
          <lex>Alan Bean was born in Wheeler, Texas .</lex>
        </entry>
      </entries></benchmark>)";
    auto spaced = from_xml(xml);
    REQUIRE(spaced.records.size() == 1);
    CHECK(spaced.records[0].tripleset.triples[0].subject == "Alan Bean");
    CHECK(spaced.records[0].tripleset.triples[0].object == "Wheeler, Texas");

    auto kept = from_xml(xml, Split::train, false);
    CHECK(kept.records[0].tripleset.triples[0].subject == "Alan_Bean");
    CHECK(kept.records[0].tripleset.triples[0].object == "Wheeler,_Texas");
}

TEST_CASE("webnlg entries beyond seven triples are rejected") {
    std::string mtriples;
    for (int i = 0; i < 8; ++i)
        mtriples += "<mtriple>S" + std::to_string(i) + " | p | o</mtriple>";
    auto result = from_xml("<benchmark><entries><entry category=\"X\" eid=\"Id\">"
                           "<modifiedtripleset>" +
                           mtriples +
                           "</modifiedtripleset><lex>Text .</lex></entry>"
                           "</entries></benchmark>");
    CHECK(result.records.empty());
    CHECK(result.skipped == 1);
}

TEST_CASE("bare pipes inside fields are preserved") {
    auto result = from_xml(R"(<benchmark><entries>
        <entry category="X" eid="Id7">
          <modifiedtripleset><mtriple>A|B | rel | C</mtriple></modifiedtripleset>
          <lex>Text .</lex>
        </entry>
      </entries></benchmark>)");
    REQUIRE(result.records.size() == 1);
    CHECK(result.records[0].tripleset.triples[0].subject == "A|B");
}

TEST_CASE("xml entities are decoded") {
    auto result = from_xml(R"(<benchmark><entries>
        <entry category="X" eid="Id8">
          <modifiedtripleset><mtriple>AT&amp;T | founded | 1983</mtriple></modifiedtripleset>
          <lex>AT&amp;T was founded in 1983 .</lex>
        </entry>
      </entries></benchmark>)");
    REQUIRE(result.records.size() == 1);
    CHECK(result.records[0].tripleset.triples[0].subject == "AT&T");
    CHECK(result.records[0].verbalization.text == "AT&T was founded in 1983 .");
}

TEST_CASE("jsonl reading preserves order and skips blank lines") {
    std::mt19937 rng(73);
    std::vector<PairRecord> records;
    for (int i = 0; i < 3; ++i) records.push_back(testutil::random_record(rng));
    std::ostringstream buf;
    for (const auto& rec : records) buf << to_jsonl(rec) << '\n';
    buf << "\n";  // trailing blank line is fine

    std::istringstream in(buf.str());
    auto back = ingest::read_jsonl(in);
    REQUIRE(back.size() == 3);
    for (int i = 0; i < 3; ++i) CHECK(back[i] == records[i]);
}

TEST_CASE("jsonl errors carry the line number") {
    std::istringstream in(
        R"({"triples":[{"s":"a","p":"b","o":"c"}],"text":"ok","category":"x","split":"train"}
{"triples":[{"s":"a","p":"b","o":"c"}],"category":"x","split":"train"}
)");
    CHECK_THROWS_WITH_AS(ingest::read_jsonl(in), doctest::Contains("line 2"), DataError);
}

TEST_CASE("empty jsonl input is an empty sequence") {
    std::istringstream in("");
    CHECK(ingest::read_jsonl(in).empty());
}

TEST_CASE("jsonl write/read round-trips through files") {
    std::mt19937 rng(79);
    std::vector<PairRecord> records;
    for (int i = 0; i < 50; ++i) records.push_back(testutil::random_record(rng));

    fs::path dir = fs::temp_directory_path() / "forge_ingest_test";
    fs::create_directories(dir);
    ingest::write_jsonl_file(records, dir / "records.jsonl");
    auto back = ingest::read_jsonl_file(dir / "records.jsonl");
    CHECK(back == records);
    fs::remove_all(dir);
}

TEST_CASE("parallel files stay line-aligned") {
    fs::path dir = fs::temp_directory_path() / "forge_parallel_test";
    fs::create_directories(dir);

    std::size_t n = ingest::write_parallel({{"src one", "tgt one"}, {"src two", "tgt two"}},
                                           dir / "out.src", dir / "out.tgt");
    CHECK(n == 2);
    std::ifstream src(dir / "out.src"), tgt(dir / "out.tgt");
    std::string s1, s2, t1, t2;
    REQUIRE(std::getline(src, s1));
    REQUIRE(std::getline(src, s2));
    REQUIRE(std::getline(tgt, t1));
    REQUIRE(std::getline(tgt, t2));
    CHECK(s1 == "src one");
    CHECK(t2 == "tgt two");
    std::string extra;
    CHECK_FALSE(std::getline(src, extra));

    CHECK(ingest::write_parallel({}, dir / "empty.src", dir / "empty.tgt") == 0);
    CHECK(fs::file_size(dir / "empty.src") == 0);

    CHECK_THROWS_AS(ingest::write_parallel({{"bad\ntext", "t"}}, dir / "x.src",
                                           dir / "x.tgt"),
                    DataError);
    CHECK_THROWS_AS(ingest::write_parallel({{"s", "t"}},
                                           dir / "no_dir" / "x.src", dir / "x.tgt"),
                    IoError);
    fs::remove_all(dir);
}
