#include "forge/ingest.hpp"

#include <fstream>
#include <istream>
#include <sstream>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>

#include "forge/errors.hpp"

namespace forge::ingest {

namespace pt = boost::property_tree;

namespace {

std::string underscores(std::string s) {
    for (char& c : s)
        if (c == '_') c = ' ';
    return s;
}

// "A | B | C" -> three fields; anything else is a record-level error
std::vector<std::string> split_mtriple(const std::string& text) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (true) {
        std::size_t sep = text.find(" | ", start);
        if (sep == std::string::npos) {
            parts.push_back(text.substr(start));
            break;
        }
        parts.push_back(text.substr(start, sep - start));
        start = sep + 3;
    }
    return parts;
}

struct EntryData {
    std::string category;
    std::vector<std::string> mtriples;
    std::vector<std::string> lexes;
};

void ingest_entry(const EntryData& entry, Split split, bool underscores_to_spaces,
                  IngestResult& result) {
    const std::size_t lex_count = entry.lexes.size();
    TripleSet ts;
    try {
        for (const auto& raw : entry.mtriples) {
            auto parts = split_mtriple(raw);
            if (parts.size() != 3)
                throw DataError("mtriple \"" + raw + "\" does not have exactly two \" | \" separators");
            std::string subject = parts[0];
            std::string object = parts[2];
            if (underscores_to_spaces) {
                subject = underscores(std::move(subject));
                object = underscores(std::move(object));
            }
            ts.triples.emplace_back(std::move(subject), parts[1], std::move(object));
        }
        if (ts.empty()) throw DataError("entry has no mtriple");
        if (ts.size() > 7)
            throw DataError("entry has more than 7 triples");  // WebNLG bound
    } catch (const DataError&) {
        result.skipped += std::max<std::size_t>(1, lex_count);
        return;
    }

    if (lex_count == 0) {
        ++result.skipped;
        return;
    }
    std::size_t index = 0;
    for (const auto& lex : entry.lexes) {
        try {
            result.records.emplace_back(ts, Verbalization(lex, index), entry.category,
                                        split);
        } catch (const DataError&) {
            ++result.skipped;
        }
        ++index;
    }
}

}  // namespace

IngestResult read_webnlg_xml(std::istream& in, Split split, bool underscores_to_spaces) {
    pt::ptree tree;
    try {
        pt::read_xml(in, tree, pt::xml_parser::trim_whitespace);
    } catch (const pt::xml_parser::xml_parser_error& e) {
        throw DataError("malformed XML at line " + std::to_string(e.line()) + ": " +
                        e.message());
    }

    IngestResult result;
    auto entries = tree.get_child_optional("benchmark.entries");
    if (!entries) return result;  // empty benchmark

    for (const auto& [key, entry_tree] : *entries) {
        if (key != "entry") continue;
        EntryData entry;
        entry.category = entry_tree.get<std::string>("<xmlattr>.category", "");
        if (auto mts = entry_tree.get_child_optional("modifiedtripleset"))
            for (const auto& [mkey, mt] : *mts)
                if (mkey == "mtriple") entry.mtriples.push_back(mt.get_value<std::string>());
        for (const auto& [lkey, lex] : entry_tree)
            if (lkey == "lex") entry.lexes.push_back(lex.get_value<std::string>());
        ingest_entry(entry, split, underscores_to_spaces, result);
    }
    return result;
}

std::vector<PairRecord> read_jsonl(std::istream& in) {
    std::vector<PairRecord> records;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (trim(line).empty()) continue;  // blank lines are ignored
        try {
            records.push_back(pair_record_from_json_line(line));
        } catch (const DataError& e) {
            throw DataError("line " + std::to_string(lineno) + ": " + e.what());
        }
    }
    return records;
}

std::vector<PairRecord> read_jsonl_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    try {
        return read_jsonl(in);
    } catch (const DataError& e) {
        throw DataError(path.string() + ": " + e.what());
    }
}

void write_jsonl_file(const std::vector<PairRecord>& records,
                      const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    for (const auto& rec : records) out << to_jsonl(rec) << '\n';
    if (!out) throw IoError("failed writing " + path.string());
}

std::size_t write_parallel(const std::vector<std::pair<std::string, std::string>>& pairs,
                           const std::filesystem::path& source_path,
                           const std::filesystem::path& target_path) {
    for (const auto& [src, tgt] : pairs)
        if (src.find('\n') != std::string::npos || tgt.find('\n') != std::string::npos ||
            src.find('\r') != std::string::npos || tgt.find('\r') != std::string::npos)
            throw DataError("parallel text must not contain embedded newlines");

    std::ofstream src_out(source_path, std::ios::binary);
    if (!src_out) throw IoError("cannot open " + source_path.string() + " for writing");
    std::ofstream tgt_out(target_path, std::ios::binary);
    if (!tgt_out) throw IoError("cannot open " + target_path.string() + " for writing");
    for (const auto& [src, tgt] : pairs) {
        src_out << src << '\n';
        tgt_out << tgt << '\n';
    }
    src_out.flush();
    tgt_out.flush();
    if (!src_out || !tgt_out)
        throw IoError("failed writing parallel files " + source_path.string() + " / " +
                      target_path.string());
    return pairs.size();
}

}  // namespace forge::ingest
