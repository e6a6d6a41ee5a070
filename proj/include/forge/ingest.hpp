#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "forge/core_types.hpp"

namespace forge::ingest {

struct IngestResult {
    std::vector<PairRecord> records;
    std::size_t skipped = 0;
};

/// Reads the WebNLG XML subset
///   benchmark > entries > entry(category) > modifiedtripleset > mtriple
///   entry > lex
/// producing one record per (tripleset, lex) combination. An mtriple must
/// split into exactly three fields on " | ". Entries that yield no valid
/// records are counted as skipped. DBpedia-style underscores in subjects
/// and objects become spaces unless `underscores_to_spaces` is off.
IngestResult read_webnlg_xml(std::istream& in, Split split = Split::train,
                             bool underscores_to_spaces = true);

/// One record per non-blank line, in file order. Throws forge::DataError
/// naming the 1-based line of the first schema violation.
std::vector<PairRecord> read_jsonl(std::istream& in);

std::vector<PairRecord> read_jsonl_file(const std::filesystem::path& path);
void write_jsonl_file(const std::vector<PairRecord>& records,
                      const std::filesystem::path& path);

/// Writes line-aligned source/target files (UTF-8, newline-terminated).
/// Texts with embedded newlines are rejected. Returns the record count.
std::size_t write_parallel(const std::vector<std::pair<std::string, std::string>>& pairs,
                           const std::filesystem::path& source_path,
                           const std::filesystem::path& target_path);

}  // namespace forge::ingest
