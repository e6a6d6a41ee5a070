#pragma once

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "forge/corpus_filter.hpp"
#include "forge/triple_dedup.hpp"

namespace forge::pipeline {

struct PipelineConfig {
    std::filesystem::path out_dir = "out";
    std::filesystem::path webnlg_jsonl;  // required: ingested records, any splits

    std::optional<std::filesystem::path> ws1_sentences;  // raw, one per line
    bool ws1_pretagged = false;
    std::optional<std::filesystem::path> st1_extractions;  // extraction JSONL

    bool curriculum = true;
    filter::FilterConfig filter;
    dedup::DedupConfig dedup;
    std::size_t bpe_merges = 10000;
};

PipelineConfig load_pipeline_config(const std::filesystem::path& path);

struct ManifestEntry {
    std::string path;  // relative to out_dir
    std::size_t records = 0;
    std::string sha256;

    bool operator==(const ManifestEntry&) const = default;
};

struct Manifest {
    std::vector<ManifestEntry> files;  // sorted by path

    std::string to_json() const;
    bool operator==(const Manifest&) const = default;
};

std::string sha256_hex(std::string_view bytes);
std::string sha256_file(const std::filesystem::path& path);

/// Runs filter -> dedup -> corrupt -> linearize -> bpe -> order over the
/// configured corpora and writes trainer-ready parallel files, the BPE
/// model/vocab, schedule.json and manifest.json under out_dir. Stage
/// failures abort with the stage name. Identical inputs and config
/// reproduce identical digests.
Manifest run_pipeline(const PipelineConfig& cfg, std::ostream* log = nullptr);

}  // namespace forge::pipeline
