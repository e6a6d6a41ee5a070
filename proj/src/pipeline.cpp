#include "forge/pipeline.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

#include <nlohmann/json.hpp>
#include <openssl/evp.h>

#include "forge/core_types.hpp"
#include "forge/curriculum.hpp"
#include "forge/errors.hpp"
#include "forge/ingest.hpp"
#include "forge/noiser.hpp"
#include "forge/serializer.hpp"
#include "forge/subword.hpp"
#include "forge/unicode.hpp"

namespace forge::pipeline {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

std::string sha256_hex(std::string_view bytes) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1)
        throw IoError("sha256 digest failed");
    static const char* hex = "0123456789abcdef";
    std::string out;
    out.reserve(len * 2);
    for (unsigned int i = 0; i < len; ++i) {
        out.push_back(hex[md[i] >> 4]);
        out.push_back(hex[md[i] & 0xF]);
    }
    return out;
}

std::string sha256_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    EVP_MD_CTX* ctx = EVP_MD_CTX_new();
    if (!ctx) throw IoError("sha256 context allocation failed");
    EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr);
    char buf[1 << 16];
    while (in.read(buf, sizeof buf) || in.gcount() > 0)
        EVP_DigestUpdate(ctx, buf, static_cast<std::size_t>(in.gcount()));
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_DigestFinal_ex(ctx, md, &len);
    EVP_MD_CTX_free(ctx);
    static const char* hex = "0123456789abcdef";
    std::string out;
    out.reserve(len * 2);
    for (unsigned int i = 0; i < len; ++i) {
        out.push_back(hex[md[i] >> 4]);
        out.push_back(hex[md[i] & 0xF]);
    }
    return out;
}

PipelineConfig load_pipeline_config(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open config " + path.string());
    ordered_json doc;
    try {
        doc = ordered_json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw DataError(path.string() + ": " + e.what());
    }
    fs::path base = path.parent_path();
    auto resolve = [&base](const std::string& p) {
        fs::path fp(p);
        return fp.is_absolute() ? fp : base / fp;
    };

    PipelineConfig cfg;
    if (!doc.contains("webnlg")) throw DataError("config is missing \"webnlg\"");
    cfg.webnlg_jsonl = resolve(doc["webnlg"].get<std::string>());
    cfg.out_dir = resolve(doc.value("out_dir", std::string("out")));
    cfg.curriculum = doc.value("curriculum", true);

    if (doc.contains("ws1") && !doc["ws1"].is_null()) {
        const auto& ws1 = doc["ws1"];
        if (!ws1.contains("sentences"))
            throw DataError("config ws1 block is missing \"sentences\"");
        cfg.ws1_sentences = resolve(ws1["sentences"].get<std::string>());
        cfg.ws1_pretagged = ws1.value("pretagged", false);
    }
    if (doc.contains("st1") && !doc["st1"].is_null()) {
        const auto& st1 = doc["st1"];
        if (!st1.contains("extractions"))
            throw DataError("config st1 block is missing \"extractions\"");
        cfg.st1_extractions = resolve(st1["extractions"].get<std::string>());
    }
    if (doc.contains("filter")) {
        const auto& f = doc["filter"];
        cfg.filter.max_tokens = f.value("max_tokens", std::size_t{50});
        cfg.filter.require_initial_uppercase = f.value("require_initial_uppercase", true);
        cfg.filter.require_terminal_period = f.value("require_terminal_period", true);
        if (f.contains("allowed_punct")) {
            std::string raw = f["allowed_punct"].get<std::string>();
            cfg.filter.allowed_punct.clear();
            std::size_t pos = 0;
            char32_t cp;
            while (pos < raw.size()) {
                std::size_t next = uni::decode_one(raw, pos, cp);
                if (next == pos) throw DataError("allowed_punct is not valid UTF-8");
                if (cp != U' ') cfg.filter.allowed_punct.push_back(cp);
                pos = next;
            }
        }
    }
    if (doc.contains("dedup")) {
        const auto& d = doc["dedup"];
        cfg.dedup.max_edit_distance = d.value("max_edit_distance", std::size_t{2});
        cfg.dedup.bleu_threshold = d.value("bleu_threshold", 50.0);
    }
    if (doc.contains("bpe")) cfg.bpe_merges = doc["bpe"].value("merges", std::size_t{10000});
    return cfg;
}

std::string Manifest::to_json() const {
    ordered_json files_json = ordered_json::array();
    for (const auto& f : files)
        files_json.push_back(
            {{"path", f.path}, {"records", f.records}, {"sha256", f.sha256}});
    return ordered_json{{"files", std::move(files_json)}}.dump(2);
}

namespace {

struct StageContext {
    const PipelineConfig& cfg;
    std::ostream* log;
    std::vector<fs::path> produced;

    void note(const std::string& msg) const {
        if (log) *log << msg << '\n';
    }

    fs::path out(const std::string& rel) {
        fs::path p = cfg.out_dir / rel;
        produced.push_back(p);
        return p;
    }
};

template <typename Fn>
auto run_stage(const char* name, Fn&& fn) {
    try {
        return fn();
    } catch (const DataError& e) {
        throw DataError(std::string("stage ") + name + ": " + e.what());
    } catch (const IoError& e) {
        throw IoError(std::string("stage ") + name + ": " + e.what());
    }
}

std::string tokenized_target(const std::string& text) {
    auto toks = subword::word_tokenize(text);
    std::string out;
    for (std::size_t i = 0; i < toks.size(); ++i) {
        if (i) out.push_back(' ');
        out += toks[i];
    }
    return out;
}

std::vector<std::string> read_lines_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        lines.push_back(line);
    }
    return lines;
}

void append_file_tokens(const fs::path& path, std::vector<std::string>& tokens) {
    for (const auto& line : read_lines_file(path)) {
        std::istringstream ss(line);
        std::string tok;
        while (ss >> tok) tokens.push_back(tok);
    }
}

TaggedSentence parse_pretagged(const std::string& line, std::size_t lineno) {
    TaggedSentence sent;
    std::istringstream ss(line);
    std::string item;
    while (ss >> item) {
        auto us = item.rfind('_');
        if (us == std::string::npos || us == 0 || us + 1 >= item.size())
            throw DataError("line " + std::to_string(lineno) +
                            ": token \"" + item + "\" is not surface_TAG");
        auto tag = upos_from_string(item.substr(us + 1));
        if (!tag)
            throw DataError("line " + std::to_string(lineno) + ": unknown POS tag in \"" +
                            item + "\"");
        sent.tokens.emplace_back(item.substr(0, us), *tag);
    }
    if (sent.tokens.empty())
        throw DataError("line " + std::to_string(lineno) + ": empty pre-tagged sentence");
    return sent;
}

std::size_t count_lines(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    char buf[1 << 16];
    std::size_t lines = 0;
    while (in.read(buf, sizeof buf) || in.gcount() > 0)
        lines += static_cast<std::size_t>(
            std::count(buf, buf + in.gcount(), '\n'));
    return lines;
}

void write_text(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out << content;
    if (!out) throw IoError("failed writing " + path.string());
}

}  // namespace

Manifest run_pipeline(const PipelineConfig& cfg, std::ostream* log) {
    StageContext ctx{cfg, log, {}};
    fs::create_directories(cfg.out_dir / "raw");

    // ingest + order + linearize WebNLG
    auto records = run_stage("ingest", [&] {
        return ingest::read_jsonl_file(cfg.webnlg_jsonl);
    });
    if (records.empty())
        throw DataError("stage ingest: no records in " + cfg.webnlg_jsonl.string());

    std::map<Split, std::vector<PairRecord>> by_split;
    for (auto& rec : records) by_split[rec.split].push_back(std::move(rec));
    if (!by_split.count(Split::train))
        throw DataError("stage ingest: no train-split records");

    if (cfg.curriculum) {
        run_stage("order", [&] {
            by_split[Split::train] =
                curriculum::order_dataset(std::move(by_split[Split::train]));
            return 0;
        });
    }

    struct ParallelFile {
        std::string name;  // e.g. "webnlg.train"
        fs::path raw_src, raw_tgt;
    };
    std::vector<ParallelFile> parallel;

    run_stage("linearize", [&] {
        for (const auto& [split, recs] : by_split) {
            std::vector<std::pair<std::string, std::string>> pairs;
            pairs.reserve(recs.size());
            for (const auto& rec : recs) {
                auto [src, tgt] = serializer::build_training_pair(rec);
                pairs.emplace_back(std::move(src), tokenized_target(tgt));
            }
            std::string name = "webnlg." + std::string(to_string(split));
            ParallelFile pf{name, ctx.out("raw/" + name + ".src"),
                            ctx.out("raw/" + name + ".tgt")};
            ingest::write_parallel(pairs, pf.raw_src, pf.raw_tgt);
            ctx.note("linearize: " + name + " (" + std::to_string(pairs.size()) +
                     " records)");
            parallel.push_back(std::move(pf));
        }
        return 0;
    });

    if (cfg.ws1_sentences) {
        fs::path filtered = run_stage("filter", [&] {
            std::ifstream in(*cfg.ws1_sentences, std::ios::binary);
            if (!in) throw IoError("cannot open " + cfg.ws1_sentences->string());
            fs::path out_path = ctx.out("raw/ws1.filtered.txt");
            std::ofstream out(out_path, std::ios::binary);
            if (!out) throw IoError("cannot open " + out_path.string() + " for writing");
            filter::FilterStats stats = filter::filter_corpus(in, out, cfg.filter);
            write_text(ctx.out("ws1.filter_stats.json"), stats.to_json() + "\n");
            ctx.note("filter: kept " + std::to_string(stats.kept) + " of " +
                     std::to_string(stats.seen) + " sentences");
            return out_path;
        });

        run_stage("corrupt", [&] {
            std::vector<TaggedSentence> tagged;
            std::size_t lineno = 0;
            for (const auto& line : read_lines_file(filtered)) {
                ++lineno;
                if (trim(line).empty()) continue;
                if (cfg.ws1_pretagged) {
                    tagged.push_back(parse_pretagged(line, lineno));
                } else {
                    auto toks = subword::word_tokenize(line);
                    if (!toks.empty()) tagged.push_back(noiser::tag_fallback(toks));
                }
            }
            auto ws1 = noiser::build_ws1_pairs(tagged, noiser::NoiseConfig{});
            ParallelFile pf{"ws1.train", ctx.out("raw/ws1.train.src"),
                            ctx.out("raw/ws1.train.tgt")};
            ingest::write_parallel(ws1.pairs, pf.raw_src, pf.raw_tgt);
            ctx.note("corrupt: " + std::to_string(ws1.pairs.size()) + " pairs, " +
                     std::to_string(ws1.skipped) + " fully corrupted");
            parallel.push_back(std::move(pf));
            return 0;
        });
    }

    if (cfg.st1_extractions) {
        run_stage("dedup", [&] {
            std::vector<dedup::ExtractionRecord> extractions;
            std::size_t lineno = 0;
            for (const auto& line : read_lines_file(*cfg.st1_extractions)) {
                ++lineno;
                if (trim(line).empty()) continue;
                try {
                    extractions.push_back(dedup::extraction_from_json_line(line));
                } catch (const DataError& e) {
                    throw DataError(cfg.st1_extractions->string() + ": line " +
                                    std::to_string(lineno) + ": " + e.what());
                }
            }
            auto st1 = dedup::build_st1(extractions, cfg.dedup);
            ingest::write_jsonl_file(st1.records, ctx.out("st1.records.jsonl"));

            std::vector<std::pair<std::string, std::string>> pairs;
            pairs.reserve(st1.records.size());
            for (const auto& rec : st1.records) {
                auto [src, tgt] = serializer::build_training_pair(rec);
                pairs.emplace_back(std::move(src), tokenized_target(tgt));
            }
            ParallelFile pf{"st1.train", ctx.out("raw/st1.train.src"),
                            ctx.out("raw/st1.train.tgt")};
            ingest::write_parallel(pairs, pf.raw_src, pf.raw_tgt);
            ctx.note("dedup: " + std::to_string(st1.records.size()) + " records, " +
                     std::to_string(st1.failures) + " failures");
            parallel.push_back(std::move(pf));
            return 0;
        });
    }

    // BPE: merges from the WebNLG training text, vocabulary restricted to
    // the whole WebNLG corpus so pre-training shares the symbol space.
    subword::BpeModel model = run_stage("bpe", [&] {
        std::vector<std::string> train_tokens;
        std::vector<std::string> webnlg_tokens;
        for (const auto& pf : parallel) {
            if (pf.name.rfind("webnlg.", 0) != 0) continue;
            std::vector<std::string> toks;
            append_file_tokens(pf.raw_src, toks);
            append_file_tokens(pf.raw_tgt, toks);
            if (pf.name == "webnlg.train")
                train_tokens.insert(train_tokens.end(), toks.begin(), toks.end());
            webnlg_tokens.insert(webnlg_tokens.end(), toks.begin(), toks.end());
        }
        auto learned = subword::bpe_learn(train_tokens, cfg.bpe_merges);
        auto restricted = subword::build_transduction_vocab(learned, webnlg_tokens);
        subword::save_model(restricted, ctx.out("bpe.model"));
        subword::save_vocab(restricted, ctx.out("bpe.vocab"));
        ctx.note("bpe: " + std::to_string(restricted.merges.size()) + " merges, " +
                 std::to_string(restricted.vocab.size()) + " vocabulary types");

        for (const auto& pf : parallel) {
            for (auto [raw, final_ext] :
                 {std::pair{pf.raw_src, ".src"}, std::pair{pf.raw_tgt, ".tgt"}}) {
                std::string out_text;
                for (const auto& line : read_lines_file(raw)) {
                    auto pieces = subword::bpe_apply(
                        restricted, subword::word_tokenize(line));
                    for (std::size_t i = 0; i < pieces.size(); ++i) {
                        if (i) out_text.push_back(' ');
                        out_text += pieces[i];
                    }
                    out_text.push_back('\n');
                }
                write_text(ctx.out(pf.name + final_ext), out_text);
            }
        }
        return restricted;
    });

    run_stage("schedule", [&] {
        auto sched = curriculum::make_schedule(cfg.curriculum);
        write_text(ctx.out("schedule.json"), curriculum::schedule_to_json(sched) + "\n");
        return 0;
    });

    // trainer handoff checks: aligned line counts and vocabulary closure
    run_stage("validate", [&] {
        for (const auto& pf : parallel) {
            fs::path src = cfg.out_dir / (pf.name + ".src");
            fs::path tgt = cfg.out_dir / (pf.name + ".tgt");
            if (count_lines(src) != count_lines(tgt))
                throw DataError(pf.name + ": source/target line counts differ");
            for (const auto& p : {src, tgt})
                for (const auto& line : read_lines_file(p)) {
                    std::istringstream ss(line);
                    std::string tok;
                    while (ss >> tok)
                        if (!model.vocab.count(tok) && tok != kUnkToken)
                            throw DataError(p.string() + ": token \"" + tok +
                                            "\" outside the transduction vocabulary");
                }
        }
        return 0;
    });

    Manifest manifest;
    for (const auto& path : ctx.produced) {
        ManifestEntry entry;
        entry.path = fs::relative(path, cfg.out_dir).generic_string();
        entry.records = count_lines(path);
        entry.sha256 = sha256_file(path);
        manifest.files.push_back(std::move(entry));
    }
    std::sort(manifest.files.begin(), manifest.files.end(),
              [](const ManifestEntry& a, const ManifestEntry& b) { return a.path < b.path; });
    write_text(cfg.out_dir / "manifest.json", manifest.to_json() + "\n");
    return manifest;
}

}  // namespace forge::pipeline
