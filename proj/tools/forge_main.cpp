#include <fstream>
#include <iomanip>
#include <iostream>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "forge/core_types.hpp"
#include "forge/corpus_filter.hpp"
#include "forge/curriculum.hpp"
#include "forge/errors.hpp"
#include "forge/ingest.hpp"
#include "forge/metrics.hpp"
#include "forge/noiser.hpp"
#include "forge/pipeline.hpp"
#include "forge/report.hpp"
#include "forge/serializer.hpp"
#include "forge/subword.hpp"
#include "forge/triple_dedup.hpp"
#include "forge/unicode.hpp"

#include <nlohmann/json.hpp>

namespace {

using namespace forge;

struct GlobalOpts {
    int threads = 1;
    unsigned seed = 0;
    bool quiet = false;
};

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open " + path + " for writing");
    return out;
}

std::ifstream open_in(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    return in;
}

std::vector<std::string> read_lines(const std::string& path) {
    auto in = open_in(path);
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        lines.push_back(line);
    }
    return lines;
}

std::vector<std::string> split_whitespace(const std::string& line) {
    std::vector<std::string> toks;
    std::istringstream ss(line);
    std::string tok;
    while (ss >> tok) toks.push_back(tok);
    return toks;
}

std::string join(const std::vector<std::string>& toks) {
    std::string out;
    for (std::size_t i = 0; i < toks.size(); ++i) {
        if (i) out.push_back(' ');
        out += toks[i];
    }
    return out;
}

void add_ingest(CLI::App& app, const GlobalOpts& g) {
    auto* cmd = app.add_subcommand("ingest", "Read a corpus into JSONL pair records");
    auto format = std::make_shared<std::string>("webnlg-xml");
    auto in_path = std::make_shared<std::string>();
    auto out_path = std::make_shared<std::string>();
    auto split_name = std::make_shared<std::string>("train");
    auto keep_underscores = std::make_shared<bool>(false);
    cmd->add_option("--format", *format, "Input format")
        ->check(CLI::IsMember({"webnlg-xml", "jsonl"}))
        ->capture_default_str();
    cmd->add_option("--in", *in_path, "Input file")->required();
    cmd->add_option("--out", *out_path, "Output JSONL file")->required();
    cmd->add_option("--split", *split_name, "Split label for ingested records")
        ->capture_default_str();
    cmd->add_flag("--keep-underscores", *keep_underscores,
                  "Keep DBpedia-style underscores in subjects and objects");
    cmd->callback([=, &g] {
        auto split = split_from_string(*split_name);
        if (!split) throw DataError("unknown split label \"" + *split_name + "\"");
        if (*format == "webnlg-xml") {
            auto in = open_in(*in_path);
            auto result = ingest::read_webnlg_xml(in, *split, !*keep_underscores);
            ingest::write_jsonl_file(result.records, *out_path);
            if (!g.quiet)
                std::cerr << "ingest: " << result.records.size() << " records, "
                          << result.skipped << " skipped\n";
        } else {
            auto records = ingest::read_jsonl_file(*in_path);
            ingest::write_jsonl_file(records, *out_path);
            if (!g.quiet) std::cerr << "ingest: " << records.size() << " records\n";
        }
    });
}

void add_filter(CLI::App& app, const GlobalOpts& g) {
    auto* cmd = app.add_subcommand("filter", "Select clean sentences for the WS1 pool");
    auto in_path = std::make_shared<std::string>();
    auto out_path = std::make_shared<std::string>();
    auto stats_path = std::make_shared<std::string>();
    auto max_tokens = std::make_shared<std::size_t>(50);
    auto allow_chars = std::make_shared<std::string>();
    auto any_case = std::make_shared<bool>(false);
    auto any_terminal = std::make_shared<bool>(false);
    cmd->add_option("--in", *in_path, "Input sentences, one per line (- for stdin)")
        ->required();
    cmd->add_option("--out", *out_path, "Kept sentences (- for stdout)")->required();
    cmd->add_option("--max-tokens", *max_tokens, "Maximum whitespace token count")
        ->capture_default_str();
    cmd->add_option("--allow-chars", *allow_chars,
                    "Extra allowed punctuation characters (replaces the default set)");
    cmd->add_option("--stats", *stats_path, "Write filter statistics JSON here");
    cmd->add_flag("--any-case", *any_case, "Do not require an initial uppercase letter");
    cmd->add_flag("--any-terminal", *any_terminal, "Do not require a terminal period");
    cmd->callback([=, &g] {
        filter::FilterConfig cfg;
        cfg.max_tokens = *max_tokens;
        cfg.require_initial_uppercase = !*any_case;
        cfg.require_terminal_period = !*any_terminal;
        if (!allow_chars->empty()) {
            cfg.allowed_punct.clear();
            std::size_t pos = 0;
            char32_t cp;
            while (pos < allow_chars->size()) {
                std::size_t next = uni::decode_one(*allow_chars, pos, cp);
                if (next == pos) throw DataError("--allow-chars is not valid UTF-8");
                if (cp != U' ') cfg.allowed_punct.push_back(cp);
                pos = next;
            }
        }
        filter::FilterStats stats;
        std::ifstream fin;
        std::ofstream fout;
        std::istream* in = &std::cin;
        std::ostream* out = &std::cout;
        if (*in_path != "-") {
            fin = open_in(*in_path);
            in = &fin;
        }
        if (*out_path != "-") {
            fout = open_out(*out_path);
            out = &fout;
        }
        stats = filter::filter_corpus(*in, *out, cfg);
        if (!stats_path->empty()) open_out(*stats_path) << stats.to_json() << '\n';
        if (!g.quiet)
            std::cerr << "filter: kept " << stats.kept << " of " << stats.seen << '\n';
    });
}

void add_dedup(CLI::App& app, const GlobalOpts& g) {
    auto* cmd = app.add_subcommand(
        "dedup", "Prune redundant extracted triples and emit ST1 pair records");
    auto in_path = std::make_shared<std::string>();
    auto out_path = std::make_shared<std::string>();
    auto max_edit = std::make_shared<std::size_t>(2);
    auto bleu_threshold = std::make_shared<double>(50.0);
    cmd->add_option("--in", *in_path, "Extraction records JSONL")->required();
    cmd->add_option("--out", *out_path, "Output pair-record JSONL")->required();
    cmd->add_option("--max-edit", *max_edit, "Edit-distance similarity bound")
        ->capture_default_str();
    cmd->add_option("--bleu-threshold", *bleu_threshold, "BLEU similarity threshold")
        ->capture_default_str();
    cmd->callback([=, &g] {
        dedup::DedupConfig cfg{*max_edit, *bleu_threshold};
        std::vector<dedup::ExtractionRecord> extractions;
        std::size_t lineno = 0;
        for (const auto& line : read_lines(*in_path)) {
            ++lineno;
            if (trim(line).empty()) continue;
            try {
                extractions.push_back(dedup::extraction_from_json_line(line));
            } catch (const DataError& e) {
                throw DataError("line " + std::to_string(lineno) + ": " + e.what());
            }
        }
        auto st1 = dedup::build_st1(extractions, cfg);
        ingest::write_jsonl_file(st1.records, *out_path);
        if (!g.quiet)
            std::cerr << "dedup: " << st1.records.size() << " records, " << st1.failures
                      << " failures\n";
    });
}

void add_corrupt(CLI::App& app, const GlobalOpts& g) {
    auto* cmd = app.add_subcommand(
        "corrupt", "Build denoising pairs by keeping content-word POS classes");
    auto in_path = std::make_shared<std::string>();
    auto src_path = std::make_shared<std::string>();
    auto tgt_path = std::make_shared<std::string>();
    auto pretagged = std::make_shared<bool>(false);
    auto keep_tags = std::make_shared<std::string>();
    cmd->add_option("--in", *in_path, "Sentences, one per line")->required();
    cmd->add_option("--out-src", *src_path, "Corrupted source output")->required();
    cmd->add_option("--out-tgt", *tgt_path, "Original target output")->required();
    cmd->add_flag("--pretagged", *pretagged,
                  "Input tokens carry tags as surface_TAG (skips the fallback tagger)");
    cmd->add_option("--keep-tags", *keep_tags, "Comma-separated POS tags to keep");
    cmd->callback([=, &g] {
        noiser::NoiseConfig cfg;
        if (!keep_tags->empty()) {
            cfg.keep_tags.clear();
            std::stringstream ss(*keep_tags);
            std::string name;
            while (std::getline(ss, name, ',')) {
                auto tag = upos_from_string(trim(name));
                if (!tag) throw DataError("unknown POS tag \"" + name + "\"");
                cfg.keep_tags.insert(*tag);
            }
        }
        std::vector<TaggedSentence> tagged;
        std::size_t lineno = 0;
        for (const auto& line : read_lines(*in_path)) {
            ++lineno;
            if (trim(line).empty()) continue;
            if (*pretagged) {
                TaggedSentence sent;
                for (const auto& item : split_whitespace(line)) {
                    auto us = item.rfind('_');
                    if (us == std::string::npos || us == 0 || us + 1 >= item.size())
                        throw DataError("line " + std::to_string(lineno) + ": token \"" +
                                        item + "\" is not surface_TAG");
                    auto tag = upos_from_string(item.substr(us + 1));
                    if (!tag)
                        throw DataError("line " + std::to_string(lineno) +
                                        ": unknown POS tag in \"" + item + "\"");
                    sent.tokens.emplace_back(item.substr(0, us), *tag);
                }
                tagged.push_back(std::move(sent));
            } else {
                auto toks = subword::word_tokenize(line);
                if (!toks.empty()) tagged.push_back(noiser::tag_fallback(toks));
            }
        }
        auto result = noiser::build_ws1_pairs(tagged, cfg);
        ingest::write_parallel(result.pairs, *src_path, *tgt_path);
        if (!g.quiet)
            std::cerr << "corrupt: " << result.pairs.size() << " pairs, "
                      << result.skipped << " fully corrupted\n";
    });
}

void add_linearize(CLI::App& app, const GlobalOpts& g) {
    auto* cmd = app.add_subcommand(
        "linearize", "Serialize pair records into marker-token parallel files");
    auto in_path = std::make_shared<std::string>();
    auto src_path = std::make_shared<std::string>();
    auto tgt_path = std::make_shared<std::string>();
    auto tokenize_targets = std::make_shared<bool>(false);
    cmd->add_option("--in", *in_path, "Pair-record JSONL")->required();
    cmd->add_option("--out-src", *src_path, "Linearized source output")->required();
    cmd->add_option("--out-tgt", *tgt_path, "Target text output")->required();
    cmd->add_flag("--tokenize-targets", *tokenize_targets,
                  "Word-tokenize target text (as the run pipeline does)");
    cmd->callback([=, &g] {
        auto records = ingest::read_jsonl_file(*in_path);
        std::vector<std::pair<std::string, std::string>> pairs;
        pairs.reserve(records.size());
        for (const auto& rec : records) {
            auto [src, tgt] = serializer::build_training_pair(rec);
            if (*tokenize_targets) tgt = join(subword::word_tokenize(tgt));
            pairs.emplace_back(std::move(src), std::move(tgt));
        }
        ingest::write_parallel(pairs, *src_path, *tgt_path);
        if (!g.quiet) std::cerr << "linearize: " << pairs.size() << " records\n";
    });
}

void add_bpe(CLI::App& app, const GlobalOpts& g) {
    auto* learn = app.add_subcommand("bpe-learn", "Learn BPE merges from text files");
    auto learn_in = std::make_shared<std::vector<std::string>>();
    auto merges = std::make_shared<std::size_t>(10000);
    auto model_path = std::make_shared<std::string>();
    auto vocab_path = std::make_shared<std::string>();
    auto restrict_to = std::make_shared<std::vector<std::string>>();
    learn->add_option("--in", *learn_in, "Training text files")->required();
    learn->add_option("--merges", *merges, "Number of merge operations")
        ->capture_default_str();
    learn->add_option("--model", *model_path, "Model output path")->required();
    learn->add_option("--vocab", *vocab_path, "Vocabulary output path");
    learn->add_option("--restrict-to", *restrict_to,
                      "Restrict the vocabulary to the text in these files");
    learn->callback([=, &g] {
        std::vector<std::string> tokens;
        for (const auto& path : *learn_in)
            for (const auto& line : read_lines(path))
                for (auto& tok : subword::word_tokenize(line)) tokens.push_back(std::move(tok));
        auto model = subword::bpe_learn(tokens, *merges);
        if (!restrict_to->empty()) {
            std::vector<std::string> ref_tokens;
            for (const auto& path : *restrict_to)
                for (const auto& line : read_lines(path))
                    for (auto& tok : subword::word_tokenize(line))
                        ref_tokens.push_back(std::move(tok));
            model = subword::build_transduction_vocab(model, ref_tokens);
        }
        subword::save_model(model, *model_path);
        if (!vocab_path->empty()) subword::save_vocab(model, *vocab_path);
        if (!g.quiet)
            std::cerr << "bpe-learn: " << model.merges.size() << " merges, "
                      << model.vocab.size() << " vocabulary types\n";
    });

    auto* apply = app.add_subcommand("bpe-apply", "Segment tokenized text with a model");
    auto apply_model = std::make_shared<std::string>();
    auto apply_vocab = std::make_shared<std::string>();
    auto apply_in = std::make_shared<std::string>();
    auto apply_out = std::make_shared<std::string>();
    auto apply_tokenize = std::make_shared<bool>(false);
    apply->add_option("--model", *apply_model, "Model path")->required();
    apply->add_option("--vocab", *apply_vocab,
                      "Vocabulary path (pieces outside it become <unk>)");
    apply->add_option("--in", *apply_in, "Input text")->required();
    apply->add_option("--out", *apply_out, "Segmented output")->required();
    apply->add_flag("--tokenize", *apply_tokenize, "Word-tokenize lines first");
    apply->callback([=, &g] {
        auto model = subword::load_model(*apply_model);
        if (!apply_vocab->empty()) subword::load_vocab(model, *apply_vocab);
        auto out = open_out(*apply_out);
        std::size_t lines = 0;
        for (const auto& line : read_lines(*apply_in)) {
            auto toks = *apply_tokenize ? subword::word_tokenize(line)
                                        : split_whitespace(line);
            out << join(subword::bpe_apply(model, toks)) << '\n';
            ++lines;
        }
        if (!g.quiet) std::cerr << "bpe-apply: " << lines << " lines\n";
    });

    auto* undo = app.add_subcommand("bpe-undo", "Rejoin subword pieces into words");
    auto undo_in = std::make_shared<std::string>();
    auto undo_out = std::make_shared<std::string>();
    auto undo_detok = std::make_shared<bool>(false);
    undo->add_option("--in", *undo_in, "Segmented text")->required();
    undo->add_option("--out", *undo_out, "Output text")->required();
    undo->add_flag("--detokenize", *undo_detok, "Also detokenize the rejoined words");
    undo->callback([=, &g] {
        auto out = open_out(*undo_out);
        std::size_t lines = 0, lineno = 0;
        for (const auto& line : read_lines(*undo_in)) {
            ++lineno;
            try {
                auto words = subword::bpe_undo(split_whitespace(line));
                out << (*undo_detok ? subword::detokenize(words) : join(words)) << '\n';
            } catch (const DataError& e) {
                throw DataError("line " + std::to_string(lineno) + ": " + e.what());
            }
            ++lines;
        }
        if (!g.quiet) std::cerr << "bpe-undo: " << lines << " lines\n";
    });
}

void add_order(CLI::App& app, const GlobalOpts& g) {
    auto* cmd = app.add_subcommand("order", "Sort pair records by triple count");
    auto in_path = std::make_shared<std::string>();
    auto out_path = std::make_shared<std::string>();
    cmd->add_option("--in", *in_path, "Pair-record JSONL")->required();
    cmd->add_option("--out", *out_path, "Ordered output JSONL")->required();
    cmd->callback([=, &g] {
        auto records = curriculum::order_dataset(ingest::read_jsonl_file(*in_path));
        ingest::write_jsonl_file(records, *out_path);
        if (!g.quiet) std::cerr << "order: " << records.size() << " records\n";
    });
}

void add_schedule(CLI::App& app, const GlobalOpts& g) {
    auto* cmd = app.add_subcommand("schedule", "Emit the training-schedule descriptor");
    auto out_path = std::make_shared<std::string>();
    auto no_curriculum = std::make_shared<bool>(false);
    auto pretrain = std::make_shared<int>(10);
    auto patience = std::make_shared<int>(30);
    auto beam = std::make_shared<int>(5);
    auto no_shuffle = std::make_shared<int>(30);
    cmd->add_option("--out", *out_path, "Output JSON path")->required();
    cmd->add_flag("--no-curriculum", *no_curriculum, "Disable curriculum ordering");
    cmd->add_option("--pretrain-epochs", *pretrain, "")->capture_default_str();
    cmd->add_option("--patience", *patience, "")->capture_default_str();
    cmd->add_option("--beam", *beam, "")->capture_default_str();
    cmd->add_option("--no-shuffle-epochs", *no_shuffle, "")->capture_default_str();
    cmd->callback([=, &g] {
        auto sched = curriculum::make_schedule(!*no_curriculum, *pretrain, *patience,
                                               *beam, *no_shuffle);
        open_out(*out_path) << curriculum::schedule_to_json(sched) << '\n';
        if (!g.quiet) std::cerr << "schedule: wrote " << *out_path << '\n';
    });
}

void add_evaluate(CLI::App& app, const GlobalOpts& g) {
    auto* cmd = app.add_subcommand("evaluate", "Score a hypothesis file");
    auto hyp_path = std::make_shared<std::string>();
    auto ref_paths = std::make_shared<std::vector<std::string>>();
    auto refs_jsonl = std::make_shared<std::string>();
    auto split_name = std::make_shared<std::string>();
    auto metrics_list = std::make_shared<std::string>("bleu,chrf,meteor");
    auto json_path = std::make_shared<std::string>();
    auto lowercase = std::make_shared<bool>(false);
    cmd->add_option("--hyp", *hyp_path, "Hypothesis file, one segment per line")
        ->required();
    cmd->add_option("--refs", *ref_paths, "Reference files (line-aligned)")
        ->delimiter(',');
    cmd->add_option("--refs-jsonl", *refs_jsonl,
                    "Pair-record JSONL; records with equal triplesets become one "
                    "multi-reference segment");
    cmd->add_option("--split", *split_name, "Only use records of this split");
    cmd->add_option("--metrics", *metrics_list, "Metrics to report")
        ->capture_default_str();
    cmd->add_option("--json", *json_path, "Write scores as JSON here");
    cmd->add_flag("--lowercase", *lowercase, "Lowercase before scoring");
    cmd->callback([=, &g] {
        if (ref_paths->empty() == refs_jsonl->empty())
            throw DataError("provide exactly one of --refs or --refs-jsonl");
        auto hyps = read_lines(*hyp_path);
        std::vector<std::vector<std::string>> refs;
        if (!refs_jsonl->empty()) {
            auto records = ingest::read_jsonl_file(*refs_jsonl);
            if (!split_name->empty()) {
                auto split = split_from_string(*split_name);
                if (!split) throw DataError("unknown split \"" + *split_name + "\"");
                std::erase_if(records,
                              [&](const PairRecord& r) { return r.split != *split; });
            }
            refs = report::grouped_references(records);
        } else {
            refs.resize(hyps.size());
            for (const auto& path : *ref_paths) {
                auto lines = read_lines(path);
                if (lines.size() != hyps.size())
                    throw DataError("reference " + path + " has " +
                                    std::to_string(lines.size()) + " lines, expected " +
                                    std::to_string(hyps.size()));
                for (std::size_t i = 0; i < hyps.size(); ++i)
                    refs[i].push_back(lines[i]);
            }
        }
        if (refs.size() != hyps.size())
            throw DataError("hypothesis has " + std::to_string(hyps.size()) +
                            " segments but references form " +
                            std::to_string(refs.size()));
        auto scores = report::score_corpus(hyps, refs, *lowercase);

        std::set<std::string> wanted;
        std::stringstream ss(*metrics_list);
        std::string name;
        while (std::getline(ss, name, ',')) wanted.insert(trim(name));
        nlohmann::ordered_json out;
        out["segments"] = scores.segments;
        if (wanted.count("bleu")) out["bleu"] = scores.bleu;
        if (wanted.count("meteor")) out["meteor"] = scores.meteor;
        if (wanted.count("chrf")) out["chrf"] = scores.chrf;
        out["bleurt"] = "n/a";
        if (!json_path->empty()) open_out(*json_path) << out.dump(2) << '\n';
        if (!g.quiet) {
            std::cout.setf(std::ios::fixed);
            if (wanted.count("bleu"))
                std::cout << "BLEU    " << std::setprecision(2) << scores.bleu << '\n';
            if (wanted.count("meteor"))
                std::cout << "METEOR  " << std::setprecision(4) << scores.meteor << '\n';
            if (wanted.count("chrf"))
                std::cout << "chrf++  " << std::setprecision(2) << scores.chrf << '\n';
        }
    });
}

void add_report(CLI::App& app, const GlobalOpts& g) {
    auto* cmd = app.add_subcommand("report", "Build the ablation table");
    auto groups_path = std::make_shared<std::string>();
    auto tsv_path = std::make_shared<std::string>();
    auto json_path = std::make_shared<std::string>();
    auto lowercase = std::make_shared<bool>(false);
    cmd->add_option("--groups", *groups_path, "Groups JSON (flags, split, hyp, refs)")
        ->required();
    cmd->add_option("--tsv", *tsv_path, "TSV output path");
    cmd->add_option("--json", *json_path, "JSON output path");
    cmd->add_flag("--lowercase", *lowercase, "Lowercase before scoring");
    cmd->callback([=, &g] {
        auto groups = report::load_groups(*groups_path);
        auto rows = report::build_report(groups, *lowercase);
        std::string tsv = report::report_tsv(rows);
        if (!tsv_path->empty()) open_out(*tsv_path) << tsv;
        if (!json_path->empty()) open_out(*json_path) << report::report_json(rows) << '\n';
        if (tsv_path->empty() && json_path->empty()) std::cout << tsv;
        if (!g.quiet) std::cerr << "report: " << rows.size() << " rows\n";
    });
}

void add_run(CLI::App& app, const GlobalOpts& g) {
    auto* cmd = app.add_subcommand("run", "Run the full preprocessing pipeline");
    auto config_path = std::make_shared<std::string>();
    cmd->add_option("--config", *config_path, "Pipeline config JSON")->required();
    cmd->callback([=, &g] {
        auto cfg = pipeline::load_pipeline_config(*config_path);
        auto manifest = pipeline::run_pipeline(cfg, g.quiet ? nullptr : &std::cerr);
        if (!g.quiet)
            std::cerr << "run: " << manifest.files.size() << " files in "
                      << cfg.out_dir.string() << '\n';
        std::cout << (cfg.out_dir / "manifest.json").string() << '\n';
    });
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"forge: data augmentation, preprocessing and evaluation for "
                 "RDF-to-text experiments"};
    app.require_subcommand(1);
    GlobalOpts g;
    app.add_option("--threads", g.threads, "Worker threads (reserved; stages are "
                                           "currently single-threaded)");
    app.add_option("--seed", g.seed, "Random seed (reserved; all operations are "
                                     "deterministic)");
    app.add_flag("--quiet", g.quiet, "Suppress progress output");

    add_ingest(app, g);
    add_filter(app, g);
    add_dedup(app, g);
    add_corrupt(app, g);
    add_linearize(app, g);
    add_bpe(app, g);
    add_order(app, g);
    add_schedule(app, g);
    add_evaluate(app, g);
    add_report(app, g);
    add_run(app, g);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    } catch (const forge::IoError& e) {
        std::cerr << "forge: I/O error: " << e.what() << '\n';
        return 3;
    } catch (const forge::DataError& e) {
        std::cerr << "forge: data error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "forge: error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
