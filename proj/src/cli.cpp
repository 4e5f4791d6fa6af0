// Copyright 2026 The cobs authors
// Licensed under the Apache License, Version 2.0
#include "cobs/cli.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <mutex>
#include <optional>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"

#include "cobs/bloom.hpp"
#include "cobs/compact_index.hpp"
#include "cobs/error.hpp"
#include "cobs/query.hpp"
#include "cobs/storage.hpp"
#include "cobs/termizer.hpp"
#include "cobs/validate.hpp"

namespace cobs::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
        .count();
}

uint32_t default_workers() {
    if (const char* env = std::getenv("COBS_WORKERS")) {
        char* end = nullptr;
        unsigned long v = std::strtoul(env, &end, 10);
        if (end == env || *end != '\0' || v < 1)
            throw std::invalid_argument("COBS_WORKERS must be a positive integer");
        return static_cast<uint32_t>(v);
    }
    uint32_t hw = std::thread::hardware_concurrency();
    return hw > 0 ? hw : 1;
}

InputFormat parse_format(const std::string& name) {
    if (name == "auto") return InputFormat::autodetect;
    if (name == "fasta") return InputFormat::fasta;
    if (name == "text") return InputFormat::text;
    throw std::invalid_argument("unknown input format: " + name);
}

//! Files from the argument list; directories expand recursively in
//! lexicographic path order so document numbering is stable.
std::vector<fs::path> expand_inputs(const std::vector<std::string>& inputs) {
    std::vector<fs::path> files;
    for (const std::string& input : inputs) {
        fs::path path(input);
        std::error_code ec;
        if (fs::is_directory(path, ec)) {
            std::vector<fs::path> found;
            for (const auto& entry : fs::recursive_directory_iterator(path))
                if (entry.is_regular_file()) found.push_back(entry.path());
            std::sort(found.begin(), found.end(),
                      [](const fs::path& a, const fs::path& b) {
                          return a.string() < b.string();
                      });
            files.insert(files.end(), found.begin(), found.end());
        } else if (fs::is_regular_file(path, ec)) {
            files.push_back(path);
        } else {
            throw DataError("input not found: " + input);
        }
    }
    if (files.empty()) throw DataError("no input files");
    return files;
}

template <typename Fn>
void parallel_for(size_t n, uint32_t workers, Fn&& fn) {
    if (workers <= 1 || n <= 1) {
        for (size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<size_t> next{0};
    std::vector<std::thread> threads;
    uint32_t count = static_cast<uint32_t>(std::min<size_t>(workers, n));
    threads.reserve(count);
    for (uint32_t t = 0; t < count; ++t)
        threads.emplace_back([&] {
            for (size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
        });
    for (auto& th : threads) th.join();
}

// ---- build ------------------------------------------------------------

struct BuildArgs {
    std::vector<std::string> inputs;
    std::string out;
    std::string mode = "compact";
    IndexParams params;
    std::string format = "auto";
    uint32_t workers = 0;
};

int cmd_build(const BuildArgs& args) {
    args.params.validate();
    uint32_t workers = args.workers > 0 ? args.workers : default_workers();
    InputFormat format = parse_format(args.format);

    auto t0 = std::chrono::steady_clock::now();
    std::vector<fs::path> files = expand_inputs(args.inputs);
    std::vector<TermSet> docs(files.size());
    std::exception_ptr load_error;
    std::mutex error_mutex;
    parallel_for(files.size(), workers, [&](size_t i) {
        try {
            docs[i] = load_document(files[i], args.params.q, args.params.canonical,
                                    format);
        } catch (...) {
            std::lock_guard lock(error_mutex);
            if (!load_error) load_error = std::current_exception();
        }
    });
    if (load_error) std::rethrow_exception(load_error);
    uint64_t total_terms = 0, total_skipped = 0;
    for (const TermSet& d : docs) {
        total_terms += d.term_count();
        total_skipped += d.skipped;
    }
    std::cerr << "loaded " << docs.size() << " documents, " << total_terms
              << " distinct terms";
    if (total_skipped > 0) std::cerr << " (" << total_skipped << " grams skipped)";
    std::cerr << " in " << seconds_since(t0) << " s\n";

    auto t1 = std::chrono::steady_clock::now();
    uint64_t footprint = 0;
    if (args.mode == "classic") {
        ClassicIndex index = build_classic(docs, args.params, workers);
        footprint = index_footprint(index);
        std::cerr << "built classic index, width " << index.w << ", in "
                  << seconds_since(t1) << " s\n";
        auto t2 = std::chrono::steady_clock::now();
        write_index(index, args.out);
        std::cerr << "wrote " << args.out << " (payload " << footprint
                  << " bytes) in " << seconds_since(t2) << " s\n";
    } else if (args.mode == "compact") {
        CompactIndex index = build_compact(docs, args.params, workers);
        footprint = index_footprint(index);
        std::cerr << "built compact index, " << index.blocks.size() << " blocks, in "
                  << seconds_since(t1) << " s\n";
        auto t2 = std::chrono::steady_clock::now();
        write_index(index, args.out);
        std::cerr << "wrote " << args.out << " (payload " << footprint
                  << " bytes) in " << seconds_since(t2) << " s\n";
    } else {
        throw std::invalid_argument("unknown mode: " + args.mode);
    }
    return 0;
}

// ---- query ------------------------------------------------------------

struct QueryArgs {
    std::string index;
    std::string pattern;
    std::string file;
    double K = 0.9;
    uint64_t top = 0;
    std::string memory = "resident";
    uint32_t workers = 0;
};

std::unique_ptr<IndexView> open_view(const std::string& path,
                                     const std::string& memory) {
    if (memory == "resident") return open_resident(path);
    if (memory == "random-access") return open_random_access(path);
    throw std::invalid_argument("unknown memory mode: " + memory);
}

void print_hits(std::ostream& out, const QueryResult& result) {
    for (const ScoredHit& hit : result.hits)
        out << hit.doc_name << '\t' << hit.score << '\t' << result.ell << '\n';
}

int cmd_query(const QueryArgs& args) {
    if (!(args.K > 0.0 && args.K <= 1.0))
        throw std::invalid_argument("K must be in (0,1]");
    uint32_t workers = args.workers > 0 ? args.workers : default_workers();
    std::unique_ptr<IndexView> view = open_view(args.index, args.memory);

    if (!args.pattern.empty()) {
        QueryResult result = query(*view, args.pattern,
                                   {.K = args.K, .top_t = args.top, .workers = workers});
        print_hits(std::cout, result);
        return 0;
    }

    // Batch mode: queries run concurrently, output stays in input order.
    auto queries = read_fasta_named(args.file);
    std::vector<std::string> outputs(queries.size());
    parallel_for(queries.size(), workers, [&](size_t i) {
        std::ostringstream out;
        const auto& [name, sequence] = queries[i];
        try {
            QueryResult result =
                query(*view, sequence, {.K = args.K, .top_t = args.top});
            out << '*' << name << '\t' << result.hits.size() << '\n';
            print_hits(out, result);
        } catch (const DataError& e) {
            out << '*' << name << "\tERR\t" << e.what() << '\n';
        }
        outputs[i] = std::move(out).str();
    });
    for (const std::string& out : outputs) std::cout << out;
    return 0;
}

// ---- stats ------------------------------------------------------------

struct StatsArgs {
    std::string index;
    bool as_json = false;
    bool plan = false;
    uint64_t v = 0;
    double p = 0.3;
    uint32_t k = 0; // 0 = use the optimal-k closed form
    uint64_t ell = 0;
    double K = 0.9;
};

int cmd_stats_plan(const StatsArgs& args) {
    uint64_t w;
    uint32_t k = args.k;
    if (k == 0)
        std::tie(w, k) = bloom::size_filter_optimal(args.v, args.p);
    else
        w = bloom::size_filter(args.v, args.p, k);
    double approx = bloom::fpr_approx(w, k, args.v);
    double exact = bloom::fpr_exact(w, k, args.v);

    std::optional<double> qfpr, chernoff;
    if (args.ell > 0) {
        qfpr = bloom::query_fpr(args.ell, args.K, args.p);
        if (args.K >= args.p)
            chernoff = bloom::query_fpr_chernoff(args.ell, args.K, args.p);
    }

    if (args.as_json) {
        json out{{"v", args.v}, {"p", args.p},      {"w", w},
                 {"k", k},      {"fpr_approx", approx}, {"fpr_exact", exact}};
        if (qfpr) {
            out["ell"] = args.ell;
            out["K"] = args.K;
            out["query_fpr"] = *qfpr;
            if (chernoff) out["chernoff_bound"] = *chernoff;
        }
        std::cout << out.dump(2) << '\n';
        return 0;
    }
    std::cout << "v\t" << args.v << "\np\t" << args.p << "\nw\t" << w << "\nk\t" << k
              << "\nfpr_approx\t" << approx << "\nfpr_exact\t" << exact << '\n';
    if (qfpr) {
        std::cout << "ell\t" << args.ell << "\nK\t" << args.K << "\nquery_fpr\t"
                  << *qfpr << '\n';
        if (chernoff) std::cout << "chernoff_bound\t" << *chernoff << '\n';
    }
    return 0;
}

int cmd_stats(const StatsArgs& args) {
    if (args.plan) return cmd_stats_plan(args);
    if (args.index.empty())
        throw std::invalid_argument("stats needs an index file (or --plan)");
    std::unique_ptr<IndexView> view = open_random_access(args.index);
    const IndexParams& params = view->params();
    const char* kind = view->kind() == kKindClassic ? "classic" : "compact";

    struct Row {
        uint64_t docs, width, max_terms;
        double fill, predicted;
    };
    std::vector<Row> rows;
    for (size_t b = 0; b < view->block_count(); ++b) {
        uint64_t max_terms = 0;
        for (uint64_t d = 0; d < view->doc_count(b); ++d)
            max_terms = std::max(max_terms, view->doc(b, d).term_count);
        uint64_t w = view->width(b);
        rows.push_back({view->doc_count(b), w, max_terms,
                        double(max_terms) / double(w),
                        bloom::fpr_approx(w, params.k, max_terms)});
    }

    if (args.as_json) {
        json out{{"kind", kind},
                 {"q", params.q},
                 {"k", params.k},
                 {"p", params.p},
                 {"canonical", params.canonical},
                 {"block_size", params.block_size},
                 {"docs", view->total_docs()},
                 {"blocks", json::array()}};
        for (const Row& r : rows)
            out["blocks"].push_back({{"docs", r.docs},
                                     {"width", r.width},
                                     {"max_terms", r.max_terms},
                                     {"fill", r.fill},
                                     {"predicted_fpr", r.predicted}});
        std::cout << out.dump(2) << '\n';
        return 0;
    }

    std::cout << "# kind=" << kind << " q=" << params.q << " k=" << params.k
              << " p=" << params.p << " canonical=" << (params.canonical ? 1 : 0)
              << " B=" << params.block_size << " blocks=" << view->block_count()
              << " docs=" << view->total_docs() << '\n';
    std::cout << "block\tdocs\twidth\tmax_terms\tfill\tpredicted_fpr\n";
    for (size_t b = 0; b < rows.size(); ++b) {
        const Row& r = rows[b];
        std::cout << b << '\t' << r.docs << '\t' << r.width << '\t' << r.max_terms
                  << '\t' << r.fill << '\t' << r.predicted << '\n';
    }
    return 0;
}

// ---- validate ---------------------------------------------------------

struct ValidateArgs {
    std::string index;
    std::vector<std::string> corpus;
    uint64_t trials = 100000;
    uint64_t seed = 1;
    std::string format = "auto";
    std::string memory = "resident";
};

int cmd_validate(const ValidateArgs& args) {
    std::unique_ptr<IndexView> view = open_view(args.index, args.memory);
    const IndexParams& params = view->params();
    InputFormat format = parse_format(args.format);

    std::vector<fs::path> files = expand_inputs(args.corpus);
    std::vector<CorpusDoc> corpus(files.size());
    for (size_t i = 0; i < files.size(); ++i) {
        corpus[i].records = read_input(files[i], format);
        corpus[i].terms = extract_terms(doc_name_from_path(files[i]),
                                        corpus[i].records, params.q, params.canonical);
    }

    ValidationReport report = run_validation(*view, corpus, args.trials, args.seed);
    auto print = [](const char* name, const SuiteResult& suite) {
        std::cout << name << (suite.ok ? "PASS" : "FAIL") << " (" << suite.detail
                  << ")\n";
    };
    print("suite 1 (no false negatives): ", report.no_false_negatives);
    print("suite 2 (single-term FPR): ", report.fpr_measurement);
    print("suite 3 (oracle equivalence): ", report.oracle_equivalence);
    return report.all_ok() ? 0 : 3;
}

} // namespace

int run(const std::vector<std::string>& args) {
    CLI::App app{"bit-sliced Bloom filter index over document collections"};
    app.require_subcommand(1);

    BuildArgs build;
    CLI::App* cmd_b = app.add_subcommand("build", "build an index from documents");
    cmd_b->add_option("inputs", build.inputs, "input files or directories")
        ->required();
    cmd_b->add_option("-o,--out", build.out, "output index file")->required();
    cmd_b->add_option("--mode", build.mode, "classic or compact")
        ->check(CLI::IsMember({"classic", "compact"}));
    cmd_b->add_option("-q", build.params.q, "gram length");
    cmd_b->add_option("-k", build.params.k, "hash functions per term");
    cmd_b->add_option("-p", build.params.p, "target false positive rate");
    cmd_b->add_option("-B,--block-size", build.params.block_size,
                      "documents per block (compact)");
    cmd_b->add_flag("--canonical", build.params.canonical,
                    "canonicalize DNA grams with their reverse complement");
    cmd_b->add_option("--format", build.format, "input format: auto, fasta, text")
        ->check(CLI::IsMember({"auto", "fasta", "text"}));
    cmd_b->add_option("--workers", build.workers,
                      "worker threads (default: COBS_WORKERS or hardware)");

    QueryArgs query;
    CLI::App* cmd_q = app.add_subcommand("query", "query an index");
    cmd_q->add_option("index", query.index, "index file")->required();
    CLI::Option* opt_p =
        cmd_q->add_option("-P,--pattern", query.pattern, "single query pattern");
    cmd_q->add_option("-F,--file", query.file, "FASTA file of query patterns")
        ->excludes(opt_p);
    cmd_q->add_option("-K", query.K, "coverage threshold in (0,1]");
    cmd_q->add_option("--top", query.top, "report only the best N hits");
    cmd_q->add_option("--memory", query.memory, "resident or random-access")
        ->check(CLI::IsMember({"resident", "random-access"}));
    cmd_q->add_option("--workers", query.workers, "worker threads");

    StatsArgs stats;
    CLI::App* cmd_s = app.add_subcommand("stats", "inspect an index or plan sizes");
    cmd_s->add_option("index", stats.index, "index file");
    cmd_s->add_flag("--json", stats.as_json, "machine-readable output");
    cmd_s->add_flag("--plan", stats.plan, "filter planning from v/p/k instead");
    cmd_s->add_option("-v", stats.v, "distinct terms per document (planning)");
    cmd_s->add_option("-p", stats.p, "target false positive rate (planning)");
    cmd_s->add_option("-k", stats.k, "hash functions; 0 picks the optimum");
    cmd_s->add_option("--ell", stats.ell, "distinct query terms (planning)");
    cmd_s->add_option("-K", stats.K, "coverage threshold (planning)");

    ValidateArgs validate;
    CLI::App* cmd_v = app.add_subcommand("validate", "check an index against its corpus");
    cmd_v->add_option("index", validate.index, "index file")->required();
    cmd_v->add_option("corpus", validate.corpus, "corpus files or directories")
        ->required();
    cmd_v->add_option("--trials", validate.trials, "alien probes for suite 2");
    cmd_v->add_option("--seed", validate.seed, "random seed");
    cmd_v->add_option("--format", validate.format, "input format: auto, fasta, text")
        ->check(CLI::IsMember({"auto", "fasta", "text"}));
    cmd_v->add_option("--memory", validate.memory, "resident or random-access")
        ->check(CLI::IsMember({"resident", "random-access"}));

    std::vector<const char*> argv;
    argv.reserve(args.size() + 1);
    argv.push_back("cobs");
    for (const std::string& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (cmd_b->parsed()) return cmd_build(build);
        if (cmd_q->parsed()) {
            if (query.pattern.empty() && query.file.empty())
                throw std::invalid_argument("query needs -P or -F");
            return cmd_query(query);
        }
        if (cmd_s->parsed()) return cmd_stats(stats);
        if (cmd_v->parsed()) return cmd_validate(validate);
    } catch (const DataError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}

} // namespace cobs::cli
