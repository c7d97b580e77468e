// threadrank: thread retrieval by fusing the top-k ranked messages of each thread.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "threadrank/corpus.hpp"
#include "threadrank/error.hpp"
#include "threadrank/experiment.hpp"
#include "threadrank/fusion.hpp"
#include "threadrank/index.hpp"
#include "threadrank/metrics.hpp"
#include "threadrank/run_file.hpp"
#include "threadrank/scoring.hpp"
#include "threadrank/synth.hpp"
#include "threadrank/ttest.hpp"

namespace fs = std::filesystem;
using namespace threadrank;

namespace {

constexpr int kUsageError = 1;
constexpr int kDataError = 2;

std::string num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%g", v);
    return buf;
}

std::string fixed(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

/// Records the command and every parameter, so outputs can be regenerated.
class Header {
  public:
    explicit Header(std::string command) : m_line("threadrank " THREADRANK_VERSION " " + std::move(command)) {}

    Header& add(std::string const& flag, std::string const& value) {
        m_line += " --" + flag;
        if (!value.empty()) m_line += " " + value;
        return *this;
    }

    [[nodiscard]] std::string const& line() const { return m_line; }
    [[nodiscard]] std::string comment() const { return "# " + m_line + "\n"; }

  private:
    std::string m_line;
};

void emit(std::string const& out_path, std::string const& contents) {
    if (out_path.empty() || out_path == "-") {
        std::cout << contents;
    } else {
        write_file_atomic(out_path, contents);
    }
}

AggregationMethod method_or_throw(std::string const& name) {
    auto method = parse_method(name);
    if (!method) {
        throw std::invalid_argument("unknown method '" + name + "'");
    }
    return *method;
}

std::string method_names() {
    std::string names;
    for (auto m : kAllMethods) {
        names += (names.empty() ? "" : ", ") + std::string(method_name(m));
    }
    return names;
}

fs::path vd_dir(fs::path const& index_dir) {
    return index_dir / "vd";
}

VirtualDocIndex load_vd(fs::path const& index_dir) {
    if (!fs::exists(vd_dir(index_dir) / "meta")) {
        throw DataError(index_dir.string() + " has no virtual-document index (build it with index --virtual-docs)");
    }
    return VirtualDocIndex(load_index(vd_dir(index_dir)));
}

void report_skipped(RankedPool const& pool) {
    for (auto const& term : pool.skipped_terms) {
        std::cerr << "note: query " << pool.query_id << ": term '" << term << "' not in collection, skipped\n";
    }
}

template <typename T>
std::vector<T> axis(T lo, T hi, T step, char const* name) {
    if (!(step > T{0}) || hi < lo) {
        throw std::invalid_argument(std::string("invalid ") + name + " range");
    }
    std::vector<T> values;
    for (T v = lo; v <= hi; v += step) values.push_back(v);
    return values;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Forum thread retrieval: query-likelihood message ranking with top-k data fusion"};
    app.require_subcommand(1);
    app.set_version_flag("--version", THREADRANK_VERSION);

    // index
    std::string corpus_path, out_path, index_dir;
    bool virtual_docs = false;
    auto* index_cmd = app.add_subcommand("index", "Build and persist the message index (and optionally the VD index)");
    index_cmd->add_option("--corpus", corpus_path, "Corpus in JSON-lines format")->required();
    index_cmd->add_option("--out", out_path, "Output index directory")->required();
    index_cmd->add_flag("--virtual-docs", virtual_docs, "Also build the virtual-document index under OUT/vd");

    // search
    std::string queries_path, method_name_arg = "combsum", k_arg = "unlimited", tag;
    double mu = 1000.0;
    std::size_t pool_size = 1000;
    auto* search_cmd = app.add_subcommand("search", "Rank threads by fusing their top-k messages; writes a TREC run");
    search_cmd->add_option("--index", index_dir, "Index directory")->required();
    search_cmd->add_option("--queries", queries_path, "Queries (query_id<TAB>text)")->required();
    search_cmd->add_option("--method", method_name_arg, "Aggregation method: " + method_names())->required();
    search_cmd->add_option("--k", k_arg, "Messages per thread: positive integer or 'unlimited'")->required();
    search_cmd->add_option("--mu", mu, "Dirichlet smoothing parameter")->required();
    search_cmd->add_option("--pool", pool_size, "Size of the initial ranked message list")->required();
    search_cmd->add_option("--out", out_path, "Run file ('-' for stdout)")->required();
    search_cmd->add_option("--tag", tag, "Run tag (default: method and k)");

    // vd-search
    std::size_t vd_limit = 1000;
    auto* vd_cmd = app.add_subcommand("vd-search", "Virtual-document baseline; writes a TREC run");
    vd_cmd->add_option("--index", index_dir, "Index directory built with --virtual-docs")->required();
    vd_cmd->add_option("--queries", queries_path, "Queries (query_id<TAB>text)")->required();
    vd_cmd->add_option("--mu", mu, "Dirichlet smoothing parameter")->required();
    vd_cmd->add_option("--out", out_path, "Run file ('-' for stdout)")->required();
    vd_cmd->add_option("--limit", vd_limit, "Threads retrieved per query")->capture_default_str();
    vd_cmd->add_option("--tag", tag, "Run tag (default: vd)");

    // eval
    std::string run_path, qrels_path;
    std::size_t cutoff = 10;
    auto* eval_cmd = app.add_subcommand("eval", "MAP, P@cutoff and NDCG@cutoff of a run");
    eval_cmd->add_option("--run", run_path, "TREC run file")->required();
    eval_cmd->add_option("--qrels", qrels_path, "TREC qrels")->required();
    eval_cmd->add_option("--cutoff", cutoff, "Rank cutoff for P and NDCG")->capture_default_str();
    eval_cmd->add_option("--out", out_path, "Report file (default stdout)");

    // ttest
    std::string run_a, run_b, metric_arg = "map";
    auto* ttest_cmd = app.add_subcommand("ttest", "Paired two-tailed t-test between two runs");
    ttest_cmd->add_option("--run-a", run_a, "First run")->required();
    ttest_cmd->add_option("--run-b", run_b, "Second run")->required();
    ttest_cmd->add_option("--qrels", qrels_path, "TREC qrels")->required();
    ttest_cmd->add_option("--metric", metric_arg, "map, p10 or ndcg10")->required();
    ttest_cmd->add_option("--out", out_path, "Report file (default stdout)");

    // gridsearch
    double mu_min = 500, mu_max = 4000, mu_step = 500;
    std::size_t pool_min = 500, pool_max = 5000, pool_step = 500, k_min = 2, k_max = 6, folds = 5;
    std::size_t workers = 0;
    bool basic = false;
    std::string report_mode = "cv";
    std::uint64_t shuffle_seed = 0;
    auto* grid_cmd = app.add_subcommand("gridsearch", "Exhaustive grid search maximizing MAP with k-fold CV");
    grid_cmd->add_option("--index", index_dir, "Index directory")->required();
    grid_cmd->add_option("--queries", queries_path, "Queries")->required();
    grid_cmd->add_option("--qrels", qrels_path, "TREC qrels")->required();
    grid_cmd->add_option("--method", method_name_arg, "Aggregation method, or 'vd' for the baseline")->required();
    grid_cmd->add_option("--mu-min", mu_min, "Smallest mu")->capture_default_str();
    grid_cmd->add_option("--mu-max", mu_max, "Largest mu")->capture_default_str();
    grid_cmd->add_option("--mu-step", mu_step, "mu step")->capture_default_str();
    grid_cmd->add_option("--pool-min", pool_min, "Smallest pool size")->capture_default_str();
    grid_cmd->add_option("--pool-max", pool_max, "Largest pool size")->capture_default_str();
    grid_cmd->add_option("--pool-step", pool_step, "Pool size step")->capture_default_str();
    grid_cmd->add_option("--k-min", k_min, "Smallest k")->capture_default_str();
    grid_cmd->add_option("--k-max", k_max, "Largest k")->capture_default_str();
    grid_cmd->add_flag("--basic", basic, "Basic mode: aggregate all ranked messages (k unlimited)");
    grid_cmd->add_option("--folds", folds, "Cross-validation folds")->capture_default_str();
    grid_cmd->add_option("--report", report_mode, "cv (held-out folds) or full (tuned and scored on all queries)")->capture_default_str()
        ->check(CLI::IsMember({"cv", "full"}));
    auto* shuffle_opt = grid_cmd->add_option("--shuffle-seed", shuffle_seed, "Shuffle queries before folding");
    grid_cmd->add_option("--workers", workers, "Worker threads (0 = all cores)")->capture_default_str();
    grid_cmd->add_option("--vd-limit", vd_limit, "Threads retrieved per query for --method vd")->capture_default_str();
    grid_cmd->add_option("--out", out_path, "Report file (default stdout)");

    // sweep
    auto* sweep_cmd = app.add_subcommand("sweep", "Mean metrics per k plus the basic mode, as CSV");
    sweep_cmd->add_option("--index", index_dir, "Index directory")->required();
    sweep_cmd->add_option("--queries", queries_path, "Queries")->required();
    sweep_cmd->add_option("--qrels", qrels_path, "TREC qrels")->required();
    sweep_cmd->add_option("--method", method_name_arg, "Aggregation method")->required();
    sweep_cmd->add_option("--mu", mu, "Dirichlet smoothing parameter")->required();
    sweep_cmd->add_option("--pool", pool_size, "Size of the initial ranked message list")->required();
    sweep_cmd->add_option("--k-min", k_min, "Smallest k")->capture_default_str();
    sweep_cmd->add_option("--k-max", k_max, "Largest k")->capture_default_str();
    sweep_cmd->add_option("--out", out_path, "CSV file ('-' for stdout)")->required();

    // synth
    SynthSpec synth;
    auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic forum corpus with queries and qrels");
    synth_cmd->add_option("--seed", synth.seed, "Random seed")->capture_default_str();
    synth_cmd->add_option("--threads", synth.thread_count, "Number of threads")->capture_default_str();
    synth_cmd->add_option("--queries", synth.query_count, "Number of queries")->capture_default_str();
    synth_cmd->add_option("--concentration", synth.concentration, "Share of on-topic replies in (0, 1]")->capture_default_str();
    synth_cmd->add_option("--min-messages", synth.min_messages, "Fewest messages per thread")->capture_default_str();
    synth_cmd->add_option("--max-messages", synth.max_messages, "Most messages per thread")->capture_default_str();
    synth_cmd->add_option("--vocabulary", synth.vocabulary_size, "Vocabulary size")->capture_default_str();
    synth_cmd->add_option("--topics", synth.topic_count, "Number of topics")->capture_default_str();
    synth_cmd->add_option("--distractor-rate", synth.distractor_rate, "Chance an off-topic message mentions another topic")->capture_default_str();
    synth_cmd->add_option("--out", out_path, "Output directory")->required();

    try {
        app.parse(argc, argv);
    } catch (CLI::ParseError const& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kUsageError;
    }

    try {
        if (index_cmd->parsed()) {
            Header header("index");
            header.add("corpus", corpus_path).add("out", out_path);
            if (virtual_docs) header.add("virtual-docs", "");
            auto threads = load_corpus(corpus_path);
            auto index = build_index(threads);
            save_index(index, out_path);
            std::cout << header.comment() << "messages\t" << index.doc_count() << "\nterms\t" << index.term_count()
                      << "\ntokens\t" << index.total_tokens() << "\nthreads\t" << threads.size() << '\n';
            if (virtual_docs) {
                auto vd = build_virtual_docs(threads);
                save_index(vd.docs(), vd_dir(out_path));
                std::cout << "virtual_docs\t" << vd.docs().doc_count() << '\n';
            }
        } else if (search_cmd->parsed()) {
            auto method = method_or_throw(method_name_arg);
            auto k = KLimit::parse(k_arg);
            if (tag.empty()) tag = std::string(method_name(method)) + "_k" + k.to_string();
            Header header("search");
            header.add("index", index_dir).add("queries", queries_path).add("method", method_name_arg)
                .add("k", k.to_string()).add("mu", num(mu)).add("pool", std::to_string(pool_size)).add("tag", tag);
            auto index = load_index(index_dir);
            Run run;
            for (auto const& query : load_queries(queries_path)) {
                auto pool = rank_messages(query, index, SmoothingParams{mu}, pool_size);
                report_skipped(pool);
                add_ranking(run, fuse_pool(pool, method, k));
            }
            std::ostringstream out;
            write_run(out, run, tag, {header.line()});
            emit(out_path, out.str());
        } else if (vd_cmd->parsed()) {
            if (tag.empty()) tag = "vd";
            Header header("vd-search");
            header.add("index", index_dir).add("queries", queries_path).add("mu", num(mu))
                .add("limit", std::to_string(vd_limit)).add("tag", tag);
            auto vd = load_vd(index_dir);
            Run run;
            for (auto const& query : load_queries(queries_path)) {
                add_ranking(run, rank_virtual_docs(query, vd, SmoothingParams{mu}, vd_limit));
            }
            std::ostringstream out;
            write_run(out, run, tag, {header.line()});
            emit(out_path, out.str());
        } else if (eval_cmd->parsed()) {
            Header header("eval");
            header.add("run", run_path).add("qrels", qrels_path).add("cutoff", std::to_string(cutoff));
            auto report = evaluate(load_run(run_path), load_qrels(qrels_path), cutoff);
            std::ostringstream out;
            out << header.comment();
            write_report(out, report);
            emit(out_path, out.str());
        } else if (ttest_cmd->parsed()) {
            auto metric = parse_metric(metric_arg);
            Header header("ttest");
            header.add("run-a", run_a).add("run-b", run_b).add("qrels", qrels_path).add("metric", metric_arg);
            auto qrels = load_qrels(qrels_path);
            auto a = load_run(run_a);
            auto b = load_run(run_b);
            std::set<std::string> ids;
            for (auto const& id : qrels.query_ids()) ids.insert(id);
            for (auto const& [id, _] : a) ids.insert(id);
            for (auto const& [id, _] : b) ids.insert(id);
            std::vector<std::string> query_ids(ids.begin(), ids.end());
            auto values_a = evaluate(a, qrels, query_ids).values(metric);
            auto values_b = evaluate(b, qrels, query_ids).values(metric);
            auto result = paired_ttest(values_a, values_b);
            auto mean = [](std::vector<double> const& v) {
                double s = 0.0;
                for (auto x : v) s += x;
                return v.empty() ? 0.0 : s / static_cast<double>(v.size());
            };
            std::ostringstream out;
            out << header.comment() << "metric\t" << metric_arg << "\nqueries\t" << query_ids.size() << "\nmean_a\t"
                << fixed(mean(values_a)) << "\nmean_b\t" << fixed(mean(values_b)) << "\nt\t" << num(result.t)
                << "\ndf\t" << result.df << "\np\t" << num(result.p) << "\nsignificant\t"
                << (result.significant ? "yes" : "no") << "\ndegenerate\t" << (result.degenerate ? "yes" : "no")
                << '\n';
            emit(out_path, out.str());
        } else if (grid_cmd->parsed()) {
            Header header("gridsearch");
            header.add("index", index_dir).add("queries", queries_path).add("qrels", qrels_path)
                .add("method", method_name_arg).add("mu-min", num(mu_min)).add("mu-max", num(mu_max))
                .add("mu-step", num(mu_step));
            auto queries = load_queries(queries_path);
            auto qrels = load_qrels(qrels_path);
            auto mus = axis(mu_min, mu_max, mu_step, "mu");
            GridTable table;
            if (method_name_arg == "vd") {
                header.add("vd-limit", std::to_string(vd_limit));
                table = evaluate_vd_grid(queries, qrels, load_vd(index_dir), mus, vd_limit);
            } else {
                GridSpec spec;
                spec.method = method_or_throw(method_name_arg);
                spec.mus = mus;
                spec.pool_sizes = axis(pool_min, pool_max, pool_step, "pool");
                spec.ks.clear();
                if (basic) {
                    spec.ks.push_back(KLimit::unlimited());
                } else {
                    for (auto k : axis<std::size_t>(k_min, k_max, 1, "k")) spec.ks.push_back(KLimit::top(k));
                }
                spec.workers = static_cast<unsigned>(workers);
                header.add("pool-min", std::to_string(pool_min)).add("pool-max", std::to_string(pool_max))
                    .add("pool-step", std::to_string(pool_step));
                if (basic) {
                    header.add("basic", "");
                } else {
                    header.add("k-min", std::to_string(k_min)).add("k-max", std::to_string(k_max));
                }
                table = evaluate_grid(queries, qrels, load_index(index_dir), spec);
            }
            header.add("report", report_mode);
            std::ostringstream out;
            if (report_mode == "cv") {
                header.add("folds", std::to_string(folds));
                std::optional<std::uint64_t> seed;
                if (shuffle_opt->count() > 0) {
                    seed = shuffle_seed;
                    header.add("shuffle-seed", std::to_string(shuffle_seed));
                }
                if (queries.size() < folds) {
                    throw DataError("cannot split " + std::to_string(queries.size()) + " queries into "
                                    + std::to_string(folds) + " folds");
                }
                out << header.comment();
                write_cv_report(out, cross_validate(table, folds, seed));
            } else {
                out << header.comment();
                write_full_report(out, select_on_full_set(table));
            }
            emit(out_path, out.str());
        } else if (sweep_cmd->parsed()) {
            auto method = method_or_throw(method_name_arg);
            Header header("sweep");
            header.add("index", index_dir).add("queries", queries_path).add("qrels", qrels_path)
                .add("method", method_name_arg).add("mu", num(mu)).add("pool", std::to_string(pool_size))
                .add("k-min", std::to_string(k_min)).add("k-max", std::to_string(k_max));
            auto rows = sweep_k(load_queries(queries_path), load_qrels(qrels_path), load_index(index_dir), method,
                                SmoothingParams{mu}, pool_size, k_min, k_max);
            std::ostringstream out;
            out << header.comment();
            write_sweep_csv(out, rows);
            emit(out_path, out.str());
        } else if (synth_cmd->parsed()) {
            Header header("synth");
            header.add("seed", std::to_string(synth.seed)).add("threads", std::to_string(synth.thread_count))
                .add("queries", std::to_string(synth.query_count)).add("concentration", num(synth.concentration))
                .add("min-messages", std::to_string(synth.min_messages))
                .add("max-messages", std::to_string(synth.max_messages))
                .add("vocabulary", std::to_string(synth.vocabulary_size))
                .add("topics", std::to_string(synth.topic_count))
                .add("distractor-rate", num(synth.distractor_rate)).add("out", out_path);
            auto data = generate(synth);
            write_synth(data, out_path);
            std::size_t messages = 0;
            for (auto const& t : data.threads) messages += t.messages.size();
            std::cout << header.comment() << "threads\t" << data.threads.size() << "\nmessages\t" << messages
                      << "\nqueries\t" << data.queries.size() << "\njudgments\t" << data.qrels.size() << '\n';
        }
    } catch (DataError const& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kDataError;
    } catch (fs::filesystem_error const& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kDataError;
    } catch (std::invalid_argument const& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return kUsageError;
    } catch (std::exception const& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kDataError;
    }
    return 0;
}
