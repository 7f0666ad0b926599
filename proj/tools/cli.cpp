#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <iomanip>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "saad/classify.hpp"
#include "saad/config.hpp"
#include "saad/detect.hpp"
#include "saad/extract.hpp"
#include "saad/extrapolate.hpp"
#include "saad/jsonl.hpp"
#include "saad/lexicon.hpp"
#include "saad/refine.hpp"
#include "saad/report.hpp"
#include "saad/service.hpp"
#include "saad/stats.hpp"
#include "saad/text.hpp"

namespace fs = std::filesystem;

namespace saad::cli {

namespace {

const std::set<std::string> kSourceExtensions = {
    ".java", ".c", ".h", ".cc", ".cpp", ".cxx", ".hpp", ".hh", ".hxx", ".go", ".rs",
    ".js", ".ts", ".cs", ".kt", ".kts", ".scala", ".swift", ".m", ".mm", ".groovy",
};

struct Io {
    std::istream& in;
    std::ostream& out;
    std::ostream& err;
};

// Config keys exposed as flags on a subcommand, bound to shared storage.
class Overrides {
public:
    void attach(CLI::App* sub) {
        for (const auto& key : config_keys()) {
            auto* opt = sub->add_option("--" + key, values_[key])->group("Config overrides");
            options_[key].push_back(opt);
        }
    }

    Config collect() const {
        Config cfg;
        for (const auto& [key, opts] : options_)
            for (const auto* o : opts)
                if (o->count() > 0) cfg.set(key, values_.at(key));
        return cfg;
    }

private:
    std::map<std::string, std::string> values_;
    std::map<std::string, std::vector<CLI::Option*>> options_;
};

fs::path require(const std::optional<fs::path>& p, const char* key) {
    if (!p) throw ValidationError(std::string("missing required setting '") + key + "'");
    return *p;
}

fs::path require_file(const std::optional<fs::path>& p, const char* key) {
    auto path = require(p, key);
    std::error_code ec;
    if (!fs::is_regular_file(path, ec))
        throw IoError(std::string(key) + " file '" + path.string() + "' does not exist");
    return path;
}

void require_writable_dir(const fs::path& out) {
    const auto dir = out.has_parent_path() ? out.parent_path() : fs::path(".");
    std::error_code ec;
    if (!fs::is_directory(dir, ec))
        throw IoError("output directory '" + dir.string() + "' does not exist");
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) throw IoError("read failure on '" + path.string() + "'");
    return ss.str();
}

void write_text(const fs::path& path, const std::string& body) {
    auto out = open_output(path);
    out << body;
    if (!out) throw IoError("write failure on '" + path.string() + "'");
}

// ---- scan ----------------------------------------------------------------

struct SourceFile {
    std::string project;
    fs::path path;
    std::string rel;
};

struct ScanOutcome {
    std::vector<CommentRecord> records;
    bool ok = false;
    bool unbalanced = false;
    std::string error;
};

ScanOutcome scan_file(const SourceFile& f, int k_context) {
    ScanOutcome o;
    try {
        const auto src = slurp(f.path);
        auto res = extract_comments(src, f.rel, f.project, k_context);
        o.records = std::move(res.records);
        o.unbalanced = res.unbalanced_block_comment;
        o.ok = true;
    } catch (const std::exception& e) {
        o.error = e.what();
    }
    return o;
}

int cmd_scan(const std::vector<std::string>& roots, const fs::path& out_path, const RunConfig& rc,
             Io io) {
    std::vector<std::pair<std::string, fs::path>> projects;
    std::set<std::string> names;
    for (const auto& r : roots) {
        std::error_code ec;
        if (!fs::is_directory(r, ec)) throw IoError("scan root '" + r + "' is not a directory");
        auto canon = fs::weakly_canonical(fs::path(r));
        auto name = canon.filename().string();
        if (name.empty()) name = canon.string();
        if (!names.insert(name).second)
            throw ValidationError("two scan roots share the project name '" + name + "'");
        projects.emplace_back(name, canon);
    }
    require_writable_dir(out_path);

    std::vector<SourceFile> files;
    for (const auto& [name, root] : projects) {
        std::vector<SourceFile> mine;
        std::error_code ec;
        fs::recursive_directory_iterator it(root, fs::directory_options::skip_permission_denied, ec);
        if (ec) {
            io.err << "warning: cannot walk '" << root.string() << "': " << ec.message() << "\n";
            continue;
        }
        for (const auto end = fs::recursive_directory_iterator(); it != end; it.increment(ec)) {
            if (ec) {
                io.err << "warning: " << ec.message() << "\n";
                ec.clear();
                continue;
            }
            std::error_code fec;
            if (!it->is_regular_file(fec)) continue;
            if (!kSourceExtensions.count(it->path().extension().string())) continue;
            mine.push_back({name, it->path(), it->path().lexically_relative(root).generic_string()});
        }
        std::sort(mine.begin(), mine.end(),
                  [](const SourceFile& a, const SourceFile& b) { return a.rel < b.rel; });
        files.insert(files.end(), mine.begin(), mine.end());
    }

    const unsigned jobs = std::max(1u, rc.refine.jobs);
    std::vector<ScanOutcome> outcomes(files.size());
    if (jobs == 1 || files.size() < 2) {
        for (std::size_t i = 0; i < files.size(); ++i) outcomes[i] = scan_file(files[i], rc.k_context);
    } else {
        std::vector<std::future<void>> tasks;
        const std::size_t chunk = (files.size() + jobs - 1) / jobs;
        for (std::size_t start = 0; start < files.size(); start += chunk) {
            tasks.push_back(std::async(std::launch::async, [&, start] {
                for (std::size_t i = start; i < std::min(files.size(), start + chunk); ++i)
                    outcomes[i] = scan_file(files[i], rc.k_context);
            }));
        }
        for (auto& t : tasks) t.get();
    }

    struct Counts {
        std::size_t files = 0, comments = 0, nl = 0;
    };
    std::map<std::string, Counts> per;
    for (const auto& [name, root] : projects) per[name];
    std::vector<CommentRecord> corpus;
    std::size_t processed = 0;
    for (std::size_t i = 0; i < files.size(); ++i) {
        auto& o = outcomes[i];
        if (!o.ok) {
            io.err << "warning: skipped '" << files[i].path.string() << "': " << o.error << "\n";
            continue;
        }
        if (o.unbalanced)
            io.err << "warning: unterminated block comment in '" << files[i].path.string() << "'\n";
        ++processed;
        auto& c = per[files[i].project];
        ++c.files;
        for (auto& rec : o.records) {
            ++c.comments;
            if (rec.is_natural_language) ++c.nl;
            corpus.push_back(std::move(rec));
        }
    }
    save_corpus(out_path, corpus);

    io.out << "project\tfiles\tcomments\tnl_comments\n";
    Counts total;
    for (const auto& [name, c] : per) {
        io.out << name << '\t' << c.files << '\t' << c.comments << '\t' << c.nl << '\n';
        total.files += c.files;
        total.comments += c.comments;
        total.nl += c.nl;
    }
    io.out << "total\t" << total.files << '\t' << total.comments << '\t' << total.nl << '\n';
    if (processed == 0) throw IoError("no source files processed");
    return 0;
}

// ---- detect / classify / report ----------------------------------------------

int cmd_detect(const RunConfig& rc, const fs::path& out_path, Io io) {
    const auto corpus_path = require_file(rc.corpus, "corpus");
    const auto lexicon_path = require_file(rc.lexicon, "lexicon");
    require_writable_dir(out_path);
    const auto corpus = load_corpus(corpus_path);
    const auto lexicon = load_lexicon(lexicon_path);
    const auto detections = detect_saad(corpus, lexicon, rc.refine.jobs);
    save_detections(out_path, detections);
    const auto nl = std::count_if(corpus.begin(), corpus.end(),
                                  [](const CommentRecord& r) { return r.is_natural_language; });
    io.out << detections.size() << " detections over " << nl << " NL comments (" << corpus.size()
           << " comments, " << lexicon.active_pattern_count() << " active patterns)\n";
    return 0;
}

int cmd_classify(const RunConfig& rc, const std::string& out_arg, const std::string& tally_arg,
                 Io io) {
    const auto det_path = require_file(rc.detections, "detections");
    const auto lexicon_path = require_file(rc.lexicon, "lexicon");
    const fs::path out_path = out_arg.empty() ? det_path : fs::path(out_arg);
    require_writable_dir(out_path);
    auto detections = load_detections(det_path);
    const auto lexicon = load_lexicon(lexicon_path);
    classify_all(detections, lexicon);
    save_detections(out_path, detections);
    std::ostringstream csv;
    write_tally_csv(csv, tally(detections));
    if (!tally_arg.empty()) write_text(tally_arg, csv.str());
    io.out << csv.str();
    return 0;
}

int cmd_report(const RunConfig& rc, const std::string& out_arg, Io io) {
    const auto corpus_path = require_file(rc.corpus, "corpus");
    const auto det_path = require_file(rc.detections, "detections");
    std::optional<fs::path> lexicon_path;
    if (rc.lexicon) lexicon_path = require_file(rc.lexicon, "lexicon");
    if (!out_arg.empty()) require_writable_dir(out_arg);

    const auto corpus = load_corpus(corpus_path);
    auto detections = load_detections(det_path);
    const bool unclassified = std::any_of(detections.begin(), detections.end(),
                                          [](const Detection& d) { return d.taxonomy_types.empty(); });
    if (unclassified) {
        if (!lexicon_path)
            throw ConsistencyError("detections carry no taxonomy types; run `saad classify` or pass --lexicon");
        classify_all(detections, load_lexicon(*lexicon_path));
    }
    const auto body = render_report(build_report(corpus, detections), rc.format);
    if (out_arg.empty())
        io.out << body;
    else
        write_text(out_arg, body);
    return 0;
}

// ---- sample / refine ---------------------------------------------------------

int cmd_sample(const RunConfig& rc, std::optional<std::size_t> n, std::optional<int> iteration,
               const std::string& out_arg, Io io) {
    const auto det_path = require_file(rc.detections, "detections");
    if (!out_arg.empty()) require_writable_dir(out_arg);
    const auto detections = load_detections(det_path);
    std::vector<std::string> ids;
    if (n) {
        const std::uint64_t seed = rc.refine.rng_seed + static_cast<std::uint64_t>(iteration.value_or(0));
        ids = sample_stratified(detections, rc.refine.strata, *n, seed);
    } else {
        ids = plan_iteration(detections, rc.refine, iteration.value_or(0));
    }
    std::ostringstream body;
    for (const auto& id : ids) body << id << '\n';
    if (out_arg.empty())
        io.out << body.str();
    else
        write_text(out_arg, body.str());
    return 0;
}

fs::path history_path(const RunConfig& rc) {
    return rc.iterations.value_or(fs::path("iterations.jsonl"));
}

std::string fmt3(double v) { return text::format_fixed(v, 3); }

void print_history(std::ostream& out, const std::vector<RefinementIteration>& history) {
    out << "iteration\tactive_patterns\tdetected\tsample\tprecision\trecall\tf1\texcluded\tproposed\tstatus\n";
    for (const auto& it : history) {
        out << it.iteration_no << '\t' << it.active_pattern_count << '\t' << it.total_saad_detected
            << '\t' << it.sample_ids.size() << '\t' << fmt3(it.precision) << '\t' << fmt3(it.recall)
            << '\t' << fmt3(it.f1) << '\t' << it.excluded_patterns.size() << '\t'
            << fmt3(it.proposed_pattern_fraction) << '\t'
            << (it.stopped ? "stopped" : "continue") << '\n';
    }
    for (const auto& it : history) {
        if (it.excluded_patterns.empty()) continue;
        out << "excluded in iteration " << it.iteration_no << ":";
        for (const auto& p : it.excluded_patterns) out << " '" << p << "'";
        out << '\n';
    }
}

int cmd_refine_run(const RunConfig& rc, const std::string& lexicon_out, Io io) {
    const auto corpus_path = require_file(rc.corpus, "corpus");
    const auto lexicon_path = require_file(rc.lexicon, "lexicon");
    const auto ann_path = require_file(rc.annotations, "annotations");
    const auto hist = history_path(rc);
    const fs::path out_lex = lexicon_out.empty() ? lexicon_path : fs::path(lexicon_out);
    require_writable_dir(out_lex);
    require_writable_dir(hist);

    RefineLock lock(fs::path(lexicon_path.string() + ".lock"));
    const auto corpus = load_corpus(corpus_path);
    const auto lexicon = load_lexicon(lexicon_path);
    const AnnotationStore store(ann_path);
    const auto annotations = store.snapshot();
    const auto history = load_history(hist);

    auto outcome = run_iteration(corpus, lexicon, annotations, rc.refine, history);
    save_lexicon(out_lex, outcome.lexicon);
    append_history(hist, outcome.iteration);

    print_history(io.out, {outcome.iteration});
    if (outcome.iteration.stopped)
        io.out << "F1 >= " << fmt3(rc.refine.f1_target) << " for " << rc.refine.consistency
               << " consecutive iteration(s); refinement complete\n";
    return 0;
}

int cmd_refine_status(const RunConfig& rc, Io io) {
    const auto hist = history_path(rc);
    std::error_code ec;
    if (!fs::exists(hist, ec)) throw IoError("no iteration history at '" + hist.string() + "'");
    print_history(io.out, load_history(hist));
    return 0;
}

// ---- stats -------------------------------------------------------------------

std::vector<std::pair<double, double>> read_pairs(const fs::path& path) {
    auto in = open_input(path);
    std::vector<std::pair<double, double>> pairs;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto t = text::trim(line);
        if (t.empty() || t.front() == '#') continue;
        const auto cols = text::split(t, ',');
        if (cols.size() != 2)
            throw ValidationError(path.string() + ":" + std::to_string(line_no) + ": expected two columns");
        try {
            std::size_t p1 = 0, p2 = 0;
            const auto a = text::trim(cols[0]);
            const auto b = text::trim(cols[1]);
            const double x = std::stod(a, &p1);
            const double y = std::stod(b, &p2);
            if (p1 != a.size() || p2 != b.size()) throw std::invalid_argument("trailing");
            pairs.emplace_back(x, y);
        } catch (const std::logic_error&) {
            if (pairs.empty() && line_no == 1) continue;  // header row
            throw ValidationError(path.string() + ":" + std::to_string(line_no) + ": not a number pair");
        }
    }
    return pairs;
}

std::vector<std::string> read_labels(const fs::path& path) {
    auto in = open_input(path);
    std::vector<std::string> out;
    std::string line;
    while (std::getline(in, line)) {
        auto t = text::trim(line);
        if (!t.empty()) out.push_back(t);
    }
    return out;
}

int cmd_stats_wilcoxon(const fs::path& pairs_path, const std::string& method, Io io) {
    stats::WilcoxonMethod m = stats::WilcoxonMethod::Auto;
    if (method == "exact")
        m = stats::WilcoxonMethod::Exact;
    else if (method == "normal")
        m = stats::WilcoxonMethod::Normal;
    else if (method != "auto")
        throw ValidationError("method must be auto, exact or normal");
    const auto pairs = read_pairs(pairs_path);
    io.out << format_wilcoxon(stats::wilcoxon_signed_rank(pairs, m)) << '\n';
    return 0;
}

int cmd_stats_kappa(const fs::path& a, const fs::path& b, Io io) {
    const auto la = read_labels(a);
    const auto lb = read_labels(b);
    const auto k = stats::cohens_kappa_table(la, lb);
    io.out << "kappa=" << fmt3(k.kappa) << " n=" << k.n << " observed=" << fmt3(k.observed)
           << " expected=" << fmt3(k.expected) << '\n';
    return 0;
}

int cmd_stats_sample_size(const RunConfig& rc, Io io) {
    io.out << stats::sample_size(rc.refine.sample_z, rc.refine.sample_p, rc.refine.sample_e) << '\n';
    return 0;
}

// ---- extrapolate ---------------------------------------------------------------

struct StopRequested {};

int cmd_extrapolate(const RunConfig& rc, const fs::path& seeds_path, const fs::path& vectors_path,
                    const fs::path& out_path, const std::string& auto_accept, Io io) {
    auto seeds_in = open_input(seeds_path);
    const auto seeds = read_seed_terms(seeds_in);
    if (seeds.empty()) throw EmptySeed();
    std::error_code ec;
    if (!fs::is_regular_file(vectors_path, ec))
        throw IoError("vectors file '" + vectors_path.string() + "' does not exist");
    require_writable_dir(out_path);
    const auto oracle = VectorFileOracle::load(vectors_path);

    std::optional<VerifyVerdict> fixed;
    if (auto_accept == "direct")
        fixed = VerifyVerdict::Direct;
    else if (auto_accept == "indirect")
        fixed = VerifyVerdict::Indirect;
    else if (!auto_accept.empty())
        throw ValidationError("--auto-accept takes direct or indirect");

    VerifyFn verify = [&](const std::string& cand, const std::string& source) {
        if (fixed) return *fixed;
        for (;;) {
            io.out << "'" << cand << "' (near '" << source << "') [d]irect / [i]ndirect / [r]eject: "
                   << std::flush;
            std::string answer;
            if (!std::getline(io.in, answer)) throw StopRequested{};
            answer = text::to_lower(text::trim(answer));
            if (answer == "d" || answer == "direct") return VerifyVerdict::Direct;
            if (answer == "i" || answer == "indirect") return VerifyVerdict::Indirect;
            if (answer == "r" || answer == "reject") return VerifyVerdict::Reject;
        }
    };

    auto session = ExtrapolationSession::start(seeds, rc.k_neighbors);
    bool stopped_early = false;
    try {
        while (!session.seed.empty()) step(session, oracle, verify);
    } catch (const StopRequested&) {
        stopped_early = true;
    }
    std::ofstream out(out_path, std::ios::binary | std::ios::app);
    if (!out) throw IoError("cannot append to '" + out_path.string() + "'");
    write_feature_rows(out, session.expanded);
    if (!out) throw IoError("write failure on '" + out_path.string() + "'");
    io.out << (stopped_early ? "\ninput ended; " : "") << session.expanded.size()
           << " term(s) accepted, " << session.processed.size() << " processed, "
           << session.seed.size() << " left in the seed queue\n";
    return 0;
}

// ---- serve -------------------------------------------------------------------

int cmd_serve(const RunConfig& rc, const std::string& host, int port, const std::string& ui_dir,
              Io io) {
    const auto corpus_path = require_file(rc.corpus, "corpus");
    const auto det_path = require_file(rc.detections, "detections");
    const auto ann_path = require(rc.annotations, "annotations");
    require_writable_dir(ann_path);
    if (port < 1 || port > 65535) throw ValidationError("port out of range");

    ServiceOptions opts;
    opts.iterations = rc.iterations;
    opts.fp_threshold = rc.refine.fp_threshold;
    if (!ui_dir.empty()) opts.ui_dir = ui_dir;
    TriageService service(load_corpus(corpus_path), load_detections(det_path),
                          std::make_shared<AnnotationStore>(ann_path), opts);
    io.out << "serving " << service.detection_count() << " detections on http://" << host << ":"
           << port << "/\n"
           << std::flush;
    serve(service, host, port);
    return 0;
}

}  // namespace

int run(int argc, const char* const* argv, std::istream& in, std::ostream& out, std::ostream& err) {
    Io io{in, out, err};
    CLI::App app{"Self-admitted aging debt toolkit", "saad"};
    app.require_subcommand(1);
    std::string config_path;
    app.add_option("--config", config_path, "key=value config file (default: $SAAD_CONFIG)");

    Overrides overrides;
    std::string scan_out, detect_out, classify_out, report_out, sample_out, extrap_out, tally_arg, lexicon_out, method = "auto", auto_accept, host = "127.0.0.1",
                                                ui_dir;
    std::vector<std::string> roots;
    std::optional<std::size_t> sample_n;
    std::optional<int> iteration;
    std::string pairs_path, labels_a, labels_b, seeds_path, vectors_path;
    int port = 8080;

    auto* scan = app.add_subcommand("scan", "Extract comments from source trees into a corpus");
    scan->add_option("roots", roots, "Project root directories")->required();
    scan->add_option("--out", scan_out, "Corpus JSONL to write")->default_val("corpus.jsonl");
    overrides.attach(scan);

    auto* detect = app.add_subcommand("detect", "Match the lexicon against a corpus");
    detect->add_option("--out", detect_out, "Detections JSONL to write")->default_val("detections.jsonl");
    overrides.attach(detect);

    auto* classify = app.add_subcommand("classify", "Assign taxonomy types to detections");
    classify->add_option("--out", classify_out, "Classified detections (default: overwrite input)");
    classify->add_option("--tally", tally_arg, "Also write the tally CSV here");
    overrides.attach(classify);

    auto* report = app.add_subcommand("report", "Prevalence, type tally and category test");
    report->add_option("--out", report_out, "Write the report here instead of stdout");
    overrides.attach(report);

    auto* sample = app.add_subcommand("sample", "Stratified sample of detection ids");
    sample->add_option("--n", sample_n, "Sample size (default: from z, E, p)");
    sample->add_option("--iteration", iteration,
                       "Refinement iteration; reproduces the sample `refine run` expects");
    sample->add_option("--out", sample_out, "Write ids here instead of stdout");
    overrides.attach(sample);

    auto* refine = app.add_subcommand("refine", "Pattern refinement loop");
    refine->require_subcommand(1);
    auto* refine_run = refine->add_subcommand("run", "Evaluate one iteration and exclude noisy patterns");
    refine_run->add_option("--lexicon-out", lexicon_out, "Updated lexicon (default: overwrite --lexicon)");
    overrides.attach(refine_run);
    auto* refine_status = refine->add_subcommand("status", "Print the iteration history");
    overrides.attach(refine_status);

    auto* stats_cmd = app.add_subcommand("stats", "Statistics helpers");
    stats_cmd->require_subcommand(1);
    auto* wilcoxon = stats_cmd->add_subcommand("wilcoxon", "Wilcoxon signed-rank test on x,y pairs");
    wilcoxon->add_option("--pairs", pairs_path, "CSV of x,y rows")->required();
    wilcoxon->add_option("--method", method, "auto, exact or normal");
    auto* kappa = stats_cmd->add_subcommand("kappa", "Cohen's kappa for two label files");
    kappa->add_option("--a", labels_a, "Labels of rater A, one per line")->required();
    kappa->add_option("--b", labels_b, "Labels of rater B, one per line")->required();
    auto* sample_size = stats_cmd->add_subcommand("sample-size", "ceil(z^2 p (1-p) / E^2)");
    overrides.attach(sample_size);

    auto* extrapolate = app.add_subcommand("extrapolate", "Grow the feature list from embedding neighbours");
    extrapolate->add_option("--seeds", seeds_path, "Seed terms, one per line")->required();
    extrapolate->add_option("--vectors", vectors_path, "Word vector file")->required();
    extrapolate->add_option("--out", extrap_out, "Lexicon fragment to append to")
        ->default_val("extrapolated.tsv");
    extrapolate->add_option("--auto-accept", auto_accept, "Accept every candidate as direct|indirect");
    overrides.attach(extrapolate);

    auto* serve_cmd = app.add_subcommand("serve", "Run the triage HTTP service");
    serve_cmd->add_option("--port", port, "TCP port")->default_val(8080);
    serve_cmd->add_option("--host", host, "Bind address")->default_val("127.0.0.1");
    serve_cmd->add_option("--ui-dir", ui_dir, "Directory with a built UI bundle (index.html)");
    overrides.attach(serve_cmd);

    try {
        try {
            app.parse(argc, argv);
        } catch (const CLI::CallForHelp&) {
            out << app.help();
            return 0;
        } catch (const CLI::CallForAllHelp&) {
            out << app.help("", CLI::AppFormatMode::All);
            return 0;
        } catch (const CLI::ParseError& e) {
            err << "error: " << e.what() << "\n";
            if (e.get_name() == "RequiredError" || e.get_name() == "ExtrasError")
                err << "run `saad --help` for usage\n";
            return static_cast<int>(ErrorClass::Validation);
        }

        Config cfg;
        if (!config_path.empty()) {
            cfg = Config::load(config_path);
        } else if (const char* env = std::getenv("SAAD_CONFIG"); env && *env) {
            cfg = Config::load(env);
        }
        cfg.merge(overrides.collect());
        const auto rc = RunConfig::from(cfg);

        if (*scan) return cmd_scan(roots, scan_out, rc, io);
        if (*detect) return cmd_detect(rc, detect_out, io);
        if (*classify) return cmd_classify(rc, classify_out, tally_arg, io);
        if (*report) return cmd_report(rc, report_out, io);
        if (*sample) return cmd_sample(rc, sample_n, iteration, sample_out, io);
        if (*refine_run) return cmd_refine_run(rc, lexicon_out, io);
        if (*refine_status) return cmd_refine_status(rc, io);
        if (*wilcoxon) return cmd_stats_wilcoxon(pairs_path, method, io);
        if (*kappa) return cmd_stats_kappa(labels_a, labels_b, io);
        if (*sample_size) return cmd_stats_sample_size(rc, io);
        if (*extrapolate) return cmd_extrapolate(rc, seeds_path, vectors_path, extrap_out, auto_accept, io);
        if (*serve_cmd) return cmd_serve(rc, host, port, ui_dir, io);
        return static_cast<int>(ErrorClass::Validation);
    } catch (const IncompleteAnnotations& e) {
        err << "error: " << e.what() << "\n";
        for (const auto& id : e.missing()) err << "missing\t" << id << "\n";
        return static_cast<int>(e.error_class());
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return static_cast<int>(e.error_class());
    } catch (const fs::filesystem_error& e) {
        err << "error: " << e.what() << "\n";
        return static_cast<int>(ErrorClass::Io);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace saad::cli
