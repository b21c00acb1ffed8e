#include "iai/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <map>
#include <ostream>
#include <sstream>

#include "iai/catalog.hpp"
#include "iai/compose.hpp"
#include "iai/dot.hpp"
#include "iai/dsl.hpp"
#include "iai/enumerate.hpp"
#include "iai/match.hpp"
#include "iai/validate.hpp"

namespace iai::cli {

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

struct Status {
    int code = kOk;
    void raise(int c) { code = std::max(code, c); }
};

std::optional<std::string> read_text(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return std::nullopt;
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

bool write_text(const std::string& path, const std::string& text, std::ostream& out, std::ostream& err) {
    if (path.empty()) {
        out << text;
        return true;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f || !(f << text)) {
        err << "iai: cannot write " << path << "\n";
        return false;
    }
    return true;
}

// Directory arguments expand to their *.iai files in name order.
std::vector<std::string> expand_inputs(const std::vector<std::string>& args, Status& status, std::ostream& err) {
    std::vector<std::string> files;
    for (const std::string& arg : args) {
        std::error_code ec;
        if (fs::is_directory(arg, ec)) {
            std::vector<std::string> found;
            for (const auto& entry : fs::directory_iterator(arg, ec)) {
                if (entry.is_regular_file() && entry.path().extension() == ".iai") {
                    found.push_back(entry.path().generic_string());
                }
            }
            if (ec) {
                err << "iai: cannot read directory " << arg << "\n";
                status.raise(kUsage);
                continue;
            }
            std::ranges::sort(found);
            files.insert(files.end(), found.begin(), found.end());
        } else {
            files.push_back(arg);
        }
    }
    return files;
}

struct Loaded {
    std::string path;
    std::vector<WorkflowRecord> records;
    std::vector<dsl::Diagnostic> notes;  // info-level parse diagnostics
};

// Parse errors and warnings go to `err`; any error raises the usage status.
std::optional<Loaded> load(const std::string& path, Status& status, std::ostream& err) {
    const auto text = read_text(path);
    if (!text) {
        err << "iai: cannot read " << path << "\n";
        status.raise(kUsage);
        return std::nullopt;
    }
    auto parsed = dsl::parse_workflow(*text);
    Loaded out{path, std::move(parsed.records), {}};
    for (const auto& d : parsed.diagnostics) {
        if (d.severity == Severity::Info) {
            out.notes.push_back(d);
        } else {
            err << dsl::format_diagnostic(path, d) << "\n";
        }
    }
    if (parsed.has_errors()) status.raise(kUsage);
    return out;
}

std::optional<WorkflowRecord> load_single(const std::string& path, Status& status, std::ostream& err) {
    auto loaded = load(path, status, err);
    if (!loaded) return std::nullopt;
    if (loaded->records.size() != 1) {
        err << "iai: " << path << ": expected exactly one workflow, found " << loaded->records.size() << "\n";
        status.raise(kUsage);
        return std::nullopt;
    }
    return std::move(loaded->records.front());
}

std::optional<Catalog> select_catalog(const std::string& flag, Status& status, std::ostream& err) {
    std::string path = flag;
    if (path.empty()) {
        if (const char* env = std::getenv("IAI_CATALOG"); env && *env) path = env;
    }
    if (path.empty()) return default_catalog();
    const auto text = read_text(path);
    if (!text) {
        err << "iai: cannot read catalog " << path << "\n";
        status.raise(kUsage);
        return std::nullopt;
    }
    try {
        return load_catalog(*text);
    } catch (const Error& e) {
        err << "iai: " << path << ": " << e.what() << "\n";
        status.raise(kUsage);
        return std::nullopt;
    }
}

json finding_json(const ParadigmGraph& g, const Finding& f) {
    json j{{"rule", code(f.rule)},
           {"name", rule_name(f.rule)},
           {"severity", to_string(f.severity)},
           {"message", f.message}};
    if (f.edge) {
        j["edge"] = *f.edge;
        j["relation"] = to_string(g[*f.edge].relation);
        j["seq"] = g[*f.edge].seq;
    } else {
        j["edge"] = nullptr;
    }
    return j;
}

json carried_json(EntitySet s) {
    json arr = json::array();
    for (Entity e : s.members()) arr.push_back(to_string(e));
    return arr;
}

// ---------------------------------------------------------------------------
// validate

int cmd_validate(const std::vector<std::string>& args, const std::string& profile_name, const std::string& format,
                 std::ostream& out, std::ostream& err) {
    Status status;
    const Profile profile = *parse_profile(profile_name);
    for (const std::string& file : expand_inputs(args, status, err)) {
        auto loaded = load(file, status, err);
        if (!loaded) continue;
        for (const WorkflowRecord& r : loaded->records) {
            const ValidationReport report = validate(r.graph, profile);
            if (!report.passes()) status.raise(kFindings);
            if (format == "json") {
                json findings = json::array();
                for (const Finding& f : report.findings) findings.push_back(finding_json(r.graph, f));
                out << json{{"file", file},
                            {"workflow", r.name},
                            {"profile", to_string(profile)},
                            {"errors", report.error_count()},
                            {"warnings", report.warning_count()},
                            {"findings", findings}}
                           .dump()
                    << "\n";
            } else {
                out << file << ": " << r.name << " (" << to_string(profile) << ")\n";
                std::istringstream lines(format_report(r.graph, report));
                for (std::string line; std::getline(lines, line);) out << "  " << line << "\n";
            }
        }
        if (format != "json") {
            for (const auto& d : loaded->notes) out << "  " << dsl::format_diagnostic(file, d) << "\n";
        }
    }
    return status.code;
}

// ---------------------------------------------------------------------------
// classify

struct RecordClass {
    std::vector<Segment> segments;
    std::vector<Classification> classes;
    std::vector<bool> valid;
    std::string label;
    std::string error;  // set when the record cannot be decomposed
};

RecordClass classify_record(const WorkflowRecord& r, const Catalog& catalog) {
    RecordClass rc;
    try {
        rc.segments = decompose(r);
    } catch (const DecomposeError& e) {
        rc.error = e.what();
        return rc;
    }
    for (std::size_t i = 0; i < rc.segments.size(); ++i) {
        const Segment& s = rc.segments[i];
        Classification c = classify_against_catalog(s.graph, s.carried, catalog);
        c.segment_index = i;
        rc.classes.push_back(c);
        rc.valid.push_back(validate(s.graph, Profile::Atomic, s.carried).passes());
        if (i > 0) rc.label += '+';
        rc.label += c.matched() ? c.paradigm : "novel";
    }
    return rc;
}

std::string describe(const RecordClass& rc) {
    std::string out;
    for (std::size_t i = 0; i < rc.classes.size(); ++i) {
        if (i > 0) out += " -> ";
        out += to_string(rc.classes[i]);
        if (!rc.segments[i].carried.empty()) out += " carried " + to_string(rc.segments[i].carried);
        if (!rc.valid[i]) out += " (segment fails atomic validation)";
    }
    return out;
}

int cmd_classify(const std::vector<std::string>& args, const std::string& catalog_path, const std::string& format,
                 std::ostream& out, std::ostream& err) {
    Status status;
    const auto catalog = select_catalog(catalog_path, status, err);
    if (!catalog) return status.code;

    for (const std::string& file : expand_inputs(args, status, err)) {
        auto loaded = load(file, status, err);
        if (!loaded) continue;
        for (const WorkflowRecord& r : loaded->records) {
            const RecordClass rc = classify_record(r, *catalog);
            const auto expected = r.metadata.find("expected");
            std::string verdict = "ok";
            if (!rc.error.empty()) {
                verdict = "unclassifiable";
                status.raise(kFindings);
                err << file << ": " << r.name << ": " << rc.error << "\n";
            } else if (std::ranges::find(rc.valid, false) != rc.valid.end()) {
                verdict = "invalid";
                status.raise(kFindings);
            }
            if (rc.error.empty() && expected != r.metadata.end() && expected->second != rc.label) {
                verdict = "mismatch";
                status.raise(kFindings);
                err << file << ": " << r.name << ": expected classification differs\n"
                    << "- " << expected->second << "\n"
                    << "+ " << rc.label << "\n";
            }

            if (format == "json") {
                json segs = json::array();
                for (std::size_t i = 0; i < rc.classes.size(); ++i) {
                    const Classification& c = rc.classes[i];
                    segs.push_back({{"index", i},
                                    {"matched", c.matched()},
                                    {"paradigm", c.paradigm},
                                    {"distance", c.distance},
                                    {"carried", carried_json(rc.segments[i].carried)},
                                    {"valid", static_cast<bool>(rc.valid[i])},
                                    {"graph", to_string(rc.segments[i].graph)}});
                }
                json j{{"file", file}, {"workflow", r.name}, {"label", rc.label}, {"status", verdict},
                       {"segments", segs}};
                j["expected"] = expected != r.metadata.end() ? json(expected->second) : json(nullptr);
                out << j.dump() << "\n";
            } else if (rc.error.empty()) {
                out << file << ": " << r.name << ": " << describe(rc) << "\n";
            } else {
                out << file << ": " << r.name << ": unclassifiable\n";
            }
        }
    }
    return status.code;
}

// ---------------------------------------------------------------------------
// enumerate

int cmd_enumerate(int max_edges, bool oracle_check, bool novel_only, const std::string& format, std::ostream& out,
                  std::ostream& err) {
    Status status;
    const auto catalog = select_catalog("", status, err);
    if (!catalog) return status.code;

    EnumerationBounds bounds;
    bounds.max_edges = max_edges;
    std::vector<CanonicalForm> space;
    try {
        space = enumerate_atomic(bounds);
    } catch (const Error& e) {
        err << "iai: " << e.what() << "\n";
        return kUsage;
    }
    const NoveltyReport report = novelty_report(space, *catalog);

    std::optional<bool> agreement;
    if (oracle_check) {
        try {
            agreement = oracle_enumerate(bounds) == space;
        } catch (const Error& e) {
            err << "iai: " << e.what() << "\n";
            return kUsage;
        }
        if (!*agreement) status.raise(kFindings);
    }

    if (format == "json") {
        if (!novel_only) {
            for (const KnownForm& k : report.known) {
                out << json{{"kind", "known"}, {"paradigm", k.paradigm}, {"edges", k.form.edge_count()},
                            {"exogenous", k.form.exogenous_artifact}, {"form", to_string(k.form)}}
                           .dump()
                    << "\n";
            }
        }
        for (const NovelForm& n : report.novel) {
            out << json{{"kind", "novel"}, {"nearest", n.nearest}, {"distance", n.distance},
                        {"edges", n.form.edge_count()}, {"exogenous", n.form.exogenous_artifact},
                        {"form", to_string(n.form)}}
                       .dump()
                << "\n";
        }
        json summary{{"kind", "summary"}, {"max_edges", max_edges}, {"total", space.size()},
                     {"known", report.known.size()}, {"novel", report.novel.size()}};
        summary["oracle"] = agreement ? json(*agreement ? "agreement" : "disagreement") : json(nullptr);
        out << summary.dump() << "\n";
    } else {
        if (!novel_only) {
            for (const KnownForm& k : report.known) out << k.paradigm << "  " << to_string(k.form) << "\n";
        }
        for (const NovelForm& n : report.novel) {
            out << "novel  nearest " << n.nearest << " distance " << n.distance << "  " << to_string(n.form) << "\n";
        }
        out << "max_edges " << max_edges << ": " << space.size() << " forms, " << report.known.size() << " known, "
            << report.novel.size() << " novel\n";
        if (agreement) {
            out << (*agreement ? "oracle agreement: " : "oracle disagreement: ") << space.size()
                << " forms from the enumerator\n";
        }
    }
    return status.code;
}

// ---------------------------------------------------------------------------
// compose, edit, export

int cmd_compose(const std::string& a_path, const std::string& b_path, const std::string& output, std::ostream& out,
                std::ostream& err) {
    Status status;
    auto a = load_single(a_path, status, err);
    auto b = load_single(b_path, status, err);
    if (!a || !b) return status.code;
    try {
        WorkflowRecord result = chain(a->graph, b->graph, a->name + " + " + b->name);
        const auto ea = a->metadata.find("expected");
        const auto eb = b->metadata.find("expected");
        if (ea != a->metadata.end() && eb != b->metadata.end()) {
            result.metadata["expected"] = ea->second + "+" + eb->second;
        }
        if (!write_text(output, dsl::serialize_workflow({result}), out, err)) status.raise(kUsage);
    } catch (const ComposeError& e) {
        err << "iai: compose: " << e.what() << "\n";
        status.raise(kFindings);
    }
    return status.code;
}

std::optional<EntityPair> parse_pair(std::string_view text) {
    const auto colon = text.find(':');
    if (colon == std::string_view::npos) return std::nullopt;
    const auto s = parse_entity(text.substr(0, colon));
    const auto t = parse_entity(text.substr(colon + 1));
    if (!s || !t) return std::nullopt;
    return EntityPair{*s, *t};
}

std::optional<AddEdge> parse_add(std::string_view text) {
    const auto at = text.find('@');
    if (at == std::string_view::npos) return std::nullopt;
    const auto pair = parse_pair(text.substr(0, at));
    const std::string digits(text.substr(at + 1));
    if (!pair || digits.empty() || !std::ranges::all_of(digits, ::isdigit) || digits.size() > 6) return std::nullopt;
    return AddEdge{*pair, std::stoi(digits)};
}

int cmd_edit(const std::string& file, const std::vector<std::string>& adds, const std::vector<std::string>& removes,
             const std::string& exo, const std::string& output, std::ostream& out, std::ostream& err) {
    Status status;
    std::vector<EditOp> ops;
    for (const std::string& r : removes) {
        const auto pair = parse_pair(r);
        if (!pair) {
            err << "iai: edit: --remove expects SRC:DST, got '" << r << "'\n";
            return kUsage;
        }
        ops.push_back(RemoveEdge{*pair});
    }
    for (const std::string& a : adds) {
        const auto add = parse_add(a);
        if (!add || add->seq < 1) {
            err << "iai: edit: --add expects SRC:DST@SEQ with SEQ >= 1, got '" << a << "'\n";
            return kUsage;
        }
        ops.push_back(*add);
    }
    if (!exo.empty()) ops.push_back(SetExogenous{exo == "true"});
    if (ops.empty()) {
        err << "iai: edit: nothing to do; give --add, --remove or --exo\n";
        return kUsage;
    }

    auto record = load_single(file, status, err);
    if (!record) return status.code;
    try {
        EditResult result = apply_edits(record->graph, ops);
        WorkflowRecord edited(record->name, result.graph, record->metadata);
        edited.metadata.erase("expected");
        std::string log;
        for (const EditOp& op : ops) log += (log.empty() ? "" : "; ") + to_string(op);
        edited.metadata["edits"] = log;

        if (!write_text(output, dsl::serialize_workflow({edited}), out, err)) status.raise(kUsage);
        // The report goes to stdout unless stdout already carries the workflow.
        std::ostream& report_stream = output.empty() ? err : out;
        report_stream << format_report(result.graph, result.report);
        if (!result.report.passes()) status.raise(kFindings);
    } catch (const ComposeError& e) {
        err << "iai: edit: " << e.what() << "\n";
        status.raise(kUsage);
    }
    return status.code;
}

int cmd_export(const std::string& file, bool dot, const std::string& output, std::ostream& out, std::ostream& err) {
    if (!dot) {
        err << "iai: export: only --dot is supported\n";
        return kUsage;
    }
    Status status;
    auto loaded = load(file, status, err);
    if (!loaded) return status.code;
    std::string text;
    for (const WorkflowRecord& r : loaded->records) text += export_dot(r.graph, {r.name, true});
    if (!write_text(output, text, out, err)) status.raise(kUsage);
    return status.code;
}

// ---------------------------------------------------------------------------
// catalog list, report

int cmd_catalog_list(const std::string& format, std::ostream& out, std::ostream& err) {
    Status status;
    const auto catalog = select_catalog("", status, err);
    if (!catalog) return status.code;
    for (const CatalogEntry& e : *catalog) {
        if (format == "json") {
            out << json{{"id", e.id},
                        {"name", e.name},
                        {"timing", to_string(e.declared_timing)},
                        {"resources", to_string(e.declared_resources)},
                        {"edges", e.graph.size()},
                        {"graph", to_string(e.graph)}}
                       .dump()
                << "\n";
        } else {
            out << e.id << "\t" << e.name << "\t" << to_string(e.declared_timing) << "\t"
                << to_string(e.declared_resources) << "\t" << to_string(e.graph) << "\n";
        }
    }
    return status.code;
}

int cmd_report(const std::string& dir, std::ostream& out, std::ostream& err) {
    Status status;
    std::error_code ec;
    if (!fs::is_directory(dir, ec)) {
        err << "iai: report: cannot read directory " << dir << "\n";
        return kUsage;
    }
    const auto catalog = select_catalog("", status, err);
    if (!catalog) return status.code;

    std::map<std::string, std::size_t> counts;
    std::map<std::pair<Timing, Resources>, std::size_t> matrix;
    std::vector<std::string> novel;
    for (const std::string& file : expand_inputs({dir}, status, err)) {
        auto loaded = load(file, status, err);
        if (!loaded) continue;
        for (const WorkflowRecord& r : loaded->records) {
            const RecordClass rc = classify_record(r, *catalog);
            if (!rc.error.empty()) {
                novel.push_back(file + ": " + r.name + ": unclassifiable (" + rc.error + ")");
                continue;
            }
            for (std::size_t i = 0; i < rc.classes.size(); ++i) {
                const Classification& c = rc.classes[i];
                if (!c.matched()) {
                    novel.push_back(file + ": " + r.name + ": segment " + std::to_string(i + 1) + " nearest " +
                                    c.paradigm + " distance " + std::to_string(c.distance));
                    continue;
                }
                const CatalogEntry& entry = catalog->at(c.paradigm);
                ++counts[c.paradigm];
                ++matrix[{entry.declared_timing, entry.declared_resources}];
            }
        }
    }

    out << "paradigm  count\n";
    for (const CatalogEntry& e : *catalog) {
        if (auto it = counts.find(e.id); it != counts.end()) {
            out << e.id << std::string(10 - std::min<std::size_t>(e.id.size(), 9), ' ') << it->second << "\n";
        }
    }
    out << "\ntiming    prompt-only  artifact-grounded  total\n";
    for (Timing t : {Timing::Pre, Timing::Post, Timing::Mixed}) {
        const std::size_t p = matrix[{t, Resources::PromptOnly}];
        const std::size_t a = matrix[{t, Resources::ArtifactGrounded}];
        if (t == Timing::Mixed && p + a == 0) continue;
        std::ostringstream row;
        row << to_string(t);
        std::string line = row.str();
        line.resize(10, ' ');
        std::string ps = std::to_string(p);
        ps.resize(13, ' ');
        std::string as = std::to_string(a);
        as.resize(19, ' ');
        out << line << ps << as << (p + a) << "\n";
    }
    out << "\nnovel " << novel.size() << "\n";
    for (const std::string& n : novel) out << "  " << n << "\n";
    return status.code;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Interaction-augmented instruction toolkit", "iai"};
    app.require_subcommand(1);

    std::vector<std::string> files;
    std::string format = "text";
    std::string profile = "atomic";
    std::string catalog_path;
    int max_edges = 8;
    bool oracle_check = false;
    bool novel_only = false;
    std::string a_path, b_path, output, exo, file, dir;
    std::vector<std::string> adds, removes;
    bool dot = false;

    const auto formats = CLI::IsMember({"text", "json"});

    auto* validate_cmd = app.add_subcommand("validate", "Validate workflow files");
    validate_cmd->add_option("files", files, "Files or directories")->required();
    validate_cmd->add_option("--profile", profile)->check(CLI::IsMember({"atomic", "workflow"}));
    validate_cmd->add_option("--format", format)->check(formats);

    auto* classify_cmd = app.add_subcommand("classify", "Classify workflows against the catalog");
    classify_cmd->add_option("files", files, "Files or directories")->required();
    classify_cmd->add_option("--catalog", catalog_path, "Catalog file");
    classify_cmd->add_option("--format", format)->check(formats);

    auto* enumerate_cmd = app.add_subcommand("enumerate", "Enumerate the atomic design space");
    enumerate_cmd->add_option("--max-edges", max_edges);
    enumerate_cmd->add_flag("--oracle-check", oracle_check, "Cross-check against the brute-force oracle");
    enumerate_cmd->add_flag("--novel-only", novel_only, "Only list forms outside the catalog");
    enumerate_cmd->add_option("--format", format)->check(formats);

    auto* compose_cmd = app.add_subcommand("compose", "Chain two workflows");
    compose_cmd->add_option("a", a_path)->required();
    compose_cmd->add_option("b", b_path)->required();
    compose_cmd->add_option("-o", output, "Output file");

    auto* edit_cmd = app.add_subcommand("edit", "Apply relation edits to a workflow");
    edit_cmd->add_option("file", file)->required();
    edit_cmd->add_option("--add", adds, "SRC:DST@SEQ");
    edit_cmd->add_option("--remove", removes, "SRC:DST");
    edit_cmd->add_option("--exo", exo)->check(CLI::IsMember({"true", "false"}));
    edit_cmd->add_option("-o", output, "Output file");

    auto* export_cmd = app.add_subcommand("export", "Export a workflow diagram");
    export_cmd->add_option("file", file)->required();
    export_cmd->add_flag("--dot", dot, "Graphviz DOT output");
    export_cmd->add_option("-o", output, "Output file");

    auto* catalog_cmd = app.add_subcommand("catalog", "Inspect the catalog");
    catalog_cmd->require_subcommand(1);
    auto* list_cmd = catalog_cmd->add_subcommand("list", "List catalog entries");
    list_cmd->add_option("--format", format)->check(formats);

    auto* report_cmd = app.add_subcommand("report", "Summarize a corpus directory");
    report_cmd->add_option("dir", dir)->required();

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "iai: " << e.what() << "\n" << app.help();
        return kUsage;
    }

    try {
        if (*validate_cmd) return cmd_validate(files, profile, format, out, err);
        if (*classify_cmd) return cmd_classify(files, catalog_path, format, out, err);
        if (*enumerate_cmd) return cmd_enumerate(max_edges, oracle_check, novel_only, format, out, err);
        if (*compose_cmd) return cmd_compose(a_path, b_path, output, out, err);
        if (*edit_cmd) return cmd_edit(file, adds, removes, exo, output, out, err);
        if (*export_cmd) return cmd_export(file, dot, output, out, err);
        if (*list_cmd) return cmd_catalog_list(format, out, err);
        if (*report_cmd) return cmd_report(dir, out, err);
    } catch (const Error& e) {
        err << "iai: " << e.what() << "\n";
        return kUsage;
    }
    err << app.help();
    return kUsage;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return run(args, out, err);
}

}  // namespace iai::cli
