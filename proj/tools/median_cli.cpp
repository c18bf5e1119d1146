// Command-line front end: validate, lambda, fraisse, check, export, iso.
//
// Exit codes: 0 success or witness found, 1 check failed or no witness,
// 2 input error, 3 resource limit.

#include <median/io.hpp>

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <sstream>

using namespace median;
using io::json;

namespace {

enum Exit { ok = 0, check_failed = 1, input_error = 2, resource_limit = 3 };

struct Options {
    std::size_t bound = 2;
    std::size_t levels = 3;
    std::size_t cap = 0; // 0: default_stage_cap()
    std::string order = "canonical";
    std::string out;
    std::string format = "json";
    bool json_report = false;

    std::string file;
    std::string other;
    std::size_t n = 0;
    std::string kind;
    std::string sequence;
    std::string morphism;
    std::size_t stage = 0;
    std::string family_a;
    std::string family_b;
    std::string halfspace;
};

void emit(const Options & opt, const json & report, const std::string & text)
{
    if (opt.json_report)
        std::cout << io::dump(report);
    else
        std::cout << text;
}

int report_error(const Options & opt, const Error & e, int code)
{
    json report = {{"status", "error"}, {"error", std::string(errc_name(e.code()))}, {"message", e.what()},
                   {"witness", e.witness()}};
    if (opt.json_report)
        std::cout << io::dump(report);
    std::cerr << e.what() << "\n";
    for (auto & w : e.witness())
        std::cerr << "  witness: " << w << "\n";
    return code;
}

int input_code(Errc code)
{
    return code == Errc::ResourceLimit ? resource_limit : input_error;
}

// Errors while validating a document are failed checks unless the document
// could not be read at all.
int validation_code(Errc code)
{
    switch (code) {
    case Errc::ParseError:
    case Errc::UnsupportedSchema:
        return input_error;
    case Errc::ResourceLimit:
        return resource_limit;
    default:
        return check_failed;
    }
}

std::string join(const std::vector<std::string> & parts, const char * sep = " ")
{
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i)
        out += (i ? sep : "") + parts[i];
    return out;
}

std::vector<std::string> sizes(const InverseSequence & seq)
{
    std::vector<std::string> out;
    for (auto & s : seq.stages)
        out.push_back(std::to_string(s->size()));
    return out;
}

int cmd_validate(const Options & opt)
{
    json doc;
    try {
        doc = io::read_json_file(opt.file);
    }
    catch (const Error & e) {
        return report_error(opt, e, input_error);
    }
    try {
        const auto base = std::filesystem::path(opt.file).parent_path();
        json report = {{"status", "valid"}, {"file", opt.file}};
        std::string text;
        switch (io::detect_kind(doc)) {
        case io::DocumentKind::algebra: {
            auto m = io::algebra_from_json(doc);
            report["kind"] = "algebra";
            report["points"] = m.size();
            report["walls"] = halfspaces(m).size();
            report["canonical"] = m.canonical();
            text = "valid algebra: " + std::to_string(m.size()) + " points, " + std::to_string(halfspaces(m).size()) +
                   " walls\n";
            break;
        }
        case io::DocumentKind::morphism: {
            auto f = io::epimorphism_from_json(doc, base);
            report["kind"] = "morphism";
            report["source_points"] = f.source->size();
            report["target_points"] = f.target->size();
            text = "valid epimorphism: " + std::to_string(f.source->size()) + " -> " +
                   std::to_string(f.target->size()) + " points\n";
            break;
        }
        case io::DocumentKind::sequence: {
            auto seq = io::sequence_from_json(doc);
            report["kind"] = "sequence";
            report["stage_sizes"] = sizes(seq);
            text = "valid sequence: stage sizes " + join(sizes(seq)) + "\n";
            break;
        }
        }
        emit(opt, report, text);
        return ok;
    }
    catch (const Error & e) {
        return report_error(opt, e, validation_code(e.code()));
    }
}

int cmd_lambda(const Options & opt)
{
    auto sx = superextension(opt.n);
    if (! opt.out.empty()) {
        std::filesystem::create_directories(opt.out);
        json systems = json::array();
        for (auto & s : sx.systems)
            systems.push_back(io::to_json(s));
        json doc = {{"algebra", io::to_json(sx.algebra)}, {"systems", systems}, {"schema_version", io::schema_version}};
        io::write_file(std::filesystem::path(opt.out) / ("lambda" + std::to_string(opt.n) + ".json"), io::dump(doc));
    }
    std::cout << sx.algebra.size() << "\n";
    return ok;
}

SaturationConfig config_of(const Options & opt)
{
    SaturationConfig c;
    c.size_bound = opt.bound;
    c.cap = opt.cap ? opt.cap : default_stage_cap();
    c.order = parse_order(opt.order);
    return c;
}

int cmd_fraisse(const Options & opt)
{
    auto seq = build_fraisse(opt.levels, config_of(opt));
    const std::filesystem::path dir = opt.out.empty() ? "." : opt.out;
    std::filesystem::create_directories(dir);
    io::write_file(dir / "sequence.json", io::dump(io::to_json(seq)));
    std::cout << "stage sizes: " << join(sizes(seq)) << "\n";
    return ok;
}

// Halfspace references: "all", "none", or an index into the oriented halfspaces
// of the stage (2w is side0 of wall w, 2w+1 its side1).
Subset parse_halfspace(const MedianAlgebra & m, const std::string & token)
{
    if (token == "all")
        return m.full_set();
    if (token == "none")
        return m.empty_set();
    const auto sides = oriented_halfspaces(m);
    std::size_t used = 0;
    std::size_t index = 0;
    try {
        index = std::stoul(token, &used);
    }
    catch (const std::exception &) {
        used = 0;
    }
    if (used != token.size() || token.empty())
        fail(Errc::ParseError, "halfspace reference must be an index, 'all' or 'none'", {token});
    if (index >= sides.size())
        fail(Errc::IndexOutOfRange, "stage has " + std::to_string(sides.size()) + " oriented halfspaces", {token});
    return sides[index];
}

std::vector<Subset> parse_family(const MedianAlgebra & m, const std::string & list)
{
    std::vector<Subset> out;
    std::stringstream in(list);
    std::string token;
    while (std::getline(in, token, ','))
        if (! token.empty())
            out.push_back(parse_halfspace(m, token));
    return out;
}

int cmd_check(const Options & opt)
{
    const auto seq = io::sequence_from_json(io::read_json_file(opt.sequence));
    json report = {{"check", opt.kind}};

    if (opt.kind == "baf") {
        const auto other = opt.other.empty() ? seq : io::sequence_from_json(io::read_json_file(opt.other));
        const auto inter = back_and_forth(seq, other);
        report["depth"] = inter.depth;
        report["complete"] = inter.complete;
        report["alphas"] = inter.alphas;
        report["betas"] = inter.betas;
        report["report"] = inter.report;
        if (! inter.complete) {
            report["stuck_side"] = inter.stuck_side;
            report["stuck_stage"] = inter.stuck_stage;
        }
        report["status"] = inter.complete ? "witness" : "stuck";
        emit(opt, report, "depth " + std::to_string(inter.depth) + ": " + inter.report + "\n");
        return inter.complete ? ok : check_failed;
    }

    if (opt.stage >= seq.length())
        fail(Errc::IndexOutOfRange, "stage " + std::to_string(opt.stage) + " does not exist");
    const auto & stage = *seq.stages[opt.stage];

    if (opt.kind == "ext") {
        if (opt.morphism.empty())
            fail(Errc::ParseError, "ext needs --morphism");
        auto f = io::epimorphism_from_json(io::read_json_file(opt.morphism),
                                           std::filesystem::path(opt.morphism).parent_path());
        auto r = check_extension_property(seq, f, opt.stage);
        report["status"] = r.found() ? "witness" : "no_witness";
        report["report"] = r.report;
        std::string text = r.report + "\n";
        if (r.found()) {
            report["beta"] = *r.beta;
            report["g"] = r.g->map;
        }
        emit(opt, report, text);
        return r.found() ? ok : check_failed;
    }

    HalfspaceResult r;
    if (opt.kind == "m1")
        r = check_m1(seq, opt.stage, parse_family(stage, opt.family_a), parse_family(stage, opt.family_b));
    else if (opt.kind == "m2")
        r = check_m2(seq, opt.stage, parse_family(stage, opt.family_a));
    else if (opt.kind == "m3")
        r = check_m3(seq, opt.stage, parse_halfspace(stage, opt.halfspace));
    else
        fail(Errc::ParseError, "unknown check kind", {opt.kind});

    report["status"] = r.found() ? "witness" : "no_witness";
    report["report"] = r.report;
    std::string text = r.report + "\n";
    if (r.found()) {
        report["beta"] = *r.beta;
        std::vector<std::string> rendered;
        for (auto & h : r.halfspaces)
            rendered.push_back(render(*seq.stages[*r.beta], h));
        report["halfspaces"] = rendered;
        text += "  " + join(rendered) + "\n";
    }
    emit(opt, report, text);
    return r.found() ? ok : check_failed;
}

int cmd_export(const Options & opt)
{
    const auto m = io::algebra_from_json(io::read_json_file(opt.file));
    std::string text;
    if (opt.format == "dot")
        text = io::to_dot(m);
    else if (opt.format == "json")
        text = io::dump(io::to_json(m));
    else
        fail(Errc::ParseError, "unknown format", {opt.format});
    if (opt.out.empty())
        std::cout << text;
    else
        io::write_file(opt.out, text);
    return ok;
}

int cmd_iso(const Options & opt)
{
    auto a = share(io::algebra_from_json(io::read_json_file(opt.file)));
    auto b = share(io::algebra_from_json(io::read_json_file(opt.other)));
    auto iso = find_isomorphism(a, b);
    json report = {{"isomorphic", iso.has_value()}};
    std::string text = "not isomorphic\n";
    if (iso) {
        report["map"] = iso->map;
        text = "isomorphic:";
        for (auto v : iso->map)
            text += " " + std::to_string(v);
        text += "\n";
    }
    emit(opt, report, text);
    return iso ? ok : check_failed;
}

} // namespace

int main(int argc, char ** argv)
{
    CLI::App app{"Finite median algebras: validation, superextensions, saturated sequences, checks"};
    app.require_subcommand(1);
    Options opt;
    app.add_flag("--json-report", opt.json_report, "Print a machine-readable JSON report");

    auto * validate = app.add_subcommand("validate", "Check an algebra, morphism or sequence file");
    validate->add_option("file", opt.file, "Input JSON")->required();

    auto * lambda = app.add_subcommand("lambda", "Superextension of an n-element set; prints its size");
    lambda->add_option("n", opt.n, "Ground set size")->required();
    lambda->add_option("--out", opt.out, "Directory for lambda<n>.json");

    auto * fraisse = app.add_subcommand("fraisse", "Build a saturated inverse sequence");
    fraisse->add_option("--levels", opt.levels, "Number of stages")->capture_default_str();
    fraisse->add_option("--bound", opt.bound, "Size bound for lifting problems")->capture_default_str();
    fraisse->add_option("--cap", opt.cap, "Per-stage point cap (default 4096 or MEDIAN_FRAISSE_CAP)");
    fraisse->add_option("--order", opt.order, "Tuple order: canonical or reversed")->capture_default_str();
    fraisse->add_option("--out", opt.out, "Output directory");

    auto * check = app.add_subcommand("check", "Run m1, m2, m3, ext or baf on a sequence");
    check->add_option("kind", opt.kind, "m1 | m2 | m3 | ext | baf")->required()->check(
        CLI::IsMember({"m1", "m2", "m3", "ext", "baf"}));
    check->add_option("--sequence", opt.sequence, "Sequence JSON")->required();
    check->add_option("--other", opt.other, "Second sequence for baf (default: the same one)");
    check->add_option("--stage", opt.stage, "Stage index alpha");
    check->add_option("--family-a", opt.family_a, "Comma-separated halfspace references");
    check->add_option("--family-b", opt.family_b, "Comma-separated halfspace references");
    check->add_option("--halfspace", opt.halfspace, "Halfspace reference for m3");
    check->add_option("--morphism", opt.morphism, "Morphism JSON onto the stage, for ext");

    auto * exporter = app.add_subcommand("export", "Export an algebra");
    exporter->add_option("file", opt.file, "Algebra JSON")->required();
    exporter->add_option("--format", opt.format, "dot or json")->capture_default_str();
    exporter->add_option("--out", opt.out, "Output file (default stdout)");

    auto * iso = app.add_subcommand("iso", "Search for an isomorphism between two algebras");
    iso->add_option("a", opt.file, "First algebra JSON")->required();
    iso->add_option("b", opt.other, "Second algebra JSON")->required();

    try {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError & e) {
        const int code = app.exit(e);
        return code == 0 ? ok : input_error;
    }

    try {
        if (*validate)
            return cmd_validate(opt);
        if (*lambda)
            return cmd_lambda(opt);
        if (*fraisse)
            return cmd_fraisse(opt);
        if (*check)
            return cmd_check(opt);
        if (*exporter)
            return cmd_export(opt);
        if (*iso)
            return cmd_iso(opt);
    }
    catch (const Error & e) {
        return report_error(opt, e, input_code(e.code()));
    }
    catch (const std::exception & e) {
        std::cerr << "error: " << e.what() << "\n";
        return input_error;
    }
    return input_error;
}
