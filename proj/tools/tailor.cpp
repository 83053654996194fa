// tailor: batch driver for pattern documents.
//
//   tailor apply DOC SCRIPT -o OUT [--trace FILE] [--svg FILE] [--asap auto|on|off]
//   tailor compare DOC SCRIPT -o REPORT [--asap auto|on|off]
//   tailor serve DOC [--port N]
//   tailor fixture NAME -o OUT
//
// Exit status: 0 success, 1 unreadable or invalid input (or bind failure),
// 2 an edit failed (the op index is reported).

#include <csignal>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "tailor/compare.hpp"
#include "tailor/edit_ops.hpp"
#include "tailor/error.hpp"
#include "tailor/fixtures.hpp"
#include "tailor/io.hpp"
#include "tailor/service.hpp"

using namespace tailor;

namespace {

struct ExitError {
    int status;
    std::string message;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ExitError{1, "cannot read " + path};
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out || !(out << text)) throw ExitError{1, "cannot write " + path};
}

GarmentDocument load_doc(const std::string& path) {
    try {
        return load_document(read_file(path));
    } catch (const Error& e) {
        throw ExitError{1, path + ": " + e.what() + (e.entity().empty() ? "" : " (" + e.entity() + ")")};
    }
}

std::vector<ScriptEntry> load_script(const std::string& path) {
    try {
        return load_edit_script(read_file(path));
    } catch (const Error& e) {
        throw ExitError{1, path + ": " + e.what() + (e.entity().empty() ? "" : " (" + e.entity() + ")")};
    }
}

AsapMode asap_mode(const std::string& s) {
    if (s == "on") return AsapMode::On;
    if (s == "off") return AsapMode::Off;
    return AsapMode::Auto;
}

struct Replay {
    GarmentDocument doc;
    Json traces = Json::array();
    std::set<int> panels; // ids of panels any op touched or solved
};

Replay replay(const GarmentDocument& doc, const std::vector<ScriptEntry>& script, AsapMode asap) {
    Replay out;
    out.doc = doc;
    for (std::size_t k = 0; k < script.size(); ++k) {
        EditOutcome r;
        try {
            r = apply_edit(out.doc, script[k].op, script[k].mirror, asap);
        } catch (const Error& e) {
            throw ExitError{2, "op " + std::to_string(k + 1) + ": " + std::string(to_string(e.code())) +
                                   (e.entity().empty() ? "" : " (" + e.entity() + ")") + ": " + e.detail()};
        }
        for (const std::string& w : r.warnings) std::cerr << "op " << k + 1 << ": warning: " << w << "\n";
        Json panels = Json::array();
        for (const PanelTrace& t : r.traces) {
            Json energy = Json::array();
            for (double e : t.energy_trace) energy.push_back(round9(e));
            panels.push_back({{"panel", t.panel_id}, {"asap", t.asap}, {"energy", energy}});
            out.panels.insert(t.panel_id);
        }
        out.traces.push_back({{"op", k + 1}, {"kind", to_string(script[k].op.kind)}, {"panels", panels}});
        out.doc = std::move(r.doc);
        for (int t : r.affected) out.panels.insert(out.doc.garment.panel_ids[t]);
    }
    return out;
}

int cmd_apply(const std::string& doc_path, const std::string& script_path, const std::string& out_path,
              const std::string& trace_path, const std::string& svg_path, const std::string& asap) {
    const GarmentDocument doc = load_doc(doc_path);
    const auto script = load_script(script_path);
    const Replay r = replay(doc, script, asap_mode(asap));
    write_file(out_path, save_document(r.doc));
    if (!trace_path.empty()) write_file(trace_path, Json{{"ops", r.traces}}.dump(1) + "\n");
    if (!svg_path.empty()) write_file(svg_path, export_pattern_svg(r.doc.panels, doc.panels));
    return 0;
}

int cmd_compare(const std::string& doc_path, const std::string& script_path, const std::string& out_path,
                const std::string& asap) {
    const GarmentDocument doc = load_doc(doc_path);
    const auto script = load_script(script_path);
    const Replay r = replay(doc, script, asap_mode(asap));
    std::vector<int> ids;
    for (int id : r.panels) {
        if (r.doc.find_panel(id)) ids.push_back(id);
    }
    const auto rows = compare_panels(doc, r.doc, ids);
    write_file(out_path, comparison_to_json(rows).dump(1) + "\n");
    return 0;
}

service::Server* g_server = nullptr;

void on_signal(int) {
    if (g_server) g_server->stop();
}

int cmd_serve(const std::string& doc_path, int port) {
    const std::string bytes = read_file(doc_path);
    service::SessionStore store;
    const service::Response created = store.create(bytes);
    if (created.status != 201) {
        throw ExitError{1, doc_path + ": " + created.body["code"].get<std::string>() + ": " +
                               created.body["message"].get<std::string>()};
    }
    service::Server server(store);
    const int bound = server.bind(port);
    if (bound < 0) throw ExitError{1, "cannot bind 127.0.0.1:" + std::to_string(port)};
    g_server = &server;
    std::signal(SIGINT, on_signal);
    std::signal(SIGTERM, on_signal);
    std::cout << "listening on 127.0.0.1:" << bound << "\nsession " << created.body["id"].get<std::string>() << "\n"
              << std::flush;
    server.listen();
    g_server = nullptr;
    return 0;
}

int cmd_fixture(const std::string& name, const std::string& out_path) {
    GarmentDocument doc;
    if (name == "flat") {
        doc = fixtures::flat_panel(10, 6, 5, 3);
    } else if (name == "cylinder") {
        doc = fixtures::cylinder({});
    } else if (name == "elastic-cuff") {
        doc = fixtures::cylinder({.pattern_scale = 2.0});
    } else if (name == "split-cylinder") {
        doc = fixtures::split_cylinder({}, 2);
    } else if (name == "sleeves") {
        fixtures::CylinderSpec left;
        left.center = Vec3(-12, 0, 0);
        doc = fixtures::sleeves(left);
    } else if (name == "cap") {
        doc = fixtures::cap(10.0, 50.0, 3, 10);
    } else if (name == "yoke") {
        doc = fixtures::yoke(8.0, 4);
    } else {
        throw ExitError{1, "unknown fixture " + name};
    }
    write_file(out_path, save_document(doc));
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Adjust 2D sewing patterns after 3D garment edits"};
    app.require_subcommand(1);
    const std::vector<std::string> asap_values{"auto", "on", "off"};

    std::string doc_path, script_path, out_path, trace_path, svg_path, asap = "auto", fixture_name;
    int port = 8080;

    auto* apply = app.add_subcommand("apply", "Replay an edit script and save the result");
    apply->add_option("document", doc_path)->required();
    apply->add_option("script", script_path)->required();
    apply->add_option("-o,--output", out_path, "Output document")->required();
    apply->add_option("--trace", trace_path, "Write per-op solver energy traces");
    apply->add_option("--svg", svg_path, "Export the pattern (originals dashed)");
    apply->add_option("--asap", asap, "Boundary tangent constraints")->check(CLI::IsMember(asap_values));

    auto* compare = app.add_subcommand("compare", "Compare scale-preserving and uniform flattening");
    compare->add_option("document", doc_path)->required();
    compare->add_option("script", script_path)->required();
    compare->add_option("-o,--output", out_path, "Report file")->required();
    compare->add_option("--asap", asap, "Boundary tangent constraints")->check(CLI::IsMember(asap_values));

    auto* serve = app.add_subcommand("serve", "Serve the document over HTTP on localhost");
    serve->add_option("document", doc_path)->required();
    serve->add_option("-p,--port", port, "Port (0 picks a free one)")->check(CLI::Range(0, 65535));

    auto* fixture = app.add_subcommand("fixture", "Write a synthetic garment document");
    fixture->add_option("name", fixture_name, "flat, cylinder, elastic-cuff, split-cylinder, sleeves, cap or yoke")
        ->required();
    fixture->add_option("-o,--output", out_path)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    try {
        if (*apply) return cmd_apply(doc_path, script_path, out_path, trace_path, svg_path, asap);
        if (*compare) return cmd_compare(doc_path, script_path, out_path, asap);
        if (*serve) return cmd_serve(doc_path, port);
        if (*fixture) return cmd_fixture(fixture_name, out_path);
    } catch (const ExitError& e) {
        std::cerr << e.message << "\n";
        return e.status;
    } catch (const Error& e) {
        std::cerr << e.what() << "\n";
        return 2;
    }
    return 0;
}
