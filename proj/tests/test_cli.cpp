#include <gtest/gtest.h>

#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include "tailor/compare.hpp"
#include "tailor/fixtures.hpp"
#include "tailor/io.hpp"
#include "tailor/service.hpp"

#include <httplib.h>

using namespace tailor;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    int status = -1;
    std::string err;
};

class Cli : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() / ("tailor_cli_" + std::to_string(::getpid()) + "_" +
                                            ::testing::UnitTest::GetInstance()->current_test_info()->name());
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    std::string path(const std::string& name) const { return (dir_ / name).string(); }

    std::string write(const std::string& name, const std::string& text) const {
        std::ofstream(path(name), std::ios::binary) << text;
        return path(name);
    }

    static std::string read(const std::string& p) {
        std::ifstream in(p, std::ios::binary);
        std::stringstream ss;
        ss << in.rdbuf();
        return ss.str();
    }

    Outcome run(const std::string& args) const {
        const std::string err = path("stderr.txt");
        const int rc = std::system((std::string(TAILOR_CLI) + " " + args + " 2>" + err + " >/dev/null").c_str());
        return {WIFEXITED(rc) ? WEXITSTATUS(rc) : -1, read(err)};
    }

    fs::path dir_;
};

std::string script(const std::vector<ScriptEntry>& entries) { return save_edit_script(entries); }

ScriptEntry scale(std::vector<int> triangles, double factor, AxisMode mode = AxisMode::Along) {
    EditOp op;
    op.kind = EditKind::ScaleRegion;
    op.region.triangles = std::move(triangles);
    op.factor = factor;
    op.mode = mode;
    return {op, false};
}

std::vector<int> all_triangles(const GarmentDocument& doc) {
    std::vector<int> t(doc.garment.triangle_count());
    for (int k = 0; k < doc.garment.triangle_count(); ++k) t[k] = k;
    return t;
}

// Numbers within `tol`, everything else equal.
void expect_close(const Json& a, const Json& b, double tol, const std::string& where = "$") {
    if (a.is_number() && b.is_number()) {
        EXPECT_NEAR(a.get<double>(), b.get<double>(), tol) << where;
    } else if (a.is_object() && b.is_object()) {
        ASSERT_EQ(a.size(), b.size()) << where;
        for (auto it = a.begin(); it != a.end(); ++it) {
            ASSERT_TRUE(b.contains(it.key())) << where << "." << it.key();
            expect_close(it.value(), b.at(it.key()), tol, where + "." + it.key());
        }
    } else if (a.is_array() && b.is_array()) {
        ASSERT_EQ(a.size(), b.size()) << where;
        for (std::size_t k = 0; k < a.size(); ++k) expect_close(a[k], b[k], tol, where + "[" + std::to_string(k) + "]");
    } else {
        EXPECT_EQ(a, b) << where;
    }
}

} // namespace

TEST_F(Cli, EmptyScriptKeepsHash) {
    const auto doc = load_document(save_document(fixtures::cylinder({})));
    const auto in = write("doc.json", save_document(doc));
    const auto ops = write("ops.json", script({}));
    ASSERT_EQ(run("apply " + in + " " + ops + " -o " + path("out.json")).status, 0);
    EXPECT_EQ(document_hash(load_document(read(path("out.json")))), document_hash(doc));
}

TEST_F(Cli, IdentityScaleTraceIsFlat) {
    const auto doc = load_document(save_document(fixtures::cylinder({})));
    const auto in = write("doc.json", save_document(doc));
    const auto ops = write("ops.json", script({scale(all_triangles(doc), 1.0)}));
    ASSERT_EQ(run("apply " + in + " " + ops + " -o " + path("out.json") + " --trace " + path("trace.json")).status, 0);
    EXPECT_EQ(document_hash(load_document(read(path("out.json")))), document_hash(doc));
    const Json trace = Json::parse(read(path("trace.json")));
    ASSERT_EQ(trace["ops"].size(), 1u);
    ASSERT_FALSE(trace["ops"][0]["panels"].empty());
    for (const Json& p : trace["ops"][0]["panels"]) {
        for (const Json& e : p["energy"]) EXPECT_LT(e.get<double>(), 1e-9);
    }
}

TEST_F(Cli, FailingOpIsNamed) {
    const auto doc = fixtures::split_cylinder({}, 2);
    const auto in = write("doc.json", save_document(doc));
    EditOp bad;
    bad.kind = EditKind::MoveSeam;
    bad.seam = 7;
    bad.offset = 1.0;
    const auto ops = write("ops.json", script({scale({0}, 1.0), scale({0}, 1.0), {bad, false}}));
    const Outcome r = run("apply " + in + " " + ops + " -o " + path("out.json"));
    EXPECT_EQ(r.status, 2);
    EXPECT_NE(r.err.find("op 3: SeamNotFound"), std::string::npos) << r.err;
    EXPECT_FALSE(fs::exists(path("out.json")));
}

TEST_F(Cli, InvalidInputsExitOne) {
    const std::string text = save_document(fixtures::cylinder({}));
    const auto truncated = write("bad.json", text.substr(0, text.size() / 2));
    const auto good = write("doc.json", text);
    const auto ops = write("ops.json", script({}));
    const Outcome r = run("apply " + truncated + " " + ops + " -o " + path("out.json"));
    EXPECT_EQ(r.status, 1);
    EXPECT_NE(r.err.find("ParseError"), std::string::npos) << r.err;
    const auto bad_ops = write("bad_ops.json", R"({"version":"pt-1","ops":[{"kind":"fold"}]})");
    const Outcome s = run("apply " + good + " " + bad_ops + " -o " + path("out.json"));
    EXPECT_EQ(s.status, 1);
    EXPECT_NE(s.err.find("ValidationError"), std::string::npos) << s.err;
    EXPECT_EQ(run("apply " + path("missing.json") + " " + ops + " -o " + path("out.json")).status, 1);
    EXPECT_EQ(run("apply " + good + " " + ops + " -o " + path("out.json") + " --asap sometimes").status, 1);
}

TEST_F(Cli, ApplyIsDeterministic) {
    const auto doc = fixtures::split_cylinder({}, 2);
    const auto in = write("doc.json", save_document(doc));
    EditOp shorten;
    shorten.kind = EditKind::Shorten;
    shorten.boundary.vertex = 0;
    shorten.distance = 1.5;
    EditOp seam;
    seam.kind = EditKind::MoveSeam;
    seam.seam = 0;
    seam.offset = 0.75;
    const auto ops = write("ops.json", script({scale({0, 1, 2, 3, 4, 5, 6, 7}, 1.3, AxisMode::Perpendicular),
                                               {seam, false},
                                               {shorten, false}}));
    for (const char* name : {"a", "b"}) {
        const std::string out = path(std::string(name) + ".json");
        const std::string svg = path(std::string(name) + ".svg");
        ASSERT_EQ(run("apply " + in + " " + ops + " -o " + out + " --svg " + svg).status, 0);
    }
    EXPECT_EQ(read(path("a.json")), read(path("b.json")));
    EXPECT_EQ(read(path("a.svg")), read(path("b.svg")));
    const std::string svg = read(path("a.svg"));
    EXPECT_EQ(svg.rfind("<svg", 0), 0u);
    EXPECT_NE(svg.find("stroke-dasharray"), std::string::npos);
    EXPECT_EQ(load_document(read(path("a.json"))).history.size(), 3u);
}

TEST_F(Cli, AsapOverrideReachesSolver) {
    const auto doc = fixtures::cylinder({});
    const auto in = write("doc.json", save_document(doc));
    const auto ops = write("ops.json", script({scale(all_triangles(doc), 1.2)}));
    for (const std::string mode : {"on", "off"}) {
        ASSERT_EQ(run("apply " + in + " " + ops + " -o " + path("out.json") + " --asap " + mode + " --trace " +
                      path(mode + ".json"))
                      .status,
                  0);
        const Json trace = Json::parse(read(path(mode + ".json")));
        EXPECT_EQ(trace["ops"][0]["panels"][0]["asap"], mode == "on");
    }
}

TEST_F(Cli, CompareMatchesGoldenReport) {
    const std::string root = TAILOR_SOURCE_DIR "/docs/examples/";
    ASSERT_EQ(run("compare " + root + "elastic-cuff.json " + root + "identity-script.json -o " + path("r.json")).status,
              0);
    const Json report = Json::parse(read(path("r.json")));
    expect_close(report, Json::parse(read(root + "compare-report.json")), 1e-6);
    const Json& p = report["panels"][0];
    EXPECT_NEAR(p["scale_preserving"]["area_ratio"].get<double>(), 1.0, 1e-6);
    EXPECT_NEAR(p["uniform"]["area_ratio"].get<double>(), 0.25, 0.25 * 0.02);
}

TEST_F(Cli, CompareOnCongruentPanel) {
    const auto doc = fixtures::flat_panel(10, 6, 5, 3);
    const auto in = write("doc.json", save_document(doc));
    const auto ops = write("ops.json", script({scale(all_triangles(doc), 1.0)}));
    ASSERT_EQ(run("compare " + in + " " + ops + " -o " + path("r.json")).status, 0);
    const Json report = Json::parse(read(path("r.json")));
    ASSERT_EQ(report["panels"].size(), 1u);
    EXPECT_NEAR(report["panels"][0]["scale_preserving"]["area_ratio"].get<double>(), 1.0, 1e-6);
    EXPECT_NEAR(report["panels"][0]["uniform"]["area_ratio"].get<double>(), 1.0, 1e-6);
}

TEST_F(Cli, WholePanelScaleIsASimilarity) {
    const auto doc = load_document(save_document(fixtures::yoke(8.0, 4)));
    const auto in = write("doc.json", save_document(doc));
    const auto ops = write("ops.json", script({scale(all_triangles(doc), 1.5, AxisMode::Perpendicular)}));
    ASSERT_EQ(run("apply " + in + " " + ops + " -o " + path("out.json") + " --asap on").status, 0);
    const auto out = load_document(read(path("out.json")));
    const Panel& before = doc.panels[0];
    const Panel& after = out.panels[0];
    std::vector<Vec2> ideal;
    for (const Vec2& v : before.vertices) ideal.push_back(1.5 * v);
    const auto placed = align_rigid(ideal, after.vertices);
    EXPECT_LT(boundary_hausdorff(after.vertices, after.boundary, placed, before.boundary), 1e-3);
}

TEST_F(Cli, ServeRejectsBadDocumentAndBusyPort) {
    const auto bad = write("bad.json", "{\"version\": \"pt-1\"}");
    const Outcome r = run("serve " + bad + " --port 0");
    EXPECT_EQ(r.status, 1);
    EXPECT_NE(r.err.find("ValidationError"), std::string::npos) << r.err;

    service::SessionStore store;
    service::Server holder(store);
    const int port = holder.bind(0);
    ASSERT_GT(port, 0);
    const auto good = write("doc.json", save_document(fixtures::cylinder({})));
    EXPECT_EQ(run("serve " + good + " --port " + std::to_string(port)).status, 1);
}

TEST_F(Cli, ServeAnswersHealthChecks) {
    const auto good = write("doc.json", save_document(fixtures::cylinder({})));
    const std::string log = path("serve.log");
    const pid_t pid = ::fork();
    ASSERT_GE(pid, 0);
    if (pid == 0) {
        const std::string cmd = std::string("exec ") + TAILOR_CLI + " serve " + good + " --port 0 >" + log + " 2>&1";
        ::execl("/bin/sh", "sh", "-c", cmd.c_str(), static_cast<char*>(nullptr));
        ::_exit(127);
    }
    int port = -1;
    for (int k = 0; k < 100 && port < 0; ++k) {
        std::this_thread::sleep_for(std::chrono::milliseconds(50));
        const std::string text = read(log);
        const auto at = text.find("127.0.0.1:");
        if (at != std::string::npos && text.find('\n', at) != std::string::npos) port = std::stoi(text.substr(at + 10));
    }
    ASSERT_GT(port, 0) << read(log);
    httplib::Client cli("127.0.0.1", port);
    auto health = cli.Get("/healthz");
    ASSERT_TRUE(health);
    EXPECT_EQ(health->status, 200);
    EXPECT_EQ(Json::parse(health->body)["status"], "ok");

    ::kill(pid, SIGTERM);
    int status = 0;
    ::waitpid(pid, &status, 0);
    EXPECT_TRUE(WIFEXITED(status));
    EXPECT_EQ(WEXITSTATUS(status), 0);
}
