#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

struct RunResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

fs::path scratch_dir() {
    static const fs::path dir = [] {
        fs::path d = fs::temp_directory_path() / "fmre-cli-tests";
        fs::remove_all(d);
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

RunResult run_cli(const std::string& args, const std::string& stdin_path = "") {
    static int serial = 0;
    const fs::path out = scratch_dir() / ("out" + std::to_string(serial));
    const fs::path err = scratch_dir() / ("err" + std::to_string(serial));
    ++serial;
    std::string cmd = std::string(FMRE_BIN) + " " + args + " >" + out.string() + " 2>" +
                      err.string();
    if (!stdin_path.empty()) cmd += " <" + stdin_path;
    const int status = std::system(cmd.c_str());
    RunResult r;
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = slurp(out);
    r.err = slurp(err);
    return r;
}

fs::path write_file(const std::string& name, const std::string& contents) {
    const fs::path path = scratch_dir() / name;
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << contents;
    return path;
}

const std::string kCorpus = FMRE_CORPUS;

}  // namespace

TEST_CASE("validate accepts the corpus silently") {
    const RunResult r = run_cli("validate " + kCorpus);
    CHECK(r.exit_code == 0);
    CHECK(r.out.empty());
    CHECK(r.err.empty());
}

TEST_CASE("validate reports a cycle and exits 1") {
    const fs::path bad = write_file(
        "cycle.fm",
        "feature model M;\n"
        "feature A; relations decomposition and(B); end feature;\n"
        "feature B; relations decomposition and(A); end feature;\n"
        "end fm M;\n");
    const RunResult r = run_cli("validate " + bad.string());
    CHECK(r.exit_code == 1);
    CHECK(r.err.find("CYCLE") != std::string::npos);
    CHECK(r.out.empty());
}

TEST_CASE("validate on a missing file is a usage error") {
    const RunResult r = run_cli("validate " + (scratch_dir() / "no-such-file.fm").string());
    CHECK(r.exit_code == 2);
}

TEST_CASE("recognize prints the worked-example text blocks") {
    const RunResult stq = run_cli("recognize " + kCorpus + " --feature St-Queue");
    CHECK(stq.exit_code == 0);
    CHECK(stq.out.find("T = Configuration feature") != std::string::npos);
    CHECK(stq.out.find("Constraint: Reject st-beh") != std::string::npos);
    CHECK(stq.out.find("Included in: ---") != std::string::npos);

    const RunResult sq = run_cli("recognize " + kCorpus + " --feature static_queue");
    CHECK(sq.exit_code == 0);
    CHECK(sq.out.find("T = Elementary feature") != std::string::npos);
    CHECK(sq.out.find("Included in: St-Queue") != std::string::npos);

    const RunResult missing = run_cli("recognize " + kCorpus + " --feature nope");
    CHECK(missing.exit_code == 1);
    CHECK(missing.err.find("nope") != std::string::npos);
}

TEST_CASE("recognize emits JSON when asked") {
    const RunResult r = run_cli("recognize " + kCorpus + " --feature St-Queue --format json");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("\"kind\":\"CONFIGURATION\"") != std::string::npos);
    CHECK(r.out.find("reject(st-beh)") != std::string::npos);
}

TEST_CASE("slice forward AND writes three sub-models") {
    const fs::path out_dir = scratch_dir() / "slices-and";
    const RunResult r = run_cli("slice " + kCorpus +
                                " --feature Static-list --direction forward --relation and -o " +
                                out_dir.string());
    CHECK(r.exit_code == 0);
    CHECK(r.out == "3 slice(s)\n");
    CHECK(fs::exists(out_dir / "slice-1.fm"));
    CHECK(fs::exists(out_dir / "slice-2.fm"));
    CHECK(fs::exists(out_dir / "slice-3.fm"));
    const std::string first = slurp(out_dir / "slice-1.fm");
    CHECK(first.find("feature model List;") != std::string::npos);
    CHECK(first.find("feature str;") != std::string::npos);

    // slice files are themselves valid models
    const RunResult check = run_cli("validate " + (out_dir / "slice-1.fm").string());
    CHECK(check.exit_code == 0);
}

TEST_CASE("slice forward OR resolves a loosely spelled alternative") {
    const fs::path out_dir = scratch_dir() / "slices-or";
    const RunResult r =
        run_cli("slice " + kCorpus +
                " --feature Static-list --direction forward --relation or --alt static-queue -o " +
                out_dir.string());
    CHECK(r.exit_code == 0);
    CHECK(r.out == "1 slice(s)\n");
    const std::string only = slurp(out_dir / "slice-1.fm");
    CHECK(only.find("static-list") != std::string::npos);
    CHECK(only.find("static_queue") != std::string::npos);
}

TEST_CASE("alternatives with the AND relation are a usage error") {
    const fs::path out_dir = scratch_dir() / "slices-bad";
    const RunResult r = run_cli("slice " + kCorpus +
                                " --feature Static-list --direction forward --relation and "
                                "--alt x -o " +
                                out_dir.string());
    CHECK(r.exit_code == 2);
}

TEST_CASE("unknown slice features exit 1") {
    const fs::path out_dir = scratch_dir() / "slices-unknown";
    const RunResult r = run_cli("slice " + kCorpus +
                                " --feature ghost --direction forward --relation and -o " +
                                out_dir.string());
    CHECK(r.exit_code == 1);
}

TEST_CASE("export json feeds import-check") {
    const RunResult exported = run_cli("export " + kCorpus + " --format json");
    CHECK(exported.exit_code == 0);
    const fs::path json = write_file("exported.json", exported.out);
    const RunResult checked = run_cli("import-check", json.string());
    CHECK(checked.exit_code == 0);
    CHECK(checked.err.empty());

    const fs::path broken = write_file("broken.json", "{\"name\":42}");
    CHECK(run_cli("import-check", broken.string()).exit_code == 1);
}

TEST_CASE("export dot is structurally sane") {
    const RunResult r = run_cli("export " + kCorpus + " --format dot");
    CHECK(r.exit_code == 0);
    CHECK(r.out.rfind("digraph ", 0) == 0);
    const auto opens = std::count(r.out.begin(), r.out.end(), '{');
    const auto closes = std::count(r.out.begin(), r.out.end(), '}');
    CHECK(opens == closes);
    CHECK(r.out.find("->") != std::string::npos);
}

TEST_CASE("export of an invalid model exits 1 with diagnostics") {
    const fs::path bad = write_file(
        "dangling.fm",
        "feature model M;\nfeature A; relations constraints imply(ghost); end feature;\nend fm M;\n");
    const RunResult r = run_cli("export " + bad.string() + " --format json");
    CHECK(r.exit_code == 1);
    CHECK(r.err.find("UNRESOLVED") != std::string::npos);
}

TEST_CASE("fmt normalizes to a fixed point") {
    const RunResult once = run_cli("fmt " + kCorpus);
    CHECK(once.exit_code == 0);
    const fs::path normalized = write_file("normalized.fm", once.out);
    const RunResult twice = run_cli("fmt " + normalized.string());
    CHECK(twice.exit_code == 0);
    CHECK(twice.out == once.out);
}

TEST_CASE("fmt of the empty model is the two-line canonical form") {
    const fs::path empty = write_file("empty.fm", "feature model M;end fm M;");
    const RunResult r = run_cli("fmt " + empty.string());
    CHECK(r.exit_code == 0);
    CHECK(r.out == "feature model M;\nend fm M;\n");
}

TEST_CASE("fmt leaves files with parse errors untouched") {
    const std::string broken = "feature model M;\nfeature 9x;\nend fm M;\n";
    const fs::path path = write_file("broken.fm", broken);
    const RunResult r = run_cli("fmt " + path.string() + " --write");
    CHECK(r.exit_code == 1);
    CHECK(slurp(path) == broken);
}

TEST_CASE("fmt --write rewrites in place") {
    const fs::path path = write_file("rewrite.fm", "feature model M;  feature a;end feature; end fm M;");
    const RunResult r = run_cli("fmt " + path.string() + " --write");
    CHECK(r.exit_code == 0);
    CHECK(slurp(path) == "feature model M;\n  feature a;\n  end feature;\nend fm M;\n");
}

TEST_CASE("unknown flags are usage errors") {
    CHECK(run_cli("validate --frobnicate " + kCorpus).exit_code == 2);
    CHECK(run_cli("no-such-command").exit_code == 2);
}
