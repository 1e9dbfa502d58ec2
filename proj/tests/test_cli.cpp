#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sys/wait.h>

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <string>
#include <vector>

// End-to-end tests against the installed binary. The path comes from the
// LAPLACE_CLI environment variable set by the build.

namespace {

struct RunResult {
    int exit_code = -1;
    std::string out;
};

std::string cli_path() {
    const char* p = std::getenv("LAPLACE_CLI");
    REQUIRE_MESSAGE(p != nullptr, "LAPLACE_CLI must point at the binary");
    return p;
}

RunResult run_raw(const std::string& cmd) {
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    RunResult r;
    char buf[4096];
    std::size_t got;
    while ((got = std::fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, got);
    int status = pclose(pipe);
    REQUIRE(status != -1);
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

// stdout only
RunResult run_cli(const std::string& args) {
    return run_raw(cli_path() + " " + args + " 2>/dev/null");
}

// stderr only
RunResult run_cli_stderr(const std::string& args) {
    return run_raw(cli_path() + " " + args + " 2>&1 1>/dev/null");
}

// Extracts the raw text of a value in the deterministic JSON the tool
// emits: scans from after "key": to the first top-level ',' or closer,
// skipping strings and nested containers.
std::string json_raw(const std::string& text, const std::string& key) {
    std::string needle = "\"" + key + "\": ";
    std::size_t pos = text.find(needle);
    REQUIRE_MESSAGE(pos != std::string::npos, "missing key ", key);
    pos += needle.size();
    std::size_t end = pos;
    int depth = 0;
    while (end < text.size()) {
        char c = text[end];
        if (c == '"') {
            ++end;
            while (end < text.size() && text[end] != '"') {
                if (text[end] == '\\') ++end;
                ++end;
            }
        } else if (c == '{' || c == '[') {
            ++depth;
        } else if (c == '}' || c == ']') {
            if (depth == 0) break;
            --depth;
        } else if (c == ',' && depth == 0) {
            break;
        }
        ++end;
    }
    std::string raw = text.substr(pos, end - pos);
    while (!raw.empty() && std::isspace(static_cast<unsigned char>(raw.back()))) {
        raw.pop_back();
    }
    return raw;
}

double json_number(const std::string& text, const std::string& key) {
    std::string raw = json_raw(text, key);
    REQUIRE(!raw.empty());
    return std::strtod(raw.c_str(), nullptr);
}

bool json_bool(const std::string& text, const std::string& key) {
    std::string raw = json_raw(text, key);
    REQUIRE((raw == "true" || raw == "false"));
    return raw == "true";
}

// Splits a top-level JSON array into element strings.
std::vector<std::string> split_array(const std::string& text) {
    std::size_t pos = text.find('[');
    REQUIRE(pos != std::string::npos);
    ++pos;
    std::vector<std::string> out;
    std::size_t start = pos;
    int depth = 0;
    for (; pos < text.size(); ++pos) {
        char c = text[pos];
        if (c == '"') {
            ++pos;
            while (pos < text.size() && text[pos] != '"') {
                if (text[pos] == '\\') ++pos;
                ++pos;
            }
        } else if (c == '{' || c == '[') {
            ++depth;
        } else if (c == '}' || c == ']') {
            if (depth == 0) break;
            --depth;
        } else if (c == ',' && depth == 0) {
            out.push_back(text.substr(start, pos - start));
            start = pos + 1;
        }
    }
    if (pos > start) out.push_back(text.substr(start, pos - start));
    return out;
}

int count_error_lines(const std::string& text) {
    int n = 0;
    std::size_t pos = 0;
    while ((pos = text.find("error:", pos)) != std::string::npos) {
        if (pos == 0 || text[pos - 1] == '\n') ++n;
        pos += 6;
    }
    return n;
}

const char* kStirling = "--phi 1 --h 'log(x) - x' --a 0 --b inf";
const char* kGaussian = "--phi 1 --h '-x^2' --a -inf --b inf";
const char* kWiggle = "--phi 1 --h '-x^2 + 0.5*sin(8*x)' --a -5 --b 5";
const char* kFullPass = "--phi 'exp(-x^2)' --h '-x^4' --a -inf --b inf";

}  // namespace

TEST_CASE("approx emits the closed form as JSON") {
    RunResult r = run_cli(std::string("approx ") + kStirling + " --n 100 --json");
    CHECK(r.exit_code == 0);
    REQUIRE(!r.out.empty());
    CHECK(r.out.front() == '{');
    CHECK(r.out.find("\"d2m\":") < r.out.find("\"estimate\":"));
    CHECK(json_number(r.out, "n") == 100);
    CHECK(json_number(r.out, "m") == 1);
    CHECK(json_number(r.out, "sign") == 1);
    CHECK(json_number(r.out, "xi0") == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(json_number(r.out, "h0") == doctest::Approx(-1.0).epsilon(1e-8));
    CHECK(json_number(r.out, "d2m") == doctest::Approx(-1.0).epsilon(1e-7));
    double log_est = json_number(r.out, "log_estimate");
    CHECK(log_est == doctest::Approx(-101.38364655978937294).epsilon(1e-12));
    CHECK(json_number(r.out, "estimate") ==
          doctest::Approx(std::exp(log_est)).epsilon(1e-12));
}

TEST_CASE("approx text output carries the same numbers") {
    RunResult r = run_cli(std::string("approx ") + kStirling + " --n 100");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("log estimate = -101.38364656 ") != std::string::npos);
    CHECK(r.out.find("(sign +1)") != std::string::npos);
    CHECK(r.out.find("m            = 1") != std::string::npos);
}

TEST_CASE("approx reports magnitudes outside double range") {
    // Estimate ~ e^2000, representable only in log scale.
    RunResult r = run_cli("approx --phi 1 --h '2 - x^2' --a -inf --b inf"
                          " --n 1000 --json");
    CHECK(r.exit_code == 0);
    CHECK(json_raw(r.out, "estimate") == "null");
    CHECK(json_number(r.out, "log_estimate") ==
          doctest::Approx(2000.0 + 0.5 * std::log(M_PI / 1000.0)).epsilon(1e-12));
}

TEST_CASE("verify produces one row per n with the measured ratio") {
    RunResult r =
        run_cli(std::string("verify ") + kStirling + " --n-list 1,5,100 --json");
    CHECK(r.exit_code == 0);
    std::vector<std::string> rows = split_array(r.out);
    REQUIRE(rows.size() == 3);
    CHECK(json_number(rows[0], "n") == 1);
    CHECK(json_number(rows[1], "n") == 5);
    CHECK(json_number(rows[2], "n") == 100);
    double ratio = json_number(rows[2], "ratio");
    CHECK(ratio == doctest::Approx(1.0008336778720121418).epsilon(1e-9));
    CHECK(json_number(rows[2], "abs_dev") ==
          doctest::Approx(std::fabs(ratio - 1.0)).epsilon(1e-14));
    CHECK(json_number(rows[2], "log_integral") ==
          doctest::Approx(-101.38281322923373803).epsilon(1e-10));
    CHECK(json_number(rows[2], "log_estimate") ==
          doctest::Approx(-101.38364655978937294).epsilon(1e-12));
}

TEST_CASE("verify text table lists header and ratios") {
    RunResult r = run_cli(std::string("verify ") + kStirling + " --n-list 10,100");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("log I_n") != std::string::npos);
    CHECK(r.out.find("|ratio-1|") != std::string::npos);
    CHECK(r.out.find("1.00836535913") != std::string::npos);
    CHECK(r.out.find("1.00083367787") != std::string::npos);
}

TEST_CASE("prooftrace flags mirror the finite-n diagnostics") {
    RunResult r =
        run_cli(std::string("prooftrace ") + kStirling + " --n 10000 --json");
    CHECK(r.exit_code == 0);
    CHECK(json_number(r.out, "n") == 10000);
    CHECK(json_number(r.out, "m") == 1);
    CHECK(json_number(r.out, "epsilon") ==
          doctest::Approx(0.21544346900318837218).epsilon(1e-12));
    std::string flags = json_raw(r.out, "flags");
    CHECK_FALSE(json_bool(flags, "derivative_bracket"));
    CHECK(json_bool(flags, "tail_bound_holds"));
    CHECK(json_bool(flags, "tails_negligible"));
    CHECK(json_bool(flags, "split_additive"));
    CHECK(json_bool(flags, "surrogate_pointwise"));
    CHECK(json_bool(flags, "final_estimate"));
}

TEST_CASE("prooftrace on a pure Gaussian passes every estimate") {
    RunResult r =
        run_cli(std::string("prooftrace ") + kGaussian + " --n 64 --json");
    CHECK(r.exit_code == 0);
    std::string flags = json_raw(r.out, "flags");
    for (const char* key : {"derivative_bracket", "tail_bound_holds",
                            "tails_negligible", "split_additive",
                            "surrogate_pointwise", "final_estimate"}) {
        CHECK_MESSAGE(json_bool(flags, key), key);
    }
    CHECK(json_number(r.out, "r") == 4.0);
    CHECK(json_number(r.out, "center") ==
          doctest::Approx(1.77245382357913789154).epsilon(1e-10));
    CHECK(json_number(r.out, "sup_gap") == 0.0);
}

TEST_CASE("prooftrace text output marks failing estimates") {
    RunResult r = run_cli(std::string("prooftrace ") + kStirling + " --n 100");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("derivative bracket: FAIL") != std::string::npos);
    CHECK(r.out.find("tail bound holds  : pass") != std::string::npos);
}

TEST_CASE("check reports each condition with witnesses") {
    RunResult r = run_cli(std::string("check ") + kWiggle + " --json");
    CHECK(r.exit_code == 0);
    CHECK_FALSE(json_bool(r.out, "all_pass"));
    std::string c3 = json_raw(r.out, "c3");
    CHECK_FALSE(json_bool(c3, "pass"));
    CHECK(json_number(c3, "worst_witness") ==
          doctest::Approx(-0.5534112447148003).epsilon(1e-6));
    CHECK(json_raw(c3, "detail").find("exceeds") != std::string::npos);
    std::string c4 = json_raw(r.out, "c4");
    CHECK_FALSE(json_bool(c4, "pass"));
    std::string c5 = json_raw(r.out, "c5");
    CHECK(json_bool(c5, "pass"));
    CHECK(json_raw(c5, "worst_witness") == "null");
}

TEST_CASE("check text output distinguishes warn from fail") {
    RunResult r = run_cli(std::string("check ") + kStirling);
    CHECK(r.exit_code == 0);
    // Integrability fails only the literal n = 0 probe here.
    CHECK(r.out.find("c1 (integrability): warn") != std::string::npos);
    CHECK(r.out.find("n=0: divergent") != std::string::npos);
    CHECK(r.out.find("c3 (left flank)   : pass") != std::string::npos);
    CHECK(r.out.find("c4 (right flank)  : pass") != std::string::npos);
    CHECK(r.out.find("c5 (amplitude)    : pass") != std::string::npos);
}

TEST_CASE("check passes a problem satisfying every hypothesis") {
    RunResult r = run_cli(std::string("check ") + kFullPass + " --json --strict");
    CHECK(r.exit_code == 0);
    CHECK(json_bool(r.out, "all_pass"));
    CHECK(json_bool(r.out, "c1_positive"));
    for (const char* key : {"c1", "c3", "c4", "c5"}) {
        CHECK_MESSAGE(json_bool(json_raw(r.out, key), "pass"), key);
    }
}

TEST_CASE("strict mode turns hypothesis failures into exit 2") {
    RunResult check = run_cli(std::string("check ") + kWiggle + " --strict");
    CHECK(check.exit_code == 2);

    RunResult approx =
        run_cli(std::string("approx ") + kStirling + " --n 10 --json --strict");
    CHECK(approx.exit_code == 2);
    CHECK(approx.out.empty());

    RunResult err = run_cli_stderr(std::string("approx ") + kStirling +
                                   " --n 10 --json --strict");
    CHECK(err.out.find("warning:") != std::string::npos);
    CHECK(err.out.find("error: hypothesis checks failed under --strict") !=
          std::string::npos);

    // The same problem proceeds with a warning when not strict.
    RunResult loose =
        run_cli(std::string("approx ") + kStirling + " --n 10 --json");
    CHECK(loose.exit_code == 0);
    CHECK(!loose.out.empty());
}

TEST_CASE("strict mode stays quiet when all hypotheses hold") {
    RunResult r =
        run_cli_stderr(std::string("approx ") + kFullPass + " --n 16 --strict");
    CHECK(r.exit_code == 0);
    CHECK(r.out.empty());
}

TEST_CASE("demo-stirling tabulates factorial convergence") {
    RunResult r = run_cli("demo-stirling --json");
    CHECK(r.exit_code == 0);
    std::vector<std::string> rows = split_array(r.out);
    REQUIRE(rows.size() == 3);
    CHECK(json_number(rows[0], "n") == 10);
    CHECK(json_number(rows[0], "value") ==
          doctest::Approx(2.5275971203597176141).epsilon(1e-12));
    CHECK(json_number(rows[0], "ratio") ==
          doctest::Approx(1.0083653591324002459).epsilon(1e-12));
    CHECK(json_number(rows[2], "n") == 1000);
    CHECK(json_number(rows[2], "target") ==
          doctest::Approx(std::sqrt(2.0 * M_PI)).epsilon(1e-15));

    RunResult two = run_cli("demo-stirling --n-list 10,100 --json");
    CHECK(split_array(two.out).size() == 2);

    RunResult text = run_cli("demo-stirling");
    CHECK(text.out.find("sqrt(2 pi)") != std::string::npos);
}

TEST_CASE("JSON output is byte-identical across runs") {
    std::string cmd = std::string("prooftrace ") + kStirling + " --n 100 --json";
    RunResult first = run_cli(cmd);
    RunResult second = run_cli(cmd);
    CHECK(first.exit_code == 0);
    CHECK(first.out == second.out);
    CHECK(!first.out.empty());
}

TEST_CASE("help requests exit 0") {
    RunResult top = run_cli("--help");
    CHECK(top.exit_code == 0);
    CHECK(top.out.find("approx") != std::string::npos);
    CHECK(top.out.find("prooftrace") != std::string::npos);

    RunResult sub = run_cli("approx --help");
    CHECK(sub.exit_code == 0);
    CHECK(sub.out.find("--phi") != std::string::npos);
}

TEST_CASE("usage errors exit 1") {
    CHECK(run_cli("").exit_code == 1);
    CHECK(run_cli("frobnicate").exit_code == 1);
    // Missing required options.
    CHECK(run_cli("approx --phi 1 --h '-x^2' --a -1").exit_code == 1);
}

TEST_CASE("rejection gates exit 1 with a single diagnostic line") {
    struct Gate {
        const char* name;
        std::string args;
    };
    const Gate gates[] = {
        {"boundary maximum", "approx --phi 1 --h x --a 0 --b 1 --n 10"},
        {"odd leading derivative", "approx --phi 1 --h 'x^3' --a -1 --b 1 --n 10"},
        {"zero amplitude", std::string("approx --phi 'x - 1' ") +
                               "--h '-(x-1)^2' --a 0 --b 2 --n 10"},
        {"syntax error", "approx --phi 'log(' --h '-x^2' --a -1 --b 1 --n 10"},
        {"bad endpoint", "approx --phi 1 --h '-x^2' --a foo --b 1 --n 10"},
        {"descending n-list",
         std::string("verify ") + kGaussian + " --n-list 5,3"},
        {"n below one", std::string("approx ") + kFullPass + " --n 0"},
    };
    for (const Gate& g : gates) {
        RunResult out = run_cli(g.args);
        CHECK_MESSAGE(out.exit_code == 1, g.name);
        RunResult err = run_cli_stderr(g.args);
        CHECK_MESSAGE(count_error_lines(err.out) == 1, g.name, ": ", err.out);
    }
}
