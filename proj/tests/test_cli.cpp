#include "doctest.h"

#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>
#include <sys/wait.h>

#ifndef SPREADEC_CLI_PATH
#define SPREADEC_CLI_PATH "./spreadec"
#endif

namespace {

struct CliResult {
    int exit_code;
    std::string out;
};

CliResult run_cli(const std::string& args) {
    const std::string cmd = std::string(SPREADEC_CLI_PATH) + " " + args + " 2>&1";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::string out;
    std::array<char, 4096> buf;
    size_t got;
    while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), got);
    const int status = pclose(pipe);
    return {WEXITSTATUS(status), out};
}

std::string temp_file(const std::string& name, const std::string& content) {
    const std::string path = std::string("/tmp/spreadec_test_") + name;
    std::ofstream f(path);
    f << content;
    return path;
}

}  // namespace

TEST_CASE("cli code-info") {
    CliResult r = run_cli("code-info --q 2 --k 3 --l 2");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("codewords=9") != std::string::npos);
    CHECK(r.out.find("min_distance=6") != std::string::npos);
    CHECK(r.out.find("correction_capability=2") != std::string::npos);
    CHECK(r.out.find("alpha_modulus=1,1,0,1") != std::string::npos);

    CliResult r5 = run_cli("code-info --q 2 --k 2 --l 2");
    CHECK(r5.out.find("codewords=5") != std::string::npos);

    CHECK(run_cli("code-info --q 2 --k 0 --l 2").exit_code == 2);
    CHECK(run_cli("code-info --q 6 --k 2 --l 2").exit_code == 2);  // not a prime power
}

TEST_CASE("cli encode and decode round trip the worked example") {
    CliResult enc = run_cli("encode --q 2 --k 3 --l 2 --gamma '1,0,0;1,1,0'");
    CHECK(enc.exit_code == 0);
    CHECK(enc.out == "100|110\n010|011\n001|111\n");

    const std::string recv = temp_file("recv.txt", "110|101\n");
    CliResult dec = run_cli("decode --q 2 --k 3 --l 2 " + recv);
    CHECK(dec.exit_code == 0);
    CHECK(dec.out.find("outcome=codeword") != std::string::npos);
    CHECK(dec.out.find("gamma=1,0,0;1,1,0") != std::string::npos);
    CHECK(dec.out.find("100|110\n010|011\n001|111\n") != std::string::npos);

    CliResult basic = run_cli("decode --basic --q 2 --k 3 --l 2 " + recv);
    CHECK(basic.exit_code == 0);
    CHECK(basic.out.find("gamma=1,0,0;1,1,0") != std::string::npos);

    // decoding the codeword itself returns it
    const std::string own = temp_file("own.txt", enc.out);
    CliResult self = run_cli("decode --q 2 --k 3 --l 2 " + own);
    CHECK(self.exit_code == 0);
    CHECK(self.out.find("gamma=1,0,0;1,1,0") != std::string::npos);
}

TEST_CASE("cli decode failure modes") {
    // two vectors from two different codewords tie below threshold: exit 1
    const std::string nd = temp_file("nd.txt", "100100\n010011\n");
    CliResult r = run_cli("decode --q 2 --k 3 --l 2 " + nd);
    CHECK(r.exit_code == 1);
    CHECK(r.out.find("outcome=not_decodable") != std::string::npos);

    const std::string garbage = temp_file("garbage.txt", "12|9x\n");
    CHECK(run_cli("decode --q 2 --k 3 --l 2 " + garbage).exit_code == 2);

    const std::string short_row = temp_file("short.txt", "11\n");
    CHECK(run_cli("decode --q 2 --k 3 --l 2 " + short_row).exit_code == 2);

    CHECK(run_cli("decode --q 2 --k 3 --l 2 /nonexistent/file").exit_code == 2);
}

TEST_CASE("cli simulate") {
    CliResult clean = run_cli("simulate --q 2 --k 3 --l 2 --trials 20 --seed 5");
    CHECK(clean.exit_code == 0);
    CHECK(clean.out.find("seed,erasures,errors,correct,rounds_used,combinations_tested\n") == 0);
    // error-free transmissions always decode in round one
    size_t lines = 0;
    for (size_t pos = clean.out.find('\n'); pos != std::string::npos; pos = clean.out.find('\n', pos + 1)) ++lines;
    CHECK(lines == 21);
    for (size_t pos = clean.out.find('\n') + 1; pos < clean.out.size();) {
        size_t end = clean.out.find('\n', pos);
        std::string line = clean.out.substr(pos, end - pos);
        CHECK(line.find(",0,0,1,1,3") != std::string::npos);  // correct, round 1, k' evaluations
        pos = end + 1;
    }

    // within capability: all correct
    CliResult within = run_cli("simulate --q 2 --k 3 --l 2 --erasures 1 --errors 1 --trials 50 --seed 5");
    CHECK(within.exit_code == 0);
    CHECK(within.out.find(",1,1,0,") == std::string::npos);  // no incorrect rows (pattern e,r,correct=0)
    for (size_t pos = within.out.find('\n') + 1; pos < within.out.size();) {
        size_t end = within.out.find('\n', pos);
        CHECK(within.out.substr(pos, end - pos).find(",1,1,1,") != std::string::npos);
        pos = end + 1;
    }

    // beyond capability: rows still emitted
    CliResult beyond = run_cli("simulate --q 2 --k 3 --l 2 --erasures 0 --errors 3 --trials 10 --seed 5");
    CHECK(beyond.exit_code == 0);

    // impossible config
    CHECK(run_cli("simulate --q 2 --k 3 --l 2 --erasures 4 --trials 1").exit_code == 2);

    // determinism incl. --jobs
    CliResult a = run_cli("simulate --q 2 --k 3 --l 2 --erasures 1 --errors 1 --trials 30 --seed 9");
    CliResult b = run_cli("simulate --q 2 --k 3 --l 2 --erasures 1 --errors 1 --trials 30 --seed 9 --jobs 2");
    CHECK(a.out == b.out);
}

TEST_CASE("cli simulate truth log") {
    const std::string log_path = "/tmp/spreadec_test_simlog.txt";
    CliResult r = run_cli("simulate --q 2 --k 3 --l 2 --erasures 1 --errors 1 --trials 3 --seed 11 --out /dev/null --log " +
                          log_path);
    CHECK(r.exit_code == 0);
    std::ifstream log(log_path);
    std::string line;
    int count = 0;
    while (std::getline(log, line)) {
        ++count;
        CHECK(line.find(",1,1,") != std::string::npos);
    }
    CHECK(count == 3);
}

TEST_CASE("cli tables") {
    CliResult r = run_cli("tables");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("table,q,kprime,closed_form_num,closed_form_den,closed_form_float\n") == 0);
    CHECK(r.out.find("thm10,2,3,9,7,") != std::string::npos);
    CHECK(r.out.find("cor12,3,5,69,121,") != std::string::npos);
    CHECK(r.out.find("cor12,4,7,3166,5461,") != std::string::npos);

    // Monte Carlo runs are reproducible byte for byte, regardless of --jobs
    CliResult m1 = run_cli("tables --mc --trials 2000 --seed 7 --jobs 2");
    CliResult m2 = run_cli("tables --mc --trials 2000 --seed 7 --jobs 1");
    CHECK(m1.exit_code == 0);
    CHECK(m1.out == m2.out);
    CHECK(m1.out.find("mc_freq") != std::string::npos);
}

TEST_CASE("cli verify-lemma8") {
    CliResult r = run_cli("verify-lemma8");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("sum=168 gl_order=168 ok") != std::string::npos);
    CHECK(r.out.find("MISMATCH") == std::string::npos);

    CliResult single = run_cli("verify-lemma8 --q 5 --k 2");
    CHECK(single.exit_code == 0);
    CHECK(single.out.find("MISMATCH") == std::string::npos);
}

TEST_CASE("cli handles prime-power fields end to end") {
    CliResult enc = run_cli("encode --q 4 --k 2 --l 2 --gamma '1.0,0.0;1.1,0.1'");
    CHECK(enc.exit_code == 0);
    const std::string cw = temp_file("q4.txt", enc.out);
    CliResult dec = run_cli("decode --q 4 --k 2 --l 2 " + cw);
    CHECK(dec.exit_code == 0);
    CHECK(dec.out.find("gamma=1.0,0.0;1.1,0.1") != std::string::npos);
    CliResult bas = run_cli("decode --basic --q 4 --k 2 --l 2 " + cw);
    CHECK(bas.exit_code == 0);
    CHECK(bas.out.find("gamma=1.0,0.0;1.1,0.1") != std::string::npos);

    CliResult sim = run_cli("simulate --q 4 --k 2 --l 2 --erasures 1 --errors 0 --trials 10 --seed 2 --basic");
    CHECK(sim.exit_code == 0);
    for (size_t pos = sim.out.find('\n') + 1; pos < sim.out.size();) {
        size_t end = sim.out.find('\n', pos);
        CHECK(sim.out.substr(pos, end - pos).find(",1,0,1,") != std::string::npos);  // always correct
        pos = end + 1;
    }
}

TEST_CASE("cli modulus overrides") {
    CliResult ok = run_cli("code-info --q 2 --k 3 --l 2 --alpha-poly 1,1,0,1");
    CHECK(ok.exit_code == 0);
    CHECK(ok.out.find("alpha_modulus=1,1,0,1") != std::string::npos);

    // x^3 + x^2 + 1 is the other primitive cubic over F_2
    CliResult alt = run_cli("code-info --q 2 --k 3 --l 2 --alpha-poly 1,0,1,1");
    CHECK(alt.exit_code == 0);
    CHECK(alt.out.find("alpha_modulus=1,0,1,1") != std::string::npos);

    CHECK(run_cli("code-info --q 2 --k 2 --l 2 --alpha-poly 1,0,1").exit_code == 2);  // reducible

    CliResult beta = run_cli("code-info --q 2 --k 2 --l 2 --beta-poly 2,1,1");
    CHECK(beta.exit_code == 0);
    CHECK(beta.out.find("beta_modulus=2,1,1") != std::string::npos);
}

TEST_CASE("cli usage errors exit 2") {
    CHECK(run_cli("").exit_code == 2);
    CHECK(run_cli("no-such-command").exit_code == 2);
    CHECK(run_cli("encode --q 2 --k 3 --l 2").exit_code == 2);  // missing --gamma
}

TEST_CASE("cli enumeration cap env var") {
    const std::string own = temp_file("cap.txt", "100|110\n010|011\n001|111\n");
    const std::string cmd = std::string("SPREADEC_ENUM_CAP=4 ") + SPREADEC_CLI_PATH +
                            " decode --basic --q 2 --k 3 --l 2 " + own + " 2>&1";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::string out;
    std::array<char, 4096> buf;
    size_t got;
    while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), got);
    const int status = pclose(pipe);
    CHECK(WEXITSTATUS(status) == 2);
    CHECK(out.find("cap") != std::string::npos);
}
