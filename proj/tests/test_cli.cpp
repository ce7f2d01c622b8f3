#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "lteaudio/champions.hpp"
#include "lteaudio/csv.hpp"
#include "lteaudio/wav.hpp"

using namespace lteaudio;
namespace fs = std::filesystem;

namespace {

struct CliResult {
    int code = -1;
    std::string out;
    std::string err;
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path scratch_dir() {
    static const fs::path dir = [] {
        auto d = fs::temp_directory_path() / "lteaudio_cli_test";
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

fs::path scratch(const std::string& name) { return scratch_dir() / name; }

void write_file(const fs::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary);
    out << text;
}

CliResult cli(const std::string& args) {
    const auto out = scratch("stdout.txt");
    const auto err = scratch("stderr.txt");
    const std::string cmd = std::string("cd ") + scratch_dir().string() + " && " + LTEAUDIO_CLI + " " + args + " >" +
                            out.string() + " 2>" + err.string();
    const int status = std::system(cmd.c_str());
    CliResult r;
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = slurp(out);
    r.err = slurp(err);
    return r;
}

std::string waveform(const std::string& name) { return std::string(LTEAUDIO_WAVEFORM_DIR) + "/" + name + ".app"; }

CsvTable table(const std::string& text) { return CsvTable::parse(text); }

double number(const CsvTable& t, std::size_t row, const std::string& col) {
    return std::stod(t.at(row, t.column(col)));
}

std::string results_row(const std::string& team, int round, const std::string& medium, double ber, const std::string& snr,
                        const std::string& dist, double tput = 0) {
    std::ostringstream s;
    s << team << ',' << round << ',' << medium << ',' << ber << ',' << snr << ',' << dist << ',' << tput << '\n';
    return s.str();
}

}  // namespace

TEST_CASE("usage errors exit with 2") {
    CHECK(cli("").code == 2);
    CHECK(cli("nosuchcommand").code == 2);
    CHECK(cli("simulate").code == 2);
    CHECK(cli("simulate --waveform /nonexistent.app").code == 2);
    CHECK(cli("--help").code == 0);

    write_file(scratch("bad.app"), "[modules]\nsrc: data_source {}\nx: nosuchtype {}\n");
    auto r = cli("simulate --waveform " + scratch("bad.app").string());
    CHECK(r.code == 2);
    CHECK(r.err.find("line 3") != std::string::npos);

    write_file(scratch("nosnr.app"), slurp(waveform("step0_awgn")).replace(slurp(waveform("step0_awgn")).find("snr_db = 10"), 11, ""));
    CHECK(cli("simulate --waveform " + scratch("nosnr.app").string()).code == 2);
    CHECK(cli("simulate --waveform " + scratch("nosnr.app").string() + " --snr 5 --subframes 2").code == 0);
    CHECK(cli("simulate --waveform " + waveform("step0_ideal") + " --subframes 0").code == 2);
    CHECK(cli("simulate --waveform " + waveform("step0_ideal") + " --set nonsense").code == 2);
}

TEST_CASE("simulate") {
    auto r = cli("simulate --waveform " + waveform("step0_ideal") + " --subframes 20");
    REQUIRE(r.code == 0);
    auto t = table(r.out);
    CHECK(t.header() == std::vector<std::string>{"snr_db", "ber", "bler", "evm_db", "throughput_bps", "bits", "blocks"});
    REQUIRE(t.rows() == 1);
    CHECK(number(t, 0, "ber") == 0.0);
    CHECK(t.at(0, t.column("snr_db")).empty());

    r = cli("--seed 4 simulate --waveform " + waveform("full_awgn") + " --subframes 30 --snr 10");
    REQUIRE(r.code == 0);
    t = table(r.out);
    CHECK(number(t, 0, "ber") < 0.1);
    CHECK(number(t, 0, "snr_db") == 10.0);
    CHECK(cli("simulate --seed 4 --waveform " + waveform("full_awgn") + " --subframes 30 --snr 10").out == r.out);

    const auto out_file = scratch("sim.csv");
    r = cli("simulate --waveform " + waveform("step0_ideal") + " --subframes 5 --out " + out_file.string());
    CHECK(r.code == 0);
    CHECK(r.out.empty());
    CHECK(table(slurp(out_file)).rows() == 1);
}

TEST_CASE("sweep") {
    const std::string args = "sweep --waveform " + waveform("step0_awgn") + " --snr-from 0 --snr-to 10 --snr-step 2 --subframes 50";
    const auto r = cli(args);
    REQUIRE(r.code == 0);
    const auto t = table(r.out);
    REQUIRE(t.rows() == 6);
    for (std::size_t i = 0; i < t.rows(); ++i) {
        CHECK(number(t, i, "snr_db") == 2.0 * i);
        CHECK(number(t, i, "bits") >= 1e5);
        if (i > 0) CHECK(number(t, i, "ber") <= number(t, i - 1, "ber"));
    }
    CHECK(cli(args).out == r.out);
    CHECK(cli(args + " --jobs 4").out == r.out);
    CHECK(cli("sweep --waveform " + waveform("step0_awgn") + " --snr-step 0").code == 2);
    CHECK(cli("sweep --waveform " + waveform("step0_awgn") + " --snr-from 5 --snr-to 1").code == 2);
}

TEST_CASE("WAV transmit and receive") {
    const auto wav = scratch("link.wav");
    auto r = cli("txwav --payload-seed 9 --frames 1 --out " + wav.string());
    REQUIRE(r.code == 0);
    const auto bytes = slurp(wav);
    REQUIRE(bytes.size() > 44);
    CHECK(bytes.substr(0, 4) == "RIFF");
    CHECK(bytes.substr(8, 8) == "WAVEfmt ");
    CHECK(wav_read(wav.string()).size() == (bytes.size() - 44) / 2);

    r = cli("rxwav --in " + wav.string() + " --payload-seed 9 --frames 1");
    REQUIRE(r.code == 0);
    auto t = table(r.out);
    CHECK(number(t, 0, "ber") == 0.0);
    CHECK(number(t, 0, "bler") == 0.0);
    CHECK(number(t, 0, "blocks") == 10);

    r = cli("rxwav --in " + wav.string() + " --payload-seed 10 --frames 1");
    REQUIRE(r.code == 0);
    CHECK(number(table(r.out), 0, "ber") > 0.3);

    wav_write(RealVec(48000), scratch("silence.wav").string());
    r = cli("rxwav --in " + scratch("silence.wav").string());
    CHECK(r.code == 1);
    CHECK(r.err.find("no PSS detected") != std::string::npos);
    CHECK(cli("rxwav --in /nonexistent.wav").code == 2);
    CHECK(cli("txwav --mcs 17 --out " + wav.string()).code != 0);
}

TEST_CASE("qualify") {
    auto r = cli("qualify");
    REQUIRE(r.code == 0);
    auto t = table(r.out);
    CHECK(number(t, 0, "snr_db") == 10.0);
    CHECK(number(t, 0, "subframes") == 100);
    CHECK(number(t, 0, "ber") < 0.1);
    CHECK(number(t, 0, "mark") == 10.0);

    r = cli("qualify --set decoder.enabled=false --set snr_db=-4");
    REQUIRE(r.code == 0);
    t = table(r.out);
    const double ber = number(t, 0, "ber");
    CHECK(ber > 0.0);
    CHECK(number(t, 0, "mark") == qualification_mark(ber));

    CHECK(cli("qualify --waveform " + scratch("bad.app").string()).code == 2);
}

TEST_CASE("bracket") {
    // A qualifies best and always shows PS 10, B second with PS 9.5; the
    // rest demonstrate simulation results only.
    std::string csv = "team_id,round,medium,ber,snr_db,distance_m,throughput_bps\n";
    const std::string teams = "ABCDEFGH";
    for (std::size_t i = 0; i < teams.size(); ++i) {
        const std::string id(1, teams[i]);
        csv += results_row(id, 0, "simulation", 0.01 * (i + 1), "10", "");
        for (int round = 1; round <= 3; ++round) {
            if (i == 0) csv += results_row(id, round, "audio", 0.05, "", "1.0");
            else if (i == 1) csv += results_row(id, round, "audio", 0.15, "", "1.0");
            else csv += results_row(id, round, "simulation", 0.05, std::to_string(i), "", 100.0 * i);
        }
    }
    write_file(scratch("results8.csv"), csv);
    auto r = cli("bracket --results " + scratch("results8.csv").string() + " --alpha 0.5 --beta 0.5");
    REQUIRE(r.code == 0);
    auto t = table(r.out);
    CHECK(t.header() == std::vector<std::string>{"team_id", "placement", "ps", "cs", "final_mark"});
    REQUIRE(t.rows() == 8);
    std::multiset<double> cs;
    for (std::size_t i = 0; i < 8; ++i) cs.insert(number(t, i, "cs"));
    CHECK(cs == std::multiset<double>{10, 8, 7, 6, 5, 4, 3, 2});
    CHECK(t.at(1, 0) == "B");
    CHECK(number(t, 1, "cs") == 8.0);
    CHECK(number(t, 1, "ps") == 9.5);
    CHECK(number(t, 1, "final_mark") == 8.75);
    CHECK(r.err.empty());

    r = cli("bracket --results " + scratch("results8.csv").string() + " --alpha 0.7 --beta 0.7");
    CHECK(r.code == 0);
    CHECK(r.err.find("warning") != std::string::npos);

    std::string six = "team_id,round,medium,ber,snr_db,distance_m,throughput_bps\n";
    for (int i = 0; i < 6; ++i) six += results_row("T" + std::to_string(i), 0, "simulation", 0.01, "10", "");
    write_file(scratch("results6.csv"), six);
    CHECK(cli("bracket --results " + scratch("results6.csv").string()).code == 2);
    write_file(scratch("results_bad.csv"), "team,ber\nA,0.1\n");
    CHECK(cli("bracket --results " + scratch("results_bad.csv").string()).code == 2);
    CHECK(cli("bracket --results /nonexistent.csv").code == 2);
}

TEST_CASE("analyze") {
    std::string csv = "student_id,ex1,ex2,lab1,lab2,lab3\n";
    for (int i = 0; i < 20; ++i) {
        const double ex1 = (i * 7) % 11, ex2 = (i * 3) % 10;
        const double lab1 = (i * 5) % 9;
        csv += "s" + std::to_string(i) + "," + std::to_string(ex1) + "," + std::to_string(ex2) + "," +
               std::to_string(lab1) + ",," + std::to_string((ex1 + ex2) / 2) + "\n";
    }
    write_file(scratch("grades.csv"), csv);
    auto r = cli("analyze --grades " + scratch("grades.csv").string() + " --bins 5");
    REQUIRE(r.code == 0);
    const auto split = r.out.find("\n\n");
    REQUIRE(split != std::string::npos);
    const auto pairs = table(r.out.substr(0, split + 1));
    CHECK(pairs.rows() == 5);
    for (std::size_t i = 0; i < pairs.rows(); ++i) {
        CHECK(std::abs(number(pairs, i, "r")) <= 1.0);
        if (pairs.at(i, 0) == "ex_aver" && pairs.at(i, 1) == "lab3") CHECK(number(pairs, i, "r") == 1.0);
    }
    const auto hist = table(r.out.substr(split + 2));
    CHECK(hist.rows() == 5);
    double total = 0;
    for (std::size_t i = 0; i < hist.rows(); ++i) total += number(hist, i, "count");
    CHECK(total == 20);

    r = cli("analyze --matrix --grades " + scratch("grades.csv").string());
    REQUIRE(r.code == 0);
    const auto m = table(r.out.substr(0, r.out.find("\n\n") + 1));
    REQUIRE(m.rows() == 6);
    for (std::size_t i = 0; i < 6; ++i) {
        for (std::size_t j = 1; j <= 6; ++j) CHECK(m.at(i, j) == m.at(j - 1, i + 1));
    }

    write_file(scratch("grades_thin.csv"), "student_id,ex1,ex2,lab1,lab2,lab3\ns1,5,5,5,5,5\n");
    CHECK(cli("analyze --grades " + scratch("grades_thin.csv").string()).code == 2);
    CHECK(cli("analyze --grades /nonexistent.csv").code == 2);
}
