#include "cogload/error.hpp"
#include "cogload/io.hpp"
#include "cogload/synth.hpp"

#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <sys/wait.h>
#include <unistd.h>

using namespace cogload;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
  auto dir = fs::temp_directory_path() / ("cogload-unit-" + std::to_string(::getpid()) + "-" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

struct CliResult {
  int status;
  std::string out;
};

CliResult run_cli(const fs::path& cwd, const std::string& args) {
  const auto out_file = cwd / "stdout.txt";
  const std::string cmd = "cd '" + cwd.string() + "' && '" COGLOAD_CLI "' " + args + " > '" +
                          out_file.string() + "' 2>&1";
  const int raw = std::system(cmd.c_str());
  return {WIFEXITED(raw) ? WEXITSTATUS(raw) : -1, read_text(out_file)};
}

}  // namespace

TEST_SUITE("io-cli") {
  TEST_CASE("minimal recording fixture") {
    const auto s = parse_recording(
        "# rate_hz=4\n# t0_s=0\n# channels=a:uV,b:mm\ntime_s,a,b\n0,1,2\n0.25,3,4\n0.5,5,6\n0.75,7,8\n");
    CHECK(s.sample_count() == 4);
    CHECK(s.channel_count() == 2);
    CHECK(s.channel(1).unit == "mm");
    CHECK(s.data()[1][3] == 8.0);
  }

  TEST_CASE("timestamp jitter names the row") {
    try {
      parse_recording("# rate_hz=4\n# channels=a:uV\ntime_s,a\n0,1\n0.25,2\n0.25,3\n");
      FAIL("expected RateJitter");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::RateJitter);
      CHECK(std::string(e.what()).find("row 3") != std::string::npos);
    }
  }

  TEST_CASE("unknown unit loads with a warning") {
    std::vector<std::string> warnings;
    const auto s = parse_recording("# rate_hz=2\n# channels=a:furlong\ntime_s,a\n0,1\n0.5,2\n", &warnings);
    CHECK(s.sample_count() == 2);
    REQUIRE(warnings.size() == 1);
    CHECK(warnings[0].find("UnknownUnit") == 0);
  }

  TEST_CASE("recording and annotations round trip") {
    SynthSpec spec;
    spec.duration_s = 2.0;
    spec.channels = {{"O1", "uV"}, {"O2", "uV"}};
    spec.noise_sigma = 3.0;
    const auto eeg = gen_eeg(spec);
    const TimeSeries annotated(eeg.rate_hz(), eeg.channels(), eeg.data(), 1.5,
                               {{1.75, "stim"}, {2.5, "key press"}});
    const auto dir = scratch_dir("rec");
    save_recording(dir / "r.csv", annotated);
    CHECK(fs::exists(annotations_path(dir / "r.csv")));
    CHECK(load_recording(dir / "r.csv") == annotated);
    fs::remove_all(dir);
  }

  TEST_CASE("sha256 known vectors") {
    CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  }

  TEST_CASE("dataset csv round trip") {
    FeatureDataset ds;
    ds.X.resize(2, 3);
    ds.X << 0.1, 1.0 / 3.0, -2e-9, 4.0, 5.5, 6.25;
    ds.y = {0, 2};
    ds.person_ids = {"P01", "P02"};
    ds.repetition_ids = {1, 3};
    ds.conditions = {"circle-fast", "sine-slow"};
    const auto back = parse_dataset(format_dataset(ds));
    CHECK(back.X == ds.X);
    CHECK(back.y == ds.y);
    CHECK(back.person_ids == ds.person_ids);
    CHECK(back.repetition_ids == ds.repetition_ids);
    CHECK(back.conditions == ds.conditions);
  }

  TEST_CASE("run config precedence and unknown keys") {
    RunConfig cfg;
    cfg.apply({{"svm_c", "2.5"}, {"seed", "9"}});
    CHECK(cfg.svm_c == 2.5);
    CHECK(cfg.seed == 9);
    RunConfig round;
    round.apply(cfg.to_key_values());
    CHECK(round.to_key_values() == cfg.to_key_values());
    CHECK_THROWS_AS(cfg.apply({{"no_such_key", "1"}}), Error);
  }

  TEST_CASE("manifest json round trip") {
    Manifest m;
    m.tool_version = "0.1.0";
    m.command = "train";
    m.argv = {"train", "--dataset", "d.csv"};
    m.working_directory = "/tmp";
    m.config = {{"seed", "3"}};
    m.seed = 3;
    m.inputs = {{"d.csv", std::string(64, 'a')}};
    m.outputs = {{"m.json", std::string(64, 'b')}};
    const auto back = manifest_from_json(manifest_to_json(m));
    CHECK(back.argv == m.argv);
    CHECK(back.config == m.config);
    CHECK(back.outputs[0].sha256 == m.outputs[0].sha256);
    CHECK(back.seed == 3);
  }

  TEST_CASE("svg output is well formed") {
    const auto svg = render_svg("t", "x", "y", {{"a", {0, 1, 2}, {1, 4, 9}}});
    CHECK(svg.rfind("<svg", 0) == 0);
    CHECK(svg.find("</svg>") != std::string::npos);
    CHECK(svg.find("polyline") != std::string::npos);
  }

  TEST_CASE("cli without arguments prints usage and exits 2") {
    const auto dir = scratch_dir("noargs");
    const auto r = run_cli(dir, "");
    CHECK(r.status == 2);
    CHECK(r.out.find("Usage") != std::string::npos);
    CHECK(run_cli(dir, "train --bogus").status == 2);
    fs::remove_all(dir);
  }

  TEST_CASE("cli synth then iaf-detect prints the alpha band") {
    const auto dir = scratch_dir("iaf");
    REQUIRE(run_cli(dir, "synth --kind iaf-pair --out pair --seed 4").status == 0);
    const auto r = run_cli(dir, "iaf-detect --open pair/eyes_open.csv --closed pair/eyes_closed.csv --out band.json");
    CHECK(r.status == 0);
    CHECK(r.out.find("band 8-12 Hz") != std::string::npos);
    CHECK(fs::exists(dir / "band.json.manifest.json"));
    fs::remove_all(dir);
  }

  TEST_CASE("cli evaluate reports full accuracy on separable data") {
    const auto dir = scratch_dir("eval");
    REQUIRE(run_cli(dir, "synth --kind pursuit-cohort --out cohort --persons 3 --cells circle-fast "
                         "--difficulties 0,3 --sigmas 2,20 --repetitions 2 --seed 2").status == 0);
    REQUIRE(run_cli(dir, "pursuit-features --trials cohort/trials.csv --out ds.csv").status == 0);
    const auto r = run_cli(dir, "evaluate --dataset ds.csv --binary --scheme lopo --out eval.json");
    CHECK(r.status == 0);
    CHECK(r.out.find("accuracy 1") != std::string::npos);
    fs::remove_all(dir);
  }

  TEST_CASE("cli pipeline errors exit 1 with a json record") {
    const auto dir = scratch_dir("err");
    std::ofstream(dir / "flat.csv") << "# rate_hz=250\n# channels=pupil:mm\ntime_s,pupil\n0,1\n0.004,1\n";
    const auto r = run_cli(dir, "blinks --in flat.csv --out b.json");
    CHECK(r.status == 1);
    CHECK(r.out.find("\"error\":\"MissingChannel\"") != std::string::npos);
    CHECK(r.out.find("\"command\":\"blinks\"") != std::string::npos);
    fs::remove_all(dir);
  }
}
