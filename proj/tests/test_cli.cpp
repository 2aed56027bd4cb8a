#include "insole/data.hpp"
#include "test_util.hpp"

#include <doctest.h>

#include <json.hpp>

#include <cstdlib>
#include <sys/wait.h>

using namespace insole;
using nlohmann::json;

namespace {

int run(const std::string& args) {
  const std::string cmd = std::string(INSOLE_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string q(const std::filesystem::path& p) { return "'" + p.string() + "'"; }

json small_config() {
  return json::parse(R"({
    "model": {"hidden": 16, "n_heads": 2, "ffn_dim": 32, "film_hidden": 8, "head_hidden": 16},
    "train": {"epochs": 1, "batch_size": 32, "lr": 0.001},
    "data": {"train_stride": 10},
    "synth": {"n_users": 3, "motions": ["Squat", "Arm Swing"], "duration_s": 5}
  })");
}

}  // namespace

TEST_CASE("cli end to end") {
  testing::TempDir dir;
  testing::write_text(dir / "c.json", small_config().dump());
  const auto data = dir / "data";
  REQUIRE(run("gen --config " + q(dir / "c.json") + " --out " + q(data)) == 0);
  const auto manifest = data / "manifest.json";
  REQUIRE(std::filesystem::exists(manifest));
  CHECK(std::filesystem::exists(data / "layout.json"));

  SUBCASE("oracle eval reports zero error") {
    REQUIRE(run("eval --ckpt oracle --data " + q(manifest) + " --split louo:user01 --report " + q(dir / "r.json") +
                " --plots " + q(dir / "plots")) == 0);
    const auto r = json::parse(testing::read_text(dir / "r.json"));
    CHECK(r.at("rmse_mean").get<double>() == 0.0);
    CHECK(r.at("per_user").size() == 1);
    CHECK(!std::filesystem::is_empty(dir / "plots"));
  }

  SUBCASE("train and eval are reproducible") {
    const std::string train = "train --config " + q(dir / "c.json") + " --data " + q(manifest) + " --split louo:user02";
    REQUIRE(run(train + " --out " + q(dir / "a.ckpt")) == 0);
    REQUIRE(run(train + " --out " + q(dir / "b.ckpt")) == 0);
    CHECK(testing::read_text(dir / "a.ckpt") == testing::read_text(dir / "b.ckpt"));
    CHECK(testing::read_text(dir / "a.ckpt.loss.csv").rfind("epoch,train_loss,val_loss", 0) == 0);

    const std::string eval = "eval --data " + q(manifest) + " --split louo:user02 --ckpt ";
    REQUIRE(run(eval + q(dir / "a.ckpt") + " --report " + q(dir / "ra.json") + " --dump " + q(dir / "d.csv")) == 0);
    REQUIRE(run(eval + q(dir / "b.ckpt") + " --report " + q(dir / "rb.json")) == 0);
    CHECK(testing::read_text(dir / "ra.json") == testing::read_text(dir / "rb.json"));
    CHECK(testing::read_text(dir / "d.csv").rfind("t_ms,gt0", 0) == 0);
    REQUIRE(run(eval + "mean --report " + q(dir / "rm.json")) == 0);

    SUBCASE("infer streams after warm-up") {
      const auto pressure = data / "user00" / "squat_pressure.csv";
      REQUIRE(run("infer --ckpt " + q(dir / "a.ckpt") + " --pressure " + q(pressure) + " --bio " +
                  q(data / "user00" / "bio.json") + " --out " + q(dir / "p.csv")) == 0);
      std::vector<std::int64_t> t;
      const MatXd pred = load_prediction_csv(dir / "p.csv", &t);
      const auto frames = load_pressure_csv(pressure);
      CHECK(pred.cols() == static_cast<Eigen::Index>(frames.size()) - 19);
      CHECK(t.front() == frames[19].t_ms);
      REQUIRE(run("imbalance --input " + q(dir / "p.csv") + " --report " + q(dir / "i.json")) == 0);
      const auto s = json::parse(testing::read_text(dir / "i.json")).at("score").get<double>();
      CHECK(s >= 0.0);
      CHECK(s <= 1.0);
    }
  }
}

TEST_CASE("cli imbalance on a symmetric file") {
  testing::TempDir dir;
  MatXd p = MatXd::Constant(kMuscles, 10, 0.3);
  write_prediction_csv(dir / "sym.csv", {0, 50, 100, 150, 200, 250, 300, 350, 400, 450}, p);
  REQUIRE(run("imbalance --input " + q(dir / "sym.csv") + " --report " + q(dir / "i.json")) == 0);
  CHECK(json::parse(testing::read_text(dir / "i.json")).at("score").get<double>() == 0.0);
}

TEST_CASE("cli exit codes") {
  testing::TempDir dir;
  CHECK(run("") == 1);
  CHECK(run("frobnicate") == 1);
  CHECK(run("imbalance --input") == 1);

  testing::write_text(dir / "bad.csv", "t_ms,nope\n0,1\n");
  CHECK(run("imbalance --input " + q(dir / "bad.csv") + " --report " + q(dir / "o.json")) == 2);
  testing::write_text(dir / "c.json", R"({"model": {"hidden": 30}})");
  CHECK(run("gen --config " + q(dir / "c.json") + " --out " + q(dir / "d")) == 2);

  testing::write_text(dir / "m.json", R"({"recordings": []})");
  CHECK(run("eval --ckpt oracle --data " + q(dir / "m.json") + " --report " + q(dir / "r.json")) == 2);
}
