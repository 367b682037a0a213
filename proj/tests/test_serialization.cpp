#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "adclick/serialization.hpp"

using namespace adclick;

namespace {

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  REQUIRE(out.good());
  out << text;
}

ModelParams awkward_model() {
  ModelParams p;
  p.n_max = 3;
  p.perseverance.eta = {1.0 / 3.0, std::sqrt(2.0) - 1.0, 0.1 + 0.2, 0.7};
  p.transition = TransitionMatrix::zeros(3);
  double v = 0.01;
  for (int i = 0; i <= 3; ++i) {
    for (int j = 1; j <= 3; ++j) {
      p.transition.at(i, j) = v;
      v = std::fmod(v * 3.14159, 1.0);
    }
  }
  p.hyper.eta.alpha = {5.0, 1.0 / 7.0, 2.5, 0.3};
  p.hyper.eta.beta = {5.0, 6.0 / 7.0, 7.5, 9.7};
  p.hyper.gamma.alpha = TransitionMatrix::uniform_rows(3);
  p.hyper.from_empty_priors = true;
  p.satisfaction.default_rho = 0.123456789012345678;
  p.satisfaction.rho[{"fix my sink", "ad-1"}] = 2.0 / 3.0;
  p.satisfaction.rho[{"q2", "ad 2"}] = 1e-9;
  p.attractiveness.fallback = 0.625;
  p.attractiveness.theta[{"fix my sink", "ad-1"}] = 1.0 / 97.0;
  return p;
}

} // namespace

TEST_CASE("model parameters round-trip bit-exactly") {
  const std::string path = temp_path("adclick_ours.params");
  ModelParams p = awkward_model();
  save_model_params(p, path);
  ModelParams q = load_model_params(path);
  CHECK(q.n_max == p.n_max);
  CHECK(q.perseverance.eta == p.perseverance.eta);
  CHECK(q.transition.v == p.transition.v);
  CHECK(q.hyper.eta.alpha == p.hyper.eta.alpha);
  CHECK(q.hyper.eta.beta == p.hyper.eta.beta);
  CHECK(q.hyper.gamma.alpha.v == p.hyper.gamma.alpha.v);
  CHECK(q.hyper.from_empty_priors == p.hyper.from_empty_priors);
  CHECK(q.satisfaction.default_rho == p.satisfaction.default_rho);
  CHECK(q.satisfaction.rho == p.satisfaction.rho);
  CHECK(q.attractiveness.fallback == p.attractiveness.fallback);
  CHECK(q.attractiveness.theta == p.attractiveness.theta);
  std::filesystem::remove(path);
}

TEST_CASE("counter files round-trip exactly") {
  std::vector<Session> sessions;
  for (int i = 0; i < 5; ++i) {
    Session s;
    s.session_id = "s" + std::to_string(i);
    s.query = "fix my sink";
    s.ads = {"a1", "a2", "a3"};
    if (i % 2 == 0) s.clicks = {2, 1};
    sessions.push_back(s);
  }
  SufficientStats stats = accumulate_stats(sessions, 3);
  const std::string path = temp_path("adclick.stats");
  save_stats(stats, path);
  CHECK(load_stats(path) == stats);
  std::filesystem::remove(path);
}

TEST_CASE("baseline parameter files round-trip") {
  const std::string path = temp_path("adclick_baseline.params");

  DbnParams dbn;
  dbn.lambda = 1.0 / 3.0;
  dbn.theta_default = 0.25;
  dbn.rho_default = 0.75;
  dbn.theta[{"q", "a1"}] = 4.0 / 12.0;
  dbn.rho[{"q", "a1"}] = 0.3;
  save_dbn_params(dbn, path);
  DbnParams dbn2 = load_dbn_params(path);
  CHECK(dbn2.lambda == dbn.lambda);
  CHECK(dbn2.theta_default == dbn.theta_default);
  CHECK(dbn2.rho_default == dbn.rho_default);
  CHECK(dbn2.theta == dbn.theta);
  CHECK(dbn2.rho == dbn.rho);

  IcmParams icm;
  icm.rate_default = 1.0 / 7.0;
  icm.rate[{"q", "a2"}] = 2.0 / 7.0;
  save_icm_params(icm, path);
  IcmParams icm2 = load_icm_params(path);
  CHECK(icm2.rate_default == icm.rate_default);
  CHECK(icm2.rate == icm.rate);

  PmParams pm = PmParams::standard(4);
  pm.weights[2] = 1.0 / 11.0;
  save_pm_params(pm, path);
  PmParams pm2 = load_pm_params(path);
  CHECK(pm2.n_max == pm.n_max);
  CHECK(pm2.weights == pm.weights);

  AttractivenessTable am;
  am.fallback = 3.0 / 7.0;
  am.theta[{"q", "a3"}] = 0.875;
  save_am_params(am, path);
  AttractivenessTable am2 = load_am_params(path);
  CHECK(am2.fallback == am.fallback);
  CHECK(am2.theta == am.theta);

  std::filesystem::remove(path);
}

TEST_CASE("the model line identifies the file kind") {
  const std::string path = temp_path("adclick_tag.params");
  save_am_params(AttractivenessTable{}, path);
  CHECK(peek_model_tag(path) == "am");
  save_model_params(awkward_model(), path);
  CHECK(peek_model_tag(path) == "ours");
  CHECK_THROWS_AS(load_dbn_params(path), SerializationError);
  std::filesystem::remove(path);
}

TEST_CASE("unknown lines are rejected, not ignored") {
  const std::string path = temp_path("adclick_bogus.params");
  write_text(path,
             "format\tclickmodel-params\t1\n"
             "model\tam\n"
             "theta_fallback\t0.5\n"
             "surprise\t1\n");
  CHECK_THROWS_WITH_AS(load_am_params(path), doctest::Contains("unknown line"),
                       SerializationError);
  std::filesystem::remove(path);
}

TEST_CASE("files from a newer format version are refused") {
  const std::string path = temp_path("adclick_future.params");
  write_text(path,
             "format\tclickmodel-params\t2\n"
             "model\tam\n"
             "theta_fallback\t0.5\n");
  CHECK_THROWS_WITH_AS(load_am_params(path), doctest::Contains("newer"), SerializationError);
  std::filesystem::remove(path);
}

TEST_CASE("mismatched file kinds and missing files are refused") {
  const std::string path = temp_path("adclick_kind.stats");
  SufficientStats stats(2);
  save_stats(stats, path);
  CHECK_THROWS_WITH_AS(load_model_params(path), doctest::Contains("file kind"),
                       SerializationError);
  CHECK_THROWS_AS(load_stats(temp_path("adclick_not_there.stats")), SerializationError);
  std::filesystem::remove(path);
}

TEST_CASE("malformed numeric fields are refused") {
  const std::string path = temp_path("adclick_badnum.params");
  write_text(path,
             "format\tclickmodel-params\t1\n"
             "model\tam\n"
             "theta_fallback\tnot-a-number\n");
  CHECK_THROWS_AS(load_am_params(path), SerializationError);
  write_text(path,
             "format\tclickmodel-params\t1\n"
             "model\tpm\n"
             "n_max\t99\n");
  CHECK_THROWS_AS(load_pm_params(path), SerializationError);
  std::filesystem::remove(path);
}
