#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "durhybrid/model.hpp"
#include "fixtures.hpp"

using namespace durhybrid;

namespace {

Dataset random_dataset(int n, int width, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  Dataset ds;
  ds.inputs.resize(n, width);
  ds.targets.resize(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < width; ++j) ds.inputs(i, j) = g(rng);
    ds.targets[i] = g(rng);
  }
  return ds;
}

}  // namespace

TEST_CASE("init_network") {
  SUBCASE("same seed gives bit-identical weights") {
    auto a = init_network(50, {20}, 7);
    auto b = init_network(50, {20}, 7);
    CHECK(a.weights[0] == b.weights[0]);
    CHECK(a.weights[1] == b.weights[1]);
    CHECK(init_network(50, {20}, 8).weights[0] != a.weights[0]);
  }
  SUBCASE("weight count for the default shape") {
    auto net = init_network(366, {20}, 0);
    CHECK(net.weight_count() == 366 * 20 + 20 + 20 * 1 + 1);
    CHECK(net.weight_count() == 7361);
  }
  SUBCASE("weights respect the fan-in bound, biases start at zero") {
    auto net = init_network(100, {10}, 3);
    CHECK(net.weights[0].cwiseAbs().maxCoeff() <= 1.0 / std::sqrt(100.0));
    CHECK(net.biases[0].cwiseAbs().maxCoeff() == 0.0);
  }
  SUBCASE("zero hidden size is rejected") {
    CHECK_THROWS_AS(init_network(10, {0}, 0), DataError);
  }
}

TEST_CASE("forward") {
  SUBCASE("all-zero weights give zero output") {
    auto net = init_network(10, {5}, 0);
    for (auto& w : net.weights) w.setZero();
    std::mt19937_64 rng(1);
    std::normal_distribution<double> g;
    Eigen::VectorXd x(10);
    for (int i = 0; i < 10; ++i) x[i] = g(rng);
    CHECK(forward(net, x) == 0.0);
  }
  SUBCASE("single hidden unit matches hand arithmetic") {
    auto net = init_network(2, {1}, 0);
    net.weights[0] << 0.3, -0.7;
    net.biases[0] << 0.1;
    net.weights[1] << 1.5;
    net.biases[1] << -0.2;
    Eigen::VectorXd x(2);
    x << 0.8, -0.4;
    const double expected = 1.5 * std::tanh(0.3 * 0.8 + (-0.7) * (-0.4) + 0.1) - 0.2;
    CHECK(forward(net, x) == doctest::Approx(expected).epsilon(1e-15));
  }
  SUBCASE("width mismatch is rejected") {
    auto net = init_network(10, {5}, 0);
    CHECK_THROWS_AS(forward(net, Eigen::VectorXd::Zero(11)), DataError);
  }
  SUBCASE("forward_all agrees with forward") {
    auto net = init_network(8, {6, 4}, 2);
    auto ds = random_dataset(20, 8, 3);
    Eigen::VectorXd batch = forward_all(net, ds.inputs);
    for (int i = 0; i < 20; ++i)
      CHECK(batch[i] == doctest::Approx(forward(net, ds.inputs.row(i).transpose()))
                            .epsilon(1e-12));
  }
}

TEST_CASE("loss_and_gradient") {
  SUBCASE("zero residual zeroes the gradient") {
    auto net = init_network(4, {3}, 1);
    Eigen::VectorXd x = Eigen::VectorXd::Ones(4);
    const double y = forward(net, x);
    auto [loss, g] = loss_and_gradient(net, x, y);
    CHECK(loss == doctest::Approx(0.0));
    for (const auto& gw : g.weights) CHECK(gw.cwiseAbs().maxCoeff() == doctest::Approx(0.0));
  }
  SUBCASE("single-unit chain rule by hand") {
    auto net = init_network(1, {1}, 0);
    net.weights[0] << 0.5;
    net.biases[0] << 0.0;
    net.weights[1] << 2.0;
    net.biases[1] << 0.0;
    Eigen::VectorXd x(1);
    x << 1.0;
    const double target = 0.0;
    // out = 2*tanh(0.5); residual = out; d out/d w1 = 2*(1-tanh^2(0.5))*x
    const double t = std::tanh(0.5);
    auto [loss, g] = loss_and_gradient(net, x, target);
    CHECK(loss == doctest::Approx(0.5 * (2 * t) * (2 * t)));
    CHECK(g.weights[1](0, 0) == doctest::Approx(2 * t * t));
    CHECK(g.weights[0](0, 0) == doctest::Approx(2 * t * 2.0 * (1 - t * t) * 1.0));
  }
  SUBCASE("matches central finite differences on random nets") {
    std::mt19937_64 rng(4);
    for (int trial = 0; trial < 3; ++trial) {
      auto net = init_network(10, {7}, 100 + trial);
      auto ds = random_dataset(5, 10, 200 + trial);
      CHECK(gradient_check(net, ds, 50, 1e-5, trial) < 1e-4);
    }
  }
}

TEST_CASE("gradient_check edge cases") {
  auto net = init_network(6, {4}, 0);
  auto ds = random_dataset(4, 6, 1);
  SUBCASE("all-zero net still matches") {
    for (auto& w : net.weights) w.setZero();
    CHECK(gradient_check(net, ds, 50, 1e-5, 2) < 1e-6);
  }
  SUBCASE("zero eps is rejected") {
    CHECK_THROWS_AS(gradient_check(net, ds, 10, 0.0, 0), DataError);
  }
}

TEST_CASE("train") {
  SUBCASE("learns an exactly linear function of three input bits") {
    // target = x0 - 2*x1 + 0.5*x2, inputs random bits
    std::mt19937_64 rng(6);
    std::uniform_int_distribution<int> bit(0, 1);
    Dataset ds;
    const int n = 256;
    ds.inputs.resize(n, 3);
    ds.targets.resize(n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < 3; ++j) ds.inputs(i, j) = bit(rng);
      ds.targets[i] = ds.inputs(i, 0) - 2 * ds.inputs(i, 1) + 0.5 * ds.inputs(i, 2);
    }
    auto net = init_network(3, {20}, 9);
    Hyperparams hp;
    hp.epochs = 200;
    hp.seed = 9;
    auto report = train(net, ds, hp);
    REQUIRE(report.train_error_pct.size() == 200);
    CHECK(report.train_error_pct.back() < 1.0);
  }
  SUBCASE("zero epochs returns the initial net and an empty curve") {
    auto net = init_network(5, {4}, 3);
    auto before = net.weights[0];
    auto ds = random_dataset(10, 5, 1);
    Hyperparams hp;
    hp.epochs = 0;
    auto report = train(net, ds, hp);
    CHECK(report.train_error_pct.empty());
    CHECK(net.weights[0] == before);
  }
  SUBCASE("fixed seed reproduces the report and the weights") {
    auto ds = random_dataset(64, 6, 2);
    Hyperparams hp;
    hp.epochs = 10;
    hp.seed = 5;
    auto n1 = init_network(6, {8}, 1);
    auto n2 = init_network(6, {8}, 1);
    auto r1 = train(n1, ds, hp);
    auto r2 = train(n2, ds, hp);
    CHECK(r1.train_error_pct == r2.train_error_pct);
    CHECK(r1.weights_fingerprint == r2.weights_fingerprint);
    CHECK(n1.weights[0] == n2.weights[0]);
  }
  SUBCASE("zero learning rate leaves weights unchanged") {
    auto ds = random_dataset(32, 6, 2);
    auto net = init_network(6, {8}, 1);
    auto before = net.weights[0];
    Hyperparams hp;
    hp.learning_rate = 0.0;
    hp.epochs = 3;
    train(net, ds, hp);
    CHECK(net.weights[0] == before);
  }
  SUBCASE("empty dataset is rejected") {
    auto net = init_network(6, {8}, 1);
    Dataset empty;
    empty.inputs.resize(0, 6);
    empty.targets.resize(0);
    CHECK_THROWS_AS(train(net, empty, Hyperparams{}), DataError);
  }
}

TEST_CASE("first_layer_abs_weight_sums") {
  auto inv = PhoneInventory::default_timit();
  auto layout = build_layout(inv, {1, 0});
  auto net = init_network(layout.total_width(), {2}, 0);
  net.layout_fingerprint = to_hex(layout.fingerprint());

  SUBCASE("hand-set column") {
    net.weights[0].setZero();
    net.weights[0](0, 7) = 1.0;
    net.weights[0](1, 7) = -2.0;
    auto sums = first_layer_abs_weight_sums(net, layout);
    CHECK(sums[7] == doctest::Approx(3.0));
    CHECK(sums.sum() == doctest::Approx(3.0));
  }
  SUBCASE("all-zero net") {
    net.weights[0].setZero();
    CHECK(first_layer_abs_weight_sums(net, layout).cwiseAbs().maxCoeff() == 0.0);
  }
  SUBCASE("matches a brute-force loop") {
    auto sums = first_layer_abs_weight_sums(net, layout);
    for (int j = 0; j < layout.total_width(); ++j) {
      double total = 0;
      for (int h = 0; h < 2; ++h) total += std::abs(net.weights[0](h, j));
      CHECK(sums[j] == doctest::Approx(total).epsilon(1e-12));
    }
  }
  SUBCASE("fingerprint mismatch is refused") {
    auto other = build_layout(inv, {3, 30});
    CHECK_THROWS_WITH_AS(first_layer_abs_weight_sums(net, other),
                         doctest::Contains("fingerprint"), DataError);
  }
}

TEST_CASE("model serialization") {
  auto net = init_network(12, {5}, 77);
  net.layout_fingerprint = "abc";
  net.ruleset_version = "default-30-v1";
  net.stats_fingerprint = "def";

  SUBCASE("round trip reproduces forward outputs bit-exactly") {
    std::istringstream in(emit_model(net));
    auto back = parse_model(in);
    CHECK(back.layout_fingerprint == "abc");
    CHECK(back.ruleset_version == "default-30-v1");
    CHECK(back.seed == 77);
    auto ds = random_dataset(10, 12, 3);
    for (int i = 0; i < 10; ++i) {
      Eigen::VectorXd x = ds.inputs.row(i).transpose();
      CHECK(forward(back, x) == forward(net, x));
    }
  }
  SUBCASE("weight_count equals the number of serialized values") {
    std::istringstream in(emit_model(net));
    std::string line;
    long values = 0;
    bool counting = false;
    while (std::getline(in, line)) {
      if (line.rfind("layer ", 0) == 0 || line.rfind("bias ", 0) == 0) {
        counting = true;
        continue;
      }
      if (!counting || line == "end") continue;
      std::istringstream ls(line);
      double v;
      while (ls >> v) ++values;
    }
    CHECK(values == net.weight_count());
  }
  SUBCASE("corrupted file is rejected") {
    std::istringstream in("durhybrid-model v1\ngarbage\n");
    CHECK_THROWS_AS(parse_model(in), DataError);
    std::istringstream in2("not a model\n");
    CHECK_THROWS_AS(parse_model(in2), DataError);
  }
}
