#include "durhybrid/model.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <fstream>
#include <istream>
#include <numeric>
#include <random>
#include <sstream>

#include "durhybrid/common.hpp"
#include "durhybrid/stats.hpp"

namespace durhybrid {

std::vector<int> Network::hidden_sizes() const {
  std::vector<int> sizes;
  for (std::size_t l = 0; l + 1 < weights.size(); ++l)
    sizes.push_back(static_cast<int>(weights[l].rows()));
  return sizes;
}

long Network::weight_count() const {
  long n = 0;
  for (std::size_t l = 0; l < weights.size(); ++l)
    n += static_cast<long>(weights[l].size()) + static_cast<long>(biases[l].size());
  return n;
}

Network init_network(int input_width, const std::vector<int>& hidden_sizes,
                     std::uint64_t seed) {
  if (input_width <= 0) throw DataError("input width must be positive");
  for (int h : hidden_sizes)
    if (h <= 0) throw DataError("hidden layer sizes must be positive");

  std::vector<int> dims;
  dims.push_back(input_width);
  for (int h : hidden_sizes) dims.push_back(h);
  dims.push_back(1);

  Network net;
  net.seed = seed;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  for (std::size_t l = 0; l + 1 < dims.size(); ++l) {
    const int fan_in = dims[l];
    const int fan_out = dims[l + 1];
    const double scale = 1.0 / std::sqrt(static_cast<double>(fan_in));
    Eigen::MatrixXd w(fan_out, fan_in);
    for (int r = 0; r < fan_out; ++r)
      for (int c = 0; c < fan_in; ++c) w(r, c) = scale * unit(rng);
    net.weights.push_back(std::move(w));
    net.biases.push_back(Eigen::VectorXd::Zero(fan_out));
  }
  return net;
}

namespace {

void check_width(const Network& net, Eigen::Index width) {
  if (width != net.input_width())
    throw DataError("input width " + std::to_string(width) +
                    " does not match network input width " +
                    std::to_string(net.input_width()) + " (layout fingerprint " +
                    net.layout_fingerprint + ")");
}

// Activations per layer, input included.
std::vector<Eigen::VectorXd> forward_pass(const Network& net,
                                          const Eigen::VectorXd& input) {
  std::vector<Eigen::VectorXd> acts;
  acts.push_back(input);
  for (std::size_t l = 0; l < net.weights.size(); ++l) {
    Eigen::VectorXd z = net.weights[l] * acts.back() + net.biases[l];
    if (l + 1 < net.weights.size()) z = z.array().tanh();
    acts.push_back(std::move(z));
  }
  return acts;
}

}  // namespace

double forward(const Network& net, const Eigen::VectorXd& input) {
  check_width(net, input.size());
  return forward_pass(net, input).back()[0];
}

Eigen::VectorXd forward_all(const Network& net, const Eigen::MatrixXd& inputs) {
  check_width(net, inputs.cols());
  Eigen::MatrixXd a = inputs.transpose();
  for (std::size_t l = 0; l < net.weights.size(); ++l) {
    a = (net.weights[l] * a).colwise() + net.biases[l];
    if (l + 1 < net.weights.size()) a = a.array().tanh();
  }
  return a.row(0).transpose();
}

std::pair<double, Gradients> loss_and_gradient(const Network& net,
                                               const Eigen::VectorXd& input,
                                               double target) {
  check_width(net, input.size());
  auto acts = forward_pass(net, input);
  const double residual = acts.back()[0] - target;
  const double loss = 0.5 * residual * residual;

  Gradients g;
  g.weights.resize(net.weights.size());
  g.biases.resize(net.biases.size());

  Eigen::VectorXd delta(1);
  delta[0] = residual;  // linear output unit
  for (std::size_t l = net.weights.size(); l-- > 0;) {
    g.weights[l] = delta * acts[l].transpose();
    g.biases[l] = delta;
    if (l > 0) {
      Eigen::VectorXd back = net.weights[l].transpose() * delta;
      // tanh' = 1 - tanh^2, and acts[l] holds the tanh outputs
      delta = back.array() * (1.0 - acts[l].array().square());
    }
  }
  return {loss, std::move(g)};
}

TrainReport train(Network& net, const Dataset& dataset, const Hyperparams& hp) {
  if (dataset.size() == 0) throw DataError("cannot train on an empty dataset");
  check_width(net, dataset.inputs.cols());
  if (hp.learning_rate < 0 || hp.momentum < 0 || hp.momentum >= 1)
    throw DataError("bad hyperparameters (learning rate >= 0, momentum in [0,1))");
  if (hp.batch_size <= 0 || hp.epochs < 0)
    throw DataError("bad hyperparameters (batch size > 0, epochs >= 0)");

  const auto t0 = std::chrono::steady_clock::now();
  const Eigen::Index n_total = dataset.inputs.rows();
  Eigen::Index n_val = 0;
  if (hp.patience > 0 && hp.val_fraction > 0)
    n_val = static_cast<Eigen::Index>(
        std::ceil(hp.val_fraction * static_cast<double>(n_total)));
  const Eigen::Index n_train = n_total - n_val;
  if (n_train <= 0) throw DataError("validation slice leaves no training data");

  Gradients velocity;
  for (std::size_t l = 0; l < net.weights.size(); ++l) {
    velocity.weights.push_back(
        Eigen::MatrixXd::Zero(net.weights[l].rows(), net.weights[l].cols()));
    velocity.biases.push_back(Eigen::VectorXd::Zero(net.biases[l].size()));
  }

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n_train));
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(hp.seed);

  TrainReport report;
  double best_val = std::numeric_limits<double>::infinity();
  int since_best = 0;

  std::vector<double> pred_buf, targ_buf;
  auto eval_slice = [&](Eigen::Index begin, Eigen::Index count) {
    Eigen::VectorXd preds =
        forward_all(net, dataset.inputs.middleRows(begin, count));
    pred_buf.assign(preds.data(), preds.data() + preds.size());
    targ_buf.assign(dataset.targets.data() + begin,
                    dataset.targets.data() + begin + count);
    return mse_percent_variance(pred_buf, targ_buf);
  };

  for (int epoch = 0; epoch < hp.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    for (Eigen::Index start = 0; start < n_train; start += hp.batch_size) {
      const Eigen::Index count = std::min<Eigen::Index>(hp.batch_size, n_train - start);
      Gradients batch;
      double batch_loss = 0.0;
      for (Eigen::Index k = 0; k < count; ++k) {
        const Eigen::Index i = order[static_cast<std::size_t>(start + k)];
        auto [loss, g] = loss_and_gradient(net, dataset.inputs.row(i).transpose(),
                                           dataset.targets[i]);
        batch_loss += loss;
        if (k == 0) {
          batch = std::move(g);
        } else {
          for (std::size_t l = 0; l < batch.weights.size(); ++l) {
            batch.weights[l] += g.weights[l];
            batch.biases[l] += g.biases[l];
          }
        }
      }
      if (!std::isfinite(batch_loss))
        throw DataError("training diverged (non-finite loss) at epoch " +
                        std::to_string(epoch));
      const double inv = 1.0 / static_cast<double>(count);
      for (std::size_t l = 0; l < net.weights.size(); ++l) {
        velocity.weights[l] = hp.momentum * velocity.weights[l] -
                              hp.learning_rate * inv * batch.weights[l];
        velocity.biases[l] = hp.momentum * velocity.biases[l] -
                             hp.learning_rate * inv * batch.biases[l];
        net.weights[l] += velocity.weights[l];
        net.biases[l] += velocity.biases[l];
      }
    }

    report.train_error_pct.push_back(eval_slice(0, n_train));
    if (n_val > 0) {
      const double val = eval_slice(n_train, n_val);
      report.val_error_pct.push_back(val);
      if (val < best_val - 1e-12) {
        best_val = val;
        since_best = 0;
      } else if (++since_best >= hp.patience) {
        break;
      }
    }
  }

  report.weights_fingerprint = to_hex(fnv1a(emit_model(net)));
  report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return report;
}

double gradient_check(const Network& net, const Dataset& samples, int probes,
                      double eps, std::uint64_t seed) {
  if (!(eps > 0.0 && eps <= 1e-2))
    throw DataError("gradient check eps must be in (0, 1e-2]");
  if (samples.size() == 0) throw DataError("gradient check needs samples");

  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<Eigen::Index> pick_example(
      0, samples.inputs.rows() - 1);
  std::uniform_int_distribution<std::size_t> pick_layer(0, net.weights.size() - 1);

  double max_rel = 0.0;
  Network probe_net = net;
  for (int p = 0; p < probes; ++p) {
    const Eigen::Index ex = pick_example(rng);
    const Eigen::VectorXd x = samples.inputs.row(ex).transpose();
    const double target = samples.targets[ex];
    const std::size_t l = pick_layer(rng);
    std::uniform_int_distribution<Eigen::Index> pick_entry(
        0, net.weights[l].size() - 1);
    const Eigen::Index e = pick_entry(rng);

    auto [loss, g] = loss_and_gradient(net, x, target);
    (void)loss;
    const double analytic = g.weights[l].reshaped()[e];

    double* w = probe_net.weights[l].data() + e;
    const double saved = *w;
    *w = saved + eps;
    const double up = 0.5 * std::pow(forward(probe_net, x) - target, 2.0);
    *w = saved - eps;
    const double down = 0.5 * std::pow(forward(probe_net, x) - target, 2.0);
    *w = saved;
    const double cd = (up - down) / (2.0 * eps);

    const double denom = std::max({std::abs(analytic), std::abs(cd), 1e-12});
    max_rel = std::max(max_rel, std::abs(analytic - cd) / denom);
  }
  return max_rel;
}

Eigen::VectorXd first_layer_abs_weight_sums(const Network& net,
                                            const EncodingLayout& layout) {
  if (net.layout_fingerprint != to_hex(layout.fingerprint()))
    throw DataError("layout fingerprint mismatch: network has " +
                    net.layout_fingerprint + ", layout is " +
                    to_hex(layout.fingerprint()));
  if (net.input_width() != layout.total_width())
    throw DataError("network input width does not match layout total width");
  return net.weights[0].cwiseAbs().colwise().sum().transpose();
}

std::string emit_model(const Network& net) {
  std::ostringstream out;
  out << "durhybrid-model v1\n";
  out << "layout_fingerprint " << net.layout_fingerprint << '\n';
  out << "ruleset_version " << net.ruleset_version << '\n';
  out << "stats_fingerprint " << net.stats_fingerprint << '\n';
  out << "input_width " << net.input_width() << '\n';
  out << "hidden";
  for (int h : net.hidden_sizes()) out << ' ' << h;
  out << '\n';
  out << "seed " << net.seed << '\n';
  for (std::size_t l = 0; l < net.weights.size(); ++l) {
    const auto& w = net.weights[l];
    out << "layer " << l << ' ' << w.rows() << ' ' << w.cols() << '\n';
    for (Eigen::Index r = 0; r < w.rows(); ++r) {
      for (Eigen::Index c = 0; c < w.cols(); ++c) {
        if (c) out << ' ';
        out << format_exact(w(r, c));
      }
      out << '\n';
    }
    out << "bias " << l << ' ' << net.biases[l].size() << '\n';
    for (Eigen::Index r = 0; r < net.biases[l].size(); ++r) {
      if (r) out << ' ';
      out << format_exact(net.biases[l][r]);
    }
    out << '\n';
  }
  out << "end\n";
  return out.str();
}

Network parse_model(std::istream& in) {
  Network net;
  std::string line;
  if (!std::getline(in, line) || line != "durhybrid-model v1")
    throw DataError("not a durhybrid model file (bad magic line)");

  auto expect_kv = [&](const std::string& key) {
    if (!std::getline(in, line) || line.rfind(key + " ", 0) != 0)
      throw DataError("model file: expected '" + key + "' line");
    return line.substr(key.size() + 1);
  };
  net.layout_fingerprint = expect_kv("layout_fingerprint");
  net.ruleset_version = expect_kv("ruleset_version");
  net.stats_fingerprint = expect_kv("stats_fingerprint");
  const int input_width = std::stoi(expect_kv("input_width"));
  if (!std::getline(in, line) || line.rfind("hidden", 0) != 0)
    throw DataError("model file: expected 'hidden' line");
  const std::uint64_t seed = std::stoull(expect_kv("seed"));
  net.seed = seed;

  try {
    std::size_t l = 0;
    while (std::getline(in, line)) {
      if (line == "end") break;
      std::istringstream hs(line);
      std::string tag;
      std::size_t idx;
      Eigen::Index rows, cols;
      if (!(hs >> tag >> idx >> rows >> cols) || tag != "layer" || idx != l)
        throw DataError("model file: malformed layer header");
      Eigen::MatrixXd w(rows, cols);
      for (Eigen::Index r = 0; r < rows; ++r) {
        if (!std::getline(in, line)) throw DataError("model file: truncated weights");
        std::istringstream ws(line);
        for (Eigen::Index c = 0; c < cols; ++c)
          if (!(ws >> w(r, c))) throw DataError("model file: malformed weight row");
      }
      if (!std::getline(in, line)) throw DataError("model file: missing bias header");
      std::istringstream bs(line);
      Eigen::Index bn;
      if (!(bs >> tag >> idx >> bn) || tag != "bias" || idx != l || bn != rows)
        throw DataError("model file: malformed bias header");
      Eigen::VectorXd b(bn);
      if (!std::getline(in, line)) throw DataError("model file: truncated biases");
      std::istringstream vs(line);
      for (Eigen::Index r = 0; r < bn; ++r)
        if (!(vs >> b[r])) throw DataError("model file: malformed bias row");
      net.weights.push_back(std::move(w));
      net.biases.push_back(std::move(b));
      ++l;
    }
  } catch (const std::exception& e) {
    throw DataError(std::string("model file parse error: ") + e.what());
  }
  if (net.weights.empty()) throw DataError("model file has no layers");
  if (net.input_width() != input_width)
    throw DataError("model file: input_width header disagrees with layer shapes");
  if (net.weights.back().rows() != 1)
    throw DataError("model file: output layer must have a single unit");
  return net;
}

void save_model_file(const Network& net, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write model file '" + path + "'");
  out << emit_model(net);
}

Network load_model_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open model file '" + path + "'");
  return parse_model(in);
}

}  // namespace durhybrid
