#ifndef DURHYBRID_MODEL_HPP_
#define DURHYBRID_MODEL_HPP_

#include <Eigen/Dense>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "durhybrid/features.hpp"

namespace durhybrid {

// Feedforward regressor: tanh hidden layers, one linear output unit.
struct Network {
  std::vector<Eigen::MatrixXd> weights;  // layer l maps in->out, shape (out, in)
  std::vector<Eigen::VectorXd> biases;

  std::string layout_fingerprint;
  std::string ruleset_version;
  std::string stats_fingerprint;
  std::uint64_t seed = 0;

  int input_width() const { return static_cast<int>(weights.front().cols()); }
  std::vector<int> hidden_sizes() const;
  long weight_count() const;
};

struct Hyperparams {
  double learning_rate = 0.01;
  double momentum = 0.9;
  int batch_size = 16;
  int epochs = 200;
  int patience = 0;          // early stopping; 0 disables
  double val_fraction = 0.0; // tail slice held out when patience > 0
  std::uint64_t seed = 0;
};

struct TrainReport {
  std::vector<double> train_error_pct;  // percent of variance, per epoch
  std::vector<double> val_error_pct;    // empty when no validation slice
  std::string weights_fingerprint;
  double wall_seconds = 0.0;
};

struct Gradients {
  std::vector<Eigen::MatrixXd> weights;
  std::vector<Eigen::VectorXd> biases;
};

// Weights uniform in +/- 1/sqrt(fan_in), biases zero; deterministic per seed.
Network init_network(int input_width, const std::vector<int>& hidden_sizes,
                     std::uint64_t seed);

double forward(const Network& net, const Eigen::VectorXd& input);
Eigen::VectorXd forward_all(const Network& net, const Eigen::MatrixXd& inputs);

// loss = 0.5 * (forward(x) - target)^2, with its exact analytic gradient.
std::pair<double, Gradients> loss_and_gradient(const Network& net,
                                               const Eigen::VectorXd& input,
                                               double target);

TrainReport train(Network& net, const Dataset& dataset, const Hyperparams& hp);

// Max relative error between analytic and central-difference gradients over
// `probes` randomly sampled parameters across the given examples.
double gradient_check(const Network& net, const Dataset& samples, int probes,
                      double eps, std::uint64_t seed);

// Entry j = sum over first-layer units of |W1[h][j]|.
Eigen::VectorXd first_layer_abs_weight_sums(const Network& net,
                                            const EncodingLayout& layout);

std::string emit_model(const Network& net);
Network parse_model(std::istream& in);
void save_model_file(const Network& net, const std::string& path);
Network load_model_file(const std::string& path);

}  // namespace durhybrid

#endif  // DURHYBRID_MODEL_HPP_
