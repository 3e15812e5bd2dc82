#pragma once

// Decoding a value hypervector to a scalar: softmax expectation over the
// codebook, or a single-hidden-layer network.

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "hyperspace/backend.hpp"
#include "hyperspace/cleanup.hpp"

namespace hyperspace {

enum class RegressionMethod { kCodebook, kNeuralNet };
std::string_view to_string(RegressionMethod m) noexcept;
RegressionMethod parse_regression(std::string_view name);

struct MlpConfig {
  std::size_t hidden = 128;
  int epochs = 50;
  double learning_rate = 1e-3;
  std::size_t batch_size = 64;
  std::uint64_t seed = 0;
};

struct RegressionConfig {
  RegressionMethod method = RegressionMethod::kCodebook;
  double softmax_beta = 100.0;
  MlpConfig nn;
};

void validate(const RegressionConfig& cfg);

// sum_i softmax(beta S(y, entries))_i values_i. Costs k similarity ops; the
// softmax and expectation are not counted as VSA operations.
double decode_codebook(const Backend& backend, const Hypervector& y, const Codebook& cb,
                       double beta);

// y -> relu(W1 f + b1) . w2 + b2, where f is the realified input (FHRR:
// real parts then imaginary parts) scaled to unit norm.
class MlpDecoder {
 public:
  struct Gradients {
    Eigen::MatrixXd w1;
    Eigen::VectorXd b1;
    Eigen::VectorXd w2;
    double b2 = 0.0;
  };

  MlpDecoder() = default;

  // Uniform(+-1/sqrt(fan_in)) weights, zero biases.
  static MlpDecoder initialize(BackendTag tag, std::size_t dim, std::size_t hidden, Rng& rng);
  // All-zero parameters.
  static MlpDecoder zeros(BackendTag tag, std::size_t dim, std::size_t hidden);

  bool trained() const noexcept { return trained_; }
  void mark_trained() noexcept { trained_ = true; }
  BackendTag tag() const noexcept { return tag_; }
  std::size_t dim() const noexcept { return dim_; }
  std::size_t input_width() const noexcept { return static_cast<std::size_t>(w1_.cols()); }
  std::size_t hidden() const noexcept { return static_cast<std::size_t>(w1_.rows()); }

  Eigen::VectorXd features(const Hypervector& y) const;
  // Forward pass on a feature column (no trained check).
  double forward(const Eigen::Ref<const Eigen::VectorXd>& f) const;

  // Mean squared error over the columns of X and its gradient.
  double loss_and_gradients(const Eigen::MatrixXd& X, const Eigen::VectorXd& targets,
                            Gradients* grads) const;

  Eigen::MatrixXd& w1() noexcept { return w1_; }
  Eigen::VectorXd& b1() noexcept { return b1_; }
  Eigen::VectorXd& w2() noexcept { return w2_; }
  double& b2() noexcept { return b2_; }
  const Eigen::MatrixXd& w1() const noexcept { return w1_; }
  const Eigen::VectorXd& b1() const noexcept { return b1_; }
  const Eigen::VectorXd& w2() const noexcept { return w2_; }
  double b2() const noexcept { return b2_; }

  // "HSNN1" | backend u8 | dim u32 | input_width u32 | hidden u32 |
  // W1 (row-major, hidden x input_width) | b1 | w2 | b2, all float32 LE.
  std::vector<std::uint8_t> serialize() const;
  static MlpDecoder deserialize(std::span<const std::uint8_t> bytes);

 private:
  BackendTag tag_ = BackendTag::kHrr;
  std::size_t dim_ = 0;
  Eigen::MatrixXd w1_;
  Eigen::VectorXd b1_;
  Eigen::VectorXd w2_;
  double b2_ = 0.0;
  bool trained_ = false;
};

struct TrainResult {
  MlpDecoder decoder;
  double final_mse = 0.0;
};

// Mini-batch stochastic gradient training (Adam update rule) on squared
// error. Single-threaded and bit-deterministic for a given seed and data.
TrainResult train_mlp(std::span<const Hypervector> inputs, std::span<const double> targets,
                      const MlpConfig& cfg);

double decode_mlp(const MlpDecoder& dec, const Hypervector& y);

}  // namespace hyperspace
