#include "hyperspace/regression.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "hyperspace/detail/byteio.hpp"
#include "hyperspace/error.hpp"

namespace hyperspace {

std::string_view to_string(RegressionMethod m) noexcept {
  return m == RegressionMethod::kCodebook ? "codebook" : "nn";
}

RegressionMethod parse_regression(std::string_view name) {
  if (name == "codebook") return RegressionMethod::kCodebook;
  if (name == "nn" || name == "neural" || name == "mlp") return RegressionMethod::kNeuralNet;
  throw Error(ErrorCode::kInvalidArgument, "unknown regression method '" + std::string(name) + "'");
}

void validate(const RegressionConfig& cfg) {
  if (!(cfg.softmax_beta > 0.0)) throw Error(ErrorCode::kInvalidArgument, "regression beta must be > 0");
  const auto& nn = cfg.nn;
  if (nn.hidden == 0 || nn.epochs < 1 || !(nn.learning_rate > 0.0) || nn.batch_size == 0) {
    throw Error(ErrorCode::kInvalidArgument, "neural-net hyperparameters must be positive");
  }
}

double decode_codebook(const Backend& backend, const Hypervector& y, const Codebook& cb,
                       double beta) {
  if (!(beta >= 0.0) || !std::isfinite(beta)) {
    throw Error(ErrorCode::kInvalidArgument, "decode beta must be finite and >= 0");
  }
  const auto sims = codebook_similarities(backend, y, cb);
  const double peak = *std::max_element(sims.begin(), sims.end());
  double total = 0.0;
  double expectation = 0.0;
  for (std::size_t i = 0; i < sims.size(); ++i) {
    const double w = std::exp(beta * (sims[i] - peak));
    total += w;
    expectation += w * cb.values[i];
  }
  // A convex combination, but rounding may step a hair outside the range.
  return std::clamp(expectation / total, cb.range.lo, cb.range.hi);
}

MlpDecoder MlpDecoder::zeros(BackendTag tag, std::size_t dim, std::size_t hidden) {
  if (dim == 0 || hidden == 0) throw Error(ErrorCode::kInvalidArgument, "decoder sizes must be >= 1");
  MlpDecoder dec;
  dec.tag_ = tag;
  dec.dim_ = dim;
  const auto width = static_cast<Eigen::Index>(tag == BackendTag::kFhrr ? 2 * dim : dim);
  const auto h = static_cast<Eigen::Index>(hidden);
  dec.w1_ = Eigen::MatrixXd::Zero(h, width);
  dec.b1_ = Eigen::VectorXd::Zero(h);
  dec.w2_ = Eigen::VectorXd::Zero(h);
  dec.b2_ = 0.0;
  return dec;
}

MlpDecoder MlpDecoder::initialize(BackendTag tag, std::size_t dim, std::size_t hidden, Rng& rng) {
  MlpDecoder dec = zeros(tag, dim, hidden);
  const double bound1 = 1.0 / std::sqrt(static_cast<double>(dec.w1_.cols()));
  for (Eigen::Index r = 0; r < dec.w1_.rows(); ++r) {
    for (Eigen::Index c = 0; c < dec.w1_.cols(); ++c) dec.w1_(r, c) = rng.uniform(-bound1, bound1);
  }
  const double bound2 = 1.0 / std::sqrt(static_cast<double>(hidden));
  for (Eigen::Index r = 0; r < dec.w2_.size(); ++r) dec.w2_(r) = rng.uniform(-bound2, bound2);
  return dec;
}

Eigen::VectorXd MlpDecoder::features(const Hypervector& y) const {
  if (y.tag() != tag_) throw Error(ErrorCode::kBackendMismatch, "decoder backend differs from input");
  if (y.dim() != dim_) {
    throw Error(ErrorCode::kDimMismatch, "decoder expects dim " + std::to_string(dim_) + ", got " +
                                             std::to_string(y.dim()));
  }
  Eigen::VectorXd f(w1_.cols());
  if (tag_ == BackendTag::kHrr) {
    const auto r = y.reals();
    for (std::size_t j = 0; j < dim_; ++j) f(static_cast<Eigen::Index>(j)) = r[j];
  } else {
    const auto z = y.phasors();
    for (std::size_t j = 0; j < dim_; ++j) {
      f(static_cast<Eigen::Index>(j)) = z[j].real();
      f(static_cast<Eigen::Index>(dim_ + j)) = z[j].imag();
    }
  }
  const double norm = f.norm();
  if (norm < 1e-12) throw Error(ErrorCode::kZeroVector, "decoder input is a zero vector");
  f /= norm;
  return f;
}

double MlpDecoder::forward(const Eigen::Ref<const Eigen::VectorXd>& f) const {
  const Eigen::VectorXd hidden = (w1_ * f + b1_).cwiseMax(0.0);
  return hidden.dot(w2_) + b2_;
}

double MlpDecoder::loss_and_gradients(const Eigen::MatrixXd& X, const Eigen::VectorXd& targets,
                                      Gradients* grads) const {
  const auto batch = X.cols();
  Eigen::MatrixXd pre = w1_ * X;
  pre.colwise() += b1_;
  const Eigen::MatrixXd act = pre.cwiseMax(0.0);
  const Eigen::RowVectorXd out = (w2_.transpose() * act).array() + b2_;
  const Eigen::RowVectorXd err = out - targets.transpose();
  const double loss = err.squaredNorm() / static_cast<double>(batch);
  if (grads) {
    const Eigen::RowVectorXd d_out = err * (2.0 / static_cast<double>(batch));
    grads->w2 = act * d_out.transpose();
    grads->b2 = d_out.sum();
    Eigen::MatrixXd d_pre = w2_ * d_out;
    d_pre = d_pre.cwiseProduct((pre.array() > 0.0).cast<double>().matrix());
    grads->w1.noalias() = d_pre * X.transpose();
    grads->b1 = d_pre.rowwise().sum();
  }
  return loss;
}

std::vector<std::uint8_t> MlpDecoder::serialize() const {
  detail::ByteWriter w;
  w.bytes("HSNN1");
  w.u8(static_cast<std::uint8_t>(tag_));
  w.u32(static_cast<std::uint32_t>(dim_));
  w.u32(static_cast<std::uint32_t>(w1_.cols()));
  w.u32(static_cast<std::uint32_t>(w1_.rows()));
  for (Eigen::Index r = 0; r < w1_.rows(); ++r) {
    for (Eigen::Index c = 0; c < w1_.cols(); ++c) w.f32(static_cast<float>(w1_(r, c)));
  }
  for (Eigen::Index r = 0; r < b1_.size(); ++r) w.f32(static_cast<float>(b1_(r)));
  for (Eigen::Index r = 0; r < w2_.size(); ++r) w.f32(static_cast<float>(w2_(r)));
  w.f32(static_cast<float>(b2_));
  return std::move(w.buffer());
}

MlpDecoder MlpDecoder::deserialize(std::span<const std::uint8_t> bytes) {
  detail::ByteReader r(bytes);
  r.expect("HSNN1");
  const auto tag = r.u8();
  if (tag > 1) throw Error(ErrorCode::kFormat, "unknown backend tag in decoder file");
  const auto dim = r.u32();
  const auto width = r.u32();
  const auto hidden = r.u32();
  MlpDecoder dec = zeros(static_cast<BackendTag>(tag), dim, hidden);
  if (static_cast<std::uint32_t>(dec.w1_.cols()) != width) {
    throw Error(ErrorCode::kFormat, "decoder input width does not match dim and backend");
  }
  const std::size_t expected = (static_cast<std::size_t>(hidden) * width + 2 * hidden + 1) * 4;
  if (r.remaining() != expected) throw Error(ErrorCode::kFormat, "decoder payload size mismatch");
  for (Eigen::Index row = 0; row < dec.w1_.rows(); ++row) {
    for (Eigen::Index c = 0; c < dec.w1_.cols(); ++c) dec.w1_(row, c) = r.f32();
  }
  for (Eigen::Index i = 0; i < dec.b1_.size(); ++i) dec.b1_(i) = r.f32();
  for (Eigen::Index i = 0; i < dec.w2_.size(); ++i) dec.w2_(i) = r.f32();
  dec.b2_ = r.f32();
  dec.trained_ = true;
  return dec;
}

namespace {

// First and second moment estimates for one parameter block.
struct AdamState {
  Eigen::MatrixXd m1, v1;
  Eigen::VectorXd mb1, vb1, m2, v2;
  double mb2 = 0.0, vb2 = 0.0;
};

constexpr double kAdamBeta1 = 0.9;
constexpr double kAdamBeta2 = 0.999;
constexpr double kAdamEps = 1e-8;

template <typename Param, typename Grad>
void adam_update(Param& p, const Grad& g, Param& m, Param& v, double lr, double c1, double c2) {
  m = kAdamBeta1 * m + (1.0 - kAdamBeta1) * g;
  v = kAdamBeta2 * v + (1.0 - kAdamBeta2) * g.cwiseProduct(g);
  p.array() -= lr * (m.array() / c1) / ((v.array() / c2).sqrt() + kAdamEps);
}

}  // namespace

TrainResult train_mlp(std::span<const Hypervector> inputs, std::span<const double> targets,
                      const MlpConfig& cfg) {
  if (inputs.empty()) throw Error(ErrorCode::kInvalidArgument, "training set is empty");
  if (inputs.size() != targets.size()) {
    throw Error(ErrorCode::kInvalidArgument, "training inputs and targets differ in length");
  }
  if (cfg.hidden == 0 || cfg.epochs < 1 || !(cfg.learning_rate > 0.0) || cfg.batch_size == 0) {
    throw Error(ErrorCode::kInvalidArgument, "neural-net hyperparameters must be positive");
  }
  Rng rng(cfg.seed);
  Rng init_rng = rng.fork(1);
  Rng shuffle_rng = rng.fork(2);
  MlpDecoder dec = MlpDecoder::initialize(inputs[0].tag(), inputs[0].dim(), cfg.hidden, init_rng);

  const auto n = static_cast<Eigen::Index>(inputs.size());
  Eigen::MatrixXd features(static_cast<Eigen::Index>(dec.input_width()), n);
  for (Eigen::Index i = 0; i < n; ++i) features.col(i) = dec.features(inputs[static_cast<std::size_t>(i)]);
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) y(i) = targets[static_cast<std::size_t>(i)];

  AdamState s;
  s.m1 = Eigen::MatrixXd::Zero(dec.w1().rows(), dec.w1().cols());
  s.v1 = s.m1;
  s.mb1 = Eigen::VectorXd::Zero(dec.b1().size());
  s.vb1 = s.mb1;
  s.m2 = Eigen::VectorXd::Zero(dec.w2().size());
  s.v2 = s.m2;

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  const auto batch = static_cast<Eigen::Index>(std::min<std::size_t>(cfg.batch_size, inputs.size()));
  Eigen::MatrixXd xb(features.rows(), batch);
  Eigen::VectorXd yb(batch);
  MlpDecoder::Gradients g;
  long step = 0;
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    for (std::size_t i = order.size(); i > 1; --i) {
      std::swap(order[i - 1], order[static_cast<std::size_t>(shuffle_rng.below(i))]);
    }
    for (Eigen::Index start = 0; start < n; start += batch) {
      const Eigen::Index size = std::min(batch, n - start);
      xb.resize(features.rows(), size);
      yb.resize(size);
      for (Eigen::Index c = 0; c < size; ++c) {
        const auto idx = order[static_cast<std::size_t>(start + c)];
        xb.col(c) = features.col(idx);
        yb(c) = y(idx);
      }
      const double loss = dec.loss_and_gradients(xb, yb, &g);
      if (!std::isfinite(loss)) {
        throw Error(ErrorCode::kTrainingDiverged, "loss became non-finite in epoch " + std::to_string(epoch));
      }
      ++step;
      const double c1 = 1.0 - std::pow(kAdamBeta1, static_cast<double>(step));
      const double c2 = 1.0 - std::pow(kAdamBeta2, static_cast<double>(step));
      adam_update(dec.w1(), g.w1, s.m1, s.v1, cfg.learning_rate, c1, c2);
      adam_update(dec.b1(), g.b1, s.mb1, s.vb1, cfg.learning_rate, c1, c2);
      adam_update(dec.w2(), g.w2, s.m2, s.v2, cfg.learning_rate, c1, c2);
      s.mb2 = kAdamBeta1 * s.mb2 + (1.0 - kAdamBeta1) * g.b2;
      s.vb2 = kAdamBeta2 * s.vb2 + (1.0 - kAdamBeta2) * g.b2 * g.b2;
      dec.b2() -= cfg.learning_rate * (s.mb2 / c1) / (std::sqrt(s.vb2 / c2) + kAdamEps);
    }
  }
  const double final_mse = dec.loss_and_gradients(features, y, nullptr);
  if (!std::isfinite(final_mse)) throw Error(ErrorCode::kTrainingDiverged, "final loss is non-finite");
  dec.mark_trained();
  return {std::move(dec), final_mse};
}

double decode_mlp(const MlpDecoder& dec, const Hypervector& y) {
  if (!dec.trained()) throw Error(ErrorCode::kUntrained, "decoder has not been trained");
  return dec.forward(dec.features(y));
}

}  // namespace hyperspace
