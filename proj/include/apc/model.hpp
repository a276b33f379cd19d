#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "apc/matrix.hpp"
#include "apc/scores.hpp"

namespace apc {

enum class Backbone { AttentionMini, Recurrent };

std::string backbone_tag(Backbone b);
Backbone parse_backbone(const std::string& tag);

struct ModelConfig {
  Backbone backbone = Backbone::AttentionMini;
  int dim = 32;      // embedding width d
  int max_len = 50;  // longest real span the model accepts (T)
  int vocab = 0;     // number of real items |V|; ids run 1..vocab, 0 = pad
};

// L x d input rows with a mask (true = real). Masked rows are zero vectors.
// Rows hold raw item embeddings; the backbone adds position encodings to
// real rows internally, indexed by each row's rank within the real span.
struct EmbeddedSequence {
  Matrix rows;
  std::vector<std::uint8_t> mask;

  int length() const { return rows.rows; }
  int real_count() const;
  int last_real() const;  // -1 when all-pad
  // Marks row i real and overwrites its embedding (used to inject the fused
  // dummy embedding at row 0 of the reversed sequence).
  void set_row(int i, const std::vector<double>& v);
  void clear_row(int i);  // marks row i pad and zeroes it
};

// Softmax support for abductive probabilities: the position's target plus
// either an explicit negative list or the full vocabulary.
struct NegativeSpec {
  bool full_vocab = true;
  std::vector<int> items;

  static NegativeSpec full() { return NegativeSpec{true, {}}; }
  static NegativeSpec sampled(std::vector<int> negs) { return NegativeSpec{false, std::move(negs)}; }
};

struct PositionLogProb {
  int position = 0;
  double logp = 0.0;
};

struct InputGradient {
  double loss = 0.0;
  std::vector<double> grad;   // d(loss)/d(input row), length d
  int positions = 0;          // scored positions contributing to the loss
};

// Per-position training batch entry: one positive and its sampled negatives.
struct TrainingTask {
  std::vector<int> items;                       // input row item ids (0 = pad)
  std::vector<int> targets;                     // per position, 0 = skip
  std::vector<std::vector<int>> negatives;      // per position, BCE negatives
};

struct DropoutPlan {
  double rate = 0.0;
  std::uint64_t seed = 0;
};

// Embedding-based sequential scorer used for both the recommender and the
// abductive model. Two backbones share the scoring head: a single-block
// causal self-attention encoder and a single-layer gated recurrent encoder.
//
// Conventions:
//   * hidden state h_r summarizes real rows <= r;
//   * the prediction at position t conditions on rows strictly before t, so
//     position t is scoreable iff targets[t] != 0 and some real row precedes t;
//   * candidate scores are sigmoid(h_last . e_c), probabilities are softmax
//     over the configured support.
class SequentialScorer {
 public:
  SequentialScorer() = default;

  static SequentialScorer zeros(const ModelConfig& cfg);
  static SequentialScorer random_init(const ModelConfig& cfg, std::uint64_t seed);

  const ModelConfig& config() const { return cfg_; }
  int dim() const { return cfg_.dim; }
  int max_len() const { return cfg_.max_len; }
  int vocab() const { return cfg_.vocab; }
  Backbone backbone() const { return cfg_.backbone; }

  std::vector<double>& params() { return params_; }
  const std::vector<double>& params() const { return params_; }
  std::uint64_t params_hash() const;

  MatView embedding();
  ConstMatView embedding() const;
  MatView positions();
  ConstMatView positions() const;

  EmbeddedSequence embed_sequence(const std::vector<int>& items) const;

  // One score in (0,1) per candidate, from the hidden state at the last real
  // row. Deterministic given parameters and input.
  ScoreVector score_candidates(const EmbeddedSequence& input,
                               const std::vector<int>& candidates) const;

  // log p(targets[t] | rows < t) for every scoreable position, under a
  // softmax over {target} + negatives (or the full vocabulary).
  std::vector<PositionLogProb> position_logprobs(const EmbeddedSequence& input,
                                                 const std::vector<int>& targets,
                                                 const NegativeSpec& negatives) const;

  // Sum of -log p over scoreable positions plus its exact reverse-mode
  // gradient with respect to input row grad_row, parameters held fixed.
  InputGradient loss_and_input_gradient(const EmbeddedSequence& input,
                                        const std::vector<int>& targets,
                                        const NegativeSpec& negatives,
                                        int grad_row) const;

  // Training-side: per-position binary cross-entropy with sampled negatives;
  // accumulates parameter gradients into param_grad (same layout as params).
  double bce_loss_backward(const TrainingTask& task, std::vector<double>* param_grad,
                           const DropoutPlan* dropout) const;

  void save(const std::string& path, const std::string& extra_meta_json = "{}") const;
  static SequentialScorer load(const std::string& path);
  static std::string sidecar_path(const std::string& path);

 private:
  friend struct ModelOps;
  ModelConfig cfg_;
  std::vector<double> params_;
};

void save_model(const std::string& path, const SequentialScorer& model,
                const std::string& extra_meta_json = "{}");
SequentialScorer load_model(const std::string& path);

}  // namespace apc
