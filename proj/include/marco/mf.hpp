#ifndef MARCO_MF_HPP_
#define MARCO_MF_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "marco/data.hpp"
#include "marco/tensor.hpp"

namespace marco {

// Frozen per-domain factor matrices from matrix-factorization pretraining.
// Rows are the domain's local user/item ids.
struct DomainEmbeddings {
  int domain_id = 0;
  int k = 0;
  Tensor2 user_factors;  // |domain users| x k
  Tensor2 item_factors;  // |domain items| x k
  bool frozen = false;

  void save(const std::string& path, std::uint64_t config_hash) const;
  static DomainEmbeddings load(const std::string& path,
                               std::uint64_t* config_hash = nullptr);
};

struct MfOptions {
  int k = 10;
  double lr = 0.01;
  double lr_decay = 0.997;  // per-epoch multiplicative decay
  double weight_decay = 0.0001;
  int epochs = 400;
  // Full-batch below this many ratings, minibatch above.
  int full_batch_limit = 200000;
  int minibatch_size = 8192;
  bool enforce_grid = true;  // k restricted to {5, 10, 20}
};

struct MfResult {
  DomainEmbeddings embeddings;
  std::vector<double> rmse_trace;  // per-epoch training RMSE
};

// Fits user/item factors of one domain to its training ratings by Adam on
// the mean squared error (no bias terms). The returned embeddings are
// frozen; only bridge and policy parameters train afterwards.
MfResult pretrain_domain(const TrainView& view, int domain,
                         const MfOptions& opts, std::uint64_t seed);

// Plain dot-product prediction; the target-only MF baseline.
double predict_mf(const DomainEmbeddings& emb, int local_user, int local_item);

}  // namespace marco

#endif  // MARCO_MF_HPP_
