#include "marco/mf.hpp"

#include <algorithm>
#include <cmath>

#include "marco/autodiff.hpp"
#include "marco/optim.hpp"
#include "marco/rng.hpp"
#include "marco/serialize.hpp"

namespace marco {

namespace {
constexpr const char* kEmbMagic = "MARCO-EMB v1";
constexpr std::uint64_t kStreamMfInit = 21;
constexpr std::uint64_t kStreamMfBatch = 22;
}  // namespace

void DomainEmbeddings::save(const std::string& path,
                            std::uint64_t config_hash) const {
  BinWriter w(path);
  w.magic(kEmbMagic);
  w.u64(config_hash);
  w.u32(static_cast<std::uint32_t>(domain_id));
  w.u32(static_cast<std::uint32_t>(k));
  w.tensor(user_factors);
  w.tensor(item_factors);
  w.close();
}

DomainEmbeddings DomainEmbeddings::load(const std::string& path,
                                        std::uint64_t* config_hash) {
  BinReader r(path);
  r.expect_magic(kEmbMagic);
  std::uint64_t hash = r.u64();
  if (config_hash) *config_hash = hash;
  DomainEmbeddings emb;
  emb.domain_id = static_cast<int>(r.u32());
  emb.k = static_cast<int>(r.u32());
  emb.user_factors = r.tensor();
  emb.item_factors = r.tensor();
  emb.frozen = true;
  return emb;
}

MfResult pretrain_domain(const TrainView& view, int domain,
                         const MfOptions& opts, std::uint64_t seed) {
  if (opts.k <= 0) throw ContractError("embedding size must be positive");
  if (opts.enforce_grid && opts.k != 5 && opts.k != 10 && opts.k != 20)
    throw ConfigError("embedding size " + std::to_string(opts.k) +
                      " is off-grid {5,10,20}; pass free_hparams to override");
  const RatingDataset& ds = view.dataset();
  const std::vector<RatingTriple>& triples = view.training_triples(domain);
  if (triples.empty())
    throw ValidationError("domain " + std::to_string(domain) +
                          " has no training ratings");

  int n_users = ds.domain_user_count(domain);
  int n_items = ds.domain_item_count(domain);
  double bound = 1.0 / std::sqrt(static_cast<double>(opts.k));
  Rng init_rng(mix_seed(seed, kStreamMfInit + 101 * static_cast<std::uint64_t>(domain)));
  Parameter users(Tensor2::uniform(n_users, opts.k, -bound, bound, init_rng),
                  "mf.users.d" + std::to_string(domain));
  Parameter items(Tensor2::uniform(n_items, opts.k, -bound, bound, init_rng),
                  "mf.items.d" + std::to_string(domain));
  std::vector<Parameter*> params{&users, &items};
  AdamState adam = AdamState::init(params);

  std::vector<int> user_rows(triples.size()), item_rows(triples.size());
  Tensor2 ratings(static_cast<int>(triples.size()), 1);
  for (std::size_t i = 0; i < triples.size(); ++i) {
    user_rows[i] = ds.user_local(domain, triples[i].user);
    item_rows[i] = ds.item_local(triples[i].item);
    ratings[i] = triples[i].rating;
  }

  bool full_batch =
      static_cast<int>(triples.size()) <= opts.full_batch_limit;
  Rng batch_rng(mix_seed(seed, kStreamMfBatch + 101 * static_cast<std::uint64_t>(domain)));
  std::vector<int> order(triples.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);

  double lr_now = opts.lr;
  auto loss_over = [&](const std::vector<int>& rows_subset,
                       bool update) -> double {
    Tape tape;
    std::vector<int> ur, ir;
    ur.reserve(rows_subset.size());
    ir.reserve(rows_subset.size());
    Tensor2 r(static_cast<int>(rows_subset.size()), 1);
    for (std::size_t i = 0; i < rows_subset.size(); ++i) {
      ur.push_back(user_rows[rows_subset[i]]);
      ir.push_back(item_rows[rows_subset[i]]);
      r[i] = ratings[rows_subset[i]];
    }
    Value u = tape.gather_rows(tape.leaf(users), std::move(ur));
    Value v = tape.gather_rows(tape.leaf(items), std::move(ir));
    Value pred = tape.row_dot(u, v);
    Value err = tape.sub(pred, tape.constant(std::move(r)));
    Value loss = tape.mean(tape.square(err));
    double out = tape.scalar(loss);
    if (update) {
      zero_grads(params);
      tape.backward(loss);
      adam_step(params, adam, lr_now, opts.weight_decay);
    }
    return out;
  };

  MfResult result;
  result.rmse_trace.reserve(opts.epochs);
  for (int epoch = 0; epoch < opts.epochs; ++epoch) {
    double mse;
    if (full_batch) {
      mse = loss_over(order, true);
    } else {
      batch_rng.shuffle(order);
      double acc = 0.0;
      std::size_t count = 0;
      for (std::size_t start = 0; start < order.size();
           start += opts.minibatch_size) {
        std::size_t end =
            std::min(order.size(), start + static_cast<std::size_t>(
                                               opts.minibatch_size));
        std::vector<int> sub(order.begin() + start, order.begin() + end);
        double m = loss_over(sub, true);
        acc += m * static_cast<double>(sub.size());
        count += sub.size();
      }
      mse = acc / static_cast<double>(count);
    }
    if (!std::isfinite(mse))
      throw TrainingError("matrix factorization diverged at epoch " +
                          std::to_string(epoch) + " in domain " +
                          std::to_string(domain));
    result.rmse_trace.push_back(std::sqrt(mse));
  }

  result.embeddings.domain_id = domain;
  result.embeddings.k = opts.k;
  result.embeddings.user_factors = users.value;
  result.embeddings.item_factors = items.value;
  result.embeddings.frozen = true;
  return result;
}

double predict_mf(const DomainEmbeddings& emb, int local_user,
                  int local_item) {
  if (local_user < 0 || local_user >= emb.user_factors.rows())
    throw ValidationError("predict_mf: unknown user row");
  if (local_item < 0 || local_item >= emb.item_factors.rows())
    throw ValidationError("predict_mf: unknown item row");
  double s = 0.0;
  for (int c = 0; c < emb.k; ++c)
    s += emb.user_factors.at(local_user, c) * emb.item_factors.at(local_item, c);
  return s;
}

}  // namespace marco
