#ifndef MARCO_DATA_HPP_
#define MARCO_DATA_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "marco/errors.hpp"

namespace marco {

inline constexpr int kDefaultMaxSeqLen = 50;
inline constexpr int kMinInteractions = 5;

// One rating with dataset-internal dense ids. Item ids are global: each
// domain owns a disjoint contiguous block, so identical external item ids
// in different domains never collide.
struct RatingTriple {
  int user = 0;
  int item = 0;
  double rating = 0.0;
  int domain = 0;
};

// A rating as read from input, before id remapping.
struct RawRating {
  std::string user;
  std::string item;
  double rating = 0.0;
  int domain = 0;
};

// Synthetic multi-domain generator spec. Every user is an overlap user.
// Each user draws a shared latent; domain d mixes a rotated copy of it
// with independent noise using weight domain_signal[d], so the recorded
// weights are ground truth for credit-assignment oracles.
struct GenSpec {
  int num_domains = 4;
  int num_users = 500;
  int items_per_domain = 80;
  int latent_dim = 8;
  std::vector<double> domain_signal;  // per-domain weight in [0,1]
  double noise_sigma = 0.1;
  double density = 0.15;  // fraction of a domain's items each user rates
  std::uint64_t seed = 1;
};

struct CsvSchema {
  std::string user_col = "user_id";
  std::string item_col = "item_id";
  std::string rating_col = "rating";
  std::string domain_col = "domain";
  bool min_interaction_filter = false;
  int max_seq_len = kDefaultMaxSeqLen;
  int num_domains = -1;  // -1: infer from data as max id + 1
};

class RatingDataset {
 public:
  static RatingDataset from_triples(int num_domains,
                                    const std::vector<RawRating>& rows,
                                    bool min_interaction_filter,
                                    int max_seq_len = kDefaultMaxSeqLen);
  static RatingDataset ingest_csv(const std::string& path,
                                  const CsvSchema& schema);
  static RatingDataset generate(const GenSpec& spec);

  int num_domains() const { return num_domains_; }
  int num_users() const { return static_cast<int>(user_external_.size()); }
  int num_items() const { return static_cast<int>(item_external_.size()); }
  int max_seq_len() const { return max_seq_len_; }

  int domain_user_count(int d) const;
  int domain_item_count(int d) const;
  // Global item id <-> (domain, local row in that domain's factor matrix).
  int item_domain(int item) const;
  int item_local(int item) const;
  int item_global(int domain, int local) const;
  // Local user row in a domain's factor matrix; -1 if the user is not in d.
  int user_local(int domain, int user) const;
  int user_global_from_local(int domain, int local) const;

  // Users present in every domain, ascending by id.
  const std::vector<int>& overlap_users() const { return overlap_users_; }
  // All ratings of a domain in ingestion order (includes every user; callers
  // on the training path must go through TrainView instead).
  const std::vector<RatingTriple>& triples(int domain) const;
  // Ordered interacted item ids (most recent max_seq_len kept).
  const std::vector<int>& behavior_sequence(int user, int domain) const;
  // (item, rating) pairs of one user in one domain, ingestion order.
  const std::vector<std::pair<int, double>>& user_pairs(int user,
                                                        int domain) const;

  const std::string& user_external(int user) const;
  const std::string& item_external(int item) const;

  std::size_t duplicate_count() const { return duplicates_; }
  std::size_t total_ratings() const;
  const std::optional<GenSpec>& generator_truth() const { return gen_spec_; }

  void save(const std::string& path) const;
  static RatingDataset load(const std::string& path);
  std::uint64_t digest() const;

 private:
  void check_domain(int d) const;
  void finalize();

  int num_domains_ = 0;
  int max_seq_len_ = kDefaultMaxSeqLen;
  std::size_t duplicates_ = 0;
  std::vector<std::string> user_external_;
  std::vector<std::string> item_external_;       // global order
  std::vector<int> item_domain_offset_;          // size N+1
  std::vector<std::vector<int>> domain_users_;   // local -> global
  std::vector<std::unordered_map<int, int>> user_local_;  // global -> local
  std::vector<std::vector<RatingTriple>> triples_;        // per domain
  // per user: per domain sequences/pairs (empty when absent)
  std::vector<std::vector<std::vector<int>>> sequences_;
  std::vector<std::vector<std::vector<std::pair<int, double>>>> pairs_;
  std::vector<int> overlap_users_;
  std::optional<GenSpec> gen_spec_;
};

// Cold-start protocol: a seeded fraction of overlap users is withheld from
// all target-domain training structures. Splits drawn with the same seed
// nest across rates (the test prefix grows with the rate), which is what
// makes cross-rate transfer evaluation leakage-free.
struct ColdStartSplit {
  int target_domain = 0;
  double cold_rate = 0.0;
  std::uint64_t seed = 0;
  std::vector<int> test_users;   // ascending
  std::vector<int> train_users;  // ascending

  bool is_test(int user) const;
  bool is_train(int user) const;
};

ColdStartSplit make_cold_split(const RatingDataset& ds, int target_domain,
                               double cold_rate, std::uint64_t seed);

// The only training-facing window onto a dataset: target-domain data of
// test users is unreachable through any method of this class.
class TrainView {
 public:
  TrainView(const RatingDataset& ds, const ColdStartSplit& split);

  const RatingDataset& dataset() const { return *ds_; }
  const ColdStartSplit& split() const { return *split_; }

  // Target-domain ratings with test users removed; other domains complete.
  const std::vector<RatingTriple>& training_triples(int domain) const;
  // Behavior sequence; for (test user, target domain) returns empty.
  const std::vector<int>& sequence(int user, int domain) const;
  // Target-domain (item, rating) pairs of a training user.
  const std::vector<std::pair<int, double>>& target_pairs(int user) const;

 private:
  const RatingDataset* ds_;
  const ColdStartSplit* split_;
  std::vector<RatingTriple> target_train_triples_;
  std::vector<std::vector<RatingTriple>> cached_;  // per-domain views
  std::vector<int> empty_seq_;
};

// One training draw for one user: H target-domain (item, rating) steps
// (H = 1 unless the multi-step episode mode is on).
struct UserDraw {
  int user = 0;
  std::vector<std::pair<int, double>> steps;
};

struct TrainBatch {
  std::vector<UserDraw> users;
};

// Deterministic per-epoch shuffling and target-pair sampling over the
// training users of a view.
class BatchIterator {
 public:
  BatchIterator(const TrainView& view, int batch_size, std::uint64_t seed,
                int horizon = 1);
  std::vector<TrainBatch> epoch(int epoch_index) const;

 private:
  const TrainView* view_;
  int batch_size_;
  int horizon_;
  std::uint64_t seed_;
};

}  // namespace marco

#endif  // MARCO_DATA_HPP_
