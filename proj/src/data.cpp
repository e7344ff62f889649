#include "marco/data.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "marco/rng.hpp"
#include "marco/serialize.hpp"
#include "marco/tensor.hpp"

namespace marco {

namespace {

constexpr const char* kDatasetMagic = "MARCO-DS v1";

// Seed streams, so different stages never share a generator.
constexpr std::uint64_t kStreamSplit = 11;
constexpr std::uint64_t kStreamBatch = 12;
constexpr std::uint64_t kStreamSynthLatent = 13;
constexpr std::uint64_t kStreamSynthChoice = 14;
constexpr std::uint64_t kStreamSynthNoise = 15;

struct RowKey {
  int domain;
  std::string user;
  std::string item;
  bool operator<(const RowKey& o) const {
    if (domain != o.domain) return domain < o.domain;
    if (user != o.user) return user < o.user;
    return item < o.item;
  }
};

// Random rotation via Gram-Schmidt on a Gaussian matrix.
Tensor2 random_rotation(int dim, Rng& rng) {
  Tensor2 a(dim, dim);
  for (auto& v : a.data()) v = rng.normal();
  for (int c = 0; c < dim; ++c) {
    for (int p = 0; p < c; ++p) {
      double dot = 0.0;
      for (int r = 0; r < dim; ++r) dot += a.at(r, c) * a.at(r, p);
      for (int r = 0; r < dim; ++r) a.at(r, c) -= dot * a.at(r, p);
    }
    double nrm = 0.0;
    for (int r = 0; r < dim; ++r) nrm += a.at(r, c) * a.at(r, c);
    nrm = std::sqrt(nrm);
    if (nrm < 1e-12) throw NumericError("degenerate rotation draw");
    for (int r = 0; r < dim; ++r) a.at(r, c) /= nrm;
  }
  return a;
}

}  // namespace

RatingDataset RatingDataset::from_triples(int num_domains,
                                          const std::vector<RawRating>& rows,
                                          bool min_interaction_filter,
                                          int max_seq_len) {
  if (num_domains < 1) throw ValidationError("dataset needs >= 1 domain");
  if (max_seq_len < 1) throw ValidationError("max_seq_len must be >= 1");
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const RawRating& r = rows[i];
    if (r.domain < 0 || r.domain >= num_domains)
      throw ValidationError("row " + std::to_string(i) + ": domain id " +
                            std::to_string(r.domain) + " outside [0, " +
                            std::to_string(num_domains) + ")");
    if (!(r.rating >= 0.0 && r.rating <= 5.0))
      throw ValidationError("row " + std::to_string(i) + ": rating " +
                            std::to_string(r.rating) + " outside [0, 5]");
  }

  // Duplicate (domain, user, item) rows: the last occurrence wins, both in
  // value and in sequence position.
  std::map<RowKey, std::size_t> last_seen;
  std::size_t duplicates = 0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    RowKey key{rows[i].domain, rows[i].user, rows[i].item};
    auto [it, inserted] = last_seen.insert({std::move(key), i});
    if (!inserted) {
      ++duplicates;
      it->second = i;
    }
  }
  std::vector<bool> keep(rows.size(), false);
  for (const auto& [key, idx] : last_seen) keep[idx] = true;

  // Optional per-domain 5-core: drop users/items with fewer than five kept
  // ratings in that domain, to a fixpoint.
  if (min_interaction_filter) {
    bool changed = true;
    while (changed) {
      changed = false;
      std::map<std::pair<int, std::string>, int> user_cnt, item_cnt;
      for (std::size_t i = 0; i < rows.size(); ++i) {
        if (!keep[i]) continue;
        ++user_cnt[{rows[i].domain, rows[i].user}];
        ++item_cnt[{rows[i].domain, rows[i].item}];
      }
      for (std::size_t i = 0; i < rows.size(); ++i) {
        if (!keep[i]) continue;
        if (user_cnt[{rows[i].domain, rows[i].user}] < kMinInteractions ||
            item_cnt[{rows[i].domain, rows[i].item}] < kMinInteractions) {
          keep[i] = false;
          changed = true;
        }
      }
    }
  }

  RatingDataset ds;
  ds.num_domains_ = num_domains;
  ds.max_seq_len_ = max_seq_len;
  ds.duplicates_ = duplicates;

  // Dense ids in first-appearance order over kept rows.
  std::unordered_map<std::string, int> user_ids;
  std::vector<std::unordered_map<std::string, int>> item_local(num_domains);
  std::vector<std::vector<std::string>> item_names(num_domains);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (!keep[i]) continue;
    const RawRating& r = rows[i];
    if (user_ids.insert({r.user, static_cast<int>(user_ids.size())}).second)
      ds.user_external_.push_back(r.user);
    auto [it, inserted] =
        item_local[r.domain].insert({r.item, static_cast<int>(item_names[r.domain].size())});
    (void)it;
    if (inserted) item_names[r.domain].push_back(r.item);
  }

  ds.item_domain_offset_.assign(num_domains + 1, 0);
  for (int d = 0; d < num_domains; ++d) {
    ds.item_domain_offset_[d + 1] =
        ds.item_domain_offset_[d] + static_cast<int>(item_names[d].size());
    for (auto& name : item_names[d]) ds.item_external_.push_back(name);
  }

  ds.triples_.assign(num_domains, {});
  ds.domain_users_.assign(num_domains, {});
  ds.user_local_.assign(num_domains, {});
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (!keep[i]) continue;
    const RawRating& r = rows[i];
    int user = user_ids.at(r.user);
    int item = ds.item_domain_offset_[r.domain] + item_local[r.domain].at(r.item);
    auto [it, inserted] = ds.user_local_[r.domain].insert(
        {user, static_cast<int>(ds.domain_users_[r.domain].size())});
    (void)it;
    if (inserted) ds.domain_users_[r.domain].push_back(user);
    ds.triples_[r.domain].push_back(RatingTriple{user, item, r.rating, r.domain});
  }

  for (int d = 0; d < num_domains; ++d)
    if (ds.triples_[d].empty())
      throw ValidationError("domain " + std::to_string(d) + " has no ratings");

  ds.finalize();
  return ds;
}

void RatingDataset::finalize() {
  int users = num_users();
  sequences_.assign(users, std::vector<std::vector<int>>(num_domains_));
  pairs_.assign(users,
                std::vector<std::vector<std::pair<int, double>>>(num_domains_));
  for (int d = 0; d < num_domains_; ++d) {
    for (const RatingTriple& t : triples_[d]) {
      sequences_[t.user][d].push_back(t.item);
      pairs_[t.user][d].push_back({t.item, t.rating});
    }
  }
  for (auto& per_user : sequences_)
    for (auto& seq : per_user)
      if (static_cast<int>(seq.size()) > max_seq_len_)
        seq.erase(seq.begin(), seq.end() - max_seq_len_);

  overlap_users_.clear();
  for (int u = 0; u < users; ++u) {
    bool everywhere = true;
    for (int d = 0; d < num_domains_ && everywhere; ++d)
      everywhere = !pairs_[u][d].empty();
    if (everywhere) overlap_users_.push_back(u);
  }
}

void RatingDataset::check_domain(int d) const {
  if (d < 0 || d >= num_domains_)
    throw ValidationError("domain id " + std::to_string(d) + " out of range");
}

int RatingDataset::domain_user_count(int d) const {
  check_domain(d);
  return static_cast<int>(domain_users_[d].size());
}

int RatingDataset::domain_item_count(int d) const {
  check_domain(d);
  return item_domain_offset_[d + 1] - item_domain_offset_[d];
}

int RatingDataset::item_domain(int item) const {
  if (item < 0 || item >= num_items())
    throw ValidationError("item id out of range");
  int d = static_cast<int>(std::upper_bound(item_domain_offset_.begin(),
                                            item_domain_offset_.end(), item) -
                           item_domain_offset_.begin()) -
          1;
  return d;
}

int RatingDataset::item_local(int item) const {
  return item - item_domain_offset_[item_domain(item)];
}

int RatingDataset::item_global(int domain, int local) const {
  check_domain(domain);
  if (local < 0 || local >= domain_item_count(domain))
    throw ValidationError("local item id out of range");
  return item_domain_offset_[domain] + local;
}

int RatingDataset::user_local(int domain, int user) const {
  check_domain(domain);
  auto it = user_local_[domain].find(user);
  return it == user_local_[domain].end() ? -1 : it->second;
}

int RatingDataset::user_global_from_local(int domain, int local) const {
  check_domain(domain);
  if (local < 0 || local >= domain_user_count(domain))
    throw ValidationError("local user id out of range");
  return domain_users_[domain][local];
}

const std::vector<RatingTriple>& RatingDataset::triples(int domain) const {
  check_domain(domain);
  return triples_[domain];
}

const std::vector<int>& RatingDataset::behavior_sequence(int user,
                                                         int domain) const {
  check_domain(domain);
  if (user < 0 || user >= num_users())
    throw ValidationError("user id out of range");
  return sequences_[user][domain];
}

const std::vector<std::pair<int, double>>& RatingDataset::user_pairs(
    int user, int domain) const {
  check_domain(domain);
  if (user < 0 || user >= num_users())
    throw ValidationError("user id out of range");
  return pairs_[user][domain];
}

const std::string& RatingDataset::user_external(int user) const {
  if (user < 0 || user >= num_users())
    throw ValidationError("user id out of range");
  return user_external_[user];
}

const std::string& RatingDataset::item_external(int item) const {
  if (item < 0 || item >= num_items())
    throw ValidationError("item id out of range");
  return item_external_[item];
}

std::size_t RatingDataset::total_ratings() const {
  std::size_t n = 0;
  for (const auto& t : triples_) n += t.size();
  return n;
}

RatingDataset RatingDataset::ingest_csv(const std::string& path,
                                        const CsvSchema& schema) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  std::string line;
  if (!std::getline(in, line))
    throw ParseError(path + ": empty file (missing header)");
  if (!line.empty() && line.back() == '\r') line.pop_back();

  auto split_fields = [](const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
      if (c == ',') {
        out.push_back(cur);
        cur.clear();
      } else {
        cur.push_back(c);
      }
    }
    out.push_back(cur);
    return out;
  };

  std::vector<std::string> header = split_fields(line);
  auto find_col = [&](const std::string& name) {
    for (std::size_t i = 0; i < header.size(); ++i)
      if (header[i] == name) return static_cast<int>(i);
    throw ParseError(path + ": header lacks column '" + name + "'");
  };
  int cu = find_col(schema.user_col);
  int ci = find_col(schema.item_col);
  int cr = find_col(schema.rating_col);
  int cd = find_col(schema.domain_col);

  std::vector<RawRating> rows;
  std::size_t line_no = 1;
  int max_domain = -1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> f = split_fields(line);
    if (static_cast<int>(f.size()) <= std::max(std::max(cu, ci), std::max(cr, cd)))
      throw ParseError(path + ":" + std::to_string(line_no) +
                       ": too few fields");
    RawRating r;
    r.user = f[cu];
    r.item = f[ci];
    try {
      std::size_t used = 0;
      r.rating = std::stod(f[cr], &used);
      if (used != f[cr].size()) throw std::invalid_argument("trailing chars");
    } catch (const std::exception&) {
      throw ParseError(path + ":" + std::to_string(line_no) +
                       ": rating is not a number: '" + f[cr] + "'");
    }
    try {
      std::size_t used = 0;
      r.domain = std::stoi(f[cd], &used);
      if (used != f[cd].size()) throw std::invalid_argument("trailing chars");
    } catch (const std::exception&) {
      throw ParseError(path + ":" + std::to_string(line_no) +
                       ": domain is not an integer: '" + f[cd] + "'");
    }
    if (!(r.rating >= 0.0 && r.rating <= 5.0))
      throw ValidationError(path + ":" + std::to_string(line_no) +
                            ": rating " + f[cr] + " outside [0, 5]");
    max_domain = std::max(max_domain, r.domain);
    rows.push_back(std::move(r));
  }
  if (rows.empty()) throw ValidationError(path + ": no data rows");
  int n = schema.num_domains > 0 ? schema.num_domains : max_domain + 1;
  return from_triples(n, rows, schema.min_interaction_filter,
                      schema.max_seq_len);
}

RatingDataset RatingDataset::generate(const GenSpec& spec) {
  if (spec.num_domains < 2)
    throw ConfigError("synthetic spec needs at least 2 domains");
  if (spec.latent_dim <= 0)
    throw ConfigError("synthetic spec needs latent_dim > 0");
  if (spec.num_users < 1 || spec.items_per_domain < 1)
    throw ConfigError("synthetic spec needs users and items");
  if (!(spec.density > 0.0 && spec.density <= 1.0))
    throw ConfigError("synthetic density must be in (0, 1]");
  if (spec.noise_sigma < 0.0)
    throw ConfigError("synthetic noise_sigma must be >= 0");
  std::vector<double> w = spec.domain_signal;
  if (w.empty()) w.assign(spec.num_domains, 1.0);
  if (static_cast<int>(w.size()) != spec.num_domains)
    throw ConfigError("domain_signal length must equal num_domains");
  for (double x : w)
    if (!(x >= 0.0 && x <= 1.0))
      throw ConfigError("domain_signal entries must lie in [0, 1]");

  int k = spec.latent_dim;
  Rng latent_rng(mix_seed(spec.seed, kStreamSynthLatent));
  Rng choice_rng(mix_seed(spec.seed, kStreamSynthChoice));
  Rng noise_rng(mix_seed(spec.seed, kStreamSynthNoise));

  // Shared user latents and per-domain rotations.
  std::vector<Tensor2> rotations;
  rotations.reserve(spec.num_domains);
  for (int d = 0; d < spec.num_domains; ++d)
    rotations.push_back(random_rotation(k, latent_rng));

  std::vector<std::vector<double>> user_pref(
      static_cast<std::size_t>(spec.num_users) * spec.num_domains,
      std::vector<double>());
  for (int u = 0; u < spec.num_users; ++u) {
    std::vector<double> z(k);
    for (auto& v : z) v = latent_rng.normal();
    for (int d = 0; d < spec.num_domains; ++d) {
      std::vector<double> pref(k);
      for (int r = 0; r < k; ++r) {
        double rot = 0.0;
        for (int c = 0; c < k; ++c) rot += rotations[d].at(r, c) * z[c];
        pref[r] = w[d] * rot + (1.0 - w[d]) * latent_rng.normal();
      }
      user_pref[static_cast<std::size_t>(u) * spec.num_domains + d] =
          std::move(pref);
    }
  }

  // Item latents: i.i.d. normal scaled by 1/sqrt(k).
  double item_scale = 1.0 / std::sqrt(static_cast<double>(k));
  std::vector<std::vector<double>> item_latent(
      static_cast<std::size_t>(spec.num_domains) * spec.items_per_domain);
  for (auto& lat : item_latent) {
    lat.resize(k);
    for (auto& v : lat) v = latent_rng.normal(0.0, item_scale);
  }

  int per_user = std::max(
      1, static_cast<int>(std::llround(spec.density * spec.items_per_domain)));
  per_user = std::min(per_user, spec.items_per_domain);

  std::vector<RawRating> rows;
  rows.reserve(static_cast<std::size_t>(spec.num_users) * spec.num_domains *
               per_user);
  std::vector<int> item_idx(spec.items_per_domain);
  char name[32];
  for (int u = 0; u < spec.num_users; ++u) {
    std::snprintf(name, sizeof(name), "u%06d", u);
    std::string user_name = name;
    for (int d = 0; d < spec.num_domains; ++d) {
      const auto& pref =
          user_pref[static_cast<std::size_t>(u) * spec.num_domains + d];
      for (int i = 0; i < spec.items_per_domain; ++i) item_idx[i] = i;
      choice_rng.shuffle(item_idx);
      for (int pick = 0; pick < per_user; ++pick) {
        int item = item_idx[pick];
        const auto& lat =
            item_latent[static_cast<std::size_t>(d) * spec.items_per_domain +
                        item];
        double dot = 0.0;
        for (int c = 0; c < k; ++c) dot += pref[c] * lat[c];
        double rating = dot + 2.5 + noise_rng.normal(0.0, spec.noise_sigma);
        rating = std::min(5.0, std::max(0.0, rating));
        std::snprintf(name, sizeof(name), "i%d_%04d", d, item);
        rows.push_back(RawRating{user_name, name, rating, d});
      }
    }
  }
  RatingDataset ds = from_triples(spec.num_domains, rows, false,
                                  kDefaultMaxSeqLen);
  ds.gen_spec_ = spec;
  ds.gen_spec_->domain_signal = w;
  return ds;
}

void RatingDataset::save(const std::string& path) const {
  BinWriter w(path);
  w.magic(kDatasetMagic);
  w.u32(static_cast<std::uint32_t>(num_domains_));
  w.u32(static_cast<std::uint32_t>(max_seq_len_));
  w.u64(duplicates_);
  w.u32(static_cast<std::uint32_t>(user_external_.size()));
  for (const auto& s : user_external_) w.str(s);
  for (int d = 0; d < num_domains_; ++d) {
    w.u32(static_cast<std::uint32_t>(domain_item_count(d)));
    for (int l = 0; l < domain_item_count(d); ++l)
      w.str(item_external_[item_domain_offset_[d] + l]);
  }
  for (int d = 0; d < num_domains_; ++d) {
    w.u32(static_cast<std::uint32_t>(triples_[d].size()));
    for (const RatingTriple& t : triples_[d]) {
      w.u32(static_cast<std::uint32_t>(t.user));
      w.u32(static_cast<std::uint32_t>(t.item));
      w.f64(t.rating);
    }
  }
  w.u8(gen_spec_ ? 1 : 0);
  if (gen_spec_) {
    w.u32(static_cast<std::uint32_t>(gen_spec_->num_domains));
    w.u32(static_cast<std::uint32_t>(gen_spec_->num_users));
    w.u32(static_cast<std::uint32_t>(gen_spec_->items_per_domain));
    w.u32(static_cast<std::uint32_t>(gen_spec_->latent_dim));
    w.u32(static_cast<std::uint32_t>(gen_spec_->domain_signal.size()));
    for (double x : gen_spec_->domain_signal) w.f64(x);
    w.f64(gen_spec_->noise_sigma);
    w.f64(gen_spec_->density);
    w.u64(gen_spec_->seed);
  }
  w.close();
}

RatingDataset RatingDataset::load(const std::string& path) {
  BinReader r(path);
  r.expect_magic(kDatasetMagic);
  RatingDataset ds;
  ds.num_domains_ = static_cast<int>(r.u32());
  ds.max_seq_len_ = static_cast<int>(r.u32());
  ds.duplicates_ = r.u64();
  std::uint32_t users = r.u32();
  ds.user_external_.reserve(users);
  for (std::uint32_t i = 0; i < users; ++i)
    ds.user_external_.push_back(r.str());
  ds.item_domain_offset_.assign(ds.num_domains_ + 1, 0);
  for (int d = 0; d < ds.num_domains_; ++d) {
    std::uint32_t items = r.u32();
    ds.item_domain_offset_[d + 1] =
        ds.item_domain_offset_[d] + static_cast<int>(items);
    for (std::uint32_t i = 0; i < items; ++i)
      ds.item_external_.push_back(r.str());
  }
  ds.triples_.assign(ds.num_domains_, {});
  ds.domain_users_.assign(ds.num_domains_, {});
  ds.user_local_.assign(ds.num_domains_, {});
  for (int d = 0; d < ds.num_domains_; ++d) {
    std::uint32_t n = r.u32();
    ds.triples_[d].reserve(n);
    for (std::uint32_t i = 0; i < n; ++i) {
      RatingTriple t;
      t.user = static_cast<int>(r.u32());
      t.item = static_cast<int>(r.u32());
      t.rating = r.f64();
      t.domain = d;
      if (t.user < 0 || t.user >= static_cast<int>(users))
        throw ParseError(path + ": triple user id out of range");
      if (t.item < ds.item_domain_offset_[d] ||
          t.item >= ds.item_domain_offset_[d + 1])
        throw ParseError(path + ": triple item id outside domain block");
      auto [it, inserted] = ds.user_local_[d].insert(
          {t.user, static_cast<int>(ds.domain_users_[d].size())});
      (void)it;
      if (inserted) ds.domain_users_[d].push_back(t.user);
      ds.triples_[d].push_back(t);
    }
  }
  if (r.u8() == 1) {
    GenSpec g;
    g.num_domains = static_cast<int>(r.u32());
    g.num_users = static_cast<int>(r.u32());
    g.items_per_domain = static_cast<int>(r.u32());
    g.latent_dim = static_cast<int>(r.u32());
    std::uint32_t wn = r.u32();
    g.domain_signal.resize(wn);
    for (auto& x : g.domain_signal) x = r.f64();
    g.noise_sigma = r.f64();
    g.density = r.f64();
    g.seed = r.u64();
    ds.gen_spec_ = g;
  }
  ds.finalize();
  return ds;
}

std::uint64_t RatingDataset::digest() const {
  Digest d;
  d.str(kDatasetMagic);
  d.u64(static_cast<std::uint64_t>(num_domains_));
  d.u64(static_cast<std::uint64_t>(max_seq_len_));
  d.u64(duplicates_);
  for (const auto& s : user_external_) d.str(s);
  for (const auto& s : item_external_) d.str(s);
  for (const auto& dom : triples_)
    for (const RatingTriple& t : dom) {
      d.u64(static_cast<std::uint64_t>(t.user));
      d.u64(static_cast<std::uint64_t>(t.item));
      d.f64(t.rating);
    }
  return d.value();
}

bool ColdStartSplit::is_test(int user) const {
  return std::binary_search(test_users.begin(), test_users.end(), user);
}

bool ColdStartSplit::is_train(int user) const {
  return std::binary_search(train_users.begin(), train_users.end(), user);
}

ColdStartSplit make_cold_split(const RatingDataset& ds, int target_domain,
                               double cold_rate, std::uint64_t seed) {
  if (!(cold_rate > 0.0 && cold_rate < 1.0))
    throw ContractError("cold_rate must lie in (0, 1)");
  if (target_domain < 0 || target_domain >= ds.num_domains())
    throw ValidationError("target domain out of range");
  const std::vector<int>& overlap = ds.overlap_users();
  if (overlap.size() < 2)
    throw ValidationError("cold split needs at least 2 overlap users");

  // One shuffle; the test set is a prefix, so splits at different rates
  // from the same seed nest.
  std::vector<int> order = overlap;
  Rng rng(mix_seed(seed, kStreamSplit));
  rng.shuffle(order);
  std::size_t n_test = static_cast<std::size_t>(
      std::llround(cold_rate * static_cast<double>(overlap.size())));
  n_test = std::min(n_test, order.size());

  ColdStartSplit split;
  split.target_domain = target_domain;
  split.cold_rate = cold_rate;
  split.seed = seed;
  split.test_users.assign(order.begin(), order.begin() + n_test);
  split.train_users.assign(order.begin() + n_test, order.end());
  std::sort(split.test_users.begin(), split.test_users.end());
  std::sort(split.train_users.begin(), split.train_users.end());
  return split;
}

TrainView::TrainView(const RatingDataset& ds, const ColdStartSplit& split)
    : ds_(&ds), split_(&split) {
  for (const RatingTriple& t : ds.triples(split.target_domain))
    if (!split.is_test(t.user)) target_train_triples_.push_back(t);
}

const std::vector<RatingTriple>& TrainView::training_triples(int domain) const {
  if (domain == split_->target_domain) return target_train_triples_;
  return ds_->triples(domain);
}

const std::vector<int>& TrainView::sequence(int user, int domain) const {
  if (domain == split_->target_domain && split_->is_test(user))
    return empty_seq_;
  return ds_->behavior_sequence(user, domain);
}

const std::vector<std::pair<int, double>>& TrainView::target_pairs(
    int user) const {
  if (split_->is_test(user))
    throw ProtocolError("target pairs of a cold-start test user requested "
                        "through the training view");
  return ds_->user_pairs(user, split_->target_domain);
}

BatchIterator::BatchIterator(const TrainView& view, int batch_size,
                             std::uint64_t seed, int horizon)
    : view_(&view), batch_size_(batch_size), horizon_(horizon), seed_(seed) {
  if (batch_size < 1) throw ContractError("batch_size must be >= 1");
  if (horizon < 1) throw ContractError("horizon must be >= 1");
  if (view.split().train_users.empty())
    throw ContractError("no training users to iterate");
}

std::vector<TrainBatch> BatchIterator::epoch(int epoch_index) const {
  Rng rng(mix_seed(seed_, kStreamBatch + 977 * static_cast<std::uint64_t>(
                                                   epoch_index)));
  std::vector<int> order = view_->split().train_users;
  rng.shuffle(order);
  std::vector<TrainBatch> batches;
  TrainBatch current;
  for (int user : order) {
    const auto& pairs = view_->target_pairs(user);
    if (pairs.empty()) continue;
    UserDraw draw;
    draw.user = user;
    for (int h = 0; h < horizon_; ++h)
      draw.steps.push_back(pairs[rng.below(pairs.size())]);
    current.users.push_back(std::move(draw));
    if (static_cast<int>(current.users.size()) == batch_size_) {
      batches.push_back(std::move(current));
      current = TrainBatch{};
    }
  }
  if (!current.users.empty()) batches.push_back(std::move(current));
  if (batches.empty()) throw ContractError("epoch produced no batches");
  return batches;
}

}  // namespace marco
