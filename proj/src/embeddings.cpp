#include "ctxmine/embeddings.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstring>
#include <fstream>
#include <thread>
#include <unordered_map>

#include "ctxmine/error.hpp"
#include "ctxmine/text.hpp"

namespace ctxmine {

namespace {

struct SplitMix64 {
  std::uint64_t state;

  explicit SplitMix64(std::uint64_t seed) : state(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  std::uint32_t next_below(std::uint32_t bound) {
    return static_cast<std::uint32_t>(next() % bound);
  }

  double next_double() {  // [0, 1)
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }
};

std::uint32_t fnv1a(std::string_view s) {
  std::uint32_t h = 2166136261u;
  for (char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 16777619u;
  }
  return h;
}

inline float sigmoidf(float x) { return 1.0f / (1.0f + std::exp(-x)); }

}  // namespace

std::vector<std::uint32_t> WordVectorModel::subword_ids(const std::string& word) const {
  std::u32string padded = U"<" + text::decode_utf8(word) + U">";
  std::vector<std::uint32_t> ids;
  const int minn = params_.ngram_min;
  const int maxn = params_.ngram_max;
  const std::size_t len = padded.size();
  for (std::size_t i = 0; i < len; ++i) {
    for (int n = minn; n <= maxn; ++n) {
      if (i + static_cast<std::size_t>(n) > len) break;
      std::string bytes =
          text::encode_utf8(std::u32string_view(padded).substr(i, static_cast<std::size_t>(n)));
      ids.push_back(fnv1a(bytes) % static_cast<std::uint32_t>(params_.bucket_count));
    }
  }
  return ids;
}

bool WordVectorModel::contains(const std::string& word) const { return index_.count(word) > 0; }

std::optional<std::uint64_t> WordVectorModel::frequency(const std::string& word) const {
  auto it = index_.find(word);
  if (it == index_.end()) return std::nullopt;
  return counts_[it->second];
}

std::vector<float> WordVectorModel::query_vector(const std::string& word) const {
  const int dim = params_.dim;
  std::vector<float> v(dim, 0.0f);
  std::size_t rows = 0;

  auto it = index_.find(word);
  if (it != index_.end()) {
    const float* row = word_vecs_.data() + static_cast<std::size_t>(it->second) * dim;
    for (int d = 0; d < dim; ++d) v[d] += row[d];
    ++rows;
  }
  for (std::uint32_t id : subword_ids(word)) {
    const float* row = bucket_vecs_.data() + static_cast<std::size_t>(id) * dim;
    for (int d = 0; d < dim; ++d) v[d] += row[d];
    ++rows;
  }
  if (rows > 1) {
    for (int d = 0; d < dim; ++d) v[d] /= static_cast<float>(rows);
  }
  return v;
}

std::vector<float> WordVectorModel::phrase_vector(const std::string& phrase) const {
  const int dim = params_.dim;
  std::vector<float> mean(dim, 0.0f);
  std::size_t words = 0;
  std::size_t i = 0;
  while (i < phrase.size()) {
    while (i < phrase.size() && phrase[i] == ' ') ++i;
    std::size_t start = i;
    while (i < phrase.size() && phrase[i] != ' ') ++i;
    if (i == start) break;
    std::vector<float> v = query_vector(phrase.substr(start, i - start));
    for (int d = 0; d < dim; ++d) mean[d] += v[d];
    ++words;
  }
  if (words > 1) {
    for (int d = 0; d < dim; ++d) mean[d] /= static_cast<float>(words);
  }
  return mean;
}

void WordVectorModel::finalize() {
  const int dim = params_.dim;
  unit_query_vecs_.assign(words_.size() * static_cast<std::size_t>(dim), 0.0f);
  for (std::size_t w = 0; w < words_.size(); ++w) {
    std::vector<float> v = query_vector(words_[w]);
    double norm = 0.0;
    for (int d = 0; d < dim; ++d) norm += static_cast<double>(v[d]) * v[d];
    norm = std::sqrt(norm);
    float* out = unit_query_vecs_.data() + w * static_cast<std::size_t>(dim);
    if (norm > 0.0) {
      for (int d = 0; d < dim; ++d) out[d] = static_cast<float>(v[d] / norm);
    }
  }
}

WordVectorModel WordVectorModel::train(const std::vector<std::vector<std::string>>& sentences,
                                       const EmbeddingHyperparams& params) {
  if (params.dim <= 0 || params.window < 1 || params.min_count < 1 || params.epochs < 1 ||
      params.bucket_count < 1 || params.negative_samples < 1 || params.ngram_min < 1 ||
      params.ngram_max < params.ngram_min) {
    throw Error("invalid embedding hyperparameters");
  }
  if (sentences.empty()) throw Error("cannot train on an empty corpus");

  WordVectorModel model;
  model.params_ = params;

  // vocabulary: tokens with frequency >= min_count, most frequent first
  std::unordered_map<std::string, std::uint64_t> freq;
  for (const auto& sentence : sentences) {
    for (const std::string& tok : sentence) ++freq[tok];
  }
  std::vector<std::pair<std::string, std::uint64_t>> entries;
  for (auto& [word, count] : freq) {
    if (count >= static_cast<std::uint64_t>(params.min_count)) entries.emplace_back(word, count);
  }
  std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  if (entries.size() < 2) {
    throw Error("vocabulary too small after min_count filtering (" +
                std::to_string(entries.size()) + " words)");
  }
  for (std::uint32_t i = 0; i < entries.size(); ++i) {
    model.words_.push_back(entries[i].first);
    model.counts_.push_back(entries[i].second);
    model.index_[entries[i].first] = i;
  }

  const int dim = params.dim;
  const std::size_t vocab = model.words_.size();

  // input rows per word: the word vector plus its n-gram buckets
  std::vector<std::vector<std::uint32_t>> subwords(vocab);
  for (std::size_t w = 0; w < vocab; ++w) subwords[w] = model.subword_ids(model.words_[w]);

  SplitMix64 init_rng(params.seed);
  const float bound = 1.0f / static_cast<float>(dim);
  auto init_uniform = [&](std::vector<float>& m, std::size_t n) {
    m.resize(n);
    for (float& x : m) {
      x = (static_cast<float>(init_rng.next_double()) * 2.0f - 1.0f) * bound;
    }
  };
  init_uniform(model.word_vecs_, vocab * static_cast<std::size_t>(dim));
  init_uniform(model.bucket_vecs_,
               static_cast<std::size_t>(params.bucket_count) * static_cast<std::size_t>(dim));
  std::vector<float> out_vecs(vocab * static_cast<std::size_t>(dim), 0.0f);

  // negative sampling follows the unigram distribution raised to 3/4
  std::vector<double> neg_cum(vocab);
  double cum = 0.0;
  for (std::size_t w = 0; w < vocab; ++w) {
    cum += std::pow(static_cast<double>(model.counts_[w]), 0.75);
    neg_cum[w] = cum;
  }
  auto draw_negative = [&](SplitMix64& rng, std::uint32_t target) -> std::uint32_t {
    for (;;) {
      double u = rng.next_double() * cum;
      auto it = std::upper_bound(neg_cum.begin(), neg_cum.end(), u);
      auto idx = static_cast<std::uint32_t>(std::min<std::size_t>(
          static_cast<std::size_t>(it - neg_cum.begin()), vocab - 1));
      if (idx != target) return idx;
    }
  };

  // sentences reduced to vocabulary indices
  std::vector<std::vector<std::uint32_t>> encoded;
  encoded.reserve(sentences.size());
  std::uint64_t total_tokens = 0;
  for (const auto& sentence : sentences) {
    std::vector<std::uint32_t> ids;
    for (const std::string& tok : sentence) {
      auto it = model.index_.find(tok);
      if (it != model.index_.end()) ids.push_back(it->second);
    }
    total_tokens += ids.size();
    encoded.push_back(std::move(ids));
  }
  if (total_tokens == 0) throw Error("corpus has no in-vocabulary tokens");

  std::atomic<std::uint64_t> processed{0};
  const std::uint64_t planned =
      total_tokens * static_cast<std::uint64_t>(params.epochs);

  auto train_range = [&](std::size_t begin, std::size_t end, std::uint64_t rng_seed) {
    SplitMix64 rng(rng_seed);
    std::vector<float> hidden(dim), grad(dim);
    std::uint64_t local_processed = 0;

    for (int epoch = 0; epoch < params.epochs; ++epoch) {
      for (std::size_t s = begin; s < end; ++s) {
        const auto& ids = encoded[s];
        for (std::size_t t = 0; t < ids.size(); ++t) {
          ++local_processed;
          if ((local_processed & 0x3FF) == 0) {
            processed.fetch_add(1024, std::memory_order_relaxed);
          }
          double progress =
              static_cast<double>(processed.load(std::memory_order_relaxed)) /
              static_cast<double>(planned);
          float lr = static_cast<float>(params.learning_rate *
                                        std::max(1.0 - progress, 1e-4));

          const std::uint32_t center = ids[t];
          const auto& grams = subwords[center];
          const float inv_rows = 1.0f / static_cast<float>(1 + grams.size());

          float* center_row = model.word_vecs_.data() + static_cast<std::size_t>(center) * dim;
          for (int d = 0; d < dim; ++d) hidden[d] = center_row[d];
          for (std::uint32_t g : grams) {
            const float* row = model.bucket_vecs_.data() + static_cast<std::size_t>(g) * dim;
            for (int d = 0; d < dim; ++d) hidden[d] += row[d];
          }
          for (int d = 0; d < dim; ++d) hidden[d] *= inv_rows;

          const std::uint32_t reduced = 1 + rng.next_below(static_cast<std::uint32_t>(params.window));
          for (long long off = -static_cast<long long>(reduced);
               off <= static_cast<long long>(reduced); ++off) {
            if (off == 0) continue;
            long long ctx = static_cast<long long>(t) + off;
            if (ctx < 0 || ctx >= static_cast<long long>(ids.size())) continue;
            const std::uint32_t target = ids[static_cast<std::size_t>(ctx)];

            std::fill(grad.begin(), grad.end(), 0.0f);
            for (int sample = 0; sample <= params.negative_samples; ++sample) {
              const bool positive = sample == 0;
              const std::uint32_t out_idx = positive ? target : draw_negative(rng, target);
              float* out_row = out_vecs.data() + static_cast<std::size_t>(out_idx) * dim;
              float dot = 0.0f;
              for (int d = 0; d < dim; ++d) dot += hidden[d] * out_row[d];
              const float alpha = lr * ((positive ? 1.0f : 0.0f) - sigmoidf(dot));
              for (int d = 0; d < dim; ++d) {
                grad[d] += alpha * out_row[d];
                out_row[d] += alpha * hidden[d];
              }
            }
            for (int d = 0; d < dim; ++d) center_row[d] += grad[d];
            for (std::uint32_t g : grams) {
              float* row = model.bucket_vecs_.data() + static_cast<std::size_t>(g) * dim;
              for (int d = 0; d < dim; ++d) row[d] += grad[d];
            }
          }
        }
      }
    }
  };

  const int threads = std::max(1, params.threads);
  if (threads == 1) {
    train_range(0, encoded.size(), params.seed ^ 0xA5A5A5A5A5A5A5A5ULL);
  } else {
    // hogwild-style: workers share the weight tables without locking
    std::vector<std::thread> pool;
    const std::size_t per = (encoded.size() + threads - 1) / threads;
    for (int th = 0; th < threads; ++th) {
      std::size_t begin = std::min(encoded.size(), per * static_cast<std::size_t>(th));
      std::size_t end = std::min(encoded.size(), begin + per);
      if (begin >= end) continue;
      pool.emplace_back(train_range, begin, end,
                        params.seed ^ (0xA5A5A5A5A5A5A5A5ULL + static_cast<std::uint64_t>(th)));
    }
    for (auto& t : pool) t.join();
  }

  model.finalize();
  return model;
}

WordVectorModel WordVectorModel::from_vectors(
    EmbeddingHyperparams params, std::vector<std::pair<std::string, std::uint64_t>> vocab,
    std::vector<float> word_vectors, std::vector<float> bucket_vectors) {
  WordVectorModel model;
  model.params_ = params;
  const std::size_t dim = static_cast<std::size_t>(params.dim);
  if (word_vectors.size() != vocab.size() * dim ||
      bucket_vectors.size() != static_cast<std::size_t>(params.bucket_count) * dim) {
    throw Error("vector table sizes do not match hyperparameters");
  }
  for (std::uint32_t i = 0; i < vocab.size(); ++i) {
    model.words_.push_back(vocab[i].first);
    model.counts_.push_back(vocab[i].second);
    model.index_[vocab[i].first] = i;
  }
  model.word_vecs_ = std::move(word_vectors);
  model.bucket_vecs_ = std::move(bucket_vectors);
  model.finalize();
  return model;
}

namespace {

constexpr char kMagic[8] = {'C', 'T', 'X', 'W', 'V', '0', '0', '1'};

template <typename T>
void write_pod(std::ofstream& out, const T& value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
void read_pod(std::ifstream& in, T& value) {
  in.read(reinterpret_cast<char*>(&value), sizeof(T));
}

}  // namespace

void WordVectorModel::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write model file: " + path);
  out.write(kMagic, sizeof(kMagic));
  write_pod(out, params_.dim);
  write_pod(out, params_.window);
  write_pod(out, params_.min_count);
  write_pod(out, params_.epochs);
  write_pod(out, params_.ngram_min);
  write_pod(out, params_.ngram_max);
  write_pod(out, params_.bucket_count);
  write_pod(out, params_.negative_samples);
  write_pod(out, params_.learning_rate);
  write_pod(out, params_.seed);
  std::uint64_t vocab = words_.size();
  write_pod(out, vocab);
  for (std::size_t w = 0; w < words_.size(); ++w) {
    std::uint32_t len = static_cast<std::uint32_t>(words_[w].size());
    write_pod(out, len);
    out.write(words_[w].data(), len);
    write_pod(out, counts_[w]);
  }
  out.write(reinterpret_cast<const char*>(word_vecs_.data()),
            static_cast<std::streamsize>(word_vecs_.size() * sizeof(float)));
  out.write(reinterpret_cast<const char*>(bucket_vecs_.data()),
            static_cast<std::streamsize>(bucket_vecs_.size() * sizeof(float)));
  if (!out) throw Error("failed while writing model file: " + path);
}

WordVectorModel WordVectorModel::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open model file: " + path);
  char magic[8];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
    throw Error("not a word-vector model file: " + path);
  }
  WordVectorModel model;
  read_pod(in, model.params_.dim);
  read_pod(in, model.params_.window);
  read_pod(in, model.params_.min_count);
  read_pod(in, model.params_.epochs);
  read_pod(in, model.params_.ngram_min);
  read_pod(in, model.params_.ngram_max);
  read_pod(in, model.params_.bucket_count);
  read_pod(in, model.params_.negative_samples);
  read_pod(in, model.params_.learning_rate);
  read_pod(in, model.params_.seed);
  std::uint64_t vocab = 0;
  read_pod(in, vocab);
  if (!in || model.params_.dim <= 0 || model.params_.bucket_count <= 0) {
    throw Error("corrupt model file: " + path);
  }
  for (std::uint64_t w = 0; w < vocab; ++w) {
    std::uint32_t len = 0;
    read_pod(in, len);
    std::string word(len, '\0');
    in.read(word.data(), len);
    std::uint64_t count = 0;
    read_pod(in, count);
    model.index_[word] = static_cast<std::uint32_t>(model.words_.size());
    model.words_.push_back(std::move(word));
    model.counts_.push_back(count);
  }
  const std::size_t dim = static_cast<std::size_t>(model.params_.dim);
  model.word_vecs_.resize(vocab * dim);
  model.bucket_vecs_.resize(static_cast<std::size_t>(model.params_.bucket_count) * dim);
  in.read(reinterpret_cast<char*>(model.word_vecs_.data()),
          static_cast<std::streamsize>(model.word_vecs_.size() * sizeof(float)));
  in.read(reinterpret_cast<char*>(model.bucket_vecs_.data()),
          static_cast<std::streamsize>(model.bucket_vecs_.size() * sizeof(float)));
  if (!in) throw Error("corrupt model file: " + path);
  model.finalize();
  return model;
}

std::vector<Neighbor> nearest(const WordVectorModel& model, const std::string& phrase,
                              std::size_t k) {
  if (k < 1 || phrase.empty()) throw Error("nearest() needs a phrase and k >= 1");

  const int dim = model.hyperparams().dim;
  std::vector<float> q = model.phrase_vector(phrase);
  double norm = 0.0;
  for (int d = 0; d < dim; ++d) norm += static_cast<double>(q[d]) * q[d];
  norm = std::sqrt(norm);
  if (norm > 0.0) {
    for (int d = 0; d < dim; ++d) q[d] = static_cast<float>(q[d] / norm);
  }

  std::set<std::string> own_words;
  {
    std::size_t i = 0;
    while (i < phrase.size()) {
      while (i < phrase.size() && phrase[i] == ' ') ++i;
      std::size_t start = i;
      while (i < phrase.size() && phrase[i] != ' ') ++i;
      if (i > start) own_words.insert(phrase.substr(start, i - start));
    }
  }

  std::vector<Neighbor> all;
  all.reserve(model.vocab_size());
  const std::vector<std::string>& words = model.vocab_words();
  for (std::size_t w = 0; w < words.size(); ++w) {
    if (own_words.count(words[w])) continue;
    const float* row = model.unit_query_vecs_.data() + w * static_cast<std::size_t>(dim);
    double dot = 0.0;
    for (int d = 0; d < dim; ++d) dot += static_cast<double>(q[d]) * row[d];
    all.push_back(Neighbor{words[w], 1.0 - dot});
  }

  std::size_t take = std::min(k, all.size());
  std::partial_sort(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(take), all.end(),
                    [](const Neighbor& a, const Neighbor& b) {
                      if (a.cosine_distance != b.cosine_distance) {
                        return a.cosine_distance < b.cosine_distance;
                      }
                      return a.word < b.word;
                    });
  all.resize(take);
  return all;
}

std::map<std::string, std::set<std::string>> alternative_spellings(
    const WordVectorModel& model, const std::set<std::string>& keywords, std::size_t k,
    double max_distance, const std::set<std::string>& exclusions) {
  struct Assignment {
    double distance;
    std::string keyword;
  };
  std::map<std::string, Assignment> best;

  for (const std::string& keyword : keywords) {
    for (const Neighbor& nb : nearest(model, keyword, k)) {
      if (nb.cosine_distance > max_distance) continue;
      if (nb.word == keyword || exclusions.count(nb.word)) continue;
      auto it = best.find(nb.word);
      if (it == best.end() || nb.cosine_distance < it->second.distance ||
          (nb.cosine_distance == it->second.distance && keyword < it->second.keyword)) {
        best[nb.word] = {nb.cosine_distance, keyword};
      }
    }
  }

  std::map<std::string, std::set<std::string>> out;
  for (const std::string& keyword : keywords) out[keyword];
  for (const auto& [spelling, assignment] : best) out[assignment.keyword].insert(spelling);
  return out;
}

}  // namespace ctxmine
