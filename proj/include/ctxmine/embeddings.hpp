#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace ctxmine {

struct EmbeddingHyperparams {
  int dim = 300;
  int window = 5;
  int min_count = 5;
  int epochs = 10;
  int ngram_min = 3;
  int ngram_max = 6;
  int bucket_count = 1 << 21;
  double learning_rate = 0.05;
  int negative_samples = 5;
  std::uint64_t seed = 1;
  int threads = 1;  // > 1 trades determinism for speed
};

struct Neighbor {
  std::string word;
  double cosine_distance = 0.0;  // 1 - cosine similarity, in [0, 2]
};

/// Subword word vectors: every vocabulary word owns a vector, and every
/// character n-gram hashes into a shared bucket table. A word's query vector
/// is the mean of its word vector and its n-gram bucket vectors, so words
/// outside the vocabulary still map somewhere sensible.
///
/// Training is skip-gram with negative sampling. With threads == 1 and a
/// fixed seed it is fully deterministic.
class WordVectorModel {
 public:
  static WordVectorModel train(const std::vector<std::vector<std::string>>& sentences,
                               const EmbeddingHyperparams& params);

  /// Assembles a model from explicit tables, mainly for tests and tools.
  static WordVectorModel from_vectors(EmbeddingHyperparams params,
                                      std::vector<std::pair<std::string, std::uint64_t>> vocab,
                                      std::vector<float> word_vectors,
                                      std::vector<float> bucket_vectors);

  const EmbeddingHyperparams& hyperparams() const { return params_; }
  std::size_t vocab_size() const { return words_.size(); }
  const std::vector<std::string>& vocab_words() const { return words_; }
  bool contains(const std::string& word) const;
  std::optional<std::uint64_t> frequency(const std::string& word) const;

  /// Word + subword mean; subwords alone for out-of-vocabulary words.
  std::vector<float> query_vector(const std::string& word) const;

  /// Unweighted mean of the per-word query vectors of a whitespace-split
  /// phrase.
  std::vector<float> phrase_vector(const std::string& phrase) const;

  /// Hashed n-gram bucket ids for a word (with boundary markers applied).
  std::vector<std::uint32_t> subword_ids(const std::string& word) const;

  void save(const std::string& path) const;
  static WordVectorModel load(const std::string& path);

  // raw tables, exposed for oracles
  const std::vector<float>& word_vectors() const { return word_vecs_; }
  const std::vector<float>& bucket_vectors() const { return bucket_vecs_; }

 private:
  friend std::vector<Neighbor> nearest(const WordVectorModel&, const std::string&, std::size_t);

  void finalize();

  EmbeddingHyperparams params_;
  std::vector<std::string> words_;                 // index -> word
  std::vector<std::uint64_t> counts_;              // index -> corpus frequency
  std::map<std::string, std::uint32_t> index_;     // word -> index
  std::vector<float> word_vecs_;                   // vocab x dim
  std::vector<float> bucket_vecs_;                 // bucket_count x dim
  std::vector<float> unit_query_vecs_;             // vocab x dim, L2-normalized
};

/// The k vocabulary words closest to the phrase vector by cosine distance,
/// excluding the phrase's own words. Exact scan over the vocabulary.
std::vector<Neighbor> nearest(const WordVectorModel& model, const std::string& phrase,
                              std::size_t k);

/// Harvests likely misspellings/abbreviations: per keyword, the top-k
/// neighbors within max_distance, minus exclusions and the keyword itself.
/// A spelling suggested for several keywords is assigned only to the closest
/// one (ties to the lexicographically smaller keyword).
std::map<std::string, std::set<std::string>> alternative_spellings(
    const WordVectorModel& model, const std::set<std::string>& keywords, std::size_t k = 10,
    double max_distance = 0.2, const std::set<std::string>& exclusions = {});

}  // namespace ctxmine
