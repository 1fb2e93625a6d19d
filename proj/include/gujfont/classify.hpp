#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "gujfont/features.hpp"

namespace gujfont {

inline constexpr int kNumClasses = 6;

using Dataset = std::vector<DatasetRow>;

FeatureVector row_features(const DatasetRow& row);
inline int row_label(const DatasetRow& row) { return row[kFeatureLength]; }

// Stratified per-class split. Within each class the test rows are a seeded
// shuffle prefix of round(fraction * n) rows, clamped to [1, n-1]. Both halves
// keep the input order.
std::pair<Dataset, Dataset> split(const Dataset& ds, double test_fraction, std::uint64_t seed);

enum class Algo { Knn, Tree, NaiveBayes, Forest };

const char* algo_name(Algo a);  // "knn", "tree", "nb", "forest"
Algo parse_algo(const std::string& name);

struct Hyperparams {
  int k = 3;
  int trees = 25;
  int mtry = 5;  // features considered per split inside the forest
  std::uint64_t seed = 42;

  friend bool operator==(const Hyperparams&, const Hyperparams&) = default;
};

struct TreeNode {
  int feature = -1;  // -1 for a leaf
  int value = 0;     // split test: x[feature] == value
  int match = -1;    // child index when the test holds
  int other = -1;    // child index otherwise
  int label = 0;     // leaf label; majority label for inner nodes

  friend bool operator==(const TreeNode&, const TreeNode&) = default;
};

struct DecisionTree {
  std::vector<TreeNode> nodes;  // nodes[0] is the root

  int predict(const FeatureVector& v) const;
  friend bool operator==(const DecisionTree&, const DecisionTree&) = default;
};

struct NaiveBayesTables {
  std::vector<int> classes;          // labels present in training
  std::vector<int> class_counts;     // rows per class
  // counts[c][feature][code index] with codes 0..8 at 0..8 and 10 at 9.
  std::vector<std::array<std::array<int, 10>, kFeatureLength>> counts;

  friend bool operator==(const NaiveBayesTables&, const NaiveBayesTables&) = default;
};

struct Model {
  Algo algo = Algo::Knn;
  Hyperparams hyper;
  Dataset knn_rows;
  DecisionTree tree;
  NaiveBayesTables nb;
  std::vector<DecisionTree> forest;

  friend bool operator==(const Model&, const Model&) = default;
};

Model train(const Dataset& ds, Algo algo, const Hyperparams& hp = {});
int predict(const Model& m, const FeatureVector& v);

// Gini CART with equality splits. `mtry` <= 0 considers all 25 features.
DecisionTree fit_tree(const Dataset& ds, const std::vector<std::size_t>& rows, int mtry, std::uint64_t seed);

nlohmann::json model_to_json(const Model& m);
Model model_from_json(const nlohmann::json& j);

struct EvalReport {
  std::array<std::array<int, kNumClasses>, kNumClasses> confusion{};  // [true-1][pred-1]
  std::map<int, double> per_class_accuracy;                            // classes with support
  double overall_accuracy = 0;
  std::size_t total = 0;
};

EvalReport evaluate(const Model& m, const Dataset& test);
nlohmann::json report_to_json(const EvalReport& r);

// Per-algorithm results for the classifier comparison tables.
struct ClassifierResults {
  std::map<Algo, EvalReport> testing;
  std::map<Algo, EvalReport> verification;
};

// Text tables in the classifier-comparison layout: overall testing and
// verification accuracy, class-wise testing accuracy, class-wise
// verification accuracy. Columns for classifiers this toolkit does not
// implement stay blank.
std::string render_classifier_tables(const ClassifierResults& r);
nlohmann::json classifier_results_json(const ClassifierResults& r);

}  // namespace gujfont
