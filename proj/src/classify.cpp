#include "gujfont/classify.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numeric>
#include <functional>
#include <optional>
#include <sstream>

#include "gujfont/random.hpp"

namespace gujfont {

using nlohmann::json;

FeatureVector row_features(const DatasetRow& row) {
  FeatureVector v{};
  for (int i = 0; i < kFeatureLength; ++i) v[i] = static_cast<std::uint8_t>(row[i]);
  return v;
}

namespace {

void check_label(int label) {
  if (label < 1 || label > kNumClasses) throw Error("class label out of range: " + std::to_string(label));
}

// Index of the smallest label with the highest count.
int majority(const std::array<int, kNumClasses + 1>& votes) {
  int best = 0;
  for (int c = 1; c <= kNumClasses; ++c)
    if (best == 0 || votes[c] > votes[best]) best = c;
  return best;
}

int code_index(int code) { return code == kEndpoint ? 9 : code; }

}  // namespace

std::pair<Dataset, Dataset> split(const Dataset& ds, double test_fraction, std::uint64_t seed) {
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) throw Error("test fraction must be in (0, 1)");
  std::map<int, std::vector<std::size_t>> by_class;
  for (std::size_t i = 0; i < ds.size(); ++i) {
    check_label(row_label(ds[i]));
    by_class[row_label(ds[i])].push_back(i);
  }
  Rng rng(seed);
  std::vector<bool> is_test(ds.size(), false);
  for (auto& [label, idx] : by_class) {
    if (idx.size() < 2) throw Error("insufficient samples for class " + std::to_string(label));
    for (std::size_t i = idx.size(); i > 1; --i) std::swap(idx[i - 1], idx[rng.index(i)]);
    const auto n = static_cast<long>(idx.size());
    const long n_test = std::clamp(std::lround(test_fraction * static_cast<double>(n)), 1L, n - 1);
    for (long i = 0; i < n_test; ++i) is_test[idx[i]] = true;
  }
  Dataset train, test;
  for (std::size_t i = 0; i < ds.size(); ++i) (is_test[i] ? test : train).push_back(ds[i]);
  return {train, test};
}

const char* algo_name(Algo a) {
  switch (a) {
    case Algo::Knn: return "knn";
    case Algo::Tree: return "tree";
    case Algo::NaiveBayes: return "nb";
    case Algo::Forest: return "forest";
  }
  return "?";
}

Algo parse_algo(const std::string& name) {
  if (name == "knn") return Algo::Knn;
  if (name == "tree") return Algo::Tree;
  if (name == "nb") return Algo::NaiveBayes;
  if (name == "forest") return Algo::Forest;
  throw Error("unknown algorithm '" + name + "' (expected knn, tree, nb or forest)");
}

int DecisionTree::predict(const FeatureVector& v) const {
  if (nodes.empty()) throw Error("empty decision tree");
  int i = 0;
  while (nodes[i].feature >= 0) i = v[nodes[i].feature] == nodes[i].value ? nodes[i].match : nodes[i].other;
  return nodes[i].label;
}

namespace {

struct TreeBuilder {
  const Dataset& ds;
  int mtry;
  Rng rng;
  DecisionTree tree;

  std::array<int, kNumClasses + 1> votes(const std::vector<std::size_t>& rows) const {
    std::array<int, kNumClasses + 1> v{};
    for (auto r : rows) ++v[row_label(ds[r])];
    return v;
  }

  std::vector<int> candidate_features() {
    std::vector<int> f(kFeatureLength);
    std::iota(f.begin(), f.end(), 0);
    if (mtry <= 0 || mtry >= kFeatureLength) return f;
    for (int i = 0; i < mtry; ++i) std::swap(f[i], f[i + rng.index(kFeatureLength - i)]);
    f.resize(mtry);
    std::sort(f.begin(), f.end());
    return f;
  }

  int build(const std::vector<std::size_t>& rows) {
    const int id = static_cast<int>(tree.nodes.size());
    tree.nodes.emplace_back();
    const auto v = votes(rows);
    tree.nodes[id].label = majority(v);
    int present = 0;
    for (int c = 1; c <= kNumClasses; ++c) present += v[c] > 0;
    if (present <= 1) return id;

    // Maximise sum over sides of (sum_c n_c^2) / n_side, which is the same
    // as minimising weighted Gini impurity. Exact rational comparison keeps
    // tie-breaking (lowest feature, then lowest value) platform independent.
    long best_num = -1, best_den = 1;
    int best_f = -1, best_v = 0;
    for (int f : candidate_features()) {
      std::array<std::array<int, kNumClasses + 1>, 11> by_value{};
      std::array<int, 11> n_value{};
      for (auto r : rows) {
        ++by_value[ds[r][f]][row_label(ds[r])];
        ++n_value[ds[r][f]];
      }
      for (int val = 0; val <= 10; ++val) {
        const long n_in = n_value[val], n_out = static_cast<long>(rows.size()) - n_in;
        if (n_in == 0 || n_out == 0) continue;
        long sq_in = 0, sq_out = 0;
        for (int c = 1; c <= kNumClasses; ++c) {
          const long a = by_value[val][c], b = v[c] - a;
          sq_in += a * a;
          sq_out += b * b;
        }
        const long num = sq_in * n_out + sq_out * n_in, den = n_in * n_out;
        if (best_f < 0 || num * best_den > best_num * den) {
          best_num = num;
          best_den = den;
          best_f = f;
          best_v = val;
        }
      }
    }
    if (best_f < 0) return id;
    std::vector<std::size_t> in, out;
    for (auto r : rows) (ds[r][best_f] == best_v ? in : out).push_back(r);
    tree.nodes[id].feature = best_f;
    tree.nodes[id].value = best_v;
    const int m = build(in);
    tree.nodes[id].match = m;
    const int o = build(out);
    tree.nodes[id].other = o;
    return id;
  }
};

}  // namespace

DecisionTree fit_tree(const Dataset& ds, const std::vector<std::size_t>& rows, int mtry, std::uint64_t seed) {
  if (rows.empty()) throw Error("cannot fit a tree on no rows");
  TreeBuilder b{ds, mtry, Rng(seed), {}};
  b.build(rows);
  return std::move(b.tree);
}

Model train(const Dataset& ds, Algo algo, const Hyperparams& hp) {
  if (ds.empty()) throw Error("cannot train on an empty dataset");
  for (const auto& r : ds) check_label(row_label(r));
  Model m;
  m.algo = algo;
  m.hyper = hp;
  std::vector<std::size_t> all(ds.size());
  std::iota(all.begin(), all.end(), 0);
  switch (algo) {
    case Algo::Knn:
      if (hp.k < 1) throw Error("k must be at least 1");
      m.knn_rows = ds;
      break;
    case Algo::Tree:
      m.tree = fit_tree(ds, all, 0, hp.seed);
      break;
    case Algo::NaiveBayes: {
      std::map<int, std::size_t> slot;
      for (const auto& r : ds) slot.emplace(row_label(r), 0);
      for (auto& [label, s] : slot) {
        s = m.nb.classes.size();
        m.nb.classes.push_back(label);
      }
      m.nb.class_counts.assign(slot.size(), 0);
      m.nb.counts.assign(slot.size(), {});
      for (const auto& r : ds) {
        const std::size_t s = slot[row_label(r)];
        ++m.nb.class_counts[s];
        for (int f = 0; f < kFeatureLength; ++f) ++m.nb.counts[s][f][code_index(r[f])];
      }
      break;
    }
    case Algo::Forest: {
      if (hp.trees < 1) throw Error("forest needs at least one tree");
      for (int t = 0; t < hp.trees; ++t) {
        Rng rng(derive_seed(hp.seed, static_cast<std::uint64_t>(t)));
        std::vector<std::size_t> boot(ds.size());
        for (auto& b : boot) b = rng.index(ds.size());
        m.forest.push_back(fit_tree(ds, boot, hp.mtry, rng.next()));
      }
      break;
    }
  }
  return m;
}

int predict(const Model& m, const FeatureVector& v) {
  switch (m.algo) {
    case Algo::Knn: {
      std::vector<std::pair<int, std::size_t>> dist;
      dist.reserve(m.knn_rows.size());
      for (std::size_t i = 0; i < m.knn_rows.size(); ++i) {
        int d = 0;
        for (int f = 0; f < kFeatureLength; ++f) d += m.knn_rows[i][f] != v[f];
        dist.push_back({d, i});
      }
      const std::size_t k = std::min<std::size_t>(static_cast<std::size_t>(m.hyper.k), dist.size());
      std::partial_sort(dist.begin(), dist.begin() + static_cast<long>(k), dist.end());
      std::array<int, kNumClasses + 1> votes{};
      for (std::size_t i = 0; i < k; ++i) ++votes[row_label(m.knn_rows[dist[i].second])];
      return majority(votes);
    }
    case Algo::Tree:
      return m.tree.predict(v);
    case Algo::NaiveBayes: {
      const auto& nb = m.nb;
      double total = 0;
      for (int c : nb.class_counts) total += c;
      int best = 0;
      double best_lp = 0;
      for (std::size_t s = 0; s < nb.classes.size(); ++s) {
        const double n = nb.class_counts[s];
        double lp = std::log(n / total);
        for (int f = 0; f < kFeatureLength; ++f)
          lp += std::log((nb.counts[s][f][code_index(v[f])] + 1.0) / (n + 10.0));
        // classes are ascending, so strict > keeps the smaller label on ties
        if (best == 0 || lp > best_lp) {
          best = nb.classes[s];
          best_lp = lp;
        }
      }
      return best;
    }
    case Algo::Forest: {
      std::array<int, kNumClasses + 1> votes{};
      for (const auto& t : m.forest) ++votes[t.predict(v)];
      return majority(votes);
    }
  }
  throw Error("unknown algorithm");
}

namespace {

json tree_to_json(const DecisionTree& t) {
  json nodes = json::array();
  for (const auto& n : t.nodes) nodes.push_back({n.feature, n.value, n.match, n.other, n.label});
  return nodes;
}

DecisionTree tree_from_json(const json& j) {
  DecisionTree t;
  for (const auto& n : j) {
    if (!n.is_array() || n.size() != 5) throw Error("model: malformed tree node");
    t.nodes.push_back({n[0].get<int>(), n[1].get<int>(), n[2].get<int>(), n[3].get<int>(), n[4].get<int>()});
  }
  const int size = static_cast<int>(t.nodes.size());
  if (size == 0) throw Error("model: empty tree");
  for (const auto& n : t.nodes) {
    if (n.feature >= kFeatureLength || (n.feature >= 0 && (n.match <= 0 || n.match >= size || n.other <= 0 ||
                                                           n.other >= size)))
      throw Error("model: tree node out of range");
  }
  return t;
}

}  // namespace

json model_to_json(const Model& m) {
  json params;
  switch (m.algo) {
    case Algo::Knn: params["rows"] = m.knn_rows; break;
    case Algo::Tree: params["nodes"] = tree_to_json(m.tree); break;
    case Algo::NaiveBayes:
      params["classes"] = m.nb.classes;
      params["class_counts"] = m.nb.class_counts;
      params["counts"] = m.nb.counts;
      break;
    case Algo::Forest: {
      json trees = json::array();
      for (const auto& t : m.forest) trees.push_back(tree_to_json(t));
      params["trees"] = trees;
      break;
    }
  }
  return {{"format", "gujfont-model"},
          {"version", 1},
          {"algo", algo_name(m.algo)},
          {"seed", m.hyper.seed},
          {"hyperparameters", {{"k", m.hyper.k}, {"trees", m.hyper.trees}, {"mtry", m.hyper.mtry}}},
          {"parameters", params}};
}

Model model_from_json(const json& j) {
  try {
    if (j.at("format") != "gujfont-model") throw Error("not a gujfont model file");
    if (j.at("version") != 1) throw Error("unsupported model version");
    Model m;
    m.algo = parse_algo(j.at("algo").get<std::string>());
    m.hyper.seed = j.at("seed").get<std::uint64_t>();
    const auto& h = j.at("hyperparameters");
    m.hyper.k = h.at("k").get<int>();
    m.hyper.trees = h.at("trees").get<int>();
    m.hyper.mtry = h.at("mtry").get<int>();
    const auto& p = j.at("parameters");
    switch (m.algo) {
      case Algo::Knn:
        m.knn_rows = p.at("rows").get<Dataset>();
        if (m.knn_rows.empty()) throw Error("model: knn without rows");
        break;
      case Algo::Tree: m.tree = tree_from_json(p.at("nodes")); break;
      case Algo::NaiveBayes:
        m.nb.classes = p.at("classes").get<std::vector<int>>();
        m.nb.class_counts = p.at("class_counts").get<std::vector<int>>();
        m.nb.counts = p.at("counts").get<decltype(m.nb.counts)>();
        if (m.nb.classes.empty() || m.nb.class_counts.size() != m.nb.classes.size() ||
            m.nb.counts.size() != m.nb.classes.size())
          throw Error("model: inconsistent naive Bayes tables");
        break;
      case Algo::Forest:
        for (const auto& t : p.at("trees")) m.forest.push_back(tree_from_json(t));
        if (m.forest.empty()) throw Error("model: forest without trees");
        break;
    }
    return m;
  } catch (const json::exception& e) {
    throw Error(std::string("malformed model file: ") + e.what());
  }
}

EvalReport evaluate(const Model& m, const Dataset& test) {
  if (test.empty()) throw Error("cannot evaluate on an empty dataset");
  EvalReport r;
  for (const auto& row : test) {
    const int truth = row_label(row);
    check_label(truth);
    const int pred = predict(m, row_features(row));
    ++r.confusion[truth - 1][pred - 1];
  }
  std::size_t correct = 0;
  for (int c = 0; c < kNumClasses; ++c) {
    int support = 0;
    for (int p = 0; p < kNumClasses; ++p) support += r.confusion[c][p];
    correct += r.confusion[c][c];
    r.total += support;
    if (support > 0) r.per_class_accuracy[c + 1] = static_cast<double>(r.confusion[c][c]) / support;
  }
  r.overall_accuracy = static_cast<double>(correct) / static_cast<double>(r.total);
  return r;
}

json report_to_json(const EvalReport& r) {
  json per = json::object();
  for (const auto& [c, a] : r.per_class_accuracy) per[std::to_string(c)] = a;
  return {{"overall_accuracy", r.overall_accuracy},
          {"total", r.total},
          {"per_class_accuracy", per},
          {"confusion", r.confusion}};
}

namespace {

struct Column {
  const char* title;
  std::optional<Algo> algo;
};

const std::array<Column, 7>& columns() {
  static const std::array<Column, 7> cols = {{{"Decision Tree", Algo::Tree},
                                              {"Support Vector Machine", std::nullopt},
                                              {"KNN", Algo::Knn},
                                              {"Gradient Boost", std::nullopt},
                                              {"Logistic Regression", std::nullopt},
                                              {"Naive Bayes", Algo::NaiveBayes},
                                              {"Random Forest", Algo::Forest}}};
  return cols;
}

std::string fmt(double v) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(2) << v;
  return s.str();
}

std::string table(const std::string& title, const std::string& corner, const std::vector<std::string>& row_names,
                  const std::function<std::string(std::size_t, Algo)>& cell) {
  std::vector<std::vector<std::string>> grid;
  std::vector<std::string> head{corner};
  for (const auto& c : columns()) head.push_back(c.title);
  grid.push_back(head);
  for (std::size_t r = 0; r < row_names.size(); ++r) {
    std::vector<std::string> line{row_names[r]};
    for (const auto& c : columns()) line.push_back(c.algo ? cell(r, *c.algo) : "");
    grid.push_back(line);
  }
  std::vector<std::size_t> width(grid[0].size(), 0);
  for (const auto& line : grid)
    for (std::size_t i = 0; i < line.size(); ++i) width[i] = std::max(width[i], line[i].size());
  std::string out = title + "\n";
  for (const auto& line : grid) {
    std::string text;
    for (std::size_t i = 0; i < line.size(); ++i) {
      if (i) text += " | ";
      text += line[i] + std::string(width[i] - line[i].size(), ' ');
    }
    while (!text.empty() && text.back() == ' ') text.pop_back();
    out += text + "\n";
  }
  return out;
}

std::string class_table(const std::string& title, const std::map<Algo, EvalReport>& reports) {
  std::vector<std::string> rows;
  for (int c = 1; c <= kNumClasses; ++c) rows.push_back("Class " + std::to_string(c));
  rows.push_back("Accuracy");
  return table(title, "Class Label", rows, [&](std::size_t r, Algo a) -> std::string {
    auto it = reports.find(a);
    if (it == reports.end()) return "";
    if (r == kNumClasses) return fmt(it->second.overall_accuracy);
    auto pc = it->second.per_class_accuracy.find(static_cast<int>(r) + 1);
    return pc == it->second.per_class_accuracy.end() ? "" : fmt(pc->second);
  });
}

}  // namespace

std::string render_classifier_tables(const ClassifierResults& r) {
  std::string out = table("Testing and verification accuracy for stroke classification", "",
                          {"Testing Accuracy", "Validation Accuracy"}, [&](std::size_t row, Algo a) -> std::string {
                            const auto& src = row == 0 ? r.testing : r.verification;
                            auto it = src.find(a);
                            return it == src.end() ? "" : fmt(it->second.overall_accuracy);
                          });
  out += "\n" + class_table("Class-wise testing accuracy", r.testing);
  out += "\n" + class_table("Class-wise verification accuracy", r.verification);
  out += "\nBlank columns: classifier not implemented by this toolkit.\n";
  return out;
}

json classifier_results_json(const ClassifierResults& r) {
  json j = json::object();
  for (const auto& [a, rep] : r.testing) j[algo_name(a)]["testing"] = report_to_json(rep);
  for (const auto& [a, rep] : r.verification) j[algo_name(a)]["verification"] = report_to_json(rep);
  return j;
}

}  // namespace gujfont
