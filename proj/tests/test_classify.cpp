#include <doctest.h>

#include <cmath>
#include <filesystem>

#include "gujfont/classify.hpp"
#include "gujfont/image_io.hpp"
#include "gujfont/synth.hpp"
#include "support.hpp"

using namespace gujfont;

namespace {

DatasetRow make_row(std::initializer_list<std::pair<int, int>> set, int label) {
  DatasetRow r{};
  for (auto [i, v] : set) r[i] = v;
  r[kFeatureLength] = label;
  return r;
}

Dataset balanced(int per_class) {
  Dataset ds;
  for (int c = 1; c <= 6; ++c)
    for (int i = 0; i < per_class; ++i) ds.push_back(make_row({{0, c}, {1, i % 9}}, c));
  return ds;
}

// Ten rows driven by features 0 and 3.
Dataset trace_rows() {
  const int spec[10][3] = {{1, 0, 1}, {1, 0, 1}, {1, 2, 1}, {2, 0, 2}, {2, 0, 2},
                           {2, 2, 3}, {2, 2, 3}, {0, 2, 3}, {0, 0, 4}, {0, 0, 4}};
  Dataset ds;
  for (const auto& s : spec) ds.push_back(make_row({{0, s[0]}, {3, s[1]}}, s[2]));
  return ds;
}

// The tree fitted to trace_rows, traced by hand from the Gini scores.
int hand_trace(int f0, int f3) {
  if (f0 == 1) return 1;
  if (f3 == 0) return f0 == 0 ? 4 : 2;
  return 3;
}

}  // namespace

TEST_CASE("stratified split") {
  const Dataset ds = balanced(100);
  const auto [train, test] = split(ds, 0.2, 7);
  CHECK(train.size() == 480);
  CHECK(test.size() == 120);
  for (int c = 1; c <= 6; ++c) {
    CHECK(std::count_if(train.begin(), train.end(), [&](auto& r) { return row_label(r) == c; }) == 80);
    CHECK(std::count_if(test.begin(), test.end(), [&](auto& r) { return row_label(r) == c; }) == 20);
  }
  const auto again = split(ds, 0.2, 7);
  CHECK(again.first == train);
  CHECK(again.second == test);
  CHECK_THROWS_AS(split(ds, 0.0, 7), Error);
  CHECK_THROWS_AS(split(ds, 1.0, 7), Error);
  Dataset thin = ds;
  thin.push_back(make_row({}, 6));
  Dataset lonely{make_row({}, 1), make_row({}, 2), make_row({}, 2)};
  CHECK_THROWS_WITH_AS(split(lonely, 0.5, 1), doctest::Contains("insufficient samples"), Error);
}

TEST_CASE("knn") {
  const Dataset ds = balanced(5);
  Hyperparams hp;
  hp.k = 1;
  const Model m1 = train(ds, Algo::Knn, hp);
  for (const auto& r : ds) CHECK(predict(m1, row_features(r)) == row_label(r));
  CHECK(evaluate(m1, ds).overall_accuracy == 1.0);

  // Two neighbours of class 1 at distance 0 and 1, one of class 5 at 1.
  Dataset small{make_row({{0, 1}}, 1), make_row({{0, 1}, {1, 2}}, 1), make_row({{0, 1}, {2, 2}}, 5),
                make_row({{5, 3}, {6, 3}, {7, 3}}, 2)};
  const Model m3 = train(small, Algo::Knn);
  CHECK(predict(m3, row_features(make_row({{0, 1}}, 0 + 1))) == 1);

  // A two-way vote tie goes to the smaller label.
  Dataset tie{make_row({{0, 4}}, 4), make_row({{0, 3}}, 3)};
  Hyperparams hp2;
  hp2.k = 2;
  CHECK(predict(train(tie, Algo::Knn, hp2), FeatureVector{}) == 3);
}

TEST_CASE("single-class models predict that class") {
  Dataset one{make_row({{0, 2}}, 4), make_row({{3, 5}}, 4)};
  for (Algo a : {Algo::Knn, Algo::Tree, Algo::NaiveBayes, Algo::Forest}) {
    const Model m = train(one, a);
    CHECK(predict(m, FeatureVector{}) == 4);
    FeatureVector v{};
    v.fill(10);
    CHECK(predict(m, v) == 4);
  }
}

TEST_CASE("naive Bayes with add-one smoothing") {
  // Class 2 always has code 10 in slot 0; classes 1 and 3 never do.
  Dataset ds{make_row({}, 1), make_row({{4, 2}}, 1), make_row({{0, 10}}, 2), make_row({{0, 10}, {4, 2}}, 2),
             make_row({{0, 3}}, 3), make_row({{0, 3}, {4, 2}}, 3)};
  FeatureVector q{};
  q[0] = 10;
  // Posterior by hand: equal priors 1/3, each class has 2 rows, so every
  // likelihood is (count + 1) / 12. Only slot 0 differs between classes:
  // class 2 sees 3/12 there, classes 1 and 3 see 1/12.
  auto log_post = [&](int slot0_count) {
    return std::log(2.0 / 6) + std::log((slot0_count + 1) / 12.0) + std::log(2 / 12.0) + 23 * std::log(3 / 12.0);
  };
  CHECK(log_post(2) > log_post(0));
  const Model m = train(ds, Algo::NaiveBayes);
  CHECK(predict(m, q) == 2);
  FeatureVector other{};
  other[0] = 3;
  CHECK(predict(m, other) == 3);
}

TEST_CASE("decision tree structure matches the hand trace") {
  const Dataset ds = trace_rows();
  const Model m = train(ds, Algo::Tree);
  const std::vector<TreeNode> expected = {
      {0, 1, 1, 2, 1}, {-1, 0, -1, -1, 1}, {3, 0, 3, 6, 3}, {0, 0, 4, 5, 2},
      {-1, 0, -1, -1, 4}, {-1, 0, -1, -1, 2}, {-1, 0, -1, -1, 3},
  };
  CHECK(m.tree.nodes == expected);
  for (int f0 : {0, 1, 2, 7})
    for (int f3 : {0, 2, 5}) {
      FeatureVector v{};
      v[0] = static_cast<std::uint8_t>(f0);
      v[3] = static_cast<std::uint8_t>(f3);
      CHECK(predict(m, v) == hand_trace(f0, f3));
    }
}

TEST_CASE("forest is seeded and serialisation round-trips") {
  const Dataset ds = synthesize_dataset(6, 3);
  Hyperparams hp;
  hp.seed = 11;
  const Model a = train(ds, Algo::Forest, hp);
  const Model b = train(ds, Algo::Forest, hp);
  CHECK(a == b);
  CHECK(a.forest.size() == 25);
  hp.seed = 12;
  CHECK_FALSE(train(ds, Algo::Forest, hp) == a);
  for (Algo algo : {Algo::Knn, Algo::Tree, Algo::NaiveBayes, Algo::Forest}) {
    const Model m = train(ds, algo);
    const auto text = model_to_json(m).dump();
    const Model back = model_from_json(nlohmann::json::parse(text));
    CHECK(back == m);
    for (const auto& r : ds) CHECK(predict(back, row_features(r)) == predict(m, row_features(r)));
  }
  CHECK_THROWS_AS(parse_algo("svm"), Error);
  CHECK_THROWS_AS(model_from_json(nlohmann::json::parse(R"({"format":"x"})")), Error);
}

TEST_CASE("evaluation report identities") {
  const Dataset ds = balanced(4);
  const Model perfect = train(ds, Algo::Knn, Hyperparams{1, 25, 5, 42});
  const auto r = evaluate(perfect, ds);
  CHECK(r.overall_accuracy == 1.0);
  for (const auto& [c, a] : r.per_class_accuracy) CHECK(a == 1.0);

  Dataset constant_train{make_row({}, 2), make_row({{1, 1}}, 2)};
  const auto rc = evaluate(train(constant_train, Algo::Tree), ds);
  CHECK(rc.overall_accuracy == doctest::Approx(1.0 / 6));

  const Dataset noisy = synthesize_dataset(4, 9);
  const auto rn = evaluate(train(balanced(3), Algo::NaiveBayes), noisy);
  int trace = 0, sum = 0;
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j) {
      sum += rn.confusion[i][j];
      trace += i == j ? rn.confusion[i][j] : 0;
    }
  CHECK(rn.overall_accuracy == doctest::Approx(static_cast<double>(trace) / sum));
  CHECK(rn.total == noisy.size());
}

TEST_CASE("report tables have the comparison layout") {
  ClassifierResults res;
  const Dataset ds = balanced(3);
  res.testing[Algo::Knn] = evaluate(train(ds, Algo::Knn, Hyperparams{1, 25, 5, 42}), ds);
  res.verification[Algo::Knn] = res.testing[Algo::Knn];
  const auto text = render_classifier_tables(res);
  CHECK(text.find("Decision Tree | Support Vector Machine | KNN") != std::string::npos);
  CHECK(text.find("Class 6") != std::string::npos);
  CHECK(text.find("Validation Accuracy") != std::string::npos);
  CHECK(text.find("Blank columns") != std::string::npos);
  CHECK(classifier_results_json(res)["knn"]["testing"]["overall_accuracy"] == 1.0);
}

TEST_CASE("synthetic dataset") {
  const Dataset a = synthesize_dataset(10, 42);
  CHECK(a.size() == 60);
  CHECK(synthesize_dataset(10, 42) == a);
  CHECK_FALSE(synthesize_dataset(10, 43) == a);
  for (int c = 1; c <= 6; ++c)
    CHECK(std::count_if(a.begin(), a.end(), [&](auto& r) { return row_label(r) == c; }) == 10);

  const Dataset z = synthesize_dataset(3, 1, false);
  for (int c = 0; c < 6; ++c) {
    CHECK(z[c * 3] == z[c * 3 + 1]);
    for (int d = 0; d < c; ++d) CHECK_FALSE(row_features(z[c * 3]) == row_features(z[d * 3]));
  }
  for (Algo algo : {Algo::Knn, Algo::Tree, Algo::NaiveBayes, Algo::Forest})
    CHECK(evaluate(train(z, algo), z).overall_accuracy == 1.0);
}

TEST_CASE("bundled reference strokes match the renderer") {
  for (int c = 1; c <= 6; ++c) {
    const auto path = testsupport::data_path("reference_strokes/class_" + std::to_string(c) + ".png");
    REQUIRE(std::filesystem::exists(path));
    CHECK(read_binary(path) == render_reference(c));
  }
}
