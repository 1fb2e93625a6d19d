#include "cli.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <ostream>
#include <regex>

#include <CLI11.hpp>
#include <json.hpp>

#include "gujfont/classify.hpp"
#include "gujfont/compose.hpp"
#include "gujfont/features.hpp"
#include "gujfont/image_io.hpp"
#include "gujfont/pipeline.hpp"
#include "gujfont/synth.hpp"

namespace gujfont {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct RunConfig {
  std::string input;
  std::string out;
  std::string layout = "1x3";
  std::string chars;
  std::string algo = "knn";
  int k = 3;
  int trees = 25;
  int mtry = 5;
  std::uint64_t seed = 42;
  std::string rules;
  std::string model;
  std::string seeds;
  std::string report;
  double epsilon = 2.0;
  std::string family_name = "Handwriting";
  int per_class = 100;
  double test_fraction = 0.2;
  std::uint64_t verify_seed = 4242;
  std::int64_t scramble = -1;
};

struct Command {
  CLI::App* app = nullptr;
  std::function<json(const RunConfig&, std::ostream&, std::ostream&)> run;
  bool out_is_dir = false;
};

void need(const std::string& value, const char* flag) {
  if (value.empty()) throw Error(std::string("missing required option --") + flag);
}

void need_path(const std::string& value, const char* flag) {
  need(value, flag);
  if (!fs::exists(value)) throw Error(std::string("--") + flag + " path does not exist: " + value);
}

Hyperparams hyper(const RunConfig& c) {
  if (c.k < 1) throw Error("--k must be at least 1");
  if (c.trees < 1) throw Error("--trees must be at least 1");
  return {c.k, c.trees, c.mtry, c.seed};
}

Model load_model(const std::string& path) {
  need_path(path, "model");
  try {
    return model_from_json(json::parse(read_file(path)));
  } catch (const json::exception& e) {
    throw Error("bad model file " + path + ": " + e.what());
  }
}

// u0AXX.png or u0AXX_<anything>.png
std::map<char32_t, std::vector<fs::path>> images_by_char(const fs::path& dir) {
  static const std::regex re(R"(u([0-9A-Fa-f]{4,6})(_[^.]*)?\.png)");
  std::map<char32_t, std::vector<fs::path>> out;
  for (const auto& e : fs::directory_iterator(dir)) {
    std::smatch m;
    const std::string name = e.path().filename().string();
    if (std::regex_match(name, m, re)) out[static_cast<char32_t>(std::stoul(m[1], nullptr, 16))].push_back(e.path());
  }
  for (auto& [cp, v] : out) std::sort(v.begin(), v.end());
  return out;
}

std::string file_stem(char32_t cp) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "u%04X", static_cast<unsigned>(cp));
  return buf;
}

bool selected(const std::vector<char32_t>& chars, char32_t cp) {
  return chars.empty() || std::find(chars.begin(), chars.end(), cp) != chars.end();
}

json cmd_sheet_segment(const RunConfig& c, std::ostream& out, std::ostream& err) {
  need_path(c.input, "input");
  need(c.out, "out");
  need(c.chars, "chars");
  const auto [rows, cols] = parse_layout(c.layout);
  SheetLayout layout{rows, cols, parse_char_list(c.chars)};
  const auto res = ingest_sheet(read_gray(c.input), layout);
  fs::create_directories(c.out);
  json crops = json::array();
  for (const auto& [cp, img] : res.crops) {
    const auto name = file_stem(cp) + ".png";
    write_png(fs::path(c.out) / name, img);
    crops.push_back({{"char", codepoint_label(cp)}, {"file", name}, {"width", img.width()}, {"height", img.height()}});
    out << codepoint_label(cp) << " -> " << name << " (" << img.width() << "x" << img.height() << ")\n";
  }
  for (const auto& w : res.warnings) err << "warning: " << w << "\n";
  return {{"crops", crops}, {"warnings", res.warnings}};
}

json cmd_stroke_extract(const RunConfig& c, std::ostream& out, std::ostream& err) {
  need_path(c.input, "input");
  need(c.out, "out");
  const Model model = load_model(c.model);
  const auto chars = parse_char_list(c.chars);
  std::vector<SeedCharacter> seeds;
  for (const auto& [cp, files] : images_by_char(c.input))
    if (selected(chars, cp)) seeds.push_back({cp, read_binary(files.front())});
  if (seeds.empty()) throw Error("no seed images (u0AXX.png) in " + c.input);
  const StrokeBank bank = build_bank(seeds, model);
  save_bank(bank, c.out);
  json classes = json::object();
  for (const auto& [cls, v] : bank.strokes) {
    classes[std::to_string(cls)] = v.size();
    out << "class " << cls << ": " << v.size() << " stroke(s)\n";
  }
  const auto missing = bank.missing_classes();
  for (int m : missing) err << "warning: no stroke of class " << m << "\n";
  out << "pen width " << bank.pen_width << " px\n";
  return {{"seeds", seeds.size()}, {"classes", classes}, {"missing_classes", missing}, {"pen_width", bank.pen_width}};
}

json cmd_dataset_synth(const RunConfig& c, std::ostream& out, std::ostream&) {
  need(c.out, "out");
  const Dataset ds = synthesize_dataset(c.per_class, c.seed);
  write_file_atomic(c.out, dataset_csv(ds));
  out << "wrote " << ds.size() << " rows to " << c.out << "\n";
  return {{"rows", ds.size()}, {"per_class", c.per_class}, {"seed", c.seed}};
}

Dataset load_dataset(const std::string& path) {
  need_path(path, "input");
  return parse_dataset_csv(read_file(path));
}

json cmd_model_train(const RunConfig& c, std::ostream& out, std::ostream&) {
  need(c.out, "out");
  const Dataset ds = load_dataset(c.input);
  const Algo algo = parse_algo(c.algo);
  const auto [train_set, test_set] = split(ds, c.test_fraction, c.seed);
  const Model m = train(train_set, algo, hyper(c));
  const EvalReport rep = evaluate(m, test_set);
  write_file_atomic(c.out, model_to_json(m).dump(1) + "\n");
  char line[128];
  std::snprintf(line, sizeof line, "%s: trained on %zu rows, test accuracy %.4f on %zu rows\n", algo_name(algo),
                train_set.size(), rep.overall_accuracy, test_set.size());
  out << line;
  return {{"algo", algo_name(algo)}, {"train_rows", train_set.size()}, {"test", report_to_json(rep)}};
}

json cmd_model_eval(const RunConfig& c, std::ostream& out, std::ostream&) {
  const Dataset ds = load_dataset(c.input);
  if (!c.model.empty()) {
    const Model m = load_model(c.model);
    const EvalReport rep = evaluate(m, ds);
    ClassifierResults r;
    r.testing[m.algo] = rep;
    r.verification[m.algo] = rep;
    out << render_classifier_tables(r);
    return {{"algo", algo_name(m.algo)}, {"evaluation", report_to_json(rep)}};
  }
  const auto [train_set, test_set] = split(ds, c.test_fraction, c.seed);
  const Dataset verify = synthesize_dataset(10, c.verify_seed);
  ClassifierResults r;
  for (Algo a : {Algo::Tree, Algo::Knn, Algo::NaiveBayes, Algo::Forest}) {
    const Model m = train(train_set, a, hyper(c));
    r.testing[a] = evaluate(m, test_set);
    r.verification[a] = evaluate(m, verify);
  }
  out << render_classifier_tables(r);
  json j = classifier_results_json(r);
  j["train_rows"] = train_set.size();
  j["test_rows"] = test_set.size();
  j["verification_rows"] = verify.size();
  return j;
}

json cmd_rules_learn(const RunConfig& c, std::ostream& out, std::ostream& err) {
  need_path(c.input, "input");
  need(c.out, "out");
  const Model model = load_model(c.model);
  const auto chars = parse_char_list(c.chars);
  RuleSet rs;
  rs.source = "learned from " + fs::path(c.input).filename().string();
  json failures = json::array();
  for (const auto& [cp, files] : images_by_char(c.input)) {
    if (!selected(chars, cp)) continue;
    try {
      std::vector<CharacterSample> samples;
      for (const auto& f : files) samples.push_back(sample_from_glyph(read_binary(f), model));
      auto rule = derive_rule(samples, cp);
      rule.name = utf8(cp);
      out << codepoint_label(cp) << ": " << samples.size() << " sample(s), " << rule.variants.size()
          << " variant(s)\n";
      rs.rules[cp] = rule;
    } catch (const Error& e) {
      err << "error: " << codepoint_label(cp) << ": " << e.what() << "\n";
      failures.push_back({{"char", codepoint_label(cp)}, {"error", e.what()}});
    }
  }
  if (rs.rules.empty() && failures.empty()) throw Error("no glyph samples (u0AXX_*.png) in " + c.input);
  write_file_atomic(c.out, save_ruleset(rs));
  json j = {{"characters", rs.rules.size()}, {"failures", failures}};
  if (!failures.empty()) j["error"] = std::to_string(failures.size()) + " character(s) failed";
  return j;
}

json cmd_rules_validate(const RunConfig& c, std::ostream& out, std::ostream&) {
  const std::string path = c.rules.empty() ? c.input : c.rules;
  need_path(path, "rules");
  const RuleSet rs = load_ruleset_file(path);
  json chars = json::array();
  for (const auto& [cp, rule] : rs.rules) chars.push_back(codepoint_label(cp));
  out << path << ": " << rs.rules.size() << " character rule(s), valid\n";
  return {{"characters", chars}, {"count", rs.rules.size()}};
}

json cmd_glyph_generate(const RunConfig& c, std::ostream& out, std::ostream&) {
  need_path(c.input, "input");
  need(c.out, "out");
  need_path(c.rules, "rules");
  const StrokeBank bank = load_bank(c.input);
  const RuleSet rules = load_ruleset_file(c.rules);
  const auto chars = parse_char_list(c.chars);
  RuleSet chosen;
  chosen.version = rules.version;
  chosen.source = rules.source;
  for (const auto& [cp, r] : rules.rules)
    if (selected(chars, cp)) chosen.rules[cp] = r;

  std::vector<GlyphRaster> glyphs = generate_all(bank, chosen);
  for (const auto& [cp, r] : chosen.rules)
    for (int v = 1; v < static_cast<int>(r.variants.size()); ++v) glyphs.push_back(generate_character(cp, bank, chosen, v));

  fs::create_directories(c.out);
  json manifest = json::array();
  for (const auto& g : glyphs) {
    const auto name = glyph_file_name(g.codepoint, g.variant);
    write_png(fs::path(c.out) / name, g.raster);
    manifest.push_back({{"char", codepoint_label(g.codepoint)},
                        {"variant", g.variant},
                        {"classes", g.classes},
                        {"file", name},
                        {"components", connected_components(g.raster).size()}});
  }
  if (!c.seeds.empty()) {
    for (const auto& [cp, files] : images_by_char(c.seeds)) {
      const auto name = glyph_file_name(cp, 0);
      write_png(fs::path(c.out) / name, seed_glyph(read_binary(files.front())));
      manifest.push_back({{"char", codepoint_label(cp)}, {"variant", 0}, {"seed", true}, {"file", name}});
    }
  }
  write_file_atomic(fs::path(c.out) / "manifest.json", manifest.dump(2) + "\n");
  out << "wrote " << manifest.size() << " glyph(s) to " << c.out << "\n";
  return {{"glyphs", manifest.size()}, {"generated", glyphs.size()}};
}

std::string font_file_stem(const std::string& family) {
  std::string s;
  for (char ch : family) s += std::isalnum(static_cast<unsigned char>(ch)) ? ch : '_';
  return s.empty() ? "font" : s;
}

json cmd_font_build(const RunConfig& c, std::ostream& out, std::ostream&) {
  need_path(c.input, "input");
  need(c.out, "out");
  const FontBuild fb = build_font(fs::path(c.input), c.family_name, c.epsilon);
  fs::create_directories(fs::path(c.out) / "svgs");
  const auto sfd_name = font_file_stem(c.family_name) + ".sfd";
  write_file_atomic(fs::path(c.out) / sfd_name, export_sfd(fb.project));
  for (const auto& [cp, svg] : fb.svgs) write_file_atomic(fs::path(c.out) / "svgs" / (file_stem(cp) + ".svg"), svg);
  out << "wrote " << sfd_name << " with " << fb.project.glyphs.size() << " glyph(s)\n";
  std::size_t points = 0;
  for (const auto& [cp, g] : fb.project.glyphs)
    for (const auto& ct : g.contours) points += ct.points.size();
  return {{"sfd", sfd_name}, {"glyphs", fb.project.glyphs.size()}, {"points", points}, {"epsilon", c.epsilon}};
}

json cmd_eval_roundtrip(const RunConfig& c, std::ostream& out, std::ostream&) {
  need_path(c.input, "input");
  need_path(c.rules, "rules");
  RuleSet rules = load_ruleset_file(c.rules);
  if (c.scramble >= 0) rules = scramble_ruleset(rules, static_cast<std::uint64_t>(c.scramble));
  const Model model = load_model(c.model);
  const auto rep = run_roundtrip_eval(c.input, rules, model);
  out << roundtrip_table(rep);
  json j = roundtrip_json(rep);
  if (c.scramble >= 0) j["scramble_seed"] = c.scramble;
  return j;
}

// Adds config-file values as flags unless the command line already has them.
std::vector<std::string> merge_config(const std::vector<std::string>& args) {
  std::string path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
    if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
  }
  if (path.empty()) return args;
  json cfg;
  try {
    cfg = json::parse(read_file(path));
  } catch (const json::exception& e) {
    throw Error("bad config file " + path + ": " + e.what());
  }
  if (!cfg.is_object()) throw Error("config file must hold a JSON object");
  std::vector<std::string> merged = args;
  for (const auto& [key, value] : cfg.items()) {
    const std::string flag = "--" + key;
    const bool given = std::any_of(args.begin(), args.end(), [&](const std::string& a) {
      return a == flag || a.rfind(flag + "=", 0) == 0;
    });
    if (given) continue;
    merged.push_back(flag);
    merged.push_back(value.is_string() ? value.get<std::string>() : value.dump());
  }
  return merged;
}

}  // namespace

int run_cli(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Handwritten Gujarati glyph and font generator"};
  app.require_subcommand(1);
  std::vector<Command> commands;

  auto leaf = [&](CLI::App* group, const std::string& name, const std::string& help, auto fn, bool dir) {
    CLI::App* sub = group->add_subcommand(name, help);
    sub->add_option("--input", cfg.input, "input file or directory");
    sub->add_option("--out", cfg.out, "output file or directory");
    sub->add_option("--seed", cfg.seed, "random seed")->capture_default_str();
    sub->add_option("--report", cfg.report, "JSON report path");
    sub->add_option("--config", "JSON config; flags override it");
    commands.push_back({sub, fn, dir});
    return sub;
  };

  auto* sheet = app.add_subcommand("sheet", "scanned input sheets")->require_subcommand(1);
  auto* seg = leaf(sheet, "segment", "split a scanned sheet into character crops", cmd_sheet_segment, true);
  seg->add_option("--layout", cfg.layout, "grid as RxC")->capture_default_str();
  seg->add_option("--chars", cfg.chars, "expected characters in cell order");

  auto* stroke = app.add_subcommand("stroke", "stroke bank")->require_subcommand(1);
  auto* ext = leaf(stroke, "extract", "extract and label strokes from seed images", cmd_stroke_extract, true);
  ext->add_option("--model", cfg.model, "trained model JSON");
  ext->add_option("--chars", cfg.chars, "restrict to these characters");

  auto* dataset = app.add_subcommand("dataset", "stroke datasets")->require_subcommand(1);
  auto* syn = leaf(dataset, "synth", "synthesize a labelled stroke dataset", cmd_dataset_synth, false);
  syn->add_option("--per-class", cfg.per_class, "rows per class")->capture_default_str();

  auto* model = app.add_subcommand("model", "stroke classifiers")->require_subcommand(1);
  for (auto [name, help, fn] : {std::tuple{"train", "train a classifier", cmd_model_train},
                                std::tuple{"eval", "evaluate classifiers", cmd_model_eval}}) {
    auto* sub = leaf(model, name, help, fn, false);
    sub->add_option("--algo", cfg.algo, "knn, tree, nb or forest")->capture_default_str();
    sub->add_option("--k", cfg.k, "neighbours for knn")->capture_default_str();
    sub->add_option("--trees", cfg.trees, "forest size")->capture_default_str();
    sub->add_option("--mtry", cfg.mtry, "features tried per forest split")->capture_default_str();
    sub->add_option("--test-fraction", cfg.test_fraction, "held-out fraction")->capture_default_str();
    if (std::string(name) == "eval") {
      sub->add_option("--model", cfg.model, "evaluate this model on --input instead");
      sub->add_option("--verify-seed", cfg.verify_seed, "seed of the 10-per-class verification set")
          ->capture_default_str();
    }
  }

  auto* rules = app.add_subcommand("rules", "composition rules")->require_subcommand(1);
  auto* learn = leaf(rules, "learn", "derive rules from sample glyph images", cmd_rules_learn, false);
  learn->add_option("--model", cfg.model, "trained model JSON");
  learn->add_option("--chars", cfg.chars, "restrict to these characters");
  auto* validate = leaf(rules, "validate", "check a ruleset file", cmd_rules_validate, false);
  validate->add_option("--rules", cfg.rules, "ruleset JSON");

  auto* glyph = app.add_subcommand("glyph", "glyph generation")->require_subcommand(1);
  auto* gen = leaf(glyph, "generate", "compose glyphs from a stroke bank (--input)", cmd_glyph_generate, true);
  gen->add_option("--rules", cfg.rules, "ruleset JSON");
  gen->add_option("--chars", cfg.chars, "restrict to these characters");
  gen->add_option("--seeds", cfg.seeds, "seed images to include as glyphs");

  auto* font = app.add_subcommand("font", "font export")->require_subcommand(1);
  auto* build = leaf(font, "build", "trace glyph images into SFD and SVG", cmd_font_build, true);
  build->add_option("--epsilon", cfg.epsilon, "simplification tolerance in em units")->capture_default_str();
  build->add_option("--family-name", cfg.family_name, "font family")->capture_default_str();

  auto* ev = app.add_subcommand("eval", "evaluation")->require_subcommand(1);
  auto* rt = leaf(ev, "roundtrip", "re-extract strokes from generated glyphs", cmd_eval_roundtrip, false);
  rt->add_option("--rules", cfg.rules, "ruleset JSON");
  rt->add_option("--model", cfg.model, "trained model JSON");
  rt->add_option("--scramble", cfg.scramble, "compare against a class-scrambled ruleset with this seed");

  std::vector<std::string> args;
  try {
    args = merge_config(raw_args);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return 0;
  } catch (const CLI::CallForAllHelp& e) {
    app.exit(e, out, err);
    return 0;
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? 2 : 2;
  }

  for (const auto& cmd : commands) {
    if (!cmd.app->parsed()) continue;
    json report;
    int code = 0;
    try {
      report = cmd.run(cfg, out, err);
      if (report.contains("error")) {
        err << "error: " << report["error"].get<std::string>() << "\n";
        code = 1;
      }
    } catch (const std::exception& e) {
      err << "error: " << e.what() << "\n";
      report = {{"error", e.what()}};
      code = 1;
    }
    report["command"] = cmd.app->get_parent()->get_name() + " " + cmd.app->get_name();
    report["ok"] = code == 0;
    fs::path rpath = cfg.report;
    if (rpath.empty() && !cfg.out.empty())
      rpath = cmd.out_is_dir ? fs::path(cfg.out) / "report.json" : fs::path(cfg.out + ".report.json");
    if (!rpath.empty()) {
      try {
        if (rpath.has_parent_path()) fs::create_directories(rpath.parent_path());
        write_file_atomic(rpath, report.dump(2) + "\n");
      } catch (const std::exception& e) {
        err << "error: cannot write report: " << e.what() << "\n";
        code = 1;
      }
    } else {
      out << report.dump(2) << "\n";
    }
    return code;
  }
  err << "error: no command given\n";
  return 2;
}

}  // namespace gujfont
