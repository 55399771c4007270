#include "cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string_view>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "stylo/changepoint.hpp"
#include "stylo/corpus.hpp"
#include "stylo/error.hpp"
#include "stylo/eval.hpp"
#include "stylo/fusion.hpp"
#include "stylo/parallel.hpp"
#include "stylo/random.hpp"
#include "stylo/stylocpa.hpp"
#include "stylo/synthetic.hpp"
#include "stylo/textstats.hpp"

namespace stylo::cli {

void Config::validate() const {
  check_gamma(gamma);
  if (mttr_window == 0) throw ConfigError("mttr-window must be positive");
  if (min_seg == 0) throw ConfigError("min-seg must be positive");
  if (jobs == 0) throw ConfigError("jobs must be positive");
  (void)penalty_rule();
  hyperparams.validate();
}

PenaltyRule Config::penalty_rule() const {
  if (penalty == "auto") return PenaltyRule::automatic();
  double value = 0.0;
  const char* end = penalty.data() + penalty.size();
  const auto [ptr, ec] = std::from_chars(penalty.data(), end, value);
  if (ec != std::errc{} || ptr != end || !std::isfinite(value) || value < 0.0) {
    throw ConfigError("penalty must be 'auto' or a non-negative number, got '" + penalty + "'");
  }
  return PenaltyRule::constant(value);
}

namespace {

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Writes to the named file, or to `out` when no path was given.
void emit(const std::string& path, const std::string& content, std::ostream& out) {
  if (path.empty()) {
    out << content;
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw InputError("cannot open '" + path + "' for writing");
  file << content;
  if (!file) throw InputError("failed writing '" + path + "'");
}

std::string dump(const nlohmann::json& j) { return j.dump(2) + "\n"; }

DetectOptions detect_options(const Config& c) {
  DetectOptions o;
  o.gamma = c.gamma;
  o.penalty = c.penalty_rule();
  o.min_seg = c.min_seg;
  o.seed = c.seed;
  return o;
}

std::optional<EmbeddingTable> load_embeddings(const std::string& path) {
  if (path.empty()) return std::nullopt;
  return EmbeddingTable::load_csv(path);
}

// Timelines whose tweets share one label, as classifier examples. The
// embedding is looked up by timeline id when a table is given.
std::vector<Example> labeled_examples(const std::vector<Timeline>& timelines,
                                      const EmbeddingTable* embeddings, std::size_t window,
                                      std::size_t jobs) {
  std::vector<const Timeline*> usable;
  for (const auto& tl : timelines) {
    if (tl.uniform_label()) usable.push_back(&tl);
  }
  return parallel_map(usable.size(), jobs, [&](std::size_t i) {
    const Timeline& tl = *usable[i];
    Example ex;
    ex.style = extract(tl.joined_text(), window);
    ex.label = *tl.uniform_label();
    if (embeddings) {
      const auto v = embeddings->lookup(tl.id);
      ex.embedding.assign(v.begin(), v.end());
    }
    return ex;
  });
}

// "path" or "path:column", where column is a header name or 0-based index.
// A path that exists as given is never split.
std::vector<double> read_series(const std::string& spec) {
  std::string path = spec;
  std::string column;
  if (!std::filesystem::exists(spec)) {
    const auto colon = spec.rfind(':');
    if (colon != std::string::npos) {
      path = spec.substr(0, colon);
      column = spec.substr(colon + 1);
    }
  }
  std::ifstream in(path);
  if (!in) throw InputError("cannot open series file '" + path + "'");

  auto split = [](const std::string& line) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      while (!cell.empty() && (cell.back() == '\r' || cell.back() == ' ')) cell.pop_back();
      while (!cell.empty() && cell.front() == ' ') cell.erase(cell.begin());
      cells.push_back(cell);
    }
    return cells;
  };
  auto parse = [](const std::string& cell, double& v) {
    const char* end = cell.data() + cell.size();
    const auto [ptr, ec] = std::from_chars(cell.data(), end, v);
    return ec == std::errc{} && ptr == end && !cell.empty();
  };

  std::vector<double> values;
  std::optional<std::size_t> index;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto cells = split(line);
    if (cells.empty() || (cells.size() == 1 && cells[0].empty())) continue;
    if (!index) {
      std::size_t parsed = 0;
      const auto [ptr, ec] = std::from_chars(column.data(), column.data() + column.size(), parsed);
      const bool numeric_column = !column.empty() && ec == std::errc{} && ptr == column.data() + column.size();
      double probe = 0.0;
      if (numeric_column || column.empty()) index = column.empty() ? 0 : parsed;
      if (index && *index < cells.size() && parse(cells[*index], probe)) {
        // Header-less file; fall through to read this row as data.
      } else {
        if (!numeric_column && !column.empty()) {
          const auto it = std::find(cells.begin(), cells.end(), column);
          if (it == cells.end()) throw InputError("column '" + column + "' not found in '" + path + "'");
          index = static_cast<std::size_t>(it - cells.begin());
        }
        continue;
      }
    }
    double v = 0.0;
    if (*index >= cells.size() || !parse(cells[*index], v)) {
      throw ParseError("non-numeric value in series column", line_no, path);
    }
    values.push_back(v);
  }
  if (values.empty()) throw InputError("series file '" + path + "' has no values");
  return values;
}

int cmd_features(const Config& c, const std::string& input, bool per_timeline,
                 const std::string& output, std::ostream& out) {
  const auto timelines = load_jsonl(input);
  struct Unit {
    const std::string* text;
    std::string id;
  };
  std::vector<std::string> joined;
  std::vector<Unit> units;
  if (per_timeline) {
    joined.reserve(timelines.size());
    for (const auto& tl : timelines) joined.push_back(tl.joined_text());
    for (std::size_t i = 0; i < timelines.size(); ++i) units.push_back({&joined[i], timelines[i].id});
  } else {
    for (const auto& tl : timelines) {
      for (std::size_t t = 0; t < tl.size(); ++t) units.push_back({&tl.tweets[t].text, tl.id + ":" + std::to_string(t)});
    }
  }
  const auto rows = parallel_map(units.size(), c.jobs, [&](std::size_t i) {
    const StyloVector v = extract(*units[i].text, c.mttr_window);
    std::string row = units[i].id;
    for (double x : v.values) row += "," + format_double(x);
    return row + "\n";
  });
  std::string csv = "id";
  for (const auto& name : feature_names()) csv += "," + std::string(name);
  csv += "\n";
  for (const auto& r : rows) csv += r;
  emit(output, csv, out);
  return kExitOk;
}

int cmd_cpd(const Config& c, const std::string& series_spec, bool exact, const std::string& output,
            std::ostream& out) {
  const Series s(read_series(series_spec));
  const PenaltyRule rule = c.penalty_rule();
  const double penalty = rule.is_automatic() ? (s.size() >= 2 ? default_penalty(s) : 0.0) : rule.for_row(0, s);
  const Segmentation seg = exact ? brute_force_optimal(s, penalty, c.min_seg) : pelt(s, penalty, c.min_seg);
  nlohmann::json j;
  j["n"] = s.size();
  j["penalty"] = penalty;
  j["min_seg"] = c.min_seg;
  j["method"] = exact ? "exact" : "pelt";
  j["breakpoints"] = seg.breakpoints;
  j["total_cost"] = seg.total_cost;
  emit(output, dump(j), out);
  return kExitOk;
}

int cmd_localize(const Config& c, const std::string& input, const std::string& report,
                 std::ostream& out) {
  const auto timelines = load_jsonl(input);
  const LocalizationRun run = run_localization(timelines, detect_options(c), c.mttr_window, c.jobs);
  nlohmann::json j;
  j["gamma"] = c.gamma;
  j["seed"] = c.seed;
  j["penalty"] = c.penalty;
  j["min_seg"] = c.min_seg;
  j["mttr_window"] = c.mttr_window;
  j["feature_names"] = nlohmann::json::array();
  for (const auto& name : feature_names()) j["feature_names"].push_back(std::string(name));
  j["timelines"] = nlohmann::json::array();
  for (std::size_t i = 0; i < timelines.size(); ++i) {
    nlohmann::json entry = to_json(run.reports[i]);
    entry["id"] = timelines[i].id;
    j["timelines"].push_back(std::move(entry));
  }
  emit(report, dump(j), out);
  return kExitOk;
}

struct SynthArgs {
  std::string mode;
  std::optional<std::size_t> n;
  std::size_t budget = 5000;
  std::size_t count = 250;
  std::string human_pool;
  std::string ai_pool;
  std::size_t pool_size = 2000;
  std::string topic = "covid";
  std::string source = "both";
  std::string output;
};

TweetPool pool_for(const std::string& path, Source source, const SynthArgs& a, std::uint64_t seed) {
  if (!path.empty()) return pool_from_timelines(load_jsonl(path), source, a.topic);
  return source == Source::human ? default_human_pool(a.pool_size, seed, a.topic)
                                 : default_ai_pool(a.pool_size, seed, a.topic);
}

int cmd_synth(const Config& c, const SynthArgs& a, std::ostream& out) {
  std::vector<Timeline> timelines;
  const auto human = [&] { return pool_for(a.human_pool, Source::human, a, c.seed); };
  const auto ai = [&] { return pool_for(a.ai_pool, Source::ai, a, c.seed); };
  if (a.mode == "pure") {
    const std::size_t n = a.n.value_or(20);
    if (a.source == "human" || a.source == "both") timelines = synth_pure(human(), n, a.budget, derive_seed(c.seed, 1));
    if (a.source == "ai" || a.source == "both") {
      auto more = synth_pure(ai(), n, a.budget, derive_seed(c.seed, 2));
      timelines.insert(timelines.end(), more.begin(), more.end());
    }
  } else {
    timelines = synth_mixed(human(), ai(), a.n.value_or(25), a.count, derive_seed(c.seed, 3));
  }
  std::ostringstream buf;
  write_jsonl(buf, timelines);
  emit(a.output, buf.str(), out);
  return kExitOk;
}

int cmd_train(const Config& c, const std::string& input, const std::string& embeddings_path,
              const std::string& model_path, std::ostream& out, std::ostream& err) {
  const auto timelines = load_jsonl(input);
  const auto table = load_embeddings(embeddings_path);
  const auto examples = labeled_examples(timelines, table ? &*table : nullptr, c.mttr_window, c.jobs);
  if (examples.size() < timelines.size()) {
    err << "train: skipped " << (timelines.size() - examples.size()) << " timelines without a uniform label\n";
  }
  Hyperparams hp = c.hyperparams;
  hp.seed = c.seed;
  const TrainResult result = train(examples, hp);
  result.model.save(model_path);
  nlohmann::json j;
  j["examples"] = examples.size();
  j["embedding_dim"] = result.model.embedding_dim();
  j["epochs"] = hp.epochs;
  j["final_loss"] = result.epoch_loss.empty() ? 0.0 : result.epoch_loss.back();
  j["training_accuracy"] = accuracy(result.model, examples);
  char hex[20];
  std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(result.model.checksum()));
  j["checksum"] = hex;
  out << dump(j);
  return kExitOk;
}

int cmd_detect(const Config& c, const std::string& input, const std::string& model_path,
               const std::string& embeddings_path, const std::string& output, std::ostream& out) {
  const auto timelines = load_jsonl(input);
  const FusionModel model = FusionModel::load(model_path);
  const auto table = load_embeddings(embeddings_path);
  const EmbeddingTable* emb = table ? &*table : nullptr;
  if (model.embedding_dim() > 0 && !emb) throw InputError("model expects embeddings; pass --embeddings");
  const auto preds = parallel_map(timelines.size(), c.jobs, [&](std::size_t i) {
    return predict_timeline(timelines[i], model, emb, c.mttr_window);
  });
  nlohmann::json j;
  j["predictions"] = nlohmann::json::array();
  std::vector<int> predicted;
  std::vector<int> truth;
  for (std::size_t i = 0; i < timelines.size(); ++i) {
    j["predictions"].push_back({{"id", timelines[i].id}, {"label", preds[i].label}, {"p_ai", preds[i].p_ai}});
    if (const auto label = timelines[i].uniform_label()) {
      predicted.push_back(preds[i].label);
      truth.push_back(*label);
    }
  }
  j["labeled"] = truth.size();
  j["accuracy"] = truth.empty() ? nlohmann::json(nullptr) : nlohmann::json(accuracy(predicted, truth));
  emit(output, dump(j), out);
  return kExitOk;
}

int cmd_importance(const Config& c, const std::string& input, const std::string& model_path,
                   const std::string& embeddings_path, std::size_t repeats, const std::string& output,
                   std::ostream& out) {
  const auto timelines = load_jsonl(input);
  const FusionModel model = FusionModel::load(model_path);
  const auto table = load_embeddings(embeddings_path);
  if (model.embedding_dim() > 0 && !table) throw InputError("model expects embeddings; pass --embeddings");
  const auto examples = labeled_examples(timelines, table ? &*table : nullptr, c.mttr_window, c.jobs);
  if (examples.empty()) throw InputError("importance needs timelines with uniform labels");
  const Importance imp = permutation_importance(model, examples, c.seed, repeats);
  nlohmann::json j;
  j["baseline_accuracy"] = imp.baseline_accuracy;
  j["repeats"] = repeats;
  nlohmann::json features = nlohmann::json::array();
  const auto names = feature_names();
  for (std::size_t k = 0; k < kFeatureCount; ++k) {
    features.push_back({{"name", std::string(names[k])},
                        {"category", std::string(category_name(feature_category(k)))},
                        {"drop", imp.per_feature[k]}});
  }
  j["features"] = std::move(features);
  nlohmann::json categories = nlohmann::json::object();
  for (std::size_t g = 0; g < kCategoryCount; ++g) {
    categories[std::string(category_name(static_cast<FeatureCategory>(g)))] = imp.per_category[g];
  }
  j["categories"] = std::move(categories);
  emit(output, dump(j), out);
  return kExitOk;
}

int cmd_eval(const Config& c, const std::string& input, const std::string& report,
             const std::string& csv, const std::string& model_path, const std::string& embeddings_path,
             const std::vector<std::size_t>& windows, std::ostream& out, std::ostream& err) {
  const auto timelines = load_jsonl(input);
  nlohmann::json j;
  j["input"] = std::filesystem::path(input).filename().string();
  j["timelines"] = timelines.size();

  std::vector<Timeline> sequences;
  for (const auto& tl : timelines) {
    if (tl.size() >= 2) sequences.push_back(tl);
  }
  if (sequences.size() < timelines.size()) {
    err << "eval: " << (timelines.size() - sequences.size())
        << " timelines shorter than 2 tweets excluded from localization\n";
  }
  std::vector<LocalizationResult> results;
  if (!sequences.empty()) {
    results = run_localization(sequences, detect_options(c), c.mttr_window, c.jobs).results;
    nlohmann::json loc;
    loc["gamma"] = c.gamma;
    loc["seed"] = c.seed;
    std::vector<LocalizationResult> with_change;
    for (const auto& r : results) {
      if (r.true_cp) with_change.push_back(r);
    }
    loc["timelines_with_change"] = with_change.size();
    nlohmann::json acc = nlohmann::json::object();
    for (std::size_t w : windows) {
      acc[std::to_string(w)] = with_change.empty() ? nlohmann::json(nullptr)
                                                   : nlohmann::json(windowed_localization_accuracy(with_change, w));
    }
    loc["windowed_accuracy"] = std::move(acc);
    loc["detection"] = to_json(detection_report(results));
    j["localization"] = std::move(loc);
  } else {
    j["localization"] = nullptr;
  }

  if (!model_path.empty()) {
    const FusionModel model = FusionModel::load(model_path);
    const auto table = load_embeddings(embeddings_path);
    if (model.embedding_dim() > 0 && !table) throw InputError("model expects embeddings; pass --embeddings");
    const auto examples = labeled_examples(timelines, table ? &*table : nullptr, c.mttr_window, c.jobs);
    nlohmann::json cls;
    cls["labeled"] = examples.size();
    cls["accuracy"] = examples.empty() ? nlohmann::json(nullptr) : nlohmann::json(accuracy(model, examples));
    j["classification"] = std::move(cls);
  }

  emit(report, dump(j), out);
  if (!csv.empty()) {
    std::ostringstream buf;
    write_results_csv(buf, results);
    emit(csv, buf.str(), out);
  }
  return kExitOk;
}

}  // namespace

int run(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Stylometric AI-tweet detection and author-change localization"};
  app.name("stylo");
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config", "", "key=value file with default option values");

  Config c;
  app.add_option("--seed", c.seed, "Seed for every random choice");
  app.add_option("--jobs", c.jobs, "Worker threads (results do not depend on it)");
  app.add_option("--mttr-window", c.mttr_window, "MTTR window length");
  app.add_option("--gamma", c.gamma, "Feature agreement fraction in (0, 1]");
  app.add_option("--penalty", c.penalty, "PELT penalty: 'auto' or a non-negative number");
  app.add_option("--min-seg", c.min_seg, "Minimum segment length");
  app.add_option("--epochs", c.hyperparams.epochs, "Training epochs");
  app.add_option("--lr", c.hyperparams.learning_rate, "Learning rate");
  app.add_option("--momentum", c.hyperparams.momentum, "SGD momentum");
  app.add_option("--batch-size", c.hyperparams.batch_size, "Mini-batch size");
  app.add_option("--hidden-reduce", c.hyperparams.reduce_width, "Width of the reduce layers");
  app.add_option("--hidden-classify", c.hyperparams.classify_width, "Width of the classify hidden layer");

  std::string input, output, report, csv, model, embeddings;

  auto* features = app.add_subcommand("features", "Dump the 24 stylometric features as CSV");
  bool per_tweet = false;
  bool per_timeline = false;
  features->add_option("--input", input, "Timelines JSONL")->required();
  auto* pt = features->add_flag("--per-tweet", per_tweet, "One row per tweet (default)");
  features->add_flag("--per-timeline", per_timeline, "One row per timeline")->excludes(pt);
  features->add_option("--output", output, "CSV path (default stdout)");

  auto* cpd = app.add_subcommand("cpd", "Segment a numeric CSV column");
  std::string series;
  bool exact = false;
  cpd->add_option("--series", series, "PATH or PATH:COLUMN (header name or 0-based index)")->required();
  cpd->add_flag("--exact", exact, "Use the unpruned optimal search");
  cpd->add_option("--output", output, "JSON path (default stdout)");

  auto* localize = app.add_subcommand("localize", "Run StyloCPA on each timeline");
  localize->add_option("--input", input, "Timelines JSONL")->required();
  localize->add_option("--report", report, "JSON path (default stdout)");

  auto* synth = app.add_subcommand("synth", "Generate pure or mixed synthetic timelines");
  SynthArgs sa;
  synth->add_option("--mode", sa.mode, "pure or mixed")->required()->check(CLI::IsMember({"pure", "mixed"}));
  synth->add_option("--n", sa.n, "Timeline length (default 20 pure, 25 mixed)")->check(CLI::PositiveNumber);
  synth->add_option("--budget", sa.budget, "Tweets per source in pure mode")->check(CLI::PositiveNumber);
  synth->add_option("--count", sa.count, "Timelines in mixed mode")->check(CLI::PositiveNumber);
  synth->add_option("--human-pool", sa.human_pool, "JSONL whose tweets form the human pool");
  synth->add_option("--ai-pool", sa.ai_pool, "JSONL whose tweets form the AI pool");
  synth->add_option("--pool-size", sa.pool_size, "Size of generated pools")->check(CLI::PositiveNumber);
  synth->add_option("--topic", sa.topic, "Topic of generated pools")
      ->check(CLI::IsMember({"covid", "vaccine", "climate"}));
  synth->add_option("--source", sa.source, "Pure mode pools: human, ai or both")
      ->check(CLI::IsMember({"human", "ai", "both"}));
  synth->add_option("--output", sa.output, "JSONL path (default stdout)");

  auto* trn = app.add_subcommand("train", "Train the fusion classifier on labeled timelines");
  trn->add_option("--input", input, "Timelines JSONL")->required();
  trn->add_option("--embeddings", embeddings, "Embedding CSV keyed by timeline id");
  trn->add_option("--model", model, "Model output path")->required();

  auto* det = app.add_subcommand("detect", "Classify timelines as human or AI");
  det->add_option("--input", input, "Timelines JSONL")->required();
  det->add_option("--model", model, "Model file")->required();
  det->add_option("--embeddings", embeddings, "Embedding CSV keyed by timeline id");
  det->add_option("--output", output, "JSON path (default stdout)");

  auto* imp = app.add_subcommand("importance", "Permutation importance of stylometric features");
  std::size_t repeats = 10;
  imp->add_option("--input", input, "Labeled timelines JSONL")->required();
  imp->add_option("--model", model, "Model file")->required();
  imp->add_option("--embeddings", embeddings, "Embedding CSV keyed by timeline id");
  imp->add_option("--repeats", repeats, "Shuffles per feature")->check(CLI::PositiveNumber);
  imp->add_option("--output", output, "JSON path (default stdout)");

  auto* ev = app.add_subcommand("eval", "Localization and detection metrics");
  std::vector<std::size_t> windows{0, 1, 2};
  ev->add_option("--input", input, "Timelines JSONL")->required();
  ev->add_option("--report", report, "JSON path (default stdout)");
  ev->add_option("--csv", csv, "Per-timeline results CSV");
  ev->add_option("--model", model, "Also score a classifier on uniformly labeled timelines");
  ev->add_option("--embeddings", embeddings, "Embedding CSV keyed by timeline id");
  ev->add_option("--windows", windows, "Tolerance windows")->delimiter(',');

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    c.validate();
    if (features->parsed()) return cmd_features(c, input, per_timeline, output, out);
    if (cpd->parsed()) return cmd_cpd(c, series, exact, output, out);
    if (localize->parsed()) return cmd_localize(c, input, report, out);
    if (synth->parsed()) return cmd_synth(c, sa, out);
    if (trn->parsed()) return cmd_train(c, input, embeddings, model, out, err);
    if (det->parsed()) return cmd_detect(c, input, model, embeddings, output, out);
    if (imp->parsed()) return cmd_importance(c, input, model, embeddings, repeats, output, out);
    if (ev->parsed()) return cmd_eval(c, input, report, csv, model, embeddings, windows, out, err);
  } catch (const ConfigError& e) {
    err << "stylo: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    err << "stylo: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    err << "stylo: " << e.what() << "\n";
    return kExitData;
  }
  return kExitUsage;
}

}  // namespace stylo::cli
