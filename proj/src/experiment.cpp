#include "cgchan/experiment.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "cgchan/artifacts.hpp"
#include "cgchan/evaluation.hpp"
#include "cgchan/rng.hpp"

namespace cgchan {

using nlohmann::json;

std::string ObserverCondition::id() const {
  return observer + "_" + method + "_D" + std::to_string(channels) + "_n" +
         std::to_string(n_train);
}

Experiment::Experiment(ExperimentConfig cfg, std::filesystem::path out_dir)
    : cfg_(std::move(cfg)), out_dir_(std::move(out_dir)), manifest_(out_dir_) {
  try {
    cfg_.validate();
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
  hash_ = config_hash(cfg_);
  std::filesystem::create_directories(out_dir_);
  manifest_.load();
  manifest_.set_config_hash(hash_);
  // keep the resolved config next to the artifacts
  const auto cfg_path = out_dir_ / "config.json";
  if (!std::filesystem::exists(cfg_path)) {
    std::ofstream out(cfg_path);
    out << config_to_json_text(cfg_);
  }
}

std::string Experiment::dataset_key(const std::string& name) { return "datasets/" + name; }

std::string Experiment::bank_key(const std::string& method, int n_train) {
  return "banks/" + method + "_n" + std::to_string(n_train);
}

std::vector<ObserverCondition> Experiment::conditions() const {
  std::vector<ObserverCondition> out;
  for (const auto& kind : {std::string("cho"), std::string("cio")}) {
    if (kind == "cho" && !cfg_.observers.cho) continue;
    if (kind == "cio" && !cfg_.observers.cio) continue;
    for (const auto& method : cfg_.sweep.methods)
      for (int n : cfg_.sweep.train_sizes)
        for (int d : cfg_.sweep.channel_counts) out.push_back({kind, method, d, n});
  }
  return out;
}

IoTask Experiment::io_task() const {
  IoTask task;
  task.lumpy = cfg_.task.lumpy;
  task.op = cfg_.task.op;
  task.noise = cfg_.task.noise;
  task.signal = project_signal(cfg_.task.signal, cfg_.task.op).values;
  return task;
}

void Experiment::generate() {
  std::filesystem::create_directories(out_dir_ / "datasets");
  const auto make_labeled = [&](const std::string& name, int n_per_class) {
    const std::string key = dataset_key(name);
    if (manifest_.has_valid(key)) {
      std::cout << "[skip] " << key << " (hash hit)\n";
      return;
    }
    const auto seed = seed_mix(cfg_.master_seed, "dataset", fnv1a64(name));
    LabeledDataset ds = generate_dataset(n_per_class, cfg_.task, seed);
    const auto stem = out_dir_ / "datasets" / name;
    save_dataset(stem, ds, hash_);
    manifest_.put(key, {"datasets/" + name + ".f32", "datasets/" + name + ".meta.json"});
    std::cout << "[done] " << key << " (" << ds.images.size() << " images)\n";
  };
  const auto make_backgrounds = [&](const std::string& name, int n) {
    const std::string key = dataset_key(name);
    if (manifest_.has_valid(key)) {
      std::cout << "[skip] " << key << " (hash hit)\n";
      return;
    }
    const auto seed = seed_mix(cfg_.master_seed, "dataset", fnv1a64(name));
    const auto images = generate_noiseless_backgrounds(n, cfg_.task.lumpy, cfg_.task.op, seed);
    const auto stem = out_dir_ / "datasets" / name;
    save_images(stem, images, cfg_.task.op.fov.grid_size, seed, hash_);
    manifest_.put(key, {"datasets/" + name + ".f32", "datasets/" + name + ".meta.json"});
    std::cout << "[done] " << key << " (" << images.size() << " backgrounds)\n";
  };

  make_labeled("test", cfg_.eval.test_per_class);
  if (cfg_.observers.cho) make_labeled("cho_train", cfg_.training.cho_train_per_class);
  if (cfg_.observers.ho_reference)
    make_backgrounds("cmd_reference", cfg_.training.cmd_reference_backgrounds);
  const bool needs_train = std::find(cfg_.sweep.methods.begin(), cfg_.sweep.methods.end(),
                                     "cg") != cfg_.sweep.methods.end() ||
                           std::find(cfg_.sweep.methods.begin(), cfg_.sweep.methods.end(),
                                     "pls") != cfg_.sweep.methods.end();
  const bool needs_cmdbg = std::find(cfg_.sweep.methods.begin(), cfg_.sweep.methods.end(),
                                     "cg_cmd") != cfg_.sweep.methods.end();
  for (int n : cfg_.sweep.train_sizes) {
    if (needs_train) make_labeled("train_n" + std::to_string(n), n / 2);
    if (needs_cmdbg) make_backgrounds("cmdbg_n" + std::to_string(n), n);
  }
  manifest_.save();
}

LabeledDataset Experiment::load_dataset_artifact(const std::string& name) {
  const std::string key = dataset_key(name);
  if (!manifest_.has_valid(key))
    throw MissingArtifact("missing dataset artifact '" + name + "'; run `generate` first");
  return load_dataset(out_dir_ / "datasets" / name);
}

std::vector<ImageVector> Experiment::load_images_artifact(const std::string& name) {
  const std::string key = dataset_key(name);
  if (!manifest_.has_valid(key))
    throw MissingArtifact("missing image artifact '" + name + "'; run `generate` first");
  return load_images(out_dir_ / "datasets" / name);
}

ChannelBank Experiment::load_bank_artifact(const std::string& method, int n_train) {
  const std::string key = bank_key(method, n_train);
  if (!manifest_.has_valid(key))
    throw MissingArtifact("missing channel bank '" + key + "'; run `channels` first");
  return load_bank(out_dir_ / key);
}

void Experiment::channels() {
  std::filesystem::create_directories(out_dir_ / "banks");
  const int d_max = *std::max_element(cfg_.sweep.channel_counts.begin(),
                                      cfg_.sweep.channel_counts.end());
  const MeanDifference delta =
      known_signal_mean_difference(project_signal(cfg_.task.signal, cfg_.task.op));

  for (const auto& method : cfg_.sweep.methods) {
    for (int n : cfg_.sweep.train_sizes) {
      const std::string key = bank_key(method, n);
      if (manifest_.has_valid(key)) {
        std::cout << "[skip] " << key << " (hash hit)\n";
        continue;
      }
      ChannelBank bank;
      try {
        if (method == "cg") {
          const LabeledDataset train = load_dataset_artifact("train_n" + std::to_string(n));
          const CovarianceModel K = sample_covariance(train.images);
          bank = build_cg_channels(K, delta, d_max);
        } else if (method == "cg_cmd") {
          const auto bgs = load_images_artifact("cmdbg_n" + std::to_string(n));
          const CovarianceModel K = cmd_covariance(bgs, cfg_.task.noise);
          bank = build_cg_channels(K, delta, d_max);
        } else if (method == "pls") {
          const LabeledDataset train = load_dataset_artifact("train_n" + std::to_string(n));
          bank = build_pls_channels(train, d_max);
        } else {
          throw ConfigError("unknown channel method " + method);
        }
      } catch (const MissingArtifact&) {
        throw;
      } catch (const ConfigError&) {
        throw;
      } catch (const std::exception& e) {
        throw NumericalFailure("channel build failed for " + key + ": " + e.what());
      }
      save_bank(out_dir_ / key, bank, hash_);
      manifest_.put(key, {key + ".f64", key + ".meta.json"});
      std::cout << "[done] " << key << " (D=" << bank.channel_count()
                << (bank.truncated ? ", truncated" : "") << ")\n";
    }
  }
  manifest_.save();
}

void Experiment::save_score_rows(const std::string& observer_id, const LabeledDataset& test,
                                 const std::vector<double>& per_image) {
  std::vector<ScoreRow> rows(per_image.size());
  for (std::size_t i = 0; i < per_image.size(); ++i) {
    rows[i].image_id = static_cast<int>(i);
    rows[i].label = test.images[i].label == Label::H1 ? 1 : 0;
    rows[i].observer_id = observer_id;
    rows[i].t = per_image[i];
  }
  const std::string rel = "scores/" + observer_id + ".csv";
  save_scores_csv(out_dir_ / rel, rows);
  manifest_.put("scores/" + observer_id, {rel});
}

std::vector<std::string> Experiment::observers() {
  std::filesystem::create_directories(out_dir_ / "scores");
  const LabeledDataset test = load_dataset_artifact("test");
  std::vector<std::string> failed;

  const auto run_condition = [&](const std::string& id, auto&& fn) {
    if (manifest_.has_valid("scores/" + id)) {
      std::cout << "[skip] scores/" << id << " (hash hit)\n";
      return;
    }
    try {
      save_score_rows(id, test, fn());
      std::cout << "[done] scores/" << id << "\n";
    } catch (const MissingArtifact&) {
      throw;
    } catch (const std::exception& e) {
      std::cerr << "[fail] " << id << ": " << e.what() << "\n";
      failed.push_back(id);
    }
  };

  if (cfg_.observers.ho_reference) {
    run_condition("ho_reference", [&] {
      const auto bgs = load_images_artifact("cmd_reference");
      const CovarianceModel K = cmd_covariance(bgs, cfg_.task.noise);
      const MeanDifference delta =
          known_signal_mean_difference(project_signal(cfg_.task.signal, cfg_.task.op));
      const LinearTemplate w = hotelling_template(K, delta);
      return linear_scores(w, test.images);
    });
  }

  if (cfg_.observers.io_reference) {
    run_condition("io", [&] {
      MCMCConfig mc = cfg_.mcmc();
      mc.seed = seed_mix(cfg_.master_seed, "observer", fnv1a64("io"));
      mc.proposal.move_std = cfg_.task.lumpy.lump_width;
      return mcmc_io_scores(test.images, io_task(), mc);
    });
  }

  std::optional<LabeledDataset> cho_train;
  for (const auto& cond : conditions()) {
    run_condition(cond.id(), [&]() -> std::vector<double> {
      const ChannelBank bank = load_bank_artifact(cond.method, cond.n_train);
      if (bank.channel_count() < cond.channels)
        throw std::runtime_error("bank has only " + std::to_string(bank.channel_count()) +
                                 " channels (truncated build)");
      const ChannelBank sliced = bank.prefix(cond.channels);
      if (cond.observer == "cho") {
        if (!cho_train) cho_train = load_dataset_artifact("cho_train");
        const LinearTemplate w = cho_template(sliced, *cho_train);
        return linear_scores_channelized(w, channelize_all(sliced, test.images));
      }
      MCMCConfig mc = cfg_.mcmc();
      mc.seed = seed_mix(cfg_.master_seed, "observer", fnv1a64(cond.id()));
      mc.proposal.move_std = cfg_.task.lumpy.lump_width;
      return mcmc_cio_scores(test.images, sliced, io_task(), mc);
    });
  }

  manifest_.save();
  return failed;
}

namespace {

struct ReportRow {
  std::string observer_id;
  std::string method;
  int channels = 0;
  int n_train = 0;
  RocSummary roc;
};

ObserverScores scores_from_rows(const std::vector<ScoreRow>& rows, const std::string& id) {
  ObserverScores s;
  s.observer_id = id;
  for (const auto& r : rows) (r.label == 1 ? s.t_h1 : s.t_h0).push_back(r.t);
  return s;
}

}  // namespace

void Experiment::report() {
  std::filesystem::create_directories(out_dir_ / "tables");

  std::vector<std::tuple<std::string, std::string, int, int>> wanted;  // id, method, D, n
  if (cfg_.observers.ho_reference) wanted.emplace_back("ho_reference", "none", 0, 0);
  if (cfg_.observers.io_reference) wanted.emplace_back("io", "none", 0, 0);
  for (const auto& cond : conditions())
    wanted.emplace_back(cond.id(), cond.method, cond.channels, cond.n_train);

  std::vector<ReportRow> rows;
  bool complete = true;
  for (const auto& [id, method, d, n] : wanted) {
    if (!manifest_.has_valid("scores/" + id)) {
      std::cerr << "[report] missing scores for " << id << "\n";
      complete = false;
      continue;
    }
    const auto score_rows = load_scores_csv(out_dir_ / "scores" / (id + ".csv"));
    const ObserverScores scores = scores_from_rows(score_rows, id);
    ReportRow row;
    row.observer_id = id;
    row.method = method;
    row.channels = d;
    row.n_train = n;
    row.roc = bootstrap_auc(scores, cfg_.eval.n_boot,
                            seed_mix(cfg_.master_seed, "report", fnv1a64(id)));
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw MissingArtifact("nothing to report: no score artifacts found");

  std::ofstream csv(out_dir_ / "tables" / "report.csv", std::ios::trunc);
  csv << "observer_id,channel_method,D,n_train,auc,stderr\n";
  for (const auto& r : rows)
    csv << r.observer_id << "," << r.method << "," << r.channels << "," << r.n_train << ","
        << format_double(r.roc.auc) << "," << format_double(r.roc.auc_stderr) << "\n";
  csv.close();

  json j;
  j["complete"] = complete;
  j["n_boot"] = cfg_.eval.n_boot;
  json jr = json::array();
  for (const auto& r : rows)
    jr.push_back({{"observer_id", r.observer_id},
                  {"channel_method", r.method},
                  {"D", r.channels},
                  {"n_train", r.n_train},
                  {"auc", r.roc.auc},
                  {"stderr", r.roc.auc_stderr},
                  {"percentile_2p5", r.roc.percentile_lo},
                  {"percentile_97p5", r.roc.percentile_hi}});
  j["rows"] = jr;
  std::ofstream js(out_dir_ / "tables" / "report.json", std::ios::trunc);
  js << j.dump(2) << "\n";

  manifest_.put("tables/report", {"tables/report.csv", "tables/report.json"});
  manifest_.save();
  if (!complete)
    std::cerr << "[report] table flagged incomplete (missing conditions listed above)\n";
}

namespace {

struct Series {
  std::string name;
  std::string color;
  std::vector<std::pair<double, double>> points;
};

void write_svg_lines(const std::filesystem::path& path, const std::string& title,
                     const std::string& xlabel, const std::vector<Series>& series) {
  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  for (const auto& s : series)
    for (const auto& [x, y] : s.points) {
      xmin = std::min(xmin, x);
      xmax = std::max(xmax, x);
      ymin = std::min(ymin, y);
      ymax = std::max(ymax, y);
    }
  if (!(xmax > xmin)) xmax = xmin + 1.0;
  const double ypad = std::max(0.01, 0.1 * (ymax - ymin));
  ymin -= ypad;
  ymax += ypad;
  const int W = 640, H = 440, L = 70, R = 20, T = 40, B = 50;
  auto sx = [&](double x) { return L + (x - xmin) / (xmax - xmin) * (W - L - R); };
  auto sy = [&](double y) { return H - B - (y - ymin) / (ymax - ymin) * (H - T - B); };

  std::ofstream out(path, std::ios::trunc);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
      << "\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << W / 2 << "\" y=\"20\" text-anchor=\"middle\" font-size=\"15\">"
      << title << "</text>\n";
  out << "<line x1=\"" << L << "\" y1=\"" << H - B << "\" x2=\"" << W - R << "\" y2=\""
      << H - B << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << L << "\" y1=\"" << T << "\" x2=\"" << L << "\" y2=\"" << H - B
      << "\" stroke=\"black\"/>\n";
  for (int k = 0; k <= 4; ++k) {
    const double xv = xmin + k * (xmax - xmin) / 4;
    const double yv = ymin + k * (ymax - ymin) / 4;
    out << "<text x=\"" << sx(xv) << "\" y=\"" << H - B + 18
        << "\" text-anchor=\"middle\" font-size=\"11\">" << xv << "</text>\n";
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3f", yv);
    out << "<text x=\"" << L - 8 << "\" y=\"" << sy(yv) + 4
        << "\" text-anchor=\"end\" font-size=\"11\">" << buf << "</text>\n";
  }
  out << "<text x=\"" << (L + W - R) / 2 << "\" y=\"" << H - 12
      << "\" text-anchor=\"middle\" font-size=\"12\">" << xlabel << "</text>\n";
  out << "<text x=\"18\" y=\"" << (T + H - B) / 2
      << "\" font-size=\"12\" transform=\"rotate(-90 18 " << (T + H - B) / 2
      << ")\" text-anchor=\"middle\">AUC</text>\n";
  int legend_y = T + 10;
  for (const auto& s : series) {
    out << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.5\" points=\"";
    for (const auto& [x, y] : s.points) out << sx(x) << "," << sy(y) << " ";
    out << "\"/>\n";
    for (const auto& [x, y] : s.points)
      out << "<circle cx=\"" << sx(x) << "\" cy=\"" << sy(y) << "\" r=\"2.5\" fill=\""
          << s.color << "\"/>\n";
    out << "<text x=\"" << W - R - 140 << "\" y=\"" << legend_y << "\" font-size=\"12\" fill=\""
        << s.color << "\">" << s.name << "</text>\n";
    legend_y += 16;
  }
  out << "</svg>\n";
}

void write_channel_images_csv(const std::filesystem::path& path, const Eigen::MatrixXd& rows_mat,
                              int limit) {
  std::ofstream out(path, std::ios::trunc);
  out << "channel";
  for (Eigen::Index j = 0; j < rows_mat.cols(); ++j) out << ",p" << j;
  out << "\n";
  const Eigen::Index n = std::min<Eigen::Index>(limit, rows_mat.rows());
  for (Eigen::Index i = 0; i < n; ++i) {
    out << i;
    for (Eigen::Index j = 0; j < rows_mat.cols(); ++j)
      out << "," << format_double(rows_mat(i, j));
    out << "\n";
  }
}

std::string method_color(const std::string& m) {
  if (m == "cg") return "#1f77b4";
  if (m == "cg_cmd") return "#2ca02c";
  if (m == "pls") return "#d62728";
  return "#555555";
}

}  // namespace

void Experiment::reproduce_figure(int figure) {
  std::filesystem::create_directories(out_dir_ / "figures");
  const auto figdir = out_dir_ / "figures";
  const int n_max = *std::max_element(cfg_.sweep.train_sizes.begin(),
                                      cfg_.sweep.train_sizes.end());

  switch (figure) {
    case 2: {
      generate();
      channels();
      for (const std::string m : {"cg", "cg_cmd"}) {
        if (std::find(cfg_.sweep.methods.begin(), cfg_.sweep.methods.end(), m) ==
            cfg_.sweep.methods.end())
          continue;
        const ChannelBank bank = load_bank_artifact(m, n_max);
        write_channel_images_csv(figdir / ("fig2_" + m + ".csv"), bank.matrix, 25);
      }
      break;
    }
    case 3: {
      generate();
      channels();
      for (const std::string m : {"cg", "cg_cmd"}) {
        if (std::find(cfg_.sweep.methods.begin(), cfg_.sweep.methods.end(), m) ==
            cfg_.sweep.methods.end())
          continue;
        const ChannelBank bank = load_bank_artifact(m, n_max);
        const int d = std::min(25, bank.channel_count());
        const Eigen::MatrixXd gram = gram_matrix(bank.prefix(d));
        std::ofstream out(figdir / ("fig3_gram_" + m + ".csv"), std::ios::trunc);
        for (Eigen::Index i = 0; i < gram.rows(); ++i) {
          for (Eigen::Index j = 0; j < gram.cols(); ++j)
            out << (j ? "," : "") << format_double(gram(i, j));
          out << "\n";
        }
      }
      break;
    }
    case 4: {
      generate();
      channels();
      for (const auto& m : cfg_.sweep.methods) {
        const ChannelBank bank = load_bank_artifact(m, n_max);
        write_channel_images_csv(figdir / ("fig4_" + m + ".csv"), bank.matrix, 6);
      }
      break;
    }
    case 6: {
      generate();
      channels();
      const LabeledDataset cho_train = load_dataset_artifact("cho_train");
      const int d = *std::max_element(cfg_.sweep.channel_counts.begin(),
                                      cfg_.sweep.channel_counts.end());
      std::ofstream out(figdir / "fig6_templates.csv", std::ios::trunc);
      out << "method,n_train";
      for (int j = 0; j < cfg_.task.op.measurement_count(); ++j) out << ",p" << j;
      out << "\n";
      for (const auto& m : cfg_.sweep.methods) {
        for (int n : cfg_.sweep.train_sizes) {
          const ChannelBank bank = load_bank_artifact(m, n).prefix(d);
          const LinearTemplate w = cho_template(bank, cho_train);
          const Eigen::VectorXd back = bank.matrix.transpose() * w.weights;
          out << m << "," << n;
          for (Eigen::Index j = 0; j < back.size(); ++j)
            out << "," << format_double(back[j]);
          out << "\n";
        }
      }
      break;
    }
    case 7:
    case 8:
    case 9: {
      generate();
      channels();
      const auto failed = observers();
      if (!failed.empty())
        std::cerr << "[reproduce] " << failed.size() << " observer condition(s) failed\n";
      report();
      // re-read the table we just wrote
      std::map<std::string, std::pair<double, double>> auc_by_id;
      {
        std::ifstream in(out_dir_ / "tables" / "report.csv");
        std::string line;
        std::getline(in, line);
        while (std::getline(in, line)) {
          std::stringstream ss(line);
          std::string id, method, ds, ns, aucs, ses;
          std::getline(ss, id, ',');
          std::getline(ss, method, ',');
          std::getline(ss, ds, ',');
          std::getline(ss, ns, ',');
          std::getline(ss, aucs, ',');
          std::getline(ss, ses, ',');
          auc_by_id[id] = {std::stod(aucs), std::stod(ses)};
        }
      }
      const std::string kind = figure == 9 ? "cio" : "cho";
      const std::string ref_id = figure == 9 ? "io" : "ho_reference";
      std::ofstream out(figdir / ("fig" + std::to_string(figure) + ".csv"), std::ios::trunc);
      out << "observer,channel_method,D,n_train,auc,stderr\n";
      for (const auto& cond : conditions()) {
        if (cond.observer != kind) continue;
        const auto it = auc_by_id.find(cond.id());
        if (it == auc_by_id.end()) continue;
        out << kind << "," << cond.method << "," << cond.channels << "," << cond.n_train << ","
            << format_double(it->second.first) << "," << format_double(it->second.second)
            << "\n";
      }
      if (auc_by_id.count(ref_id))
        out << ref_id << ",none,0,0," << format_double(auc_by_id[ref_id].first) << ","
            << format_double(auc_by_id[ref_id].second) << "\n";

      if (figure == 7) {
        // AUC vs training size, one plot per channel count
        for (int d : cfg_.sweep.channel_counts) {
          std::vector<Series> series;
          for (const auto& m : cfg_.sweep.methods) {
            Series s{"CHO " + m, method_color(m), {}};
            for (int n : cfg_.sweep.train_sizes) {
              const auto it = auc_by_id.find("cho_" + m + "_D" + std::to_string(d) + "_n" +
                                             std::to_string(n));
              if (it != auc_by_id.end()) s.points.emplace_back(n, it->second.first);
            }
            if (!s.points.empty()) series.push_back(std::move(s));
          }
          if (auc_by_id.count(ref_id)) {
            Series ho{"HO reference", "#000000", {}};
            for (int n : cfg_.sweep.train_sizes)
              ho.points.emplace_back(n, auc_by_id[ref_id].first);
            series.push_back(std::move(ho));
          }
          write_svg_lines(figdir / ("fig7_D" + std::to_string(d) + ".svg"),
                          "CHO AUC vs training size (D = " + std::to_string(d) + ")",
                          "training images", series);
        }
      } else {
        // AUC vs channel count, one plot per training size
        for (int n : cfg_.sweep.train_sizes) {
          std::vector<Series> series;
          for (const auto& m : cfg_.sweep.methods) {
            Series s{(figure == 9 ? "CIO " : "CHO ") + m, method_color(m), {}};
            for (int d : cfg_.sweep.channel_counts) {
              const auto it = auc_by_id.find(kind + "_" + m + "_D" + std::to_string(d) + "_n" +
                                             std::to_string(n));
              if (it != auc_by_id.end()) s.points.emplace_back(d, it->second.first);
            }
            if (!s.points.empty()) series.push_back(std::move(s));
          }
          if (auc_by_id.count(ref_id)) {
            Series ref{figure == 9 ? "IO reference" : "HO reference", "#000000", {}};
            for (int d : cfg_.sweep.channel_counts)
              ref.points.emplace_back(d, auc_by_id[ref_id].first);
            series.push_back(std::move(ref));
          }
          write_svg_lines(
              figdir / ("fig" + std::to_string(figure) + "_n" + std::to_string(n) + ".svg"),
              (figure == 9 ? std::string("CIO") : std::string("CHO")) +
                  " AUC vs channel count (n_train = " + std::to_string(n) + ")",
              "channels", series);
        }
      }
      break;
    }
    default:
      throw ConfigError("reproduce: supported figures are 2, 3, 4, 6, 7, 8, 9");
  }
  std::cout << "[done] figure " << figure << " data in " << (figdir).string() << "\n";
}

}  // namespace cgchan
