#include "cgchan/artifacts.hpp"

#include <cstdio>
#include <fstream>
#include <nlohmann/json.hpp>
#include <stdexcept>

#include "cgchan/rng.hpp"

namespace cgchan {

using nlohmann::json;

namespace {

void write_bytes(const std::filesystem::path& path, const void* data, std::size_t n) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
  out.write(static_cast<const char*>(data), static_cast<std::streamsize>(n));
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

std::vector<char> read_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary | std::ios::ate);
  if (!in) throw std::runtime_error("cannot open: " + path.string());
  const auto size = in.tellg();
  in.seekg(0);
  std::vector<char> buf(static_cast<std::size_t>(size));
  in.read(buf.data(), size);
  if (!in) throw std::runtime_error("read failed: " + path.string());
  return buf;
}

json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open: " + path.string());
  json j;
  in >> j;
  return j;
}

void write_json(const std::filesystem::path& path, const json& j) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
  out << j.dump(2) << "\n";
}

// run-length list [[value, count], ...]
json rle_encode(const std::vector<int>& values) {
  json out = json::array();
  std::size_t i = 0;
  while (i < values.size()) {
    std::size_t j = i;
    while (j < values.size() && values[j] == values[i]) ++j;
    out.push_back(json::array({values[i], j - i}));
    i = j;
  }
  return out;
}

std::vector<int> rle_decode(const json& j) {
  std::vector<int> out;
  for (const auto& pair : j) {
    const int value = pair.at(0).get<int>();
    const std::size_t count = pair.at(1).get<std::size_t>();
    out.insert(out.end(), count, value);
  }
  return out;
}

void save_image_block(const std::filesystem::path& stem, const std::vector<ImageVector>& images,
                      int grid, std::uint64_t seed, const std::string& config_hash,
                      const char* kind) {
  if (images.empty()) throw std::invalid_argument("save: empty image list");
  const Eigen::Index m = images[0].values.size();
  std::vector<float> raw(images.size() * static_cast<std::size_t>(m));
  std::vector<int> labels(images.size()), prov(images.size());
  for (std::size_t i = 0; i < images.size(); ++i) {
    if (images[i].values.size() != m) throw std::invalid_argument("save: mixed image sizes");
    for (Eigen::Index k = 0; k < m; ++k)
      raw[i * static_cast<std::size_t>(m) + static_cast<std::size_t>(k)] =
          static_cast<float>(images[i].values[k]);
    labels[i] = static_cast<int>(images[i].label);
    prov[i] = static_cast<int>(images[i].provenance);
  }
  auto fpath = stem;
  fpath += ".f32";
  write_bytes(fpath, raw.data(), raw.size() * sizeof(float));

  json meta;
  meta["kind"] = kind;
  meta["grid"] = grid;
  meta["pixels"] = m;
  meta["count"] = images.size();
  meta["seed"] = seed;
  meta["config_hash"] = config_hash;
  meta["dtype"] = "f32";
  meta["byte_order"] = "little";
  meta["labels_rle"] = rle_encode(labels);
  meta["provenance_rle"] = rle_encode(prov);
  meta["data_hash"] = to_hex(hash_file(fpath));
  auto mpath = stem;
  mpath += ".meta.json";
  write_json(mpath, meta);
}

std::vector<ImageVector> load_image_block(const std::filesystem::path& stem, json* meta_out) {
  auto mpath = stem;
  mpath += ".meta.json";
  const json meta = read_json(mpath);
  if (meta.at("dtype") != "f32" || meta.at("byte_order") != "little")
    throw std::runtime_error("load: unsupported dtype/byte order in " + mpath.string());
  auto fpath = stem;
  fpath += ".f32";
  const auto bytes = read_bytes(fpath);
  const std::size_t count = meta.at("count").get<std::size_t>();
  const std::size_t m = meta.at("pixels").get<std::size_t>();
  if (bytes.size() != count * m * sizeof(float))
    throw std::runtime_error("load: raw size mismatch for " + fpath.string());
  const auto labels = rle_decode(meta.at("labels_rle"));
  const auto prov = rle_decode(meta.at("provenance_rle"));
  if (labels.size() != count || prov.size() != count)
    throw std::runtime_error("load: label run-length mismatch for " + mpath.string());

  const float* raw = reinterpret_cast<const float*>(bytes.data());
  std::vector<ImageVector> images(count);
  for (std::size_t i = 0; i < count; ++i) {
    images[i].values.resize(static_cast<Eigen::Index>(m));
    for (std::size_t k = 0; k < m; ++k)
      images[i].values[static_cast<Eigen::Index>(k)] = raw[i * m + k];
    images[i].label = static_cast<Label>(labels[i]);
    images[i].provenance = static_cast<Provenance>(prov[i]);
  }
  if (meta_out) *meta_out = meta;
  return images;
}

}  // namespace

std::string to_hex(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::uint64_t hash_file(const std::filesystem::path& path) {
  const auto bytes = read_bytes(path);
  return fnv1a64(bytes.data(), bytes.size());
}

void save_dataset(const std::filesystem::path& stem, const LabeledDataset& dataset,
                  const std::string& config_hash) {
  save_image_block(stem, dataset.images, dataset.grid, dataset.seed, config_hash, "dataset");
}

LabeledDataset load_dataset(const std::filesystem::path& stem) {
  LabeledDataset ds;
  json meta;
  ds.images = load_image_block(stem, &meta);
  ds.seed = meta.at("seed").get<std::uint64_t>();
  ds.meta = meta.at("config_hash").get<std::string>();
  ds.grid = meta.at("grid").get<int>();
  return ds;
}

void save_images(const std::filesystem::path& stem, const std::vector<ImageVector>& images,
                 int grid, std::uint64_t seed, const std::string& config_hash) {
  save_image_block(stem, images, grid, seed, config_hash, "images");
}

std::vector<ImageVector> load_images(const std::filesystem::path& stem) {
  return load_image_block(stem, nullptr);
}

void save_bank(const std::filesystem::path& stem, const ChannelBank& bank,
               const std::string& config_hash) {
  auto fpath = stem;
  fpath += ".f64";
  // row-major on disk
  std::vector<double> raw(static_cast<std::size_t>(bank.matrix.size()));
  for (Eigen::Index i = 0; i < bank.matrix.rows(); ++i)
    for (Eigen::Index j = 0; j < bank.matrix.cols(); ++j)
      raw[static_cast<std::size_t>(i * bank.matrix.cols() + j)] = bank.matrix(i, j);
  write_bytes(fpath, raw.data(), raw.size() * sizeof(double));

  json meta;
  meta["kind"] = "channel_bank";
  meta["method"] = to_string(bank.method);
  meta["rows"] = bank.matrix.rows();
  meta["cols"] = bank.matrix.cols();
  meta["tau_orth"] = bank.tau_orth;
  meta["truncated"] = bank.truncated;
  meta["dtype"] = "f64";
  meta["byte_order"] = "little";
  meta["config_hash"] = config_hash;
  meta["data_hash"] = to_hex(hash_file(fpath));
  json iters = json::array();
  for (const auto& it : bank.build_log.iterations)
    iters.push_back({{"alpha", it.alpha},
                     {"beta", it.beta},
                     {"residual_norm", it.residual_norm},
                     {"reorthogonalized", it.reorthogonalized}});
  meta["build_log"] = {{"initial_residual_norm", bank.build_log.initial_residual_norm},
                       {"iterations", iters}};
  auto mpath = stem;
  mpath += ".meta.json";
  write_json(mpath, meta);
}

ChannelBank load_bank(const std::filesystem::path& stem) {
  auto mpath = stem;
  mpath += ".meta.json";
  const json meta = read_json(mpath);
  if (meta.at("kind") != "channel_bank")
    throw std::runtime_error("load_bank: not a channel bank: " + mpath.string());
  auto fpath = stem;
  fpath += ".f64";
  const auto bytes = read_bytes(fpath);
  const Eigen::Index rows = meta.at("rows").get<Eigen::Index>();
  const Eigen::Index cols = meta.at("cols").get<Eigen::Index>();
  if (bytes.size() != static_cast<std::size_t>(rows * cols) * sizeof(double))
    throw std::runtime_error("load_bank: raw size mismatch for " + fpath.string());
  const double* raw = reinterpret_cast<const double*>(bytes.data());
  ChannelBank bank;
  bank.matrix.resize(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) bank.matrix(i, j) = raw[i * cols + j];
  bank.method = channel_method_from_string(meta.at("method").get<std::string>());
  bank.tau_orth = meta.at("tau_orth").get<double>();
  bank.truncated = meta.at("truncated").get<bool>();
  if (meta.contains("build_log")) {
    bank.build_log.initial_residual_norm =
        meta["build_log"].value("initial_residual_norm", 0.0);
    for (const auto& it : meta["build_log"].at("iterations")) {
      CgIterationRecord rec;
      rec.alpha = it.value("alpha", 0.0);
      rec.beta = it.value("beta", 0.0);
      rec.residual_norm = it.value("residual_norm", 0.0);
      rec.reorthogonalized = it.value("reorthogonalized", false);
      bank.build_log.iterations.push_back(rec);
    }
  }
  return bank;
}

void save_matrix(const std::filesystem::path& stem, const Eigen::MatrixXd& m,
                 const std::string& kind, const std::string& config_hash) {
  auto fpath = stem;
  fpath += ".f64";
  std::vector<double> raw(static_cast<std::size_t>(m.size()));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      raw[static_cast<std::size_t>(i * m.cols() + j)] = m(i, j);
  write_bytes(fpath, raw.data(), raw.size() * sizeof(double));
  json meta;
  meta["kind"] = kind;
  meta["rows"] = m.rows();
  meta["cols"] = m.cols();
  meta["dtype"] = "f64";
  meta["byte_order"] = "little";
  meta["config_hash"] = config_hash;
  meta["data_hash"] = to_hex(hash_file(fpath));
  auto mpath = stem;
  mpath += ".meta.json";
  write_json(mpath, meta);
}

Eigen::MatrixXd load_matrix(const std::filesystem::path& stem) {
  auto mpath = stem;
  mpath += ".meta.json";
  const json meta = read_json(mpath);
  auto fpath = stem;
  fpath += ".f64";
  const auto bytes = read_bytes(fpath);
  const Eigen::Index rows = meta.at("rows").get<Eigen::Index>();
  const Eigen::Index cols = meta.at("cols").get<Eigen::Index>();
  if (bytes.size() != static_cast<std::size_t>(rows * cols) * sizeof(double))
    throw std::runtime_error("load_matrix: raw size mismatch for " + fpath.string());
  const double* raw = reinterpret_cast<const double*>(bytes.data());
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = raw[i * cols + j];
  return m;
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void save_scores_csv(const std::filesystem::path& path, const std::vector<ScoreRow>& rows) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
  out << "image_id,label,observer_id,t\n";
  for (const auto& r : rows)
    out << r.image_id << "," << r.label << "," << r.observer_id << "," << format_double(r.t)
        << "\n";
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

std::vector<ScoreRow> load_scores_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open: " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty score file: " + path.string());
  std::vector<ScoreRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    ScoreRow r;
    const auto c1 = line.find(',');
    const auto c2 = line.find(',', c1 + 1);
    const auto c3 = line.find(',', c2 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos || c3 == std::string::npos)
      throw std::runtime_error("malformed score row in " + path.string() + ": " + line);
    r.image_id = std::stoi(line.substr(0, c1));
    r.label = std::stoi(line.substr(c1 + 1, c2 - c1 - 1));
    r.observer_id = line.substr(c2 + 1, c3 - c2 - 1);
    r.t = std::stod(line.substr(c3 + 1));
    rows.push_back(std::move(r));
  }
  return rows;
}

}  // namespace cgchan
