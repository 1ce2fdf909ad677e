#include "beampred/io.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace beampred {

namespace {

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_double(const std::string& text, const std::string& what) {
  double v = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  while (first < last && *first == ' ') ++first;
  if (first < last && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc{} || ptr != last)
    fail(ErrorKind::InvalidInput, "cannot parse " + what + " from '" + text + "'");
  return v;
}

std::int64_t parse_int(const std::string& text, const std::string& what) {
  std::int64_t v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size())
    fail(ErrorKind::InvalidInput, "cannot parse " + what + " from '" + text + "'");
  return v;
}

std::ofstream open_out(const std::filesystem::path& path) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  std::ofstream os(path, std::ios::binary);
  if (!os) fail(ErrorKind::InvalidConfig, "cannot write " + path.string());
  return os;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) fail(ErrorKind::InvalidInput, "cannot read " + path.string());
  return is;
}

// Whitespace-token reader for the checkpoint format.
class TokenReader {
 public:
  explicit TokenReader(std::istream& is) : is_(is) {}

  std::string word() {
    std::string w;
    if (!(is_ >> w)) fail(ErrorKind::InvalidInput, "checkpoint ends unexpectedly");
    return w;
  }
  void expect(const std::string& key) {
    const std::string w = word();
    if (w != key)
      fail(ErrorKind::InvalidInput, "checkpoint: expected '" + key + "', found '" + w + "'");
  }
  double real() { return parse_double(word(), "checkpoint value"); }
  std::int64_t integer() { return parse_int(word(), "checkpoint value"); }
  std::uint64_t hex() {
    const std::string w = word();
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(w.data(), w.data() + w.size(), v, 16);
    if (ec != std::errc{} || ptr != w.data() + w.size())
      fail(ErrorKind::InvalidInput, "checkpoint: bad digest '" + w + "'");
    return v;
  }

 private:
  std::istream& is_;
};

void write_matrix(std::ostream& os, const Eigen::MatrixXd& m) {
  // Row-major order.
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      os << (i == 0 && j == 0 ? "" : " ") << format_double(m(i, j));
  }
  os << '\n';
}

Eigen::MatrixXd read_matrix(TokenReader& in, Eigen::Index rows, Eigen::Index cols) {
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = in.real();
  return m;
}

template <typename Range>
void write_list(std::ostream& os, const Range& values) {
  os << values.size();
  for (const auto& v : values) os << ' ' << v;
}

std::vector<int> read_int_list(TokenReader& in) {
  const auto n = in.integer();
  if (n < 0) fail(ErrorKind::InvalidInput, "checkpoint: negative list length");
  std::vector<int> out;
  for (std::int64_t i = 0; i < n; ++i) out.push_back(static_cast<int>(in.integer()));
  return out;
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

std::string format_level(double v) {
  // Twelve significant digits absorb representation error such as 1 - 0.8.
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

void write_scenario_csv(std::ostream& os, const Scenario& scenario) {
  os << "scenario_id,sample_id,lat,lon";
  for (int m = 1; m <= scenario.codebook_size; ++m) os << ",p_" << m;
  os << '\n';
  for (const auto& s : scenario.samples) {
    os << scenario.scenario_id << ',' << s.sample_id << ',' << format_double(s.position.lat)
       << ',' << format_double(s.position.lon);
    for (Eigen::Index m = 0; m < s.powers.size(); ++m) os << ',' << format_double(s.powers(m));
    os << '\n';
  }
}

Scenario read_scenario_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) fail(ErrorKind::InvalidInput, "scenario CSV is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const auto header = split_fields(line);
  if (header.size() < 5 || header[0] != "scenario_id" || header[1] != "sample_id" ||
      header[2] != "lat" || header[3] != "lon")
    fail(ErrorKind::InvalidInput,
         "scenario CSV header must start with scenario_id,sample_id,lat,lon,p_1");
  const int m = static_cast<int>(header.size()) - 4;
  for (int i = 0; i < m; ++i)
    if (header[4 + i] != "p_" + std::to_string(i + 1))
      fail(ErrorKind::InvalidInput, "unexpected power column '" + header[4 + i] + "'");

  Scenario scenario;
  scenario.codebook_size = m;
  std::size_t row = 1;
  while (std::getline(is, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto f = split_fields(line);
    if (f.size() != header.size())
      fail(ErrorKind::InvalidInput, "row " + std::to_string(row) + " has " +
                                        std::to_string(f.size()) + " fields, expected " +
                                        std::to_string(header.size()));
    if (scenario.samples.empty())
      scenario.scenario_id = f[0];
    else if (f[0] != scenario.scenario_id)
      fail(ErrorKind::InvalidInput, "row " + std::to_string(row) + " mixes scenario ids");
    MeasurementSample s;
    s.sample_id = parse_int(f[1], "sample_id");
    s.position = {parse_double(f[2], "lat"), parse_double(f[3], "lon")};
    s.powers.resize(m);
    for (int i = 0; i < m; ++i) s.powers(i) = parse_double(f[4 + i], "power");
    scenario.samples.push_back(std::move(s));
  }
  if (scenario.samples.empty()) fail(ErrorKind::InsufficientData, "scenario CSV has no rows");
  validate(scenario);
  return scenario;
}

void save_scenario(const std::filesystem::path& path, const Scenario& scenario) {
  auto os = open_out(path);
  write_scenario_csv(os, scenario);
}

Scenario load_scenario(const std::filesystem::path& path) {
  auto is = open_in(path);
  return read_scenario_csv(is);
}

std::uint64_t sample_digest(const Scenario& scenario) {
  std::vector<const MeasurementSample*> order;
  order.reserve(scenario.samples.size());
  for (const auto& s : scenario.samples) order.push_back(&s);
  std::sort(order.begin(), order.end(),
            [](const auto* a, const auto* b) { return a->sample_id < b->sample_id; });
  std::uint64_t h = 0xcbf29ce484222325ULL;
  const auto mix = [&h](std::uint64_t u) {
    for (int b = 0; b < 8; ++b) {
      h ^= (u >> (8 * b)) & 0xffU;
      h *= 0x100000001b3ULL;
    }
  };
  for (const auto* s : order) {
    mix(static_cast<std::uint64_t>(s->sample_id));
    mix(std::bit_cast<std::uint64_t>(s->position.lat));
    mix(std::bit_cast<std::uint64_t>(s->position.lon));
    for (double p : s->powers) mix(std::bit_cast<std::uint64_t>(p));
  }
  return h;
}

SplitProvenance provenance_of(const SplitResult& parts, const SplitSpec& spec) {
  return {spec,
          parts.test.scenario_id,
          parts.train.samples.size(),
          parts.val.samples.size(),
          parts.test.samples.size(),
          sample_digest(parts.test)};
}

void write_checkpoint(std::ostream& os, const Checkpoint& ck) {
  const auto& p = ck.predictor;
  const auto& sp = ck.split;
  os << kCheckpointMagic << ' ' << kCheckpointVersion << '\n';
  os << "predictor " << predictor_name(p.kind) << '\n';
  os << "scenario_id " << sp.scenario_id << '\n';
  os << "codebook_size " << codebook_size(p) << '\n';
  os << "norm " << format_double(p.norm.lat_min) << ' ' << format_double(p.norm.lat_max)
     << ' ' << format_double(p.norm.lon_min) << ' ' << format_double(p.norm.lon_max) << '\n';
  os << "split " << format_double(sp.spec.train_frac) << ' '
     << format_double(sp.spec.val_frac) << ' ' << format_double(sp.spec.test_frac) << ' '
     << sp.spec.seed << '\n';
  os << "split_sizes " << sp.train_size << ' ' << sp.val_size << ' ' << sp.test_size << '\n';
  char digest[17];
  std::snprintf(digest, sizeof(digest), "%016llx",
                static_cast<unsigned long long>(sp.test_digest));
  os << "test_digest " << digest << '\n';

  std::visit(
      [&](const auto& model) {
        using T = std::decay_t<decltype(model)>;
        if constexpr (std::is_same_v<T, LookupTable>) {
          os << "n_cells " << model.n_cells << '\n';
          os << "cells " << model.cells.size() << '\n';
          for (const auto& [cell, dist] : model.cells) {
            os << cell.row << ' ' << cell.col << ' ';
            write_matrix(os, dist.transpose());
          }
        } else if constexpr (std::is_same_v<T, KnnModel>) {
          os << "n_neighbors " << model.n_neighbors << '\n';
          os << "points " << model.size() << '\n';
          for (Eigen::Index k = 0; k < model.size(); ++k)
            os << model.sample_ids[k] << ' ' << format_double(model.points(k, 0)) << ' '
               << format_double(model.points(k, 1)) << ' ' << model.labels(k) << '\n';
        } else {
          const auto& c = model.config;
          os << "best_epoch " << model.best_epoch << '\n';
          os << "input_bins " << c.input_bins << '\n';
          os << "batch_size " << c.batch_size << '\n';
          os << "lr " << format_double(c.lr) << '\n';
          os << "decay_epochs ";
          write_list(os, c.decay_epochs);
          os << '\n';
          os << "decay_factor " << format_double(c.decay_factor) << '\n';
          os << "epochs " << c.epochs << '\n';
          os << "seed " << c.seed << '\n';
          os << "layer_dims ";
          write_list(os, model.network.dims());
          os << '\n';
          for (std::size_t l = 0; l < model.network.layer_count(); ++l) {
            os << "weights " << l << '\n';
            write_matrix(os, model.network.weights[l]);
            os << "biases " << l << '\n';
            write_matrix(os, model.network.biases[l].transpose());
          }
        }
      },
      p.model);
  os << "end\n";
}

Checkpoint read_checkpoint(std::istream& is) {
  TokenReader in(is);
  if (in.word() != kCheckpointMagic) fail(ErrorKind::InvalidInput, "not a beampred checkpoint");
  if (const auto v = in.integer(); v != kCheckpointVersion)
    fail(ErrorKind::InvalidInput, "unsupported checkpoint version " + std::to_string(v));

  Checkpoint ck;
  auto& p = ck.predictor;
  auto& sp = ck.split;
  in.expect("predictor");
  p.kind = parse_predictor(in.word());
  in.expect("scenario_id");
  sp.scenario_id = in.word();
  in.expect("codebook_size");
  const auto m = in.integer();
  if (m < 1) fail(ErrorKind::InvalidInput, "checkpoint: bad codebook size");
  in.expect("norm");
  p.norm = {in.real(), in.real(), in.real(), in.real()};
  in.expect("split");
  sp.spec.train_frac = in.real();
  sp.spec.val_frac = in.real();
  sp.spec.test_frac = in.real();
  sp.spec.seed = static_cast<std::uint64_t>(std::stoull(in.word()));
  in.expect("split_sizes");
  sp.train_size = static_cast<std::size_t>(in.integer());
  sp.val_size = static_cast<std::size_t>(in.integer());
  sp.test_size = static_cast<std::size_t>(in.integer());
  in.expect("test_digest");
  sp.test_digest = in.hex();

  switch (p.kind) {
    case PredictorKind::LookupTable: {
      LookupTable t;
      in.expect("n_cells");
      t.n_cells = static_cast<int>(in.integer());
      t.grid_dim = grid_dim_of(t.n_cells);
      t.codebook_size = static_cast<int>(m);
      t.default_dist = uniform_distribution(t.codebook_size);
      in.expect("cells");
      const auto n = in.integer();
      for (std::int64_t i = 0; i < n; ++i) {
        GridCell cell{static_cast<int>(in.integer()), static_cast<int>(in.integer())};
        t.cells.emplace(cell, read_matrix(in, 1, m).transpose());
      }
      p.model = std::move(t);
      break;
    }
    case PredictorKind::Knn: {
      KnnModel k;
      k.codebook_size = static_cast<int>(m);
      in.expect("n_neighbors");
      k.n_neighbors = static_cast<int>(in.integer());
      in.expect("points");
      const auto n = in.integer();
      if (n < 1 || k.n_neighbors < 1 || k.n_neighbors > n)
        fail(ErrorKind::InvalidInput, "checkpoint: inconsistent KNN model");
      k.points.resize(n, 2);
      k.labels.resize(n);
      for (std::int64_t i = 0; i < n; ++i) {
        k.sample_ids.push_back(in.integer());
        k.points(i, 0) = in.real();
        k.points(i, 1) = in.real();
        k.labels(i) = static_cast<int>(in.integer());
      }
      p.model = std::move(k);
      break;
    }
    case PredictorKind::Neural: {
      NeuralModel nm;
      auto& c = nm.config;
      in.expect("best_epoch");
      nm.best_epoch = static_cast<int>(in.integer());
      in.expect("input_bins");
      c.input_bins = static_cast<int>(in.integer());
      in.expect("batch_size");
      c.batch_size = static_cast<int>(in.integer());
      in.expect("lr");
      c.lr = in.real();
      in.expect("decay_epochs");
      c.decay_epochs = read_int_list(in);
      in.expect("decay_factor");
      c.decay_factor = in.real();
      in.expect("epochs");
      c.epochs = static_cast<int>(in.integer());
      in.expect("seed");
      c.seed = static_cast<std::uint64_t>(std::stoull(in.word()));
      in.expect("layer_dims");
      const auto dims = read_int_list(in);
      if (dims.size() < 2 || dims.back() != m)
        fail(ErrorKind::InvalidInput, "checkpoint: layer dims do not match codebook size");
      c.hidden.assign(dims.begin() + 1, dims.end() - 1);
      nm.network = Mlp<double>::zeros(dims);
      for (std::size_t l = 0; l + 1 < dims.size(); ++l) {
        in.expect("weights");
        in.integer();
        nm.network.weights[l] = read_matrix(in, dims[l + 1], dims[l]);
        in.expect("biases");
        in.integer();
        nm.network.biases[l] = read_matrix(in, 1, dims[l + 1]).transpose();
      }
      p.model = std::move(nm);
      break;
    }
  }
  in.expect("end");
  return ck;
}

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& checkpoint) {
  auto os = open_out(path);
  write_checkpoint(os, checkpoint);
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  auto is = open_in(path);
  return read_checkpoint(is);
}

void write_history_csv(std::ostream& os, const FittedPredictor& predictor) {
  if (predictor.kind == PredictorKind::Neural) {
    os << "epoch,lr,train_loss,val_top1\n";
    for (const auto& e : predictor.history)
      os << e.epoch << ',' << format_double(e.lr) << ',' << format_double(e.train_loss) << ','
         << format_double(e.val_top1) << '\n';
  } else {
    os << (predictor.kind == PredictorKind::LookupTable ? "n_cells" : "n_neighbors")
       << ",val_top1\n";
    for (const auto& t : predictor.tuning)
      os << t.candidate << ',' << format_double(t.val_top1) << '\n';
  }
}

void write_report_csv(std::ostream& os, const std::vector<EvaluationReport>& reports) {
  if (reports.empty()) return;
  const auto& first = reports.front();
  os << "scenario,predictor";
  for (int k = 1; k <= 5; ++k) os << ",acc_top" << k;
  os << ",power_loss_db,beamset_" << format_level(first.gamma);
  for (const auto& [r, s] : first.overhead) os << ",savings_at_" << format_level(r);
  os << '\n';
  for (const auto& rep : reports) {
    os << rep.scenario_id << ',' << rep.predictor;
    for (int k = 1; k <= 5; ++k) {
      const auto it = rep.top_k_accuracy.find(k);
      // Codebooks smaller than k cover every beam.
      os << ',' << format_double(it != rep.top_k_accuracy.end() ? it->second : 1.0);
    }
    os << ',' << format_double(rep.power_loss_db) << ',' << format_double(rep.beamset_size);
    for (const auto& [r, s] : rep.overhead) os << ',' << format_double(s.savings);
    os << '\n';
  }
}

}  // namespace beampred
