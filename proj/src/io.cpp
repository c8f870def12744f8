#include "srvdist/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace srvdist {

namespace {

using nlohmann::json;

std::string fmt17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& data) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << data;
}

std::string topology_name(Topology t) { return t == Topology::Open ? "open" : "closed"; }

Topology topology_from(const std::string& s) {
  if (s == "open") return Topology::Open;
  if (s == "closed") return Topology::Closed;
  throw std::runtime_error("unknown topology '" + s + "'");
}

std::string method_name(Method m) {
  switch (m) {
    case Method::Exact: return "exact";
    case Method::Dp: return "dp";
    default: return "nn";
  }
}

Method method_from(const std::string& s) {
  if (s == "exact") return Method::Exact;
  if (s == "dp") return Method::Dp;
  if (s == "nn") return Method::Nn;
  throw std::runtime_error("unknown labeler '" + s + "'");
}

json curve_to_json(const Curve& c) {
  json pts = json::array();
  for (Eigen::Index i = 0; i < c.size(); ++i) {
    json pt = json::array();
    for (Eigen::Index r = 0; r < c.dim(); ++r) pt.push_back(c.points(r, i));
    pts.push_back(std::move(pt));
  }
  return pts;
}

Curve curve_from_json(const json& pts, Topology topology) {
  Curve c;
  c.topology = topology;
  const Eigen::Index n = static_cast<Eigen::Index>(pts.size());
  if (n == 0) throw std::runtime_error("empty curve in manifest");
  const Eigen::Index d = static_cast<Eigen::Index>(pts[0].size());
  c.points.resize(d, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (static_cast<Eigen::Index>(pts[i].size()) != d)
      throw std::runtime_error("ragged curve in manifest");
    for (Eigen::Index r = 0; r < d; ++r) c.points(r, i) = pts[i][r].get<double>();
  }
  c.validate();
  return c;
}

}  // namespace

std::string format_curve_text(const Curve& c) {
  std::ostringstream os;
  os << "# d=" << c.dim() << " topology=" << topology_name(c.topology) << "\n";
  for (Eigen::Index i = 0; i < c.size(); ++i) {
    for (Eigen::Index r = 0; r < c.dim(); ++r) {
      if (r) os << ",";
      os << fmt17(c.points(r, i));
    }
    os << "\n";
  }
  return os.str();
}

Curve parse_curve_text(const std::string& text, const std::string& origin) {
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  const auto fail = [&](const std::string& msg) {
    throw std::runtime_error(origin + ":" + std::to_string(lineno) + ": " + msg);
  };

  if (!std::getline(in, line)) {
    lineno = 1;
    fail("empty curve file");
  }
  lineno = 1;
  Eigen::Index d = 0;
  Topology topology = Topology::Open;
  {
    std::istringstream hs(line);
    std::string hash, dtok, ttok;
    hs >> hash >> dtok >> ttok;
    if (hash != "#" || dtok.rfind("d=", 0) != 0 || ttok.rfind("topology=", 0) != 0)
      fail("expected header '# d=<d> topology=<open|closed>'");
    try {
      d = std::stol(dtok.substr(2));
      topology = topology_from(ttok.substr(9));
    } catch (const std::exception& e) {
      fail(e.what());
    }
    if (d < 1) fail("dimension must be >= 1");
  }

  std::vector<VectorXd> pts;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    VectorXd p(d);
    std::istringstream ls(line);
    std::string field;
    Eigen::Index r = 0;
    while (std::getline(ls, field, ',')) {
      if (r >= d) fail("too many fields (expected " + std::to_string(d) + ")");
      try {
        size_t used = 0;
        p[r] = std::stod(field, &used);
        while (used < field.size() && std::isspace(static_cast<unsigned char>(field[used])))
          ++used;
        if (used != field.size()) throw std::runtime_error("trailing characters");
      } catch (const std::exception&) {
        fail("bad numeric field '" + field + "'");
      }
      ++r;
    }
    if (r != d) fail("ragged row: got " + std::to_string(r) + " fields, expected " +
                     std::to_string(d));
    if (!p.allFinite()) fail("non-finite value");
    pts.push_back(std::move(p));
  }

  Curve c;
  c.topology = topology;
  c.points.resize(d, static_cast<Eigen::Index>(pts.size()));
  for (size_t i = 0; i < pts.size(); ++i) c.points.col(static_cast<Eigen::Index>(i)) = pts[i];
  ++lineno;
  if (c.size() < 2) fail("curve needs at least 2 points");
  c.validate();
  return c;
}

Curve parse_curve_file(const std::string& path) {
  return parse_curve_text(read_file(path), path);
}

void write_curve_file(const Curve& c, const std::string& path) {
  write_file(path, format_curve_text(c));
}

namespace {

json manifest_to_json(const PairDataset& ds, const std::string& command_line) {
  json j;
  j["format_version"] = 1;
  j["command"] = command_line;
  j["meta"] = {{"d", ds.meta.d},
               {"n", ds.meta.n},
               {"topology", topology_name(ds.meta.topology)},
               {"labeler", method_name(ds.meta.labeler)},
               {"seed", ds.meta.seed},
               {"generator", ds.meta.generator}};
  json records = json::array();
  for (const PairRecord& r : ds.records) {
    records.push_back(
        {{"a", curve_to_json(r.a)}, {"b", curve_to_json(r.b)}, {"label", r.label}});
  }
  j["records"] = std::move(records);
  return j;
}

}  // namespace

void write_manifest(const PairDataset& ds, const std::string& path,
                    const std::string& command_line) {
  write_file(path, manifest_to_json(ds, command_line).dump() + "\n");
}

PairDataset parse_manifest(const std::string& path) {
  const json j = json::parse(read_file(path));
  if (!j.contains("format_version") || j["format_version"].get<int>() != 1)
    throw std::runtime_error(path + ": unrecognized manifest version");
  PairDataset ds;
  const json& meta = j.at("meta");
  ds.meta.d = meta.at("d").get<Eigen::Index>();
  ds.meta.n = meta.at("n").get<Eigen::Index>();
  ds.meta.topology = topology_from(meta.at("topology").get<std::string>());
  ds.meta.labeler = method_from(meta.at("labeler").get<std::string>());
  ds.meta.seed = meta.at("seed").get<unsigned long long>();
  ds.meta.generator = meta.value("generator", "");
  for (const json& r : j.at("records")) {
    PairRecord rec;
    rec.a = curve_from_json(r.at("a"), ds.meta.topology);
    rec.b = curve_from_json(r.at("b"), ds.meta.topology);
    rec.label = r.at("label").get<double>();
    if (!std::isfinite(rec.label) || rec.label < 0.0)
      throw std::runtime_error(path + ": invalid label");
    ds.records.push_back(std::move(rec));
  }
  return ds;
}

void write_manifest_with_predictions(const PairDataset& ds, const std::vector<double>& preds,
                                     const std::string& path, const std::string& command_line) {
  if (preds.size() != ds.records.size())
    throw std::invalid_argument("prediction count mismatch");
  json j = manifest_to_json(ds, command_line);
  for (size_t i = 0; i < preds.size(); ++i) j["records"][i]["prediction"] = preds[i];
  write_file(path, j.dump() + "\n");
}

std::vector<double> parse_manifest_predictions(const std::string& path) {
  const json j = json::parse(read_file(path));
  std::vector<double> preds;
  for (const json& r : j.at("records")) preds.push_back(r.at("prediction").get<double>());
  return preds;
}

// ---------------------------------------------------------------------------
// Checkpoints
// ---------------------------------------------------------------------------

namespace {

// All tensors, running stats included, in serialization order.
std::vector<std::pair<std::string, const MatrixXd*>> tensor_list_matrices(
    const NetworkParams& p, std::vector<std::pair<std::string, const VectorXd*>>& vectors) {
  std::vector<std::pair<std::string, const MatrixXd*>> mats;
  for (size_t i = 0; i < p.conv.size(); ++i) {
    const std::string tag = "conv" + std::to_string(i);
    mats.push_back({tag + ".w", &p.conv[i].w});
    vectors.push_back({tag + ".b", &p.conv[i].b});
    vectors.push_back({tag + ".bn_gamma", &p.conv[i].bn_gamma});
    vectors.push_back({tag + ".bn_beta", &p.conv[i].bn_beta});
    vectors.push_back({tag + ".bn_rmean", &p.conv[i].bn_rmean});
    vectors.push_back({tag + ".bn_rvar", &p.conv[i].bn_rvar});
  }
  for (size_t i = 0; i < p.dense.size(); ++i) {
    const std::string tag = "dense" + std::to_string(i);
    mats.push_back({tag + ".w", &p.dense[i].w});
    vectors.push_back({tag + ".b", &p.dense[i].b});
  }
  return mats;
}

}  // namespace

void save_checkpoint(const NetworkParams& params, const std::string& path,
                     const std::string& command_line) {
  json header;
  header["magic"] = "srvdist-checkpoint";
  header["version"] = params.version;
  header["command"] = command_line;
  header["arch"] = {{"n", params.arch.n},
                    {"d", params.arch.d},
                    {"conv_channels", params.arch.conv_channels},
                    {"dense_widths", params.arch.effective_dense_widths()},
                    {"kernel", params.arch.kernel},
                    {"pool", params.arch.pool}};
  header["bn_momentum"] = params.bn_momentum;
  header["init_seed"] = params.init_seed;

  std::vector<std::pair<std::string, const VectorXd*>> vecs;
  const auto mats = tensor_list_matrices(params, vecs);
  json tensors = json::array();
  std::string blob;
  const auto append = [&blob](const double* data, Eigen::Index count) {
    blob.append(reinterpret_cast<const char*>(data), sizeof(double) * count);
  };
  for (const auto& [name, m] : mats) {
    tensors.push_back({{"name", name}, {"rows", m->rows()}, {"cols", m->cols()}});
    append(m->data(), m->size());
  }
  for (const auto& [name, v] : vecs) {
    tensors.push_back({{"name", name}, {"rows", v->size()}, {"cols", 1}});
    append(v->data(), v->size());
  }
  header["tensors"] = std::move(tensors);

  write_file(path, header.dump() + "\n" + blob);
}

NetworkParams load_checkpoint(const std::string& path) {
  const std::string data = read_file(path);
  const size_t nl = data.find('\n');
  if (nl == std::string::npos) throw std::runtime_error(path + ": truncated checkpoint");
  const json header = json::parse(data.substr(0, nl));
  if (header.value("magic", "") != "srvdist-checkpoint")
    throw std::runtime_error(path + ": not a checkpoint file");

  NetworkParams p;
  p.version = header.at("version").get<int>();
  const json& arch = header.at("arch");
  p.arch.n = arch.at("n").get<Eigen::Index>();
  p.arch.d = arch.at("d").get<Eigen::Index>();
  p.arch.conv_channels = arch.at("conv_channels").get<std::vector<int>>();
  p.arch.dense_widths = arch.at("dense_widths").get<std::vector<int>>();
  p.arch.kernel = arch.at("kernel").get<int>();
  p.arch.pool = arch.at("pool").get<int>();
  p.bn_momentum = header.at("bn_momentum").get<double>();
  p.init_seed = header.at("init_seed").get<unsigned long long>();

  // allocate shapes, then overwrite from the blob
  NetworkParams shaped = NetworkParams::init(p.arch, 0);
  shaped.version = p.version;
  shaped.bn_momentum = p.bn_momentum;
  shaped.init_seed = p.init_seed;

  std::vector<std::pair<std::string, const VectorXd*>> vecs;
  const auto mats = tensor_list_matrices(shaped, vecs);
  size_t offset = nl + 1;
  const auto read_tensor = [&](double* dst, Eigen::Index count, const std::string& name) {
    const size_t bytes = sizeof(double) * count;
    if (offset + bytes > data.size())
      throw std::runtime_error(path + ": checkpoint blob too short at " + name);
    std::memcpy(dst, data.data() + offset, bytes);
    offset += bytes;
  };
  for (const auto& [name, m] : mats) read_tensor(const_cast<double*>(m->data()), m->size(), name);
  for (const auto& [name, v] : vecs) read_tensor(const_cast<double*>(v->data()), v->size(), name);
  if (offset != data.size()) throw std::runtime_error(path + ": trailing bytes in checkpoint");
  return shaped;
}

void write_history(const TrainHistory& history, const std::string& path,
                   const std::string& command_line) {
  json j;
  j["format_version"] = 1;
  j["command"] = command_line;
  j["train_mse"] = history.train_mse;
  j["test_mse"] = history.test_mse;
  write_file(path, j.dump() + "\n");
}

}  // namespace srvdist
