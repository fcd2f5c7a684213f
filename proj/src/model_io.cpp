#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <sstream>

#include "vnfscale/error.hpp"
#include "vnfscale/learners.hpp"
#include "vnfscale/util.hpp"

// Model file layout, all integers little-endian:
//   8 bytes  magic "VNFSCALE"
//   u32      format version
//   u8       algorithm tag
//   u64      payload length in bytes
//   u64      FNV-1a checksum of the payload
//   payload  common header, then algorithm-specific body

namespace vnfscale {

namespace {

constexpr char kMagic[8] = {'V', 'N', 'F', 'S', 'C', 'A', 'L', 'E'};
constexpr std::size_t kHeaderSize = 8 + 4 + 1 + 8 + 8;

class Writer {
 public:
  void u8(std::uint8_t v) { out_.push_back(static_cast<char>(v)); }
  void u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) u8(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void u64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) u8(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void i32(std::int32_t v) { u32(static_cast<std::uint32_t>(v)); }
  void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
  std::string& bytes() { return out_; }

 private:
  std::string out_;
};

class Reader {
 public:
  explicit Reader(std::string_view bytes) : in_(bytes) {}
  std::uint8_t u8() {
    need(1);
    return static_cast<std::uint8_t>(in_[pos_++]);
  }
  std::uint32_t u32() {
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(u8()) << (8 * i);
    return v;
  }
  std::uint64_t u64() {
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(u8()) << (8 * i);
    return v;
  }
  std::int32_t i32() { return static_cast<std::int32_t>(u32()); }
  double f64() { return std::bit_cast<double>(u64()); }
  // Element counts are bounded by the remaining bytes to reject garbage early.
  std::size_t count(std::size_t element_size) {
    const std::uint32_t n = u32();
    if (static_cast<std::uint64_t>(n) * element_size > in_.size() - pos_) throw CorruptionError("model payload truncated");
    return n;
  }
  bool done() const { return pos_ == in_.size(); }

 private:
  void need(std::size_t n) const {
    if (in_.size() - pos_ < n) throw CorruptionError("model payload truncated");
  }
  std::string_view in_;
  std::size_t pos_ = 0;
};

void write_tree(Writer& w, const DecisionTree& tree) {
  w.u32(static_cast<std::uint32_t>(tree.nodes.size()));
  for (const auto& n : tree.nodes) {
    w.i32(n.feature);
    w.f64(n.threshold);
    w.i32(n.left);
    w.i32(n.right);
    w.i32(n.label);
  }
}

DecisionTree read_tree(Reader& r, int feature_count, int class_count) {
  DecisionTree tree;
  tree.nodes.resize(r.count(24));
  const auto size = static_cast<int>(tree.nodes.size());
  if (size == 0) throw CorruptionError("empty tree");
  for (int i = 0; i < size; ++i) {
    auto& n = tree.nodes[static_cast<std::size_t>(i)];
    n.feature = r.i32();
    n.threshold = r.f64();
    n.left = r.i32();
    n.right = r.i32();
    n.label = r.i32();
    const bool leaf = n.feature == -1;
    const bool inner_ok = n.feature >= 0 && n.feature < feature_count && n.left > i && n.right > i &&
                          n.left < size && n.right < size;
    if ((!leaf && !inner_ok) || n.label < 0 || n.label >= class_count) throw CorruptionError("invalid tree node");
  }
  return tree;
}

template <typename T, typename F>
void write_vec(Writer& w, const std::vector<T>& v, F put) {
  w.u32(static_cast<std::uint32_t>(v.size()));
  for (const auto& x : v) put(x);
}

}  // namespace

std::string save_model(const TrainedModel& model) {
  Writer body;
  body.i32(model.feature_count);
  body.i32(model.v_min);
  body.i32(model.v_max);
  body.u64(model.seed);
  body.u64(model.instance_count);
  body.u8(model.label_kind == LabelKind::qml ? 0 : 1);
  const auto& fp = model.params.forest;
  body.i32(fp.n_trees);
  body.i32(fp.features_per_split);
  body.i32(fp.min_leaf_size);
  body.i32(fp.max_depth);
  body.u8(fp.bootstrap ? 1 : 0);
  body.i32(model.params.moving_average.window);

  std::visit(
      [&](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, TreeModel>) {
          write_tree(body, p.tree);
        } else if constexpr (std::is_same_v<T, ForestModel>) {
          body.u32(static_cast<std::uint32_t>(p.trees.size()));
          for (const auto& t : p.trees) write_tree(body, t);
        } else if constexpr (std::is_same_v<T, GaussianBayesModel>) {
          write_vec(body, p.class_seen, [&](std::uint8_t x) { body.u8(x); });
          write_vec(body, p.log_prior, [&](double x) { body.f64(x); });
          write_vec(body, p.feature_used, [&](std::uint8_t x) { body.u8(x); });
          write_vec(body, p.mean, [&](double x) { body.f64(x); });
          write_vec(body, p.variance, [&](double x) { body.f64(x); });
        } else if constexpr (std::is_same_v<T, MovingAverageModel>) {
          body.i32(p.params.window);
        } else {
          body.i32(p.label);
        }
      },
      model.payload);

  Writer out;
  for (char c : kMagic) out.u8(static_cast<std::uint8_t>(c));
  out.u32(kModelFormatVersion);
  out.u8(static_cast<std::uint8_t>(model.algorithm));
  out.u64(body.bytes().size());
  out.u64(fnv1a64(body.bytes()));
  out.bytes() += body.bytes();
  return std::move(out.bytes());
}

TrainedModel load_model(std::string_view bytes) {
  if (bytes.size() < kHeaderSize) throw CorruptionError("model file truncated (header)");
  if (std::memcmp(bytes.data(), kMagic, sizeof(kMagic)) != 0) throw CorruptionError("not a model file (bad magic)");
  Reader header(bytes.substr(8, kHeaderSize - 8));
  const std::uint32_t version = header.u32();
  if (version != kModelFormatVersion)
    throw FormatVersionError("model format version " + std::to_string(version) + " is not supported (expected " +
                             std::to_string(kModelFormatVersion) + ")");
  const std::uint8_t tag = header.u8();
  const std::uint64_t length = header.u64();
  const std::uint64_t checksum = header.u64();
  if (bytes.size() - kHeaderSize != length) throw CorruptionError("model payload truncated or padded");
  const std::string_view payload = bytes.substr(kHeaderSize);
  if (fnv1a64(payload) != checksum) throw CorruptionError("model checksum mismatch");
  if (tag > static_cast<std::uint8_t>(Algorithm::majority_class)) throw CorruptionError("unknown algorithm tag");

  TrainedModel model;
  model.algorithm = static_cast<Algorithm>(tag);
  Reader r(payload);
  model.feature_count = r.i32();
  model.v_min = r.i32();
  model.v_max = r.i32();
  model.seed = r.u64();
  model.instance_count = r.u64();
  model.label_kind = r.u8() == 0 ? LabelKind::qml : LabelKind::cml;
  auto& fp = model.params.forest;
  fp.n_trees = r.i32();
  fp.features_per_split = r.i32();
  fp.min_leaf_size = r.i32();
  fp.max_depth = r.i32();
  fp.bootstrap = r.u8() != 0;
  model.params.moving_average.window = r.i32();
  if (model.feature_count < 0 || model.feature_count > kMaxFeatures || model.v_min < 1 || model.v_max < model.v_min)
    throw CorruptionError("invalid model header fields");
  const int classes = model.class_count();

  switch (model.algorithm) {
    case Algorithm::decision_tree:
    case Algorithm::random_tree:
      model.payload = TreeModel{read_tree(r, model.feature_count, classes)};
      break;
    case Algorithm::random_forest: {
      ForestModel forest;
      forest.trees.resize(r.count(1));
      if (forest.trees.empty()) throw CorruptionError("forest without trees");
      for (auto& t : forest.trees) t = read_tree(r, model.feature_count, classes);
      model.payload = std::move(forest);
      break;
    }
    case Algorithm::naive_bayes: {
      GaussianBayesModel m;
      m.class_seen.resize(r.count(1));
      for (auto& x : m.class_seen) x = r.u8();
      m.log_prior.resize(r.count(8));
      for (auto& x : m.log_prior) x = r.f64();
      m.feature_used.resize(r.count(1));
      for (auto& x : m.feature_used) x = r.u8();
      m.mean.resize(r.count(8));
      for (auto& x : m.mean) x = r.f64();
      m.variance.resize(r.count(8));
      for (auto& x : m.variance) x = r.f64();
      const auto c = static_cast<std::size_t>(classes), f = static_cast<std::size_t>(model.feature_count);
      if (m.class_seen.size() != c || m.log_prior.size() != c || m.feature_used.size() != f ||
          m.mean.size() != c * f || m.variance.size() != c * f)
        throw CorruptionError("naive Bayes tables have inconsistent sizes");
      model.payload = std::move(m);
      break;
    }
    case Algorithm::moving_average:
      model.payload = MovingAverageModel{MovingAverageParams{r.i32()}};
      break;
    case Algorithm::majority_class: {
      const int label = r.i32();
      if (label < 0 || label >= classes) throw CorruptionError("constant label out of range");
      model.payload = ConstantModel{label};
      break;
    }
  }
  if (!r.done()) throw CorruptionError("trailing bytes after model payload");
  return model;
}

void save_model_file(const std::string& path, const TrainedModel& model) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write model file " + path);
  const auto bytes = save_model(model);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

TrainedModel load_model_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open model file " + path);
  std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return load_model(bytes);
}

}  // namespace vnfscale
