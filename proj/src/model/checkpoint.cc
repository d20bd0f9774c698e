// Copyright 2026 The Dereverb Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "dereverb/model/checkpoint.h"

#include <zlib.h>

#include <cstring>
#include <fstream>
#include <iterator>

#include "dereverb/common/error.h"

namespace dereverb::model {
namespace {

// Layout (little endian):
//   magic[8] | u32 version | u64 header_len | header JSON
//   | u64 block_count | blocks... | u32 crc32 of everything before it
// block: u32 name_len | name | u32 ndim | u64 dims[ndim] | f64 values[]

class Writer {
 public:
  template <typename T>
  void Put(const T& v) {
    const char* p = reinterpret_cast<const char*>(&v);
    buf_.insert(buf_.end(), p, p + sizeof(T));
  }
  void PutBytes(const void* data, std::size_t n) {
    const char* p = static_cast<const char*>(data);
    buf_.insert(buf_.end(), p, p + n);
  }
  std::vector<char>& buffer() { return buf_; }

 private:
  std::vector<char> buf_;
};

class Reader {
 public:
  Reader(const std::vector<char>& buf, std::size_t end, std::string path)
      : buf_(buf), end_(end), path_(std::move(path)) {}

  template <typename T>
  T Get() {
    T v;
    GetBytes(&v, sizeof(T));
    return v;
  }
  void GetBytes(void* out, std::size_t n) {
    if (n > end_ - pos_) {
      throw DataError("checkpoint " + path_ + " is truncated");
    }
    std::memcpy(out, buf_.data() + pos_, n);
    pos_ += n;
  }
  std::size_t remaining() const { return end_ - pos_; }

 private:
  const std::vector<char>& buf_;
  std::size_t end_;
  std::size_t pos_ = 0;
  std::string path_;
};

std::uint32_t Crc(const char* data, std::size_t n) {
  uLong crc = crc32(0L, Z_NULL, 0);
  while (n > 0) {
    const uInt chunk = static_cast<uInt>(std::min<std::size_t>(n, 1u << 30));
    crc = crc32(crc, reinterpret_cast<const Bytef*>(data), chunk);
    data += chunk;
    n -= chunk;
  }
  return static_cast<std::uint32_t>(crc);
}

}  // namespace

const CheckpointBlock* Checkpoint::Find(const std::string& name) const {
  for (const auto& b : blocks) {
    if (b.name == name) return &b;
  }
  return nullptr;
}

void WriteCheckpoint(const Checkpoint& ckpt,
                     const std::filesystem::path& path) {
  Writer w;
  w.PutBytes(kCheckpointMagic, sizeof(kCheckpointMagic));
  w.Put<std::uint32_t>(kCheckpointVersion);
  const std::string header =
      nlohmann::json{{"config", ToJson(ckpt.config)},
                     {"metadata", ckpt.metadata}}
          .dump();
  w.Put<std::uint64_t>(header.size());
  w.PutBytes(header.data(), header.size());
  w.Put<std::uint64_t>(ckpt.blocks.size());
  for (const auto& b : ckpt.blocks) {
    DEREVERB_CHECK(ad::NumElements(b.shape) == b.values.size(),
                   "checkpoint block " + b.name + " does not match its shape");
    w.Put<std::uint32_t>(static_cast<std::uint32_t>(b.name.size()));
    w.PutBytes(b.name.data(), b.name.size());
    w.Put<std::uint32_t>(static_cast<std::uint32_t>(b.shape.size()));
    for (std::size_t d : b.shape) w.Put<std::uint64_t>(d);
    w.PutBytes(b.values.data(), b.values.size() * sizeof(double));
  }
  auto& buf = w.buffer();
  w.Put<std::uint32_t>(Crc(buf.data(), buf.size()));

  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot open " + tmp.string() + " for writing");
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
    out.flush();
    if (!out) throw DataError("failed writing checkpoint " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    throw DataError("cannot move checkpoint into " + path.string() + ": " +
                    ec.message());
  }
}

Checkpoint ReadCheckpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open checkpoint " + path.string());
  std::vector<char> buf((std::istreambuf_iterator<char>(in)),
                        std::istreambuf_iterator<char>());
  const std::string name = path.string();
  constexpr std::size_t kMinSize =
      sizeof(kCheckpointMagic) + sizeof(std::uint32_t) * 2;
  if (buf.size() < kMinSize ||
      std::memcmp(buf.data(), kCheckpointMagic, sizeof(kCheckpointMagic)) != 0) {
    if (buf.size() >= sizeof(kCheckpointMagic) &&
        std::memcmp(buf.data(), kCheckpointMagic, sizeof(kCheckpointMagic)) == 0) {
      throw DataError("checkpoint " + name + " is truncated");
    }
    throw DataError(name + " is not a dereverb checkpoint");
  }
  std::uint32_t version;
  std::memcpy(&version, buf.data() + sizeof(kCheckpointMagic), sizeof(version));
  if (version != kCheckpointVersion) {
    throw DataError("checkpoint " + name + " has version " +
                    std::to_string(version) + ", expected " +
                    std::to_string(kCheckpointVersion));
  }
  const std::size_t body = buf.size() - sizeof(std::uint32_t);
  std::uint32_t stored;
  std::memcpy(&stored, buf.data() + body, sizeof(stored));
  if (Crc(buf.data(), body) != stored) {
    throw DataError("checkpoint " + name +
                    " failed its checksum (truncated or corrupt)");
  }

  Reader r(buf, body, name);
  char magic[sizeof(kCheckpointMagic)];
  r.GetBytes(magic, sizeof(magic));
  r.Get<std::uint32_t>();
  Checkpoint ckpt;
  const auto header_len = r.Get<std::uint64_t>();
  if (header_len > r.remaining()) throw DataError("checkpoint " + name + " is truncated");
  std::string header(header_len, '\0');
  r.GetBytes(header.data(), header_len);
  try {
    auto j = nlohmann::json::parse(header);
    ckpt.config = ModelConfigFromJson(j.at("config"));
    ckpt.metadata = j.value("metadata", nlohmann::json::object());
  } catch (const nlohmann::json::exception& e) {
    throw DataError("checkpoint " + name + " has a bad header: " + e.what());
  } catch (const InvalidArgument& e) {
    throw DataError("checkpoint " + name + " has a bad config: " + e.what());
  }
  const auto count = r.Get<std::uint64_t>();
  for (std::uint64_t i = 0; i < count; ++i) {
    CheckpointBlock b;
    const auto name_len = r.Get<std::uint32_t>();
    if (name_len > r.remaining()) throw DataError("checkpoint " + name + " is truncated");
    b.name.resize(name_len);
    r.GetBytes(b.name.data(), name_len);
    const auto ndim = r.Get<std::uint32_t>();
    if (ndim > 8) throw DataError("checkpoint " + name + " block has bad rank");
    for (std::uint32_t d = 0; d < ndim; ++d) b.shape.push_back(r.Get<std::uint64_t>());
    const std::size_t n = ad::NumElements(b.shape);
    if (n > r.remaining() / sizeof(double)) {
      throw DataError("checkpoint " + name + " is truncated");
    }
    b.values.resize(n);
    r.GetBytes(b.values.data(), n * sizeof(double));
    ckpt.blocks.push_back(std::move(b));
  }
  if (r.remaining() != 0) {
    throw DataError("checkpoint " + name + " has trailing bytes");
  }
  return ckpt;
}

Checkpoint ToCheckpoint(const MimoTacModel& model) {
  Checkpoint ckpt;
  ckpt.config = model.config();
  for (const auto& p : model.Parameters()) {
    ckpt.blocks.push_back({p.name, p.tensor.shape(),
                           {p.tensor.values().begin(), p.tensor.values().end()}});
  }
  return ckpt;
}

MimoTacModel FromCheckpoint(const Checkpoint& ckpt) {
  std::mt19937_64 rng(0);
  MimoTacModel model = MimoTacModel::Create(ckpt.config, rng);
  for (auto p : model.Parameters()) {
    const CheckpointBlock* b = ckpt.Find(p.name);
    if (b == nullptr) {
      throw DataError("checkpoint is missing parameter " + p.name);
    }
    if (b->shape != p.tensor.shape()) {
      throw DataError("checkpoint parameter " + p.name + " has shape " +
                      ad::ShapeString(b->shape) + ", model expects " +
                      ad::ShapeString(p.tensor.shape()));
    }
    std::copy(b->values.begin(), b->values.end(),
              p.tensor.mutable_values().begin());
  }
  return model;
}

void SaveModel(const MimoTacModel& model, const std::filesystem::path& path) {
  WriteCheckpoint(ToCheckpoint(model), path);
}

MimoTacModel LoadModel(const std::filesystem::path& path) {
  return FromCheckpoint(ReadCheckpoint(path));
}

}  // namespace dereverb::model
