#include "gprdl/io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <vector>

namespace gprdl {

namespace {

static_assert(std::endian::native == std::endian::little,
              "container I/O assumes a little-endian host");

constexpr char kMagic[6] = {'S', 'P', 'T', 'R', '1', '\n'};
constexpr std::uint64_t kHeaderLenOffset = 7;

using json = nlohmann::json;

void write_container(const std::filesystem::path& path, ContainerKind kind, const json& header,
                     const std::vector<double>& payload) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot open for writing: " + path.string());
  out.write(kMagic, sizeof(kMagic));
  const unsigned char tag = static_cast<unsigned char>(kind);
  out.write(reinterpret_cast<const char*>(&tag), 1);
  const std::string hdr = header.dump();
  const std::uint32_t hlen = static_cast<std::uint32_t>(hdr.size());
  out.write(reinterpret_cast<const char*>(&hlen), 4);
  out.write(hdr.data(), static_cast<std::streamsize>(hdr.size()));
  out.write(reinterpret_cast<const char*>(payload.data()),
            static_cast<std::streamsize>(payload.size() * sizeof(double)));
  if (!out) throw DataError("write failed: " + path.string());
}

struct Container {
  json header;
  std::vector<double> payload;
};

// `expected_count` comes from the header dimensions; the payload must match
// it exactly.
Container read_container(const std::filesystem::path& path, ContainerKind kind) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open for reading: " + path.string());
  std::vector<char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());

  if (bytes.size() < sizeof(kMagic) || std::memcmp(bytes.data(), kMagic, sizeof(kMagic)) != 0)
    throw FormatError(path.string() + ": bad magic", 0);
  if (bytes.size() < 7) throw FormatError(path.string() + ": truncated before kind tag", 6);
  const unsigned char tag = static_cast<unsigned char>(bytes[6]);
  if (tag > 4) throw FormatError(path.string() + ": unknown kind tag", 6);
  if (tag != static_cast<unsigned char>(kind))
    throw FormatError(path.string() + ": kind tag " + std::to_string(tag) +
                          ", expected " + std::to_string(static_cast<int>(kind)),
                      6);
  if (bytes.size() < kHeaderLenOffset + 4)
    throw FormatError(path.string() + ": truncated header length", kHeaderLenOffset);
  std::uint32_t hlen;
  std::memcpy(&hlen, bytes.data() + kHeaderLenOffset, 4);
  const std::uint64_t payload_offset = kHeaderLenOffset + 4 + hlen;
  if (bytes.size() < payload_offset)
    throw FormatError(path.string() + ": truncated JSON header", kHeaderLenOffset + 4);

  Container c;
  try {
    c.header = json::parse(bytes.begin() + kHeaderLenOffset + 4, bytes.begin() + payload_offset);
  } catch (const json::exception& e) {
    throw FormatError(path.string() + ": malformed JSON header: " + e.what(),
                      kHeaderLenOffset + 4);
  }

  const std::uint64_t payload_bytes = bytes.size() - payload_offset;
  std::uint64_t expected = 0;
  if (c.header.contains("rows") && c.header.contains("cols"))
    expected = c.header["rows"].get<std::uint64_t>() * c.header["cols"].get<std::uint64_t>();
  else if (c.header.contains("payload_count"))
    expected = c.header["payload_count"].get<std::uint64_t>();
  if (payload_bytes != expected * sizeof(double))
    throw FormatError(path.string() + ": payload is " + std::to_string(payload_bytes) +
                          " bytes, header declares " + std::to_string(expected * sizeof(double)),
                      payload_offset);

  c.payload.resize(expected);
  std::memcpy(c.payload.data(), bytes.data() + payload_offset, payload_bytes);
  return c;
}

std::vector<double> matrix_row_major(const Matrix& m) {
  std::vector<double> out(static_cast<std::size_t>(m.size()));
  std::size_t k = 0;
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) out[k++] = m(i, j);
  return out;
}

Matrix matrix_from_row_major(const std::vector<double>& v, Eigen::Index rows, Eigen::Index cols) {
  Matrix m(rows, cols);
  std::size_t k = 0;
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = v[k++];
  return m;
}

}  // namespace

void save_bscan(const BScan& b, const std::filesystem::path& path) {
  json header = {{"rows", b.data.rows()},
                 {"cols", b.data.cols()},
                 {"dtype", "f64le"},
                 {"dt", b.dt},
                 {"dx", b.dx},
                 {"metadata", b.metadata}};
  write_container(path, ContainerKind::kBScan, header, matrix_row_major(b.data));
}

BScan load_bscan(const std::filesystem::path& path) {
  Container c = read_container(path, ContainerKind::kBScan);
  BScan b;
  b.dt = c.header.at("dt").get<double>();
  b.dx = c.header.at("dx").get<double>();
  b.metadata = c.header.value("metadata", std::map<std::string, std::string>{});
  b.data = matrix_from_row_major(c.payload, c.header.at("rows").get<Eigen::Index>(),
                                 c.header.at("cols").get<Eigen::Index>());
  return b;
}

void save_profiles(const ProfileMatrix& pm, const std::filesystem::path& path) {
  json header = {{"rows", pm.data.rows()}, {"cols", pm.data.cols()}, {"dtype", "f64le"}};
  header["labels"] = pm.labels ? json(*pm.labels) : json(nullptr);
  write_container(path, ContainerKind::kProfileMatrix, header, matrix_row_major(pm.data));
}

ProfileMatrix load_profiles(const std::filesystem::path& path) {
  Container c = read_container(path, ContainerKind::kProfileMatrix);
  ProfileMatrix pm;
  pm.data = matrix_from_row_major(c.payload, c.header.at("rows").get<Eigen::Index>(),
                                  c.header.at("cols").get<Eigen::Index>());
  if (!c.header.at("labels").is_null()) pm.labels = c.header["labels"].get<std::vector<int>>();
  return pm;
}

void save_dictionary(const Dictionary& d, const std::filesystem::path& path,
                     const nlohmann::json& provenance) {
  json header = {{"rows", d.atoms.rows()},
                 {"cols", d.atoms.cols()},
                 {"dtype", "f64le"},
                 {"config", provenance}};
  write_container(path, ContainerKind::kDictionary, header, matrix_row_major(d.atoms));
}

Dictionary load_dictionary(const std::filesystem::path& path) {
  Container c = read_container(path, ContainerKind::kDictionary);
  Dictionary d;
  d.atoms = matrix_from_row_major(c.payload, c.header.at("rows").get<Eigen::Index>(),
                                  c.header.at("cols").get<Eigen::Index>());
  return d;
}

nlohmann::json load_dictionary_provenance(const std::filesystem::path& path) {
  return read_container(path, ContainerKind::kDictionary).header.value("config", json::object());
}

void save_truth(const SceneTruth& t, const std::filesystem::path& path) {
  // Masks are disjoint, so a single class-id grid encodes them all.
  json header = {{"rows", t.labels.rows()}, {"cols", t.labels.cols()}, {"dtype", "f64le"}};
  std::vector<double> payload(static_cast<std::size_t>(t.labels.size()));
  std::size_t k = 0;
  for (Eigen::Index i = 0; i < t.labels.rows(); ++i)
    for (Eigen::Index j = 0; j < t.labels.cols(); ++j)
      payload[k++] = static_cast<double>(t.labels(i, j));
  write_container(path, ContainerKind::kSceneTruth, header, payload);
}

SceneTruth load_truth(const std::filesystem::path& path) {
  Container c = read_container(path, ContainerKind::kSceneTruth);
  const auto rows = c.header.at("rows").get<Eigen::Index>();
  const auto cols = c.header.at("cols").get<Eigen::Index>();
  SceneTruth t;
  t.labels.resize(rows, cols);
  std::size_t k = 0;
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) t.labels(i, j) = static_cast<int>(c.payload[k++]);
  return t;
}

void save_svm_model(const RbfSvmModel& m, const std::filesystem::path& path) {
  json binaries = json::array();
  std::vector<double> payload;
  for (const auto& b : m.binaries) {
    binaries.push_back({{"class", b.class_id},
                        {"nsv", b.support_vectors.cols()},
                        {"bias", b.bias}});
    // Per binary: support vectors (nsv x dim, row-major), then coefficients.
    for (Eigen::Index k = 0; k < b.support_vectors.cols(); ++k)
      for (Eigen::Index d = 0; d < b.support_vectors.rows(); ++d)
        payload.push_back(b.support_vectors(d, k));
    for (Eigen::Index k = 0; k < b.coefficients.size(); ++k)
      payload.push_back(b.coefficients(k));
  }
  json header = {{"dim", m.dim()},
                 {"classes", m.classes},
                 {"C", m.C},
                 {"gamma", m.gamma},
                 {"scale_lo", std::vector<double>(m.scale_lo.begin(), m.scale_lo.end())},
                 {"scale_hi", std::vector<double>(m.scale_hi.begin(), m.scale_hi.end())},
                 {"binaries", binaries},
                 {"dtype", "f64le"},
                 {"payload_count", payload.size()}};
  write_container(path, ContainerKind::kSvmModel, header, payload);
}

RbfSvmModel load_svm_model(const std::filesystem::path& path) {
  Container c = read_container(path, ContainerKind::kSvmModel);
  RbfSvmModel m;
  const auto dim = c.header.at("dim").get<Eigen::Index>();
  m.classes = c.header.at("classes").get<std::vector<int>>();
  m.C = c.header.at("C").get<double>();
  m.gamma = c.header.at("gamma").get<double>();
  const auto lo = c.header.at("scale_lo").get<std::vector<double>>();
  const auto hi = c.header.at("scale_hi").get<std::vector<double>>();
  m.scale_lo = Eigen::Map<const Vector>(lo.data(), static_cast<Eigen::Index>(lo.size()));
  m.scale_hi = Eigen::Map<const Vector>(hi.data(), static_cast<Eigen::Index>(hi.size()));

  std::size_t k = 0;
  for (const auto& bj : c.header.at("binaries")) {
    RbfSvmModel::Binary b;
    b.class_id = bj.at("class").get<int>();
    b.bias = bj.at("bias").get<double>();
    const auto nsv = bj.at("nsv").get<Eigen::Index>();
    if (k + static_cast<std::size_t>(nsv * (dim + 1)) > c.payload.size())
      throw FormatError(path.string() + ": SVM payload shorter than binaries declare", 0);
    b.support_vectors.resize(dim, nsv);
    for (Eigen::Index s = 0; s < nsv; ++s)
      for (Eigen::Index d = 0; d < dim; ++d) b.support_vectors(d, s) = c.payload[k++];
    b.coefficients.resize(nsv);
    for (Eigen::Index s = 0; s < nsv; ++s) b.coefficients(s) = c.payload[k++];
    m.binaries.push_back(std::move(b));
  }
  if (k != c.payload.size())
    throw FormatError(path.string() + ": SVM payload longer than binaries declare", 0);
  return m;
}

}  // namespace gprdl
