#include "nehari/grid_function.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "nehari/errors.hpp"

namespace nehari {

namespace {

constexpr char kMagic[8] = {'N', 'H', 'R', 'G', 'R', 'I', 'D', '1'};
constexpr std::uint32_t kVersion = 1;

template <typename T>
void put(std::string& out, T v) {
  static_assert(std::endian::native == std::endian::little, "little-endian host expected");
  char buf[sizeof(T)];
  std::memcpy(buf, &v, sizeof(T));
  out.append(buf, sizeof(T));
}

template <typename T>
T get(std::istream& in) {
  T v;
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!in) throw SchemaError("grid", "truncated grid file");
  return v;
}

}  // namespace

const char* to_string(GridDomain d) {
  switch (d) {
    case GridDomain::Fourier: return "FOURIER";
    case GridDomain::Time: return "TIME";
    case GridDomain::Matrix: return "MATRIX";
  }
  return "?";
}

GridFunction::GridFunction(Vec lo, Vec hi, std::vector<int> n, GridDomain domain)
    : lo_(std::move(lo)), hi_(std::move(hi)), n_(std::move(n)), domain_(domain) {
  if (n_.empty() || n_.size() > 2 || lo_.size() != static_cast<Eigen::Index>(n_.size()) || hi_.size() != lo_.size())
    throw std::invalid_argument("grid: dimension must be 1 or 2 with matching box");
  std::size_t total = 1;
  for (std::size_t a = 0; a < n_.size(); ++a) {
    if (n_[a] < 1) throw std::invalid_argument("grid: sample count must be >= 1");
    if (!(hi_[a] > lo_[a])) throw std::invalid_argument("grid: empty box");
    total *= static_cast<std::size_t>(n_[a]);
  }
  samples_.assign(total, cplx(0.0, 0.0));
}

GridFunction::GridFunction(Vec lo, Vec hi, std::vector<int> n, GridDomain domain, std::vector<cplx> samples)
    : GridFunction(std::move(lo), std::move(hi), std::move(n), domain) {
  if (samples.size() != samples_.size()) throw std::invalid_argument("grid: sample count mismatch");
  samples_ = std::move(samples);
}

double GridFunction::cell_volume() const {
  double v = 1.0;
  for (int a = 0; a < dim(); ++a) v *= spacing(a);
  return v;
}

cplx GridFunction::interpolate(const Vec& x) const {
  int idx[2] = {0, 0};
  double w[2] = {0.0, 0.0};
  for (int a = 0; a < dim(); ++a) {
    const double u = (x[a] - lo_[a]) / spacing(a);
    if (!(u >= 0.0) || u > n_[a] - 1) return {0.0, 0.0};
    int i = static_cast<int>(std::floor(u));
    if (i >= n_[a] - 1) i = n_[a] - 2;
    if (i < 0) i = 0;
    idx[a] = i;
    w[a] = n_[a] == 1 ? 0.0 : u - i;
  }
  if (dim() == 1) {
    if (n_[0] == 1) return samples_[0];
    return (1.0 - w[0]) * samples_[idx[0]] + w[0] * samples_[idx[0] + 1];
  }
  const int i = idx[0], j = idx[1];
  const int i1 = std::min(i + 1, n_[0] - 1), j1 = std::min(j + 1, n_[1] - 1);
  return (1.0 - w[0]) * (1.0 - w[1]) * at(i, j) + w[0] * (1.0 - w[1]) * at(i1, j) + (1.0 - w[0]) * w[1] * at(i, j1) +
         w[0] * w[1] * at(i1, j1);
}

double GridFunction::l1() const {
  double s = 0.0;
  for (const auto& v : samples_) s += std::abs(v);
  return s * cell_volume();
}

double GridFunction::l2sq() const {
  double s = 0.0;
  for (const auto& v : samples_) s += std::norm(v);
  return s * cell_volume();
}

double GridFunction::max_abs() const {
  double m = 0.0;
  for (const auto& v : samples_) m = std::max(m, std::abs(v));
  return m;
}

void write_file_atomic(const std::string& path, const std::string& bytes) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp + " for writing");
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    out.flush();
    if (!out) throw std::runtime_error("write failed: " + tmp);
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw std::runtime_error("rename " + tmp + " -> " + path + ": " + ec.message());
}

void GridFunction::save(const std::string& path) const {
  std::string bin(kMagic, sizeof(kMagic));
  put<std::uint32_t>(bin, kVersion);
  put<std::uint32_t>(bin, static_cast<std::uint32_t>(dim()));
  for (int a = 0; a < dim(); ++a) {
    put<double>(bin, lo_[a]);
    put<double>(bin, hi_[a]);
    put<std::uint64_t>(bin, static_cast<std::uint64_t>(n_[a]));
  }
  put<std::uint32_t>(bin, static_cast<std::uint32_t>(domain_));
  for (const auto& v : samples_) {
    put<float>(bin, static_cast<float>(v.real()));
    put<float>(bin, static_cast<float>(v.imag()));
  }

  nlohmann::json meta;
  meta["format"] = "complex64-le";
  meta["version"] = kVersion;
  meta["domain"] = to_string(domain_);
  meta["dims"] = dim();
  for (int a = 0; a < dim(); ++a) meta["axes"].push_back({{"lo", lo_[a]}, {"hi", hi_[a]}, {"n", n_[a]}, {"h", spacing(a)}});
  meta["order"] = "axis 0 fastest";
  meta["l1"] = l1();
  meta["l2sq"] = l2sq();
  write_file_atomic(path, bin);
  write_file_atomic(path + ".json", meta.dump(2) + "\n");
}

GridFunction GridFunction::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SchemaError(path, "cannot open grid file");
  char magic[sizeof(kMagic)];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) throw SchemaError(path, "bad magic");
  if (get<std::uint32_t>(in) != kVersion) throw SchemaError(path, "unsupported version");
  const auto dims = get<std::uint32_t>(in);
  if (dims < 1 || dims > 2) throw SchemaError(path, "bad dimension");
  Vec lo(dims), hi(dims);
  std::vector<int> n(dims);
  for (std::uint32_t a = 0; a < dims; ++a) {
    lo[a] = get<double>(in);
    hi[a] = get<double>(in);
    n[a] = static_cast<int>(get<std::uint64_t>(in));
  }
  const auto domain = static_cast<GridDomain>(get<std::uint32_t>(in));
  GridFunction g(lo, hi, n, domain);
  for (auto& v : g.samples_) {
    const float re = get<float>(in);
    const float im = get<float>(in);
    v = cplx(re, im);
  }
  return g;
}

}  // namespace nehari
