#include "sonar/io.hpp"

#include <array>
#include <cstring>
#include <fstream>
#include <sstream>

#include "sonar/errors.hpp"

namespace sonar {

namespace {
std::array<std::uint32_t, 256> make_crc_table() {
  std::array<std::uint32_t, 256> t{};
  for (std::uint32_t i = 0; i < 256; ++i) {
    std::uint32_t c = i;
    for (int k = 0; k < 8; ++k) c = (c & 1) ? 0xEDB88320u ^ (c >> 1) : c >> 1;
    t[i] = c;
  }
  return t;
}
}  // namespace

std::uint32_t crc32(const void* data, std::size_t n, std::uint32_t seed) {
  static const auto table = make_crc_table();
  const auto* p = static_cast<const unsigned char*>(data);
  std::uint32_t c = seed ^ 0xFFFFFFFFu;
  for (std::size_t i = 0; i < n; ++i) c = table[(c ^ p[i]) & 0xFFu] ^ (c >> 8);
  return c ^ 0xFFFFFFFFu;
}

void write_signal_csv(const std::string& path, const BackscatterSignal& sig) {
  std::ofstream f(path);
  if (!f) throw DataFormatError("cannot open for writing: " + path);
  f.precision(17);
  f << "x,value\n";
  for (std::size_t i = 0; i < sig.values.size(); ++i)
    f << sig.x_coords[i] << "," << sig.values[i] << "\n";
  if (!f) throw DataFormatError("write failed: " + path);
}

BackscatterSignal read_signal_csv(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw DataFormatError("cannot open: " + path);
  std::string line;
  if (!std::getline(f, line) || line.rfind("x,value", 0) != 0)
    throw DataFormatError("bad signal CSV header in " + path);
  BackscatterSignal sig;
  while (std::getline(f, line)) {
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw DataFormatError("bad signal CSV row in " + path);
    try {
      sig.x_coords.push_back(std::stod(line.substr(0, comma)));
      sig.values.push_back(std::stod(line.substr(comma + 1)));
    } catch (const std::exception&) {
      throw DataFormatError("bad numeric value in " + path);
    }
  }
  // alpha and segment_width are not stored in the CSV; callers supply them.
  return sig;
}

namespace {
template <typename T>
void put(std::ostream& f, T v) {
  // Little-endian byte order is assumed (all supported targets).
  f.write(reinterpret_cast<const char*>(&v), sizeof(v));
}
template <typename T>
T get(std::istream& f) {
  T v{};
  f.read(reinterpret_cast<char*>(&v), sizeof(v));
  if (!f) throw DataFormatError("unexpected end of file");
  return v;
}
}  // namespace

void write_field(const std::string& path, const ComplexField& field) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw DataFormatError("cannot open for writing: " + path);
  put<std::uint64_t>(f, static_cast<std::uint64_t>(field.nx));
  put<std::uint64_t>(f, static_cast<std::uint64_t>(field.ny));
  put<double>(f, field.dx);
  put<double>(f, field.dy);
  put<double>(f, field.x0);
  put<double>(f, field.y0);
  for (const auto& v : field.data) {
    put<double>(f, v.real());
    put<double>(f, v.imag());
  }
  if (!f) throw DataFormatError("write failed: " + path);
}

ComplexField read_field(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw DataFormatError("cannot open: " + path);
  const auto nx = get<std::uint64_t>(f);
  const auto ny = get<std::uint64_t>(f);
  const double dx = get<double>(f), dy = get<double>(f);
  const double x0 = get<double>(f), y0 = get<double>(f);
  if (nx == 0 || ny == 0 || nx > (1u << 20) || ny > (1u << 20))
    throw DataFormatError("implausible field dimensions in " + path);
  ComplexField field(static_cast<int>(nx), static_cast<int>(ny), dx, dy, x0, y0);
  for (auto& v : field.data) {
    const double re = get<double>(f);
    const double im = get<double>(f);
    v = cplx(re, im);
  }
  return field;
}

void write_polar_csv(const std::string& path, const RayDecomposition& dec) {
  std::ofstream f(path);
  if (!f) throw DataFormatError("cannot open for writing: " + path);
  f.precision(17);
  f << "angle,amplitude\n";
  for (std::size_t i = 0; i < dec.angles.size(); ++i)
    f << dec.angles[i] << "," << dec.amplitudes[i] << "\n";
}

}  // namespace sonar
