#include "sqg/snapshot.hpp"

#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

#include "sqg/errors.hpp"

namespace sqg {
namespace {

constexpr std::array<char, 5> kMagic{'S', 'Q', 'G', 'F', '1'};

template <class T>
void put_le(std::ostream& os, T value) {
  static_assert(sizeof(T) == 4 || sizeof(T) == 8);
  using U = std::conditional_t<sizeof(T) == 4, std::uint32_t, std::uint64_t>;
  U bits;
  std::memcpy(&bits, &value, sizeof(T));
  std::array<char, sizeof(T)> bytes;
  for (std::size_t b = 0; b < sizeof(T); ++b) {
    bytes[b] = static_cast<char>((bits >> (8 * b)) & 0xFFu);
  }
  os.write(bytes.data(), bytes.size());
}

template <class T>
T get_le(std::istream& is) {
  using U = std::conditional_t<sizeof(T) == 4, std::uint32_t, std::uint64_t>;
  std::array<unsigned char, sizeof(T)> bytes;
  if (!is.read(reinterpret_cast<char*>(bytes.data()), bytes.size())) {
    throw Error("SQGF1: truncated record");
  }
  U bits = 0;
  for (std::size_t b = 0; b < sizeof(T); ++b) {
    bits |= static_cast<U>(bytes[b]) << (8 * b);
  }
  T value;
  std::memcpy(&value, &bits, sizeof(T));
  return value;
}

}  // namespace

void write_record(std::ostream& os, const std::string& name, const ScalarField& f) {
  const Grid& g = f.grid();
  os.write(kMagic.data(), kMagic.size());
  put_le<std::uint32_t>(os, static_cast<std::uint32_t>(g.n()));
  put_le<double>(os, g.box_length());
  put_le<std::uint32_t>(os, static_cast<std::uint32_t>(name.size()));
  os.write(name.data(), static_cast<std::streamsize>(name.size()));
  if constexpr (std::endian::native == std::endian::little) {
    os.write(reinterpret_cast<const char*>(f.data()), static_cast<std::streamsize>(f.size() * sizeof(double)));
  } else {
    for (double v : f.values()) {
      put_le<double>(os, v);
    }
  }
  if (!os) {
    throw Error("SQGF1: write failed");
  }
}

std::vector<NamedField> read_records(std::istream& is) {
  std::vector<NamedField> out;
  GridPtr last;
  while (true) {
    std::array<char, 5> magic{};
    is.read(magic.data(), magic.size());
    if (is.gcount() == 0 && is.eof()) {
      break;
    }
    if (is.gcount() != static_cast<std::streamsize>(magic.size()) || magic != kMagic) {
      throw Error("SQGF1: bad magic");
    }
    const auto n = get_le<std::uint32_t>(is);
    const auto length = get_le<double>(is);
    const auto name_len = get_le<std::uint32_t>(is);
    if (name_len > (1u << 16)) {
      throw Error("SQGF1: implausible name length");
    }
    std::string name(name_len, '\0');
    if (name_len > 0 && !is.read(name.data(), name_len)) {
      throw Error("SQGF1: truncated name");
    }
    if (!last || last->n() != static_cast<int>(n) || last->box_length() != length) {
      last = make_grid(static_cast<int>(n), length);
    }
    RealBuffer values(last->real_size());
    if constexpr (std::endian::native == std::endian::little) {
      if (!is.read(reinterpret_cast<char*>(values.data()),
                   static_cast<std::streamsize>(values.size() * sizeof(double)))) {
        throw Error("SQGF1: truncated values");
      }
    } else {
      for (double& v : values) {
        v = get_le<double>(is);
      }
    }
    out.push_back({std::move(name), ScalarField(last, std::move(values))});
  }
  return out;
}

void write_snapshot(const std::filesystem::path& path, const std::vector<NamedField>& fields) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) {
    throw Error("cannot open " + path.string() + " for writing");
  }
  for (const auto& nf : fields) {
    write_record(os, nf.name, nf.field);
  }
}

void write_snapshot(const std::filesystem::path& path, const std::string& name, const ScalarField& f) {
  write_snapshot(path, std::vector<NamedField>{{name, f}});
}

void write_snapshot(const std::filesystem::path& path, const std::string& name, const VectorField2& u) {
  write_snapshot(path, std::vector<NamedField>{{name + ":x", u.x()}, {name + ":y", u.y()}});
}

std::vector<NamedField> read_snapshot(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) {
    throw Error("cannot open " + path.string());
  }
  return read_records(is);
}

VectorField2 find_vector(const std::vector<NamedField>& records, const std::string& name) {
  const ScalarField* x = nullptr;
  const ScalarField* y = nullptr;
  for (const auto& r : records) {
    if (r.name == name + ":x") {
      x = &r.field;
    } else if (r.name == name + ":y") {
      y = &r.field;
    }
  }
  if (x == nullptr || y == nullptr) {
    throw Error("SQGF1: vector field '" + name + "' not found");
  }
  return VectorField2(*x, *y);
}

}  // namespace sqg
