#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iomanip>

#include "hyps/cauchy.hpp"

namespace hyps {

static_assert(std::endian::native == std::endian::little, "trajectory files are little-endian");

namespace {

constexpr char kMagic[8] = {'H', 'Y', 'P', 'S', 'T', 'R', 'J', '1'};

template <class T>
void put(std::ofstream& f, T v) {
  f.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T get(std::ifstream& f) {
  T v{};
  f.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!f) throw Error(ErrorKind::kIo, "truncated trajectory file");
  return v;
}

}  // namespace

void write_ledger_csv(const std::string& path, const EnergyLedger& l, const EnergyCheck& c) {
  std::ofstream f(path);
  if (!f) throw Error(ErrorKind::kIo, "cannot open " + path);
  f << "t,u_norm_sq,f_norm_sq,bound_rhs,margin\n";
  f << std::setprecision(17);
  for (std::size_t i = 0; i < l.times.size(); ++i) {
    f << l.times[i] << ',' << l.u_norm_sq[i] << ',' << l.f_norm_sq[i] << ','
      << (i < c.bound_rhs.size() ? c.bound_rhs[i] : 0.0) << ','
      << (i < c.margin.size() ? c.margin[i] : 0.0) << '\n';
  }
  if (!f) throw Error(ErrorKind::kIo, "write failed: " + path);
}

void write_trajectory(const std::string& path, const Trajectory& tr) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorKind::kIo, "cannot open " + path);
  f.write(kMagic, sizeof kMagic);
  put<std::int64_t>(f, tr.grid.dim);
  put<std::int64_t>(f, tr.grid.M);
  put<double>(f, tr.grid.L);
  put<double>(f, tr.dt);
  put<std::int64_t>(f, tr.stride);
  put<std::int64_t>(f, static_cast<std::int64_t>(tr.states.size()));
  for (std::size_t s = 0; s < tr.states.size(); ++s) {
    put<double>(f, tr.times[s]);
    for (const auto& z : tr.states[s].values) {
      put<double>(f, z.real());
      put<double>(f, z.imag());
    }
  }
  if (!f) throw Error(ErrorKind::kIo, "write failed: " + path);
}

Trajectory read_trajectory(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorKind::kIo, "cannot open " + path);
  char magic[8];
  f.read(magic, sizeof magic);
  if (!f || std::memcmp(magic, kMagic, sizeof magic) != 0) {
    throw Error(ErrorKind::kIo, "not a trajectory file: " + path);
  }
  Trajectory tr;
  tr.grid.dim = static_cast<int>(get<std::int64_t>(f));
  tr.grid.M = static_cast<int>(get<std::int64_t>(f));
  tr.grid.L = get<double>(f);
  tr.dt = get<double>(f);
  tr.stride = static_cast<int>(get<std::int64_t>(f));
  const auto count = get<std::int64_t>(f);
  tr.grid.validate();
  if (count < 0) throw Error(ErrorKind::kIo, "negative snapshot count");
  const std::size_t n = tr.grid.size();
  for (std::int64_t s = 0; s < count; ++s) {
    tr.times.push_back(get<double>(f));
    GridFunction u = GridFunction::zeros(tr.grid);
    for (std::size_t i = 0; i < n; ++i) {
      const double re = get<double>(f);
      const double im = get<double>(f);
      u.values[i] = Complex(re, im);
    }
    tr.states.push_back(std::move(u));
  }
  return tr;
}

}  // namespace hyps
