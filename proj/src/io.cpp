#include "bvkit/io.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

namespace bvkit {

json to_json(const DyadicCube& cube) {
  return json{{"level", cube.level}, {"index", cube.index}};
}

DyadicCube cube_from_json(const json& j) {
  return DyadicCube(j.at("level").get<int>(), j.at("index").get<std::vector<std::uint32_t>>());
}

json to_json(const Packing& pi) {
  json arr = json::array();
  for (const auto& cube : pi.cubes) arr.push_back(to_json(cube));
  return arr;
}

Packing packing_from_json(const json& j) {
  Packing pi;
  for (const auto& item : j) pi.cubes.push_back(cube_from_json(item));
  if (!is_packing(pi.cubes)) throw std::invalid_argument("packing json: not an antichain");
  return pi;
}

json to_json(const NormReport& report) {
  return json{{"value", report.value},
              {"kind", report.kind},
              {"meta", report.meta},
              {"certificate", to_json(report.certificate)}};
}

json to_json(const Atom& atom) {
  return json{{"cube", to_json(atom.cube)},
              {"values", std::vector<double>(atom.values.values().begin(),
                                             atom.values.values().end())},
              {"d", atom.values.dim()},
              {"m", atom.values.resolution()}};
}

json to_json(const Chain& chain) {
  json atoms = json::array();
  for (const auto& a : chain.atoms) atoms.push_back(to_json(a));
  return json{{"packing", to_json(chain.packing)}, {"atoms", atoms}, {"coeffs", chain.coeffs}};
}

json to_json(const Decomposition& dec) {
  json chains = json::array();
  for (const auto& c : dec.chains) chains.push_back(to_json(c));
  return json{{"chains", chains}};
}

namespace {

constexpr char kMagic[4] = {'B', 'V', 'K', 'F'};

template <typename T>
void put(std::ostream& os, T value) {
  os.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T take(std::istream& is) {
  T value;
  is.read(reinterpret_cast<char*>(&value), sizeof(T));
  return value;
}

}  // namespace

void save_grid(const GridFunction& f, const std::filesystem::path& path) {
  {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("save_grid: cannot open " + path.string());
    os.write(kMagic, 4);
    put<std::uint32_t>(os, 1u);
    put<std::uint32_t>(os, static_cast<std::uint32_t>(f.dim()));
    put<std::uint32_t>(os, static_cast<std::uint32_t>(f.resolution()));
    put<std::uint64_t>(os, static_cast<std::uint64_t>(f.size()));
    for (double v : f.values()) put<double>(os, v);
    if (!os) throw std::runtime_error("save_grid: write failed");
  }
  json sidecar{{"format", "bvkit-grid"},
               {"version", 1},
               {"d", f.dim()},
               {"m", f.resolution()},
               {"count", f.size()},
               {"data", path.filename().string()}};
  write_text_atomic(path.string() + ".json", sidecar.dump(2) + "\n");
}

GridFunction load_grid(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("load_grid: cannot open " + path.string());
  char magic[4];
  is.read(magic, 4);
  if (std::memcmp(magic, kMagic, 4) != 0) {
    throw std::runtime_error("load_grid: bad magic in " + path.string());
  }
  const auto version = take<std::uint32_t>(is);
  if (version != 1u) throw std::runtime_error("load_grid: unsupported version");
  const auto d = take<std::uint32_t>(is);
  const auto m = take<std::uint32_t>(is);
  const auto count = take<std::uint64_t>(is);
  std::vector<double> values(count);
  is.read(reinterpret_cast<char*>(values.data()),
          static_cast<std::streamsize>(count * sizeof(double)));
  if (!is) throw std::runtime_error("load_grid: truncated file");
  return GridFunction(static_cast<int>(d), static_cast<int>(m), std::move(values));
}

GridFunction load_csv_1d(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("load_csv_1d: cannot open " + path.string());
  std::vector<double> values;
  std::string line;
  while (std::getline(is, line)) {
    std::stringstream ss(line);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      if (tok.empty()) continue;
      values.push_back(std::stod(tok));
    }
  }
  if (values.empty()) throw std::runtime_error("load_csv_1d: no values");
  const auto n = values.size();
  if ((n & (n - 1)) != 0) {
    throw std::runtime_error("load_csv_1d: count must be a power of two");
  }
  int m = 0;
  while ((std::size_t(1) << m) < n) ++m;
  return GridFunction(1, m, std::move(values));
}

void write_text_atomic(const std::filesystem::path& path, const std::string& content) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("write failed: " + tmp.string());
    os << content;
    if (!os) throw std::runtime_error("write failed: " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

std::string svg_polyline(const std::vector<double>& x, const std::vector<double>& y,
                         const std::string& title, bool loglog) {
  const int width = 480, height = 320, pad = 40;
  auto tx = [&](double v) { return loglog && v > 0 ? std::log10(v) : v; };
  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  for (std::size_t i = 0; i < x.size(); ++i) {
    xmin = std::min(xmin, tx(x[i]));
    xmax = std::max(xmax, tx(x[i]));
    ymin = std::min(ymin, tx(y[i]));
    ymax = std::max(ymax, tx(y[i]));
  }
  if (!(xmax > xmin)) xmax = xmin + 1;
  if (!(ymax > ymin)) ymax = ymin + 1;
  std::ostringstream os;
  os << "<svg xmlns='http://www.w3.org/2000/svg' width='" << width << "' height='" << height
     << "'>\n<rect width='100%' height='100%' fill='white'/>\n<text x='" << pad << "' y='20'>"
     << title << "</text>\n<polyline fill='none' stroke='steelblue' stroke-width='2' points='";
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double px = pad + (tx(x[i]) - xmin) / (xmax - xmin) * (width - 2 * pad);
    const double py = height - pad - (tx(y[i]) - ymin) / (ymax - ymin) * (height - 2 * pad);
    os << px << "," << py << " ";
  }
  os << "'/>\n</svg>\n";
  return os.str();
}

}  // namespace bvkit
