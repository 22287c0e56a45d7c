#include "nsf/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>

#include "nsf/errors.hpp"

namespace nsf::io {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string csv(const std::vector<std::string>& header, const std::vector<std::vector<double>>& rows) {
  std::ostringstream os;
  for (std::size_t j = 0; j < header.size(); ++j) os << (j ? "," : "") << header[j];
  os << "\r\n";
  for (const auto& r : rows) {
    for (std::size_t j = 0; j < r.size(); ++j) os << (j ? "," : "") << fmt(r[j]);
    os << "\r\n";
  }
  return os.str();
}

std::uint64_t fnv1a(const void* data, std::size_t n, std::uint64_t h) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < n; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string fnv1a_hex(const std::string& bytes) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(fnv1a(bytes.data(), bytes.size())));
  return buf;
}

std::string write_file(const std::filesystem::path& path, const std::string& bytes) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw NsfError(ErrorKind::IoError, "cannot write " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw NsfError(ErrorKind::IoError, "write failed for " + path.string());
  return fnv1a_hex(bytes);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw NsfError(ErrorKind::IoError, "cannot read " + path.string());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

namespace {

template <class T>
void put(std::string& s, T v) {
  char b[sizeof(T)];
  std::memcpy(b, &v, sizeof(T));
  s.append(b, sizeof(T));
}

template <class T>
T get(const std::string& s, std::size_t& pos) {
  if (pos + sizeof(T) > s.size()) throw NsfError(ErrorKind::IoError, "truncated snapshot block");
  T v;
  std::memcpy(&v, s.data() + pos, sizeof(T));
  pos += sizeof(T);
  return v;
}

std::string header(std::uint32_t kind, std::uint32_t ncomp, std::uint32_t na, std::uint32_t nb, double t) {
  std::string s = "NSFB";
  put<std::uint32_t>(s, 1);
  put<std::uint32_t>(s, kind);
  put<std::uint32_t>(s, ncomp);
  put<std::uint32_t>(s, na);
  put<std::uint32_t>(s, nb);
  put<double>(s, t);
  return s;
}

}  // namespace

std::string snapshot_bytes(const StateField& f, double t) {
  std::string s = header(0, 4, f.N1, f.N2, t);
  for (int c = 0; c < 4; ++c) s.append(reinterpret_cast<const char*>(f.c[c].data()), f.c[c].size() * sizeof(double));
  return s;
}

std::string layer_bytes(const LayerProfile& p, int level) {
  std::string s = header(1, p.ncomp, p.n2, p.zg.nodes(), p.times[level]);
  const auto& v = p.values[level];
  s.append(reinterpret_cast<const char*>(v.data()), v.size() * sizeof(double));
  return s;
}

StateField read_snapshot(const std::string& bytes, double* t) {
  if (bytes.size() < 4 || bytes.compare(0, 4, "NSFB") != 0) throw NsfError(ErrorKind::IoError, "not an NSFB block");
  std::size_t pos = 4;
  auto version = get<std::uint32_t>(bytes, pos);
  auto kind = get<std::uint32_t>(bytes, pos);
  auto ncomp = get<std::uint32_t>(bytes, pos);
  auto na = get<std::uint32_t>(bytes, pos);
  auto nb = get<std::uint32_t>(bytes, pos);
  double time = get<double>(bytes, pos);
  if (version != 1 || kind != 0 || ncomp != 4) throw NsfError(ErrorKind::IoError, "unsupported NSFB block");
  StateField f(static_cast<int>(na), static_cast<int>(nb));
  const std::size_t n = static_cast<std::size_t>(na) * nb;
  if (bytes.size() != pos + 4 * n * sizeof(double)) throw NsfError(ErrorKind::IoError, "NSFB size mismatch");
  for (int c = 0; c < 4; ++c) {
    std::memcpy(f.c[c].data(), bytes.data() + pos, n * sizeof(double));
    pos += n * sizeof(double);
  }
  if (t) *t = time;
  return f;
}

std::string svg_loglog(const std::string& title, const std::string& xlabel, const std::string& ylabel,
                       const std::vector<Series>& series) {
  const double W = 640, H = 480, L = 80, R = 160, T = 40, B = 60;
  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  for (const auto& s : series)
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!(s.x[i] > 0) || !(s.y[i] > 0)) continue;
      xmin = std::min(xmin, std::log10(s.x[i]));
      xmax = std::max(xmax, std::log10(s.x[i]));
      ymin = std::min(ymin, std::log10(s.y[i]));
      ymax = std::max(ymax, std::log10(s.y[i]));
    }
  if (xmin > xmax) xmin = 0, xmax = 1, ymin = 0, ymax = 1;
  xmin = std::floor(xmin * 4) / 4 - 0.05;
  xmax = std::ceil(xmax * 4) / 4 + 0.05;
  ymin = std::floor(ymin) - 0.1;
  ymax = std::ceil(ymax) + 0.1;
  auto px = [&](double x) { return L + (std::log10(x) - xmin) / (xmax - xmin) * (W - L - R); };
  auto py = [&](double y) { return H - B - (std::log10(y) - ymin) / (ymax - ymin) * (H - T - B); };
  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#8c564b", "#7f7f7f"};
  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
     << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << W << "\" height=\"" << H << "\">\n"
     << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
     << "<text x=\"" << W / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">" << title << "</text>\n"
     << "<rect x=\"" << L << "\" y=\"" << T << "\" width=\"" << W - L - R << "\" height=\"" << H - T - B
     << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int e = static_cast<int>(std::ceil(ymin)); e <= static_cast<int>(std::floor(ymax)); ++e) {
    double y = py(std::pow(10.0, e));
    os << "<line x1=\"" << L << "\" y1=\"" << y << "\" x2=\"" << W - R << "\" y2=\"" << y
       << "\" stroke=\"#dddddd\"/>\n<text x=\"" << L - 6 << "\" y=\"" << y + 4
       << "\" text-anchor=\"end\" font-size=\"11\">1e" << e << "</text>\n";
  }
  if (!series.empty())
    for (double x : series.front().x) {
      double X = px(x);
      os << "<text x=\"" << X << "\" y=\"" << H - B + 16 << "\" text-anchor=\"middle\" font-size=\"11\">"
         << fmt(x).substr(0, 6) << "</text>\n";
    }
  os << "<text x=\"" << (L + W - R) / 2 << "\" y=\"" << H - 14 << "\" text-anchor=\"middle\" font-size=\"13\">"
     << xlabel << "</text>\n<text x=\"18\" y=\"" << (T + H - B) / 2
     << "\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 18 " << (T + H - B) / 2 << ")\">"
     << ylabel << "</text>\n";
  for (std::size_t si = 0; si < series.size(); ++si) {
    const auto& s = series[si];
    const char* col = colors[si % 6];
    os << "<polyline fill=\"none\" stroke=\"" << col << "\" stroke-width=\"1.5\""
       << (s.dashed ? " stroke-dasharray=\"5,4\"" : "") << " points=\"";
    for (std::size_t i = 0; i < s.x.size(); ++i)
      if (s.x[i] > 0 && s.y[i] > 0) os << px(s.x[i]) << "," << py(s.y[i]) << " ";
    os << "\"/>\n";
    if (!s.dashed)
      for (std::size_t i = 0; i < s.x.size(); ++i)
        if (s.x[i] > 0 && s.y[i] > 0)
          os << "<circle cx=\"" << px(s.x[i]) << "\" cy=\"" << py(s.y[i]) << "\" r=\"3\" fill=\"" << col << "\"/>\n";
    double ly = T + 16 + 18.0 * si;
    os << "<line x1=\"" << W - R + 10 << "\" y1=\"" << ly << "\" x2=\"" << W - R + 30 << "\" y2=\"" << ly
       << "\" stroke=\"" << col << "\"" << (s.dashed ? " stroke-dasharray=\"5,4\"" : "") << "/>\n"
       << "<text x=\"" << W - R + 34 << "\" y=\"" << ly + 4 << "\" font-size=\"11\">" << s.label << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

std::filesystem::path output_dir(const std::string& requested) {
  if (const char* env = std::getenv("NSF_LAYERS_OUT"); env && *env) return env;
  return requested.empty() ? std::filesystem::path("nsf_out") : std::filesystem::path(requested);
}

std::string grid_hash(const Grid& g) {
  std::uint64_t h = fnv1a(g.x1.data(), g.x1.size() * sizeof(double));
  h = fnv1a(g.x2.data(), g.x2.size() * sizeof(double), h);
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace nsf::io
