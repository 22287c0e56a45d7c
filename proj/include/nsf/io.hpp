#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "nsf/grid.hpp"
#include "nsf/prandtl.hpp"

namespace nsf::io {

/// Round-trip decimal form (17 significant digits).
std::string fmt(double v);

/// Comma-separated table with a header row; returns the written bytes.
std::string csv(const std::vector<std::string>& header, const std::vector<std::vector<double>>& rows);

/// 64-bit FNV-1a of a byte string, as 16 hex digits.
std::string fnv1a_hex(const std::string& bytes);
std::uint64_t fnv1a(const void* data, std::size_t n, std::uint64_t h = 0xcbf29ce484222325ULL);

/// Writes `bytes` to `path` (parents created) and returns the content hash.
std::string write_file(const std::filesystem::path& path, const std::string& bytes);
std::string read_file(const std::filesystem::path& path);

/// Binary snapshot block: magic "NSFB", u32 version = 1, u32 kind (0 = grid field,
/// 1 = layer level), u32 ncomp, u32 n_a, u32 n_b, f64 time, then ncomp·n_a·n_b little-endian
/// doubles in [comp][a][b] order.
std::string snapshot_bytes(const StateField& f, double t);
std::string layer_bytes(const LayerProfile& p, int level);
StateField read_snapshot(const std::string& bytes, double* t = nullptr);

struct Series {
  std::string label;
  std::vector<double> x, y;
  bool dashed = false;
};
/// Minimal log-log SVG plot (axes, tick labels, polylines with markers).
std::string svg_loglog(const std::string& title, const std::string& xlabel, const std::string& ylabel,
                       const std::vector<Series>& series);

/// Output directory: NSF_LAYERS_OUT if set, otherwise `requested`.
std::filesystem::path output_dir(const std::string& requested);

/// Grid fingerprint used by manifests.
std::string grid_hash(const Grid& g);

}  // namespace nsf::io
