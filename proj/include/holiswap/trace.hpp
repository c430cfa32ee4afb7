#pragma once

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cctype>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <istream>
#include <iterator>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "holiswap/error.hpp"
#include "holiswap/rng.hpp"
#include "holiswap/trace_record.hpp"

namespace holiswap {

using Trace = std::vector<TraceRecord>;

// Text format, one reference per line:  <L|S> <pc-hex> <addr-hex>
// Hex fields take an optional 0x prefix. Lines starting with '#' and blank
// lines are ignored.
namespace detail {

inline std::uint64_t parse_hex(std::string_view tok, std::size_t line_no, const char* field) {
  if (tok.size() > 2 && tok[0] == '0' && (tok[1] == 'x' || tok[1] == 'X')) tok.remove_prefix(2);
  std::uint64_t v{};
  auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v, 16);
  if (tok.empty() || ec != std::errc{} || p != tok.data() + tok.size())
    throw input_error("trace line " + std::to_string(line_no) + ": bad hex " + field + " '" +
                      std::string(tok) + "'");
  return v;
}

inline void put_le64(std::ostream& out, std::uint64_t v) {
  std::array<char, 8> b{};
  for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  out.write(b.data(), 8);
}

inline std::uint64_t get_le64(const unsigned char* p) {
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | p[i];
  return v;
}

}  // namespace detail

inline TraceRecord parse_trace_line(std::string_view line, std::size_t line_no) {
  std::array<std::string_view, 3> tok{};
  std::size_t n = 0, i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i == line.size()) break;
    std::size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
    if (n == tok.size())
      throw input_error("trace line " + std::to_string(line_no) + ": trailing fields");
    tok[n++] = line.substr(i, j - i);
    i = j;
  }
  if (n < 3) throw input_error("trace line " + std::to_string(line_no) + ": truncated record");
  TraceRecord rec;
  if (tok[0] == "L")
    rec.op = Op::load;
  else if (tok[0] == "S")
    rec.op = Op::store;
  else
    throw input_error("trace line " + std::to_string(line_no) + ": unknown op '" +
                      std::string(tok[0]) + "'");
  rec.pc = detail::parse_hex(tok[1], line_no, "pc");
  rec.addr = detail::parse_hex(tok[2], line_no, "address");
  return rec;
}

inline Trace parse_trace(std::istream& in) {
  Trace out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    out.push_back(parse_trace_line(line, line_no));
  }
  return out;
}

inline Trace parse_trace(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_trace(in);
}

inline void write_trace(std::ostream& out, const Trace& trace) {
  char buf[64];
  for (const auto& r : trace) {
    int n = std::snprintf(buf, sizeof buf, "%c 0x%llx 0x%llx\n", r.op == Op::load ? 'L' : 'S',
                          static_cast<unsigned long long>(r.pc), static_cast<unsigned long long>(r.addr));
    out.write(buf, n);
  }
}

// Packed form: "HLSW1" then 17-byte records (op 'L'/'S', pc, addr; little endian).
inline constexpr std::string_view binary_magic = "HLSW1";
inline constexpr std::size_t binary_record_bytes = 17;

inline void write_trace_binary(std::ostream& out, const Trace& trace) {
  out.write(binary_magic.data(), static_cast<std::streamsize>(binary_magic.size()));
  for (const auto& r : trace) {
    out.put(r.op == Op::load ? 'L' : 'S');
    detail::put_le64(out, r.pc);
    detail::put_le64(out, r.addr);
  }
}

inline Trace parse_trace_binary(std::string_view bytes) {
  if (bytes.substr(0, binary_magic.size()) != binary_magic)
    throw input_error("binary trace: bad magic");
  bytes.remove_prefix(binary_magic.size());
  if (bytes.size() % binary_record_bytes != 0)
    throw input_error("binary trace: truncated record " + std::to_string(bytes.size() / binary_record_bytes + 1));
  Trace out;
  out.reserve(bytes.size() / binary_record_bytes);
  const auto* p = reinterpret_cast<const unsigned char*>(bytes.data());
  for (std::size_t i = 0; i < bytes.size(); i += binary_record_bytes, p += binary_record_bytes) {
    TraceRecord r;
    if (p[0] == 'L')
      r.op = Op::load;
    else if (p[0] == 'S')
      r.op = Op::store;
    else
      throw input_error("binary trace: record " + std::to_string(i / binary_record_bytes + 1) +
                        ": unknown op byte");
    r.pc = detail::get_le64(p + 1);
    r.addr = detail::get_le64(p + 9);
    out.push_back(r);
  }
  return out;
}

// Reads either format, chosen by the magic bytes.
inline Trace load_trace(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw input_error("cannot open trace " + path);
  std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (bytes.compare(0, binary_magic.size(), binary_magic) == 0) return parse_trace_binary(bytes);
  return parse_trace(std::string_view(bytes));
}

inline void save_trace(const std::string& path, const Trace& trace, bool binary) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw input_error("cannot write " + path);
  if (binary)
    write_trace_binary(out, trace);
  else
    write_trace(out, trace);
}

// ---------------------------------------------------------------------------
// Synthetic traces

enum class SyntheticKind : std::uint8_t { uniform, zipf, hotset };

struct SyntheticSpec {
  SyntheticKind kind = SyntheticKind::hotset;
  std::uint64_t n_records = 100000;
  std::uint64_t address_span = 32768 * 2;  // bytes
  std::uint64_t base_address = 0x10000000;
  double zipf_alpha = 1.0;
  std::uint32_t hot_lines = 1;  // per set
  double hot_fraction = 0.6;
  double store_ratio = 0.0;
  std::uint64_t seed = 0;
  // Hot-set layout follows the cache being studied.
  std::uint32_t line_bytes = 64;
  std::uint32_t set_count = 128;
  // First reference to every set goes to its hot line.
  bool prime_hot = false;

  std::uint64_t lines() const { return address_span / line_bytes; }
};

namespace detail {

inline constexpr std::uint64_t hot_pc_base = 0x400100;
inline constexpr std::uint64_t cold_pc_base = 0x400800;
inline constexpr unsigned hot_pc_pool = 4;
inline constexpr unsigned cold_pc_pool = 16;

inline Op draw_op(Rng& rng, double store_ratio) {
  return store_ratio > 0.0 && uniform01(rng) < store_ratio ? Op::store : Op::load;
}

inline void check_common(const SyntheticSpec& spec) {
  if (spec.line_bytes == 0) throw config_error("line_bytes must be positive");
  if (spec.store_ratio < 0.0 || spec.store_ratio > 1.0) throw config_error("store_ratio must be in [0,1]");
  if (spec.n_records > 0 && spec.lines() == 0) throw config_error("address span holds no lines");
}

}  // namespace detail

inline Trace generate_uniform(const SyntheticSpec& spec) {
  detail::check_common(spec);
  Rng rng(spec.seed);
  Trace out;
  out.reserve(spec.n_records);
  for (std::uint64_t i = 0; i < spec.n_records; ++i) {
    const std::uint64_t line = uniform_below(rng, spec.lines());
    TraceRecord r;
    r.addr = spec.base_address + line * spec.line_bytes;
    r.pc = detail::cold_pc_base + 4 * uniform_below(rng, detail::cold_pc_pool);
    r.op = detail::draw_op(rng, spec.store_ratio);
    out.push_back(r);
  }
  return out;
}

// Line of rank k (1-based) is drawn with probability k^-alpha / H(n, alpha)
// and lives at base + (k-1) * line_bytes.
inline Trace generate_zipf(const SyntheticSpec& spec) {
  detail::check_common(spec);
  if (!(spec.zipf_alpha > 0.0)) throw config_error("zipf alpha must be positive");
  Trace out;
  if (spec.n_records == 0) return out;
  const std::uint64_t n = spec.lines();
  std::vector<double> cdf(n);
  double acc = 0.0;
  for (std::uint64_t k = 0; k < n; ++k) {
    acc += std::pow(static_cast<double>(k + 1), -spec.zipf_alpha);
    cdf[k] = acc;
  }
  Rng rng(spec.seed);
  out.reserve(spec.n_records);
  for (std::uint64_t i = 0; i < spec.n_records; ++i) {
    const double u = uniform01(rng) * acc;
    const auto rank = static_cast<std::uint64_t>(std::upper_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
    const std::uint64_t line = std::min(rank, n - 1);
    TraceRecord r;
    r.addr = spec.base_address + line * spec.line_bytes;
    r.pc = (line < detail::hot_pc_pool ? detail::hot_pc_base + 4 * line
                                       : detail::cold_pc_base + 4 * (line % detail::cold_pc_pool));
    r.op = detail::draw_op(rng, spec.store_ratio);
    out.push_back(r);
  }
  return out;
}

// Each reference picks a set uniformly, then one of the set's hot lines with
// probability hot_fraction, otherwise one of its cold lines. The span is
// divided evenly among the sets; the first hot_lines lines of every set are
// the hot ones.
inline Trace generate_hotset(const SyntheticSpec& spec) {
  detail::check_common(spec);
  if (spec.hot_fraction < 0.0 || spec.hot_fraction > 1.0)
    throw config_error("hot_fraction must be in [0,1]");
  if (spec.set_count == 0) throw config_error("set_count must be positive");
  const std::uint64_t per_set = spec.address_span / (std::uint64_t{spec.line_bytes} * spec.set_count);
  if (per_set == 0) throw config_error("address span smaller than one line per set");
  if (spec.hot_lines > per_set) throw config_error("more hot lines than lines per set");
  const std::uint64_t cold = per_set - spec.hot_lines;
  if (spec.hot_fraction > 0.0 && spec.hot_lines == 0)
    throw config_error("hot_fraction > 0 needs at least one hot line");
  if (spec.hot_fraction < 1.0 && cold == 0)
    throw config_error("hot_fraction < 1 needs at least one cold line per set");

  Rng rng(spec.seed);
  Trace out;
  out.reserve(spec.n_records);
  std::vector<bool> primed(spec.set_count, !spec.prime_hot || spec.hot_lines == 0);
  for (std::uint64_t i = 0; i < spec.n_records; ++i) {
    const std::uint64_t set = uniform_below(rng, spec.set_count);
    const double u = uniform01(rng);
    std::uint64_t slot;
    TraceRecord r;
    if (!primed[set] || u < spec.hot_fraction) {
      slot = primed[set] ? uniform_below(rng, spec.hot_lines) : 0;
      r.pc = detail::hot_pc_base + 4 * (slot % detail::hot_pc_pool);
    } else {
      slot = spec.hot_lines + uniform_below(rng, cold);
      r.pc = detail::cold_pc_base + 4 * uniform_below(rng, detail::cold_pc_pool);
    }
    primed[set] = true;
    r.addr = spec.base_address + (slot * spec.set_count + set) * spec.line_bytes;
    r.op = detail::draw_op(rng, spec.store_ratio);
    out.push_back(r);
  }
  return out;
}

inline Trace generate(const SyntheticSpec& spec) {
  switch (spec.kind) {
    case SyntheticKind::uniform: return generate_uniform(spec);
    case SyntheticKind::zipf: return generate_zipf(spec);
    case SyntheticKind::hotset: return generate_hotset(spec);
  }
  throw config_error("unknown synthetic trace kind");
}

}  // namespace holiswap
