// hlsw: command-line driver for the HoLiSwap cache simulator.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "holiswap.hpp"

namespace {

using namespace holiswap;

enum Exit : int { ok = 0, usage = 1, bad_input = 2, internal = 3 };

void add_run_flags(CLI::App& cmd, RunConfig& rc) {
  cmd.add_option("--design", rc.design, "sequential|parallel|prediction-static|prediction-pc|filter");
  cmd.add_option("--holiswap", rc.holiswap, "on|off");
  cmd.add_option("--epoch", rc.epoch, "epoch length E in set accesses");
  cmd.add_option("--threshold", rc.threshold, "hot threshold T (default E/2)");
  cmd.add_option("--counters", rc.counters, "exact|log");
  cmd.add_option("--seed", rc.seed, "counter RNG seed");
  cmd.add_option("--cache-kb", rc.cache_kb, "L1 capacity in KiB");
  cmd.add_option("--line-bytes", rc.line_bytes, "line size in bytes");
  cmd.add_option("--assoc", rc.assoc, "associativity");
  cmd.add_option("--geometry", rc.geometry, "energy table or subarray geometry file");
  cmd.add_option("--filter-l1", rc.filter_l1, "L1 lookup under the L0: sequential|parallel");
  cmd.add_option("--miss-penalty", rc.timing.miss_penalty, "cycles to the next level");
  cmd.add_option("--trace", rc.trace, "trace file (text or HLSW1 binary)");
  cmd.add_option("--format", rc.format, "json|csv");
  cmd.add_option("--out", rc.out, "output file (default stdout)");
}

void write_output(const std::string& path, const std::string& bytes) {
  if (path.empty() || path == "-") {
    std::cout << bytes;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw input_error("cannot write " + path);
  out << bytes;
}

std::vector<std::uint32_t> parse_epochs(const std::string& list) {
  std::vector<std::uint32_t> out;
  for (const auto& item : KeyValueFile::split(list, ','))
    out.push_back(static_cast<std::uint32_t>(KeyValueFile::to_uint(item, "--epochs")));
  return out;
}

Trace require_trace(const RunConfig& rc) {
  if (rc.trace.empty()) throw config_error("--trace is required");
  return load_trace(rc.trace);
}

}  // namespace

int main(int argc, char** argv) {
  RunConfig rc;
  if (const char* path = std::getenv("HLSW_CONFIG"); path && *path) {
    try {
      rc.apply(KeyValueFile::load(path));
    } catch (const error& e) {
      std::cerr << "hlsw: HLSW_CONFIG: " << e.what() << "\n";
      return bad_input;
    }
  }

  CLI::App app{"HoLiSwap L1 cache simulator"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "simulate one trace and report energy, cycles and statistics");
  add_run_flags(*run, rc);
  bool no_hot_stats = false;
  run->add_flag("--no-hot-stats", no_hot_stats, "skip the offline hot-line analysis");

  auto* sweep = app.add_subcommand("sweep", "epoch-length sweep with T = E/2 against a HoLiSwap-off baseline");
  add_run_flags(*sweep, rc);
  std::string epochs = "4,16,64,256,1024";
  sweep->add_option("--epochs", epochs, "comma-separated epoch lengths");

  SyntheticSpec spec;
  std::string kind = "hotset";
  std::string gen_out;
  bool binary = false;
  auto* gen = app.add_subcommand("gen", "write a synthetic trace");
  gen->add_option("--kind", kind, "uniform|zipf|hotset");
  gen->add_option("--records", spec.n_records, "number of references");
  gen->add_option("--span", spec.address_span, "address span in bytes");
  gen->add_option("--base", spec.base_address, "first address");
  gen->add_option("--alpha", spec.zipf_alpha, "zipf exponent");
  gen->add_option("--hot-lines", spec.hot_lines, "hot lines per set (hotset)");
  gen->add_option("--hot-fraction", spec.hot_fraction, "share of each set's references to hot lines");
  gen->add_option("--store-ratio", spec.store_ratio, "fraction of stores");
  gen->add_option("--seed", spec.seed, "generator seed");
  gen->add_option("--line-bytes", spec.line_bytes, "line size used for the hot-set layout");
  gen->add_option("--sets", spec.set_count, "set count used for the hot-set layout");
  gen->add_flag("--prime-hot", spec.prime_hot, "first reference to each set goes to its hot line");
  gen->add_flag("--binary", binary, "write the packed HLSW1 format");
  gen->add_option("--out", gen_out, "output trace file")->required();

  HotWindow window;
  auto* analyze = app.add_subcommand("analyze", "offline hot-line statistics of a trace");
  analyze->add_option("--trace", rc.trace, "trace file")->required();
  analyze->add_option("--cache-kb", rc.cache_kb, "L1 capacity in KiB");
  analyze->add_option("--line-bytes", rc.line_bytes, "line size in bytes");
  analyze->add_option("--assoc", rc.assoc, "associativity");
  analyze->add_option("--window", window.set_accesses, "window length in set accesses");
  analyze->add_option("--min-hits", window.min_hits, "hits within a window that make a line hot");
  analyze->add_option("--out", rc.out, "output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc_code = app.exit(e);
    return rc_code == 0 ? ok : usage;
  }

  try {
    std::ostringstream out;
    if (*run) {
      const SimConfig cfg = rc.to_sim_config();
      const Trace trace = require_trace(rc);
      const SimReport report = run_trace(cfg, trace, !no_hot_stats);
      if (rc.format == "csv")
        emit_csv(out, report);
      else
        emit_json(out, report);
    } else if (*sweep) {
      const SimConfig cfg = rc.to_sim_config();
      const Trace trace = require_trace(rc);
      const auto rows = sweep_epoch(cfg, parse_epochs(epochs), trace);
      const bool json = sweep->get_option("--format")->count() > 0 ? rc.format == "json" : false;
      if (json)
        emit_json(out, rows);
      else
        emit_csv(out, rows);
    } else if (*gen) {
      if (kind == "uniform")
        spec.kind = SyntheticKind::uniform;
      else if (kind == "zipf")
        spec.kind = SyntheticKind::zipf;
      else if (kind == "hotset")
        spec.kind = SyntheticKind::hotset;
      else
        throw config_error("--kind takes uniform|zipf|hotset");
      save_trace(gen_out, generate(spec), binary);
      return ok;
    } else if (*analyze) {
      CacheConfig cache{rc.cache_kb * 1024, rc.line_bytes, rc.assoc};
      cache.validate();
      if (window.set_accesses == 0 || window.min_hits == 0) throw config_error("window and min-hits must be positive");
      emit_json(out, hot_line_stats(load_trace(rc.trace), cache, window));
    }
    write_output(rc.out, out.str());
    return ok;
  } catch (const config_error& e) {
    std::cerr << "hlsw: " << e.what() << "\n";
    return usage;
  } catch (const input_error& e) {
    std::cerr << "hlsw: " << e.what() << "\n";
    return bad_input;
  } catch (const invariant_error& e) {
    std::cerr << "hlsw: internal error: " << e.what() << "\n";
    return internal;
  } catch (const std::exception& e) {
    std::cerr << "hlsw: internal error: " << e.what() << "\n";
    return internal;
  }
}
