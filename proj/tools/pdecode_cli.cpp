// Command-line front end for the pdecode shared library. Talks to the core
// exclusively through the C API (pdecode.h); CLI11 handles arguments and
// nlohmann/json merges flag overrides into the experiment configuration.
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "pdecode.h"

namespace {

using nlohmann::json;

struct CommonOpts {
  std::string config_path;
  std::string out;
  std::vector<double> sigmas;
  std::vector<std::string> decoders;
  std::int64_t seed = -1;
  std::int64_t trials = -1;
};

int die(pdec_status status) {
  std::cerr << "error: " << pdec_status_name(status) << ": " << pdec_last_error() << "\n";
  return 1;
}

std::string default_out_dir() {
  if (const char* env = std::getenv("PDECODE_OUT_DIR")) return env;
  return ".";
}

// load config file, apply flag overrides, hand the merged JSON to the library
pdec_status load_experiment(const CommonOpts& opts, pdec_experiment** out) {
  std::ifstream in(opts.config_path);
  if (!in) {
    std::cerr << "error: cannot open config file: " << opts.config_path << "\n";
    return PDEC_ERR_IO;
  }
  json doc;
  try {
    in >> doc;
  } catch (const json::parse_error& e) {
    std::cerr << "error: " << opts.config_path << ": " << e.what() << "\n";
    return PDEC_ERR_PARSE;
  }
  if (opts.seed >= 0) doc["seed"] = static_cast<std::uint64_t>(opts.seed);
  if (opts.trials >= 0) doc["trials"] = static_cast<std::uint64_t>(opts.trials);
  if (!opts.sigmas.empty()) doc["noise_sigmas"] = opts.sigmas;
  if (!opts.decoders.empty()) doc["decoders"] = opts.decoders;
  return pdec_experiment_from_json(doc.dump().c_str(), out);
}

struct ExperimentGuard {
  pdec_experiment* exp = nullptr;
  ~ExperimentGuard() { pdec_experiment_free(exp); }
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
  cmd->add_option("-c,--config", opts.config_path, "experiment config (JSON)")->required();
  cmd->add_option("--seed", opts.seed, "override the master seed");
  cmd->add_option("--trials", opts.trials, "override the trial count");
  cmd->add_option("--sigmas", opts.sigmas, "override the noise sigma list");
  cmd->add_option("--decoders", opts.decoders, "override the decoder list (gf peak bp ml)");
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"physics-aware decoding over PDE channels"};
  app.require_subcommand(1);

  CommonOpts opts;
  int threads = 0;
  std::string word;
  std::string decoder = "gf";
  double sigma = -1.0;
  std::uint64_t trial = 0;
  bool with_decode = false;
  std::string code_path;
  std::uint64_t cap_log2 = 20;

  auto* cmd_grad = app.add_subcommand("gradcheck", "finite-difference oracle checks");
  add_common(cmd_grad, opts);

  auto* cmd_sim = app.add_subcommand("simulate", "dump waveform and observation CSVs");
  add_common(cmd_sim, opts);
  cmd_sim->add_option("-o,--out", opts.out, "output directory (default $PDECODE_OUT_DIR or .)");
  cmd_sim->add_option("--word", word, "transmitted word, '+-+...' or '+1,-1,...'");
  cmd_sim->add_flag("--decode", with_decode, "also run gf decoding and dump trace.csv");

  auto* cmd_dec = app.add_subcommand("decode", "single transmit+decode trial");
  add_common(cmd_dec, opts);
  cmd_dec->add_option("--decoder", decoder, "gf, peak, bp or ml (default gf)");
  cmd_dec->add_option("--sigma", sigma, "noise level (default: first configured sigma)");
  cmd_dec->add_option("--trial", trial, "trial index selecting the RNG streams");
  cmd_dec->add_option("--word", word, "transmitted word (default: random for the trial)");
  cmd_dec->add_option("-o,--out", opts.out, "trace CSV path (gf only)");

  auto* cmd_ber = app.add_subcommand("ber-sweep", "Monte-Carlo BER sweep, CSV report");
  add_common(cmd_ber, opts);
  cmd_ber->add_option("-o,--out", opts.out, "output CSV path (default <outdir>/ber.csv)");
  cmd_ber->add_option("--threads", threads, "worker threads (0 = hardware concurrency)");

  auto* cmd_book = app.add_subcommand("codebook", "export the enumerated codebook");
  cmd_book->add_option("--code", code_path, "parity-check file")->required();
  cmd_book->add_option("-o,--out", opts.out, "output path (default stdout)");
  cmd_book->add_option("--cap-log2", cap_log2, "codebook size cap exponent (default 20)");

  CLI11_PARSE(app, argc, argv);

  if (cmd_book->parsed()) {
    pdec_code* code = nullptr;
    if (pdec_status st = pdec_code_load_file(code_path.c_str(), &code); st != PDEC_OK)
      return die(st);
    char* text = nullptr;
    const pdec_status st = pdec_code_codebook_text(code, 1ull << cap_log2, &text);
    if (st != PDEC_OK) {
      pdec_code_free(code);
      return die(st);
    }
    if (opts.out.empty()) {
      std::cout << text;
    } else {
      std::ofstream out(opts.out, std::ios::binary);
      out << text;
      if (!out) {
        std::cerr << "error: write failed: " << opts.out << "\n";
        pdec_string_free(text);
        pdec_code_free(code);
        return 1;
      }
      std::cout << "codebook written to " << opts.out << "\n";
    }
    pdec_string_free(text);
    pdec_code_free(code);
    return 0;
  }

  ExperimentGuard guard;
  if (pdec_status st = load_experiment(opts, &guard.exp); st != PDEC_OK)
    return st == PDEC_ERR_IO || st == PDEC_ERR_PARSE ? 1 : die(st);

  if (cmd_grad->parsed()) {
    char* report = nullptr;
    int all_pass = 0;
    if (pdec_status st = pdec_gradcheck(guard.exp, &report, &all_pass); st != PDEC_OK)
      return die(st);
    std::cout << report;
    pdec_string_free(report);
    return all_pass ? 0 : 1;
  }

  if (cmd_sim->parsed()) {
    const std::string dir = opts.out.empty() ? default_out_dir() : opts.out;
    if (pdec_status st = pdec_simulate(guard.exp, word.empty() ? nullptr : word.c_str(),
                                       with_decode ? 1 : 0, dir.c_str());
        st != PDEC_OK)
      return die(st);
    std::cout << "waveform, observation" << (with_decode ? " and trace" : "")
              << " CSVs written to " << dir << "\n";
    return 0;
  }

  if (cmd_dec->parsed()) {
    if (sigma < 0) {
      char* resolved = nullptr;
      pdec_experiment_resolved_json(guard.exp, &resolved);
      sigma = json::parse(resolved)["noise_sigmas"][0].get<double>();
      pdec_string_free(resolved);
    }
    const int n = pdec_experiment_word_length(guard.exp);
    std::vector<char> est(static_cast<size_t>(n) + 1);
    pdec_decode_info info{};
    if (pdec_status st = pdec_decode_once(guard.exp, decoder.c_str(), sigma, trial,
                                          word.empty() ? nullptr : word.c_str(),
                                          opts.out.empty() ? nullptr : opts.out.c_str(),
                                          est.data(), &info);
        st != PDEC_OK)
      return die(st);
    std::cout << "decoder=" << decoder << " sigma=" << sigma << " trial=" << trial << "\n"
              << "estimate " << est.data() << "\n"
              << "bit_errors=" << info.bit_errors << " block_error=" << info.block_error
              << " diverged=" << info.diverged << " is_codeword=" << info.is_codeword << "\n";
    if (!opts.out.empty()) std::cout << "trace written to " << opts.out << "\n";
    return 0;
  }

  if (cmd_ber->parsed()) {
    std::string out_path = opts.out;
    if (out_path.empty())
      out_path = (std::filesystem::path(default_out_dir()) / "ber.csv").string();
    const pdec_status st = pdec_run_ber_sweep(guard.exp, threads, out_path.c_str());
    if (st == PDEC_OK) {
      std::cout << "BER report written to " << out_path << "\n";
      return 0;
    }
    if (st == PDEC_ERR_NUMERIC) {
      // report written; the oracle sanity bound failed
      std::cerr << "oracle sanity violation: " << pdec_last_error() << "\n";
      std::cerr << "BER report written to " << out_path << "\n";
      return 2;
    }
    return die(st);
  }

  return 1;
}
