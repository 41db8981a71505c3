#include "pdecode.h"

#include <cstring>
#include <new>
#include <string>

#include "pdecode/bench.hpp"
#include "pdecode/gf2.hpp"

using namespace pdecode;

struct pdec_code {
  ParityCheckMatrix H;
};

struct pdec_experiment {
  Experiment exp;
};

namespace {

thread_local std::string g_last_error;

pdec_status fail(pdec_status status, const char* what) {
  g_last_error = what;
  return status;
}

// Runs fn, translating C++ exceptions into status codes at the ABI boundary.
template <class Fn>
pdec_status guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const std::invalid_argument& e) {
    return fail(PDEC_ERR_INVALID_ARGUMENT, e.what());
  } catch (const std::bad_alloc&) {
    return fail(PDEC_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(PDEC_ERR_INTERNAL, e.what());
  }
}

char* dup_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

pdec_status parse_decoder_id(const char* name, DecoderId* out) {
  const std::string s = name ? name : "";
  if (s == "gf") *out = DecoderId::Gf;
  else if (s == "peak") *out = DecoderId::Peak;
  else if (s == "bp") *out = DecoderId::Bp;
  else if (s == "ml") *out = DecoderId::Ml;
  else return fail(PDEC_ERR_INVALID_ARGUMENT, "decoder must be gf, peak, bp or ml");
  return PDEC_OK;
}

} // namespace

extern "C" {

const char* pdec_version(void) { return "0.1.0"; }

const char* pdec_status_name(pdec_status status) {
  switch (status) {
    case PDEC_OK: return "ok";
    case PDEC_ERR_INVALID_ARGUMENT: return "invalid argument";
    case PDEC_ERR_PARSE: return "parse error";
    case PDEC_ERR_IO: return "io error";
    case PDEC_ERR_CONFIG: return "config error";
    case PDEC_ERR_NUMERIC: return "numeric check failed";
    case PDEC_ERR_INTERNAL: return "internal error";
  }
  return "unknown";
}

const char* pdec_last_error(void) { return g_last_error.c_str(); }

void pdec_string_free(char* s) { delete[] s; }

pdec_status pdec_code_parse(const char* text, pdec_code** out) {
  if (!text || !out) return fail(PDEC_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    *out = new pdec_code{load_parity_check(text)};
    return PDEC_OK;
  });
}

pdec_status pdec_code_load_file(const char* path, pdec_code** out) {
  if (!path || !out) return fail(PDEC_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    *out = new pdec_code{load_parity_check_file(path)};
    return PDEC_OK;
  });
}

void pdec_code_free(pdec_code* code) { delete code; }

int pdec_code_rows(const pdec_code* code) { return code ? static_cast<int>(code->H.rows()) : 0; }
int pdec_code_cols(const pdec_code* code) { return code ? static_cast<int>(code->H.cols()) : 0; }

int pdec_code_dimension(const pdec_code* code) {
  if (!code) return 0;
  return static_cast<int>(code->H.cols() - code->H.rank());
}

pdec_status pdec_code_syndrome(const pdec_code* code, const uint8_t* bits, size_t n, uint8_t* out) {
  if (!code || !bits || !out) return fail(PDEC_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    const BitVec b(bits, bits + n);
    const BitVec s = syndrome(code->H, b);
    std::memcpy(out, s.data(), s.size());
    return PDEC_OK;
  });
}

pdec_status pdec_code_codebook_text(const pdec_code* code, uint64_t cap, char** out_text) {
  if (!code || !out_text) return fail(PDEC_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    const Codebook book = enumerate_codebook(code->H, cap ? cap : kDefaultCodebookCap);
    *out_text = dup_string(codebook_to_text(book));
    return PDEC_OK;
  });
}

pdec_status pdec_experiment_from_json(const char* json_text, pdec_experiment** out) {
  if (!json_text || !out) return fail(PDEC_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    try {
      ExperimentConfig cfg = parse_experiment_json(json_text);
      *out = new pdec_experiment{build_experiment(cfg)};
      return PDEC_OK;
    } catch (const std::invalid_argument& e) {
      return fail(PDEC_ERR_CONFIG, e.what());
    }
  });
}

pdec_status pdec_experiment_from_file(const char* path, pdec_experiment** out) {
  if (!path || !out) return fail(PDEC_ERR_INVALID_ARGUMENT, "null argument");
  std::FILE* f = std::fopen(path, "rb");
  if (!f) return fail(PDEC_ERR_IO, ("cannot open config file: " + std::string(path)).c_str());
  std::string text;
  char buf[4096];
  size_t got;
  while ((got = std::fread(buf, 1, sizeof buf, f)) > 0) text.append(buf, got);
  std::fclose(f);
  return pdec_experiment_from_json(text.c_str(), out);
}

void pdec_experiment_free(pdec_experiment* exp) { delete exp; }

pdec_status pdec_experiment_resolved_json(const pdec_experiment* exp, char** out_json) {
  if (!exp || !out_json) return fail(PDEC_ERR_INVALID_ARGUMENT, "null argument");
  *out_json = dup_string(exp->exp.cfg.resolved_json);
  return PDEC_OK;
}

int pdec_experiment_word_length(const pdec_experiment* exp) {
  return exp ? static_cast<int>(exp->exp.word_length()) : 0;
}

pdec_status pdec_run_ber_sweep(const pdec_experiment* exp, int threads, const char* out_csv_path) {
  if (!exp || !out_csv_path) return fail(PDEC_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&]() -> pdec_status {
    const std::vector<BerRecord> records =
        run_ber_sweep(exp->exp, threads < 0 ? 0u : static_cast<unsigned>(threads));
    const std::string csv = ber_records_to_csv(records, exp->exp.cfg);
    std::FILE* f = std::fopen(out_csv_path, "wb");
    if (!f) return fail(PDEC_ERR_IO, ("cannot open output file: " + std::string(out_csv_path)).c_str());
    const size_t put = std::fwrite(csv.data(), 1, csv.size(), f);
    std::fclose(f);
    if (put != csv.size()) return fail(PDEC_ERR_IO, "short write on CSV output");
    if (auto violation = oracle_sanity_violation(records))
      return fail(PDEC_ERR_NUMERIC, violation->c_str());
    return PDEC_OK;
  });
}

pdec_status pdec_gradcheck(const pdec_experiment* exp, char** out_report, int* out_all_pass) {
  if (!exp) return fail(PDEC_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    const GradcheckReport rep = gradcheck(exp->exp);
    if (out_report) *out_report = dup_string(gradcheck_to_text(rep));
    if (out_all_pass) *out_all_pass = rep.all_pass ? 1 : 0;
    return PDEC_OK;
  });
}

pdec_status pdec_simulate(const pdec_experiment* exp, const char* word, int decode,
                          const char* out_dir) {
  if (!exp || !out_dir) return fail(PDEC_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    SimulateOptions opts;
    if (word) opts.word = parse_word(word, exp->exp.word_length());
    opts.decode = decode != 0;
    simulate(exp->exp, opts, out_dir);
    return PDEC_OK;
  });
}

pdec_status pdec_decode_once(const pdec_experiment* exp, const char* decoder, double sigma,
                             uint64_t trial, const char* word, const char* trace_csv_path,
                             char* est_out, pdec_decode_info* info) {
  if (!exp || !est_out) return fail(PDEC_ERR_INVALID_ARGUMENT, "null argument");
  DecoderId id;
  if (pdec_status st = parse_decoder_id(decoder, &id); st != PDEC_OK) return st;
  return guarded([&] {
    std::optional<BipolarWord> w;
    if (word) w = parse_word(word, exp->exp.word_length());
    std::optional<std::string> trace;
    if (trace_csv_path) trace = std::string(trace_csv_path);
    const SingleDecode r = decode_once(exp->exp, id, sigma, trial, w, trace);
    for (size_t j = 0; j < r.estimate.size(); ++j) est_out[j] = r.estimate[j] > 0 ? '+' : '-';
    est_out[r.estimate.size()] = '\0';
    if (info) {
      info->bit_errors = static_cast<int>(r.bit_errors);
      info->block_error = r.block_error ? 1 : 0;
      info->diverged = r.diverged ? 1 : 0;
      info->is_codeword = r.is_codeword ? 1 : 0;
    }
    return PDEC_OK;
  });
}

} // extern "C"
