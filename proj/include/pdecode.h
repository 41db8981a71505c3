/*
 * pdecode — physics-aware decoding over PDE channels.
 *
 * C interface to the shared library: opaque handles, integer status codes,
 * and a thread-local last-error message. All functions returning pdec_status
 * report PDEC_OK (0) on success; on failure the handle outputs are left
 * untouched and pdec_last_error() describes the problem.
 */
#ifndef PDECODE_H
#define PDECODE_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define PDEC_API __declspec(dllexport)
#else
#define PDEC_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum pdec_status {
  PDEC_OK = 0,
  PDEC_ERR_INVALID_ARGUMENT = 1,
  PDEC_ERR_PARSE = 2,
  PDEC_ERR_IO = 3,
  PDEC_ERR_CONFIG = 4,
  PDEC_ERR_NUMERIC = 5,
  PDEC_ERR_INTERNAL = 6
} pdec_status;

typedef struct pdec_code pdec_code;             /* parity-check matrix */
typedef struct pdec_experiment pdec_experiment; /* resolved experiment config */

PDEC_API const char* pdec_version(void);
PDEC_API const char* pdec_status_name(pdec_status status);

/* Thread-local message describing the last failure on this thread; valid
 * until the next failing call on the same thread. */
PDEC_API const char* pdec_last_error(void);

PDEC_API void pdec_string_free(char* s);

/* ---- binary linear codes -------------------------------------------- */

/* Text format: optional '#' comment lines, a line "m n", then m rows of n
 * space-separated 0/1 symbols. All-zero rows/columns are rejected. */
PDEC_API pdec_status pdec_code_parse(const char* text, pdec_code** out);
PDEC_API pdec_status pdec_code_load_file(const char* path, pdec_code** out);
PDEC_API void pdec_code_free(pdec_code* code);

PDEC_API int pdec_code_rows(const pdec_code* code);
PDEC_API int pdec_code_cols(const pdec_code* code);
/* code dimension k = n - rank(H) */
PDEC_API int pdec_code_dimension(const pdec_code* code);

/* GF(2) syndrome H b; bits has length n (entries 0/1), out has length m. */
PDEC_API pdec_status pdec_code_syndrome(const pdec_code* code, const uint8_t* bits, size_t n,
                                        uint8_t* out);

/* Enumerated codebook, one bipolar word per line ("+1 -1 ..."); fails when
 * 2^k exceeds cap. The returned string is released with pdec_string_free. */
PDEC_API pdec_status pdec_code_codebook_text(const pdec_code* code, uint64_t cap, char** out_text);

/* ---- experiments ------------------------------------------------------ */

/* Parses and validates a JSON experiment configuration, loads the code file
 * and builds the channel. See README for the schema. */
PDEC_API pdec_status pdec_experiment_from_json(const char* json_text, pdec_experiment** out);
PDEC_API pdec_status pdec_experiment_from_file(const char* path, pdec_experiment** out);
PDEC_API void pdec_experiment_free(pdec_experiment* exp);

/* Fully resolved configuration (all defaults materialized) as canonical
 * JSON; this is the string whose FNV-1a hash tags every CSV row. */
PDEC_API pdec_status pdec_experiment_resolved_json(const pdec_experiment* exp, char** out_json);
PDEC_API int pdec_experiment_word_length(const pdec_experiment* exp);

/* ---- operations -------------------------------------------------------- */

/* Monte-Carlo BER sweep over the configured noise levels and decoders;
 * writes the CSV report to out_csv_path. threads == 0 picks the hardware
 * concurrency; any thread count produces byte-identical output. Returns
 * PDEC_ERR_NUMERIC when the gf-vs-ml oracle sanity bound is violated (the
 * CSV is still written). */
PDEC_API pdec_status pdec_run_ber_sweep(const pdec_experiment* exp, int threads,
                                        const char* out_csv_path);

/* Finite-difference oracle checks for the heat, NLSE and potential
 * gradients. *out_all_pass is 1 when every component is within tolerance. */
PDEC_API pdec_status pdec_gradcheck(const pdec_experiment* exp, char** out_report,
                                    int* out_all_pass);

/* Writes input_waveform.csv, output_waveform.csv, observation.csv (and
 * trace.csv when decode != 0) into out_dir. word is optional: either a
 * compact "+-+..." string or a comma list "+1,-1,..."; NULL draws the
 * random codeword of trial 0. */
PDEC_API pdec_status pdec_simulate(const pdec_experiment* exp, const char* word, int decode,
                                   const char* out_dir);

typedef struct pdec_decode_info {
  int bit_errors;
  int block_error;
  int diverged;
  int is_codeword;
} pdec_decode_info;

/* Runs one transmit+decode trial. decoder is "gf", "peak", "bp" or "ml";
 * est_out must hold at least word_length + 1 chars and receives the compact
 * "+-" form of the estimate. trace_csv_path (optional, gf only) dumps the
 * per-iteration trace. */
PDEC_API pdec_status pdec_decode_once(const pdec_experiment* exp, const char* decoder,
                                      double sigma, uint64_t trial, const char* word,
                                      const char* trace_csv_path, char* est_out,
                                      pdec_decode_info* info);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* PDECODE_H */
