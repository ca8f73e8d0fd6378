#ifndef PAE_PAE_H
#define PAE_PAE_H

/* C interface of the photoacoustic elastography library. Handles are opaque;
 * every call that can fail returns a pae_status and leaves a message for
 * pae_last_error() on the calling thread. */

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(__GNUC__)
#define PAE_API __attribute__((visibility("default")))
#else
#define PAE_API
#endif

typedef enum pae_status {
  PAE_OK = 0,
  PAE_ERR_INVALID_ARGUMENT = 1,
  PAE_ERR_CONFIG = 2,
  PAE_ERR_IO = 3,
  PAE_ERR_RUNTIME = 4,
  PAE_ERR_INTERNAL = 5
} pae_status;

typedef struct pae_experiment pae_experiment;
typedef struct pae_result pae_result;

typedef struct pae_mode_summary {
  const char* label;  /* owned by the result */
  int ok;
  const char* error;  /* empty when ok */
  double best_lambda;
  double aae;
  double aee_abs;
  double aee_rel;
  double warping;
  size_t mask_pixels;
} pae_mode_summary;

PAE_API const char* pae_version(void);
PAE_API const char* pae_last_error(void);
PAE_API const char* pae_status_name(pae_status status);

PAE_API pae_status pae_experiment_default(pae_experiment** out);
PAE_API pae_status pae_experiment_parse(const char* json_text, pae_experiment** out);
/* Reads a config file or a manifest written by a previous run. */
PAE_API pae_status pae_experiment_load(const char* path, pae_experiment** out);
PAE_API pae_status pae_experiment_set_output_dir(pae_experiment* exp, const char* dir);
PAE_API pae_status pae_experiment_validate(const pae_experiment* exp);
/* Resolved config as JSON; release with pae_string_free. */
PAE_API pae_status pae_experiment_to_json(const pae_experiment* exp, char** out);
PAE_API void pae_experiment_free(pae_experiment* exp);

/* Runs every texture mode and writes the artifacts. A result is produced even
 * when some modes fail; pae_result_ok tells whether all succeeded. */
PAE_API pae_status pae_experiment_run(const pae_experiment* exp, pae_result** out);
PAE_API int pae_result_ok(const pae_result* res);
PAE_API size_t pae_result_mode_count(const pae_result* res);
PAE_API pae_status pae_result_mode(const pae_result* res, size_t index, pae_mode_summary* out);
/* The "Texture Mode,AAE,AEEabs,AEErel,Warping" table; owned by the result. */
PAE_API const char* pae_result_report_csv(const pae_result* res);
PAE_API void pae_result_free(pae_result* res);

/* Reference values of an oracle suite (bessel, irf, psf, abel, wave, all). */
PAE_API pae_status pae_oracle_report(const char* suite, char** out);

PAE_API void pae_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif
