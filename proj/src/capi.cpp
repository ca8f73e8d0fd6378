#include "pae/pae.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

#include "oracles.hpp"
#include "pae/harness.hpp"

#ifndef PAE_VERSION
#define PAE_VERSION "0.0.0"
#endif

struct pae_experiment {
  pae::ExperimentConfig cfg;
};

struct pae_result {
  pae::ExperimentResult res;
  std::string report;
};

namespace {

thread_local std::string last_error;

pae_status code_of(pae::ErrorKind kind) {
  switch (kind) {
    case pae::ErrorKind::invalid_argument: return PAE_ERR_INVALID_ARGUMENT;
    case pae::ErrorKind::config: return PAE_ERR_CONFIG;
    case pae::ErrorKind::io: return PAE_ERR_IO;
    case pae::ErrorKind::runtime: return PAE_ERR_RUNTIME;
  }
  return PAE_ERR_INTERNAL;
}

template <class F>
pae_status guard(F&& body) {
  try {
    last_error.clear();
    body();
    return PAE_OK;
  } catch (const pae::Error& e) {
    last_error = e.what();
    return code_of(e.kind());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return PAE_ERR_RUNTIME;
  } catch (const std::exception& e) {
    last_error = e.what();
    return PAE_ERR_INTERNAL;
  } catch (...) {
    last_error = "unknown exception";
    return PAE_ERR_INTERNAL;
  }
}

pae_status null_arg(const char* what) {
  last_error = std::string(what) + " is null";
  return PAE_ERR_INVALID_ARGUMENT;
}

char* dup(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

}  // namespace

extern "C" {

const char* pae_version(void) { return PAE_VERSION; }

const char* pae_last_error(void) { return last_error.c_str(); }

const char* pae_status_name(pae_status status) {
  switch (status) {
    case PAE_OK: return "ok";
    case PAE_ERR_INVALID_ARGUMENT: return "invalid argument";
    case PAE_ERR_CONFIG: return "config error";
    case PAE_ERR_IO: return "i/o error";
    case PAE_ERR_RUNTIME: return "runtime failure";
    case PAE_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

pae_status pae_experiment_default(pae_experiment** out) {
  if (!out) return null_arg("out");
  return guard([&] { *out = new pae_experiment{pae::default_experiment()}; });
}

pae_status pae_experiment_parse(const char* json_text, pae_experiment** out) {
  if (!json_text) return null_arg("json_text");
  if (!out) return null_arg("out");
  return guard([&] { *out = new pae_experiment{pae::parse_experiment(json_text)}; });
}

pae_status pae_experiment_load(const char* path, pae_experiment** out) {
  if (!path) return null_arg("path");
  if (!out) return null_arg("out");
  return guard([&] { *out = new pae_experiment{pae::load_experiment(path)}; });
}

pae_status pae_experiment_set_output_dir(pae_experiment* exp, const char* dir) {
  if (!exp) return null_arg("experiment");
  if (!dir || !*dir) return null_arg("dir");
  return guard([&] { exp->cfg.output_dir = dir; });
}

pae_status pae_experiment_validate(const pae_experiment* exp) {
  if (!exp) return null_arg("experiment");
  return guard([&] { exp->cfg.validate(); });
}

pae_status pae_experiment_to_json(const pae_experiment* exp, char** out) {
  if (!exp) return null_arg("experiment");
  if (!out) return null_arg("out");
  return guard([&] { *out = dup(pae::experiment_to_json(exp->cfg)); });
}

void pae_experiment_free(pae_experiment* exp) { delete exp; }

pae_status pae_experiment_run(const pae_experiment* exp, pae_result** out) {
  if (!exp) return null_arg("experiment");
  if (!out) return null_arg("out");
  return guard([&] {
    auto* r = new pae_result{pae::run_experiment(exp->cfg), {}};
    r->report = pae::report_csv(r->res.report.rows);
    *out = r;
  });
}

int pae_result_ok(const pae_result* res) { return res && res->res.ok() ? 1 : 0; }

size_t pae_result_mode_count(const pae_result* res) { return res ? res->res.modes.size() : 0; }

pae_status pae_result_mode(const pae_result* res, size_t index, pae_mode_summary* out) {
  if (!res) return null_arg("result");
  if (!out) return null_arg("out");
  if (index >= res->res.modes.size()) {
    last_error = "mode index out of range";
    return PAE_ERR_INVALID_ARGUMENT;
  }
  const pae::ModeOutcome& m = res->res.modes[index];
  *out = {};
  out->label = m.label.c_str();
  out->ok = m.ok() ? 1 : 0;
  out->error = m.error.c_str();
  if (m.ok() && !m.rows.empty()) {
    const pae::ErrorRow& r = m.rows[m.best];
    out->best_lambda = r.lambda;
    out->aae = r.aae;
    out->aee_abs = r.aee_abs;
    out->aee_rel = r.aee_rel;
    out->warping = r.warping;
    out->mask_pixels = r.mask_pixels;
  }
  return PAE_OK;
}

const char* pae_result_report_csv(const pae_result* res) { return res ? res->report.c_str() : ""; }

void pae_result_free(pae_result* res) { delete res; }

pae_status pae_oracle_report(const char* suite, char** out) {
  if (!suite) return null_arg("suite");
  if (!out) return null_arg("out");
  return guard([&] { *out = dup(pae::oracle::run_suite(suite)); });
}

void pae_string_free(char* s) { std::free(s); }

}  // extern "C"
