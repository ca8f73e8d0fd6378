// Command line front end; talks to the library only through pae.h.

#include <CLI11.hpp>
#include <cstdio>
#include <cstdlib>
#include <string>

#include "pae/pae.h"

namespace {

enum Exit { kSuccess = 0, kConfigError = 1, kRuntimeFailure = 2 };

int report(pae_status st, const char* what) {
  std::fprintf(stderr, "pae: %s: %s: %s\n", what, pae_status_name(st), pae_last_error());
  return st == PAE_ERR_CONFIG || st == PAE_ERR_INVALID_ARGUMENT ? kConfigError : kRuntimeFailure;
}

int load(const std::string& path, pae_experiment** exp) {
  if (pae_status st = pae_experiment_load(path.c_str(), exp); st != PAE_OK) return report(st, "load");
  if (pae_status st = pae_experiment_validate(*exp); st != PAE_OK) {
    const int code = report(st, "validate");
    pae_experiment_free(*exp);
    *exp = nullptr;
    return code;
  }
  return kSuccess;
}

int cmd_validate(const std::string& path, bool echo) {
  pae_experiment* exp = nullptr;
  if (int code = load(path, &exp); code != kSuccess) return code;
  if (echo) {
    char* text = nullptr;
    if (pae_experiment_to_json(exp, &text) == PAE_OK) {
      std::printf("%s\n", text);
      pae_string_free(text);
    }
  } else {
    std::printf("%s: valid\n", path.c_str());
  }
  pae_experiment_free(exp);
  return kSuccess;
}

int cmd_run(const std::string& path, const std::string& output) {
  pae_experiment* exp = nullptr;
  if (int code = load(path, &exp); code != kSuccess) return code;
  if (!output.empty()) {
    if (pae_status st = pae_experiment_set_output_dir(exp, output.c_str()); st != PAE_OK) {
      pae_experiment_free(exp);
      return report(st, "output");
    }
  }
  pae_result* res = nullptr;
  const pae_status st = pae_experiment_run(exp, &res);
  pae_experiment_free(exp);
  if (st != PAE_OK) return report(st, "run");

  std::printf("%s", pae_result_report_csv(res));
  int code = kSuccess;
  for (size_t k = 0; k < pae_result_mode_count(res); ++k) {
    pae_mode_summary m;
    if (pae_result_mode(res, k, &m) != PAE_OK) continue;
    if (m.ok) {
      std::fprintf(stderr, "%s: best lambda %.6g\n", m.label, m.best_lambda);
    } else {
      std::fprintf(stderr, "pae: mode %s failed: %s\n", m.label, m.error);
      code = kRuntimeFailure;
    }
  }
  pae_result_free(res);
  return code;
}

int cmd_oracle(const std::string& suite) {
  char* text = nullptr;
  if (pae_status st = pae_oracle_report(suite.c_str(), &text); st != PAE_OK) return report(st, "oracle");
  std::printf("%s", text);
  pae_string_free(text);
  return kSuccess;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Photoacoustic elastography experiments"};
  app.set_version_flag("--version", pae_version());
  app.require_subcommand(1);
  int threads = 0;
  app.add_option("--threads", threads, "worker threads (overrides PAE_THREADS)")->check(CLI::PositiveNumber);

  std::string config, output, suite;
  bool echo = false;
  auto* run = app.add_subcommand("run", "run an experiment from a config or manifest");
  run->add_option("config", config, "config file")->required();
  run->add_option("-o,--output", output, "output directory (overrides the config)");
  auto* validate = app.add_subcommand("validate", "check a config without running it");
  validate->add_option("config", config, "config file")->required();
  validate->add_flag("--print", echo, "print the resolved config");
  auto* oracle = app.add_subcommand("oracle", "print reference values of an oracle suite");
  oracle->add_option("suite", suite, "bessel, irf, psf, abel, wave or all")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfigError;
  }
  if (threads > 0) setenv("PAE_THREADS", std::to_string(threads).c_str(), 1);

  if (run->parsed()) return cmd_run(config, output);
  if (validate->parsed()) return cmd_validate(config, echo);
  return cmd_oracle(suite);
}
