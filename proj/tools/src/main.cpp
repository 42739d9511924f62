#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "commands.hpp"
#include "config.hpp"

using namespace flexcross;
using namespace flexcross::cli;

namespace {

int code_for(ErrorCode c) {
  switch (c) {
    case ErrorCode::input:
    case ErrorCode::io:
    case ErrorCode::invalid_data:
    case ErrorCode::degenerate_data:
    case ErrorCode::inconsistent_signs:
    case ErrorCode::unsupported:
      return 2;
    case ErrorCode::indeterminate:
      return 3;
    default:
      return 1;
  }
}

void emit(const std::string& out, const std::string& content) {
  if (out.empty() || out == "-")
    std::cout << content << std::flush;
  else
    write_atomic(out, content);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"flexcross: flexible cross-polytopes of the simplest type in E^n, S^n and H^n"};
  app.require_subcommand(1);

  std::string config_path, out, u_token = "1", method = "all", projection = "auto";
  std::optional<std::string> seed_token, pole_token;
  std::vector<std::string> tol_overrides;
  bool certificate = false, allow_inconclusive = false, json_report = false;

  auto common = [&](CLI::App* sub) {
    sub->add_option("config", config_path, "JSON configuration file")->required();
    sub->add_option("--out,-o", out, "output path (default stdout); written atomically");
    sub->add_option("--seed", seed_token, "random seed; overrides FLEXCROSS_SEED and the config");
    sub->add_option("--tol", tol_overrides, "tolerance override NAME=VALUE (repeatable)");
  };
  CLI::App* verify = app.add_subcommand("verify", "run every invariant check and report pass/fail");
  common(verify);
  verify->add_flag("--allow-inconclusive", allow_inconclusive, "inconclusive checks do not change the exit status");
  verify->add_flag("--json", json_report, "emit the report as JSON");
  CLI::App* trajectory = app.add_subcommand("trajectory", "vertex coordinates and dihedral angles along the grid");
  common(trajectory);
  CLI::App* volume = app.add_subcommand("volume", "generalized volume along the grid");
  common(volume);
  volume->add_option("--method", method, "closed-form | schlafli | decomposition | all")
      ->check(CLI::IsMember({"closed-form", "schlafli", "decomposition", "all"}));
  CLI::App* flat = app.add_subcommand("flat", "geometry of the two flat positions");
  common(flat);
  CLI::App* embed = app.add_subcommand("embed", "embeddedness of P_u");
  common(embed);
  embed->add_option("--u", u_token, "flexion parameter (number or inf)");
  embed->add_flag("--certificate", certificate, "build the rotated family and certify embeddedness near u = 0");
  embed->add_flag("--allow-inconclusive", allow_inconclusive, "an inconclusive verdict exits with 0");
  CLI::App* mesh = app.add_subcommand("mesh", "OFF mesh of P_u (n = 3)");
  common(mesh);
  mesh->add_option("--u", u_token, "flexion parameter (number or inf)");
  mesh->add_option("--projection", projection, "auto | stereographic | klein | direct")
      ->check(CLI::IsMember({"auto", "stereographic", "klein", "direct"}));
  mesh->add_option("--pole", pole_token, "stereographic pole as x0,x1,x2,x3 (default -m)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    RunConfig cfg = parse_config(config_path);
    if (const char* env = std::getenv("FLEXCROSS_SEED")) cfg.seed = parse_seed(env);
    if (seed_token) cfg.seed = parse_seed(*seed_token);
    for (const std::string& kv : tol_overrides) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) throw Error(ErrorCode::input, "--tol expects NAME=VALUE, got '" + kv + "'");
      double v = 0.0;
      try {
        v = std::stod(kv.substr(eq + 1));
      } catch (const std::exception&) {
        throw Error(ErrorCode::input, "--tol value is not a number in '" + kv + "'");
      }
      cfg.tol.set(kv.substr(0, eq), v);
    }

    if (*verify) {
      VerificationReport r = cmd_verify(cfg);
      emit(out, json_report ? r.to_json() + "\n" : r.to_text());
      return exit_status(r, allow_inconclusive);
    }
    if (*trajectory) {
      emit(out, cmd_trajectory(cfg).to_csv());
      return 0;
    }
    if (*volume) {
      emit(out, cmd_volume(cfg, volume_selection_from_string(method)).to_csv());
      return 0;
    }
    if (*flat) {
      CommandOutput o = cmd_flat(cfg);
      emit(out, o.text);
      return o.status;
    }
    if (*embed) {
      CommandOutput o = cmd_embed(cfg, parse_param(u_token), certificate);
      emit(out, o.text);
      return o.status == 3 && allow_inconclusive ? 0 : o.status;
    }
    if (*mesh) {
      emit(out, cmd_mesh(cfg, parse_param(u_token), projection_from_string(projection),
                         pole_token ? std::optional<Vec>(parse_vector(*pole_token)) : std::nullopt));
      return 0;
    }
  } catch (const Error& e) {
    std::cerr << "flexcross: " << e.what() << "\n";
    return code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "flexcross: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
