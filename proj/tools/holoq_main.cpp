// holoq: design and verification of multi-segment holonomic gate plans.
//
// Commands: design | verify | simulate | dd | two-qubit | noise-compare
// Exit codes: 0 success, 1 verification failure, 2 no solution,
//             64 usage/config error, 65 domain-precondition error, 66 I/O.

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "holoq/io.hpp"

namespace {

constexpr int kExitVerifyFail = 1;
constexpr int kExitNoSolution = 2;
constexpr int kExitUsage = 64;
constexpr int kExitDomain = 65;
constexpr int kExitIo = 66;

void emit(const holoq::json& report, const std::string& output_path) {
  const std::string text = holoq::dump_report(report);
  if (output_path.empty()) {
    std::cout << text;
  } else {
    holoq::write_text_file(output_path, text);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Holonomic gate plan design and verification"};
  app.require_subcommand(1);

  double tolerance = 1e-8;
  int samples = 64;
  int jobs = 1;
  std::string output;
  app.add_option("--tolerance", tolerance, "residual tolerance")
      ->check(CLI::PositiveNumber);
  app.add_option("--samples", samples, "trajectory samples per segment")
      ->check(CLI::Range(2, 100000));
  app.add_option("--jobs", jobs, "worker count (results are deterministic)")
      ->check(CLI::PositiveNumber);
  app.add_option("--output", output, "write the report here instead of stdout");

  // design
  auto* design = app.add_subcommand("design", "search for a shortened plan");
  double target_beta = 0.0;
  std::vector<double> eta1_grid, eta2_grid;
  double omega_max = 1.0, tau_max = 100.0;
  std::string plan_out;
  design->add_option("--target-beta", target_beta, "target geometric phase (rad)")
      ->required();
  design->add_option("--eta1-grid", eta1_grid, "eta values for segment 1");
  design->add_option("--eta2-grid", eta2_grid, "eta values for segment 2");
  design->add_option("--omega-max", omega_max, "Rabi amplitude ceiling")
      ->check(CLI::PositiveNumber);
  design->add_option("--tau-max", tau_max, "segment duration ceiling")
      ->check(CLI::PositiveNumber);
  design->add_option("--plan", plan_out, "write the designed plan here");

  // verify
  auto* verify = app.add_subcommand("verify", "check the matching conditions");
  std::string verify_plan;
  verify->add_option("plan", verify_plan, "plan JSON file")->required();

  // simulate
  auto* simulate = app.add_subcommand("simulate", "evolve a plan, extract the gate");
  std::string sim_plan, csv_out;
  simulate->add_option("plan", sim_plan, "plan JSON file")->required();
  simulate->add_option("--csv", csv_out, "write the sampled trajectory here");

  // dd
  auto* dd = app.add_subcommand("dd", "interleave a 4-segment plan with decoupling pulses");
  std::string dd_plan, sched_out;
  dd->add_option("plan", dd_plan, "plan JSON file")->required();
  dd->add_option("--schedule", sched_out, "write the protected schedule here");

  // two-qubit
  auto* twoq = app.add_subcommand("two-qubit", "compose a conditional gate");
  std::string cond_plan;
  twoq->add_option("plan", cond_plan, "conditional plan JSON file")->required();

  // noise-compare
  auto* ncmp = app.add_subcommand("noise-compare", "fidelity of two plans under noise");
  std::string short_plan_path, ref_plan_path, noise_path;
  double dt = 0.0;
  ncmp->add_option("short_plan", short_plan_path)->required();
  ncmp->add_option("reference_plan", ref_plan_path)->required();
  ncmp->add_option("--noise", noise_path, "noise model JSON file")->required();
  ncmp->add_option("--dt", dt, "integrator step (default min tau / 200)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (design->parsed()) {
      if (eta1_grid.empty() || eta2_grid.empty()) {
        std::cerr << "design: eta grids must be nonempty\n";
        return kExitUsage;
      }
      holoq::PathConstraints con{omega_max, tau_max};
      holoq::PathPlan plan;
      try {
        plan = holoq::plan_shortest_path(target_beta, eta1_grid, eta2_grid, con);
      } catch (const holoq::NoSolution& e) {
        std::cerr << e.what() << "\n";
        return kExitNoSolution;
      }
      const holoq::HolonomyReport rep =
          holoq::extract_gate(plan, samples, tolerance);
      if (!plan_out.empty()) {
        holoq::write_text_file(plan_out, holoq::dump_report(holoq::to_json(plan)));
      }
      holoq::json report = holoq::to_json(rep);
      report["plan"] = holoq::to_json(plan);
      emit(report, output);
      return 0;
    }

    if (verify->parsed()) {
      const holoq::PathPlan plan =
          holoq::plan_from_json(holoq::read_json_file(verify_plan));
      const double cyc = holoq::check_cyclic(plan, samples);
      const double geo = holoq::check_geometric(plan, samples);
      holoq::json report{{"cyclic_residual", cyc},
                         {"geometric_residual", geo},
                         {"tolerance", tolerance},
                         {"pass", cyc <= tolerance && geo <= tolerance}};
      emit(report, output);
      return (cyc <= tolerance && geo <= tolerance) ? 0 : kExitVerifyFail;
    }

    if (simulate->parsed()) {
      const holoq::PathPlan plan =
          holoq::plan_from_json(holoq::read_json_file(sim_plan));
      const holoq::HolonomyReport rep =
          holoq::extract_gate(plan, samples, tolerance);
      if (!csv_out.empty()) {
        holoq::write_text_file(
            csv_out, holoq::trajectory_csv(holoq::evolve_path(plan, samples)));
      }
      emit(holoq::to_json(rep), output);
      return 0;
    }

    if (dd->parsed()) {
      const holoq::PathPlan plan =
          holoq::plan_from_json(holoq::read_json_file(dd_plan));
      holoq::ProtectedSchedule sched;
      try {
        sched = holoq::interleave(plan);
      } catch (const holoq::InvalidPlan& e) {
        std::cerr << e.what() << "\n";
        return kExitDomain;
      }
      const double equivalence = holoq::frobenius_distance(
          holoq::protected_total(sched), holoq::unprotected_total(plan));
      const double geo = holoq::protected_geometric_residual(plan, sched, samples);
      if (!sched_out.empty()) {
        holoq::write_text_file(sched_out,
                               holoq::dump_report(holoq::to_json(sched)));
      }
      holoq::json report{{"equivalence_residual", equivalence},
                         {"protected_geometric_residual", geo},
                         {"schedule", holoq::to_json(sched)}};
      emit(report, output);
      return equivalence <= 1e-10 ? 0 : kExitVerifyFail;
    }

    if (twoq->parsed()) {
      const holoq::ConditionalPlan cp =
          holoq::conditional_plan_from_json(holoq::read_json_file(cond_plan));
      holoq::ConditionalGate gate;
      try {
        gate = holoq::compose_conditional_gate(cp, samples, tolerance);
      } catch (const holoq::NotCyclic& e) {
        std::cerr << e.what() << "\n";
        return kExitDomain;
      }
      const holoq::EntanglementResult ent = holoq::is_entangling(gate.gate4);
      holoq::json report{{"gate", holoq::to_json(gate.gate4)},
                         {"beta_up", gate.report_up.beta},
                         {"beta_down", gate.report_down.beta},
                         {"entangling", ent.entangling},
                         {"entanglement_measure", ent.measure}};
      emit(report, output);
      return 0;
    }

    if (ncmp->parsed()) {
      const holoq::PathPlan sp =
          holoq::plan_from_json(holoq::read_json_file(short_plan_path));
      const holoq::PathPlan rp =
          holoq::plan_from_json(holoq::read_json_file(ref_plan_path));
      const holoq::NoiseModel noise =
          holoq::noise_from_json(holoq::read_json_file(noise_path));
      const holoq::PathComparison cmp = holoq::compare_paths(sp, rp, noise, dt);
      holoq::json report{{"fidelity_short", cmp.fidelity_short},
                         {"fidelity_reference", cmp.fidelity_reference},
                         {"total_angle_short", cmp.total_angle_short},
                         {"total_angle_reference", cmp.total_angle_reference},
                         {"noise", holoq::to_json(noise)},
                         {"dt", cmp.dt}};
      emit(report, output);
      return 0;
    }
  } catch (const holoq::IoError& e) {
    std::cerr << e.what() << "\n";
    return kExitIo;
  } catch (const holoq::InvalidPlan& e) {
    std::cerr << e.what() << "\n";
    return kExitDomain;
  } catch (const holoq::NoSolution& e) {
    std::cerr << e.what() << "\n";
    return kExitNoSolution;
  } catch (const holoq::Error& e) {
    std::cerr << e.what() << "\n";
    return kExitDomain;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << e.what() << "\n";
    return kExitIo;
  }
  return kExitUsage;
}
