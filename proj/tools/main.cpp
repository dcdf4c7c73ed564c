// Command-line harness: instance generation, Ising encoding, single runs,
// (D, p) sweeps, angle training, landscape dumps, sampling, and reference
// oracles. Every stochastic step derives its seed from the master seed so
// reruns are byte-identical.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "qaoamps/engine.hpp"
#include "qaoamps/io.hpp"
#include "qaoamps/parallel.hpp"
#include "qaoamps/rng.hpp"
#include "qaoamps/trainer.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace qaoamps;

namespace {

struct CommonOptions {
  double epsilon = 1e-12;
  std::string mode = "non-normalized";
  unsigned threads = 0;
};

NormMode parse_mode(const std::string& mode) {
  if (mode == "normalized") return NormMode::kNormalized;
  if (mode == "non-normalized") return NormMode::kNonNormalized;
  throw CLI::ValidationError("--mode must be normalized or non-normalized");
}

std::string format_seed_tag(std::uint64_t seed) {
  std::ostringstream out;
  out << seed;
  return out.str();
}

std::vector<ProblemCase> load_cases(const std::vector<std::string>& paths) {
  std::vector<std::string> files;
  for (const auto& p : paths) {
    if (fs::is_directory(p)) {
      std::vector<std::string> listed;
      for (const auto& entry : fs::directory_iterator(p))
        if (entry.path().extension() == ".json")
          listed.push_back(entry.path().string());
      std::sort(listed.begin(), listed.end());
      files.insert(files.end(), listed.begin(), listed.end());
    } else {
      files.push_back(p);
    }
  }
  if (files.empty())
    throw std::runtime_error("no instance files found");
  std::vector<ProblemCase> cases;
  for (const auto& f : files) cases.push_back(read_problem_case(f));
  return cases;
}

json model_to_json(const IsingModel& model) {
  json j;
  j["n"] = model.n;
  j["constant"] = model.constant;
  j["h"] = model.h;
  json couplings = json::array();
  for (const auto& [pair, v] : model.J)
    couplings.push_back({pair.first, pair.second, v});
  j["couplings"] = couplings;
  return j;
}

json certificate_json(const Certificate& cert) {
  json j;
  j["energy"] = cert.energy;
  j["witness"] = bits_to_string(cert.witness);
  j["optimal"] = cert.optimal;
  return j;
}

void maybe_certify(ProblemCase& pc) {
  if (pc.kind == "maxcut" && pc.n <= 24) {
    const auto ground = brute_force_ground(pc.model);
    pc.certificate = Certificate{ground.energy, ground.minimizers.front(),
                                 true};
  }
}

int cmd_generate(const std::string& kind, int n, int count,
                 std::uint64_t seed, double edge_prob,
                 const std::string& out_dir) {
  fs::create_directories(out_dir);
  for (int i = 0; i < count; ++i) {
    const std::uint64_t instance_seed =
        derive_seed(seed, static_cast<std::uint64_t>(i));
    std::ostringstream name;
    name << kind << "_n" << n << "_s" << format_seed_tag(seed) << "_i"
         << std::setw(4) << std::setfill('0') << i << ".json";
    ProblemCase pc;
    if (kind == "maxcut") {
      pc = make_case(name.str(), gen_maxcut_er(n, edge_prob, instance_seed));
      maybe_certify(pc);
    } else if (kind == "ec3") {
      pc = make_case(name.str(), gen_ec3(n, instance_seed).instance);
    } else {
      throw CLI::ValidationError("--kind must be maxcut or ec3");
    }
    write_problem_case(fs::path(out_dir) / name.str(), pc);
  }
  std::cout << "wrote " << count << " " << kind << " instances to " << out_dir
            << "\n";
  return 0;
}

std::vector<std::string> sweep_config_lines(const CommonOptions& common,
                                            const std::string& angles_path,
                                            const std::vector<int>& bond_dims,
                                            const std::vector<int>& depths) {
  std::vector<std::string> lines;
  std::ostringstream d, p;
  for (int v : bond_dims) d << v << ' ';
  for (int v : depths) p << v << ' ';
  lines.push_back("angles=" + angles_path);
  lines.push_back("bond_dims=" + d.str());
  lines.push_back("depths=" + p.str());
  lines.push_back("epsilon=" + format_double(common.epsilon));
  lines.push_back("mode=" + common.mode);
  return lines;
}

}  // namespace

int main(int argc, char** argv) {
  setenv("OPENBLAS_NUM_THREADS", "1", 1);
  CLI::App app{
      "Bond-capped matrix-product-state simulator for QAOA on MaxCut and "
      "EC3 instances"};
  app.require_subcommand(1);

  CommonOptions common;
  app.add_option("--epsilon", common.epsilon,
                 "relative singular-value cutoff");
  app.add_option("--mode", common.mode,
                 "normalized | non-normalized truncation accounting");
  app.add_option("--threads", common.threads,
                 "worker threads (0 = hardware)");

  // generate
  auto* generate = app.add_subcommand("generate", "write problem instances");
  std::string gen_kind = "maxcut", gen_out = ".";
  int gen_n = 14, gen_count = 1;
  std::uint64_t gen_seed = 0;
  double gen_edge_prob = 0.5;
  generate->add_option("--kind", gen_kind, "maxcut | ec3")->required();
  generate->add_option("--n", gen_n, "qubit count")->required();
  generate->add_option("--count", gen_count, "number of instances");
  generate->add_option("--seed", gen_seed, "master seed");
  generate->add_option("--edge-prob", gen_edge_prob, "G(n,w) edge chance");
  generate->add_option("--out", gen_out, "output directory")->required();

  // encode
  auto* encode = app.add_subcommand("encode", "dump the Ising encoding");
  std::string encode_in, encode_out;
  encode->add_option("--in", encode_in, "instance file")->required();
  encode->add_option("--out", encode_out, "model JSON path (default stdout)");

  // run
  auto* run = app.add_subcommand("run", "single bond-capped QAOA run");
  std::string run_in, run_angles;
  std::vector<int> run_bond_dims{16};
  std::vector<int> run_depths;
  bool run_dump_circuit = false;
  run->add_option("--in", run_in, "instance file")->required();
  run->add_option("--angles", run_angles, "angle schedule file")->required();
  run->add_option("--bond-dims", run_bond_dims, "bond cap (first value)");
  run->add_option("--depths", run_depths,
                  "depth prefix (default: full schedule)");
  run->add_flag("--dump-circuit", run_dump_circuit, "print the gate program");

  // sweep
  auto* sweep_cmd = app.add_subcommand("sweep", "grid of (instance, D, p)");
  std::vector<std::string> sweep_instances;
  std::string sweep_angles, sweep_out = "sweep.csv", sweep_agg;
  std::vector<int> sweep_bond_dims, sweep_depths;
  bool sweep_fidelity = false;
  sweep_cmd->add_option("--instances", sweep_instances,
                        "instance files or directories")
      ->required();
  sweep_cmd->add_option("--angles", sweep_angles, "master schedule file")
      ->required();
  sweep_cmd->add_option("--bond-dims", sweep_bond_dims, "bond caps")
      ->required();
  sweep_cmd->add_option("--depths", sweep_depths, "depth prefixes")
      ->required();
  sweep_cmd->add_option("--out", sweep_out, "rows CSV path");
  sweep_cmd->add_option("--aggregates", sweep_agg,
                        "aggregate CSV path (default <out>.agg.csv)");
  sweep_cmd->add_flag("--fidelity", sweep_fidelity,
                      "fill the fidelity column against full-D references");

  // train
  auto* train = app.add_subcommand("train", "build angle schedules");
  std::string train_method = "shared", train_out = "angles.json";
  std::vector<std::string> train_instances;
  std::vector<int> train_bond_dims{64};
  std::vector<int> train_depths{1};
  int train_p_max = 100, train_resolution = 48, train_refine = 60;
  std::vector<int> train_budget{200, 500};
  std::uint64_t train_seed = 0;
  train->add_option("--method", train_method, "shared | global | table");
  train->add_option("--instances", train_instances,
                    "instance files or directories")
      ->required();
  train->add_option("--bond-dims", train_bond_dims,
                    "training bond caps (shared/global use the first)");
  train->add_option("--p-max", train_p_max, "extrapolation target depth");
  train->add_option("--depths", train_depths, "depth p (global/table)");
  train->add_option("--resolution", train_resolution, "p=1 grid resolution");
  train->add_option("--refine-evals", train_refine,
                    "simplex polish budget for the p=1 anchor");
  train->add_option("--budget", train_budget,
                    "init points and total evaluations");
  train->add_option("--seed", train_seed, "master seed");
  train->add_option("--out", train_out, "angle file or table directory");

  // landscape
  auto* landscape_cmd =
      app.add_subcommand("landscape", "p=1 cost landscape CSV");
  std::string ls_in, ls_out = "landscape.csv";
  std::vector<int> ls_bond_dims{64};
  int ls_resolution = 50;
  landscape_cmd->add_option("--in", ls_in, "instance file")->required();
  landscape_cmd->add_option("--bond-dims", ls_bond_dims, "bond cap");
  landscape_cmd->add_option("--resolution", ls_resolution, "grid per axis");
  landscape_cmd->add_option("--out", ls_out, "CSV path");

  // sample
  auto* sample_cmd =
      app.add_subcommand("sample", "deterministic sample of a run");
  std::string sample_in, sample_angles;
  std::vector<int> sample_bond_dims{16};
  std::vector<int> sample_depths;
  sample_cmd->add_option("--in", sample_in, "instance file")->required();
  sample_cmd->add_option("--angles", sample_angles, "angle file")->required();
  sample_cmd->add_option("--bond-dims", sample_bond_dims, "bond cap");
  sample_cmd->add_option("--depths", sample_depths, "depth prefix");

  // oracle
  auto* oracle_cmd =
      app.add_subcommand("oracle", "reference optimum certificate");
  std::string oracle_in, oracle_method = "brute";
  int oracle_restarts = 256;
  std::uint64_t oracle_seed = 0;
  bool oracle_write = false;
  oracle_cmd->add_option("--in", oracle_in, "instance file")->required();
  oracle_cmd->add_option("--method", oracle_method,
                         "brute (n <= 24) | local (best-found)");
  oracle_cmd->add_option("--restarts", oracle_restarts,
                         "local search restarts");
  oracle_cmd->add_option("--seed", oracle_seed, "local search seed");
  oracle_cmd->add_flag("--write", oracle_write,
                       "embed the certificate into the instance file");

  // report
  auto* report_cmd =
      app.add_subcommand("report", "aggregate a sweep rows CSV");
  std::string report_in, report_out = "aggregates.csv";
  report_cmd->add_option("--in", report_in, "rows CSV")->required();
  report_cmd->add_option("--out", report_out, "aggregate CSV path");

  CLI11_PARSE(app, argc, argv);

  try {
    const NormMode mode = parse_mode(common.mode);

    if (*generate) {
      return cmd_generate(gen_kind, gen_n, gen_count, gen_seed, gen_edge_prob,
                          gen_out);
    }

    if (*encode) {
      const auto pc = read_problem_case(encode_in);
      const std::string text = model_to_json(pc.model).dump(2) + "\n";
      if (encode_out.empty()) {
        std::cout << text;
      } else {
        std::ofstream out(encode_out, std::ios::trunc);
        out << text;
      }
      return 0;
    }

    if (*run) {
      const auto pc = read_problem_case(run_in);
      auto [schedule, kind] = read_angle_schedule(run_angles);
      if (!run_depths.empty()) schedule = schedule.prefix(run_depths.front());
      if (run_dump_circuit)
        std::cout << dump_circuit(compile_qaoa(pc.model, schedule));
      RunOptions options;
      options.bond_cap = run_bond_dims.front();
      options.sv_cutoff = common.epsilon;
      options.mode = mode;
      auto [state, diag] = run_qaoa(pc.model, schedule, options);
      const auto outcome = deterministic_sample(state);
      json j;
      j["instance"] = pc.id;
      j["p"] = schedule.p;
      j["bond_dim"] = options.bond_cap;
      j["norm"] = diag.final_norm;
      j["max_bond_reached"] = diag.max_bond_reached;
      j["cum_discarded"] = diag.cum_discarded;
      j["seconds"] = diag.seconds;
      j["sample"] = bits_to_string(outcome.bits);
      j["sample_probability"] = outcome.probability;
      j["sample_energy"] = classical_energy(pc.model, outcome.bits);
      if (pc.kind == "ec3")
        j["exact_cover"] = ec3_satisfied(*pc.ec3, outcome.bits);
      if (pc.certificate)
        j["approximation_ratio"] = approximation_ratio(
            pc.model, outcome.bits, pc.certificate->energy);
      std::cout << j.dump(2) << "\n";
      return 0;
    }

    if (*sweep_cmd) {
      const auto cases = load_cases(sweep_instances);
      auto [schedule, kind] = read_angle_schedule(sweep_angles);
      SweepOptions options;
      options.sv_cutoff = common.epsilon;
      options.mode = mode;
      options.with_fidelity = sweep_fidelity;
      options.threads = common.threads;
      const auto result =
          sweep(cases, schedule, sweep_bond_dims, sweep_depths, options);
      const auto config = sweep_config_lines(common, sweep_angles,
                                             sweep_bond_dims, sweep_depths);
      write_sweep_csv(sweep_out, result, config);
      const std::string agg_path =
          sweep_agg.empty() ? sweep_out + ".agg.csv" : sweep_agg;
      write_aggregate_csv(agg_path, result, config);
      std::cout << "wrote " << result.cells.size() << " cells to " << sweep_out
                << " and aggregates to " << agg_path << "\n";
      return 0;
    }

    if (*train) {
      const auto cases = load_cases(train_instances);
      TrainOptions train_options;
      train_options.sv_cutoff = common.epsilon;
      train_options.mode = mode;
      train_options.threads = common.threads;
      const int bond_dim = train_bond_dims.front();

      if (train_method == "shared") {
        SharedAngleOptions options;
        options.resolution = train_resolution;
        options.refine_evals = train_refine;
        options.train = train_options;
        const auto schedule =
            shared_angle_set(cases, bond_dim, train_p_max, options);
        write_angle_schedule(train_out, schedule, cases.front().kind);
        std::cout << "wrote shared schedule (p=" << schedule.p << ") to "
                  << train_out << "\n";
        return 0;
      }

      if (train_method == "global") {
        if (train_budget.size() != 2)
          throw CLI::ValidationError("--budget needs two values");
        const auto& pc = cases.front();
        const auto schedule = global_optimize(
            pc.model, train_depths.front(), bond_dim,
            {train_budget[0], train_budget[1]}, train_seed,
            AngleBox::for_kind(pc.kind), train_options);
        write_angle_schedule(train_out, schedule, pc.kind);
        std::cout << "wrote optimized schedule to " << train_out << "\n";
        return 0;
      }

      if (train_method == "table") {
        // Per-(instance, D) optimal angles at depth p, plus success
        // percentages of the exact and bond-capped circuits per step j,
        // with their ratios against the exact-trained reference.
        if (train_budget.size() != 2)
          throw CLI::ValidationError("--budget needs two values");
        fs::create_directories(train_out);
        const int p = train_depths.front();
        std::ofstream angles_csv(fs::path(train_out) / "angles_table.csv",
                                 std::ios::trunc);
        angles_csv << "instance,D,p,j,gamma,beta\n";
        std::ofstream success_csv(fs::path(train_out) / "success_table.csv",
                                  std::ios::trunc);
        success_csv << "instance,D,p,j,eta_exact,eta_approx,"
                       "eta_exact_normalized,eta_approx_normalized\n";

        for (std::size_t ci = 0; ci < cases.size(); ++ci) {
          const auto& pc = cases[ci];
          const auto ground = brute_force_ground(pc.model);
          const int full_d = 1 << (pc.n / 2);
          const AngleBox box = AngleBox::for_kind(pc.kind);

          const auto reference_schedule = global_optimize(
              pc.model, p, full_d, {train_budget[0], train_budget[1]},
              derive_seed(train_seed, ci, 0xE0ull), box, train_options);
          const double eta_reference = success_percentage_exact(
              pc.model, reference_schedule, p, ground.minimizers,
              train_options);

          for (int d : train_bond_dims) {
            const auto schedule = global_optimize(
                pc.model, p, d, {train_budget[0], train_budget[1]},
                derive_seed(train_seed, ci, static_cast<std::uint64_t>(d)),
                box, train_options);
            for (int j = 1; j <= p; ++j) {
              angles_csv << pc.id << ',' << d << ',' << p << ',' << j << ','
                         << format_double(schedule.gamma[j - 1]) << ','
                         << format_double(schedule.beta[j - 1]) << "\n";
              const double eta_exact = success_percentage_exact(
                  pc.model, schedule, j, ground.minimizers, train_options);
              const double eta_approx = success_percentage_approx(
                  pc.model, schedule, j, d, ground.minimizers, train_options);
              success_csv << pc.id << ',' << d << ',' << p << ',' << j << ','
                          << format_double(eta_exact) << ','
                          << format_double(eta_approx) << ','
                          << format_double(
                                 normalized_success(eta_exact, eta_reference))
                          << ','
                          << format_double(
                                 normalized_success(eta_approx,
                                                    eta_reference))
                          << "\n";
            }
          }
        }
        std::cout << "wrote angle and success tables to " << train_out
                  << "\n";
        return 0;
      }
      throw CLI::ValidationError("--method must be shared, global, or table");
    }

    if (*landscape_cmd) {
      const auto pc = read_problem_case(ls_in);
      const AngleBox box = AngleBox::for_kind(pc.kind);
      std::vector<double> gamma_axis(ls_resolution), beta_axis(ls_resolution);
      for (int i = 0; i < ls_resolution; ++i) {
        gamma_axis[i] = box.gamma_max * i / ls_resolution;
        beta_axis[i] = box.beta_max * i / ls_resolution;
      }
      TrainOptions options;
      options.sv_cutoff = common.epsilon;
      options.mode = mode;
      options.threads = common.threads;
      const auto ls = landscape_p1(pc.model, ls_bond_dims.front(), gamma_axis,
                                   beta_axis, options);
      write_landscape_csv(
          ls_out, ls,
          {"instance=" + pc.id,
           "bond_dim=" + std::to_string(ls_bond_dims.front()),
           "mode=" + common.mode,
           "resolution=" + std::to_string(ls_resolution)});
      std::cout << "wrote " << ls_resolution * ls_resolution
                << " landscape cells to " << ls_out << "\n";
      return 0;
    }

    if (*sample_cmd) {
      const auto pc = read_problem_case(sample_in);
      auto [schedule, kind] = read_angle_schedule(sample_angles);
      if (!sample_depths.empty())
        schedule = schedule.prefix(sample_depths.front());
      RunOptions options;
      options.bond_cap = sample_bond_dims.front();
      options.sv_cutoff = common.epsilon;
      options.mode = mode;
      auto [state, diag] = run_qaoa(pc.model, schedule, options);
      const auto outcome = deterministic_sample(state);
      std::cout << bits_to_string(outcome.bits) << " "
                << format_double(outcome.probability) << "\n";
      return 0;
    }

    if (*oracle_cmd) {
      auto pc = read_problem_case(oracle_in);
      Certificate cert;
      if (oracle_method == "brute") {
        const auto ground = brute_force_ground(pc.model);
        cert = Certificate{ground.energy, ground.minimizers.front(), true};
      } else if (oracle_method == "local") {
        cert = local_search_certificate(pc.model, oracle_restarts,
                                        oracle_seed);
      } else {
        throw CLI::ValidationError("--method must be brute or local");
      }
      std::cout << certificate_json(cert).dump(2) << "\n";
      if (oracle_write) {
        pc.certificate = cert;
        write_problem_case(oracle_in, pc);
      }
      return 0;
    }

    if (*report_cmd) {
      const auto rows = read_sweep_csv(report_in);
      // Rebuild aggregates over the (D, p) pairs present, in sorted order.
      std::set<std::pair<int, int>> keys;
      for (const auto& cell : rows.cells)
        if (cell.metric != "F") keys.emplace(cell.bond_cap, cell.p);
      SweepResult result;
      result.cells = rows.cells;
      for (const auto& [d, p] : keys) {
        SweepAggregate agg;
        agg.bond_cap = d;
        agg.p = p;
        double sum = 0.0, fid_sum = 0.0;
        int fid_count = 0;
        for (const auto& cell : rows.cells) {
          if (cell.bond_cap != d || cell.p != p || !cell.computable) continue;
          if (cell.metric == "F") {
            fid_sum += cell.value;
            ++fid_count;
            continue;
          }
          sum += cell.value;
          ++agg.count;
        }
        if (agg.count > 0) agg.mean_value = sum / agg.count;
        if (fid_count > 0) agg.mean_fidelity = fid_sum / fid_count;
        result.aggregates.push_back(agg);
      }
      result.cells.clear();
      write_aggregate_csv(report_out, result, {"source=" + report_in});
      std::cout << "wrote aggregates to " << report_out << "\n";
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
