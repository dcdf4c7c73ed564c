#include "qaoamps/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace qaoamps {

namespace {

using nlohmann::json;

json require(const json& j, const char* field) {
  if (!j.contains(field))
    throw SchemaError(std::string("missing field: ") + field);
  return j.at(field);
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

json certificate_to_json(const Certificate& cert) {
  json j;
  j["energy"] = cert.energy;
  j["witness"] = bits_to_string(cert.witness);
  j["optimal"] = cert.optimal;
  return j;
}

Certificate certificate_from_json(const json& j) {
  Certificate cert;
  cert.energy = require(j, "energy").get<double>();
  cert.witness = bits_from_string(require(j, "witness").get<std::string>());
  cert.optimal = j.value("optimal", false);
  return cert;
}

}  // namespace

std::string format_double(double value) {
  char buffer[64];
  auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
  if (ec != std::errc()) throw std::runtime_error("double formatting failed");
  return std::string(buffer, ptr);
}

std::string problem_case_to_json(const ProblemCase& pc) {
  json j;
  j["kind"] = pc.kind;
  j["n"] = pc.n;
  j["seed"] = pc.seed;
  if (pc.kind == "maxcut") {
    if (!pc.maxcut) throw SchemaError("maxcut case without instance data");
    j["edge_prob"] = pc.maxcut->edge_prob;
    json rows = json::array();
    for (const auto& row : pc.maxcut->adjacency)
      rows.push_back(std::vector<int>(row.begin(), row.end()));
    j["adjacency"] = rows;
  } else if (pc.kind == "ec3") {
    if (!pc.ec3) throw SchemaError("ec3 case without instance data");
    json clauses = json::array();
    for (const auto& c : pc.ec3->clauses)
      clauses.push_back(std::vector<int>(c.begin(), c.end()));
    j["clauses"] = clauses;
  } else {
    throw SchemaError("unknown problem kind: " + pc.kind);
  }
  if (pc.certificate) j["certificate"] = certificate_to_json(*pc.certificate);
  return j.dump(2) + "\n";
}

ProblemCase problem_case_from_json(const std::string& text,
                                   const std::string& id) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw SchemaError(std::string("invalid instance JSON: ") + e.what());
  }
  const std::string kind = require(j, "kind").get<std::string>();
  const int n = require(j, "n").get<int>();
  const std::uint64_t seed = require(j, "seed").get<std::uint64_t>();

  ProblemCase pc;
  if (kind == "maxcut") {
    MaxCutInstance inst;
    inst.n = n;
    inst.seed = seed;
    inst.edge_prob = j.value("edge_prob", 0.5);
    const json rows = require(j, "adjacency");
    if (static_cast<int>(rows.size()) != n)
      throw SchemaError("adjacency must have n rows");
    inst.adjacency.assign(n, std::vector<std::uint8_t>(n, 0));
    for (int i = 0; i < n; ++i) {
      if (static_cast<int>(rows[i].size()) != n)
        throw SchemaError("adjacency rows must have n entries");
      for (int k = 0; k < n; ++k)
        inst.adjacency[i][k] = rows[i][k].get<int>() ? 1 : 0;
    }
    for (int i = 0; i < n; ++i) {
      if (inst.adjacency[i][i])
        throw SchemaError("adjacency diagonal must be zero");
      for (int k = 0; k < n; ++k)
        if (inst.adjacency[i][k] != inst.adjacency[k][i])
          throw SchemaError("adjacency must be symmetric");
    }
    pc = make_case(id, inst);
  } else if (kind == "ec3") {
    Ec3Instance inst;
    inst.n = n;
    inst.seed = seed;
    for (const auto& row : require(j, "clauses")) {
      if (row.size() != 3) throw SchemaError("clauses must have 3 indices");
      std::array<int, 3> c{row[0].get<int>(), row[1].get<int>(),
                           row[2].get<int>()};
      if (!(0 <= c[0] && c[0] < c[1] && c[1] < c[2] && c[2] < n))
        throw SchemaError("clause indices must be strictly increasing in [0,n)");
      inst.clauses.push_back(c);
    }
    pc = make_case(id, inst);
  } else {
    throw SchemaError("unknown problem kind: " + kind);
  }
  if (j.contains("certificate"))
    pc.certificate = certificate_from_json(j.at("certificate"));
  return pc;
}

void write_problem_case(const std::filesystem::path& path,
                        const ProblemCase& pc) {
  write_text(path, problem_case_to_json(pc));
}

ProblemCase read_problem_case(const std::filesystem::path& path) {
  return problem_case_from_json(read_text(path), path.stem().string());
}

std::string angle_schedule_to_json(const AngleSchedule& schedule,
                                   const std::string& kind) {
  json j;
  j["kind"] = kind;
  j["p"] = schedule.p;
  j["gamma"] = schedule.gamma;
  j["beta"] = schedule.beta;
  json prov;
  prov["method"] = schedule.provenance.method;
  prov["bond_dim"] = schedule.provenance.bond_dim;
  prov["budget"] = schedule.provenance.budget;
  prov["seed"] = schedule.provenance.seed;
  j["provenance"] = prov;
  return j.dump(2) + "\n";
}

std::pair<AngleSchedule, std::string> angle_schedule_from_json(
    const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw SchemaError(std::string("invalid angle JSON: ") + e.what());
  }
  const std::string kind = require(j, "kind").get<std::string>();
  const int p = require(j, "p").get<int>();
  AngleSchedule schedule(require(j, "gamma").get<std::vector<double>>(),
                         require(j, "beta").get<std::vector<double>>());
  if (schedule.p != p)
    throw SchemaError("angle vectors do not match the declared depth p");
  if (j.contains("provenance")) {
    const json prov = j.at("provenance");
    schedule.provenance.method = prov.value("method", "file");
    schedule.provenance.bond_dim = prov.value("bond_dim", 0);
    if (prov.contains("budget")) {
      auto b = prov.at("budget").get<std::vector<int>>();
      if (b.size() == 2) schedule.provenance.budget = {b[0], b[1]};
    }
    schedule.provenance.seed = prov.value("seed", std::uint64_t{0});
  } else {
    schedule.provenance.method = "file";
  }
  return {std::move(schedule), kind};
}

void write_angle_schedule(const std::filesystem::path& path,
                          const AngleSchedule& schedule,
                          const std::string& kind) {
  write_text(path, angle_schedule_to_json(schedule, kind));
}

std::pair<AngleSchedule, std::string> read_angle_schedule(
    const std::filesystem::path& path) {
  return angle_schedule_from_json(read_text(path));
}

namespace {

void write_config_lines(std::ostream& out,
                        const std::vector<std::string>& config_lines) {
  for (const auto& line : config_lines) out << "# " << line << "\n";
}

}  // namespace

void write_sweep_csv(const std::filesystem::path& path,
                     const SweepResult& result,
                     const std::vector<std::string>& config_lines) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  write_config_lines(out, config_lines);
  out << "instance_id,kind,n,seed,D,p,metric,value,sample,sample_prob,norm,"
         "cum_discarded,seconds\n";
  for (const auto& cell : result.cells) {
    out << cell.instance_id << ',' << cell.kind << ',' << cell.n << ','
        << cell.seed << ',' << cell.bond_cap << ',' << cell.p << ','
        << cell.metric << ','
        << (cell.computable ? format_double(cell.value) : "incomputable")
        << ',' << bits_to_string(cell.sample) << ','
        << format_double(cell.sample_prob) << ',' << format_double(cell.norm)
        << ',' << format_double(cell.cum_discarded) << ','
        << format_double(cell.seconds) << "\n";
    if (cell.fidelity) {
      out << cell.instance_id << ',' << cell.kind << ',' << cell.n << ','
          << cell.seed << ',' << cell.bond_cap << ',' << cell.p << ",F,"
          << format_double(*cell.fidelity) << ','
          << bits_to_string(cell.sample) << ','
          << format_double(cell.sample_prob) << ','
          << format_double(cell.norm) << ','
          << format_double(cell.cum_discarded) << ','
          << format_double(cell.seconds) << "\n";
    }
  }
}

void write_aggregate_csv(const std::filesystem::path& path,
                         const SweepResult& result,
                         const std::vector<std::string>& config_lines) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  write_config_lines(out, config_lines);
  out << "D,p,mean_value,count,mean_fidelity\n";
  for (const auto& agg : result.aggregates) {
    out << agg.bond_cap << ',' << agg.p << ','
        << (agg.count > 0 ? format_double(agg.mean_value) : "incomputable")
        << ',' << agg.count << ','
        << (agg.mean_fidelity ? format_double(*agg.mean_fidelity) : "")
        << "\n";
  }
}

void write_landscape_csv(const std::filesystem::path& path,
                         const Landscape& landscape,
                         const std::vector<std::string>& config_lines) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  write_config_lines(out, config_lines);
  out << "gamma,beta,value\n";
  for (std::size_t gi = 0; gi < landscape.gamma_axis.size(); ++gi) {
    for (std::size_t bi = 0; bi < landscape.beta_axis.size(); ++bi) {
      out << format_double(landscape.gamma_axis[gi]) << ','
          << format_double(landscape.beta_axis[bi]) << ','
          << format_double(landscape.values(gi, bi)) << "\n";
    }
  }
}

SweepResult read_sweep_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  SweepResult result;
  std::string line;
  bool header_seen = false;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!header_seen) {
      header_seen = true;  // column header
      continue;
    }
    std::vector<std::string> fields;
    std::stringstream row(line);
    std::string field;
    while (std::getline(row, field, ',')) fields.push_back(field);
    if (fields.size() < 13) throw SchemaError("sweep CSV row has missing fields");
    SweepCell cell;
    cell.instance_id = fields[0];
    cell.kind = fields[1];
    cell.n = std::stoi(fields[2]);
    cell.seed = std::stoull(fields[3]);
    cell.bond_cap = std::stoi(fields[4]);
    cell.p = std::stoi(fields[5]);
    cell.metric = fields[6];
    if (fields[7] == "incomputable") {
      cell.computable = false;
    } else {
      cell.value = std::stod(fields[7]);
    }
    cell.sample = bits_from_string(fields[8]);
    cell.sample_prob = std::stod(fields[9]);
    cell.norm = std::stod(fields[10]);
    cell.cum_discarded = std::stod(fields[11]);
    cell.seconds = std::stod(fields[12]);
    result.cells.push_back(std::move(cell));
  }
  return result;
}

}  // namespace qaoamps
