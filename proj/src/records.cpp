#include "blindmix/records.hpp"

#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace blindmix {

namespace {

const char* kTraceHeader =
    "experiment,encoder,solver,N,K,L,s,sigma,kappa,seed,trial,iter,f,grad_norm,err,time_ms";
const char* kSummaryHeader =
    "experiment,encoder,solver,N,K,L,s,sigma,kappa,seed,trial,success,err,iterations,time_ms";

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string config_prefix(const RecordConfig& c) {
  std::ostringstream os;
  os << c.experiment << ',' << c.encoder << ',' << c.solver << ',' << c.N << ',' << c.K << ','
     << c.L << ',' << c.s << ',' << fmt_double(c.sigma) << ',' << fmt_double(c.kappa);
  return os.str();
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream is(line);
  while (std::getline(is, field, ',')) out.push_back(field);
  return out;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("write_records: cannot open " + path);
  os << text;
  if (!os) throw std::runtime_error("write_records: write failed for " + path);
}

std::string read_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("read_records: cannot open " + path);
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

nlohmann::json trace_to_json(const IterateTrace& trace) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& row : trace)
    arr.push_back({{"iter", row.iter},
                   {"f", row.f},
                   {"grad_norm", row.grad_norm},
                   {"err", row.err},
                   {"time_ms", row.time_ms}});
  return arr;
}

IterateTrace trace_from_json(const nlohmann::json& arr) {
  IterateTrace trace;
  for (const auto& j : arr)
    trace.push_back({j.at("iter").get<int>(), j.at("f").get<double>(),
                     j.at("grad_norm").get<double>(), j.at("err").get<double>(),
                     j.at("time_ms").get<double>()});
  return trace;
}

}  // namespace

bool TrialRecord::operator==(const TrialRecord& o) const {
  if (seed != o.seed || trial != o.trial || success != o.success || err != o.err ||
      iterations != o.iterations || time_ms != o.time_ms || trace.size() != o.trace.size())
    return false;
  for (std::size_t i = 0; i < trace.size(); ++i) {
    const auto& a = trace[i];
    const auto& b = o.trace[i];
    if (a.iter != b.iter || a.f != b.f || a.grad_norm != b.grad_norm || a.err != b.err ||
        a.time_ms != b.time_ms)
      return false;
  }
  return true;
}

RecordFormat record_format_from_string(const std::string& name) {
  if (name == "csv") return RecordFormat::Csv;
  if (name == "json") return RecordFormat::Json;
  throw std::invalid_argument("unknown record format: " + name);
}

std::string to_string(RecordFormat fmt) { return fmt == RecordFormat::Csv ? "csv" : "json"; }

std::string summary_path(const std::string& path) {
  const auto dot = path.find_last_of('.');
  const auto slash = path.find_last_of('/');
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash))
    return path + ".summary";
  return path.substr(0, dot) + ".summary" + path.substr(dot);
}

void write_records(const std::vector<ExperimentRecord>& records, const std::string& path,
                   RecordFormat format) {
  if (format == RecordFormat::Csv) {
    std::ostringstream trace_os, summary_os;
    trace_os << kTraceHeader << '\n';
    summary_os << kSummaryHeader << '\n';
    for (const auto& rec : records) {
      const std::string prefix = config_prefix(rec.config);
      for (const auto& trial : rec.trials) {
        summary_os << prefix << ',' << trial.seed << ',' << trial.trial << ','
                   << (trial.success ? 1 : 0) << ',' << fmt_double(trial.err) << ','
                   << trial.iterations << ',' << fmt_double(trial.time_ms) << '\n';
        for (const auto& row : trial.trace) {
          trace_os << prefix << ',' << trial.seed << ',' << trial.trial << ',' << row.iter << ','
                   << fmt_double(row.f) << ',' << fmt_double(row.grad_norm) << ','
                   << fmt_double(row.err) << ',' << fmt_double(row.time_ms) << '\n';
        }
      }
    }
    write_file(path, trace_os.str());
    write_file(summary_path(path), summary_os.str());
    return;
  }

  nlohmann::json full = nlohmann::json::array();
  nlohmann::json summary = nlohmann::json::array();
  for (const auto& rec : records) {
    nlohmann::json jr;
    jr["config"] = {{"experiment", rec.config.experiment}, {"encoder", rec.config.encoder},
                    {"solver", rec.config.solver},         {"N", rec.config.N},
                    {"K", rec.config.K},                   {"L", rec.config.L},
                    {"s", rec.config.s},                   {"sigma", rec.config.sigma},
                    {"kappa", rec.config.kappa}};
    jr["trials"] = nlohmann::json::array();
    for (const auto& trial : rec.trials) {
      jr["trials"].push_back({{"seed", trial.seed},
                              {"trial", trial.trial},
                              {"success", trial.success},
                              {"err", trial.err},
                              {"iterations", trial.iterations},
                              {"time_ms", trial.time_ms},
                              {"trace", trace_to_json(trial.trace)}});
      nlohmann::json js = jr["config"];
      js["seed"] = trial.seed;
      js["trial"] = trial.trial;
      js["success"] = trial.success;
      js["err"] = trial.err;
      js["iterations"] = trial.iterations;
      js["time_ms"] = trial.time_ms;
      summary.push_back(js);
    }
    full.push_back(jr);
  }
  write_file(path, full.dump(2) + "\n");
  write_file(summary_path(path), summary.dump(2) + "\n");
}

std::vector<ExperimentRecord> read_records(const std::string& path, RecordFormat format) {
  std::vector<ExperimentRecord> records;

  if (format == RecordFormat::Json) {
    const nlohmann::json full = nlohmann::json::parse(read_file(path));
    for (const auto& jr : full) {
      ExperimentRecord rec;
      const auto& jc = jr.at("config");
      rec.config = {jc.at("experiment").get<std::string>(), jc.at("encoder").get<std::string>(),
                    jc.at("solver").get<std::string>(),     jc.at("N").get<int>(),
                    jc.at("K").get<int>(),                  jc.at("L").get<int>(),
                    jc.at("s").get<int>(),                  jc.at("sigma").get<double>(),
                    jc.at("kappa").get<double>()};
      for (const auto& jt : jr.at("trials")) {
        TrialRecord trial;
        trial.seed = jt.at("seed").get<std::uint64_t>();
        trial.trial = jt.at("trial").get<int>();
        trial.success = jt.at("success").get<bool>();
        trial.err = jt.at("err").get<double>();
        trial.iterations = jt.at("iterations").get<int>();
        trial.time_ms = jt.at("time_ms").get<double>();
        trial.trace = trace_from_json(jt.at("trace"));
        rec.trials.push_back(std::move(trial));
      }
      records.push_back(std::move(rec));
    }
    return records;
  }

  // CSV: summaries define the records; trace rows re-attach by (config, seed, trial).
  std::istringstream summary_is(read_file(summary_path(path)));
  std::string line;
  if (!std::getline(summary_is, line) || line != kSummaryHeader)
    throw std::runtime_error("read_records: bad summary header in " + summary_path(path));
  std::map<std::string, std::size_t> record_index;
  std::map<std::pair<std::string, std::string>, std::pair<std::size_t, std::size_t>> trial_index;
  while (std::getline(summary_is, line)) {
    if (line.empty()) continue;
    const auto f = split_csv(line);
    if (f.size() != 15) throw std::runtime_error("read_records: malformed summary row");
    RecordConfig cfg{f[0], f[1], f[2], std::stoi(f[3]), std::stoi(f[4]),
                     std::stoi(f[5]), std::stoi(f[6]), std::stod(f[7]), std::stod(f[8])};
    const std::string key = config_prefix(cfg);
    auto it = record_index.find(key);
    if (it == record_index.end()) {
      it = record_index.emplace(key, records.size()).first;
      records.push_back({cfg, {}});
    }
    TrialRecord trial;
    trial.seed = std::stoull(f[9]);
    trial.trial = std::stoi(f[10]);
    trial.success = f[11] == "1";
    trial.err = std::stod(f[12]);
    trial.iterations = std::stoi(f[13]);
    trial.time_ms = std::stod(f[14]);
    trial_index[{key, f[9] + ":" + f[10]}] = {it->second, records[it->second].trials.size()};
    records[it->second].trials.push_back(std::move(trial));
  }

  std::istringstream trace_is(read_file(path));
  if (!std::getline(trace_is, line) || line != kTraceHeader)
    throw std::runtime_error("read_records: bad trace header in " + path);
  while (std::getline(trace_is, line)) {
    if (line.empty()) continue;
    const auto f = split_csv(line);
    if (f.size() != 16) throw std::runtime_error("read_records: malformed trace row");
    RecordConfig cfg{f[0], f[1], f[2], std::stoi(f[3]), std::stoi(f[4]),
                     std::stoi(f[5]), std::stoi(f[6]), std::stod(f[7]), std::stod(f[8])};
    const auto it = trial_index.find({config_prefix(cfg), f[9] + ":" + f[10]});
    if (it == trial_index.end()) throw std::runtime_error("read_records: trace row without summary");
    records[it->second.first].trials[it->second.second].trace.push_back(
        {std::stoi(f[11]), std::stod(f[12]), std::stod(f[13]), std::stod(f[14]),
         std::stod(f[15])});
  }
  return records;
}

}  // namespace blindmix
