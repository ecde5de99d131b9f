#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "pla/design.hpp"
#include "pla/sequence.hpp"

namespace pla::io {

using nlohmann::json;

/// Scientific notation with 12 significant digits; stable across runs so
/// emitted files can be diffed against tight tolerances.
inline std::string format_number(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.11e", x);
  return buf;
}

inline json sequence_to_json(const PulseSequence& seq) {
  json j;
  j["name"] = seq.name();
  j["phases_rad"] = seq.phases();
  j["rabi_rad_per_s"] = seq.rabi();
  j["envelope"] = to_string(seq.envelope().kind());
  return j;
}

inline Envelope envelope_from_json(const json& j, double rabi) {
  const std::string kind = j.at("kind").get<std::string>();
  const double t_d = j.value("t_d_s", 0.0);
  if (kind == "square") return Envelope::square(rabi);
  if (kind == "raised_cosine") return Envelope::raised_cosine(rabi, t_d);
  if (kind == "truncated_gaussian") {
    return Envelope::truncated_gaussian(rabi, t_d);
  }
  if (kind == "custom") {
    if (!j.contains("samples")) {
      throw std::invalid_argument("envelope: custom kind requires samples");
    }
    std::vector<std::pair<double, double>> samples;
    for (const auto& row : j.at("samples")) {
      samples.emplace_back(row.at(0).get<double>(), row.at(1).get<double>());
    }
    if (!(t_d > 0.0)) {
      throw std::invalid_argument("envelope: custom kind requires t_d_s > 0");
    }
    return Envelope::custom(rabi, t_d, std::move(samples));
  }
  throw std::invalid_argument("envelope: unknown kind '" + kind + "'");
}

/// Builds the envelope referenced by a sequence file: a named kind or a path
/// to an envelope JSON file.
inline std::shared_ptr<const Envelope> envelope_from_reference(
    const std::string& ref, double rabi) {
  if (ref == "square") {
    return std::make_shared<Envelope>(Envelope::square(rabi));
  }
  if (ref == "raised_cosine") {
    return std::make_shared<Envelope>(Envelope::raised_cosine(rabi));
  }
  if (ref == "truncated_gaussian") {
    return std::make_shared<Envelope>(Envelope::truncated_gaussian(rabi));
  }
  std::ifstream in(ref);
  if (!in) {
    throw std::invalid_argument("envelope: unknown kind or unreadable file '" +
                                ref + "'");
  }
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw std::invalid_argument("envelope: malformed JSON in '" + ref +
                                "': " + e.what());
  }
  return std::make_shared<Envelope>(envelope_from_json(j, rabi));
}

inline PulseSequence sequence_from_json(const json& j,
                                        bool degrees = false) {
  try {
    const std::string name = j.at("name").get<std::string>();
    std::vector<double> phases =
        j.at("phases_rad").get<std::vector<double>>();
    const double rabi = j.at("rabi_rad_per_s").get<double>();
    if (degrees) {
      for (double& p : phases) p *= pi / 180.0;
    }
    std::shared_ptr<const Envelope> env;
    if (j.contains("envelope")) {
      env = envelope_from_reference(j.at("envelope").get<std::string>(), rabi);
    }
    return PulseSequence(name, std::move(phases), rabi, std::move(env));
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("sequence: malformed JSON: ") +
                                e.what());
  }
}

inline PulseSequence load_sequence(const std::string& path,
                                   bool degrees = false) {
  std::ifstream in(path);
  if (!in) {
    throw std::invalid_argument("sequence: cannot open '" + path + "'");
  }
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw std::invalid_argument("sequence: malformed JSON in '" + path +
                                "': " + e.what());
  }
  return sequence_from_json(j, degrees);
}

/// Resolves a CLI sequence argument: a catalog name or a JSON file path.
inline PulseSequence resolve_sequence(const std::string& arg, double rabi,
                                      bool degrees = false) {
  for (auto& seq : catalog(rabi)) {
    if (seq.name() == arg) return seq;
  }
  if (arg.size() > 5 && arg.substr(arg.size() - 5) == ".json") {
    return load_sequence(arg, degrees);
  }
  std::ifstream probe(arg);
  if (probe) return load_sequence(arg, degrees);
  throw std::invalid_argument("unknown sequence name: " + arg);
}

inline json report_to_json(const std::string& name,
                           const ConstraintReport& rep, double tol) {
  json j;
  j["name"] = name;
  j["n"] = rep.n;
  j["residuals"] = rep.residuals;
  j["gate_residual"] = rep.gate_residual;
  j["tol"] = tol;
  j["satisfies"] = rep.satisfies(tol);
  return j;
}

/// Minimal CSV emitter: fixed header, rows of 12-significant-digit numbers.
class CsvWriter {
 public:
  explicit CsvWriter(std::string header) { out_ << header << '\n'; }

  void row(const std::vector<double>& values) {
    for (size_t i = 0; i < values.size(); ++i) {
      if (i > 0) out_ << ',';
      out_ << format_number(values[i]);
    }
    out_ << '\n';
  }

  void raw_row(const std::string& line) { out_ << line << '\n'; }

  std::string str() const { return out_.str(); }

 private:
  std::ostringstream out_;
};

}  // namespace pla::io
