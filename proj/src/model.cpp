#include "qpad/model.hpp"

#include <fstream>

#include <json.hpp>

namespace qpad {

void QpadConfig::validate() const {
  if (m < 1) throw ArgumentError("config: m must be at least 1");
  if (!(b_percent > 0.0 && b_percent <= 100.0))
    throw ArgumentError("config: b must lie in (0, 100]");
  if (!(alpha >= 0.0)) throw ArgumentError("config: alpha must be >= 0");
  if (max_iters_per_axis < 1) throw ArgumentError("config: iteration budget must be at least 1");
  if (!(grad_tol > 0.0)) throw ArgumentError("config: grad_tol must be positive");
  if (restarts_per_axis < 1) throw ArgumentError("config: restarts must be at least 1");
}

namespace {

constexpr char kMagic[] = "QPADv1";

nlohmann::json config_to_json(const QpadConfig& c) {
  return {{"m", c.m},
          {"b_percent", c.b_percent},
          {"alpha", c.alpha},
          {"max_iters_per_axis", c.max_iters_per_axis},
          {"grad_tol", c.grad_tol},
          {"seed", c.seed},
          {"restarts_per_axis", c.restarts_per_axis}};
}

QpadConfig config_from_json(const nlohmann::json& j) {
  QpadConfig c;
  c.m = j.at("m").get<int>();
  c.b_percent = j.at("b_percent").get<double>();
  c.alpha = j.at("alpha").get<double>();
  c.max_iters_per_axis = j.at("max_iters_per_axis").get<int>();
  c.grad_tol = j.at("grad_tol").get<double>();
  c.seed = j.at("seed").get<std::uint64_t>();
  c.restarts_per_axis = j.at("restarts_per_axis").get<int>();
  return c;
}

}  // namespace

void save_model(const std::filesystem::path& path, const ProjectionModel& model) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw FormatError("cannot open file for writing: " + path.string());

  nlohmann::json header = {{"m", model.target_dim()},
                           {"n", model.input_dim()},
                           {"method", model.method},
                           {"rows_unit", model.rows_unit},
                           {"config", config_to_json(model.config)}};
  out << kMagic << '\n' << header.dump() << '\n';
  out.write(reinterpret_cast<const char*>(model.directions.data()),
            static_cast<std::streamsize>(model.directions.size()) * sizeof(double));
  out.write(reinterpret_cast<const char*>(model.mean.data()),
            static_cast<std::streamsize>(model.mean.size()) * sizeof(double));
  if (!out) throw FormatError("write failed: " + path.string());
}

ProjectionModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open model file: " + path.string());

  std::string magic;
  if (!std::getline(in, magic) || magic != kMagic) {
    throw FormatError(path.string() + ": not a QPADv1 model file");
  }
  std::string header_line;
  if (!std::getline(in, header_line)) {
    throw FormatError(path.string() + ": missing model header");
  }

  ProjectionModel model;
  Index m = 0;
  Index n = 0;
  try {
    nlohmann::json header = nlohmann::json::parse(header_line);
    m = header.at("m").get<Index>();
    n = header.at("n").get<Index>();
    model.method = header.at("method").get<std::string>();
    model.rows_unit = header.at("rows_unit").get<bool>();
    model.config = config_from_json(header.at("config"));
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(path.string() + ": bad model header: " + e.what());
  }
  if (m < 1 || n < 1 || m > n) {
    throw FormatError(path.string() + ": invalid model shape m=" + std::to_string(m) +
                      ", n=" + std::to_string(n));
  }

  model.directions.resize(m, n);
  in.read(reinterpret_cast<char*>(model.directions.data()),
          static_cast<std::streamsize>(m * n) * sizeof(double));
  model.mean.resize(n);
  in.read(reinterpret_cast<char*>(model.mean.data()),
          static_cast<std::streamsize>(n) * sizeof(double));
  if (in.gcount() != static_cast<std::streamsize>(n) * static_cast<std::streamsize>(sizeof(double)) ||
      !in) {
    throw FormatError(path.string() + ": truncated model payload");
  }
  if (!model.directions.allFinite() || !model.mean.allFinite()) {
    throw FormatError(path.string() + ": model payload contains non-finite values");
  }
  return model;
}

}  // namespace qpad
