#include "ocx/model.hpp"

#include <cmath>

#include <json.hpp>

#include "ocx/errors.hpp"
#include "ocx/util.hpp"

namespace ocx {

double discriminant(const OneClassModel& model, std::span<const double> x) {
  if (x.size() != model.dim()) {
    throw ShapeError("input dimension does not match the model");
  }
  double g = 0.0;
  for (std::size_t j = 0; j < model.sv_count(); ++j) {
    const double dq = pow_distance(x, model.support_vectors.row(j), model.kernel.q);
    g += model.alphas[j] * eval_kernel_powdist(model.kernel, dq);
  }
  return g;
}

Decision decide(const OneClassModel& model, std::span<const double> x) {
  return discriminant(model, x) >= model.rho ? Decision::kInlier : Decision::kOutlier;
}

std::string model_to_json(const OneClassModel& model) {
  nlohmann::ordered_json j;
  auto& k = j["kernel"];
  if (model.kernel.family == KernelFamily::kExponential) {
    k["family"] = "exponential";
    k["q"] = model.kernel.q;
    k["sigma"] = model.kernel.sigma;
  } else {
    k["family"] = "tstudent";
    k["q"] = model.kernel.q;
    k["a"] = model.kernel.a;
  }
  j["nu"] = model.nu;
  j["rho"] = model.rho;
  j["alphas"] = model.alphas;
  auto rows = nlohmann::ordered_json::array();
  for (std::size_t r = 0; r < model.support_vectors.rows(); ++r) {
    auto row = model.support_vectors.row(r);
    rows.push_back(std::vector<double>(row.begin(), row.end()));
  }
  j["support_vectors"] = std::move(rows);
  return j.dump();
}

OneClassModel model_from_json(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("model JSON parse error: ") + e.what());
  }

  OneClassModel model;
  try {
    const auto& k = j.at("kernel");
    const std::string family = k.at("family").get<std::string>();
    if (family == "exponential") {
      model.kernel = KernelSpec::exponential(k.at("q").get<double>(),
                                             k.at("sigma").get<double>());
    } else if (family == "tstudent") {
      model.kernel = KernelSpec::tstudent(k.at("q").get<double>(),
                                          k.at("a").get<double>());
    } else {
      throw IoError("unknown kernel family: " + family);
    }
    model.nu = j.at("nu").get<double>();
    model.rho = j.at("rho").get<double>();
    model.alphas = j.at("alphas").get<std::vector<double>>();
    for (const auto& row : j.at("support_vectors")) {
      model.support_vectors.push_row(row.get<std::vector<double>>());
    }
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("model JSON schema error: ") + e.what());
  }

  model.kernel.validate();
  if (model.alphas.size() != model.support_vectors.rows()) {
    throw IoError("alphas and support_vectors disagree on the support count");
  }
  if (model.alphas.empty()) throw IoError("model has no support vectors");
  for (double a : model.alphas) {
    if (!(a > 0.0) || !std::isfinite(a)) {
      throw IoError("model coefficients must be positive and finite");
    }
  }
  return model;
}

void save_model(const OneClassModel& model, const std::filesystem::path& path) {
  write_file_atomic(path, model_to_json(model) + "\n");
}

OneClassModel load_model(const std::filesystem::path& path) {
  return model_from_json(read_file(path));
}

}  // namespace ocx
