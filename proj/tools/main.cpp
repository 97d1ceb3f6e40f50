#include <cstdint>
#include <cstdio>
#include <exception>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ocx/baselines.hpp"
#include "ocx/csv.hpp"
#include "ocx/errors.hpp"
#include "ocx/explain.hpp"
#include "ocx/flip.hpp"
#include "ocx/image.hpp"
#include "ocx/measures.hpp"
#include "ocx/model.hpp"
#include "ocx/patch.hpp"
#include "ocx/trainer.hpp"
#include "ocx/util.hpp"

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitNumerical = 3;

struct KernelFlags {
  std::string kernel = "gaussian";
  double q = 0.0;            // 0 = family default
  std::string sigma = "auto";
  double a = 1.0;
  double quantile = 0.1;
  bool sigma_given = false;
  bool a_given = false;
  bool q_given = false;

  void attach(CLI::App* cmd) {
    cmd->add_option("--kernel", kernel, "gaussian|laplacian|exponential|tstudent")
        ->check(CLI::IsMember({"gaussian", "laplacian", "exponential", "tstudent"}));
    cmd->add_option("--q", q, "distance exponent (>= 1)")->each([this](const std::string&) {
      q_given = true;
    });
    cmd->add_option("--sigma", sigma, "bandwidth, or 'auto' for the 1-NN quantile heuristic")
        ->each([this](const std::string&) { sigma_given = true; });
    cmd->add_option("--a", a, "t-Student offset")->each([this](const std::string&) {
      a_given = true;
    });
    cmd->add_option("--quantile", quantile, "quantile for the automatic bandwidth");
  }

  bool wants_auto_sigma() const { return sigma == "auto"; }

  // Resolves the flags into a kernel; sigma may still be pending when auto.
  ocx::KernelSpec resolve() const {
    ocx::KernelSpec spec;
    if (kernel == "tstudent") {
      if (sigma_given) {
        throw ocx::ParameterError("--sigma does not apply to the t-Student kernel");
      }
      spec = ocx::KernelSpec::tstudent(q_given ? q : 2.0, a);
    } else {
      if (a_given) {
        throw ocx::ParameterError("--a does not apply to exponential kernels");
      }
      double qq = q_given ? q : 2.0;
      if (kernel == "gaussian") qq = 2.0;
      if (kernel == "laplacian") qq = 1.0;
      if ((kernel == "gaussian" || kernel == "laplacian") && q_given) {
        throw ocx::ParameterError("--q conflicts with a named kernel; use --kernel exponential");
      }
      double s = 1.0;
      if (!wants_auto_sigma()) {
        try {
          s = std::stod(sigma);
        } catch (const std::exception&) {
          throw ocx::ParameterError("--sigma expects a number or 'auto'");
        }
      }
      spec = ocx::KernelSpec::exponential(qq, s);
    }
    if (!wants_auto_sigma() || spec.family == ocx::KernelFamily::kTStudent) {
      spec.validate();
    }
    return spec;
  }
};

struct Shape {
  std::size_t height = 0, width = 0, channels = 1;
};

Shape parse_shape(const std::string& text) {
  Shape shape;
  std::size_t values[3] = {0, 0, 1};
  std::size_t count = 0, pos = 0;
  while (pos < text.size() && count < 3) {
    std::size_t end = text.find('x', pos);
    if (end == std::string::npos) end = text.size();
    try {
      values[count++] = std::stoul(text.substr(pos, end - pos));
    } catch (const std::exception&) {
      throw ocx::ParameterError("bad --shape, expected HxW or HxWxC");
    }
    pos = end + 1;
  }
  if (count < 2 || pos < text.size() || values[0] == 0 || values[1] == 0 ||
      values[2] == 0) {
    throw ocx::ParameterError("bad --shape, expected HxW or HxWxC");
  }
  shape.height = values[0];
  shape.width = values[1];
  shape.channels = values[2];
  return shape;
}

ocx::Image image_from_row(std::span<const double> row, const Shape& shape) {
  if (row.size() != shape.height * shape.width * shape.channels) {
    throw ocx::ShapeError("--shape does not match the sample dimension");
  }
  ocx::Image img(shape.height, shape.width, shape.channels);
  std::copy(row.begin(), row.end(), img.pixels.begin());
  return img;
}

ocx::Heatmap method_heatmap(const std::string& method, const ocx::OneClassModel& model,
                            std::span<const double> x,
                            const std::optional<Shape>& shape) {
  if (method == "dtd") return ocx::input_relevance(model, x);
  if (method == "sa") return ocx::sensitivity(model, x);
  if (method == "nn") return ocx::nn_map(model, x);
  if (method == "ev") return ocx::ev_map(model, x);
  if (method == "sobel") {
    if (!shape) throw ocx::ParameterError("--method sobel requires --shape");
    const ocx::Heatmap pixel_map = ocx::sobel_map(image_from_row(x, *shape));
    ocx::Heatmap expanded;
    expanded.r.resize(x.size());
    for (std::size_t p = 0; p < pixel_map.r.size(); ++p) {
      for (std::size_t c = 0; c < shape->channels; ++c) {
        expanded.r[p * shape->channels + c] = pixel_map.r[p];
        expanded.total += pixel_map.r[p];
      }
    }
    return expanded;
  }
  throw ocx::ParameterError("unknown method: " + method);
}

int cmd_fit(const std::string& input, bool header, const KernelFlags& kflags, double nu,
            double tol, std::uint64_t max_iter, const std::string& out) {
  const ocx::Matrix data = ocx::read_csv_matrix(input, header);
  ocx::KernelSpec kernel = kflags.resolve();
  if (kflags.wants_auto_sigma() && kernel.family == ocx::KernelFamily::kExponential) {
    kernel.sigma = ocx::bandwidth_heuristic(data, kflags.quantile);
    std::cout << "sigma " << ocx::format_double(kernel.sigma) << "\n";
  }
  ocx::TrainOptions options;
  options.tol = tol;
  options.max_iter = max_iter;
  ocx::TrainReport report;
  const ocx::OneClassModel model = ocx::train(data, kernel, nu, options, &report);
  ocx::save_model(model, out);
  std::cout << "support_vectors " << model.sv_count() << "\n"
            << "rho " << ocx::format_double(model.rho) << "\n"
            << "iterations " << report.iterations << "\n"
            << "kkt_gap " << ocx::format_double(report.kkt_gap) << "\n";
  return 0;
}

int cmd_explain(const std::string& model_path, const std::string& input, bool header,
                std::size_t row, const std::string& mode, const std::string& out) {
  const ocx::OneClassModel model = ocx::load_model(model_path);
  const ocx::Matrix data = ocx::read_csv_matrix(input, header);
  if (row >= data.rows()) throw ocx::ParameterError("--row is out of range");
  const auto x = data.row(row);

  if (mode == "inlier") {
    const ocx::SvRelevance rel = ocx::explain_inlier(model, x);
    ocx::Heatmap map;
    map.r = rel.r;
    map.total = rel.o;
    ocx::write_heatmap_csv(map, out);
    std::cout << "inlierness " << ocx::format_double(rel.o) << "\n";
    return 0;
  }
  if (mode != "outlier") throw ocx::ParameterError("--mode must be inlier or outlier");

  const ocx::Heatmap map = ocx::input_relevance(model, x);
  ocx::write_heatmap_csv(map, out);
  double delta_sum = 0.0;
  for (double d : ocx::decomposable_relevance(model, x)) delta_sum += d;
  std::cout << "outlierness " << ocx::format_double(ocx::outlierness(model, x)) << "\n"
            << "relevance_total " << ocx::format_double(map.total) << "\n"
            << "delta_total " << ocx::format_double(delta_sum) << "\n";
  return 0;
}

int cmd_image_fit(const std::string& input, const ocx::PatchConfig& cfg,
                  const KernelFlags& kflags, double nu, double tol,
                  std::uint64_t max_iter, const std::string& out) {
  const ocx::Image image = ocx::read_pnm(input);
  ocx::ImageFitOptions options;
  options.auto_sigma = kflags.wants_auto_sigma();
  options.sigma_quantile = kflags.quantile;
  options.train.tol = tol;
  options.train.max_iter = max_iter;
  const ocx::KernelSpec kernel = kflags.resolve();
  const ocx::OneClassModel model =
      ocx::fit_image_model({&image, 1}, cfg, kernel, nu, options);
  ocx::save_model(model, out);
  std::cout << "support_vectors " << model.sv_count() << "\n"
            << "rho " << ocx::format_double(model.rho) << "\n"
            << "sigma " << ocx::format_double(model.kernel.sigma) << "\n";
  return 0;
}

int cmd_image_explain(const std::string& model_path, const std::string& input,
                      const ocx::PatchConfig& cfg, const std::string& out) {
  const ocx::OneClassModel model = ocx::load_model(model_path);
  const ocx::Image image = ocx::read_pnm(input);
  const ocx::ImageHeatmap grid =
      ocx::image_relevance(model, image, cfg, ocx::thread_budget());
  ocx::write_heatmap_csv(grid.flatten(), out);
  std::cout << "image_outlierness "
            << ocx::format_double(ocx::image_outlierness(model, image, cfg)) << "\n"
            << "relevance_total " << ocx::format_double(grid.total) << "\n"
            << "shape " << grid.height << "x" << grid.width << "x" << grid.channels
            << "\n";
  return 0;
}

int cmd_flip(const std::string& model_path, const std::string& input, bool header,
             const std::string& method, std::uint64_t seed,
             const std::optional<Shape>& shape, std::size_t curve_row,
             const std::string& curve_out, const std::string& summary_out) {
  const ocx::OneClassModel model = ocx::load_model(model_path);
  const ocx::Matrix data = ocx::read_csv_matrix(input, header);
  if (curve_row >= data.rows()) throw ocx::ParameterError("--row is out of range");

  double auc_sum = 0.0;
  std::optional<ocx::FlipCurve> kept;
  for (std::size_t r = 0; r < data.rows(); ++r) {
    const auto x = data.row(r);
    std::vector<std::size_t> order;
    if (method == "random") {
      order = ocx::random_order(model.dim(), seed + r);
    } else {
      order = ocx::order_from_heatmap(method_heatmap(method, model, x, shape));
    }
    ocx::FlipCurve curve = ocx::flip_curve(model, x, std::move(order), method);
    auc_sum += ocx::flip_auc(curve);
    if (r == curve_row) kept = std::move(curve);
  }

  if (!curve_out.empty()) ocx::write_flip_curve_csv(*kept, curve_out);
  if (!summary_out.empty()) {
    const double mean_auc = auc_sum / static_cast<double>(data.rows());
    ocx::write_file_atomic(summary_out, method + "," + std::to_string(seed) + "," +
                                            ocx::format_double(mean_auc) + "\n");
  }
  std::cout << "mean_auc "
            << ocx::format_double(auc_sum / static_cast<double>(data.rows())) << "\n";
  return 0;
}

int cmd_bench_two_panel(std::size_t n, std::size_t width, double center_a,
                        double center_b, double stddev, double nu, double lambda,
                        std::uint64_t seed, const std::string& out) {
  const auto gen_a = ocx::gaussian_blob(std::vector<double>(width, center_a), stddev);
  const auto gen_b = ocx::gaussian_blob(std::vector<double>(width, center_b), stddev);
  const ocx::TwoPanelData data = ocx::gen_two_panel(n, gen_a, gen_b, seed);

  ocx::KernelSpec kernel =
      ocx::KernelSpec::gaussian(ocx::bandwidth_heuristic(data.inlier, 0.1));
  const ocx::OneClassModel model = ocx::train(data.inlier, kernel, nu);
  const ocx::MvnModel mvn = ocx::mvn_fit(data.inlier, lambda);

  std::string csv;
  const auto emit = [&](const char* label, const ocx::Matrix& rows) {
    for (std::size_t i = 0; i < rows.rows(); ++i) {
      const auto x = rows.row(i);
      const auto dtd = ocx::panel_shares(ocx::input_relevance(model, x), data.split);
      const auto nll = ocx::panel_shares(ocx::mvn_decompose(mvn, x), data.split);
      csv += std::string("dtd,") + label + "," + std::to_string(i) + "," +
             ocx::format_double(dtd.first) + "," + ocx::format_double(dtd.second) + "\n";
      csv += std::string("mvn,") + label + "," + std::to_string(i) + "," +
             ocx::format_double(nll.first) + "," + ocx::format_double(nll.second) + "\n";
    }
  };
  emit("inlier", data.inlier);
  emit("type1", data.type1);
  emit("type2", data.type2);
  ocx::write_file_atomic(out, csv);
  std::cout << "samples " << 3 * n << "\nsupport_vectors " << model.sv_count() << "\n";
  return 0;
}

int cmd_render(const std::string& input, const Shape& shape, const std::string& out) {
  const ocx::Heatmap map = ocx::read_heatmap_csv(input);
  const ocx::Image image =
      ocx::render_relevance(map, shape.height, shape.width, shape.channels);
  ocx::write_pgm(image, out);
  return 0;
}

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const ocx::ConvergenceError*>(&e) ||
      dynamic_cast<const ocx::DegenerateBandwidthError*>(&e) ||
      dynamic_cast<const ocx::SingularPointError*>(&e) ||
      dynamic_cast<const ocx::UndefinedAucError*>(&e)) {
    return kExitNumerical;
  }
  return kExitUsage;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"One-class models with per-variable outlier explanations"};
  app.require_subcommand(1);

  // fit
  auto* fit = app.add_subcommand("fit", "train on CSV samples");
  std::string fit_input, fit_out;
  bool fit_header = false;
  double fit_nu = 0.1, fit_tol = 1e-6;
  std::uint64_t fit_max_iter = 10'000'000;
  KernelFlags fit_kernel;
  fit->add_option("--input", fit_input)->required();
  fit->add_flag("--header", fit_header, "skip one header line");
  fit->add_option("--nu", fit_nu)->required();
  fit->add_option("--tol", fit_tol);
  fit->add_option("--max-iter", fit_max_iter);
  fit->add_option("--out", fit_out)->required();
  fit_kernel.attach(fit);

  // explain
  auto* explain = app.add_subcommand("explain", "per-variable or per-support relevance");
  std::string ex_model, ex_input, ex_out, ex_mode = "outlier";
  bool ex_header = false;
  std::size_t ex_row = 0;
  explain->add_option("--model", ex_model)->required();
  explain->add_option("--input", ex_input)->required();
  explain->add_flag("--header", ex_header);
  explain->add_option("--row", ex_row);
  explain->add_option("--mode", ex_mode)->check(CLI::IsMember({"inlier", "outlier"}));
  explain->add_option("--out", ex_out)->required();

  // image-fit
  auto* ifit = app.add_subcommand("image-fit", "train on patches of an image");
  std::string ifit_input, ifit_out;
  double ifit_nu = 0.1, ifit_tol = 1e-6;
  std::uint64_t ifit_max_iter = 10'000'000;
  ocx::PatchConfig ifit_cfg;
  KernelFlags ifit_kernel;
  ifit->add_option("--input", ifit_input)->required();
  ifit->add_option("--patch", ifit_cfg.patch);
  ifit->add_option("--stride", ifit_cfg.stride);
  ifit->add_option("--subsample", ifit_cfg.subsample);
  ifit->add_option("--seed", ifit_cfg.seed);
  ifit->add_option("--nu", ifit_nu)->required();
  ifit->add_option("--tol", ifit_tol);
  ifit->add_option("--max-iter", ifit_max_iter);
  ifit->add_option("--out", ifit_out)->required();
  ifit_kernel.attach(ifit);

  // image-explain
  auto* iex = app.add_subcommand("image-explain", "pixel relevance grid for an image");
  std::string iex_model, iex_input, iex_out;
  ocx::PatchConfig iex_cfg;
  iex->add_option("--model", iex_model)->required();
  iex->add_option("--input", iex_input)->required();
  iex->add_option("--patch", iex_cfg.patch);
  iex->add_option("--stride", iex_cfg.stride);
  iex->add_option("--out", iex_out)->required();

  // flip
  auto* flip = app.add_subcommand("flip", "feature-space flipping evaluation");
  std::string fl_model, fl_input, fl_method, fl_curve, fl_summary, fl_shape;
  bool fl_header = false;
  std::uint64_t fl_seed = 0;
  std::size_t fl_row = 0;
  flip->add_option("--model", fl_model)->required();
  flip->add_option("--input", fl_input)->required();
  flip->add_flag("--header", fl_header);
  flip->add_option("--method", fl_method, "dtd|sa|nn|ev|sobel|random")->required();
  flip->add_option("--seed", fl_seed);
  flip->add_option("--row", fl_row, "row whose curve is written");
  flip->add_option("--shape", fl_shape, "HxW[xC], required for sobel");
  flip->add_option("--curve", fl_curve);
  flip->add_option("--summary", fl_summary);

  // bench-two-panel
  auto* bench = app.add_subcommand("bench-two-panel", "two-panel validation benchmark");
  std::size_t b_n = 100, b_width = 8;
  double b_ca = 2.0, b_cb = 5.0, b_std = 0.5, b_nu = 0.05, b_lambda = 0.01;
  std::uint64_t b_seed = 0;
  std::string b_out;
  bench->add_option("--n", b_n, "samples per group");
  bench->add_option("--panel-width", b_width);
  bench->add_option("--center-a", b_ca);
  bench->add_option("--center-b", b_cb);
  bench->add_option("--stddev", b_std);
  bench->add_option("--nu", b_nu);
  bench->add_option("--lambda", b_lambda);
  bench->add_option("--seed", b_seed);
  bench->add_option("--out", b_out)->required();

  // render
  auto* render = app.add_subcommand("render", "heatmap CSV to 8-bit PGM");
  std::string r_input, r_out, r_shape;
  render->add_option("--input", r_input)->required();
  render->add_option("--shape", r_shape, "HxW[xC]")->required();
  render->add_option("--out", r_out)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*fit) {
      if (!(fit_nu > 0.0) || !(fit_nu <= 1.0)) {
        throw ocx::ParameterError("--nu must lie in (0, 1]");
      }
      return cmd_fit(fit_input, fit_header, fit_kernel, fit_nu, fit_tol, fit_max_iter,
                     fit_out);
    }
    if (*explain) return cmd_explain(ex_model, ex_input, ex_header, ex_row, ex_mode, ex_out);
    if (*ifit) {
      if (!(ifit_nu > 0.0) || !(ifit_nu <= 1.0)) {
        throw ocx::ParameterError("--nu must lie in (0, 1]");
      }
      return cmd_image_fit(ifit_input, ifit_cfg, ifit_kernel, ifit_nu, ifit_tol,
                           ifit_max_iter, ifit_out);
    }
    if (*iex) return cmd_image_explain(iex_model, iex_input, iex_cfg, iex_out);
    if (*flip) {
      std::optional<Shape> shape;
      if (!fl_shape.empty()) shape = parse_shape(fl_shape);
      return cmd_flip(fl_model, fl_input, fl_header, fl_method, fl_seed, shape, fl_row,
                      fl_curve, fl_summary);
    }
    if (*bench) {
      return cmd_bench_two_panel(b_n, b_width, b_ca, b_cb, b_std, b_nu, b_lambda, b_seed,
                                 b_out);
    }
    if (*render) return cmd_render(r_input, parse_shape(r_shape), r_out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e);
  }
  return 0;
}
