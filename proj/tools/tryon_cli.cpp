// Batch CLI over the try-on preprocessing library.
// Exit codes: 0 success, 1 internal error, 2 input error.

#include <CLI11.hpp>

#include <atomic>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>
#include <vector>

#include "tryon/composite.hpp"
#include "tryon/correspondence.hpp"
#include "tryon/curation.hpp"
#include "tryon/flow_io.hpp"
#include "tryon/metrics.hpp"
#include "tryon/perturb.hpp"
#include "tryon/png_io.hpp"
#include "tryon/warp.hpp"

namespace {

constexpr const char* kVersion =
    "tryon 0.1.0 (dwfl format v1, iuv png v1, parse png v1)";

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<uint8_t> read_input(const std::string& path) {
  if (!std::filesystem::exists(path)) throw InputError("no such file: " + path);
  return tryon::read_file(path);
}

std::string read_text(const std::string& path) {
  const auto bytes = read_input(path);
  return std::string(bytes.begin(), bytes.end());
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open for write: " + path);
  f << text;
}

int run_flow(const std::string& garment_path, const std::string& person_path,
             const std::string& mask_path, const std::string& out_path,
             const tryon::CorrespondenceConfig& config) {
  const tryon::IuvMap garment = tryon::decode_iuv_png(read_input(garment_path));
  const tryon::IuvMap person = tryon::decode_iuv_png(read_input(person_path));
  std::optional<tryon::BinaryMask> mask;
  if (!mask_path.empty()) mask = tryon::decode_mask_png(read_input(mask_path));
  const auto result =
      tryon::naive_flow(garment, person, config, mask ? &*mask : nullptr);
  if (result.index_empty) throw InputError("garment IUV has no indexable pixels");
  tryon::write_flow(out_path, result.flow);
  return 0;
}

int run_warp(const std::string& src_path, const std::string& flow_path,
             const std::string& out_path, const std::string& mask_out) {
  const tryon::ImageBuffer src = tryon::decode_image_png(read_input(src_path));
  const tryon::FlowField flow = tryon::decode_flow(read_input(flow_path));
  for (int y = 0; y < flow.height(); ++y)
    for (int x = 0; x < flow.width(); ++x)
      if (flow.valid(x, y) &&
          (flow.src_x(x, y) > src.width() - 0.5 || flow.src_y(x, y) > src.height() - 0.5))
        throw InputError("flow references coordinates outside the source image");
  const tryon::WarpResult r = tryon::warp_bilinear(src, flow);
  tryon::write_file(out_path, tryon::encode_image_png(r.image));
  if (!mask_out.empty()) tryon::write_file(mask_out, tryon::encode_mask_png(r.mask));
  return 0;
}

int run_synth(const std::string& image_path, const std::string& iuv_path,
              const std::string& parse_path, uint64_t seed, int n, int jobs,
              const std::string& out_dir, const tryon::PerturbConfig& config) {
  const tryon::ImageBuffer image = tryon::decode_image_png(read_input(image_path));
  const tryon::IuvMap iuv = tryon::decode_iuv_png(read_input(iuv_path));
  const tryon::ParseMap parse = tryon::decode_parse_png(read_input(parse_path));
  std::filesystem::create_directories(out_dir);

  std::atomic<int> next{0};
  std::atomic<bool> failed{false};
  std::string error;
  std::mutex error_mu;
  auto worker = [&] {
    for (int i = next.fetch_add(1); i < n && !failed; i = next.fetch_add(1)) {
      try {
        const auto ex = tryon::synth_corrector_example(image, iuv, parse,
                                                       tryon::mix_seed(seed, i), config);
        char name[32];
        std::snprintf(name, sizeof(name), "example_%05d", i);
        tryon::save_training_example(ex, (std::filesystem::path(out_dir) / name).string());
      } catch (const std::exception& e) {
        std::lock_guard lock(error_mu);
        failed = true;
        error = e.what();
      }
    }
  };
  std::vector<std::thread> pool;
  for (int t = 0; t < std::max(1, jobs); ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (failed) throw std::runtime_error("synth failed: " + error);
  return 0;
}

int run_composite(const std::string& undressed_path, const std::string& warped_path,
                  const std::string& mask_path, int radius, const std::string& out_path,
                  const std::string& refine_out) {
  const tryon::ImageBuffer undressed = tryon::decode_image_png(read_input(undressed_path));
  const tryon::ImageBuffer warped = tryon::decode_image_png(read_input(warped_path));
  const tryon::BinaryMask mask = tryon::decode_mask_png(read_input(mask_path));
  const tryon::CompositeResult r = tryon::composite_tryon(undressed, warped, mask, radius);
  tryon::write_file(out_path, tryon::encode_image_png(r.composite));
  if (!refine_out.empty()) tryon::write_file(refine_out, tryon::encode_mask_png(r.refine_mask));
  return 0;
}

int run_curate(const std::string& records_path, const std::string& out_path) {
  const auto records = tryon::parse_records(read_text(records_path));
  const auto manifest = tryon::curate(records);
  write_text(out_path, tryon::manifest_to_text(manifest));
  return 0;
}

int run_tuples(const std::string& ids_path, const std::string& category, uint64_t seed,
               const std::string& out_path) {
  std::vector<std::string> ids;
  {
    std::istringstream ss(read_text(ids_path));
    std::string line;
    while (std::getline(ss, line))
      if (!line.empty()) ids.push_back(line);
  }
  std::vector<tryon::TestTuple> tuples;
  try {
    tuples = tryon::make_test_tuples(ids, category, seed);
  } catch (const std::invalid_argument& e) {
    throw InputError(e.what());
  }
  std::ostringstream out;
  for (const auto& t : tuples)
    out << "person=" << t.person_id << " garment=" << t.garment_id
        << " category=" << t.category << '\n';
  write_text(out_path, out.str());
  return 0;
}

int run_eval(const std::string& a_path, const std::string& b_path, const std::string& flow_path) {
  const tryon::ImageBuffer a = tryon::decode_image_png(read_input(a_path));
  const tryon::ImageBuffer b = tryon::decode_image_png(read_input(b_path));
  const tryon::PyramidFeatureExtractor extractor;
  double tv = 0;
  if (!flow_path.empty()) tv = tryon::tv_loss(tryon::read_flow(flow_path));
  const double l1 = tryon::l1_recon(a, b);
  const double perceptual = tryon::perceptual_loss(a, b, extractor);
  std::cout.precision(12);
  std::cout << "tv=" << tv << "\n"
            << "l1=" << l1 << "\n"
            << "perceptual=" << perceptual << "\n"
            << "total=" << (tv + l1 + perceptual) << "\n"
            << "ssim=" << tryon::ssim(a, b) << "\n";
  return 0;
}

int run_export_inpaint(const std::string& image_path, const std::string& mask_path,
                       const std::string& cond_iuv, const std::string& cond_parse,
                       std::string prompt, std::string negative, bool skin_defaults,
                       const std::string& out_dir) {
  const tryon::ImageBuffer image = tryon::decode_image_png(read_input(image_path));
  const tryon::BinaryMask mask = tryon::decode_mask_png(read_input(mask_path));
  if (cond_iuv.empty() == cond_parse.empty())
    throw InputError("provide exactly one of --condition-iuv / --condition-parse");
  if (skin_defaults) {
    if (prompt.empty()) prompt = tryon::kSkinInpaintPrompt;
    if (negative.empty()) negative = tryon::kSkinInpaintNegativePrompt;
  }
  tryon::InpaintJob job;
  if (!cond_iuv.empty())
    job = tryon::export_inpaint_job(image, mask, tryon::decode_iuv_png(read_input(cond_iuv)),
                                    prompt, negative, out_dir);
  else
    job = tryon::export_inpaint_job(image, mask, tryon::decode_parse_png(read_input(cond_parse)),
                                    prompt, negative, out_dir);
  if (job.noop) std::cout << "noop=true\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"DensePose-UV try-on preprocessing toolkit"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  // flow
  auto* flow = app.add_subcommand("flow", "UV-correspondence flow between two IUV maps");
  std::string garment_iuv, person_iuv, garment_mask, flow_out;
  tryon::CorrespondenceConfig corr;
  bool no_fill = false;
  flow->add_option("--garment-iuv", garment_iuv)->required();
  flow->add_option("--person-iuv", person_iuv)->required();
  flow->add_option("--garment-mask", garment_mask);
  flow->add_option("--out", flow_out)->required();
  flow->add_option("--epsilon", corr.epsilon);
  flow->add_option("--tau", corr.tau);
  flow->add_flag("--no-fill-holes", no_fill);

  // warp
  auto* warp = app.add_subcommand("warp", "Backward-warp an image by a flow file");
  std::string warp_src, warp_flow, warp_out, warp_mask_out;
  warp->add_option("--src", warp_src)->required();
  warp->add_option("--flow", warp_flow)->required();
  warp->add_option("--out", warp_out)->required();
  warp->add_option("--mask-out", warp_mask_out);

  // synth
  auto* synth = app.add_subcommand("synth", "Synthesize corrector training examples");
  std::string synth_image, synth_iuv, synth_parse, synth_out;
  uint64_t synth_seed = 0;
  int synth_n = 1, synth_jobs = 1;
  tryon::PerturbConfig perturb;
  synth->add_option("--image", synth_image)->required();
  synth->add_option("--iuv", synth_iuv)->required();
  synth->add_option("--parse", synth_parse)->required();
  synth->add_option("--seed", synth_seed)->required();
  synth->add_option("--n", synth_n)->required();
  synth->add_option("--jobs", synth_jobs);
  synth->add_option("--out-dir", synth_out)->required();
  synth->add_option("--k-max", perturb.k_max);
  synth->add_option("--rotation-max", perturb.rotation_max_deg);
  synth->add_option("--translate-max", perturb.translate_max);
  synth->add_option("--shear-max", perturb.shear_max_deg);

  // composite
  auto* comp = app.add_subcommand("composite", "Erosion-band composite of a warped garment");
  std::string comp_undressed, comp_warped, comp_mask, comp_out, comp_refine;
  int comp_radius = 5;
  comp->add_option("--undressed", comp_undressed)->required();
  comp->add_option("--warped", comp_warped)->required();
  comp->add_option("--mask", comp_mask)->required();
  comp->add_option("--radius", comp_radius);
  comp->add_option("--out", comp_out)->required();
  comp->add_option("--refine-out", comp_refine);

  // curate
  auto* curate = app.add_subcommand("curate", "Filter curation records into a manifest");
  std::string curate_records, curate_out;
  curate->add_option("--records", curate_records)->required();
  curate->add_option("--out", curate_out)->required();

  // tuples
  auto* tuples = app.add_subcommand("tuples", "Unpaired test tuples by seeded derangement");
  std::string tuples_ids, tuples_category = "top", tuples_out;
  uint64_t tuples_seed = 0;
  tuples->add_option("--ids", tuples_ids)->required();
  tuples->add_option("--category", tuples_category);
  tuples->add_option("--seed", tuples_seed)->required();
  tuples->add_option("--out", tuples_out)->required();

  // eval
  auto* eval = app.add_subcommand("eval", "Loss/metric report between two images");
  std::string eval_a, eval_b, eval_flow;
  eval->add_option("--a", eval_a)->required();
  eval->add_option("--b", eval_b)->required();
  eval->add_option("--flow", eval_flow);

  // export-inpaint
  auto* exp = app.add_subcommand("export-inpaint", "Export a diffusion-inpainting job bundle");
  std::string exp_image, exp_mask, exp_cond_iuv, exp_cond_parse, exp_prompt, exp_negative, exp_dir;
  bool exp_skin = false;
  exp->add_option("--image", exp_image)->required();
  exp->add_option("--mask", exp_mask)->required();
  exp->add_option("--condition-iuv", exp_cond_iuv);
  exp->add_option("--condition-parse", exp_cond_parse);
  exp->add_option("--prompt", exp_prompt);
  exp->add_option("--negative-prompt", exp_negative);
  exp->add_flag("--skin-defaults", exp_skin, "Use the skin-inpainting prompt defaults");
  exp->add_option("--out-dir", exp_dir)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    corr.fill_holes = !no_fill;
    if (flow->parsed()) return run_flow(garment_iuv, person_iuv, garment_mask, flow_out, corr);
    if (warp->parsed()) return run_warp(warp_src, warp_flow, warp_out, warp_mask_out);
    if (synth->parsed())
      return run_synth(synth_image, synth_iuv, synth_parse, synth_seed, synth_n, synth_jobs,
                       synth_out, perturb);
    if (comp->parsed())
      return run_composite(comp_undressed, comp_warped, comp_mask, comp_radius, comp_out,
                           comp_refine);
    if (curate->parsed()) return run_curate(curate_records, curate_out);
    if (tuples->parsed()) return run_tuples(tuples_ids, tuples_category, tuples_seed, tuples_out);
    if (eval->parsed()) return run_eval(eval_a, eval_b, eval_flow);
    if (exp->parsed())
      return run_export_inpaint(exp_image, exp_mask, exp_cond_iuv, exp_cond_parse, exp_prompt,
                                exp_negative, exp_skin, exp_dir);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const tryon::FormatError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
