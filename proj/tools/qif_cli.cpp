// qif: channel algebra and leakage analysis from the command line.
//
// Subcommands: show, compose, cascade, vuln, leak, capacity, refine,
// bounds, crowds, dining. JSON on stdout by default, --csv for the
// per-command CSV shape; exit code 0 on success, 1 on a domain error,
// 2 on a usage error.

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "qif/qif.hpp"

namespace {

using qif::json;

double refine_tolerance() {
  // QIF_TOLERANCE overrides the refinement feasibility tolerance only;
  // stochasticity checks stay at their built-in bound.
  if (const char* env = std::getenv("QIF_TOLERANCE")) {
    try {
      double v = std::stod(env);
      if (v > 0) return v;
    } catch (...) {
    }
    qif::raise(qif::errc::parse_error, "QIF_TOLERANCE must be a positive number");
  }
  return qif::kRefineTol;
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << '\n';
  } else {
    qif::write_file(out_path, text);
  }
}

void emit_json(const json& j, const std::string& out_path) { emit(j.dump(2), out_path); }

struct ChannelOutputOpts {
  bool csv = false;
  std::string out_path;
};

void emit_channel(const qif::Channel& c, const ChannelOutputOpts& opts) {
  if (opts.csv)
    emit(qif::channel_to_csv(c), opts.out_path);
  else
    emit_json(qif::channel_to_json(c), opts.out_path);
}

std::vector<double> parse_sweep(const std::string& range) {
  // "start:stop:step", inclusive of stop up to a half step of slack.
  double start = 0, stop = 0, step = 0;
  if (std::sscanf(range.c_str(), "%lf:%lf:%lf", &start, &stop, &step) != 3 || step <= 0)
    qif::raise(qif::errc::parse_error, "sweep must look like 0.5:1.0:0.05");
  std::vector<double> out;
  for (double b = start; b <= stop + step / 2; b += step) out.push_back(std::min(b, 1.0));
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"compositional quantitative information flow analysis"};
  app.require_subcommand(1);
  app.fallthrough();  // let --csv / --out appear after the subcommand too

  bool csv = false;
  std::string out_path;
  app.add_flag("--csv", csv, "emit CSV instead of JSON");
  app.add_option("--out", out_path, "write output to a file instead of stdout");

  // show
  auto* show = app.add_subcommand("show", "validate a channel and reprint it");
  std::string show_file;
  show->add_option("channel", show_file, "channel file (.json or .csv)")->required();

  // compose
  auto* compose = app.add_subcommand("compose", "compose two channels with ∥, ⊔_p or ⊕_p");
  std::string compose_op, compose_a, compose_b;
  double compose_p = 0.5;
  compose->add_option("--op", compose_op, "par, vis or hid")->required();
  compose->add_option("-p,--prob", compose_p, "choice probability (vis/hid)");
  compose->add_option("a", compose_a)->required();
  compose->add_option("b", compose_b)->required();

  // cascade
  auto* casc = app.add_subcommand("cascade", "post-process the first channel by the second");
  std::string casc_a, casc_b;
  casc->add_option("a", casc_a)->required();
  casc->add_option("b", casc_b)->required();

  // vuln
  auto* vuln = app.add_subcommand("vuln", "prior and posterior g-vulnerability");
  std::string vuln_file, vuln_prior = "uniform", vuln_gain = "id";
  vuln->add_option("channel", vuln_file)->required();
  vuln->add_option("--prior", vuln_prior, "uniform or a prior JSON file");
  vuln->add_option("--gain", vuln_gain, "id or a gain JSON file");

  // leak
  auto* leak = app.add_subcommand("leak", "multiplicative and additive g-leakage");
  std::string leak_file, leak_prior = "uniform", leak_gain = "id";
  leak->add_option("channel", leak_file)->required();
  leak->add_option("--prior", leak_prior, "uniform or a prior JSON file");
  leak->add_option("--gain", leak_gain, "id or a gain JSON file");

  // capacity
  auto* cap = app.add_subcommand("capacity", "multiplicative or additive capacity");
  std::string cap_file, cap_prior = "uniform";
  bool cap_mult = false, cap_add = false;
  cap->add_flag("--mult", cap_mult, "log2 sum of column maxima, over all priors and gains");
  cap->add_flag("--add", cap_add, "additive capacity at a fixed prior");
  cap->add_option("--prior", cap_prior, "prior for --add");
  cap->add_option("channel", cap_file)->required();

  // refine
  auto* refine = app.add_subcommand("refine", "decide the refinement preorder");
  std::string refine_a, refine_b;
  size_t refine_trials = 0;
  std::optional<uint64_t> refine_seed;
  refine->add_option("a", refine_a)->required();
  refine->add_option("b", refine_b)->required();
  refine->add_option("--trials", refine_trials,
                     "falsifier samples to search for a certificate when not refined");
  refine->add_option("--seed", refine_seed, "RNG seed (required with --trials)");

  // bounds
  auto* bnd = app.add_subcommand("bounds", "compositional vulnerability bounds");
  std::string bnd_op, bnd_a, bnd_b, bnd_prior = "uniform", bnd_gain = "id";
  double bnd_p = 0.5;
  bnd->add_option("--op", bnd_op, "par, vis or hid")->required();
  bnd->add_option("-p,--prob", bnd_p, "choice probability (vis/hid)");
  bnd->add_option("--prior", bnd_prior);
  bnd->add_option("--gain", bnd_gain);
  bnd->add_option("a", bnd_a)->required();
  bnd->add_option("b", bnd_b)->required();

  // crowds
  auto* crowds = app.add_subcommand("crowds", "Crowds leakage bounds");
  std::string crowds_trans, crowds_prior = "uniform", crowds_gain = "id";
  double crowds_q = 0, crowds_p = 0;
  std::optional<size_t> crowds_m;
  std::optional<double> crowds_precision;
  crowds->add_option("--transitions", crowds_trans, "honest-user transition matrix CSV")->required();
  crowds->add_option("--q", crowds_q, "probability of forwarding to a corrupt user")->required();
  crowds->add_option("--p", crowds_p, "probability of sending to the server")->required();
  crowds->add_option("--m", crowds_m, "truncation depth");
  crowds->add_option("--precision", crowds_precision, "pick the smallest m with this gap bound");
  crowds->add_option("--prior", crowds_prior);
  crowds->add_option("--gain", crowds_gain);

  // dining
  auto* dining = app.add_subcommand("dining", "Dining Cryptographers capacities");
  size_t dining_n = 0;
  std::string dining_topology = "cycle", dining_prior = "uniform", dining_sweep;
  double dining_bias = 0.5;
  dining->add_option("--n", dining_n, "number of cryptographers")->required();
  dining->add_option("--topology", dining_topology, "cycle or complete");
  dining->add_option("--bias", dining_bias, "probability of tails for every coin");
  dining->add_option("--sweep", dining_sweep, "bias sweep start:stop:step");
  dining->add_option("--prior", dining_prior, "prior over payers for the additive capacity");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    ChannelOutputOpts chan_opts{csv, out_path};

    if (*show) {
      emit_channel(qif::load_channel(show_file), chan_opts);
    } else if (*compose) {
      qif::Channel a = qif::load_channel(compose_a);
      qif::Channel b = qif::load_channel(compose_b);
      qif::Channel c = compose_op == "par"   ? qif::parallel(a, b)
                       : compose_op == "vis" ? qif::visible_choice(a, b, compose_p)
                       : compose_op == "hid" ? qif::hidden_choice(a, b, compose_p)
                                             : throw CLI::ValidationError("--op must be par, vis or hid");
      emit_channel(c, chan_opts);
    } else if (*casc) {
      emit_channel(qif::cascade(qif::load_channel(casc_a), qif::load_channel(casc_b)), chan_opts);
    } else if (*vuln) {
      qif::Channel c = qif::load_channel(vuln_file);
      qif::Prior pi = qif::load_prior(vuln_prior, c.inputs());
      qif::GainFunction g = qif::load_gain(vuln_gain, c.inputs());
      double vp = qif::prior_vulnerability(pi, g);
      double vc = qif::posterior_vulnerability(pi, c, g);
      if (csv)
        emit("prior,posterior\n" + qif::fmt12(vp) + "," + qif::fmt12(vc) + "\n", out_path);
      else
        emit_json(json{{"prior_vulnerability", qif::round12(vp)},
                       {"posterior_vulnerability", qif::round12(vc)}},
                  out_path);
    } else if (*leak) {
      qif::Channel c = qif::load_channel(leak_file);
      qif::Prior pi = qif::load_prior(leak_prior, c.inputs());
      qif::GainFunction g = qif::load_gain(leak_gain, c.inputs());
      qif::LeakageReport r = qif::leakage(pi, c, g);
      emit(csv ? qif::leakage_to_csv(r) : qif::leakage_to_json(r).dump(2), out_path);
    } else if (*cap) {
      if (cap_mult == cap_add)
        throw CLI::ValidationError("pick exactly one of --mult / --add");
      qif::Channel c = qif::load_channel(cap_file);
      double value = cap_mult ? qif::multiplicative_capacity(c)
                              : qif::additive_capacity(c, qif::load_prior(cap_prior, c.inputs()));
      if (csv)
        emit(std::string(cap_mult ? "mult_capacity" : "add_capacity") + "\n" + qif::fmt12(value) + "\n",
             out_path);
      else
        emit_json(json{{cap_mult ? "mult_capacity" : "add_capacity", qif::round12(value)}}, out_path);
    } else if (*refine) {
      qif::Channel a = qif::load_channel(refine_a);
      qif::Channel b = qif::load_channel(refine_b);
      qif::RefinementVerdict v = qif::refines(a, b, refine_tolerance());
      if (!v.refined && refine_trials > 0) {
        if (!refine_seed)
          throw CLI::ValidationError("--trials needs an explicit --seed; runs must be reproducible");
        v.certificate = qif::coriaceous_falsify(a, b, refine_trials, *refine_seed);
      }
      emit_json(qif::verdict_to_json(v), out_path);
    } else if (*bnd) {
      qif::Channel a = qif::load_channel(bnd_a);
      qif::Channel b = qif::load_channel(bnd_b);
      qif::Prior pi = qif::load_prior(bnd_prior, a.inputs());
      qif::GainFunction g = qif::load_gain(bnd_gain, a.inputs());
      qif::BoundInterval interval;
      if (bnd_op == "par") {
        interval = qif::parallel_bounds(pi, g, a, b);
      } else if (bnd_op == "vis") {
        double v = qif::visible_choice_exact(pi, g, a, b, bnd_p);
        interval = qif::BoundInterval{v, v, v};
      } else if (bnd_op == "hid") {
        interval = qif::hidden_choice_bounds(pi, g, a, b, bnd_p);
      } else {
        throw CLI::ValidationError("--op must be par, vis or hid");
      }
      emit(csv ? qif::interval_to_csv(interval) : qif::interval_to_json(interval).dump(2), out_path);
    } else if (*crowds) {
      qif::Matrix t = qif::matrix_from_csv(qif::read_file(crowds_trans));
      qif::CrowdsModel model(t.rows, t, crowds_q, crowds_p);
      if (crowds_m.has_value() == crowds_precision.has_value())
        throw CLI::ValidationError("pick exactly one of --m / --precision");
      size_t m = crowds_m ? *crowds_m : qif::m_for_precision(crowds_q, crowds_p, *crowds_precision);
      qif::Prior pi = qif::load_prior(crowds_prior, model.user_labels());
      qif::GainFunction g = qif::load_gain(crowds_gain, model.user_labels());
      qif::CrowdsBounds b = qif::leakage_bounds(model, pi, g, m);
      emit(csv ? qif::crowds_bounds_to_csv(b) : qif::crowds_bounds_to_json(b).dump(2), out_path);
    } else if (*dining) {
      if (dining_topology != "cycle" && dining_topology != "complete")
        throw CLI::ValidationError("--topology must be cycle or complete");
      qif::DiningConfig cfg = dining_topology == "cycle"
                                  ? qif::DiningConfig::cycle(dining_n, dining_bias)
                                  : qif::DiningConfig::complete(dining_n, dining_bias);
      qif::Prior pi = qif::load_prior(dining_prior, cfg.payer_labels());
      std::vector<double> biases =
          dining_sweep.empty() ? std::vector<double>{dining_bias} : parse_sweep(dining_sweep);
      auto points = qif::capacity_sweep(cfg, biases, pi);
      emit(csv ? qif::sweep_to_csv(points) : qif::sweep_to_json(points).dump(2), out_path);
    }
  } catch (const CLI::ValidationError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const qif::error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
