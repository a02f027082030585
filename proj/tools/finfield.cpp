// finfield: consistency checking, reconstruction and energy-form conversions
// for finite random fields, over a JSON interchange format.
//
// Exit codes: 0 success / positive verdict, 1 negative verdict (inconsistent
// system, non-Markov field, failed invariance), 2 usage or data errors.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "finfield/energy.hpp"
#include "finfield/field.hpp"
#include "finfield/json_io.hpp"
#include "finfield/markov.hpp"
#include "finfield/models.hpp"
#include "finfield/onepoint.hpp"
#include "finfield/potential.hpp"
#include "finfield/reconstruct.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kNegative = 1;
constexpr int kError = 2;

using namespace finfield;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot write " + path);
  out << content;
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, ',')) out.push_back(item);
  return out;
}

std::vector<int> parse_states(const std::string& text) {
  std::vector<int> out;
  for (const auto& item : split_list(text)) {
    try {
      out.push_back(std::stoi(item));
    } catch (const std::exception&) {
      throw FormatError("cannot parse state list: " + text);
    }
  }
  return out;
}

std::vector<std::size_t> parse_order(const ConfigSpace& sp, const std::string& text) {
  std::vector<std::size_t> order;
  for (const auto& name : split_list(text)) order.push_back(sp.site_index(name));
  return order;
}

// A full configuration from a "config" document, checked against `sp`.
std::vector<int> theta_from_file(const ConfigSpace& sp, const std::string& path) {
  const io::ConfigDocument doc = io::config_from_json(read_file(path));
  if (doc.space != sp)
    throw FormatError(path + " was written for a different configuration space");
  if (doc.config.domain() != sp.full_mask())
    throw FormatError(path + " must carry a configuration on the full site set");
  return doc.config.values();
}

struct CheckOptions {
  std::string system_path;
  bool weak = false;
  std::string theta_path;
  double tol = 1e-9;
  std::string json_path;
};

int run_check(const CheckOptions& opt) {
  const OnePointSystem q = io::system_from_json(read_file(opt.system_path));
  ConsistencyReport report;
  std::string check_name;
  if (opt.weak) {
    check_name = "weak-consistency";
    const std::vector<int> theta = opt.theta_path.empty()
                                       ? default_positivity_points(q)
                                       : theta_from_file(q.space(), opt.theta_path);
    report = check_consistency_weak(q, theta, opt.tol);
  } else {
    check_name = "pair-consistency";
    report = check_consistency_positive(q, opt.tol);
  }
  std::cout << "check: " << check_name << "\n";
  std::cout << "verdict: " << (report.consistent ? "consistent" : "inconsistent")
            << " (max violation " << report.max_violation << ", tol " << report.tol << ")\n";
  if (!report.consistent && report.witness) {
    const auto& w = *report.witness;
    const ConfigSpace& sp = q.space();
    std::cout << "witness: t=" << sp.site_name(w.t) << " s=" << sp.site_name(w.s) << " x=" << w.x
              << " u=" << w.u << " y=" << w.y << " v=" << w.v << " z=["
              << render_config(sp, sp.complement(site_bit(w.t) | site_bit(w.s)), w.z) << "]\n";
  }
  if (!opt.json_path.empty())
    write_file(opt.json_path, io::report_json(q.space(), check_name, report));
  return report.consistent ? kOk : kNegative;
}

struct ReconstructOptions {
  std::string system_path;
  bool weak = false;
  std::string theta_path;
  std::string order_text;
  std::string base_text;
  double tol = 1e-9;
  bool skip_verify = false;
  bool verify_invariance_flag = false;
  std::size_t trials = 5;
  std::uint64_t seed = 1;
  std::string output;
};

int run_reconstruct(const ReconstructOptions& opt) {
  const OnePointSystem q = io::system_from_json(read_file(opt.system_path));
  const ConfigSpace& sp = q.space();
  std::vector<std::size_t> order;
  if (!opt.order_text.empty()) order = parse_order(sp, opt.order_text);
  if (opt.verify_invariance_flag) {
    const InvarianceReport inv = verify_invariance(q, opt.trials, opt.seed);
    std::cout << "invariance: max deviation " << inv.max_deviation << " over "
              << inv.reconstructions << " reconstructions\n";
  }
  RandomField result = [&] {
    if (opt.weak) {
      const std::vector<int> theta = opt.theta_path.empty()
                                         ? default_positivity_points(q)
                                         : theta_from_file(sp, opt.theta_path);
      return reconstruct_weak(q, theta, order, !opt.skip_verify, opt.tol);
    }
    std::vector<int> base;
    if (!opt.base_text.empty()) base = parse_states(opt.base_text);
    return reconstruct_positive(q, order, base, !opt.skip_verify, opt.tol);
  }();
  write_file(opt.output, io::to_json(result));
  return kOk;
}

struct MarkovOptions {
  std::string field_path;
  std::string adjacency_path;
  double tol = 1e-9;
  std::string json_path;
};

int run_markov(const MarkovOptions& opt) {
  const RandomField p = io::field_from_json(read_file(opt.field_path));
  const NeighborhoodSystem nbhd =
      io::adjacency_from_json(read_file(opt.adjacency_path), p.space());
  const MarkovReport report = is_markov(p, nbhd, opt.tol);
  std::cout << "verdict: " << (report.markov ? "markov" : "not-markov") << " (max violation "
            << report.max_violation << ", tol " << report.tol << ")\n";
  if (!report.markov && report.witness) {
    const auto& w = *report.witness;
    const SiteMask bmask = p.space().complement(site_bit(w.t));
    std::cout << "witness: t=" << p.space().site_name(w.t) << " x=" << w.x << " boundary=["
              << render_config(p.space(), bmask, w.boundary) << "] reference=["
              << render_config(p.space(), bmask, w.reference) << "]\n";
  }
  if (!opt.json_path.empty())
    write_file(opt.json_path, io::report_json(p.space(), "markov", report));
  return report.markov ? kOk : kNegative;
}

ConfigSpace space_from_flags(const std::string& sites_text, const std::string& cards_text) {
  const std::vector<std::string> names = split_list(sites_text);
  std::vector<int> cards;
  if (cards_text.empty())
    cards.assign(names.size(), 2);
  else
    cards = parse_states(cards_text);
  return ConfigSpace(names, cards);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"finite random field calculus: consistency, reconstruction, energy forms"};
  app.require_subcommand(1);

  CheckOptions check_opt;
  CLI::App* check_cmd = app.add_subcommand("check", "verify the consistency conditions of a system");
  check_cmd->add_option("--system", check_opt.system_path, "one-point system JSON")->required();
  check_cmd->add_flag("--weak", check_opt.weak, "use the weak-positivity conditions");
  check_cmd->add_option("--theta", check_opt.theta_path, "positivity points (config JSON)");
  check_cmd->add_option("--tol", check_opt.tol, "tolerance");
  check_cmd->add_option("--json", check_opt.json_path, "write the report as JSON");

  ReconstructOptions rec_opt;
  CLI::App* rec_cmd = app.add_subcommand("reconstruct", "build the compatible field of a system");
  rec_cmd->add_option("--system", rec_opt.system_path, "one-point system JSON")->required();
  rec_cmd->add_flag("--weak", rec_opt.weak, "weak-positivity reconstruction");
  rec_cmd->add_option("--theta", rec_opt.theta_path, "positivity points (config JSON)");
  rec_cmd->add_option("--order", rec_opt.order_text, "site enumeration, comma separated");
  rec_cmd->add_option("--base", rec_opt.base_text, "base configuration states, comma separated");
  rec_cmd->add_option("--tol", rec_opt.tol, "consistency tolerance");
  rec_cmd->add_flag("--no-verify", rec_opt.skip_verify, "skip the consistency pre-check");
  rec_cmd->add_flag("--verify-invariance", rec_opt.verify_invariance_flag,
                    "assert agreement across enumerations and bases first");
  rec_cmd->add_option("--trials", rec_opt.trials, "random trials for --verify-invariance");
  rec_cmd->add_option("--seed", rec_opt.seed, "seed for --verify-invariance");
  rec_cmd->add_option("-o,--output", rec_opt.output, "output field JSON")->required();

  std::string cond_field, cond_out;
  CLI::App* cond_cmd =
      app.add_subcommand("conditionals", "one-point conditional system of a field");
  cond_cmd->add_option("--field", cond_field, "field JSON")->required();
  cond_cmd->add_option("-o,--output", cond_out, "output system JSON")->required();

  std::string td_system, td_field, td_out;
  CLI::App* td_cmd = app.add_subcommand("to-delta", "transition energy field of a system or field");
  td_cmd->add_option("--system", td_system, "one-point system JSON");
  td_cmd->add_option("--field", td_field, "field JSON");
  td_cmd->add_option("-o,--output", td_out, "output delta JSON")->required();

  std::string th_delta, th_field, th_theta, th_out;
  CLI::App* th_cmd =
      app.add_subcommand("to-hamiltonian", "one-point hamiltonian of a delta or field");
  th_cmd->add_option("--delta", th_delta, "transition energy JSON (gauge: state 0)");
  th_cmd->add_option("--field", th_field, "field JSON (log-ratio form; pairs with --sign plus)");
  th_cmd->add_option("--theta", th_theta, "reference configuration (config JSON)");
  th_cmd->add_option("-o,--output", th_out, "output hamiltonian JSON")->required();

  std::string ts_delta, ts_ham, ts_sign = "minus", ts_out;
  CLI::App* ts_cmd = app.add_subcommand("to-system", "Gibbs system of a delta or hamiltonian");
  ts_cmd->add_option("--delta", ts_delta, "transition energy JSON");
  ts_cmd->add_option("--hamiltonian", ts_ham, "hamiltonian JSON");
  ts_cmd->add_option("--sign", ts_sign, "exponent pairing: minus (default) or plus");
  ts_cmd->add_option("-o,--output", ts_out, "output system JSON")->required();

  std::string ep_field, ep_theta, ep_out;
  CLI::App* ep_cmd =
      app.add_subcommand("extract-potential", "vacuum potential of a positive field");
  ep_cmd->add_option("--field", ep_field, "field JSON")->required();
  ep_cmd->add_option("--theta", ep_theta, "vacuum configuration (config JSON)")->required();
  ep_cmd->add_option("-o,--output", ep_out, "output potential JSON")->required();

  MarkovOptions mk_opt;
  CLI::App* mk_cmd = app.add_subcommand("markov", "test the Markov property of a field");
  mk_cmd->add_option("--field", mk_opt.field_path, "field JSON")->required();
  mk_cmd->add_option("--adjacency", mk_opt.adjacency_path, "neighborhood JSON")->required();
  mk_cmd->add_option("--tol", mk_opt.tol, "tolerance");
  mk_cmd->add_option("--json", mk_opt.json_path, "write the report as JSON");

  CLI::App* models_cmd = app.add_subcommand("models", "generate reference instances");
  models_cmd->require_subcommand(1);

  std::size_t is_rows = 2, is_cols = 2;
  double is_beta = 0.5, is_h = 0.0;
  std::string is_pot, is_adj, is_field, is_system;
  CLI::App* ising_cmd = models_cmd->add_subcommand("ising", "nearest-neighbor grid model");
  ising_cmd->add_option("--rows", is_rows, "grid rows");
  ising_cmd->add_option("--cols", is_cols, "grid columns");
  ising_cmd->add_option("--beta", is_beta, "pair coupling");
  ising_cmd->add_option("--hfield", is_h, "external singleton term");
  ising_cmd->add_option("--out-potential", is_pot, "write the potential JSON");
  ising_cmd->add_option("--out-adjacency", is_adj, "write the grid adjacency JSON");
  ising_cmd->add_option("--out-field", is_field, "write the exact field JSON");
  ising_cmd->add_option("--out-system", is_system, "write the Gibbs system JSON");

  std::string pr_sites, pr_out;
  std::vector<std::string> pr_marginals;
  CLI::App* product_cmd = models_cmd->add_subcommand("product", "independent product field");
  product_cmd->add_option("--sites", pr_sites, "site names, comma separated")->required();
  product_cmd->add_option("--marginal", pr_marginals, "per-site distribution, comma separated")
      ->required();
  product_cmd->add_option("-o,--output", pr_out, "output field JSON")->required();

  std::string rf_sites, rf_cards, rf_out;
  std::uint64_t rf_seed = 1;
  CLI::App* rf_cmd = models_cmd->add_subcommand("random-field", "seeded positive field");
  rf_cmd->add_option("--sites", rf_sites, "site names, comma separated")->required();
  rf_cmd->add_option("--cardinalities", rf_cards, "per-site state counts (default all 2)");
  rf_cmd->add_option("--seed", rf_seed, "seed");
  rf_cmd->add_option("-o,--output", rf_out, "output field JSON")->required();

  std::string vf_sites, vf_cards, vf_theta, vf_out;
  std::uint64_t vf_seed = 1;
  CLI::App* vf_cmd = models_cmd->add_subcommand("vacuum-field", "seeded weakly positive field");
  vf_cmd->add_option("--sites", vf_sites, "site names, comma separated")->required();
  vf_cmd->add_option("--cardinalities", vf_cards, "per-site state counts (default all 2)");
  vf_cmd->add_option("--seed", vf_seed, "seed");
  vf_cmd->add_option("--theta", vf_theta, "vacuum states, comma separated")->required();
  vf_cmd->add_option("-o,--output", vf_out, "output field JSON")->required();

  std::string pb_system, pb_site, pb_out;
  std::uint64_t pb_z = 0;
  int pb_state = 0;
  double pb_factor = 1.01;
  CLI::App* pb_cmd = models_cmd->add_subcommand("perturb", "break one entry of a system");
  pb_cmd->add_option("--system", pb_system, "one-point system JSON")->required();
  pb_cmd->add_option("--site", pb_site, "site name")->required();
  pb_cmd->add_option("--z", pb_z, "boundary index");
  pb_cmd->add_option("--state", pb_state, "state whose entry is scaled");
  pb_cmd->add_option("--factor", pb_factor, "scale factor (not one)");
  pb_cmd->add_option("-o,--output", pb_out, "output system JSON")->required();

  std::string sm_system, sm_out;
  std::uint64_t sm_sweeps = 100000, sm_burn = 1000, sm_seed = 1;
  CLI::App* sm_cmd = app.add_subcommand("sample", "heat-bath sampling of a positive system");
  sm_cmd->add_option("--system", sm_system, "one-point system JSON")->required();
  sm_cmd->add_option("--sweeps", sm_sweeps, "recorded sweeps");
  sm_cmd->add_option("--burn-in", sm_burn, "discarded sweeps");
  sm_cmd->add_option("--seed", sm_seed, "seed");
  sm_cmd->add_option("-o,--output", sm_out, "output samples JSON")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kError;
  }

  try {
    if (check_cmd->parsed()) return run_check(check_opt);
    if (rec_cmd->parsed()) return run_reconstruct(rec_opt);
    if (cond_cmd->parsed()) {
      const RandomField p = io::field_from_json(read_file(cond_field));
      write_file(cond_out, io::to_json(one_point_system(p)));
      return kOk;
    }
    if (td_cmd->parsed()) {
      if (td_system.empty() == td_field.empty())
        throw FormatError("to-delta needs exactly one of --system or --field");
      const TransitionEnergyField d =
          td_system.empty()
              ? delta_from_field(io::field_from_json(read_file(td_field)))
              : delta_from_system(io::system_from_json(read_file(td_system)));
      write_file(td_out, io::to_json(d));
      return kOk;
    }
    if (th_cmd->parsed()) {
      if (th_delta.empty() == th_field.empty())
        throw FormatError("to-hamiltonian needs exactly one of --delta or --field");
      if (!th_delta.empty()) {
        const OnePointHamiltonian h =
            hamiltonian_from_delta(io::delta_from_json(read_file(th_delta)));
        write_file(th_out, io::to_json(h));
      } else {
        if (th_theta.empty())
          throw FormatError("to-hamiltonian --field needs --theta");
        const RandomField p = io::field_from_json(read_file(th_field));
        const OnePointHamiltonian h =
            hamiltonian_from_field(p, theta_from_file(p.space(), th_theta));
        write_file(th_out, io::to_json(h));
      }
      return kOk;
    }
    if (ts_cmd->parsed()) {
      if (ts_delta.empty() == ts_ham.empty())
        throw FormatError("to-system needs exactly one of --delta or --hamiltonian");
      if (ts_sign != "minus" && ts_sign != "plus")
        throw FormatError("--sign must be minus or plus");
      OnePointSystem q = ts_delta.empty()
                             ? system_from_hamiltonian(
                                   io::hamiltonian_from_json(read_file(ts_ham)),
                                   ts_sign == "minus" ? GibbsSign::exp_minus_h
                                                      : GibbsSign::exp_plus_h)
                             : system_from_delta(io::delta_from_json(read_file(ts_delta)));
      write_file(ts_out, io::to_json(q));
      return kOk;
    }
    if (ep_cmd->parsed()) {
      const RandomField p = io::field_from_json(read_file(ep_field));
      const Potential phi = extract_potential_mobius(p, theta_from_file(p.space(), ep_theta));
      write_file(ep_out, io::to_json(phi));
      return kOk;
    }
    if (mk_cmd->parsed()) return run_markov(mk_opt);
    if (ising_cmd->parsed()) {
      if (is_pot.empty() && is_adj.empty() && is_field.empty() && is_system.empty())
        throw FormatError("models ising: no outputs requested");
      const IsingModel model = ising_potential(is_rows, is_cols, is_beta, is_h);
      if (!is_pot.empty()) write_file(is_pot, io::to_json(model.potential));
      if (!is_adj.empty())
        write_file(is_adj, io::to_json(model.adjacency, model.potential.space()));
      if (!is_field.empty()) write_file(is_field, io::to_json(field_from_global(model.potential)));
      if (!is_system.empty()) write_file(is_system, io::to_json(gibbs_system(model.potential)));
      return kOk;
    }
    if (product_cmd->parsed()) {
      const std::vector<std::string> names = split_list(pr_sites);
      std::vector<std::vector<double>> marginals;
      std::vector<int> cards;
      for (const auto& text : pr_marginals) {
        std::vector<double> m;
        for (const auto& item : split_list(text)) m.push_back(std::stod(item));
        cards.push_back(static_cast<int>(m.size()));
        marginals.push_back(std::move(m));
      }
      const ConfigSpace space(names, cards);
      write_file(pr_out, io::to_json(product_field(space, marginals)));
      return kOk;
    }
    if (rf_cmd->parsed()) {
      const ConfigSpace space = space_from_flags(rf_sites, rf_cards);
      write_file(rf_out, io::to_json(random_positive_field(space, rf_seed)));
      return kOk;
    }
    if (vf_cmd->parsed()) {
      const ConfigSpace space = space_from_flags(vf_sites, vf_cards);
      write_file(vf_out, io::to_json(vacuum_field(space, vf_seed, parse_states(vf_theta))));
      return kOk;
    }
    if (pb_cmd->parsed()) {
      const OnePointSystem q = io::system_from_json(read_file(pb_system));
      const std::size_t site = q.space().site_index(pb_site);
      write_file(pb_out, io::to_json(perturb_system(q, site, pb_z, pb_factor, pb_state)));
      return kOk;
    }
    if (sm_cmd->parsed()) {
      const OnePointSystem q = io::system_from_json(read_file(sm_system));
      const SampleResult result = gibbs_sample(q, sm_sweeps, sm_burn, sm_seed);
      write_file(sm_out, io::to_json(q.space(), result));
      return kOk;
    }
  } catch (const ConsistencyError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kNegative;
  } catch (const InvarianceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kNegative;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kError;
  }
  return kError;
}
