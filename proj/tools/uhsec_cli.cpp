// Batch front door for the universal-hashing security toolkit: field search,
// hash evaluation and verification, code and channel utilities, bound
// calculators, the two protocol evaluators, and a hashing throughput bench.
// Every stochastic run is fully determined by --seed; reports are JSON with
// stable key order on stdout (or --out), human summaries on stderr.

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "uhsec/channel.hpp"
#include "uhsec/codes.hpp"
#include "uhsec/gf2.hpp"
#include "uhsec/info.hpp"
#include "uhsec/protocols.hpp"
#include "uhsec/report.hpp"
#include "uhsec/rng.hpp"
#include "uhsec/uhf.hpp"

namespace {

using uhsec::BitVec;
using uhsec::ordered_json;
using uhsec::Report;

struct GlobalOpts {
  std::uint64_t seed = 1;
  std::string out_path;
  std::uint64_t budget = uhsec::kDefaultBudget;
  bool timing = false;
};

int emit(const Report& rep, const GlobalOpts& g,
         std::chrono::steady_clock::time_point started) {
  ordered_json j = rep.to_json();
  if (g.timing) {
    const double ms = std::chrono::duration<double, std::milli>(
                          std::chrono::steady_clock::now() - started)
                          .count();
    j["wall_ms"] = uhsec::round_sig(ms, 4);
  }
  const std::string bytes = j.dump(2) + "\n";
  if (g.out_path.empty()) {
    std::cout << bytes;
  } else {
    std::ofstream f(g.out_path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + g.out_path);
    f << bytes;
  }
  std::cerr << rep.command << ": " << rep.checks.size() << " check(s)\n";
  for (const auto& c : rep.checks)
    std::cerr << "  [" << (c.pass ? "PASS" : "FAIL") << "] " << c.name
              << ": value=" << c.value << " bound=" << c.bound
              << (c.note.empty() ? "" : " (" + c.note + ")") << "\n";
  for (const auto& w : rep.warnings) std::cerr << "  [WARN] " << w << "\n";
  return rep.all_pass() ? 0 : 1;
}

// --- config parsing -------------------------------------------------------

ordered_json load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  try {
    return ordered_json::parse(in);
  } catch (const std::exception& e) {
    throw std::runtime_error("config " + path + ": " + e.what());
  }
}

template <typename T>
T field(const ordered_json& j, const std::string& name) {
  if (!j.contains(name))
    throw std::runtime_error("config: missing field '" + name + "'");
  try {
    return j.at(name).get<T>();
  } catch (const std::exception&) {
    throw std::runtime_error("config: invalid value for field '" + name + "'");
  }
}

template <typename T>
T field_or(const ordered_json& j, const std::string& name, T def) {
  return j.contains(name) ? field<T>(j, name) : def;
}

uhsec::ChannelSpec parse_channel(const ordered_json& j) {
  const std::string kind = field<std::string>(j, "kind");
  if (kind == "bsc") return uhsec::ChannelSpec::bsc(field<double>(j, "p"));
  if (kind == "bec") return uhsec::ChannelSpec::bec(field<double>(j, "p"));
  if (kind == "awgn")
    return uhsec::ChannelSpec::awgn(field<double>(j, "sigma2"), field<double>(j, "power"),
                                    field_or<std::uint32_t>(j, "grid_points", 33),
                                    field_or<double>(j, "span_sigmas", 4.0));
  if (kind == "dmc")
    return uhsec::ChannelSpec::dmc(field<std::vector<std::vector<double>>>(j, "matrix"));
  throw std::runtime_error("config: unknown channel kind '" + kind + "'");
}

uhsec::LinearCode parse_code(const ordered_json& j) {
  if (j.contains("g") || j.contains("h"))
    return uhsec::LinearCode::from_files(field<std::string>(j, "g"), field<std::string>(j, "h"));
  const std::string name = field<std::string>(j, "name");
  if (name == "hamming74") return uhsec::LinearCode::hamming74();
  if (name == "golay24") return uhsec::LinearCode::golay24();
  if (name == "repetition") return uhsec::LinearCode::repetition(field<std::uint32_t>(j, "n"));
  if (name == "identity") return uhsec::LinearCode::identity(field<std::uint32_t>(j, "n"));
  if (name == "bitwise-repetition")
    return uhsec::LinearCode::bitwise_repetition(field<std::uint32_t>(j, "bits"),
                                                 field<std::uint32_t>(j, "copies"));
  throw std::runtime_error("config: unknown code '" + name + "'");
}

uhsec::LinearCode code_by_name(const std::string& name, const std::string& g_path,
                               const std::string& h_path) {
  if (!g_path.empty() || !h_path.empty())
    return uhsec::LinearCode::from_files(g_path, h_path);
  ordered_json j;
  if (name.rfind("repetition", 0) == 0 && name.size() > 10) {
    j["name"] = "repetition";
    j["n"] = std::uint32_t(std::stoul(name.substr(10)));
  } else if (name.rfind("identity", 0) == 0 && name.size() > 8) {
    j["name"] = "identity";
    j["n"] = std::uint32_t(std::stoul(name.substr(8)));
  } else {
    j["name"] = name;
  }
  return parse_code(j);
}

uhsec::SkaConfig parse_ska_config(const ordered_json& j) {
  uhsec::SkaConfig cfg;
  cfg.n = field<std::uint32_t>(j, "n");
  cfg.eps_src = field<double>(j, "eps_src");
  cfg.code = parse_code(field<ordered_json>(j, "code"));
  const ordered_json u = field<ordered_json>(j, "uhf");
  cfg.uhf = uhsec::UhfDescriptor{uhsec::UhfKind::Field, field<std::uint32_t>(u, "l"),
                                 field<std::uint32_t>(u, "k")};
  cfg.delta = field<double>(j, "delta");
  const std::string mode = field_or<std::string>(j, "entropy_mode", "exact-from-model");
  if (mode == "exact-from-model") cfg.entropy_mode = uhsec::EntropyMode::ExactFromModel;
  else if (mode == "order-2") cfg.entropy_mode = uhsec::EntropyMode::Order2;
  else throw std::runtime_error("config: unknown entropy_mode '" + mode + "'");
  if (j.contains("eve")) {
    const ordered_json e = j.at("eve");
    const std::string kind = field<std::string>(e, "kind");
    if (kind == "constant") cfg.eve = uhsec::EveModel::constant();
    else if (kind == "bsc") cfg.eve = uhsec::EveModel::bsc_copy(field<double>(e, "q"));
    else throw std::runtime_error("config: unknown eve kind '" + kind + "'");
  }
  return cfg;
}

uhsec::WiretapConfig parse_wiretap_config(const ordered_json& j) {
  uhsec::WiretapConfig cfg;
  cfg.code = parse_code(field<ordered_json>(j, "code"));
  cfg.l = field<std::uint32_t>(j, "l");
  cfg.k = field<std::uint32_t>(j, "k");
  cfg.channel_t = parse_channel(field<ordered_json>(j, "T"));
  if (j.contains("V")) {
    cfg.degrading_v = parse_channel(j.at("V"));
    cfg.channel_w = cfg.channel_t;  // unused when V is set
  } else {
    cfg.channel_w = parse_channel(field<ordered_json>(j, "W"));
  }
  cfg.p_e = field_or<double>(j, "p_e", 0.0);
  cfg.eps_list = field_or<std::vector<double>>(j, "eps_list", {0.0});
  cfg.t_blocks = field_or<std::uint32_t>(j, "t", 1);
  if (j.contains("c")) cfg.seed_transport_blocks = field<std::uint32_t>(j, "c");
  const std::string law = field_or<std::string>(j, "message_law", "uniform-nonzero");
  if (law == "uniform-nonzero") cfg.law = uhsec::MessageLaw::UniformNonzero;
  else if (law == "uniform-all") cfg.law = uhsec::MessageLaw::UniformAll;
  else throw std::runtime_error("config: unknown message_law '" + law + "'");
  return cfg;
}

uhsec::Distribution parse_dist(const std::string& csv) {
  std::vector<double> v;
  std::stringstream ss(csv);
  std::string tok;
  while (std::getline(ss, tok, ',')) v.push_back(std::stod(tok));
  return uhsec::Distribution(std::move(v));
}

uhsec::JointDistribution parse_joint(const std::string& rows_csv) {
  std::vector<std::vector<double>> rows;
  std::stringstream ss(rows_csv);
  std::string row;
  while (std::getline(ss, row, ';')) {
    rows.emplace_back();
    std::stringstream rs(row);
    std::string tok;
    while (std::getline(rs, tok, ',')) rows.back().push_back(std::stod(tok));
  }
  if (rows.empty()) throw std::runtime_error("empty joint distribution");
  uhsec::JointDistribution j(rows.size(), rows[0].size());
  for (std::size_t x = 0; x < rows.size(); ++x) {
    if (rows[x].size() != j.nz) throw std::runtime_error("ragged joint distribution");
    for (std::size_t z = 0; z < j.nz; ++z) j.at(x, z) = rows[x][z];
  }
  j.validate();
  return j;
}

// exact probability that syndrome reconciliation recovers x over a BSC(p)
// discrepancy: sum over coset leaders e of p^w(e) (1-p)^(n-w(e))
double exact_recovery_probability(const uhsec::LinearCode& code, double p) {
  double s = 0;
  for (const auto& e : code.coset_table())
    s += std::pow(p, double(e.count())) * std::pow(1 - p, double(code.n - e.count()));
  return s;
}

ordered_json channel_spec_json(const uhsec::ChannelSpec& s) {
  ordered_json j;
  j["kind"] = s.kind_name();
  switch (s.kind) {
    case uhsec::ChannelKind::Bsc:
    case uhsec::ChannelKind::Bec: j["p"] = s.p; break;
    case uhsec::ChannelKind::AwgnGrid:
      j["sigma2"] = s.sigma2;
      j["power"] = s.power;
      j["grid_points"] = s.grid_points;
      j["span_sigmas"] = s.span_sigmas;
      break;
    case uhsec::ChannelKind::Dmc: j["rows"] = s.matrix.size(); break;
  }
  return j;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"uhsec: universal hashing toolkit for key agreement and wiretap coding"};
  app.fallthrough();  // global flags may follow the subcommand
  app.require_subcommand(1);

  GlobalOpts g;
  if (const char* env = std::getenv("UHSEC_BUDGET")) g.budget = std::strtoull(env, nullptr, 10);
  app.add_option("--seed", g.seed, "master seed; every stochastic run is determined by it");
  app.add_option("--out", g.out_path, "write the JSON report to this path instead of stdout");
  app.add_option("--budget", g.budget, "evaluation budget for exhaustive enumerations");
  app.add_flag("--timing", g.timing, "include wall time in the report");

  // fields
  auto* cmd_fields = app.add_subcommand("fields", "list supported field lengths");
  std::uint32_t max_l = 64;
  cmd_fields->add_option("--max-l", max_l, "search bound")->required();

  // uhf
  auto* cmd_uhf = app.add_subcommand("uhf", "hash family operations");
  cmd_uhf->require_subcommand(1);
  std::string uhf_kind = "field", seed_hex, input_hex, m_hex, r_hex;
  std::uint32_t uhf_l = 4, uhf_k = 2;
  auto add_uhf_common = [&](CLI::App* c, bool need_seed) {
    c->add_option("--kind", uhf_kind, "field | toeplitz | modified-toeplitz");
    c->add_option("--l", uhf_l, "input bits")->required();
    c->add_option("--k", uhf_k, "output bits")->required();
    if (need_seed) c->add_option("--seed-hex", seed_hex, "seed value, hex")->required();
  };
  auto* uhf_eval = cmd_uhf->add_subcommand("eval", "hash an input");
  add_uhf_common(uhf_eval, true);
  uhf_eval->add_option("--input-hex", input_hex, "l-bit input, hex")->required();
  auto* uhf_invert = cmd_uhf->add_subcommand("invert", "sample the preimage of a message");
  add_uhf_common(uhf_invert, true);
  uhf_invert->add_option("--m-hex", m_hex, "k-bit message, hex")->required();
  uhf_invert->add_option("--r-hex", r_hex, "(l-k)-bit randomness, hex")->required();
  auto* uhf_verify = cmd_uhf->add_subcommand("verify", "exhaustive 2-universality + balance check");
  add_uhf_common(uhf_verify, false);

  // ecc
  auto* cmd_ecc = app.add_subcommand("ecc", "linear code operations");
  cmd_ecc->require_subcommand(1);
  std::string ecc_code = "hamming74", ecc_in, ecc_g, ecc_h;
  auto add_ecc_common = [&](CLI::App* c) {
    c->add_option("--code", ecc_code, "hamming74 | golay24 | repetitionN | identityN");
    c->add_option("--g", ecc_g, "generator matrix file (0/1 rows)");
    c->add_option("--hmat", ecc_h, "parity check matrix file");
    c->add_option("--in", ecc_in, "input bits, e.g. 1011")->required();
  };
  add_ecc_common(cmd_ecc->add_subcommand("encode", "message -> codeword"));
  add_ecc_common(cmd_ecc->add_subcommand("decode", "word -> nearest codeword"));
  add_ecc_common(cmd_ecc->add_subcommand("leader", "word -> coset leader"));
  add_ecc_common(cmd_ecc->add_subcommand("syndrome", "word -> syndrome"));

  // channel
  auto* cmd_channel = app.add_subcommand("channel", "channel utilities");
  cmd_channel->require_subcommand(1);
  std::string ch_kind = "bsc", ch_config;
  double ch_p = 0.1, ch_sigma2 = 1.0, ch_power = 1.0;
  auto add_ch_common = [&](CLI::App* c) {
    c->add_option("--kind", ch_kind, "bsc | bec | awgn");
    c->add_option("--p", ch_p, "crossover / erasure probability");
    c->add_option("--sigma2", ch_sigma2, "awgn noise variance");
    c->add_option("--power", ch_power, "awgn input power");
    c->add_option("--config", ch_config, "channel spec JSON file");
  };
  add_ch_common(cmd_channel->add_subcommand("info", "alphabet sizes and row sums"));
  add_ch_common(cmd_channel->add_subcommand("capacity", "capacity in bits per use"));
  add_ch_common(cmd_channel->add_subcommand("maxinfo", "max-information in bits"));

  // measure
  auto* cmd_measure = app.add_subcommand("measure", "information measures");
  cmd_measure->require_subcommand(1);
  std::string me_p, me_q, me_joint;
  double me_eps = 0;
  auto add_me_common = [&](CLI::App* c) {
    c->add_option("--p", me_p, "distribution, comma separated");
    c->add_option("--q", me_q, "second distribution");
    c->add_option("--joint", me_joint, "joint matrix, rows ; separated");
    c->add_option("--eps", me_eps, "smoothing parameter");
  };
  for (const char* name : {"tv", "kl", "minent", "smoothminent", "condminent",
                           "smoothcondminent", "mi", "renyi2"})
    add_me_common(cmd_measure->add_subcommand(name));

  // bounds
  auto* cmd_bounds = app.add_subcommand("bounds", "leftover-hash bound calculators");
  cmd_bounds->require_subcommand(1);
  double b_k = 1, b_h = 1, b_eps = 0, b_z2 = 1, b_b = 1, b_imax = 0;
  double b_n = 100, b_delta = 0.1, b_power = 1, b_sigma2 = 1;
  auto* bounds_lhl = cmd_bounds->add_subcommand("lhl", "total-variation form");
  bounds_lhl->add_option("--k", b_k)->required();
  bounds_lhl->add_option("--hmin", b_h)->required();
  bounds_lhl->add_option("--eps", b_eps);
  bounds_lhl->add_option("--z2", b_z2, "cardinality of the finite side information");
  auto* bounds_kl = cmd_bounds->add_subcommand("kl", "divergence form");
  bounds_kl->add_option("--k", b_k)->required();
  bounds_kl->add_option("--hmin", b_h)->required();
  auto* bounds_channel = cmd_bounds->add_subcommand("channel", "channel-model form");
  bounds_channel->add_option("--b", b_b)->required();
  bounds_channel->add_option("--imax", b_imax)->required();
  bounds_channel->add_option("--eps", b_eps);
  bounds_channel->add_option("--k", b_k)->required();
  auto* bounds_awgn = cmd_bounds->add_subcommand("awgn", "smooth max-information bound");
  bounds_awgn->add_option("--n", b_n)->required();
  bounds_awgn->add_option("--delta", b_delta)->required();
  bounds_awgn->add_option("--power", b_power)->required();
  bounds_awgn->add_option("--sigma2", b_sigma2)->required();

  // ska
  auto* cmd_ska = app.add_subcommand("ska", "secret key agreement");
  cmd_ska->require_subcommand(1);
  std::string ska_config_path;
  std::uint64_t ska_trials = 10000;
  bool ska_select_k = false;
  auto* ska_sim = cmd_ska->add_subcommand("simulate", "Monte Carlo protocol runs");
  ska_sim->add_option("--config", ska_config_path)->required();
  ska_sim->add_option("--trials", ska_trials);
  auto* ska_eval = cmd_ska->add_subcommand("eval", "exact security evaluation");
  ska_eval->add_option("--config", ska_config_path)->required();
  ska_eval->add_flag("--select-k", ska_select_k, "replace k with the selection-rule value");

  // wiretap
  auto* cmd_wt = app.add_subcommand("wiretap", "modular seeded wiretap coding");
  cmd_wt->require_subcommand(1);
  std::string wt_config_path;
  std::uint64_t wt_trials = 10000;
  std::uint32_t wt_t = 0;
  bool wt_exact_chain = false;
  auto* wt_sim = cmd_wt->add_subcommand("simulate", "Monte Carlo encode/decode runs");
  wt_sim->add_option("--config", wt_config_path)->required();
  wt_sim->add_option("--trials", wt_trials);
  auto* wt_eval = cmd_wt->add_subcommand("eval", "exact leakage vs channel-model bound");
  wt_eval->add_option("--config", wt_config_path)->required();
  auto* wt_recycle = cmd_wt->add_subcommand("recycle", "seed recycling run");
  wt_recycle->add_option("--config", wt_config_path)->required();
  wt_recycle->add_option("--t", wt_t, "messages per seed (overrides config)");
  wt_recycle->add_flag("--exact-chain", wt_exact_chain,
                       "verify the multi-block chain rule by enumeration (t = 2)");

  // bench
  auto* cmd_bench = app.add_subcommand("bench", "hashing throughput");
  std::string bench_kind = "field";
  std::uint32_t bench_l = 60;
  double bench_mb = 8.0;
  cmd_bench->add_option("--kind", bench_kind, "field | toeplitz");
  cmd_bench->add_option("--l", bench_l);
  cmd_bench->add_option("--megabytes", bench_mb);

  CLI11_PARSE(app, argc, argv);
  const auto started = std::chrono::steady_clock::now();

  try {
    Report rep;
    rep.master_seed = g.seed;

    if (cmd_fields->parsed()) {
      rep.command = "fields";
      rep.params["max_l"] = max_l;
      const auto ls = uhsec::find_valid_lengths(max_l);
      rep.values["valid_lengths"] = ls;
      rep.values["count"] = ls.size();
      return emit(rep, g, started);
    }

    if (cmd_uhf->parsed()) {
      const auto kind = uhsec::uhf_kind_from_string(uhf_kind);
      const uhsec::UhfDescriptor d{kind, uhf_l, uhf_k};
      d.validate();
      rep.params["kind"] = uhf_kind;
      rep.params["l"] = uhf_l;
      rep.params["k"] = uhf_k;
      if (uhf_eval->parsed()) {
        rep.command = "uhf eval";
        const BitVec s = BitVec::from_hex(seed_hex, d.seed_bits());
        const BitVec x = BitVec::from_hex(input_hex, uhf_l);
        rep.values["output_hex"] = uhsec::uhf_eval(d, s, x).to_hex();
      } else if (uhf_invert->parsed()) {
        rep.command = "uhf invert";
        const BitVec s = BitVec::from_hex(seed_hex, d.seed_bits());
        const BitVec m = BitVec::from_hex(m_hex, uhf_k);
        const BitVec r = BitVec::from_hex(r_hex, uhf_l - uhf_k);
        const BitVec x = uhsec::uhf_invert(d, s, m, r);
        rep.values["input_hex"] = x.to_hex();
        rep.values["check_m_hex"] = uhsec::uhf_eval(d, s, x).to_hex();
      } else {
        rep.command = "uhf verify";
        const auto res = uhsec::verify_uhf_property(d, g.budget);
        rep.values["seeds"] = res.seed_count;
        rep.values["worst_collisions"] = res.worst_collisions;
        rep.values["worst_pair"] = {BitVec::from_uint(res.worst_x1, uhf_l).to_hex(),
                                    BitVec::from_uint(res.worst_x2, uhf_l).to_hex()};
        rep.values["evaluations"] = res.evaluations;
        rep.add_check("collision_fraction_le_2^-k", res.fraction, std::exp2(-double(uhf_k)),
                      res.within_bound(uhf_k));
        const auto bal = uhsec::verify_balanced(d, g.budget);
        rep.values["balanced"] = bal.balanced;
        if (bal.b) rep.values["balance_b"] = *bal.b;
        if (bal.witness) {
          ordered_json w;
          w["kind"] = bal.witness->kind == uhsec::BalanceWitness::Kind::PreimageSize
                          ? "preimage-size"
                          : "forced-input";
          w["seed_index"] = bal.witness->seed_index;
          w["x_hex"] = BitVec::from_uint(bal.witness->x, uhf_l).to_hex();
          w["m_hex"] = BitVec::from_uint(bal.witness->m, uhf_k).to_hex();
          w["count"] = bal.witness->count;
          w["expected"] = bal.witness->expected;
          rep.values["balance_witness"] = w;
        }
      }
      return emit(rep, g, started);
    }

    if (cmd_ecc->parsed()) {
      const uhsec::LinearCode code = code_by_name(ecc_code, ecc_g, ecc_h);
      rep.params["code"] = code.name;
      rep.params["n"] = code.n;
      rep.params["k"] = code.k;
      rep.params["in"] = ecc_in;
      const BitVec in = BitVec::from_string(ecc_in);
      CLI::App* sub = cmd_ecc->get_subcommands().front();
      rep.command = "ecc " + sub->get_name();
      if (sub->get_name() == "encode") rep.values["out"] = code.encode(in).to_string();
      else if (sub->get_name() == "decode") rep.values["out"] = code.decode_nearest(in).to_string();
      else if (sub->get_name() == "leader") rep.values["out"] = code.coset_leader(in).to_string();
      else rep.values["out"] = code.syndrome(in).to_string();
      return emit(rep, g, started);
    }

    if (cmd_channel->parsed()) {
      uhsec::ChannelSpec spec;
      if (!ch_config.empty()) {
        spec = parse_channel(load_config(ch_config));
      } else if (ch_kind == "bsc") {
        spec = uhsec::ChannelSpec::bsc(ch_p);
      } else if (ch_kind == "bec") {
        spec = uhsec::ChannelSpec::bec(ch_p);
      } else if (ch_kind == "awgn") {
        spec = uhsec::ChannelSpec::awgn(ch_sigma2, ch_power);
      } else {
        throw std::runtime_error("channel: unknown kind '" + ch_kind + "' (use --config for dmc)");
      }
      rep.params = channel_spec_json(spec);
      CLI::App* sub = cmd_channel->get_subcommands().front();
      rep.command = "channel " + sub->get_name();
      if (sub->get_name() == "capacity") {
        rep.values["capacity_bits"] = uhsec::num(uhsec::capacity(spec));
      } else if (sub->get_name() == "maxinfo") {
        rep.values["imax_bits"] = uhsec::num(uhsec::max_information(uhsec::make_channel(spec)));
      } else {
        const auto ch = uhsec::make_channel(spec);
        rep.values["inputs"] = ch.nx;
        rep.values["outputs"] = ch.nz;
        double worst = 0;
        for (std::size_t x = 0; x < ch.nx; ++x) {
          double s = 0;
          for (std::size_t z = 0; z < ch.nz; ++z) s += ch.at(x, z);
          worst = std::max(worst, std::abs(s - 1.0));
        }
        rep.values["max_row_sum_error"] = uhsec::num(worst);
      }
      return emit(rep, g, started);
    }

    if (cmd_measure->parsed()) {
      CLI::App* sub = cmd_measure->get_subcommands().front();
      const std::string name = sub->get_name();
      rep.command = "measure " + name;
      rep.params["eps"] = me_eps;
      if (name == "tv" || name == "kl") {
        const auto P = parse_dist(me_p), Q = parse_dist(me_q);
        rep.values["bits"] =
            uhsec::num(name == "tv" ? uhsec::tv_distance(P, Q) : uhsec::kl_divergence(P, Q));
      } else if (name == "minent" || name == "smoothminent" || name == "renyi2") {
        const auto P = parse_dist(me_p);
        double v = name == "minent" ? uhsec::min_entropy(P)
                   : name == "renyi2" ? uhsec::renyi2_entropy(P)
                                      : uhsec::smooth_min_entropy(P, me_eps);
        rep.values["bits"] = uhsec::num(v);
      } else {
        const auto J = parse_joint(me_joint);
        double v = 0;
        if (name == "condminent") v = uhsec::cond_min_entropy(J);
        else if (name == "smoothcondminent") v = uhsec::smooth_cond_min_entropy(J, me_eps);
        else v = uhsec::mutual_information(J);
        rep.values["bits"] = uhsec::num(v);
      }
      return emit(rep, g, started);
    }

    if (cmd_bounds->parsed()) {
      if (bounds_lhl->parsed()) {
        rep.command = "bounds lhl";
        rep.params = {{"k", b_k}, {"h", b_h}, {"eps", b_eps}, {"z2", b_z2}};
        rep.values["bound_tv"] = uhsec::num(uhsec::lhl_bound_tv(b_k, b_h, b_eps, b_z2));
      } else if (bounds_kl->parsed()) {
        rep.command = "bounds kl";
        rep.params = {{"k", b_k}, {"h", b_h}};
        rep.values["bound_bits"] = uhsec::num(uhsec::lhl_bound_kl(b_k, b_h));
      } else if (bounds_channel->parsed()) {
        rep.command = "bounds channel";
        rep.params = {{"b", b_b}, {"imax", b_imax}, {"eps", b_eps}, {"k", b_k}};
        rep.values["bound_bits"] =
            uhsec::num(uhsec::channel_lhl_bound(b_b, b_imax, b_eps, b_k));
      } else {
        rep.command = "bounds awgn";
        rep.params = {{"n", b_n}, {"delta", b_delta}, {"power", b_power}, {"sigma2", b_sigma2}};
        const auto r = uhsec::awgn_imax_bound(b_n, b_delta, b_power, b_sigma2);
        rep.values["bound_bits"] = uhsec::num(r.bits);
        rep.values["eps_n"] = uhsec::num(r.eps_n);
      }
      return emit(rep, g, started);
    }

    if (cmd_ska->parsed()) {
      uhsec::SkaConfig cfg = parse_ska_config(load_config(ska_config_path));
      rep.params["config"] = ska_config_path;
      rep.params["n"] = cfg.n;
      rep.params["eps_src"] = cfg.eps_src;
      rep.params["code"] = cfg.code.name;
      rep.params["l"] = cfg.uhf.l;
      rep.params["delta"] = cfg.delta;
      if (ska_sim->parsed()) {
        rep.command = "ska simulate";
        rep.params["trials"] = ska_trials;
        uhsec::CounterRng master(g.seed);
        std::uint64_t agreed = 0, key_equal = 0;
        for (std::uint64_t i = 0; i < ska_trials; ++i) {
          uhsec::CounterRng trial = master.substream(i);
          const auto t = uhsec::ska_run(cfg, trial);
          agreed += t.agreed;
          key_equal += t.k1 == t.k2;
        }
        const double emp = double(agreed) / double(ska_trials);
        const double exact = exact_recovery_probability(cfg.code, cfg.eps_src);
        const double sigma = std::sqrt(exact * (1 - exact) / double(ska_trials));
        rep.values["empirical_agreement"] = uhsec::num(emp);
        rep.values["exact_agreement"] = uhsec::num(exact);
        rep.values["key_equal_fraction"] = uhsec::num(double(key_equal) / double(ska_trials));
        rep.add_check("agreement_within_3_sigma", std::abs(emp - exact), 3 * sigma,
                      std::abs(emp - exact) <= 3 * sigma);
      } else {
        rep.command = "ska eval";
        const double h = uhsec::ska_model_entropy(cfg);
        const double r = double(cfg.code.redundancy());
        const std::uint32_t k_rule = uhsec::ska_select_key_length(h, r, cfg.delta);
        if (ska_select_k) cfg.uhf.k = k_rule;
        rep.values["h_bits"] = uhsec::num(h);
        rep.values["r_bits"] = r;
        rep.values["k_rule"] = k_rule;
        rep.values["k_used"] = cfg.uhf.k;
        if (k_rule == 0) rep.warnings.push_back("selection rule gives k = 0: infeasible budget");
        const auto lr = uhsec::ska_exact_security_eval(cfg, g.budget);
        rep.values["exact_tv"] = uhsec::num(lr.exact);
        rep.values["enumeration_size"] = lr.enumeration_size;
        rep.add_check("tv_le_delta", lr.exact, lr.bound, lr.pass);
      }
      return emit(rep, g, started);
    }

    if (cmd_wt->parsed()) {
      uhsec::WiretapConfig cfg = parse_wiretap_config(load_config(wt_config_path));
      rep.params["config"] = wt_config_path;
      rep.params["code"] = cfg.code.name;
      rep.params["l"] = cfg.l;
      rep.params["k"] = cfg.k;
      rep.params["T"] = channel_spec_json(cfg.channel_t);
      rep.params["W"] = channel_spec_json(cfg.channel_w);
      const double code_rate = double(cfg.l) / double(cfg.code.n);
      if (double(cfg.k) / double(cfg.code.n) >= code_rate - uhsec::capacity(cfg.channel_w))
        rep.warnings.push_back("rate condition violated: k/n >= R - C_W");
      if (wt_sim->parsed()) {
        rep.command = "wiretap simulate";
        rep.params["trials"] = wt_trials;
        uhsec::CounterRng master(g.seed);
        const auto t_ch = uhsec::make_channel(cfg.channel_t);
        std::uint64_t ok_block = 0, ok_msg = 0;
        for (std::uint64_t i = 0; i < wt_trials; ++i) {
          uhsec::CounterRng trial = master.substream(i);
          const uhsec::Seed s = uhsec::sample_field_seed(cfg.l, trial);
          const std::uint64_t lo = cfg.law == uhsec::MessageLaw::UniformAll ? 0 : 1;
          const BitVec m = BitVec::from_uint(lo + trial.next_below(uhsec::message_count(cfg)),
                                             cfg.k);
          const BitVec xn = uhsec::wiretap_encode(m, s, cfg, trial);
          BitVec yn(cfg.code.n);
          for (std::uint32_t b = 0; b < cfg.code.n; ++b)
            yn.set(b, uhsec::sample(t_ch, xn.get(b) ? 1 : 0, trial) == 1);
          ok_block += cfg.code.decode_nearest(yn) == xn;
          ok_msg += uhsec::wiretap_decode(yn, s, cfg) == m;
        }
        const double emp_err = 1.0 - double(ok_block) / double(wt_trials);
        const double emp_msg_err = 1.0 - double(ok_msg) / double(wt_trials);
        double exact_err = 0;
        if (cfg.channel_t.kind == uhsec::ChannelKind::Bsc)
          exact_err = 1.0 - exact_recovery_probability(cfg.code, cfg.channel_t.p);
        const double sigma =
            std::sqrt(std::max(exact_err * (1 - exact_err), 1e-12) / double(wt_trials));
        rep.values["empirical_block_error"] = uhsec::num(emp_err);
        rep.values["empirical_message_error"] = uhsec::num(emp_msg_err);
        rep.values["exact_block_error"] = uhsec::num(exact_err);
        if (cfg.channel_t.kind == uhsec::ChannelKind::Bsc) {
          rep.add_check("block_error_within_3_sigma", std::abs(emp_err - exact_err), 3 * sigma,
                        std::abs(emp_err - exact_err) <= 3 * sigma);
          // decode failures can still collide to the right message
          rep.add_check("message_error_le_block_error", emp_msg_err, emp_err,
                        emp_msg_err <= emp_err + 1e-12);
        }
      } else if (wt_eval->parsed()) {
        rep.command = "wiretap eval";
        const auto reports = uhsec::wiretap_exact_leakage(cfg, g.budget);
        rep.values["exact_leakage_bits"] = uhsec::num(reports.front().exact);
        rep.values["enumeration_size"] = reports.front().enumeration_size;
        ordered_json rows = ordered_json::array();
        for (const auto& r : reports) {
          ordered_json row;
          row["eps"] = r.eps;
          row["imax_eps"] = uhsec::num(r.imax_eps);
          row["bound_bits"] = uhsec::num(r.bound);
          row["pass"] = r.pass;
          rows.push_back(row);
          rep.add_check("leakage_le_bound_eps_" + std::to_string(r.eps), r.exact, r.bound,
                        r.pass);
        }
        rep.values["bounds"] = rows;
      } else {
        rep.command = "wiretap recycle";
        const std::uint32_t t = wt_t ? wt_t : cfg.t_blocks;
        uhsec::CounterRng rng(g.seed);
        const auto run = uhsec::seed_recycling_run(cfg, t, rng, g.budget);
        rep.values["t"] = run.t;
        rep.values["c"] = run.c;
        rep.values["rate"] = uhsec::num(run.rate);
        rep.values["error_bound"] = uhsec::num(run.error_bound);
        rep.values["single_block_leakage_bits"] = uhsec::num(run.single_block_leakage);
        rep.values["total_leakage_bound_bits"] = uhsec::num(run.total_leakage_bound);
        rep.values["seed_recovered"] = run.seed_recovered;
        std::uint64_t ok = 0;
        for (const auto& b : run.blocks) ok += b.ok;
        rep.values["blocks_ok"] = ok;
        if (run.rate_condition_warning)
          rep.warnings.push_back("rate condition violated: k/n >= R - C_W");
        if (wt_exact_chain) {
          const auto mb = uhsec::multi_block_exact_leakage(cfg, 2, g.budget);
          rep.values["multi_block_leakage_bits"] = uhsec::num(mb.without_seed);
          rep.values["multi_block_leakage_with_seed_bits"] = uhsec::num(mb.with_seed);
          rep.add_check("chain_rule_multi_le_t_x_single", mb.with_seed,
                        2 * mb.single_block + 1e-12,
                        mb.with_seed <= 2 * mb.single_block + 1e-9);
        }
      }
      return emit(rep, g, started);
    }

    if (cmd_bench->parsed()) {
      rep.command = "bench";
      rep.params["kind"] = bench_kind;
      rep.params["l"] = bench_l;
      rep.params["megabytes"] = bench_mb;
      const std::uint64_t total_bits = std::uint64_t(bench_mb * 1024 * 1024) * 8;
      const std::uint64_t blocks = total_bits / bench_l;
      uhsec::CounterRng rng(g.seed);
      std::vector<BitVec> inputs;
      inputs.reserve(std::min<std::uint64_t>(blocks, 4096));
      for (std::size_t i = 0; i < std::min<std::uint64_t>(blocks, 4096); ++i)
        inputs.push_back(uhsec::random_bits(bench_l, rng));
      const double bytes = double(blocks) * double(bench_l) / 8.0;
      std::uint64_t digest = 0;

      if (bench_kind == "field") {
        uhsec::require_valid_length(bench_l);
        const uhsec::Seed s = uhsec::sample_field_seed(bench_l, rng);
        auto run_backend = [&](auto&& mul) {
          const auto t0 = std::chrono::steady_clock::now();
          for (std::uint64_t i = 0; i < blocks; ++i) {
            const BitVec& x = inputs[i % inputs.size()];
            digest ^= mul(s, x).to_uint() + i;
          }
          return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        };
        const double conv_s = run_backend(
            [&](const BitVec& a, const BitVec& x) { return uhsec::gf_mul(a, x).prefix(bench_l / 2); });
        const double school_s = run_backend([&](const BitVec& a, const BitVec& x) {
          return uhsec::gf_mul_schoolbook(a, x).prefix(bench_l / 2);
        });
        rep.values["bytes"] = bytes;
        rep.values["seconds"] = uhsec::num(conv_s);
        rep.values["mbps"] = uhsec::num(bytes / conv_s / (1024 * 1024));
        rep.values["schoolbook_seconds"] = uhsec::num(school_s);
        rep.values["schoolbook_mbps"] = uhsec::num(bytes / school_s / (1024 * 1024));
        rep.values["speedup_vs_schoolbook"] = uhsec::num(school_s / conv_s);
      } else if (bench_kind == "toeplitz") {
        const std::uint32_t k = bench_l / 2;
        const uhsec::Seed s = uhsec::random_bits(bench_l + k - 1, rng);
        const auto t0 = std::chrono::steady_clock::now();
        for (std::uint64_t i = 0; i < blocks; ++i)
          digest ^= uhsec::toeplitz_eval(s, inputs[i % inputs.size()], k).to_uint() + i;
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        rep.values["bytes"] = bytes;
        rep.values["seconds"] = uhsec::num(secs);
        rep.values["mbps"] = uhsec::num(bytes / secs / (1024 * 1024));
      } else {
        throw std::runtime_error("bench: unknown kind '" + bench_kind + "'");
      }
      rep.values["input_digest"] = digest;
      return emit(rep, g, started);
    }

    throw std::runtime_error("no subcommand");
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
