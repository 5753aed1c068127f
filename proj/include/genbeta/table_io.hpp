#pragma once

// Versioned JSON persistence for the zonal and invariant tables, plus the
// canonical serialization of validation reports.  Loaders refuse version
// mismatches: silently consuming stale invariant coefficients is the
// failure mode this guards against.

#include <fstream>
#include <json.hpp>
#include <stdexcept>
#include <string>

#include "genbeta/invariant.hpp"
#include "genbeta/validation.hpp"
#include "genbeta/zonal.hpp"

namespace genbeta {

using ordered_json = nlohmann::ordered_json;

inline constexpr const char* kZonalTableVersion = "genbeta-zonal-v1";

namespace io_detail {

inline ordered_json partition_json(const Partition& p) {
  ordered_json arr = ordered_json::array();
  for (int x : p.parts()) arr.push_back(x);
  return arr;
}

inline Partition partition_from(const ordered_json& j) {
  std::vector<int> parts;
  for (const auto& x : j) parts.push_back(x.get<int>());
  return Partition(std::move(parts));
}

inline ordered_json monovec_json(const MonomialVec& v) {
  ordered_json arr = ordered_json::array();
  for (const auto& [lambda, c] : v)
    arr.push_back(ordered_json{{"p", partition_json(lambda)}, {"c", c}});
  return arr;
}

inline MonomialVec monovec_from(const ordered_json& j) {
  MonomialVec v;
  for (const auto& e : j) v[partition_from(e.at("p"))] = e.at("c").get<double>();
  return v;
}

}  // namespace io_detail

inline ordered_json zonal_to_json(const ZonalTable& t) {
  ordered_json j;
  j["version"] = kZonalTableVersion;
  j["max_degree"] = t.max_degree;
  ordered_json entries = ordered_json::array();
  for (const auto& [kappa, mono] : t.monomial) {
    ordered_json e;
    e["kappa"] = io_detail::partition_json(kappa);
    e["monomial"] = io_detail::monovec_json(mono);
    auto it = t.powersum.find(kappa);
    if (it != t.powersum.end()) e["powersum"] = io_detail::monovec_json(it->second);
    entries.push_back(std::move(e));
  }
  j["entries"] = std::move(entries);
  return j;
}

inline ZonalTable zonal_from_json(const ordered_json& j) {
  if (j.at("version").get<std::string>() != kZonalTableVersion)
    throw std::runtime_error("zonal table version mismatch: expected " +
                             std::string(kZonalTableVersion) + ", file has " +
                             j.at("version").get<std::string>());
  ZonalTable t;
  t.max_degree = j.at("max_degree").get<int>();
  for (const auto& e : j.at("entries")) {
    Partition kappa = io_detail::partition_from(e.at("kappa"));
    t.monomial[kappa] = io_detail::monovec_from(e.at("monomial"));
    if (e.contains("powersum")) t.powersum[kappa] = io_detail::monovec_from(e.at("powersum"));
  }
  return t;
}

inline ordered_json invariant_to_json(const InvariantTable& t) {
  ordered_json j;
  j["version"] = t.version;
  j["max_pair_degree"] = t.max_pair_degree;
  j["max_triple_degree"] = t.max_triple_degree;
  ordered_json entries = ordered_json::array();
  for (const auto& [key, e] : t.entries) {
    ordered_json je;
    ordered_json parts = ordered_json::array();
    for (const Partition& p : key.parts) parts.push_back(io_detail::partition_json(p));
    je["key"] = std::move(parts);
    je["profile"] = e.profile;
    je["m_cal"] = e.m_cal;
    ordered_json basis = ordered_json::array();
    for (const TraceMono& mono : e.gen_basis) {
      ordered_json words = ordered_json::array();
      for (const NWord& w : mono.words) words.push_back(w);
      basis.push_back(std::move(words));
    }
    je["gen_basis"] = std::move(basis);
    ordered_json blocks = ordered_json::array();
    for (const PhiBlock& blk : e.blocks) {
      ordered_json jb;
      jb["phi"] = io_detail::partition_json(blk.phi);
      std::vector<double> q_flat;
      for (int r = 0; r < blk.Q.rows(); ++r)
        for (int c = 0; c < blk.Q.cols(); ++c) q_flat.push_back(blk.Q(r, c));
      jb["Q"] = q_flat;
      std::vector<double> tv(blk.theta_vec.data(),
                             blk.theta_vec.data() + blk.theta_vec.size());
      jb["theta_vec"] = tv;
      jb["theta_sq"] = blk.theta_sq;
      jb["multiplicity"] = blk.multiplicity;
      blocks.push_back(std::move(jb));
    }
    je["blocks"] = std::move(blocks);
    je["residuals"] = ordered_json{{"split", e.split_residual},
                                   {"offblock", e.offblock_residual},
                                   {"restriction", e.restriction_residual},
                                   {"psd_clamp", e.psd_clamp}};
    entries.push_back(std::move(je));
  }
  j["entries"] = std::move(entries);
  return j;
}

inline InvariantTable invariant_from_json(const ordered_json& j) {
  if (j.at("version").get<std::string>() != kInvariantTableVersion)
    throw std::runtime_error("invariant table version mismatch: expected " +
                             std::string(kInvariantTableVersion) + ", file has " +
                             j.at("version").get<std::string>());
  InvariantTable t;
  t.version = j.at("version").get<std::string>();
  t.max_pair_degree = j.at("max_pair_degree").get<int>();
  t.max_triple_degree = j.at("max_triple_degree").get<int>();
  for (const auto& je : j.at("entries")) {
    InvariantKey key;
    for (const auto& p : je.at("key")) key.parts.push_back(io_detail::partition_from(p));
    InvariantEntry e;
    e.profile = je.at("profile").get<std::vector<int>>();
    e.m_cal = je.at("m_cal").get<int>();
    for (const auto& words : je.at("gen_basis")) {
      TraceMono mono;
      for (const auto& w : words) mono.words.push_back(w.get<NWord>());
      e.gen_basis.push_back(std::move(mono));
    }
    e.sym_basis = trace_monomial_basis(e.profile, true);
    const int Bg = static_cast<int>(e.gen_basis.size());
    for (const auto& jb : je.at("blocks")) {
      PhiBlock blk;
      blk.phi = io_detail::partition_from(jb.at("phi"));
      auto q_flat = jb.at("Q").get<std::vector<double>>();
      if (static_cast<int>(q_flat.size()) != Bg * Bg)
        throw std::runtime_error("invariant table: malformed Q block");
      blk.Q.resize(Bg, Bg);
      for (int r = 0; r < Bg; ++r)
        for (int c = 0; c < Bg; ++c) blk.Q(r, c) = q_flat[static_cast<std::size_t>(r * Bg + c)];
      auto tv = jb.at("theta_vec").get<std::vector<double>>();
      blk.theta_vec = Eigen::Map<Eigen::VectorXd>(tv.data(), static_cast<int>(tv.size()));
      blk.theta_sq = jb.at("theta_sq").get<double>();
      blk.multiplicity = jb.at("multiplicity").get<int>();
      e.blocks.push_back(std::move(blk));
    }
    const auto& res = je.at("residuals");
    e.split_residual = res.at("split").get<double>();
    e.offblock_residual = res.at("offblock").get<double>();
    e.restriction_residual = res.at("restriction").get<double>();
    e.psd_clamp = res.at("psd_clamp").get<double>();
    t.entries[key] = std::move(e);
  }
  return t;
}

inline void save_json(const ordered_json& j, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << j.dump(1) << "\n";
}

inline ordered_json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  ordered_json j;
  in >> j;
  return j;
}

// Canonical report serialization.  Runtimes are deliberately omitted so that
// two runs with the same seed produce byte-identical files; the CLI prints
// runtimes on the console instead.
inline ordered_json reports_to_json(const std::vector<CheckReport>& reports,
                                    std::uint64_t seed, const std::string& suite) {
  ordered_json j;
  j["suite"] = suite;
  j["seed"] = seed;
  bool all_pass = true;
  ordered_json arr = ordered_json::array();
  for (const CheckReport& r : reports) {
    all_pass = all_pass && r.pass;
    arr.push_back(ordered_json{{"name", r.name},
                               {"statistic", r.statistic},
                               {"tolerance", r.tolerance},
                               {"pass", r.pass},
                               {"sample_size", r.sample_size},
                               {"check_seed", r.seed},
                               {"detail", r.detail}});
  }
  j["checks"] = std::move(arr);
  j["all_pass"] = all_pass;
  return j;
}

}  // namespace genbeta
