#include "hetsense/model_io.hpp"

#include <fstream>

#include <json.hpp>

#include "hetsense/error.hpp"
#include "hetsense/matrix_io.hpp"

namespace hetsense {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr int kFormatVersion = 1;

void put(const fs::path& dir, const std::string& name, const Eigen::MatrixXd& m, double dt) {
  write_matrix(dir / (name + ".bin"), {m, dt}, MatrixFormat::Binary);
}

void put_complex(const fs::path& dir, const std::string& name, const Eigen::MatrixXcd& m,
                 double dt) {
  put(dir, name + "_re", m.real(), dt);
  put(dir, name + "_im", m.imag(), dt);
}

Eigen::MatrixXd get(const fs::path& dir, const std::string& name) {
  const fs::path p = dir / (name + ".bin");
  require(fs::exists(p), "container is missing " + p.filename().string());
  return read_matrix(p).data;
}

Eigen::MatrixXcd get_complex(const fs::path& dir, const std::string& name) {
  const Eigen::MatrixXd re = get(dir, name + "_re");
  const Eigen::MatrixXd im = get(dir, name + "_im");
  require(re.rows() == im.rows() && re.cols() == im.cols(),
          name + " real/imaginary shapes differ");
  Eigen::MatrixXcd out(re.rows(), re.cols());
  out.real() = re;
  out.imag() = im;
  return out;
}

json base_meta(const std::string& kind, double dt) {
  return {{"kind", kind},
          {"format_version", kFormatVersion},
          {"library_version", kLibraryVersion},
          {"dt", dt}};
}

void write_meta(const fs::path& dir, const json& meta) {
  std::ofstream out(dir / "meta.json");
  require(bool(out), "cannot write " + (dir / "meta.json").string());
  out << meta.dump(2) << '\n';
}

json read_meta(const fs::path& dir) {
  std::ifstream in(dir / "meta.json");
  require(bool(in), "no meta.json in " + dir.string());
  json meta;
  try {
    in >> meta;
  } catch (const json::exception& e) {
    throw Error("malformed meta.json: " + std::string(e.what()));
  }
  require(meta.value("format_version", 0) == kFormatVersion,
          "unsupported container format version");
  return meta;
}

void prepare(const fs::path& dir) {
  fs::create_directories(dir);
}

}  // namespace

std::string container_kind(const fs::path& dir) {
  return read_meta(dir).at("kind").get<std::string>();
}

void save_model(const fs::path& dir, const DmdModel& m) {
  prepare(dir);
  json meta = base_meta("dmd_model", m.dt);
  meta["rank"] = m.rank();
  meta["dimension"] = m.dimension();
  meta["ordering"] = kOrderingConvention;
  meta["has_svd"] = m.svd_u.size() > 0;
  put_complex(dir, "modes", m.modes, m.dt);
  put_complex(dir, "eigenvalues", m.eigenvalues, m.dt);
  put_complex(dir, "amplitudes", m.amplitudes, m.dt);
  if (m.svd_u.size() > 0) {
    put(dir, "svd_u", m.svd_u, m.dt);
    put(dir, "svd_sigma", m.svd_sigma, m.dt);
    put(dir, "svd_w", m.svd_w, m.dt);
  }
  write_meta(dir, meta);
}

DmdModel load_model(const fs::path& dir) {
  const json meta = read_meta(dir);
  require(meta.at("kind") == "dmd_model", dir.string() + " does not hold a DMD model");
  DmdModel m;
  m.dt = meta.at("dt").get<double>();
  m.modes = get_complex(dir, "modes");
  m.eigenvalues = get_complex(dir, "eigenvalues").col(0);
  m.amplitudes = get_complex(dir, "amplitudes").col(0);
  if (meta.value("has_svd", false)) {
    m.svd_u = get(dir, "svd_u");
    m.svd_sigma = get(dir, "svd_sigma").col(0);
    m.svd_w = get(dir, "svd_w");
  }
  require(m.modes.cols() == m.eigenvalues.size() && m.amplitudes.size() == m.eigenvalues.size(),
          "model container arrays have inconsistent sizes");
  return m;
}

void save_state(const fs::path& dir, const OnlineState& state) {
  prepare(dir);
  if (const auto* g = std::get_if<GeneralOnlineState>(&state)) {
    json meta = base_meta("general_state", g->dt);
    meta["policy"] = {{"kind", g->policy.kind == RankPolicy::Kind::Fixed ? "fixed" : "relative"},
                      {"tolerance", g->policy.tolerance},
                      {"rank", g->policy.rank}};
    meta["time_stride"] = g->time_stride;
    put(dir, "u", g->u, g->dt);
    put(dir, "sigma", g->sigma, g->dt);
    put(dir, "w", g->w, g->dt);
    put(dir, "y", g->y, g->dt);
    write_meta(dir, meta);
  } else {
    const auto& l = std::get<LongTermOnlineState>(state);
    json meta = base_meta("longterm_state", l.dt);
    meta["gamma"] = l.gamma;
    put(dir, "a", l.a, l.dt);
    put(dir, "s", l.s, l.dt);
    put(dir, "last_snapshot", l.last_snapshot, l.dt);
    write_meta(dir, meta);
  }
}

OnlineState load_state(const fs::path& dir) {
  const json meta = read_meta(dir);
  const std::string kind = meta.at("kind").get<std::string>();
  if (kind == "general_state") {
    GeneralOnlineState g;
    g.dt = meta.at("dt").get<double>();
    const json& p = meta.at("policy");
    g.policy = p.at("kind") == "fixed" ? RankPolicy::fixed(p.at("rank").get<Index>())
                                       : RankPolicy::relative(p.at("tolerance").get<double>());
    g.time_stride = meta.value("time_stride", 1);
    g.u = get(dir, "u");
    g.sigma = get(dir, "sigma").col(0);
    g.w = get(dir, "w");
    g.y = get(dir, "y");
    return g;
  }
  if (kind == "longterm_state") {
    LongTermOnlineState l;
    l.dt = meta.at("dt").get<double>();
    l.gamma = meta.at("gamma").get<double>();
    l.a = get(dir, "a");
    l.s = get(dir, "s");
    l.last_snapshot = get(dir, "last_snapshot").col(0);
    return l;
  }
  throw Error(dir.string() + " holds a '" + kind + "', not an online state");
}

}  // namespace hetsense
