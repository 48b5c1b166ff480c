#include "specunc/io.hpp"

#include <fstream>

#include "specunc/errors.hpp"

namespace specunc::io {

namespace {

// Translates nlohmann type/key errors into InputError so callers see one
// error family for malformed files.
template <class F>
auto guarded(const char* what, F&& f) {
  try {
    return f();
  } catch (const json::exception& e) {
    throw InputError(std::string(what) + ": " + e.what());
  }
}

std::vector<Complex> complex_list(const json& j, const char* what) {
  if (!j.is_array()) throw InputError(std::string(what) + ": expected an array");
  std::vector<Complex> out;
  out.reserve(j.size());
  for (const auto& e : j) out.push_back(complex_from_json(e));
  return out;
}

json complex_list_to_json(const std::vector<Complex>& v) {
  json out = json::array();
  for (const auto& z : v) out.push_back(to_json(z));
  return out;
}

}  // namespace

json to_json(Complex z) { return json::array({z.real(), z.imag()}); }

Complex complex_from_json(const json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
    return {j[0].get<double>(), j[1].get<double>()};
  }
  throw InputError("complex value must be a number or [re, im]");
}

json to_json(const SpectralMeasure& mu) {
  json atoms = json::array();
  for (const auto& a : mu.atoms()) atoms.push_back({{"theta", a.theta}, {"mass", a.mass}});
  return {{"grid_size", mu.grid_size()}, {"density", mu.density()}, {"atoms", atoms}};
}

SpectralMeasure measure_from_json(const json& j) {
  return guarded("measure file", [&] {
    const int n = j.at("grid_size").get<int>();
    auto density = j.at("density").get<std::vector<double>>();
    if (static_cast<int>(density.size()) != n) {
      throw InputError("measure file: density length differs from grid_size");
    }
    std::vector<Atom> atoms;
    if (j.contains("atoms")) {
      for (const auto& a : j.at("atoms")) atoms.push_back({a.at("theta").get<double>(), a.at("mass").get<double>()});
    }
    return SpectralMeasure(std::move(density), std::move(atoms));
  });
}

json to_json(const CovarianceSequence& c) { return {{"c", complex_list_to_json(c.values())}}; }

CovarianceSequence covariance_from_json(const json& j) {
  return guarded("covariance file", [&] { return CovarianceSequence(complex_list(j.at("c"), "covariance file")); });
}

json to_json(const PickData& p) {
  return {{"nodes", complex_list_to_json(p.nodes())}, {"values", complex_list_to_json(p.values())}};
}

PickData pick_from_json(const json& j) {
  return guarded("pick file", [&] {
    return PickData(complex_list(j.at("nodes"), "pick file"), complex_list(j.at("values"), "pick file"));
  });
}

json to_json(const TestKernel& g) {
  json out = {{"values", g.values()}};
  if (g.lipschitz()) out["lipschitz"] = *g.lipschitz();
  return out;
}

TestKernel kernel_from_json(const json& j) {
  return guarded("kernel file", [&] {
    std::optional<double> lip;
    if (j.contains("lipschitz") && !j.at("lipschitz").is_null()) lip = j.at("lipschitz").get<double>();
    return TestKernel(j.at("values").get<std::vector<double>>(), lip);
  });
}

json to_json(const FilterBank& bank) { return {{"poles", complex_list_to_json(bank.poles())}}; }

FilterBank filter_bank_from_json(const json& j) {
  return guarded("filter bank file", [&] { return FilterBank(complex_list(j.at("poles"), "filter bank file")); });
}

json to_json(const DiameterReport& r) {
  json per_point = json::array();
  for (const auto& p : r.per_point) per_point.push_back({p.z.real(), p.z.imag(), p.diameter});
  json extremal = json::array();
  for (const auto& m : r.extremal) extremal.push_back(to_json(m));
  return {{"rho", r.rho},
          {"argmax_z", to_json(r.argmax_z)},
          {"extremal_separation", r.extremal_separation},
          {"per_point", per_point},
          {"extremal", extremal}};
}

json to_json(const TuneResult& r) {
  return {{"poles", complex_list_to_json(r.bank.poles())},
          {"bound", r.bound},
          {"initial_bound", r.initial_bound},
          {"objective_trace", r.objective_trace}};
}

json read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw InputError(path + ": " + e.what());
  }
}

void write_file(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path);
  out << j.dump(2) << '\n';
}

}  // namespace specunc::io
