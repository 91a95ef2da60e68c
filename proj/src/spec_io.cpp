#include "owshift/spec_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace ows {

namespace {

std::string at(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }
std::string at(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

const Json& field(const Json& obj, const std::string& path, const std::string& key) {
  if (!obj.is_object()) throw SpecError(path.empty() ? "<document>" : path, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) throw SpecError(at(path, key), "missing field");
  return *it;
}

double number(const Json& v, const std::string& path) {
  if (!v.is_number()) throw SpecError(path, "expected a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw SpecError(path, "expected a finite number");
  return d;
}

Index integer(const Json& v, const std::string& path) {
  if (!v.is_number_integer()) throw SpecError(path, "expected an integer");
  return v.get<Index>();
}

const Json& array(const Json& v, const std::string& path) {
  if (!v.is_array()) throw SpecError(path, "expected an array");
  return v;
}

Matrix matrix(const Json& v, Index d, const std::string& path) {
  array(v, path);
  if (static_cast<Index>(v.size()) != d * d)
    throw SpecError(path, "expected " + std::to_string(d * d) + " [re, im] entries (row-major), got " +
                              std::to_string(v.size()));
  Matrix m(d, d);
  for (std::size_t i = 0; i < v.size(); ++i) {
    const std::string p = at(path, i);
    const Json& e = array(v[i], p);
    if (e.size() != 2) throw SpecError(p, "expected a [re, im] pair");
    m(static_cast<Index>(i) / d, static_cast<Index>(i) % d) = Complex(number(e[0], at(p, 0)), number(e[1], at(p, 1)));
  }
  return m;
}

std::vector<Matrix> matrices(const Json& v, Index d, const std::string& path) {
  array(v, path);
  std::vector<Matrix> out;
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(matrix(v[i], d, at(path, i)));
  return out;
}

std::vector<double> reals(const Json& v, const std::string& path) {
  array(v, path);
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(number(v[i], at(path, i)));
  return out;
}

Index matrix_dim(const Json& doc) {
  const Index d = integer(field(doc, "", "dim"), "dim");
  if (d < 1 || d > 64) throw SpecError("dim", "must be in [1, 64]");
  return d;
}

TailKind tail_kind(const Json& tail, const std::string& path) {
  const Json& k = field(tail, path, "kind");
  if (k == "constant") return TailKind::Constant;
  if (k == "periodic") return TailKind::Periodic;
  throw SpecError(at(path, "kind"), "expected \"constant\" or \"periodic\"");
}

Json pair_of(Complex c) { return Json::array({c.real(), c.imag()}); }

Json matrix_json(const Matrix& m) {
  Json out = Json::array();
  for (Index i = 0; i < m.rows(); ++i)
    for (Index j = 0; j < m.cols(); ++j) out.push_back(pair_of(m(i, j)));
  return out;
}

}  // namespace

WeightSpec spec_from_json(const Json& doc) {
  if (!doc.is_object()) throw SpecError("<document>", "expected an object");
  const Json& b = field(doc, "", "backend");
  if (!b.is_string()) throw SpecError("backend", "expected a string");
  const auto backend = backend_from_string(b.get<std::string>());
  if (!backend) throw SpecError("backend", "unknown backend \"" + b.get<std::string>() + "\"");
  const Json& data = field(doc, "", "data");
  if (!data.is_object()) throw SpecError("data", "expected an object");

  std::optional<DeclaredBounds> bounds;
  if (auto it = doc.find("declared_bounds"); it != doc.end() && !it->is_null()) {
    bounds = DeclaredBounds{number(field(*it, "declared_bounds", "sup_norm"), "declared_bounds.sup_norm"),
                            number(field(*it, "declared_bounds", "sup_inverse_norm"),
                                   "declared_bounds.sup_inverse_norm")};
  }

  WeightData wd;
  switch (*backend) {
    case Backend::ConstantMatrix: {
      const Index d = matrix_dim(doc);
      wd = ConstantMatrixData{matrix(field(data, "data", "matrix"), d, "data.matrix")};
      break;
    }
    case Backend::PeriodicMatrices: {
      const Index d = matrix_dim(doc);
      wd = PeriodicMatricesData{matrices(field(data, "data", "matrices"), d, "data.matrices")};
      break;
    }
    case Backend::ListedMatricesWithTail: {
      const Index d = matrix_dim(doc);
      ListedMatricesData l;
      l.listed = matrices(field(data, "data", "matrices"), d, "data.matrices");
      const Json& tail = field(data, "data", "tail");
      l.tail = tail_kind(tail, "data.tail");
      if (l.tail == TailKind::Periodic) l.tail_period = integer(field(tail, "data.tail", "period"), "data.tail.period");
      wd = std::move(l);
      break;
    }
    case Backend::ConstantDiagonal: {
      const Index d = matrix_dim(doc);
      auto entries = reals(field(data, "data", "diagonal"), "data.diagonal");
      if (static_cast<Index>(entries.size()) != d)
        throw SpecError("data.diagonal", "expected " + std::to_string(d) + " entries");
      wd = ConstantDiagonalData{std::move(entries)};
      break;
    }
    case Backend::BilateralShiftScalar: {
      if (auto it = doc.find("dim"); it != doc.end() && !(*it == "l2(Z)" || *it == 0))
        throw SpecError("dim", "the bilateral backend takes dim \"l2(Z)\"");
      BilateralShiftData bd;
      const Json& blocks = array(field(data, "data", "blocks"), "data.blocks");
      for (std::size_t i = 0; i < blocks.size(); ++i) {
        const std::string p = at("data.blocks", i);
        bd.blocks.push_back({number(field(blocks[i], p, "value"), at(p, "value")),
                             integer(field(blocks[i], p, "length"), at(p, "length"))});
      }
      if (auto it = data.find("mirror"); it != data.end()) {
        if (!it->is_boolean()) throw SpecError("data.mirror", "expected a boolean");
        bd.mirror = it->get<bool>();
      }
      wd = std::move(bd);
      break;
    }
    case Backend::ScalarSequence: {
      if (auto it = doc.find("dim"); it != doc.end() && !(*it == 1))
        throw SpecError("dim", "scalar sequences have dim 1");
      ScalarSequenceData sd;
      sd.weights = reals(field(data, "data", "weights"), "data.weights");
      const Json& tail = field(data, "data", "tail");
      sd.tail = tail_kind(tail, "data.tail");
      if (sd.tail == TailKind::Constant) sd.tail_value = number(field(tail, "data.tail", "value"), "data.tail.value");
      wd = std::move(sd);
      break;
    }
  }
  return WeightSpec(std::move(wd), bounds);
}

WeightSpec parse_spec(const std::string& text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw SpecError("<document>", std::string("invalid JSON: ") + e.what());
  }
  return spec_from_json(doc);
}

WeightSpec load_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SpecError("<file>", "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_spec(ss.str());
}

Json spec_to_json(const WeightSpec& spec) {
  Json doc;
  doc["backend"] = std::string(to_string(spec.backend()));
  if (spec.backend() == Backend::BilateralShiftScalar)
    doc["dim"] = "l2(Z)";
  else
    doc["dim"] = spec.dim();
  Json data = Json::object();
  struct V {
    Json& data;
    void operator()(const ConstantMatrixData& d) const { data["matrix"] = matrix_json(d.t); }
    void operator()(const PeriodicMatricesData& d) const {
      Json a = Json::array();
      for (const auto& m : d.period) a.push_back(matrix_json(m));
      data["matrices"] = a;
    }
    void operator()(const ListedMatricesData& d) const {
      Json a = Json::array();
      for (const auto& m : d.listed) a.push_back(matrix_json(m));
      data["matrices"] = a;
      if (d.tail == TailKind::Constant)
        data["tail"] = {{"kind", "constant"}};
      else
        data["tail"] = {{"kind", "periodic"}, {"period", d.tail_period}};
    }
    void operator()(const ConstantDiagonalData& d) const { data["diagonal"] = d.entries; }
    void operator()(const BilateralShiftData& d) const {
      Json a = Json::array();
      for (const auto& b : d.blocks) a.push_back({{"value", b.value}, {"length", b.length}});
      data["blocks"] = a;
      data["mirror"] = d.mirror;
    }
    void operator()(const ScalarSequenceData& d) const {
      data["weights"] = d.weights;
      if (d.tail == TailKind::Constant)
        data["tail"] = {{"kind", "constant"}, {"value", d.tail_value}};
      else
        data["tail"] = {{"kind", "periodic"}};
    }
  };
  std::visit(V{data}, spec.data());
  doc["data"] = data;
  if (const auto& b = spec.declared_bounds())
    doc["declared_bounds"] = {{"sup_norm", b->sup_norm}, {"sup_inverse_norm", b->sup_inverse_norm}};
  return doc;
}

void save_spec(const std::string& path, const WeightSpec& spec) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  out << spec_to_json(spec).dump(2) << "\n";
}

}  // namespace ows
