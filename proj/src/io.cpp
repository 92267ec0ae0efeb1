#include "quasibasis/io.hpp"

#include <fstream>
#include <sstream>

namespace qb::io {
namespace {

[[noreturn]] void fail(const std::string& what) { throw Error(ErrorKind::Io, what); }

int read_dimension(const json& j, const char* what) {
  if (!j.is_object() || !j.contains("dimension") || !j["dimension"].is_number_integer()) {
    fail(std::string(what) + ": missing integer \"dimension\"");
  }
  const int d = j["dimension"].get<int>();
  if (d < 2) fail(std::string(what) + ": dimension must be at least 2");
  return d;
}

Complex complex_from_json(const json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    fail("expected a complex number as [re, im]");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

}  // namespace

json matrix_to_json(const CMatrix& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back({m(r, c).real(), m(r, c).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

CMatrix matrix_from_json(const json& j, int dim) {
  if (!j.is_array() || static_cast<int>(j.size()) != dim) fail("matrix: expected " + std::to_string(dim) + " rows");
  CMatrix m(dim, dim);
  for (int r = 0; r < dim; ++r) {
    const auto& row = j[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<int>(row.size()) != dim) {
      fail("matrix: row " + std::to_string(r) + " must have " + std::to_string(dim) + " entries");
    }
    for (int c = 0; c < dim; ++c) m(r, c) = complex_from_json(row[static_cast<std::size_t>(c)]);
  }
  return m;
}

json basis_to_json(const MeasureBasis& basis) {
  json elements = json::array();
  for (const auto& e : basis.elements()) elements.push_back(matrix_to_json(e.matrix()));
  return {{"dimension", basis.dim()}, {"label", basis.label()}, {"elements", std::move(elements)}};
}

OperatorList operator_list_from_json(const json& j) {
  OperatorList out;
  out.dim = read_dimension(j, "basis");
  if (j.contains("label") && j["label"].is_string()) out.label = j["label"].get<std::string>();
  if (!j.contains("elements") || !j["elements"].is_array()) fail("basis: missing \"elements\" array");
  for (const auto& e : j["elements"]) out.elements.push_back(HermitianOperator::from_matrix(matrix_from_json(e, out.dim)));
  return out;
}

MeasureBasis basis_from_json(const json& j, double tol) {
  auto list = operator_list_from_json(j);
  return MeasureBasis::create(std::move(list.elements), std::move(list.label), tol);
}

json fiducial_to_json(const Fiducial& f) {
  json amps = json::array();
  for (Eigen::Index i = 0; i < f.amplitudes.size(); ++i) amps.push_back({f.amplitudes[i].real(), f.amplitudes[i].imag()});
  return {{"dimension", f.dim()}, {"amplitudes", std::move(amps)}};
}

Fiducial fiducial_from_json(const json& j) {
  const int d = read_dimension(j, "fiducial");
  if (!j.contains("amplitudes") || !j["amplitudes"].is_array() || static_cast<int>(j["amplitudes"].size()) != d) {
    fail("fiducial: \"amplitudes\" must hold d complex values");
  }
  CVector v(d);
  for (int i = 0; i < d; ++i) v[i] = complex_from_json(j["amplitudes"][static_cast<std::size_t>(i)]);
  return Fiducial::create(std::move(v));
}

json state_to_json(const HermitianOperator& rho) {
  return {{"dimension", rho.dim()}, {"matrix", matrix_to_json(rho.matrix())}};
}

HermitianOperator state_from_json(const json& j) {
  const int d = read_dimension(j, "state");
  if (!j.contains("matrix")) fail("state: missing \"matrix\"");
  return HermitianOperator::from_matrix(matrix_from_json(j["matrix"], d));
}

json vector_to_json(const RVector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

json real_matrix_to_json(const RMatrix& m) {
  json out = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) out.push_back(vector_to_json(m.row(r).transpose()));
  return out;
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    fail("cannot parse " + path.string() + ": " + e.what());
  }
}

void write_json_file(const std::filesystem::path& path, const json& j) {
  std::ofstream out(path);
  if (!out) fail("cannot write " + path.string());
  out << j.dump(2) << '\n';
  if (!out) fail("write failed for " + path.string());
}

}  // namespace qb::io
