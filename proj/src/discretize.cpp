#include "ndof/discretize.hpp"

#include <cmath>
#include <limits>
#include <ostream>

#include "ndof/constants.hpp"
#include "ndof/error.hpp"

namespace ndof {

double Discretization::total_weight() const {
  double s = 0.0;
  for (double w : weights) s += w;
  return s;
}

double Discretization::wavelength() const { return 2.0 * kPi / k; }

namespace {

void check_inputs(const TriangleMesh& mesh, double k, double density) {
  require(!mesh.empty(), ErrorCode::InvalidArgument, "cannot discretize an empty mesh");
  require(k > 0.0 && std::isfinite(k), ErrorCode::InvalidArgument, "wavenumber must be positive");
  require(density > 0.0 && std::isfinite(density), ErrorCode::InvalidArgument,
          "density must be positive");
}

// Centroids of the n^2 sub-triangles, each carrying area/n^2.
void refine_triangle(const Vec3& a, const Vec3& b, const Vec3& c, int n, std::vector<Vec3>& out) {
  const Vec3 e1 = (b - a) / n, e2 = (c - a) / n;
  for (int i = 0; i < n; ++i)
    for (int j = 0; i + j < n; ++j) {
      out.push_back(a + (i + 1.0 / 3) * e1 + (j + 1.0 / 3) * e2);
      if (i + j < n - 1) out.push_back(a + (i + 2.0 / 3) * e1 + (j + 2.0 / 3) * e2);
    }
}

struct Patch {
  double area = 0.0;
  Vec3 normal = Vec3::Zero();
  std::size_t representative = 0;  // member triangle nearest the patch centroid
};

// Area-weighted Lloyd clustering of triangle centroids into patches of about
// `cell` area. Features are (centroid, beta * normal) so that the two faces
// of a thin wall never share a patch. Seeds come from farthest-point
// sampling, which keeps the result deterministic.
std::vector<Patch> cluster_triangles(const TriangleMesh& mesh, const std::vector<std::size_t>& ids,
                                     double cell) {
  std::vector<Patch> out;
  if (ids.empty()) return out;
  const std::size_t n = ids.size();
  using F6 = Eigen::Matrix<double, 6, 1>;
  const double beta = std::sqrt(cell);
  std::vector<F6> feat(n);
  std::vector<double> area(n);
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    feat[i] << mesh.triangle_centroid(ids[i]), beta * mesh.triangle_normal(ids[i]);
    area[i] = mesh.triangle_area(ids[i]);
    total += area[i];
  }
  const std::size_t k = std::clamp<std::size_t>(
      static_cast<std::size_t>(std::llround(total / cell)), 1, n);

  std::vector<F6> centers;
  centers.reserve(k);
  std::vector<double> dist(n, std::numeric_limits<double>::infinity());
  std::size_t next = 0;
  for (std::size_t c = 0; c < k; ++c) {
    centers.push_back(feat[next]);
    double far = -1.0;
    for (std::size_t i = 0; i < n; ++i) {
      dist[i] = std::min(dist[i], (feat[i] - centers.back()).squaredNorm());
      if (dist[i] > far) {
        far = dist[i];
        next = i;
      }
    }
  }

  std::vector<std::size_t> label(n, 0);
  for (int iter = 0; iter < 12; ++iter) {
    bool changed = false;
#pragma omp parallel for schedule(static) reduction(|| : changed)
    for (long i = 0; i < static_cast<long>(n); ++i) {
      const auto iu = static_cast<std::size_t>(i);
      double best = std::numeric_limits<double>::infinity();
      std::size_t arg = 0;
      for (std::size_t c = 0; c < k; ++c) {
        const double d2 = (feat[iu] - centers[c]).squaredNorm();
        if (d2 < best) {
          best = d2;
          arg = c;
        }
      }
      if (arg != label[iu] || iter == 0) changed = true;
      label[iu] = arg;
    }
    if (!changed) break;
    std::vector<F6> sum(k, F6::Zero());
    std::vector<double> mass(k, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      sum[label[i]] += area[i] * feat[i];
      mass[label[i]] += area[i];
    }
    for (std::size_t c = 0; c < k; ++c)
      if (mass[c] > 0.0) centers[c] = sum[c] / mass[c];
  }

  out.resize(k);
  std::vector<Vec3> centroid(k, Vec3::Zero());
  for (std::size_t i = 0; i < n; ++i) {
    Patch& p = out[label[i]];
    p.area += area[i];
    p.normal += area[i] * mesh.triangle_normal(ids[i]);
    centroid[label[i]] += area[i] * feat[i].head<3>();
  }
  std::vector<double> best(k, std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t c = label[i];
    const double d2 = (feat[i].head<3>() - centroid[c] / out[c].area).squaredNorm();
    if (d2 < best[c]) {
      best[c] = d2;
      out[c].representative = ids[i];
    }
  }
  std::erase_if(out, [](const Patch& p) { return p.area <= 0.0; });
  for (Patch& p : out) {
    if (p.normal.norm() < 1e-12 * p.area) p.normal = mesh.triangle_normal(p.representative);
    p.normal.normalize();
  }
  return out;
}

}  // namespace

Discretization sample_mesh(const TriangleMesh& mesh, double k, double density,
                           const LossModel& loss) {
  check_inputs(mesh, k, density);
  require(loss.value_normalized > 0.0, ErrorCode::InvalidArgument, "loss must be positive");
  Discretization d;
  d.k = k;
  d.loss = loss;
  d.origin = mesh.circumcenter();
  const double lambda = d.wavelength();
  const double cell = lambda * lambda / density;

  auto emit = [&](const Vec3& p, double w, const Vec3& normal, const Vec3& edge) {
    Vec3 t1 = edge - edge.dot(normal) * normal;
    if (t1.norm() < 1e-9 * edge.norm()) t1 = normal.unitOrthogonal();
    t1.normalize();
    d.points.push_back(p);
    d.weights.push_back(w);
    d.tangent1.push_back(t1);
    d.tangent2.push_back(normal.cross(t1));
  };

  // Triangles much smaller than a cell are pooled and clustered below.
  std::vector<std::size_t> small;
  std::vector<Vec3> pts;
  double area = 0.0;
  for (std::size_t t = 0; t < mesh.triangles().size(); ++t) {
    const auto& tri = mesh.triangles()[t];
    const Vec3& a = mesh.vertices()[tri[0]];
    const Vec3& b = mesh.vertices()[tri[1]];
    const Vec3& c = mesh.vertices()[tri[2]];
    const double ta = mesh.triangle_area(t);
    const Vec3 normal = mesh.triangle_normal(t);
    area += ta;
    if (ta < 0.25 * cell) {
      small.push_back(t);
      continue;
    }
    const int n = std::max(1, static_cast<int>(std::ceil(std::sqrt(ta / cell))));
    pts.clear();
    refine_triangle(a, b, c, n, pts);
    const double w = ta / (static_cast<double>(n) * n);
    for (const Vec3& p : pts) emit(p, w, normal, b - a);
  }

  for (const Patch& p : cluster_triangles(mesh, small, cell)) {
    const auto& tri = mesh.triangles()[p.representative];
    emit(mesh.triangle_centroid(p.representative), p.area, p.normal,
         mesh.vertices()[tri[1]] - mesh.vertices()[tri[0]]);
  }

  d.achieved_density = static_cast<double>(d.points.size()) * lambda * lambda / area;
  d.low_density = density < kMinDensity || d.achieved_density < kMinDensity;
  return d;
}

Discretization sample_volume(const TriangleMesh& mesh, double k, int layers, double density,
                             const LossModel& loss) {
  check_inputs(mesh, k, density);
  require(layers >= 1, ErrorCode::InvalidArgument, "need at least one layer");
  require(loss.kind == LossKind::VolumeResistivity, ErrorCode::KindMismatch,
          "volume sampling needs a volume loss model");
  Discretization surf = sample_mesh(mesh, k, density, LossModel::surface(1.0));
  Discretization d;
  d.k = k;
  d.loss = loss;
  d.origin = surf.origin;
  d.directions_per_point = 3;
  d.approximate_volume = true;
  d.layers = layers;
  d.achieved_density = surf.achieved_density;
  d.low_density = surf.low_density;
  for (int layer = 0; layer < layers; ++layer) {
    const double s = (layer + 0.5) / layers;
    const double lo = static_cast<double>(layer) / layers, hi = (layer + 1.0) / layers;
    const double frac = hi * hi * hi - lo * lo * lo;
    for (std::size_t i = 0; i < surf.size(); ++i) {
      const Vec3 rel = surf.points[i] - surf.origin;
      const Vec3 n = surf.tangent1[i].cross(surf.tangent2[i]);
      // Cone from the origin to the patch has volume w |r.n|/3; the layer
      // between scale factors lo and hi holds hi^3 - lo^3 of it.
      const double cone = surf.weights[i] * std::abs(rel.dot(n)) / 3.0;
      d.points.push_back(surf.origin + s * rel);
      d.weights.push_back(frac * cone);
      d.tangent1.push_back(surf.tangent1[i]);
      d.tangent2.push_back(surf.tangent2[i]);
    }
  }
  return d;
}

double edge_for_density(double wavelength, double density) {
  require(wavelength > 0.0 && density > 0.0, ErrorCode::InvalidArgument,
          "wavelength and density must be positive");
  // Equilateral triangle of area lambda^2/density.
  return wavelength * std::sqrt(4.0 / (std::sqrt(3.0) * density));
}

Eigen::VectorXd loss_diagonal(const Discretization& disc) {
  require(!disc.points.empty(), ErrorCode::InvalidArgument, "empty discretization");
  require(disc.loss.value_normalized > 0.0, ErrorCode::InvalidArgument,
          "resistivity must be positive");
  // R_s = v eta0 for sheets; rho_r = v eta0 / k for bulk.
  const double r = disc.loss.kind == LossKind::SurfaceResistivity
                       ? disc.loss.value_normalized * kEta0
                       : disc.loss.value_normalized * kEta0 / disc.k;
  Eigen::VectorXd diag(disc.unknowns());
  const int dpp = disc.directions_per_point;
  for (std::size_t j = 0; j < disc.size(); ++j)
    for (int s = 0; s < dpp; ++s)
      diag[static_cast<Eigen::Index>(j) * dpp + s] = r * disc.weights[j];
  return diag;
}

Eigen::MatrixXcd loss_matrix(const Discretization& disc) {
  return loss_diagonal(disc).cast<cdouble>().asDiagonal();
}

Eigen::VectorXd gram_diagonal(const Discretization& disc) {
  Eigen::VectorXd g(disc.unknowns());
  const int dpp = disc.directions_per_point;
  for (std::size_t j = 0; j < disc.size(); ++j)
    for (int s = 0; s < dpp; ++s) g[static_cast<Eigen::Index>(j) * dpp + s] = disc.weights[j];
  return g;
}

Eigen::MatrixXcd wave_matrix(const Discretization& disc, int lmax) {
  require(lmax >= 1, ErrorCode::InvalidArgument, "lmax must be at least 1");
  require(!disc.points.empty(), ErrorCode::InvalidArgument, "empty discretization");
  const auto nmodes = static_cast<Eigen::Index>(mode_count(lmax));
  const int dpp = disc.directions_per_point;
  Eigen::MatrixXcd U(nmodes, disc.unknowns());
  const double scale = disc.k * std::sqrt(kEta0);
  const auto npts = static_cast<long>(disc.size());
#pragma omp parallel for schedule(dynamic, 16)
  for (long j = 0; j < npts; ++j) {
    const auto ju = static_cast<std::size_t>(j);
    const auto u = regular_waves(disc.points[ju] - disc.origin, disc.k, lmax);
    const Vec3 dirs[3] = {disc.tangent1[ju], disc.tangent2[ju],
                          disc.tangent1[ju].cross(disc.tangent2[ju])};
    const double w = scale * disc.weights[ju];
    for (int s = 0; s < dpp; ++s) {
      const Eigen::Vector3cd t = dirs[s].cast<cdouble>();
      const Eigen::Index col = j * dpp + s;
      for (Eigen::Index n = 0; n < nmodes; ++n)
        U(n, col) = w * t.dot(u[static_cast<std::size_t>(n)].conjugate());
    }
  }
  return U;
}

Eigen::MatrixXcd radiation_matrix(const Discretization& disc, int lmax) {
  const Eigen::MatrixXcd U = wave_matrix(disc, lmax);
  Eigen::MatrixXcd R0 = U.adjoint() * U;
  return 0.5 * (R0 + R0.adjoint());
}

ResistancePair assemble_pair(const Discretization& disc, int lmax) {
  return {radiation_matrix(disc, lmax), loss_matrix(disc)};
}

RadiationModes discretized_modes(const Discretization& disc, int lmax, double circumradius) {
  return radiation_modes_factored(wave_matrix(disc, lmax), loss_diagonal(disc),
                                  disc.k * circumradius, disc.wavelength());
}

Eigen::VectorXcd sample_current(const Discretization& disc,
                                const std::vector<Eigen::Vector3cd>& field) {
  require(field.size() == disc.size(), ErrorCode::DimensionMismatch,
          "one field value per sample point");
  const int dpp = disc.directions_per_point;
  Eigen::VectorXcd I(disc.unknowns());
  for (std::size_t j = 0; j < disc.size(); ++j) {
    const Vec3 dirs[3] = {disc.tangent1[j], disc.tangent2[j],
                          disc.tangent1[j].cross(disc.tangent2[j])};
    for (int s = 0; s < dpp; ++s)
      I[static_cast<Eigen::Index>(j) * dpp + s] = dirs[s].cast<cdouble>().dot(field[j]);
  }
  return I;
}

void write_discretization_csv(std::ostream& out, const Discretization& disc) {
  out.precision(17);
  out << "x,y,z,weight,t1x,t1y,t1z,t2x,t2y,t2z\n";
  for (std::size_t j = 0; j < disc.size(); ++j) {
    const Vec3& p = disc.points[j];
    const Vec3& a = disc.tangent1[j];
    const Vec3& b = disc.tangent2[j];
    out << p.x() << ',' << p.y() << ',' << p.z() << ',' << disc.weights[j] << ',' << a.x() << ','
        << a.y() << ',' << a.z() << ',' << b.x() << ',' << b.y() << ',' << b.z() << '\n';
  }
}

}  // namespace ndof
