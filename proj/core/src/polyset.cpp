#include "polyset.hpp"

#include <cmath>
#include <cstring>
#include <stdexcept>

// Orthonormal polynomials on the reference simplices, evaluated through
// three-term recurrences in the original coordinates. Each recurrence has
// polynomial coefficients of degree <= 2, so differentiating it with the
// Leibniz rule closes after at most two lower derivative orders; this gives
// exact derivatives of any order without leaving the recurrence framework
// (and without the collapse-point singularities of the (a,b,c) coordinates).

namespace ftc::polyset {

namespace {

// Coefficients of the three-term recurrence for Jacobi P_q^{(a,0)}:
// P_q = (A x + B) P_{q-1} - C P_{q-2}. Valid for q >= 1 with P_{-1} = 0.
struct JacobiCoeffs {
  double A, B, C;
};

JacobiCoeffs jacobi_coeffs(int q, int a) {
  const double denom = 2.0 * q * (q + a) * (2 * q + a - 2);
  JacobiCoeffs c;
  c.A = (2 * q + a - 1.0) * (2 * q + a) * (2 * q + a - 2) / denom;
  c.B = (2 * q + a - 1.0) * a * a / denom;
  c.C = 2.0 * (q + a - 1) * (q - 1) * (2 * q + a) / denom;
  return c;
}

// Derivative workspace for one point: table[poly][kbox], where kbox runs
// over the box of derivative orders (0..KX) x (0..KY) x (0..KZ).
class Workspace {
public:
  Workspace(int npolys, int kx, int ky, int kz)
      : nx_(kx + 1), ny_(ky + 1), nz_(kz + 1), box_(nx_ * ny_ * nz_),
        data_(static_cast<std::size_t>(npolys) * box_, 0.0) {}

  void clear() { std::memset(data_.data(), 0, data_.size() * sizeof(double)); }

  double* poly(int id) { return data_.data() + static_cast<std::size_t>(id) * box_; }

  // Value of D^(ax,ay,az) of poly id; out-of-box negative orders are zero.
  double get(int id, int ax, int ay, int az) const {
    if (ax < 0 || ay < 0 || az < 0) return 0.0;
    return data_[static_cast<std::size_t>(id) * box_ + kidx(ax, ay, az)];
  }

  int kidx(int ax, int ay, int az) const { return (ax * ny_ + ay) * nz_ + az; }
  int nx() const { return nx_; }
  int ny() const { return ny_; }
  int nz() const { return nz_; }

private:
  int nx_, ny_, nz_, box_;
  std::vector<double> data_;
};

void tabulate_interval(int n, std::array<int, 3> deriv, const std::vector<Point>& pts,
                       std::vector<double>& out) {
  const int npolys = n + 1;
  const int KX = deriv[0];
  Workspace w(npolys, KX, 0, 0);
  for (std::size_t ipt = 0; ipt < pts.size(); ++ipt) {
    const double x = pts[ipt][0];
    const double t = 2.0 * x - 1.0;
    w.clear();
    w.poly(0)[w.kidx(0, 0, 0)] = 1.0;
    for (int p = 0; p < n; ++p) {
      double* next = w.poly(p + 1);
      for (int kx = 0; kx <= KX; ++kx) {
        const double term = (2 * p + 1) * (t * w.get(p, kx, 0, 0) + 2.0 * kx * w.get(p, kx - 1, 0, 0)) -
                            p * w.get(p - 1, kx, 0, 0);
        next[w.kidx(kx, 0, 0)] = term / (p + 1);
      }
    }
    for (int p = 0; p <= n; ++p)
      out[static_cast<std::size_t>(p) * pts.size() + ipt] =
          std::sqrt(2.0 * p + 1.0) * w.get(p, KX, 0, 0);
  }
}

void tabulate_triangle(int n, std::array<int, 3> deriv, const std::vector<Point>& pts,
                       std::vector<double>& out) {
  const int npolys = (n + 1) * (n + 2) / 2;
  const int KX = deriv[0], KY = deriv[1];
  auto id = [n](int p, int q) {
    int off = 0;
    for (int pp = 0; pp < p; ++pp) off += n - pp + 1;
    return off + q;
  };
  Workspace w(npolys, KX, KY, 0);
  for (std::size_t ipt = 0; ipt < pts.size(); ++ipt) {
    const double x = pts[ipt][0], y = pts[ipt][1];
    const double s = 2.0 * x + y - 1.0; // scaled Legendre argument
    const double om_y = 1.0 - y;
    const double w2 = om_y * om_y;
    w.clear();
    w.poly(id(0, 0))[w.kidx(0, 0, 0)] = 1.0;

    // q = 0 family: scaled Legendre recurrence in (x, y)
    for (int p = 0; p < n; ++p) {
      double* next = w.poly(id(p + 1, 0));
      const int prev = id(p, 0);
      const int prev2 = p > 0 ? id(p - 1, 0) : -1;
      for (int kx = 0; kx <= KX; ++kx)
        for (int ky = 0; ky <= KY; ++ky) {
          double t1 = s * w.get(prev, kx, ky, 0) + 2.0 * kx * w.get(prev, kx - 1, ky, 0) +
                      ky * w.get(prev, kx, ky - 1, 0);
          double t2 = 0.0;
          if (p > 0)
            t2 = w2 * w.get(prev2, kx, ky, 0) - 2.0 * om_y * ky * w.get(prev2, kx, ky - 1, 0) +
                 static_cast<double>(ky) * (ky - 1) * w.get(prev2, kx, ky - 2, 0);
          next[w.kidx(kx, ky, 0)] = ((2 * p + 1) * t1 - p * t2) / (p + 1);
        }
    }

    // Jacobi ascent in q, multiplying the whole product
    for (int p = 0; p <= n; ++p) {
      const int a = 2 * p + 1;
      for (int q = 1; q <= n - p; ++q) {
        const auto [A, B, C] = jacobi_coeffs(q, a);
        const double c1 = A * (2.0 * y - 1.0) + B;
        double* next = w.poly(id(p, q));
        const int prev = id(p, q - 1);
        const int prev2 = q > 1 ? id(p, q - 2) : -1;
        for (int kx = 0; kx <= KX; ++kx)
          for (int ky = 0; ky <= KY; ++ky) {
            double v = c1 * w.get(prev, kx, ky, 0) + 2.0 * A * ky * w.get(prev, kx, ky - 1, 0);
            if (q > 1) v -= C * w.get(prev2, kx, ky, 0);
            next[w.kidx(kx, ky, 0)] = v;
          }
      }
    }

    for (int p = 0; p <= n; ++p)
      for (int q = 0; q <= n - p; ++q)
        out[static_cast<std::size_t>(id(p, q)) * pts.size() + ipt] =
            std::sqrt(2.0 * (2 * p + 1) * (p + q + 1)) * w.get(id(p, q), KX, KY, 0);
  }
}

void tabulate_tetrahedron(int n, std::array<int, 3> deriv, const std::vector<Point>& pts,
                          std::vector<double>& out) {
  const int npolys = (n + 1) * (n + 2) * (n + 3) / 6;
  const int KX = deriv[0], KY = deriv[1], KZ = deriv[2];
  auto id = [n](int p, int q, int r) {
    int off = 0;
    for (int pp = 0; pp < p; ++pp)
      for (int qq = 0; qq <= n - pp; ++qq) off += n - pp - qq + 1;
    for (int qq = 0; qq < q; ++qq) off += n - p - qq + 1;
    return off + r;
  };
  Workspace w(npolys, KX, KY, KZ);
  for (std::size_t ipt = 0; ipt < pts.size(); ++ipt) {
    const double x = pts[ipt][0], y = pts[ipt][1], z = pts[ipt][2];
    const double s = 2.0 * x + y + z - 1.0;
    const double om_yz = 1.0 - y - z;
    const double w2 = om_yz * om_yz;
    const double om_z = 1.0 - z;
    w.clear();
    w.poly(id(0, 0, 0))[w.kidx(0, 0, 0)] = 1.0;

    // (q,r) = (0,0) family
    for (int p = 0; p < n; ++p) {
      double* next = w.poly(id(p + 1, 0, 0));
      const int prev = id(p, 0, 0);
      const int prev2 = p > 0 ? id(p - 1, 0, 0) : -1;
      for (int kx = 0; kx <= KX; ++kx)
        for (int ky = 0; ky <= KY; ++ky)
          for (int kz = 0; kz <= KZ; ++kz) {
            double t1 = s * w.get(prev, kx, ky, kz) + 2.0 * kx * w.get(prev, kx - 1, ky, kz) +
                        ky * w.get(prev, kx, ky - 1, kz) + kz * w.get(prev, kx, ky, kz - 1);
            double t2 = 0.0;
            if (p > 0) {
              t2 = w2 * w.get(prev2, kx, ky, kz);
              t2 -= 2.0 * om_yz * (ky * w.get(prev2, kx, ky - 1, kz) + kz * w.get(prev2, kx, ky, kz - 1));
              t2 += static_cast<double>(ky) * (ky - 1) * w.get(prev2, kx, ky - 2, kz);
              t2 += static_cast<double>(kz) * (kz - 1) * w.get(prev2, kx, ky, kz - 2);
              t2 += 2.0 * ky * kz * w.get(prev2, kx, ky - 1, kz - 1);
            }
            next[w.kidx(kx, ky, kz)] = ((2 * p + 1) * t1 - p * t2) / (p + 1);
          }
    }

    // r = 0 plane: Jacobi ascent in q with the (1-z) scaling
    for (int p = 0; p <= n; ++p) {
      const int a = 2 * p + 1;
      for (int q = 1; q <= n - p; ++q) {
        const auto [A, B, C] = jacobi_coeffs(q, a);
        const double c1 = A * (2.0 * y + z - 1.0) + B * om_z;
        double* next = w.poly(id(p, q, 0));
        const int prev = id(p, q - 1, 0);
        const int prev2 = q > 1 ? id(p, q - 2, 0) : -1;
        for (int kx = 0; kx <= KX; ++kx)
          for (int ky = 0; ky <= KY; ++ky)
            for (int kz = 0; kz <= KZ; ++kz) {
              double v = c1 * w.get(prev, kx, ky, kz) + 2.0 * A * ky * w.get(prev, kx, ky - 1, kz) +
                         (A - B) * kz * w.get(prev, kx, ky, kz - 1);
              if (q > 1) {
                double t2 = om_z * om_z * w.get(prev2, kx, ky, kz) -
                            2.0 * om_z * kz * w.get(prev2, kx, ky, kz - 1) +
                            static_cast<double>(kz) * (kz - 1) * w.get(prev2, kx, ky, kz - 2);
                v -= C * t2;
              }
              next[w.kidx(kx, ky, kz)] = v;
            }
      }
    }

    // Jacobi ascent in r
    for (int p = 0; p <= n; ++p)
      for (int q = 0; q <= n - p; ++q) {
        const int a = 2 * p + 2 * q + 2;
        for (int r = 1; r <= n - p - q; ++r) {
          const auto [A, B, C] = jacobi_coeffs(r, a);
          const double c1 = A * (2.0 * z - 1.0) + B;
          double* next = w.poly(id(p, q, r));
          const int prev = id(p, q, r - 1);
          const int prev2 = r > 1 ? id(p, q, r - 2) : -1;
          for (int kx = 0; kx <= KX; ++kx)
            for (int ky = 0; ky <= KY; ++ky)
              for (int kz = 0; kz <= KZ; ++kz) {
                double v = c1 * w.get(prev, kx, ky, kz) + 2.0 * A * kz * w.get(prev, kx, ky, kz - 1);
                if (r > 1) v -= C * w.get(prev2, kx, ky, kz);
                next[w.kidx(kx, ky, kz)] = v;
              }
        }
      }

    for (int p = 0; p <= n; ++p)
      for (int q = 0; q <= n - p; ++q)
        for (int r = 0; r <= n - p - q; ++r)
          out[static_cast<std::size_t>(id(p, q, r)) * pts.size() + ipt] =
              std::sqrt(2.0 * (2 * p + 1) * (p + q + 1) * (2 * p + 2 * q + 2 * r + 3)) *
              w.get(id(p, q, r), KX, KY, KZ);
  }
}

} // namespace

int dim(CellType cell, int n) {
  switch (cell) {
  case CellType::interval: return n + 1;
  case CellType::triangle: return (n + 1) * (n + 2) / 2;
  case CellType::tetrahedron: return (n + 1) * (n + 2) * (n + 3) / 6;
  }
  throw std::logic_error("unknown cell type");
}

std::vector<double> tabulate(CellType cell, int n, std::array<int, 3> deriv,
                             const std::vector<Point>& points) {
  std::vector<double> out(static_cast<std::size_t>(dim(cell, n)) * points.size());
  switch (cell) {
  case CellType::interval: tabulate_interval(n, deriv, points, out); break;
  case CellType::triangle: tabulate_triangle(n, deriv, points, out); break;
  case CellType::tetrahedron: tabulate_tetrahedron(n, deriv, points, out); break;
  }
  return out;
}

} // namespace ftc::polyset
