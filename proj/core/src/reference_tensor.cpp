#include "ftc/reference_tensor.hpp"

#include <algorithm>
#include <cassert>
#include <cstring>
#include <map>
#include <numeric>
#include <thread>

namespace ftc {

namespace {

std::uint64_t product_u64(std::span<const int> v) {
  std::uint64_t p = 1;
  for (int x : v) p *= static_cast<std::uint64_t>(x);
  return p;
}

// Shared basis tabulations, keyed by the sorted derivative multi-index.
class TabulationCache {
public:
  TabulationCache(const FiniteElement& element, const std::vector<Point>& points)
      : element_(element), points_(points) {}

  const TabulatedBasis& get(std::vector<int> derivative) {
    std::sort(derivative.begin(), derivative.end());
    auto it = cache_.find(derivative);
    if (it == cache_.end())
      it = cache_.emplace(derivative, element_.tabulate(points_, derivative)).first;
    return it->second;
  }

private:
  const FiniteElement& element_;
  const std::vector<Point>& points_;
  std::map<std::vector<int>, TabulatedBasis> cache_;
};

struct Binding {
  enum class Cls { secondary, auxiliary, fixed };
  Cls cls = Cls::fixed;
  int pos = 0;   // position into the canonical secondary / auxiliary order
  int value = 0; // fixed value
};

Binding bind_index(const ReferenceMonomial& rm, IndexId id) {
  const Index& ix = rm.indices[static_cast<std::size_t>(id)];
  Binding b;
  if (ix.kind == IndexKind::fixed) {
    b.cls = Binding::Cls::fixed;
    b.value = ix.fixed_value;
  } else if (ix.kind == IndexKind::secondary) {
    b.cls = Binding::Cls::secondary;
    b.pos = static_cast<int>(std::find(rm.secondary.begin(), rm.secondary.end(), id) -
                             rm.secondary.begin());
  } else if (ix.kind == IndexKind::auxiliary) {
    b.cls = Binding::Cls::auxiliary;
    b.pos = static_cast<int>(std::find(rm.auxiliary.begin(), rm.auxiliary.end(), id) -
                             rm.auxiliary.begin());
  } else {
    throw std::logic_error("unexpected index kind in factor slot");
  }
  return b;
}

// Masked basis value: vector-element dofs contribute only in their block.
double basis_value(const FiniteElement& e, const TabulatedBasis& tb, int point, int dof,
                   int component) {
  if (e.vector_size() > 1 && e.dof_component(dof) != component) return 0.0;
  return tb.at(point, dof);
}

// One factor prepared for the entry-by-entry algorithm: a dense value
// table vals[slot_assign][dof][point] over the factor's non-fixed slots.
struct NaiveFactor {
  int ndof = 0;
  bool dof_primary = true;
  int dof_pos = 0;
  std::vector<Binding> slots; // component (if any) then derivative slots, fixed excluded
  std::vector<int> slot_ranges;
  std::vector<int> slot_strides;
  std::vector<double> vals;
};

std::vector<NaiveFactor> build_naive_factors(const ReferenceMonomial& rm, const QuadratureRule& rule,
                                             TabulationCache& cache) {
  const FiniteElement& e = *rm.element;
  const int npts = rule.num_points();
  const auto sec_shape = rm.secondary_shape();
  const auto aux_shape = rm.auxiliary_shape();

  std::vector<NaiveFactor> out;
  for (const Factor& f : rm.factors) {
    NaiveFactor nf;
    nf.ndof = e.space_dimension();
    if (f.is_coefficient) {
      nf.dof_primary = false;
      nf.dof_pos = bind_index(rm, f.basis_index).pos;
    } else {
      nf.dof_primary = true;
      nf.dof_pos = f.function;
    }

    std::optional<Binding> comp_fixed;
    if (f.component) {
      const Binding b = bind_index(rm, *f.component);
      if (b.cls == Binding::Cls::fixed) comp_fixed = b;
      else {
        nf.slots.push_back(b);
        nf.slot_ranges.push_back(b.cls == Binding::Cls::secondary ? sec_shape[static_cast<std::size_t>(b.pos)]
                                                                  : aux_shape[static_cast<std::size_t>(b.pos)]);
      }
    }
    std::vector<Binding> deriv_fixed;
    std::vector<int> deriv_slot_of; // slot list position per derivative, -1 if fixed
    for (IndexId d : f.derivatives) {
      const Binding b = bind_index(rm, d);
      if (b.cls == Binding::Cls::fixed) {
        deriv_slot_of.push_back(-1);
        deriv_fixed.push_back(b);
      } else {
        deriv_slot_of.push_back(static_cast<int>(nf.slots.size()));
        nf.slots.push_back(b);
        nf.slot_ranges.push_back(b.cls == Binding::Cls::secondary
                                     ? sec_shape[static_cast<std::size_t>(b.pos)]
                                     : aux_shape[static_cast<std::size_t>(b.pos)]);
      }
    }

    nf.slot_strides.assign(nf.slots.size(), 1);
    int nassign = 1;
    for (std::size_t s = nf.slots.size(); s-- > 0;) {
      nf.slot_strides[s] = nassign;
      nassign *= nf.slot_ranges[s];
    }

    nf.vals.assign(static_cast<std::size_t>(nassign) * nf.ndof * npts, 0.0);
    std::vector<int> assign(nf.slots.size(), 0);
    for (int sa = 0; sa < nassign; ++sa) {
      int component = -1;
      std::size_t slot_cursor = 0;
      if (f.component) {
        const Binding b = bind_index(rm, *f.component);
        component = b.cls == Binding::Cls::fixed ? b.value : assign[slot_cursor++];
      }
      std::vector<int> deriv;
      std::size_t fixed_cursor = 0;
      for (std::size_t k = 0; k < f.derivatives.size(); ++k) {
        if (deriv_slot_of[k] < 0) deriv.push_back(deriv_fixed[fixed_cursor++].value);
        else deriv.push_back(assign[static_cast<std::size_t>(deriv_slot_of[k])]);
      }
      const TabulatedBasis& tb = cache.get(deriv);
      for (int dof = 0; dof < nf.ndof; ++dof)
        for (int pt = 0; pt < npts; ++pt)
          nf.vals[(static_cast<std::size_t>(sa) * nf.ndof + dof) * npts + pt] =
              basis_value(e, tb, pt, dof, component);
      if (!nf.slots.empty()) next_multi_index(assign, nf.slot_ranges);
    }
    out.push_back(std::move(nf));
  }
  return out;
}

void check_entry_cap(std::uint64_t entries, const ComputeOptions& options) {
  if (entries > options.max_entries) throw TensorSizeError(entries, options.max_entries);
}

std::vector<AxisInfo> make_axes(const ReferenceMonomial& rm) {
  std::vector<AxisInfo> axes;
  for (IndexId id : rm.primary)
    axes.push_back({IndexKind::primary, rm.indices[static_cast<std::size_t>(id)].range, id});
  for (IndexId id : rm.secondary)
    axes.push_back({IndexKind::secondary, rm.indices[static_cast<std::size_t>(id)].range, id});
  return axes;
}

int resolve_thread_count(const ComputeOptions& options) {
  if (options.threads > 0) return options.threads;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

// Weighted product sum over the quadrature points for a fixed slot/dof
// assignment; M = number of factors known at compile time where it pays.
template <int M>
double dot_product_rows(const double* const* rows, const double* w, int npts, int m) {
  double acc = 0.0;
  for (int k = 0; k < npts; ++k) {
    double prod = w[k];
    if constexpr (M > 0) {
      for (int j = 0; j < M; ++j) prod *= rows[j][k];
    } else {
      for (int j = 0; j < m; ++j) prod *= rows[j][k];
    }
    acc += prod;
  }
  return acc;
}

} // namespace

std::uint64_t ReferenceTensor::primary_size() const {
  std::uint64_t n = 1;
  for (int k = 0; k < num_primary_axes; ++k) n *= static_cast<std::uint64_t>(axes[static_cast<std::size_t>(k)].range);
  return n;
}

std::uint64_t ReferenceTensor::secondary_size() const {
  std::uint64_t n = 1;
  for (std::size_t k = static_cast<std::size_t>(num_primary_axes); k < axes.size(); ++k)
    n *= static_cast<std::uint64_t>(axes[k].range);
  return n;
}

QuadratureRule default_rule(const ReferenceMonomial& monomial) {
  int degree = 0;
  for (const Factor& f : monomial.factors)
    degree += std::max(monomial.element->degree() - static_cast<int>(f.derivatives.size()), 0);
  return simplex_rule(monomial.element->cell(), degree);
}

ComputeResult compute_naive(const ReferenceMonomial& rm, const QuadratureRule& rule,
                            const ComputeOptions& options) {
  const auto pshape = rm.primary_shape();
  const auto sshape = rm.secondary_shape();
  const auto ashape = rm.auxiliary_shape();
  const std::uint64_t nI = product_u64(pshape), nA = product_u64(sshape), nB = product_u64(ashape);
  check_entry_cap(nI * nA, options);

  TabulationCache cache(*rm.element, rule.points);
  const std::vector<NaiveFactor> factors = build_naive_factors(rm, rule, cache);
  const int m = static_cast<int>(factors.size());
  const int npts = rule.num_points();
  const double* w = rule.weights.data();

  std::vector<int> full_shape = pshape;
  full_shape.insert(full_shape.end(), sshape.begin(), sshape.end());
  ComputeResult result;
  try {
    result.tensor.values = NdArray(full_shape);
  } catch (const std::bad_alloc&) {
    throw TensorSizeError(nI * nA, options.max_entries);
  }
  result.tensor.axes = make_axes(rm);
  result.tensor.num_primary_axes = static_cast<int>(pshape.size());
  result.tensor.provenance = Algorithm::naive;
  double* a0 = result.tensor.values.data();

  const std::uint64_t total = nI * nA;
  auto worker = [&](std::uint64_t begin, std::uint64_t end) {
    std::vector<int> imulti(pshape.size()), amulti(sshape.size()), bmulti(ashape.size());
    std::vector<const double*> rows(static_cast<std::size_t>(m));
    std::vector<int> dof(static_cast<std::size_t>(m));
    std::vector<int> sa_base(static_cast<std::size_t>(m));
    for (std::uint64_t e = begin; e < end; ++e) {
      std::uint64_t iflat = e / nA, aflat = e % nA;
      // decode multi-indices (row-major)
      for (std::size_t k = pshape.size(); k-- > 0;) {
        imulti[k] = static_cast<int>(iflat % static_cast<std::uint64_t>(pshape[k]));
        iflat /= static_cast<std::uint64_t>(pshape[k]);
      }
      for (std::size_t k = sshape.size(); k-- > 0;) {
        amulti[k] = static_cast<int>(aflat % static_cast<std::uint64_t>(sshape[k]));
        aflat /= static_cast<std::uint64_t>(sshape[k]);
      }
      for (int j = 0; j < m; ++j) {
        const NaiveFactor& f = factors[static_cast<std::size_t>(j)];
        dof[static_cast<std::size_t>(j)] =
            f.dof_primary ? imulti[static_cast<std::size_t>(f.dof_pos)] : amulti[static_cast<std::size_t>(f.dof_pos)];
        int sa = 0;
        for (std::size_t s = 0; s < f.slots.size(); ++s)
          if (f.slots[s].cls == Binding::Cls::secondary)
            sa += amulti[static_cast<std::size_t>(f.slots[s].pos)] * f.slot_strides[s];
        sa_base[static_cast<std::size_t>(j)] = sa;
      }
      double acc = 0.0;
      std::fill(bmulti.begin(), bmulti.end(), 0);
      for (std::uint64_t b = 0; b < nB; ++b) {
        for (int j = 0; j < m; ++j) {
          const NaiveFactor& f = factors[static_cast<std::size_t>(j)];
          int sa = sa_base[static_cast<std::size_t>(j)];
          for (std::size_t s = 0; s < f.slots.size(); ++s)
            if (f.slots[s].cls == Binding::Cls::auxiliary)
              sa += bmulti[static_cast<std::size_t>(f.slots[s].pos)] * f.slot_strides[s];
          rows[static_cast<std::size_t>(j)] =
              f.vals.data() + (static_cast<std::size_t>(sa) * f.ndof + dof[static_cast<std::size_t>(j)]) * npts;
        }
        switch (m) {
        case 1: acc += dot_product_rows<1>(rows.data(), w, npts, m); break;
        case 2: acc += dot_product_rows<2>(rows.data(), w, npts, m); break;
        case 3: acc += dot_product_rows<3>(rows.data(), w, npts, m); break;
        case 4: acc += dot_product_rows<4>(rows.data(), w, npts, m); break;
        default: acc += dot_product_rows<0>(rows.data(), w, npts, m); break;
        }
        if (!ashape.empty()) next_multi_index(bmulti, ashape);
      }
      a0[e] = acc;
    }
  };

  const int nthreads = std::min<std::uint64_t>(resolve_thread_count(options), std::max<std::uint64_t>(total, 1));
  if (nthreads <= 1 || total < 4096) {
    worker(0, total);
  } else {
    std::vector<std::thread> pool;
    const std::uint64_t chunk = (total + nthreads - 1) / nthreads;
    for (int t = 0; t < nthreads; ++t) {
      const std::uint64_t b = t * chunk, e = std::min(total, b + chunk);
      if (b >= e) break;
      pool.emplace_back(worker, b, e);
    }
    for (auto& th : pool) th.join();
  }

  result.multiply_count = total * nB * static_cast<std::uint64_t>(npts) * static_cast<std::uint64_t>(m);
  return result;
}

std::vector<PsiTable> tabulate_psi_tables(const ReferenceMonomial& rm, const QuadratureRule& rule) {
  TabulationCache cache(*rm.element, rule.points);
  const FiniteElement& e = *rm.element;
  const int npts = rule.num_points();
  const auto sec_shape = rm.secondary_shape();
  const auto aux_shape = rm.auxiliary_shape();

  std::vector<PsiTable> out;
  for (std::size_t fi = 0; fi < rm.factors.size(); ++fi) {
    const Factor& f = rm.factors[fi];
    PsiTable pt;
    pt.factor = static_cast<int>(fi);
    pt.slice_shape.push_back(e.space_dimension());

    // local slots in slot order: component first, then derivatives
    struct LocalSlot {
      Binding b;
      bool is_component;
    };
    std::vector<LocalSlot> sec_slots;
    std::optional<int> comp_fixed;
    std::optional<int> comp_aux; // auxiliary position
    if (f.component) {
      const Binding b = bind_index(rm, *f.component);
      if (b.cls == Binding::Cls::fixed) comp_fixed = b.value;
      else if (b.cls == Binding::Cls::auxiliary) {
        comp_aux = b.pos;
        pt.auxiliary_positions.push_back(b.pos);
        pt.auxiliary_shape.push_back(aux_shape[static_cast<std::size_t>(b.pos)]);
      } else {
        sec_slots.push_back({b, true});
        pt.slice_shape.push_back(sec_shape[static_cast<std::size_t>(b.pos)]);
      }
    }
    std::vector<int> deriv_template(f.derivatives.size(), -1);
    std::vector<int> deriv_sec_slot(f.derivatives.size(), -1);
    for (std::size_t k = 0; k < f.derivatives.size(); ++k) {
      const Binding b = bind_index(rm, f.derivatives[k]);
      if (b.cls == Binding::Cls::fixed) deriv_template[k] = b.value;
      else if (b.cls == Binding::Cls::secondary) {
        deriv_sec_slot[k] = static_cast<int>(sec_slots.size());
        sec_slots.push_back({b, false});
        pt.slice_shape.push_back(sec_shape[static_cast<std::size_t>(b.pos)]);
      } else {
        throw std::logic_error("derivative slot bound to an auxiliary index after lowering");
      }
    }

    const int n_beta = static_cast<int>(product_u64(pt.auxiliary_shape));
    const std::uint64_t slice = product_u64(pt.slice_shape);
    pt.values = NdArray({n_beta, npts, static_cast<int>(slice)});

    // enumerate [beta][secondary slots] and fill [dof]-major slices
    std::vector<int> beta(pt.auxiliary_shape.size(), 0);
    for (int bi = 0; bi < n_beta; ++bi) {
      const int component_from_beta = comp_aux ? beta[0] : -1;
      std::vector<int> sec_ranges;
      for (std::size_t s = 1; s < pt.slice_shape.size(); ++s) sec_ranges.push_back(pt.slice_shape[s]);
      std::vector<int> sec(sec_ranges.size(), 0);
      const int n_sec = static_cast<int>(product_u64(sec_ranges));
      for (int si = 0; si < n_sec; ++si) {
        int component = -1;
        if (comp_fixed) component = *comp_fixed;
        else if (comp_aux) component = component_from_beta;
        else if (f.component) component = sec[0];
        std::vector<int> deriv;
        for (std::size_t k = 0; k < f.derivatives.size(); ++k)
          deriv.push_back(deriv_template[k] >= 0 ? deriv_template[k]
                                                 : sec[static_cast<std::size_t>(deriv_sec_slot[k])]);
        const TabulatedBasis& tb = cache.get(deriv);
        for (int pti = 0; pti < npts; ++pti)
          for (int dof = 0; dof < e.space_dimension(); ++dof)
            pt.values[(static_cast<std::size_t>(bi) * npts + pti) * slice +
                      static_cast<std::size_t>(dof) * n_sec + si] =
                basis_value(e, tb, pti, dof, component);
        if (!sec_ranges.empty()) next_multi_index(sec, sec_ranges);
      }
      if (!pt.auxiliary_shape.empty()) next_multi_index(beta, pt.auxiliary_shape);
    }
    out.push_back(std::move(pt));
  }
  return out;
}

namespace {

struct AssembledPlan {
  std::vector<int> outer_shape;
  std::vector<int> axis_map; // canonical axis -> outer axis
  std::vector<std::uint64_t> slice_sizes;
};

AssembledPlan plan_assembled(const ReferenceMonomial& rm, const std::vector<PsiTable>& psi) {
  AssembledPlan plan;
  const int r = static_cast<int>(rm.primary.size());
  std::vector<int> canonical_of_outer;
  for (std::size_t fi = 0; fi < rm.factors.size(); ++fi) {
    const Factor& f = rm.factors[fi];
    const PsiTable& p = psi[fi];
    plan.slice_sizes.push_back(product_u64(p.slice_shape));
    // dof axis
    if (f.is_coefficient) {
      const int spos = static_cast<int>(std::find(rm.secondary.begin(), rm.secondary.end(), f.basis_index) -
                                        rm.secondary.begin());
      canonical_of_outer.push_back(r + spos);
    } else {
      canonical_of_outer.push_back(f.function);
    }
    plan.outer_shape.push_back(p.slice_shape[0]);
    // local secondary axes, in slot order
    std::vector<IndexId> local;
    if (f.component &&
        rm.indices[static_cast<std::size_t>(*f.component)].kind == IndexKind::secondary)
      local.push_back(*f.component);
    for (IndexId d : f.derivatives)
      if (rm.indices[static_cast<std::size_t>(d)].kind == IndexKind::secondary) local.push_back(d);
    for (std::size_t s = 0; s < local.size(); ++s) {
      const int spos = static_cast<int>(std::find(rm.secondary.begin(), rm.secondary.end(), local[s]) -
                                        rm.secondary.begin());
      canonical_of_outer.push_back(r + spos);
      plan.outer_shape.push_back(p.slice_shape[s + 1]);
    }
  }
  const std::size_t rank = canonical_of_outer.size();
  if (rank != rm.primary.size() + rm.secondary.size())
    throw std::logic_error("outer-product axes do not cover the tensor axes");
  plan.axis_map.assign(rank, -1);
  for (std::size_t t = 0; t < rank; ++t) {
    if (plan.axis_map[static_cast<std::size_t>(canonical_of_outer[t])] != -1)
      throw std::logic_error("duplicate axis in outer-product plan");
    plan.axis_map[static_cast<std::size_t>(canonical_of_outer[t])] = static_cast<int>(t);
  }
  return plan;
}

} // namespace

ComputeResult compute_assembled(const ReferenceMonomial& rm, const QuadratureRule& rule,
                                const ComputeOptions& options) {
  const auto pshape = rm.primary_shape();
  const auto sshape = rm.secondary_shape();
  const auto ashape = rm.auxiliary_shape();
  const std::uint64_t nI = product_u64(pshape), nA = product_u64(sshape), nB = product_u64(ashape);
  const std::uint64_t total = nI * nA;
  check_entry_cap(total, options);

  const std::vector<PsiTable> psi = tabulate_psi_tables(rm, rule);
  const AssembledPlan plan = plan_assembled(rm, psi);
  const int m = static_cast<int>(psi.size());
  const int npts = rule.num_points();

  // per-factor auxiliary strides: beta_j = sum over bound aux slots
  std::vector<std::vector<std::pair<int, int>>> aux_strides(psi.size()); // (aux pos, stride)
  for (std::size_t fi = 0; fi < psi.size(); ++fi) {
    int stride = 1;
    const PsiTable& p = psi[fi];
    for (std::size_t s = p.auxiliary_positions.size(); s-- > 0;) {
      aux_strides[fi].emplace_back(p.auxiliary_positions[s], stride);
      stride *= p.auxiliary_shape[s];
    }
  }

  std::uint64_t prefix_max = 1, run = 1;
  for (int j = 0; j + 1 < m; ++j) {
    run *= plan.slice_sizes[static_cast<std::size_t>(j)];
    prefix_max = std::max(prefix_max, run);
  }

  std::vector<double> a0_outer;
  try {
    a0_outer.assign(total, 0.0);
  } catch (const std::bad_alloc&) {
    throw TensorSizeError(total, options.max_entries);
  }

  std::uint64_t multiplies = 0;

  auto accumulate_range = [&](int k_begin, int k_end, double* acc, std::uint64_t& mults) {
    std::vector<double> cur(prefix_max), nxt(prefix_max);
    std::vector<int> bmulti(ashape.size(), 0);
    for (int k = k_begin; k < k_end; ++k) {
      std::fill(bmulti.begin(), bmulti.end(), 0);
      for (std::uint64_t b = 0; b < nB; ++b) {
        cur[0] = rule.weights[static_cast<std::size_t>(k)];
        std::uint64_t cur_n = 1;
        const double* last_slice = nullptr;
        for (int j = 0; j < m; ++j) {
          const PsiTable& p = psi[static_cast<std::size_t>(j)];
          int beta = 0;
          for (const auto& [pos, stride] : aux_strides[static_cast<std::size_t>(j)])
            beta += bmulti[static_cast<std::size_t>(pos)] * stride;
          const std::uint64_t S = plan.slice_sizes[static_cast<std::size_t>(j)];
          const double* slice =
              p.values.data() + (static_cast<std::size_t>(beta) * npts + k) * S;
          if (j + 1 < m) {
            for (std::uint64_t bb = 0; bb < cur_n; ++bb) {
              const double cb = cur[bb];
              double* o = nxt.data() + bb * S;
              if (cb == 0.0) {
                std::memset(o, 0, S * sizeof(double));
              } else {
                for (std::uint64_t t = 0; t < S; ++t) o[t] = cb * slice[t];
                mults += S;
              }
            }
            cur.swap(nxt);
            cur_n *= S;
          } else {
            last_slice = slice;
            // fused final outer product and accumulation
            for (std::uint64_t bb = 0; bb < cur_n; ++bb) {
              const double cb = cur[bb];
              if (cb == 0.0) continue;
              double* o = acc + bb * S;
              for (std::uint64_t t = 0; t < S; ++t) o[t] += cb * last_slice[t];
              mults += S;
            }
          }
        }
        if (!ashape.empty()) next_multi_index(bmulti, ashape);
      }
    }
  };

  if (!options.parallel_points || npts < 2) {
    accumulate_range(0, npts, a0_outer.data(), multiplies);
  } else {
    const int nthreads = std::min(resolve_thread_count(options), npts);
    std::vector<std::vector<double>> partial(static_cast<std::size_t>(nthreads));
    std::vector<std::uint64_t> counts(static_cast<std::size_t>(nthreads), 0);
    std::vector<std::thread> pool;
    const int chunk = (npts + nthreads - 1) / nthreads;
    for (int t = 0; t < nthreads; ++t) {
      const int b = t * chunk, e = std::min(npts, b + chunk);
      if (b >= e) break;
      partial[static_cast<std::size_t>(t)].assign(total, 0.0);
      pool.emplace_back([&, t, b, e] {
        accumulate_range(b, e, partial[static_cast<std::size_t>(t)].data(),
                         counts[static_cast<std::size_t>(t)]);
      });
    }
    for (auto& th : pool) th.join();
    for (std::size_t t = 0; t < partial.size(); ++t) {
      if (partial[t].empty()) continue;
      for (std::uint64_t i = 0; i < total; ++i) a0_outer[i] += partial[t][i];
      multiplies += counts[t];
    }
  }

  // single permutation from factor order into canonical order
  NdArray outer_nd(plan.outer_shape);
  std::copy(a0_outer.begin(), a0_outer.end(), outer_nd.data());
  a0_outer.clear();
  a0_outer.shrink_to_fit();

  ComputeResult result;
  bool identity = true;
  for (std::size_t k = 0; k < plan.axis_map.size(); ++k)
    if (plan.axis_map[k] != static_cast<int>(k)) { identity = false; break; }
  result.tensor.values = identity ? std::move(outer_nd) : permute_axes(outer_nd, plan.axis_map);
  result.tensor.axes = make_axes(rm);
  result.tensor.num_primary_axes = static_cast<int>(pshape.size());
  result.tensor.provenance = Algorithm::assembled;
  result.multiply_count = multiplies;
  return result;
}

} // namespace ftc
