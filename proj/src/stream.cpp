#include <queue>
#include <unordered_set>

#include "coords.hpp"
#include "tractlab/spectra.hpp"

namespace tractlab {

struct EigenStream::Impl {
  SpectrumModel model;
  std::vector<std::unique_ptr<detail::Coord>> coords;
  std::vector<detail::CachedCoord> cached;
  std::size_t d = 0;
  std::vector<std::uint64_t> pos;   // d entries per node
  std::vector<std::uint64_t> rank;  // tie-break keys, d per node
  std::vector<double> logs;
  std::uint64_t budget = 0;
  std::uint64_t emitted = 0;
  bool done = false;

  struct Hash {
    const Impl* s;
    std::size_t operator()(std::size_t i) const {
      std::size_t h = 1469598103934665603ull;
      for (std::size_t j = 0; j < s->d; ++j) {
        h ^= s->pos[i * s->d + j] + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
      }
      return h;
    }
  };
  struct Eq {
    const Impl* s;
    bool operator()(std::size_t a, std::size_t b) const {
      for (std::size_t j = 0; j < s->d; ++j)
        if (s->pos[a * s->d + j] != s->pos[b * s->d + j]) return false;
      return true;
    }
  };
  struct Lower {
    const Impl* s;
    // true when a pops after b
    bool operator()(std::size_t a, std::size_t b) const {
      if (s->logs[a] != s->logs[b]) return s->logs[a] < s->logs[b];
      for (std::size_t j = 0; j < s->d; ++j) {
        const auto ra = s->rank[a * s->d + j], rb = s->rank[b * s->d + j];
        if (ra != rb) return ra > rb;
      }
      return false;
    }
  };

  std::unordered_set<std::size_t, Hash, Eq> visited;
  std::priority_queue<std::size_t, std::vector<std::size_t>, Lower> heap;

  Impl(const SpectrumModel& m, int dim, std::uint64_t node_budget)
      : model(m), budget(node_budget), visited(16, Hash{this}, Eq{this}), heap(Lower{this}) {
    model.validate();
    coords = detail::make_coords(model, dim);
    d = coords.size();
    for (auto& c : coords) cached.emplace_back(*c);
    std::vector<std::uint64_t> origin(d, 0);
    if (!try_push(origin)) done = true;
  }

  // Adds the node if every coordinate has that entry and it is new.
  bool try_push(const std::vector<std::uint64_t>& p) {
    const std::size_t idx = logs.size();
    double acc = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
      auto e = cached[j].at(p[j]);
      if (!e) return false;
      acc += e->log;
    }
    for (std::size_t j = 0; j < d; ++j) {
      pos.push_back(p[j]);
      rank.push_back(cached[j].at(p[j])->rank);
    }
    logs.push_back(acc);
    if (!visited.insert(idx).second) {
      pos.resize(idx * d);
      rank.resize(idx * d);
      logs.pop_back();
      return false;
    }
    heap.push(idx);
    return true;
  }
};

EigenStream::EigenStream(const SpectrumModel& model, int d, StreamOptions opts)
    : impl_(std::make_unique<Impl>(model, d, opts.node_budget)) {}
EigenStream::~EigenStream() = default;
EigenStream::EigenStream(EigenStream&&) noexcept = default;
EigenStream& EigenStream::operator=(EigenStream&&) noexcept = default;

std::uint64_t EigenStream::rank() const { return impl_->emitted; }
bool EigenStream::exhausted() const { return impl_->done || impl_->heap.empty(); }

std::optional<LogEigenvalue> EigenStream::next() {
  Impl& s = *impl_;
  if (s.done || s.heap.empty()) {
    s.done = true;
    return std::nullopt;
  }
  if (s.visited.size() > s.budget)
    throw ResourceLimit("eigenvalue enumeration exceeded the node budget after rank " + std::to_string(s.emitted),
                        s.emitted);
  const std::size_t top = s.heap.top();
  s.heap.pop();
  LogEigenvalue out;
  out.log_value = s.logs[top];
  out.rank = ++s.emitted;
  out.witness.resize(s.d);
  std::vector<std::uint64_t> p(s.pos.begin() + top * s.d, s.pos.begin() + (top + 1) * s.d);
  for (std::size_t j = 0; j < s.d; ++j) out.witness[j] = s.cached[j].at(p[j])->witness;
  for (std::size_t j = 0; j < s.d; ++j) {
    ++p[j];
    s.try_push(p);
    --p[j];
  }
  return out;
}

StreamResult eigenvalue_stream(const SpectrumModel& model, int d, std::uint64_t k, StreamOptions opts) {
  if (k < 1) throw InvalidParameter("k must be >= 1");
  EigenStream st(model, d, opts);
  StreamResult r;
  r.values.reserve(static_cast<std::size_t>(std::min<std::uint64_t>(k, 1u << 20)));
  while (r.values.size() < k) {
    auto v = st.next();
    if (!v) {
      r.truncated = true;
      break;
    }
    r.values.push_back(std::move(*v));
  }
  return r;
}

double witness_log_value(const SpectrumModel& model, int d, const std::vector<std::int64_t>& witness) {
  auto coords = detail::make_coords(model, d);
  if (witness.size() != coords.size()) throw InvalidParameter("witness length does not match the model");
  double acc = 0.0;
  for (std::size_t j = 0; j < coords.size(); ++j) acc += coords[j]->log_of(witness[j]);
  return acc;
}

double log_lambda_max(const SpectrumModel& model, int d) {
  auto coords = detail::make_coords(model, d);
  double acc = 0.0;
  for (auto& c : coords) acc += c->max_log();
  return acc;
}

}  // namespace tractlab
