#include "khx/homology.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <thread>
#include <unordered_map>

namespace khx {

void BigradedGroup::set(int i, int j, HomologyCell cell) {
  if (cell.empty()) {
    cells_.erase({i, j});
    return;
  }
  std::sort(cell.torsion.begin(), cell.torsion.end());
  cells_[{i, j}] = std::move(cell);
}

void BigradedGroup::add_free(int i, int j, std::size_t n) {
  if (n == 0) return;
  cells_[{i, j}].free += n;
}

void BigradedGroup::add_torsion(int i, int j, const mpz_class& factor) {
  if (factor <= 1) return;
  auto& t = cells_[{i, j}].torsion;
  t.insert(std::upper_bound(t.begin(), t.end(), factor), factor);
}

std::size_t BigradedGroup::free_rank(int i, int j) const {
  auto it = cells_.find({i, j});
  return it == cells_.end() ? 0 : it->second.free;
}

std::vector<mpz_class> BigradedGroup::torsion(int i, int j) const {
  auto it = cells_.find({i, j});
  return it == cells_.end() ? std::vector<mpz_class>{} : it->second.torsion;
}

bool BigradedGroup::has_torsion() const {
  return std::any_of(cells_.begin(), cells_.end(), [](const auto& kv) { return !kv.second.torsion.empty(); });
}

std::size_t BigradedGroup::total_free_rank() const {
  std::size_t n = 0;
  for (const auto& [key, cell] : cells_) n += cell.free;
  return n;
}

std::size_t BigradedGroup::degree_rank(int i) const {
  std::size_t n = 0;
  for (const auto& [key, cell] : cells_)
    if (key.first == i) n += cell.free;
  return n;
}

BigradedGroup BigradedGroup::shifted(int di, int dj) const {
  BigradedGroup out(ring_);
  for (const auto& [key, cell] : cells_) out.cells_[{key.first + di, key.second + dj}] = cell;
  return out;
}

BigradedGroup BigradedGroup::rational() const {
  BigradedGroup out(Ring::Q);
  for (const auto& [key, cell] : cells_) out.add_free(key.first, key.second, cell.free);
  return out;
}

std::size_t worker_count() {
  if (const char* env = std::getenv("KHX_THREADS")) {
    char* end = nullptr;
    long n = std::strtol(env, &end, 10);
    if (end != env && n > 0) return static_cast<std::size_t>(n);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

void run_parallel(std::vector<std::function<void()>>& tasks) {
  const std::size_t workers = std::min(worker_count(), tasks.size());
  if (workers <= 1) {
    for (auto& t : tasks) t();
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    for (std::size_t k; (k = next.fetch_add(1)) < tasks.size();) {
      try {
        tasks[k]();
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

std::vector<GradedBlock> graded_blocks(const GradedChainComplex& c) {
  std::vector<GradedBlock> out;
  for (std::size_t k = 0; k < c.groups.size(); ++k) {
    const ChainGroup& src = c.groups[k];
    // local index of each generator inside its q-block
    std::map<int, std::size_t> src_count;
    std::vector<std::int32_t> src_local(src.size());
    for (std::size_t g = 0; g < src.size(); ++g) src_local[g] = static_cast<std::int32_t>(src_count[src.q[g]]++);

    std::map<int, std::size_t> dst_count;
    std::vector<std::int32_t> dst_local;
    const ChainGroup* dst = k + 1 < c.groups.size() ? &c.groups[k + 1] : nullptr;
    if (dst) {
      dst_local.resize(dst->size());
      for (std::size_t g = 0; g < dst->size(); ++g) dst_local[g] = static_cast<std::int32_t>(dst_count[dst->q[g]]++);
    }

    std::map<int, std::size_t> slot;
    for (const auto& [q, n] : src_count) {
      slot[q] = out.size();
      GradedBlock b;
      b.degree = src.degree;
      b.q = q;
      b.source_dim = n;
      auto it = dst_count.find(q);
      b.target_dim = it == dst_count.end() ? 0 : it->second;
      b.matrix = SparseMatrix(b.target_dim, b.source_dim);
      out.push_back(std::move(b));
    }
    if (!dst) continue;
    for (const Triplet& t : c.differentials[k].entries()) {
      const int q = src.q[static_cast<std::size_t>(t.col)];
      if (dst->q[static_cast<std::size_t>(t.row)] != q)
        throw std::logic_error("differential does not preserve the q-grading");
      out[slot[q]].matrix.add(dst_local[t.row], src_local[t.col], t.value);
    }
  }
  return out;
}

BigradedGroup compute_homology(const GradedChainComplex& c, Ring ring, TorsionPlacement placement) {
  std::vector<GradedBlock> blocks = graded_blocks(c);
  std::vector<SmithDecomposition> results(blocks.size());
  std::vector<std::function<void()>> tasks;
  tasks.reserve(blocks.size());
  for (std::size_t k = 0; k < blocks.size(); ++k) {
    tasks.emplace_back([&, k] {
      const SparseMatrix& m = blocks[k].matrix;
      if (m.entries().empty()) return;
      if (ring == Ring::Z) {
        results[k] = smith_normal_form(m);
      } else {
        results[k].rank = rank_q(m);
      }
      blocks[k].matrix = SparseMatrix();
    });
  }
  // Largest blocks first so the pool stays busy.
  std::vector<std::size_t> order(blocks.size());
  for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return blocks[a].matrix.entries().size() > blocks[b].matrix.entries().size();
  });
  std::vector<std::function<void()>> ordered;
  ordered.reserve(tasks.size());
  for (std::size_t k : order) ordered.push_back(std::move(tasks[k]));
  run_parallel(ordered);

  std::map<std::pair<int, int>, std::size_t> index;
  for (std::size_t k = 0; k < blocks.size(); ++k) index[{blocks[k].degree, blocks[k].q}] = k;

  BigradedGroup h(ring);
  for (std::size_t k = 0; k < blocks.size(); ++k) {
    const GradedBlock& b = blocks[k];
    const SmithDecomposition* incoming = nullptr;
    if (auto it = index.find({b.degree - 1, b.q}); it != index.end()) incoming = &results[it->second];
    const std::size_t in_rank = incoming ? incoming->rank : 0;
    h.add_free(b.degree, b.q, b.source_dim - results[k].rank - in_rank);
    if (ring == Ring::Z) {
      const SmithDecomposition* from = placement == TorsionPlacement::Incoming ? incoming : &results[k];
      if (from)
        for (const mpz_class& f : from->torsion()) h.add_torsion(b.degree, b.q, f);
    }
  }
  return h;
}

BigradedGroup khovanov_homology(const PlanarDiagram& d, Ring ring, std::size_t cube_limit,
                                const std::vector<bool>& orientation_reverse, TorsionPlacement placement) {
  // Blocks arrive degree by degree, so only the ranks of the previous
  // degree have to be kept.
  struct Done {
    std::size_t dim = 0;
    SmithDecomposition smith;
  };
  std::map<std::pair<int, int>, Done> done;
  BigradedGroup h(ring);
  for_each_graded_block(d, FrobeniusTheory::khovanov(ring), true, cube_limit, orientation_reverse,
                        [&](GradedBlock& b) {
                          Done r;
                          r.dim = b.source_dim;
                          if (!b.matrix.entries().empty()) {
                            if (ring == Ring::Z) r.smith = smith_normal_form(b.matrix);
                            else r.smith.rank = rank_q(b.matrix);
                          }
                          b.matrix = SparseMatrix();
                          done[{b.degree, b.q}] = std::move(r);
                        });
  for (const auto& [key, r] : done) {
    const Done* in = nullptr;
    if (auto it = done.find({key.first - 1, key.second}); it != done.end()) in = &it->second;
    h.add_free(key.first, key.second, r.dim - r.smith.rank - (in ? in->smith.rank : 0));
    if (ring == Ring::Z) {
      const SmithDecomposition* from = placement == TorsionPlacement::Incoming ? (in ? &in->smith : nullptr) : &r.smith;
      if (from)
        for (const mpz_class& f : from->torsion()) h.add_torsion(key.first, key.second, f);
    }
  }
  return h;
}

}  // namespace khx
