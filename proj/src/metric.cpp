#include "mls/metric.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <mutex>
#include <random>
#include <set>
#include <sstream>
#include <unordered_map>

#include "mls/error.hpp"
#include "mls/packed_word.hpp"

namespace mls {

// ---------------------------------------------------------------------------
// GeneratingSet

GeneratingSet GeneratingSet::standard_basis(int rank) {
  const Alphabet alphabet(rank);
  GeneratingSet S;
  S.rank_ = rank;
  for (int l = 0; l < alphabet.size(); ++l) {
    S.elements_.push_back(ReducedWord::from_reduced({static_cast<Letter>(l)}));
  }
  return S;
}

GeneratingSet GeneratingSet::from_words(int rank, std::vector<ReducedWord> words, std::size_t bfs_budget) {
  const Alphabet alphabet(rank);
  std::set<ReducedWord> all;
  for (auto& w : words) {
    for (Letter l : w.letters()) {
      if (!alphabet.contains(l)) throw Error(ErrorKind::InvalidArgument, "generator letter outside rank");
    }
    if (w.empty()) continue;
    all.insert(w.inverse());
    all.insert(std::move(w));
  }
  GeneratingSet S;
  S.rank_ = rank;
  S.elements_.assign(all.begin(), all.end());
  if (S.elements_.empty()) throw Error(ErrorKind::InvalidArgument, "empty generating set");

  // Every basis letter must be reachable.
  std::set<Letter> missing;
  for (int i = 0; i < rank; ++i) missing.insert(generator(i));
  for (const auto& s : S.elements_) {
    if (s.length() == 1) missing.erase(s[0] & ~Letter{1});
  }
  if (!missing.empty()) {
    std::unordered_map<PackedWord, char, PackedWordHash> seen;
    std::deque<ReducedWord> queue{ReducedWord{}};
    seen.emplace(PackedWord{}, 1);
    while (!queue.empty() && !missing.empty()) {
      ReducedWord u = std::move(queue.front());
      queue.pop_front();
      for (const auto& s : S.elements_) {
        ReducedWord v = multiply(u, s);
        if (v.length() > PackedWord::kMaxLength) continue;
        if (!seen.emplace(PackedWord::pack(v), 1).second) continue;
        if (v.length() == 1) missing.erase(v[0] & ~Letter{1});
        if (seen.size() > bfs_budget) break;
        queue.push_back(std::move(v));
      }
      if (seen.size() > bfs_budget) break;
    }
    if (!missing.empty()) {
      throw Error(ErrorKind::InvalidArgument, "generating set does not reach generator " +
                                                  std::string(1, letter_char(*missing.begin())) +
                                                  " within the BFS budget");
    }
  }
  return S;
}

std::size_t GeneratingSet::max_length() const noexcept {
  std::size_t m = 0;
  for (const auto& s : elements_) m = std::max(m, s.length());
  return m;
}

bool GeneratingSet::is_standard_basis() const noexcept {
  return elements_.size() == static_cast<std::size_t>(2 * rank_) && max_length() == 1;
}

bool GeneratingSet::contains(const ReducedWord& w) const {
  return std::binary_search(elements_.begin(), elements_.end(), w);
}

bool GeneratingSet::is_factor_closed() const noexcept {
  for (const auto& s : elements_) {
    const auto l = s.letters();
    for (std::size_t i = 0; i < l.size(); ++i) {
      for (std::size_t j = i + 1; j <= l.size(); ++j) {
        if (j - i == l.size()) continue;
        std::vector<Letter> sub(l.begin() + static_cast<long>(i), l.begin() + static_cast<long>(j));
        if (!contains(ReducedWord::from_reduced(std::move(sub)))) return false;
      }
    }
  }
  return true;
}

const char* to_string(MetricKind kind) noexcept {
  switch (kind) {
    case MetricKind::Word: return "word";
    case MetricKind::PulledBack: return "pullback";
    case MetricKind::Combination: return "combination";
    case MetricKind::MatrixLogNorm: return "matrix-log-norm";
    case MetricKind::SymmetrizedMatrixLogNorm: return "symmetrized-matrix-log-norm";
    case MetricKind::ConedOff: return "coned-off";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// MetricHandle

namespace {

struct BfsMemo {
  std::unordered_map<PackedWord, int, PackedWordHash> dist;
  std::vector<ReducedWord> frontier;
  int radius = -1;
};

}  // namespace

struct MetricHandle::Impl {
  MetricKind kind = MetricKind::Word;
  int rank = 2;
  MetricOptions options;

  std::optional<GeneratingSet> gens;
  Segmenter seg;
  bool factor_closed = false;
  bool basis = false;

  std::optional<Automorphism> phi;
  std::optional<MetricHandle> inner;
  std::optional<MetricHandle> second;
  double s = 1;
  double t = 1;

  std::optional<Representation<double>> rho;
  std::optional<SubgroupGraph> subgroup;

  // Grow-only memo for BFS word metrics and coned-off distances.
  mutable std::mutex memo_mutex;
  mutable BfsMemo bfs;
  mutable std::unordered_map<PackedWord, int, PackedWordHash> coned;
  mutable bool coned_ready = false;

  mutable std::once_flag delta_once;
  mutable double delta_estimate = 0;

  int bfs_distance(const ReducedWord& x) const;
  void bfs_expand_to(int radius) const;
  int coned_distance(const ReducedWord& x) const;
};

void MetricHandle::Impl::bfs_expand_to(int radius) const {
  if (bfs.radius < 0) {
    bfs.dist.emplace(PackedWord{}, 0);
    bfs.frontier = {ReducedWord{}};
    bfs.radius = 0;
  }
  while (bfs.radius < radius) {
    std::vector<ReducedWord> next;
    for (const auto& u : bfs.frontier) {
      for (const auto& g : gens->elements()) {
        ReducedWord v = multiply(u, g);
        const PackedWord key = PackedWord::pack(v);
        if (bfs.dist.emplace(key, bfs.radius + 1).second) next.push_back(std::move(v));
      }
      if (bfs.dist.size() > options.node_budget) {
        throw Error(ErrorKind::BudgetExceeded,
                    "BFS ball exceeds node budget " + std::to_string(options.node_budget) + " at radius " +
                        std::to_string(bfs.radius + 1));
      }
    }
    if (next.empty()) break;
    bfs.frontier = std::move(next);
    ++bfs.radius;
  }
}

int MetricHandle::Impl::bfs_distance(const ReducedWord& x) const {
  const PackedWord key = PackedWord::pack(x);
  std::lock_guard lock(memo_mutex);
  for (;;) {
    if (auto it = bfs.dist.find(key); it != bfs.dist.end()) return it->second;
    bfs_expand_to(bfs.radius + 1);
  }
}

int MetricHandle::Impl::coned_distance(const ReducedWord& x) const {
  std::lock_guard lock(memo_mutex);
  if (!coned_ready) {
    // Universe: the S-ball. Node ids: elements first, then one cone per left coset.
    bfs_expand_to(options.coned_universe_radius);
    std::vector<ReducedWord> elems;
    for (const auto& [key, d] : bfs.dist) {
      if (d <= options.coned_universe_radius) elems.push_back(key.unpack());
    }
    std::sort(elems.begin(), elems.end());
    std::unordered_map<PackedWord, int, PackedWordHash> id;
    for (std::size_t i = 0; i < elems.size(); ++i) id.emplace(PackedWord::pack(elems[i]), static_cast<int>(i));
    // uH = vH iff H u^-1 = H v^-1.
    std::map<SubgroupGraph::CosetKey, int> cone_of;
    std::vector<int> cone(elems.size());
    std::vector<std::vector<int>> cone_members;
    for (std::size_t i = 0; i < elems.size(); ++i) {
      auto key = subgroup->right_coset(elems[i].inverse());
      auto [it, inserted] = cone_of.emplace(std::move(key), static_cast<int>(cone_members.size()));
      if (inserted) cone_members.emplace_back();
      cone[i] = it->second;
      cone_members[static_cast<std::size_t>(it->second)].push_back(static_cast<int>(i));
    }
    const std::size_t n = elems.size();
    std::vector<int> dist(n + cone_members.size(), -1);
    std::deque<int> queue;
    const int origin = id.at(PackedWord{});
    dist[static_cast<std::size_t>(origin)] = 0;
    queue.push_back(origin);
    while (!queue.empty()) {
      const int u = queue.front();
      queue.pop_front();
      const int du = dist[static_cast<std::size_t>(u)];
      auto relax = [&](int v) {
        if (dist[static_cast<std::size_t>(v)] < 0) {
          dist[static_cast<std::size_t>(v)] = du + 1;
          queue.push_back(v);
        }
      };
      if (static_cast<std::size_t>(u) < n) {
        const ReducedWord& w = elems[static_cast<std::size_t>(u)];
        for (const auto& g : gens->elements()) {
          if (auto it = id.find(PackedWord::pack(multiply(w, g))); it != id.end()) relax(it->second);
        }
        relax(static_cast<int>(n) + cone[static_cast<std::size_t>(u)]);
      } else {
        for (int v : cone_members[static_cast<std::size_t>(u) - n]) relax(v);
      }
    }
    for (std::size_t i = 0; i < n; ++i) coned.emplace(PackedWord::pack(elems[i]), dist[i]);
    coned_ready = true;
  }
  if (x.length() > PackedWord::kMaxLength) {
    throw Error(ErrorKind::BudgetExceeded, "element outside the coned-off universe");
  }
  auto it = coned.find(PackedWord::pack(x));
  if (it == coned.end()) {
    throw Error(ErrorKind::BudgetExceeded, "element " + to_string(x) + " outside the coned-off universe of radius " +
                                               std::to_string(options.coned_universe_radius));
  }
  return it->second;
}

MetricHandle MetricHandle::word(GeneratingSet S, MetricOptions options) {
  auto impl = std::make_shared<Impl>();
  impl->kind = MetricKind::Word;
  impl->rank = S.rank();
  impl->options = options;
  impl->basis = S.is_standard_basis();
  impl->factor_closed = S.is_factor_closed();
  impl->seg = Segmenter(S.rank(), S.elements());
  impl->gens = std::move(S);
  return MetricHandle(std::move(impl));
}

MetricHandle MetricHandle::pulled_back(Automorphism phi, MetricHandle inner, MetricOptions options) {
  if (phi.rank() != inner.rank()) throw Error(ErrorKind::InvalidArgument, "automorphism rank mismatch");
  auto impl = std::make_shared<Impl>();
  impl->kind = MetricKind::PulledBack;
  impl->rank = inner.rank();
  if (!options.delta && inner.impl_->options.delta) options.delta = inner.impl_->options.delta;
  if (!options.alpha_rg && inner.impl_->options.alpha_rg) options.alpha_rg = inner.impl_->options.alpha_rg;
  impl->options = options;
  impl->phi = std::move(phi);
  impl->inner = std::move(inner);
  return MetricHandle(std::move(impl));
}

MetricHandle MetricHandle::combination(double s, MetricHandle d1, double t, MetricHandle d2, MetricOptions options) {
  if (d1.rank() != d2.rank()) throw Error(ErrorKind::InvalidArgument, "combination rank mismatch");
  if (s < 0 || t < 0 || s + t <= 0) {
    throw Error(ErrorKind::InvalidArgument, "combination coefficients must be non-negative and not both zero");
  }
  auto impl = std::make_shared<Impl>();
  impl->kind = MetricKind::Combination;
  impl->rank = d1.rank();
  impl->options = options;
  impl->s = s;
  impl->t = t;
  impl->inner = std::move(d1);
  impl->second = std::move(d2);
  return MetricHandle(std::move(impl));
}

MetricHandle MetricHandle::matrix_log_norm(Representation<double> rho, MetricOptions options) {
  auto impl = std::make_shared<Impl>();
  impl->kind = MetricKind::MatrixLogNorm;
  impl->rank = rho.rank();
  impl->options = options;
  impl->rho = std::move(rho);
  return MetricHandle(std::move(impl));
}

MetricHandle MetricHandle::symmetrized_matrix_log_norm(Representation<double> rho, MetricOptions options) {
  MetricHandle m = matrix_log_norm(std::move(rho), options);
  m.impl_->kind = MetricKind::SymmetrizedMatrixLogNorm;
  return m;
}

MetricHandle MetricHandle::coned_off(GeneratingSet S, SubgroupGraph H, MetricOptions options) {
  if (H.rank() != S.rank()) throw Error(ErrorKind::InvalidArgument, "subgroup rank mismatch");
  auto impl = std::make_shared<Impl>();
  impl->kind = MetricKind::ConedOff;
  impl->rank = S.rank();
  impl->options = options;
  impl->seg = Segmenter(S.rank(), S.elements());
  impl->gens = std::move(S);
  impl->subgroup = std::move(H);
  return MetricHandle(std::move(impl));
}

MetricKind MetricHandle::kind() const noexcept { return impl_->kind; }
int MetricHandle::rank() const noexcept { return impl_->rank; }
const MetricOptions& MetricHandle::options() const noexcept { return impl_->options; }

bool MetricHandle::symmetric() const noexcept {
  switch (impl_->kind) {
    case MetricKind::Word:
    case MetricKind::ConedOff:
    case MetricKind::SymmetrizedMatrixLogNorm:
      return true;
    case MetricKind::PulledBack:
      return impl_->inner->symmetric();
    case MetricKind::Combination:
      return impl_->inner->symmetric() && impl_->second->symmetric();
    case MetricKind::MatrixLogNorm:
      return false;
  }
  return false;
}

bool MetricHandle::integer_valued() const noexcept {
  switch (impl_->kind) {
    case MetricKind::Word:
    case MetricKind::ConedOff:
      return true;
    case MetricKind::PulledBack:
      return impl_->inner->integer_valued();
    case MetricKind::Combination:
      return impl_->inner->integer_valued() && impl_->second->integer_valued() &&
             impl_->s == std::floor(impl_->s) && impl_->t == std::floor(impl_->t);
    default:
      return false;
  }
}

std::string MetricHandle::describe() const {
  std::ostringstream os;
  switch (impl_->kind) {
    case MetricKind::Word:
    case MetricKind::ConedOff: {
      os << to_string(impl_->kind) << "{";
      bool first = true;
      for (const auto& g : impl_->gens->elements()) {
        os << (first ? "" : ",") << to_string(g);
        first = false;
      }
      os << "}";
      if (impl_->kind == MetricKind::ConedOff) {
        os << "/H<";
        first = true;
        for (const auto& g : impl_->subgroup->generators()) {
          os << (first ? "" : ",") << to_string(g);
          first = false;
        }
        os << ">";
      }
      break;
    }
    case MetricKind::PulledBack: {
      os << "pullback[";
      for (int i = 0; i < impl_->phi->rank(); ++i) {
        os << (i ? "," : "") << letter_char(generator(i)) << "->" << to_string(impl_->phi->images()[static_cast<std::size_t>(i)]);
      }
      os << "](" << impl_->inner->describe() << ")";
      break;
    }
    case MetricKind::Combination:
      os << impl_->s << "*" << impl_->inner->describe() << "+" << impl_->t << "*" << impl_->second->describe();
      break;
    case MetricKind::MatrixLogNorm:
    case MetricKind::SymmetrizedMatrixLogNorm:
      os << to_string(impl_->kind) << "(dim " << impl_->rho->dim() << ")";
      break;
  }
  return os.str();
}

double MetricHandle::delta() const {
  if (impl_->options.delta) return *impl_->options.delta;
  if (impl_->kind == MetricKind::Word && impl_->basis) return 0.0;
  if (impl_->kind == MetricKind::PulledBack) return impl_->inner->delta();
  std::call_once(impl_->delta_once, [&] { impl_->delta_estimate = estimate_delta(*this, 400, 7); });
  return impl_->delta_estimate;
}

double MetricHandle::alpha_rg() const {
  if (impl_->options.alpha_rg) return *impl_->options.alpha_rg;
  if (impl_->kind == MetricKind::PulledBack) return impl_->inner->alpha_rg();
  return 0.0;
}

double MetricHandle::distance(const ReducedWord& x) const { return distance(x.letters()); }

double MetricHandle::distance(std::span<const Letter> x) const {
  const Impl& m = *impl_;
  switch (m.kind) {
    case MetricKind::Word: {
      if (m.basis) return static_cast<double>(x.size());
      if (m.factor_closed) return static_cast<double>(m.seg.length(x));
      return static_cast<double>(m.bfs_distance(ReducedWord::from_reduced({x.begin(), x.end()})));
    }
    case MetricKind::PulledBack:
      return m.inner->distance(m.phi->apply(ReducedWord::from_reduced({x.begin(), x.end()})));
    case MetricKind::Combination:
      return m.s * m.inner->distance(x) + m.t * m.second->distance(x);
    case MetricKind::MatrixLogNorm:
      return std::log(operator_norm((*m.rho)(x)));
    case MetricKind::SymmetrizedMatrixLogNorm: {
      const auto A = (*m.rho)(x);
      const ReducedWord inv = ReducedWord::from_reduced({x.begin(), x.end()}).inverse();
      return std::log(operator_norm(A)) + std::log(operator_norm((*m.rho)(inv)));
    }
    case MetricKind::ConedOff:
      return static_cast<double>(m.coned_distance(ReducedWord::from_reduced({x.begin(), x.end()})));
  }
  return 0.0;
}

std::optional<double> MetricHandle::exact_translation_length(const ReducedWord& x) const {
  const Impl& m = *impl_;
  switch (m.kind) {
    case MetricKind::Word: {
      const auto core = cyclic_reduce(x).core;
      if (m.basis) return static_cast<double>(core.length());
      if (m.factor_closed) return m.seg.cyclic_length(core.letters());
      return std::nullopt;
    }
    case MetricKind::PulledBack:
      return m.inner->exact_translation_length(m.phi->apply(x));
    case MetricKind::Combination: {
      auto a = m.inner->exact_translation_length(x);
      auto b = m.second->exact_translation_length(x);
      if (a && b) return m.s * *a + m.t * *b;
      return std::nullopt;
    }
    case MetricKind::MatrixLogNorm:
      return std::log(spectral_radius((*m.rho)(x)));
    case MetricKind::SymmetrizedMatrixLogNorm: {
      const auto A = (*m.rho)(x);
      return std::log(spectral_radius(A)) - std::log(smallest_eigenvalue_modulus(A));
    }
    case MetricKind::ConedOff:
      return std::nullopt;
  }
  return std::nullopt;
}

const GeneratingSet* MetricHandle::generating_set() const noexcept {
  return impl_->gens ? &*impl_->gens : nullptr;
}
const Segmenter* MetricHandle::segmenter() const noexcept {
  return (impl_->kind == MetricKind::Word && impl_->factor_closed) ? &impl_->seg : nullptr;
}
const Automorphism* MetricHandle::automorphism() const noexcept { return impl_->phi ? &*impl_->phi : nullptr; }
const MetricHandle* MetricHandle::inner() const noexcept { return impl_->inner ? &*impl_->inner : nullptr; }
std::pair<const MetricHandle*, const MetricHandle*> MetricHandle::components() const noexcept {
  return {impl_->inner ? &*impl_->inner : nullptr, impl_->second ? &*impl_->second : nullptr};
}
std::pair<double, double> MetricHandle::coefficients() const noexcept { return {impl_->s, impl_->t}; }
const Representation<double>* MetricHandle::representation() const noexcept {
  return impl_->rho ? &*impl_->rho : nullptr;
}
const SubgroupGraph* MetricHandle::subgroup() const noexcept {
  return impl_->subgroup ? &*impl_->subgroup : nullptr;
}

std::vector<std::pair<ReducedWord, int>> MetricHandle::bfs_ball(int radius) const {
  if (impl_->kind != MetricKind::Word) throw Error(ErrorKind::InvalidArgument, "bfs_ball needs a word metric");
  std::vector<std::pair<ReducedWord, int>> out;
  {
    std::lock_guard lock(impl_->memo_mutex);
    impl_->bfs_expand_to(radius);
    for (const auto& [key, d] : impl_->bfs.dist) {
      if (d <= radius) out.emplace_back(key.unpack(), d);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

// ---------------------------------------------------------------------------
// Translation lengths

double translation_length_exact(const GeneratingSet& S, const CyclicWord& c) {
  if (!S.is_standard_basis()) throw Error(ErrorKind::NotABasis, "exact translation length needs the standard basis");
  return static_cast<double>(c.length());
}

LengthBracket translation_length_bracket(const MetricHandle& m, const ReducedWord& x, int N) {
  if (N < 2) throw Error(ErrorKind::InvalidArgument, "translation bracket needs N >= 2");
  if (x.empty()) return {0, 0, N};
  std::vector<double> d(static_cast<std::size_t>(N) + 1, 0.0);
  ReducedWord p;
  for (int n = 1; n <= N; ++n) {
    p = multiply(p, x);
    d[static_cast<std::size_t>(n)] = m.distance(p);
  }
  double upper = d[1];
  for (int n = 1; n <= N; ++n) upper = std::min(upper, d[static_cast<std::size_t>(n)] / n);
  const double two_delta = 2 * m.delta();
  double lower = 0;
  for (int n = 1; 2 * n <= N; ++n) {
    lower = std::max(lower, (d[static_cast<std::size_t>(2 * n)] - d[static_cast<std::size_t>(n)] - two_delta) / n);
  }
  return {std::min(lower, upper), std::max(upper, 0.0), N};
}

LengthBracket translation_length(const MetricHandle& m, const ReducedWord& x, int N) {
  if (auto exact = m.exact_translation_length(x)) return {*exact, *exact, 0};
  return translation_length_bracket(m, x, N);
}

SandwichCheck verify_sandwich(const MetricHandle& m, const GeneratingSet& S_n, double n, const ReducedWord& x) {
  const MetricHandle word = MetricHandle::word(S_n);
  SandwichCheck c{};
  c.word_length = static_cast<int>(word.distance(x));
  c.psi = m.distance(x);
  c.lower = (n - m.alpha_rg() - 1) * c.word_length - (n - 1);
  c.upper = n * c.word_length;
  c.holds = c.lower <= c.psi + 1e-12 && c.psi <= c.upper + 1e-12;
  return c;
}

double coned_off_distance(const GeneratingSet& S, const SubgroupGraph& H, const ReducedWord& x, int universe_radius) {
  MetricOptions options;
  options.coned_universe_radius = universe_radius;
  return MetricHandle::coned_off(S, H, options).distance(x);
}

// ---------------------------------------------------------------------------
// Hyperbolicity

namespace {

ReducedWord random_word(std::mt19937_64& rng, int rank, int max_length) {
  std::uniform_int_distribution<int> len_dist(0, max_length);
  return random_reduced_word(rng, rank, len_dist(rng));
}

}  // namespace

double estimate_delta(const MetricHandle& m, int sample_size, std::uint64_t seed, int radius) {
  std::seed_seq seq{seed, std::uint64_t{0xde17a}};
  std::mt19937_64 rng(seq);
  auto d = [&](const ReducedWord& u, const ReducedWord& v) { return m.distance(multiply(u.inverse(), v)); };
  double worst = 0;
  for (int i = 0; i < sample_size; ++i) {
    const ReducedWord x = random_word(rng, m.rank(), radius);
    const ReducedWord y = random_word(rng, m.rank(), radius);
    const ReducedWord z = random_word(rng, m.rank(), radius);
    const ReducedWord w = random_word(rng, m.rank(), radius);
    auto gp = [&](const ReducedWord& a, const ReducedWord& b) {
      return 0.5 * (d(z, a) + d(z, b) - d(a, b));
    };
    const double xy = gp(x, y);
    const double xw = gp(x, w);
    const double yw = gp(y, w);
    worst = std::max(worst, std::min(xw, yw) - xy);
  }
  return worst;
}

}  // namespace mls
