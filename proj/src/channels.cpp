#include "cohcat/channels.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>

#include "cohcat/tolerance.hpp"

namespace cohcat {

namespace {

constexpr double kNonzero = 1e-12;

std::vector<std::size_t> block_layout_check(const SystemLayout& layout, std::size_t copies) {
  if (copies == 0 || layout.size() % copies != 0) {
    throw std::invalid_argument("symmetrize: layout does not split into equal blocks");
  }
  const std::size_t per = layout.size() / copies;
  const auto dims = layout.dims();
  for (std::size_t b = 1; b < copies; ++b) {
    for (std::size_t f = 0; f < per; ++f) {
      if (dims[b * per + f] != dims[f]) {
        throw std::invalid_argument("symmetrize: blocks have unequal dimensions");
      }
    }
  }
  return dims;
}

}  // namespace

double trace_preservation_error(const std::vector<Matrix>& kraus) {
  if (kraus.empty()) return std::numeric_limits<double>::infinity();
  Matrix sum = Matrix::Zero(kraus.front().cols(), kraus.front().cols());
  for (const auto& k : kraus) sum.noalias() += k.adjoint() * k;
  return (sum - Matrix::Identity(sum.rows(), sum.cols())).cwiseAbs().maxCoeff();
}

KrausChannel::KrausChannel(SystemLayout input, SystemLayout output, std::vector<Matrix> kraus)
    : input_(std::move(input)), output_(std::move(output)), kraus_(std::move(kraus)) {
  if (kraus_.empty()) throw std::invalid_argument("KrausChannel: no Kraus operators");
  const auto in = static_cast<Eigen::Index>(input_.total_dim());
  const auto out = static_cast<Eigen::Index>(output_.total_dim());
  for (const auto& k : kraus_) {
    if (k.rows() != out || k.cols() != in) {
      std::ostringstream msg;
      msg << "KrausChannel: operator is " << k.rows() << "x" << k.cols() << ", expected "
          << out << "x" << in;
      throw std::invalid_argument(msg.str());
    }
  }
  const double err = trace_preservation_error(kraus_);
  if (err > tol::psd) {
    std::ostringstream msg;
    msg << "KrausChannel: not trace preserving (max |sum K^+K - I| = " << err << ")";
    throw std::invalid_argument(msg.str());
  }
}

const std::vector<Matrix>& KrausChannel::kraus() const {
  if (kraus_.empty()) {
    throw std::logic_error("KrausChannel: Kraus family of this replacement channel is too large to materialize");
  }
  return kraus_;
}

KrausChannel KrausChannel::with_layouts(SystemLayout input, SystemLayout output) const {
  if (!input.same_dims(input_) || !output.same_dims(output_)) {
    throw std::invalid_argument("KrausChannel::with_layouts: dimensions differ");
  }
  KrausChannel out = *this;
  out.input_ = std::move(input);
  out.output_ = std::move(output);
  return out;
}

double trace_preservation_error(const KrausChannel& ch) {
  return ch.has_kraus() ? trace_preservation_error(ch.kraus()) : 0.0;
}

DensityOperator apply(const KrausChannel& ch, const DensityOperator& rho) {
  if (!rho.layout().same_dims(ch.input_layout())) {
    throw std::invalid_argument("apply: state layout does not match channel input layout");
  }
  if (ch.constant_output()) {
    return DensityOperator::trusted(ch.output_layout(), *ch.constant_output() * rho.matrix().trace());
  }
  const auto out_dim = static_cast<Eigen::Index>(ch.output_layout().total_dim());
  Matrix out = Matrix::Zero(out_dim, out_dim);
  Matrix tmp;
  for (const auto& k : ch.kraus()) {
    tmp.noalias() = k * rho.matrix();
    out.noalias() += tmp * k.adjoint();
  }
  return DensityOperator::trusted(ch.output_layout(), std::move(out));
}

bool is_incoherent_operation(const KrausChannel& ch) {
  if (!ch.has_kraus()) return ch.constant_incoherent_;
  for (const auto& k : ch.kraus()) {
    for (Eigen::Index j = 0; j < k.cols(); ++j) {
      int nonzero = 0;
      for (Eigen::Index i = 0; i < k.rows(); ++i) {
        if (std::abs(k(i, j)) > kNonzero) ++nonzero;
      }
      if (nonzero > 1) return false;
    }
  }
  return true;
}

KrausChannel identity_channel(const SystemLayout& layout) {
  const auto d = static_cast<Eigen::Index>(layout.total_dim());
  return KrausChannel(layout, layout, {Matrix::Identity(d, d)});
}

KrausChannel unitary_channel(const SystemLayout& layout, const Matrix& u) {
  return KrausChannel(layout, layout, {u});
}

KrausChannel dephasing_channel(const SystemLayout& layout, const std::vector<std::string>& subsystems) {
  const auto idx = layout.indices_of(subsystems);
  const auto dims = layout.dims();
  std::size_t outcomes = 1;
  for (auto i : idx) outcomes *= dims[i];
  const std::size_t total = layout.total_dim();

  std::vector<Matrix> kraus(outcomes, Matrix::Zero(total, total));
  for (std::size_t x = 0; x < total; ++x) {
    std::size_t rem = x, key = 0, radix = 1;
    for (std::size_t f = dims.size(); f-- > 0;) {
      const std::size_t digit = rem % dims[f];
      rem /= dims[f];
      if (std::find(idx.begin(), idx.end(), f) != idx.end()) {
        key += digit * radix;
        radix *= dims[f];
      }
    }
    kraus[key](x, x) = 1.0;
  }
  return KrausChannel(layout, layout, std::move(kraus));
}

KrausChannel classical_channel(const SystemLayout& layout, const Eigen::MatrixXd& transition) {
  const auto d = static_cast<Eigen::Index>(layout.total_dim());
  if (transition.rows() != d || transition.cols() != d) {
    throw std::invalid_argument("classical_channel: transition matrix has wrong shape");
  }
  if ((transition.array() < 0.0).any()) {
    throw std::invalid_argument("classical_channel: negative transition probability");
  }
  std::vector<Matrix> kraus;
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) {
      if (transition(j, i) == 0.0) continue;
      Matrix k = Matrix::Zero(d, d);
      k(j, i) = std::sqrt(transition(j, i));
      kraus.push_back(std::move(k));
    }
  }
  return KrausChannel(layout, layout, std::move(kraus));
}

KrausChannel permutation_channel(const SystemLayout& layout, const std::vector<std::size_t>& perm) {
  const auto dims = layout.dims();
  if (perm.size() != dims.size()) {
    throw std::invalid_argument("permutation_channel: permutation length does not match layout");
  }
  for (std::size_t i = 0; i < perm.size(); ++i) {
    if (perm[i] >= dims.size() || dims[perm[i]] != dims[i]) {
      throw std::invalid_argument(
          "permutation_channel: permuted factors must have equal dimensions");
    }
  }
  return KrausChannel(layout, layout, {permutation_unitary(dims, perm)});
}

std::vector<std::size_t> block_permutation(const SystemLayout& layout, std::size_t blocks,
                                           std::size_t factors_per_block,
                                           const std::vector<std::size_t>& block_perm) {
  if (blocks * factors_per_block > layout.size() || block_perm.size() != blocks) {
    throw std::invalid_argument("block_permutation: blocks do not fit the layout");
  }
  std::vector<std::size_t> perm(layout.size());
  std::iota(perm.begin(), perm.end(), 0);
  for (std::size_t b = 0; b < blocks; ++b) {
    if (block_perm[b] >= blocks) throw std::invalid_argument("block_permutation: bad block index");
    for (std::size_t f = 0; f < factors_per_block; ++f) {
      perm[b * factors_per_block + f] = block_perm[b] * factors_per_block + f;
    }
  }
  return perm;
}

KrausChannel register_shift(std::size_t dim_k, const std::string& label) {
  if (dim_k == 0) throw std::invalid_argument("register_shift: dimension must be positive");
  const auto d = static_cast<Eigen::Index>(dim_k);
  Matrix u = Matrix::Zero(d, d);
  for (Eigen::Index k = 0; k < d; ++k) u((k + 1) % d, k) = 1.0;
  const auto layout = SystemLayout::single(label, dim_k);
  return KrausChannel(layout, layout, {u});
}

KrausChannel replacement_channel(const SystemLayout& input, const DensityOperator& target) {
  const auto in = static_cast<Eigen::Index>(input.total_dim());
  const auto out = static_cast<Eigen::Index>(target.dim());
  const bool incoherent = is_incoherent(target);
  std::vector<std::pair<double, Vector>> prepared;
  if (incoherent) {
    for (Eigen::Index j = 0; j < out; ++j) {
      const double p = target.matrix()(j, j).real();
      if (p <= 0.0) continue;
      Vector v = Vector::Zero(out);
      v(j) = 1.0;
      prepared.emplace_back(p, std::move(v));
    }
  } else {
    const Spectrum s = hermitian_eig(target.matrix());
    for (Eigen::Index j = 0; j < out; ++j) {
      if (s.eigenvalues(j) <= tol::eigen_clamp) continue;
      prepared.emplace_back(s.eigenvalues(j), s.eigenvectors.col(j));
    }
  }
  double total = 0.0;
  for (const auto& [p, v] : prepared) total += p;

  KrausChannel ch;
  ch.input_ = input;
  ch.output_ = target.layout();
  ch.constant_output_ = target.matrix();
  ch.constant_incoherent_ = incoherent;
  const std::size_t entries = prepared.size() * static_cast<std::size_t>(in * in * out);
  if (entries <= kMaxReplacementEntries) {
    ch.kraus_.reserve(prepared.size() * in);
    for (const auto& [p, v] : prepared) {
      const Vector scaled = std::sqrt(p / total) * v;
      for (Eigen::Index i = 0; i < in; ++i) {
        Matrix k = Matrix::Zero(out, in);
        k.col(i) = scaled;
        ch.kraus_.push_back(std::move(k));
      }
    }
    const double err = trace_preservation_error(ch.kraus_);
    if (err > tol::psd) throw std::logic_error("replacement_channel: Kraus family not trace preserving");
  }
  return ch;
}

Matrix random_unitary(std::size_t dim, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  const auto d = static_cast<Eigen::Index>(dim);
  Matrix g(d, d);
  for (Eigen::Index j = 0; j < d; ++j) {
    for (Eigen::Index i = 0; i < d; ++i) g(i, j) = Complex(normal(rng), normal(rng));
  }
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  // Fix column phases against the diagonal of R for the Haar measure.
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < d; ++j) {
    const double mag = std::abs(r(j, j));
    if (mag > 0.0) q.col(j) *= r(j, j) / mag;
  }
  return q;
}

namespace {

Matrix random_phase_permutation(Eigen::Index d, std::mt19937_64& rng) {
  std::vector<Eigen::Index> image(d);
  std::iota(image.begin(), image.end(), 0);
  // Fisher-Yates with an explicit draw so the sequence is library independent.
  for (Eigen::Index i = d - 1; i > 0; --i) {
    const auto j = static_cast<Eigen::Index>(rng() % static_cast<std::uint64_t>(i + 1));
    std::swap(image[i], image[j]);
  }
  std::uniform_real_distribution<double> angle(0.0, 2.0 * 3.141592653589793);
  Matrix u = Matrix::Zero(d, d);
  for (Eigen::Index i = 0; i < d; ++i) u(image[i], i) = std::polar(1.0, angle(rng));
  return u;
}

}  // namespace

KrausChannel random_incoherent_channel(const SystemLayout& layout, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const auto d = static_cast<Eigen::Index>(layout.total_dim());
  switch (rng() % 4) {
    case 0:
      return unitary_channel(layout, random_phase_permutation(d, rng));
    case 1: {
      const double p = unit(rng);
      std::vector<Matrix> kraus{std::sqrt(p) * random_phase_permutation(d, rng),
                                std::sqrt(1.0 - p) * random_phase_permutation(d, rng)};
      return KrausChannel(layout, layout, std::move(kraus));
    }
    case 2: {
      std::exponential_distribution<double> expo(1.0);
      Eigen::MatrixXd t(d, d);
      for (Eigen::Index i = 0; i < d; ++i) {
        for (Eigen::Index j = 0; j < d; ++j) t(j, i) = unit(rng) < 0.5 ? expo(rng) : 0.0;
        if (t.col(i).sum() == 0.0) t(i, i) = 1.0;
        t.col(i) /= t.col(i).sum();
      }
      return classical_channel(layout, t);
    }
    default: {
      std::vector<std::string> chosen;
      for (const auto& f : layout.factors()) {
        if (unit(rng) < 0.5) chosen.push_back(f.label);
      }
      if (chosen.empty()) chosen.push_back(layout.factors().front().label);
      return compose(unitary_channel(layout, random_phase_permutation(d, rng)),
                     dephasing_channel(layout, chosen));
    }
  }
}

KrausChannel tensor(const KrausChannel& a, const KrausChannel& b) {
  std::vector<Matrix> kraus;
  kraus.reserve(a.kraus().size() * b.kraus().size());
  for (const auto& ka : a.kraus()) {
    for (const auto& kb : b.kraus()) kraus.push_back(tensor_product(ka, kb));
  }
  return KrausChannel(a.input_layout().concat(b.input_layout()),
                      a.output_layout().concat(b.output_layout()), std::move(kraus));
}

KrausChannel compose(const KrausChannel& second, const KrausChannel& first) {
  if (!first.output_layout().same_dims(second.input_layout())) {
    throw std::invalid_argument("compose: intermediate layouts do not match");
  }
  std::vector<Matrix> kraus;
  kraus.reserve(first.kraus().size() * second.kraus().size());
  for (const auto& k2 : second.kraus()) {
    for (const auto& k1 : first.kraus()) kraus.push_back(k2 * k1);
  }
  return KrausChannel(first.input_layout(), second.output_layout(), std::move(kraus));
}

KrausChannel embed(const KrausChannel& ch, const SystemLayout& full,
                   const std::vector<std::string>& subsystems) {
  if (!ch.input_layout().same_dims(ch.output_layout())) {
    throw std::invalid_argument("embed: channel must preserve dimensions");
  }
  const auto idx = full.indices_of(subsystems);
  const auto dims = full.dims();
  std::vector<std::size_t> sel_dims;
  for (auto i : idx) sel_dims.push_back(dims[i]);
  if (sel_dims != ch.input_layout().dims()) {
    throw std::invalid_argument("embed: subsystem dimensions do not match the channel");
  }
  // perm moves selected factors to the front (in the given order), the rest
  // after them in layout order.
  std::vector<std::size_t> perm(dims.size());
  std::size_t next = idx.size();
  for (std::size_t f = 0; f < dims.size(); ++f) {
    const auto it = std::find(idx.begin(), idx.end(), f);
    perm[f] = it != idx.end() ? static_cast<std::size_t>(it - idx.begin()) : next++;
  }
  const Matrix p = permutation_unitary(dims, perm);
  const auto rest = static_cast<Eigen::Index>(full.total_dim() / ch.input_layout().total_dim());
  const Matrix id = Matrix::Identity(rest, rest);
  std::vector<Matrix> kraus;
  kraus.reserve(ch.kraus().size());
  for (const auto& k : ch.kraus()) kraus.push_back(p.adjoint() * tensor_product(k, id) * p);
  return KrausChannel(full, full, std::move(kraus));
}

KrausChannel controlled_on_register(const KrausChannel& inner, std::size_t register_dim,
                                    std::size_t outcome, const std::string& label) {
  if (outcome >= register_dim) throw std::invalid_argument("controlled_on_register: bad outcome");
  if (!inner.input_layout().same_dims(inner.output_layout())) {
    throw std::invalid_argument("controlled_on_register: inner channel must preserve dimensions");
  }
  const auto k = static_cast<Eigen::Index>(register_dim);
  const auto d = static_cast<Eigen::Index>(inner.input_layout().total_dim());
  Matrix hit = Matrix::Zero(k, k);
  hit(outcome, outcome) = 1.0;
  const Matrix miss = Matrix::Identity(k, k) - hit;

  std::vector<Matrix> kraus;
  kraus.reserve(inner.kraus().size() + 1);
  kraus.push_back(tensor_product(Matrix(Matrix::Identity(d, d)), miss));
  for (const auto& op : inner.kraus()) kraus.push_back(tensor_product(op, hit));
  const auto reg = SystemLayout::single(label, register_dim,
                                        inner.input_layout().factors().front().party);
  return KrausChannel(inner.input_layout().concat(reg), inner.output_layout().concat(reg),
                      std::move(kraus));
}

KrausChannel symmetrization_channel(const SystemLayout& layout, std::size_t copies) {
  const auto dims = block_layout_check(layout, copies);
  const std::size_t per = layout.size() / copies;
  std::vector<std::size_t> order(copies);
  std::iota(order.begin(), order.end(), 0);
  std::vector<Matrix> kraus;
  do {
    kraus.push_back(permutation_unitary(dims, block_permutation(layout, copies, per, order)));
  } while (std::next_permutation(order.begin(), order.end()));
  const double scale = 1.0 / std::sqrt(static_cast<double>(kraus.size()));
  for (auto& k : kraus) k *= scale;
  return KrausChannel(layout, layout, std::move(kraus));
}

DensityOperator symmetrize(const DensityOperator& rho, std::size_t copies) {
  const auto dims = block_layout_check(rho.layout(), copies);
  const std::size_t per = rho.layout().size() / copies;
  std::vector<std::size_t> order(copies);
  std::iota(order.begin(), order.end(), 0);
  Matrix acc = Matrix::Zero(rho.dim(), rho.dim());
  std::size_t count = 0;
  do {
    acc += permute_factors(rho.matrix(), dims,
                           block_permutation(rho.layout(), copies, per, order));
    ++count;
  } while (std::next_permutation(order.begin(), order.end()));
  acc /= static_cast<double>(count);
  return DensityOperator::trusted(rho.layout(), std::move(acc));
}

double permutation_asymmetry(const DensityOperator& rho, std::size_t copies) {
  const auto dims = block_layout_check(rho.layout(), copies);
  const std::size_t per = rho.layout().size() / copies;
  std::vector<std::size_t> order(copies);
  std::iota(order.begin(), order.end(), 0);
  double worst = 0.0;
  do {
    const Matrix p = permute_factors(rho.matrix(), dims,
                                     block_permutation(rho.layout(), copies, per, order));
    worst = std::max(worst, (p - rho.matrix()).cwiseAbs().maxCoeff());
  } while (std::next_permutation(order.begin(), order.end()));
  return worst;
}

}  // namespace cohcat
