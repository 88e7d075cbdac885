#include "infladiff/classify.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <numeric>
#include <queue>

#include "infladiff/error.hpp"

namespace infladiff {

const char* to_string(PvStatus s) noexcept {
  switch (s) {
    case PvStatus::PisotUnit: return "PisotUnit";
    case PvStatus::Integer: return "Integer";
    case PvStatus::NonPisot: return "NonPisot";
  }
  return "?";
}

const char* to_string(SpectralType s) noexcept {
  switch (s) {
    case SpectralType::PurePoint: return "PurePoint";
    case SpectralType::TrivialBraggPlusContinuous: return "TrivialBraggPlusContinuous";
  }
  return "?";
}

int ConstantLengthSub::letter_index(char c) const {
  const auto pos = alphabet.find(c);
  return pos == std::string::npos ? -1 : static_cast<int>(pos);
}

void ConstantLengthSub::validate() const {
  if (alphabet.empty() || alphabet.size() > 16)
    throw Error(ErrorCode::InvalidArgument, "alphabet must have 1..16 letters");
  if (images.size() != alphabet.size())
    throw Error(ErrorCode::InvalidArgument, "one image per letter required");
  const std::size_t q = images.front().size();
  for (const auto& img : images) {
    if (img.size() != q || q == 0)
      throw Error(ErrorCode::InvalidArgument, "images must share a positive length");
    for (char c : img)
      if (letter_index(c) < 0) throw Error(ErrorCode::InvalidArgument, "image letter outside alphabet");
  }
}

std::string ConstantLengthSub::apply(const std::string& word, int times) const {
  std::string cur = word;
  for (int t = 0; t < times; ++t) {
    std::string next;
    next.reserve(cur.size() * length());
    for (char c : cur) {
      const int k = letter_index(c);
      if (k < 0) throw Error(ErrorCode::InvalidArgument, "letter outside alphabet");
      next += images[static_cast<std::size_t>(k)];
    }
    cur = std::move(next);
  }
  return cur;
}

std::string encode_recoded(const Word& word, std::int64_t ell) {
  const auto block = static_cast<std::size_t>(ell + 1);
  std::string out;
  std::size_t i = 0;
  while (i < word.size()) {
    if (word[i] == 0) {
      out.push_back('a');
      ++i;
      continue;
    }
    std::size_t run = 0;
    while (i < word.size() && word[i] == 1) {
      ++run;
      ++i;
    }
    if (run % block != 0)
      throw Error(ErrorCode::RecodingMismatch, "run of 1s not a multiple of ell+1");
    out.append(run / block, 'b');
  }
  return out;
}

Word decode_recoded(const std::string& word, std::int64_t ell) {
  Word out;
  for (char c : word) {
    if (c == 'a') {
      out.push_back(0);
    } else if (c == 'b') {
      for (std::int64_t k = 0; k <= ell; ++k) out.push_back(1);
    } else {
      throw Error(ErrorCode::InvalidArgument, "recoded word letters must be a or b");
    }
  }
  return out;
}

ConstantLengthSub recode_constant_length(std::int64_t ell) {
  if (ell < 1) throw Error(ErrorCode::InvalidArgument, "ell must be >= 1");
  const auto q = static_cast<std::size_t>(ell + 1);
  ConstantLengthSub sub{"ab", {"a" + std::string(q - 1, 'b'), std::string(q, 'a')}};

  const InflationRule rule(ell * (ell + 1));
  const Word w = substitute(Word("0"), rule, 4);
  const std::string encoded = encode_recoded(w, ell);
  if (!(decode_recoded(encoded, ell) == w))
    throw Error(ErrorCode::RecodingMismatch, "decode(encode(w)) != w");
  if (encode_recoded(substitute(w, rule, 1), ell) != sub.apply(encoded))
    throw Error(ErrorCode::RecodingMismatch, "induced substitution disagrees with rho");
  return sub;
}

CoincidenceResult has_coincidence(const ConstantLengthSub& sub) {
  sub.validate();
  const std::size_t q = sub.length();
  const std::uint32_t full = (std::uint32_t{1} << sub.alphabet.size()) - 1;

  std::map<std::uint32_t, std::pair<std::uint32_t, std::size_t>> parent;
  std::queue<std::uint32_t> frontier;
  parent[full] = {full, 0};
  frontier.push(full);
  while (!frontier.empty()) {
    const std::uint32_t col = frontier.front();
    frontier.pop();
    if (std::popcount(col) == 1) {
      CoincidenceResult res{true, {}};
      for (std::uint32_t c = col; c != full; c = parent[c].first) res.witness.push_back(parent[c].second);
      std::reverse(res.witness.begin(), res.witness.end());
      return res;
    }
    for (std::size_t p = 0; p < q; ++p) {
      std::uint32_t next = 0;
      for (std::size_t s = 0; s < sub.alphabet.size(); ++s)
        if (col & (std::uint32_t{1} << s))
          next |= std::uint32_t{1} << sub.letter_index(sub.images[s][p]);
      if (!parent.contains(next)) {
        parent[next] = {col, p};
        frontier.push(next);
      }
    }
  }
  return {};
}

namespace {

std::int64_t return_gcd(const std::string& u) {
  std::int64_t g = 0;
  for (std::size_t k = 1; k < u.size(); ++k)
    if (u[k] == u[0]) g = std::gcd(g, static_cast<std::int64_t>(k));
  return g;
}

}  // namespace

std::int64_t height(const ConstantLengthSub& sub, std::size_t prefix_length) {
  sub.validate();
  const std::size_t q = sub.length();
  const char first = sub.alphabet[0];
  if (sub.images[0][0] != first)
    throw Error(ErrorCode::InvalidArgument, "no fixed point starting with first letter");
  prefix_length = std::max(prefix_length, q * q * q);

  auto prefix = [&](std::size_t len) {
    std::string u(1, first);
    while (u.size() < len) {
      if (q == 1) break;
      u = sub.apply(u);
    }
    if (u.size() > len) u.resize(len);
    return u;
  };

  std::size_t len = prefix_length;
  std::int64_t g = return_gcd(prefix(len));
  for (int round = 0; round < 8; ++round) {
    const std::int64_t g2 = return_gcd(prefix(2 * len));
    len *= 2;
    if (g2 == g) break;
    g = g2;
  }
  // letter never returns on the prefix (only possible for degenerate rules)
  if (g == 0) return 1;
  std::int64_t h = 1;
  for (std::int64_t n = 1; n <= g; ++n)
    if (g % n == 0 && std::gcd(n, static_cast<std::int64_t>(q)) == 1) h = n;
  return h;
}

SpectrumReport spectral_type(std::int64_t m) {
  const Ring ring(m);
  SpectrumReport rep;
  rep.m = m;
  rep.lambda_plus = ring.lambda_plus();
  rep.lambda_minus = ring.lambda_minus();
  if (ring.integral()) {
    const std::int64_t ell = (ring.sqrt_discriminant() - 1) / 2;
    rep.pv_status = PvStatus::Integer;
    rep.ell = ell;
    const ConstantLengthSub sub = recode_constant_length(ell);
    const CoincidenceResult c = has_coincidence(sub);
    rep.coincidence = c.found;
    rep.coincidence_witness = c.witness;
    rep.height = height(sub);
    rep.spectral_type = (c.found && *rep.height == 1) ? SpectralType::PurePoint
                                                      : SpectralType::TrivialBraggPlusContinuous;
  } else if (std::abs(rep.lambda_minus) < 1.0) {
    // irrational lambda with |lambda_minus| < 1 happens only for m = 1
    rep.pv_status = PvStatus::PisotUnit;
    rep.spectral_type = SpectralType::PurePoint;
  } else {
    rep.pv_status = PvStatus::NonPisot;
    rep.spectral_type = SpectralType::TrivialBraggPlusContinuous;
  }
  return rep;
}

}  // namespace infladiff
