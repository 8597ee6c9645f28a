#include <map>

#include "sflab/term.hpp"

namespace sflab {

namespace {

std::string hint_for_depth(std::uint32_t d) {
  static const char* names[] = {"x", "y", "z", "u", "v", "w"};
  if (d < 6) return names[d];
  return "x" + std::to_string(d);
}

class NormalEnumerator {
 public:
  const std::vector<Term>& normal(std::uint32_t size, std::uint32_t depth) {
    auto key = std::make_pair(size, depth);
    if (auto it = nf_.find(key); it != nf_.end()) return it->second;
    std::vector<Term> out;
    if (size >= 2) {
      for (const Term& b : normal(size - 1, depth + 1))
        out.push_back(Term::lam(hint_for_depth(depth), b));
    }
    const auto& ne = neutral(size, depth);
    out.insert(out.end(), ne.begin(), ne.end());
    return nf_.emplace(key, std::move(out)).first->second;
  }

  const std::vector<Term>& neutral(std::uint32_t size, std::uint32_t depth) {
    auto key = std::make_pair(size, depth);
    if (auto it = ne_.find(key); it != ne_.end()) return it->second;
    std::vector<Term> out;
    if (size == 1) {
      for (std::uint32_t i = 0; i < depth; ++i) out.push_back(Term::bound(i));
    } else if (size >= 3) {
      for (std::uint32_t k = 1; k + 1 < size; ++k) {
        const auto& fs = neutral(k, depth);
        if (fs.empty()) continue;
        const auto& as = normal(size - 1 - k, depth);
        for (const Term& f : fs)
          for (const Term& a : as) out.push_back(Term::app(f, a));
      }
    }
    return ne_.emplace(key, std::move(out)).first->second;
  }

 private:
  std::map<std::pair<std::uint32_t, std::uint32_t>, std::vector<Term>> nf_, ne_;
};

class AllEnumerator {
 public:
  explicit AllEnumerator(std::vector<std::string> names) : names_(std::move(names)) {}

  const std::vector<Term>& terms(std::uint32_t size, std::uint32_t depth) {
    auto key = std::make_pair(size, depth);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    std::vector<Term> out;
    if (size == 1) {
      for (std::uint32_t i = 0; i < depth; ++i) out.push_back(Term::bound(i));
      for (const auto& n : names_) out.push_back(Term::free(n));
    } else {
      for (const Term& b : terms(size - 1, depth + 1))
        out.push_back(Term::lam(hint_for_depth(depth), b));
      for (std::uint32_t k = 1; k + 1 < size; ++k) {
        const auto& fs = terms(k, depth);
        const auto& as = terms(size - 1 - k, depth);
        for (const Term& f : fs)
          for (const Term& a : as) out.push_back(Term::app(f, a));
      }
    }
    return memo_.emplace(key, std::move(out)).first->second;
  }

 private:
  std::vector<std::string> names_;
  std::map<std::pair<std::uint32_t, std::uint32_t>, std::vector<Term>> memo_;
};

}  // namespace

std::vector<Term> enumerate_closed_beta_normal(std::uint32_t max_size) {
  NormalEnumerator e;
  std::vector<Term> out;
  for (std::uint32_t s = 1; s <= max_size; ++s) {
    const auto& v = e.normal(s, 0);
    out.insert(out.end(), v.begin(), v.end());
  }
  return out;
}

std::vector<Term> enumerate_terms(std::uint32_t max_size,
                                  const std::vector<std::string>& names) {
  AllEnumerator e(names);
  std::vector<Term> out;
  for (std::uint32_t s = 1; s <= max_size; ++s) {
    const auto& v = e.terms(s, 0);
    out.insert(out.end(), v.begin(), v.end());
  }
  return out;
}

}  // namespace sflab
