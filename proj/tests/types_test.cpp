#include <gtest/gtest.h>

#include <map>
#include <random>

#include "sflab/error.hpp"
#include "sflab/types.hpp"

using namespace sflab;

namespace {

Ty P(const char* s) { return parse_type(s); }

// a and b agree up to a bijective renaming of variables outside `fixed`.
bool same_shape(const Ty& a, const Ty& b, const std::set<std::string>& fixed,
                std::map<std::string, std::string>& ab, std::map<std::string, std::string>& ba) {
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case Ty::Kind::Var: {
      if (fixed.count(a.name()) || fixed.count(b.name())) return a.name() == b.name();
      auto [i, fresh] = ab.emplace(a.name(), b.name());
      auto [j, fresh2] = ba.emplace(b.name(), a.name());
      return i->second == b.name() && j->second == a.name();
    }
    case Ty::Kind::Arrow:
      return same_shape(a.dom(), b.dom(), fixed, ab, ba) &&
             same_shape(a.cod(), b.cod(), fixed, ab, ba);
    case Ty::Kind::Forall: return same_shape(a.body(), b.body(), fixed, ab, ba);
  }
  return false;
}

bool same_shape(const Ty& a, const Ty& b, const std::set<std::string>& fixed) {
  std::map<std::string, std::string> ab, ba;
  return same_shape(a, b, fixed, ab, ba);
}

bool quantifier_free(const Ty& t) {
  if (t.is_var()) return true;
  if (t.is_arrow()) return quantifier_free(t.dom()) && quantifier_free(t.cod());
  return false;
}

// Skeleton after renaming binders apart, so shadowed names stay distinct.
Ty sk_apart(const Ty& t) {
  FreshNames names(type_all_vars(t));
  return skeleton(rename_bound_apart(t, names));
}

const std::vector<Ty>& corpus() {
  static const std::vector<Ty> ts = enumerate_types(6, {"X", "Y"});
  return ts;
}

}  // namespace

TEST(TypeParse, Structure) {
  Ty t = P("forall X. (X -> X) -> X -> X");
  ASSERT_EQ(t.kind(), Ty::Kind::Forall);
  EXPECT_EQ(t.name(), "X");
  ASSERT_TRUE(t.body().is_arrow());
  EXPECT_TRUE(t.body().dom().is_arrow());
  EXPECT_TRUE(t.body().cod().is_arrow());

  Ty r = P("X -> Y -> X");
  EXPECT_TRUE(r.dom().is_var());
  EXPECT_EQ(r.cod().dom().name(), "Y");
}

TEST(TypeParse, ForallExtendsRight) {
  Ty t = P("forall Y.X->X");
  ASSERT_EQ(t.kind(), Ty::Kind::Forall);
  EXPECT_TRUE(t.body().is_arrow());
}

TEST(TypeParse, RoundTripCorpus) {
  ASSERT_GE(corpus().size(), 100u);
  for (const Ty& t : corpus()) {
    std::string s = render_type(t);
    EXPECT_EQ(canonical_key(parse_type(s)), canonical_key(t)) << s;
    EXPECT_EQ(render_type(parse_type(s)), s);
  }
}

TEST(TypeParse, Errors) {
  for (const char* bad : {"", "x", "X ->", "forall x. X", "(X", "X Y"}) {
    EXPECT_THROW(parse_type(bad), Error) << bad;
  }
}

TEST(Classify, Examples) {
  auto ex = classify(P("((forall Y. X) -> X) -> X -> X"));
  EXPECT_TRUE(ex.forall_plus2);
  EXPECT_FALSE(ex.proper);
  EXPECT_TRUE(ex.forall_trivial);

  auto nat = classify(P("forall X. (X -> X) -> X -> X"));
  EXPECT_TRUE(nat.pi && nat.forall_plus2 && nat.proper && nat.forall_plus);

  auto neg = classify(P("(forall Y. Y -> Y) -> X -> X"));
  EXPECT_FALSE(neg.forall_plus2);
}

TEST(Classify, Invariants) {
  for (const Ty& t : corpus()) {
    auto c = classify(t);
    std::string s = render_type(t);
    EXPECT_EQ(c.simple, quantifier_free(t)) << s;
    if (c.simple) EXPECT_TRUE(c.pi && c.sigma0 && c.forall_plus2 && c.forall_minus2) << s;
    EXPECT_EQ(c.forall_plus, c.forall_plus2 && c.proper) << s;
    EXPECT_EQ(c.forall_minus, c.forall_minus2 && c.proper) << s;
    if (c.forall_plus2 && c.forall_minus2) EXPECT_TRUE(c.simple) << s;
    if (c.forall_trivial && c.proper) EXPECT_TRUE(c.simple) << s;
  }
}

TEST(Skeleton, Examples) {
  EXPECT_EQ(render_type(skeleton(P("forall X. (X -> X) -> X -> X"))), "(X -> X) -> X -> X");
  EXPECT_EQ(render_type(skeleton(P("X"))), "X");
  EXPECT_EQ(render_type(skeleton(P("((forall Y. X) -> X) -> X -> X"))), "(X -> X) -> X -> X");
}

TEST(Translate, Examples) {
  EXPECT_EQ(canonical_key(translate_plus(P("((forall Y. X) -> X) -> X -> X"))),
            canonical_key(P("forall Y. (X -> X) -> X -> X")));
  EXPECT_EQ(render_type(translate_plus(P("X"))), "X");
  EXPECT_EQ(canonical_key(translate_plus(P("forall X. (X -> X) -> X -> X"))),
            canonical_key(P("forall X. (X -> X) -> X -> X")));
  EXPECT_THROW(translate_plus(P("(forall Y. Y -> Y) -> X -> X")), Error);
}

TEST(Translate, ClassesAndSkeletons) {
  for (const Ty& t : corpus()) {
    auto c = classify(t);
    const std::string s = render_type(t);
    if (c.forall_plus2) {
      Ty plus = translate_plus(t);
      EXPECT_TRUE(classify(plus).pi) << s;
      EXPECT_TRUE(same_shape(skeleton(strip_foralls(plus).second), sk_apart(t), type_free_vars(t)))
          << s << " / " << render_type(plus);
      EXPECT_EQ(type_free_vars(plus), type_free_vars(t)) << s;
    }
    if (c.forall_minus2) {
      Ty minus = translate_minus(t);
      EXPECT_TRUE(classify(minus).sigma0) << s;
      EXPECT_TRUE(same_shape(skeleton(minus), sk_apart(t), type_free_vars(t)))
          << s << " / " << render_type(minus);
    }
    if (c.simple) {
      EXPECT_EQ(canonical_key(translate_plus(t)), canonical_key(t));
      EXPECT_EQ(canonical_key(translate_minus(t)), canonical_key(t));
    }
  }
}

TEST(Translate, ArrowClausesAgree) {
  // (a -> b)+ hoists the quantifiers of a- and b+; its body is a- body -> b+ body.
  for (const Ty& a : corpus()) {
    if (a.size() > 4 || !classify(a).forall_minus2) continue;
    for (const Ty& b : corpus()) {
      if (b.size() > 3 || !classify(b).forall_plus2) continue;
      Ty whole = Ty::arrow(a, b);
      ASSERT_TRUE(classify(whole).forall_plus2);
      Ty plus = translate_plus(whole);
      EXPECT_TRUE(classify(plus).pi);
      EXPECT_TRUE(same_shape(skeleton(plus), sk_apart(whole),
                             type_free_vars(whole)))
          << render_type(whole) << " / " << render_type(plus);
    }
  }
}

TEST(IdTerm, Examples) {
  EXPECT_EQ(id_term(P("X")), parse_term("\\x.x"));
  EXPECT_EQ(id_term(P("X -> X")), parse_term("\\x.\\y.x y"));
  EXPECT_EQ(id_term(P("forall X. X -> X")), parse_term("\\x.\\y.x y"));
}

TEST(IdTerm, EtaReducesToIdentity) {
  std::mt19937_64 rng(3);
  const auto& ts = corpus();
  for (int i = 0; i < 50; ++i) {
    const Ty& t = ts[rng() % ts.size()];
    Term id = id_term(t);
    EXPECT_TRUE(id.beta_normal());
    auto r = normalize(id, Reduction::BetaEta);
    ASSERT_TRUE(r.result);
    EXPECT_EQ(*r.result, parse_term("\\x.x")) << render_type(t);
  }
}

TEST(GammaInf, Declarations) {
  EXPECT_EQ(canonical_key(gamma_inf_decl(0)), canonical_key(type_at(0)));
  for (std::uint64_t j : {0u, 3u, 7u}) {
    for (std::uint64_t k = 0; k < 20; ++k) {
      EXPECT_EQ(canonical_key(gamma_inf_decl(cantor_pair(j, k))), canonical_key(type_at(j)));
    }
  }
  std::size_t hits = 0;
  const std::string x0 = canonical_key(P("X0"));
  for (std::uint64_t i = 0; i <= 10000; ++i) {
    auto [a, b] = cantor_unpair(i);
    EXPECT_EQ(cantor_pair(a, b), i);
    if (canonical_key(gamma_inf_decl(i)) == x0) ++hits;
  }
  // row j = 0 of the pairing meets every diagonal once
  EXPECT_GE(hits, 100u);
}

TEST(TypeEnumeration, SizeMajorAndDistinct) {
  std::set<std::string> keys;
  std::uint32_t last = 0;
  for (std::uint64_t j = 0; j < 300; ++j) {
    Ty t = type_at(j);
    EXPECT_GE(t.size(), last);
    last = t.size();
    EXPECT_TRUE(keys.insert(canonical_key(t)).second) << render_type(t);
  }
}
