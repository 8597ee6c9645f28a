#include <gtest/gtest.h>

#include <functional>
#include <map>
#include <random>

#include "sflab/error.hpp"
#include "sflab/term.hpp"

using namespace sflab;

namespace {

Term T(const char* s) { return parse_term(s); }

// Count of closed beta-normal terms of size n with k binders in scope,
// straight from the grammar nf ::= \x.nf | ne, ne ::= var | ne nf.
struct NormalCounter {
  std::map<std::pair<int, int>, std::uint64_t> nf_memo, ne_memo;
  std::uint64_t nf(int n, int k) {
    if (n <= 0) return 0;
    auto key = std::make_pair(n, k);
    if (auto it = nf_memo.find(key); it != nf_memo.end()) return it->second;
    std::uint64_t c = nf(n - 1, k + 1) + ne(n, k);
    return nf_memo[key] = c;
  }
  std::uint64_t ne(int n, int k) {
    if (n <= 0) return 0;
    if (n == 1) return static_cast<std::uint64_t>(k);
    auto key = std::make_pair(n, k);
    if (auto it = ne_memo.find(key); it != ne_memo.end()) return it->second;
    std::uint64_t c = 0;
    for (int i = 1; i < n - 1; ++i) c += ne(i, k) * nf(n - 1 - i, k);
    return ne_memo[key] = c;
  }
};

// Random term over free names a, b with binders drawn from depth.
Term random_term(std::mt19937_64& rng, int budget, int depth) {
  int pick = static_cast<int>(rng() % 3);
  if (budget <= 1 || pick == 0) {
    if (depth > 0 && rng() % 3 != 0) return Term::bound(static_cast<std::uint32_t>(rng() % depth));
    return Term::free(rng() % 2 ? "a" : "b");
  }
  if (pick == 1) return Term::lam("v", random_term(rng, budget - 1, depth + 1));
  int left = 1 + static_cast<int>(rng() % (budget - 1));
  return Term::app(random_term(rng, left, depth), random_term(rng, budget - left, depth));
}

}  // namespace

TEST(Parse, Structure) {
  Term id = T("\\x.x");
  ASSERT_TRUE(id.is_lam());
  EXPECT_TRUE(id.body().is_bound());
  EXPECT_EQ(id.body().index(), 0u);

  Term k = T("\\x.\\y.x y");
  ASSERT_TRUE(k.body().body().is_app());
  EXPECT_EQ(k.body().body().fun().index(), 1u);
  EXPECT_EQ(k.body().body().arg().index(), 0u);

  Term r = T("(\\x.x) y");
  ASSERT_TRUE(r.is_app());
  EXPECT_TRUE(r.fun().is_lam());
  EXPECT_TRUE(r.arg().is_free());
  EXPECT_EQ(r.arg().name(), "y");
}

TEST(Parse, AlphaEquivalentTermsAreEqual) {
  EXPECT_EQ(T("\\x.\\y.x y"), T("\\a.\\b.a b"));
  EXPECT_NE(T("\\x.\\y.x y"), T("\\x.\\y.y x"));
  EXPECT_EQ(T("\\x.\\y.x y").hash(), T("\\u.\\v.u v").hash());
}

TEST(Parse, SyntaxErrors) {
  for (const char* bad : {"", "\\x.", "(x", "x)", "\\X.x", "x . y", "\\.x"}) {
    try {
      parse_term(bad);
      ADD_FAILURE() << "accepted: " << bad;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::Syntax) << bad;
    }
  }
}

TEST(Parse, RenderRoundTrip) {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 500; ++i) {
    Term t = random_term(rng, 1 + static_cast<int>(rng() % 12), 0);
    std::string s = render(t);
    EXPECT_EQ(parse_term(s), t) << s;
    EXPECT_EQ(render(parse_term(s)), s);
  }
}

TEST(Size, NodeCount) {
  EXPECT_EQ(T("x").size(), 1u);
  EXPECT_EQ(T("\\x.x").size(), 2u);
  EXPECT_EQ(T("\\x.\\y.x y").size(), 5u);
}

TEST(Substitute, CaptureAvoiding) {
  EXPECT_EQ(substitute(T("x y"), T("\\z.z"), "x"), T("(\\z.z) y"));
  Term r = substitute(T("\\y.x"), T("y"), "x");
  ASSERT_TRUE(r.is_lam());
  EXPECT_TRUE(r.body().is_free());
  EXPECT_EQ(r.body().name(), "y");
  EXPECT_EQ(render(r), "\\y1.y");
  EXPECT_EQ(substitute(T("x"), T("q"), "y"), T("x"));
}

TEST(Reducts, OneStep) {
  // both redexes give the same term up to alpha
  auto b = reducts(T("(\\x.x)((\\y.y) z)"), Reduction::Beta);
  ASSERT_EQ(b.size(), 1u);
  EXPECT_EQ(b[0], T("(\\y.y) z"));
  EXPECT_EQ(b[0], T("(\\x.x) z"));
  auto two = reducts(T("(\\x.x y)((\\y.y) z)"), Reduction::Beta);
  ASSERT_EQ(two.size(), 2u);
  EXPECT_NE(std::find(two.begin(), two.end(), T("(\\y.y) z y")), two.end());
  EXPECT_NE(std::find(two.begin(), two.end(), T("(\\x.x y) z")), two.end());

  auto w = reducts(T("(\\x.x)((\\y.y) z)"), Reduction::WeakHead);
  ASSERT_EQ(w.size(), 1u);
  EXPECT_EQ(w[0], T("(\\y.y) z"));

  auto e = reducts(T("\\x.f x"), Reduction::Eta);
  ASSERT_EQ(e.size(), 1u);
  EXPECT_EQ(e[0], T("f"));
  EXPECT_TRUE(reducts(T("\\x.x x"), Reduction::Eta).empty());
}

TEST(Reducts, WeakHeadIsABetaReduct) {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 400; ++i) {
    Term t = random_term(rng, 2 + static_cast<int>(rng() % 10), 0);
    auto w = wh_reduct(t);
    if (!w) continue;
    auto b = reducts(t, Reduction::Beta);
    EXPECT_NE(std::find(b.begin(), b.end(), *w), b.end()) << render(t);
  }
}

TEST(Normalize, Examples) {
  auto a = normalize(T("(\\x.x)(\\y.y)"), Reduction::Beta, 100);
  ASSERT_TRUE(a.result);
  EXPECT_EQ(*a.result, T("\\y.y"));

  auto o = normalize(T("(\\x.x x)(\\x.x x)"), Reduction::Beta, 100);
  EXPECT_FALSE(o.result);
  EXPECT_TRUE(o.exhausted);

  auto i = normalize(T("\\x.\\y.(\\z.z)(x((\\z.z)y))"), Reduction::Beta, 100);
  ASSERT_TRUE(i.result);
  EXPECT_EQ(*i.result, T("\\x.\\y.x y"));

  auto be = normalize(T("\\x.\\y.x y"), Reduction::BetaEta, 100);
  ASSERT_TRUE(be.result);
  EXPECT_EQ(*be.result, T("\\x.x"));
}

TEST(Normalize, StrategyIndependentOnSnTerms) {
  std::mt19937_64 rng(5);
  int checked = 0;
  while (checked < 200) {
    Term t = random_term(rng, 3 + static_cast<int>(rng() % 10), 0);
    if (!is_sn(t, 20000)) continue;
    auto lo = normalize(t, Reduction::Beta, kDefaultFuel, Strategy::LeftmostOutermost);
    auto ri = normalize(t, Reduction::Beta, kDefaultFuel, Strategy::RightmostInnermost);
    ASSERT_TRUE(lo.result && ri.result) << render(t);
    EXPECT_EQ(*lo.result, *ri.result) << render(t);
    EXPECT_TRUE(lo.result->beta_normal());
    ++checked;
  }
}

TEST(Normalize, ChurchRosserSpotCheck) {
  std::mt19937_64 rng(13);
  int checked = 0;
  while (checked < 500) {
    Term t = random_term(rng, 3 + static_cast<int>(rng() % 9), 0);
    if (!is_sn(t, 20000)) continue;
    ReductGraph g = explore_reducts(t, Reduction::Beta, 20000);
    ASSERT_TRUE(g.complete);
    std::vector<Term> ends;
    for (std::size_t i = 0; i < g.nodes.size(); ++i) {
      if (g.succ[i].empty()) ends.push_back(g.nodes[i]);
    }
    ASSERT_EQ(ends.size(), 1u) << render(t);
    EXPECT_TRUE(ends[0].beta_normal());
    ++checked;
  }
}

TEST(StrongNormalization, Verdicts) {
  EXPECT_EQ(is_strongly_normalizing(T("\\x.x")).status, SnVerdict::Status::Yes);
  auto omega = is_strongly_normalizing(T("(\\x.x x)(\\x.x x)"));
  EXPECT_EQ(omega.status, SnVerdict::Status::No);
  EXPECT_FALSE(omega.cycle.empty());
  EXPECT_EQ(is_strongly_normalizing(T("(\\x.y)((\\x.x x)(\\x.x x))")).status,
            SnVerdict::Status::No);
  // grows without repeating: never reported as No
  auto grow = is_strongly_normalizing(T("(\\x.x x x)(\\x.x x x)"), 2000);
  EXPECT_EQ(grow.status, SnVerdict::Status::Unknown);
}

TEST(StrongNormalization, NoVerdictCarriesACycle) {
  auto v = is_strongly_normalizing(T("(\\x.y)((\\x.x x)(\\x.x x))"));
  ASSERT_EQ(v.status, SnVerdict::Status::No);
  ASSERT_GE(v.cycle.size(), 1u);
  auto succ = reducts(v.cycle.back(), Reduction::Beta);
  EXPECT_NE(std::find(succ.begin(), succ.end(), v.cycle.front()), succ.end());
}

TEST(TermClass, Flags) {
  auto a = term_class(T("x y"));
  EXPECT_TRUE(a.neutral && a.beta_normal && !a.value && !a.nn);
  auto b = term_class(T("\\x.x"));
  EXPECT_TRUE(b.value && b.beta_normal && !b.neutral);
  auto c = term_class(T("x((\\z.z)y)"));
  EXPECT_TRUE(c.neutral && c.nn && !c.beta_normal);
}

TEST(Equiv, Examples) {
  EXPECT_EQ(equiv(T("(\\x.x) y"), T("y"), Reduction::Beta), Tri::True);
  EXPECT_EQ(equiv(T("\\x.f x"), T("f"), Reduction::BetaEta), Tri::True);
  EXPECT_EQ(equiv(T("\\x.f x"), T("f"), Reduction::Beta), Tri::False);
  EXPECT_EQ(equiv(T("\\x1.\\x2.f (x1 x2)"), T("\\x1.\\x2.x1 (f x2)"), Reduction::BetaEta),
            Tri::False);
  EXPECT_EQ(equiv(T("(\\x.x x)(\\x.x x)"), T("y"), Reduction::Beta, 100), Tri::Unknown);
}

TEST(Values, Examples) {
  EXPECT_TRUE(values_of(T("x")).empty());
  EXPECT_EQ(values_of(T("\\x.x")), std::vector<Term>{T("\\x.x")});
  EXPECT_EQ(values_of(T("(\\u.\\v.u) z")), std::vector<Term>{T("\\v.z")});
  EXPECT_THROW(values_of(T("(\\x.x x)(\\x.x x)")), Error);
}

TEST(Values, NonemptyOnlyOffNeutralNormal) {
  std::mt19937_64 rng(17);
  int checked = 0;
  while (checked < 200) {
    Term t = random_term(rng, 2 + static_cast<int>(rng() % 8), 0);
    if (!is_sn(t, 20000)) continue;
    if (!values_of(t).empty()) EXPECT_FALSE(!t.is_lam() && t.beta_normal()) << render(t);
    ++checked;
  }
}

TEST(Combinators, CircAndArrow) {
  EXPECT_EQ(circ(T("f"), T("g")), T("\\x.f (g x)"));
  EXPECT_EQ(arrow_term(T("f"), T("g")), T("\\x.\\y.g (x (f y))"));
  Term c = circ(T("\\x.x"), T("\\x.x"));
  auto r = normalize(c, Reduction::Beta, 10);
  ASSERT_TRUE(r.result);
  EXPECT_EQ(*r.result, T("\\x.x"));
}

TEST(Enumerate, SmallSizes) {
  EXPECT_EQ(enumerate_closed_beta_normal(2), std::vector<Term>{T("\\x.x")});
  auto three = enumerate_closed_beta_normal(3);
  EXPECT_NE(std::find(three.begin(), three.end(), T("\\x.\\y.x")), three.end());
}

TEST(Enumerate, CountsMatchGrammarOracle) {
  NormalCounter c;
  for (std::uint32_t n = 1; n <= 8; ++n) {
    std::uint64_t expected = 0;
    for (int s = 1; s <= static_cast<int>(n); ++s) expected += c.nf(s, 0);
    auto ts = enumerate_closed_beta_normal(n);
    EXPECT_EQ(ts.size(), expected) << "size " << n;
    for (std::size_t i = 0; i < ts.size(); ++i) {
      EXPECT_TRUE(is_closed(ts[i]));
      EXPECT_TRUE(ts[i].beta_normal());
      EXPECT_LE(ts[i].size(), n);
      if (i > 0) EXPECT_LE(ts[i - 1].size(), ts[i].size());
    }
    std::set<Term, TermLess> uniq(ts.begin(), ts.end());
    EXPECT_EQ(uniq.size(), ts.size());
  }
}

TEST(Church, Shape) {
  EXPECT_EQ(church(0), T("\\f.\\x.x"));
  EXPECT_EQ(church(2), T("\\f.\\x.f (f x)"));
}
