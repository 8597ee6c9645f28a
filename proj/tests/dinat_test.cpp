#include <gtest/gtest.h>

#include <random>

#include "sflab/dinat.hpp"
#include "sflab/error.hpp"

using namespace sflab;

namespace {

Term T(const char* s) { return parse_term(s); }
Ty P(const char* s) { return parse_type(s); }

// \x1.\x2. f0 (x1 (f0 (x1 ... (f0 x2))))
Term church_image(unsigned n) {
  std::string body = "f0 x2";
  for (unsigned i = 0; i < n; ++i) body = "f0 (x1 (" + body + "))";
  return parse_term("\\x1.\\x2." + body);
}

std::vector<Ty> simple_types(std::uint32_t max_size) {
  std::vector<Ty> out;
  for (const Ty& t : enumerate_types(max_size, {"X", "Y"})) {
    if (is_simple(t)) out.push_back(t);
  }
  return out;
}

}  // namespace

TEST(SplitType, Examples) {
  EXPECT_TRUE(split_type(P("Z"), Flavor::XY) == P("Y0"));
  EXPECT_TRUE(split_type(P("Z"), Flavor::XX) == P("X0"));
  EXPECT_TRUE(split_type(P("Z -> Z"), Flavor::XY) == P("X0 -> Y0"));
  EXPECT_TRUE(split_type(P("Z -> Z"), Flavor::YX) == P("Y0 -> X0"));
  EXPECT_TRUE(split_type(P("(A -> B) -> A"), Flavor::XY) == P("(Y0 -> X1) -> Y0"));
}

TEST(HKTerms, BaseCases) {
  EXPECT_EQ(h_term(P("Z"), {"Z"}), T("f0"));
  EXPECT_EQ(k_term(P("Z"), {"Z"}), T("\\x.x"));
  EXPECT_EQ(h_term(P("Z"), {}), T("\\x.x"));
  EXPECT_EQ(k_term(P("Z"), {}), T("\\x.x"));
}

TEST(HKTerms, UnrolledShape) {
  // beta-nf of H applied to x is \x1...\xn. f (x (K x1) ... (K xn))
  for (const Ty& sigma : simple_types(6)) {
    std::vector<Ty> args;
    Ty result = arrow_spine(sigma, &args);
    auto z = type_free_vars(sigma);
    std::size_t u = std::distance(z.begin(), z.find(result.name()));
    Term inner = Term::free("x");
    for (std::size_t i = 0; i < args.size(); ++i) {
      inner = Term::app(inner, Term::app(k_term(args[i], z), Term::free("w" + std::to_string(i))));
    }
    Term expected = Term::app(Term::free(indeterminate_name(u)), inner);
    for (std::size_t i = args.size(); i-- > 0;) expected = abstract("w" + std::to_string(i), expected);
    auto lhs = normalize(Term::app(h_term(sigma, z), Term::free("x")), Reduction::Beta);
    auto rhs = normalize(expected, Reduction::Beta);
    ASSERT_TRUE(lhs.result && rhs.result);
    EXPECT_EQ(*lhs.result, *rhs.result) << render_type(sigma);
  }
}

TEST(HKTerms, NoCapture) {
  for (const Ty& sigma : simple_types(6)) {
    auto z = type_free_vars(sigma);
    std::set<std::string> allowed;
    for (std::size_t u = 0; u < z.size(); ++u) allowed.insert(indeterminate_name(u));
    for (const Term& t : {h_term(sigma, z), k_term(sigma, z)}) {
      for (const std::string& v : free_names(t)) EXPECT_TRUE(allowed.count(v)) << v;
    }
  }
}

TEST(HKTypings, Examples) {
  auto base = hk_typings(P("Z"));
  ASSERT_EQ(base.size(), 4u);
  EXPECT_EQ(base[0].judgement.term, T("f0"));
  EXPECT_TRUE(base[0].judgement.ty == P("X0 -> Y0"));
  for (const auto& j : base) EXPECT_TRUE(j.ok()) << j.label;
  for (const auto& j : hk_typings(P("Z -> Z"))) EXPECT_TRUE(j.ok()) << j.label;
  EXPECT_THROW(hk_typings(P("forall X. X")), Error);
}

TEST(HKTypings, RandomSimpleTypes) {
  std::vector<Ty> pool = simple_types(7);
  std::mt19937_64 rng(11);
  for (int i = 0; i < 20; ++i) {
    const Ty& sigma = pool[rng() % pool.size()];
    for (const auto& j : hk_typings(sigma)) {
      EXPECT_TRUE(j.ok()) << render_type(sigma) << " " << j.label;
    }
  }
}

TEST(Dinat, ChurchNumerals) {
  for (unsigned n = 0; n <= 5; ++n) {
    auto r = dinat_check(church(n), P("forall Z. (Z -> Z) -> Z -> Z"), Reduction::Beta);
    EXPECT_EQ(r.verdict, Tri::True) << n;
    ASSERT_TRUE(r.lhs_nf && r.rhs_nf);
    EXPECT_EQ(*r.lhs_nf, church_image(n)) << render(*r.lhs_nf);
    EXPECT_EQ(*r.rhs_nf, church_image(n)) << render(*r.rhs_nf);
  }
}

TEST(Dinat, NegativeQuantifier) {
  auto r = dinat_check(T("\\x.\\y.x y"), P("(forall Y. Y -> Y) -> X -> X"), Reduction::BetaEta);
  EXPECT_EQ(r.verdict, Tri::False);
  EXPECT_FALSE(r.forall_plus2);
  EXPECT_EQ(*r.lhs_nf, T("\\x1.\\x2.f0 (x1 x2)"));
  EXPECT_EQ(*r.rhs_nf, T("\\x1.\\x2.x1 (f0 x2)"));
  EXPECT_EQ(dinat_check(T("\\x.\\y.x y"), P("(forall Y. Y -> Y) -> X -> X"), Reduction::Beta).verdict,
            Tri::False);
}

TEST(Dinat, Examples) {
  auto r = dinat_check(T("\\x.x"), P("forall X. X -> X"), Reduction::Beta);
  EXPECT_EQ(r.verdict, Tri::True);
  EXPECT_EQ(*r.lhs_nf, T("\\x.f0 x"));
  EXPECT_EQ(dinat_check(T("\\x.\\y.x"), P("forall X. X -> X"), Reduction::Beta).verdict, Tri::False);
  const Ty needs_eta = P("((forall Y. X) -> X) -> X -> X");
  EXPECT_EQ(dinat_check(T("\\x.\\y.x y"), needs_eta, Reduction::Beta).verdict, Tri::True);
  // dinatural although untypable: the vacuous quantifier makes the type improper
  EXPECT_EQ(dinat_check(T("\\x.x"), needs_eta, Reduction::Beta).verdict, Tri::True);
  EXPECT_EQ(dinat_check(T("\\x.x"), needs_eta, Reduction::BetaEta).verdict, Tri::True);
}

TEST(Dinat, Errors) {
  EXPECT_THROW(dinat_check(T("x"), P("X"), Reduction::Beta), Error);
  EXPECT_THROW(dinat_check(T("\\x.x"), P("X -> X"), Reduction::Eta), Error);
}

TEST(Dinat, Unknown) {
  auto r = dinat_check(T("\\x.(\\y.y y) (\\y.y y)"), P("X -> X"), Reduction::Beta, 50);
  EXPECT_EQ(r.verdict, Tri::Unknown);
}

TEST(Dinat, AlphaInvariant) {
  const Ty a = P("forall Z. (Z -> Z) -> Z -> Z");
  const Ty b = P("forall W. (W -> W) -> W -> W");
  for (const Term& m : enumerate_closed_beta_normal(6)) {
    Term renamed = parse_term(render(m));
    auto x = dinat_check(m, a, Reduction::Beta);
    auto y = dinat_check(renamed, b, Reduction::Beta);
    EXPECT_EQ(x.verdict, y.verdict) << render(m);
  }
  EXPECT_EQ(dinat_check(T("\\p.\\q.p q"), a, Reduction::Beta).verdict,
            dinat_check(T("\\f.\\x.f x"), b, Reduction::Beta).verdict);
}

TEST(Dinat, TranslationInvariant) {
  std::vector<Ty> types;
  for (const Ty& t : enumerate_types(5, {"X", "Y"})) {
    if (is_forall_plus2(t) && !is_simple(t)) types.push_back(t);
  }
  ASSERT_GT(types.size(), 10u);
  std::size_t checked = 0;
  for (const Term& m : enumerate_closed_beta_normal(5)) {
    for (const Ty& t : types) {
      for (Reduction g : {Reduction::Beta, Reduction::BetaEta}) {
        EXPECT_EQ(dinat_check(m, t, g).verdict, dinat_check(m, translate_plus(t), g).verdict)
            << render(m) << " : " << render_type(t);
        ++checked;
      }
    }
  }
  EXPECT_GE(checked, 100u);
}

TEST(Dinat, TypableImpliesDinatural) {
  std::vector<Ty> types;
  for (const Ty& t : enumerate_types(5, {"X", "Y"})) {
    if (is_forall_plus2(t)) types.push_back(t);
  }
  std::size_t typable = 0;
  for (const Term& m : enumerate_closed_beta_normal(6)) {
    for (const Ty& t : types) {
      if (!check_positive({}, m, t)) continue;
      ++typable;
      EXPECT_EQ(dinat_check(m, t, Reduction::Beta).verdict, Tri::True)
          << render(m) << " : " << render_type(t);
    }
  }
  EXPECT_GT(typable, 20u);
}
