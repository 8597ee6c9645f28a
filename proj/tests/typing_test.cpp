#include <gtest/gtest.h>

#include <algorithm>

#include "sflab/error.hpp"
#include "sflab/json_io.hpp"
#include "sflab/typing.hpp"

using namespace sflab;

namespace {

Term T(const char* s) { return parse_term(s); }
Ty P(const char* s) { return parse_type(s); }

const Ty kNeedsEta = parse_type("((forall Y. X) -> X) -> X -> X");

// Rule-by-rule backtracking search over forall-elimination-free derivations.
// Application premises guess the function type among the arrow tails of the
// head's declared type, which is where any such derivation must take them.
struct BruteTyper {
  int fresh = 0;

  bool derive(const Context& ctx, const Term& m, const Ty& sigma, int depth) {
    if (depth == 0) return false;
    if (m.is_free()) {
      auto it = ctx.find(m.name());
      if (it != ctx.end() && it->second == sigma) return true;
    }
    if (sigma.is_forall()) {
      std::string x = sigma.name();
      Ty body = sigma.body();
      if (context_free_type_vars(ctx).count(x)) {
        std::string y = "Q" + std::to_string(fresh++);
        body = type_subst(body, x, Ty::var(y));
      }
      if (derive(ctx, m, body, depth - 1)) return true;
    }
    if (m.is_lam() && sigma.is_arrow()) {
      std::string v = "v" + std::to_string(fresh++);
      Context inner = ctx;
      inner[v] = sigma.dom();
      if (derive(inner, open_with(m.body(), v), sigma.cod(), depth - 1)) return true;
    }
    if (m.is_app()) {
      for (const Ty& f : candidates(ctx)) {
        if (!(f.cod() == sigma)) continue;
        if (derive(ctx, m.fun(), f, depth - 1) && derive(ctx, m.arg(), f.dom(), depth - 1)) {
          return true;
        }
      }
    }
    return false;
  }

  static std::vector<Ty> candidates(const Context& ctx) {
    std::vector<Ty> out;
    for (const auto& [x, t] : ctx) {
      for (Ty cur = t; cur.is_arrow(); cur = cur.cod()) out.push_back(cur);
    }
    return out;
  }
};

Derivation leaf(const Context& ctx, const char* x, const Ty& t) {
  Derivation d;
  d.rule = Rule::Id;
  d.concl = {ctx, T(x), t};
  return d;
}

}  // namespace

TEST(CheckDerivation, Examples) {
  Context c{{"x", P("X")}};
  EXPECT_TRUE(check_derivation(leaf(c, "x", P("X"))).ok);

  Context g{{"y", P("X")}};
  Derivation bad;
  bad.rule = Rule::AllI;
  bad.concl = {g, T("y"), P("forall X. X")};
  bad.children = {leaf(g, "y", P("X"))};
  auto r = check_derivation(bad);
  EXPECT_FALSE(r.ok);
  EXPECT_EQ(r.rule, "all_i");
  EXPECT_NE(r.message.find("not bindable"), std::string::npos);
  EXPECT_TRUE(r.path.empty());
}

TEST(CheckDerivation, ReportsFirstFailingNode) {
  auto d = check_positive({}, T("\\x.\\y.x y"), kNeedsEta);
  ASSERT_TRUE(d);
  Derivation broken = *d;
  // corrupt a leaf deep inside
  Derivation* cur = &broken;
  std::vector<std::size_t> path;
  while (!cur->children.empty()) {
    path.push_back(0);
    cur = &cur->children[0];
  }
  cur->concl.ty = P("Y");
  auto r = check_derivation(broken);
  EXPECT_FALSE(r.ok);
  // the mismatch shows at the leaf or at the node that consumes it
  ASSERT_LE(r.path.size(), path.size());
  EXPECT_GE(r.path.size() + 1, path.size());
  EXPECT_TRUE(std::equal(r.path.begin(), r.path.end(), path.begin()));
}

TEST(CheckDerivation, AllElimination) {
  Context c{{"x", P("forall X. X -> X")}};
  Derivation d;
  d.rule = Rule::AllE;
  d.inst = P("Y -> Y");
  d.concl = {c, T("x"), P("(Y -> Y) -> Y -> Y")};
  d.children = {leaf(c, "x", P("forall X. X -> X"))};
  EXPECT_TRUE(check_derivation(d).ok);
  d.concl.ty = P("Y -> Y");
  EXPECT_FALSE(check_derivation(d).ok);
  EXPECT_TRUE(contains_rule(d, Rule::AllE));
}

TEST(CheckPositive, Examples) {
  EXPECT_TRUE(check_positive({}, T("\\x.\\y.x y"), kNeedsEta));
  EXPECT_FALSE(check_positive({}, T("\\x.x"), kNeedsEta));
  EXPECT_TRUE(check_positive({}, T("\\x.x"), P("forall X. X -> X")));
  EXPECT_FALSE(check_positive({}, T("\\x.\\y.x"), P("forall X. X -> X")));
  EXPECT_TRUE(check_positive({}, T("\\x.x"), translate_plus(kNeedsEta)));
  EXPECT_TRUE(check_positive({}, T("\\x.\\y.x y"), translate_plus(kNeedsEta)));
}

TEST(CheckPositive, ClassErrors) {
  try {
    check_positive({}, T("\\x.\\y.x y"), P("(forall Y. X -> X) -> X -> X"));
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::WrongClass);
  }
  EXPECT_THROW(check_positive({}, T("(\\x.x) y"), P("X")), Error);
}

TEST(CheckPositive, DerivationsValidate) {
  for (const Term& m : enumerate_closed_beta_normal(6)) {
    for (const char* s : {"forall X. X -> X", "forall Z. (Z -> Z) -> Z -> Z",
                          "forall X. X -> X -> X", "((forall Y. X) -> X) -> X -> X"}) {
      auto d = check_positive({}, m, P(s));
      if (!d) continue;
      EXPECT_TRUE(check_derivation(*d).ok) << render(m) << " : " << s;
      EXPECT_FALSE(contains_rule(*d, Rule::AllE));
      EXPECT_EQ(d->concl.term, m);
      EXPECT_TRUE(d->concl.ty == P(s));
    }
  }
}

TEST(CheckPositive, AgreesWithBruteForceSearch) {
  std::vector<Ty> types;
  for (const Ty& t : enumerate_types(5, {"X", "Y"})) {
    if (classify(t).forall_plus2) types.push_back(t);
  }
  ASSERT_GT(types.size(), 20u);
  std::size_t positives = 0;
  for (const Term& m : enumerate_closed_beta_normal(5)) {
    for (const Ty& t : types) {
      BruteTyper b;
      bool expected = b.derive({}, m, t, 40);
      bool got = check_positive({}, m, t).has_value();
      EXPECT_EQ(got, expected) << render(m) << " : " << render_type(t);
      positives += got;
    }
  }
  EXPECT_GT(positives, 10u);
}

TEST(CheckSimple, Examples) {
  Context c{{"x", P("X -> X")}, {"y", P("X")}};
  EXPECT_TRUE(check_simple(c, T("x y"), P("X")));
  EXPECT_FALSE(check_simple({}, T("\\x.x"), P("X -> Y")));
  EXPECT_TRUE(check_simple({}, T("\\f.\\x.f x"), P("(X -> X) -> X -> X")));
  EXPECT_THROW(check_simple({}, T("\\x.x"), P("forall X. X -> X")), Error);
}

TEST(GammaInf, Examples) {
  // x<i> at its own declaration
  for (std::uint64_t i : {0u, 5u, 17u, 123u}) {
    std::string x = "x" + std::to_string(i);
    EXPECT_TRUE(gamma_inf_check(Term::free(x), gamma_inf_decl(i))) << x;
  }
  // closed terms reduce to the plain check
  for (const Term& m : enumerate_closed_beta_normal(4)) {
    EXPECT_EQ(gamma_inf_check(m, P("forall X. X -> X")),
              check_positive({}, m, P("forall X. X -> X")).has_value());
  }
  // x<i> x<j> with decl i = X0 -> X0, decl j = X0
  std::optional<std::uint64_t> fi, fj;
  for (std::uint64_t i = 0; i < 5000 && !(fi && fj); ++i) {
    std::string k = canonical_key(gamma_inf_decl(i));
    if (!fi && k == canonical_key(P("X0 -> X0"))) fi = i;
    if (!fj && k == canonical_key(P("X0"))) fj = i;
  }
  ASSERT_TRUE(fi && fj);
  Term app = Term::app(Term::free("x" + std::to_string(*fi)), Term::free("x" + std::to_string(*fj)));
  EXPECT_TRUE(gamma_inf_check(app, P("X0")));
  EXPECT_FALSE(gamma_inf_check(app, P("X1")));
}

TEST(GammaInf, UnindexedVariable) {
  try {
    gamma_inf_check(T("y"), P("X"));
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::UnindexedFreeVariable);
  }
}

TEST(IdDerivations, Examples) {
  Derivation base = derive_id_plus(P("X"));
  EXPECT_TRUE(check_derivation(base).ok);
  EXPECT_EQ(base.concl.term, T("\\x.x"));
  EXPECT_TRUE(base.concl.ty == P("X -> X"));
  EXPECT_FALSE(contains_rule(base, Rule::AllI));

  Derivation hoisted = derive_id_plus(kNeedsEta);
  EXPECT_TRUE(check_derivation(hoisted).ok);
  EXPECT_EQ(hoisted.concl.term, id_term(kNeedsEta));
  EXPECT_TRUE(hoisted.concl.ty == Ty::arrow(kNeedsEta, translate_plus(kNeedsEta)));

  Derivation triv = derive_id_trivial(kNeedsEta);
  EXPECT_TRUE(check_derivation(triv).ok);
  EXPECT_TRUE(triv.concl.ty == Ty::arrow(translate_plus(kNeedsEta), kNeedsEta));

  Derivation simple = derive_id_trivial(P("X -> Y"));
  EXPECT_TRUE(check_derivation(simple).ok);
  EXPECT_TRUE(simple.concl.ty == P("(X -> Y) -> X -> Y"));
}

TEST(IdDerivations, AllSmallTypesValidate) {
  std::size_t plus = 0, minus = 0, trivial = 0;
  for (const Ty& t : enumerate_types(6, {"X", "Y"})) {
    auto c = classify(t);
    const std::string s = render_type(t);
    if (c.forall_plus2) {
      Derivation d = derive_id_plus(t);
      EXPECT_TRUE(check_derivation(d).ok) << s;
      EXPECT_EQ(d.concl.term, id_term(t)) << s;
      EXPECT_TRUE(d.concl.ty == Ty::arrow(t, translate_plus(t))) << s;
      ++plus;
    }
    if (c.forall_minus2) {
      Derivation d = derive_id_minus(t);
      EXPECT_TRUE(check_derivation(d).ok) << s;
      EXPECT_TRUE(d.concl.ty == Ty::arrow(translate_minus(t), t)) << s;
      ++minus;
    }
    if (c.forall_trivial && (c.forall_plus2 || c.forall_minus2)) {
      EXPECT_TRUE(check_derivation(derive_id_trivial(t)).ok) << s;
      ++trivial;
    }
  }
  EXPECT_GT(plus, 100u);
  EXPECT_GT(minus, 100u);
  EXPECT_GT(trivial, 50u);
}

TEST(IdDerivations, WrongClass) {
  EXPECT_THROW(derive_id_plus(P("(forall Y. Y -> Y) -> X")), Error);
  EXPECT_THROW(derive_id_minus(P("X -> forall Y. Y")), Error);
}

TEST(Coercion, SkeletonShapes) {
  auto d = derive_coercion(kNeedsEta, translate_plus(kNeedsEta));
  ASSERT_TRUE(d);
  EXPECT_TRUE(check_derivation(*d).ok);
  EXPECT_FALSE(derive_coercion(P("X"), P("X -> X")));
}

TEST(SkeletonDerivation, Examples) {
  auto d = check_positive({}, T("\\x.x"), P("forall X. X -> X"));
  ASSERT_TRUE(d);
  Derivation s = skeleton_derivation(*d);
  EXPECT_TRUE(check_derivation(s).ok);
  // bound variables may come back renamed
  ASSERT_TRUE(s.concl.ty.is_arrow());
  EXPECT_TRUE(s.concl.ty.dom() == s.concl.ty.cod());
  EXPECT_TRUE(s.concl.ty.dom().is_var());

  auto e = check_positive({}, T("\\x.\\y.x y"), kNeedsEta);
  ASSERT_TRUE(e);
  Derivation se = skeleton_derivation(*e);
  EXPECT_TRUE(check_derivation(se).ok);
  EXPECT_TRUE(se.concl.ty == P("(X -> X) -> X -> X"));
  EXPECT_FALSE(contains_rule(se, Rule::AllI));
}

TEST(SkeletonDerivation, AlwaysSimplyTyped) {
  for (const Term& m : enumerate_closed_beta_normal(6)) {
    for (const Ty& t : enumerate_types(5, {"X"})) {
      if (!classify(t).forall_plus2) continue;
      auto d = check_positive({}, m, t);
      if (!d) continue;
      Derivation s = skeleton_derivation(*d);
      EXPECT_TRUE(check_derivation(s).ok);
      EXPECT_TRUE(check_simple({}, m, skeleton(t)));
    }
  }
}

TEST(SkeletonDerivation, RejectsAllE) {
  Context c{{"x", P("forall X. X")}};
  Derivation d;
  d.rule = Rule::AllE;
  d.inst = P("Y");
  d.concl = {c, T("x"), P("Y")};
  d.children = {leaf(c, "x", P("forall X. X"))};
  try {
    skeleton_derivation(d);
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ContainsAllE);
  }
}

TEST(EtaX, Reducts) {
  EXPECT_EQ(eta_x_reducts(T("\\u.x u"), "x"), std::vector<Term>{T("x")});
  EXPECT_TRUE(eta_x_reducts(T("\\u.y u"), "x").empty());
  auto r = eta_x_reducts(T("\\u.\\v.x p u v"), "x");
  EXPECT_NE(std::find(r.begin(), r.end(), T("x p")), r.end());
}

TEST(EtaRetype, Examples) {
  auto r = eta_retype(T("\\x.x"), kNeedsEta, 2);
  ASSERT_TRUE(r);
  EXPECT_EQ(r->term, T("\\x.\\y.x y"));
  EXPECT_TRUE(check_derivation(r->derivation).ok);
  EXPECT_EQ(equiv(r->term, T("\\x.x"), Reduction::BetaEta), Tri::True);

  auto p = eta_retype(T("\\x.x"), P("forall X. X -> X"), 2);
  ASSERT_TRUE(p);
  EXPECT_EQ(p->term, T("\\x.x"));
  EXPECT_EQ(p->distance, 0u);

  auto s = eta_retype(T("\\f.\\x.f x"), P("(X -> X) -> X -> X"), 2);
  ASSERT_TRUE(s);
  EXPECT_EQ(s->term, T("\\f.\\x.f x"));

  EXPECT_FALSE(eta_retype(T("\\x.\\y.x"), kNeedsEta, 2));
}

TEST(EtaRetype, SubjectEtaReductionFails) {
  // the eta-reduct of a typable term loses the type
  EXPECT_TRUE(check_positive({}, T("\\x.\\y.x y"), kNeedsEta));
  EXPECT_FALSE(check_positive({}, T("\\x.x"), kNeedsEta));
}

TEST(DerivationJson, RoundTrip) {
  for (const Ty& t : {kNeedsEta, P("forall X. (X -> X) -> X -> X")}) {
    Derivation d = derive_id_plus(t);
    std::string text = derivation_to_json(d);
    Derivation back = derivation_from_json(text);
    EXPECT_TRUE(check_derivation(back).ok);
    EXPECT_EQ(derivation_to_json(back), text);
  }
  Context c{{"x", P("forall X. X -> X")}};
  Derivation e;
  e.rule = Rule::AllE;
  e.inst = P("Y");
  e.concl = {c, T("x"), P("Y -> Y")};
  e.children = {leaf(c, "x", P("forall X. X -> X"))};
  Derivation back = derivation_from_json(derivation_to_json(e));
  EXPECT_TRUE(check_derivation(back).ok);
  EXPECT_TRUE(back.inst == P("Y"));
}

TEST(DerivationJson, Malformed) {
  EXPECT_THROW(derivation_from_json("{"), Error);
  EXPECT_THROW(derivation_from_json(R"({"rule":"cut","term":"x","type":"X"})"), Error);
  EXPECT_THROW(derivation_from_json(R"({"rule":"id","type":"X"})"), Error);
}
