#include <gtest/gtest.h>

#include <array>
#include <cstdio>
#include <string>
#include <sys/wait.h>

namespace {

struct Outcome {
  int code = -1;
  std::string out;
};

Outcome sflab(const std::string& args) {
  std::string cmd = std::string(SFLAB_BIN) + " " + args + " 2>/dev/null";
  Outcome r;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return r;
  std::array<char, 4096> buf;
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), n);
  int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

bool has(const Outcome& r, const std::string& s) { return r.out.find(s) != std::string::npos; }

}  // namespace

TEST(Cli, Parse) {
  Outcome r = sflab(R"(parse '\x.x y')");
  EXPECT_EQ(r.code, 0);
  EXPECT_TRUE(has(r, R"(\\x.x y)")) << r.out;
  EXPECT_EQ(sflab(R"(parse '\x.')").code, 2);
  EXPECT_EQ(sflab("nosuchcommand").code, 2);
}

TEST(Cli, Normalize) {
  Outcome r = sflab(R"(normalize '(\x.x) y')");
  EXPECT_EQ(r.code, 0);
  EXPECT_TRUE(has(r, R"("y")")) << r.out;
  EXPECT_EQ(sflab(R"(normalize '(\x.x x)(\x.x x)')").code, 3);
  EXPECT_EQ(sflab(R"(normalize --reduction betaeta '\x.f x')").code, 0);
  EXPECT_EQ(sflab(R"(normalize --reduction nope 'x')").code, 2);
}

TEST(Cli, StrongNormalization) {
  EXPECT_EQ(sflab(R"(sn '(\x.x) y')").code, 0);
  EXPECT_EQ(sflab(R"(sn '(\x.x x)(\x.x x)')").code, 1);
}

TEST(Cli, Types) {
  Outcome r = sflab(R"(type classify '((forall Y. X) -> X) -> X -> X')");
  EXPECT_EQ(r.code, 0);
  EXPECT_TRUE(has(r, R"("forall_plus2":true)")) << r.out;
  EXPECT_EQ(sflab(R"(type skeleton 'forall X. X -> X')").code, 0);
  EXPECT_EQ(sflab(R"(type translate --sign plus '((forall Y. X) -> X) -> X -> X')").code, 0);
  EXPECT_EQ(sflab(R"(idsigma '((forall Y. X) -> X) -> X -> X')").code, 0);
}

TEST(Cli, Typecheck) {
  EXPECT_EQ(sflab(R"(typecheck --positive '\x.\y.x y' '((forall Y. X) -> X) -> X -> X')").code, 0);
  EXPECT_EQ(sflab(R"(typecheck --positive '\x.x' '((forall Y. X) -> X) -> X -> X')").code, 1);
  // outside the positive class under the right-extending quantifier grammar
  EXPECT_EQ(sflab(R"(typecheck --positive '\x.\y.x y' '(forall Y.X->X)->(X->X)')").code, 2);
  EXPECT_EQ(sflab(R"(typecheck --simple --ctx 'f:X -> X' --ctx 'y:X' 'f y' 'X')").code, 0);
  EXPECT_EQ(sflab(R"(etaretype '\x.x' '((forall Y. X) -> X) -> X -> X' --bound 2)").code, 0);
  EXPECT_EQ(sflab(R"(gammainf 'y' 'X')").code, 2);
}

TEST(Cli, Derivations) {
  std::string tmp = testing::TempDir() + "sflab_derivation.json";
  Outcome d = sflab(R"(typecheck --positive --derivation '\x.x' 'forall X. X -> X')");
  ASSERT_EQ(d.code, 0);
  auto at = d.out.find("\"derivation\":");
  ASSERT_NE(at, std::string::npos) << d.out;
  Outcome written = sflab(R"(idsigma 'forall X. X -> X' > )" + tmp);
  EXPECT_EQ(written.code, 0);
  Outcome ok = sflab("derivation check " + tmp);
  EXPECT_EQ(ok.code, 0) << ok.out;
  std::remove(tmp.c_str());
}

TEST(Cli, Semantics) {
  Outcome c = sflab(R"(closure --kind sbetasat y --extra '(\x.x) y')");
  EXPECT_EQ(c.code, 0);
  EXPECT_TRUE(has(c, R"((\\x.x) y)")) << c.out;
  EXPECT_EQ(sflab(R"(order '(\z.z) (\x.x)' '\x.x')").code, 0);
  EXPECT_EQ(sflab("order y x").code, 1);
  EXPECT_EQ(sflab(R"(order --order triangle 'x ((\z.z) y)' 'x y')").code, 0);
  EXPECT_EQ(sflab("props --kind sbeta --check su --universe-size 4 --samples 50").code, 0);
  EXPECT_EQ(sflab("props --kind sbetadown --check adequacy --universe-size 4").code, 1);
}

TEST(Cli, Dinaturality) {
  Outcome r = sflab(R"(dinat '\x.\y.x y' '(forall Y. Y -> Y) -> X -> X' --gamma betaeta)");
  EXPECT_EQ(r.code, 1);
  EXPECT_TRUE(has(r, R"("verdict":"false")")) << r.out;
  EXPECT_EQ(sflab(R"(dinat '\f.\x.f (f x)' 'forall Z. (Z -> Z) -> Z -> Z')").code, 0);
  EXPECT_EQ(sflab(R"(dinat 'y' 'X')").code, 2);
}

TEST(Cli, Sampling) {
  EXPECT_EQ(sflab(R"(param '\x.x' 'forall X. X -> X' --samples 20)").code, 0);
  Outcome r = sflab(R"(param '\x.\y.x' 'forall X. X -> X' --samples 20)");
  EXPECT_EQ(r.code, 1);
  EXPECT_TRUE(has(r, "witness")) << r.out;
  EXPECT_EQ(sflab(R"(realize '\x.x' 'forall X. X -> X' --kind cr1 --samples 20)").code, 0);
  EXPECT_EQ(sflab(R"(realize '\x.\y.x' 'forall X. X -> X' --samples 20)").code, 1);
}

TEST(Cli, EnumerateAndSuite) {
  Outcome e = sflab("enumerate --max-size 3");
  EXPECT_EQ(e.code, 0);
  std::size_t lines = 0;
  for (char ch : e.out) lines += ch == '\n';
  EXPECT_EQ(lines, 3u);
  Outcome a = sflab("suite --max-size 4 --samples 10");
  Outcome b = sflab("suite --max-size 4 --samples 10");
  EXPECT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
  EXPECT_TRUE(has(a, R"("violations":[])")) << a.out.substr(0, 400);
}
