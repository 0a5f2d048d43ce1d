#include "sqg/io.hpp"

#include <doctest.h>

#include <string>

using namespace sqg;

namespace {

FgAbGroup G(const std::string& s) { return parse_group(s); }

std::string corpus(const std::string& name) {
  return read_text_file(std::string(SQG_CORPUS_DIR) + "/" + name);
}

std::string replaced(std::string text, const std::string& from, const std::string& to) {
  size_t pos = text.find(from);
  REQUIRE(pos != std::string::npos);
  return text.replace(pos, from.size(), to);
}

template <typename Fn>
std::string error_of(Fn&& fn) {
  try {
    fn();
  } catch (const InputError& e) {
    return e.what();
  }
  return {};
}

bool psg_same(const PreSquareGroup& a, const PreSquareGroup& b) {
  if (!(a.me.quotient == b.me.quotient) || !(a.me.center_part == b.me.center_part) ||
      !(a.mee == b.mee))
    return false;
  if (!cocycle_equal(a.me.f, b.me.f)) return false;
  if (!hom_equal(a.sigma, b.sigma) || !hom_equal(a.p, b.p)) return false;
  for (size_t i = 0; i < a.bracket.size(); ++i)
    for (size_t j = 0; j < a.bracket.size(); ++j)
      if (!is_zero(a.mee, sub(a.mee, a.bracket[i][j], b.bracket[i][j]))) return false;
  return true;
}

}  // namespace

TEST_CASE("corpus files parse and serialize byte-stably") {
  for (const char* name : {"znil.psg.txt", "bad_psg.txt"}) {
    std::string text = corpus(name);
    PreSquareGroup m = parse_psg(text);
    CHECK(format_psg(m) == text);
  }
  for (const char* name :
       {"znil.sg.txt", "two_power_1.sg.txt", "two_power_1_table.sg.txt"}) {
    std::string text = corpus(name);
    SquareGroup q = parse_sg(text);
    CHECK(format_sg(q) == text);
    CHECK(sg_validate(q).ok);
  }
  for (const char* name : {"target_flat.txt", "target_stable.txt"}) {
    std::string text = corpus(name);
    CHECK(format_target(parse_target(text)) == text);
  }
  {
    std::string text = corpus("quotient_map.txt");
    MapDoc doc = parse_map(text);
    REQUIRE(doc.has_involution);
    CHECK(format_map(doc.map, &doc.involution) == text);
  }
}

TEST_CASE("the reject fixture is a presquare group outside the kernel condition") {
  PreSquareGroup line = parse_psg(corpus("bad_psg.txt"));
  CHECK(psg_validate(line).ok);
  CHECK(lift(line).status == LiftStatus::NotPsg0);
}

TEST_CASE("built-in realizers survive a serialization round trip") {
  for (const SquareGroup& q :
       {sg_znil(), sg_two_power_cyclic(2), sg_half_invertible(G("Z/15Z")),
        sg_stable_universal(G("Z/4 + Z/2")),
        sg_combine(PsgCombine::Coproduct, sg_znil(), sg_two_power_cyclic(1))}) {
    std::string text = format_sg(q);
    SquareGroup back = parse_sg(text);
    CHECK(format_sg(back) == text);
    CHECK(psg_same(wp(back), wp(q)));
    CHECK(hom_is_zero(alpha_defect(back, q)));
  }
}

TEST_CASE("table storage for both layers round trips") {
  SquareGroup t1 = parse_sg(corpus("two_power_1_table.sg.txt"));
  CHECK_FALSE(t1.hmap.structured);
  std::string text = format_sg(t1);

  Cocycle tf = cocycle_to_table(t1.qe.f);
  SquareGroup both = t1;
  both.qe = nil2_group(t1.qe.quotient, t1.qe.center_part, tf);
  both.hmap.domain = both.qe;
  std::string text2 = format_sg(both);
  SquareGroup back = parse_sg(text2);
  CHECK_FALSE(back.qe.f.structured);
  CHECK(format_sg(back) == text2);
  CHECK(sg_validate(back).ok);
  CHECK(psg_same(wp(back), wp(t1)));
}

TEST_CASE("parse errors carry line numbers") {
  std::string base = corpus("znil.sg.txt");

  std::string missing = error_of([&] { parse_sg(replaced(base, "[Mee]", "[Mes]")); });
  CHECK(missing.find("missing section [Mee]") != std::string::npos);

  std::string before = error_of([&] { parse_psg("x = 1\n[Me]\n"); });
  CHECK(before.find("line 1") != std::string::npos);
  CHECK(before.find("before the first section") != std::string::npos);

  std::string badint =
      error_of([&] { parse_sg(replaced(base, "sq = 1 x 1\n1", "sq = 1 x 1\nq")); });
  CHECK(badint.find("bad integer 'q'") != std::string::npos);

  std::string short_rows =
      error_of([&] { parse_psg(replaced(corpus("znil.psg.txt"), "matrix = 1 x 1\n-1",
                                        "matrix = 2 x 1\n-1")); });
  CHECK(short_rows.find("data ends early") != std::string::npos);

  std::string wide = error_of(
      [&] { parse_psg(replaced(corpus("znil.psg.txt"), "\n-1", "\n-1 3")); });
  CHECK(wide.find("expected 1 entries, got 2") != std::string::npos);

  std::string badgroup =
      error_of([&] { parse_psg(replaced(corpus("znil.psg.txt"), "group = Z", "group = W")); });
  CHECK(badgroup.find("line") != std::string::npos);

  std::string dims = error_of(
      [&] { parse_sg(replaced(base, "bil = 1 x 0", "bil = 2 x 0")); });
  CHECK(dims.find("'bil' must be 1 x 0") != std::string::npos);

  CHECK_THROWS_AS(read_text_file(std::string(SQG_CORPUS_DIR) + "/absent.txt"),
                  InputError);
}

TEST_CASE("declared sections must match the quadratic data") {
  std::string base = corpus("two_power_1.sg.txt");

  std::string sig = error_of([&] {
    parse_sg(replaced(base, "[sigma]\nmatrix = 1 x 1\n1", "[sigma]\nmatrix = 1 x 1\n3"));
  });
  CHECK(sig.find("declared sigma does not match") != std::string::npos);

  std::string br = error_of([&] {
    parse_sg(replaced(base, "[bracket]\nmatrix = 1 x 1\n2",
                      "[bracket]\nmatrix = 1 x 1\n1"));
  });
  CHECK(br.find("declared bracket does not match") != std::string::npos);

  // Without an [H] section the sigma matrix is authoritative, so the same
  // tamper parses fine and lands on a different presquare group.
  PreSquareGroup m = parse_psg(replaced(base, "[sigma]\nmatrix = 1 x 1\n1",
                                        "[sigma]\nmatrix = 1 x 1\n3"));
  CHECK(psg_validate(m).ok);
  CHECK_FALSE(hom_equal(m.sigma, hom_identity(m.mee)));
}

TEST_CASE("targets expose the kernel source for each mode") {
  KTriple flat = parse_target(corpus("target_flat.txt"));
  CHECK(flat.n == 2);
  CHECK(flat.k.src == quad_value(Functor::Gamma, flat.pi_n).group);
  CHECK(realize_sg(flat, RealizeMode::Flat23).ok);

  KTriple st = parse_target(corpus("target_stable.txt"));
  CHECK(st.n == 3);
  CHECK(st.k.src == tensor(G("Z/2Z"), st.pi_n).group);
  CHECK(realize_sg(st, RealizeMode::Stable).ok);

  std::string badn = error_of(
      [&] { parse_target(replaced(corpus("target_flat.txt"), "n = 2", "n = two")); });
  CHECK(badn.find("n must be") != std::string::npos);
}
