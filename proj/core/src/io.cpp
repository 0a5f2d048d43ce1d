#include "sqg/io.hpp"

#include <cctype>
#include <fstream>
#include <map>
#include <sstream>

namespace sqg {

namespace {

struct MatBlock {
  size_t rows = 0, cols = 0;
  std::vector<Vec> data;
  size_t line = 0;
};

struct Section {
  std::string name;
  size_t line = 0;
  std::map<std::string, std::string> kv;
  std::map<std::string, size_t> kv_line;
  std::map<std::string, MatBlock> mats;
};

struct Doc {
  std::vector<Section> secs;

  const Section* find(const std::string& name) const {
    for (const auto& s : secs)
      if (s.name == name) return &s;
    return nullptr;
  }
};

[[noreturn]] void fail_at(size_t line, const std::string& msg) {
  throw InputError("line " + std::to_string(line) + ": " + msg);
}

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

bool all_digits(const std::string& s) {
  if (s.empty()) return false;
  for (char ch : s)
    if (!std::isdigit(static_cast<unsigned char>(ch))) return false;
  return true;
}

// A value of the form "R x C" announces a matrix block; anything else is a
// plain value.
bool match_dims(const std::string& v, size_t& r, size_t& c) {
  size_t xp = v.find(" x ");
  if (xp == std::string::npos) return false;
  std::string rs = trim(v.substr(0, xp));
  std::string cs = trim(v.substr(xp + 3));
  if (!all_digits(rs) || !all_digits(cs)) return false;
  if (rs.size() > 9 || cs.size() > 9) return false;
  r = std::stoull(rs);
  c = std::stoull(cs);
  return true;
}

Int parse_int_tok(const std::string& tok, size_t line) {
  try {
    return Int(tok);
  } catch (const std::exception&) {
    fail_at(line, "bad integer '" + tok + "'");
  }
}

Doc parse_doc(const std::string& text) {
  std::vector<std::pair<size_t, std::string>> lines;
  {
    std::istringstream in(text);
    std::string raw;
    size_t no = 0;
    while (std::getline(in, raw)) {
      ++no;
      size_t h = raw.find('#');
      if (h != std::string::npos) raw = raw.substr(0, h);
      std::string t = trim(raw);
      if (!t.empty()) lines.emplace_back(no, std::move(t));
    }
  }

  Doc doc;
  Section* cur = nullptr;
  size_t i = 0;
  while (i < lines.size()) {
    const size_t no = lines[i].first;
    const std::string& t = lines[i].second;
    if (t.front() == '[') {
      if (t.back() != ']') fail_at(no, "unterminated section header");
      std::string name = trim(t.substr(1, t.size() - 2));
      if (name.empty()) fail_at(no, "empty section name");
      if (doc.find(name) != nullptr) fail_at(no, "duplicate section [" + name + "]");
      doc.secs.push_back(Section{std::move(name), no, {}, {}, {}});
      cur = &doc.secs.back();
      ++i;
      continue;
    }
    if (cur == nullptr) fail_at(no, "data before the first section header");
    size_t eq = t.find('=');
    if (eq == std::string::npos) fail_at(no, "expected 'key = value'");
    std::string key = trim(t.substr(0, eq));
    std::string val = trim(t.substr(eq + 1));
    if (key.empty()) fail_at(no, "empty key");
    if (cur->kv.count(key) != 0 || cur->mats.count(key) != 0)
      fail_at(no, "duplicate key '" + key + "'");
    ++i;

    size_t r = 0, c = 0;
    if (match_dims(val, r, c)) {
      MatBlock blk{r, c, {}, no};
      if (c == 0) {
        blk.data.assign(r, Vec{});
      } else {
        for (size_t k = 0; k < r; ++k) {
          if (i >= lines.size() || lines[i].second.front() == '[' ||
              lines[i].second.find('=') != std::string::npos)
            fail_at(no, "'" + key + "' declares " + std::to_string(r) +
                            " rows but the data ends early");
          const size_t rno = lines[i].first;
          std::istringstream rs(lines[i].second);
          Vec v;
          std::string tok;
          while (rs >> tok) v.push_back(parse_int_tok(tok, rno));
          if (v.size() != c)
            fail_at(rno, "expected " + std::to_string(c) + " entries, got " +
                             std::to_string(v.size()));
          blk.data.push_back(std::move(v));
          ++i;
        }
      }
      cur->mats[key] = std::move(blk);
      continue;
    }
    if (val.empty()) fail_at(no, "empty value for '" + key + "'");
    cur->kv[key] = std::move(val);
    cur->kv_line[key] = no;
  }
  return doc;
}

const Section& need_section(const Doc& d, const std::string& name) {
  const Section* s = d.find(name);
  if (s == nullptr) throw InputError("missing section [" + name + "]");
  return *s;
}

const std::string& need_kv(const Section& s, const std::string& key) {
  auto it = s.kv.find(key);
  if (it == s.kv.end()) fail_at(s.line, "[" + s.name + "] is missing '" + key + "'");
  return it->second;
}

FgAbGroup need_group(const Section& s, const std::string& key) {
  const std::string& v = need_kv(s, key);
  try {
    return parse_group(v);
  } catch (const InputError& e) {
    fail_at(s.kv_line.at(key), e.what());
  }
}

const MatBlock& need_mat(const Section& s, const std::string& key) {
  auto it = s.mats.find(key);
  if (it == s.mats.end())
    fail_at(s.line, "[" + s.name + "] is missing the matrix '" + key + "'");
  return it->second;
}

void check_dims(const MatBlock& b, size_t rows, size_t cols, const std::string& what) {
  if (b.rows != rows || b.cols != cols)
    fail_at(b.line, what + " must be " + std::to_string(rows) + " x " +
                        std::to_string(cols) + ", got " + std::to_string(b.rows) +
                        " x " + std::to_string(b.cols));
}

AbHom hom_from_block(const MatBlock& b, const FgAbGroup& src, const FgAbGroup& dst,
                     const std::string& what) {
  check_dims(b, dst.ngens(), src.ngens(), what);
  Mat m(b.rows, b.cols);
  for (size_t r = 0; r < b.rows; ++r)
    for (size_t c = 0; c < b.cols; ++c) m.at(r, c) = b.data[r][c];
  return AbHom{src, dst, std::move(m)};
}

std::vector<std::vector<Vec>> form_from_block(const MatBlock& b, size_t n,
                                              const FgAbGroup& val,
                                              const std::string& what) {
  check_dims(b, n * n, val.ngens(), what);
  std::vector<std::vector<Vec>> out(n, std::vector<Vec>(n));
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) out[i][j] = b.data[i * n + j];
  return out;
}

std::string int_str(const Int& v) { return v.str(); }

void emit_kv(std::string& out, const std::string& key, const std::string& val) {
  out += key;
  out += " = ";
  out += val;
  out += "\n";
}

void emit_rows(std::string& out, const std::string& key, size_t cols,
               const std::vector<Vec>& rows) {
  out += key;
  out += " = ";
  out += std::to_string(rows.size());
  out += " x ";
  out += std::to_string(cols);
  out += "\n";
  if (cols == 0) return;
  for (const Vec& v : rows) {
    for (size_t j = 0; j < v.size(); ++j) {
      if (j > 0) out += " ";
      out += int_str(v[j]);
    }
    out += "\n";
  }
}

void emit_hom(std::string& out, const std::string& key, const AbHom& f) {
  Mat m = f.m;
  for (size_t j = 0; j < m.cols; ++j) set_col(m, j, reduce(f.dst, get_col(m, j)));
  std::vector<Vec> rows(m.rows, Vec(m.cols));
  for (size_t r = 0; r < m.rows; ++r)
    for (size_t c = 0; c < m.cols; ++c) rows[r][c] = m.at(r, c);
  emit_rows(out, key, m.cols, rows);
}

std::vector<Vec> form_rows(const std::vector<std::vector<Vec>>& form,
                           const FgAbGroup& val) {
  std::vector<Vec> rows;
  for (const auto& r : form)
    for (const Vec& v : r) rows.push_back(reduce(val, v));
  return rows;
}

// The linear part of a quadratic map on the center, recovered by evaluation so
// it works in both storage modes.
AbHom center_hom_of(const QuadraticMap& m) {
  const FgAbGroup& ctr = m.domain.center_part;
  std::vector<Vec> cols;
  for (size_t k = 0; k < ctr.ngens(); ++k)
    cols.push_back(qmap_eval(m, nil2_el(m.domain, zero_of(m.domain.quotient),
                                        unit_of(ctr, k))));
  return hom_from_cols(ctr, m.codomain, cols);
}

PreSquareGroup psg_from_doc(const Doc& d) {
  const Section& sme = need_section(d, "Me");
  FgAbGroup q = need_group(sme, "quotient");
  FgAbGroup c = need_group(sme, "center");
  const std::string& mode = need_kv(sme, "mode");
  const size_t n = q.ngens();

  Cocycle f;
  if (mode == "structured") {
    f = cocycle_zero(q, c);
    f.bil = form_from_block(need_mat(sme, "bil"), n, c, "'bil'");
    const MatBlock& cb = need_mat(sme, "carry");
    check_dims(cb, n, c.ngens(), "'carry'");
    f.carry = cb.data;
  } else if (mode == "table") {
    if (!q.is_finite())
      fail_at(sme.kv_line.at("mode"), "value tables need a finite quotient");
    const MatBlock& tb = need_mat(sme, "table");
    const Int qs = q.order();
    if (Int(tb.rows) != qs * qs || tb.cols != c.ngens())
      fail_at(tb.line, "'table' must be " + int_str(qs * qs) + " x " +
                           std::to_string(c.ngens()));
    try {
      f = cocycle_from_table(q, c, tb.data, qs);
    } catch (const std::runtime_error& e) {
      fail_at(tb.line, e.what());
    }
  } else {
    fail_at(sme.kv_line.at("mode"), "mode must be 'structured' or 'table'");
  }

  PreSquareGroup m;
  try {
    m.me = nil2_group(q, c, f);
  } catch (const std::runtime_error& e) {
    fail_at(sme.line, e.what());
  }
  m.mee = need_group(need_section(d, "Mee"), "group");
  m.sigma = hom_from_block(need_mat(need_section(d, "sigma"), "matrix"), m.mee,
                           m.mee, "the sigma matrix");
  m.p = hom_from_block(need_mat(need_section(d, "P"), "matrix"), m.mee, c,
                       "the P matrix");
  m.bracket = form_from_block(need_mat(need_section(d, "bracket"), "matrix"), n,
                              m.mee, "the bracket matrix");
  return m;
}

void emit_psg_body(std::string& out, const PreSquareGroup& m) {
  const Nil2Group& me = m.me;
  out += "[Me]\n";
  emit_kv(out, "quotient", format_group(me.quotient));
  emit_kv(out, "center", format_group(me.center_part));
  if (me.f.structured) {
    emit_kv(out, "mode", "structured");
    emit_rows(out, "bil", me.f.c.ngens(), form_rows(me.f.bil, me.f.c));
    std::vector<Vec> carry;
    for (const Vec& v : me.f.carry) carry.push_back(reduce(me.f.c, v));
    emit_rows(out, "carry", me.f.c.ngens(), carry);
  } else {
    emit_kv(out, "mode", "table");
    Cocycle t = cocycle_to_table(me.f, me.quotient.order());
    std::vector<Vec> rows;
    for (const Vec& v : t.table) rows.push_back(reduce(me.f.c, v));
    emit_rows(out, "table", me.f.c.ngens(), rows);
  }
  out += "\n[Mee]\n";
  emit_kv(out, "group", format_group(m.mee));
  out += "\n[sigma]\n";
  emit_hom(out, "matrix", m.sigma);
  out += "\n[P]\n";
  emit_hom(out, "matrix", m.p);
  out += "\n[bracket]\n";
  emit_rows(out, "matrix", m.mee.ngens(), form_rows(m.bracket, m.mee));
}

}  // namespace

PreSquareGroup parse_psg(const std::string& text) {
  return psg_from_doc(parse_doc(text));
}

std::string format_psg(const PreSquareGroup& m) {
  std::string out;
  emit_psg_body(out, m);
  return out;
}

SquareGroup parse_sg(const std::string& text) {
  Doc d = parse_doc(text);
  PreSquareGroup shell = psg_from_doc(d);

  const Section& sh = need_section(d, "H");
  const std::string& mode = need_kv(sh, "mode");
  QuadraticMap hm;
  hm.domain = shell.me;
  hm.codomain = shell.mee;
  const FgAbGroup& qu = shell.me.quotient;
  const FgAbGroup& ctr = shell.me.center_part;
  const FgAbGroup& ee = shell.mee;

  if (mode == "structured") {
    hm.structured = true;
    hm.h = hom_from_block(need_mat(need_section(d, "H.h"), "matrix"), ctr, ee,
                          "the H.h matrix");
    const Section& sg_ = need_section(d, "H.g");
    QuadraticFn g;
    try {
      g = qfn_zero(qu, ee);
    } catch (const std::runtime_error& e) {
      fail_at(sg_.line, e.what());
    }
    const size_t tsize = g.base.size();
    const size_t fr = g.sq.size();
    const MatBlock& bb = need_mat(sg_, "base");
    check_dims(bb, tsize, ee.ngens(), "'base'");
    g.base = bb.data;
    const MatBlock& sb = need_mat(sg_, "slope");
    check_dims(sb, fr * tsize, ee.ngens(), "'slope'");
    for (size_t j = 0; j < fr; ++j)
      for (size_t t = 0; t < tsize; ++t) g.slope[j][t] = sb.data[j * tsize + t];
    const MatBlock& qb = need_mat(sg_, "sq");
    check_dims(qb, fr, ee.ngens(), "'sq'");
    g.sq = qb.data;
    const MatBlock& mb = need_mat(sg_, "mixed");
    check_dims(mb, fr * fr, ee.ngens(), "'mixed'");
    for (size_t j = 0; j < fr; ++j)
      for (size_t j2 = 0; j2 < fr; ++j2) g.mixed[j][j2] = mb.data[j * fr + j2];
    hm.g = g;
    hm.cross = form_from_block(need_mat(need_section(d, "H.cross"), "matrix"),
                               qu.ngens(), ee, "the H.cross matrix");
  } else if (mode == "table") {
    hm.structured = false;
    if (!qu.is_finite() || !ctr.is_finite())
      fail_at(sh.kv_line.at("mode"), "value tables need finite groups");
    const MatBlock& tb = need_mat(sh, "table");
    const Int rows = qu.order() * ctr.order();
    if (Int(tb.rows) != rows || tb.cols != ee.ngens())
      fail_at(tb.line,
              "'table' must be " + int_str(rows) + " x " + std::to_string(ee.ngens()));
    hm.table = tb.data;
  } else {
    fail_at(sh.kv_line.at("mode"), "mode must be 'structured' or 'table'");
  }

  SquareGroup out{shell.me, shell.mee, std::move(hm), shell.p};

  // The sigma and bracket sections are redundant for a square group; insist
  // they agree with what the quadratic map determines.
  AbHom h = center_hom_of(out.hmap);
  AbHom sigma = hom_sub(compose(h, out.p), hom_identity(out.qee));
  if (!hom_equal(sigma, shell.sigma))
    throw InputError("declared sigma does not match the quadratic data");
  for (size_t i = 0; i < qu.ngens(); ++i)
    for (size_t j = 0; j < qu.ngens(); ++j) {
      Vec want = out.hmap.structured
                     ? out.hmap.cross[i][j]
                     : sg_cross_eval(out, nil2_el(out.qe, unit_of(qu, i), zero_of(ctr)),
                                     nil2_el(out.qe, unit_of(qu, j), zero_of(ctr)));
      if (!is_zero(ee, sub(ee, want, shell.bracket[i][j])))
        throw InputError("declared bracket does not match the cross effect");
    }
  return out;
}

std::string format_sg(const SquareGroup& q) {
  const FgAbGroup& ee = q.qee;
  PreSquareGroup shell;
  shell.me = q.qe;
  shell.mee = ee;
  shell.p = q.p;
  AbHom h = center_hom_of(q.hmap);
  shell.sigma = hom_sub(compose(h, q.p), hom_identity(ee));
  const size_t n = q.qe.quotient.ngens();
  shell.bracket.assign(n, std::vector<Vec>(n));
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j)
      shell.bracket[i][j] =
          q.hmap.structured
              ? q.hmap.cross[i][j]
              : sg_cross_eval(q, nil2_el(q.qe, unit_of(q.qe.quotient, i),
                                         zero_of(q.qe.center_part)),
                              nil2_el(q.qe, unit_of(q.qe.quotient, j),
                                      zero_of(q.qe.center_part)));

  std::string out;
  emit_psg_body(out, shell);
  out += "\n[H]\n";
  if (q.hmap.structured) {
    emit_kv(out, "mode", "structured");
    out += "\n[H.h]\n";
    emit_hom(out, "matrix", q.hmap.h);
    out += "\n[H.g]\n";
    const QuadraticFn& g = q.hmap.g;
    const size_t tsize = g.base.size();
    const size_t fr = g.sq.size();
    std::vector<Vec> rows;
    for (const Vec& v : g.base) rows.push_back(reduce(ee, v));
    emit_rows(out, "base", ee.ngens(), rows);
    rows.clear();
    for (size_t j = 0; j < fr; ++j)
      for (size_t t = 0; t < tsize; ++t) rows.push_back(reduce(ee, g.slope[j][t]));
    emit_rows(out, "slope", ee.ngens(), rows);
    rows.clear();
    for (const Vec& v : g.sq) rows.push_back(reduce(ee, v));
    emit_rows(out, "sq", ee.ngens(), rows);
    rows.clear();
    for (size_t j = 0; j < fr; ++j)
      for (size_t j2 = 0; j2 < fr; ++j2) rows.push_back(reduce(ee, g.mixed[j][j2]));
    emit_rows(out, "mixed", ee.ngens(), rows);
    out += "\n[H.cross]\n";
    emit_rows(out, "matrix", ee.ngens(), form_rows(q.hmap.cross, ee));
  } else {
    emit_kv(out, "mode", "table");
    std::vector<Vec> rows;
    for (const Vec& v : q.hmap.table) rows.push_back(reduce(ee, v));
    emit_rows(out, "table", ee.ngens(), rows);
  }
  return out;
}

MapDoc parse_map(const std::string& text) {
  Doc d = parse_doc(text);
  const Section& sm = need_section(d, "map");
  FgAbGroup src = need_group(sm, "src");
  FgAbGroup dst = need_group(sm, "dst");
  MapDoc out;
  out.map = hom_from_block(need_mat(sm, "matrix"), src, dst, "the map matrix");
  if (const Section* si = d.find("involution")) {
    out.has_involution = true;
    out.involution =
        hom_from_block(need_mat(*si, "matrix"), dst, dst, "the involution matrix");
  }
  return out;
}

std::string format_map(const AbHom& f, const AbHom* involution) {
  std::string out;
  out += "[map]\n";
  emit_kv(out, "src", format_group(f.src));
  emit_kv(out, "dst", format_group(f.dst));
  emit_hom(out, "matrix", f);
  if (involution != nullptr) {
    out += "\n[involution]\n";
    emit_hom(out, "matrix", *involution);
  }
  return out;
}

KTriple parse_target(const std::string& text) {
  Doc d = parse_doc(text);
  const Section& st = need_section(d, "target");
  const std::string& ns = need_kv(st, "n");
  if (!all_digits(ns) || ns.size() > 3)
    fail_at(st.kv_line.at("n"), "n must be a small nonnegative integer");
  KTriple t;
  t.n = std::stoi(ns);
  t.pi_n = need_group(st, "pi_n");
  t.pi_n1 = need_group(st, "pi_n1");
  FgAbGroup ksrc = t.n == 2 ? quad_value(Functor::Gamma, t.pi_n).group
                            : tensor(parse_group("Z/2Z"), t.pi_n).group;
  t.k = hom_from_block(need_mat(need_section(d, "k"), "matrix"), ksrc, t.pi_n1,
                       "the k matrix");
  t.involution = hom_from_block(need_mat(need_section(d, "involution"), "matrix"),
                                t.pi_n1, t.pi_n1, "the involution matrix");
  return t;
}

std::string format_target(const KTriple& t) {
  std::string out;
  out += "[target]\n";
  emit_kv(out, "n", std::to_string(t.n));
  emit_kv(out, "pi_n", format_group(t.pi_n));
  emit_kv(out, "pi_n1", format_group(t.pi_n1));
  out += "\n[k]\n";
  emit_hom(out, "matrix", t.k);
  out += "\n[involution]\n";
  emit_hom(out, "matrix", t.involution);
  return out;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  SQG_INPUT_CHECK(in.good(), "cannot read file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  SQG_INPUT_CHECK(out.good(), "cannot write file: " + path);
  out << text;
  SQG_INPUT_CHECK(out.good(), "cannot write file: " + path);
}

}  // namespace sqg
