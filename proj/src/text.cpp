#include "refcover/text.hpp"

#include <cstdint>

#include "refcover/common.hpp"

namespace refcover {

namespace {

constexpr char kSep = '\x1f';  // n-gram key separator

// The punctuation class of the first padding rule: {-~  [-`  space-&  (-+
// :-@  /.  Apostrophe, comma, period and hyphen are deliberately absent.
inline bool pad_class(unsigned char c) {
  return (c >= 0x7b && c <= 0x7e) || (c >= 0x5b && c <= 0x60) ||
         (c >= 0x20 && c <= 0x26) || (c >= 0x28 && c <= 0x2b) ||
         (c >= 0x3a && c <= 0x40) || c == 0x2f;
}

inline bool is_digit(unsigned char c) { return c >= '0' && c <= '9'; }
inline bool is_dotcomma(unsigned char c) { return c == '.' || c == ','; }

void replace_all(std::string& s, const std::string& from,
                 const std::string& to) {
  std::size_t pos = 0;
  while ((pos = s.find(from, pos)) != std::string::npos) {
    s.replace(pos, from.size(), to);
    pos += to.size();
  }
}

// Decodes the UTF-8 sequence starting at s[i]; advances i past it and
// returns the code point.  Invalid bytes are consumed one at a time and
// returned as-is (never whitespace), which keeps the scan total.
std::uint32_t next_codepoint(const std::string& s, std::size_t& i) {
  unsigned char c = static_cast<unsigned char>(s[i]);
  if (c < 0x80) {
    ++i;
    return c;
  }
  int extra;
  std::uint32_t cp;
  if ((c & 0xe0) == 0xc0) {
    extra = 1;
    cp = c & 0x1f;
  } else if ((c & 0xf0) == 0xe0) {
    extra = 2;
    cp = c & 0x0f;
  } else if ((c & 0xf8) == 0xf0) {
    extra = 3;
    cp = c & 0x07;
  } else {
    ++i;
    return c;
  }
  if (i + extra >= s.size()) {
    ++i;
    return c;
  }
  for (int k = 1; k <= extra; ++k) {
    unsigned char cc = static_cast<unsigned char>(s[i + k]);
    if ((cc & 0xc0) != 0x80) {
      ++i;
      return c;
    }
    cp = (cp << 6) | (cc & 0x3f);
  }
  i += 1 + extra;
  return cp;
}

// The whitespace set of Python's str.split(), which the reference pipeline
// uses for the final collapse.
bool is_split_space(std::uint32_t cp) {
  switch (cp) {
    case 0x09: case 0x0a: case 0x0b: case 0x0c: case 0x0d:
    case 0x1c: case 0x1d: case 0x1e: case 0x1f:
    case 0x20: case 0x85: case 0xa0: case 0x1680:
    case 0x2028: case 0x2029: case 0x202f: case 0x205f: case 0x3000:
      return true;
    default:
      return cp >= 0x2000 && cp <= 0x200a;
  }
}

}  // namespace

Tokens tokenize_v13a(const std::string& line) {
  std::string s = line;
  replace_all(s, "<skipped>", "");
  replace_all(s, "-\n", "");
  replace_all(s, "\n", " ");
  if (s.find('&') != std::string::npos) {
    replace_all(s, "&quot;", "\"");
    replace_all(s, "&amp;", "&");
    replace_all(s, "&lt;", "<");
    replace_all(s, "&gt;", ">");
  }
  s = " " + s + " ";

  // Each rule below reproduces one regex substitution with left-to-right,
  // resume-after-match semantics; [^0-9] matches the final byte of a
  // multi-byte character just as the character itself would.
  std::string a;  // pad punctuation
  a.reserve(s.size() * 2);
  for (unsigned char c : s) {
    if (pad_class(c)) {
      a += ' ';
      a += static_cast<char>(c);
      a += ' ';
    } else {
      a += static_cast<char>(c);
    }
  }

  std::string b;  // ([^0-9])([.,]) -> "\1 \2 "
  b.reserve(a.size() * 2);
  for (std::size_t i = 0; i < a.size();) {
    if (i + 1 < a.size() && !is_digit(a[i]) &&
        is_dotcomma(static_cast<unsigned char>(a[i + 1]))) {
      b += a[i];
      b += ' ';
      b += a[i + 1];
      b += ' ';
      i += 2;
    } else {
      b += a[i];
      ++i;
    }
  }

  std::string c;  // ([.,])([^0-9]) -> " \1 \2"
  c.reserve(b.size() * 2);
  for (std::size_t i = 0; i < b.size();) {
    if (i + 1 < b.size() && is_dotcomma(static_cast<unsigned char>(b[i])) &&
        !is_digit(b[i + 1])) {
      c += ' ';
      c += b[i];
      c += ' ';
      c += b[i + 1];
      i += 2;
    } else {
      c += b[i];
      ++i;
    }
  }

  std::string d;  // ([0-9])(-) -> "\1 \2 "
  d.reserve(c.size() * 2);
  for (std::size_t i = 0; i < c.size();) {
    if (i + 1 < c.size() && is_digit(c[i]) && c[i + 1] == '-') {
      d += c[i];
      d += " - ";
      i += 2;
    } else {
      d += c[i];
      ++i;
    }
  }

  Tokens out;
  std::string tok;
  for (std::size_t i = 0; i < d.size();) {
    std::size_t start = i;
    std::uint32_t cp = next_codepoint(d, i);
    if (is_split_space(cp)) {
      if (!tok.empty()) {
        out.push_back(std::move(tok));
        tok.clear();
      }
    } else {
      tok.append(d, start, i - start);
    }
  }
  if (!tok.empty()) out.push_back(std::move(tok));
  return out;
}

Tokens split_tokens(const std::string& line) {
  Tokens out;
  std::size_t pos = 0;
  while (pos <= line.size()) {
    std::size_t sp = line.find(' ', pos);
    std::size_t end = sp == std::string::npos ? line.size() : sp;
    if (end > pos) out.push_back(line.substr(pos, end - pos));
    if (sp == std::string::npos) break;
    pos = sp + 1;
  }
  return out;
}

std::string join_tokens(const Tokens& tokens) {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i) out += ' ';
    out += tokens[i];
  }
  return out;
}

NGramMultiset::NGramMultiset(int max_order) : max_order_(max_order) {
  if (max_order < 1) throw usage_error("max_order must be at least 1");
  orders_.resize(static_cast<std::size_t>(max_order));
}

std::string NGramMultiset::key_of(const Tokens& tokens, std::size_t begin,
                                  int order) {
  std::string key;
  std::size_t len = 0;
  for (int k = 0; k < order; ++k) len += tokens[begin + k].size() + 1;
  key.reserve(len);
  for (int k = 0; k < order; ++k) {
    if (k) key += kSep;
    key += tokens[begin + k];
  }
  return key;
}

Tokens NGramMultiset::tokens_of(const std::string& key) {
  Tokens out;
  std::size_t pos = 0;
  for (;;) {
    std::size_t sep = key.find(kSep, pos);
    if (sep == std::string::npos) {
      out.push_back(key.substr(pos));
      return out;
    }
    out.push_back(key.substr(pos, sep - pos));
    pos = sep + 1;
  }
}

void NGramMultiset::add(const Tokens& tokens, std::size_t begin, int order,
                        long count) {
  at(order)[key_of(tokens, begin, order)] += count;
}

long NGramMultiset::count(int order, const std::string& key) const {
  const auto& m = at(order);
  auto it = m.find(key);
  return it == m.end() ? 0 : it->second;
}

long NGramMultiset::total(int order) const {
  long sum = 0;
  for (const auto& [key, cnt] : at(order)) sum += cnt;
  return sum;
}

std::size_t NGramMultiset::distinct(int order) const {
  return at(order).size();
}

const std::unordered_map<std::string, long>& NGramMultiset::at(
    int order) const {
  if (order < 1 || order > max_order_)
    throw usage_error("n-gram order " + std::to_string(order) +
                      " outside 1.." + std::to_string(max_order_));
  return orders_[static_cast<std::size_t>(order - 1)];
}

std::unordered_map<std::string, long>& NGramMultiset::at(int order) {
  if (order < 1 || order > max_order_)
    throw usage_error("n-gram order " + std::to_string(order) +
                      " outside 1.." + std::to_string(max_order_));
  return orders_[static_cast<std::size_t>(order - 1)];
}

NGramMultiset extract_ngrams(const Tokens& segment, int max_order) {
  NGramMultiset counts(max_order);
  for (int n = 1; n <= max_order; ++n) {
    if (segment.size() < static_cast<std::size_t>(n)) break;
    auto& m = counts.at(n);
    for (std::size_t i = 0; i + n <= segment.size(); ++i)
      m[NGramMultiset::key_of(segment, i, n)] += 1;
  }
  return counts;
}

NGramMultiset clip_counts(const NGramMultiset& hyp,
                          const std::vector<NGramMultiset>& refs) {
  if (refs.empty()) throw usage_error("clip_counts: no references");
  for (const auto& r : refs)
    if (r.max_order() != hyp.max_order())
      throw usage_error("clip_counts: mismatched max_order");
  NGramMultiset clipped(hyp.max_order());
  for (int n = 1; n <= hyp.max_order(); ++n) {
    auto& out = clipped.at(n);
    for (const auto& [key, cnt] : hyp.at(n)) {
      long best = 0;
      for (const auto& r : refs) {
        long rc = r.count(n, key);
        if (rc > best) best = rc;
      }
      long c = cnt < best ? cnt : best;
      if (c > 0) out[key] = c;
    }
  }
  return clipped;
}

}  // namespace refcover
