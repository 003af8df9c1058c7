#include "teamrec/markup.hpp"

#include <cctype>
#include <charconv>

#include "teamrec/common.hpp"

namespace teamrec {

namespace {

void append_utf8(std::string& out, unsigned long cp) {
  if (cp < 0x80) {
    out += static_cast<char>(cp);
  } else if (cp < 0x800) {
    out += static_cast<char>(0xC0 | (cp >> 6));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else if (cp < 0x10000) {
    out += static_cast<char>(0xE0 | (cp >> 12));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else {
    out += static_cast<char>(0xF0 | (cp >> 18));
    out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  }
}

bool is_name_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.' || c == ':';
}

class Parser {
 public:
  explicit Parser(std::string_view doc) : doc_(doc) {}

  MarkupElement document() {
    skip_misc();
    if (!at("<")) fail("expected root element");
    MarkupElement root = element();
    skip_misc();
    if (pos_ != doc_.size()) fail("content after root element");
    return root;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw Error(ErrorCode::parse_error, what + " at offset " + std::to_string(pos_));
  }

  bool at(std::string_view s) const { return doc_.substr(pos_, s.size()) == s; }

  void skip_ws() {
    while (pos_ < doc_.size() && std::isspace(static_cast<unsigned char>(doc_[pos_]))) ++pos_;
  }

  void skip_past(std::string_view terminator) {
    const auto end = doc_.find(terminator, pos_);
    if (end == std::string_view::npos) fail("unterminated construct, expected " + std::string(terminator));
    pos_ = end + terminator.size();
  }

  // Whitespace, comments, processing instructions and doctype outside the root.
  void skip_misc() {
    for (;;) {
      skip_ws();
      if (at("<?")) {
        skip_past("?>");
      } else if (at("<!--")) {
        skip_past("-->");
      } else if (at("<!DOCTYPE")) {
        skip_past(">");
      } else {
        return;
      }
    }
  }

  std::string name() {
    const std::size_t start = pos_;
    while (pos_ < doc_.size() && is_name_char(doc_[pos_])) ++pos_;
    if (start == pos_) fail("expected a name");
    return std::string(doc_.substr(start, pos_ - start));
  }

  MarkupElement element() {
    ++pos_;  // '<'
    MarkupElement el;
    el.name = name();
    for (;;) {
      skip_ws();
      if (at("/>")) {
        pos_ += 2;
        return el;
      }
      if (at(">")) {
        ++pos_;
        break;
      }
      std::string key = name();
      skip_ws();
      if (!at("=")) fail("expected '=' after attribute " + key);
      ++pos_;
      skip_ws();
      if (pos_ >= doc_.size() || (doc_[pos_] != '"' && doc_[pos_] != '\'')) fail("expected quoted attribute value");
      const char quote = doc_[pos_++];
      const auto end = doc_.find(quote, pos_);
      if (end == std::string_view::npos) fail("unterminated attribute value");
      el.attributes[key] = decode_entities(doc_.substr(pos_, end - pos_));
      pos_ = end + 1;
    }
    for (;;) {
      if (pos_ >= doc_.size()) fail("unterminated element <" + el.name + ">");
      if (at("</")) {
        pos_ += 2;
        const std::string closing = name();
        if (closing != el.name) fail("mismatched </" + closing + "> for <" + el.name + ">");
        skip_ws();
        if (!at(">")) fail("expected '>'");
        ++pos_;
        return el;
      }
      if (at("<!--")) {
        skip_past("-->");
      } else if (at("<![CDATA[")) {
        pos_ += 9;
        const auto end = doc_.find("]]>", pos_);
        if (end == std::string_view::npos) fail("unterminated CDATA");
        el.text.append(doc_.substr(pos_, end - pos_));
        pos_ = end + 3;
      } else if (at("<?")) {
        skip_past("?>");
      } else if (at("<")) {
        el.children.push_back(element());
      } else {
        const auto end = doc_.find('<', pos_);
        const auto stop = end == std::string_view::npos ? doc_.size() : end;
        el.text += decode_entities(doc_.substr(pos_, stop - pos_));
        pos_ = stop;
      }
    }
  }

  std::string_view doc_;
  std::size_t pos_ = 0;
};

}  // namespace

const MarkupElement* MarkupElement::child(std::string_view child_name) const {
  for (const auto& c : children) {
    if (c.name == child_name) return &c;
  }
  return nullptr;
}

std::vector<const MarkupElement*> MarkupElement::children_named(std::string_view child_name) const {
  std::vector<const MarkupElement*> out;
  for (const auto& c : children) {
    if (c.name == child_name) out.push_back(&c);
  }
  return out;
}

MarkupElement parse_markup(std::string_view document) { return Parser(document).document(); }

std::string decode_entities(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  std::size_t i = 0;
  while (i < text.size()) {
    if (text[i] != '&') {
      out += text[i++];
      continue;
    }
    const auto semi = text.find(';', i);
    if (semi == std::string_view::npos || semi - i > 10) {
      out += text[i++];
      continue;
    }
    const std::string_view entity = text.substr(i + 1, semi - i - 1);
    if (entity == "amp") out += '&';
    else if (entity == "lt") out += '<';
    else if (entity == "gt") out += '>';
    else if (entity == "quot") out += '"';
    else if (entity == "apos") out += '\'';
    else if (entity.size() > 1 && entity[0] == '#') {
      const bool hex = entity[1] == 'x' || entity[1] == 'X';
      const std::string_view digits = entity.substr(hex ? 2 : 1);
      unsigned long cp = 0;
      auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), cp, hex ? 16 : 10);
      if (ec != std::errc{} || ptr != digits.data() + digits.size() || cp > 0x10FFFF) {
        out.append(text.substr(i, semi - i + 1));
      } else {
        append_utf8(out, cp);
      }
    } else {
      out.append(text.substr(i, semi - i + 1));  // unknown entity kept verbatim
    }
    i = semi + 1;
  }
  return out;
}

}  // namespace teamrec
