#pragma once

// Minimal reader for the award archive markup: elements, attributes, text,
// comments, CDATA, the XML declaration and the five predefined entities plus
// numeric character references. No DTDs or namespaces.

#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace teamrec {

struct MarkupElement {
  std::string name;
  std::map<std::string, std::string> attributes;
  std::string text;  // concatenated character data of this element only
  std::vector<MarkupElement> children;

  const MarkupElement* child(std::string_view child_name) const;
  std::vector<const MarkupElement*> children_named(std::string_view child_name) const;
};

// Parses a document with exactly one root element. Throws Error(parse_error)
// with a byte offset on malformed input.
MarkupElement parse_markup(std::string_view document);

std::string decode_entities(std::string_view text);

}  // namespace teamrec
