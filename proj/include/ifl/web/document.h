#ifndef IFL_WEB_DOCUMENT_H_
#define IFL_WEB_DOCUMENT_H_

#include <string>
#include <string_view>
#include <vector>

#include "ifl/origin/sop.h"
#include "ifl/origin/url.h"
#include "ifl/web/script.h"

namespace ifl::web {

struct Link {
  std::string text;
  origin::Url url;
};

struct Document {
  origin::Url url;
  origin::Origin origin;
  std::string body;
  std::string content_type = "text/html";
  std::string title;
  std::vector<Script> scripts;
  std::vector<origin::Url> frames;
  std::vector<Link> links;
};

// Decodes &lt; &gt; &quot; &#39; and &amp;; anything else stays as written.
std::string DecodeEntities(std::string_view text);

// Only text/html bodies yield scripts, frames, links and a title. Frame and
// link targets resolve against |url|; unresolvable ones are dropped.
Document ParseDocument(const origin::Url& url, std::string body,
                       const origin::SopPolicy& policy,
                       std::string content_type = "text/html");

}  // namespace ifl::web

#endif  // IFL_WEB_DOCUMENT_H_
