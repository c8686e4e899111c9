#include "doctest.h"

#include "ifl/base/error.h"
#include "ifl/origin/sop.h"
#include "ifl/origin/url.h"

using namespace ifl::origin;

namespace {

std::string Decide(const char* subject, const char* target, SopMode mode) {
  SopPolicy policy;
  policy.mode = mode;
  return MayAccess(OriginOf(ParseUrl(subject), policy), ParseUrl(target), policy)
      .ToString();
}

size_t ErrorPosition(const char* text) {
  try {
    ParseUrl(text);
  } catch (const MalformedUrl& e) {
    return e.position();
  }
  FAIL("parsed: " << text);
  return 0;
}

}  // namespace

TEST_CASE("parse") {
  Url u = ParseUrl("file:///dir1/a.html");
  CHECK(u.scheme == Scheme::kFile);
  CHECK(u.host.empty());
  CHECK_FALSE(u.port);
  CHECK(u.path == "/dir1/a.html");

  Url h = ParseUrl("HTTP://Evil.COM:8080/x/y?q=1#f");
  CHECK(h.host == "evil.com");
  CHECK(h.port == 8080);
  CHECK(h.query == "q=1");
  CHECK(h.fragment == "f");

  Url i = ParseUrl("intent://x#Intent;component=a/b;end");
  CHECK(i.scheme == Scheme::kIntent);
  CHECK(i.host == "x");
  CHECK(i.query == "Intent;component=a/b;end");
  CHECK(i.Spec() == "intent://x/#Intent;component=a/b;end");

  CHECK(ParseUrl("file:///a/%20b/%2fc").path == "/a/ b/c");
  CHECK(ParseUrl("file:///a/./b/").path == "/a/b/");
}

TEST_CASE("malformed urls report a position") {
  CHECK(ErrorPosition("nonsense") == 0);
  CHECK(ErrorPosition("gopher://x/") == 0);
  CHECK(ErrorPosition("http://a b/") == 8);
  CHECK(ErrorPosition("http://a:0/") == 9);
  CHECK(ErrorPosition("http://a:99999/") == 9);
  CHECK(ErrorPosition("file:///a/../b") == 10);
  CHECK(ErrorPosition("file://evil.com/x") == 7);
  CHECK(ErrorPosition("content://:1/x") == 10);
  CHECK(ErrorPosition("http:///x") == 7);
  CHECK(ErrorPosition("file:///a/b%2f..%2fc") == 7);
  CHECK(ParseUrl("file:///a/%2e%2e/b").path == "/a/%2e%2e/b");
}

TEST_CASE("resolve") {
  Url base = ParseUrl("file:///data/data/app/files/index.html");
  CHECK(ResolveUrl(base, "../databases/h.db").Spec() ==
        "file:///data/data/app/databases/h.db");
  CHECK(ResolveUrl(base, "../../../../../../etc/x").Spec() == "file:///etc/x");
  CHECK(ResolveUrl(base, "http://evil.com/p").Spec() == "http://evil.com/p");
  Url web = ParseUrl("http://evil.com:81/a/b.html");
  CHECK(ResolveUrl(web, "/c?d#e").Spec() == "http://evil.com:81/c?d#e");
  CHECK(ResolveUrl(web, "//other.com/").Spec() == "http://other.com/");
  CHECK(ParentDirectory("/dir1/a.html") == "/dir1/");
}

TEST_CASE("origin tuples") {
  SopPolicy legacy;
  Origin o = OriginOf(ParseUrl("file:///dir1/a.html"), legacy);
  CHECK(o.host == "localhost");
  CHECK_FALSE(o.port);
  CHECK_FALSE(o.path_dir);

  SopPolicy enhanced{SopMode::kEnhanced, false, false};
  CHECK(OriginOf(ParseUrl("file:///dir1/a.html"), enhanced).path_dir == "/dir1/");
  CHECK_FALSE(OriginOf(ParseUrl("http://a.com/x/y"), enhanced).path_dir);
  CHECK(OriginOf(ParseUrl("https://a.com/"), legacy).port == 443);
}

// Hand-derived before implementation. Columns: permissive, legacy, enhanced.
TEST_CASE("decision table") {
  struct Row {
    const char* subject;
    const char* target;
    const char* expected[3];
  };
  const Row rows[] = {
      {"file:///dir1/a.html", "file:///dir2/b.txt",
       {"allow", "allow", "deny:path_dir"}},
      {"file:///dir1/a.html", "file:///dir1/c.txt", {"allow", "allow", "allow"}},
      {"file:///dir1/a.html", "file:///dir1/sub/d.txt",
       {"allow", "allow", "deny:path_dir"}},
      {"http://evil.com/x", "file:///data/data/app/cookies.db",
       {"deny:cross-scheme", "deny:cross-scheme", "deny:cross-scheme"}},
      {"http://a.com/", "http://a.com:8080/", {"deny:port", "deny:port", "deny:port"}},
      {"http://a.com/", "http://b.com/", {"deny:host", "deny:host", "deny:host"}},
  };
  const SopMode modes[] = {SopMode::kPermissive, SopMode::kLegacy,
                           SopMode::kEnhanced};
  for (const Row& row : rows) {
    for (int m = 0; m < 3; ++m) {
      CAPTURE(row.subject);
      CAPTURE(row.target);
      CAPTURE(SopModeName(modes[m]));
      CHECK(Decide(row.subject, row.target, modes[m]) == row.expected[m]);
    }
  }
}

TEST_CASE("policy knobs") {
  SopPolicy broken{SopMode::kLegacy, false, true};
  CHECK(MayAccess(OriginOf(ParseUrl("http://evil.com/"), broken),
                  ParseUrl("file:///data/x"), broken)
            .allowed);

  SopPolicy loose{SopMode::kEnhanced, true, false};
  CHECK(MayAccess(OriginOf(ParseUrl("file:///dir1/a.html"), loose),
                  ParseUrl("file:///dir2/b.txt"), loose)
            .allowed);

  SopPolicy legacy;
  CHECK(MayAccess(OriginOf(ParseUrl("content://p/a"), legacy),
                  ParseUrl("content://p/a"), legacy)
            .ToString() == "deny:scheme");
  CHECK(MayAccess(OriginOf(ParseUrl("file:///a"), legacy),
                  ParseUrl("content://p/a"), legacy)
            .ToString() == "deny:scheme");
}

TEST_CASE("strictness is monotonic for file pairs") {
  const char* paths[] = {"file:///a/x", "file:///a/y", "file:///b/x",
                         "file:///a/c/x", "file:///x"};
  for (const char* s : paths) {
    for (const char* t : paths) {
      bool enhanced = Decide(s, t, SopMode::kEnhanced) == "allow";
      bool legacy = Decide(s, t, SopMode::kLegacy) == "allow";
      bool permissive = Decide(s, t, SopMode::kPermissive) == "allow";
      CHECK((!enhanced || legacy));
      CHECK((!legacy || permissive));
    }
  }
}
