#ifndef IFL_NET_NETWORK_H_
#define IFL_NET_NETWORK_H_

#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ifl/base/trace.h"

namespace ifl::net {

enum class NodeKind { kDeviceApp, kIntranetHost, kInternetHost, kDesktopBrowser };
enum class Scope { kLoopback, kIntranet, kInternet };

std::string_view NodeKindName(NodeKind kind);
std::string_view ScopeName(Scope scope);

struct Message {
  uint64_t seq = 0;
  std::string from;
  std::string payload;
};

// Device apps share their device's host name and port namespace; every other
// node is its own host.
struct Node {
  std::string id;
  NodeKind kind = NodeKind::kIntranetHost;
  std::string host;
  // Installed app behind a kDeviceApp node.
  std::string app_id;
  std::vector<Message> inbox;
};

struct ScreenState {
  enum class Kind { kForeground, kOffLocked };
  Kind kind = Kind::kForeground;
  std::string app_id;

  static ScreenState Foreground(std::string app) {
    return {Kind::kForeground, std::move(app)};
  }
  static ScreenState OffLocked() { return {Kind::kOffLocked, {}}; }
  std::string ToString() const;
};

// One request/response exchange as the network saw it.
struct Frame {
  uint64_t seq = 0;
  uint64_t connection = 0;
  std::string client;
  std::string host;
  int port = 0;
  Scope scope = Scope::kLoopback;
  bool encrypted = false;
  std::string request;
  std::string response;

  bool operator==(const Frame&) const = default;
};

using ConnectionId = uint64_t;

struct ServiceHandlers {
  // Returns false to refuse the connection before any byte is served.
  std::function<bool(ConnectionId, const Node& client)> on_connect;
  // Sent by the server as soon as the connection opens (e.g. a banner).
  std::function<std::string(ConnectionId)> greeting;
  std::function<std::string(ConnectionId, const Node& client,
                            const std::string& request)>
      on_request;
};

struct Connection {
  ConnectionId id = 0;
  std::string greeting;
};

enum class VectorKind { kWebPage, kEmailAttachment, kChatFile, kOpenWith };
std::string_view VectorKindName(VectorKind kind);
std::optional<VectorKind> ParseVectorKind(std::string_view name);

struct AttackVector {
  VectorKind kind = VectorKind::kWebPage;
  // kWebPage only.
  std::string url;
  // File vectors only.
  std::string file_name;
  std::string content;
};

enum class FileOpening { kInApp, kDedicatedApp };

struct DeliveryPolicy {
  FileOpening file_opening = FileOpening::kDedicatedApp;
  bool accepts_html = true;
};

enum class DeliveryOutcome { kOpenInApp, kHandedToDedicatedApp };

struct Delivery {
  uint64_t seq = 0;
  std::string from;
  std::string victim;
  AttackVector vector;
  DeliveryOutcome outcome = DeliveryOutcome::kOpenInApp;
};

// Deterministic, single-threaded simulated network. Bytes move between scopes
// only through port bindings (Connect/Request), Post and Deliver.
class Network {
 public:
  explicit Network(Trace& trace);

  Node& AddNode(std::string id, NodeKind kind, std::string host,
                std::string app_id = {});
  const Node& node(std::string_view id) const;
  Node* FindNode(std::string_view id);
  const Node* FindNode(std::string_view id) const;
  const Node* FindAppNode(std::string_view app_id) const;
  bool HasHost(std::string_view host) const;

  void Bind(const std::string& owner_node, int port, bool background_capable,
            bool encrypted, ServiceHandlers handlers);
  void SetScreen(const std::string& device_host, ScreenState state);
  std::optional<ScreenState> screen(std::string_view device_host) const;

  // Throws Error(kUnreachable) when |actor| cannot reach |host| at all.
  Scope ScopeBetween(std::string_view actor, std::string_view host) const;
  std::vector<int> ScanPorts(const std::string& actor, const std::string& host);

  // Errors: kUnreachable (no route, nothing bound, or screen-gated),
  // kConnectionRejected (the service refused the client).
  Connection Connect(const std::string& actor, const std::string& host,
                     int port);
  std::string Request(ConnectionId connection, const std::string& request);

  // One-way message to |to_node|'s inbox.
  void Post(const std::string& actor, const std::string& to_node,
            std::string payload);

  // Everything an Intranet sniffer captured on |scope| since world start.
  // Encrypted exchanges appear as opaque "<encrypted N bytes>" markers.
  // Throws Error(kNotPermitted) unless |adversary| is an Intranet host
  // listening on the Intranet.
  std::vector<Frame> Sniff(const std::string& adversary, Scope scope);
  static std::string DumpCapture(const std::vector<Frame>& frames);

  // Errors: kChannelRefused, kNotPermitted.
  Delivery Deliver(const std::string& adversary, const std::string& victim,
                   AttackVector vector, const DeliveryPolicy& policy);
  std::optional<Delivery> TakeDelivery(const std::string& victim);

  const std::vector<Frame>& exchanges() const { return exchanges_; }

 private:
  struct Binding {
    std::string owner_node;
    bool background_capable = false;
    bool encrypted = false;
    ServiceHandlers handlers;
  };
  struct OpenConnection {
    std::string client;
    std::string host;
    int port = 0;
    Scope scope = Scope::kLoopback;
  };
  struct HostInfo {
    bool internet = false;
    std::optional<ScreenState> screen;
  };

  bool Reachable(const std::string& host, const Binding& binding) const;
  const Binding* FindBinding(const std::string& host, int port) const;

  Trace& trace_;
  std::map<std::string, Node, std::less<>> nodes_;
  std::map<std::string, HostInfo, std::less<>> hosts_;
  std::map<std::pair<std::string, int>, Binding> bindings_;
  std::map<ConnectionId, OpenConnection> connections_;
  std::map<std::string, std::deque<Delivery>, std::less<>> pending_;
  std::vector<Frame> exchanges_;
  uint64_t next_seq_ = 1;
  ConnectionId next_connection_ = 1;
};

}  // namespace ifl::net

#endif  // IFL_NET_NETWORK_H_
