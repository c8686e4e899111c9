#include "ifl/net/network.h"

#include "ifl/base/codec.h"
#include "ifl/base/error.h"

namespace ifl::net {

namespace {

bool IsLanSide(NodeKind kind) {
  return kind != NodeKind::kInternetHost;
}

bool IsHtmlName(std::string_view name) {
  return name.ends_with(".html") || name.ends_with(".htm");
}

std::string Opaque(const std::string& bytes) {
  return "<encrypted " + std::to_string(bytes.size()) + " bytes>";
}

}  // namespace

std::string_view NodeKindName(NodeKind kind) {
  switch (kind) {
    case NodeKind::kDeviceApp:
      return "device_app";
    case NodeKind::kIntranetHost:
      return "intranet_host";
    case NodeKind::kInternetHost:
      return "internet_host";
    case NodeKind::kDesktopBrowser:
      return "desktop_browser";
  }
  return "";
}

std::string_view ScopeName(Scope scope) {
  switch (scope) {
    case Scope::kLoopback:
      return "loopback";
    case Scope::kIntranet:
      return "intranet";
    case Scope::kInternet:
      return "internet";
  }
  return "";
}

std::string ScreenState::ToString() const {
  return kind == Kind::kOffLocked ? "off_locked" : "foreground:" + app_id;
}

std::string_view VectorKindName(VectorKind kind) {
  switch (kind) {
    case VectorKind::kWebPage:
      return "web_page";
    case VectorKind::kEmailAttachment:
      return "email_attachment";
    case VectorKind::kChatFile:
      return "chat_file";
    case VectorKind::kOpenWith:
      return "open_with";
  }
  return "";
}

std::optional<VectorKind> ParseVectorKind(std::string_view name) {
  for (VectorKind k : {VectorKind::kWebPage, VectorKind::kEmailAttachment,
                       VectorKind::kChatFile, VectorKind::kOpenWith}) {
    if (VectorKindName(k) == name)
      return k;
  }
  return std::nullopt;
}

Network::Network(Trace& trace) : trace_(trace) {}

Node& Network::AddNode(std::string id, NodeKind kind, std::string host,
                       std::string app_id) {
  HostInfo& info = hosts_[host];
  info.internet = kind == NodeKind::kInternetHost;
  Node node{id, kind, std::move(host), std::move(app_id), {}};
  auto [it, inserted] = nodes_.insert_or_assign(std::move(id), std::move(node));
  return it->second;
}

const Node& Network::node(std::string_view id) const {
  const Node* n = FindNode(id);
  if (!n)
    throw Error(Errc::kUnreachable, "no node " + std::string(id));
  return *n;
}

Node* Network::FindNode(std::string_view id) {
  auto it = nodes_.find(id);
  return it == nodes_.end() ? nullptr : &it->second;
}

const Node* Network::FindNode(std::string_view id) const {
  auto it = nodes_.find(id);
  return it == nodes_.end() ? nullptr : &it->second;
}

const Node* Network::FindAppNode(std::string_view app_id) const {
  for (const auto& [id, n] : nodes_) {
    if (n.kind == NodeKind::kDeviceApp && n.app_id == app_id)
      return &n;
  }
  return nullptr;
}

bool Network::HasHost(std::string_view host) const {
  return hosts_.contains(host);
}

void Network::Bind(const std::string& owner_node, int port,
                   bool background_capable, bool encrypted,
                   ServiceHandlers handlers) {
  const Node& owner = node(owner_node);
  bindings_[{owner.host, port}] =
      Binding{owner_node, background_capable, encrypted, std::move(handlers)};
}

void Network::SetScreen(const std::string& device_host, ScreenState state) {
  hosts_[device_host].screen = std::move(state);
  trace_.Record({"screen", device_host, "", hosts_[device_host].screen->ToString()});
}

std::optional<ScreenState> Network::screen(std::string_view device_host) const {
  auto it = hosts_.find(device_host);
  if (it == hosts_.end())
    return std::nullopt;
  return it->second.screen;
}

Scope Network::ScopeBetween(std::string_view actor,
                            std::string_view host) const {
  const Node& from = node(actor);
  auto target = hosts_.find(host);
  if (target == hosts_.end())
    throw Error(Errc::kUnreachable, "unknown host " + std::string(host));
  if (from.host == host)
    return Scope::kLoopback;
  if (target->second.internet)
    return Scope::kInternet;
  if (!IsLanSide(from.kind))
    throw Error(Errc::kUnreachable,
                std::string(actor) + " cannot reach " + std::string(host));
  return Scope::kIntranet;
}

bool Network::Reachable(const std::string& host, const Binding& binding) const {
  auto it = hosts_.find(host);
  if (it == hosts_.end() || !it->second.screen)
    return true;
  const ScreenState& screen = *it->second.screen;
  const Node& owner = node(binding.owner_node);
  if (screen.kind == ScreenState::Kind::kForeground &&
      screen.app_id == owner.app_id) {
    return true;
  }
  return binding.background_capable;
}

const Network::Binding* Network::FindBinding(const std::string& host,
                                             int port) const {
  auto it = bindings_.find({host, port});
  return it == bindings_.end() ? nullptr : &it->second;
}

std::vector<int> Network::ScanPorts(const std::string& actor,
                                    const std::string& host) {
  Scope scope = ScopeBetween(actor, host);
  std::vector<int> open;
  for (const auto& [key, binding] : bindings_) {
    if (key.first == host && Reachable(host, binding))
      open.push_back(key.second);
  }
  std::string ports;
  for (int p : open)
    ports += (ports.empty() ? "" : ",") + std::to_string(p);
  trace_.Record({"port-scan", actor, host, std::string(ScopeName(scope)) +
                                               " open=[" + ports + "]"});
  return open;
}

Connection Network::Connect(const std::string& actor, const std::string& host,
                            int port) {
  Scope scope = ScopeBetween(actor, host);
  const Binding* binding = FindBinding(host, port);
  std::string where = host + ":" + std::to_string(port);
  if (!binding || !Reachable(host, *binding))
    throw Error(Errc::kUnreachable, where + " is closed");

  ConnectionId id = next_connection_++;
  trace_.Record({"connect", actor, where, std::string(ScopeName(scope))});
  const Node& client = node(actor);
  if (binding->handlers.on_connect && !binding->handlers.on_connect(id, client))
    throw Error(Errc::kConnectionRejected, actor + " -> " + where);

  connections_[id] = OpenConnection{actor, host, port, scope};
  Connection conn{id, {}};
  if (binding->handlers.greeting) {
    conn.greeting = binding->handlers.greeting(id);
    exchanges_.push_back(Frame{next_seq_++, id, actor, host, port, scope,
                               binding->encrypted, "", conn.greeting});
  }
  return conn;
}

std::string Network::Request(ConnectionId connection,
                             const std::string& request) {
  auto it = connections_.find(connection);
  if (it == connections_.end())
    throw Error(Errc::kUnreachable, "connection is not open");
  const OpenConnection& conn = it->second;
  const Binding* binding = FindBinding(conn.host, conn.port);
  if (!binding || !Reachable(conn.host, *binding))
    throw Error(Errc::kUnreachable, "service went away");
  std::string response =
      binding->handlers.on_request(connection, node(conn.client), request);
  exchanges_.push_back(Frame{next_seq_++, connection, conn.client, conn.host,
                             conn.port, conn.scope, binding->encrypted,
                             request, response});
  return response;
}

void Network::Post(const std::string& actor, const std::string& to_node,
                   std::string payload) {
  Node* to = FindNode(to_node);
  if (!to)
    throw Error(Errc::kUnreachable, "no node " + to_node);
  ScopeBetween(actor, to->host);
  to->inbox.push_back(Message{next_seq_++, actor, std::move(payload)});
}

std::vector<Frame> Network::Sniff(const std::string& adversary, Scope scope) {
  const Node& sniffer = node(adversary);
  if (sniffer.kind != NodeKind::kIntranetHost || scope != Scope::kIntranet)
    throw Error(Errc::kNotPermitted, adversary + " cannot sniff " +
                                         std::string(ScopeName(scope)));
  std::vector<Frame> captured;
  for (const Frame& frame : exchanges_) {
    if (frame.scope != Scope::kIntranet)
      continue;
    Frame copy = frame;
    if (copy.encrypted) {
      copy.request = Opaque(frame.request);
      copy.response = Opaque(frame.response);
    }
    captured.push_back(std::move(copy));
  }
  trace_.Record({"sniff", adversary, "", std::to_string(captured.size()) +
                                             " frames"});
  return captured;
}

std::string Network::DumpCapture(const std::vector<Frame>& frames) {
  std::string out;
  for (const Frame& f : frames) {
    out += std::to_string(f.seq) + '\t' + f.client + '\t' + f.host + ':' +
           std::to_string(f.port) + '\t' + std::string(ScopeName(f.scope)) +
           '\t' + (f.encrypted ? "encrypted" : "plain") + '\t' +
           codec::Base64Encode(f.request) + '\t' +
           codec::Base64Encode(f.response) + '\n';
  }
  return out;
}

Delivery Network::Deliver(const std::string& adversary,
                          const std::string& victim, AttackVector vector,
                          const DeliveryPolicy& policy) {
  const Node& from = node(adversary);
  const Node& to = node(victim);
  std::string label(VectorKindName(vector.kind));
  if (vector.kind == VectorKind::kOpenWith && from.host != to.host) {
    throw Error(Errc::kNotPermitted,
                "open_with needs an app on the victim's device");
  }
  if (vector.kind != VectorKind::kWebPage && IsHtmlName(vector.file_name) &&
      !policy.accepts_html) {
    throw Error(Errc::kChannelRefused, victim + " refuses HTML files");
  }

  Delivery delivery;
  delivery.seq = next_seq_++;
  delivery.from = adversary;
  delivery.victim = victim;
  delivery.outcome = vector.kind == VectorKind::kWebPage ||
                             policy.file_opening == FileOpening::kInApp
                         ? DeliveryOutcome::kOpenInApp
                         : DeliveryOutcome::kHandedToDedicatedApp;
  delivery.vector = std::move(vector);
  std::string target = delivery.vector.kind == VectorKind::kWebPage
                           ? delivery.vector.url
                           : delivery.vector.file_name;
  trace_.Record({"deliver", adversary, target,
                 label + (delivery.outcome == DeliveryOutcome::kOpenInApp
                              ? " in-app"
                              : " dedicated-app")});
  pending_[victim].push_back(delivery);
  return delivery;
}

std::optional<Delivery> Network::TakeDelivery(const std::string& victim) {
  auto it = pending_.find(victim);
  if (it == pending_.end() || it->second.empty())
    return std::nullopt;
  Delivery d = std::move(it->second.front());
  it->second.pop_front();
  return d;
}

}  // namespace ifl::net
